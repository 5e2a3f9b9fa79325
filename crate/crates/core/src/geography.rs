//! Characteristic numbers and the geography tables.
//!
//! The closed formulas of the fifteen families are kept as three separate
//! coefficient tables: `(c, χ)`, `(e, σ)` and `(b2+, b2−)`. None is derived
//! from another, so [`cross_check`] compares three independent sources
//! against the registry fold.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::calculus::{compose_recipe, FamilyRecipe, Registry, FAMILY_COUNT};
use crate::group::{abelian_invariants, Presentation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeographyError {
    #[error("e + sigma = {0} is not divisible by 4, so chi_h is not an integer")]
    NonIntegralChi(i64),
    #[error("inconsistent Betti numbers: {0}")]
    InconsistentBetti(String),
    #[error("integer overflow in {0}")]
    Overflow(&'static str),
}

/// `(e, σ)` together with `c1² = 2e + 3σ` and `χ_h = (e + σ)/4`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CharNumbers {
    pub e: i64,
    pub sigma: i64,
    pub c1sq: i64,
    pub chi_h: i64,
}

/// ```
/// use telescoping::geography::{char_from_es, es_from_char};
/// let cn = char_from_es(5, -1).unwrap();
/// assert_eq!((cn.c1sq, cn.chi_h), (7, 1));
/// assert_eq!(es_from_char(7, 1), (5, -1));
/// ```
pub fn char_from_es(e: i64, sigma: i64) -> Result<CharNumbers, GeographyError> {
    let sum = e.checked_add(sigma).ok_or(GeographyError::Overflow("e + sigma"))?;
    if sum.rem_euclid(4) != 0 {
        return Err(GeographyError::NonIntegralChi(sum));
    }
    let c1sq = e
        .checked_mul(2)
        .zip(sigma.checked_mul(3))
        .and_then(|(a, b)| a.checked_add(b))
        .ok_or(GeographyError::Overflow("2e + 3 sigma"))?;
    Ok(CharNumbers {
        e,
        sigma,
        c1sq,
        chi_h: sum / 4,
    })
}

/// Inverse of [`char_from_es`]: `e = 12χ − c`, `σ = c − 8χ`.
pub fn es_from_char(c: i64, chi: i64) -> (i64, i64) {
    (12 * chi - c, c - 8 * chi)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BettiPair {
    pub b1: u32,
    pub b2_plus: i64,
    pub b2_minus: i64,
}

impl BettiPair {
    pub fn b2(&self) -> i64 {
        self.b2_plus + self.b2_minus
    }

    pub fn e(&self) -> i64 {
        2 - 2 * i64::from(self.b1) + self.b2()
    }

    pub fn sigma(&self) -> i64 {
        self.b2_plus - self.b2_minus
    }
}

/// Splits `b2 = e − 2 + 2 b1` by the signature.
pub fn betti_from_char(cn: &CharNumbers, b1: u32) -> Result<BettiPair, GeographyError> {
    betti_from_es(cn.e, cn.sigma, b1)
}

/// As [`betti_from_char`], without requiring `e + σ ≡ 0 mod 4`; the bare
/// prototype core `(e, σ) = (2, 0)` is such a case.
pub fn betti_from_es(e: i64, sigma: i64, b1: u32) -> Result<BettiPair, GeographyError> {
    let b2 = e - 2 + 2 * i64::from(b1);
    if (b2 + sigma).rem_euclid(2) != 0 {
        return Err(GeographyError::InconsistentBetti(format!(
            "b2 = {b2} and sigma = {sigma} have different parity"
        )));
    }
    let pair = BettiPair {
        b1,
        b2_plus: (b2 + sigma) / 2,
        b2_minus: (b2 - sigma) / 2,
    };
    if pair.b2_plus < 0 || pair.b2_minus < 0 {
        return Err(GeographyError::InconsistentBetti(format!(
            "negative split ({}, {}) for e = {e}, sigma = {sigma}, b1 = {b1}",
            pair.b2_plus, pair.b2_minus
        )));
    }
    Ok(pair)
}

/// `base + per_g · g`
#[derive(Clone, Copy, Debug)]
struct Coef {
    base: i64,
    per_g: i64,
}

const fn k(base: i64) -> Coef {
    Coef { base, per_g: 0 }
}

const fn kg(base: i64, per_g: i64) -> Coef {
    Coef { base, per_g }
}

/// `n · coef_n + m · coef_m + constant`
#[derive(Clone, Copy, Debug)]
struct Linear {
    n: Coef,
    m: Coef,
    constant: i64,
}

const fn lin(n: Coef, m: Coef) -> Linear {
    Linear { n, m, constant: 0 }
}

const fn lin1(n: Coef, m: Coef) -> Linear {
    Linear { n, m, constant: -1 }
}

impl Linear {
    fn eval(&self, r: &FamilyRecipe) -> i64 {
        let g = i64::from(r.g().unwrap_or(0));
        let n = i64::from(r.n());
        let m = i64::from(r.m().unwrap_or(0));
        n * (self.n.base + self.n.per_g * g) + m * (self.m.base + self.m.per_g * g) + self.constant
    }
}

const Z: Coef = k(0);
const B: Coef = kg(6, 8);
const BX: Coef = kg(1, 1);

/// `(c, χ)` per family.
const CHAR_TABLE: [[Linear; 2]; FAMILY_COUNT as usize] = [
    [lin(k(7), Z), lin(k(1), Z)],
    [lin(k(5), Z), lin(k(1), Z)],
    [lin(k(4), Z), lin(k(1), Z)],
    [lin(k(2), Z), lin(k(1), Z)],
    [lin(B, Z), lin(BX, Z)],
    [lin(k(7), B), lin(k(1), BX)],
    [lin(k(7), k(5)), lin(k(1), k(1))],
    [lin(k(7), k(4)), lin(k(1), k(1))],
    [lin(k(7), k(2)), lin(k(1), k(1))],
    [lin(B, k(5)), lin(BX, k(1))],
    [lin(B, k(4)), lin(BX, k(1))],
    [lin(B, k(2)), lin(BX, k(1))],
    [lin(k(5), k(4)), lin(k(1), k(1))],
    [lin(k(5), k(2)), lin(k(1), k(1))],
    [lin(k(4), k(2)), lin(k(1), k(1))],
];

/// `(e, σ)` per family.
const ES_TABLE: [[Linear; 2]; FAMILY_COUNT as usize] = [
    [lin(k(5), Z), lin(k(-1), Z)],
    [lin(k(7), Z), lin(k(-3), Z)],
    [lin(k(8), Z), lin(k(-4), Z)],
    [lin(k(10), Z), lin(k(-6), Z)],
    [lin(kg(6, 4), Z), lin(k(-2), Z)],
    [lin(k(5), kg(6, 4)), lin(k(-1), k(-2))],
    [lin(k(5), k(7)), lin(k(-1), k(-3))],
    [lin(k(5), k(8)), lin(k(-1), k(-4))],
    [lin(k(5), k(10)), lin(k(-1), k(-6))],
    [lin(kg(6, 4), k(7)), lin(k(-2), k(-3))],
    [lin(kg(6, 4), k(8)), lin(k(-2), k(-4))],
    [lin(kg(6, 4), k(10)), lin(k(-2), k(-6))],
    [lin(k(7), k(8)), lin(k(-3), k(-4))],
    [lin(k(7), k(10)), lin(k(-3), k(-6))],
    [lin(k(8), k(10)), lin(k(-4), k(-6))],
];

/// `(b2+, b2−)` per family, for `b1 = 0`.
const BETTI_TABLE: [[Linear; 2]; FAMILY_COUNT as usize] = [
    [lin1(k(2), Z), lin1(k(3), Z)],
    [lin1(k(2), Z), lin1(k(5), Z)],
    [lin1(k(2), Z), lin1(k(6), Z)],
    [lin1(k(2), Z), lin1(k(8), Z)],
    [lin1(kg(2, 2), Z), lin1(kg(4, 2), Z)],
    [lin1(k(2), kg(2, 2)), lin1(k(3), kg(4, 2))],
    [lin1(k(2), k(2)), lin1(k(3), k(5))],
    [lin1(k(2), k(2)), lin1(k(3), k(6))],
    [lin1(k(2), k(2)), lin1(k(3), k(8))],
    [lin1(kg(2, 2), k(2)), lin1(kg(4, 2), k(5))],
    [lin1(kg(2, 2), k(2)), lin1(kg(4, 2), k(6))],
    [lin1(kg(2, 2), k(2)), lin1(kg(4, 2), k(8))],
    [lin1(k(2), k(2)), lin1(k(5), k(6))],
    [lin1(k(2), k(2)), lin1(k(5), k(8))],
    [lin1(k(2), k(2)), lin1(k(6), k(8))],
];

fn row(table: &[[Linear; 2]; FAMILY_COUNT as usize], r: &FamilyRecipe) -> (i64, i64) {
    let [a, b] = &table[usize::from(r.k()) - 1];
    (a.eval(r), b.eval(r))
}

/// The `(c, χ)` closed formula of the recipe's family.
pub fn theorem1_point(r: &FamilyRecipe) -> (i64, i64) {
    row(&CHAR_TABLE, r)
}

/// The `(e, σ)` closed formula of the recipe's family.
pub fn family_es(r: &FamilyRecipe) -> (i64, i64) {
    row(&ES_TABLE, r)
}

/// The `(b2+, b2−)` closed formula of the recipe's family, with `b1 = 0`.
pub fn prop14_betti(r: &FamilyRecipe) -> BettiPair {
    let (b2_plus, b2_minus) = row(&BETTI_TABLE, r);
    BettiPair {
        b1: 0,
        b2_plus,
        b2_minus,
    }
}

/// Outcome of [`cross_check`]; `failures` is empty when everything agrees.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrossCheck {
    pub recipe: FamilyRecipe,
    pub composed: Option<CharNumbers>,
    pub char_point: (i64, i64),
    pub es_formula: (i64, i64),
    pub derived_betti: Option<BettiPair>,
    pub betti_formula: BettiPair,
    pub failures: Vec<String>,
}

impl CrossCheck {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Compares the registry fold with all three tables: the composed
/// characteristic numbers against the `(c, χ)` and `(e, σ)` formulas, the
/// Betti split of the `(c, χ)` point against the `(b2+, b2−)` formula, and
/// the sign of σ.
pub fn cross_check(registry: &Registry, r: &FamilyRecipe) -> CrossCheck {
    let char_point = theorem1_point(r);
    let es_formula = family_es(r);
    let betti_formula = prop14_betti(r);
    let mut failures = Vec::new();

    let composed = match compose_recipe(registry, r).map_err(|e| e.to_string()).and_then(|t| {
        char_from_es(t.e, t.sigma).map_err(|e| e.to_string())
    }) {
        Ok(cn) => Some(cn),
        Err(e) => {
            failures.push(format!("compose: {e}"));
            None
        }
    };
    if let Some(cn) = composed {
        if (cn.c1sq, cn.chi_h) != char_point {
            failures.push(format!(
                "composed (c, chi) = ({}, {}) but closed formula gives {char_point:?}",
                cn.c1sq, cn.chi_h
            ));
        }
        if (cn.e, cn.sigma) != es_formula {
            failures.push(format!(
                "composed (e, sigma) = ({}, {}) but closed formula gives {es_formula:?}",
                cn.e, cn.sigma
            ));
        }
    }

    let (e, sigma) = es_from_char(char_point.0, char_point.1);
    let derived_betti = match char_from_es(e, sigma).and_then(|cn| betti_from_char(&cn, 0)) {
        Ok(b) => Some(b),
        Err(err) => {
            failures.push(format!("betti split: {err}"));
            None
        }
    };
    if let Some(b) = derived_betti {
        if b != betti_formula {
            failures.push(format!(
                "derived (b2+, b2-) = ({}, {}) but closed formula gives ({}, {})",
                b.b2_plus, b.b2_minus, betti_formula.b2_plus, betti_formula.b2_minus
            ));
        }
    }
    if sigma >= 0 {
        failures.push(format!("signature {sigma} is not negative"));
    }

    CrossCheck {
        recipe: *r,
        composed,
        char_point,
        es_formula,
        derived_betti,
        betti_formula,
        failures,
    }
}

/// The fundamental groups the families are realized with.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum GroupTag {
    #[serde(rename = "Z+Z")]
    ZxZ,
    #[serde(rename = "Z+Z_p")]
    ZxZp,
    #[serde(rename = "Z_q+Z_p")]
    ZqxZp,
    #[serde(rename = "Z_p+Z_p")]
    ZpxZp,
}

impl GroupTag {
    pub const ALL: [GroupTag; 4] = [GroupTag::ZxZ, GroupTag::ZxZp, GroupTag::ZqxZp, GroupTag::ZpxZp];

    pub fn label(self) -> &'static str {
        match self {
            GroupTag::ZxZ => "Z+Z",
            GroupTag::ZxZp => "Z+Z_p",
            GroupTag::ZqxZp => "Z_q+Z_p",
            GroupTag::ZpxZp => "Z_p+Z_p",
        }
    }

    /// A presentation of the group for the given primes.
    pub fn representative(self, p: u32, q: u32) -> Presentation {
        let (gens, rels): (&[&str], Vec<String>) = match self {
            GroupTag::ZxZ => (&["t1", "t2"], vec!["[t1,t2]".into()]),
            GroupTag::ZxZp => (&["t1", "t2"], vec!["[t1,t2]".into(), format!("t2^{p}")]),
            GroupTag::ZqxZp => (
                &["t1", "t2"],
                vec!["[t1,t2]".into(), format!("t2^{p}"), format!("t1^{q}")],
            ),
            GroupTag::ZpxZp => (&["x", "y"], vec![format!("x^{p}"), format!("y^{p}"), "[x,y]".into()]),
        };
        let rels: Vec<&str> = rels.iter().map(String::as_str).collect();
        Presentation::parse(gens, &rels).expect("static presentation")
    }

    /// First Betti number: the free rank of the abelianization.
    pub fn b1(self) -> u32 {
        abelian_invariants(&self.representative(3, 5)).free_rank as u32
    }
}

impl fmt::Display for GroupTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GeographyPoint {
    pub c: i64,
    pub chi: i64,
    pub family: FamilyRecipe,
    pub group: GroupTag,
}

impl GeographyPoint {
    pub fn char_numbers(&self) -> CharNumbers {
        let (e, sigma) = es_from_char(self.c, self.chi);
        char_from_es(e, sigma).expect("e + sigma = 4 chi")
    }

    pub fn betti(&self) -> Result<BettiPair, GeographyError> {
        betti_from_char(&self.char_numbers(), self.group.b1())
    }

    fn sort_key(&self) -> (i64, i64, FamilyRecipe, GroupTag) {
        (self.chi, self.c, self.family, self.group)
    }
}

/// Every recipe within the bounds paired with every group tag, without
/// deduplication, in `(χ, c, k, n, m, g, group)` order.
pub fn all_points(n_max: u32, m_max: u32, g_max: u32) -> Vec<GeographyPoint> {
    let mut out: Vec<GeographyPoint> = FamilyRecipe::all_within(n_max, m_max, g_max)
        .into_iter()
        .flat_map(|r| {
            let (c, chi) = theorem1_point(&r);
            GroupTag::ALL.map(|group| GeographyPoint {
                c,
                chi,
                family: r,
                group,
            })
        })
        .collect();
    out.sort_by_key(GeographyPoint::sort_key);
    out
}

/// [`all_points`] deduplicated by `(c, χ, group)`, keeping the first recipe
/// in `(k, n, m, g)` order.
pub fn enumerate_points(n_max: u32, m_max: u32, g_max: u32) -> Vec<GeographyPoint> {
    let mut seen = BTreeSet::new();
    all_points(n_max, m_max, g_max)
        .into_iter()
        .filter(|p| seen.insert((p.c, p.chi, p.group)))
        .collect()
}
