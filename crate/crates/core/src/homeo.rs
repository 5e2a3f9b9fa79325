//! Topological prototypes and the Hambleton–Kreck homeomorphism criterion
//! for `π1 = Z_p ⊕ Z_p`.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::calculus::{FamilyRecipe, ManifoldState, FAMILY_COUNT};
use crate::geography::prop14_betti;
use crate::group::{AbelianInvariants, Presentation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HomeoError {
    #[error("{0} is not an odd prime")]
    NotOddPrime(u32),
    #[error("fundamental group is {found}, expected {expected}")]
    GroupMismatch { found: String, expected: String },
    #[error("the prototype family is non-spin; the state is spin")]
    Spin,
    #[error("no prototype has e = {e}, sigma = {sigma}")]
    NoPrototype { e: i64, sigma: i64 },
    #[error("invalid family: {0}")]
    Family(String),
}

pub fn is_odd_prime(p: u32) -> bool {
    p >= 3 && p % 2 == 1 && (3..).step_by(2).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

/// `Z_p ⊕ Z_p` with `d(π) = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FiniteGroupSpec {
    p: u32,
}

impl FiniteGroupSpec {
    pub fn new(p: u32) -> Result<Self, HomeoError> {
        if is_odd_prime(p) {
            Ok(FiniteGroupSpec { p })
        } else {
            Err(HomeoError::NotOddPrime(p))
        }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn d_pi(&self) -> u32 {
        1
    }

    /// `<x, y | x^p, y^p, [x,y]>`
    pub fn presentation(&self) -> Presentation {
        Presentation::parse(&["x", "y"], &[&format!("x^{}", self.p), &format!("y^{}", self.p), "[x,y]"])
            .expect("static presentation")
    }

    pub fn invariants(&self) -> AbelianInvariants {
        AbelianInvariants::from_cyclic_orders(0, &[u64::from(self.p), u64::from(self.p)])
    }
}

/// Euler characteristic `1 − #generators + #relators` of the presentation
/// 2-complex.
///
/// ```
/// use telescoping::group::Presentation;
/// use telescoping::homeo::presentation_euler_char;
/// let p = Presentation::parse(&["x", "y"], &["x^3", "y^3", "[x,y]"]).unwrap();
/// assert_eq!(presentation_euler_char(&p), 2);
/// ```
pub fn presentation_euler_char(p: &Presentation) -> i64 {
    1 - p.generator_count() as i64 + p.relator_count() as i64
}

/// Upper bound `χ(K) − 1` on `d(π)` from a presentation complex `K`.
pub fn d_pi_upper_bound(p: &Presentation) -> i64 {
    presentation_euler_char(p) - 1
}

/// `b2 − |σ| > 2 d(π)` for spin, `> 2 d(π) + 2` otherwise.
pub fn hk_applicable(b2: i64, sigma: i64, spin: bool, d_pi: u32) -> bool {
    let threshold = 2 * i64::from(d_pi) + if spin { 0 } else { 2 };
    b2 - sigma.abs() > threshold
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FormType {
    #[serde(rename = "even")]
    Even,
    #[serde(rename = "odd")]
    Odd,
}

/// The invariant tuple the criterion classifies by.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomeoInvariants {
    pub e: i64,
    pub sigma: i64,
    pub form_type: FormType,
    pub ks: u8,
    pub pi1: AbelianInvariants,
}

impl HomeoInvariants {
    /// Type is carried by the spin flag; Kirby–Siebenmann vanishes for
    /// every smooth state.
    pub fn of_state(state: &ManifoldState) -> Self {
        HomeoInvariants {
            e: state.e,
            sigma: state.sigma,
            form_type: if state.spin { FormType::Even } else { FormType::Odd },
            ks: 0,
            pi1: state.invariants(),
        }
    }
}

/// `b2+ CP² # b2− CP²-bar # (surgered L(p,1) × S¹)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PrototypeSpec {
    pub b2_plus: i64,
    pub b2_minus: i64,
    pub p: u32,
}

impl PrototypeSpec {
    /// The surgered core contributes `(e, σ) = (2, 0)`.
    pub fn e(&self) -> i64 {
        2 + self.b2_plus + self.b2_minus
    }

    pub fn sigma(&self) -> i64 {
        self.b2_plus - self.b2_minus
    }

    pub fn invariants(&self) -> HomeoInvariants {
        HomeoInvariants {
            e: self.e(),
            sigma: self.sigma(),
            form_type: FormType::Odd,
            ks: 0,
            pi1: AbelianInvariants::from_cyclic_orders(0, &[u64::from(self.p), u64::from(self.p)]),
        }
    }
}

impl fmt::Display for PrototypeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}CP2 # {}CP2bar # L(p,1)xS1~ (p = {})",
            self.b2_plus, self.b2_minus, self.p
        )
    }
}

/// The prototype with the given `(e, σ)` over `Z_p ⊕ Z_p`.
pub fn prototype_from(e: i64, sigma: i64, spin: bool, pi1: &AbelianInvariants, p: u32) -> Result<PrototypeSpec, HomeoError> {
    let group = FiniteGroupSpec::new(p)?;
    if *pi1 != group.invariants() {
        return Err(HomeoError::GroupMismatch {
            found: pi1.to_string(),
            expected: group.invariants().to_string(),
        });
    }
    if spin {
        return Err(HomeoError::Spin);
    }
    let b2 = e - 2;
    if (b2 + sigma).rem_euclid(2) != 0 || b2 < sigma.abs() {
        return Err(HomeoError::NoPrototype { e, sigma });
    }
    Ok(PrototypeSpec {
        b2_plus: (b2 + sigma) / 2,
        b2_minus: (b2 - sigma) / 2,
        p,
    })
}

/// The prototype matching a manufactured state. The state's group must be
/// certified `Z_p ⊕ Z_p`.
pub fn prototype_for(state: &ManifoldState, p: u32) -> Result<PrototypeSpec, HomeoError> {
    if !state.is_certified_abelian() {
        return Err(HomeoError::GroupMismatch {
            found: format!("{} (not certified abelian)", state.invariants()),
            expected: format!("Z_{p} + Z_{p}"),
        });
    }
    prototype_from(state.e, state.sigma, state.spin, &state.invariants(), p)
}

/// One examined parameter pair of a threshold search.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HkRow {
    pub n: u32,
    pub m: Option<u32>,
    pub b2: i64,
    pub sigma: i64,
    pub margin: i64,
    pub threshold: i64,
    pub ok: bool,
}

/// Result of [`min_parameters`]: every pair examined, in search order, up to
/// and including the first that passes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HkSearch {
    pub k: u8,
    pub g: Option<u32>,
    pub found: Option<FamilyRecipe>,
    pub boundary: Vec<HkRow>,
}

/// Largest `n + m` examined before giving up.
pub const HK_SEARCH_LIMIT: u32 = 64;

/// Smallest `(n, m)`, by `n + m` then lexicographically, at which the
/// non-spin criterion with `d(π) = 1` holds for the family's Betti numbers.
pub fn min_parameters(k: u8, g: Option<u32>) -> Result<HkSearch, HomeoError> {
    let probe = FamilyRecipe::lenient(k, 1, 1, g.unwrap_or(0)).map_err(|e| HomeoError::Family(e.to_string()))?;
    if k == 0 || k > FAMILY_COUNT || probe.uses_genus() != g.is_some() {
        return Err(HomeoError::Family(format!("family {k} with g = {g:?}")));
    }
    let d_pi = 1;
    let threshold = 2 * i64::from(d_pi) + 2;
    let mut boundary = Vec::new();
    for size in 1..=HK_SEARCH_LIMIT {
        let pairs: Vec<(u32, Option<u32>)> = if probe.is_two_block() {
            (1..size).map(|n| (n, Some(size - n))).collect()
        } else {
            vec![(size, None)]
        };
        for (n, m) in pairs {
            let r = FamilyRecipe::new(k, n, m, g).map_err(|e| HomeoError::Family(e.to_string()))?;
            let b = prop14_betti(&r);
            let (b2, sigma) = (b.b2(), b.sigma());
            let ok = hk_applicable(b2, sigma, false, d_pi);
            boundary.push(HkRow {
                n,
                m,
                b2,
                sigma,
                margin: b2 - sigma.abs(),
                threshold,
                ok,
            });
            if ok {
                return Ok(HkSearch {
                    k,
                    g,
                    found: Some(r),
                    boundary,
                });
            }
        }
    }
    Ok(HkSearch {
        k,
        g,
        found: None,
        boundary,
    })
}

/// Threshold searches for every family, with `g` ranging over `0..=g_max`
/// for the families that take it.
pub fn hk_table(g_max: u32) -> Vec<HkSearch> {
    let mut out = Vec::new();
    for k in 1..=FAMILY_COUNT {
        let probe = FamilyRecipe::lenient(k, 1, 1, 0).expect("valid family");
        let gs: Vec<Option<u32>> = if probe.uses_genus() {
            (0..=g_max).map(Some).collect()
        } else {
            vec![None]
        };
        for g in gs {
            out.push(min_parameters(k, g).expect("valid family"));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::{botany_family_member, botany_seed, compose_recipe, ExponentConvention, Registry};

    #[test]
    fn euler_characteristics() {
        assert_eq!(presentation_euler_char(&FiniteGroupSpec::new(5).unwrap().presentation()), 2);
        assert_eq!(presentation_euler_char(&Presentation::free(&["x"]).unwrap()), 0);
        let z2 = Presentation::parse(&["t1", "t2"], &["[t1,t2]"]).unwrap();
        assert_eq!(presentation_euler_char(&z2), 0);
        assert_eq!(d_pi_upper_bound(&FiniteGroupSpec::new(3).unwrap().presentation()), 1);
    }

    #[test]
    fn hk_examples() {
        assert!(hk_applicable(8, -2, false, 1));
        assert!(!hk_applicable(3, -1, false, 1));
        assert!(hk_applicable(5, -1, true, 1));
    }

    #[test]
    fn odd_primes() {
        let primes: Vec<u32> = (0..50).filter(|&p| is_odd_prime(p)).collect();
        assert_eq!(primes, [3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47]);
        assert!(FiniteGroupSpec::new(2).is_err());
        assert!(FiniteGroupSpec::new(9).is_err());
    }

    fn member(r: FamilyRecipe, p: u32) -> ManifoldState {
        let t = compose_recipe(&Registry::builtin(), &r).unwrap();
        let x0 = botany_seed(&t, i64::from(p)).unwrap();
        botany_family_member(&x0, 1, p, ExponentConvention::KillXp).unwrap()
    }

    #[test]
    fn prototype_examples() {
        let x = member(FamilyRecipe::new(1, 2, None, None).unwrap(), 3);
        let proto = prototype_for(&x, 3).unwrap();
        assert_eq!((proto.b2_plus, proto.b2_minus), (3, 5));
        assert_eq!(proto.invariants(), HomeoInvariants::of_state(&x));

        let x = member(FamilyRecipe::new(5, 1, None, Some(0)).unwrap(), 5);
        let proto = prototype_for(&x, 5).unwrap();
        assert_eq!((proto.b2_plus, proto.b2_minus), (1, 3));

        let core = prototype_from(2, 0, false, &FiniteGroupSpec::new(7).unwrap().invariants(), 7).unwrap();
        assert_eq!((core.b2_plus, core.b2_minus, core.e(), core.sigma()), (0, 0, 2, 0));
    }

    #[test]
    fn prototype_errors() {
        let x = member(FamilyRecipe::new(1, 2, None, None).unwrap(), 3);
        assert!(matches!(prototype_for(&x, 5), Err(HomeoError::GroupMismatch { .. })));
        let mut spin = x.clone();
        spin.spin = true;
        assert_eq!(prototype_for(&spin, 3), Err(HomeoError::Spin));
    }

    #[test]
    fn threshold_searches() {
        let s = min_parameters(1, None).unwrap();
        assert_eq!(s.found, FamilyRecipe::new(1, 2, None, None).ok());
        assert_eq!(s.boundary.len(), 2);
        assert_eq!((s.boundary[1].margin, s.boundary[0].margin), (6, 2));

        let s = min_parameters(5, Some(1)).unwrap();
        assert_eq!(s.found, FamilyRecipe::new(5, 1, None, Some(1)).ok());

        let s = min_parameters(7, None).unwrap();
        assert_eq!(s.found, FamilyRecipe::new(7, 1, Some(1), None).ok());
        assert!(min_parameters(5, None).is_err());
        assert!(min_parameters(1, Some(0)).is_err());
    }
}
