//! Verification suites behind `telescoping verify`.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::Serialize;

use crate::calculus::{
    compose_recipe, luttinger_surgery, generating_curves, ExponentConvention, FamilyRecipe, Registry,
    SurgerySpec, TorusId,
};
use crate::geography::{betti_from_char, char_from_es, cross_check, es_from_char, prop14_betti, theorem1_point};
use crate::group::AbelianInvariants;
use crate::homeo::{hk_applicable, hk_table, is_odd_prime};

/// Parameters shared by every command.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub registry: Option<PathBuf>,
    pub n_max: u32,
    pub m_max: u32,
    pub g_max: u32,
    pub primes: Vec<u32>,
    pub csv: Option<PathBuf>,
    pub svg: Option<PathBuf>,
    pub catalog: Option<PathBuf>,
    pub convention: ExponentConvention,
    pub override_hk: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            registry: None,
            n_max: 10,
            m_max: 10,
            g_max: 5,
            primes: (3..=47).filter(|&p| is_odd_prime(p)).collect(),
            csv: None,
            svg: None,
            catalog: None,
            convention: ExponentConvention::KillXp,
            override_hk: false,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), String> {
        if self.n_max == 0 || self.m_max == 0 {
            return Err("n-max and m-max must be at least 1".into());
        }
        if self.primes.is_empty() {
            return Err("prime list is empty".into());
        }
        if let Some(p) = self.primes.iter().find(|&&p| !is_odd_prime(p)) {
            return Err(format!("{p} is not an odd prime"));
        }
        Ok(())
    }

    pub fn load_registry(&self) -> Result<Registry, crate::calculus::CalculusError> {
        match &self.registry {
            Some(path) => Registry::load(path),
            None => Ok(Registry::builtin()),
        }
    }

    pub fn recipes(&self) -> Vec<FamilyRecipe> {
        FamilyRecipe::all_within(self.n_max, self.m_max, self.g_max)
    }
}

/// Parses `3,5,7` or an inclusive range `3..47` (odd primes in range).
pub fn parse_primes(text: &str) -> Result<Vec<u32>, String> {
    if let Some((lo, hi)) = text.split_once("..") {
        let lo: u32 = lo.trim().parse().map_err(|e| format!("bad range start {lo:?}: {e}"))?;
        let hi: u32 = hi.trim().parse().map_err(|e| format!("bad range end {hi:?}: {e}"))?;
        return Ok((lo..=hi).filter(|&p| is_odd_prime(p)).collect());
    }
    text.split(',')
        .map(|s| s.trim().parse::<u32>().map_err(|e| format!("bad prime {s:?}: {e}")))
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scope {
    Theorem1,
    Prop14,
    Pi1,
    Hk,
    All,
}

impl FromStr for Scope {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "theorem1" => Ok(Scope::Theorem1),
            "prop14" => Ok(Scope::Prop14),
            "pi1" => Ok(Scope::Pi1),
            "hk" => Ok(Scope::Hk),
            "all" => Ok(Scope::All),
            other => Err(format!("unknown scope {other:?} (theorem1, prop14, pi1, hk, all)")),
        }
    }
}

impl fmt::Display for Scope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scope::Theorem1 => "theorem1",
            Scope::Prop14 => "prop14",
            Scope::Pi1 => "pi1",
            Scope::Hk => "hk",
            Scope::All => "all",
        })
    }
}

/// One checked identity; serialized as a line of the NDJSON report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckRecord {
    pub scope: &'static str,
    pub subject: String,
    pub identity: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report {
    pub records: Vec<CheckRecord>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.records.iter().all(|r| r.passed)
    }

    pub fn first_failure(&self) -> Option<&CheckRecord> {
        self.records.iter().find(|r| !r.passed)
    }

    pub fn failure_count(&self) -> usize {
        self.records.iter().filter(|r| !r.passed).count()
    }

    pub fn to_ndjson(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            out.push_str(&serde_json::to_string(r).expect("record serializes"));
            out.push('\n');
        }
        out
    }
}

fn record(scope: &'static str, r: &FamilyRecipe, identity: &str, passed: bool, detail: String) -> CheckRecord {
    CheckRecord {
        scope,
        subject: format!("{} [{r}]", r.family_label()),
        identity: identity.to_string(),
        passed,
        detail,
    }
}

/// Registry fold against the `(c, χ)` and `(e, σ)` closed formulas.
pub fn verify_theorem1(registry: &Registry, cfg: &RunConfig) -> Vec<CheckRecord> {
    cfg.recipes()
        .iter()
        .map(|r| {
            let x = cross_check(registry, r);
            let composed_ok = x.failures.iter().all(|f| !f.starts_with("compose"))
                && x.composed.is_some_and(|cn| (cn.c1sq, cn.chi_h) == x.char_point && (cn.e, cn.sigma) == x.es_formula);
            record(
                "theorem1",
                r,
                "char_from_es(compose_recipe(r)) == closed (c, chi) and (e, sigma)",
                composed_ok,
                match x.composed {
                    Some(cn) => format!("composed (c, chi) = ({}, {}), formula {:?}", cn.c1sq, cn.chi_h, x.char_point),
                    None => x.failures.join("; "),
                },
            )
        })
        .collect()
}

/// Betti split of the `(c, χ)` point against the `(b2+, b2−)` formula.
pub fn verify_prop14(cfg: &RunConfig) -> Vec<CheckRecord> {
    cfg.recipes()
        .iter()
        .map(|r| {
            let (c, chi) = theorem1_point(r);
            let (e, sigma) = es_from_char(c, chi);
            let derived = char_from_es(e, sigma).and_then(|cn| betti_from_char(&cn, 0));
            let formula = prop14_betti(r);
            let (passed, detail) = match derived {
                Ok(b) => (
                    b == formula && sigma < 0,
                    format!(
                        "derived ({}, {}), formula ({}, {}), sigma {sigma}",
                        b.b2_plus, b.b2_minus, formula.b2_plus, formula.b2_minus
                    ),
                ),
                Err(e) => (false, e.to_string()),
            };
            record("prop14", r, "betti_from_char(point, b1 = 0) == closed (b2+, b2-)", passed, detail)
        })
        .collect()
}

/// Two-surgery pipeline over every recipe and prime pair. One record per
/// recipe summarising all pairs; the first failing pair is reported.
pub fn verify_pi1(registry: &Registry, cfg: &RunConfig) -> Vec<CheckRecord> {
    let mut out = Vec::new();
    for r in cfg.recipes() {
        let result = (|| -> Result<usize, String> {
            let t = compose_recipe(registry, &r).map_err(|e| e.to_string())?;
            let (c1, c2) = generating_curves(&t).map_err(|e| e.to_string())?;
            let mut checked = 0;
            for &p in &cfg.primes {
                let y1 = luttinger_surgery(&t, &SurgerySpec::luttinger(TorusId::T1, c1, i64::from(p)))
                    .map_err(|e| e.to_string())?;
                let want1 = AbelianInvariants::from_cyclic_orders(1, &[u64::from(p)]);
                if !y1.is_certified_abelian() || y1.invariants() != want1 {
                    return Err(format!("p = {p}: first surgery gives {}", y1.invariants()));
                }
                for &q in &cfg.primes {
                    let y2 = luttinger_surgery(&y1, &SurgerySpec::luttinger(TorusId::T2, c2, i64::from(q)))
                        .map_err(|e| e.to_string())?;
                    let want2 = AbelianInvariants::from_cyclic_orders(0, &[u64::from(q), u64::from(p)]);
                    if !y2.is_certified_abelian() || y2.invariants() != want2 {
                        return Err(format!("p = {p}, q = {q}: second surgery gives {}", y2.invariants()));
                    }
                    checked += 1;
                }
            }
            Ok(checked)
        })();
        let (passed, detail) = match result {
            Ok(n) => (true, format!("{n} prime pairs")),
            Err(e) => (false, e),
        };
        out.push(record("pi1", &r, "pi1(Y1) = Z + Z_p and pi1(Y2) = Z_q + Z_p, certified", passed, detail));
    }
    out
}

/// Threshold table per family plus agreement of the criterion through both
/// Betti routes.
pub fn verify_hk(cfg: &RunConfig) -> Vec<CheckRecord> {
    let mut out = Vec::new();
    for s in hk_table(cfg.g_max) {
        let subject = match s.g {
            Some(g) => format!("family {} g={g}", s.k),
            None => format!("family {}", s.k),
        };
        let detail = match (&s.found, s.boundary.last()) {
            (Some(r), Some(row)) => format!("minimal {r}: b2 - |sigma| = {} > {}", row.margin, row.threshold),
            _ => "no parameters within the search limit".to_string(),
        };
        out.push(CheckRecord {
            scope: "hk",
            subject,
            identity: "min_parameters threshold found".into(),
            passed: s.found.is_some(),
            detail,
        });
    }
    for r in cfg.recipes() {
        let b = prop14_betti(&r);
        let via_formula = hk_applicable(b.b2(), b.sigma(), false, 1);
        let (c, chi) = theorem1_point(&r);
        let (e, sigma) = es_from_char(c, chi);
        let via_point = char_from_es(e, sigma)
            .and_then(|cn| betti_from_char(&cn, 0))
            .map(|d| hk_applicable(d.b2(), d.sigma(), false, 1));
        let passed = via_point == Ok(via_formula);
        out.push(record(
            "hk",
            &r,
            "hk(closed betti) == hk(betti_from_char(point))",
            passed,
            format!("applicable = {via_formula}"),
        ));
    }
    out
}

pub fn run(scope: Scope, registry: &Registry, cfg: &RunConfig) -> Report {
    let mut records = Vec::new();
    if matches!(scope, Scope::Theorem1 | Scope::All) {
        records.extend(verify_theorem1(registry, cfg));
    }
    if matches!(scope, Scope::Prop14 | Scope::All) {
        records.extend(verify_prop14(cfg));
    }
    if matches!(scope, Scope::Pi1 | Scope::All) {
        records.extend(verify_pi1(registry, cfg));
    }
    if matches!(scope, Scope::Hk | Scope::All) {
        records.extend(verify_hk(cfg));
    }
    Report { records }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> RunConfig {
        RunConfig {
            n_max: 2,
            m_max: 2,
            g_max: 1,
            primes: vec![3, 5],
            ..RunConfig::default()
        }
    }

    #[test]
    fn defaults() {
        let cfg = RunConfig::default();
        assert_eq!((cfg.n_max, cfg.m_max, cfg.g_max), (10, 10, 5));
        assert_eq!(cfg.primes.first(), Some(&3));
        assert_eq!(cfg.primes.last(), Some(&47));
        assert!(cfg.validate().is_ok());
    }

    #[test]
    fn prime_lists() {
        assert_eq!(parse_primes("3,5, 7").unwrap(), vec![3, 5, 7]);
        assert_eq!(parse_primes("3..13").unwrap(), vec![3, 5, 7, 11, 13]);
        assert!(parse_primes("3,x").is_err());
        let bad = RunConfig {
            primes: vec![3, 9],
            ..RunConfig::default()
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn all_scopes_pass_on_small_bounds() {
        let report = run(Scope::All, &Registry::builtin(), &small());
        assert!(report.passed(), "{:?}", report.first_failure());
        assert!(report.to_ndjson().lines().count() == report.records.len());
    }
}
