use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::replay::Step;
use super::triple::{Curve, TelescopingTriple, TorusData, TorusId};
use super::CalculusError;
use crate::group::{
    abelian_invariants, is_certifiably_abelian, AbelianInvariants, AbelianMap, IntegerMatrix,
    Presentation,
};

/// A torus surgery: the relator `μ^k · c^p · c'^q` is adjoined, where `c`
/// is the chosen push-off of `torus` and `c'` the other one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SurgerySpec {
    pub torus: TorusId,
    pub curve: Curve,
    pub k: i64,
    pub p: i64,
    #[serde(default)]
    pub q: i64,
}

impl SurgerySpec {
    /// `+1/p` surgery along `curve`.
    pub fn luttinger(torus: TorusId, curve: Curve, p: i64) -> Self {
        SurgerySpec {
            torus,
            curve,
            k: 1,
            p,
            q: 0,
        }
    }
}

/// How the last surgery of a botany family member is written.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ExponentConvention {
    /// Adjoin the killed element `m^p` itself.
    #[default]
    #[serde(rename = "kill-xp")]
    KillXp,
    /// Adjoin `μ^n · m^p`.
    #[serde(rename = "mu-n-m-p")]
    MuNMP,
}

impl fmt::Display for ExponentConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ExponentConvention::KillXp => "kill-xp",
            ExponentConvention::MuNMP => "mu-n-m-p",
        })
    }
}

impl FromStr for ExponentConvention {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "kill-xp" => Ok(ExponentConvention::KillXp),
            "mu-n-m-p" => Ok(ExponentConvention::MuNMP),
            other => Err(format!("unknown exponent convention {other:?} (expected kill-xp or mu-n-m-p)")),
        }
    }
}

/// A closed manifold (or one with tori still awaiting surgery) as an exact
/// record. `(e, σ)` never change under torus surgery.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ManifoldState {
    pub name: String,
    pub e: i64,
    pub sigma: i64,
    pub pi1: Presentation,
    /// Tori that have not been surgered yet.
    pub tori: Vec<TorusData>,
    pub symplectic: bool,
    pub minimal: bool,
    pub spin: bool,
    pub provenance: Vec<Step>,
}

impl ManifoldState {
    pub fn torus(&self, id: TorusId) -> Option<&TorusData> {
        self.tori.iter().find(|t| t.id == id)
    }

    pub fn remaining_tori(&self) -> Vec<TorusId> {
        self.tori.iter().map(|t| t.id).collect()
    }

    pub fn invariants(&self) -> AbelianInvariants {
        abelian_invariants(&self.pi1)
    }

    /// Whether `π1` is certified abelian, so that [`Self::invariants`] is
    /// the group itself.
    pub fn is_certified_abelian(&self) -> bool {
        is_certifiably_abelian(&self.pi1)
    }
}

impl From<&TelescopingTriple> for ManifoldState {
    fn from(t: &TelescopingTriple) -> Self {
        ManifoldState {
            name: t.name.clone(),
            e: t.e,
            sigma: t.sigma,
            pi1: t.complement_pi1.clone(),
            tori: vec![t.t1.clone(), t.t2.clone()],
            symplectic: true,
            minimal: t.minimal,
            spin: t.spin,
            provenance: t.provenance.clone(),
        }
    }
}

impl From<TelescopingTriple> for ManifoldState {
    fn from(t: TelescopingTriple) -> Self {
        ManifoldState::from(&t)
    }
}

impl From<&ManifoldState> for ManifoldState {
    fn from(s: &ManifoldState) -> Self {
        s.clone()
    }
}

/// Adjoins `μ^k · c^p · c'^q` and consumes the torus.
///
/// The result stays symplectic only for `k = ±1`.
pub fn luttinger_surgery(
    x: impl Into<ManifoldState>,
    spec: &SurgerySpec,
) -> Result<ManifoldState, CalculusError> {
    let mut x = x.into();
    if spec.k == 0 && spec.p == 0 && spec.q == 0 {
        return Err(CalculusError::TrivialSurgery);
    }
    let pos = x
        .tori
        .iter()
        .position(|t| t.id == spec.torus)
        .ok_or(CalculusError::TorusConsumed(spec.torus))?;
    let torus = x.tori.remove(pos);
    let relator = &(&torus.meridian.pow(spec.k) * &torus.curve(spec.curve).pow(spec.p))
        * &torus.curve(spec.curve.other()).pow(spec.q);
    x.pi1 = x.pi1.adjoin_relator(&relator)?;
    x.symplectic = x.symplectic && spec.k.abs() == 1;
    x.provenance.push(Step::Surgery(*spec));
    Ok(x)
}

/// The first (T1, T2) push-off pair, in the order (l, m), (m, l), (m, m),
/// (l, l), whose abelian coordinates form a basis of the complement's `Z^2`.
/// The T1 curve is then primitive, so surgering it leaves a cyclic factor.
pub fn generating_curves(t: &TelescopingTriple) -> Result<(Curve, Curve), CalculusError> {
    let map = AbelianMap::new(&t.complement_pi1);
    for (c1, c2) in [
        (Curve::L, Curve::M),
        (Curve::M, Curve::L),
        (Curve::M, Curve::M),
        (Curve::L, Curve::L),
    ] {
        if is_basis(t, &map, (TorusId::T1, c1), (TorusId::T2, c2))? {
            return Ok((c1, c2));
        }
    }
    Err(CalculusError::Precondition(format!(
        "{}: no pair of push-offs generates H1 of the complement",
        t.name
    )))
}

fn is_basis(
    t: &TelescopingTriple,
    map: &AbelianMap,
    a: (TorusId, Curve),
    b: (TorusId, Curve),
) -> Result<bool, CalculusError> {
    let u = t.curve_coordinates(map, a.0, a.1)?;
    let v = t.curve_coordinates(map, b.0, b.1)?;
    Ok(IntegerMatrix::from_rows(2, &[u.to_vec(), v.to_vec()]).is_unimodular())
}

/// `+1/p` surgery on T1 then `+1/q` surgery on T2, each along the generating
/// curves of [`generating_curves`]. Returns `(Y1, Y2)` with `π1(Y1) = Z ⊕ Z_p`
/// and `π1(Y2) = Z_q ⊕ Z_p`.
pub fn surgery_pipeline(
    t: &TelescopingTriple,
    p: i64,
    q: i64,
) -> Result<(ManifoldState, ManifoldState), CalculusError> {
    let (c1, c2) = generating_curves(t)?;
    let y1 = luttinger_surgery(t, &SurgerySpec::luttinger(TorusId::T1, c1, p))?;
    let y2 = luttinger_surgery(&y1, &SurgerySpec::luttinger(TorusId::T2, c2, q))?;
    Ok((y1, y2))
}

/// The botany seed `X_0`: `+1/p` surgery on T2, leaving T1 for the family
/// surgery. T2 is surgered along `l` when `(m_T1, l_T2)` is a basis of the
/// complement's `Z^2`, otherwise along `m`.
pub fn botany_seed(t: &TelescopingTriple, p: i64) -> Result<ManifoldState, CalculusError> {
    let map = AbelianMap::new(&t.complement_pi1);
    let curve = [Curve::L, Curve::M]
        .into_iter()
        .find_map(|c| match is_basis(t, &map, (TorusId::T1, Curve::M), (TorusId::T2, c)) {
            Ok(true) => Some(Ok(c)),
            Ok(false) => None,
            Err(e) => Some(Err(e)),
        })
        .transpose()?
        .ok_or_else(|| {
            CalculusError::Precondition(format!("{}: m_T1 has no complementary T2 curve", t.name))
        })?;
    luttinger_surgery(t, &SurgerySpec::luttinger(TorusId::T2, curve, p))
}

/// The `n`-th member of the botany family over the seed `x0`: surgery on
/// the remaining torus T1 along `m` that kills `x^p`, with `μ` carrying the
/// coefficient `n`.
pub fn botany_family_member(
    x0: &ManifoldState,
    n: u32,
    p: u32,
    convention: ExponentConvention,
) -> Result<ManifoldState, CalculusError> {
    if p < 2 {
        return Err(CalculusError::Precondition(format!("p = {p} must be at least 2")));
    }
    if x0.remaining_tori() != [TorusId::T1] {
        return Err(CalculusError::Precondition(format!(
            "seed must have exactly T1 remaining, found {:?}",
            x0.remaining_tori()
        )));
    }
    let expected_seed = AbelianInvariants::from_cyclic_orders(1, &[u64::from(p)]);
    if !x0.is_certified_abelian() || x0.invariants() != expected_seed {
        return Err(CalculusError::Precondition(format!(
            "seed group must be certified Z + Z_{p}, found {}",
            x0.invariants()
        )));
    }
    let torus = x0.torus(TorusId::T1).expect("checked above");
    let kill = torus.pushoff_m.pow(i64::from(p));
    let relator = match convention {
        ExponentConvention::KillXp => kill,
        ExponentConvention::MuNMP => &torus.meridian.pow(i64::from(n)) * &kill,
    };
    let mut x = x0.clone();
    x.tori.clear();
    x.pi1 = x.pi1.adjoin_relator(&relator)?;
    x.symplectic = x0.symplectic && n == 1;
    x.provenance.push(Step::Botany { n, p, convention });

    let expected = AbelianInvariants::from_cyclic_orders(0, &[u64::from(p), u64::from(p)]);
    if !x.is_certified_abelian() || x.invariants() != expected {
        return Err(CalculusError::Precondition(format!(
            "family member has group {}, expected {expected}",
            x.invariants()
        )));
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::{BlockName, Registry};

    fn block(name: BlockName) -> TelescopingTriple {
        Registry::builtin().load_block(name).unwrap()
    }

    #[test]
    fn pipeline_on_every_block() {
        for name in [BlockName::A, BlockName::B(2), BlockName::C, BlockName::D, BlockName::F] {
            let t = block(name);
            let (y1, y2) = surgery_pipeline(&t, 5, 7).unwrap();
            assert!(y1.is_certified_abelian(), "{name}");
            assert_eq!(y1.invariants(), AbelianInvariants::from_cyclic_orders(1, &[5]), "{name}");
            assert_eq!(y2.invariants(), AbelianInvariants::from_cyclic_orders(0, &[35]), "{name}");
            assert_eq!((y2.e, y2.sigma), (t.e, t.sigma));
            assert!(y2.tori.is_empty() && y2.symplectic && y2.minimal);
        }
    }

    #[test]
    fn consumed_torus_is_an_error() {
        let t = block(BlockName::A);
        let y1 = luttinger_surgery(&t, &SurgerySpec::luttinger(TorusId::T1, Curve::M, 3)).unwrap();
        assert_eq!(
            luttinger_surgery(&y1, &SurgerySpec::luttinger(TorusId::T1, Curve::M, 3)),
            Err(CalculusError::TorusConsumed(TorusId::T1))
        );
    }

    #[test]
    fn trivial_surgery_rejected() {
        let t = block(BlockName::D);
        let spec = SurgerySpec {
            torus: TorusId::T1,
            curve: Curve::M,
            k: 0,
            p: 0,
            q: 0,
        };
        assert_eq!(luttinger_surgery(&t, &spec), Err(CalculusError::TrivialSurgery));
    }

    #[test]
    fn non_unit_meridian_coefficient_drops_symplectic() {
        let t = block(BlockName::D);
        let spec = SurgerySpec {
            torus: TorusId::T1,
            curve: Curve::M,
            k: 2,
            p: 3,
            q: 0,
        };
        assert!(!luttinger_surgery(&t, &spec).unwrap().symplectic);
    }

    #[test]
    fn botany_members_have_p_p_for_both_conventions() {
        let t = block(BlockName::A);
        let x0 = botany_seed(&t, 3).unwrap();
        assert_eq!(x0.remaining_tori(), vec![TorusId::T1]);
        for conv in [ExponentConvention::KillXp, ExponentConvention::MuNMP] {
            for n in 0..4 {
                let x = botany_family_member(&x0, n, 3, conv).unwrap();
                assert_eq!(x.invariants(), AbelianInvariants::from_cyclic_orders(0, &[3, 3]));
                assert_eq!(x.symplectic, n == 1);
                assert_eq!(x.provenance.last(), Some(&Step::Botany { n, p: 3, convention: conv }));
            }
        }
    }

    #[test]
    fn botany_rejects_bad_seed() {
        let t = block(BlockName::A);
        let y1 = luttinger_surgery(&t, &SurgerySpec::luttinger(TorusId::T1, Curve::M, 3)).unwrap();
        assert!(botany_family_member(&y1, 1, 3, ExponentConvention::KillXp).is_err());
        let x0 = botany_seed(&t, 3).unwrap();
        assert!(botany_family_member(&x0, 1, 5, ExponentConvention::KillXp).is_err());
        assert!(botany_family_member(&x0, 1, 1, ExponentConvention::KillXp).is_err());
    }

    #[test]
    fn convention_parses() {
        assert_eq!("kill-xp".parse(), Ok(ExponentConvention::KillXp));
        assert_eq!("mu-n-m-p".parse(), Ok(ExponentConvention::MuNMP));
        assert!("other".parse::<ExponentConvention>().is_err());
    }
}
