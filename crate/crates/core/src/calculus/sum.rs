use num_integer::Integer;

use super::replay::Step;
use super::triple::{validate_triple, Curve, TelescopingTriple, TorusData, TorusId};
use super::CalculusError;
use crate::group::{AbelianMap, Presentation, Word};

type Mat2 = [[i64; 2]; 2];

/// Symplectic sum of `s` and `s2`, gluing the second torus of `s` to the
/// first torus of `s2`.
///
/// The complement group of the sum is the complement group of `s2`
/// (the second torus of `s` carries all of `s`'s fundamental group),
/// written on fresh generators `t1`, `t2` in its free coordinates. The outer
/// torus `T2` is inherited from `s2` unchanged. The outer `T1` comes from
/// `s`, transported along the gluing; the gluing map is the element of
/// GL(2, Z) that lines up the primitive push-off of `s`'s `T1` with the
/// primitive push-off of `s2`'s `T1`, so the summand condition survives.
pub fn telescoping_sum(
    s: &TelescopingTriple,
    s2: &TelescopingTriple,
) -> Result<TelescopingTriple, CalculusError> {
    for t in [s, s2] {
        let report = validate_triple(t);
        if !report.all_passed() {
            return Err(CalculusError::InvalidTriple {
                block: t.name.clone(),
                failures: report.to_string(),
            });
        }
    }
    let map1 = AbelianMap::new(&s.complement_pi1);
    let map2 = AbelianMap::new(&s2.complement_pi1);

    // T2 of s in torus coordinates (columns m, l).
    let m_t2 = columns(
        s.curve_coordinates(&map1, TorusId::T2, Curve::M)?,
        s.curve_coordinates(&map1, TorusId::T2, Curve::L)?,
    );
    let m_t2_inv = inverse_unimodular(m_t2)?;

    let (c1, v) = primitive_curve(s, &map1)?;
    let u = apply(m_t2_inv, v)?;
    let (c1_other, _) = primitive_curve(s2, &map2)?;

    let gcd = u[0].extended_gcd(&u[1]);
    debug_assert_eq!(gcd.gcd.abs(), 1);
    let hit = [gcd.x * gcd.gcd, gcd.y * gcd.gcd];
    let kill = [-u[1], u[0]];
    let gluing: Mat2 = match c1_other {
        Curve::M => [hit, kill],
        Curve::L => [kill, hit],
    };

    let m_t1_other = columns(
        s2.curve_coordinates(&map2, TorusId::T1, Curve::M)?,
        s2.curve_coordinates(&map2, TorusId::T1, Curve::L)?,
    );
    let phi = mul(mul(m_t1_other, gluing)?, m_t2_inv)?;

    let t1m = apply(phi, s.curve_coordinates(&map1, TorusId::T1, Curve::M)?)?;
    let t1l = apply(phi, s.curve_coordinates(&map1, TorusId::T1, Curve::L)?)?;
    debug_assert!(c1 != Curve::M || t1m == s2.curve_coordinates(&map2, TorusId::T1, c1_other)?);

    let complement = Presentation::parse(&["t1", "t2"], &["[t1,t2]"]).expect("static presentation");
    let word = |v: [i64; 2]| Word::from_exponents(&v);
    let t1 = TorusData {
        id: TorusId::T1,
        meridian: Word::identity(),
        pushoff_m: word(t1m),
        pushoff_l: word(t1l),
    };
    let t2 = TorusData {
        id: TorusId::T2,
        meridian: Word::identity(),
        pushoff_m: word(s2.curve_coordinates(&map2, TorusId::T2, Curve::M)?),
        pushoff_l: word(s2.curve_coordinates(&map2, TorusId::T2, Curve::L)?),
    };

    let mut provenance = s.provenance.clone();
    provenance.extend(s2.provenance.iter().cloned());
    provenance.push(Step::Sum);

    let sum = TelescopingTriple {
        name: format!("{}#{}", s.name, s2.name),
        e: s.e.checked_add(s2.e).ok_or(CalculusError::Overflow("sum Euler characteristic"))?,
        sigma: s
            .sigma
            .checked_add(s2.sigma)
            .ok_or(CalculusError::Overflow("sum signature"))?,
        complement_pi1: complement,
        t1,
        t2,
        minimal: s.minimal && s2.minimal,
        h2_independent: s.h2_independent && s2.h2_independent,
        spin: s.spin && s2.spin,
        provenance,
    };
    let report = validate_triple(&sum);
    if !report.all_passed() {
        return Err(CalculusError::InvalidTriple {
            block: sum.name,
            failures: report.to_string(),
        });
    }
    Ok(sum)
}

/// First push-off of `T1` (m before l) with primitive coordinates.
fn primitive_curve(t: &TelescopingTriple, map: &AbelianMap) -> Result<(Curve, [i64; 2]), CalculusError> {
    for c in [Curve::M, Curve::L] {
        let v = t.curve_coordinates(map, TorusId::T1, c)?;
        if v[0].gcd(&v[1]) == 1 {
            return Ok((c, v));
        }
    }
    Err(CalculusError::Precondition(format!("{}: T1 has no primitive push-off", t.name)))
}

fn columns(a: [i64; 2], b: [i64; 2]) -> Mat2 {
    [[a[0], b[0]], [a[1], b[1]]]
}

fn inverse_unimodular(m: Mat2) -> Result<Mat2, CalculusError> {
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    if det.abs() != 1 {
        return Err(CalculusError::Precondition("T2 push-offs are not a basis".into()));
    }
    Ok([[det * m[1][1], -det * m[0][1]], [-det * m[1][0], det * m[0][0]]])
}

fn mul(a: Mat2, b: Mat2) -> Result<Mat2, CalculusError> {
    let mut out = [[0i64; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0]
                .checked_mul(b[0][j])
                .zip(a[i][1].checked_mul(b[1][j]))
                .and_then(|(x, y)| x.checked_add(y))
                .ok_or(CalculusError::Overflow("gluing matrix"))?;
        }
    }
    Ok(out)
}

fn apply(a: Mat2, v: [i64; 2]) -> Result<[i64; 2], CalculusError> {
    let col = mul(a, [[v[0], 0], [v[1], 0]])?;
    Ok([col[0][0], col[1][0]])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::{BlockName, Registry};

    #[test]
    fn characteristic_numbers_add() {
        let reg = Registry::builtin();
        let a = reg.load_block(BlockName::A).unwrap();
        let b0 = reg.load_block(BlockName::B(0)).unwrap();
        let c = reg.load_block(BlockName::C).unwrap();
        let d = reg.load_block(BlockName::D).unwrap();

        let aa = telescoping_sum(&a, &a).unwrap();
        assert_eq!((aa.e, aa.sigma), (10, -2));
        let ab = telescoping_sum(&a, &b0).unwrap();
        assert_eq!((ab.e, ab.sigma), (11, -3));
        let cd = telescoping_sum(&c, &d).unwrap();
        assert_eq!((cd.e, cd.sigma), (15, -7));
        assert!(aa.minimal && ab.minimal && cd.minimal);
    }

    #[test]
    fn sum_is_a_valid_triple_with_inherited_t2() {
        let reg = Registry::builtin();
        let a = reg.load_block(BlockName::A).unwrap();
        let c = reg.load_block(BlockName::C).unwrap();
        let ac = telescoping_sum(&a, &c).unwrap();
        assert!(validate_triple(&ac).all_passed());
        // C's T2 is (alpha4, alpha2); in C's free coordinates this is a basis
        let map = AbelianMap::new(&ac.complement_pi1);
        assert!(map.is_primitive(&ac.t1.pushoff_m));
        assert!(map.is_trivial(&ac.t1.pushoff_l));
        assert_eq!(ac.provenance.last(), Some(&Step::Sum));
    }

    #[test]
    fn minimal_flag_is_conjunctive() {
        let reg = Registry::builtin();
        let a = reg.load_block(BlockName::A).unwrap();
        let mut f = reg.load_block(BlockName::F).unwrap();
        f.minimal = false;
        assert!(!telescoping_sum(&a, &f).unwrap().minimal);
        assert!(!telescoping_sum(&f, &a).unwrap().minimal);
    }

    #[test]
    fn invalid_input_rejected() {
        let reg = Registry::builtin();
        let a = reg.load_block(BlockName::A).unwrap();
        let mut bad = a.clone();
        bad.t2.pushoff_l = bad.t2.pushoff_m.clone();
        assert!(matches!(
            telescoping_sum(&a, &bad),
            Err(CalculusError::InvalidTriple { .. })
        ));
    }
}
