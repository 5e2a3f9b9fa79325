use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::IntegerMatrix;
use super::presentation::Presentation;
use super::smith::{smith_normal_form, SmithDecomposition};
use super::tietze::tietze_simplify;
use super::word::Word;
use super::GroupError;

/// `Z^free_rank ⊕ Z_t1 ⊕ ... ⊕ Z_tk` with `t_i >= 2` and `t_i | t_(i+1)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AbelianInvariants {
    pub free_rank: usize,
    pub torsion: Vec<BigInt>,
}

impl AbelianInvariants {
    /// Canonicalizes an arbitrary list of cyclic orders (entries 0 and 1 are
    /// ignored) into invariant-factor form.
    pub fn from_cyclic_orders(free_rank: usize, orders: &[u64]) -> Self {
        let orders: Vec<u64> = orders.iter().copied().filter(|&o| o > 1).collect();
        let mut diag = IntegerMatrix::zeros(orders.len(), orders.len());
        for (i, &o) in orders.iter().enumerate() {
            diag[(i, i)] = BigInt::from(o);
        }
        let torsion = smith_normal_form(&diag)
            .diagonal
            .into_iter()
            .filter(|d| *d > BigInt::one())
            .collect();
        AbelianInvariants { free_rank, torsion }
    }

    pub fn is_free(&self) -> bool {
        self.torsion.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    /// Torsion as machine integers, if they fit.
    pub fn torsion_u64(&self) -> Option<Vec<u64>> {
        self.torsion.iter().map(|t| u64::try_from(t).ok()).collect()
    }
}

impl fmt::Display for AbelianInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return f.write_str("1");
        }
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|t| format!("Z_{t}")));
        f.write_str(&parts.join(" + "))
    }
}

/// Exponent-sum matrix: rows are relators, columns generators.
pub fn relation_matrix(p: &Presentation) -> IntegerMatrix {
    let n = p.generator_count();
    let rows: Vec<Vec<i64>> = p.relators().iter().map(|r| r.exponent_vector(n)).collect();
    IntegerMatrix::from_rows(n, &rows)
}

/// Invariants of the abelianization, read off the Smith form of the
/// relation matrix.
pub fn abelian_invariants(p: &Presentation) -> AbelianInvariants {
    AbelianMap::new(p).invariants()
}

/// Sound (not complete) test that `p` presents an abelian group: after
/// Tietze simplification every pair of surviving generators must have a
/// commutator among the relators.
pub fn is_certifiably_abelian(p: &Presentation) -> bool {
    tietze_simplify(p).visibly_abelian()
}

/// Whether `words` form a basis of the free abelian group presented by `p`.
///
/// Requires `p` to be certified abelian and torsion-free, with exactly
/// `free_rank` words; otherwise returns [`GroupError::NotCertified`] rather
/// than a verdict.
pub fn generates_full_group(words: &[Word], p: &Presentation) -> Result<bool, GroupError> {
    if !is_certifiably_abelian(p) {
        return Err(GroupError::NotCertified(format!("{p} lacks an abelian certificate")));
    }
    let map = AbelianMap::new(p);
    let inv = map.invariants();
    if !inv.is_free() {
        return Err(GroupError::NotCertified(format!("{p} has torsion {inv}")));
    }
    if words.len() != inv.free_rank {
        return Err(GroupError::NotCertified(format!(
            "{} words supplied for free rank {}",
            words.len(),
            inv.free_rank
        )));
    }
    let mut m = IntegerMatrix::zeros(words.len(), inv.free_rank);
    for (i, w) in words.iter().enumerate() {
        p.check_range(w)?;
        for (j, x) in map.coordinates(w).free.into_iter().enumerate() {
            m[(i, j)] = x;
        }
    }
    Ok(m.is_unimodular())
}

/// Coordinates of a word in the abelianization `Z^r ⊕ Z_d1 ⊕ ...`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbelianCoordinates {
    pub free: Vec<BigInt>,
    /// `(residue, modulus)` for each torsion factor, residue in `[0, modulus)`.
    pub torsion: Vec<(BigInt, BigInt)>,
}

impl AbelianCoordinates {
    pub fn is_zero(&self) -> bool {
        self.free.iter().all(Zero::is_zero) && self.torsion.iter().all(|(r, _)| r.is_zero())
    }

    /// `free` as machine integers.
    pub fn free_i64(&self) -> Option<Vec<i64>> {
        self.free.iter().map(|x| i64::try_from(x).ok()).collect()
    }
}

/// The abelianization map of a presentation, via its Smith decomposition.
///
/// With `U R V = D` for the relation matrix `R`, a word with exponent row
/// vector `x` has coordinates `x V`: entries past the rank are free, and the
/// entries at positions with `d_i > 1` are read modulo `d_i`.
#[derive(Clone, Debug)]
pub struct AbelianMap {
    smith: SmithDecomposition,
    generators: usize,
}

impl AbelianMap {
    pub fn new(p: &Presentation) -> Self {
        AbelianMap {
            smith: smith_normal_form(&relation_matrix(p)),
            generators: p.generator_count(),
        }
    }

    pub fn smith(&self) -> &SmithDecomposition {
        &self.smith
    }

    pub fn rank(&self) -> usize {
        self.smith.rank()
    }

    pub fn invariants(&self) -> AbelianInvariants {
        AbelianInvariants {
            free_rank: self.generators - self.rank(),
            torsion: self
                .smith
                .diagonal
                .iter()
                .filter(|d| **d > BigInt::one())
                .cloned()
                .collect(),
        }
    }

    pub fn coordinates(&self, w: &Word) -> AbelianCoordinates {
        let x = w.exponent_vector(self.generators);
        let v = &self.smith.v;
        let y: Vec<BigInt> = (0..self.generators)
            .map(|j| {
                x.iter()
                    .enumerate()
                    .filter(|(_, xi)| **xi != 0)
                    .map(|(i, xi)| &v[(i, j)] * BigInt::from(*xi))
                    .sum()
            })
            .collect();
        let rank = self.rank();
        let torsion = self.smith.diagonal[..rank]
            .iter()
            .zip(&y)
            .filter(|(d, _)| **d > BigInt::one())
            .map(|(d, yi)| (yi.mod_floor(d), d.clone()))
            .collect();
        AbelianCoordinates {
            free: y[rank..].to_vec(),
            torsion,
        }
    }

    /// Whether the word is trivial in the abelianization.
    pub fn is_trivial(&self, w: &Word) -> bool {
        self.coordinates(w).is_zero()
    }

    /// A free coordinate vector is primitive when its entries have gcd 1.
    pub fn is_primitive(&self, w: &Word) -> bool {
        let c = self.coordinates(w);
        let g = c.free.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
        g.abs().is_one()
    }
}
