use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::matrix::IntegerMatrix;

/// `U · A · V = D` with `U`, `V` unimodular and `D` diagonal.
///
/// The diagonal is nonnegative, each entry divides the next, and zeros come
/// last.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithDecomposition {
    /// `min(rows, cols)` diagonal entries.
    pub diagonal: Vec<BigInt>,
    pub u: IntegerMatrix,
    pub v: IntegerMatrix,
    pub rows: usize,
    pub cols: usize,
}

impl SmithDecomposition {
    pub fn rank(&self) -> usize {
        self.diagonal.iter().filter(|d| !d.is_zero()).count()
    }

    /// `D` as a full `rows x cols` matrix.
    pub fn d(&self) -> IntegerMatrix {
        let mut d = IntegerMatrix::zeros(self.rows, self.cols);
        for (i, x) in self.diagonal.iter().enumerate() {
            d[(i, i)] = x.clone();
        }
        d
    }

    /// Re-checks the certificate against the original matrix: the product
    /// identity, unimodularity of both transforms, sign and divisibility
    /// conditions on the diagonal.
    pub fn verify(&self, a: &IntegerMatrix) -> bool {
        if a.rows() != self.rows || a.cols() != self.cols {
            return false;
        }
        let product = &(&self.u * a) * &self.v;
        if product != self.d() {
            return false;
        }
        if !self.u.is_unimodular() || !self.v.is_unimodular() {
            return false;
        }
        if self.diagonal.iter().any(|d| d.is_negative()) {
            return false;
        }
        self.diagonal.windows(2).all(|w| {
            if w[0].is_zero() {
                w[1].is_zero()
            } else {
                w[1].is_multiple_of(&w[0])
            }
        })
    }
}

/// Smith normal form with unimodular certificates.
///
/// Pivot rule: the nonzero entry of least absolute value in the active
/// submatrix, ties broken by (row, col) order. The result is a pure function
/// of the input.
pub fn smith_normal_form(a: &IntegerMatrix) -> SmithDecomposition {
    let (m, n) = (a.rows(), a.cols());
    let mut d = a.clone();
    let mut u = IntegerMatrix::identity(m);
    let mut v = IntegerMatrix::identity(n);

    let mut t = 0;
    while t < m.min(n) {
        let Some((pr, pc)) = min_entry(&d, (t..m).flat_map(|i| (t..n).map(move |j| (i, j)))) else {
            break;
        };
        move_pivot(&mut d, &mut u, &mut v, t, pr, pc);

        loop {
            for i in t + 1..m {
                if !d[(i, t)].is_zero() {
                    let q = -d[(i, t)].div_floor(&d[(t, t)]);
                    d.add_row_multiple(i, t, &q);
                    u.add_row_multiple(i, t, &q);
                }
            }
            for j in t + 1..n {
                if !d[(t, j)].is_zero() {
                    let q = -d[(t, j)].div_floor(&d[(t, t)]);
                    d.add_col_multiple(j, t, &q);
                    v.add_col_multiple(j, t, &q);
                }
            }

            let line = (t..m)
                .map(|i| (i, t))
                .chain((t + 1..n).map(|j| (t, j)));
            let (pr, pc) = min_entry(&d, line).expect("pivot is nonzero");
            if (pr, pc) != (t, t) {
                // a remainder smaller than the pivot survived
                move_pivot(&mut d, &mut u, &mut v, t, pr, pc);
                continue;
            }

            // Row and column t are clear; the pivot must divide the rest.
            let offender = (t + 1..m)
                .flat_map(|i| (t + 1..n).map(move |j| (i, j)))
                .find(|&(i, j)| !d[(i, j)].is_multiple_of(&d[(t, t)]));
            match offender {
                Some((i, _)) => {
                    let one = BigInt::from(1);
                    d.add_row_multiple(t, i, &one);
                    u.add_row_multiple(t, i, &one);
                }
                None => break,
            }
        }

        if d[(t, t)].is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
        t += 1;
    }

    let diagonal = (0..m.min(n)).map(|i| d[(i, i)].clone()).collect();
    SmithDecomposition {
        diagonal,
        u,
        v,
        rows: m,
        cols: n,
    }
}

fn min_entry(
    d: &IntegerMatrix,
    positions: impl Iterator<Item = (usize, usize)>,
) -> Option<(usize, usize)> {
    let mut best: Option<((usize, usize), BigInt)> = None;
    for (i, j) in positions {
        let x = d[(i, j)].abs();
        if x.is_zero() {
            continue;
        }
        // strict comparison keeps the lexicographically first among ties,
        // given the callers enumerate positions in (row, col) order
        if best.as_ref().is_none_or(|(_, b)| x < *b) {
            best = Some(((i, j), x));
        }
    }
    best.map(|(p, _)| p)
}

fn move_pivot(
    d: &mut IntegerMatrix,
    u: &mut IntegerMatrix,
    v: &mut IntegerMatrix,
    t: usize,
    pr: usize,
    pc: usize,
) {
    d.swap_rows(t, pr);
    u.swap_rows(t, pr);
    d.swap_cols(t, pc);
    v.swap_cols(t, pc);
}
