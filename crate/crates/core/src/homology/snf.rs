//! Smith normal form over ℤ with unimodular transforms.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::matrix::IntMatrix;

/// `U · M · V = D` with `D` diagonal, `d₁ | d₂ | …`, and `U`, `V` unimodular.
/// The inverses of both transforms are tracked alongside.
#[derive(Clone, Debug)]
pub struct SnfResult {
    /// Nonzero invariant factors, all positive.
    pub diagonal: Vec<BigInt>,
    pub u: IntMatrix,
    pub v: IntMatrix,
    pub u_inv: IntMatrix,
    pub v_inv: IntMatrix,
}

impl SnfResult {
    pub fn rank(&self) -> usize {
        self.diagonal.len()
    }

    /// Invariant factors greater than one: the torsion of `coker M`.
    pub fn torsion(&self) -> Vec<u64> {
        self.diagonal
            .iter()
            .filter(|d| !d.is_one())
            .map(|d| d.to_u64().expect("invariant factor fits in u64"))
            .collect()
    }

    /// The full diagonal matrix `D`, shaped like the input.
    pub fn d_matrix(&self) -> IntMatrix {
        let mut d = IntMatrix::zeros(self.u.rows(), self.v.rows());
        for (i, x) in self.diagonal.iter().enumerate() {
            d.set(i, i, x.clone());
        }
        d
    }
}

struct Reducer {
    a: IntMatrix,
    u: IntMatrix,
    u_inv: IntMatrix,
    v: IntMatrix,
    v_inv: IntMatrix,
}

impl Reducer {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap_rows(i, j);
        self.u.swap_rows(i, j);
        self.u_inv.swap_cols(i, j);
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        self.a.swap_cols(i, j);
        self.v.swap_cols(i, j);
        self.v_inv.swap_rows(i, j);
    }

    /// row[dst] += q · row[src]
    fn add_row(&mut self, dst: usize, src: usize, q: &BigInt) {
        self.a.add_row_multiple(dst, src, q);
        self.u.add_row_multiple(dst, src, q);
        self.u_inv.add_col_multiple(src, dst, &-q);
    }

    /// col[dst] += q · col[src]
    fn add_col(&mut self, dst: usize, src: usize, q: &BigInt) {
        self.a.add_col_multiple(dst, src, q);
        self.v.add_col_multiple(dst, src, q);
        self.v_inv.add_row_multiple(src, dst, &-q);
    }

    fn negate_row(&mut self, i: usize) {
        self.a.negate_row(i);
        self.u.negate_row(i);
        self.u_inv.negate_col(i);
    }

    /// Position of the smallest nonzero magnitude in the trailing block.
    fn smallest_in_block(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize, BigInt)> = None;
        for i in t..self.a.rows() {
            for j in t..self.a.cols() {
                let x = self.a.get(i, j);
                if x.is_zero() {
                    continue;
                }
                let m = x.abs();
                if best.as_ref().is_none_or(|(_, _, b)| &m < b) {
                    best = Some((i, j, m));
                }
            }
        }
        best.map(|(i, j, _)| (i, j))
    }

    /// Smallest nonzero magnitude in row t / column t (pivot included).
    fn smallest_in_cross(&self, t: usize) -> (usize, usize) {
        let mut best = (t, t, self.a.get(t, t).abs());
        let mut consider = |i: usize, j: usize, x: &BigInt| {
            if !x.is_zero() && (best.2.is_zero() || x.abs() < best.2) {
                best = (i, j, x.abs());
            }
        };
        for i in t + 1..self.a.rows() {
            consider(i, t, self.a.get(i, t));
        }
        for j in t + 1..self.a.cols() {
            consider(t, j, self.a.get(t, j));
        }
        (best.0, best.1)
    }

    fn run(mut self) -> SnfResult {
        let (rows, cols) = (self.a.rows(), self.a.cols());
        let mut t = 0;
        while t < rows.min(cols) {
            let Some((pi, pj)) = self.smallest_in_block(t) else {
                break;
            };
            self.swap_rows(t, pi);
            self.swap_cols(t, pj);
            loop {
                let pivot = self.a.get(t, t).clone();
                let mut leftover = false;
                for i in t + 1..rows {
                    let x = self.a.get(i, t).clone();
                    if x.is_zero() {
                        continue;
                    }
                    let q = &x / &pivot;
                    self.add_row(i, t, &-q);
                    leftover |= !self.a.get(i, t).is_zero();
                }
                for j in t + 1..cols {
                    let x = self.a.get(t, j).clone();
                    if x.is_zero() {
                        continue;
                    }
                    let q = &x / &pivot;
                    self.add_col(j, t, &-q);
                    leftover |= !self.a.get(t, j).is_zero();
                }
                if leftover {
                    let (i, j) = self.smallest_in_cross(t);
                    self.swap_rows(t, i);
                    self.swap_cols(t, j);
                    continue;
                }
                // Row and column are clear; enforce divisibility of the block.
                let offender = (t + 1..rows)
                    .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                    .find(|&(i, j)| !self.a.get(i, j).is_multiple_of(&pivot));
                match offender {
                    Some((i, _)) => self.add_row(t, i, &BigInt::one()),
                    None => break,
                }
            }
            if self.a.get(t, t).is_negative() {
                self.negate_row(t);
            }
            t += 1;
        }
        let diagonal = (0..t).map(|i| self.a.get(i, i).clone()).collect();
        SnfResult {
            diagonal,
            u: self.u,
            v: self.v,
            u_inv: self.u_inv,
            v_inv: self.v_inv,
        }
    }
}

/// Smith normal form with smallest-magnitude pivoting.
pub fn smith_normal_form(m: &IntMatrix) -> SnfResult {
    Reducer {
        a: m.clone(),
        u: IntMatrix::identity(m.rows()),
        u_inv: IntMatrix::identity(m.rows()),
        v: IntMatrix::identity(m.cols()),
        v_inv: IntMatrix::identity(m.cols()),
    }
    .run()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn check(m: &IntMatrix) -> SnfResult {
        let s = smith_normal_form(m);
        assert_eq!(&(&s.u * m) * &s.v, s.d_matrix());
        assert_eq!(&s.u * &s.u_inv, IntMatrix::identity(m.rows()));
        assert_eq!(&s.v * &s.v_inv, IntMatrix::identity(m.cols()));
        assert!(s.u.determinant().abs().is_one());
        assert!(s.v.determinant().abs().is_one());
        for w in s.diagonal.windows(2) {
            assert!(w[1].is_multiple_of(&w[0]));
        }
        assert!(s.diagonal.iter().all(|d| d.is_positive()));
        s
    }

    #[test]
    fn two_by_three_diagonal() {
        let m = IntMatrix::from_i64_rows(2, 2, &[vec![2, 0], vec![0, 3]]);
        let s = check(&m);
        assert_eq!(s.diagonal, vec![BigInt::from(1), BigInt::from(6)]);
    }

    #[test]
    fn zero_and_unit() {
        let z = IntMatrix::zeros(3, 2);
        let s = check(&z);
        assert!(s.diagonal.is_empty());
        assert_eq!(s.u, IntMatrix::identity(3));
        assert_eq!(s.v, IntMatrix::identity(2));
        let one = IntMatrix::from_i64_rows(1, 1, &[vec![1]]);
        assert_eq!(check(&one).diagonal, vec![BigInt::from(1)]);
        check(&IntMatrix::zeros(0, 4));
        check(&IntMatrix::zeros(4, 0));
    }

    #[test]
    fn known_invariant_factors() {
        let m =
            IntMatrix::from_i64_rows(3, 3, &[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]);
        let s = check(&m);
        assert_eq!(
            s.diagonal,
            vec![BigInt::from(2), BigInt::from(6), BigInt::from(12)]
        );
    }

    proptest! {
        #[test]
        fn random_matrices(rows in 0usize..5, cols in 0usize..5, seed in prop::collection::vec(-9i64..10, 25)) {
            let entries: Vec<Vec<i64>> = (0..rows).map(|i| (0..cols).map(|j| seed[i * 5 + j]).collect()).collect();
            let m = IntMatrix::from_i64_rows(rows, cols, &entries);
            let s = check(&m);
            prop_assert_eq!(s.rank(), m.rank());
        }
    }
}
