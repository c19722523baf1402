//! Exact homology and cohomology of cell complexes over ℤ, ℤ_d and finite
//! direct sums, built on one integer Smith normal form engine.
//!
//! Finite coefficients go through the universal coefficient theorem:
//! `H_k(C; G) = H_k(C) ⊗ G ⊕ Tor(H_{k−1}(C), G)` and
//! `H^k(C; G) = H^k(C) ⊗ G ⊕ Tor(H^{k+1}(C), G)`.

mod chain;
mod group;
mod snf;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

pub use chain::ChainVector;
pub use group::{FgAbelianGroup, GroupDocument};
pub use snf::{smith_normal_form, SnfResult};

use crate::complex::CellComplex;
use crate::error::{Error, Result};
use crate::matrix::IntMatrix;

fn check_degree(c: &CellComplex, k: usize) -> Result<()> {
    if k > c.dimension() + 1 {
        Err(Error::Range {
            what: "k",
            value: k as i64,
            allowed: format!("0..={}", c.dimension() + 1),
        })
    } else {
        Ok(())
    }
}

/// `H_k(c; ℤ)`. Degrees above the dimension give the trivial group.
pub fn integral_homology(c: &CellComplex, k: usize) -> FgAbelianGroup {
    let n_k = c.cell_count(k);
    if n_k == 0 {
        return FgAbelianGroup::trivial();
    }
    let out_rank = c.boundary_matrix_ext(k).rank();
    let inc = smith_normal_form(&c.boundary_matrix_ext(k + 1));
    FgAbelianGroup::new(n_k - out_rank - inc.rank(), inc.torsion())
}

/// `H^k(c; ℤ)`, the homology of the transposed complex.
pub fn integral_cohomology(c: &CellComplex, k: usize) -> FgAbelianGroup {
    let n_k = c.cell_count(k);
    if n_k == 0 {
        return FgAbelianGroup::trivial();
    }
    let out_rank = c.boundary_matrix_ext(k + 1).rank();
    let inc = smith_normal_form(&c.boundary_matrix_ext(k));
    FgAbelianGroup::new(n_k - out_rank - inc.rank(), inc.torsion())
}

/// `H_k(c; coeff)` in canonical form.
pub fn homology(c: &CellComplex, k: usize, coeff: &FgAbelianGroup) -> Result<FgAbelianGroup> {
    check_degree(c, k)?;
    let hk = integral_homology(c, k);
    let mut out = hk.tensor(coeff);
    if k > 0 {
        out = out.direct_sum(&integral_homology(c, k - 1).tor(coeff));
    }
    Ok(out)
}

/// `H^k(c; coeff)` in canonical form.
pub fn cohomology(c: &CellComplex, k: usize, coeff: &FgAbelianGroup) -> Result<FgAbelianGroup> {
    check_degree(c, k)?;
    let hk = integral_cohomology(c, k);
    Ok(hk
        .tensor(coeff)
        .direct_sum(&integral_cohomology(c, k + 1).tor(coeff)))
}

fn modinv(a: i128, m: i128) -> i128 {
    let e = a.rem_euclid(m).extended_gcd(&m);
    debug_assert_eq!(e.gcd, 1);
    e.x.rem_euclid(m)
}

/// Solves `m · x = b` over ℤ (`modulus = None`) or ℤ_d. Returns one solution,
/// reduced into `[0, d)` in the modular case.
pub fn solve_linear(m: &IntMatrix, b: &[i64], modulus: Option<u64>) -> Option<Vec<i64>> {
    solve_with(m, &smith_normal_form(m), b, modulus)
}

fn solve_with(m: &IntMatrix, s: &SnfResult, b: &[i64], modulus: Option<u64>) -> Option<Vec<i64>> {
    assert_eq!(b.len(), m.rows());
    let ub = s.u.mul_vec(b);
    let mut y = vec![BigInt::zero(); m.cols()];
    match modulus {
        None => {
            for (i, rhs) in ub.iter().enumerate() {
                match s.diagonal.get(i) {
                    Some(d) => {
                        let (q, r) = rhs.div_rem(d);
                        if !r.is_zero() {
                            return None;
                        }
                        y[i] = q;
                    }
                    None if !rhs.is_zero() => return None,
                    None => {}
                }
            }
        }
        Some(md) => {
            let mb = BigInt::from(md);
            for (i, rhs) in ub.iter().enumerate() {
                let r = rhs.mod_floor(&mb).to_i128().unwrap();
                match s.diagonal.get(i) {
                    Some(d) => {
                        let di = d.mod_floor(&mb).to_i128().unwrap();
                        let g = di.gcd(&(md as i128));
                        if r % g != 0 {
                            return None;
                        }
                        let m2 = md as i128 / g;
                        let sol = if m2 == 1 {
                            0
                        } else {
                            ((r / g) * modinv(di / g, m2)).rem_euclid(m2)
                        };
                        y[i] = BigInt::from(sol);
                    }
                    None if r != 0 => return None,
                    None => {}
                }
            }
        }
    }
    let x: Vec<BigInt> = (0..m.cols())
        .map(|r| {
            (0..m.cols())
                .map(|c| s.v.get(r, c) * &y[c])
                .fold(BigInt::zero(), |a, b| a + b)
        })
        .collect();
    Some(
        x.into_iter()
            .map(|v| match modulus {
                Some(md) => v.mod_floor(&BigInt::from(md)).to_i64().unwrap(),
                None => v.to_i64().expect("solution fits in i64"),
            })
            .collect(),
    )
}

/// Fast repeated membership tests `v ∈ im(M)` modulo `d`.
#[derive(Clone, Debug)]
pub struct ImageMembership {
    modulus: u64,
    /// U reduced mod d.
    u: Vec<Vec<i64>>,
    /// gcd(d_i, d) for the nonzero invariant factors.
    gcds: Vec<i64>,
}

impl ImageMembership {
    pub fn new(m: &IntMatrix, modulus: u64) -> Self {
        let s = smith_normal_form(m);
        let mb = BigInt::from(modulus);
        let u = (0..m.rows())
            .map(|i| {
                (0..m.rows())
                    .map(|j| s.u.get(i, j).mod_floor(&mb).to_i64().unwrap())
                    .collect()
            })
            .collect();
        let gcds = s
            .diagonal
            .iter()
            .map(|d| d.mod_floor(&mb).to_i64().unwrap().gcd(&(modulus as i64)))
            .collect();
        Self { modulus, u, gcds }
    }

    pub fn contains(&self, v: &[i64]) -> bool {
        let d = self.modulus as i64;
        self.u.iter().enumerate().all(|(i, row)| {
            let r = row
                .iter()
                .zip(v)
                .fold(0i64, |acc, (&a, &b)| (acc + a * b).rem_euclid(d));
            match self.gcds.get(i) {
                Some(&g) => r % g == 0,
                None => r == 0,
            }
        })
    }
}

fn check_chain(v: &ChainVector, c: &CellComplex) -> Result<Vec<i64>> {
    v.to_dense(c)
}

fn apply(m: &IntMatrix, x: &[i64], modulus: Option<u64>) -> Vec<i64> {
    m.mul_vec(x)
        .into_iter()
        .map(|v| match modulus {
            Some(d) => v.mod_floor(&BigInt::from(d)).to_i64().unwrap(),
            None => v.to_i64().expect("entry fits in i64"),
        })
        .collect()
}

/// `∂v ≡ 0`.
pub fn is_cycle(v: &ChainVector, c: &CellComplex, modulus: Option<u64>) -> Result<bool> {
    let x = check_chain(v, c)?;
    Ok(apply(&c.boundary_matrix_ext(v.degree), &x, modulus)
        .iter()
        .all(|&y| y == 0))
}

/// Some `w` with `∂w ≡ v`, if one exists.
pub fn solve_boundary(
    v: &ChainVector,
    c: &CellComplex,
    modulus: Option<u64>,
) -> Result<Option<ChainVector>> {
    let x = check_chain(v, c)?;
    let m = c.boundary_matrix_ext(v.degree + 1);
    Ok(solve_linear(&m, &x, modulus).map(|w| ChainVector::from_dense(c, v.degree + 1, &w)))
}

pub fn is_boundary(v: &ChainVector, c: &CellComplex, modulus: Option<u64>) -> Result<bool> {
    Ok(solve_boundary(v, c, modulus)?.is_some())
}

/// `δv ≡ 0` for a k-cochain `v`.
pub fn is_cocycle(v: &ChainVector, c: &CellComplex, modulus: Option<u64>) -> Result<bool> {
    let x = check_chain(v, c)?;
    Ok(apply(
        &c.boundary_matrix_ext(v.degree + 1).transpose(),
        &x,
        modulus,
    )
    .iter()
    .all(|&y| y == 0))
}

/// Some (k−1)-cochain `w` with `δw ≡ v`, if one exists.
pub fn solve_coboundary(
    v: &ChainVector,
    c: &CellComplex,
    modulus: Option<u64>,
) -> Result<Option<ChainVector>> {
    let x = check_chain(v, c)?;
    if v.degree == 0 {
        return Ok(x.iter().all(|&y| y == 0).then(|| ChainVector::zero(0)));
    }
    let m = c.boundary_matrix_ext(v.degree).transpose();
    Ok(solve_linear(&m, &x, modulus).map(|w| ChainVector::from_dense(c, v.degree - 1, &w)))
}

pub fn is_coboundary(v: &ChainVector, c: &CellComplex, modulus: Option<u64>) -> Result<bool> {
    Ok(solve_coboundary(v, c, modulus)?.is_some())
}

/// One generator of `H_k(c; ℤ_d)` (or `H^k`) and its additive order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Representative {
    pub chain: ChainVector,
    pub order: u64,
}

/// Cycle representatives of a generating set of `H_k(c; ℤ_d)`, one per
/// invariant factor, weight-reduced against boundaries.
pub fn class_representatives(c: &CellComplex, k: usize, d: u64) -> Result<Vec<Representative>> {
    check_degree(c, k)?;
    check_modulus(d)?;
    let out = c.boundary_matrix_ext(k);
    let inc = c.boundary_matrix_ext(k + 1);
    Ok(generators_mod(&out, &inc, d)
        .into_iter()
        .map(|(v, order)| Representative {
            chain: ChainVector::from_dense(c, k, &v),
            order,
        })
        .collect())
}

/// Cocycle representatives of a generating set of `H^k(c; ℤ_d)`.
pub fn cocycle_representatives(c: &CellComplex, k: usize, d: u64) -> Result<Vec<Representative>> {
    check_degree(c, k)?;
    check_modulus(d)?;
    let out = c.boundary_matrix_ext(k + 1).transpose();
    let inc = c.boundary_matrix_ext(k).transpose();
    Ok(generators_mod(&out, &inc, d)
        .into_iter()
        .map(|(v, order)| Representative {
            chain: ChainVector::from_dense(c, k, &v),
            order,
        })
        .collect())
}

fn check_modulus(d: u64) -> Result<()> {
    if d < 2 {
        Err(Error::Range {
            what: "d",
            value: d as i64,
            allowed: ">= 2".into(),
        })
    } else {
        Ok(())
    }
}

/// Generators of `ker(out) / im(inc)` over ℤ_d for a complex
/// `· --inc--> C --out--> ·` of free modules.
///
/// Kernel generators come from the column transform of `SNF(out)`; the
/// boundaries and the generators' own orders form a relation matrix whose
/// SNF yields an invariant-factor basis of the quotient.
fn generators_mod(out: &IntMatrix, inc: &IntMatrix, d: u64) -> Vec<(Vec<i64>, u64)> {
    let n = out.cols();
    if n == 0 {
        return Vec::new();
    }
    let di = d as i64;
    let db = BigInt::from(d);
    let s = smith_normal_form(out);
    let rank = s.rank();

    // (column of V, multiplier, order); coordinate index in y-space.
    let mut gens: Vec<(usize, i64, u64)> = Vec::new();
    for (i, a) in s.diagonal.iter().enumerate() {
        let g = a.mod_floor(&db).to_i64().unwrap().gcd(&di) as u64;
        if g > 1 {
            gens.push((i, (d / g) as i64, g));
        }
    }
    for i in rank..n {
        gens.push((i, 1, d));
    }
    if gens.is_empty() {
        return Vec::new();
    }

    let g_vec = |&(col, mult, _): &(usize, i64, u64)| -> Vec<i64> {
        (0..n)
            .map(|r| (s.v.get(r, col).mod_floor(&db).to_i64().unwrap() * mult).rem_euclid(di))
            .collect()
    };
    let gen_vectors: Vec<Vec<i64>> = gens.iter().map(g_vec).collect();

    // Relations: boundaries expressed in generator coordinates, then orders.
    let sgen = gens.len();
    let m = inc.cols();
    let mut rel = IntMatrix::zeros(sgen, m + sgen);
    for j in 0..m {
        let b: Vec<BigInt> = (0..n).map(|r| inc.get(r, j).clone()).collect();
        for (gi, &(col, _, _)) in gens.iter().enumerate() {
            if col < rank {
                // exact boundaries have no component along the row space of `out`
                continue;
            }
            let y = (0..n)
                .map(|c| s.v_inv.get(col, c) * &b[c])
                .fold(BigInt::zero(), |a, b| a + b);
            rel.set(gi, j, y.mod_floor(&db));
        }
    }
    for (gi, &(_, _, order)) in gens.iter().enumerate() {
        rel.set(gi, m + gi, BigInt::from(order));
    }
    let q = smith_normal_form(&rel);

    let inc_cols: Vec<Vec<i64>> = (0..m)
        .map(|j| {
            (0..n)
                .map(|r| inc.get(r, j).mod_floor(&db).to_i64().unwrap())
                .collect()
        })
        .collect();

    let mut reps = Vec::new();
    for (l, e) in q.diagonal.iter().enumerate() {
        let order = e.to_u64().unwrap();
        if order <= 1 {
            continue;
        }
        let mut h = vec![0i64; n];
        for (gi, gv) in gen_vectors.iter().enumerate() {
            let coef = q.u_inv.get(gi, l).mod_floor(&db).to_i64().unwrap();
            if coef == 0 {
                continue;
            }
            for (hx, &gx) in h.iter_mut().zip(gv) {
                *hx = (*hx + coef * gx).rem_euclid(di);
            }
        }
        reduce_weight(&mut h, &inc_cols, di);
        reps.push((h, order));
    }
    reps
}

fn weight(v: &[i64]) -> usize {
    v.iter().filter(|&&x| x != 0).count()
}

/// Greedily adds multiples of boundary columns while the weight strictly
/// decreases; the first best candidate in (column, multiple) order wins.
fn reduce_weight(v: &mut [i64], cols: &[Vec<i64>], d: i64) {
    loop {
        let current = weight(v);
        let mut best: Option<(usize, i64, usize)> = None;
        for (j, col) in cols.iter().enumerate() {
            for mult in 1..d {
                let w = v
                    .iter()
                    .zip(col)
                    .filter(|(&x, &b)| (x + mult * b).rem_euclid(d) != 0)
                    .count();
                if w < best.map_or(current, |b| b.2) {
                    best = Some((j, mult, w));
                }
            }
        }
        let Some((j, mult, _)) = best else { return };
        for (x, &b) in v.iter_mut().zip(&cols[j]) {
            *x = (*x + mult * b).rem_euclid(d);
        }
    }
}

/// Integral top-dimensional cycle spanning `H_n(c; ℤ) ≅ ℤ`, sign-normalized so
/// its first nonzero coefficient is positive. `None` unless the kernel of
/// `∂_n` has rank exactly one.
pub fn fundamental_cycle(c: &CellComplex) -> Option<ChainVector> {
    let n = c.dimension();
    let s = smith_normal_form(&c.boundary_matrix_ext(n));
    let cols = c.cell_count(n);
    if cols - s.rank() != 1 {
        return None;
    }
    let col = s.rank();
    let mut v: Vec<BigInt> = (0..cols).map(|r| s.v.get(r, col).clone()).collect();
    let g = v.iter().fold(BigInt::zero(), |a, b| a.gcd(b));
    let first_negative = v.iter().find(|x| !x.is_zero())?.is_negative();
    for x in &mut v {
        *x = &*x / &g;
        if first_negative {
            *x = -&*x;
        }
    }
    let dense: Vec<i64> = v.iter().map(|x| x.to_i64().unwrap()).collect();
    Some(ChainVector::from_dense(c, n, &dense))
}
