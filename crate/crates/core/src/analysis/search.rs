use std::cmp::Reverse;
use std::collections::BinaryHeap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{check_degrees, ErrorConfig, SparseCols, Syndrome};
use crate::error::{Error, Result};
use crate::homology::{solve_linear, ChainVector, ImageMembership};
use crate::matrix::IntMatrix;
use crate::stabilizer::{CodeMode, HomologicalCode};

/// Candidate budget for one exhaustive search before it gives up with a
/// lower bound.
pub const DEFAULT_SEARCH_BUDGET: u64 = 200_000_000;

/// Site guard for the energy-barrier state space `2^{n_k}`.
pub const MAX_BARRIER_SITES: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "status")]
pub enum DistanceResult {
    /// Minimum weight and the lexicographically first witness of that weight.
    Exact { weight: usize, witness: ChainVector },
    /// No nontrivial logical of weight below `bound` exists.
    AtLeast { bound: usize },
    /// The logical group is trivial.
    NoLogicals,
}

impl DistanceResult {
    pub fn weight(&self) -> Option<usize> {
        match self {
            DistanceResult::Exact { weight, .. } => Some(*weight),
            _ => None,
        }
    }

    fn min(a: &Self, b: &Self) -> Self {
        use DistanceResult::*;
        match (a, b) {
            (NoLogicals, x) | (x, NoLogicals) => x.clone(),
            (Exact { weight: w1, .. }, Exact { weight: w2, .. }) => {
                if w2 < w1 {
                    b.clone()
                } else {
                    a.clone()
                }
            }
            (Exact { weight, .. }, AtLeast { bound })
            | (AtLeast { bound }, Exact { weight, .. }) => {
                if weight < bound {
                    if matches!(a, Exact { .. }) {
                        a.clone()
                    } else {
                        b.clone()
                    }
                } else {
                    AtLeast { bound: *bound }
                }
            }
            (AtLeast { bound: b1 }, AtLeast { bound: b2 }) => AtLeast { bound: *b1.min(b2) },
        }
    }
}

/// X-type and Z-type systoles of a code and their minimum.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistanceReport {
    /// Lightest undetectable nontrivial X-error.
    pub x: DistanceResult,
    /// Lightest undetectable nontrivial Z-error.
    pub z: DistanceResult,
    pub distance: DistanceResult,
}

fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| {
        acc.saturating_mul((n - i) as u64) / (i as u64 + 1)
    })
}

/// All k-subsets of 0..n in lexicographic order.
fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        let mut i = k;
        while i > 0 && idx[i - 1] == n - k + i - 1 {
            i -= 1;
        }
        if i == 0 {
            return out;
        }
        idx[i - 1] += 1;
        for j in i..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Lexicographically first vector of weight `w` (support, then values in
/// `1..d`) whose image under `checks` equals `target` and that passes
/// `accept`.
fn first_of_weight(
    checks: &SparseCols,
    target: &[i64],
    d: i64,
    w: usize,
    accept: &(dyn Fn(&[i64]) -> bool + Sync),
) -> Option<Vec<i64>> {
    let n = checks.cols.len();
    let supports = combinations(n, w);
    supports.par_iter().find_map_first(|support| {
        let mut values = vec![1i64; w];
        let mut syn = vec![0i64; checks.rows];
        loop {
            syn.iter_mut().for_each(|s| *s = 0);
            for (&cell, &v) in support.iter().zip(&values) {
                for &(r, o) in &checks.cols[cell] {
                    syn[r] = (syn[r] + o * v).rem_euclid(d);
                }
            }
            if syn == target {
                let mut x = vec![0i64; n];
                for (&cell, &v) in support.iter().zip(&values) {
                    x[cell] = v;
                }
                if accept(&x) {
                    return Some(x);
                }
            }
            // odometer over values, last position fastest
            let mut i = w;
            loop {
                if i == 0 {
                    return None;
                }
                i -= 1;
                values[i] += 1;
                if values[i] < d {
                    break;
                }
                values[i] = 1;
            }
        }
    })
}

fn systole(
    code: &HomologicalCode,
    checks: &IntMatrix,
    stabilizers: &IntMatrix,
    cap: usize,
    budget: u64,
) -> DistanceResult {
    if code.n_logical() == 0 {
        return DistanceResult::NoLogicals;
    }
    let d = code.modulus() as i64;
    let sparse = SparseCols::new(checks);
    let membership = ImageMembership::new(stabilizers, code.modulus());
    let zero = vec![0i64; sparse.rows];
    let accept = |x: &[i64]| !membership.contains(x);
    let n = sparse.cols.len();
    let mut spent = 0u64;
    for w in 1..=cap.min(n) {
        let cost = binomial(n, w).saturating_mul((d as u64 - 1).saturating_pow(w as u32));
        spent = spent.saturating_add(cost);
        if spent > budget {
            return DistanceResult::AtLeast { bound: w };
        }
        if let Some(x) = first_of_weight(&sparse, &zero, d, w, &accept) {
            return DistanceResult::Exact {
                weight: w,
                witness: ChainVector::from_dense(code.complex(), code.degree(), &x),
            };
        }
    }
    DistanceResult::AtLeast {
        bound: cap.min(n) + 1,
    }
}

/// Minimum weight of an undetectable, homologically nontrivial error, for the
/// X side (cycle systole in homology mode) and the Z side (cocycle systole),
/// by exhaustive search up to weight `cap`.
pub fn code_distance(code: &HomologicalCode, cap: usize) -> Result<DistanceReport> {
    code_distance_with_budget(code, cap, DEFAULT_SEARCH_BUDGET)
}

pub fn code_distance_with_budget(
    code: &HomologicalCode,
    cap: usize,
    budget: u64,
) -> Result<DistanceReport> {
    if cap == 0 {
        return Err(Error::Range {
            what: "cap",
            value: 0,
            allowed: ">= 1".into(),
        });
    }
    let x = systole(
        code,
        &code.x_check_matrix(),
        &code.x_stabilizer_matrix(),
        cap,
        budget,
    );
    let z = systole(
        code,
        &code.z_check_matrix(),
        &code.z_stabilizer_matrix(),
        cap,
        budget,
    );
    let distance = DistanceResult::min(&x, &z);
    Ok(DistanceReport { x, z, distance })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "status")]
pub enum DecodeOutcome {
    Decoded {
        correction: ErrorConfig,
        weight: usize,
    },
    /// No correction of weight ≤ cap on one of the two sides.
    NoDecode { cap: usize },
}

fn min_weight_preimage(
    checks: &IntMatrix,
    target: &[i64],
    d: i64,
    cap: usize,
) -> Result<Option<Vec<i64>>> {
    let n = checks.cols();
    if target.iter().all(|&t| t == 0) {
        return Ok(Some(vec![0; n]));
    }
    if solve_linear(checks, target, Some(d as u64)).is_none() {
        return Err(Error::Infeasible(
            "syndrome is not the image of any error".into(),
        ));
    }
    let sparse = SparseCols::new(checks);
    for w in 1..=cap.min(n) {
        if let Some(x) = first_of_weight(&sparse, target, d, w, &|_| true) {
            return Ok(Some(x));
        }
    }
    Ok(None)
}

fn dense_syndrome(
    code: &HomologicalCode,
    degree: Option<usize>,
    v: &ChainVector,
) -> Result<Vec<i64>> {
    let d = code.modulus() as i64;
    match degree {
        Some(k) => {
            if v.coeffs.is_empty() {
                return Ok(vec![0; code.complex().cell_count(k)]);
            }
            if v.degree != k {
                return Err(Error::DegreeMismatch {
                    expected: k,
                    got: v.degree,
                });
            }
            Ok(v.to_dense(code.complex())?
                .into_iter()
                .map(|x| x.rem_euclid(d))
                .collect())
        }
        None if v.coeffs.is_empty() => Ok(Vec::new()),
        None => Err(Error::Infeasible("degree-0 codes have no V-checks".into())),
    }
}

/// Minimum-weight error reproducing `s`, found separately for the X and Z
/// parts by increasing-weight enumeration with lexicographic tie-breaking.
pub fn decode_min_weight(
    code: &HomologicalCode,
    s: &Syndrome,
    cap: usize,
) -> Result<DecodeOutcome> {
    if s.d != code.modulus() {
        return Err(Error::ModulusMismatch(s.d, code.modulus()));
    }
    let d = code.modulus() as i64;
    let (x_deg, z_deg) = check_degrees(code);
    let (x_target, z_target) = match code.mode() {
        CodeMode::Homology => (&s.v_violations, &s.p_violations),
        CodeMode::Cohomology => (&s.p_violations, &s.v_violations),
    };
    let xt = dense_syndrome(code, x_deg, x_target)?;
    let zt = dense_syndrome(code, z_deg, z_target)?;
    let x = min_weight_preimage(&code.x_check_matrix(), &xt, d, cap)?;
    let z = min_weight_preimage(&code.z_check_matrix(), &zt, d, cap)?;
    match (x, z) {
        (Some(x), Some(z)) => {
            let c = code.complex();
            let k = code.degree();
            let correction = ErrorConfig {
                d: code.modulus(),
                x_part: ChainVector::from_dense(c, k, &x),
                z_part: ChainVector::from_dense(c, k, &z),
            };
            let weight = correction.weight();
            Ok(DecodeOutcome::Decoded { correction, weight })
        }
        _ => Ok(DecodeOutcome::NoDecode { cap }),
    }
}

/// Whether `injected − correction` acts trivially on the code space: its X
/// part lies in the span of X-stabilizers and its Z part in the span of
/// Z-stabilizers (boundaries / coboundaries).
pub fn decode_success(
    code: &HomologicalCode,
    injected: &ErrorConfig,
    correction: &ErrorConfig,
) -> Result<bool> {
    let (xi, zi) = injected.check(code)?;
    let (xc, zc) = correction.check(code)?;
    let d = code.modulus() as i64;
    let diff = |a: &[i64], b: &[i64]| -> Vec<i64> {
        a.iter()
            .zip(b)
            .map(|(p, q)| (p - q).rem_euclid(d))
            .collect()
    };
    let xm = ImageMembership::new(&code.x_stabilizer_matrix(), code.modulus());
    let zm = ImageMembership::new(&code.z_stabilizer_matrix(), code.modulus());
    Ok(xm.contains(&diff(&xi, &xc)) && zm.contains(&diff(&zi, &zc)))
}

/// Energy barrier for d = 2: the least, over single-site flip paths from the
/// empty X-error to an undetectable nontrivial one, of the largest number of
/// violated checks met along the path. Minimax Dijkstra over all `2^{n_k}`
/// error sets. `None` when the code has no logicals.
pub fn energy_barrier(code: &HomologicalCode) -> Result<Option<usize>> {
    if code.modulus() != 2 {
        return Err(Error::Range {
            what: "d",
            value: code.modulus() as i64,
            allowed: "2".into(),
        });
    }
    let n = code.n_qudits();
    if n > MAX_BARRIER_SITES {
        return Err(Error::Capacity(format!(
            "{n} sites exceed the energy-barrier guard of {MAX_BARRIER_SITES}"
        )));
    }
    if code.n_logical() == 0 {
        return Ok(None);
    }
    let sparse = SparseCols::new(&code.x_check_matrix());
    let words = sparse.rows.div_ceil(64).max(1);
    let masks: Vec<Vec<u64>> = sparse
        .cols
        .iter()
        .map(|col| {
            let mut m = vec![0u64; words];
            for &(r, o) in col {
                if o.rem_euclid(2) == 1 {
                    m[r / 64] ^= 1 << (r % 64);
                }
            }
            m
        })
        .collect();
    let weight = |state: usize| -> usize {
        let mut acc = vec![0u64; words];
        for (i, m) in masks.iter().enumerate() {
            if state >> i & 1 == 1 {
                acc.iter_mut().zip(m).for_each(|(a, b)| *a ^= b);
            }
        }
        acc.iter().map(|w| w.count_ones() as usize).sum()
    };
    let membership = ImageMembership::new(&code.x_stabilizer_matrix(), 2);
    let is_target = |state: usize| -> bool {
        let x: Vec<i64> = (0..n).map(|i| (state >> i & 1) as i64).collect();
        !membership.contains(&x)
    };

    let states = 1usize << n;
    let mut best = vec![usize::MAX; states];
    let mut heap = BinaryHeap::new();
    best[0] = 0;
    heap.push(Reverse((0usize, 0usize)));
    while let Some(Reverse((cost, s))) = heap.pop() {
        if cost > best[s] {
            continue;
        }
        if s != 0 && weight(s) == 0 && is_target(s) {
            return Ok(Some(cost));
        }
        for i in 0..n {
            let t = s ^ (1 << i);
            let c = cost.max(weight(t));
            if c < best[t] {
                best[t] = c;
                heap.push(Reverse((c, t)));
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::syndrome;
    use crate::complex::{circle, sphere_cube, torus_grid};
    use crate::stabilizer::build_code;

    #[test]
    fn combinations_are_lexicographic() {
        assert_eq!(
            combinations(4, 2),
            vec![
                vec![0, 1],
                vec![0, 2],
                vec![0, 3],
                vec![1, 2],
                vec![1, 3],
                vec![2, 3]
            ]
        );
        assert_eq!(combinations(3, 0), vec![Vec::<usize>::new()]);
        assert_eq!(binomial(18, 3), 816);
    }

    #[test]
    fn torus_distance() {
        for n in [2, 3] {
            let code = build_code(&torus_grid(n, n).unwrap(), 1, 2, CodeMode::Homology).unwrap();
            let r = code_distance(&code, 10).unwrap();
            assert_eq!(r.distance.weight(), Some(n));
            assert_eq!(r.x.weight(), Some(n));
            assert_eq!(r.z.weight(), Some(n));
        }
    }

    #[test]
    fn circle_distances() {
        for m in [3, 5] {
            let code = build_code(&circle(m).unwrap(), 1, 3, CodeMode::Homology).unwrap();
            let r = code_distance(&code, 10).unwrap();
            assert_eq!(r.x.weight(), Some(m));
            // every single-edge cochain is a nontrivial cocycle
            assert_eq!(r.z.weight(), Some(1));
        }
    }

    #[test]
    fn sphere_has_no_distance() {
        let code = build_code(&sphere_cube(), 1, 2, CodeMode::Homology).unwrap();
        assert_eq!(
            code_distance(&code, 5).unwrap().distance,
            DistanceResult::NoLogicals
        );
    }

    #[test]
    fn cap_gives_lower_bound() {
        let code = build_code(&torus_grid(3, 3).unwrap(), 1, 2, CodeMode::Homology).unwrap();
        let r = code_distance(&code, 2).unwrap();
        assert_eq!(r.distance, DistanceResult::AtLeast { bound: 3 });
    }

    #[test]
    fn decode_single_error() {
        let code = build_code(&torus_grid(3, 3).unwrap(), 1, 2, CodeMode::Homology).unwrap();
        let e = ErrorConfig::x_only(2, ChainVector::from_pairs(1, [("ev1_2", 1)]));
        let s = syndrome(&code, &e).unwrap();
        let DecodeOutcome::Decoded { correction, weight } =
            decode_min_weight(&code, &s, 4).unwrap()
        else {
            panic!("no decode")
        };
        assert_eq!(weight, 1);
        assert_eq!(correction.x_part, e.x_part);
        assert!(decode_success(&code, &e, &correction).unwrap());
    }

    #[test]
    fn empty_syndrome_decodes_to_zero() {
        let code = build_code(&torus_grid(2, 2).unwrap(), 1, 3, CodeMode::Homology).unwrap();
        let s = Syndrome::empty(3, 1);
        let out = decode_min_weight(&code, &s, 3).unwrap();
        assert_eq!(
            out,
            DecodeOutcome::Decoded {
                correction: ErrorConfig::zero(3, 1),
                weight: 0
            }
        );
    }

    #[test]
    fn inconsistent_syndrome() {
        let code = build_code(&torus_grid(2, 2).unwrap(), 1, 2, CodeMode::Homology).unwrap();
        let mut s = Syndrome::empty(2, 1);
        s.v_violations = ChainVector::from_pairs(0, [("v0_0", 1)]);
        assert!(matches!(
            decode_min_weight(&code, &s, 3),
            Err(Error::Infeasible(_))
        ));
    }

    #[test]
    fn barriers() {
        for m in 3..=6 {
            let code = build_code(&circle(m).unwrap(), 1, 2, CodeMode::Homology).unwrap();
            assert_eq!(energy_barrier(&code).unwrap(), Some(2));
        }
        let code = build_code(&torus_grid(2, 2).unwrap(), 1, 2, CodeMode::Homology).unwrap();
        assert_eq!(energy_barrier(&code).unwrap(), Some(2));
        let code = build_code(&sphere_cube(), 1, 2, CodeMode::Homology).unwrap();
        assert_eq!(energy_barrier(&code).unwrap(), None);
        let code = build_code(&circle(3).unwrap(), 1, 3, CodeMode::Homology).unwrap();
        assert!(energy_barrier(&code).is_err());
    }
}
