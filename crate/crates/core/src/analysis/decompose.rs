use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::ErrorConfig;
use crate::error::Result;
use crate::homology::ChainVector;
use crate::stabilizer::{CodeMode, HomologicalCode};

/// Which family of checks a component violates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ComponentKind {
    V,
    P,
}

/// A maximal connected degree-1 piece of an error.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorComponent {
    pub kind: ComponentKind,
    /// Coefficients ±1 on the component's cells (for d = 2 always +1).
    pub chain: ChainVector,
    /// Nonzero check values produced by this component alone, in `[0, d)`.
    pub boundary: ChainVector,
}

impl ErrorComponent {
    /// Violated check cells of this component.
    pub fn checks(&self) -> Vec<&str> {
        self.boundary.coeffs.keys().map(String::as_str).collect()
    }
}

/// Splits an error into degree-1 oriented components.
///
/// Every cell value `v` becomes `v` unit errors of residue 1 or `d − v` of
/// residue `d − 1`, whichever is fewer. Components grow from the smallest
/// remaining unit across checks touched by exactly one component cell,
/// pasting a unit only if it cancels the component's value there and no
/// check ends up with more than two component cells. When only a
/// disagreeing unit is available it is rewritten as `d − 1` agreeing units
/// before pasting.
///
/// The V-part is glued along shared (k−1)-faces; the P-part along shared
/// (k+1)-cofaces, which are the shared faces of the corresponding dual cells.
pub fn decompose_error(code: &HomologicalCode, e: &ErrorConfig) -> Result<Vec<ErrorComponent>> {
    let (x, z) = e.check(code)?;
    let (v_part, p_part) = match code.mode() {
        CodeMode::Homology => (x, z),
        CodeMode::Cohomology => (z, x),
    };
    let c = code.complex();
    let k = code.degree();
    let d = code.modulus() as i64;

    let faces: Vec<Vec<(usize, i64)>> = (0..c.cell_count(k))
        .map(|i| c.faces_of(k, i).to_vec())
        .collect();
    let cofaces: Vec<Vec<(usize, i64)>> = (0..c.cell_count(k))
        .map(|i| c.cofaces_of(k, i).to_vec())
        .collect();

    let v_degree = k.checked_sub(1);

    let mut out = Vec::new();
    if let Some(vd) = v_degree {
        for comp in grow(&v_part, &faces, c.cell_count(vd), d) {
            out.push(component(code, ComponentKind::V, vd, &comp, &faces, d));
        }
    }
    for comp in grow(&p_part, &cofaces, c.cell_count(k + 1), d) {
        out.push(component(code, ComponentKind::P, k + 1, &comp, &cofaces, d));
    }
    Ok(out)
}

fn component(
    code: &HomologicalCode,
    kind: ComponentKind,
    check_degree: usize,
    cells: &BTreeMap<usize, i64>,
    incidence: &[Vec<(usize, i64)>],
    d: i64,
) -> ErrorComponent {
    let c = code.complex();
    let k = code.degree();
    let signed = |r: i64| if r == 1 { 1 } else { -1 };
    let chain = ChainVector {
        degree: k,
        coeffs: cells
            .iter()
            .map(|(&i, &r)| (c.id(k, i).to_string(), signed(r)))
            .collect(),
    };
    let mut b = vec![0i64; c.cell_count(check_degree)];
    for (&i, &r) in cells {
        for &(f, o) in &incidence[i] {
            b[f] = (b[f] + r * o).rem_euclid(d);
        }
    }
    ErrorComponent {
        kind,
        chain,
        boundary: ChainVector::from_dense(c, check_degree, &b),
    }
}

/// Unit-error pool: per cell, counts of residue-1 and residue-(d−1) units.
struct Pool {
    counts: Vec<BTreeMap<i64, usize>>,
}

impl Pool {
    fn take(&mut self, cell: usize, residue: i64) -> bool {
        match self.counts[cell].get_mut(&residue) {
            Some(n) if *n > 0 => {
                *n -= 1;
                if *n == 0 {
                    self.counts[cell].remove(&residue);
                }
                true
            }
            _ => false,
        }
    }

    fn add(&mut self, cell: usize, residue: i64, n: usize) {
        if n > 0 {
            *self.counts[cell].entry(residue).or_insert(0) += n;
        }
    }

    fn first(&self) -> Option<(usize, i64)> {
        self.counts
            .iter()
            .enumerate()
            .find_map(|(i, m)| m.keys().next().map(|&r| (i, r)))
    }
}

fn grow(
    values: &[i64],
    incidence: &[Vec<(usize, i64)>],
    n_checks: usize,
    d: i64,
) -> Vec<BTreeMap<usize, i64>> {
    let mut pool = Pool {
        counts: vec![BTreeMap::new(); values.len()],
    };
    for (i, &v) in values.iter().enumerate() {
        let v = v.rem_euclid(d);
        if v == 0 {
            continue;
        }
        if v <= d - v {
            pool.add(i, 1, v as usize);
        } else {
            pool.add(i, d - 1, (d - v) as usize);
        }
    }

    // check -> cells incident to it, ascending
    let mut touching: Vec<Vec<(usize, i64)>> = vec![Vec::new(); n_checks];
    for (i, inc) in incidence.iter().enumerate() {
        for &(f, o) in inc {
            touching[f].push((i, o));
        }
    }

    let mut components = Vec::new();
    while let Some((seed, r)) = pool.first() {
        pool.take(seed, r);
        let mut cells: BTreeMap<usize, i64> = BTreeMap::from([(seed, r)]);
        // check -> (value mod d, number of component cells touching it)
        let mut at: BTreeMap<usize, (i64, usize)> = BTreeMap::new();
        let paste = |at: &mut BTreeMap<usize, (i64, usize)>, cell: usize, r: i64| {
            for &(f, o) in &incidence[cell] {
                let e = at.entry(f).or_insert((0, 0));
                e.0 = (e.0 + r * o).rem_euclid(d);
                e.1 += 1;
            }
        };
        paste(&mut at, seed, r);

        loop {
            let mut grown = false;
            let open: Vec<(usize, i64)> = at
                .iter()
                .filter(|(_, &(v, n))| n == 1 && v != 0)
                .map(|(&f, &(v, _))| (f, v))
                .collect();
            'checks: for (f, val) in open {
                for &(j, o) in &touching[f] {
                    if cells.contains_key(&j) || pool.counts[j].is_empty() {
                        continue;
                    }
                    let fits = incidence[j]
                        .iter()
                        .all(|&(g, _)| at.get(&g).map_or(0, |e| e.1) < 2);
                    if !fits {
                        continue;
                    }
                    // residue t with val + t·o ≡ 0
                    let want = (-val * o).rem_euclid(d);
                    if !pool.take(j, want) {
                        let other = (d - want).rem_euclid(d);
                        if !pool.take(j, other) {
                            continue;
                        }
                        // −t ≡ (d − 1)·t: keep d − 2 of the rewritten units
                        pool.add(j, want, (d - 2) as usize);
                    }
                    cells.insert(j, want);
                    paste(&mut at, j, want);
                    grown = true;
                    break 'checks;
                }
            }
            if !grown {
                break;
            }
        }
        components.push(cells);
    }
    components
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::syndrome;
    use crate::complex::{circle, torus_grid};
    use crate::stabilizer::build_code;

    fn sum_and_check(code: &HomologicalCode, e: &ErrorConfig) -> Vec<ErrorComponent> {
        let comps = decompose_error(code, e).unwrap();
        let d = code.modulus();
        let k = code.degree();
        let mut v = ChainVector::zero(k);
        let mut p = ChainVector::zero(k);
        let s = syndrome(code, e).unwrap();
        let mut vb = ChainVector::zero(s.v_violations.degree);
        let mut pb = ChainVector::zero(k + 1);
        for c in &comps {
            match c.kind {
                ComponentKind::V => {
                    v = v.add_scaled(&c.chain, 1, Some(d)).unwrap();
                    vb = vb.add_scaled(&c.boundary, 1, Some(d)).unwrap();
                }
                ComponentKind::P => {
                    p = p.add_scaled(&c.chain, 1, Some(d)).unwrap();
                    pb = pb.add_scaled(&c.boundary, 1, Some(d)).unwrap();
                }
            }
        }
        let (v_part, p_part) = match code.mode() {
            CodeMode::Homology => (&e.x_part, &e.z_part),
            CodeMode::Cohomology => (&e.z_part, &e.x_part),
        };
        assert_eq!(v, v_part.reduced(d));
        assert_eq!(p, p_part.reduced(d));
        assert_eq!(vb, s.v_violations.reduced(d));
        assert_eq!(pb, s.p_violations.reduced(d));
        comps
    }

    #[test]
    fn single_cell() {
        let code = build_code(&circle(4).unwrap(), 1, 3, CodeMode::Homology).unwrap();
        let e = ErrorConfig::x_only(3, ChainVector::from_pairs(1, [("e1", 1)]));
        let comps = sum_and_check(&code, &e);
        assert_eq!(comps.len(), 1);
        assert_eq!(comps[0].checks(), vec!["v1", "v2"]);
    }

    #[test]
    fn adjacent_same_orientation_merge() {
        let code = build_code(&circle(4).unwrap(), 1, 3, CodeMode::Homology).unwrap();
        let e = ErrorConfig::x_only(3, ChainVector::from_pairs(1, [("e0", 1), ("e1", 1)]));
        let comps = sum_and_check(&code, &e);
        assert_eq!(comps.len(), 1);
        assert_eq!(comps[0].chain.coeffs.len(), 2);
        // the shared vertex is not violated
        assert!(!comps[0].checks().contains(&"v1"));
    }

    #[test]
    fn degree_two_stacks() {
        let code = build_code(&circle(4).unwrap(), 1, 5, CodeMode::Homology).unwrap();
        let e = ErrorConfig::x_only(5, ChainVector::from_pairs(1, [("e2", 2)]));
        let comps = sum_and_check(&code, &e);
        assert_eq!(comps.len(), 2);
        assert!(comps.iter().all(|c| c.chain.coeffs.len() == 1));
    }

    #[test]
    fn disagreeing_orientation_is_rewritten() {
        // e0 = +1 and e1 = −1 in ℤ₃: the −1 becomes 2·(+1), one pastes
        let code = build_code(&circle(4).unwrap(), 1, 3, CodeMode::Homology).unwrap();
        let e = ErrorConfig::x_only(3, ChainVector::from_pairs(1, [("e0", 1), ("e1", -1)]));
        let comps = sum_and_check(&code, &e);
        assert_eq!(comps.len(), 2);
    }

    #[test]
    fn mixed_torus_errors() {
        let t = torus_grid(3, 3).unwrap();
        for mode in [CodeMode::Homology, CodeMode::Cohomology] {
            let code = build_code(&t, 1, 3, mode).unwrap();
            let e = ErrorConfig {
                d: 3,
                x_part: ChainVector::from_pairs(1, [("eh0_0", 1), ("eh1_0", 2), ("ev2_2", 1)]),
                z_part: ChainVector::from_pairs(1, [("eh0_1", 1), ("ev0_1", 1), ("ev1_1", 2)]),
            };
            sum_and_check(&code, &e);
        }
    }
}
