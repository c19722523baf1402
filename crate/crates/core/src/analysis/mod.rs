//! Error analysis for homological codes: syndromes, the decomposition of an
//! error into degree-1 connected components, distance by exhaustive search,
//! minimum-weight decoding and the energy barrier.

mod decompose;
mod search;

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

pub use decompose::{decompose_error, ComponentKind, ErrorComponent};
pub use search::{
    code_distance, code_distance_with_budget, decode_min_weight, decode_success, energy_barrier,
    DecodeOutcome, DistanceReport, DistanceResult, DEFAULT_SEARCH_BUDGET, MAX_BARRIER_SITES,
};

use crate::complex::CellComplex;
use crate::error::{Error, Result};
use crate::homology::ChainVector;
use crate::matrix::IntMatrix;
use crate::stabilizer::{symplectic_phase, CodeMode, HomologicalCode, QuditPauliOperator};

/// An error `X^{x_part} Z^{z_part}` on the code sites.
///
/// JSON: `{"d": 2, "x_part": {"degree": 1, "coeffs": {...}}, "z_part": {...}}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ErrorConfig {
    pub d: u64,
    pub x_part: ChainVector,
    pub z_part: ChainVector,
}

impl ErrorConfig {
    pub fn zero(d: u64, k: usize) -> Self {
        Self {
            d,
            x_part: ChainVector::zero(k),
            z_part: ChainVector::zero(k),
        }
    }

    pub fn x_only(d: u64, x: ChainVector) -> Self {
        let k = x.degree;
        Self {
            d,
            x_part: x,
            z_part: ChainVector::zero(k),
        }
    }

    pub fn z_only(d: u64, z: ChainVector) -> Self {
        let k = z.degree;
        Self {
            d,
            x_part: ChainVector::zero(k),
            z_part: z,
        }
    }

    pub fn operator(&self) -> QuditPauliOperator {
        QuditPauliOperator::new(
            self.d,
            self.x_part.coeffs.iter().map(|(k, &v)| (k.as_str(), v)),
            self.z_part.coeffs.iter().map(|(k, &v)| (k.as_str(), v)),
            0,
        )
    }

    /// Total number of sites carrying an X or Z error.
    pub fn weight(&self) -> usize {
        self.operator().weight()
    }

    fn check(&self, code: &HomologicalCode) -> Result<(Vec<i64>, Vec<i64>)> {
        if self.d != code.modulus() {
            return Err(Error::ModulusMismatch(self.d, code.modulus()));
        }
        let x = self.x_part.to_dense(code.complex())?;
        let z = self.z_part.to_dense(code.complex())?;
        for part in [&self.x_part, &self.z_part] {
            if part.degree != code.degree() {
                return Err(Error::DegreeMismatch {
                    expected: code.degree(),
                    got: part.degree,
                });
            }
        }
        Ok((x, z))
    }
}

/// Violation exponents of the V-checks ((k−1)-cells) and P-checks
/// ((k+1)-cells). Only nonzero entries are stored.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Syndrome {
    pub d: u64,
    pub v_violations: ChainVector,
    pub p_violations: ChainVector,
}

impl Syndrome {
    pub fn empty(d: u64, k: usize) -> Self {
        Self {
            d,
            v_violations: ChainVector::zero(k.saturating_sub(1)),
            p_violations: ChainVector::zero(k + 1),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.v_violations.is_zero(Some(self.d)) && self.p_violations.is_zero(Some(self.d))
    }

    /// Number of violated checks.
    pub fn weight(&self) -> usize {
        self.v_violations.weight(Some(self.d)) + self.p_violations.weight(Some(self.d))
    }

    /// Componentwise sum modulo d.
    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.d != other.d {
            return Err(Error::ModulusMismatch(self.d, other.d));
        }
        Ok(Self {
            d: self.d,
            v_violations: self
                .v_violations
                .add_scaled(&other.v_violations, 1, Some(self.d))?,
            p_violations: self
                .p_violations
                .add_scaled(&other.p_violations, 1, Some(self.d))?,
        })
    }
}

/// Column-sparse copy of an integer matrix with small entries.
#[derive(Clone, Debug)]
pub(crate) struct SparseCols {
    pub rows: usize,
    pub cols: Vec<Vec<(usize, i64)>>,
}

impl SparseCols {
    pub fn new(m: &IntMatrix) -> Self {
        let cols = (0..m.cols())
            .map(|j| {
                (0..m.rows())
                    .filter_map(|i| {
                        let v = m.get(i, j).to_i64().expect("small entry");
                        (v != 0).then_some((i, v))
                    })
                    .collect()
            })
            .collect();
        Self {
            rows: m.rows(),
            cols,
        }
    }

    /// `M x mod d`.
    pub fn apply(&self, x: &[i64], d: i64) -> Vec<i64> {
        let mut out = vec![0i64; self.rows];
        for (col, &xv) in self.cols.iter().zip(x) {
            if xv == 0 {
                continue;
            }
            for &(i, v) in col {
                out[i] = (out[i] + v * xv).rem_euclid(d);
            }
        }
        out
    }
}

/// Cells indexing the rows of the X- and Z-check matrices.
pub(crate) fn check_degrees(code: &HomologicalCode) -> (Option<usize>, Option<usize>) {
    let k = code.degree();
    let below = k.checked_sub(1);
    let above = Some(k + 1);
    match code.mode() {
        CodeMode::Homology => (below, above),
        CodeMode::Cohomology => (above, below),
    }
}

fn to_chain(c: &CellComplex, degree: Option<usize>, values: &[i64]) -> ChainVector {
    match degree {
        Some(k) => ChainVector::from_dense(c, k, values),
        None => ChainVector::zero(0),
    }
}

/// Syndrome of an error: in homology mode `v = ∂(x_part)`, `p = δ(z_part)`;
/// in cohomology mode `v = ∂(z_part)`, `p = δ(x_part)`. Values are reduced
/// into `[0, d)`.
pub fn syndrome(code: &HomologicalCode, e: &ErrorConfig) -> Result<Syndrome> {
    let (x, z) = e.check(code)?;
    let d = code.modulus() as i64;
    let c = code.complex();
    let xs = SparseCols::new(&code.x_check_matrix()).apply(&x, d);
    let zs = SparseCols::new(&code.z_check_matrix()).apply(&z, d);
    let (xdeg, zdeg) = check_degrees(code);
    let xs = to_chain(c, xdeg, &xs);
    let zs = to_chain(c, zdeg, &zs);
    let (v, p) = match code.mode() {
        CodeMode::Homology => (xs, zs),
        CodeMode::Cohomology => (zs, xs),
    };
    let mut out = Syndrome::empty(code.modulus(), code.degree());
    if code.degree() > 0 {
        out.v_violations = v;
    }
    out.p_violations = p;
    Ok(out)
}

/// The same syndrome read off commutation exponents: a Z-type check `S`
/// reports `phase(S, E)`, an X-type check reports `phase(E, S)`. Both equal
/// the exponent of `ζ` that `S` picks up on `E|ψ⟩` for a fixed `|ψ⟩`, up to
/// the sign convention of the check type.
pub fn syndrome_from_phases(code: &HomologicalCode, e: &ErrorConfig) -> Result<Syndrome> {
    e.check(code)?;
    let op = e.operator();
    let read = |s: &QuditPauliOperator| -> Result<i64> {
        if s.is_z_type() {
            symplectic_phase(s, &op)
        } else {
            symplectic_phase(&op, s)
        }
    };
    let k = code.degree();
    let mut out = Syndrome::empty(code.modulus(), k);
    for s in code.v_stabilizers() {
        let v = read(&s.op)?;
        if v != 0 {
            out.v_violations.coeffs.insert(s.cell.clone(), v);
        }
    }
    for s in code.p_stabilizers() {
        let v = read(&s.op)?;
        if v != 0 {
            out.p_violations.coeffs.insert(s.cell.clone(), v);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{circle, torus_grid};
    use crate::stabilizer::build_code;

    #[test]
    fn boundaries_are_silent() {
        let t = torus_grid(3, 3).unwrap();
        let code = build_code(&t, 1, 3, CodeMode::Homology).unwrap();
        let p = &code.p_stabilizers()[4].op;
        let e = ErrorConfig::x_only(
            3,
            ChainVector {
                degree: 1,
                coeffs: p.x.clone(),
            },
        );
        assert!(syndrome(&code, &e).unwrap().is_empty());
    }

    #[test]
    fn single_edge_on_torus() {
        let code = build_code(&torus_grid(3, 3).unwrap(), 1, 2, CodeMode::Homology).unwrap();
        let e = ErrorConfig::x_only(2, ChainVector::from_pairs(1, [("eh0_0", 1)]));
        let s = syndrome(&code, &e).unwrap();
        assert_eq!(s.v_violations.weight(Some(2)), 2);
        assert!(s.p_violations.is_zero(None));
        assert_eq!(s, syndrome_from_phases(&code, &e).unwrap());
    }

    #[test]
    fn logical_is_silent() {
        let code = build_code(&circle(4).unwrap(), 1, 3, CodeMode::Homology).unwrap();
        let x = ChainVector {
            degree: 1,
            coeffs: code.x_logicals()[0].op.x.clone(),
        };
        assert!(syndrome(&code, &ErrorConfig::x_only(3, x))
            .unwrap()
            .is_empty());
    }

    #[test]
    fn phases_agree_in_both_modes() {
        let t = torus_grid(2, 3).unwrap();
        for mode in [CodeMode::Homology, CodeMode::Cohomology] {
            let code = build_code(&t, 1, 5, mode).unwrap();
            let e = ErrorConfig {
                d: 5,
                x_part: ChainVector::from_pairs(1, [("eh0_0", 1), ("ev1_2", 3)]),
                z_part: ChainVector::from_pairs(1, [("eh1_1", 2), ("ev0_0", 4)]),
            };
            assert_eq!(
                syndrome(&code, &e).unwrap(),
                syndrome_from_phases(&code, &e).unwrap()
            );
        }
    }

    #[test]
    fn mismatches_rejected() {
        let code = build_code(&circle(3).unwrap(), 1, 3, CodeMode::Homology).unwrap();
        let e = ErrorConfig::zero(2, 1);
        assert!(matches!(
            syndrome(&code, &e),
            Err(Error::ModulusMismatch(2, 3))
        ));
        let e = ErrorConfig::x_only(3, ChainVector::from_pairs(0, [("v0", 1)]));
        assert!(syndrome(&code, &e).is_err());
    }
}
