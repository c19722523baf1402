//! Homological qudit stabilizer codes.
//!
//! In homology mode the sites are the k-cells, `V_α = Π Z_i^{O(i,α)}` sits on
//! every (k−1)-cell and `P_γ = Π X_i^{O(γ,i)}` on every (k+1)-cell; the code
//! space is spanned by homology classes of k-chains. Cohomology mode swaps the
//! roles: the (k−1)-cell checks are X-type shifts by `δ(α)` and the
//! (k+1)-cell checks are Z-type phases reading `δ`, so the code space is
//! spanned by cohomology classes.

mod pauli;

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use pauli::{symplectic_phase, QuditPauliOperator};

use crate::complex::CellComplex;
use crate::error::{Error, Result};
use crate::homology::{
    class_representatives, cocycle_representatives, cohomology, homology, smith_normal_form,
    ChainVector, FgAbelianGroup,
};
use crate::matrix::IntMatrix;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CodeMode {
    #[default]
    Homology,
    Cohomology,
}

impl fmt::Display for CodeMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CodeMode::Homology => "homology",
            CodeMode::Cohomology => "cohomology",
        })
    }
}

impl std::str::FromStr for CodeMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "homology" => Ok(CodeMode::Homology),
            "cohomology" => Ok(CodeMode::Cohomology),
            _ => Err(Error::Parse(format!("unknown code mode `{s}`"))),
        }
    }
}

/// A stabilizer generator together with the cell it is attached to.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stabilizer {
    pub cell: String,
    pub op: QuditPauliOperator,
}

/// A logical operator and the additive order of its class.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LogicalOperator {
    pub op: QuditPauliOperator,
    pub order: u64,
}

/// Whether the Z-logicals could be rebased so that the pairing matrix
/// `phase(Z_i, X_j)` becomes the identity over ℤ_d.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "status")]
pub enum LogicalPairing {
    Identity,
    /// The raw pairing matrix is not invertible over ℤ_d; logicals are left
    /// as extracted.
    Degenerate {
        matrix: Vec<Vec<i64>>,
    },
}

#[derive(Clone, Debug)]
pub struct HomologicalCode {
    complex: CellComplex,
    k: usize,
    d: u64,
    mode: CodeMode,
    v_stabilizers: Vec<Stabilizer>,
    p_stabilizers: Vec<Stabilizer>,
    x_logicals: Vec<LogicalOperator>,
    z_logicals: Vec<LogicalOperator>,
    pairing: LogicalPairing,
}

fn chain_to_op(d: u64, chain: &ChainVector, x_type: bool) -> QuditPauliOperator {
    let pairs = chain.coeffs.iter().map(|(k, &v)| (k.as_str(), v));
    if x_type {
        QuditPauliOperator::new(d, pairs, [], 0)
    } else {
        QuditPauliOperator::new(d, [], pairs, 0)
    }
}

/// Inverse of a square matrix over ℤ_d, `None` unless it is unimodular there.
fn inverse_mod(m: &[Vec<i64>], d: u64) -> Option<Vec<Vec<i64>>> {
    let n = m.len();
    let s = smith_normal_form(&IntMatrix::from_i64_rows(n, n, m));
    if s.rank() < n {
        return None;
    }
    let db = BigInt::from(d);
    let mut dinv = Vec::with_capacity(n);
    for x in &s.diagonal {
        let e = x.mod_floor(&db).extended_gcd(&db);
        if !e.gcd.is_one() {
            return None;
        }
        dinv.push(e.x);
    }
    // M = U⁻¹ D V⁻¹  ⇒  M⁻¹ = V D⁻¹ U
    Some(
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        (0..n)
                            .map(|t| s.v.get(i, t) * &dinv[t] * s.u.get(t, j))
                            .fold(BigInt::from(0), |a, b| a + b)
                            .mod_floor(&db)
                            .to_i64()
                            .unwrap()
                    })
                    .collect()
            })
            .collect(),
    )
}

/// Builds the code of degree `k` over ℤ_d.
pub fn build_code(c: &CellComplex, k: usize, d: u64, mode: CodeMode) -> Result<HomologicalCode> {
    c.require_admissible()?;
    if k > c.dimension() {
        return Err(Error::Range {
            what: "k",
            value: k as i64,
            allowed: format!("0..={}", c.dimension()),
        });
    }
    if d < 2 {
        return Err(Error::Range {
            what: "d",
            value: d as i64,
            allowed: ">= 2".into(),
        });
    }
    let homology_mode = mode == CodeMode::Homology;

    let mut v_stabilizers = Vec::new();
    if k > 0 {
        for (a, cell) in c.cells(k - 1).iter().enumerate() {
            let exps: Vec<(&str, i64)> = c
                .cofaces_of(k - 1, a)
                .iter()
                .map(|&(i, o)| (c.id(k, i), o))
                .collect();
            let op = if homology_mode {
                QuditPauliOperator::new(d, [], exps, 0)
            } else {
                QuditPauliOperator::new(d, exps, [], 0)
            };
            v_stabilizers.push(Stabilizer {
                cell: cell.id.clone(),
                op,
            });
        }
    }
    let mut p_stabilizers = Vec::new();
    for (g, cell) in c.cells(k + 1).iter().enumerate() {
        let exps: Vec<(&str, i64)> = c
            .faces_of(k + 1, g)
            .iter()
            .map(|&(i, o)| (c.id(k, i), o))
            .collect();
        let op = if homology_mode {
            QuditPauliOperator::new(d, exps, [], 0)
        } else {
            QuditPauliOperator::new(d, [], exps, 0)
        };
        p_stabilizers.push(Stabilizer {
            cell: cell.id.clone(),
            op,
        });
    }

    let cycles = class_representatives(c, k, d)?;
    let cocycles = cocycle_representatives(c, k, d)?;
    // X-logicals move between basis classes, Z-logicals read them.
    let (x_reps, z_reps) = if homology_mode {
        (cycles, cocycles)
    } else {
        (cocycles, cycles)
    };
    let x_logicals: Vec<LogicalOperator> = x_reps
        .iter()
        .map(|r| LogicalOperator {
            op: chain_to_op(d, &r.chain, true),
            order: r.order,
        })
        .collect();
    let mut z_logicals: Vec<LogicalOperator> = z_reps
        .iter()
        .map(|r| LogicalOperator {
            op: chain_to_op(d, &r.chain, false),
            order: r.order,
        })
        .collect();

    let raw: Vec<Vec<i64>> = z_logicals
        .iter()
        .map(|z| {
            x_logicals
                .iter()
                .map(|x| symplectic_phase(&z.op, &x.op).expect("same modulus"))
                .collect()
        })
        .collect();
    let pairing = if raw.len() != x_logicals.len() {
        LogicalPairing::Degenerate { matrix: raw }
    } else {
        match inverse_mod(&raw, d) {
            Some(inv) => {
                // Z'_i = Σ_j inv[i][j] Z_j gives phase(Z'_i, X_l) = δ_il
                let rebased: Vec<LogicalOperator> = inv
                    .iter()
                    .zip(&x_logicals)
                    .map(|(row, x)| {
                        let op = row.iter().zip(&z_logicals).fold(
                            QuditPauliOperator::identity(d),
                            |acc, (&coef, z)| {
                                acc.compose(&z.op.pow(coef as u64)).expect("same modulus")
                            },
                        );
                        LogicalOperator { op, order: x.order }
                    })
                    .collect();
                z_logicals = rebased;
                LogicalPairing::Identity
            }
            None => LogicalPairing::Degenerate { matrix: raw },
        }
    };

    Ok(HomologicalCode {
        complex: c.clone(),
        k,
        d,
        mode,
        v_stabilizers,
        p_stabilizers,
        x_logicals,
        z_logicals,
        pairing,
    })
}

/// Result of checking every stabilizer pair for commutation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CommutationReport {
    pub pairs_checked: usize,
    /// (cell, cell, phase exponent) for every non-commuting pair.
    pub failures: Vec<(String, String, i64)>,
}

impl CommutationReport {
    pub fn all_commute(&self) -> bool {
        self.failures.is_empty()
    }
}

impl HomologicalCode {
    pub fn complex(&self) -> &CellComplex {
        &self.complex
    }

    pub fn degree(&self) -> usize {
        self.k
    }

    pub fn modulus(&self) -> u64 {
        self.d
    }

    pub fn mode(&self) -> CodeMode {
        self.mode
    }

    /// Code sites: the k-cells in complex order.
    pub fn sites(&self) -> Vec<String> {
        self.complex.cell_ids(self.k)
    }

    pub fn n_qudits(&self) -> usize {
        self.complex.cell_count(self.k)
    }

    pub fn v_stabilizers(&self) -> &[Stabilizer] {
        &self.v_stabilizers
    }

    pub fn p_stabilizers(&self) -> &[Stabilizer] {
        &self.p_stabilizers
    }

    /// V-stabilizers followed by P-stabilizers.
    pub fn stabilizers(&self) -> impl Iterator<Item = &Stabilizer> {
        self.v_stabilizers.iter().chain(&self.p_stabilizers)
    }

    pub fn x_logicals(&self) -> &[LogicalOperator] {
        &self.x_logicals
    }

    pub fn z_logicals(&self) -> &[LogicalOperator] {
        &self.z_logicals
    }

    pub fn pairing(&self) -> &LogicalPairing {
        &self.pairing
    }

    /// Number of independent logical generators (one per invariant factor).
    pub fn n_logical(&self) -> usize {
        self.x_logicals.len()
    }

    /// The group whose group algebra is the code space.
    pub fn logical_group(&self) -> FgAbelianGroup {
        let g = FgAbelianGroup::cyclic(self.d);
        match self.mode {
            CodeMode::Homology => homology(&self.complex, self.k, &g),
            CodeMode::Cohomology => cohomology(&self.complex, self.k, &g),
        }
        .expect("degree checked at build time")
    }

    /// `"[[n, k]]_d"`, or `"[[n, k, dist]]_d"` once a distance is known.
    pub fn summary(&self, distance: Option<usize>) -> String {
        match distance {
            Some(w) => format!(
                "[[{}, {}, {}]]_{}",
                self.n_qudits(),
                self.n_logical(),
                w,
                self.d
            ),
            None => format!("[[{}, {}]]_{}", self.n_qudits(), self.n_logical(), self.d),
        }
    }

    /// Exhaustive pairwise commutation check over all stabilizers.
    pub fn check_commutation(&self) -> CommutationReport {
        let all: Vec<&Stabilizer> = self.stabilizers().collect();
        let pairs: Vec<(usize, usize)> = (0..all.len())
            .flat_map(|i| (i + 1..all.len()).map(move |j| (i, j)))
            .collect();
        let failures = pairs
            .par_iter()
            .filter_map(|&(i, j)| {
                let e = symplectic_phase(&all[i].op, &all[j].op).expect("same modulus");
                (e != 0).then(|| (all[i].cell.clone(), all[j].cell.clone(), e))
            })
            .collect();
        CommutationReport {
            pairs_checked: pairs.len(),
            failures,
        }
    }

    /// Matrix reading X-error syndromes: homology mode `∂_k`, cohomology mode `δ_k`.
    pub fn x_check_matrix(&self) -> IntMatrix {
        match self.mode {
            CodeMode::Homology => self.complex.boundary_matrix_ext(self.k),
            CodeMode::Cohomology => self.complex.boundary_matrix_ext(self.k + 1).transpose(),
        }
    }

    /// Matrix reading Z-error syndromes.
    pub fn z_check_matrix(&self) -> IntMatrix {
        match self.mode {
            CodeMode::Homology => self.complex.boundary_matrix_ext(self.k + 1).transpose(),
            CodeMode::Cohomology => self.complex.boundary_matrix_ext(self.k),
        }
    }

    /// Columns are the X exponents of the X-type stabilizers.
    pub fn x_stabilizer_matrix(&self) -> IntMatrix {
        match self.mode {
            CodeMode::Homology => self.complex.boundary_matrix_ext(self.k + 1),
            CodeMode::Cohomology => self.complex.boundary_matrix_ext(self.k).transpose(),
        }
    }

    /// Columns are the Z exponents of the Z-type stabilizers.
    pub fn z_stabilizer_matrix(&self) -> IntMatrix {
        match self.mode {
            CodeMode::Homology => self.complex.boundary_matrix_ext(self.k).transpose(),
            CodeMode::Cohomology => self.complex.boundary_matrix_ext(self.k + 1),
        }
    }

    /// `|H_k(c; ℤ_d)|` (homology mode) or `|H^k(c; ℤ_d)|`.
    pub fn code_dimension(&self) -> BigUint {
        self.logical_group().order().expect("finite coefficients")
    }

    /// Combinatorial shadow of a stabilizer product on a basis chain: each
    /// `(S, m)` adds `m` times the X exponents of `S`; Z-type factors act
    /// diagonally and leave the chain unchanged.
    pub fn apply_stabilizer_product(
        &self,
        ops: &[(&QuditPauliOperator, i64)],
        chain: &ChainVector,
    ) -> Result<ChainVector> {
        if chain.degree != self.k {
            return Err(Error::DegreeMismatch {
                expected: self.k,
                got: chain.degree,
            });
        }
        let mut out = chain.reduced(self.d);
        for (op, m) in ops {
            if op.d != self.d {
                return Err(Error::ModulusMismatch(op.d, self.d));
            }
            let shift = ChainVector {
                degree: self.k,
                coeffs: op.x.clone(),
            };
            out = out.add_scaled(&shift, *m, Some(self.d))?;
        }
        Ok(out)
    }

    /// Serializable summary of the code.
    pub fn report(&self) -> CodeReport {
        CodeReport {
            complex: self.complex.label().to_string(),
            k: self.k,
            d: self.d,
            mode: self.mode,
            n_qudits: self.n_qudits(),
            n_logical: self.n_logical(),
            logical_group: self.logical_group().to_string(),
            code_dimension: self.code_dimension().to_string(),
            summary: self.summary(None),
            v_stabilizers: self.v_stabilizers.clone(),
            p_stabilizers: self.p_stabilizers.clone(),
            x_logicals: self.x_logicals.clone(),
            z_logicals: self.z_logicals.clone(),
            pairing: self.pairing.clone(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CodeReport {
    pub complex: String,
    pub k: usize,
    pub d: u64,
    pub mode: CodeMode,
    pub n_qudits: usize,
    pub n_logical: usize,
    pub logical_group: String,
    pub code_dimension: String,
    pub summary: String,
    pub v_stabilizers: Vec<Stabilizer>,
    pub p_stabilizers: Vec<Stabilizer>,
    pub x_logicals: Vec<LogicalOperator>,
    pub z_logicals: Vec<LogicalOperator>,
    pub pairing: LogicalPairing,
}
