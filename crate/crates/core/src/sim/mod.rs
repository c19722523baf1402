//! Dense state-vector simulation of small homological codes.
//!
//! Basis states are k-chains over ℤ_d: the index of a chain `v` is
//! `Σ v_i d^i` with sites in complex order, so site 0 is the fastest digit.
//! Everything here is an oracle for the combinatorial modules and refuses to
//! run beyond a dimension guard.

use std::collections::{HashMap, HashSet, VecDeque};
use std::f64::consts::TAU;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::homology::ChainVector;
use crate::stabilizer::{symplectic_phase, HomologicalCode, QuditPauliOperator};

/// Default guard on the Hilbert-space dimension `d^{n_k}`.
pub const DEFAULT_MAX_DIM: usize = 1 << 20;

/// Singular values below this fraction of the largest are treated as zero.
pub const RANK_TOLERANCE: f64 = 1e-9;

const PAR_THRESHOLD: usize = 1 << 12;

pub type State = Vec<Complex64>;

/// An operator the simulator can apply.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DenseOperator {
    Pauli(QuditPauliOperator),
    /// Projector onto basis chains `v` with `Σ z_i v_i ≡ 0 (mod d)`.
    DiagonalProjector {
        z: Vec<i64>,
    },
    /// Projector onto orbit sums `Σ_j |v + j·x⟩`.
    OrbitProjector {
        x: Vec<i64>,
    },
}

/// Dense simulator bound to one code.
pub struct Simulator<'a> {
    code: &'a HomologicalCode,
    d: u64,
    n: usize,
    dim: usize,
    site_index: HashMap<String, usize>,
    roots: Vec<Complex64>,
}

fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}

fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// Largest entrywise distance between two vectors.
pub fn max_abs_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

impl<'a> Simulator<'a> {
    pub fn new(code: &'a HomologicalCode) -> Result<Self> {
        Self::with_max_dim(code, DEFAULT_MAX_DIM)
    }

    pub fn with_max_dim(code: &'a HomologicalCode, max_dim: usize) -> Result<Self> {
        let d = code.modulus();
        let n = code.n_qudits();
        let dim = (0..n)
            .try_fold(1usize, |acc, _| acc.checked_mul(d as usize))
            .filter(|&dim| dim <= max_dim)
            .ok_or_else(|| {
                Error::Capacity(format!(
                    "{d}^{n} exceeds the dense simulation guard of {max_dim}"
                ))
            })?;
        let site_index = code
            .sites()
            .into_iter()
            .enumerate()
            .map(|(i, s)| (s, i))
            .collect();
        let roots = (0..d)
            .map(|j| Complex64::from_polar(1.0, TAU * j as f64 / d as f64))
            .collect();
        Ok(Self {
            code,
            d,
            n,
            dim,
            site_index,
            roots,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn code(&self) -> &HomologicalCode {
        self.code
    }

    fn digits(&self, mut idx: usize) -> Vec<i64> {
        let d = self.d as usize;
        (0..self.n)
            .map(|_| {
                let r = idx % d;
                idx /= d;
                r as i64
            })
            .collect()
    }

    fn index_of(&self, digits: &[i64]) -> usize {
        let d = self.d as i64;
        digits.iter().rev().fold(0usize, |acc, &v| {
            acc * d as usize + v.rem_euclid(d) as usize
        })
    }

    fn dense_exponents(&self, m: &std::collections::BTreeMap<String, i64>) -> Result<Vec<i64>> {
        let mut out = vec![0; self.n];
        for (cell, &v) in m {
            let &i = self
                .site_index
                .get(cell)
                .ok_or_else(|| Error::UnknownCell(cell.clone()))?;
            out[i] = v.rem_euclid(self.d as i64);
        }
        Ok(out)
    }

    /// Basis index of a k-chain.
    pub fn basis_index(&self, chain: &ChainVector) -> Result<usize> {
        if chain.degree != self.code.degree() {
            return Err(Error::DegreeMismatch {
                expected: self.code.degree(),
                got: chain.degree,
            });
        }
        Ok(self.index_of(&self.dense_exponents(&chain.coeffs)?))
    }

    /// The chain labelling a basis index.
    pub fn chain_of(&self, idx: usize) -> ChainVector {
        ChainVector::from_dense(self.code.complex(), self.code.degree(), &self.digits(idx))
    }

    pub fn basis_state(&self, chain: &ChainVector) -> Result<State> {
        let mut s = vec![Complex64::new(0.0, 0.0); self.dim];
        s[self.basis_index(chain)?] = Complex64::new(1.0, 0.0);
        Ok(s)
    }

    /// Normalized random state with i.i.d. uniform real and imaginary parts.
    pub fn random_state(&self, rng: &mut impl Rng) -> State {
        let mut s: State = (0..self.dim)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let nrm = norm(&s);
        s.iter_mut().for_each(|c| *c /= nrm);
        s
    }

    fn map_indices(&self, f: impl Fn(usize) -> Complex64 + Sync + Send) -> State {
        if self.dim >= PAR_THRESHOLD {
            (0..self.dim).into_par_iter().map(f).collect()
        } else {
            (0..self.dim).map(f).collect()
        }
    }

    /// Exact action of `ζ^p X^x Z^z`: Z multiplies `|v⟩` by `ζ^{z·v}`, then X
    /// shifts every digit by its exponent.
    pub fn apply_pauli(&self, state: &[Complex64], op: &QuditPauliOperator) -> Result<State> {
        if op.d != self.d {
            return Err(Error::ModulusMismatch(op.d, self.d));
        }
        let x = self.dense_exponents(&op.x)?;
        let z = self.dense_exponents(&op.z)?;
        let d = self.d as i64;
        Ok(self.map_indices(|t| {
            let mut src = self.digits(t);
            for (v, xi) in src.iter_mut().zip(&x) {
                *v = (*v - xi).rem_euclid(d);
            }
            let e = op.phase + src.iter().zip(&z).map(|(v, zi)| v * zi).sum::<i64>();
            self.roots[e.rem_euclid(d) as usize] * state[self.index_of(&src)]
        }))
    }

    pub fn apply(&self, state: &[Complex64], op: &DenseOperator) -> Result<State> {
        let d = self.d as i64;
        match op {
            DenseOperator::Pauli(p) => self.apply_pauli(state, p),
            DenseOperator::DiagonalProjector { z } => Ok(self.map_indices(|t| {
                let v = self.digits(t);
                let s: i64 = v.iter().zip(z).map(|(a, b)| a * b).sum();
                if s.rem_euclid(d) == 0 {
                    state[t]
                } else {
                    Complex64::new(0.0, 0.0)
                }
            })),
            DenseOperator::OrbitProjector { x } => {
                let g = x
                    .iter()
                    .fold(d, |g, &v| num_integer::gcd(g, v.rem_euclid(d)));
                let orbit = d / g;
                Ok(self.map_indices(|t| {
                    let base = self.digits(t);
                    let sum: Complex64 = (0..orbit)
                        .map(|j| {
                            let w: Vec<i64> =
                                base.iter().zip(x).map(|(v, xi)| v + j * xi).collect();
                            state[self.index_of(&w)]
                        })
                        .sum();
                    sum / orbit as f64
                }))
            }
        }
    }

    /// `(1/d) Σ_m S^m`, the projector onto the +1 eigenspace of `S`.
    pub fn eigenprojector_apply(
        &self,
        state: &[Complex64],
        op: &QuditPauliOperator,
    ) -> Result<State> {
        if !op.pow(self.d).is_identity() {
            return Err(Error::Infeasible(
                "stabilizer power d is not the identity".into(),
            ));
        }
        let mut acc: State = state.to_vec();
        let mut cur: State = state.to_vec();
        for _ in 1..self.d {
            cur = self.apply_pauli(&cur, op)?;
            acc.iter_mut().zip(&cur).for_each(|(a, c)| *a += c);
        }
        let scale = 1.0 / self.d as f64;
        acc.iter_mut().for_each(|a| *a *= scale);
        Ok(acc)
    }

    /// Product of the eigenprojectors of every stabilizer: the projector onto
    /// the joint fixed space.
    pub fn code_projector_apply(&self, state: &[Complex64]) -> Result<State> {
        let mut s = state.to_vec();
        for st in self.code.stabilizers() {
            s = self.eigenprojector_apply(&s, &st.op)?;
        }
        Ok(s)
    }

    /// The projector-variant checks: diagonal masks for Z-type stabilizers,
    /// orbit averages for X-type ones.
    pub fn projector_stabilizers(&self) -> Result<Vec<(String, DenseOperator)>> {
        self.code
            .stabilizers()
            .map(|st| {
                let op = if st.op.is_z_type() {
                    DenseOperator::DiagonalProjector {
                        z: self.dense_exponents(&st.op.z)?,
                    }
                } else if st.op.is_x_type() {
                    DenseOperator::OrbitProjector {
                        x: self.dense_exponents(&st.op.x)?,
                    }
                } else {
                    return Err(Error::Infeasible(format!(
                        "stabilizer on `{}` is neither X- nor Z-type",
                        st.cell
                    )));
                };
                Ok((st.cell.clone(), op))
            })
            .collect()
    }

    fn projector_variant_apply(
        &self,
        projectors: &[(String, DenseOperator)],
        state: &[Complex64],
    ) -> Result<State> {
        let mut s = state.to_vec();
        for (_, p) in projectors {
            s = self.apply(&s, p)?;
        }
        Ok(s)
    }

    /// Orthonormal basis of the range of `project`, found by projecting
    /// seeded random vectors and thresholding the singular values of their
    /// span. The sample count doubles until it exceeds the rank found.
    fn range_basis(
        &self,
        seed: u64,
        project: impl Fn(&[Complex64]) -> Result<State>,
    ) -> Result<Vec<State>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut samples: Vec<State> = Vec::new();
        let mut want = self.dim.min(8);
        loop {
            while samples.len() < want {
                let r = self.random_state(&mut rng);
                samples.push(project(&r)?);
            }
            let basis = orthonormal_span(&samples);
            if basis.len() < samples.len() || samples.len() >= self.dim {
                return Ok(basis);
            }
            want = (want * 2).min(self.dim);
        }
    }

    /// Orthonormal basis of the joint fixed space of the Pauli stabilizers.
    pub fn ground_space_basis(&self, seed: u64) -> Result<Vec<State>> {
        self.range_basis(seed, |s| self.code_projector_apply(s))
    }

    pub fn ground_space_dimension(&self, seed: u64) -> Result<usize> {
        Ok(self.ground_space_basis(seed)?.len())
    }

    /// Uniform superposition over the orbit of `rep` under the X-type
    /// stabilizers, i.e. over every chain in the same class.
    pub fn class_state(&self, rep: &ChainVector) -> Result<State> {
        let shifts: Vec<Vec<i64>> = self
            .code
            .stabilizers()
            .filter(|s| !s.op.x.is_empty())
            .map(|s| self.dense_exponents(&s.op.x))
            .collect::<Result<_>>()?;
        let start = self.basis_index(rep)?;
        let mut seen = HashSet::from([start]);
        let mut queue = VecDeque::from([start]);
        while let Some(i) = queue.pop_front() {
            let v = self.digits(i);
            for s in &shifts {
                let w: Vec<i64> = v.iter().zip(s).map(|(a, b)| a + b).collect();
                let j = self.index_of(&w);
                if seen.insert(j) {
                    queue.push_back(j);
                }
            }
        }
        let amp = Complex64::new(1.0 / (seen.len() as f64).sqrt(), 0.0);
        let mut out = vec![Complex64::new(0.0, 0.0); self.dim];
        for i in seen {
            out[i] = amp;
        }
        Ok(out)
    }

    /// `H ψ` with `H = Σ_S (2I − S − S†)`.
    pub fn hamiltonian_apply(&self, state: &[Complex64]) -> Result<State> {
        let mut out = vec![Complex64::new(0.0, 0.0); self.dim];
        for st in self.code.stabilizers() {
            let a = self.apply_pauli(state, &st.op)?;
            let b = self.apply_pauli(state, &st.op.inverse())?;
            for i in 0..self.dim {
                out[i] += 2.0 * state[i] - a[i] - b[i];
            }
        }
        Ok(out)
    }

    /// `⟨ψ|H|ψ⟩ / ⟨ψ|ψ⟩`.
    pub fn energy(&self, state: &[Complex64]) -> Result<f64> {
        let h = self.hamiltonian_apply(state)?;
        Ok(inner(state, &h).re / inner(state, state).re)
    }

    /// Energy predicted from the commutation exponents of `error` with every
    /// stabilizer: `Σ_S (2 − 2cos(2π s_S / d))`.
    pub fn predicted_error_energy(&self, error: &QuditPauliOperator) -> Result<f64> {
        let mut total = 0.0;
        for st in self.code.stabilizers() {
            let s = symplectic_phase(&st.op, error)?;
            total += check_energy(s, self.d);
        }
        Ok(total)
    }

    /// Energy of `error` applied to the class state of the zero chain.
    pub fn measured_error_energy(&self, error: &QuditPauliOperator) -> Result<f64> {
        let g = self.class_state(&ChainVector::zero(self.code.degree()))?;
        self.energy(&self.apply_pauli(&g, error)?)
    }

    /// Checks non-negativity on random states, zero energy on the ground
    /// space, and the per-check energy of every single-site X and Z error.
    pub fn hamiltonian_spectrum_check(&self, trials: usize, seed: u64) -> Result<SpectrumReport> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut min_random_energy = f64::INFINITY;
        for _ in 0..trials {
            let s = self.random_state(&mut rng);
            min_random_energy = min_random_energy.min(self.energy(&s)?);
        }
        let mut max_ground_energy: f64 = 0.0;
        for g in self.ground_space_basis(seed)? {
            max_ground_energy = max_ground_energy.max(self.energy(&g)?.abs());
        }
        let mut single_errors = Vec::new();
        for site in self.code.sites() {
            for (kind, op) in [
                ("X", QuditPauliOperator::x_on(self.d, &site, 1)),
                ("Z", QuditPauliOperator::z_on(self.d, &site, 1)),
            ] {
                single_errors.push(ErrorEnergy {
                    site: site.clone(),
                    kind: kind.into(),
                    measured: self.measured_error_energy(&op)?,
                    predicted: self.predicted_error_energy(&op)?,
                });
            }
        }
        let max_error_deviation = single_errors
            .iter()
            .map(|e| (e.measured - e.predicted).abs())
            .fold(0.0, f64::max);
        Ok(SpectrumReport {
            trials,
            min_random_energy,
            max_ground_energy,
            max_error_deviation,
            passed: min_random_energy >= -RANK_TOLERANCE
                && max_ground_energy <= RANK_TOLERANCE
                && max_error_deviation <= RANK_TOLERANCE,
            single_errors,
        })
    }

    /// Builds the projector variant and compares it with the Pauli variant:
    /// idempotence, pairwise commutation, and equality of fixed spaces.
    pub fn projector_check(&self, seed: u64) -> Result<ProjectorReport> {
        let projectors = self.projector_stabilizers()?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
        let probe = self.random_state(&mut rng);
        let mut idempotence_residual: f64 = 0.0;
        let mut images = Vec::with_capacity(projectors.len());
        for (_, p) in &projectors {
            let once = self.apply(&probe, p)?;
            let twice = self.apply(&once, p)?;
            idempotence_residual = idempotence_residual.max(max_abs_diff(&once, &twice));
            images.push(once);
        }
        let mut commutator_residual: f64 = 0.0;
        for i in 0..projectors.len() {
            for j in i + 1..projectors.len() {
                let ab = self.apply(&images[j], &projectors[i].1)?;
                let ba = self.apply(&images[i], &projectors[j].1)?;
                commutator_residual = commutator_residual.max(max_abs_diff(&ab, &ba));
            }
        }
        let pauli = self.ground_space_basis(seed)?;
        let proj = self.range_basis(seed, |s| self.projector_variant_apply(&projectors, s))?;
        let mut subspace_residual: f64 = 0.0;
        for u in &pauli {
            let pu = self.projector_variant_apply(&projectors, u)?;
            subspace_residual = subspace_residual.max(max_abs_diff(&pu, u));
        }
        for u in &proj {
            let pu = self.code_projector_apply(u)?;
            subspace_residual = subspace_residual.max(max_abs_diff(&pu, u));
        }
        let equal = pauli.len() == proj.len() && subspace_residual <= RANK_TOLERANCE;
        Ok(ProjectorReport {
            projectors: projectors.len(),
            idempotence_residual,
            commutator_residual,
            pauli_dimension: pauli.len(),
            projector_dimension: proj.len(),
            subspace_residual,
            equal_fixed_spaces: equal,
        })
    }
}

/// `2 − 2cos(2π s / d)`, the energy of one check with syndrome exponent `s`.
pub fn check_energy(s: i64, d: u64) -> f64 {
    2.0 - 2.0 * (TAU * s as f64 / d as f64).cos()
}

/// Orthonormal basis of the span of `vectors` from a column-pivoted QR. The
/// rank is the number of diagonal entries of `R` above the relative tolerance.
pub fn orthonormal_span(vectors: &[State]) -> Vec<State> {
    let k = vectors.len();
    if k == 0 {
        return Vec::new();
    }
    let dim = vectors[0].len();
    let m = DMatrix::from_fn(dim, k, |i, j| vectors[j][i]);
    let qr = m.col_piv_qr();
    let r = qr.r();
    let q = qr.q();
    let diag: Vec<f64> = (0..r.nrows().min(k)).map(|i| r[(i, i)].norm()).collect();
    let rmax = diag.first().copied().unwrap_or(0.0);
    if rmax <= 0.0 {
        return Vec::new();
    }
    diag.iter()
        .take_while(|&&d| d > RANK_TOLERANCE * rmax)
        .enumerate()
        .map(|(i, _)| q.column(i).iter().copied().collect())
        .collect()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ErrorEnergy {
    pub site: String,
    pub kind: String,
    pub measured: f64,
    pub predicted: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SpectrumReport {
    pub trials: usize,
    pub min_random_energy: f64,
    pub max_ground_energy: f64,
    pub max_error_deviation: f64,
    pub passed: bool,
    pub single_errors: Vec<ErrorEnergy>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ProjectorReport {
    pub projectors: usize,
    pub idempotence_residual: f64,
    pub commutator_residual: f64,
    pub pauli_dimension: usize,
    pub projector_dimension: usize,
    pub subspace_residual: f64,
    pub equal_fixed_spaces: bool,
}

/// Joint fixed-space dimension of the code's stabilizers.
pub fn ground_space_dimension(code: &HomologicalCode, seed: u64) -> Result<usize> {
    Simulator::new(code)?.ground_space_dimension(seed)
}

pub fn hamiltonian_spectrum_check(
    code: &HomologicalCode,
    trials: usize,
    seed: u64,
) -> Result<SpectrumReport> {
    Simulator::new(code)?.hamiltonian_spectrum_check(trials, seed)
}

pub fn build_projector_stabilizers(code: &HomologicalCode, seed: u64) -> Result<ProjectorReport> {
    Simulator::new(code)?.projector_check(seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{circle, sphere_cube, torus_grid};
    use crate::stabilizer::{build_code, CodeMode};

    fn one_site(d: u64) -> HomologicalCode {
        build_code(&circle(1).unwrap(), 1, d, CodeMode::Homology).unwrap()
    }

    #[test]
    fn shift_has_order_d() {
        let code = build_code(&circle(2).unwrap(), 1, 3, CodeMode::Homology).unwrap();
        let sim = Simulator::new(&code).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let s = sim.random_state(&mut rng);
        let x = QuditPauliOperator::x_on(3, "e0", 1);
        let mut t = s.clone();
        for _ in 0..3 {
            t = sim.apply_pauli(&t, &x).unwrap();
        }
        assert!(max_abs_diff(&s, &t) < 1e-12);
    }

    #[test]
    fn dense_commutator_matches_symplectic() {
        for d in 2..=5 {
            let code = one_site(d);
            let sim = Simulator::new(&code).unwrap();
            let site = &code.sites()[0];
            let z = QuditPauliOperator::z_on(d, site, 1);
            let x = QuditPauliOperator::x_on(d, site, 1);
            let zero = sim.basis_state(&ChainVector::zero(1)).unwrap();
            let zx = sim
                .apply_pauli(&sim.apply_pauli(&zero, &x).unwrap(), &z)
                .unwrap();
            let xz = sim
                .apply_pauli(&sim.apply_pauli(&zero, &z).unwrap(), &x)
                .unwrap();
            let zeta = Complex64::from_polar(1.0, TAU / d as f64);
            let scaled: State = xz.iter().map(|c| c * zeta).collect();
            assert!(max_abs_diff(&zx, &scaled) < 1e-12);
        }
    }

    #[test]
    fn ground_dimensions() {
        let cases = [
            (circle(3).unwrap(), 1, 3, 3),
            (circle(3).unwrap(), 1, 2, 2),
            (torus_grid(2, 2).unwrap(), 1, 2, 4),
            (sphere_cube(), 2, 2, 2),
            (sphere_cube(), 1, 2, 1),
        ];
        for (c, k, d, want) in cases {
            let code = build_code(&c, k, d, CodeMode::Homology).unwrap();
            assert_eq!(
                ground_space_dimension(&code, 7).unwrap(),
                want,
                "{}",
                c.label()
            );
        }
    }

    #[test]
    fn capacity_guard() {
        let code = build_code(&torus_grid(4, 4).unwrap(), 1, 3, CodeMode::Homology).unwrap();
        assert!(matches!(Simulator::new(&code), Err(Error::Capacity(_))));
    }

    #[test]
    fn class_states_are_fixed() {
        let code = build_code(&torus_grid(2, 2).unwrap(), 1, 2, CodeMode::Homology).unwrap();
        let sim = Simulator::new(&code).unwrap();
        for rep in std::iter::once(ChainVector::zero(1)).chain(code.x_logicals().iter().map(|l| {
            ChainVector {
                degree: 1,
                coeffs: l.op.x.clone(),
            }
        })) {
            let g = sim.class_state(&rep).unwrap();
            let pg = sim.code_projector_apply(&g).unwrap();
            assert!(max_abs_diff(&g, &pg) < 1e-12);
            assert!(sim.energy(&g).unwrap().abs() < 1e-9);
        }
    }

    #[test]
    fn single_error_energies() {
        let code = build_code(&circle(3).unwrap(), 1, 3, CodeMode::Homology).unwrap();
        let sim = Simulator::new(&code).unwrap();
        let x = QuditPauliOperator::x_on(3, "e0", 1);
        assert!((sim.measured_error_energy(&x).unwrap() - 6.0).abs() < 1e-9);
        let torus = build_code(&torus_grid(2, 2).unwrap(), 1, 2, CodeMode::Homology).unwrap();
        let sim = Simulator::new(&torus).unwrap();
        let x = QuditPauliOperator::x_on(2, &torus.sites()[0], 1);
        assert!((sim.measured_error_energy(&x).unwrap() - 8.0).abs() < 1e-9);
        let report = sim.hamiltonian_spectrum_check(5, 3).unwrap();
        assert!(report.passed, "{report:?}");
    }

    #[test]
    fn projector_variant_agrees() {
        let code = build_code(&circle(3).unwrap(), 1, 3, CodeMode::Homology).unwrap();
        let r = build_projector_stabilizers(&code, 11).unwrap();
        assert!(r.equal_fixed_spaces, "{r:?}");
        assert!(r.idempotence_residual < 1e-12 && r.commutator_residual < 1e-9);
        assert_eq!(r.pauli_dimension, 3);
    }

    #[test]
    fn cohomology_mode_simulates() {
        let code = build_code(&torus_grid(2, 2).unwrap(), 1, 2, CodeMode::Cohomology).unwrap();
        assert_eq!(ground_space_dimension(&code, 5).unwrap(), 4);
    }

    #[test]
    fn deterministic_for_seed() {
        let code = build_code(&circle(3).unwrap(), 1, 3, CodeMode::Homology).unwrap();
        let sim = Simulator::new(&code).unwrap();
        let a = sim.random_state(&mut ChaCha8Rng::seed_from_u64(9));
        let b = sim.random_state(&mut ChaCha8Rng::seed_from_u64(9));
        assert_eq!(a, b);
    }
}
