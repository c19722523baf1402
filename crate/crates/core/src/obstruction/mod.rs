//! Obstruction-class codes of fiber bundles over cell complexes.
//!
//! A section of the bundle over the k-skeleton is a G-valued k-cochain `a`
//! with `G = π_k(F)`. Each (k+1)-cell `γ` carries the adjusted check
//! `s_γ = Σ_{β∈∂γ} O(γ,β)·t_{γβ}(a_β) + f_γ`, where `t_{γβ}` is the affine
//! transition `a ↦ A·a + h` from the trivialization on `β` to the one on
//! `γ`. A check is violated when `s_γ ≠ 0`; the violated checks of a
//! minimal section sit on a representative of the obstruction class.

mod cube;
mod search;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

pub use cube::{
    build_cube_tangent_bundle, cube_crossing_data, cube_tau, cube_tau_table, cube_theta_table,
    sk_bundle_tau, CrossingDatum, ThetaEntry,
};
pub use search::{
    minimal_violation_search, sweep_sections, MinimalViolation, SearchOptions, SweepReport,
    DEFAULT_NODE_CAP,
};

use crate::complex::{Builder, CellComplex, ComplexDocument};
use crate::error::{Error, Result};
use crate::homology::{cohomology, fundamental_cycle, solve_linear, FgAbelianGroup};
use crate::matrix::IntMatrix;

/// Golden-ratio proxy for the irrational rotation used on free factors.
pub const DEFAULT_ENERGY_R: f64 = 0.618_033_988_749_894_9;

/// Affine transition `a ↦ aut·a + offset` on the generator tuple of G.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransitionMap {
    pub aut: Vec<Vec<i64>>,
    pub offset: Vec<i64>,
}

impl TransitionMap {
    pub fn identity(g: &FgAbelianGroup) -> Self {
        Self::shift(g, g.zero_element())
    }

    pub fn shift(g: &FgAbelianGroup, offset: Vec<i64>) -> Self {
        let n = g.generator_count();
        let aut = (0..n)
            .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
            .collect();
        Self { aut, offset }
    }

    pub fn apply(&self, g: &FgAbelianGroup, x: &[i64]) -> Vec<i64> {
        let mut out: Vec<i64> = self
            .aut
            .iter()
            .zip(&self.offset)
            .map(|(row, &h)| row.iter().zip(x).map(|(a, b)| a * b).sum::<i64>() + h)
            .collect();
        g.normalize(&mut out);
        out
    }

    /// Shape and invertibility over `g`: no torsion-to-free entries,
    /// unimodular free block, and a unit determinant modulo each torsion order.
    pub fn validate(&self, g: &FgAbelianGroup) -> Result<()> {
        let n = g.generator_count();
        g.check_element(&self.offset)?;
        if self.aut.len() != n || self.aut.iter().any(|r| r.len() != n) {
            return Err(Error::Spec(format!("automorphism must be {n}x{n}")));
        }
        let r = g.free_rank();
        if self.aut[..r]
            .iter()
            .any(|row| row[r..].iter().any(|&v| v != 0))
        {
            return Err(Error::Spec(
                "automorphism maps torsion into the free part".into(),
            ));
        }
        let block = |lo: usize, hi: usize| -> IntMatrix {
            let rows: Vec<Vec<i64>> = self.aut[lo..hi]
                .iter()
                .map(|row| row[lo..hi].to_vec())
                .collect();
            IntMatrix::from_i64_rows(hi - lo, hi - lo, &rows)
        };
        if r > 0 {
            let det = block(0, r).determinant();
            if det != 1.into() && det != (-1).into() {
                return Err(Error::Spec(
                    "free block of automorphism is not unimodular".into(),
                ));
            }
        }
        if n > r {
            let det = block(r, n).determinant();
            for &d in g.torsion() {
                let m = num_bigint::BigInt::from(d);
                let det_mod = num_integer::Integer::mod_floor(&det, &m);
                if num_integer::Integer::gcd(&det_mod, &m) != 1.into() {
                    return Err(Error::Spec(format!(
                        "automorphism is not invertible modulo {d}"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// The base of a bundle: a builder name such as `"sphere_cube"` or an
/// inline complex document.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BaseRef {
    Builder(String),
    Inline(ComplexDocument),
}

impl BaseRef {
    pub fn resolve(&self) -> Result<CellComplex> {
        match self {
            BaseRef::Builder(name) => name.parse::<Builder>()?.build(),
            BaseRef::Inline(doc) => CellComplex::try_from(doc.clone()),
        }
    }
}

/// One `transitions` entry of the JSON form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransitionEntry {
    pub cell: String,
    pub face: String,
    pub aut: Vec<Vec<i64>>,
    pub offset: Vec<i64>,
}

/// JSON shape of a [`BundleSpec`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BundleDocument {
    pub base: BaseRef,
    pub k: usize,
    pub group: FgAbelianGroup,
    pub transitions: Vec<TransitionEntry>,
    #[serde(default)]
    pub f: BTreeMap<String, Vec<i64>>,
}

/// A bundle over `base` with fiber homotopy `π_k(F) = group`, given by its
/// transitions on every (k+1)-cell/k-face incidence and the pasting term `f`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "BundleDocument", into = "BundleDocument")]
pub struct BundleSpec {
    base_ref: BaseRef,
    base: CellComplex,
    k: usize,
    group: FgAbelianGroup,
    transitions: BTreeMap<(String, String), TransitionMap>,
    f: BTreeMap<String, Vec<i64>>,
}

impl TryFrom<BundleDocument> for BundleSpec {
    type Error = Error;

    fn try_from(doc: BundleDocument) -> Result<Self> {
        let transitions = doc
            .transitions
            .into_iter()
            .map(|t| {
                (
                    (t.cell, t.face),
                    TransitionMap {
                        aut: t.aut,
                        offset: t.offset,
                    },
                )
            })
            .collect();
        BundleSpec::new(doc.base, doc.k, doc.group, transitions, doc.f)
    }
}

impl From<BundleSpec> for BundleDocument {
    fn from(s: BundleSpec) -> Self {
        Self {
            base: s.base_ref,
            k: s.k,
            group: s.group,
            transitions: s
                .transitions
                .into_iter()
                .map(|((cell, face), t)| TransitionEntry {
                    cell,
                    face,
                    aut: t.aut,
                    offset: t.offset,
                })
                .collect(),
            f: s.f,
        }
    }
}

impl BundleSpec {
    /// Validates cell degrees, incidences, element shapes and automorphisms.
    /// Missing transitions are allowed here and reported on evaluation.
    pub fn new(
        base_ref: BaseRef,
        k: usize,
        group: FgAbelianGroup,
        transitions: BTreeMap<(String, String), TransitionMap>,
        f: BTreeMap<String, Vec<i64>>,
    ) -> Result<Self> {
        let base = base_ref.resolve()?;
        if k + 1 > base.dimension() {
            return Err(Error::Range {
                what: "k",
                value: k as i64,
                allowed: format!("0..={}", base.dimension().saturating_sub(1)),
            });
        }
        let locate = |id: &str, dim: usize| -> Result<usize> {
            match base.locate(id) {
                Some((d, i)) if d == dim => Ok(i),
                Some((d, _)) => Err(Error::DegreeMismatch {
                    expected: dim,
                    got: d,
                }),
                None => Err(Error::UnknownCell(id.to_string())),
            }
        };
        for ((cell, face), t) in &transitions {
            let j = locate(cell, k + 1)?;
            let i = locate(face, k)?;
            if !base.faces_of(k + 1, j).iter().any(|&(x, _)| x == i) {
                return Err(Error::Spec(format!("{face} is not a face of {cell}")));
            }
            t.validate(&group)?;
        }
        let mut f_norm = BTreeMap::new();
        for (cell, v) in f {
            locate(&cell, k + 1)?;
            group.check_element(&v)?;
            let mut v = v;
            group.normalize(&mut v);
            if !group.is_zero_element(&v) {
                f_norm.insert(cell, v);
            }
        }
        Ok(Self {
            base_ref,
            base,
            k,
            group,
            transitions,
            f: f_norm,
        })
    }

    /// The product bundle: identity transitions, no offsets, `f = 0`.
    pub fn trivial(base_ref: BaseRef, k: usize, group: FgAbelianGroup) -> Result<Self> {
        let base = base_ref.resolve()?;
        let mut transitions = BTreeMap::new();
        if k < base.dimension() {
            for j in 0..base.cell_count(k + 1) {
                for &(i, _) in base.faces_of(k + 1, j) {
                    transitions.insert(
                        (base.id(k + 1, j).to_string(), base.id(k, i).to_string()),
                        TransitionMap::identity(&group),
                    );
                }
            }
        }
        Self::new(base_ref, k, group, transitions, BTreeMap::new())
    }

    /// The same bundle with pasting term `f` replaced.
    pub fn with_f(&self, f: BTreeMap<String, Vec<i64>>) -> Result<Self> {
        Self::new(
            self.base_ref.clone(),
            self.k,
            self.group.clone(),
            self.transitions.clone(),
            f,
        )
    }

    /// The same bundle with one transition replaced or added.
    pub fn with_transition(&self, cell: &str, face: &str, t: TransitionMap) -> Result<Self> {
        let mut transitions = self.transitions.clone();
        transitions.insert((cell.to_string(), face.to_string()), t);
        Self::new(
            self.base_ref.clone(),
            self.k,
            self.group.clone(),
            transitions,
            self.f.clone(),
        )
    }

    pub fn base(&self) -> &CellComplex {
        &self.base
    }

    pub fn base_ref(&self) -> &BaseRef {
        &self.base_ref
    }

    pub fn degree(&self) -> usize {
        self.k
    }

    pub fn group(&self) -> &FgAbelianGroup {
        &self.group
    }

    pub fn transition(&self, cell: &str, face: &str) -> Option<&TransitionMap> {
        self.transitions.get(&(cell.to_string(), face.to_string()))
    }

    pub fn transitions(&self) -> &BTreeMap<(String, String), TransitionMap> {
        &self.transitions
    }

    pub fn f(&self) -> &BTreeMap<String, Vec<i64>> {
        &self.f
    }

    /// Incidences `(cell, face)` of `∂_{k+1}` without a transition.
    pub fn missing_transitions(&self) -> Vec<(String, String)> {
        let (b, k) = (&self.base, self.k);
        (0..b.cell_count(k + 1))
            .flat_map(|j| {
                b.faces_of(k + 1, j)
                    .iter()
                    .map(move |&(i, _)| (b.id(k + 1, j).to_string(), b.id(k, i).to_string()))
            })
            .filter(|key| !self.transitions.contains_key(key))
            .collect()
    }

    fn f_at(&self, cell: &str) -> Vec<i64> {
        self.f
            .get(cell)
            .cloned()
            .unwrap_or_else(|| self.group.zero_element())
    }

    /// Affine form `s = M a + c` of all checks over the flat coordinate
    /// vectors of `a` (k-cells × generators) and `s` ((k+1)-cells × generators).
    pub(crate) fn compile(&self) -> Result<Compiled> {
        let (b, k, g) = (&self.base, self.k, self.group.generator_count());
        let n_checks = b.cell_count(k + 1);
        let mut checks = Vec::with_capacity(n_checks);
        let mut constants = vec![0i64; n_checks * g];
        for j in 0..n_checks {
            let cell = b.id(k + 1, j);
            let mut terms = Vec::new();
            for &(i, o) in b.faces_of(k + 1, j) {
                let face = b.id(k, i);
                let t = self.transition(cell, face).ok_or_else(|| {
                    Error::Spec(format!("missing transition for ({cell}, {face})"))
                })?;
                let m: Vec<i64> = t.aut.iter().flatten().map(|&v| o * v).collect();
                for (c, &h) in constants[j * g..(j + 1) * g].iter_mut().zip(&t.offset) {
                    *c += o * h;
                }
                terms.push((i, m));
            }
            for (c, v) in constants[j * g..(j + 1) * g]
                .iter_mut()
                .zip(self.f_at(cell))
            {
                *c += v;
            }
            checks.push(terms);
        }
        Ok(Compiled {
            g,
            orders: self.group.summand_orders(),
            n_vars: b.cell_count(k),
            checks,
            constants,
        })
    }

    fn section_dense(&self, a: &GroupCochain) -> Result<Vec<i64>> {
        let (k, g) = (self.k, self.group.generator_count());
        if a.degree != k {
            return Err(Error::DegreeMismatch {
                expected: k,
                got: a.degree,
            });
        }
        let mut out = vec![0i64; self.base.cell_count(k) * g];
        for (id, v) in &a.values {
            let i = match self.base.locate(id) {
                Some((d, i)) if d == k => i,
                Some((d, _)) => {
                    return Err(Error::DegreeMismatch {
                        expected: k,
                        got: d,
                    })
                }
                None => return Err(Error::UnknownCell(id.clone())),
            };
            self.group.check_element(v)?;
            out[i * g..(i + 1) * g].copy_from_slice(v);
        }
        Ok(out)
    }
}

/// Flat affine form of the adjusted checks.
#[derive(Clone, Debug)]
pub(crate) struct Compiled {
    pub g: usize,
    /// Per generator: 0 for ℤ, d for ℤ_d.
    pub orders: Vec<u64>,
    pub n_vars: usize,
    /// Per check: `(k-cell index, O·aut as a row-major g×g block)`.
    pub checks: Vec<Vec<(usize, Vec<i64>)>>,
    pub constants: Vec<i64>,
}

impl Compiled {
    pub fn evaluate(&self, a: &[i64]) -> Vec<i64> {
        let g = self.g;
        let mut s = self.constants.clone();
        for (j, terms) in self.checks.iter().enumerate() {
            for (i, m) in terms {
                for r in 0..g {
                    for c in 0..g {
                        s[j * g + r] += m[r * g + c] * a[i * g + c];
                    }
                }
            }
        }
        self.normalize(&mut s);
        s
    }

    pub fn normalize(&self, s: &mut [i64]) {
        for (idx, v) in s.iter_mut().enumerate() {
            let d = self.orders[idx % self.g];
            if d > 0 {
                *v = v.rem_euclid(d as i64);
            }
        }
    }

    /// Magnitude of one check value; 0 means satisfied.
    pub fn magnitude(&self, s: &[i64]) -> u64 {
        s.iter()
            .zip(&self.orders)
            .map(|(&v, &d)| {
                if d == 0 {
                    v.unsigned_abs()
                } else {
                    let r = v.rem_euclid(d as i64) as u64;
                    r.min(d - r)
                }
            })
            .sum()
    }
}

/// A G-valued cochain keyed by cell id; absent cells carry zero.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupCochain {
    pub degree: usize,
    #[serde(default)]
    pub values: BTreeMap<String, Vec<i64>>,
}

impl GroupCochain {
    pub fn zero(degree: usize) -> Self {
        Self {
            degree,
            values: BTreeMap::new(),
        }
    }

    fn from_dense(c: &CellComplex, degree: usize, g: &FgAbelianGroup, flat: &[i64]) -> Self {
        let n = g.generator_count();
        let values = (0..c.cell_count(degree))
            .filter_map(|i| {
                let mut v = flat[i * n..(i + 1) * n].to_vec();
                g.normalize(&mut v);
                (!g.is_zero_element(&v)).then(|| (c.id(degree, i).to_string(), v))
            })
            .collect();
        Self { degree, values }
    }
}

/// Check values of a section together with the derived class data.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObstructionCochain {
    /// Nonzero check values, keyed by (k+1)-cell.
    pub values: GroupCochain,
    pub violated: Vec<String>,
    /// `Σ_γ |s_γ|`.
    pub total_degree: u64,
    /// `Σ_γ c_γ s_γ` against the fundamental cycle when `k + 1` is the top
    /// dimension of a base with `H_n ≅ ℤ`.
    pub fundamental_total: Option<Vec<i64>>,
}

impl ObstructionCochain {
    fn from_flat(spec: &BundleSpec, s: &[i64]) -> Self {
        let (b, k, g) = (&spec.base, spec.k, &spec.group);
        let values = GroupCochain::from_dense(b, k + 1, g, s);
        let violated = values.values.keys().cloned().collect();
        let total_degree = values.values.values().map(|v| g.magnitude(v)).sum();
        let fundamental_total = fundamental_weights(spec).map(|w| {
            let n = g.generator_count();
            let mut t = g.zero_element();
            for (j, &c) in w.iter().enumerate() {
                for (r, x) in t.iter_mut().enumerate() {
                    *x += c * s[j * n + r];
                }
            }
            g.normalize(&mut t);
            t
        });
        Self {
            values,
            violated,
            total_degree,
            fundamental_total,
        }
    }

    pub fn violated_count(&self) -> usize {
        self.violated.len()
    }
}

/// Dense fundamental-cycle coefficients on the (k+1)-cells, if they apply.
pub(crate) fn fundamental_weights(spec: &BundleSpec) -> Option<Vec<i64>> {
    let b = &spec.base;
    if spec.k + 1 != b.dimension() {
        return None;
    }
    fundamental_cycle(b).map(|c| c.to_dense(b).expect("cycle lives on the base"))
}

/// `s_γ` for one (k+1)-cell.
pub fn adjusted_check(spec: &BundleSpec, gamma: &str, a: &GroupCochain) -> Result<Vec<i64>> {
    let k = spec.k;
    let j = match spec.base.locate(gamma) {
        Some((d, j)) if d == k + 1 => j,
        Some((d, _)) => {
            return Err(Error::DegreeMismatch {
                expected: k + 1,
                got: d,
            })
        }
        None => return Err(Error::UnknownCell(gamma.to_string())),
    };
    let g = &spec.group;
    let mut s = spec.f_at(gamma);
    let dense = spec.section_dense(a)?;
    let n = g.generator_count();
    for &(i, o) in spec.base.faces_of(k + 1, j) {
        let face = spec.base.id(k, i);
        let t = spec
            .transition(gamma, face)
            .ok_or_else(|| Error::Spec(format!("missing transition for ({gamma}, {face})")))?;
        let moved = t.apply(g, &dense[i * n..(i + 1) * n]);
        for (x, m) in s.iter_mut().zip(moved) {
            *x += o * m;
        }
    }
    g.normalize(&mut s);
    Ok(s)
}

/// All checks for a section.
pub fn adjusted_checks(spec: &BundleSpec, a: &GroupCochain) -> Result<ObstructionCochain> {
    let comp = spec.compile()?;
    let s = comp.evaluate(&spec.section_dense(a)?);
    Ok(ObstructionCochain::from_flat(spec, &s))
}

/// The checks of the zero section.
pub fn reference_obstruction(spec: &BundleSpec) -> Result<ObstructionCochain> {
    adjusted_checks(spec, &GroupCochain::zero(spec.k))
}

/// Result of [`obstruction_is_cocycle`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CocycleCheck {
    pub is_cocycle: bool,
    /// First (k+2)-cell on which `δ s` is nonzero.
    pub witness: Option<String>,
}

/// Whether the reference obstruction `s(0)` is a cocycle: `Σ_{γ∈∂η}
/// O(η,γ) s_γ = 0` on every (k+2)-cell `η`. Vacuous without (k+2)-cells.
pub fn obstruction_is_cocycle(spec: &BundleSpec) -> Result<CocycleCheck> {
    let (b, k, g) = (&spec.base, spec.k, &spec.group);
    let n = g.generator_count();
    let s = spec.compile()?.evaluate(&vec![0; b.cell_count(k) * n]);
    if k + 2 <= b.dimension() {
        for e in 0..b.cell_count(k + 2) {
            let mut t = g.zero_element();
            for &(j, o) in b.faces_of(k + 2, e) {
                for (x, v) in t.iter_mut().zip(&s[j * n..(j + 1) * n]) {
                    *x += o * v;
                }
            }
            if !g.is_zero_element(&t) {
                return Ok(CocycleCheck {
                    is_cocycle: false,
                    witness: Some(b.id(k + 2, e).to_string()),
                });
            }
        }
    }
    Ok(CocycleCheck {
        is_cocycle: true,
        witness: None,
    })
}

/// Re-sections by the coboundary of `g` placed on the (k−1)-cell `alpha`:
/// `a_β += O(β, α)·g` on every k-cell `β` having `alpha` as a face.
pub fn v_obstr_action(
    spec: &BundleSpec,
    alpha: &str,
    g: &[i64],
    a: &GroupCochain,
) -> Result<GroupCochain> {
    let k = spec.k;
    let Some(km1) = k.checked_sub(1) else {
        return Err(Error::Range {
            what: "k",
            value: 0,
            allowed: "k >= 1 for re-sectioning".into(),
        });
    };
    let i = match spec.base.locate(alpha) {
        Some((d, i)) if d == km1 => i,
        Some((d, _)) => {
            return Err(Error::DegreeMismatch {
                expected: km1,
                got: d,
            })
        }
        None => return Err(Error::UnknownCell(alpha.to_string())),
    };
    let grp = &spec.group;
    grp.check_element(g)?;
    let n = grp.generator_count();
    let mut dense = spec.section_dense(a)?;
    for &(beta, o) in spec.base.cofaces_of(km1, i) {
        for (x, &v) in dense[beta * n..(beta + 1) * n].iter_mut().zip(g) {
            *x += o * v;
        }
    }
    Ok(GroupCochain::from_dense(&spec.base, k, grp, &dense))
}

/// A section with every check satisfied, when the group is cyclic (ℤ or
/// ℤ_d) and one exists. Solves `M a = −c` exactly.
pub fn solve_section(spec: &BundleSpec) -> Result<Option<GroupCochain>> {
    let comp = spec.compile()?;
    if comp.g != 1 {
        return Err(Error::Spec(
            "exact section solving needs a cyclic coefficient group".into(),
        ));
    }
    let mut rows = vec![vec![0i64; comp.n_vars]; comp.checks.len()];
    for (j, terms) in comp.checks.iter().enumerate() {
        for (i, m) in terms {
            rows[j][*i] += m[0];
        }
    }
    let m = IntMatrix::from_i64_rows(comp.checks.len(), comp.n_vars, &rows);
    let rhs: Vec<i64> = comp.constants.iter().map(|c| -c).collect();
    let modulus = match comp.orders[0] {
        0 => None,
        d => Some(d),
    };
    Ok(solve_linear(&m, &rhs, modulus)
        .map(|x| GroupCochain::from_dense(&spec.base, spec.k, &spec.group, &x)))
}

/// `Σ_γ Σ_coords (2 − 2cos θ)` with `θ = 2π s/d` on ℤ_d coordinates and
/// `θ = 2π r s` on free ones. Zero exactly when all checks hold (r irrational).
pub fn obstruction_energy(spec: &BundleSpec, a: &GroupCochain, r: f64) -> Result<f64> {
    let comp = spec.compile()?;
    let s = comp.evaluate(&spec.section_dense(a)?);
    let tau = std::f64::consts::TAU;
    Ok(s.iter()
        .enumerate()
        .map(|(idx, &v)| {
            let theta = match comp.orders[idx % comp.g] {
                0 => tau * r * v as f64,
                d => tau * v as f64 / d as f64,
            };
            2.0 - 2.0 * theta.cos()
        })
        .sum())
}

/// `H^k(B;G) ⊗ ℤ_m ⊕ Tor(H^{k+1}(B;G), ℤ_m)` split into its two parts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuotientReport {
    pub m: u64,
    pub tensor_part: FgAbelianGroup,
    pub tor_part: FgAbelianGroup,
    /// Torsion orders of `H^{k+1}(B;G)`.
    pub next_torsion: Vec<u64>,
    /// `m` shares no factor with that torsion, so `tor_part` vanishes.
    pub coprime: bool,
    /// Moduli in `2..=max(m, 16)` coprime to that torsion.
    pub coprime_moduli: Vec<u64>,
}

pub fn quotient_code_space(
    base: &CellComplex,
    k: usize,
    group: &FgAbelianGroup,
    m: u64,
) -> Result<QuotientReport> {
    if m < 2 {
        return Err(Error::Range {
            what: "m",
            value: m as i64,
            allowed: ">= 2".into(),
        });
    }
    let zm = FgAbelianGroup::cyclic(m);
    let hk = cohomology(base, k, group)?;
    let hk1 = cohomology(base, k + 1, group)?;
    let next_torsion = hk1.torsion().to_vec();
    let coprime_to = |x: u64| {
        next_torsion
            .iter()
            .all(|&t| num_integer::Integer::gcd(&t, &x) == 1)
    };
    Ok(QuotientReport {
        m,
        tensor_part: hk.tensor(&zm),
        tor_part: hk1.tor(&zm),
        coprime: coprime_to(m),
        coprime_moduli: (2..=m.max(16)).filter(|&x| coprime_to(x)).collect(),
        next_torsion,
    })
}
