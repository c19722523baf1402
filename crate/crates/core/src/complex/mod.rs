//! Finite oriented cell complexes with signed incidence.
//!
//! Cells are stored per dimension in lexicographic id order; that order fixes
//! the row/column indexing of every boundary matrix and every dense vector
//! produced downstream.

mod builders;
mod dual;

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::IntMatrix;

pub use builders::{
    circle, interval, projective_plane_min, solid_cube, sphere_cube, torus_grid, Builder,
    CUBE_FACES,
};
pub use dual::dual_complex;

/// One entry of a cell boundary: the face and its signed incidence `O(p, q)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Incidence {
    pub cell: String,
    pub sign: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cell {
    pub id: String,
    pub dim: usize,
    pub boundary: Vec<Incidence>,
}

impl Cell {
    pub fn new(id: impl Into<String>, dim: usize, boundary: &[(&str, i64)]) -> Self {
        Self {
            id: id.into(),
            dim,
            boundary: boundary
                .iter()
                .map(|&(c, s)| Incidence {
                    cell: c.to_string(),
                    sign: s,
                })
                .collect(),
        }
    }

    pub fn vertex(id: impl Into<String>) -> Self {
        Self {
            id: id.into(),
            dim: 0,
            boundary: Vec::new(),
        }
    }
}

/// Serialized form of a complex, exactly as it appears on disk.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexDocument {
    pub label: String,
    pub dimension: usize,
    pub cells: Vec<Cell>,
}

/// A finite regular CW complex. Immutable after construction.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "ComplexDocument", into = "ComplexDocument")]
pub struct CellComplex {
    label: String,
    dimension: usize,
    cells: Vec<Vec<Cell>>,
    index: HashMap<String, (usize, usize)>,
    /// `faces[k][j]`: net nonzero incidences of k-cell j, as (index of (k-1)-cell, coefficient).
    faces: Vec<Vec<Vec<(usize, i64)>>>,
    /// `cofaces[k][i]`: net nonzero incidences (index of (k+1)-cell, coefficient).
    cofaces: Vec<Vec<Vec<(usize, i64)>>>,
}

impl PartialEq for CellComplex {
    fn eq(&self, other: &Self) -> bool {
        self.label == other.label && self.dimension == other.dimension && self.cells == other.cells
    }
}

impl Eq for CellComplex {}

impl TryFrom<ComplexDocument> for CellComplex {
    type Error = Error;

    fn try_from(doc: ComplexDocument) -> Result<Self> {
        CellComplex::new(doc.label, doc.dimension, doc.cells)
    }
}

impl From<CellComplex> for ComplexDocument {
    fn from(c: CellComplex) -> Self {
        c.to_document()
    }
}

impl CellComplex {
    /// Checks the structural invariants: unique ids, dimensions within range,
    /// nonzero coefficients, and boundary entries that reference existing
    /// cells of one dimension lower.
    pub fn new(label: impl Into<String>, dimension: usize, cells: Vec<Cell>) -> Result<Self> {
        let mut by_dim: Vec<Vec<Cell>> = vec![Vec::new(); dimension + 1];
        let mut dims: HashMap<String, usize> = HashMap::new();
        for cell in &cells {
            if cell.dim > dimension {
                return Err(Error::Structural {
                    cell: cell.id.clone(),
                    reason: format!(
                        "dimension {} exceeds complex dimension {dimension}",
                        cell.dim
                    ),
                });
            }
            if dims.insert(cell.id.clone(), cell.dim).is_some() {
                return Err(Error::Structural {
                    cell: cell.id.clone(),
                    reason: "duplicate id".into(),
                });
            }
        }
        for cell in cells {
            for inc in &cell.boundary {
                match dims.get(&inc.cell) {
                    None => {
                        return Err(Error::Structural {
                            cell: cell.id.clone(),
                            reason: format!("dangling boundary reference `{}`", inc.cell),
                        })
                    }
                    Some(&d) if d + 1 != cell.dim => {
                        return Err(Error::Structural {
                            cell: cell.id.clone(),
                            reason: format!(
                                "boundary cell `{}` has dimension {d}, expected {}",
                                inc.cell,
                                cell.dim as i64 - 1
                            ),
                        })
                    }
                    _ => {}
                }
                if inc.sign == 0 {
                    return Err(Error::Structural {
                        cell: cell.id.clone(),
                        reason: format!("zero coefficient on `{}`", inc.cell),
                    });
                }
            }
            by_dim[cell.dim].push(cell);
        }
        for layer in &mut by_dim {
            layer.sort_by(|a, b| a.id.cmp(&b.id));
        }
        let index: HashMap<String, (usize, usize)> = by_dim
            .iter()
            .enumerate()
            .flat_map(|(k, layer)| {
                layer
                    .iter()
                    .enumerate()
                    .map(move |(i, c)| (c.id.clone(), (k, i)))
            })
            .collect();

        let mut faces = Vec::with_capacity(dimension + 1);
        let mut cofaces: Vec<Vec<Vec<(usize, i64)>>> = by_dim
            .iter()
            .map(|layer| vec![Vec::new(); layer.len()])
            .collect();
        for (k, layer) in by_dim.iter().enumerate() {
            let mut layer_faces = Vec::with_capacity(layer.len());
            for (j, cell) in layer.iter().enumerate() {
                let mut net: BTreeMap<usize, i64> = BTreeMap::new();
                for inc in &cell.boundary {
                    *net.entry(index[&inc.cell].1).or_insert(0) += inc.sign;
                }
                let entries: Vec<(usize, i64)> = net.into_iter().filter(|&(_, v)| v != 0).collect();
                for &(i, v) in &entries {
                    cofaces[k - 1][i].push((j, v));
                }
                layer_faces.push(entries);
            }
            faces.push(layer_faces);
        }

        Ok(Self {
            label: label.into(),
            dimension,
            cells: by_dim,
            index,
            faces,
            cofaces,
        })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: ComplexDocument = serde_json::from_str(text)?;
        Self::try_from(doc)
    }

    pub fn to_document(&self) -> ComplexDocument {
        ComplexDocument {
            label: self.label.clone(),
            dimension: self.dimension,
            cells: self.cells.iter().flatten().cloned().collect(),
        }
    }

    /// Canonical JSON: cells ordered by (dimension, id), keys in the fixed
    /// order `label, dimension, cells` / `id, dim, boundary` / `cell, sign`.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_document()).expect("complex serializes")
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    /// Number of k-cells; zero for any k above the dimension.
    pub fn cell_count(&self, k: usize) -> usize {
        self.cells.get(k).map_or(0, Vec::len)
    }

    pub fn cell_counts(&self) -> Vec<usize> {
        self.cells.iter().map(Vec::len).collect()
    }

    pub fn cells(&self, k: usize) -> &[Cell] {
        self.cells.get(k).map_or(&[], Vec::as_slice)
    }

    pub fn cell_ids(&self, k: usize) -> Vec<String> {
        self.cells(k).iter().map(|c| c.id.clone()).collect()
    }

    pub fn id(&self, k: usize, i: usize) -> &str {
        &self.cells[k][i].id
    }

    /// (dimension, position) of a cell id.
    pub fn locate(&self, id: &str) -> Option<(usize, usize)> {
        self.index.get(id).copied()
    }

    /// Net incidences of k-cell `j` with its (k-1)-faces.
    pub fn faces_of(&self, k: usize, j: usize) -> &[(usize, i64)] {
        &self.faces[k][j]
    }

    /// Net incidences of k-cell `i` with the (k+1)-cells containing it.
    pub fn cofaces_of(&self, k: usize, i: usize) -> &[(usize, i64)] {
        &self.cofaces[k][i]
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.cells
            .iter()
            .enumerate()
            .map(|(k, layer)| {
                if k % 2 == 0 {
                    layer.len() as i64
                } else {
                    -(layer.len() as i64)
                }
            })
            .sum()
    }

    /// Boundary matrix `∂_k`: rows are (k-1)-cells, columns k-cells.
    /// `k = 0` yields the matrix with zero rows.
    pub fn boundary_matrix(&self, k: usize) -> Result<IntMatrix> {
        if k > self.dimension {
            return Err(Error::Range {
                what: "k",
                value: k as i64,
                allowed: format!("0..={}", self.dimension),
            });
        }
        Ok(self.boundary_matrix_ext(k))
    }

    /// Like [`boundary_matrix`](Self::boundary_matrix) but total: degrees above
    /// the dimension give the (correctly shaped) zero map.
    pub(crate) fn boundary_matrix_ext(&self, k: usize) -> IntMatrix {
        let rows = if k == 0 { 0 } else { self.cell_count(k - 1) };
        let cols = self.cell_count(k);
        let mut m = IntMatrix::zeros(rows, cols);
        if k > 0 && k <= self.dimension {
            for (j, faces) in self.faces[k].iter().enumerate() {
                for &(i, v) in faces {
                    m.set(i, j, v.into());
                }
            }
        }
        m
    }

    /// Coboundary matrix `δ_k = ∂_{k+1}ᵀ`: rows (k+1)-cells, columns k-cells.
    pub fn coboundary_matrix(&self, k: usize) -> Result<IntMatrix> {
        if k > self.dimension {
            return Err(Error::Range {
                what: "k",
                value: k as i64,
                allowed: format!("0..={}", self.dimension),
            });
        }
        Ok(self.boundary_matrix_ext(k + 1).transpose())
    }

    /// Structural validation succeeded at construction; this reports the
    /// algebraic conditions for use in code constructions.
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        for k in 1..self.dimension {
            let lower = self.boundary_matrix_ext(k);
            let upper = self.boundary_matrix_ext(k + 1);
            if !(&lower * &upper).is_zero() {
                report.boundary_failures.push(DegreePairFailure {
                    lower: k,
                    upper: k + 1,
                });
            }
        }
        for (k, layer) in self.cells.iter().enumerate() {
            for (j, cell) in layer.iter().enumerate() {
                for inc in &cell.boundary {
                    if inc.sign.abs() != 1 {
                        report.coefficient_failures.push(CoefficientFailure {
                            cell: cell.id.clone(),
                            face: inc.cell.clone(),
                            coefficient: inc.sign,
                        });
                    }
                }
                if k == 0 {
                    continue;
                }
                for &(i, v) in &self.faces[k][j] {
                    let listed_bad = report
                        .coefficient_failures
                        .iter()
                        .any(|f| f.cell == cell.id && f.face == self.cells[k - 1][i].id);
                    if v.abs() != 1 && !listed_bad {
                        report.coefficient_failures.push(CoefficientFailure {
                            cell: cell.id.clone(),
                            face: self.cells[k - 1][i].id.clone(),
                            coefficient: v,
                        });
                    }
                }
            }
        }
        report
    }

    pub fn require_admissible(&self) -> Result<()> {
        let report = self.validate();
        if report.is_admissible() {
            Ok(())
        } else {
            Err(Error::NotAdmissible(report.summary()))
        }
    }
}

/// Parses a JSON complex document and validates it. Structural problems are
/// errors; algebraic problems are listed in the report.
pub fn validate_complex(json: &str) -> Result<ValidationReport> {
    Ok(CellComplex::from_json(json)?.validate())
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub boundary_failures: Vec<DegreePairFailure>,
    pub coefficient_failures: Vec<CoefficientFailure>,
}

/// `∂_lower ∘ ∂_upper ≠ 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreePairFailure {
    pub lower: usize,
    pub upper: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoefficientFailure {
    pub cell: String,
    pub face: String,
    pub coefficient: i64,
}

impl ValidationReport {
    pub fn is_admissible(&self) -> bool {
        self.boundary_failures.is_empty() && self.coefficient_failures.is_empty()
    }

    pub fn summary(&self) -> String {
        let mut parts: Vec<String> = self
            .boundary_failures
            .iter()
            .map(|f| format!("∂_{}∂_{} != 0", f.lower, f.upper))
            .collect();
        parts.extend(
            self.coefficient_failures
                .iter()
                .map(|f| format!("coefficient {} on ({}, {})", f.coefficient, f.cell, f.face)),
        );
        if parts.is_empty() {
            "admissible".into()
        } else {
            parts.join("; ")
        }
    }
}
