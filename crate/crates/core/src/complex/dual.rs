use std::collections::BTreeSet;

use super::{Cell, CellComplex, Incidence};
use crate::error::Result;

fn dual_id(id: &str) -> String {
    format!("d:{id}")
}

fn boundary_dual_id(id: &str) -> String {
    format!("db:{id}")
}

/// Dual of a manifold cellulation: each k-cell `Δ` becomes an (n−k)-cell
/// `d:Δ` with `∂̂(d:Δ) = Σ_{i ∈ ∂ᵀΔ} O(i, Δ) d:i`.
///
/// With `closed = true` every cell `i` of the boundary subcomplex `∂T` also
/// contributes a cell `db:i` of dimension `n − 1 − dim i`, pasted onto the
/// boundary of `d:i` with sign `(−1)^{dim i}`; the closed dual coincides with
/// the open one when `∂T` is empty. Manifoldness is not checked.
pub fn dual_complex(c: &CellComplex, closed: bool) -> Result<CellComplex> {
    c.require_admissible()?;
    let n = c.dimension();
    let mut cells = Vec::new();
    for k in 0..=n {
        for (i, cell) in c.cells(k).iter().enumerate() {
            let mut boundary: Vec<Incidence> = c
                .cofaces_of(k, i)
                .iter()
                .map(|&(j, o)| Incidence {
                    cell: dual_id(c.id(k + 1, j)),
                    sign: o,
                })
                .collect();
            boundary.sort_by(|a, b| a.cell.cmp(&b.cell));
            cells.push(Cell {
                id: dual_id(&cell.id),
                dim: n - k,
                boundary,
            });
        }
    }

    if closed && n > 0 {
        let on_boundary = boundary_subcomplex(c);
        for &(k, i) in &on_boundary {
            let id = c.id(k, i);
            let sign = if k % 2 == 0 { 1 } else { -1 };
            let target = cells
                .iter_mut()
                .find(|cell| cell.id == dual_id(id))
                .expect("dual cell exists");
            target.boundary.push(Incidence {
                cell: boundary_dual_id(id),
                sign,
            });
            let mut boundary: Vec<Incidence> = c
                .cofaces_of(k, i)
                .iter()
                .filter(|&&(j, _)| on_boundary.contains(&(k + 1, j)))
                .map(|&(j, o)| Incidence {
                    cell: boundary_dual_id(c.id(k + 1, j)),
                    sign: o,
                })
                .collect();
            boundary.sort_by(|a, b| a.cell.cmp(&b.cell));
            cells.push(Cell {
                id: boundary_dual_id(id),
                dim: n - 1 - k,
                boundary,
            });
        }
    }
    let label = if closed {
        format!("cl(dual({}))", c.label())
    } else {
        format!("dual({})", c.label())
    };
    CellComplex::new(label, n, cells)
}

/// Cells of `∂T`: codimension-1 cells with exactly one top-dimensional coface,
/// closed under taking faces. Returned as (dimension, index) pairs.
fn boundary_subcomplex(c: &CellComplex) -> BTreeSet<(usize, usize)> {
    let n = c.dimension();
    let mut set = BTreeSet::new();
    let mut stack: Vec<(usize, usize)> = (0..c.cell_count(n - 1))
        .filter(|&i| c.cofaces_of(n - 1, i).len() == 1)
        .map(|i| (n - 1, i))
        .collect();
    while let Some((k, i)) = stack.pop() {
        if !set.insert((k, i)) {
            continue;
        }
        if k > 0 {
            stack.extend(c.faces_of(k, i).iter().map(|&(j, _)| (k - 1, j)));
        }
    }
    set
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{interval, solid_cube, sphere_cube, torus_grid};

    #[test]
    fn torus_dual_counts() {
        let t = torus_grid(2, 2).unwrap();
        let d = dual_complex(&t, true).unwrap();
        assert_eq!(d.cell_counts(), vec![4, 8, 4]);
        assert!(d.validate().is_admissible());
    }

    #[test]
    fn cube_dual_is_octahedral() {
        let d = dual_complex(&sphere_cube(), true).unwrap();
        assert_eq!(d.cell_counts(), vec![6, 12, 8]);
        assert!(d.validate().is_admissible());
        assert_eq!(d.euler_characteristic(), 2);
        // each dual face (a cube corner) is a triangle
        assert!(d.cells(2).iter().all(|f| f.boundary.len() == 3));
    }

    #[test]
    fn double_dual_preserves_counts() {
        for c in [torus_grid(3, 2).unwrap(), sphere_cube()] {
            let dd = dual_complex(&dual_complex(&c, true).unwrap(), true).unwrap();
            assert_eq!(dd.cell_counts(), c.cell_counts());
        }
    }

    #[test]
    fn closed_dual_of_interval() {
        let c = interval(3).unwrap();
        let open = dual_complex(&c, false).unwrap();
        assert_eq!(open.cell_counts(), vec![3, 4]);
        let closed = dual_complex(&c, true).unwrap();
        assert_eq!(closed.cell_counts(), vec![5, 4]);
        assert!(closed.validate().is_admissible());
        assert_eq!(closed.euler_characteristic(), 1);
        // every dual edge now has two endpoints
        assert!(closed.cells(1).iter().all(|e| e.boundary.len() == 2));
    }

    #[test]
    fn closed_dual_of_solid_cube() {
        let c = solid_cube();
        let closed = dual_complex(&c, true).unwrap();
        // 1 + 6 + 12 + 8 interior-dual cells plus the dual of the boundary sphere
        assert_eq!(closed.cell_counts(), vec![1 + 6, 6 + 12, 12 + 8, 8]);
        assert!(closed.validate().is_admissible());
        assert_eq!(closed.euler_characteristic(), 1);
    }
}
