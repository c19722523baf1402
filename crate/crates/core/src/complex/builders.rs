//! Built-in fixture complexes with deterministic ids and orientations.

use std::fmt;
use std::str::FromStr;

use super::{Cell, CellComplex};
use crate::error::{Error, Result};

/// Face labels of the box cellulation of the sphere.
pub const CUBE_FACES: [&str; 6] = ["F", "Ba", "L", "R", "T", "Bo"];

fn width(n: usize) -> usize {
    n.saturating_sub(1).to_string().len()
}

fn require_positive(what: &'static str, v: usize) -> Result<()> {
    if v == 0 {
        Err(Error::Range {
            what,
            value: 0,
            allowed: ">= 1".into(),
        })
    } else {
        Ok(())
    }
}

/// Circle with `m` vertices and `m` edges; edge `e_i` runs from `v_i` to `v_{i+1}`.
pub fn circle(m: usize) -> Result<CellComplex> {
    require_positive("m", m)?;
    let w = width(m);
    let v = |i: usize| format!("v{:0w$}", i % m);
    let mut cells: Vec<Cell> = (0..m).map(|i| Cell::vertex(v(i))).collect();
    for i in 0..m {
        cells.push(Cell::new(
            format!("e{i:0w$}"),
            1,
            &[(&v(i + 1), 1), (&v(i), -1)],
        ));
    }
    CellComplex::new(format!("circle({m})"), 1, cells)
}

/// Path with `m` edges and `m + 1` vertices.
pub fn interval(m: usize) -> Result<CellComplex> {
    require_positive("m", m)?;
    let w = width(m + 1);
    let v = |i: usize| format!("v{i:0w$}");
    let mut cells: Vec<Cell> = (0..=m).map(|i| Cell::vertex(v(i))).collect();
    for i in 0..m {
        cells.push(Cell::new(
            format!("e{i:0w$}"),
            1,
            &[(&v(i + 1), 1), (&v(i), -1)],
        ));
    }
    CellComplex::new(format!("interval({m})"), 1, cells)
}

/// Square `p × q` grid on the torus.
///
/// Vertices `v{i}_{j}`; horizontal edges `eh{i}_{j}` run `v{i}_{j} → v{i+1}_{j}`,
/// vertical edges `ev{i}_{j}` run `v{i}_{j} → v{i}_{j+1}`; face `f{i}_{j}` has
/// boundary `eh{i}_{j} + ev{i+1}_{j} − eh{i}_{j+1} − ev{i}_{j}`.
pub fn torus_grid(p: usize, q: usize) -> Result<CellComplex> {
    require_positive("p", p)?;
    require_positive("q", q)?;
    let (wp, wq) = (width(p), width(q));
    let name = |prefix: &str, i: usize, j: usize| format!("{prefix}{:0wp$}_{:0wq$}", i % p, j % q);
    let mut cells = Vec::with_capacity(4 * p * q);
    for i in 0..p {
        for j in 0..q {
            cells.push(Cell::vertex(name("v", i, j)));
        }
    }
    for i in 0..p {
        for j in 0..q {
            let here = name("v", i, j);
            cells.push(Cell::new(
                name("eh", i, j),
                1,
                &[(&name("v", i + 1, j), 1), (&here, -1)],
            ));
            cells.push(Cell::new(
                name("ev", i, j),
                1,
                &[(&name("v", i, j + 1), 1), (&here, -1)],
            ));
        }
    }
    for i in 0..p {
        for j in 0..q {
            cells.push(Cell::new(
                name("f", i, j),
                2,
                &[
                    (&name("eh", i, j), 1),
                    (&name("ev", i + 1, j), 1),
                    (&name("eh", i, j + 1), -1),
                    (&name("ev", i, j), -1),
                ],
            ));
        }
    }
    CellComplex::new(format!("torus_grid({p},{q})"), 2, cells)
}

/// Corners `v{x}{y}{z}` of the unit cube.
const CUBE_EDGES: [(&str, &str, &str); 12] = [
    // The front/top edge runs against the x axis; with this choice the
    // circle-bundle offsets on the two front edges add up to +2.
    ("e:F-T", "v101", "v001"),
    ("e:F-Bo", "v000", "v100"),
    ("e:F-L", "v000", "v001"),
    ("e:F-R", "v100", "v101"),
    ("e:Ba-T", "v011", "v111"),
    ("e:Ba-Bo", "v010", "v110"),
    ("e:Ba-L", "v010", "v011"),
    ("e:Ba-R", "v110", "v111"),
    ("e:L-T", "v001", "v011"),
    ("e:L-Bo", "v000", "v010"),
    ("e:R-T", "v101", "v111"),
    ("e:R-Bo", "v100", "v110"),
];

/// Outward-oriented corner cycles of the six faces.
const CUBE_FACE_CYCLES: [(&str, [&str; 4]); 6] = [
    ("F", ["v000", "v100", "v101", "v001"]),
    ("Ba", ["v010", "v011", "v111", "v110"]),
    ("L", ["v000", "v001", "v011", "v010"]),
    ("R", ["v100", "v110", "v111", "v101"]),
    ("T", ["v001", "v101", "v111", "v011"]),
    ("Bo", ["v000", "v010", "v110", "v100"]),
];

fn cube_cells() -> Vec<Cell> {
    let mut cells = Vec::with_capacity(26);
    for x in 0..2 {
        for y in 0..2 {
            for z in 0..2 {
                cells.push(Cell::vertex(format!("v{x}{y}{z}")));
            }
        }
    }
    for (id, tail, head) in CUBE_EDGES {
        cells.push(Cell::new(id, 1, &[(head, 1), (tail, -1)]));
    }
    for (face, cycle) in CUBE_FACE_CYCLES {
        let boundary: Vec<(&str, i64)> = (0..4)
            .map(|i| {
                let (a, b) = (cycle[i], cycle[(i + 1) % 4]);
                CUBE_EDGES
                    .iter()
                    .find_map(|&(id, tail, head)| {
                        if (tail, head) == (a, b) {
                            Some((id, 1))
                        } else if (tail, head) == (b, a) {
                            Some((id, -1))
                        } else {
                            None
                        }
                    })
                    .expect("face cycle follows cube edges")
            })
            .collect();
        cells.push(Cell::new(face, 2, &boundary));
    }
    cells
}

/// Boundary of the unit cube as a cellulation of S²: 8 vertices, 12 edges
/// `e:<face>-<face>`, 6 outward-oriented faces `F, Ba, L, R, T, Bo`.
pub fn sphere_cube() -> CellComplex {
    CellComplex::new("sphere_cube", 2, cube_cells()).expect("cube is well formed")
}

/// The solid cube: [`sphere_cube`] plus one 3-cell `B` bounded by all six faces.
pub fn solid_cube() -> CellComplex {
    let mut cells = cube_cells();
    let faces: Vec<(&str, i64)> = CUBE_FACES.iter().map(|&f| (f, 1)).collect();
    cells.push(Cell::new("B", 3, &faces));
    CellComplex::new("solid_cube", 3, cells).expect("solid cube is well formed")
}

/// Minimal 6-vertex, 10-triangle triangulation of the real projective plane.
/// Edges run from the lower to the higher vertex; triangles `[a,b,c]` with
/// `a < b < c` carry the simplicial orientation.
pub fn projective_plane_min() -> CellComplex {
    const TRIANGLES: [[usize; 3]; 10] = [
        [1, 2, 3],
        [1, 3, 4],
        [1, 4, 5],
        [1, 5, 6],
        [1, 2, 6],
        [2, 3, 5],
        [3, 4, 6],
        [2, 4, 5],
        [3, 5, 6],
        [2, 4, 6],
    ];
    let v = |a: usize| format!("v{a}");
    let e = |a: usize, b: usize| format!("e{a}{b}");
    let mut cells: Vec<Cell> = (1..=6).map(|a| Cell::vertex(v(a))).collect();
    let mut edges: Vec<(usize, usize)> = TRIANGLES
        .iter()
        .flat_map(|&[a, b, c]| [(a, b), (a, c), (b, c)])
        .collect();
    edges.sort_unstable();
    edges.dedup();
    for (a, b) in edges {
        cells.push(Cell::new(e(a, b), 1, &[(&v(b), 1), (&v(a), -1)]));
    }
    for [a, b, c] in TRIANGLES {
        cells.push(Cell::new(
            format!("t{a}{b}{c}"),
            2,
            &[(&e(b, c), 1), (&e(a, c), -1), (&e(a, b), 1)],
        ));
    }
    CellComplex::new("projective_plane_min", 2, cells).expect("RP2 is well formed")
}

/// Named fixture, parseable from `name` or `name:args` (e.g. `torus_grid:3,3`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Builder {
    Circle(usize),
    Interval(usize),
    TorusGrid(usize, usize),
    SphereCube,
    SolidCube,
    ProjectivePlaneMin,
}

impl Builder {
    pub fn build(&self) -> Result<CellComplex> {
        match *self {
            Builder::Circle(m) => circle(m),
            Builder::Interval(m) => interval(m),
            Builder::TorusGrid(p, q) => torus_grid(p, q),
            Builder::SphereCube => Ok(sphere_cube()),
            Builder::SolidCube => Ok(solid_cube()),
            Builder::ProjectivePlaneMin => Ok(projective_plane_min()),
        }
    }
}

impl fmt::Display for Builder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Builder::Circle(m) => write!(f, "circle:{m}"),
            Builder::Interval(m) => write!(f, "interval:{m}"),
            Builder::TorusGrid(p, q) => write!(f, "torus_grid:{p},{q}"),
            Builder::SphereCube => write!(f, "sphere_cube"),
            Builder::SolidCube => write!(f, "solid_cube"),
            Builder::ProjectivePlaneMin => write!(f, "projective_plane_min"),
        }
    }
}

impl FromStr for Builder {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (name, args) = s.split_once(':').unwrap_or((s, ""));
        let nums: Vec<usize> = if args.is_empty() {
            Vec::new()
        } else {
            args.split(',')
                .map(|a| {
                    a.trim()
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad builder argument `{a}`")))
                })
                .collect::<Result<_>>()?
        };
        let arity = |n: usize| -> Result<()> {
            if nums.len() == n {
                Ok(())
            } else {
                Err(Error::Parse(format!(
                    "builder `{name}` takes {n} argument(s)"
                )))
            }
        };
        match name {
            "circle" => arity(1).map(|_| Builder::Circle(nums[0])),
            "interval" => arity(1).map(|_| Builder::Interval(nums[0])),
            "torus_grid" | "torus" => arity(2).map(|_| Builder::TorusGrid(nums[0], nums[1])),
            "sphere_cube" => arity(0).map(|_| Builder::SphereCube),
            "solid_cube" => arity(0).map(|_| Builder::SolidCube),
            "projective_plane_min" | "rp2" => arity(0).map(|_| Builder::ProjectivePlaneMin),
            _ => Err(Error::Parse(format!("unknown builder `{name}`"))),
        }
    }
}
