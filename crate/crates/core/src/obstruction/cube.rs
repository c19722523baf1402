//! The unit tangent bundle of S² on the cube.
//!
//! Each face carries the trivialization given by its unfolding into the
//! plane. Every edge `e:A-B` is owned by its first face `A`; the section on
//! it is written in A's trivialization and the other face reads it through
//! the rotation number `τ(A → B)` of the change of frame, counted with the
//! regular value `c = π/4` and paths avoiding `c`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{BaseRef, BundleSpec, TransitionMap};
use crate::complex::sphere_cube;
use crate::homology::FgAbelianGroup;

/// Frame rotation between two adjacent faces of the unfolded cube.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThetaEntry {
    pub faces: (String, String),
    pub quarter_turns: u8,
    pub radians: f64,
}

/// Crossings of the regular value along the transition from `from` to `to`
/// over the shared edge, with the orientation sign `O(β, F)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossingDatum {
    pub from: String,
    pub to: String,
    pub edge: String,
    pub crossings: usize,
    pub orientation: i64,
}

const THETA: [(&str, &str, u8); 12] = [
    ("F", "T", 0),
    ("F", "Bo", 0),
    ("F", "L", 0),
    ("F", "R", 0),
    ("Ba", "T", 2),
    ("Ba", "Bo", 2),
    ("Ba", "L", 0),
    ("Ba", "R", 0),
    ("L", "T", 1),
    ("L", "Bo", 3),
    ("R", "T", 3),
    ("R", "Bo", 1),
];

fn edge_id(a: &str, b: &str) -> String {
    format!("e:{a}-{b}")
}

/// `θ` for all 12 edges, in quarter turns and radians.
pub fn cube_theta_table() -> Vec<ThetaEntry> {
    THETA
        .iter()
        .map(|&(a, b, q)| ThetaEntry {
            faces: (a.into(), b.into()),
            quarter_turns: q,
            radians: f64::from(q) * std::f64::consts::FRAC_PI_2,
        })
        .collect()
}

/// Rotation number of the frame change from face `i` to adjacent face `j`:
/// −1 from F into T or Bo, +1 back, 0 across every other edge.
pub fn cube_tau(i: &str, j: &str) -> i64 {
    match (i, j) {
        ("F", "T") | ("F", "Bo") => -1,
        ("T", "F") | ("Bo", "F") => 1,
        _ => 0,
    }
}

/// `τ` for both directions of every edge.
pub fn cube_tau_table() -> BTreeMap<(String, String), i64> {
    THETA
        .iter()
        .flat_map(|&(a, b, _)| [(a, b), (b, a)])
        .map(|(i, j)| ((i.to_string(), j.to_string()), cube_tau(i, j)))
        .collect()
}

/// Parity data reproducing [`cube_tau`]: a single crossing across the front
/// edges to T and Bo, two crossings wherever the frames differ by a nonzero
/// rotation, none elsewhere.
pub fn cube_crossing_data() -> Vec<CrossingDatum> {
    THETA
        .iter()
        .flat_map(|&(a, b, q)| {
            let front = a == "F" && (b == "T" || b == "Bo");
            let crossings = if front {
                1
            } else if q != 0 {
                2
            } else {
                0
            };
            [(a, b, -1), (b, a, 1)].map(|(from, to, sign)| CrossingDatum {
                from: from.into(),
                to: to.into(),
                edge: edge_id(a, b),
                crossings,
                orientation: if front { sign } else { 1 },
            })
        })
        .collect()
}

/// `τ = O(β, F)` for an odd number of crossings, 0 for an even number.
pub fn sk_bundle_tau(data: &[CrossingDatum]) -> BTreeMap<(String, String), i64> {
    data.iter()
        .map(|c| {
            let tau = if c.crossings % 2 == 1 {
                c.orientation
            } else {
                0
            };
            ((c.from.clone(), c.to.clone()), tau)
        })
        .collect()
}

/// `k = 1`, `G = ℤ` on [`sphere_cube`]: identity automorphisms, offset
/// `τ(owner → face)` wherever the face reads an edge it does not own, and
/// `f = 0`. The zero section violates T and Bo with value +1 each.
pub fn build_cube_tangent_bundle() -> BundleSpec {
    let g = FgAbelianGroup::integers();
    let base = sphere_cube();
    let mut transitions = BTreeMap::new();
    for j in 0..base.cell_count(2) {
        let face = base.id(2, j);
        for &(i, _) in base.faces_of(2, j) {
            let edge = base.id(1, i);
            let owner = edge
                .strip_prefix("e:")
                .and_then(|s| s.split('-').next())
                .expect("cube edge ids are e:A-B");
            let offset = if owner == face {
                0
            } else {
                cube_tau(owner, face)
            };
            transitions.insert(
                (face.to_string(), edge.to_string()),
                TransitionMap::shift(&g, vec![offset]),
            );
        }
    }
    BundleSpec::new(
        BaseRef::Builder("sphere_cube".into()),
        1,
        g,
        transitions,
        BTreeMap::new(),
    )
    .expect("cube bundle is well formed")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tau_values() {
        assert_eq!(cube_tau("F", "T"), -1);
        assert_eq!(cube_tau("T", "F"), 1);
        assert_eq!(cube_tau("F", "Bo"), -1);
        assert_eq!(cube_tau("L", "T"), 0);
        let t = cube_tau_table();
        assert_eq!(t.len(), 24);
        assert_eq!(t.values().filter(|&&v| v != 0).count(), 4);
    }

    #[test]
    fn theta_values() {
        let theta = cube_theta_table();
        let get = |a: &str, b: &str| {
            theta
                .iter()
                .find(|e| e.faces == (a.to_string(), b.to_string()))
                .unwrap()
                .quarter_turns
        };
        assert_eq!(get("F", "L"), 0);
        assert_eq!(get("Ba", "L"), 0);
        assert_eq!(get("Ba", "R"), 0);
        assert_eq!(get("F", "R"), 0);
        assert_eq!(get("L", "T"), 1);
        assert_eq!(get("Ba", "T"), 2);
        assert_eq!(get("R", "T"), 3);
        assert_eq!(get("L", "Bo"), 3);
        assert_eq!(get("Ba", "Bo"), 2);
        assert_eq!(get("R", "Bo"), 1);
    }

    #[test]
    fn parity_rule() {
        let one = |n, o| CrossingDatum {
            from: "A".into(),
            to: "B".into(),
            edge: "e".into(),
            crossings: n,
            orientation: o,
        };
        let key = ("A".to_string(), "B".to_string());
        assert_eq!(sk_bundle_tau(&[one(1, 1)])[&key], 1);
        assert_eq!(sk_bundle_tau(&[one(3, -1)])[&key], -1);
        assert_eq!(sk_bundle_tau(&[one(2, 1)])[&key], 0);
        assert_eq!(sk_bundle_tau(&[one(0, -1)])[&key], 0);
    }

    #[test]
    fn parity_reproduces_cube_table() {
        assert_eq!(sk_bundle_tau(&cube_crossing_data()), cube_tau_table());
    }

    #[test]
    fn edges_exist() {
        let c = sphere_cube();
        for (a, b, _) in THETA {
            assert_eq!(c.locate(&edge_id(a, b)).map(|x| x.0), Some(1));
        }
    }
}
