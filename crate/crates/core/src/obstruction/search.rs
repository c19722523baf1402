use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{
    fundamental_weights, reference_obstruction, BundleSpec, Compiled, GroupCochain,
    ObstructionCochain,
};
use crate::error::{Error, Result};

/// Default node budget of [`minimal_violation_search`].
pub const DEFAULT_NODE_CAP: u64 = 2_000_000_000;

/// Largest box [`sweep_sections`] will enumerate.
const SWEEP_LIMIT: u128 = 20_000_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchOptions {
    /// Per-coordinate bound `|a| ≤ range` on free coordinates. `None` picks
    /// twice the largest free coordinate of the reference obstruction (≥ 1).
    pub range: Option<i64>,
    pub node_cap: u64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            range: None,
            node_cap: DEFAULT_NODE_CAP,
        }
    }
}

/// Outcome of [`minimal_violation_search`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinimalViolation {
    pub section: GroupCochain,
    pub obstruction: ObstructionCochain,
    pub range: i64,
    pub nodes: u64,
    /// The node budget ran out; the result is the best found so far.
    pub capped: bool,
}

fn default_range(spec: &BundleSpec) -> Result<i64> {
    let s0 = reference_obstruction(spec)?;
    let r = spec.group().free_rank();
    let max = s0
        .values
        .values
        .values()
        .flat_map(|v| v[..r].iter().map(|x| x.abs()))
        .max()
        .unwrap_or(0);
    Ok((2 * max).max(1))
}

/// Values of one coordinate in search order: 0, −1, 1, −2, 2, …
fn coordinate_values(order: u64, range: i64) -> Vec<i64> {
    let (lo, hi) = if order == 0 {
        (-range, range)
    } else {
        let d = order as i64;
        (-((d - 1) / 2), d / 2)
    };
    let mut v: Vec<i64> = (lo..=hi).collect();
    v.sort_by_key(|&x| (x.abs(), x > 0));
    v
}

/// All group elements of the search box, by magnitude then coordinatewise order.
fn element_domain(comp: &Compiled, range: i64) -> Vec<Vec<i64>> {
    let per: Vec<Vec<i64>> = comp
        .orders
        .iter()
        .map(|&d| coordinate_values(d, range))
        .collect();
    let mut out: Vec<(u64, Vec<usize>)> = vec![(0, Vec::new())];
    for vals in &per {
        out = out
            .into_iter()
            .flat_map(|(m, idx)| {
                vals.iter().enumerate().map(move |(p, &x)| {
                    let mut idx = idx.clone();
                    idx.push(p);
                    (m + x.unsigned_abs(), idx)
                })
            })
            .collect();
    }
    out.sort();
    out.into_iter()
        .map(|(_, idx)| idx.iter().zip(&per).map(|(&p, vals)| vals[p]).collect())
        .collect()
}

/// Per variable: the checks it enters and the matrix block it enters with.
fn var_checks(comp: &Compiled) -> Vec<Vec<(usize, Vec<i64>)>> {
    let mut out = vec![Vec::new(); comp.n_vars];
    for (j, terms) in comp.checks.iter().enumerate() {
        for (i, m) in terms {
            out[*i].push((j, m.clone()));
        }
    }
    out
}

struct Dfs<'a> {
    comp: &'a Compiled,
    order: Vec<usize>,
    touches: Vec<Vec<(usize, Vec<i64>)>>,
    domain: Vec<Vec<i64>>,
    remaining: Vec<usize>,
    partial: Vec<i64>,
    a: Vec<i64>,
    closed: (usize, u64),
    best: Option<((usize, u64), Vec<i64>)>,
    nodes: u64,
    cap: u64,
    capped: bool,
}

impl Dfs<'_> {
    fn check_value(&self, j: usize) -> (usize, u64) {
        let g = self.comp.g;
        let m = self.comp.magnitude(&self.partial[j * g..(j + 1) * g]);
        (usize::from(m > 0), m)
    }

    fn assign(&mut self, var: usize, elem: &[i64], sign: i64) {
        let g = self.comp.g;
        for t in 0..self.touches[var].len() {
            let j = self.touches[var][t].0;
            if sign < 0 && self.remaining[j] == 0 {
                let (v, m) = self.check_value(j);
                self.closed.0 -= v;
                self.closed.1 -= m;
            }
            for r in 0..g {
                let row = &self.touches[var][t].1[r * g..(r + 1) * g];
                let delta: i64 = row.iter().zip(elem).map(|(x, y)| x * y).sum();
                self.partial[j * g + r] += sign * delta;
            }
            if sign > 0 {
                self.remaining[j] -= 1;
                if self.remaining[j] == 0 {
                    let (v, m) = self.check_value(j);
                    self.closed.0 += v;
                    self.closed.1 += m;
                }
            } else {
                self.remaining[j] += 1;
            }
        }
        let slot = &mut self.a[var * g..(var + 1) * g];
        if sign > 0 {
            slot.copy_from_slice(elem);
        } else {
            slot.fill(0);
        }
    }

    fn beaten(&self) -> bool {
        matches!(&self.best, Some((b, _)) if self.closed >= *b)
    }

    fn run(&mut self, depth: usize) {
        if self.capped {
            return;
        }
        if depth == self.order.len() {
            if !self.beaten() {
                self.best = Some((self.closed, self.a.clone()));
            }
            return;
        }
        let var = self.order[depth];
        for e in 0..self.domain.len() {
            self.nodes += 1;
            if self.nodes > self.cap {
                self.capped = true;
                return;
            }
            let elem = self.domain[e].clone();
            self.assign(var, &elem, 1);
            if !self.beaten() {
                self.run(depth + 1);
            }
            self.assign(var, &elem, -1);
            if self.capped || matches!(self.best, Some(((0, 0), _))) {
                return;
            }
        }
    }
}

/// Section minimizing first the number of violated checks, then the total
/// violation degree `Σ|s_γ|`, by depth-first branch and bound over the box
/// of [`SearchOptions`]. Values are tried in the order 0, −1, 1, −2, 2, …
/// and variables in order of the checks they complete; among equal scores
/// the first one reached wins. Torsion coordinates range over all residues.
pub fn minimal_violation_search(
    spec: &BundleSpec,
    opts: SearchOptions,
) -> Result<MinimalViolation> {
    let comp = spec.compile()?;
    let range = match opts.range {
        Some(r) if r < 0 => {
            return Err(Error::Range {
                what: "range",
                value: r,
                allowed: ">= 0".into(),
            })
        }
        Some(r) => r,
        None => default_range(spec)?,
    };
    let touches = var_checks(&comp);
    let mut order = Vec::with_capacity(comp.n_vars);
    let mut seen = vec![false; comp.n_vars];
    for terms in &comp.checks {
        for (i, _) in terms {
            if !seen[*i] {
                seen[*i] = true;
                order.push(*i);
            }
        }
    }
    let remaining: Vec<usize> = comp.checks.iter().map(Vec::len).collect();
    let mut dfs = Dfs {
        comp: &comp,
        order,
        touches,
        domain: element_domain(&comp, range),
        remaining,
        partial: comp.constants.clone(),
        a: vec![0; comp.n_vars * comp.g],
        closed: (0, 0),
        best: None,
        nodes: 0,
        cap: opts.node_cap,
        capped: false,
    };
    for j in 0..comp.checks.len() {
        if dfs.remaining[j] == 0 {
            let (v, m) = dfs.check_value(j);
            dfs.closed.0 += v;
            dfs.closed.1 += m;
        }
    }
    dfs.run(0);
    let a = dfs
        .best
        .map(|(_, a)| a)
        .unwrap_or_else(|| vec![0; comp.n_vars * comp.g]);
    let s = comp.evaluate(&a);
    Ok(MinimalViolation {
        section: GroupCochain::from_dense(spec.base(), spec.degree(), spec.group(), &a),
        obstruction: ObstructionCochain::from_flat(spec, &s),
        range,
        nodes: dfs.nodes,
        capped: dfs.capped,
    })
}

/// Statistics over every section in a box, for cyclic coefficient groups.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepReport {
    pub range: i64,
    pub configurations: u64,
    pub min_violations: usize,
    pub max_violations: usize,
    /// Least `Σ|s_γ|` among sections with `min_violations` violated checks.
    pub min_total_degree: u64,
    /// Least `Σ|s_γ|` over the whole box.
    pub least_degree: u64,
    /// Range of `Σ_γ c_γ s_γ` over the fundamental cycle, when defined.
    pub fundamental_total: Option<(i64, i64)>,
}

#[derive(Clone, Copy)]
struct Acc {
    count: u64,
    min_v: usize,
    max_v: usize,
    min_deg: u64,
    least_deg: u64,
    min_t: i64,
    max_t: i64,
}

impl Acc {
    const EMPTY: Acc = Acc {
        count: 0,
        min_v: usize::MAX,
        max_v: 0,
        min_deg: u64::MAX,
        least_deg: u64::MAX,
        min_t: i64::MAX,
        max_t: i64::MIN,
    };

    fn record(&mut self, v: usize, deg: u64, t: i64) {
        self.count += 1;
        if v < self.min_v {
            self.min_v = v;
            self.min_deg = deg;
        } else if v == self.min_v {
            self.min_deg = self.min_deg.min(deg);
        }
        self.max_v = self.max_v.max(v);
        self.least_deg = self.least_deg.min(deg);
        self.min_t = self.min_t.min(t);
        self.max_t = self.max_t.max(t);
    }

    fn merge(mut self, o: Acc) -> Acc {
        if o.count == 0 {
            return self;
        }
        self.count += o.count;
        if o.min_v < self.min_v {
            self.min_v = o.min_v;
            self.min_deg = o.min_deg;
        } else if o.min_v == self.min_v {
            self.min_deg = self.min_deg.min(o.min_deg);
        }
        self.max_v = self.max_v.max(o.max_v);
        self.least_deg = self.least_deg.min(o.least_deg);
        self.min_t = self.min_t.min(o.min_t);
        self.max_t = self.max_t.max(o.max_t);
        self
    }
}

/// Enumerates every section with free values in `[−range, range]` (all
/// residues for ℤ_d) and records violation counts and fundamental totals.
/// The box is split over the values of the first two cells and swept in
/// parallel with incremental check updates.
pub fn sweep_sections(spec: &BundleSpec, range: i64) -> Result<SweepReport> {
    let comp = spec.compile()?;
    if comp.g != 1 {
        return Err(Error::Spec(
            "section sweep needs a cyclic coefficient group".into(),
        ));
    }
    let d = comp.orders[0] as i64;
    let values: Vec<i64> = if d == 0 {
        (-range..=range).collect()
    } else {
        (0..d).collect()
    };
    let n = comp.n_vars;
    let size = (values.len() as u128).checked_pow(n as u32);
    if size.is_none_or(|s| s > SWEEP_LIMIT) {
        return Err(Error::Capacity(format!(
            "{}^{} sections exceed the sweep limit",
            values.len(),
            n
        )));
    }
    let weights = fundamental_weights(spec);
    let w: Vec<i64> = weights
        .clone()
        .unwrap_or_else(|| vec![0; comp.checks.len()]);
    let touches: Vec<Vec<(usize, i64)>> = var_checks(&comp)
        .into_iter()
        .map(|t| t.into_iter().map(|(j, m)| (j, m[0])).collect())
        .collect();
    let mag = |v: i64| -> u64 {
        if d == 0 {
            v.unsigned_abs()
        } else {
            let r = v.rem_euclid(d) as u64;
            r.min(d as u64 - r)
        }
    };
    let head = n.min(2);
    let blocks: Vec<Vec<usize>> = (0..values.len().pow(head as u32))
        .map(|b| {
            let mut idx = vec![0; head];
            let mut b = b;
            for x in idx.iter_mut().rev() {
                *x = b % values.len();
                b /= values.len();
            }
            idx
        })
        .collect();

    let acc = blocks
        .par_iter()
        .map(|prefix| {
            let mut idx = vec![0usize; n];
            idx[..head].copy_from_slice(prefix);
            let mut a: Vec<i64> = idx.iter().map(|&p| values[p]).collect();
            let mut s = comp.evaluate(&a);
            let mut viol = s.iter().filter(|&&v| mag(v) > 0).count();
            let mut deg: u64 = s.iter().map(|&v| mag(v)).sum();
            let mut total: i64 = s.iter().zip(&w).map(|(x, y)| x * y).sum();
            let mut acc = Acc::EMPTY;
            let reduce = |t: i64| if d == 0 { t } else { t.rem_euclid(d) };
            loop {
                acc.record(viol, deg, reduce(total));
                // odometer over the tail
                let mut pos = n;
                loop {
                    if pos == head {
                        return acc;
                    }
                    pos -= 1;
                    let (old, next) = if idx[pos] + 1 < values.len() {
                        idx[pos] += 1;
                        (a[pos], values[idx[pos]])
                    } else {
                        idx[pos] = 0;
                        (a[pos], values[0])
                    };
                    let delta = next - old;
                    a[pos] = next;
                    for &(j, m) in &touches[pos] {
                        let before = mag(s[j]);
                        s[j] += m * delta;
                        let after = mag(s[j]);
                        viol = viol + usize::from(after > 0) - usize::from(before > 0);
                        deg = deg + after - before;
                        total += w[j] * m * delta;
                    }
                    if idx[pos] != 0 {
                        break;
                    }
                }
            }
        })
        .reduce(|| Acc::EMPTY, Acc::merge);

    Ok(SweepReport {
        range,
        configurations: acc.count,
        min_violations: acc.min_v,
        max_violations: acc.max_v,
        min_total_degree: acc.min_deg,
        least_degree: acc.least_deg,
        fundamental_total: weights.map(|_| (acc.min_t, acc.max_t)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homology::FgAbelianGroup;
    use crate::obstruction::{build_cube_tangent_bundle, BaseRef, TransitionMap};

    #[test]
    fn domain_order() {
        assert_eq!(coordinate_values(0, 2), vec![0, -1, 1, -2, 2]);
        assert_eq!(coordinate_values(4, 0), vec![0, -1, 1, 2]);
        let comp = BundleSpec::trivial(
            BaseRef::Builder("circle:3".into()),
            0,
            FgAbelianGroup::new(1, [2]),
        )
        .unwrap()
        .compile()
        .unwrap();
        let dom = element_domain(&comp, 1);
        assert_eq!(dom.len(), 6);
        assert_eq!(dom[0], vec![0, 0]);
    }

    #[test]
    fn cube_minimum_is_one_face_of_degree_two() {
        let spec = build_cube_tangent_bundle();
        let m = minimal_violation_search(&spec, SearchOptions::default()).unwrap();
        assert!(!m.capped);
        assert_eq!(m.range, 2);
        // one face can carry the whole Euler number
        assert_eq!(m.obstruction.violated_count(), 1);
        assert_eq!(m.obstruction.total_degree, 2);
        assert_eq!(m.obstruction.fundamental_total, Some(vec![2]));
    }

    #[test]
    fn trivial_and_flipped_reach_zero() {
        let spec = BundleSpec::trivial(
            BaseRef::Builder("torus_grid:2,2".into()),
            1,
            FgAbelianGroup::cyclic(3),
        )
        .unwrap();
        let m = minimal_violation_search(&spec, SearchOptions::default()).unwrap();
        assert_eq!(m.obstruction.violated_count(), 0);
        let flipped = build_cube_tangent_bundle()
            .with_transition(
                "Bo",
                "e:F-Bo",
                TransitionMap::shift(&FgAbelianGroup::integers(), vec![1]),
            )
            .unwrap();
        let m = minimal_violation_search(&flipped, SearchOptions::default()).unwrap();
        assert_eq!(m.obstruction.violated_count(), 0);
    }

    #[test]
    fn cap_sets_flag() {
        let spec = build_cube_tangent_bundle();
        let m = minimal_violation_search(
            &spec,
            SearchOptions {
                range: Some(2),
                node_cap: 50,
            },
        )
        .unwrap();
        assert!(m.capped);
        assert!(m.obstruction.violated_count() >= 2);
    }

    #[test]
    fn small_sweep() {
        let spec = build_cube_tangent_bundle();
        let r = sweep_sections(&spec, 1).unwrap();
        assert_eq!(r.configurations, 3u64.pow(12));
        assert_eq!(r.min_violations, 1);
        assert_eq!(r.min_total_degree, 2);
        assert_eq!(r.least_degree, 2);
        assert_eq!(r.fundamental_total, Some((2, 2)));
        let z4 = BundleSpec::trivial(
            BaseRef::Builder("circle:4".into()),
            0,
            FgAbelianGroup::cyclic(4),
        )
        .unwrap();
        let r = sweep_sections(&z4, 0).unwrap();
        assert_eq!(r.configurations, 256);
        assert_eq!(r.min_violations, 0);
        assert_eq!(r.max_violations, 4);
    }
}
