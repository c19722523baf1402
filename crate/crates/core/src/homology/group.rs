//! Finitely generated abelian groups in invariant-factor form.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `ℤ^free_rank ⊕ ℤ_{d₁} ⊕ … ⊕ ℤ_{d_m}` with `2 ≤ d₁ | d₂ | … | d_m`.
///
/// The canonical form is unique, so structural equality is group isomorphism.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "GroupDocument", into = "GroupDocument")]
pub struct FgAbelianGroup {
    free_rank: usize,
    torsion: Vec<u64>,
}

/// JSON shape `{"free": r, "torsion": [d, ...]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupDocument {
    pub free: usize,
    pub torsion: Vec<u64>,
}

impl TryFrom<GroupDocument> for FgAbelianGroup {
    type Error = Error;

    fn try_from(doc: GroupDocument) -> Result<Self> {
        if doc.torsion.contains(&0) {
            return Err(Error::Group("torsion order 0".into()));
        }
        Ok(FgAbelianGroup::new(doc.free, doc.torsion))
    }
}

impl From<FgAbelianGroup> for GroupDocument {
    fn from(g: FgAbelianGroup) -> Self {
        GroupDocument {
            free: g.free_rank,
            torsion: g.torsion,
        }
    }
}

fn factorize(mut n: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut q = 1;
            while n.is_multiple_of(p) {
                n /= p;
                q *= p;
            }
            out.push((p, q));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, n));
    }
    out
}

impl FgAbelianGroup {
    /// Normalizes an arbitrary list of cyclic orders; orders equal to 1 are
    /// dropped. Orders must be nonzero (free summands go in `free_rank`).
    pub fn new(free_rank: usize, orders: impl IntoIterator<Item = u64>) -> Self {
        // prime -> prime powers, largest first
        let mut by_prime: BTreeMap<u64, Vec<u64>> = BTreeMap::new();
        for d in orders {
            assert!(d != 0, "cyclic order 0 is a free summand");
            for (p, q) in factorize(d) {
                by_prime.entry(p).or_default().push(q);
            }
        }
        let len = by_prime.values().map(Vec::len).max().unwrap_or(0);
        let mut torsion = vec![1u64; len];
        for powers in by_prime.values_mut() {
            powers.sort_unstable_by(|a, b| b.cmp(a));
            for (slot, q) in powers.iter().enumerate() {
                // largest invariant factor sits at the end
                torsion[len - 1 - slot] *= q;
            }
        }
        Self { free_rank, torsion }
    }

    pub fn trivial() -> Self {
        Self::default()
    }

    /// The integers ℤ.
    pub fn integers() -> Self {
        Self::new(1, [])
    }

    pub fn free(rank: usize) -> Self {
        Self::new(rank, [])
    }

    /// ℤ_d (trivial for d = 1).
    pub fn cyclic(d: u64) -> Self {
        Self::new(0, [d])
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn torsion(&self) -> &[u64] {
        &self.torsion
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    /// Group order, `None` when infinite.
    pub fn order(&self) -> Option<BigUint> {
        self.is_finite()
            .then(|| self.torsion.iter().map(|&d| BigUint::from(d)).product())
    }

    /// Number of cyclic summands, i.e. of coordinates of an element.
    pub fn generator_count(&self) -> usize {
        self.free_rank + self.torsion.len()
    }

    /// Cyclic summands in order: `0` for ℤ, `d` for ℤ_d.
    pub fn summand_orders(&self) -> Vec<u64> {
        std::iter::repeat_n(0, self.free_rank)
            .chain(self.torsion.iter().copied())
            .collect()
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        Self::new(
            self.free_rank + other.free_rank,
            self.torsion.iter().chain(&other.torsion).copied(),
        )
    }

    /// `self ⊗ other`.
    pub fn tensor(&self, other: &Self) -> Self {
        let mut orders = Vec::new();
        for &a in &self.torsion {
            orders.extend(std::iter::repeat_n(a, other.free_rank));
            orders.extend(other.torsion.iter().map(|&b| a.gcd(&b)));
        }
        for &b in &other.torsion {
            orders.extend(std::iter::repeat_n(b, self.free_rank));
        }
        Self::new(self.free_rank * other.free_rank, orders)
    }

    /// `Tor₁(self, other)`; only torsion pairs contribute.
    pub fn tor(&self, other: &Self) -> Self {
        let orders = self
            .torsion
            .iter()
            .flat_map(|&a| other.torsion.iter().map(move |&b| a.gcd(&b)));
        Self::new(0, orders)
    }

    // --- element arithmetic on coordinate tuples -------------------------

    /// The zero element.
    pub fn zero_element(&self) -> Vec<i64> {
        vec![0; self.generator_count()]
    }

    /// Reduces torsion coordinates into `[0, d)`.
    pub fn normalize(&self, x: &mut [i64]) {
        debug_assert_eq!(x.len(), self.generator_count());
        for (v, &d) in x[self.free_rank..].iter_mut().zip(&self.torsion) {
            *v = v.rem_euclid(d as i64);
        }
    }

    pub fn check_element(&self, x: &[i64]) -> Result<()> {
        if x.len() == self.generator_count() {
            Ok(())
        } else {
            Err(Error::Group(format!(
                "element has {} coordinates, group {} needs {}",
                x.len(),
                self,
                self.generator_count()
            )))
        }
    }

    pub fn is_zero_element(&self, x: &[i64]) -> bool {
        x[..self.free_rank].iter().all(|&v| v == 0)
            && x[self.free_rank..]
                .iter()
                .zip(&self.torsion)
                .all(|(&v, &d)| v.rem_euclid(d as i64) == 0)
    }

    /// Size of an element: `Σ|free coords| + Σ min(t, d − t)` over torsion coords.
    pub fn magnitude(&self, x: &[i64]) -> u64 {
        let free: u64 = x[..self.free_rank].iter().map(|v| v.unsigned_abs()).sum();
        let tors: u64 = x[self.free_rank..]
            .iter()
            .zip(&self.torsion)
            .map(|(&v, &d)| {
                let r = v.rem_euclid(d as i64) as u64;
                r.min(d - r)
            })
            .sum();
        free + tors
    }
}

impl fmt::Display for FgAbelianGroup {
    /// `Z^r x Z_{d1} x ...`; the trivial group renders as `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|d| format!("Z_{d}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" x "))
        }
    }
}

impl FromStr for FgAbelianGroup {
    type Err = Error;

    /// Accepts the rendering of [`Display`](fmt::Display) (any summand order,
    /// `Z_d` or `Zd`, optional `^k` exponents) and `0`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "0" || s.is_empty() {
            return Ok(Self::trivial());
        }
        let bad = || Error::Parse(format!("cannot parse group `{s}`"));
        let mut free = 0usize;
        let mut orders = Vec::new();
        for term in s.split(['x', '+', '⊕']) {
            let term = term.trim();
            let (base, exp) = match term.split_once('^') {
                Some((b, e)) => (b.trim(), e.trim().parse::<usize>().map_err(|_| bad())?),
                None => (term, 1),
            };
            let rest = base.strip_prefix('Z').ok_or_else(bad)?;
            let rest = rest.strip_prefix('_').unwrap_or(rest);
            let rest = rest.trim_start_matches('{').trim_end_matches('}');
            if rest.is_empty() {
                free += exp;
            } else {
                let d: u64 = rest.parse().map_err(|_| bad())?;
                if d == 0 {
                    return Err(bad());
                }
                orders.extend(std::iter::repeat_n(d, exp));
            }
        }
        Ok(Self::new(free, orders))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn canonical_form() {
        let g = FgAbelianGroup::new(1, [2, 3, 4, 1]);
        assert_eq!(g.torsion(), &[2, 12]);
        assert_eq!(g.to_string(), "Z x Z_2 x Z_12");
        assert_eq!(FgAbelianGroup::new(0, [6]), FgAbelianGroup::new(0, [2, 3]));
        assert_eq!(FgAbelianGroup::new(2, []).to_string(), "Z^2");
        assert_eq!(FgAbelianGroup::trivial().to_string(), "0");
    }

    #[test]
    fn parse_rendering() {
        for s in ["Z^2", "Z_2", "0", "Z x Z_2 x Z_12", "Z^3 x Z_5"] {
            assert_eq!(s.parse::<FgAbelianGroup>().unwrap().to_string(), s);
        }
        assert_eq!(
            "Z3".parse::<FgAbelianGroup>().unwrap(),
            FgAbelianGroup::cyclic(3)
        );
        assert!("Q".parse::<FgAbelianGroup>().is_err());
        assert!("Z_0".parse::<FgAbelianGroup>().is_err());
    }

    #[test]
    fn tensor_and_tor() {
        let z = FgAbelianGroup::integers();
        let z4 = FgAbelianGroup::cyclic(4);
        let z6 = FgAbelianGroup::cyclic(6);
        assert_eq!(z.tensor(&z4), z4);
        assert_eq!(z4.tensor(&z6), FgAbelianGroup::cyclic(2));
        assert!(z.tor(&z4).is_trivial());
        assert_eq!(z4.tor(&z6), FgAbelianGroup::cyclic(2));
        assert_eq!(
            FgAbelianGroup::free(2).tensor(&FgAbelianGroup::free(3)),
            FgAbelianGroup::free(6)
        );
    }

    #[test]
    fn element_magnitude() {
        let g = FgAbelianGroup::new(1, [5]);
        assert_eq!(g.magnitude(&[-2, 4]), 3);
        let mut x = vec![3, -1];
        g.normalize(&mut x);
        assert_eq!(x, vec![3, 4]);
        assert!(g.is_zero_element(&[0, 10]));
    }

    proptest! {
        #[test]
        fn normalization_is_idempotent(free in 0usize..3, orders in prop::collection::vec(1u64..40, 0..5)) {
            let g = FgAbelianGroup::new(free, orders.clone());
            let again = FgAbelianGroup::new(g.free_rank(), g.torsion().to_vec());
            prop_assert_eq!(&g, &again);
            for w in g.torsion().windows(2) {
                prop_assert_eq!(w[1] % w[0], 0);
            }
            prop_assert!(g.torsion().iter().all(|&d| d >= 2));
            let before: u64 = orders.iter().product();
            let after: u64 = g.torsion().iter().product();
            prop_assert_eq!(before, after);
        }
    }
}
