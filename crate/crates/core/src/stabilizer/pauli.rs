use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `ζ_d^phase · Π X_{d,i}^{x_i} · Π Z_{d,i}^{z_i}`, normal-ordered with every
/// X to the left of every Z. Exponents live in `[0, d)`; zero exponents are
/// not stored.
///
/// JSON: `{"d": 3, "x": {"e0": 1}, "z": {}, "phase": 0}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuditPauliOperator {
    pub d: u64,
    #[serde(default)]
    pub x: BTreeMap<String, i64>,
    #[serde(default)]
    pub z: BTreeMap<String, i64>,
    #[serde(default)]
    pub phase: i64,
}

fn reduce_map(m: &mut BTreeMap<String, i64>, d: i64) {
    for v in m.values_mut() {
        *v = v.rem_euclid(d);
    }
    m.retain(|_, v| *v != 0);
}

fn dot(a: &BTreeMap<String, i64>, b: &BTreeMap<String, i64>) -> i64 {
    // iterate the smaller map
    let (small, large) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    small
        .iter()
        .filter_map(|(k, v)| large.get(k).map(|w| v * w))
        .sum()
}

impl QuditPauliOperator {
    pub fn identity(d: u64) -> Self {
        Self {
            d,
            x: BTreeMap::new(),
            z: BTreeMap::new(),
            phase: 0,
        }
    }

    pub fn new<'a>(
        d: u64,
        x: impl IntoIterator<Item = (&'a str, i64)>,
        z: impl IntoIterator<Item = (&'a str, i64)>,
        phase: i64,
    ) -> Self {
        let mut op = Self::identity(d);
        for (k, v) in x {
            *op.x.entry(k.to_string()).or_insert(0) += v;
        }
        for (k, v) in z {
            *op.z.entry(k.to_string()).or_insert(0) += v;
        }
        op.phase = phase;
        op.normalized()
    }

    /// `X_d^e` on one site.
    pub fn x_on(d: u64, cell: &str, e: i64) -> Self {
        Self::new(d, [(cell, e)], [], 0)
    }

    /// `Z_d^e` on one site.
    pub fn z_on(d: u64, cell: &str, e: i64) -> Self {
        Self::new(d, [], [(cell, e)], 0)
    }

    pub fn normalized(mut self) -> Self {
        let d = self.d as i64;
        reduce_map(&mut self.x, d);
        reduce_map(&mut self.z, d);
        self.phase = self.phase.rem_euclid(d);
        self
    }

    pub fn is_identity(&self) -> bool {
        self.x.is_empty() && self.z.is_empty() && self.phase == 0
    }

    /// Pure X-type (no Z exponents).
    pub fn is_x_type(&self) -> bool {
        self.z.is_empty()
    }

    pub fn is_z_type(&self) -> bool {
        self.x.is_empty()
    }

    /// Sites with a nonzero X or Z exponent.
    pub fn support(&self) -> Vec<&str> {
        let mut s: Vec<&str> = self
            .x
            .keys()
            .chain(self.z.keys())
            .map(String::as_str)
            .collect();
        s.sort_unstable();
        s.dedup();
        s
    }

    pub fn weight(&self) -> usize {
        self.support().len()
    }

    fn same_modulus(&self, other: &Self) -> Result<()> {
        if self.d == other.d {
            Ok(())
        } else {
            Err(Error::ModulusMismatch(self.d, other.d))
        }
    }

    /// `self · other`, normal-ordered. Moving `Z^a` past `X^b` on one site
    /// costs `ζ^{ab}` since `Z X = ζ X Z`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        self.same_modulus(other)?;
        let mut out = self.clone();
        out.phase += other.phase + dot(&self.z, &other.x);
        for (k, v) in &other.x {
            *out.x.entry(k.clone()).or_insert(0) += v;
        }
        for (k, v) in &other.z {
            *out.z.entry(k.clone()).or_insert(0) += v;
        }
        Ok(out.normalized())
    }

    /// `self^m` for `m ≥ 0`.
    pub fn pow(&self, m: u64) -> Self {
        // (X^x Z^z)^m = ζ^{(x·z) m(m−1)/2} X^{mx} Z^{mz}
        let d = self.d as i64;
        let m_mod = (m % self.d) as i64;
        let tri = ((m as u128 * (m as u128).saturating_sub(1) / 2) % self.d as u128) as i64;
        let xz = dot(&self.x, &self.z).rem_euclid(d);
        Self {
            d: self.d,
            x: self.x.iter().map(|(k, v)| (k.clone(), v * m_mod)).collect(),
            z: self.z.iter().map(|(k, v)| (k.clone(), v * m_mod)).collect(),
            phase: self.phase * m_mod + xz * tri,
        }
        .normalized()
    }

    /// Inverse operator. Not `pow(d − 1)` in general: for even `d` the
    /// d-th power of a mixed operator can carry a phase.
    pub fn inverse(&self) -> Self {
        // Z^{−z} X^{−x} ζ^{−p} = ζ^{x·z − p} X^{−x} Z^{−z}
        Self {
            d: self.d,
            x: self.x.iter().map(|(k, v)| (k.clone(), -v)).collect(),
            z: self.z.iter().map(|(k, v)| (k.clone(), -v)).collect(),
            phase: dot(&self.x, &self.z) - self.phase,
        }
        .normalized()
    }
}

/// Exponent `e` with `a⁻¹ b⁻¹ a b = ζ_d^e`, i.e. `e = Σ (a.z · b.x − a.x · b.z)`.
/// Zero iff the operators commute; `Z` against `X` on one site gives 1.
pub fn symplectic_phase(a: &QuditPauliOperator, b: &QuditPauliOperator) -> Result<i64> {
    a.same_modulus(b)?;
    Ok((dot(&a.z, &b.x) - dot(&a.x, &b.z)).rem_euclid(a.d as i64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn arb_op(d: u64) -> impl Strategy<Value = QuditPauliOperator> {
        let sites = ["a", "b", "c"];
        (
            prop::collection::vec(0..d as i64, 3),
            prop::collection::vec(0..d as i64, 3),
            0..d as i64,
        )
            .prop_map(move |(x, z, p)| {
                QuditPauliOperator::new(
                    d,
                    sites.iter().copied().zip(x),
                    sites.iter().copied().zip(z),
                    p,
                )
            })
    }

    #[test]
    fn single_site_commutator() {
        for d in 2..=5 {
            let z = QuditPauliOperator::z_on(d, "e", 1);
            let x = QuditPauliOperator::x_on(d, "e", 1);
            assert_eq!(symplectic_phase(&z, &x).unwrap(), 1);
            assert_eq!(symplectic_phase(&x, &z).unwrap(), d as i64 - 1);
            // Z X = ζ X Z
            let zx = z.compose(&x).unwrap();
            let xz = x.compose(&z).unwrap();
            assert_eq!(zx.phase, 1);
            assert_eq!(xz.phase, 0);
            assert_eq!((zx.x, zx.z), (xz.x, xz.z));
        }
    }

    #[test]
    fn disjoint_supports_commute() {
        let a = QuditPauliOperator::new(3, [("a", 1)], [("b", 2)], 0);
        let b = QuditPauliOperator::new(3, [("c", 1)], [("d", 1)], 1);
        assert_eq!(symplectic_phase(&a, &b).unwrap(), 0);
    }

    #[test]
    fn modulus_mismatch() {
        let a = QuditPauliOperator::x_on(2, "a", 1);
        let b = QuditPauliOperator::x_on(3, "a", 1);
        assert!(matches!(
            symplectic_phase(&a, &b),
            Err(Error::ModulusMismatch(2, 3))
        ));
    }

    #[test]
    fn json_shape() {
        let op = QuditPauliOperator::new(3, [("e0", 4)], [("e1", -1)], 5);
        let s = serde_json::to_string(&op).unwrap();
        assert_eq!(s, r#"{"d":3,"x":{"e0":1},"z":{"e1":2},"phase":2}"#);
        assert_eq!(serde_json::from_str::<QuditPauliOperator>(&s).unwrap(), op);
    }

    proptest! {
        #[test]
        fn antisymmetric_and_bilinear(
            (a, b, c) in (2u64..6).prop_flat_map(|d| (arb_op(d), arb_op(d), arb_op(d)))
        ) {
            let dd = a.d as i64;
            let ab = symplectic_phase(&a, &b).unwrap();
            let ba = symplectic_phase(&b, &a).unwrap();
            prop_assert_eq!((ab + ba).rem_euclid(dd), 0);
            let bc = b.compose(&c).unwrap();
            let lhs = symplectic_phase(&a, &bc).unwrap();
            let rhs = (ab + symplectic_phase(&a, &c).unwrap()).rem_euclid(dd);
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn group_laws(a in arb_op(4), b in arb_op(4)) {
            // a b = ζ^{e} b a with e = symplectic_phase(a, b)
            let ab = a.compose(&b).unwrap();
            let ba = b.compose(&a).unwrap();
            let e = symplectic_phase(&a, &b).unwrap();
            prop_assert_eq!((ab.phase - ba.phase).rem_euclid(4), e);
            prop_assert!(a.compose(&a.inverse()).unwrap().is_identity());
            prop_assert_eq!(a.pow(3), a.compose(&a).unwrap().compose(&a).unwrap());
        }
    }
}
