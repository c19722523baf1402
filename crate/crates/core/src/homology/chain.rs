use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::complex::CellComplex;
use crate::error::{Error, Result};

/// A k-chain (or k-cochain) with integer coefficients keyed by cell id.
/// Coefficients are read modulo `d` wherever a modulus is attached.
///
/// JSON: `{"degree": k, "coeffs": {"cell": c, ...}}`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainVector {
    pub degree: usize,
    pub coeffs: BTreeMap<String, i64>,
}

impl ChainVector {
    pub fn zero(degree: usize) -> Self {
        Self {
            degree,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn from_pairs<'a>(degree: usize, pairs: impl IntoIterator<Item = (&'a str, i64)>) -> Self {
        let mut v = Self::zero(degree);
        for (id, c) in pairs {
            *v.coeffs.entry(id.to_string()).or_insert(0) += c;
        }
        v.coeffs.retain(|_, c| *c != 0);
        v
    }

    /// Builds a chain from coefficients in the complex's cell order, dropping zeros.
    pub fn from_dense(c: &CellComplex, degree: usize, values: &[i64]) -> Self {
        assert_eq!(values.len(), c.cell_count(degree), "dense length mismatch");
        Self {
            degree,
            coeffs: values
                .iter()
                .enumerate()
                .filter(|(_, &x)| x != 0)
                .map(|(i, &x)| (c.id(degree, i).to_string(), x))
                .collect(),
        }
    }

    /// Dense coefficients in cell order; every id must name a cell of this degree.
    pub fn to_dense(&self, c: &CellComplex) -> Result<Vec<i64>> {
        let mut out = vec![0; c.cell_count(self.degree)];
        for (id, &x) in &self.coeffs {
            match c.locate(id) {
                None => return Err(Error::UnknownCell(id.clone())),
                Some((k, i)) if k == self.degree => out[i] += x,
                Some((k, _)) => {
                    return Err(Error::DegreeMismatch {
                        expected: self.degree,
                        got: k,
                    })
                }
            }
        }
        Ok(out)
    }

    /// Coefficients reduced into `[0, d)`, zeros dropped.
    pub fn reduced(&self, d: u64) -> Self {
        let d = d as i64;
        Self {
            degree: self.degree,
            coeffs: self
                .coeffs
                .iter()
                .map(|(k, &x)| (k.clone(), x.rem_euclid(d)))
                .filter(|&(_, x)| x != 0)
                .collect(),
        }
    }

    /// Number of cells with nonzero coefficient (modulo `d` if given).
    pub fn weight(&self, d: Option<u64>) -> usize {
        self.coeffs
            .values()
            .filter(|&&x| match d {
                Some(d) => x.rem_euclid(d as i64) != 0,
                None => x != 0,
            })
            .count()
    }

    pub fn is_zero(&self, d: Option<u64>) -> bool {
        self.weight(d) == 0
    }

    /// `self + m · other`, coefficients reduced modulo `d` when given.
    pub fn add_scaled(&self, other: &Self, m: i64, d: Option<u64>) -> Result<Self> {
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch {
                expected: self.degree,
                got: other.degree,
            });
        }
        let mut out = self.clone();
        for (k, &x) in &other.coeffs {
            *out.coeffs.entry(k.clone()).or_insert(0) += m * x;
        }
        if let Some(d) = d {
            out = out.reduced(d);
        }
        out.coeffs.retain(|_, x| *x != 0);
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::circle;

    #[test]
    fn dense_round_trip_and_errors() {
        let c = circle(3).unwrap();
        let v = ChainVector::from_pairs(1, [("e0", 1), ("e2", -1)]);
        let dense = v.to_dense(&c).unwrap();
        assert_eq!(dense, vec![1, 0, -1]);
        assert_eq!(ChainVector::from_dense(&c, 1, &dense), v);
        let bad = ChainVector::from_pairs(1, [("v0", 1)]);
        assert!(matches!(
            bad.to_dense(&c),
            Err(Error::DegreeMismatch { .. })
        ));
        let missing = ChainVector::from_pairs(1, [("zz", 1)]);
        assert!(matches!(missing.to_dense(&c), Err(Error::UnknownCell(_))));
    }

    #[test]
    fn modular_weight_and_json() {
        let v = ChainVector::from_pairs(1, [("a", 3), ("b", 1)]);
        assert_eq!(v.weight(Some(3)), 1);
        assert_eq!(v.weight(None), 2);
        assert_eq!(v.reduced(3), ChainVector::from_pairs(1, [("b", 1)]));
        let text = serde_json::to_string(&v).unwrap();
        assert_eq!(text, r#"{"degree":1,"coeffs":{"a":3,"b":1}}"#);
        assert_eq!(serde_json::from_str::<ChainVector>(&text).unwrap(), v);
    }
}
