//! Dimension tables `h^0, ..., h^d`.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Exact cohomology dimensions of a bundle, or a symbolic marker when a `ψ`
/// term made them unavailable (then `dims` is empty).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct CohomTable {
    dims: Vec<BigUint>,
    symbolic: bool,
}

/// Per-factor table; same shape, one factor's dimension.
pub type FactorCohom = CohomTable;

impl CohomTable {
    pub fn zero(d: usize) -> Self {
        CohomTable { dims: vec![BigUint::zero(); d + 1], symbolic: false }
    }

    pub fn symbolic() -> Self {
        CohomTable { dims: Vec::new(), symbolic: true }
    }

    pub fn from_dims(dims: Vec<BigUint>) -> Self {
        CohomTable { dims, symbolic: false }
    }

    pub fn from_u64s(dims: &[u64]) -> Self {
        Self::from_dims(dims.iter().map(|&x| BigUint::from(x)).collect())
    }

    /// `dim` in degree `i`, zero elsewhere.
    pub fn concentrated(d: usize, i: usize, dim: BigUint) -> Self {
        let mut t = Self::zero(d);
        t.dims[i] = dim;
        t
    }

    pub fn is_symbolic(&self) -> bool {
        self.symbolic
    }

    pub fn dims(&self) -> &[BigUint] {
        &self.dims
    }

    /// Top degree `d`; panics on symbolic tables.
    pub fn top(&self) -> usize {
        assert!(!self.symbolic, "symbolic table has no degrees");
        self.dims.len() - 1
    }

    /// `h^i`, zero outside `0..=d`.
    pub fn h(&self, i: i64) -> BigUint {
        usize::try_from(i).ok().and_then(|i| self.dims.get(i)).cloned().unwrap_or_default()
    }

    pub fn set(&mut self, i: usize, v: BigUint) {
        self.dims[i] = v;
    }

    pub fn is_zero(&self) -> bool {
        !self.symbolic && self.dims.iter().all(Zero::is_zero)
    }

    pub fn nonzero_degrees(&self) -> Vec<usize> {
        self.dims.iter().enumerate().filter(|(_, v)| !v.is_zero()).map(|(i, _)| i).collect()
    }

    pub fn euler_char(&self) -> BigInt {
        self.dims
            .iter()
            .enumerate()
            .map(|(i, v)| {
                let v = BigInt::from(v.clone());
                if i % 2 == 0 {
                    v
                } else {
                    -v
                }
            })
            .sum()
    }

    /// Entrywise sum; a symbolic operand makes the result symbolic.
    pub fn add(&self, other: &CohomTable) -> CohomTable {
        if self.symbolic || other.symbolic {
            return CohomTable::symbolic();
        }
        assert_eq!(self.dims.len(), other.dims.len(), "adding tables of different length");
        CohomTable::from_dims(self.dims.iter().zip(&other.dims).map(|(a, b)| a + b).collect())
    }

    pub fn scale(&self, k: u64) -> CohomTable {
        if self.symbolic {
            return CohomTable::symbolic();
        }
        CohomTable::from_dims(self.dims.iter().map(|a| a * k).collect())
    }

    /// Künneth convolution: `h^k = Σ_{i+j=k} h^i(a) h^j(b)`.
    pub fn kunneth(&self, other: &CohomTable) -> CohomTable {
        if self.symbolic || other.symbolic {
            return CohomTable::symbolic();
        }
        let mut out = CohomTable::zero(self.top() + other.top());
        for (i, a) in self.dims.iter().enumerate().filter(|(_, a)| !a.is_zero()) {
            for (j, b) in other.dims.iter().enumerate() {
                out.dims[i + j] += a * b;
            }
        }
        out
    }

    /// `h^i -> h^{d-i}`.
    pub fn reversed(&self) -> CohomTable {
        let mut dims = self.dims.clone();
        dims.reverse();
        CohomTable { dims, symbolic: self.symbolic }
    }
}

impl fmt::Display for CohomTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.symbolic {
            return write!(f, "symbolic");
        }
        let parts: Vec<String> = self.dims.iter().enumerate().map(|(i, v)| format!("h^{i}={v}")).collect();
        write!(f, "{}", parts.join(" "))
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum Num {
    Small(u64),
    Big(String),
}

fn to_num(v: &BigUint) -> Num {
    match v.to_u64() {
        Some(x) => Num::Small(x),
        None => Num::Big(v.to_string()),
    }
}

#[derive(Serialize, Deserialize)]
struct Wire {
    dims: Vec<Num>,
    symbolic: bool,
}

impl Serialize for CohomTable {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        Wire { dims: self.dims.iter().map(to_num).collect(), symbolic: self.symbolic }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for CohomTable {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let w = Wire::deserialize(d)?;
        let dims = w
            .dims
            .into_iter()
            .map(|n| match n {
                Num::Small(x) => Ok(BigUint::from(x)),
                Num::Big(s) => s.parse::<BigUint>().map_err(D::Error::custom),
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(CohomTable { dims, symbolic: w.symbolic })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kunneth_and_chi() {
        let a = CohomTable::from_u64s(&[0, 1]);
        let b = CohomTable::from_u64s(&[4, 0, 0, 0]);
        let ab = a.kunneth(&b);
        assert_eq!(ab, CohomTable::from_u64s(&[0, 4, 0, 0, 0]));
        assert_eq!(ab.euler_char(), a.euler_char() * b.euler_char());
    }

    #[test]
    fn json_shape() {
        let t = CohomTable::from_u64s(&[1, 0, 3]);
        assert_eq!(serde_json::to_string(&t).unwrap(), r#"{"dims":[1,0,3],"symbolic":false}"#);
        assert_eq!(serde_json::to_string(&CohomTable::symbolic()).unwrap(), r#"{"dims":[],"symbolic":true}"#);
        let big = CohomTable::from_dims(vec![BigUint::from(u64::MAX) * 3u32]);
        let s = serde_json::to_string(&big).unwrap();
        assert_eq!(serde_json::from_str::<CohomTable>(&s).unwrap(), big);
        assert_eq!(serde_json::from_str::<CohomTable>(r#"{"dims":[1,0,3],"symbolic":false}"#).unwrap(), t);
    }

    #[test]
    fn symbolic_propagates() {
        let t = CohomTable::from_u64s(&[1]);
        assert!(t.add(&CohomTable::symbolic()).is_symbolic());
        assert!(CohomTable::symbolic().kunneth(&t).is_symbolic());
        assert!(!CohomTable::symbolic().is_zero());
    }
}
