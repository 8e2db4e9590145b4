//! Products of projective spaces and smooth quadrics.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FactorKind {
    Proj,
    Quadric,
}

/// One factor of a product: `P^n` or a smooth quadric `Q_m` in `P^{m+1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Factor {
    pub kind: FactorKind,
    pub dim: u32,
}

impl Factor {
    pub fn new(kind: FactorKind, dim: u32) -> Result<Self> {
        match kind {
            FactorKind::Proj if dim < 1 => Err(Error::InvalidFactor(format!("P{dim}: dimension must be at least 1"))),
            FactorKind::Quadric if dim < 2 => {
                Err(Error::InvalidFactor(format!("Q{dim}: quadrics need dimension at least 2")))
            }
            _ => Ok(Factor { kind, dim }),
        }
    }

    pub fn proj(n: u32) -> Result<Self> {
        Self::new(FactorKind::Proj, n)
    }

    pub fn quadric(m: u32) -> Result<Self> {
        Self::new(FactorKind::Quadric, m)
    }

    pub fn is_quadric(&self) -> bool {
        self.kind == FactorKind::Quadric
    }

    /// Twist of the canonical bundle: `-n-1` on `P^n`, `-m` on `Q_m`.
    pub fn canonical_twist(&self) -> i64 {
        match self.kind {
            FactorKind::Proj => -(self.dim as i64) - 1,
            FactorKind::Quadric => -(self.dim as i64),
        }
    }

    /// Rank of the Grothendieck group, i.e. the length of a full exceptional collection.
    pub fn k0_rank(&self) -> usize {
        match self.kind {
            FactorKind::Proj => self.dim as usize + 1,
            FactorKind::Quadric if self.dim % 2 == 0 => self.dim as usize + 2,
            FactorKind::Quadric => self.dim as usize + 1,
        }
    }
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            FactorKind::Proj => write!(f, "P{}", self.dim),
            FactorKind::Quadric => write!(f, "Q{}", self.dim),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Space {
    factors: Vec<Factor>,
}

impl Space {
    pub fn new(factors: Vec<Factor>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::EmptySpace);
        }
        Ok(Space { factors })
    }

    /// Builds a space from `(kind, dim)` pairs, validating every factor.
    pub fn make(spec: &[(FactorKind, u32)]) -> Result<Self> {
        let factors = spec.iter().map(|&(k, d)| Factor::new(k, d)).collect::<Result<Vec<_>>>()?;
        Self::new(factors)
    }

    pub fn single(factor: Factor) -> Self {
        Space { factors: vec![factor] }
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn factor(&self, i: usize) -> Factor {
        self.factors[i]
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    /// Total dimension `d`.
    pub fn dim(&self) -> usize {
        self.factors.iter().map(|f| f.dim as usize).sum()
    }

    pub fn max_factor_dim(&self) -> usize {
        self.factors.iter().map(|f| f.dim as usize).max().unwrap_or(0)
    }

    pub fn canonical_twists(&self) -> Vec<i64> {
        self.factors.iter().map(Factor::canonical_twist).collect()
    }

    pub fn product(&self, other: &Space) -> Space {
        let mut factors = self.factors.clone();
        factors.extend_from_slice(&other.factors);
        Space { factors }
    }

    pub fn has_quadric(&self) -> bool {
        self.factors.iter().any(Factor::is_quadric)
    }

    /// Replaces factor `i` by a hyperplane section. `P^1` shrinks to a point and is dropped.
    pub fn hyperplane(&self, i: usize) -> Result<Space> {
        let f = *self
            .factors
            .get(i)
            .ok_or_else(|| Error::InvalidFactor(format!("factor index {i} out of range")))?;
        let mut factors = self.factors.clone();
        match f.kind {
            FactorKind::Proj if f.dim == 1 => {
                factors.remove(i);
            }
            FactorKind::Proj => factors[i] = Factor::proj(f.dim - 1)?,
            FactorKind::Quadric if f.dim < 3 => {
                return Err(Error::Unsupported(format!("hyperplane section of {f} is not a supported factor")))
            }
            FactorKind::Quadric => factors[i] = Factor::quadric(f.dim - 1)?,
        }
        Space::new(factors)
    }
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.factors.iter().map(ToString::to_string).collect();
        write!(f, "{}", parts.join("x"))
    }
}

impl FromStr for Space {
    type Err = Error;

    /// Parses `P3xQ3xP1` (case-insensitive, `x` separated).
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::EmptySpace);
        }
        let mut factors = Vec::new();
        for part in s.split(['x', 'X']) {
            let part = part.trim();
            let mut chars = part.chars();
            let kind = match chars.next().map(|c| c.to_ascii_uppercase()) {
                Some('P') => FactorKind::Proj,
                Some('Q') => FactorKind::Quadric,
                _ => return Err(Error::InvalidFactor(format!("'{part}': expected P<n> or Q<m>"))),
            };
            let dim: u32 = chars
                .as_str()
                .parse()
                .map_err(|_| Error::InvalidFactor(format!("'{part}': missing or invalid dimension")))?;
            factors.push(Factor::new(kind, dim)?);
        }
        Space::new(factors)
    }
}
