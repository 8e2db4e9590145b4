//! Decomposable bundles: finite direct sums of box products of factor bundles.
//!
//! Spinor symbols always mean the twisted-by-one spinor bundles `Σ_* = S_*(1)`,
//! where `S_*` are the classical spinor bundles. With this convention `Σ_*(e)`
//! has sections exactly when `e >= 0`, and the defining sequences read
//! `0 -> Σ_a(t-1) -> O(t)^N -> Σ_b(t) -> 0` with `N = 2^⌈m/2⌉`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::arith::{binomial, pow2};
use crate::error::{Error, Result};
use crate::space::{Factor, FactorKind, Space};

/// User supplied ranks of the symbolic `ψ` bundles, keyed by their index `j`.
pub type PsiRanks = BTreeMap<u32, u64>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SpinorKind {
    /// The spinor bundle of an odd-dimensional quadric.
    S,
    S1,
    S2,
}

impl SpinorKind {
    pub fn valid_on(self, m: u32) -> bool {
        match self {
            SpinorKind::S => m % 2 == 1,
            SpinorKind::S1 | SpinorKind::S2 => m % 2 == 0,
        }
    }

    /// All spinor kinds living on `Q_m`.
    pub fn all_on(m: u32) -> Vec<SpinorKind> {
        if m % 2 == 1 {
            vec![SpinorKind::S]
        } else {
            vec![SpinorKind::S1, SpinorKind::S2]
        }
    }

    pub fn other(self) -> SpinorKind {
        match self {
            SpinorKind::S => SpinorKind::S,
            SpinorKind::S1 => SpinorKind::S2,
            SpinorKind::S2 => SpinorKind::S1,
        }
    }

    /// The kind `x'` with `Σ_x^∨ ≅ Σ_{x'}(-1)`.
    pub fn dual_partner(self, m: u32) -> SpinorKind {
        if m % 4 == 2 {
            self.other()
        } else {
            self
        }
    }

    /// The kind `a` in the sequence `0 -> Σ_a(t-1) -> O(t)^N -> Σ_self(t) -> 0`.
    pub fn sequence_partner(self, m: u32) -> SpinorKind {
        if m % 2 == 0 {
            self.other()
        } else {
            self
        }
    }

    /// `Σ_x|Q_{m-1}` as a list of kinds on the hyperplane section.
    pub fn restrict(self, m: u32) -> Vec<SpinorKind> {
        if m % 2 == 0 {
            vec![SpinorKind::S]
        } else {
            vec![SpinorKind::S1, SpinorKind::S2]
        }
    }

    pub fn tag(self) -> &'static str {
        match self {
            SpinorKind::S => "S",
            SpinorKind::S1 => "S1",
            SpinorKind::S2 => "S2",
        }
    }
}

/// Rank of a spinor bundle on `Q_m`: `2^⌊(m-1)/2⌋`.
pub fn spinor_rank(m: u32) -> u64 {
    pow2((m - 1) / 2)
}

/// Number of copies of `O` in the spinor sequences on `Q_m`: `2^⌈m/2⌉`.
pub fn spinor_sequence_width(m: u32) -> u64 {
    pow2(m.div_ceil(2))
}

/// A bundle on a single factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FactorBundle {
    /// `O(t)`.
    Line(i64),
    /// `Σ_kind(t)` on a quadric.
    Spinor(SpinorKind, i64),
    /// `Λ^p T(t)` on `P^n`.
    Wedge(u32, i64),
    /// The symbolic bundle `ψ^∨_j(t)` on a quadric; no cohomology is known for it.
    Psi(u32, i64),
}

impl FactorBundle {
    pub fn twist(&self) -> i64 {
        match *self {
            FactorBundle::Line(t)
            | FactorBundle::Spinor(_, t)
            | FactorBundle::Wedge(_, t)
            | FactorBundle::Psi(_, t) => t,
        }
    }

    pub fn twisted(self, s: i64) -> FactorBundle {
        match self {
            FactorBundle::Line(t) => FactorBundle::Line(t + s),
            FactorBundle::Spinor(k, t) => FactorBundle::Spinor(k, t + s),
            FactorBundle::Wedge(p, t) => FactorBundle::Wedge(p, t + s),
            FactorBundle::Psi(j, t) => FactorBundle::Psi(j, t + s),
        }
    }

    pub fn is_line(&self) -> bool {
        matches!(self, FactorBundle::Line(_))
    }

    pub fn is_symbolic(&self) -> bool {
        matches!(self, FactorBundle::Psi(..))
    }

    /// Rewrites `Λ^0 T(t)` and `Λ^n T(t)` on `P^n` as line bundles.
    pub fn normalized(self, factor: Factor) -> FactorBundle {
        match self {
            FactorBundle::Wedge(0, t) => FactorBundle::Line(t),
            FactorBundle::Wedge(p, t) if p == factor.dim => FactorBundle::Line(t + factor.dim as i64 + 1),
            other => other,
        }
    }

    pub fn validate(&self, factor: Factor) -> Result<()> {
        match (*self, factor.kind) {
            (FactorBundle::Line(_), _) => Ok(()),
            (FactorBundle::Spinor(k, _), FactorKind::Quadric) if k.valid_on(factor.dim) => Ok(()),
            (FactorBundle::Spinor(k, _), FactorKind::Quadric) => Err(Error::InvalidBundle(format!(
                "spinor kind {} does not exist on {factor}",
                k.tag()
            ))),
            (FactorBundle::Wedge(p, _), FactorKind::Proj) if p <= factor.dim => Ok(()),
            (FactorBundle::Wedge(p, _), FactorKind::Proj) => {
                Err(Error::InvalidBundle(format!("T^{p} exceeds the dimension of {factor}")))
            }
            (FactorBundle::Psi(j, _), FactorKind::Quadric) if j >= 1 => Ok(()),
            (FactorBundle::Psi(..), FactorKind::Quadric) => {
                Err(Error::InvalidBundle("psi bundles are indexed from 1".into()))
            }
            (b, _) => Err(Error::InvalidBundle(format!("{b:?} is not defined on {factor}"))),
        }
    }

    pub fn rank(&self, factor: Factor, psi: &PsiRanks) -> Result<u64> {
        match *self {
            FactorBundle::Line(_) => Ok(1),
            FactorBundle::Spinor(..) => Ok(spinor_rank(factor.dim)),
            FactorBundle::Wedge(p, _) => {
                let c = binomial(factor.dim as i64, p as i64);
                Ok(u64::try_from(c).expect("wedge rank fits in u64"))
            }
            FactorBundle::Psi(j, _) => {
                psi.get(&j).copied().ok_or_else(|| Error::UnknownRank(format!("psi_{j} on {factor}")))
            }
        }
    }

    /// Dual bundle on `factor`.
    pub fn dual(&self, factor: Factor) -> Result<FactorBundle> {
        let b = match *self {
            FactorBundle::Line(t) => FactorBundle::Line(-t),
            // Σ_x^∨ ≅ Σ_{x'}(-1)
            FactorBundle::Spinor(k, t) => FactorBundle::Spinor(k.dual_partner(factor.dim), -t - 1),
            // (Λ^p T(t))^∨ = Ω^p(-t) ≅ Λ^{n-p} T(-t-n-1)
            FactorBundle::Wedge(p, t) => FactorBundle::Wedge(factor.dim - p, -t - factor.dim as i64 - 1),
            FactorBundle::Psi(j, _) => return Err(Error::Symbolic(format!("dual of psi_{j}"))),
        };
        Ok(b.normalized(factor))
    }
}

/// `mult` copies of a box product, one factor bundle per factor.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Term {
    pub mult: u64,
    pub slots: Vec<FactorBundle>,
}

impl Term {
    pub fn new(mult: u64, slots: Vec<FactorBundle>) -> Self {
        Term { mult, slots }
    }

    pub fn single(slots: Vec<FactorBundle>) -> Self {
        Term { mult: 1, slots }
    }

    pub fn is_line(&self) -> bool {
        self.slots.iter().all(FactorBundle::is_line)
    }

    pub fn is_symbolic(&self) -> bool {
        self.slots.iter().any(FactorBundle::is_symbolic)
    }

    /// The common twist when this is a balanced line bundle `O(t,...,t)`.
    pub fn balanced_line_twist(&self) -> Option<i64> {
        let t = match self.slots.first()? {
            FactorBundle::Line(t) => *t,
            _ => return None,
        };
        self.slots.iter().all(|b| *b == FactorBundle::Line(t)).then_some(t)
    }
}

/// A finite direct sum of box-product terms in canonical form.
///
/// Terms are sorted lexicographically by their factor bundles (factor index,
/// kind tag, twist) and equal terms are merged into one multiplicity.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BundleExpr {
    terms: Vec<Term>,
}

impl BundleExpr {
    pub fn new(terms: Vec<Term>, space: &Space) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::InvalidBundle("a bundle needs at least one term".into()));
        }
        for term in &terms {
            if term.slots.len() != space.len() {
                return Err(Error::Arity { expected: space.len(), found: term.slots.len() });
            }
            if term.mult == 0 {
                return Err(Error::InvalidBundle("multiplicities must be positive".into()));
            }
            for (b, f) in term.slots.iter().zip(space.factors()) {
                b.validate(*f)?;
            }
        }
        let terms = terms
            .into_iter()
            .map(|t| Term {
                mult: t.mult,
                slots: t.slots.iter().zip(space.factors()).map(|(b, f)| b.normalized(*f)).collect(),
            })
            .collect();
        Ok(Self::canonical(terms))
    }

    /// `O(t_1, ..., t_r)`.
    pub fn line(twists: &[i64], space: &Space) -> Result<Self> {
        let slots = twists.iter().map(|&t| FactorBundle::Line(t)).collect();
        Self::new(vec![Term::single(slots)], space)
    }

    pub fn structure_sheaf(space: &Space) -> Self {
        Self::line(&vec![0; space.len()], space).expect("structure sheaf is valid")
    }

    pub fn single(slots: Vec<FactorBundle>, space: &Space) -> Result<Self> {
        Self::new(vec![Term::single(slots)], space)
    }

    fn canonical(mut terms: Vec<Term>) -> Self {
        terms.sort_by(|a, b| a.slots.cmp(&b.slots));
        let mut merged: Vec<Term> = Vec::with_capacity(terms.len());
        for t in terms {
            match merged.last_mut() {
                Some(last) if last.slots == t.slots => last.mult += t.mult,
                _ => merged.push(t),
            }
        }
        BundleExpr { terms: merged }
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn num_factors(&self) -> usize {
        self.terms[0].slots.len()
    }

    pub fn is_symbolic(&self) -> bool {
        self.terms.iter().any(Term::is_symbolic)
    }

    pub fn require_concrete(&self) -> Result<()> {
        if self.is_symbolic() {
            Err(Error::Symbolic("operation needs a psi-free bundle".into()))
        } else {
            Ok(())
        }
    }

    /// Total number of summands counted with multiplicity.
    pub fn summand_count(&self) -> u64 {
        self.terms.iter().map(|t| t.mult).sum()
    }

    pub fn rank(&self, space: &Space, psi: &PsiRanks) -> Result<u64> {
        let mut total = 0u64;
        for term in &self.terms {
            let mut r = term.mult;
            for (b, f) in term.slots.iter().zip(space.factors()) {
                r *= b.rank(*f, psi)?;
            }
            total += r;
        }
        Ok(total)
    }

    pub fn direct_sum(&self, other: &BundleExpr) -> BundleExpr {
        assert_eq!(self.num_factors(), other.num_factors(), "direct sum across different spaces");
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Self::canonical(terms)
    }

    pub fn sum_of(parts: &[BundleExpr]) -> Option<BundleExpr> {
        let mut iter = parts.iter();
        let first = iter.next()?.clone();
        Some(iter.fold(first, |acc, p| acc.direct_sum(p)))
    }

    /// Twists factor `i` of every term by `twists[i]`.
    pub fn twist_by(&self, twists: &[i64]) -> BundleExpr {
        let terms = self
            .terms
            .iter()
            .map(|t| Term {
                mult: t.mult,
                slots: t.slots.iter().zip(twists).map(|(b, &s)| b.twisted(s)).collect(),
            })
            .collect();
        Self::canonical(terms)
    }

    /// The balanced twist `E(t, ..., t)`.
    pub fn twist_balanced(&self, t: i64) -> BundleExpr {
        self.twist_by(&vec![t; self.num_factors()])
    }

    pub fn dual(&self, space: &Space) -> Result<BundleExpr> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            let slots = t
                .slots
                .iter()
                .zip(space.factors())
                .map(|(b, f)| b.dual(*f))
                .collect::<Result<Vec<_>>>()?;
            terms.push(Term { mult: t.mult, slots });
        }
        Ok(Self::canonical(terms))
    }

    /// Exterior tensor product; the result lives on the product of the two spaces.
    pub fn box_product(&self, other: &BundleExpr) -> BundleExpr {
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for a in &self.terms {
            for b in &other.terms {
                let mut slots = a.slots.clone();
                slots.extend_from_slice(&b.slots);
                terms.push(Term { mult: a.mult * b.mult, slots });
            }
        }
        Self::canonical(terms)
    }

    /// Multiplicity of a given summand.
    pub fn multiplicity_of(&self, slots: &[FactorBundle]) -> u64 {
        self.terms.iter().find(|t| t.slots == slots).map_or(0, |t| t.mult)
    }

    /// Removes one copy of the summand `slots`; `None` when it is absent.
    pub fn remove_one(&self, slots: &[FactorBundle]) -> Option<Option<BundleExpr>> {
        let idx = self.terms.iter().position(|t| t.slots == slots)?;
        let mut terms = self.terms.clone();
        if terms[idx].mult > 1 {
            terms[idx].mult -= 1;
        } else {
            terms.remove(idx);
        }
        Some(if terms.is_empty() { None } else { Some(BundleExpr { terms }) })
    }

    /// Restriction to a hyperplane section of factor `i`.
    pub fn restrict_hyperplane(&self, space: &Space, i: usize) -> Result<(BundleExpr, Space)> {
        let target = space.hyperplane(i)?;
        let factor = space.factor(i);
        let drops = target.len() < space.len();
        let mut terms = Vec::new();
        for term in &self.terms {
            let restricted: Vec<FactorBundle> = match term.slots[i] {
                FactorBundle::Line(t) => vec![FactorBundle::Line(t)],
                FactorBundle::Spinor(k, t) => {
                    k.restrict(factor.dim).into_iter().map(|k| FactorBundle::Spinor(k, t)).collect()
                }
                b @ (FactorBundle::Wedge(..) | FactorBundle::Psi(..)) => {
                    return Err(Error::Unsupported(format!("restriction of {b:?}")))
                }
            };
            for r in restricted {
                let mut slots = term.slots.clone();
                if drops {
                    slots.remove(i);
                } else {
                    slots[i] = r;
                }
                terms.push(Term { mult: term.mult, slots });
            }
        }
        Ok((BundleExpr::new(terms, &target)?, target))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use FactorBundle::*;

    fn sp(s: &str) -> Space {
        s.parse().unwrap()
    }

    #[test]
    fn spinor_ranks() {
        assert_eq!(spinor_rank(2), 1);
        assert_eq!(spinor_rank(3), 2);
        assert_eq!(spinor_rank(4), 2);
        assert_eq!(spinor_rank(5), 4);
        assert_eq!(spinor_sequence_width(3), 4);
        assert_eq!(spinor_sequence_width(4), 4);
        assert_eq!(spinor_sequence_width(2), 2);
    }

    #[test]
    fn dual_examples() {
        let p3 = sp("P3");
        let e = BundleExpr::line(&[2], &p3).unwrap();
        assert_eq!(e.dual(&p3).unwrap(), BundleExpr::line(&[-2], &p3).unwrap());
        let q3 = sp("Q3");
        let s = BundleExpr::single(vec![Spinor(SpinorKind::S, 0)], &q3).unwrap();
        assert_eq!(s.dual(&q3).unwrap(), BundleExpr::single(vec![Spinor(SpinorKind::S, -1)], &q3).unwrap());
        let q6 = sp("Q6");
        let s1 = BundleExpr::single(vec![Spinor(SpinorKind::S1, 2)], &q6).unwrap();
        assert_eq!(s1.dual(&q6).unwrap().terms()[0].slots[0], Spinor(SpinorKind::S2, -3));
        let q4 = sp("Q4");
        let s1 = BundleExpr::single(vec![Spinor(SpinorKind::S1, 2)], &q4).unwrap();
        assert_eq!(s1.dual(&q4).unwrap().terms()[0].slots[0], Spinor(SpinorKind::S1, -3));
        let t = BundleExpr::single(vec![Wedge(1, 1)], &p3).unwrap();
        assert_eq!(t.dual(&p3).unwrap().terms()[0].slots[0], Wedge(2, -5));
    }

    #[test]
    fn psi_dual_is_symbolic() {
        let q3 = sp("Q3");
        let e = BundleExpr::single(vec![Psi(1, 0)], &q3).unwrap();
        assert!(matches!(e.dual(&q3), Err(Error::Symbolic(_))));
    }

    #[test]
    fn wedge_extremes_are_line_bundles() {
        let p3 = sp("P3");
        let e = BundleExpr::single(vec![Wedge(0, 2)], &p3).unwrap();
        assert_eq!(e, BundleExpr::line(&[2], &p3).unwrap());
        let e = BundleExpr::single(vec![Wedge(3, -3)], &p3).unwrap();
        assert_eq!(e, BundleExpr::line(&[1], &p3).unwrap());
    }

    #[test]
    fn balanced_twist() {
        let x = sp("P1xQ3");
        let o = BundleExpr::line(&[0, 0], &x).unwrap();
        assert_eq!(o.twist_balanced(3), BundleExpr::line(&[3, 3], &x).unwrap());
        let e = BundleExpr::single(vec![Spinor(SpinorKind::S, 0), Line(1)], &sp("Q3xP1")).unwrap();
        let twisted = e.twist_balanced(-1);
        assert_eq!(twisted.terms()[0].slots, vec![Spinor(SpinorKind::S, -1), Line(0)]);
        assert_eq!(e.twist_balanced(0), e);
    }

    #[test]
    fn box_product_multiplies_ranks() {
        let p1 = sp("P1");
        let q3 = sp("Q3");
        let a = BundleExpr::line(&[0], &p1).unwrap().direct_sum(&BundleExpr::line(&[1], &p1).unwrap());
        let b = BundleExpr::single(vec![Spinor(SpinorKind::S, 0)], &q3).unwrap();
        let ab = a.box_product(&b);
        let x = p1.product(&q3);
        assert_eq!(ab.terms().len(), 2);
        let none = PsiRanks::new();
        assert_eq!(ab.rank(&x, &none).unwrap(), 4);
        assert_eq!(
            ab.rank(&x, &none).unwrap(),
            a.rank(&p1, &none).unwrap() * b.rank(&q3, &none).unwrap()
        );
        let o1 = BundleExpr::line(&[1], &p1).unwrap();
        let o2 = BundleExpr::line(&[2], &p1).unwrap();
        assert_eq!(o1.box_product(&o2), BundleExpr::line(&[1, 2], &sp("P1xP1")).unwrap());
    }

    #[test]
    fn restriction_rules() {
        let q4 = sp("Q4");
        let s1 = BundleExpr::single(vec![Spinor(SpinorKind::S1, 0)], &q4).unwrap();
        let (r, y) = s1.restrict_hyperplane(&q4, 0).unwrap();
        assert_eq!(y.to_string(), "Q3");
        assert_eq!(r, BundleExpr::single(vec![Spinor(SpinorKind::S, 0)], &y).unwrap());

        let q3 = sp("Q3");
        let s = BundleExpr::single(vec![Spinor(SpinorKind::S, 0)], &q3).unwrap();
        let (r, y) = s.restrict_hyperplane(&q3, 0).unwrap();
        assert_eq!(y.to_string(), "Q2");
        assert_eq!(r.terms().len(), 2);
        let none = PsiRanks::new();
        assert_eq!(r.rank(&y, &none).unwrap(), s.rank(&q3, &none).unwrap());

        let x = sp("P2xQ3");
        let o = BundleExpr::line(&[4, -1], &x).unwrap();
        let (r, y) = o.restrict_hyperplane(&x, 0).unwrap();
        assert_eq!(y.to_string(), "P1xQ3");
        assert_eq!(r, BundleExpr::line(&[4, -1], &y).unwrap());

        let t = BundleExpr::single(vec![Wedge(1, 0), Line(0)], &x).unwrap();
        assert!(t.restrict_hyperplane(&x, 0).is_err());
    }

    #[test]
    fn validation_errors() {
        let q3 = sp("Q3");
        assert!(BundleExpr::single(vec![Spinor(SpinorKind::S1, 0)], &q3).is_err());
        assert!(BundleExpr::single(vec![Wedge(1, 0)], &q3).is_err());
        assert!(matches!(
            BundleExpr::single(vec![Line(0), Line(0)], &q3),
            Err(Error::Arity { expected: 1, found: 2 })
        ));
    }

    #[test]
    fn multiplicities_merge() {
        let x = sp("P1xP1");
        let a = BundleExpr::new(
            vec![Term::new(2, vec![Line(0), Line(0)]), Term::single(vec![Line(0), Line(0)])],
            &x,
        )
        .unwrap();
        assert_eq!(a.terms().len(), 1);
        assert_eq!(a.terms()[0].mult, 3);
        let removed = a.remove_one(&[Line(0), Line(0)]).unwrap().unwrap();
        assert_eq!(removed.terms()[0].mult, 2);
    }
}
