//! Regularity on products of projective spaces and quadrics, checked as exact
//! vanishing against the standard factor collections.
//!
//! `F` is `(p_1, ..., p_r)`-regular when `H^i(F(p) ⊗ B_1 ⊠ ... ⊠ B_r) = 0` for
//! all `i > 0` and all index vectors with `Σ k_a = i`, `0 <= k_a <= dim_a`,
//! where `B_a` is block `dim_a - k_a` of the standard collection of factor `a`:
//! `O(-k)` on `P^n`; on `Q_m`, `O(-k)` for `k <= m-2`, `Σ_*(-m+1)` for
//! `k = m-1` and `O(-m+1)` for `k = m`.

use serde::Serialize;

use crate::bundle::{BundleExpr, FactorBundle, SpinorKind, Term};
use crate::cohomology::{cohomology, tensor_cohomology};
use crate::collections::{compositions, factor_collection, Preset};
use crate::error::{Error, Result};
use crate::space::{FactorKind, Space};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct RegWitness {
    pub i: usize,
    pub index_vector: Vec<i64>,
    pub dim: String,
    pub block: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum RegVerdict {
    Regular,
    NotRegular,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RegularityReport {
    pub verdict: RegVerdict,
    pub witnesses: Vec<RegWitness>,
}

impl RegularityReport {
    fn from_witnesses(witnesses: Vec<RegWitness>) -> Self {
        let verdict = if witnesses.is_empty() { RegVerdict::Regular } else { RegVerdict::NotRegular };
        RegularityReport { verdict, witnesses }
    }

    pub fn is_regular(&self) -> bool {
        self.verdict == RegVerdict::Regular
    }
}

fn check_concrete(e: &BundleExpr, space: &Space) -> Result<()> {
    e.require_concrete()?;
    if e.num_factors() != space.len() {
        return Err(Error::Arity { expected: space.len(), found: e.num_factors() });
    }
    Ok(())
}

fn check_index(space: &Space, p: &[i64]) -> Result<()> {
    if p.len() == space.len() {
        Ok(())
    } else {
        Err(Error::Arity { expected: space.len(), found: p.len() })
    }
}

/// `B_1 ⊠ ... ⊠ B_r` for index vector `k`.
pub fn block_product(space: &Space, k: &[usize]) -> Result<BundleExpr> {
    let mut acc: Vec<Vec<FactorBundle>> = vec![Vec::new()];
    for (f, &ka) in space.factors().iter().zip(k) {
        let c = factor_collection(*f, Preset::Std)?;
        let block = &c.blocks[f.dim as usize - ka];
        acc = acc
            .into_iter()
            .flat_map(|prefix| {
                block.iter().map(move |b| {
                    let mut s = prefix.clone();
                    s.push(*b);
                    s
                })
            })
            .collect();
    }
    BundleExpr::new(acc.into_iter().map(Term::single).collect(), space)
}

fn regularity_sweep(e: &BundleExpr, space: &Space, p: &[i64], first_only: bool) -> Result<Vec<RegWitness>> {
    check_concrete(e, space)?;
    check_index(space, p)?;
    let f = e.twist_by(p);
    let bounds: Vec<usize> = space.factors().iter().map(|f| f.dim as usize).collect();
    let mut witnesses = Vec::new();
    for i in 1..=space.dim() {
        for k in compositions(&bounds, i) {
            let block = block_product(space, &k)?;
            let h = tensor_cohomology(&f, &block, space)?.h(i as i64);
            if h != 0u32.into() {
                witnesses.push(RegWitness {
                    i,
                    index_vector: k.iter().map(|&x| x as i64).collect(),
                    dim: h.to_string(),
                    block: block.to_string(),
                });
                if first_only {
                    return Ok(witnesses);
                }
            }
        }
    }
    Ok(witnesses)
}

/// Product regularity at the index vector `p`; lists every failing group.
pub fn is_regular(e: &BundleExpr, space: &Space, p: &[i64]) -> Result<RegularityReport> {
    Ok(RegularityReport::from_witnesses(regularity_sweep(e, space, p, false)?))
}

fn regular_fast(e: &BundleExpr, space: &Space, p: &[i64]) -> Result<bool> {
    Ok(regularity_sweep(e, space, p, true)?.is_empty())
}

fn single_factor(space: &Space, kind: FactorKind) -> Result<u32> {
    match space.factors() {
        [f] if f.kind == kind => Ok(f.dim),
        _ => Err(Error::Precondition(format!("{space} is not a single {kind:?} factor"))),
    }
}

/// `p`-Qregularity on `Q_m`: `H^i(F(p-i)) = 0` for `0 < i < m`,
/// `H^{m-1}(F(p) ⊗ Σ_*(-m+1)) = 0` and `H^m(F(p-m+1)) = 0`.
pub fn is_qregular(e: &BundleExpr, space: &Space, p: i64) -> Result<RegularityReport> {
    let m = single_factor(space, FactorKind::Quadric)?;
    check_concrete(e, space)?;
    let mi = m as i64;
    let mut witnesses = Vec::new();
    let mut probe = |i: usize, twist: i64, other: Option<BundleExpr>| -> Result<()> {
        let f = e.twist_balanced(twist);
        let (h, block) = match &other {
            None => (cohomology(&f, space)?.h(i as i64), format!("O({})", twist - p)),
            Some(b) => (tensor_cohomology(&f, b, space)?.h(i as i64), b.to_string()),
        };
        if h != 0u32.into() {
            witnesses.push(RegWitness { i, index_vector: vec![twist - p], dim: h.to_string(), block });
        }
        Ok(())
    };
    for i in 1..m as usize {
        probe(i, p - i as i64, None)?;
    }
    let spin = BundleExpr::new(
        SpinorKind::all_on(m).into_iter().map(|k| Term::single(vec![FactorBundle::Spinor(k, -mi + 1)])).collect(),
        space,
    )?;
    probe(m as usize - 1, p, Some(spin))?;
    probe(m as usize, p - mi + 1, None)?;
    Ok(RegularityReport::from_witnesses(witnesses))
}

/// Castelnuovo-Mumford `p`-regularity on `P^n`: `H^i(F(p-i)) = 0` for `i > 0`.
pub fn is_cm_regular(e: &BundleExpr, space: &Space, p: i64) -> Result<RegularityReport> {
    let n = single_factor(space, FactorKind::Proj)?;
    check_concrete(e, space)?;
    let mut witnesses = Vec::new();
    for i in 1..=n as usize {
        let h = cohomology(&e.twist_balanced(p - i as i64), space)?.h(i as i64);
        if h != 0u32.into() {
            witnesses.push(RegWitness {
                i,
                index_vector: vec![-(i as i64)],
                dim: h.to_string(),
                block: format!("O({})", -(i as i64)),
            });
        }
    }
    Ok(RegularityReport::from_witnesses(witnesses))
}

/// Multiprojective regularity on `P^{n_1} × ... × P^{n_s}`:
/// `H^i(F(p) ⊗ O(k)) = 0` whenever `Σ k_j = -i` and `-n_j <= k_j <= 0`.
pub fn is_multiproj_regular(e: &BundleExpr, space: &Space, p: &[i64]) -> Result<RegularityReport> {
    if space.has_quadric() {
        return Err(Error::Precondition(format!("{space} has a quadric factor")));
    }
    check_concrete(e, space)?;
    check_index(space, p)?;
    let bounds: Vec<usize> = space.factors().iter().map(|f| f.dim as usize).collect();
    let mut witnesses = Vec::new();
    for i in 1..=space.dim() {
        for k in compositions(&bounds, i) {
            let shift: Vec<i64> = k.iter().zip(p).map(|(&k, &p)| p - k as i64).collect();
            let h = cohomology(&e.twist_by(&shift), space)?.h(i as i64);
            if h != 0u32.into() {
                let kv: Vec<i64> = k.iter().map(|&x| -(x as i64)).collect();
                let block = format!("O({})", kv.iter().map(i64::to_string).collect::<Vec<_>>().join(","));
                witnesses.push(RegWitness { i, index_vector: kv, dim: h.to_string(), block });
            }
        }
    }
    Ok(RegularityReport::from_witnesses(witnesses))
}

/// A twist `T` with `E(t, ..., t)` regular for every `t >= T`: once every slot
/// twist reaches `dim + 2` past the most negative block twist, each factor
/// only has sections.
fn safe_upper_bound(e: &BundleExpr, space: &Space) -> i64 {
    e.terms()
        .iter()
        .flat_map(|t| t.slots.iter().zip(space.factors()).map(|(b, f)| f.dim as i64 + 2 - b.twist()))
        .max()
        .expect("nonempty bundle")
}

/// Least `t` with `E(t, ..., t)` regular.
///
/// Regularity of a sum is regularity of each summand, and by monotonicity the
/// regular twists of a summand form a ray; so each distinct summand is
/// scanned down from a safe bound and the answer is the maximum.
pub fn min_balanced_reg(e: &BundleExpr, space: &Space) -> Result<i64> {
    check_concrete(e, space)?;
    let floor = -safe_upper_bound(e, space) - 4 * (space.dim() as i64 + space.max_factor_dim() as i64) - 8;
    let mut best = i64::MIN;
    for term in e.terms() {
        let single = BundleExpr::new(vec![Term::single(term.slots.clone())], space)?;
        let mut t = safe_upper_bound(&single, space);
        if !regular_fast(&single, space, &vec![t; space.len()])? {
            return Err(Error::Inconsistent(format!("{single} is not regular at its safe bound {t}")));
        }
        while regular_fast(&single, space, &vec![t - 1; space.len()])? {
            t -= 1;
            if t < floor {
                return Err(Error::Inconsistent(format!("{single} stays regular below {floor}")));
            }
        }
        best = best.max(t);
    }
    Ok(best)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StabilityReport {
    pub pass: bool,
    pub failures: Vec<Vec<i64>>,
}

/// Regular at `p` ⇒ regular at `p + ε e_a` for every factor `a`, `1 <= ε <= max_offset`.
pub fn regularity_stability_check(e: &BundleExpr, space: &Space, p: &[i64], max_offset: i64) -> Result<StabilityReport> {
    if !regular_fast(e, space, p)? {
        return Err(Error::Precondition(format!("{e} is not regular at {p:?}")));
    }
    let mut failures = Vec::new();
    for a in 0..space.len() {
        for eps in 1..=max_offset {
            let mut q = p.to_vec();
            q[a] += eps;
            if !regular_fast(e, space, &q)? {
                failures.push(q);
            }
        }
    }
    Ok(StabilityReport { pass: failures.is_empty(), failures })
}

/// Surrogate global generation for decomposables: line and spinor slots with
/// twist `>= 0`, `Λ^p T(t)` with `t >= -p`. Not a test on abstract sheaves.
pub fn globally_generated_surrogate(e: &BundleExpr) -> Option<bool> {
    let mut ok = true;
    for b in e.terms().iter().flat_map(|t| &t.slots) {
        ok &= match *b {
            FactorBundle::Line(t) | FactorBundle::Spinor(_, t) => t >= 0,
            FactorBundle::Wedge(p, t) => t >= -(p as i64),
            FactorBundle::Psi(..) => return None,
        };
    }
    Some(ok)
}
