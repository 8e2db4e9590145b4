//! Block collections on the factors, their box products, right duals, and
//! brute-force verification by Ext computation.
//!
//! Exceptional-collection pattern checked by [`verify_nblock`], for members
//! listed in collection order `F_0, F_1, ...`:
//! `ext^0(F, F) = 1` and `ext^k(F, F) = 0` for `k > 0`;
//! `ext^•(F_b, F_a) = 0` whenever `F_a` sits in a strictly earlier block;
//! `ext^•(F_a, F_b) = 0` for distinct members of one block;
//! `ext^k(F_a, F_b) = 0` for `k > 0` when `F_a` precedes `F_b` (strongness).

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::bundle::{BundleExpr, FactorBundle, PsiRanks, SpinorKind};
use crate::cohomology::{ext, CohomTable};
use crate::error::{Error, Result};
use crate::space::{Factor, FactorKind, Space};

/// How to read the σ_j display on `Q_m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum SigmaVariant {
    /// `O(j..m-1), Σ_*(m-1), O(m+1..m+j-1)`: only `m` blocks.
    Literal,
    /// `O(j..m-1), Σ_*(m-1), O(m..m+j-1)`: the display with `O(m)` restored.
    Completed,
}

/// Collection presets addressable by name.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Preset {
    /// `(O(-n), ..., O)` on `P^n`; `(O(-m+1), Σ_*(-m+1), O(-m+2), ..., O)` on `Q_m`.
    Std,
    /// `(Σ_*(-m), O(-m+1), ..., O)` on `Q_m`; `P^n` as in `Std`.
    SpinorFirst,
    /// σ_j on a single quadric.
    Sigma(u32, SigmaVariant),
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        match s.as_str() {
            "std" => return Ok(Preset::Std),
            "spinor-first" => return Ok(Preset::SpinorFirst),
            _ => {}
        }
        let (variant, j) = if let Some(j) = s.strip_prefix("sigma:") {
            (SigmaVariant::Literal, j)
        } else if let Some(j) = s.strip_prefix("sigma-completed:") {
            (SigmaVariant::Completed, j)
        } else {
            return Err(Error::Collection(format!(
                "unknown preset '{s}' (expected std, spinor-first, sigma:<j> or sigma-completed:<j>)"
            )));
        };
        let j = j.parse().map_err(|_| Error::Collection(format!("bad sigma index '{j}'")))?;
        Ok(Preset::Sigma(j, variant))
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Preset::Std => write!(f, "std"),
            Preset::SpinorFirst => write!(f, "spinor-first"),
            Preset::Sigma(j, SigmaVariant::Literal) => write!(f, "sigma:{j}"),
            Preset::Sigma(j, SigmaVariant::Completed) => write!(f, "sigma-completed:{j}"),
        }
    }
}

/// A block collection on one factor; blocks hold factor bundles.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorCollection {
    pub factor: Factor,
    pub blocks: Vec<Vec<FactorBundle>>,
}

fn spinors(m: u32, t: i64) -> Vec<FactorBundle> {
    SpinorKind::all_on(m).into_iter().map(|k| FactorBundle::Spinor(k, t)).collect()
}

fn lines(ts: impl IntoIterator<Item = i64>) -> Vec<Vec<FactorBundle>> {
    ts.into_iter().map(|t| vec![FactorBundle::Line(t)]).collect()
}

/// `(O(-n), ..., O)` on `P^n`.
pub fn proj_collection(n: u32) -> FactorCollection {
    let factor = Factor::proj(n).expect("n >= 1");
    FactorCollection { factor, blocks: lines(-(n as i64)..=0) }
}

/// `(O(-m+1), Σ_*(-m+1), O(-m+2), ..., O)`, the collection used by regularity.
pub fn quadric_std_collection(m: u32) -> FactorCollection {
    let factor = Factor::quadric(m).expect("m >= 2");
    let mi = m as i64;
    let mut blocks = vec![vec![FactorBundle::Line(-mi + 1)], spinors(m, -mi + 1)];
    blocks.extend(lines(-mi + 2..=0));
    FactorCollection { factor, blocks }
}

/// `(Σ_*(-m), O(-m+1), ..., O)`.
pub fn quadric_spinor_first_collection(m: u32) -> FactorCollection {
    let factor = Factor::quadric(m).expect("m >= 2");
    let mi = m as i64;
    let mut blocks = vec![spinors(m, -mi)];
    blocks.extend(lines(-mi + 1..=0));
    FactorCollection { factor, blocks }
}

/// σ_j on `Q_m`, `1 <= j <= m`.
pub fn sigma_collection(m: u32, j: u32, variant: SigmaVariant) -> Result<FactorCollection> {
    let factor = Factor::quadric(m)?;
    if j < 1 || j > m {
        return Err(Error::Collection(format!("sigma index {j} outside 1..={m}")));
    }
    let (mi, ji) = (m as i64, j as i64);
    let mut blocks = lines(ji..mi);
    blocks.push(spinors(m, mi - 1));
    let tail_start = match variant {
        SigmaVariant::Literal => mi + 1,
        SigmaVariant::Completed => mi,
    };
    blocks.extend(lines(tail_start..mi + ji));
    Ok(FactorCollection { factor, blocks })
}

pub fn factor_collection(factor: Factor, preset: Preset) -> Result<FactorCollection> {
    match (factor.kind, preset) {
        (FactorKind::Proj, Preset::Std | Preset::SpinorFirst) => Ok(proj_collection(factor.dim)),
        (FactorKind::Quadric, Preset::Std) => Ok(quadric_std_collection(factor.dim)),
        (FactorKind::Quadric, Preset::SpinorFirst) => Ok(quadric_spinor_first_collection(factor.dim)),
        (FactorKind::Quadric, Preset::Sigma(j, v)) => sigma_collection(factor.dim, j, v),
        (FactorKind::Proj, Preset::Sigma(..)) => {
            Err(Error::Collection(format!("sigma collections live on quadrics, not {factor}")))
        }
    }
}

/// One member of a product collection with its block composition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Member {
    pub bundle: BundleExpr,
    /// Factor block indices `(j_1, ..., j_r)`; empty for hand-built collections.
    pub index: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockCollection {
    pub space: Space,
    pub blocks: Vec<Vec<Member>>,
    pub label: String,
}

/// All `(j_1, ..., j_r)` with `0 <= j_a <= bounds[a]` and `Σ j_a = total`, in
/// lexicographic order.
pub fn compositions(bounds: &[usize], total: usize) -> Vec<Vec<usize>> {
    fn go(bounds: &[usize], total: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        match bounds.split_first() {
            None => {
                if total == 0 {
                    out.push(prefix.clone());
                }
            }
            Some((&b, rest)) => {
                let rest_max: usize = rest.iter().sum();
                for j in 0..=b.min(total) {
                    if total - j <= rest_max {
                        prefix.push(j);
                        go(rest, total - j, prefix, out);
                        prefix.pop();
                    }
                }
            }
        }
    }
    let mut out = Vec::new();
    go(bounds, total, &mut Vec::new(), &mut out);
    out
}

/// Every box product choosing one member from block `index[a]` of factor `a`.
fn box_members(blocks: &[&[FactorBundle]]) -> Vec<Vec<FactorBundle>> {
    let mut acc: Vec<Vec<FactorBundle>> = vec![Vec::new()];
    for block in blocks {
        acc = acc
            .into_iter()
            .flat_map(|prefix| {
                block.iter().map(move |b| {
                    let mut p = prefix.clone();
                    p.push(*b);
                    p
                })
            })
            .collect();
    }
    acc
}

fn assemble(space: &Space, per_factor: &[Vec<Vec<FactorBundle>>]) -> Result<Vec<Vec<Member>>> {
    let bounds: Vec<usize> = per_factor.iter().map(|c| c.len() - 1).collect();
    let total: usize = bounds.iter().sum();
    let mut blocks = Vec::with_capacity(total + 1);
    for k in 0..=total {
        let mut block = Vec::new();
        for index in compositions(&bounds, k) {
            let chosen: Vec<&[FactorBundle]> =
                index.iter().zip(per_factor).map(|(&j, c)| c[j].as_slice()).collect();
            for slots in box_members(&chosen) {
                block.push(Member { bundle: BundleExpr::single(slots, space)?, index: index.clone() });
            }
        }
        blocks.push(block);
    }
    Ok(blocks)
}

/// Composition-indexed box products of factor collections.
pub fn product_collection(parts: &[FactorCollection]) -> Result<BlockCollection> {
    let space = Space::new(parts.iter().map(|c| c.factor).collect())?;
    if parts.len() > 1 {
        for c in parts {
            if c.blocks.last().map(Vec::as_slice) != Some(&[FactorBundle::Line(0)]) {
                return Err(Error::Collection(format!(
                    "the collection on {} does not end with the block {{O}}",
                    c.factor
                )));
            }
        }
    }
    let per: Vec<Vec<Vec<FactorBundle>>> = parts.iter().map(|c| c.blocks.clone()).collect();
    let blocks = assemble(&space, &per)?;
    Ok(BlockCollection { space, blocks, label: String::new() })
}

/// The preset collection on `space`; σ presets need a single quadric.
pub fn preset_collection(space: &Space, preset: Preset) -> Result<BlockCollection> {
    let parts = space
        .factors()
        .iter()
        .map(|f| factor_collection(*f, preset))
        .collect::<Result<Vec<_>>>()?;
    if matches!(preset, Preset::Sigma(..)) && parts.len() != 1 {
        return Err(Error::Collection("sigma presets need a single quadric factor".into()));
    }
    let mut c = product_collection(&parts)?;
    c.label = format!("{preset} on {space}");
    Ok(c)
}

pub fn standard_collection(space: &Space) -> BlockCollection {
    preset_collection(space, Preset::Std).expect("standard collections exist on every space")
}

impl BlockCollection {
    /// A collection assembled by hand; members carry no composition index.
    pub fn from_blocks(space: Space, blocks: Vec<Vec<BundleExpr>>, label: &str) -> Self {
        let blocks = blocks
            .into_iter()
            .map(|b| b.into_iter().map(|bundle| Member { bundle, index: Vec::new() }).collect())
            .collect();
        BlockCollection { space, blocks, label: label.to_string() }
    }

    pub fn type_vector(&self) -> Vec<usize> {
        self.blocks.iter().map(Vec::len).collect()
    }

    pub fn members(&self) -> impl Iterator<Item = (usize, &Member)> {
        self.blocks.iter().enumerate().flat_map(|(k, b)| b.iter().map(move |m| (k, m)))
    }

    /// Direct sum of the members of block `j`.
    pub fn block_sum(&self, j: usize) -> Result<BundleExpr> {
        let block = self.blocks.get(j).ok_or_else(|| Error::Collection(format!("no block {j}")))?;
        let parts: Vec<BundleExpr> = block.iter().map(|m| m.bundle.clone()).collect();
        BundleExpr::sum_of(&parts).ok_or_else(|| Error::Collection(format!("block {j} is empty")))
    }
}

/// What a violation breaks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum ViolationKind {
    BlockCount,
    MemberCount,
    NotExceptional,
    WithinBlock,
    Backward,
    NotStrong,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub from: Option<String>,
    pub to: Option<String>,
    pub degree: Option<usize>,
    /// Offending dimension, or the found count for count violations.
    pub dim: String,
    pub expected: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct VerifyReport {
    pub label: String,
    pub pass: bool,
    pub type_vector: Vec<usize>,
    pub pairs_checked: usize,
    pub violations: Vec<Violation>,
}

impl VerifyReport {
    pub fn first_violation(&self) -> Option<&Violation> {
        self.violations.first()
    }
}

fn nonzero(t: &CohomTable) -> impl Iterator<Item = (usize, String)> + '_ {
    t.nonzero_degrees().into_iter().map(|i| (i, t.dims()[i].to_string()))
}

/// Checks block count, member count (the rank of `K_0`), and the Ext pattern
/// over every ordered pair of members.
pub fn verify_nblock(c: &BlockCollection) -> Result<VerifyReport> {
    let members: Vec<(usize, &Member)> = c.members().collect();
    if let Some((_, m)) = members.iter().find(|(_, m)| m.bundle.is_symbolic()) {
        return Err(Error::Symbolic(format!("collection member {}", m.bundle)));
    }
    let mut violations = Vec::new();
    let want_blocks = c.space.dim() + 1;
    if c.blocks.len() != want_blocks {
        violations.push(Violation {
            kind: ViolationKind::BlockCount,
            from: None,
            to: None,
            degree: None,
            dim: c.blocks.len().to_string(),
            expected: Some(want_blocks.to_string()),
        });
    }
    let want_members: usize = c.space.factors().iter().map(|f| f.k0_rank()).product();
    if members.len() != want_members {
        violations.push(Violation {
            kind: ViolationKind::MemberCount,
            from: None,
            to: None,
            degree: None,
            dim: members.len().to_string(),
            expected: Some(want_members.to_string()),
        });
    }
    let pairs: Vec<(usize, usize)> =
        (0..members.len()).flat_map(|a| (0..members.len()).map(move |b| (a, b))).collect();
    let tables = pairs
        .par_iter()
        .map(|&(a, b)| ext(&members[a].1.bundle, &members[b].1.bundle, &c.space))
        .collect::<Result<Vec<_>>>()?;
    for (&(a, b), table) in pairs.iter().zip(&tables) {
        let (ka, ma) = members[a];
        let (kb, mb) = members[b];
        let push = |v: &mut Vec<Violation>, kind, degree, dim: String| {
            v.push(Violation {
                kind,
                from: Some(ma.bundle.to_string()),
                to: Some(mb.bundle.to_string()),
                degree: Some(degree),
                dim,
                expected: Some("0".into()),
            })
        };
        if a == b {
            for (i, d) in nonzero(table) {
                if i > 0 {
                    push(&mut violations, ViolationKind::NotExceptional, i, d);
                }
            }
            if table.h(0) != 1u32.into() {
                violations.push(Violation {
                    kind: ViolationKind::NotExceptional,
                    from: Some(ma.bundle.to_string()),
                    to: Some(mb.bundle.to_string()),
                    degree: Some(0),
                    dim: table.h(0).to_string(),
                    expected: Some("1".into()),
                });
            }
        } else if ka == kb {
            for (i, d) in nonzero(table) {
                push(&mut violations, ViolationKind::WithinBlock, i, d);
            }
        } else if ka > kb {
            for (i, d) in nonzero(table) {
                push(&mut violations, ViolationKind::Backward, i, d);
            }
        } else {
            for (i, d) in nonzero(table) {
                if i > 0 {
                    push(&mut violations, ViolationKind::NotStrong, i, d);
                }
            }
        }
    }
    Ok(VerifyReport {
        label: c.label.clone(),
        pass: violations.is_empty(),
        type_vector: c.type_vector(),
        pairs_checked: pairs.len(),
        violations,
    })
}

/// Right dual blocks on one factor.
pub fn factor_right_dual(factor: Factor, preset: Preset) -> Result<Vec<Vec<FactorBundle>>> {
    let d = factor.dim;
    match (factor.kind, preset) {
        (FactorKind::Proj, Preset::Std | Preset::SpinorFirst) => Ok((0..=d)
            .map(|k| vec![FactorBundle::Wedge(k, -(k as i64)).normalized(factor)])
            .collect()),
        (FactorKind::Quadric, Preset::Std) => {
            let mut blocks = vec![vec![FactorBundle::Line(0)]];
            blocks.extend((1..d - 1).map(|j| vec![FactorBundle::Psi(j, 0)]));
            blocks.push(spinors(d, 0));
            blocks.push(vec![FactorBundle::Line(1)]);
            Ok(blocks)
        }
        (FactorKind::Quadric, Preset::SpinorFirst) => {
            let mut blocks = vec![vec![FactorBundle::Line(0)]];
            blocks.extend((1..d).map(|j| vec![FactorBundle::Psi(j, 0)]));
            blocks.push(spinors(d, 0));
            Ok(blocks)
        }
        (_, p) => Err(Error::Unsupported(format!("right dual of the {p} collection"))),
    }
}

/// The right dual `('E_0, ..., 'E_d)`: products of the factor duals indexed
/// by compositions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualCollection {
    pub space: Space,
    pub blocks: Vec<Vec<Member>>,
    pub label: String,
}

pub fn right_dual(space: &Space, preset: Preset) -> Result<DualCollection> {
    let per = space
        .factors()
        .iter()
        .map(|f| factor_right_dual(*f, preset))
        .collect::<Result<Vec<_>>>()?;
    let blocks = assemble(space, &per)?;
    Ok(DualCollection { space: space.clone(), blocks, label: format!("right dual of {preset} on {space}") })
}

impl DualCollection {
    pub fn block_sum(&self, j: usize) -> Result<BundleExpr> {
        let block = self.blocks.get(j).ok_or_else(|| Error::Collection(format!("no dual block {j}")))?;
        let parts: Vec<BundleExpr> = block.iter().map(|m| m.bundle.clone()).collect();
        BundleExpr::sum_of(&parts).ok_or_else(|| Error::Collection(format!("dual block {j} is empty")))
    }

    /// `r_j = rank ⊕'E_j`; `None` where a needed ψ rank is missing.
    pub fn rank_vector(&self, psi: &PsiRanks) -> Vec<Option<u64>> {
        (0..self.blocks.len())
            .map(|j| self.block_sum(j).ok().and_then(|b| b.rank(&self.space, psi).ok()))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct OrthogonalityReport {
    pub pass: bool,
    pub pairs_checked: usize,
    pub symbolic_skipped: usize,
    pub failures: Vec<String>,
}

/// Checks `ext^•('A, B)` for `'A` in `'E_{d-j}` and `B` in `E_i`: zero unless
/// the compositions are complementary factorwise, and for complementary
/// blocks concentrated in degree `d - j` with a permutation matrix of ones.
pub fn orthogonality_check(c: &BlockCollection, dc: &DualCollection) -> Result<OrthogonalityReport> {
    let d = c.space.dim();
    let bounds: Vec<usize> = c.space.factors().iter().map(|f| f.dim as usize).collect();
    let duals: Vec<&Member> = dc.blocks.iter().flatten().collect();
    let originals: Vec<&Member> = c.blocks.iter().flatten().collect();
    let pairs: Vec<(usize, usize)> =
        (0..duals.len()).flat_map(|a| (0..originals.len()).map(move |b| (a, b))).collect();
    let tables = pairs
        .par_iter()
        .map(|&(a, b)| ext(&duals[a].bundle, &originals[b].bundle, &c.space))
        .collect::<Result<Vec<_>>>()?;
    let mut failures = Vec::new();
    let mut skipped = 0;
    let mut checked = 0;
    // count of degree-(d-j) ones per dual and per original member
    let mut ones_dual = vec![0usize; duals.len()];
    let mut ones_orig = vec![0usize; originals.len()];
    let mut computable_dual = vec![true; duals.len()];
    for (&(a, b), t) in pairs.iter().zip(&tables) {
        let (da, ob) = (duals[a], originals[b]);
        if t.is_symbolic() {
            skipped += 1;
            computable_dual[a] = false;
            continue;
        }
        checked += 1;
        let complementary =
            da.index.iter().zip(&ob.index).zip(&bounds).all(|((&x, &y), &n)| x + y == n);
        let j: usize = ob.index.iter().sum();
        let nz = t.nonzero_degrees();
        if nz.is_empty() {
            continue;
        }
        if !complementary {
            failures.push(format!("ext^•({}, {}) = [{t}] should vanish", da.bundle, ob.bundle));
        } else if nz != [d - j] || t.h((d - j) as i64) != 1u32.into() {
            failures.push(format!("ext^•({}, {}) = [{t}], expected a single 1 in degree {}", da.bundle, ob.bundle, d - j));
        } else {
            ones_dual[a] += 1;
            ones_orig[b] += 1;
        }
    }
    for (a, m) in duals.iter().enumerate() {
        if computable_dual[a] && ones_dual[a] != 1 {
            failures.push(format!("{} pairs with {} members instead of one", m.bundle, ones_dual[a]));
        }
    }
    let matched_orig: Vec<bool> = {
        // an original member is matched by a computable dual member, or its
        // complementary dual block is symbolic
        originals
            .iter()
            .enumerate()
            .map(|(b, _)| {
                ones_orig[b] == 1
                    || pairs
                        .iter()
                        .zip(&tables)
                        .any(|(&(a, bb), t)| bb == b && t.is_symbolic() && {
                            let da = duals[a];
                            da.index.iter().zip(&originals[b].index).zip(&bounds).all(|((&x, &y), &n)| x + y == n)
                        })
            })
            .collect()
    };
    for (b, ok) in matched_orig.iter().enumerate() {
        if !ok {
            failures.push(format!("{} has {} dual partners instead of one", originals[b].bundle, ones_orig[b]));
        }
    }
    Ok(OrthogonalityReport { pass: failures.is_empty(), pairs_checked: checked, symbolic_skipped: skipped, failures })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse;

    fn sp(s: &str) -> Space {
        s.parse().unwrap()
    }

    #[test]
    fn compositions_enumerate() {
        assert_eq!(compositions(&[1, 3], 2), vec![vec![0, 2], vec![1, 1]]);
        assert_eq!(compositions(&[2, 2], 0), vec![vec![0, 0]]);
        assert_eq!(compositions(&[2, 2], 5), Vec::<Vec<usize>>::new());
        let total: usize = (0..=6).map(|k| compositions(&[3, 3], k).len()).sum();
        assert_eq!(total, 16);
    }

    #[test]
    fn type_vectors() {
        assert_eq!(standard_collection(&sp("P3")).type_vector(), [1, 1, 1, 1]);
        assert_eq!(standard_collection(&sp("Q4")).type_vector(), [1, 2, 1, 1, 1]);
        let sf = preset_collection(&sp("Q4"), Preset::SpinorFirst).unwrap();
        assert_eq!(sf.type_vector(), [2, 1, 1, 1, 1]);
        let sf = preset_collection(&sp("Q3"), Preset::SpinorFirst).unwrap();
        assert_eq!(sf.type_vector(), [1, 1, 1, 1]);
        let c = standard_collection(&sp("P1xQ3"));
        assert_eq!(c.type_vector(), [1, 2, 2, 2, 1]);
        let e0: Vec<String> = c.blocks[0].iter().map(|m| m.bundle.to_string()).collect();
        assert_eq!(e0, ["O(-1,-2)"]);
        let e1: Vec<String> = c.blocks[1].iter().map(|m| m.bundle.to_string()).collect();
        assert_eq!(e1, ["O(-1)#S(-2)", "O(0,-2)"]);
        assert_eq!(standard_collection(&sp("P3xQ3")).blocks.len(), 7);
    }

    #[test]
    fn small_collections_verify() {
        for s in ["P1", "P2", "Q2", "Q3", "Q4", "P1xP1"] {
            let r = verify_nblock(&standard_collection(&sp(s))).unwrap();
            assert!(r.pass, "{s}: {:?}", r.first_violation());
        }
    }

    #[test]
    fn duplicated_member_fails() {
        let x = sp("P1");
        let o = parse("O(0)", &x).unwrap();
        let c = BlockCollection::from_blocks(x.clone(), vec![vec![parse("O(-1)", &x).unwrap()], vec![o.clone(), o]], "dup");
        let r = verify_nblock(&c).unwrap();
        assert!(!r.pass);
        let v = r.violations.iter().find(|v| v.kind == ViolationKind::WithinBlock).unwrap();
        assert_eq!((v.degree, v.dim.as_str()), (Some(0), "1"));
    }

    #[test]
    fn sigma_variants() {
        let printed = sigma_collection(3, 2, SigmaVariant::Literal).unwrap();
        assert_eq!(printed.blocks.len(), 3);
        let fixed = sigma_collection(3, 2, SigmaVariant::Completed).unwrap();
        assert_eq!(fixed.blocks.len(), 4);
        assert_eq!(fixed.blocks[1], vec![FactorBundle::Spinor(SpinorKind::S, 2)]);
        assert!(sigma_collection(3, 4, SigmaVariant::Completed).is_err());
        assert!(sigma_collection(3, 0, SigmaVariant::Completed).is_err());
    }

    #[test]
    fn product_needs_trivial_last_block() {
        let s = sigma_collection(3, 1, SigmaVariant::Completed).unwrap();
        assert!(product_collection(&[proj_collection(1), s.clone()]).is_err());
        assert!(product_collection(&[s]).is_ok());
    }

    #[test]
    fn preset_names() {
        for name in ["std", "spinor-first", "sigma:2", "sigma-completed:3"] {
            assert_eq!(name.parse::<Preset>().unwrap().to_string(), name);
        }
        assert!("sigma:x".parse::<Preset>().is_err());
        assert!("bogus".parse::<Preset>().is_err());
    }

    #[test]
    fn projective_dual() {
        let d = right_dual(&sp("P3"), Preset::Std).unwrap();
        let names: Vec<String> = d.blocks.iter().map(|b| b[0].bundle.to_string()).collect();
        assert_eq!(names, ["O(0)", "T(-1)", "T^2(-2)", "O(1)"]);
        assert_eq!(d.rank_vector(&PsiRanks::new()), [Some(1), Some(3), Some(3), Some(1)]);
        let r = orthogonality_check(&standard_collection(&sp("P3")), &d).unwrap();
        assert!(r.pass, "{:?}", r.failures);
    }

    #[test]
    fn quadric_duals_pair_where_computable() {
        for s in ["Q2", "Q3", "Q4", "P1xQ3"] {
            for p in [Preset::Std, Preset::SpinorFirst] {
                let x = sp(s);
                let c = preset_collection(&x, p).unwrap();
                let d = right_dual(&x, p).unwrap();
                let r = orthogonality_check(&c, &d).unwrap();
                assert!(r.pass, "{s} {p}: {:?}", r.failures);
            }
        }
    }
}
