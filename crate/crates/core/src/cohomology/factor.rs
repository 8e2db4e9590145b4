//! Cohomology of bundles on a single factor `P^n` or `Q_m`.

use std::collections::HashMap;
use std::sync::{LazyLock, RwLock};

use num_bigint::{BigInt, BigUint};
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::table::{CohomTable, FactorCohom};
use crate::arith::binomial;
use crate::bundle::{spinor_sequence_width, SpinorKind};
use crate::error::{Error, Result};
use crate::space::{Factor, FactorKind};

/// Memo key for one factor table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "camelCase")]
pub enum FactorKey {
    BottLine { n: u32, t: i64 },
    BottForms { n: u32, p: u32, t: i64 },
    QuadricLine { m: u32, t: i64 },
    SpinorTwist { m: u32, kind: SpinorKind, t: i64 },
    /// `Σ_a ⊗ Σ_b(t)` with `a <= b`.
    SpinorPair { m: u32, a: SpinorKind, b: SpinorKind, t: i64 },
}

static CACHE: LazyLock<RwLock<HashMap<FactorKey, FactorCohom>>> = LazyLock::new(Default::default);

fn cached(key: FactorKey, compute: impl FnOnce() -> Result<FactorCohom>) -> Result<FactorCohom> {
    if let Some(t) = CACHE.read().expect("cache lock").get(&key) {
        return Ok(t.clone());
    }
    let table = compute()?;
    CACHE.write().expect("cache lock").entry(key).or_insert_with(|| table.clone());
    Ok(table)
}

/// Drops every memoized table.
pub fn clear_cache() {
    CACHE.write().expect("cache lock").clear();
}

pub fn cache_len() -> usize {
    CACHE.read().expect("cache lock").len()
}

/// Snapshot of the memo table, for persistence.
pub fn cache_entries() -> Vec<(FactorKey, FactorCohom)> {
    CACHE.read().expect("cache lock").iter().map(|(k, v)| (*k, v.clone())).collect()
}

/// Seeds the memo table; existing entries win.
pub fn cache_seed(entries: impl IntoIterator<Item = (FactorKey, FactorCohom)>) {
    let mut cache = CACHE.write().expect("cache lock");
    for (k, v) in entries {
        cache.entry(k).or_insert(v);
    }
}

/// `O(t)` on `P^n`.
pub fn bott_line(n: u32, t: i64) -> FactorCohom {
    assert!(n >= 1, "P^0 is not a factor");
    let n_ = n as usize;
    let n = n as i64;
    if t >= 0 {
        CohomTable::concentrated(n_, 0, binomial(n + t, n))
    } else if t <= -n - 1 {
        CohomTable::concentrated(n_, n_, binomial(-t - 1, n))
    } else {
        CohomTable::zero(n_)
    }
}

/// `Ω^p(t)` on `P^n`.
pub fn bott_forms(n: u32, p: u32, t: i64) -> FactorCohom {
    assert!(n >= 1 && p <= n, "Ω^{p} on P^{n}");
    let key = FactorKey::BottForms { n, p, t };
    cached(key, || {
        let (d, pu) = (n as usize, p as usize);
        let (n, p) = (n as i64, p as i64);
        let mut table = CohomTable::zero(d);
        if t > p {
            table.set(0, binomial(t + n - p, t) * binomial(t - 1, p));
        }
        if t == 0 {
            table.set(pu, BigUint::from(1u32));
        }
        if t < p - n {
            table.set(d, binomial(-t + p, -t) * binomial(-t - 1, n - p));
        }
        Ok(table)
    })
    .expect("bott formula is infallible")
}

/// `Λ^p T(t) ≅ Ω^{n-p}(t+n+1)` on `P^n`.
pub fn tangent_wedge(n: u32, p: u32, t: i64) -> FactorCohom {
    bott_forms(n, n - p, t + n as i64 + 1)
}

/// `O(t)` on `Q_m`, from `0 -> O_P(t-2) -> O_P(t) -> O_Q(t) -> 0` on `P^{m+1}`.
pub fn quadric_line(m: u32, t: i64) -> FactorCohom {
    assert!(m >= 2, "Q_{m} is not a factor");
    let h0 = |t: i64| -> BigUint {
        if t < 0 {
            return BigUint::zero();
        }
        let m = m as i64;
        binomial(m + 1 + t, m + 1) - binomial(m - 1 + t, m + 1)
    };
    let mut table = CohomTable::zero(m as usize);
    table.set(0, h0(t));
    table.set(m as usize, h0(-t - m as i64));
    table
}

fn check_kind(m: u32, kind: SpinorKind) -> Result<()> {
    if kind.valid_on(m) {
        Ok(())
    } else {
        Err(Error::InvalidBundle(format!("spinor kind {} does not exist on Q{m}", kind.tag())))
    }
}

fn to_dim(v: BigInt, ctx: &str) -> Result<BigUint> {
    v.to_biguint().ok_or_else(|| Error::Inconsistent(format!("negative dimension while resolving {ctx}")))
}

/// `0 -> K -> M -> C -> 0` with `M` free of intermediate cohomology; returns `C`.
fn les_up(k: &CohomTable, mid: &CohomTable, ctx: &str) -> Result<CohomTable> {
    let m = k.top();
    let mut c = CohomTable::zero(m);
    for i in 1..m.saturating_sub(1) {
        c.set(i, k.h(i as i64 + 1));
    }
    let (km, mm) = (k.h(m as i64), mid.h(m as i64));
    if mm.is_zero() {
        c.set(m - 1, km);
    } else if km.is_zero() {
        c.set(m, mm);
    } else {
        return Err(Error::RecursionAmbiguity(format!("connecting map H^{m} in {ctx}")));
    }
    let h0 = BigInt::from(mid.h(0)) - BigInt::from(k.h(0)) + BigInt::from(k.h(1));
    c.set(0, to_dim(h0, ctx)?);
    Ok(c)
}

/// `0 -> K -> M -> C -> 0` with `M` free of intermediate cohomology; returns `K`.
fn les_down(c: &CohomTable, mid: &CohomTable, ctx: &str) -> Result<CohomTable> {
    let m = c.top();
    let mut k = CohomTable::zero(m);
    for j in 2..m {
        k.set(j, c.h(j as i64 - 1));
    }
    let (m0, c0) = (mid.h(0), c.h(0));
    if m0.is_zero() {
        k.set(1, c0);
    } else if c0.is_zero() {
        k.set(0, m0);
    } else {
        return Err(Error::RecursionAmbiguity(format!("connecting map H^0 in {ctx}")));
    }
    let top = BigInt::from(c.h(m as i64 - 1)) + BigInt::from(mid.h(m as i64)) - BigInt::from(c.h(m as i64));
    k.set(m, to_dim(top, ctx)?);
    Ok(k)
}

/// `Σ(t)` on `Q_m`, walked through the spinor sequences from `Σ(-1) = 0`
/// upward or downward, never using duality.
pub fn spinor_twist_by_recursion(m: u32, kind: SpinorKind, t: i64) -> Result<FactorCohom> {
    check_kind(m, kind)?;
    let n = spinor_sequence_width(m);
    let ctx = format!("Σ({t}) on Q{m}");
    let mut table = CohomTable::zero(m as usize);
    if t >= 0 {
        for s in 0..=t {
            table = les_up(&table, &quadric_line(m, s).scale(n), &ctx)?;
        }
    } else {
        for s in (t..=-2).rev() {
            table = les_down(&table, &quadric_line(m, s + 1).scale(n), &ctx)?;
        }
    }
    Ok(table)
}

/// `Σ_kind(t)` on `Q_m` (with `Σ = S(1)`).
pub fn spinor_twist(m: u32, kind: SpinorKind, t: i64) -> Result<FactorCohom> {
    check_kind(m, kind)?;
    cached(FactorKey::SpinorTwist { m, kind, t }, || {
        let mi = m as i64;
        if t <= -mi - 1 {
            // h^i(Σ_x(t)) = h^{m-i}(Σ_x'(-t-m-1))
            Ok(spinor_twist(m, kind.dual_partner(m), -t - mi - 1)?.reversed())
        } else {
            spinor_twist_by_recursion(m, kind, t)
        }
    })
}

/// `Σ_a ⊗ Σ_b(t)` at `t = -1`: `Hom(Σ_b', Σ_a)`, one-dimensional exactly when
/// `b' = a` and zero otherwise.
fn spinor_pair_base(m: u32, a: SpinorKind, b: SpinorKind) -> FactorCohom {
    let mut t = CohomTable::zero(m as usize);
    if b.dual_partner(m) == a {
        t.set(0, BigUint::from(1u32));
    }
    t
}

/// `Σ_a ⊗ Σ_b(t)` on `Q_m`, by the spinor sequence of the `b` slot tensored
/// with `Σ_a`, walked from the `t = -1` base in either direction.
pub fn spinor_pair_by_recursion(m: u32, a: SpinorKind, b: SpinorKind, t: i64) -> Result<FactorCohom> {
    check_kind(m, a)?;
    check_kind(m, b)?;
    let n = spinor_sequence_width(m);
    let ctx = format!("{}⊗{}({t}) on Q{m}", a.tag(), b.tag());
    let steps = (t + 1).unsigned_abs() as usize;
    // kind of the b slot at twist -1
    let base_kind = if steps % 2 == 0 { b } else { b.sequence_partner(m) };
    let mut table = spinor_pair_base(m, a, base_kind);
    if t >= 0 {
        for s in 0..=t {
            table = les_up(&table, &spinor_twist(m, a, s)?.scale(n), &ctx)?;
        }
    } else {
        for s in (t..=-2).rev() {
            table = les_down(&table, &spinor_twist(m, a, s + 1)?.scale(n), &ctx)?;
        }
    }
    Ok(table)
}

/// `Σ_a(ta) ⊗ Σ_b(tb)` on `Q_m`.
pub fn spinor_pair(m: u32, ka: SpinorKind, ta: i64, kb: SpinorKind, tb: i64) -> Result<FactorCohom> {
    check_kind(m, ka)?;
    check_kind(m, kb)?;
    let (a, b) = if ka <= kb { (ka, kb) } else { (kb, ka) };
    let t = ta + tb;
    cached(FactorKey::SpinorPair { m, a, b, t }, || spinor_pair_by_recursion(m, a, b, t))
}

/// A factor bundle after slotwise tensor reduction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SlotBundle {
    Line(i64),
    Spinor(SpinorKind, i64),
    Wedge(u32, i64),
    Pair(SpinorKind, SpinorKind, i64),
}

impl SlotBundle {
    pub fn twisted(self, s: i64) -> SlotBundle {
        match self {
            SlotBundle::Line(t) => SlotBundle::Line(t + s),
            SlotBundle::Spinor(k, t) => SlotBundle::Spinor(k, t + s),
            SlotBundle::Wedge(p, t) => SlotBundle::Wedge(p, t + s),
            SlotBundle::Pair(a, b, t) => SlotBundle::Pair(a, b, t + s),
        }
    }

    /// Tensor product of two slot bundles, when the engine knows it.
    pub fn tensor(self, other: SlotBundle) -> Result<SlotBundle> {
        match (self, other) {
            (SlotBundle::Line(s), x) | (x, SlotBundle::Line(s)) => Ok(x.twisted(s)),
            (SlotBundle::Spinor(a, s), SlotBundle::Spinor(b, t)) => Ok(SlotBundle::Pair(a, b, s + t)),
            (x, y) => Err(Error::Unsupported(format!("tensor product {x:?} ⊗ {y:?}"))),
        }
    }
}

/// Cohomology table of a reduced slot bundle on `factor`.
pub fn slot_table(factor: Factor, b: SlotBundle) -> Result<FactorCohom> {
    let d = factor.dim;
    match (factor.kind, b) {
        (FactorKind::Proj, SlotBundle::Line(t)) => cached(FactorKey::BottLine { n: d, t }, || Ok(bott_line(d, t))),
        (FactorKind::Proj, SlotBundle::Wedge(p, t)) if p <= d => Ok(tangent_wedge(d, p, t)),
        (FactorKind::Quadric, SlotBundle::Line(t)) => cached(FactorKey::QuadricLine { m: d, t }, || Ok(quadric_line(d, t))),
        (FactorKind::Quadric, SlotBundle::Spinor(k, t)) => spinor_twist(d, k, t),
        (FactorKind::Quadric, SlotBundle::Pair(a, b, t)) => spinor_pair(d, a, 0, b, t),
        (_, b) => Err(Error::Unsupported(format!("{b:?} on {factor}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use SpinorKind::*;

    fn dims(t: &FactorCohom) -> Vec<u64> {
        t.dims().iter().map(|v| u64::try_from(v).unwrap()).collect()
    }

    #[test]
    fn bott_line_examples() {
        assert_eq!(dims(&bott_line(3, 0)), [1, 0, 0, 0]);
        assert_eq!(dims(&bott_line(2, -3)), [0, 0, 1]);
        assert_eq!(dims(&bott_line(2, 2)), [6, 0, 0]);
        assert_eq!(dims(&bott_line(1, -2)), [0, 1]);
        assert_eq!(dims(&bott_line(3, -2)), [0, 0, 0, 0]);
    }

    #[test]
    fn bott_forms_examples() {
        assert_eq!(dims(&bott_forms(3, 1, 0)), [0, 1, 0, 0]);
        assert_eq!(bott_forms(3, 3, 4), bott_line(3, 0));
        assert_eq!(dims(&bott_forms(2, 1, 3)), [8, 0, 0]);
        // T on P^2 = Ω^1(3): h^0 = 8
        assert_eq!(dims(&tangent_wedge(2, 1, 0)), [8, 0, 0]);
        assert_eq!(dims(&tangent_wedge(3, 1, -1)), [4, 0, 0, 0]);
        for n in 1..5 {
            for t in -8..8 {
                assert_eq!(bott_forms(n, 0, t), bott_line(n, t));
                assert_eq!(bott_forms(n, n, t), bott_line(n, t - n as i64 - 1));
            }
        }
    }

    #[test]
    fn quadric_line_examples() {
        assert_eq!(dims(&quadric_line(3, 1)), [5, 0, 0, 0]);
        assert_eq!(dims(&quadric_line(3, -3)), [0, 0, 0, 1]);
        assert_eq!(dims(&quadric_line(3, -1)), [0, 0, 0, 0]);
        assert_eq!(dims(&quadric_line(2, 1)), [4, 0, 0]);
        assert_eq!(dims(&quadric_line(4, 0)), [1, 0, 0, 0, 0]);
    }

    #[test]
    fn spinor_twist_examples() {
        assert!(spinor_twist(3, S, -1).unwrap().is_zero());
        assert_eq!(dims(&spinor_twist(3, S, 0).unwrap()), [4, 0, 0, 0]);
        assert_eq!(dims(&spinor_twist(4, S1, 0).unwrap()), [4, 0, 0, 0, 0]);
        assert_eq!(dims(&spinor_twist(3, S, -4).unwrap()), [0, 0, 0, 4]);
        assert!(spinor_twist(3, S1, 0).is_err());
    }

    #[test]
    fn spinor_twist_recursion_matches_duality() {
        for m in 2..8 {
            for &k in &SpinorKind::all_on(m) {
                for t in -14..8 {
                    assert_eq!(
                        spinor_twist(m, k, t).unwrap(),
                        spinor_twist_by_recursion(m, k, t).unwrap(),
                        "m={m} t={t}"
                    );
                }
            }
        }
    }

    #[test]
    fn spinor_pair_small_cases() {
        assert_eq!(dims(&spinor_pair(3, S, 0, S, 0).unwrap())[0], 15);
        assert_eq!(dims(&spinor_pair(3, S, 0, S, -1).unwrap()), [1, 0, 0, 0]);
        assert_eq!(dims(&spinor_pair(3, S, 0, S, -2).unwrap()), [0, 1, 0, 0]);
        assert_eq!(dims(&spinor_pair(3, S, 0, S, -3).unwrap()), [0, 0, 1, 0]);
        assert_eq!(dims(&spinor_pair(3, S, 0, S, -4).unwrap()), [0, 0, 0, 1]);
        // distinct spinors on Q4 are orthogonal: Σ_1^∨ ⊗ Σ_2 = Σ_1(-1) ⊗ Σ_2
        assert!(spinor_pair(4, S1, -1, S2, 0).unwrap().is_zero());
        assert_eq!(dims(&spinor_pair(4, S1, -1, S1, 0).unwrap()), [1, 0, 0, 0, 0]);
    }

    #[test]
    fn les_rejects_unresolvable_maps() {
        let k = CohomTable::from_u64s(&[0, 0, 0, 1]);
        let mid = CohomTable::from_u64s(&[0, 0, 0, 2]);
        assert!(matches!(les_up(&k, &mid, "test"), Err(Error::RecursionAmbiguity(_))));
        let c = CohomTable::from_u64s(&[1, 0, 0, 0]);
        let mid = CohomTable::from_u64s(&[2, 0, 0, 0]);
        assert!(matches!(les_down(&c, &mid, "test"), Err(Error::RecursionAmbiguity(_))));
    }

    #[test]
    fn slot_tensor_reduction() {
        let p = SlotBundle::Spinor(S, 1).tensor(SlotBundle::Spinor(S, -2)).unwrap();
        assert_eq!(p, SlotBundle::Pair(S, S, -1));
        assert_eq!(SlotBundle::Line(2).tensor(p).unwrap(), SlotBundle::Pair(S, S, 1));
        assert_eq!(SlotBundle::Wedge(1, 0).tensor(SlotBundle::Line(-1)).unwrap(), SlotBundle::Wedge(1, -1));
        assert!(SlotBundle::Wedge(1, 0).tensor(SlotBundle::Wedge(1, 0)).is_err());
        assert!(p.tensor(SlotBundle::Spinor(S, 0)).is_err());
    }
}
