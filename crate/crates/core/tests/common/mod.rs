//! Random inputs and independent oracles shared by the integration suites.
#![allow(dead_code)]

use blockcoh::collections::{preset_collection, Preset};
use blockcoh::{BundleExpr, Factor, FactorBundle, FactorKind, PsiRanks, Space, SpinorKind, Term};
use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;
pub type Rng8 = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng8 {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn sp(s: &str) -> Space {
    s.parse().unwrap()
}

/// A space with `d <= max_d` built from `P1, P2, P3, Q2, Q3, Q4`.
pub fn random_space(r: &mut Rng8, max_d: usize) -> Space {
    let pool = [
        (FactorKind::Proj, 1),
        (FactorKind::Proj, 2),
        (FactorKind::Proj, 3),
        (FactorKind::Quadric, 2),
        (FactorKind::Quadric, 3),
        (FactorKind::Quadric, 4),
    ];
    loop {
        let k = r.gen_range(1..=3);
        let spec: Vec<_> = (0..k).map(|_| *pool.choose(r).unwrap()).collect();
        let s = Space::make(&spec).unwrap();
        if s.dim() <= max_d {
            return s;
        }
    }
}

pub fn random_slot(r: &mut Rng8, f: Factor, lo: i64, hi: i64, wedges: bool) -> FactorBundle {
    let t = r.gen_range(lo..=hi);
    match f.kind {
        FactorKind::Proj if wedges && f.dim >= 2 && r.gen_bool(0.3) => FactorBundle::Wedge(r.gen_range(1..f.dim), t),
        FactorKind::Proj => FactorBundle::Line(t),
        FactorKind::Quadric if r.gen_bool(0.5) => FactorBundle::Spinor(*SpinorKind::all_on(f.dim).choose(r).unwrap(), t),
        FactorKind::Quadric => FactorBundle::Line(t),
    }
}

/// One to three terms with slot twists in `[lo, hi]`.
pub fn random_bundle(r: &mut Rng8, s: &Space, lo: i64, hi: i64) -> BundleExpr {
    let n = r.gen_range(1..=3);
    let terms = (0..n)
        .map(|_| {
            let slots = s.factors().iter().map(|&f| random_slot(r, f, lo, hi, true)).collect();
            Term::new(r.gen_range(1..=2), slots)
        })
        .collect();
    BundleExpr::new(terms, s).unwrap()
}

pub fn binom(n: i64, k: i64) -> BigInt {
    if k < 0 || n < k || n < 0 {
        return BigInt::from(0);
    }
    let mut acc = BigInt::from(1);
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Bott's formula for `h^i(P^n, O(t))`, written out from the definition.
pub fn oracle_proj_line(n: i64, t: i64) -> Vec<BigInt> {
    let mut h = vec![BigInt::from(0); n as usize + 1];
    if t >= 0 {
        h[0] = binom(n + t, n);
    } else if t <= -n - 1 {
        h[n as usize] = binom(-t - 1, n);
    }
    h
}

/// `h^i(Q_m, O(t))` from `0 -> O_P(t-2) -> O_P(t) -> O_Q(t) -> 0` on `P^{m+1}`.
pub fn oracle_quadric_line(m: i64, t: i64) -> Vec<BigInt> {
    let mut h = vec![BigInt::from(0); m as usize + 1];
    if t >= 0 {
        h[0] = binom(m + 1 + t, m + 1) - binom(m + 1 + t - 2, m + 1);
    } else if t <= -m {
        // Serre duality: h^m(O(t)) = h^0(O(-t-m))
        let s = -t - m;
        h[m as usize] = binom(m + 1 + s, m + 1) - binom(m + 1 + s - 2, m + 1);
    }
    h
}

/// `χ(P^n, Ω^p(t))` from the Euler sequences
/// `0 -> Ω^p -> ∧^p O(-1)^{n+1} -> Ω^{p-1} -> 0`.
pub fn oracle_chi_forms(n: i64, p: i64, t: i64) -> BigInt {
    let chi_o = |s: i64| -> BigInt {
        // χ(O(s)) = C(n+s, n) as a polynomial in s
        let mut acc = BigInt::from(1);
        for i in 1..=n {
            acc *= BigInt::from(s + i);
        }
        let mut fact = BigInt::from(1);
        for i in 1..=n {
            fact *= BigInt::from(i);
        }
        acc / fact
    };
    let mut acc = BigInt::from(0);
    for k in 0..=p {
        let sign = if (p - k) % 2 == 0 { 1 } else { -1 };
        acc += BigInt::from(sign) * binom(n + 1, k) * chi_o(t - k);
    }
    acc
}

/// Ranks of the dual members of the spinor-first collection on `Q_m`, from the
/// Euler pairing alone: `'E_k` is the class `x` with `χ(x, E_i) = (-1)^k` when
/// `E_i` is the member of block `m - k` and `0` otherwise. The Gram matrix of
/// an exceptional collection is unitriangular, so `x` is solved exactly.
pub fn dual_ranks_by_gram(m: u32) -> Vec<i64> {
    let s = Space::single(Factor::quadric(m).unwrap());
    let c = preset_collection(&s, Preset::SpinorFirst).unwrap();
    let members: Vec<(usize, BundleExpr)> = c.members().map(|(b, mm)| (b, mm.bundle.clone())).collect();
    let n = members.len();
    let mut gram = vec![vec![BigInt::from(0); n]; n];
    for (l, (_, a)) in members.iter().enumerate() {
        for (i, (_, b)) in members.iter().enumerate() {
            gram[l][i] = blockcoh::ext(a, b, &s).unwrap().euler_char();
        }
    }
    let ranks: Vec<i64> = members
        .iter()
        .map(|(_, e)| e.rank(&s, &PsiRanks::new()).unwrap() as i64)
        .collect();
    let mut out = Vec::new();
    for k in 1..m as usize {
        // one dual member per block for 1 <= k <= m-1
        let target_block = m as usize - k;
        let v: Vec<BigInt> = members
            .iter()
            .map(|(b, _)| if *b == target_block { BigInt::from(if k % 2 == 0 { 1 } else { -1 }) } else { BigInt::from(0) })
            .collect();
        // solve Σ_l c_l gram[l][i] = v_i; gram[l][i] = 0 for l after i
        let mut coef = vec![BigInt::from(0); n];
        for i in 0..n {
            let mut rest = v[i].clone();
            for l in 0..i {
                rest -= &coef[l] * &gram[l][i];
            }
            assert_eq!(gram[i][i], BigInt::from(1), "exceptional diagonal");
            coef[i] = rest;
        }
        let rank: BigInt = coef.iter().zip(&ranks).map(|(c, r)| c * BigInt::from(*r)).sum();
        out.push(i64::try_from(rank).unwrap());
    }
    out
}
