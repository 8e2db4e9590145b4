//! Exact cohomology of decomposable bundles.
//!
//! Factor tables come from Bott's formula on `P^n`, the restriction sequence on
//! `Q_m`, and the spinor sequences; products are assembled by Künneth.

pub mod factor;
pub mod table;

use num_bigint::BigInt;

pub use factor::{
    bott_forms, bott_line, clear_cache, quadric_line, slot_table, spinor_pair, spinor_twist, tangent_wedge,
    FactorKey, SlotBundle,
};
pub use table::{CohomTable, FactorCohom};

use crate::bundle::{BundleExpr, FactorBundle, Term};
use crate::error::{Error, Result};
use crate::space::Space;

fn slot_of(b: FactorBundle) -> Option<SlotBundle> {
    match b {
        FactorBundle::Line(t) => Some(SlotBundle::Line(t)),
        FactorBundle::Spinor(k, t) => Some(SlotBundle::Spinor(k, t)),
        FactorBundle::Wedge(p, t) => Some(SlotBundle::Wedge(p, t)),
        FactorBundle::Psi(..) => None,
    }
}

fn check_arity(e: &BundleExpr, space: &Space) -> Result<()> {
    if e.num_factors() == space.len() {
        Ok(())
    } else {
        Err(Error::Arity { expected: space.len(), found: e.num_factors() })
    }
}

/// Cohomology of the tensor product of some terms; `Ok(None)` if a `ψ` appears.
fn tensor_terms(terms: &[&Term], space: &Space) -> Result<Option<CohomTable>> {
    let mut table: Option<CohomTable> = None;
    for (i, factor) in space.factors().iter().enumerate() {
        let mut slot: Option<SlotBundle> = None;
        for term in terms {
            let Some(b) = slot_of(term.slots[i]) else { return Ok(None) };
            slot = Some(match slot {
                None => b,
                Some(s) => s.tensor(b)?,
            });
        }
        let f = slot_table(*factor, slot.expect("at least one term"))?;
        table = Some(match table {
            None => f,
            Some(t) => t.kunneth(&f),
        });
    }
    let mult: u64 = terms.iter().map(|t| t.mult).product();
    Ok(table.map(|t| t.scale(mult)))
}

/// `h^•(X, E)`; symbolic when `E` contains a `ψ` summand.
pub fn cohomology(e: &BundleExpr, space: &Space) -> Result<CohomTable> {
    check_arity(e, space)?;
    let mut total = CohomTable::zero(space.dim());
    for term in e.terms() {
        match tensor_terms(&[term], space)? {
            Some(t) => total = total.add(&t),
            None => return Ok(CohomTable::symbolic()),
        }
    }
    Ok(total)
}

/// `h^•(X, A ⊗ B)` with slotwise tensor reduction.
pub fn tensor_cohomology(a: &BundleExpr, b: &BundleExpr, space: &Space) -> Result<CohomTable> {
    check_arity(a, space)?;
    check_arity(b, space)?;
    let mut total = CohomTable::zero(space.dim());
    for ta in a.terms() {
        for tb in b.terms() {
            match tensor_terms(&[ta, tb], space)? {
                Some(t) => total = total.add(&t),
                None => return Ok(CohomTable::symbolic()),
            }
        }
    }
    Ok(total)
}

/// `ext^•(A, B) = h^•(A^∨ ⊗ B)`.
pub fn ext(a: &BundleExpr, b: &BundleExpr, space: &Space) -> Result<CohomTable> {
    if a.is_symbolic() || b.is_symbolic() {
        check_arity(a, space)?;
        check_arity(b, space)?;
        return Ok(CohomTable::symbolic());
    }
    tensor_cohomology(&a.dual(space)?, b, space)
}

pub fn euler_char(e: &BundleExpr, space: &Space) -> Result<BigInt> {
    let t = cohomology(e, space)?;
    if t.is_symbolic() {
        return Err(Error::Symbolic("Euler characteristic of a psi bundle".into()));
    }
    Ok(t.euler_char())
}
