//! `C(N)` as a sum, over the borrow set of the plan's target, of coefficients
//! of the window product `∏_j (X_j + ⋯ + X_{j+a-1})^{m_j}`.

use serde::Serialize;

use super::{CNResult, CaseParams, Method};
use crate::coeffx::{extract_in, MonomialTarget, WindowProduct};
use crate::combinat::LucasTable;
use crate::digits::{enumerate_borrow_set, DigitVector, ExponentPlan};
use crate::error::{Error, Result};

/// One member of the borrow set and its window coefficient mod `p`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BorrowTerm {
    pub digits: DigitVector,
    pub coefficient: u64,
}

/// The borrow set of the plan with each member's contribution.
pub fn borrow_set_terms(plan: &ExponentPlan, p: u64) -> Result<Vec<BorrowTerm>> {
    let table = LucasTable::new(p)?;
    let product = WindowProduct::new(plan.a as u64, plan.windows.clone())?;
    Ok(
        enumerate_borrow_set(plan.borrow_target(), plan.target_weight, plan.q)
            .into_iter()
            .map(|digits| {
                let coefficient =
                    extract_in(&table, &product, &MonomialTarget::from_digits(&digits));
                BorrowTerm {
                    digits,
                    coefficient,
                }
            })
            .collect(),
    )
}

pub fn cn_borrow_set_plan(plan: &ExponentPlan, p: u64) -> Result<CNResult> {
    let value = borrow_set_terms(plan, p)?
        .iter()
        .fold(0u64, |acc, t| (acc + t.coefficient) % p);
    Ok(CNResult {
        n: plan.n.clone(),
        p,
        value,
        method: Method::BorrowSet,
        plan: Some(plan.clone()),
        claimed: None,
    })
}

pub fn cn_borrow_set(params: &CaseParams) -> Result<CNResult> {
    match params.plan()? {
        Some(plan) => cn_borrow_set_plan(&plan, params.p),
        None => Err(Error::NotApplicable(format!(
            "{:?} has no borrow-set form",
            params.subcase
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digits::{build_plan, Template};
    use num_bigint::BigUint;

    fn big(n: u64) -> BigUint {
        BigUint::from(n)
    }

    #[test]
    fn worked_three_term_case() {
        let plan = build_plan(Template::ThreeTerm, 3, 7, 2, 1, &big(5)).unwrap();
        assert_eq!(cn_borrow_set_plan(&plan, 3).unwrap().value, 1);
    }

    #[test]
    fn q25_contributions() {
        // e >= 3a + 4: four members, only the second contributes 3
        let (q, a, e) = (25u64, 7u32, 25u32);
        let s = big(14 + 12 * q) + big(q).pow(e - 3 * a);
        let plan = build_plan(Template::ThreeTerm, q, e, a, 3, &s).unwrap();
        let terms = borrow_set_terms(&plan, 5).unwrap();
        assert_eq!(terms.len(), 4);
        let contributions: Vec<u64> = terms.iter().map(|t| t.coefficient).collect();
        assert_eq!(contributions.iter().sum::<u64>() % 5, 3);
        assert_eq!(contributions.iter().filter(|&&c| c != 0).count(), 1);
    }

    #[test]
    fn q81_contributions() {
        let (q, a, e) = (81u64, 5u32, 19u32);
        let s = big(q - 5 + 67 * q);
        let plan = build_plan(Template::ThreeTerm, q, e, a, q - 10, &s).unwrap();
        let terms = borrow_set_terms(&plan, 3).unwrap();
        let mut nonzero: Vec<u64> = terms
            .iter()
            .map(|t| t.coefficient)
            .filter(|&c| c != 0)
            .collect();
        nonzero.sort();
        assert_eq!(terms.len(), 3);
        assert_eq!(nonzero, vec![2, 2]);
    }
}
