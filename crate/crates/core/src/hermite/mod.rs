//! The Hermite coefficient `C(N)`: the coefficient of `X^{q^e-1}` in
//! `f_{a,q}^N mod (X^{q^e} - X)`. A single `N` with `0 < N < q^e - 1` and
//! `C(N) ≠ 0` shows that `f_{a,q}` does not permute `F_{q^e}`.
//!
//! Four independent routes are provided: a power sum over the whole field,
//! a multinomial sum over exponent splits, a borrow-set sum of window
//! coefficients, and closed forms. [`dispatch_case`] picks the exponent
//! family that applies to a given `(q, e, a)`.

mod borrow;
mod brute;
mod closed;
mod multinomial;
mod support;

pub use borrow::{borrow_set_terms, cn_borrow_set, cn_borrow_set_plan, BorrowTerm};
pub use brute::{cn_bruteforce, cn_bruteforce_capped};
pub use closed::{
    cn_closed_form, corollary_table, format_factors, generic_exact, generic_plan, generic_value,
    table_rows, CorollaryRange, CorollaryTable, CorollaryValue, QMatch, TableRow,
};
pub use multinomial::{cn_multinomial_plan, cn_multinomial_sum, cn_support_sum, DEFAULT_BUDGET};
pub use support::{
    reduced_coefficients, solve_support_system, SolutionVector, SolveMode, SupportSystem,
};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use serde::Serialize;

use crate::digits::{build_plan, ExponentPlan, Template};
use crate::error::{Error, Result};
use crate::ffield::is_prime;
use crate::serde_big;

/// Where `a` sits relative to `e`; each band calls for a different argument.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Range {
    /// `2 <= a <= e/4`: point-count bound.
    QuarterOrLess,
    /// `e/4 < a < e/3`.
    QuarterToThird,
    /// `e/3 < a < e/2`.
    ThirdToHalf,
    /// `e/2 < a < e`.
    HalfToOne,
    /// `e < a < (p-1)e`: the coefficients wrap around to `u` or `u + 1`.
    Wrapped,
    /// `(p-1)e < a <= pe - 2`: the coefficients wrap to `-1` or `0`.
    NearTop,
}

impl Range {
    /// The band of `a`, assuming `a >= 2` and `a` is off the band edges.
    pub fn of(p: u64, e: u32, a: u64) -> Range {
        let e = e as u64;
        if 4 * a <= e {
            Range::QuarterOrLess
        } else if 3 * a < e {
            Range::QuarterToThird
        } else if 2 * a < e {
            Range::ThirdToHalf
        } else if a < e {
            Range::HalfToOne
        } else if a < (p - 1) * e {
            Range::Wrapped
        } else {
            Range::NearTop
        }
    }

    pub fn template(self) -> Option<Template> {
        match self {
            Range::QuarterToThird => Some(Template::ThreeTerm),
            Range::ThirdToHalf => Some(Template::TwoTerm),
            Range::HalfToOne => Some(Template::OneTerm),
            _ => None,
        }
    }
}

/// How `C(N)` is obtained for a case.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Subcase {
    /// No `N` is used; the point-count bound applies instead.
    CurveBound,
    /// Free-parameter family with `r = q - 2u`.
    Generic { u: u64 },
    /// A fixed `(r, s)` for this `q` and geometry.
    Table { row: &'static TableRow },
    /// `e = a + 1`, `N = q² - 1`.
    SquareMinusOne,
    /// `a = ue + v`, `N = q - 1`.
    QMinusOne { u: u64, v: u64 },
    /// `a + 1 = (p-1)e + k`, `N = q^k - 1`.
    PowerMinusOne { k: u32 },
    /// Neither a free parameter nor a fixed row applies.
    Uncovered,
}

/// A dispatched `(q, e, a)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CaseParams {
    pub p: u64,
    pub k: u32,
    pub q: u64,
    pub e: u32,
    pub a: u64,
    pub range: Range,
    pub subcase: Subcase,
}

impl CaseParams {
    pub fn template(&self) -> Option<Template> {
        self.range.template()
    }

    /// The exponent plan for the generic and fixed-row subcases.
    pub fn plan(&self) -> Result<Option<ExponentPlan>> {
        let Some(template) = self.template() else {
            return Ok(None);
        };
        let a = self.a as u32;
        match &self.subcase {
            Subcase::Generic { u } => generic_plan(template, self.q, self.e, a, *u).map(Some),
            Subcase::Table { row } => {
                let r = (row.r)(self.q);
                let s = (row.s)(self.q, self.e, a);
                build_plan(template, self.q, self.e, a, r, &s).map(Some)
            }
            _ => Ok(None),
        }
    }

    /// `N` for this case, if it uses one.
    pub fn n(&self) -> Result<Option<BigUint>> {
        let q = BigUint::from(self.q);
        Ok(match &self.subcase {
            Subcase::SquareMinusOne => Some(&q * &q - 1u32),
            Subcase::QMinusOne { .. } => Some(q - 1u32),
            Subcase::PowerMinusOne { k } => Some(q.pow(*k) - 1u32),
            _ => self.plan()?.map(|p| p.n),
        })
    }
}

/// Which route produced a value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Brute,
    Multinomial,
    BorrowSet,
    ClosedForm,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Brute => "brute",
            Method::Multinomial => "multinomial",
            Method::BorrowSet => "borrow-set",
            Method::ClosedForm => "closed-form",
        }
    }
}

/// `C(N) mod p` together with how it was obtained.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CNResult {
    #[serde(with = "serde_big")]
    pub n: BigUint,
    pub p: u64,
    /// `C(N)` as a residue in `[0, p)`.
    pub value: u64,
    pub method: Method,
    pub plan: Option<ExponentPlan>,
    /// The integer a closed form evaluates to before reduction mod `p`.
    #[serde(with = "serde_big::signed_option")]
    pub claimed: Option<BigInt>,
}

/// `q = p^k`, rejecting overflow.
pub fn prime_power(p: u64, k: u32) -> Result<u64> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if k == 0 {
        return Err(Error::BadDegree { k, e: 1 });
    }
    p.checked_pow(k)
        .ok_or_else(|| Error::Overflow(format!("{p}^{k}")))
}

/// Classifies `(q = p^k, e, a)` into its band and picks the subcase.
pub fn dispatch_case(p: u64, k: u32, e: u32, a: u64) -> Result<CaseParams> {
    prime_power(p, k)?;
    if p == 2 {
        return Err(Error::NotDispatchable("even characteristic".into()));
    }
    if e < 2 {
        return Err(Error::Precondition(format!("e = {e} must be at least 2")));
    }
    let pe = p * e as u64;
    if a < 1 || a > pe - 2 {
        return Err(Error::Precondition(format!(
            "a = {a} must lie in [1, {}]",
            pe - 2
        )));
    }
    if a == 1 {
        return Err(Error::NotDispatchable(
            "a = 1 gives the monomial X^(q-2)".into(),
        ));
    }
    let g = a.gcd(&pe);
    if g != 1 {
        return Err(Error::KernelNontrivial { gcd: g });
    }
    classify_case(p, k, e, a)
}

/// Like [`dispatch_case`] but without the `gcd(a, pe) = 1` requirement:
/// `C(N)` is still defined when the linearized part has a kernel. Band
/// edges (`e ∈ {2a, 3a}` or `e | a`) are rejected.
pub fn classify_case(p: u64, k: u32, e: u32, a: u64) -> Result<CaseParams> {
    let q = prime_power(p, k)?;
    if p == 2 {
        return Err(Error::NotDispatchable("even characteristic".into()));
    }
    if e < 2 {
        return Err(Error::Precondition(format!("e = {e} must be at least 2")));
    }
    let pe = p * e as u64;
    if a < 2 || a > pe - 2 {
        return Err(Error::Precondition(format!(
            "a = {a} must lie in [2, {}]",
            pe - 2
        )));
    }
    let el = e as u64;
    if el == 2 * a || el == 3 * a || a.is_multiple_of(el) {
        return Err(Error::NotDispatchable(format!(
            "a = {a} sits on a band edge for e = {e}"
        )));
    }
    let range = Range::of(p, e, a);
    let subcase = match range {
        Range::QuarterOrLess => Subcase::CurveBound,
        Range::Wrapped => {
            let u = (a - 1) / e as u64;
            Subcase::QMinusOne {
                u,
                v: a - u * e as u64,
            }
        }
        Range::NearTop => Subcase::PowerMinusOne {
            k: (a + 1 - (p - 1) * e as u64) as u32,
        },
        _ => {
            let template = range.template().expect("middle bands have templates");
            let t = template.terms() as u64;
            let gap = e as u64 - t * a;
            if gap == 1 && template == Template::OneTerm {
                Subcase::SquareMinusOne
            } else {
                let generic = if gap >= 2 {
                    closed::pick_generic(template, q, p)
                } else {
                    None
                };
                match generic {
                    Some(u) => Subcase::Generic { u },
                    None => match closed::find_row(template, q, e, a as u32) {
                        Some(row) => Subcase::Table { row },
                        None => Subcase::Uncovered,
                    },
                }
            }
        }
    };
    Ok(CaseParams {
        p,
        k,
        q,
        e,
        a,
        range,
        subcase,
    })
}

/// `C(N)` by every applicable route except the field enumeration.
pub fn cn_all_symbolic(params: &CaseParams, budget: u64) -> Vec<(Method, Result<CNResult>)> {
    vec![
        (Method::ClosedForm, cn_closed_form(params)),
        (Method::BorrowSet, cn_borrow_set(params)),
        (Method::Multinomial, cn_multinomial_sum(params, budget)),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bands() {
        let c = dispatch_case(3, 1, 7, 2).unwrap();
        assert_eq!(c.range, Range::QuarterToThird);
        assert!(matches!(c.subcase, Subcase::Table { row } if row.tag == "q=3, e=3a+1, a=2"));
        let c = dispatch_case(3, 2, 5, 4).unwrap();
        assert_eq!(
            (c.range, &c.subcase),
            (Range::HalfToOne, &Subcase::SquareMinusOne)
        );
        let c = dispatch_case(3, 1, 21, 5).unwrap();
        assert_eq!(c.subcase, Subcase::CurveBound);
        let c = dispatch_case(3, 1, 4, 5).unwrap();
        assert_eq!(c.subcase, Subcase::QMinusOne { u: 1, v: 1 });
        let c = dispatch_case(3, 1, 5, 11).unwrap();
        assert_eq!(c.subcase, Subcase::PowerMinusOne { k: 2 });
    }

    #[test]
    fn classify_allows_kernel() {
        let c = classify_case(3, 1, 10, 3).unwrap();
        assert_eq!(c.range, Range::QuarterToThird);
        assert_eq!(
            classify_case(3, 1, 4, 3).unwrap().subcase,
            Subcase::SquareMinusOne
        );
        assert!(matches!(
            classify_case(3, 1, 9, 3),
            Err(Error::NotDispatchable(_))
        ));
        assert!(matches!(
            classify_case(5, 1, 3, 12),
            Err(Error::NotDispatchable(_))
        ));
    }

    #[test]
    fn rejected_inputs() {
        assert_eq!(
            dispatch_case(3, 1, 2, 3).unwrap_err(),
            Error::KernelNontrivial { gcd: 3 }
        );
        assert!(matches!(
            dispatch_case(3, 1, 1, 2),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(
            dispatch_case(3, 1, 4, 1),
            Err(Error::NotDispatchable(_))
        ));
        assert!(matches!(
            dispatch_case(2, 1, 5, 3),
            Err(Error::NotDispatchable(_))
        ));
        assert!(matches!(
            dispatch_case(3, 1, 4, 11),
            Err(Error::Precondition(_))
        ));
        assert_eq!(dispatch_case(4, 1, 4, 3).unwrap_err(), Error::NotPrime(4));
    }

    #[test]
    fn generic_preferred_when_nonzero() {
        let c = dispatch_case(7, 2, 11, 3).unwrap();
        assert_eq!(c.subcase, Subcase::Generic { u: 1 });
        let c = dispatch_case(5, 2, 11, 3).unwrap();
        assert!(matches!(c.subcase, Subcase::Table { .. }));
    }

    #[test]
    fn wrapped_band_parameters() {
        for (a, u, v) in [(7u64, 1u64, 3u64), (9, 2, 1), (11, 2, 3), (13, 3, 1)] {
            let c = dispatch_case(5, 1, 4, a).unwrap();
            assert_eq!(c.subcase, Subcase::QMinusOne { u, v });
        }
    }
}
