//! `C(N)` as a sum of products of multinomial coefficients over the ways to
//! split each power of a Frobenius-shifted sum among its `a` terms.
//!
//! For a plan with `t` leading terms, only the last `r`-term (of multiple
//! `M = 2^{t-1} r`, terms weighted `q^{e-ta+i-1}`) and the `s`-term (terms
//! weighted `q^{i-1}`) can split freely; the splits must hit the borrow
//! target exactly. The reduced variant drops the `r`-term.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use super::support::{reduced_coefficients, splits_hitting_top};
use super::{CNResult, CaseParams, Method, Subcase};
use crate::combinat::LucasTable;
use crate::digits::{BorrowVariant, ExponentPlan};
use crate::error::{Error, Result};

/// Default cap on visited search states.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

/// `C(N)` by the multinomial sum, for any dispatched case that has one.
pub fn cn_multinomial_sum(params: &CaseParams, budget: u64) -> Result<CNResult> {
    match params.subcase {
        Subcase::SquareMinusOne | Subcase::QMinusOne { .. } | Subcase::PowerMinusOne { .. } => {
            let n = params.n()?.expect("these subcases fix N");
            let n = n
                .to_u64()
                .ok_or_else(|| Error::Overflow(format!("N = {n}")))?;
            cn_support_sum(params.p, params.q, params.e, params.a, n, budget)
        }
        Subcase::Generic { .. } | Subcase::Table { .. } => {
            let plan = params.plan()?.expect("plan-based subcase");
            cn_multinomial_plan(&plan, params.p, budget)
        }
        _ => Err(Error::NotApplicable(format!(
            "{:?} has no multinomial sum",
            params.subcase
        ))),
    }
}

struct Group {
    total: BigUint,
    weights: Vec<BigUint>,
}

/// The multinomial sum for an exponent plan.
pub fn cn_multinomial_plan(plan: &ExponentPlan, p: u64, budget: u64) -> Result<CNResult> {
    let table = LucasTable::new(p)?;
    let q = BigUint::from(plan.q);
    let (e, a, t) = (plan.e, plan.a, plan.template.terms());
    let s_group = Group {
        total: plan.s.clone(),
        weights: (0..a).map(|i| q.pow(i)).collect(),
    };
    let mut visited = 0u64;
    let mut value = 0u64;
    match plan.variant {
        BorrowVariant::Reduced => {
            enumerate_group(&s_group, &plan.s2, &mut visited, budget, &mut |alpha| {
                value = (value + table.multinomial_big(alpha)) % p;
            })?;
        }
        BorrowVariant::Full => {
            let shift = e - t * a;
            let r_group = Group {
                total: BigUint::from(plan.last_term_multiple()),
                weights: (0..a).map(|i| q.pow(shift + i)).collect(),
            };
            let target = plan.s1.as_ref().expect("full variant has S1");
            // every split of the r-term leaves a remainder for the s-term
            let mut outer: Vec<(BigUint, u64)> = Vec::new();
            enumerate_all(
                &r_group,
                target,
                &mut visited,
                budget,
                &mut |alpha, used| {
                    let m = table.multinomial_big(alpha);
                    if m != 0 {
                        outer.push((target - used, m));
                    }
                },
            )?;
            for (rest, m) in outer {
                let mut inner = 0u64;
                enumerate_group(&s_group, &rest, &mut visited, budget, &mut |alpha| {
                    inner = (inner + table.multinomial_big(alpha)) % p;
                })?;
                value = (value + m * inner) % p;
            }
        }
    }
    Ok(CNResult {
        n: plan.n.clone(),
        p,
        value,
        method: Method::Multinomial,
        plan: Some(plan.clone()),
        claimed: None,
    })
}

fn tick(visited: &mut u64, budget: u64) -> Result<()> {
    *visited += 1;
    if *visited > budget {
        Err(Error::BudgetExceeded { budget })
    } else {
        Ok(())
    }
}

/// Every split of `group.total` whose weighted sum is at most `cap`,
/// reported with that weighted sum.
fn enumerate_all(
    group: &Group,
    cap: &BigUint,
    visited: &mut u64,
    budget: u64,
    emit: &mut dyn FnMut(&[BigUint], &BigUint),
) -> Result<()> {
    let n = group.weights.len();
    let mut cur = vec![BigUint::zero(); n];
    #[allow(clippy::too_many_arguments)]
    fn rec(
        i: usize,
        rest: &BigUint,
        used: &BigUint,
        group: &Group,
        cap: &BigUint,
        cur: &mut Vec<BigUint>,
        visited: &mut u64,
        budget: u64,
        emit: &mut dyn FnMut(&[BigUint], &BigUint),
    ) -> Result<()> {
        tick(visited, budget)?;
        let w = &group.weights[i];
        if i + 1 == group.weights.len() {
            let used = used + rest * w;
            if &used <= cap {
                cur[i] = rest.clone();
                emit(cur, &used);
                cur[i] = BigUint::zero();
            }
            return Ok(());
        }
        let mut x = BigUint::zero();
        while &x <= rest {
            let next_used = used + &x * w;
            if &next_used > cap {
                break;
            }
            cur[i] = x.clone();
            rec(
                i + 1,
                &(rest - &x),
                &next_used,
                group,
                cap,
                cur,
                visited,
                budget,
                emit,
            )?;
            x += 1u32;
        }
        cur[i] = BigUint::zero();
        Ok(())
    }
    rec(
        0,
        &group.total,
        &BigUint::zero(),
        group,
        cap,
        &mut cur,
        visited,
        budget,
        emit,
    )
}

/// Every split `(α_1, …, α_n)` of `group.total` with `Σ α_i w_i = target`,
/// where the weights increase. Terms are chosen from the largest weight down,
/// keeping `T·w_1 <= V <= T·w_i` for the `T` copies and value `V` left.
fn enumerate_group(
    group: &Group,
    target: &BigUint,
    visited: &mut u64,
    budget: u64,
    emit: &mut dyn FnMut(&[BigUint]),
) -> Result<()> {
    let n = group.weights.len();
    let w = &group.weights;
    let (t, v) = (&group.total, target);
    if t * &w[0] > *v || t * &w[n - 1] < *v {
        return Ok(());
    }
    let mut cur = vec![BigUint::zero(); n];
    #[allow(clippy::too_many_arguments)]
    fn rec(
        i: usize,
        t: &BigUint,
        v: &BigUint,
        w: &[BigUint],
        cur: &mut Vec<BigUint>,
        visited: &mut u64,
        budget: u64,
        emit: &mut dyn FnMut(&[BigUint]),
    ) -> Result<()> {
        tick(visited, budget)?;
        if i == 0 {
            if t * &w[0] == *v {
                cur[0] = t.clone();
                emit(cur);
                cur[0] = BigUint::zero();
            }
            return Ok(());
        }
        let (wi, wl) = (&w[i], &w[i - 1]);
        // after taking x at w_i: (T - x) w_{i-1} >= V - x w_i and (T - x) w_0 <= V - x w_i
        let lo = if *v > t * wl {
            let num = v - t * wl;
            let den = wi - wl;
            (&num + &den - 1u32) / den
        } else {
            BigUint::zero()
        };
        let slack = v - t * &w[0];
        let hi_w = (&slack) / (wi - &w[0]);
        let hi = if &hi_w < t { hi_w } else { t.clone() };
        let mut x = lo;
        while x <= hi {
            cur[i] = x.clone();
            rec(
                i - 1,
                &(t - &x),
                &(v - &x * wi),
                w,
                cur,
                visited,
                budget,
                emit,
            )?;
            x += 1u32;
        }
        cur[i] = BigUint::zero();
        Ok(())
    }
    rec(n - 1, t, v, w, &mut cur, visited, budget, emit)
}

/// `C(N)` for the reduced form `Σ_j b_j X^{q^j-2}` by summing
/// `N!/∏c_j! · ∏ b_j^{c_j}` over the splits that land on `X^{q^e-1}`.
pub fn cn_support_sum(p: u64, q: u64, e: u32, a: u64, n: u64, budget: u64) -> Result<CNResult> {
    let table = LucasTable::new(p)?;
    let b = reduced_coefficients(p, e, a);
    let support: Vec<u32> = (1..=e).filter(|&j| b[j as usize - 1] != 0).collect();
    let order = BigUint::from(q).pow(e) - BigUint::one();
    if n == 0 || BigUint::from(n) >= order {
        return Err(Error::ExponentOutOfRange { n: n.into() });
    }
    let mut value = 0u64;
    if let (Some(&first), Some(&last)) = (support.first(), support.last()) {
        // zero coefficients inside the span kill any split that uses them
        for sol in splits_hitting_top(q, e, first, last, n, budget)? {
            let mut term = table.multinomial(&sol.values);
            for (i, &c) in sol.values.iter().enumerate() {
                if c > 0 {
                    let bj = b[first as usize + i - 1];
                    term = (term as u128 * pow_mod(bj, c, p) as u128 % p as u128) as u64;
                }
            }
            value = (value + term) % p;
        }
    }
    Ok(CNResult {
        n: BigUint::from(n),
        p,
        value,
        method: Method::Multinomial,
        plan: None,
        claimed: None,
    })
}

fn pow_mod(b: u64, mut e: u64, m: u64) -> u64 {
    let (mut acc, mut b) = (1u128 % m as u128, b as u128 % m as u128);
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m as u128;
        }
        b = b * b % m as u128;
        e >>= 1;
    }
    acc as u64
}
