//! Exponent splits for the bands where `f_{a,q}` reduces to a short sum
//! `Σ_j b_j X^{q^j - 2}` (`1 <= j <= e`). A term `∏ (b_j X^{q^j-2})^{c_j}` of
//! `f^N` lands on `X^{q^e-1}` exactly when `Σ c_j = N` and
//! `Σ c_j (q^j - 2) ≡ 0 (mod q^e - 1)`.

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::error::{Error, Result};

/// The three split systems with known solution sets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SupportSystem {
    /// Positions `1..=e-1`, `Σ c_j = q² - 1`.
    SquareMinusOne,
    /// Positions `1..=e`, `Σ c_j = q - 1`.
    QMinusOne,
    /// Positions `k..=e`, `Σ c_j = q^k - 1`.
    PowerMinusOne { k: u32 },
}

impl SupportSystem {
    /// First and last position carrying a variable.
    pub fn positions(self, e: u32) -> (u32, u32) {
        match self {
            SupportSystem::SquareMinusOne => (1, e - 1),
            SupportSystem::QMinusOne => (1, e),
            SupportSystem::PowerMinusOne { k } => (k, e),
        }
    }

    pub fn total(self, q: u64) -> u64 {
        match self {
            SupportSystem::SquareMinusOne => q * q - 1,
            SupportSystem::QMinusOne => q - 1,
            SupportSystem::PowerMinusOne { k } => q.pow(k) - 1,
        }
    }

    fn check(self, q: u64, e: u32) -> Result<()> {
        let bad = |m: String| Err(Error::Precondition(m));
        if q < 3 {
            return bad(format!("q = {q} must be at least 3"));
        }
        match self {
            SupportSystem::SquareMinusOne if e < 3 => bad(format!("e = {e} must be at least 3")),
            SupportSystem::QMinusOne if e < 2 => bad(format!("e = {e} must be at least 2")),
            SupportSystem::PowerMinusOne { k } if k < 1 || k >= e => {
                bad(format!("need 1 <= k < e (k = {k}, e = {e})"))
            }
            _ => Ok(()),
        }
    }
}

/// One solution `(c_first, …, c_last)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct SolutionVector {
    pub first: u32,
    pub values: Vec<u64>,
}

impl SolutionVector {
    /// `c_j` for a position `j`, zero outside the support.
    pub fn get(&self, j: u32) -> u64 {
        j.checked_sub(self.first)
            .and_then(|i| self.values.get(i as usize))
            .copied()
            .unwrap_or(0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolveMode {
    /// The known solution lists.
    Closed,
    /// Exhaustive search over all splits of the total.
    Brute,
}

/// The solutions of `system` in increasing lexicographic order.
pub fn solve_support_system(
    system: SupportSystem,
    q: u64,
    e: u32,
    mode: SolveMode,
    budget: u64,
) -> Result<Vec<SolutionVector>> {
    system.check(q, e)?;
    let (first, last) = system.positions(e);
    let len = (last - first + 1) as usize;
    let mut out = match mode {
        SolveMode::Closed => closed_solutions(system, q, e)
            .into_iter()
            .map(|values| {
                debug_assert_eq!(values.len(), len);
                SolutionVector { first, values }
            })
            .collect(),
        SolveMode::Brute => splits_hitting_top(q, e, first, last, system.total(q), budget)?,
    };
    out.sort();
    Ok(out)
}

fn closed_solutions(system: SupportSystem, q: u64, e: u32) -> Vec<Vec<u64>> {
    let len = |n: u32| vec![0u64; n as usize];
    match system {
        SupportSystem::SquareMinusOne => {
            let mut two = len(e - 1);
            two[0] = 2 * q - 1;
            *two.last_mut().unwrap() = q * q - 2 * q;
            if e == 3 {
                return vec![two];
            }
            let mut one = len(e - 1);
            one[0] = q - 1;
            if e == 4 {
                one[1] = q + 1;
            } else {
                one[1] = 1;
                one[e as usize - 3] = q;
            }
            *one.last_mut().unwrap() = q * q - 2 * q - 1;
            vec![one, two]
        }
        SupportSystem::QMinusOne => {
            let mut v = len(e);
            v[0] = 1;
            *v.last_mut().unwrap() += q - 2;
            vec![v]
        }
        SupportSystem::PowerMinusOne { k } => {
            let mut v = len(e - k + 1);
            v[0] = 1;
            *v.last_mut().unwrap() += q.pow(k) - 2;
            vec![v]
        }
    }
}

/// Every `(c_first, …, c_last)` with `Σ c_j = total` and
/// `Σ c_j (q^j - 2) ≡ 0 (mod q^e - 1)`.
pub(crate) fn splits_hitting_top(
    q: u64,
    e: u32,
    first: u32,
    last: u32,
    total: u64,
    budget: u64,
) -> Result<Vec<SolutionVector>> {
    let modulus = BigUint::from(q)
        .pow(e)
        .to_u64()
        .filter(|m| *m < u64::MAX / 2)
        .ok_or_else(|| Error::Overflow(format!("q^e for q = {q}, e = {e}")))?
        - 1;
    let m = modulus as u128;
    let weights: Vec<u128> = (first..=last)
        .map(|j| (q as u128).pow(j).wrapping_sub(2) % m)
        .map(|w| (w + m) % m)
        .collect();
    let mut out = Vec::new();
    let mut cur = vec![0u64; weights.len()];
    let mut visited = 0u64;
    split_dfs(
        0,
        total,
        0,
        &weights,
        m,
        &mut cur,
        &mut out,
        &mut visited,
        budget,
    )?;
    Ok(out
        .into_iter()
        .map(|values| SolutionVector { first, values })
        .collect())
}

#[allow(clippy::too_many_arguments)]
fn split_dfs(
    i: usize,
    rest: u64,
    acc: u128,
    weights: &[u128],
    m: u128,
    cur: &mut Vec<u64>,
    out: &mut Vec<Vec<u64>>,
    visited: &mut u64,
    budget: u64,
) -> Result<()> {
    *visited += 1;
    if *visited > budget {
        return Err(Error::BudgetExceeded { budget });
    }
    if i + 1 == weights.len() {
        if (acc + rest as u128 * weights[i]).is_multiple_of(m) {
            cur[i] = rest;
            out.push(cur.clone());
            cur[i] = 0;
        }
        return Ok(());
    }
    for c in 0..=rest {
        cur[i] = c;
        let next = (acc + c as u128 * weights[i]) % m;
        split_dfs(i + 1, rest - c, next, weights, m, cur, out, visited, budget)?;
    }
    cur[i] = 0;
    Ok(())
}

/// `b_j mod p` for `j = 1..=e` in `f_{a,q} ≡ Σ_j b_j X^{q^j - 2}`: the number
/// of `i ∈ [1, a]` with `i ≡ j (mod e)`.
pub fn reduced_coefficients(p: u64, e: u32, a: u64) -> Vec<u64> {
    let e = e as u64;
    (1..=e)
        .map(|j| {
            let count = if j > a { 0 } else { (a - j) / e + 1 };
            count % p
        })
        .collect()
}
