//! Coefficients of monomials in products of sliding-window linear forms
//! `∏_j (X_j + X_{j+1} + ⋯ + X_{j+a-1})^{m_j}`.
//!
//! Variables are processed left to right. While handling `X_k` only the
//! factors with `k - a < j <= k` can still emit it, so the state is the
//! vector of undistributed exponents of those factors. Distributing `t_i` of
//! a factor's `rem_i` remaining copies to `X_k` contributes
//! `binom(rem_i, t_i)`; the product over all steps is the multinomial
//! expansion coefficient.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::combinat::{binomial_exact, LucasTable};
use crate::digits::DigitVector;
use crate::error::{Error, Result};

/// `∏_j (X_j + ⋯ + X_{j+width-1})^{m_j}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WindowProduct {
    width: u64,
    factors: BTreeMap<u64, u64>,
}

impl WindowProduct {
    pub fn new(width: u64, factors: BTreeMap<u64, u64>) -> Result<Self> {
        if width == 0 {
            return Err(Error::Precondition(
                "window width must be at least 1".into(),
            ));
        }
        let factors = factors.into_iter().filter(|&(_, m)| m > 0).collect();
        Ok(WindowProduct { width, factors })
    }

    pub fn width(&self) -> u64 {
        self.width
    }

    pub fn factors(&self) -> &BTreeMap<u64, u64> {
        &self.factors
    }

    pub fn degree(&self) -> u64 {
        self.factors.values().sum()
    }

    /// The same product with every window moved `by` places to the right.
    pub fn shifted(&self, by: u64) -> Self {
        WindowProduct {
            width: self.width,
            factors: self.factors.iter().map(|(&j, &m)| (j + by, m)).collect(),
        }
    }
}

/// A monomial `∏_k X_k^{δ_k}`.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct MonomialTarget {
    exponents: BTreeMap<u64, u64>,
}

impl MonomialTarget {
    pub fn new(exponents: BTreeMap<u64, u64>) -> Self {
        MonomialTarget {
            exponents: exponents.into_iter().filter(|&(_, d)| d > 0).collect(),
        }
    }

    pub fn from_digits(d: &DigitVector) -> Self {
        MonomialTarget::new(
            d.digits()
                .iter()
                .enumerate()
                .map(|(k, &v)| (k as u64, v))
                .collect(),
        )
    }

    pub fn exponents(&self) -> &BTreeMap<u64, u64> {
        &self.exponents
    }

    pub fn degree(&self) -> u64 {
        self.exponents.values().sum()
    }

    pub fn shifted(&self, by: u64) -> Self {
        MonomialTarget {
            exponents: self.exponents.iter().map(|(&k, &d)| (k + by, d)).collect(),
        }
    }
}

/// Coefficient arithmetic used by the extraction sweep.
pub trait CoefficientRing {
    type Value: Clone;
    fn zero(&self) -> Self::Value;
    fn one(&self) -> Self::Value;
    fn is_zero(&self, v: &Self::Value) -> bool;
    fn add_assign(&self, acc: &mut Self::Value, v: &Self::Value);
    fn mul(&self, a: &Self::Value, b: &Self::Value) -> Self::Value;
    fn binom(&self, n: u64, k: u64) -> Self::Value;
}

impl CoefficientRing for LucasTable {
    type Value = u64;
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.p()
    }
    fn is_zero(&self, v: &u64) -> bool {
        *v == 0
    }
    fn add_assign(&self, acc: &mut u64, v: &u64) {
        *acc = (*acc + *v) % self.p();
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 * *b as u128) % self.p() as u128) as u64
    }
    fn binom(&self, n: u64, k: u64) -> u64 {
        LucasTable::binom(self, n, k)
    }
}

/// Exact integer coefficients.
#[derive(Debug, Clone, Copy, Default)]
pub struct Integers;

impl CoefficientRing for Integers {
    type Value = BigUint;
    fn zero(&self) -> BigUint {
        BigUint::zero()
    }
    fn one(&self) -> BigUint {
        BigUint::one()
    }
    fn is_zero(&self, v: &BigUint) -> bool {
        v.is_zero()
    }
    fn add_assign(&self, acc: &mut BigUint, v: &BigUint) {
        *acc += v;
    }
    fn mul(&self, a: &BigUint, b: &BigUint) -> BigUint {
        a * b
    }
    fn binom(&self, n: u64, k: u64) -> BigUint {
        binomial_exact(n, k)
    }
}

/// Coefficient of `target` in `prod`, reduced mod `p`.
pub fn extract_coefficient(prod: &WindowProduct, target: &MonomialTarget, p: u64) -> Result<u64> {
    let table = LucasTable::new(p)?;
    Ok(extract_in(&table, prod, target))
}

/// Exact integer coefficient of `target` in `prod`.
pub fn extract_coefficient_exact(prod: &WindowProduct, target: &MonomialTarget) -> BigUint {
    extract_in(&Integers, prod, target)
}

/// Coefficient of `target` in `prod` over the given ring.
pub fn extract_in<R: CoefficientRing>(
    ring: &R,
    prod: &WindowProduct,
    target: &MonomialTarget,
) -> R::Value {
    if prod.degree() != target.degree() {
        return ring.zero();
    }
    let (Some(&first_j), Some(&first_k)) =
        (prod.factors.keys().next(), target.exponents.keys().next())
    else {
        // both empty since the degrees agree
        return ring.one();
    };
    let last_j = *prod.factors.keys().next_back().unwrap();
    let last_k = *target.exponents.keys().next_back().unwrap();
    if first_k < first_j || last_k > last_j + prod.width - 1 {
        return ring.zero();
    }

    // Active factors in increasing j; each state entry is the undistributed
    // exponent of the matching factor.
    let mut active: Vec<u64> = Vec::new();
    let mut states: BTreeMap<Vec<u64>, R::Value> = BTreeMap::from([(Vec::new(), ring.one())]);
    for k in first_j..=last_j + prod.width - 1 {
        if let Some(&m) = prod.factors.get(&k) {
            active.push(k);
            states = states
                .into_iter()
                .map(|(mut s, v)| {
                    s.push(m);
                    (s, v)
                })
                .collect();
        }
        let demand = target.exponents.get(&k).copied().unwrap_or(0);
        // the factor at the front leaves after this step when its window ends at k
        let leaving = active.first().is_some_and(|&j| j + prod.width - 1 == k);

        let mut next: BTreeMap<Vec<u64>, R::Value> = BTreeMap::new();
        for (state, value) in &states {
            let mut take = vec![0u64; state.len()];
            distribute(
                ring,
                state,
                demand,
                0,
                &mut take,
                ring.one(),
                &mut |taken, weight| {
                    let mut rest: Vec<u64> = state.iter().zip(taken).map(|(r, t)| r - t).collect();
                    if leaving {
                        if rest[0] != 0 {
                            return;
                        }
                        rest.remove(0);
                    }
                    let w = ring.mul(value, &weight);
                    if ring.is_zero(&w) {
                        return;
                    }
                    match next.get_mut(&rest) {
                        Some(acc) => ring.add_assign(acc, &w),
                        None => {
                            next.insert(rest, w);
                        }
                    }
                },
            );
        }
        if leaving {
            active.remove(0);
        }
        states = next;
        if states.is_empty() {
            return ring.zero();
        }
    }
    states.remove(&Vec::new()).unwrap_or_else(|| ring.zero())
}

/// Calls `emit` for every way of taking `demand` copies from `state`, at most
/// `state[i]` from slot `i`, with weight `∏ binom(state[i], take[i])`.
fn distribute<R: CoefficientRing>(
    ring: &R,
    state: &[u64],
    demand: u64,
    i: usize,
    take: &mut Vec<u64>,
    weight: R::Value,
    emit: &mut dyn FnMut(&[u64], R::Value),
) {
    if i == state.len() {
        if demand == 0 {
            emit(take, weight);
        }
        return;
    }
    let available: u64 = state[i + 1..].iter().sum();
    let lo = demand.saturating_sub(available);
    let hi = demand.min(state[i]);
    for t in lo..=hi {
        if lo > hi {
            break;
        }
        let w = ring.mul(&weight, &ring.binom(state[i], t));
        if ring.is_zero(&w) {
            continue;
        }
        take[i] = t;
        distribute(ring, state, demand - t, i + 1, take, w, emit);
    }
    take[i] = 0;
}

/// Full expansion of the product as a dense polynomial in
/// `X_0, …, X_{max j + width - 1}`.
fn dense_expand(prod: &WindowProduct) -> HashMap<Vec<u64>, BigUint> {
    let nvars = prod.factors.keys().max().map_or(0, |&j| j + prod.width) as usize;
    let mut poly: HashMap<Vec<u64>, BigUint> = HashMap::from([(vec![0; nvars], BigUint::one())]);
    for (&j, &m) in &prod.factors {
        for _ in 0..m {
            let mut next: HashMap<Vec<u64>, BigUint> = HashMap::new();
            for (mono, c) in &poly {
                for v in j..j + prod.width {
                    let mut mono = mono.clone();
                    mono[v as usize] += 1;
                    *next.entry(mono).or_default() += c;
                }
            }
            poly = next;
        }
    }
    poly
}

/// The coefficient read off the full expansion. Exponential in the degree;
/// a reference for [`extract_coefficient_exact`] on small products.
pub fn dense_coefficient(prod: &WindowProduct, target: &MonomialTarget) -> BigUint {
    let poly = dense_expand(prod);
    let nvars = poly.keys().next().map_or(0, Vec::len);
    if target.exponents.keys().any(|&k| k as usize >= nvars) {
        return BigUint::zero();
    }
    let mut mono = vec![0u64; nvars];
    for (&k, &d) in &target.exponents {
        mono[k as usize] = d;
    }
    poly.get(&mono).cloned().unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn product(width: u64, f: &[(u64, u64)]) -> WindowProduct {
        WindowProduct::new(width, f.iter().copied().collect()).unwrap()
    }

    fn monomial(d: &[(u64, u64)]) -> MonomialTarget {
        MonomialTarget::new(d.iter().copied().collect())
    }

    #[test]
    fn empty_product() {
        let p = product(3, &[]);
        assert_eq!(extract_coefficient(&p, &monomial(&[]), 5).unwrap(), 1);
        assert_eq!(extract_coefficient(&p, &monomial(&[(0, 1)]), 5).unwrap(), 0);
    }

    #[test]
    fn binomial_from_two_windows() {
        // (X_0+⋯+X_{a-1})^7 (X_1+⋯+X_a)^2 : X_0^5 X_{t}^2 X_{t+1}^2 with 1 <= t < a-1
        for a in 3..7u64 {
            for t in 1..a - 1 {
                let prod = product(a, &[(0, 7), (1, 2)]);
                let target = monomial(&[(0, 5), (t, 2), (t + 1, 2)]);
                assert_eq!(
                    extract_coefficient_exact(&prod, &target),
                    BigUint::from(21u32 * 6)
                );
                assert_eq!(extract_coefficient(&prod, &target, 11).unwrap(), 126 % 11);
            }
        }
    }

    #[test]
    fn single_choice_coefficients() {
        // (X_0+⋯+X_{a-1})^9 (X_1+⋯+X_a)^4 : X_0^9 X_t X_{t+1}^3 → binom(4,1)
        for a in 3..6u64 {
            let t = 1;
            let prod = product(a, &[(0, 9), (1, 4)]);
            let target = monomial(&[(0, 9), (t, 1), (t + 1, 3)]);
            assert_eq!(extract_coefficient(&prod, &target, 13).unwrap(), 4);
        }
        // (X_0+⋯+X_{a-1})^5 (X_1+⋯+X_a)^2 : X_0^5 X_t^2 → 1
        let prod = product(4, &[(0, 5), (1, 2)]);
        assert_eq!(
            extract_coefficient(&prod, &monomial(&[(0, 5), (2, 2)]), 3).unwrap(),
            1
        );
    }

    #[test]
    fn degree_mismatch_and_out_of_reach() {
        let prod = product(2, &[(0, 2)]);
        assert_eq!(
            extract_coefficient(&prod, &monomial(&[(0, 1)]), 7).unwrap(),
            0
        );
        assert_eq!(
            extract_coefficient(&prod, &monomial(&[(0, 1), (2, 1)]), 7).unwrap(),
            0
        );
        assert_eq!(
            extract_coefficient(&prod, &monomial(&[(0, 1), (1, 1)]), 7).unwrap(),
            2
        );
    }

    #[test]
    fn zero_width_rejected() {
        assert!(WindowProduct::new(0, BTreeMap::new()).is_err());
    }

    fn arb_instance() -> impl Strategy<Value = (WindowProduct, MonomialTarget)> {
        (
            1u64..=3,
            proptest::collection::btree_map(0u64..4, 0u64..=4, 0..=4),
        )
            .prop_flat_map(|(width, factors)| {
                let prod = WindowProduct::new(width, factors).unwrap();
                let deg = prod.degree();
                let span = prod.factors.keys().max().map_or(1, |&j| j + width + 1);
                (
                    Just(prod),
                    proptest::collection::vec(0..span, deg as usize..=deg as usize),
                )
            })
            .prop_map(|(prod, slots)| {
                let mut t = BTreeMap::new();
                for k in slots {
                    *t.entry(k).or_insert(0) += 1;
                }
                (prod, MonomialTarget::new(t))
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn agrees_with_dense_expansion((prod, target) in arb_instance()) {
            let exact = dense_coefficient(&prod, &target);
            prop_assert_eq!(extract_coefficient_exact(&prod, &target), exact.clone());
            prop_assert_eq!(
                BigUint::from(extract_coefficient(&prod, &target, 5).unwrap()),
                exact % 5u32
            );
        }

        #[test]
        fn shift_invariance((prod, target) in arb_instance(), by in 1u64..5) {
            prop_assert_eq!(
                extract_coefficient_exact(&prod, &target),
                extract_coefficient_exact(&prod.shifted(by), &target.shifted(by))
            );
        }

        #[test]
        fn nonzero_needs_matching_degree((prod, target) in arb_instance(), extra in 1u64..3) {
            let mut bigger = target.exponents.clone();
            *bigger.entry(0).or_insert(0) += extra;
            prop_assert!(extract_coefficient_exact(&prod, &MonomialTarget::new(bigger)).is_zero());
        }
    }
}
