//! Base-`q` digit arithmetic: expansions, weights, the `E*` normalization,
//! borrow sets, and the exponent plans whose borrow sets drive the Hermite
//! coefficient computations.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::serde_big;

/// A finitely supported sequence of nonnegative digits in base `q`, stored
/// without trailing zeros. Entries may exceed `q - 1` (non-canonical vectors
/// arise from borrows).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct DigitVector {
    digits: Vec<u64>,
    base: u64,
}

impl DigitVector {
    pub fn new(base: u64, mut digits: Vec<u64>) -> Self {
        while digits.last() == Some(&0) {
            digits.pop();
        }
        DigitVector { digits, base }
    }

    pub fn base(&self) -> u64 {
        self.base
    }

    pub fn digits(&self) -> &[u64] {
        &self.digits
    }

    /// Entry at position `j`, zero past the support.
    pub fn get(&self, j: usize) -> u64 {
        self.digits.get(j).copied().unwrap_or(0)
    }

    /// One past the last nonzero position.
    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    pub fn weight(&self) -> u64 {
        self.digits.iter().sum()
    }

    pub fn is_canonical(&self) -> bool {
        self.digits.iter().all(|&d| d < self.base)
    }

    /// `Σ d_j q^j`.
    pub fn value(&self) -> BigUint {
        let q = BigUint::from(self.base);
        self.digits
            .iter()
            .rev()
            .fold(BigUint::zero(), |acc, &d| acc * &q + BigUint::from(d))
    }
}

/// Canonical base-`q` expansion.
pub fn base_q_digits(s: &BigUint, q: u64) -> DigitVector {
    assert!(q >= 2, "base must be at least 2");
    let mut digits = Vec::new();
    if let Some(s) = s.to_u64() {
        let mut rest = s;
        while rest > 0 {
            digits.push(rest % q);
            rest /= q;
        }
    } else {
        let qb = BigUint::from(q);
        let mut rest = s.clone();
        while !rest.is_zero() {
            let (quo, rem) = rest.div_rem(&qb);
            digits.push(rem.to_u64().unwrap());
            rest = quo;
        }
    }
    DigitVector::new(q, digits)
}

/// `|s|_q`, the sum of the canonical base-`q` digits.
pub fn weight_q(s: &BigUint, q: u64) -> u64 {
    base_q_digits(s, q).weight()
}

/// The representative `E*` of `E` modulo `q^e - 1` lying in `[1, q^e - 1]`.
pub fn normalize_exponent(exponent: &BigInt, q: u64, e: u32) -> BigUint {
    let m = BigInt::from(BigUint::from(q).pow(e) - 1u32);
    let r = exponent.mod_floor(&m);
    let r = if r.is_zero() { m } else { r };
    r.to_biguint().expect("nonnegative after mod_floor")
}

/// Every digit sequence `(ε_0, ε_1, …)` with `Σ ε_j q^j = value` and
/// `Σ ε_j = target_weight`, in lexicographic order.
///
/// All such sequences arise from the canonical expansion by borrows, each of
/// which raises the weight by `q - 1`, so the set is empty unless the target
/// is at least the canonical weight and congruent to it mod `q - 1`.
///
/// The search runs from the top position down. With positions `0..j` still
/// free, a remainder `R` can be written with any weight in
/// `{m, m + (q-1), …, R}`, where `m` is the weight of the representation that
/// puts `⌊R / q^{j-1}⌋` at position `j - 1`; every node that passes this test
/// has at least one completion.
pub fn enumerate_borrow_set(value: &BigUint, target_weight: u64, q: u64) -> Vec<DigitVector> {
    let canonical = base_q_digits(value, q);
    let cw = canonical.weight();
    if cw > target_weight || !(target_weight - cw).is_multiple_of(q - 1) {
        return Vec::new();
    }
    if cw == target_weight {
        return vec![canonical];
    }
    if value.is_zero() {
        return Vec::new();
    }
    let len = canonical.len();
    let powers: Vec<BigUint> = (0..len as u32).map(|j| BigUint::from(q).pow(j)).collect();
    let mut out = Vec::new();
    let mut cur = vec![0u64; len];
    borrow_dfs(
        len - 1,
        value.clone(),
        target_weight,
        q,
        &powers,
        &mut cur,
        &mut out,
    );
    out.sort();
    out
}

/// Weights reachable for `rest` using positions `0..j` (j >= 1): the
/// minimum is returned; the maximum is `rest` itself.
fn min_weight_below(rest: &BigUint, j: usize, powers: &[BigUint], q: u64) -> BigUint {
    let (top, low) = rest.div_rem(&powers[j - 1]);
    top + BigUint::from(weight_q(&low, q))
}

fn reachable(rest: &BigUint, weight: u64, j: usize, powers: &[BigUint], q: u64) -> bool {
    if j == 0 {
        return rest.is_zero() && weight == 0;
    }
    let w = BigUint::from(weight);
    if &w > rest {
        return false;
    }
    if (rest - &w) % (q - 1) != BigUint::zero() {
        return false;
    }
    min_weight_below(rest, j, powers, q) <= w
}

fn borrow_dfs(
    j: usize,
    rest: BigUint,
    weight: u64,
    q: u64,
    powers: &[BigUint],
    cur: &mut Vec<u64>,
    out: &mut Vec<DigitVector>,
) {
    if j == 0 {
        if rest == BigUint::from(weight) {
            cur[0] = weight;
            out.push(DigitVector::new(q, cur.clone()));
            cur[0] = 0;
        }
        return;
    }
    let cap = (&rest / &powers[j])
        .to_u64()
        .unwrap_or(u64::MAX)
        .min(weight);
    for x in 0..=cap {
        let next = &rest - &powers[j] * x;
        if reachable(&next, weight - x, j, powers, q) {
            cur[j] = x;
            borrow_dfs(j - 1, next, weight - x, q, powers, cur, out);
        }
    }
    cur[j] = 0;
}

/// Which `N` template a plan instantiates. The number of `r`-terms matches
/// the range of `a`: three for `e/4 < a < e/3`, two for `e/3 < a < e/2`,
/// one for `e/2 < a < e`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Template {
    /// `N = r(q^{e-a} + 2q^{e-2a} + 4q^{e-3a}) + s`, `s ≡ -7r (mod q-1)`.
    ThreeTerm,
    /// `N = r(q^{e-a} + 2q^{e-2a}) + s`, `s ≡ -3r (mod q-1)`.
    TwoTerm,
    /// `N = r q^{e-a} + s`, `s ≡ -r (mod q-1)`.
    OneTerm,
}

impl Template {
    pub fn terms(self) -> u32 {
        match self {
            Template::ThreeTerm => 3,
            Template::TwoTerm => 2,
            Template::OneTerm => 1,
        }
    }

    /// `c` in the congruence `s ≡ -c·r (mod q-1)`.
    pub fn congruence_multiplier(self) -> u64 {
        (1 << self.terms()) - 1
    }
}

/// Which borrow set a plan evaluates: the full one (windows carry the digits
/// of the last `r`-term as well as those of `s`) or the reduced one (windows
/// carry only the digits of `s`; needs the tighter bound on `s`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BorrowVariant {
    Full,
    Reduced,
}

/// Everything derived from `(template, q, e, a, r, s)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExponentPlan {
    pub template: Template,
    pub q: u64,
    pub e: u32,
    pub a: u32,
    pub r: u64,
    #[serde(with = "serde_big")]
    pub s: BigUint,
    #[serde(with = "serde_big")]
    pub n: BigUint,
    /// Borrow target for the full variant; absent for the one-term template.
    #[serde(with = "serde_big::option")]
    pub s1: Option<BigUint>,
    /// Borrow target for the reduced variant.
    #[serde(with = "serde_big")]
    pub s2: BigUint,
    /// Canonical digits of the last `r`-term, `q^{e-ta}·2^{t-1}r`.
    pub r_digits: DigitVector,
    pub s_digits: DigitVector,
    pub variant: BorrowVariant,
    /// `j ↦ m_j`, the exponent of `(X_j + ⋯ + X_{j+a-1})`.
    pub windows: BTreeMap<u64, u64>,
    pub target_weight: u64,
}

impl ExponentPlan {
    /// The integer whose borrow set is summed over.
    pub fn borrow_target(&self) -> &BigUint {
        match self.variant {
            BorrowVariant::Full => self.s1.as_ref().expect("full variant has S1"),
            BorrowVariant::Reduced => &self.s2,
        }
    }

    /// The leading coefficient `2^{t-1} r` of the last `r`-term.
    pub fn last_term_multiple(&self) -> u64 {
        (1 << (self.template.terms() - 1)) * self.r
    }
}

fn qpow(q: u64, exp: i64) -> Result<BigUint> {
    if exp < 0 {
        return Err(Error::PlanPrecondition(format!("negative power q^{exp}")));
    }
    Ok(BigUint::from(q).pow(exp as u32))
}

/// Largest `s` for which the given variant's coefficient formula holds.
pub fn s_bound(
    template: Template,
    variant: BorrowVariant,
    q: u64,
    e: u32,
    a: u32,
) -> Result<BigUint> {
    let (e, a) = (e as i64, a as i64);
    let exp = match (template, variant) {
        (Template::ThreeTerm, BorrowVariant::Full) => e - 2 * a - 1,
        (Template::ThreeTerm, BorrowVariant::Reduced) => e - 3 * a - 1,
        (Template::TwoTerm, BorrowVariant::Full) => e - a - 1,
        (Template::TwoTerm, BorrowVariant::Reduced) => e - 2 * a - 1,
        (Template::OneTerm, BorrowVariant::Reduced) => e - a - 1,
        (Template::OneTerm, BorrowVariant::Full) => {
            return Err(Error::PlanPrecondition(
                "the one-term template has no full variant".into(),
            ))
        }
    };
    Ok(qpow(q, exp)? * (q - 1))
}

/// Builds a plan, choosing the reduced variant when its bound on `s` holds.
pub fn build_plan(
    template: Template,
    q: u64,
    e: u32,
    a: u32,
    r: u64,
    s: &BigUint,
) -> Result<ExponentPlan> {
    let reduced_ok = s <= &s_bound(template, BorrowVariant::Reduced, q, e, a).unwrap_or_default();
    let variant = if reduced_ok || template == Template::OneTerm {
        BorrowVariant::Reduced
    } else {
        BorrowVariant::Full
    };
    build_plan_variant(template, q, e, a, r, s, variant)
}

/// Builds a plan for an explicitly requested variant.
pub fn build_plan_variant(
    template: Template,
    q: u64,
    e: u32,
    a: u32,
    r: u64,
    s: &BigUint,
    variant: BorrowVariant,
) -> Result<ExponentPlan> {
    let bad = |m: String| Error::PlanPrecondition(m);
    if q < 3 || q.is_multiple_of(2) {
        return Err(bad(format!("q = {q} must be odd and at least 3")));
    }
    if r == 0 || r >= q {
        return Err(bad(format!("r = {r} must lie in (0, q)")));
    }
    if s.is_zero() {
        return Err(bad("s must be positive".into()));
    }
    let t = template.terms() as i64;
    let (ei, ai) = (e as i64, a as i64);
    if a == 0 || ei - t * ai - 1 < 0 {
        return Err(bad(format!("need e > {t}a (e = {e}, a = {a})")));
    }
    if ei >= (t + 1) * ai {
        return Err(bad(format!("need e < {}a (e = {e}, a = {a})", t + 1)));
    }
    let c = template.congruence_multiplier();
    if (s + BigUint::from(c * r)) % (q - 1) != BigUint::zero() {
        return Err(bad(format!("s ≢ -{c}r (mod q-1)")));
    }
    let two_s = s * 2u32;
    let rb = BigUint::from(r);
    if two_s < rb || (&two_s - &rb) % q != BigUint::zero() {
        return Err(bad("s ≢ r/2 (mod q)".into()));
    }
    let bound = s_bound(template, variant, q, e, a)?;
    if s > &bound {
        return Err(bad(format!(
            "s = {s} exceeds {bound} for the {variant:?} variant"
        )));
    }

    let mut n = s.clone();
    for i in 1..=t {
        n += qpow(q, ei - i * ai)? * (r << (i - 1));
    }
    let h = (&two_s - &rb) / q;
    let s2 = qpow(q, ei - t * ai - 1)? * (r << t) + &h;
    let s1 = (t >= 2)
        .then(|| qpow(q, ei - (t - 1) * ai - 1).map(|w| w * (r << (t - 1)) + &s2))
        .transpose()?;

    let last = (1u64 << (t - 1)) * r;
    let r_digits = base_q_digits(&(qpow(q, ei - t * ai)? * last), q);
    let s_digits = base_q_digits(s, q);

    let (windows, target_weight) = match variant {
        BorrowVariant::Full => {
            let len = r_digits.len().max(s_digits.len());
            let w = (0..len)
                .map(|j| (j as u64, r_digits.get(j) + s_digits.get(j)))
                .filter(|&(_, m)| m > 0)
                .collect();
            (w, weight_q(&BigUint::from(last), q) + s_digits.weight())
        }
        BorrowVariant::Reduced => {
            let w = s_digits
                .digits()
                .iter()
                .enumerate()
                .filter(|&(_, &m)| m > 0)
                .map(|(j, &m)| (j as u64, m))
                .collect();
            (w, s_digits.weight())
        }
    };

    let order = BigUint::from(q).pow(e) - BigUint::one();
    if n.is_zero() || n >= order {
        return Err(bad(format!("N = {n} is not in (0, q^e - 1)")));
    }

    Ok(ExponentPlan {
        template,
        q,
        e,
        a,
        r,
        s: s.clone(),
        n,
        s1,
        s2,
        r_digits,
        s_digits,
        variant,
        windows,
        target_weight,
    })
}

/// `Sign`-aware conversion used by callers holding signed exponents.
pub fn to_bigint(n: &BigUint) -> BigInt {
    BigInt::from_biguint(Sign::Plus, n.clone())
}
