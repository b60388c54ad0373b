//! Closed forms for `C(N)`.
//!
//! For the middle bands there is a one-parameter family `r = q - 2u` whose
//! borrow set is a single vector, giving `C(N)` as a product of generalized
//! binomials in `u`. Prime powers where every admissible `u` gives a multiple
//! of `p` fall back to fixed `(r, s)` rows found by search, each recorded with
//! the value its window coefficients add up to.

use num_bigint::{BigInt, BigUint};
use serde::Serialize;

use super::{CNResult, CaseParams, Method, Subcase};
use crate::combinat::{factorize, generalized_binomial_exact, residue};
use crate::digits::{build_plan, ExponentPlan, Template};
use crate::error::{Error, Result};
use crate::ffield::is_prime;

/// `(2^{t+1} - 1)(2u - 1)`, the quantity that must stay below `q`.
fn generic_threshold(template: Template, u: u64) -> u64 {
    ((1u64 << (template.terms() + 1)) - 1) * (2 * u - 1)
}

/// Exact value of the free-parameter closed form.
pub fn generic_exact(template: Template, u: u64) -> BigInt {
    let u = u as i64;
    let gb = |n: i64, k: i64| generalized_binomial_exact(&BigInt::from(n), k as u64);
    match template {
        Template::ThreeTerm => gb(-u, 30 * u - 15) * gb(-16 * u + 7, 7),
        Template::TwoTerm => gb(-u, 14 * u - 7) * gb(-8 * u + 3, 3),
        Template::OneTerm => BigInt::from(-4 * u + 1) * gb(-u, 6 * u - 3),
    }
}

/// The closed form mod `p`.
pub fn generic_value(template: Template, u: u64, p: u64) -> u64 {
    residue(&generic_exact(template, u), p)
}

/// The plan `r = q - 2u`, `s = q - u + c·q` with `c = 15u - 8`, `7u - 4`
/// or `3u - 2`.
pub fn generic_plan(template: Template, q: u64, e: u32, a: u32, u: u64) -> Result<ExponentPlan> {
    if u == 0 || generic_threshold(template, u) >= q {
        return Err(Error::PlanPrecondition(format!(
            "u = {u} is not admissible for q = {q}"
        )));
    }
    let c = match template {
        Template::ThreeTerm => 15 * u - 8,
        Template::TwoTerm => 7 * u - 4,
        Template::OneTerm => 3 * u - 2,
    };
    let s = BigUint::from(q - u) + BigUint::from(c) * q;
    build_plan(template, q, e, a, q - 2 * u, &s)
}

/// The smallest admissible `u` whose closed form is nonzero mod `p`.
pub(super) fn pick_generic(template: Template, q: u64, p: u64) -> Option<u64> {
    (1..)
        .take_while(|&u| generic_threshold(template, u) < q)
        .find(|&u| generic_value(template, u, p) != 0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum QMatch {
    Exactly(u64),
    AtLeast(u64),
}

impl QMatch {
    fn matches(self, q: u64) -> bool {
        match self {
            QMatch::Exactly(v) => q == v,
            QMatch::AtLeast(v) => q >= v,
        }
    }
}

/// A fixed `(r, s)` for one prime power and geometry. `gap` is `e - ta`.
#[derive(Debug, Serialize)]
pub struct TableRow {
    pub tag: &'static str,
    pub template: Template,
    pub q: QMatch,
    pub min_gap: u32,
    pub max_gap: Option<u32>,
    pub min_a: u32,
    pub max_a: Option<u32>,
    pub r_text: &'static str,
    pub s_text: &'static str,
    #[serde(skip)]
    pub r: fn(u64) -> u64,
    #[serde(skip)]
    pub s: fn(u64, u32, u32) -> BigUint,
    /// The integer the row's window coefficients add up to.
    pub claimed: i64,
}

impl PartialEq for TableRow {
    fn eq(&self, other: &Self) -> bool {
        self.tag == other.tag
    }
}

impl Eq for TableRow {}

impl TableRow {
    fn matches(&self, template: Template, q: u64, e: u32, a: u32) -> bool {
        let t = template.terms();
        let Some(gap) = e.checked_sub(t * a) else {
            return false;
        };
        self.template == template
            && self.q.matches(q)
            && gap >= self.min_gap
            && self.max_gap.is_none_or(|m| gap <= m)
            && a >= self.min_a
            && self.max_a.is_none_or(|m| a <= m)
    }
}

fn big(n: u64) -> BigUint {
    BigUint::from(n)
}

fn qp(q: u64, k: u32) -> BigUint {
    BigUint::from(q).pow(k)
}

macro_rules! row {
    ($tag:expr, $tpl:ident, $q:expr, gap $lo:tt..$hi:tt, a $alo:tt..$ahi:tt,
     r = $rt:expr => $r:expr, s = $st:expr => $s:expr, claimed $c:expr) => {
        TableRow {
            tag: $tag,
            template: Template::$tpl,
            q: $q,
            min_gap: $lo,
            max_gap: row!(@opt $hi),
            min_a: $alo,
            max_a: row!(@opt $ahi),
            r_text: $rt,
            s_text: $st,
            r: $r,
            s: $s,
            claimed: $c,
        }
    };
    (@opt _) => { None };
    (@opt $v:literal) => { Some($v) };
}

use QMatch::{AtLeast, Exactly};

static TABLE: &[TableRow] = &[
    // three terms, 3a + 2 <= e < 4a
    row!("q=13", ThreeTerm, Exactly(13), gap 2.._, a 0.._,
         r = "5" => |_| 5, s = "9+4q" => |q, _, _| big(9 + 4 * q), claimed 4),
    row!("q=11", ThreeTerm, Exactly(11), gap 2.._, a 0.._,
         r = "3" => |_| 3, s = "7+2q" => |q, _, _| big(7 + 2 * q), claimed 126),
    row!("q=7", ThreeTerm, Exactly(7), gap 2.._, a 0.._,
         r = "1" => |_| 1, s = "4+q" => |q, _, _| big(4 + q), claimed 8),
    row!("q=25, e>=3a+3", ThreeTerm, Exactly(25), gap 3.._, a 0.._,
         r = "3" => |_| 3, s = "14+12q+q^(e-3a)" => |q, e, a| big(14 + 12 * q) + qp(q, e - 3 * a), claimed 3),
    row!("q=25, e=3a+2", ThreeTerm, Exactly(25), gap 2..2, a 0.._,
         r = "3" => |_| 3, s = "14+13q" => |q, _, _| big(14 + 13 * q), claimed 91),
    row!("q=5, e>=3a+3", ThreeTerm, Exactly(5), gap 3.._, a 0.._,
         r = "3" => |_| 3, s = "4+2q+q^(e-3a)" => |q, e, a| big(4 + 2 * q) + qp(q, e - 3 * a), claimed 3),
    row!("q=5, e=3a+2", ThreeTerm, Exactly(5), gap 2..2, a 0.._,
         r = "3" => |_| 3, s = "4+3q" => |q, _, _| big(4 + 3 * q), claimed 6),
    row!("q=81, e>=3a+3", ThreeTerm, Exactly(81), gap 3.._, a 0.._,
         r = "q-10" => |q| q - 10, s = "(q-5)+67q" => |q, _, _| big(q - 5 + 67 * q), claimed 4),
    row!("q=81, e=3a+2", ThreeTerm, Exactly(81), gap 2..2, a 0.._,
         r = "q-10" => |q| q - 10, s = "(q-5)+67q" => |q, _, _| big(q - 5 + 67 * q), claimed 1),
    row!("q=27", ThreeTerm, Exactly(27), gap 2.._, a 0.._,
         r = "1" => |_| 1, s = "14+5q" => |q, _, _| big(14 + 5 * q), claimed 364),
    row!("q=9, e>=3a+3", ThreeTerm, Exactly(9), gap 3.._, a 0.._,
         r = "1" => |_| 1, s = "5+2q+q^2+q^(e-3a)" => |q, e, a| big(5 + 2 * q + q * q) + qp(q, e - 3 * a), claimed 5),
    row!("q=9, e=3a+2", ThreeTerm, Exactly(9), gap 2..2, a 0.._,
         r = "1" => |_| 1, s = "5+4q" => |q, _, _| big(5 + 4 * q), claimed 1),
    row!("q=3", ThreeTerm, Exactly(3), gap 2.._, a 0.._,
         r = "1" => |_| 1, s = "2+q^(e-3a)" => |q, e, a| big(2) + qp(q, e - 3 * a), claimed 4),
    // three terms, e = 3a + 1
    row!("q>=9, e=3a+1", ThreeTerm, AtLeast(9), gap 1..1, a 0.._,
         r = "q-2" => |q| q - 2, s = "(q-1)+7q" => |q, _, _| big(q - 1 + 7 * q), claimed -1),
    row!("q=7, e=3a+1", ThreeTerm, Exactly(7), gap 1..1, a 0.._,
         r = "1" => |_| 1, s = "4+q" => |q, _, _| big(4 + q), claimed 5),
    row!("q=5, e=3a+1, a>=3", ThreeTerm, Exactly(5), gap 1..1, a 3.._,
         r = "2" => |_| 2, s = "1+q^2" => |q, _, _| big(1 + q * q), claimed 3),
    row!("q=5, e=3a+1, a=2", ThreeTerm, Exactly(5), gap 1..1, a 2..2,
         r = "2" => |_| 2, s = "1+q^2" => |q, _, _| big(1 + q * q), claimed 2),
    row!("q=3, e=3a+1, a>=3", ThreeTerm, Exactly(3), gap 1..1, a 3.._,
         r = "1" => |_| 1, s = "2+q" => |q, _, _| big(2 + q), claimed 2),
    row!("q=3, e=3a+1, a=2", ThreeTerm, Exactly(3), gap 1..1, a 2..2,
         r = "1" => |_| 1, s = "2+q" => |q, _, _| big(2 + q), claimed 1),
    // two terms, 2a + 2 <= e < 3a
    row!("q=49, e>=2a+3", TwoTerm, Exactly(49), gap 3.._, a 0.._,
         r = "6" => |_| 6, s = "3+25q+2q^2" => |q, _, _| big(3 + 25 * q + 2 * q * q), claimed 242_190),
    row!("q=49, e=2a+2", TwoTerm, Exactly(49), gap 2..2, a 0.._,
         r = "6" => |_| 6, s = "3+26q+q^3" => |q, _, _| big(3 + 26 * q) + qp(q, 3), claimed 312),
    row!("q=7, e>=2a+3", TwoTerm, Exactly(7), gap 3.._, a 0.._,
         r = "1" => |_| 1, s = "4+5q" => |q, _, _| big(4 + 5 * q), claimed 5),
    row!("q=7, e=2a+2", TwoTerm, Exactly(7), gap 2..2, a 0.._,
         r = "1" => |_| 1, s = "4+5q" => |q, _, _| big(4 + 5 * q), claimed 1),
    row!("q=25", TwoTerm, Exactly(25), gap 2.._, a 0.._,
         r = "3" => |_| 3, s = "14+q" => |q, _, _| big(14 + q), claimed 364),
    row!("q=5", TwoTerm, Exactly(5), gap 2.._, a 0.._,
         r = "1" => |_| 1, s = "3+q+q^(e-2a)" => |q, e, a| big(3 + q) + qp(q, e - 2 * a), claimed 3),
    row!("q=3", TwoTerm, Exactly(3), gap 2.._, a 0.._,
         r = "2" => |_| 2, s = "1+q^(e-2a)" => |q, e, a| big(1) + qp(q, e - 2 * a), claimed 2),
    // two terms, e = 2a + 1
    row!("q>=5, e=2a+1", TwoTerm, AtLeast(5), gap 1..1, a 0.._,
         r = "q-2" => |q| q - 2, s = "(q-1)+3q" => |q, _, _| big(q - 1 + 3 * q), claimed -1),
    row!("q=3, e=2a+1, a>=3", TwoTerm, Exactly(3), gap 1..1, a 3.._,
         r = "2" => |_| 2, s = "1+q" => |q, _, _| big(1 + q), claimed 2),
    row!("q=3, e=2a+1, a=2", TwoTerm, Exactly(3), gap 1..1, a 2..2,
         r = "2" => |_| 2, s = "1+q" => |q, _, _| big(1 + q), claimed 1),
    // one term, a + 2 <= e < 2a
    row!("q=9", OneTerm, Exactly(9), gap 2.._, a 0.._,
         r = "1" => |_| 1, s = "5+2q" => |q, _, _| big(5 + 2 * q), claimed 1),
    row!("q=3", OneTerm, Exactly(3), gap 2.._, a 0.._,
         r = "1" => |_| 1, s = "2+2q+...+2q^(e-a-2)+q^(e-a-1)" => |q, e, a| {
             (0..e - a - 1).map(|i| qp(q, i) * 2u32).sum::<BigUint>() + qp(q, e - a - 1)
         }, claimed 1),
];

/// All fixed rows, in lookup order.
pub fn table_rows() -> &'static [TableRow] {
    TABLE
}

pub(super) fn find_row(template: Template, q: u64, e: u32, a: u32) -> Option<&'static TableRow> {
    TABLE.iter().find(|row| row.matches(template, q, e, a))
}

/// `C(N)` from the closed forms: the free-parameter products, the recorded
/// values of the fixed rows, and `-1`, `-(u+1)u^{q-2}`, `-1` for the bands
/// where `f` reduces to a short sum.
pub fn cn_closed_form(params: &CaseParams) -> Result<CNResult> {
    let p = params.p;
    let q = BigUint::from(params.q);
    let (n, claimed, plan) = match &params.subcase {
        Subcase::Generic { u } => {
            let template = params.template().expect("generic subcases have templates");
            let plan = params.plan()?.expect("generic plan");
            (plan.n.clone(), generic_exact(template, *u), Some(plan))
        }
        Subcase::Table { row } => {
            let plan = params.plan()?.expect("table plan");
            (plan.n.clone(), BigInt::from(row.claimed), Some(plan))
        }
        Subcase::SquareMinusOne => (&q * &q - 1u32, BigInt::from(-1), None),
        Subcase::QMinusOne { u, .. } => {
            // the single split c = (1, 0, …, 0, q - 2) weighted by b_1 b_e^{q-2}
            let u = BigInt::from(*u);
            let c: BigInt = -(&u + BigInt::from(1)) * u.pow((params.q - 2) as u32);
            (q - 1u32, c, None)
        }
        Subcase::PowerMinusOne { k } => (q.pow(*k) - 1u32, BigInt::from(-1), None),
        Subcase::CurveBound => {
            return Err(Error::NoClosedForm(
                "a <= e/4 is settled by the point-count bound".into(),
            ))
        }
        Subcase::Uncovered => {
            return Err(Error::NoClosedForm(format!(
                "q = {}, e = {}, a = {}",
                params.q, params.e, params.a
            )))
        }
    };
    Ok(CNResult {
        n,
        p,
        value: residue(&claimed, p),
        method: Method::ClosedForm,
        plan,
        claimed: Some(claimed),
    })
}

/// One free-parameter value with its factorization.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CorollaryValue {
    pub u: u64,
    /// The closed form applies once `q` exceeds this.
    pub q_above: u64,
    #[serde(with = "crate::serde_big::signed")]
    pub value: BigInt,
    pub factors: Vec<(u64, u32)>,
}

/// A band of `q` where the same set of `u` is admissible.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CorollaryRange {
    /// Exclusive lower end; `None` for the first band.
    pub q_above: Option<u64>,
    /// Inclusive upper end; `None` for the last band.
    pub q_at_most: Option<u64>,
    pub max_u: u64,
    /// Primes dividing every admissible value (all odd primes when none is
    /// admissible, shown as `None`).
    pub primes: Option<Vec<u64>>,
    /// Odd prime powers in the band whose characteristic survives.
    pub prime_powers: Vec<u64>,
}

/// The surviving prime powers for one template: where every admissible `u`
/// gives a multiple of `p`, the closed forms cannot rule `q` out.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CorollaryTable {
    pub template: Template,
    pub values: Vec<CorollaryValue>,
    pub ranges: Vec<CorollaryRange>,
    /// Union of the surviving prime powers.
    pub survivors: Vec<u64>,
}

fn odd_prime_powers_in(lo: u64, hi: u64) -> Vec<u64> {
    (lo + 1..=hi)
        .filter(|&q| q % 2 == 1)
        .filter(|&q| {
            let p = (3..=q).find(|d| q % d == 0).unwrap();
            is_prime(p) && {
                let mut m = q;
                while m % p == 0 {
                    m /= p;
                }
                m == 1
            }
        })
        .collect()
}

/// Adds values for `u = 1, 2, …` until no prime divides all of them.
pub fn corollary_table(template: Template) -> CorollaryTable {
    let mut values = Vec::new();
    let mut ranges = Vec::new();
    let mut survivors = Vec::new();
    let first_cut = generic_threshold(template, 1);
    let first = odd_prime_powers_in(2, first_cut);
    survivors.extend(&first);
    ranges.push(CorollaryRange {
        q_above: None,
        q_at_most: Some(first_cut),
        max_u: 0,
        primes: None,
        prime_powers: first,
    });
    let mut common: Option<Vec<u64>> = None;
    for u in 1.. {
        let value = generic_exact(template, u);
        let factors = factorize(&value);
        let primes: Vec<u64> = factors.iter().map(|&(p, _)| p).collect();
        let kept: Vec<u64> = match &common {
            None => primes.clone(),
            Some(c) => c.iter().copied().filter(|p| primes.contains(p)).collect(),
        };
        let lo = generic_threshold(template, u);
        values.push(CorollaryValue {
            u,
            q_above: lo,
            value,
            factors,
        });
        let odd: Vec<u64> = kept.iter().copied().filter(|&p| p != 2).collect();
        if odd.is_empty() {
            ranges.push(CorollaryRange {
                q_above: Some(lo),
                q_at_most: None,
                max_u: u,
                primes: Some(Vec::new()),
                prime_powers: Vec::new(),
            });
            break;
        }
        let hi = generic_threshold(template, u + 1);
        let powers: Vec<u64> = odd_prime_powers_in(lo, hi)
            .into_iter()
            .filter(|q| odd.iter().any(|p| q % p == 0))
            .collect();
        survivors.extend(&powers);
        ranges.push(CorollaryRange {
            q_above: Some(lo),
            q_at_most: Some(hi),
            max_u: u,
            primes: Some(kept.iter().copied().filter(|&p| p != 2).collect()),
            prime_powers: powers,
        });
        common = Some(kept);
    }
    survivors.sort();
    CorollaryTable {
        template,
        values,
        ranges,
        survivors,
    }
}

/// Renders `3^2·5·11·13`.
pub fn format_factors(factors: &[(u64, u32)]) -> String {
    factors
        .iter()
        .map(|&(p, k)| {
            if k == 1 {
                p.to_string()
            } else {
                format!("{p}^{k}")
            }
        })
        .collect::<Vec<_>>()
        .join("·")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_values() {
        assert_eq!(generic_exact(Template::ThreeTerm, 1), BigInt::from(6435));
        assert_eq!(
            generic_exact(Template::ThreeTerm, 2),
            BigInt::from(120_960_450u64)
        );
        assert_eq!(generic_exact(Template::TwoTerm, 1), BigInt::from(35));
        assert_eq!(
            generic_exact(Template::TwoTerm, 2),
            BigInt::from(2 * 5 * 7 * 11 * 13)
        );
        assert_eq!(generic_exact(Template::OneTerm, 1), BigInt::from(3));
        assert_eq!(generic_exact(Template::OneTerm, 2), BigInt::from(70));
    }

    #[test]
    fn thresholds() {
        assert_eq!(generic_threshold(Template::ThreeTerm, 1), 15);
        assert_eq!(generic_threshold(Template::TwoTerm, 2), 21);
        assert_eq!(generic_threshold(Template::OneTerm, 3), 15);
    }

    #[test]
    fn survivors() {
        assert_eq!(
            corollary_table(Template::ThreeTerm).survivors,
            vec![3, 5, 7, 9, 11, 13, 25, 27, 81]
        );
        assert_eq!(
            corollary_table(Template::TwoTerm).survivors,
            vec![3, 5, 7, 25, 49]
        );
        assert_eq!(corollary_table(Template::OneTerm).survivors, vec![3, 9]);
    }

    #[test]
    fn every_row_has_a_tag_once() {
        let mut tags: Vec<(&str, Template)> = TABLE.iter().map(|r| (r.tag, r.template)).collect();
        let n = tags.len();
        tags.sort_by_key(|(t, tpl)| (t.to_string(), tpl.terms()));
        tags.dedup();
        assert_eq!(tags.len(), n);
    }

    #[test]
    fn factor_rendering() {
        assert_eq!(
            format_factors(&factorize(&BigInt::from(6435))),
            "3^2·5·11·13"
        );
    }
}
