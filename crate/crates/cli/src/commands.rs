//! Each command returns its report records; the binary only prints them.

use std::collections::BTreeMap;
use std::time::Instant;

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use permpoly::coeffx::{
    dense_coefficient, extract_coefficient, extract_coefficient_exact, MonomialTarget,
    WindowProduct,
};
use permpoly::digits::Template;
use permpoly::ffield::{is_prime, make_field_with_cap};
use permpoly::hasse::hw_certificate;
use permpoly::hermite::{
    classify_case, cn_borrow_set, cn_bruteforce_capped, cn_closed_form, cn_multinomial_sum,
    corollary_table, dispatch_case, format_factors, prime_power, solve_support_system, table_rows,
    CNResult, Method, QMatch, SolveMode, SupportSystem,
};
use permpoly::ppcheck::{
    g_identity_check, is_pp, kernel_test, kernel_trivial_by_gcd, reduction_check,
};
use permpoly::{Error, Result};

use crate::record::{Record, Status};

fn to_json<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("results serialize")
}

fn fits(q: u64, e: u32, cap: u64) -> bool {
    BigUint::from(q).pow(e) <= BigUint::from(cap)
}

#[derive(Debug, Clone)]
pub struct SweepArgs {
    pub max_card: u64,
    pub primes: Vec<u64>,
    pub max_q: Option<u64>,
    pub include_even: bool,
    /// Also compare the evaluated kernel of the linearized part with the gcd
    /// test.
    pub kernel: bool,
}

/// Brute-force verdicts against the predicted answer for every field with
/// `q^e <= max_card` and every `a` in `[1, pe - 2]`, ordered by `(q, e, a)`.
pub fn sweep(args: &SweepArgs) -> Result<Vec<Record>> {
    let mut primes = args.primes.clone();
    primes.sort_unstable();
    primes.dedup();
    let mut out = Vec::new();
    for p in primes {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if p == 2 && !args.include_even {
            continue;
        }
        for k in 1u32.. {
            let Some(q) = p.checked_pow(k) else { break };
            if !fits(q, 2, args.max_card) || args.max_q.is_some_and(|m| q > m) {
                break;
            }
            for e in 2u32.. {
                if !fits(q, e, args.max_card) {
                    break;
                }
                let spec = make_field_with_cap(p, k, e, args.max_card)?;
                for a in 1..=(p * e as u64 - 2) as i64 {
                    let started = Instant::now();
                    let verdict = is_pp(&spec, a, args.max_card)?;
                    let mut status = if verdict.is_pp == verdict.expected {
                        Status::Ok
                    } else {
                        Status::Mismatch
                    };
                    let mut result = to_json(&verdict);
                    if args.kernel {
                        let by_eval = kernel_test(&spec, a, args.max_card)?;
                        let by_gcd = kernel_trivial_by_gcd(p, e, a);
                        if by_eval != by_gcd {
                            status = Status::Mismatch;
                        }
                        result["kernel_trivial"] = json!(by_eval);
                        result["kernel_trivial_by_gcd"] = json!(by_gcd);
                    }
                    let inputs = json!({ "p": p, "k": k, "q": q, "e": e, "a": a });
                    out.push(Record::new("sweep", inputs, result, status, started));
                }
            }
        }
    }
    out.sort_by_key(|r| {
        let i = &r.inputs;
        (i["q"].as_u64(), i["e"].as_u64(), i["a"].as_i64())
    });
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MethodChoice {
    One(Method),
    All,
}

#[derive(Debug, Clone)]
pub struct CnArgs {
    pub p: u64,
    pub k: u32,
    pub e: u32,
    pub a: u64,
    pub method: MethodChoice,
    pub budget: u64,
    /// Largest field the enumeration route may use.
    pub max_card: u64,
    /// Classify without requiring `gcd(a, pe) = 1`.
    pub ignore_gcd: bool,
}

fn skippable(err: &Error) -> bool {
    matches!(
        err,
        Error::CapExceeded { .. }
            | Error::BudgetExceeded { .. }
            | Error::NotApplicable(_)
            | Error::NoClosedForm(_)
            | Error::Overflow(_)
    )
}

/// `C(N)` for one case by the requested routes; with `All`, every feasible
/// route runs and any disagreement or zero is a mismatch.
pub fn cn(args: &CnArgs) -> Result<Record> {
    let started = Instant::now();
    let (p, k, e, a) = (args.p, args.k, args.e, args.a);
    let params = if args.ignore_gcd {
        classify_case(p, k, e, a)?
    } else {
        dispatch_case(p, k, e, a)?
    };
    let inputs = json!({ "p": p, "k": k, "q": params.q, "e": e, "a": a });
    let n = match cn_closed_form(&params) {
        Ok(r) => Some(r.n),
        Err(_) => params.n()?,
    };
    let Some(n) = n else {
        let result = json!({ "case": params, "note": "no exponent is used in this band; see the hasse command" });
        return Ok(Record::new("cn", inputs, result, Status::Skipped, started));
    };
    let methods = match args.method {
        MethodChoice::One(m) => vec![m],
        MethodChoice::All => vec![
            Method::ClosedForm,
            Method::BorrowSet,
            Method::Multinomial,
            Method::Brute,
        ],
    };
    let mut routes = Vec::new();
    let mut values = Vec::new();
    for method in methods {
        let outcome: Result<CNResult> = match method {
            Method::ClosedForm => cn_closed_form(&params),
            Method::BorrowSet => cn_borrow_set(&params),
            Method::Multinomial => cn_multinomial_sum(&params, args.budget),
            Method::Brute => {
                if fits(params.q, e, args.max_card) {
                    make_field_with_cap(p, k, e, args.max_card)
                        .and_then(|f| cn_bruteforce_capped(&f, a as i64, &n, args.max_card))
                } else {
                    Err(Error::CapExceeded {
                        size: BigUint::from(params.q).pow(e),
                        cap: args.max_card,
                    })
                }
            }
        };
        match outcome {
            Ok(r) => {
                values.push(r.value);
                let mut route =
                    json!({ "method": method.name(), "status": "ok", "value": r.value });
                if let Some(c) = &r.claimed {
                    route["claimed"] = json!(c.to_string());
                }
                routes.push(route);
            }
            Err(err) if skippable(&err) => {
                routes.push(json!({ "method": method.name(), "status": "skipped", "reason": err.to_string() }));
            }
            Err(err) => return Err(err),
        }
    }
    let status = match values.first() {
        None => Status::Skipped,
        Some(&v) if v == 0 || values.iter().any(|&w| w != v) => Status::Mismatch,
        Some(_) => Status::Ok,
    };
    let result = json!({
        "case": params,
        "n": n.to_string(),
        "value": values.first(),
        "routes": routes,
        "plan": params.plan().ok().flatten(),
    });
    Ok(Record::new("cn", inputs, result, status, started))
}

/// The prime powers each template leaves to fixed rows.
pub fn expected_survivors(template: Template) -> &'static [u64] {
    match template {
        Template::ThreeTerm => &[3, 5, 7, 9, 11, 13, 25, 27, 81],
        Template::TwoTerm => &[3, 5, 7, 25, 49],
        Template::OneTerm => &[3, 9],
    }
}

pub fn template_name(template: Template) -> &'static str {
    match template {
        Template::ThreeTerm => "three-term",
        Template::TwoTerm => "two-term",
        Template::OneTerm => "one-term",
    }
}

/// The free-parameter values with their factorizations, the surviving prime
/// powers, and whether fixed rows exist for each survivor.
pub fn tables(template: Template) -> Record {
    let started = Instant::now();
    let table = corollary_table(template);
    let values: Vec<Value> = table
        .values
        .iter()
        .map(|v| {
            json!({
                "u": v.u,
                "q_above": v.q_above,
                "value": v.value.to_string(),
                "factors": format_factors(&v.factors),
            })
        })
        .collect();
    let expected = expected_survivors(template);
    let uncovered: Vec<u64> = table
        .survivors
        .iter()
        .copied()
        .filter(|&q| {
            !table_rows().iter().any(|row| {
                row.template == template && matches!(row.q, QMatch::Exactly(v) if v == q)
            })
        })
        .collect();
    let status = if table.survivors == expected && uncovered.is_empty() {
        Status::Ok
    } else {
        Status::Mismatch
    };
    let result = json!({
        "values": values,
        "ranges": table.ranges,
        "survivors": table.survivors,
        "expected_survivors": expected,
        "survivors_without_rows": uncovered,
    });
    Record::new(
        "tables",
        json!({ "template": template_name(template) }),
        result,
        status,
        started,
    )
}

/// The point-count certificate, confirmed by exhaustion when the field is
/// within `max_card`.
pub fn hasse(p: u64, k: u32, e: u32, a: u32, max_card: u64) -> Result<Record> {
    let started = Instant::now();
    let q = prime_power(p, k)?;
    let cert = hw_certificate(q, e, a)?;
    let brute = if fits(q, e, max_card) {
        let spec = make_field_with_cap(p, k, e, max_card)?;
        Some(is_pp(&spec, a as i64, max_card)?)
    } else {
        None
    };
    let status = if cert.certified && !brute.as_ref().is_some_and(|v| v.is_pp) {
        Status::Ok
    } else {
        Status::Mismatch
    };
    let result = json!({ "certificate": cert, "brute": brute });
    Ok(Record::new(
        "hasse",
        json!({ "p": p, "k": k, "q": q, "e": e, "a": a }),
        result,
        status,
        started,
    ))
}

pub fn system_name(system: SupportSystem) -> String {
    match system {
        SupportSystem::SquareMinusOne => "square-minus-one".into(),
        SupportSystem::QMinusOne => "q-minus-one".into(),
        SupportSystem::PowerMinusOne { k } => format!("power-minus-one(k={k})"),
    }
}

/// Solutions of a split system from the known lists and by exhaustion.
pub fn lemma(system: SupportSystem, p: u64, k: u32, e: u32, budget: u64) -> Result<Record> {
    let started = Instant::now();
    let q = prime_power(p, k)?;
    let closed = solve_support_system(system, q, e, SolveMode::Closed, budget)?;
    let (brute, status) = match solve_support_system(system, q, e, SolveMode::Brute, budget) {
        Ok(b) => {
            let status = if b == closed {
                Status::Ok
            } else {
                Status::Mismatch
            };
            (Some(b), status)
        }
        Err(Error::BudgetExceeded { .. }) => (None, Status::Skipped),
        Err(err) => return Err(err),
    };
    let result = json!({ "closed": closed, "brute": brute });
    let inputs = json!({ "system": system_name(system), "p": p, "k": k, "q": q, "e": e });
    Ok(Record::new("lemma", inputs, result, status, started))
}

/// A random window product with at most four factors of width at most
/// three and exponents at most four, and a target of matching degree.
fn random_instance(rng: &mut ChaCha8Rng) -> (WindowProduct, MonomialTarget) {
    let width = rng.gen_range(1..=3u64);
    let mut factors = BTreeMap::new();
    for _ in 0..rng.gen_range(0..=4) {
        factors.insert(rng.gen_range(0..4u64), rng.gen_range(0..=4u64));
    }
    let prod = WindowProduct::new(width, factors).expect("width is positive");
    let span = prod.factors().keys().max().map_or(1, |&j| j + width + 1);
    let mut target = BTreeMap::new();
    for _ in 0..prod.degree() {
        *target.entry(rng.gen_range(0..span)).or_insert(0) += 1;
    }
    (prod, MonomialTarget::new(target))
}

/// Compares the window-product coefficient routine with full expansion on
/// `count` seeded random instances, exactly and mod 3, 5 and 7.
pub fn windows(seed: u64, count: u64) -> Result<Record> {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut disagreements = Vec::new();
    let mut nonzero = 0u64;
    for i in 0..count {
        let (prod, target) = random_instance(&mut rng);
        let dense = dense_coefficient(&prod, &target);
        let mut ok = extract_coefficient_exact(&prod, &target) == dense;
        for p in [3u64, 5, 7] {
            ok &= BigUint::from(extract_coefficient(&prod, &target, p)?) == &dense % p;
        }
        if dense != BigUint::ZERO {
            nonzero += 1;
        }
        if !ok {
            disagreements.push(json!({ "instance": i, "product": prod, "target": target }));
        }
    }
    let status = if disagreements.is_empty() {
        Status::Ok
    } else {
        Status::Mismatch
    };
    let result = json!({ "count": count, "nonzero": nonzero, "disagreements": disagreements });
    Ok(Record::new(
        "windows",
        json!({ "seed": seed, "count": count }),
        result,
        status,
        started,
    ))
}

/// The identity `f_{a,q}(x^q - x) = Σ_c (x + c)^{q^{a+1}-2}` for
/// `a <= max_a`, and the reduction of `a` mod `pe` for `a` up to `2pe`.
pub fn identity(p: u64, k: u32, e: u32, max_a: i64, max_card: u64) -> Result<Vec<Record>> {
    let spec = make_field_with_cap(p, k, e, max_card)?;
    let q = spec.q();
    let pe = (p * e as u64) as i64;
    let mut out = Vec::new();
    for a in 1..=max_a.min(pe - 2) {
        let started = Instant::now();
        let ok = g_identity_check(&spec, a, max_card)?;
        let inputs = json!({ "check": "g-identity", "p": p, "k": k, "q": q, "e": e, "a": a });
        let status = if ok { Status::Ok } else { Status::Mismatch };
        out.push(Record::new(
            "identity",
            inputs,
            json!({ "holds": ok }),
            status,
            started,
        ));
    }
    for a in -1..=2 * pe {
        let started = Instant::now();
        let ok = reduction_check(&spec, a, max_card)?;
        let inputs = json!({ "check": "reduction", "p": p, "k": k, "q": q, "e": e, "a": a });
        let status = if ok { Status::Ok } else { Status::Mismatch };
        out.push(Record::new(
            "identity",
            inputs,
            json!({ "holds": ok }),
            status,
            started,
        ));
    }
    Ok(out)
}
