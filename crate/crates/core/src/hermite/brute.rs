//! `C(N) = -Σ_{x ∈ F_{q^e}} f(x)^N`, since `Σ_x x^m` is `-1` when
//! `q^e - 1` divides `m > 0` and `0` otherwise.

use num_bigint::BigUint;
use num_traits::Zero;

use super::{CNResult, Method};
use crate::error::{Error, Result};
use crate::ffield::{FieldSpec, DEFAULT_SWEEP_CAP};
use crate::ppcheck::{power_sum_index, Evaluator};

pub fn cn_bruteforce(spec: &FieldSpec, a: i64, n: &BigUint) -> Result<CNResult> {
    cn_bruteforce_capped(spec, a, n, DEFAULT_SWEEP_CAP)
}

pub fn cn_bruteforce_capped(spec: &FieldSpec, a: i64, n: &BigUint, cap: u64) -> Result<CNResult> {
    let order = spec.cardinality() - 1u32;
    if n.is_zero() || n >= &order {
        return Err(Error::ExponentOutOfRange { n: n.clone() });
    }
    if spec.size() > cap {
        return Err(Error::CapExceeded {
            size: spec.cardinality().clone(),
            cap,
        });
    }
    let eval = Evaluator::new(spec, a)?;
    let sum = power_sum_index(spec, &eval, n);
    let value = spec
        .as_prime_field(spec.neg(spec.wrap(sum))?)
        .expect("a power sum over the whole field lies in the prime field");
    Ok(CNResult {
        n: n.clone(),
        p: spec.p(),
        value,
        method: Method::Brute,
        plan: None,
        claimed: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffield::make_field;

    #[test]
    fn square_minus_one_in_f27() {
        let f = make_field(3, 1, 3).unwrap();
        let r = cn_bruteforce(&f, 2, &BigUint::from(8u32)).unwrap();
        assert_eq!(r.value, 2);
    }

    #[test]
    fn low_degree_gives_zero() {
        // f = X^{q-2}; C(1) = 0 because q - 2 < q² - 1
        let f = make_field(3, 1, 2).unwrap();
        assert_eq!(cn_bruteforce(&f, 1, &BigUint::from(1u32)).unwrap().value, 0);
    }

    #[test]
    fn wrapped_case_in_f81() {
        let f = make_field(3, 1, 4).unwrap();
        // -(u+1)u^{q-2} with u = 1 is -2 ≡ 1
        assert_eq!(cn_bruteforce(&f, 5, &BigUint::from(2u32)).unwrap().value, 1);
    }

    #[test]
    fn range_checks() {
        let f = make_field(3, 1, 2).unwrap();
        assert!(cn_bruteforce(&f, 2, &BigUint::from(0u32)).is_err());
        assert!(cn_bruteforce(&f, 2, &BigUint::from(8u32)).is_err());
        assert!(cn_bruteforce_capped(&f, 2, &BigUint::from(2u32), 5).is_err());
    }

    /// The power sum agrees with reducing `f^N` as a polynomial modulo
    /// `X^{q^e} - X` and reading off the top coefficient.
    #[test]
    fn agrees_with_polynomial_reduction() {
        for (p, k, e) in [(3u64, 1u32, 2u32), (5, 1, 2), (3, 1, 3)] {
            let f = make_field(p, k, e).unwrap();
            let size = f.size() as usize;
            let q = f.q();
            for a in 1..=(p as i64 * e as i64 - 2) {
                // f as a dense vector of F_p coefficients indexed by degree mod X^{size} - X
                let mut base = vec![0u64; size];
                let mut qi = 1u64;
                for _ in 0..a {
                    qi *= q;
                    let deg = reduce_degree(qi - 2, size as u64);
                    base[deg as usize] = (base[deg as usize] + 1) % p;
                }
                let mut power = vec![0u64; size];
                power[0] = 1;
                for n in 1..(size as u64 - 1) {
                    power = poly_mul(&power, &base, p);
                    let top = power[size - 1];
                    let got = cn_bruteforce(&f, a, &BigUint::from(n)).unwrap().value;
                    assert_eq!(got, top, "p={p} e={e} a={a} n={n}");
                }
            }
        }
    }

    fn reduce_degree(d: u64, size: u64) -> u64 {
        if d < size {
            d
        } else {
            (d - 1) % (size - 1) + 1
        }
    }

    fn poly_mul(x: &[u64], y: &[u64], p: u64) -> Vec<u64> {
        let size = x.len() as u64;
        let mut out = vec![0u64; x.len()];
        for (i, &a) in x.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in y.iter().enumerate() {
                if b == 0 {
                    continue;
                }
                let d = reduce_degree(i as u64 + j as u64, size) as usize;
                out[d] = (out[d] + a * b) % p;
            }
        }
        out
    }
}
