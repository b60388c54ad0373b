//! Binomial and multinomial coefficients, exactly and modulo a prime.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::ffield::is_prime;

/// Factorials and inverse factorials below `p`, for Lucas-style evaluation.
#[derive(Debug, Clone)]
pub struct LucasTable {
    p: u64,
    fact: Vec<u64>,
    inv_fact: Vec<u64>,
}

fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn powmod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, b, m);
        }
        b = mulmod(b, b, m);
        e >>= 1;
    }
    acc
}

/// Largest prime for which a table is built; `p` beyond this would need a
/// different strategy for factorials below `p`.
pub const MAX_TABLE_PRIME: u64 = 1 << 24;

impl LucasTable {
    pub fn new(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if p > MAX_TABLE_PRIME {
            return Err(Error::Precondition(format!(
                "prime {p} too large for factorial tables"
            )));
        }
        let n = p as usize;
        let mut fact = vec![1u64; n];
        for i in 1..n {
            fact[i] = mulmod(fact[i - 1], i as u64, p);
        }
        let mut inv_fact = vec![1u64; n];
        inv_fact[n - 1] = powmod(fact[n - 1], p - 2, p);
        for i in (1..n).rev() {
            inv_fact[i - 1] = mulmod(inv_fact[i], i as u64, p);
        }
        Ok(LucasTable { p, fact, inv_fact })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    fn small(&self, n: u64, k: u64) -> u64 {
        if k > n {
            return 0;
        }
        let (n, k) = (n as usize, k as usize);
        mulmod(
            mulmod(self.fact[n], self.inv_fact[k], self.p),
            self.inv_fact[n - k],
            self.p,
        )
    }

    /// `binom(n, k) mod p` by Lucas' theorem.
    pub fn binom(&self, mut n: u64, mut k: u64) -> u64 {
        let mut acc = 1 % self.p;
        while k > 0 || n > 0 {
            let (nd, kd) = (n % self.p, k % self.p);
            if kd > nd {
                return 0;
            }
            acc = mulmod(acc, self.small(nd, kd), self.p);
            n /= self.p;
            k /= self.p;
        }
        acc
    }

    pub fn binom_big(&self, n: &BigUint, k: &BigUint) -> u64 {
        if k > n {
            return 0;
        }
        if let (Some(n), Some(k)) = (n.to_u64(), k.to_u64()) {
            return self.binom(n, k);
        }
        let nd = n.to_radix_le(self.p as u32);
        let kd = k.to_radix_le(self.p as u32);
        let mut acc = 1 % self.p;
        for (i, &d) in nd.iter().enumerate() {
            let kd = kd.get(i).copied().unwrap_or(0) as u64;
            acc = mulmod(acc, self.small(d as u64, kd), self.p);
            if acc == 0 {
                break;
            }
        }
        acc
    }

    /// `(Σ k_i)! / ∏ k_i! mod p`. Zero exactly when adding the parts in base
    /// `p` produces a carry.
    pub fn multinomial(&self, parts: &[u64]) -> u64 {
        let mut rest: Vec<u64> = parts.iter().copied().filter(|&k| k > 0).collect();
        let mut acc = 1 % self.p;
        while rest.iter().any(|&k| k > 0) {
            let mut total = 0u64;
            let mut denom = 1u64;
            for k in rest.iter_mut() {
                let d = *k % self.p;
                total += d;
                if total >= self.p {
                    return 0;
                }
                denom = mulmod(denom, self.inv_fact[d as usize], self.p);
                *k /= self.p;
            }
            acc = mulmod(
                acc,
                mulmod(self.fact[total as usize], denom, self.p),
                self.p,
            );
        }
        acc
    }

    pub fn multinomial_big(&self, parts: &[BigUint]) -> u64 {
        if let Some(small) = parts
            .iter()
            .map(|k| k.to_u64())
            .collect::<Option<Vec<u64>>>()
        {
            if small
                .iter()
                .try_fold(0u64, |acc, &k| acc.checked_add(k))
                .is_some()
            {
                return self.multinomial(&small);
            }
        }
        let digits: Vec<Vec<u8>> = parts
            .iter()
            .map(|k| {
                if k.is_zero() {
                    Vec::new()
                } else {
                    k.to_radix_le(self.p as u32)
                }
            })
            .collect();
        let len = digits.iter().map(Vec::len).max().unwrap_or(0);
        let mut acc = 1 % self.p;
        for pos in 0..len {
            let mut total = 0u64;
            let mut denom = 1u64;
            for d in &digits {
                let d = d.get(pos).copied().unwrap_or(0) as u64;
                total += d;
                if total >= self.p {
                    return 0;
                }
                denom = mulmod(denom, self.inv_fact[d as usize], self.p);
            }
            acc = mulmod(
                acc,
                mulmod(self.fact[total as usize], denom, self.p),
                self.p,
            );
        }
        acc
    }

    /// `binom(n, k) mod p` for any integer `n`, using
    /// `binom(-m, k) = (-1)^k binom(m + k - 1, k)`.
    pub fn generalized_binom(&self, n: &BigInt, k: u64) -> u64 {
        if n.sign() != Sign::Minus {
            return self.binom_big(n.magnitude(), &BigUint::from(k));
        }
        let m = n.magnitude();
        let top = m + BigUint::from(k) - BigUint::one();
        let v = self.binom_big(&top, &BigUint::from(k));
        if k % 2 == 1 {
            (self.p - v) % self.p
        } else {
            v
        }
    }
}

/// `binom(n, k) mod p` without keeping a table around.
pub fn binomial_mod_p(n: u64, k: u64, p: u64) -> Result<u64> {
    Ok(LucasTable::new(p)?.binom(n, k))
}

/// Multinomial `(Σ k_i)! / ∏ k_i!` modulo `p`.
pub fn multinomial_mod_p(parts: &[BigUint], p: u64) -> Result<u64> {
    Ok(LucasTable::new(p)?.multinomial_big(parts))
}

/// Generalized binomial `n(n-1)⋯(n-k+1)/k!` modulo `p`.
pub fn generalized_binomial_mod_p(n: &BigInt, k: u64, p: u64) -> Result<u64> {
    Ok(LucasTable::new(p)?.generalized_binom(n, k))
}

/// Exact `binom(n, k)`.
pub fn binomial_exact(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// Exact generalized binomial `n(n-1)⋯(n-k+1)/k!` for integer `n`.
pub fn generalized_binomial_exact(n: &BigInt, k: u64) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..k {
        acc *= n - BigInt::from(i);
        acc /= BigInt::from(i + 1);
    }
    acc
}

/// Exact multinomial coefficient.
pub fn multinomial_exact(parts: &[u64]) -> BigUint {
    let mut total = 0u64;
    let mut acc = BigUint::one();
    for &k in parts {
        total += k;
        acc *= binomial_exact(total, k);
    }
    acc
}

/// Residue of `v` in `[0, p)`.
pub fn residue(v: &BigInt, p: u64) -> u64 {
    v.mod_floor(&BigInt::from(p))
        .to_u64()
        .expect("residue below p")
}

/// Residue of a signed machine integer in `[0, p)`.
pub fn residue_i64(v: i64, p: u64) -> u64 {
    (v as i128).rem_euclid(p as i128) as u64
}

/// Prime factorization of `|n|` by trial division, as `(prime, exponent)`
/// pairs in increasing order. Meant for integers whose prime factors are
/// small, such as products of binomial coefficients.
pub fn factorize(n: &BigInt) -> Vec<(u64, u32)> {
    let mut rest = n.abs().to_biguint().expect("absolute value");
    let mut out = Vec::new();
    if rest.is_zero() {
        return out;
    }
    let mut d = 2u64;
    while BigUint::from(d) * BigUint::from(d) <= rest {
        let db = BigUint::from(d);
        let mut count = 0;
        loop {
            let (quo, rem) = rest.div_rem(&db);
            if !rem.is_zero() {
                break;
            }
            rest = quo;
            count += 1;
        }
        if count > 0 {
            out.push((d, count));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if !rest.is_one() {
        let last = rest
            .to_u64()
            .expect("cofactor fits a machine word for these inputs");
        out.push((last, 1));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn naive_mod(n: &BigUint, p: u64) -> u64 {
        (n % p).to_u64().unwrap()
    }

    #[test]
    fn lucas_agrees_with_exact_binomials() {
        for p in [2u64, 3, 5, 7, 13] {
            let t = LucasTable::new(p).unwrap();
            for n in 0..120 {
                for k in 0..=n + 2 {
                    assert_eq!(
                        t.binom(n, k),
                        naive_mod(&binomial_exact(n, k), p),
                        "p={p} n={n} k={k}"
                    );
                }
            }
        }
    }

    #[test]
    fn rejects_composites() {
        assert_eq!(LucasTable::new(9).unwrap_err(), Error::NotPrime(9));
    }

    #[test]
    fn big_arguments() {
        let t = LucasTable::new(3).unwrap();
        let n = BigUint::from(3u32).pow(60) + 5u32;
        assert_eq!(t.binom_big(&n, &BigUint::from(2u32)), 1); // binom(2,2) at the bottom digit
        assert_eq!(t.binom_big(&n, &BigUint::from(6u32)), 0);
    }

    #[test]
    fn generalized_binomials() {
        assert_eq!(
            generalized_binomial_exact(&BigInt::from(-1), 5),
            BigInt::from(-1)
        );
        assert_eq!(
            generalized_binomial_exact(&BigInt::from(-2), 3),
            BigInt::from(-4)
        );
        assert_eq!(
            generalized_binomial_exact(&BigInt::from(5), 7),
            BigInt::zero()
        );
        let t = LucasTable::new(7).unwrap();
        for n in -30i64..30 {
            for k in 0..20 {
                let exact = generalized_binomial_exact(&BigInt::from(n), k);
                assert_eq!(
                    t.generalized_binom(&BigInt::from(n), k),
                    residue(&exact, 7),
                    "n={n} k={k}"
                );
            }
        }
    }

    #[test]
    fn known_factorizations() {
        let v = binomial_exact(15, 7);
        assert_eq!(v, BigUint::from(6435u32));
        assert_eq!(
            factorize(&BigInt::from(6435)),
            vec![(3, 2), (5, 1), (11, 1), (13, 1)]
        );
        assert_eq!(factorize(&BigInt::from(-70)), vec![(2, 1), (5, 1), (7, 1)]);
        assert!(factorize(&BigInt::zero()).is_empty());
        assert!(factorize(&BigInt::one()).is_empty());
    }

    #[test]
    fn residues() {
        assert_eq!(residue(&BigInt::from(-1), 5), 4);
        assert_eq!(residue_i64(-7, 3), 2);
    }

    proptest! {
        #[test]
        fn multinomial_mod_matches_exact(parts in proptest::collection::vec(0u64..80, 1..5),
                                         pi in 0usize..5) {
            let p = [2u64, 3, 5, 7, 11][pi];
            prop_assume!(parts.iter().sum::<u64>() <= 300);
            let t = LucasTable::new(p).unwrap();
            let exact = multinomial_exact(&parts);
            prop_assert_eq!(t.multinomial(&parts), naive_mod(&exact, p));
            let big: Vec<BigUint> = parts.iter().map(|&k| BigUint::from(k)).collect();
            prop_assert_eq!(t.multinomial_big(&big), naive_mod(&exact, p));
        }

        #[test]
        fn negative_shift_congruence(u in 1u64..40, k in 0u64..60, pi in 0usize..4) {
            // binom(q - u, k) ≡ binom(-u, k) mod p once k < q
            let p = [3u64, 5, 7, 11][pi];
            let q = p.pow(3);
            let t = LucasTable::new(p).unwrap();
            prop_assume!(u < q && k < q);
            prop_assert_eq!(
                t.generalized_binom(&BigInt::from(q as i64 - u as i64), k),
                t.generalized_binom(&BigInt::from(-(u as i64)), k)
            );
        }

        #[test]
        fn vandermonde(m in 0u64..60, n in 0u64..60, k in 0u64..80) {
            let lhs = binomial_exact(m + n, k);
            let rhs: BigUint = (0..=k).map(|i| binomial_exact(m, i) * binomial_exact(n, k - i)).sum();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
