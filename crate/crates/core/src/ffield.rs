//! Exact arithmetic in `F_{p^n}` with `n = k·e`, viewed as `F_{q^e}` for `q = p^k`.
//!
//! A field is one extension of `F_p` cut out by the lexicographically smallest
//! monic irreducible polynomial of degree `n`. Elements are stored as packed
//! coordinate vectors: the coordinates `c_0, …, c_{n-1}` with respect to the
//! power basis `1, t, …, t^{n-1}` are read as the base-`p` integer
//! `c_0 + c_1·p + ⋯ + c_{n-1}·p^{n-1}`. That packed index is also the
//! enumeration order of the field, so `0` comes first and `1` second.
//!
//! Fields up to [`LOG_TABLE_LIMIT`] elements carry discrete-log, antilog and
//! Zech tables; multiplication, inversion, powering and addition (odd `p`) go
//! through them. The polynomial routines stay available and the tables are
//! tested bit-exact against them.

use std::ops::Range;
use std::sync::atomic::{AtomicU64, Ordering};

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Packed indices are `u32`, so no field may have more elements than this.
pub const DEFAULT_FIELD_CAP: u64 = u32::MAX as u64;
/// Default limit for anything that walks every element of a field.
pub const DEFAULT_SWEEP_CAP: u64 = 1 << 22;
/// Fields at most this large get log/antilog/Zech tables.
pub const LOG_TABLE_LIMIT: u64 = 1 << 20;

const NO_LOG: u32 = u32::MAX;

static NEXT_FIELD_ID: AtomicU64 = AtomicU64::new(1);

/// Deterministic trial-division primality test.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Distinct prime divisors in increasing order.
pub fn prime_divisors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        exp >>= 1;
    }
    acc
}

/// Dense polynomials over `F_p`, constant term first. Used for modulus search
/// and as the reference multiplication path.
mod fp_poly {
    use super::pow_mod;

    pub fn trim(a: &mut Vec<u64>) {
        while a.last() == Some(&0) {
            a.pop();
        }
    }

    pub fn degree(a: &[u64]) -> Option<usize> {
        a.iter().rposition(|&c| c != 0)
    }

    /// `a mod f` for monic `f`.
    pub fn reduce(a: &mut Vec<u64>, f: &[u64], p: u64) {
        let n = f.len() - 1;
        while a.len() > n {
            let top = a.pop().unwrap();
            if top == 0 {
                continue;
            }
            let base = a.len() - n;
            for (i, &fc) in f[..n].iter().enumerate() {
                let sub = top * fc % p;
                a[base + i] = (a[base + i] + p - sub) % p;
            }
        }
        trim(a);
    }

    pub fn mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x * y) % p;
            }
        }
        out
    }

    pub fn mulmod(a: &[u64], b: &[u64], f: &[u64], p: u64) -> Vec<u64> {
        let mut out = mul(a, b, p);
        reduce(&mut out, f, p);
        out
    }

    pub fn powmod(base: &[u64], mut exp: u64, f: &[u64], p: u64) -> Vec<u64> {
        let mut acc = vec![1u64];
        let mut b = base.to_vec();
        reduce(&mut b, f, p);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = mulmod(&acc, &b, f, p);
            }
            b = mulmod(&b, &b, f, p);
            exp >>= 1;
        }
        acc
    }

    pub fn sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let len = a.len().max(b.len());
        let mut out: Vec<u64> = (0..len)
            .map(|i| {
                let x = a.get(i).copied().unwrap_or(0);
                let y = b.get(i).copied().unwrap_or(0);
                (x + p - y) % p
            })
            .collect();
        trim(&mut out);
        out
    }

    pub fn rem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let mut r = a.to_vec();
        trim(&mut r);
        let db = degree(b).expect("division by zero polynomial");
        let inv = pow_mod(b[db], p - 2, p);
        while let Some(dr) = degree(&r) {
            if dr < db {
                break;
            }
            let c = r[dr] * inv % p;
            let shift = dr - db;
            for (i, &bc) in b[..=db].iter().enumerate() {
                r[shift + i] = (r[shift + i] + p - c * bc % p) % p;
            }
            trim(&mut r);
        }
        r
    }

    pub fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let mut x = a.to_vec();
        let mut y = b.to_vec();
        trim(&mut x);
        trim(&mut y);
        while !y.is_empty() {
            let r = rem(&x, &y, p);
            x = y;
            y = r;
        }
        x
    }

    /// Ben-Or: a monic `f` of degree `n` is irreducible iff
    /// `gcd(f, X^{p^d} - X) = 1` for every `1 <= d <= n/2`.
    pub fn is_irreducible(f: &[u64], p: u64) -> bool {
        let n = f.len() - 1;
        if n == 1 {
            return true;
        }
        if f[0] == 0 {
            return false;
        }
        let x = vec![0u64, 1];
        let mut h = x.clone();
        for _ in 0..n / 2 {
            h = powmod(&h, p, f, p);
            let g = gcd(f, &sub(&h, &x, p), p);
            if degree(&g).unwrap_or(0) > 0 {
                return false;
            }
        }
        true
    }
}

/// Exhaustive search for the smallest monic irreducible of degree `n` over
/// `F_p`. Candidates are ordered by the integer `Σ c_i p^i` of their lower
/// coefficients, i.e. lexicographically from `c_{n-1}` down to `c_0`.
pub fn smallest_irreducible(p: u64, n: u32) -> Vec<u32> {
    let n = n as usize;
    let mut lower = vec![0u64; n];
    loop {
        let mut f = lower.clone();
        f.push(1);
        if fp_poly::is_irreducible(&f, p) {
            return f.into_iter().map(|c| c as u32).collect();
        }
        // increment base-p counter
        let mut i = 0;
        loop {
            lower[i] += 1;
            if lower[i] < p {
                break;
            }
            lower[i] = 0;
            i += 1;
            assert!(i < n, "no irreducible polynomial of degree {n} over F_{p}");
        }
    }
}

/// An element of a particular [`FieldSpec`]; the packed coordinate index plus
/// the identity of the owning field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement {
    field: u64,
    index: u32,
}

impl FieldElement {
    /// Packed coordinates; also the position in the field's enumeration.
    pub fn index(&self) -> u32 {
        self.index
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Op {
    Add,
    Sub,
    Mul,
    Div,
}

#[derive(Debug, Clone)]
struct LogTables {
    order: u32,
    exp: Vec<u32>,
    log: Vec<u32>,
    zech: Vec<u32>,
}

/// Immutable description of `F_{q^e}` with `q = p^k`.
#[derive(Debug, Clone)]
pub struct FieldSpec {
    id: u64,
    p: u32,
    k: u32,
    e: u32,
    n: u32,
    q: u64,
    size: u64,
    modulus: Vec<u32>,
    cardinality: BigUint,
    place: Vec<u32>,
    frob_cols: Vec<Vec<u32>>,
    tables: Option<LogTables>,
}

/// Builds `F_{q^e}` with `q = p^k` using the default cap.
pub fn make_field(p: u64, k: u32, e: u32) -> Result<FieldSpec> {
    FieldSpec::new(p, k, e, DEFAULT_FIELD_CAP)
}

pub fn make_field_with_cap(p: u64, k: u32, e: u32, cap: u64) -> Result<FieldSpec> {
    FieldSpec::new(p, k, e, cap)
}

/// Applies one of the four field operations.
pub fn field_arith(
    spec: &FieldSpec,
    x: FieldElement,
    y: FieldElement,
    op: Op,
) -> Result<FieldElement> {
    match op {
        Op::Add => spec.add(x, y),
        Op::Sub => spec.sub(x, y),
        Op::Mul => spec.mul(x, y),
        Op::Div => spec.div(x, y),
    }
}

impl FieldSpec {
    pub fn new(p: u64, k: u32, e: u32, cap: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if k == 0 || e == 0 {
            return Err(Error::BadDegree { k, e });
        }
        let n = k.checked_mul(e).ok_or(Error::BadDegree { k, e })?;
        let cardinality = BigUint::from(p).pow(n);
        let cap = cap.min(DEFAULT_FIELD_CAP);
        if cardinality > BigUint::from(cap) {
            return Err(Error::CapExceeded {
                size: cardinality,
                cap,
            });
        }
        let size = cardinality.to_u64().expect("bounded by cap");
        let q = p.pow(k);
        let modulus = smallest_irreducible(p, n);
        let place = (0..n).map(|i| p.pow(i) as u32).collect();
        let mut spec = FieldSpec {
            id: NEXT_FIELD_ID.fetch_add(1, Ordering::Relaxed),
            p: p as u32,
            k,
            e,
            n,
            q,
            size,
            modulus,
            cardinality,
            place,
            frob_cols: Vec::new(),
            tables: None,
        };
        spec.frob_cols = (0..n)
            .map(|j| {
                let basis = spec.poly_of(spec.p_pow_index(j));
                let img = fp_poly::powmod(&basis, p, &spec.modulus_u64(), p);
                spec.coords_from_poly(&img)
            })
            .collect();
        if size <= LOG_TABLE_LIMIT {
            spec.tables = Some(spec.build_tables());
        }
        Ok(spec)
    }

    pub fn p(&self) -> u64 {
        self.p as u64
    }
    pub fn k(&self) -> u32 {
        self.k
    }
    pub fn e(&self) -> u32 {
        self.e
    }
    /// Degree `k·e` of the field over `F_p`.
    pub fn degree(&self) -> u32 {
        self.n
    }
    pub fn q(&self) -> u64 {
        self.q
    }
    /// Number of elements as a machine integer.
    pub fn size(&self) -> u64 {
        self.size
    }
    pub fn cardinality(&self) -> &BigUint {
        &self.cardinality
    }
    /// Monic modulus, constant term first, length `degree + 1`.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }
    pub fn has_log_tables(&self) -> bool {
        self.tables.is_some()
    }

    fn modulus_u64(&self) -> Vec<u64> {
        self.modulus.iter().map(|&c| c as u64).collect()
    }

    fn p_pow_index(&self, j: u32) -> u32 {
        self.place[j as usize]
    }

    fn check(&self, x: FieldElement) -> Result<()> {
        if x.field == self.id {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    pub(crate) fn wrap(&self, index: u32) -> FieldElement {
        FieldElement {
            field: self.id,
            index,
        }
    }

    pub fn zero(&self) -> FieldElement {
        self.wrap(0)
    }

    pub fn one(&self) -> FieldElement {
        self.wrap(1)
    }

    /// Image of an integer under `Z -> F_p -> F_{q^e}`.
    pub fn from_int(&self, c: i64) -> FieldElement {
        self.wrap(c.rem_euclid(self.p as i64) as u32)
    }

    pub fn element(&self, coords: &[u32]) -> Result<FieldElement> {
        if coords.len() > self.n as usize || coords.iter().any(|&c| c >= self.p) {
            return Err(Error::BadCoordinates);
        }
        Ok(self.wrap(self.pack(coords)))
    }

    pub fn element_from_index(&self, index: u64) -> Result<FieldElement> {
        if index >= self.size {
            return Err(Error::BadCoordinates);
        }
        Ok(self.wrap(index as u32))
    }

    /// Power-basis coordinates, constant term first.
    pub fn coords(&self, x: FieldElement) -> Result<Vec<u32>> {
        self.check(x)?;
        Ok(self.unpack(x.index))
    }

    /// The residue `c` when `x = c·1` lies in the prime field.
    pub fn as_prime_field(&self, x: FieldElement) -> Option<u64> {
        (x.field == self.id && x.index < self.p).then_some(x.index as u64)
    }

    fn unpack(&self, mut index: u32) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.n as usize);
        for _ in 0..self.n {
            out.push(index % self.p);
            index /= self.p;
        }
        out
    }

    fn pack(&self, coords: &[u32]) -> u32 {
        coords.iter().zip(&self.place).map(|(&c, &w)| c * w).sum()
    }

    fn poly_of(&self, index: u32) -> Vec<u64> {
        let mut v: Vec<u64> = self.unpack(index).into_iter().map(u64::from).collect();
        fp_poly::trim(&mut v);
        v
    }

    fn coords_from_poly(&self, poly: &[u64]) -> Vec<u32> {
        (0..self.n as usize)
            .map(|i| poly.get(i).copied().unwrap_or(0) as u32)
            .collect()
    }

    fn index_from_poly(&self, poly: &[u64]) -> u32 {
        self.pack(&self.coords_from_poly(poly))
    }

    // ---- packed-index arithmetic -------------------------------------------------

    pub(crate) fn add_digits(&self, a: u32, b: u32) -> u32 {
        if self.p == 2 {
            return a ^ b;
        }
        let p = self.p as u64;
        let (mut a, mut b) = (a as u64, b as u64);
        let mut out = 0u64;
        for &w in &self.place {
            out += (a % p + b % p) % p * w as u64;
            a /= p;
            b /= p;
        }
        out as u32
    }

    pub(crate) fn neg_index(&self, a: u32) -> u32 {
        if self.p == 2 {
            return a;
        }
        let mut a = a;
        let mut out = 0u32;
        for &w in &self.place {
            let c = a % self.p;
            out += ((self.p - c) % self.p) * w;
            a /= self.p;
        }
        out
    }

    fn add_zech(&self, t: &LogTables, a: u32, b: u32) -> u32 {
        if a == 0 {
            return b;
        }
        if b == 0 {
            return a;
        }
        let la = t.log[a as usize];
        let lb = t.log[b as usize];
        let d = (lb + t.order - la) % t.order;
        let z = t.zech[d as usize];
        if z == NO_LOG {
            0
        } else {
            t.exp[((la as u64 + z as u64) % t.order as u64) as usize]
        }
    }

    pub(crate) fn add_index(&self, a: u32, b: u32) -> u32 {
        match &self.tables {
            Some(t) if self.p != 2 => self.add_zech(t, a, b),
            _ => self.add_digits(a, b),
        }
    }

    pub(crate) fn mul_poly(&self, a: u32, b: u32) -> u32 {
        let prod = fp_poly::mulmod(
            &self.poly_of(a),
            &self.poly_of(b),
            &self.modulus_u64(),
            self.p as u64,
        );
        self.index_from_poly(&prod)
    }

    pub(crate) fn mul_index(&self, a: u32, b: u32) -> u32 {
        match &self.tables {
            Some(t) => {
                if a == 0 || b == 0 {
                    0
                } else {
                    let s = t.log[a as usize] as u64 + t.log[b as usize] as u64;
                    t.exp[(s % t.order as u64) as usize]
                }
            }
            None => self.mul_poly(a, b),
        }
    }

    fn pow_poly(&self, a: u32, mut exp: u64) -> u32 {
        let mut acc = 1u32;
        let mut base = a;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul_poly(acc, base);
            }
            base = self.mul_poly(base, base);
            exp >>= 1;
        }
        acc
    }

    /// `a^exp`, with `exp` already reduced mod `size - 1` unless `a == 0`.
    pub(crate) fn pow_index_u64(&self, a: u32, exp: u64) -> u32 {
        if exp == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let order = self.size - 1;
        let r = exp % order;
        match &self.tables {
            Some(t) => t.exp[((t.log[a as usize] as u64 * r) % order) as usize],
            None => self.pow_poly(a, r),
        }
    }

    pub(crate) fn pow_index(&self, a: u32, exp: &BigUint) -> u32 {
        if exp.is_zero() {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let r = (exp % (self.size - 1)).to_u64().unwrap();
        // r == 0 with exp > 0 means a^(multiple of the group order) = 1
        if r == 0 {
            return 1;
        }
        self.pow_index_u64(a, r)
    }

    pub(crate) fn inv_index(&self, a: u32) -> u32 {
        debug_assert!(a != 0);
        match &self.tables {
            Some(t) => t.exp[((t.order - t.log[a as usize]) % t.order) as usize],
            None => self.pow_poly(a, self.size - 2),
        }
    }

    fn build_tables(&self) -> LogTables {
        let order = (self.size - 1) as u32;
        let factors = prime_divisors(order as u64);
        let gen = (1..self.size as u32)
            .find(|&g| {
                self.size == 2
                    || (g > 1
                        && factors
                            .iter()
                            .all(|&r| self.pow_poly(g, order as u64 / r) != 1))
            })
            .expect("multiplicative group is cyclic");
        let mut exp = Vec::with_capacity(order as usize);
        let mut log = vec![NO_LOG; self.size as usize];
        let mut cur = 1u32;
        for i in 0..order {
            exp.push(cur);
            log[cur as usize] = i;
            cur = self.mul_poly(cur, gen);
        }
        let zech = exp
            .iter()
            .map(|&x| {
                let y = self.add_digits(x, 1);
                if y == 0 {
                    NO_LOG
                } else {
                    log[y as usize]
                }
            })
            .collect();
        LogTables {
            order,
            exp,
            log,
            zech,
        }
    }

    // ---- checked public arithmetic ----------------------------------------------

    pub fn add(&self, x: FieldElement, y: FieldElement) -> Result<FieldElement> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.wrap(self.add_index(x.index, y.index)))
    }

    pub fn sub(&self, x: FieldElement, y: FieldElement) -> Result<FieldElement> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.wrap(self.add_index(x.index, self.neg_index(y.index))))
    }

    pub fn neg(&self, x: FieldElement) -> Result<FieldElement> {
        self.check(x)?;
        Ok(self.wrap(self.neg_index(x.index)))
    }

    pub fn mul(&self, x: FieldElement, y: FieldElement) -> Result<FieldElement> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.wrap(self.mul_index(x.index, y.index)))
    }

    pub fn inv(&self, x: FieldElement) -> Result<FieldElement> {
        self.check(x)?;
        if x.index == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(self.wrap(self.inv_index(x.index)))
    }

    pub fn div(&self, x: FieldElement, y: FieldElement) -> Result<FieldElement> {
        let yi = self.inv(y)?;
        self.mul(x, yi)
    }

    /// Multiplication through the polynomial representation only, bypassing
    /// any log tables.
    pub fn mul_reference(&self, x: FieldElement, y: FieldElement) -> Result<FieldElement> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.wrap(self.mul_poly(x.index, y.index)))
    }

    /// Addition coordinate by coordinate, bypassing the Zech table.
    pub fn add_reference(&self, x: FieldElement, y: FieldElement) -> Result<FieldElement> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.wrap(self.add_digits(x.index, y.index)))
    }

    /// `x^n` by square-and-multiply; `0^0 = 1`.
    pub fn pow(&self, x: FieldElement, n: &BigUint) -> Result<FieldElement> {
        self.check(x)?;
        Ok(self.wrap(self.pow_index(x.index, n)))
    }

    pub fn pow_u64(&self, x: FieldElement, n: u64) -> Result<FieldElement> {
        self.pow(x, &BigUint::from(n))
    }

    /// `x^(q^i)`. Uses the log tables when present, otherwise `i·k`
    /// applications of the `p`-power linear map.
    pub fn frobenius_q(&self, x: FieldElement, i: u64) -> Result<FieldElement> {
        self.check(x)?;
        Ok(self.wrap(self.frob_index(x.index, i)))
    }

    pub(crate) fn frob_index(&self, a: u32, i: u64) -> u32 {
        match &self.tables {
            Some(t) if a != 0 => {
                let order = t.order as u64;
                let qi = pow_mod(self.q % order, i, order);
                t.exp[((t.log[a as usize] as u64 * qi) % order) as usize]
            }
            _ => self.frob_linear_index(a, i * self.k as u64),
        }
    }

    /// `x^(p^times)` through the precomputed `F_p`-linear matrix of `y ↦ y^p`.
    pub fn frobenius_p_linear(&self, x: FieldElement, times: u64) -> Result<FieldElement> {
        self.check(x)?;
        Ok(self.wrap(self.frob_linear_index(x.index, times)))
    }

    fn frob_linear_index(&self, a: u32, times: u64) -> u32 {
        let reps = times % self.n as u64;
        let p = self.p as u64;
        let mut cur = self.unpack(a);
        for _ in 0..reps {
            let mut next = vec![0u64; self.n as usize];
            for (j, &c) in cur.iter().enumerate() {
                if c == 0 {
                    continue;
                }
                for (i, &m) in self.frob_cols[j].iter().enumerate() {
                    next[i] = (next[i] + c as u64 * m as u64) % p;
                }
            }
            cur = next.into_iter().map(|v| v as u32).collect();
        }
        self.pack(&cur)
    }

    /// All elements, in packed-index order.
    pub fn elements(&self) -> ElementStream {
        ElementStream {
            field: self.id,
            range: 0..self.size,
        }
    }

    /// The copy of `F_q` inside the field: the fixed points of `x ↦ x^q`.
    pub fn subfield_q(&self) -> Vec<FieldElement> {
        self.elements()
            .filter(|&x| self.frobenius_q(x, 1).map(|y| y == x).unwrap_or(false))
            .collect()
    }
}

/// Enumerates a field after checking it against a sweep cap.
pub fn enumerate_elements(spec: &FieldSpec, cap: u64) -> Result<ElementStream> {
    if spec.size() > cap {
        return Err(Error::CapExceeded {
            size: spec.cardinality().clone(),
            cap,
        });
    }
    Ok(spec.elements())
}

/// A contiguous run of packed indices of one field. Streams split into
/// disjoint contiguous sub-ranges for parallel consumption.
#[derive(Debug, Clone)]
pub struct ElementStream {
    field: u64,
    range: Range<u64>,
}

impl ElementStream {
    pub fn len_remaining(&self) -> u64 {
        self.range.end - self.range.start
    }

    pub fn index_range(&self) -> Range<u64> {
        self.range.clone()
    }

    /// Splits into at most `parts` contiguous pieces covering the same range.
    pub fn split(&self, parts: usize) -> Vec<ElementStream> {
        let parts = parts.max(1) as u64;
        let len = self.len_remaining();
        let chunk = len.div_ceil(parts).max(1);
        let mut out = Vec::new();
        let mut start = self.range.start;
        while start < self.range.end {
            let end = (start + chunk).min(self.range.end);
            out.push(ElementStream {
                field: self.field,
                range: start..end,
            });
            start = end;
        }
        out
    }
}

impl Iterator for ElementStream {
    type Item = FieldElement;

    fn next(&mut self) -> Option<FieldElement> {
        self.range.next().map(|i| FieldElement {
            field: self.field,
            index: i as u32,
        })
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        self.range.size_hint()
    }
}

impl ExactSizeIterator for ElementStream {}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn poly_has_root(f: &[u32], p: u32) -> bool {
        (0..p).any(|x| {
            f.iter()
                .rev()
                .fold(0u64, |acc, &c| (acc * x as u64 + c as u64) % p as u64)
                == 0
        })
    }

    #[test]
    fn prime_field_modulus_is_x() {
        let f = make_field(3, 1, 1).unwrap();
        assert_eq!(f.modulus(), &[0, 1]);
        assert_eq!(f.size(), 3);
    }

    #[test]
    fn quadratic_modulus_over_f3_has_no_root() {
        let f = make_field(3, 1, 2).unwrap();
        assert_eq!(f.modulus().len(), 3);
        assert!(!poly_has_root(f.modulus(), 3));
        // smallest in the (c1, c0) ordering: X^2 + 1
        assert_eq!(f.modulus(), &[1, 0, 1]);
    }

    #[test]
    fn cubic_modulus_over_f2_is_the_smaller_trinomial() {
        // enumerate every monic cubic over F_2 and keep the irreducible ones
        let mut irreducible = Vec::new();
        for lower in 0u32..8 {
            let f = [lower & 1, (lower >> 1) & 1, (lower >> 2) & 1, 1];
            // a cubic is irreducible iff it has no root
            if !poly_has_root(&f, 2) {
                irreducible.push(f.to_vec());
            }
        }
        assert_eq!(irreducible, vec![vec![1, 1, 0, 1], vec![1, 0, 1, 1]]);
        let f = make_field(2, 1, 3).unwrap();
        assert_eq!(f.modulus(), &[1, 1, 0, 1]);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert_eq!(make_field(4, 1, 2).unwrap_err(), Error::NotPrime(4));
        assert!(matches!(make_field(3, 0, 2), Err(Error::BadDegree { .. })));
        assert!(matches!(
            make_field_with_cap(3, 1, 10, 1000),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn t_squared_reduces_mod_modulus() {
        let f = make_field(3, 1, 2).unwrap();
        let t = f.element(&[0, 1]).unwrap();
        // modulus X^2 + 1, so t^2 = -1 = 2
        assert_eq!(f.coords(f.mul(t, t).unwrap()).unwrap(), vec![2, 0]);
    }

    #[test]
    fn identities_and_errors() {
        let f = make_field(5, 1, 2).unwrap();
        let g = make_field(5, 1, 2).unwrap();
        for x in f.elements() {
            assert_eq!(f.add(x, f.zero()).unwrap(), x);
            if x != f.zero() {
                assert_eq!(f.mul(x, f.inv(x).unwrap()).unwrap(), f.one());
            }
        }
        assert_eq!(f.div(f.one(), f.zero()).unwrap_err(), Error::DivisionByZero);
        assert_eq!(f.add(f.one(), g.one()).unwrap_err(), Error::FieldMismatch);
    }

    #[test]
    fn field_axioms_on_random_triples() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for (p, k, e) in [
            (2, 1, 5),
            (3, 1, 4),
            (3, 2, 2),
            (5, 1, 3),
            (7, 1, 2),
            (2, 2, 3),
        ] {
            let f = make_field(p, k, e).unwrap();
            let el = |r: &mut ChaCha8Rng| f.element_from_index(r.gen_range(0..f.size())).unwrap();
            for _ in 0..10_000 {
                let (x, y, z) = (el(&mut rng), el(&mut rng), el(&mut rng));
                let xy = f.add(x, y).unwrap();
                assert_eq!(
                    f.add(xy, z).unwrap(),
                    f.add(x, f.add(y, z).unwrap()).unwrap()
                );
                assert_eq!(
                    f.mul(f.mul(x, y).unwrap(), z).unwrap(),
                    f.mul(x, f.mul(y, z).unwrap()).unwrap()
                );
                assert_eq!(xy, f.add(y, x).unwrap());
                assert_eq!(f.mul(x, y).unwrap(), f.mul(y, x).unwrap());
                assert_eq!(
                    f.mul(x, xy).unwrap(),
                    f.add(f.mul(x, x).unwrap(), f.mul(x, y).unwrap()).unwrap()
                );
                assert_eq!(f.sub(xy, y).unwrap(), x);
                assert_eq!(f.mul(x, f.one()).unwrap(), x);
                if y != f.zero() {
                    assert_eq!(f.mul(f.div(x, y).unwrap(), y).unwrap(), x);
                }
            }
        }
    }

    #[test]
    fn tables_are_bit_exact_against_polynomials() {
        for (p, k, e) in [(2, 1, 6), (3, 1, 5), (3, 2, 2), (5, 1, 3), (13, 1, 2)] {
            let f = make_field(p, k, e).unwrap();
            assert!(f.has_log_tables());
            let all: Vec<_> = f.elements().collect();
            for &x in &all {
                for &y in all.iter().step_by(3) {
                    assert_eq!(f.mul(x, y).unwrap(), f.mul_reference(x, y).unwrap());
                    assert_eq!(f.add(x, y).unwrap(), f.add_reference(x, y).unwrap());
                }
            }
        }
    }

    #[test]
    fn powers_and_frobenius() {
        let f = make_field(3, 1, 3).unwrap();
        let card = f.cardinality().clone();
        for x in f.elements() {
            assert_eq!(f.pow(x, &card).unwrap(), x);
            if x != f.zero() {
                assert_eq!(f.pow_u64(x, 26).unwrap(), f.one());
            }
        }
        assert_eq!(f.pow_u64(f.zero(), 0).unwrap(), f.one());
        assert_eq!(f.pow_u64(f.zero(), 5).unwrap(), f.zero());

        let f9 = make_field(3, 1, 2).unwrap();
        for x in f9.elements() {
            assert_eq!(f9.frobenius_q(x, 0).unwrap(), x);
            assert_eq!(f9.frobenius_q(x, 2).unwrap(), x);
            assert_eq!(f9.frobenius_q(x, 1).unwrap(), f9.pow_u64(x, 3).unwrap());
        }
    }

    #[test]
    fn linear_frobenius_matches_pow() {
        for (p, k, e) in [(3, 2, 2), (2, 2, 3), (5, 1, 3)] {
            let f = make_field(p, k, e).unwrap();
            for x in f.elements() {
                for i in 0..=f.e() as u64 + 1 {
                    let qi = BigUint::from(f.q()).pow(i as u32);
                    let want = f.pow(x, &qi).unwrap();
                    assert_eq!(f.frobenius_p_linear(x, i * k as u64).unwrap(), want);
                    assert_eq!(f.frobenius_q(x, i).unwrap(), want);
                }
            }
        }
    }

    #[test]
    fn frobenius_fixes_exactly_the_subfield() {
        for (p, k, e) in [(3, 1, 3), (3, 2, 2), (2, 2, 2), (5, 1, 2)] {
            let f = make_field(p, k, e).unwrap();
            assert_eq!(f.subfield_q().len() as u64, f.q());
            let mut rng = ChaCha8Rng::seed_from_u64(3);
            for _ in 0..200 {
                let x = f.element_from_index(rng.gen_range(0..f.size())).unwrap();
                let y = f.element_from_index(rng.gen_range(0..f.size())).unwrap();
                let lhs = f.frobenius_q(f.add(x, y).unwrap(), 1).unwrap();
                let rhs = f
                    .add(f.frobenius_q(x, 1).unwrap(), f.frobenius_q(y, 1).unwrap())
                    .unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn pow_matches_repeated_multiplication() {
        let f = make_field(7, 1, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let x = f.element_from_index(rng.gen_range(0..f.size())).unwrap();
            let mut acc = f.one();
            for n in 0..=64u64 {
                assert_eq!(f.pow_u64(x, n).unwrap(), acc);
                acc = f.mul_reference(acc, x).unwrap();
            }
        }
    }

    #[test]
    fn large_field_without_tables_still_works() {
        let f = make_field(2, 1, 21).unwrap();
        assert!(!f.has_log_tables());
        let x = f.element_from_index(123_456).unwrap();
        let card = f.cardinality().clone();
        assert_eq!(f.pow(x, &card).unwrap(), x);
        assert_eq!(f.mul(x, f.inv(x).unwrap()).unwrap(), f.one());
    }

    #[test]
    fn enumeration() {
        let f3 = make_field(3, 1, 1).unwrap();
        let idx: Vec<u32> = f3.elements().map(|x| x.index()).collect();
        assert_eq!(idx, vec![0, 1, 2]);
        let f9 = make_field(3, 1, 2).unwrap();
        let all: std::collections::BTreeSet<_> = f9.elements().collect();
        assert_eq!(all.len(), 9);
        assert_eq!(f9.elements().next().unwrap(), f9.zero());
        let parts = f9.elements().split(4);
        let rejoined: Vec<_> = parts.into_iter().flatten().collect();
        assert_eq!(rejoined, f9.elements().collect::<Vec<_>>());
        assert!(enumerate_elements(&f9, 8).is_err());
        assert_eq!(enumerate_elements(&f9, 9).unwrap().len(), 9);
    }
}
