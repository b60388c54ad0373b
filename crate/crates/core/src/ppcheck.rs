//! Evaluating `f_{a,q}` on `F_{q^e}` and deciding by exhaustion whether it
//! permutes the field.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ffield::{FieldElement, FieldSpec};

/// Maps every packed index `0..size` through `f`, in parallel when enabled.
pub(crate) fn map_indices<F>(size: u64, f: F) -> Vec<u32>
where
    F: Fn(u32) -> u32 + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..size as u32).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..size as u32).map(f).collect()
    }
}

/// `a` reduced mod `pe` into `[-1, pe - 2]`. Since `x^{q^{pe}} = x` on the
/// field and `p` copies of a term cancel, `f_{a,q}` and `f_{a',q}` agree as
/// functions whenever `a ≡ a' (mod pe)`; here `f_{0,q} = 0` and
/// `f_{-1,q} = -X^{q^e-2}`.
pub fn reduce_a(a: i64, p: u64, e: u32) -> i64 {
    let m = (p * e as u64) as i64;
    let r = a.rem_euclid(m);
    if r == m - 1 {
        -1
    } else {
        r
    }
}

/// Precomputed data for evaluating `f_{a,q}` quickly: for `x ≠ 0`,
/// `f(x) = (Σ_j c_j x^{q^j}) · x^{-2}` where `c_j` counts the `i ∈ [1, a]`
/// with `i ≡ j (mod e)`, reduced mod `p`.
#[derive(Debug, Clone)]
pub struct Evaluator<'a> {
    spec: &'a FieldSpec,
    a: i64,
    /// `(j, c_j)` for the nonzero reduced counts, `c_j` as a packed index.
    terms: Vec<(u64, u32)>,
    zero_image: u32,
}

impl<'a> Evaluator<'a> {
    pub fn new(spec: &'a FieldSpec, a: i64) -> Result<Self> {
        if a < -1 {
            return Err(Error::Precondition(format!("a = {a} must be at least -1")));
        }
        let (p, e) = (spec.p(), spec.e() as u64);
        let mut terms = Vec::new();
        if a >= 1 {
            let a = a as u64;
            for j in 0..e {
                // i in [1, a] with i ≡ j (mod e)
                let first = if j == 0 { e } else { j };
                let count = if first > a { 0 } else { (a - first) / e + 1 };
                if count % p != 0 {
                    terms.push((j, spec.from_int((count % p) as i64).index()));
                }
            }
        }
        // X^{q-2} is the constant 1 when q = 2
        let zero_image = if a >= 1 && spec.q() == 2 { 1 } else { 0 };
        Ok(Evaluator {
            spec,
            a,
            terms,
            zero_image,
        })
    }

    pub(crate) fn eval_index(&self, x: u32) -> u32 {
        let s = self.spec;
        if x == 0 {
            return self.zero_image;
        }
        match self.a {
            0 => 0,
            -1 => s.neg_index(s.inv_index(x)),
            _ => {
                let mut acc = 0u32;
                for &(j, c) in &self.terms {
                    acc = s.add_index(acc, s.mul_index(c, s.frob_index(x, j)));
                }
                let inv = s.inv_index(x);
                s.mul_index(acc, s.mul_index(inv, inv))
            }
        }
    }

    pub fn eval(&self, x: FieldElement) -> Result<FieldElement> {
        self.spec.coords(x)?;
        Ok(self.spec.wrap(self.eval_index(x.index())))
    }

    /// Images of every element, indexed by packed index.
    pub fn images(&self) -> Vec<u32> {
        map_indices(self.spec.size(), |x| self.eval_index(x))
    }
}

/// `f_{a,q}(x)` through the reduced-count fast path.
pub fn eval_f(spec: &FieldSpec, a: i64, x: FieldElement) -> Result<FieldElement> {
    Evaluator::new(spec, a)?.eval(x)
}

/// `f_{a,q}(x)` summed term by term with big-integer exponents; `0^0 = 1`.
pub fn eval_f_termwise(spec: &FieldSpec, a: i64, x: FieldElement) -> Result<FieldElement> {
    let q = BigUint::from(spec.q());
    match a {
        i64::MIN..=-2 => Err(Error::Precondition(format!("a = {a} must be at least -1"))),
        -1 => {
            let exp = q.pow(spec.e()) - 2u32;
            spec.neg(spec.pow(x, &exp)?)
        }
        _ => {
            let mut acc = spec.zero();
            let mut qi = BigUint::one();
            for _ in 0..a {
                qi *= &q;
                acc = spec.add(acc, spec.pow(x, &(&qi - 2u32))?)?;
            }
            Ok(acc)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum VerdictMethod {
    Brute,
    GcdShortcut,
}

/// Whether `f_{a,q}` permutes `F_{q^e}`, with a collision when it does not.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PPVerdict {
    pub p: u64,
    pub q: u64,
    pub e: u32,
    pub a: i64,
    pub is_pp: bool,
    pub expected: bool,
    /// Packed indices `(x, y)`, `x < y`, `f(x) = f(y)`.
    pub witness: Option<(u32, u32)>,
    pub method: VerdictMethod,
}

/// The lexicographically first pair `x < y` with equal images, if any.
pub fn first_collision(images: &[u32]) -> Option<(u32, u32)> {
    const UNSEEN: u32 = u32::MAX;
    let mut first = vec![UNSEEN; images.len()];
    let mut best: Option<(u32, u32)> = None;
    for (y, &v) in images.iter().enumerate() {
        let f = &mut first[v as usize];
        if *f == UNSEEN {
            *f = y as u32;
        } else if best.is_none_or(|(bx, _)| *f < bx) {
            // the first repeat of an image pairs it with its first occurrence
            best = Some((*f, y as u32));
        }
    }
    best
}

/// Decides by exhaustion whether `f_{a,q}` permutes the field.
pub fn is_pp(spec: &FieldSpec, a: i64, cap: u64) -> Result<PPVerdict> {
    if spec.size() > cap {
        return Err(Error::CapExceeded {
            size: spec.cardinality().clone(),
            cap,
        });
    }
    let images = Evaluator::new(spec, a)?.images();
    Ok(verdict_from_images(spec, a, &images))
}

fn verdict_from_images(spec: &FieldSpec, a: i64, images: &[u32]) -> PPVerdict {
    let witness = first_collision(images);
    PPVerdict {
        p: spec.p(),
        q: spec.q(),
        e: spec.e(),
        a,
        is_pp: witness.is_none(),
        expected: conjecture_expected(spec.q(), spec.e(), a),
        witness,
        method: VerdictMethod::Brute,
    }
}

/// Verdicts for every `a` in `1..=max_a` over one field, maintaining the
/// running sums `Σ_{i<=a} x^{q^i}` so each step costs one Frobenius per
/// element.
pub fn sweep_field(spec: &FieldSpec, max_a: i64, cap: u64) -> Result<Vec<PPVerdict>> {
    if spec.size() > cap {
        return Err(Error::CapExceeded {
            size: spec.cardinality().clone(),
            cap,
        });
    }
    let size = spec.size();
    let zero_image = if spec.q() == 2 { 1 } else { 0 };
    let inv_sq = map_indices(size, |x| {
        if x == 0 {
            0
        } else {
            let i = spec.inv_index(x);
            spec.mul_index(i, i)
        }
    });
    let mut frob: Vec<u32> = (0..size as u32).collect();
    let mut sums = vec![0u32; size as usize];
    let mut out = Vec::new();
    for a in 1..=max_a {
        frob = map_indices(size, |x| spec.frob_index(frob[x as usize], 1));
        sums = map_indices(size, |x| spec.add_index(sums[x as usize], frob[x as usize]));
        let images = map_indices(size, |x| {
            if x == 0 {
                zero_image
            } else {
                spec.mul_index(sums[x as usize], inv_sq[x as usize])
            }
        });
        out.push(verdict_from_images(spec, a, &images));
    }
    Ok(out)
}

/// The predicted answer: `f_{a,q}` permutes `F_{q^e}` exactly when `a = 2`
/// and `q = 2`, or `a = 1` and `gcd(q - 2, q^e - 1) = 1`.
pub fn conjecture_expected(q: u64, e: u32, a: i64) -> bool {
    if a == 2 && q == 2 {
        return true;
    }
    if a != 1 {
        return false;
    }
    let order = BigUint::from(q).pow(e) - 1u32;
    BigUint::from(q - 2).gcd(&order).is_one()
}

/// `gcd(a, pe) = 1`, the arithmetic form of the kernel condition.
pub fn kernel_trivial_by_gcd(p: u64, e: u32, a: i64) -> bool {
    (a.unsigned_abs()).gcd(&(p * e as u64)) == 1
}

/// Whether `L(X) = X + X^q + ⋯ + X^{q^{a-1}}` has only the root `0`, by
/// evaluating it everywhere.
pub fn kernel_test(spec: &FieldSpec, a: i64, cap: u64) -> Result<bool> {
    if spec.size() > cap {
        return Err(Error::CapExceeded {
            size: spec.cardinality().clone(),
            cap,
        });
    }
    if a < 1 {
        return Err(Error::Precondition(format!("a = {a} must be positive")));
    }
    let roots = map_indices(spec.size(), |x| {
        let mut acc = 0u32;
        let mut y = x;
        for _ in 0..a {
            acc = spec.add_index(acc, y);
            y = spec.frob_index(y, 1);
        }
        (x != 0 && acc == 0) as u32
    });
    Ok(roots.iter().all(|&r| r == 0))
}

/// Checks `f_{a,q}(x^q - x) = Σ_{c ∈ F_q} (x + c)^{q^{a+1} - 2}` at every
/// point.
pub fn g_identity_check(spec: &FieldSpec, a: i64, cap: u64) -> Result<bool> {
    if spec.size() > cap {
        return Err(Error::CapExceeded {
            size: spec.cardinality().clone(),
            cap,
        });
    }
    let pe = spec.p() as i64 * spec.e() as i64;
    if a < 1 || a + 1 > pe - 1 {
        return Err(Error::Precondition(format!(
            "a = {a} must lie in [1, pe - 2]"
        )));
    }
    let eval = Evaluator::new(spec, a)?;
    let subfield: Vec<u32> = spec.subfield_q().iter().map(|c| c.index()).collect();
    let n = BigUint::from(spec.q()).pow(a as u32 + 1) - 2u32;
    let ok = map_indices(spec.size(), |x| {
        let arg = spec.add_index(spec.frob_index(x, 1), spec.neg_index(x));
        let lhs = eval.eval_index(arg);
        let rhs = subfield.iter().fold(0u32, |acc, &c| {
            spec.add_index(acc, spec.pow_index(spec.add_index(x, c), &n))
        });
        (lhs == rhs) as u32
    });
    Ok(ok.iter().all(|&v| v == 1))
}

/// Checks that `f_{a,q}`, summed term by term with its full exponents,
/// agrees at every point with `f_{reduce_a(a),q}`.
pub fn reduction_check(spec: &FieldSpec, a: i64, cap: u64) -> Result<bool> {
    if spec.size() > cap {
        return Err(Error::CapExceeded {
            size: spec.cardinality().clone(),
            cap,
        });
    }
    let reduced = Evaluator::new(spec, reduce_a(a, spec.p(), spec.e()))?;
    for x in spec.elements() {
        if eval_f_termwise(spec, a, x)? != reduced.eval(x)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `(Σ_x f(x)^n)` as a packed index, summing per-element powers.
pub(crate) fn power_sum_index(spec: &FieldSpec, eval: &Evaluator, n: &BigUint) -> u32 {
    let n_small = n.to_u64();
    let powers = map_indices(spec.size(), |x| {
        let y = eval.eval_index(x);
        match n_small {
            Some(m) => spec.pow_index_u64(y, m),
            None => spec.pow_index(y, n),
        }
    });
    powers.iter().fold(0u32, |acc, &v| spec.add_index(acc, v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffield::{make_field, DEFAULT_SWEEP_CAP};

    #[test]
    fn reduction_of_a() {
        assert_eq!(reduce_a(6, 3, 2), 0);
        assert_eq!(reduce_a(5, 3, 2), -1);
        assert_eq!(reduce_a(4, 3, 2), 4);
        assert_eq!(reduce_a(-1, 3, 2), -1);
        assert_eq!(reduce_a(13, 3, 2), 1);
    }

    #[test]
    fn fast_and_termwise_agree() {
        for (p, k, e) in [
            (2, 1, 3),
            (2, 2, 2),
            (3, 1, 2),
            (3, 1, 3),
            (3, 2, 2),
            (5, 1, 2),
            (7, 1, 2),
        ] {
            let f = make_field(p, k, e).unwrap();
            let pe = (p * e as u64) as i64;
            for a in -1..=pe {
                let ev = Evaluator::new(&f, a).unwrap();
                for x in f.elements() {
                    assert_eq!(
                        ev.eval(x).unwrap(),
                        eval_f_termwise(&f, a, x).unwrap(),
                        "p={p} k={k} e={e} a={a} x={}",
                        x.index()
                    );
                }
            }
        }
    }

    #[test]
    fn small_evaluations() {
        let f = make_field(3, 1, 3).unwrap();
        for x in f.elements() {
            assert_eq!(eval_f(&f, 1, x).unwrap(), x);
        }
        let f2 = make_field(2, 1, 3).unwrap();
        assert_eq!(eval_f(&f2, 2, f2.zero()).unwrap(), f2.one());
        let f9 = make_field(3, 1, 2).unwrap();
        for x in f9.elements() {
            let expect = f9.add(x, f9.pow_u64(x, 7).unwrap()).unwrap();
            assert_eq!(eval_f(&f9, 2, x).unwrap(), expect);
        }
    }

    #[test]
    fn reduced_a_matches_pointwise() {
        for e in 2..=3u32 {
            let f = make_field(3, 1, e).unwrap();
            let pe = 3 * e as i64;
            for a in -1..=2 * pe {
                assert!(
                    reduction_check(&f, a, DEFAULT_SWEEP_CAP).unwrap(),
                    "e={e} a={a}"
                );
            }
        }
    }

    #[test]
    fn verdicts() {
        let f = make_field(2, 1, 3).unwrap();
        let v = is_pp(&f, 2, DEFAULT_SWEEP_CAP).unwrap();
        assert!(v.is_pp && v.expected);
        let f = make_field(3, 1, 2).unwrap();
        assert!(is_pp(&f, 1, DEFAULT_SWEEP_CAP).unwrap().is_pp);
        let f = make_field(5, 1, 2).unwrap();
        let v = is_pp(&f, 1, DEFAULT_SWEEP_CAP).unwrap();
        assert!(!v.is_pp && !v.expected);
        let (x, y) = v.witness.unwrap();
        assert!(x < y);
        let ev = Evaluator::new(&f, 1).unwrap();
        assert_eq!(ev.eval_index(x), ev.eval_index(y));
    }

    #[test]
    fn collision_is_lexicographically_first() {
        assert_eq!(first_collision(&[0, 1, 2, 3]), None);
        assert_eq!(first_collision(&[2, 1, 1, 2]), Some((0, 3)));
        assert_eq!(first_collision(&[0, 1, 2, 1, 0]), Some((0, 4)));
        assert_eq!(first_collision(&[3, 1, 1, 3]), Some((0, 3)));
    }

    #[test]
    fn sweep_matches_single_checks() {
        for (p, k, e) in [(2, 1, 4), (3, 1, 3), (3, 2, 2), (5, 1, 2)] {
            let f = make_field(p, k, e).unwrap();
            let pe = (p * e as u64) as i64;
            let swept = sweep_field(&f, pe - 2, DEFAULT_SWEEP_CAP).unwrap();
            for (i, v) in swept.iter().enumerate() {
                assert_eq!(v, &is_pp(&f, i as i64 + 1, DEFAULT_SWEEP_CAP).unwrap());
            }
        }
    }

    #[test]
    fn predictions() {
        assert!(conjecture_expected(2, 5, 2));
        assert!(conjecture_expected(3, 2, 1));
        assert!(!conjecture_expected(7, 2, 3));
        assert!(!conjecture_expected(5, 2, 1));
    }

    #[test]
    fn kernels() {
        let f9 = make_field(3, 1, 2).unwrap();
        assert!(!kernel_test(&f9, 3, DEFAULT_SWEEP_CAP).unwrap());
        assert!(kernel_test(&f9, 1, DEFAULT_SWEEP_CAP).unwrap());
        let f81 = make_field(3, 1, 4).unwrap();
        assert!(kernel_test(&f81, 5, DEFAULT_SWEEP_CAP).unwrap());
        for a in 1..=10 {
            assert_eq!(
                kernel_test(&f81, a, DEFAULT_SWEEP_CAP).unwrap(),
                kernel_trivial_by_gcd(3, 4, a)
            );
        }
    }

    #[test]
    fn identity_small() {
        let f = make_field(3, 1, 2).unwrap();
        assert!(g_identity_check(&f, 1, DEFAULT_SWEEP_CAP).unwrap());
        let f = make_field(5, 1, 2).unwrap();
        assert!(g_identity_check(&f, 2, DEFAULT_SWEEP_CAP).unwrap());
    }
}
