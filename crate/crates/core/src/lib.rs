//! Exact machinery for deciding whether
//! `f_{a,q}(X) = X^{q-2} + X^{q^2-2} + ⋯ + X^{q^a-2}` permutes `F_{q^e}`.
//!
//! The crate provides finite-field arithmetic, base-`q` digit tools, modular
//! combinatorics, window-product coefficient extraction, several independent
//! routes to the Hermite coefficient `C(N)`, the Hasse–Weil bound check, and
//! brute-force permutation testing.

pub mod coeffx;
pub mod combinat;
pub mod digits;
pub mod error;
pub mod ffield;
pub mod hasse;
pub mod hermite;
pub mod ppcheck;

pub use error::{Error, Result};

/// Serializes big integers as decimal strings so JSON consumers never lose
/// precision.
pub mod serde_big {
    use num_bigint::BigUint;
    use serde::Serializer;

    pub fn serialize<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_str_radix(10))
    }

    pub mod option {
        use num_bigint::BigUint;
        use serde::Serializer;

        pub fn serialize<S: Serializer>(v: &Option<BigUint>, s: S) -> Result<S::Ok, S::Error> {
            match v {
                Some(v) => s.serialize_str(&v.to_str_radix(10)),
                None => s.serialize_none(),
            }
        }
    }

    pub mod signed_option {
        use num_bigint::BigInt;
        use serde::Serializer;

        pub fn serialize<S: Serializer>(v: &Option<BigInt>, s: S) -> Result<S::Ok, S::Error> {
            match v {
                Some(v) => s.serialize_str(&v.to_str_radix(10)),
                None => s.serialize_none(),
            }
        }
    }

    pub mod signed {
        use num_bigint::BigInt;
        use serde::Serializer;

        pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
            s.serialize_str(&v.to_str_radix(10))
        }
    }
}
