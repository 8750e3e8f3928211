//! Exact arithmetic: rationals with p-adic valuations, polynomials,
//! dense matrices, and numbers of the form sum of rational multiples of
//! square roots (needed for lattice volumes).

mod conj;
mod matrix;
mod padic;
mod poly;
mod surd;

use std::fmt;
use std::ops::Neg;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, One, Signed, Zero};

pub use conj::{conjugator, similar, ConjError};
pub use matrix::Matrix;
pub use padic::{certify_irreducible, IrreducibilityError, DEFAULT_PRECISION};
pub use poly::{Polynomial, ResultantError};
pub use surd::{Surd, SurdPoly};

/// Coefficient field for the generic containers.
///
/// Anything with exact field operations works; the library itself only
/// instantiates it with [`Rat`], but `f64` satisfies it too.
pub trait Scalar: Clone + PartialEq + fmt::Debug + Num + Neg<Output = Self> {}

impl<T> Scalar for T where T: Clone + PartialEq + fmt::Debug + Num + Neg<Output = Self> {}

pub type Rat = BigRational;

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// p-adic valuation of a rational; `None` stands for +infinity (x = 0).
pub fn valuation(x: &Rat, p: u64) -> Option<i64> {
    if x.is_zero() {
        return None;
    }
    Some(int_val(x.numer(), p) - int_val(x.denom(), p))
}

fn int_val(n: &BigInt, p: u64) -> i64 {
    let p = BigInt::from(p);
    let mut n = n.abs();
    let mut v = 0;
    loop {
        let (q, r) = num_integer::Integer::div_rem(&n, &p);
        if !r.is_zero() {
            return v;
        }
        n = q;
        v += 1;
    }
}

/// Normalized absolute value p^(-val x).
pub fn abs_p(x: &Rat, p: u64) -> Rat {
    match valuation(x, p) {
        None => Rat::zero(),
        Some(v) => pow_p(p, -v),
    }
}

/// p^e as a rational, any sign of e.
pub fn pow_p(p: u64, e: i64) -> Rat {
    let b = BigInt::from(p).pow(e.unsigned_abs() as u32);
    if e >= 0 {
        Rat::from_integer(b)
    } else {
        Rat::new(BigInt::one(), b)
    }
}

/// Is x in Z_(p)?
pub fn is_p_integral(x: &Rat, p: u64) -> bool {
    valuation(x, p).is_none_or(|v| v >= 0)
}

/// Renders a rational as "a" or "a/b".
pub fn fmt_rat(x: &Rat) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cannot parse rational from {0:?}")]
pub struct ParseRatError(pub String);

/// Parses "a", "a/b" or a terminating decimal like "-1.25".
pub fn parse_rat(s: &str) -> Result<Rat, ParseRatError> {
    let t = s.trim();
    let err = || ParseRatError(s.to_string());
    if let Some((a, b)) = t.split_once('/') {
        let a = BigInt::from_str(a.trim()).map_err(|_| err())?;
        let b = BigInt::from_str(b.trim()).map_err(|_| err())?;
        if b.is_zero() {
            return Err(err());
        }
        return Ok(Rat::new(a, b));
    }
    if let Some((ip, fp)) = t.split_once('.') {
        let neg = ip.starts_with('-');
        let digits = format!("{}{}", ip.trim_start_matches(['-', '+']), fp);
        let n = BigInt::from_str(&digits).map_err(|_| err())?;
        let d = BigInt::from(10u32).pow(fp.len() as u32);
        let r = Rat::new(n, d);
        return Ok(if neg { -r } else { r });
    }
    BigInt::from_str(t).map(Rat::from_integer).map_err(|_| err())
}

/// Rational-valued serde helpers: written as strings, read from strings
/// or JSON integers.
pub mod serde_rat {
    use super::{fmt_rat, parse_rat, Rat};
    use serde::de::{self, Deserializer, Visitor};
    use serde::{Deserialize, Serialize, Serializer};
    use std::fmt;

    pub fn serialize<S: Serializer>(x: &Rat, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_rat(x))
    }

    struct RatVisitor;

    impl<'de> Visitor<'de> for RatVisitor {
        type Value = Rat;
        fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
            f.write_str("a rational as integer or \"a/b\" string")
        }
        fn visit_i64<E: de::Error>(self, v: i64) -> Result<Rat, E> {
            Ok(super::int(v))
        }
        fn visit_u64<E: de::Error>(self, v: u64) -> Result<Rat, E> {
            Ok(Rat::from_integer(v.into()))
        }
        fn visit_str<E: de::Error>(self, v: &str) -> Result<Rat, E> {
            parse_rat(v).map_err(E::custom)
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rat, D::Error> {
        d.deserialize_any(RatVisitor)
    }

    /// Newtype so that `Vec<Rat>` fields can use the same encoding.
    #[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
    #[serde(transparent)]
    pub struct R(#[serde(with = "super::serde_rat")] pub Rat);

    pub mod vec {
        use super::*;
        pub fn serialize<S: Serializer>(x: &[Rat], s: S) -> Result<S::Ok, S::Error> {
            let v: Vec<R> = x.iter().cloned().map(R).collect();
            v.serialize(s)
        }
        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rat>, D::Error> {
            let v: Vec<R> = Vec::deserialize(d)?;
            Ok(v.into_iter().map(|r| r.0).collect())
        }
    }

    pub mod mat {
        use super::*;
        pub fn serialize<S: Serializer>(x: &[Vec<Rat>], s: S) -> Result<S::Ok, S::Error> {
            let v: Vec<Vec<R>> = x
                .iter()
                .map(|row| row.iter().cloned().map(R).collect())
                .collect();
            v.serialize(s)
        }
        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<Rat>>, D::Error> {
            let v: Vec<Vec<R>> = Vec::deserialize(d)?;
            Ok(v
                .into_iter()
                .map(|row| row.into_iter().map(|r| r.0).collect())
                .collect())
        }
    }
}

/// K-membership for GL_n(Z_p): integral entries and unit determinant.
pub fn in_gl_zp(g: &Matrix<Rat>, p: u64) -> bool {
    g.is_square()
        && g.entries().iter().all(|x| is_p_integral(x, p))
        && valuation(&g.det(), p) == Some(0)
}

/// Is every entry p-integral?
pub fn is_integral_matrix(g: &Matrix<Rat>, p: u64) -> bool {
    g.entries().iter().all(|x| is_p_integral(x, p))
}

/// Minimum valuation over the entries (None if the matrix is zero).
pub fn min_valuation(g: &Matrix<Rat>, p: u64) -> Option<i64> {
    g.entries().iter().filter_map(|x| valuation(x, p)).min()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn valuations() {
        assert_eq!(valuation(&int(12), 2), Some(2));
        assert_eq!(valuation(&rat(1, 3), 3), Some(-1));
        assert_eq!(valuation(&int(0), 5), None);
        assert_eq!(valuation(&rat(-50, 7), 5), Some(2));
    }

    #[test]
    fn parse_and_print() {
        for s in ["3", "-1/2", "0", "22/7"] {
            assert_eq!(fmt_rat(&parse_rat(s).unwrap()), s);
        }
        assert_eq!(parse_rat("-1.25").unwrap(), rat(-5, 4));
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("x").is_err());
    }

    #[test]
    fn abs_values() {
        assert_eq!(abs_p(&int(9), 3), rat(1, 9));
        assert_eq!(abs_p(&rat(1, 4), 2), int(4));
        assert_eq!(pow_p(2, -3), rat(1, 8));
    }
}
