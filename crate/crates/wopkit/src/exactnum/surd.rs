//! Polynomials in the formal symbol l = log q whose coefficients are
//! rational combinations of square roots of squarefree integers.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{fmt_rat, parse_rat, Rat};

/// sum over (deg, d) of c * sqrt(d) * l^deg, d squarefree.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct SurdPoly {
    terms: BTreeMap<(u32, u64), Rat>,
}

/// A constant of the form sum c_d sqrt(d) (degree zero in l).
pub type Surd = SurdPoly;

impl SurdPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_rat(Rat::one())
    }

    pub fn from_rat(c: Rat) -> Self {
        Self::term(c, 1, 0)
    }

    /// c * sqrt(rad) * l^deg; rad must be squarefree.
    pub fn term(c: Rat, rad: u64, deg: u32) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert((deg, rad), c);
        }
        SurdPoly { terms }
    }

    /// The formal symbol l.
    pub fn ell() -> Self {
        Self::term(Rat::one(), 1, 1)
    }

    /// sqrt(r) for a nonnegative rational r.
    pub fn sqrt(r: &Rat) -> Self {
        assert!(!r.is_negative(), "square root of a negative rational");
        if r.is_zero() {
            return Self::zero();
        }
        // sqrt(a/b) = sqrt(ab)/b
        let ab = r.numer() * r.denom();
        let (sq, free) = square_split(&ab);
        let c = Rat::new(sq, r.denom().clone());
        Self::term(c, free.to_u64().expect("radicand too large"), 0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, u64, &Rat)> {
        self.terms.iter().map(|(&(d, r), c)| (d, r, c))
    }

    /// Coefficient of sqrt(rad) * l^deg.
    pub fn coeff(&self, deg: u32, rad: u64) -> Rat {
        self.terms.get(&(deg, rad)).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|k| k.0).max()
    }

    /// Rational value if no radical and no l occurs.
    pub fn as_rat(&self) -> Option<Rat> {
        match self.terms.len() {
            0 => Some(Rat::zero()),
            1 => self.terms.get(&(0, 1)).cloned(),
            _ => None,
        }
    }

    /// Part of l-degree `deg`, as a constant.
    pub fn l_coeff(&self, deg: u32) -> Surd {
        SurdPoly {
            terms: self
                .terms
                .iter()
                .filter(|(k, _)| k.0 == deg)
                .map(|(&(_, r), c)| ((0, r), c.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        SurdPoly {
            terms: self.terms.iter().map(|(k, v)| (*k, v * c)).collect(),
        }
    }

    pub fn mul_ell_pow(&self, k: u32) -> Self {
        SurdPoly {
            terms: self.terms.iter().map(|(&(d, r), v)| ((d + k, r), v.clone())).collect(),
        }
    }

    /// Coefficientwise absolute values (a crude majorant).
    pub fn abs_coeffwise(&self) -> Self {
        SurdPoly {
            terms: self.terms.iter().map(|(k, v)| (*k, v.abs())).collect(),
        }
    }

    /// Coefficientwise comparison |self| <= bound.
    pub fn dominated_by(&self, bound: &Self) -> bool {
        self.terms.iter().all(|(&(d, r), v)| v.abs() <= bound.coeff(d, r))
    }

    /// Numeric value with l replaced by `ell`.
    pub fn to_f64(&self, ell: f64) -> f64 {
        self.terms
            .iter()
            .map(|(&(d, r), c)| {
                c.to_f64().unwrap_or(f64::NAN) * (r as f64).sqrt() * ell.powi(d as i32)
            })
            .sum()
    }

    /// Coefficients by l-degree, each rendered as a constant surd string.
    pub fn coeff_strings(&self) -> Vec<String> {
        let top = match self.degree() {
            Some(d) => d,
            None => return vec!["0".into()],
        };
        (0..=top).map(|d| self.l_coeff(d).to_string()).collect()
    }

    /// Inverse of [`coeff_strings`](Self::coeff_strings).
    pub fn from_coeff_strings(v: &[String]) -> Result<Self, String> {
        let mut out = Self::zero();
        for (d, s) in v.iter().enumerate() {
            let c = parse_constant(s)?;
            out = &out + &c.mul_ell_pow(d as u32);
        }
        Ok(out)
    }

    fn insert(&mut self, k: (u32, u64), v: Rat) {
        let e = self.terms.entry(k).or_insert_with(Rat::zero);
        *e += v;
        if e.is_zero() {
            self.terms.remove(&k);
        }
    }
}

/// Parses a constant like "3/2", "-sqrt(2)", "1/2*sqrt(3) + 2".
fn parse_constant(s: &str) -> Result<SurdPoly, String> {
    let mut out = SurdPoly::zero();
    let t = s.replace(' ', "");
    if t == "0" {
        return Ok(out);
    }
    let mut pieces = Vec::new();
    let mut cur = String::new();
    for (i, ch) in t.chars().enumerate() {
        if (ch == '+' || ch == '-') && i > 0 {
            pieces.push(cur.clone());
            cur.clear();
        }
        cur.push(ch);
    }
    pieces.push(cur);
    for piece in pieces {
        let (sign, body) = match piece.strip_prefix('-') {
            Some(b) => (-Rat::one(), b.to_string()),
            None => (Rat::one(), piece.trim_start_matches('+').to_string()),
        };
        let (coef, rad) = if let Some(idx) = body.find("sqrt(") {
            let c = body[..idx].trim_end_matches('*');
            let r = body[idx + 5..].trim_end_matches(')');
            let c = if c.is_empty() { Rat::one() } else { parse_rat(c).map_err(|e| e.to_string())? };
            let r: u64 = r.parse().map_err(|_| format!("bad radicand in {s:?}"))?;
            (c, r)
        } else {
            (parse_rat(&body).map_err(|e| e.to_string())?, 1)
        };
        out.insert((0, rad), sign * coef);
    }
    Ok(out)
}

/// n = sq^2 * free with free squarefree.
fn square_split(n: &BigInt) -> (BigInt, BigInt) {
    let mut n = n.abs();
    let mut sq = BigInt::one();
    let mut f = BigInt::from(2);
    while &f * &f <= n {
        let f2 = &f * &f;
        while (&n % &f2).is_zero() {
            n /= &f2;
            sq *= &f;
        }
        f += 1;
    }
    (sq, n)
}

fn rad_mul(a: u64, b: u64) -> (u64, u64) {
    // sqrt(a) sqrt(b) = g sqrt(ab/g^2), g = gcd(a,b) for squarefree a, b
    let g = num_integer::gcd(a, b);
    (g, (a / g) * (b / g))
}

impl Add for &SurdPoly {
    type Output = SurdPoly;
    fn add(self, rhs: &SurdPoly) -> SurdPoly {
        let mut out = self.clone();
        for (k, v) in &rhs.terms {
            out.insert(*k, v.clone());
        }
        out
    }
}

impl Sub for &SurdPoly {
    type Output = SurdPoly;
    fn sub(self, rhs: &SurdPoly) -> SurdPoly {
        self + &(-rhs)
    }
}

impl Neg for &SurdPoly {
    type Output = SurdPoly;
    fn neg(self) -> SurdPoly {
        SurdPoly {
            terms: self.terms.iter().map(|(k, v)| (*k, -v.clone())).collect(),
        }
    }
}

impl Mul for &SurdPoly {
    type Output = SurdPoly;
    fn mul(self, rhs: &SurdPoly) -> SurdPoly {
        let mut out = SurdPoly::zero();
        for (&(d1, r1), c1) in &self.terms {
            for (&(d2, r2), c2) in &rhs.terms {
                let (g, r) = rad_mul(r1, r2);
                out.insert((d1 + d2, r), c1 * c2 * Rat::from_integer(g.into()));
            }
        }
        out
    }
}

impl fmt::Display for SurdPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&(d, r), c) in &self.terms {
            let neg = c.is_negative();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let a = c.abs();
            let mut parts = Vec::new();
            if !a.is_one() || (r == 1 && d == 0) {
                parts.push(fmt_rat(&a));
            }
            if r != 1 {
                parts.push(format!("sqrt({r})"));
            }
            match d {
                0 => {}
                1 => parts.push("l".into()),
                _ => parts.push(format!("l^{d}")),
            }
            write!(f, "{}", parts.join("*"))?;
        }
        Ok(())
    }
}

impl fmt::Debug for SurdPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SurdPoly({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{int, rat};

    #[test]
    fn roots_multiply_out() {
        let s2 = SurdPoly::sqrt(&int(2));
        assert_eq!(&s2 * &s2, SurdPoly::from_rat(int(2)));
        let s6 = &SurdPoly::sqrt(&int(3)) * &s2;
        assert_eq!(s6, SurdPoly::sqrt(&int(6)));
        assert_eq!(SurdPoly::sqrt(&rat(1, 2)), SurdPoly::term(rat(1, 2), 2, 0));
        assert_eq!(SurdPoly::sqrt(&int(12)), SurdPoly::term(int(2), 3, 0));
    }

    #[test]
    fn strings_round_trip() {
        let x = &(&SurdPoly::term(rat(-3, 2), 2, 1) + &SurdPoly::from_rat(int(5)))
            + &SurdPoly::term(int(1), 3, 2);
        let s = x.coeff_strings();
        assert_eq!(s, vec!["5", "-3/2*sqrt(2)", "sqrt(3)"]);
        assert_eq!(SurdPoly::from_coeff_strings(&s).unwrap(), x);
        assert_eq!(x.to_string(), "5 - 3/2*sqrt(2)*l + sqrt(3)*l^2");
    }
}
