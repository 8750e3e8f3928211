//! Bounded irreducibility certificates over Q_p.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use super::{pow_p, valuation, Polynomial, Rat};

/// Default p-adic precision (digits) for the Hensel root search.
pub const DEFAULT_PRECISION: u32 = 64;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum IrreducibilityError {
    #[error("polynomial must be monic of degree >= 1")]
    NotMonic,
    #[error("cannot certify irreducibility of degree {degree} polynomial over Q_{p} at precision {precision}")]
    CannotCertify { p: u64, degree: usize, precision: u32 },
}

/// Decides whether a monic rational polynomial is irreducible over Q_p.
///
/// Returns `Ok(true)` / `Ok(false)` when a certificate is found and an
/// error when the bounded search is inconclusive.
pub fn certify_irreducible(
    f: &Polynomial<Rat>,
    p: u64,
    precision: u32,
) -> Result<bool, IrreducibilityError> {
    if !f.is_monic() {
        return Err(IrreducibilityError::NotMonic);
    }
    let d = f.degree().unwrap();
    if d == 1 {
        return Ok(true);
    }
    let g = integral_model(f, p);
    let fail = IrreducibilityError::CannotCertify { p, degree: d, precision };

    let gbar = Fp::reduce_poly(&g, p);
    match factor_shape(&gbar, p) {
        Shape::Coprime => return Ok(false),
        Shape::Power { base, exp } if exp == 1 => {
            debug_assert_eq!(base.len() - 1, d);
            return Ok(true);
        }
        Shape::Power { base, .. } if base.len() == 2 => {
            // gbar = (x - c)^d: look at the Newton polygon at c.
            let c = Fp::new(p).neg(base[0]);
            let h = g.shift(&Rat::from_integer(BigInt::from(c)));
            if let Some(v) = newton_verdict(&h, p) {
                return Ok(v);
            }
        }
        Shape::Power { .. } => {}
    }
    match d {
        2 => {
            let disc = g.coeff(1) * g.coeff(1) - Rat::from_integer(4.into()) * g.coeff(0);
            Ok(!is_square_qp(&disc, p))
        }
        3 => match has_root(&g, p, precision) {
            Some(r) => Ok(!r),
            None => Err(fail),
        },
        _ => Err(fail),
    }
}

/// p^{sd} f(x/p^s), monic with p-integral coefficients.
fn integral_model(f: &Polynomial<Rat>, p: u64) -> Polynomial<Rat> {
    let d = f.degree().unwrap() as i64;
    let mut s = 0i64;
    for (i, c) in f.coeffs().iter().enumerate() {
        if let Some(v) = valuation(c, p) {
            let k = d - i as i64;
            if v < 0 && k > 0 {
                s = s.max((-v + k - 1) / k);
            }
        }
    }
    Polynomial::new(
        f.coeffs()
            .iter()
            .enumerate()
            .map(|(i, c)| c * pow_p(p, s * (d - i as i64)))
            .collect(),
    )
}

/// Newton polygon verdict for monic integral h with h = x^d mod p.
fn newton_verdict(h: &Polynomial<Rat>, p: u64) -> Option<bool> {
    let d = h.degree().unwrap() as i64;
    let v0 = valuation(&h.coeff(0), p)?;
    if v0 == 0 {
        return None;
    }
    // all points must lie on or above the segment (0,v0)-(d,0)
    let mut on_or_above = true;
    for i in 1..d {
        if let Some(v) = valuation(&h.coeff(i as usize), p) {
            // v >= v0 (d - i)/d
            if v * d < v0 * (d - i) {
                on_or_above = false;
            }
        }
    }
    if !on_or_above {
        // at least two slopes: factors exist
        return Some(false);
    }
    if v0.gcd(&d) == 1 {
        Some(true)
    } else {
        None
    }
}

fn is_square_qp(x: &Rat, p: u64) -> bool {
    let Some(v) = valuation(x, p) else { return true };
    if v % 2 != 0 {
        return false;
    }
    let u = x / pow_p(p, v);
    let fp = Fp::new(if p == 2 { 8 } else { p });
    let r = fp.reduce(&u);
    if p == 2 {
        r == 1
    } else {
        fp.pow(r, (p - 1) / 2) == 1
    }
}

/// Searches for a root in Z_p of a monic integral cubic.  `Some(true)` if
/// a root is certified by Hensel's lemma, `Some(false)` if none exists.
fn has_root(g: &Polynomial<Rat>, p: u64, precision: u32) -> Option<bool> {
    let dg = g.derivative();
    let pb = BigInt::from(p);
    let mut cands: Vec<BigInt> = (0..p).map(BigInt::from).collect();
    let mut modulus = pb.clone();
    for k in 1..=precision as i64 {
        let mut next = Vec::new();
        for r in &cands {
            let rr = Rat::from_integer(r.clone());
            let val_g = valuation(&g.eval(&rr), p);
            match val_g {
                None => return Some(true),
                Some(vg) if vg < k => continue,
                Some(vg) => {
                    if let Some(vd) = valuation(&dg.eval(&rr), p) {
                        if vg > 2 * vd {
                            return Some(true);
                        }
                    }
                    for t in 0..p {
                        next.push(r + &modulus * BigInt::from(t));
                    }
                }
            }
        }
        if next.is_empty() {
            return Some(false);
        }
        if next.len() > 20_000 {
            return None;
        }
        cands = next;
        modulus *= &pb;
    }
    None
}

enum Shape {
    Coprime,
    Power { base: Vec<u64>, exp: usize },
}

/// Determines whether f mod p is a power of one irreducible.
fn factor_shape(f: &[u64], p: u64) -> Shape {
    let fp = Fp::new(p);
    let d = f.len() - 1;
    let x = vec![0, 1];
    let mut xq = x.clone();
    for k in 1..=d {
        xq = fp.powmod(&xq, p, f);
        let diff = fp.sub(&xq, &x);
        let g = fp.gcd(f, &diff);
        let dg = g.len() - 1;
        if dg == 0 {
            continue;
        }
        if dg != k {
            return Shape::Coprime;
        }
        let mut rest = f.to_vec();
        let mut e = 0;
        loop {
            let (q, r) = fp.divrem(&rest, &g);
            if !r.is_empty() {
                return Shape::Coprime;
            }
            e += 1;
            rest = q;
            if rest.len() == 1 {
                return Shape::Power { base: g, exp: e };
            }
        }
    }
    Shape::Coprime
}

/// Arithmetic in Z/mZ for word-sized m (polynomials as ascending vectors).
struct Fp {
    m: u64,
}

impl Fp {
    fn new(m: u64) -> Self {
        Fp { m }
    }

    fn reduce(&self, x: &Rat) -> u64 {
        let m = BigInt::from(self.m);
        let n = x.numer().mod_floor(&m).to_u64().unwrap();
        let d = x.denom().mod_floor(&m).to_u64().unwrap();
        self.mul(n, self.inv(d))
    }

    fn reduce_poly(f: &Polynomial<Rat>, p: u64) -> Vec<u64> {
        let fp = Fp::new(p);
        fp.trim(f.coeffs().iter().map(|c| fp.reduce(c)).collect())
    }

    fn mul(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.m as u128) as u64
    }

    fn neg(&self, a: u64) -> u64 {
        (self.m - a % self.m) % self.m
    }

    fn pow(&self, mut a: u64, mut e: u64) -> u64 {
        let mut acc = 1 % self.m;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        acc
    }

    fn inv(&self, a: u64) -> u64 {
        let (g, x, _) = ext_gcd(a as i128, self.m as i128);
        assert_eq!(g, 1, "non-invertible residue");
        x.rem_euclid(self.m as i128) as u64
    }

    fn trim(&self, mut v: Vec<u64>) -> Vec<u64> {
        while v.last() == Some(&0) {
            v.pop();
        }
        v
    }

    fn sub(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let n = a.len().max(b.len());
        let v = (0..n)
            .map(|i| {
                let x = a.get(i).copied().unwrap_or(0);
                let y = b.get(i).copied().unwrap_or(0);
                (x + self.m - y) % self.m
            })
            .collect();
        self.trim(v)
    }

    fn polymul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return vec![];
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + self.mul(x, y)) % self.m;
            }
        }
        self.trim(out)
    }

    fn divrem(&self, a: &[u64], b: &[u64]) -> (Vec<u64>, Vec<u64>) {
        let db = b.len() - 1;
        let mut r = a.to_vec();
        if r.len() <= db {
            return (vec![], self.trim(r));
        }
        let li = self.inv(b[db]);
        let mut q = vec![0u64; r.len() - db];
        for k in (0..q.len()).rev() {
            let f = self.mul(r[k + db], li);
            if f != 0 {
                for (i, &bi) in b.iter().enumerate() {
                    r[k + i] = (r[k + i] + self.m - self.mul(f, bi)) % self.m;
                }
            }
            q[k] = f;
        }
        r.truncate(db);
        (self.trim(q), self.trim(r))
    }

    fn gcd(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let (mut a, mut b) = (self.trim(a.to_vec()), self.trim(b.to_vec()));
        while !b.is_empty() {
            let r = self.divrem(&a, &b).1;
            a = b;
            b = r;
        }
        if let Some(&l) = a.last() {
            let li = self.inv(l);
            a = a.into_iter().map(|x| self.mul(x, li)).collect();
        }
        a
    }

    fn powmod(&self, base: &[u64], mut e: u64, m: &[u64]) -> Vec<u64> {
        let mut acc = vec![1u64];
        let mut b = self.divrem(base, m).1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.divrem(&self.polymul(&acc, &b), m).1;
            }
            b = self.divrem(&self.polymul(&b, &b), m).1;
            e >>= 1;
        }
        acc
    }
}

fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        (a.abs(), a.signum(), 0)
    } else {
        let (g, x, y) = ext_gcd(b, a.rem_euclid(b));
        (g, y, x - (a.div_euclid(b)) * y)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{int, rat};

    fn p(c: &[Rat]) -> Polynomial<Rat> {
        Polynomial::new(c.to_vec())
    }

    #[test]
    fn quadratics() {
        // T^2 + 1 splits over Q_5, stays irreducible over Q_3
        let f = p(&[int(1), int(0), int(1)]);
        assert_eq!(certify_irreducible(&f, 5, 64), Ok(false));
        assert_eq!(certify_irreducible(&f, 3, 64), Ok(true));
        // T^2 - 2 over Q_2: Eisenstein
        let g = p(&[int(-2), int(0), int(1)]);
        assert_eq!(certify_irreducible(&g, 2, 64), Ok(true));
        // T^2 - 17 splits over Q_2 (17 = 1 mod 8)
        let h = p(&[int(-17), int(0), int(1)]);
        assert_eq!(certify_irreducible(&h, 2, 64), Ok(false));
        // T^2 - 9 splits everywhere; T^2 - 1/4 as well
        assert_eq!(certify_irreducible(&p(&[int(-9), int(0), int(1)]), 3, 64), Ok(false));
        assert_eq!(certify_irreducible(&p(&[rat(-1, 4), int(0), int(1)]), 2, 64), Ok(false));
        // T^2 - p^2 * 3 over Q_2: 3 is not a 2-adic square
        assert_eq!(certify_irreducible(&p(&[int(-12), int(0), int(1)]), 2, 64), Ok(true));
    }

    #[test]
    fn cubics_and_higher() {
        // T^3 - 2 over Q_2: Eisenstein
        assert_eq!(certify_irreducible(&p(&[int(-2), int(0), int(0), int(1)]), 2, 64), Ok(true));
        // T^3 - 8 has the root 2
        assert_eq!(certify_irreducible(&p(&[int(-8), int(0), int(0), int(1)]), 2, 64), Ok(false));
        // T^3 + T + 1 is irreducible mod 2
        assert_eq!(certify_irreducible(&p(&[int(1), int(1), int(0), int(1)]), 2, 64), Ok(true));
        // T^4 - 3 over Q_3: Eisenstein
        assert_eq!(
            certify_irreducible(&p(&[int(-3), int(0), int(0), int(0), int(1)]), 3, 64),
            Ok(true)
        );
        // (T^2+1)(T^2+2) over Q_3 mod 3 is a coprime product
        let f = &p(&[int(1), int(0), int(1)]) * &p(&[int(2), int(0), int(1)]);
        assert_eq!(certify_irreducible(&f, 3, 64), Ok(false));
        assert_eq!(certify_irreducible(&p(&[int(2), int(2)]), 3, 64), Err(IrreducibilityError::NotMonic));
    }
}
