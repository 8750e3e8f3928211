use std::ops::{Add, Mul, Neg, Sub};

use super::matrix::Matrix;
use super::Scalar;

/// Univariate polynomial, coefficients in ascending degree, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Polynomial<T> {
    c: Vec<T>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ResultantError {
    #[error("resultant of the zero polynomial")]
    ZeroInput,
}

impl<T: Scalar> Polynomial<T> {
    pub fn new(mut c: Vec<T>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        Polynomial { c }
    }

    pub fn zero() -> Self {
        Polynomial { c: vec![] }
    }

    pub fn constant(a: T) -> Self {
        Self::new(vec![a])
    }

    /// The polynomial T - a.
    pub fn linear_root(a: T) -> Self {
        Self::new(vec![-a, T::one()])
    }

    pub fn monomial(a: T, deg: usize) -> Self {
        let mut c = vec![T::zero(); deg];
        c.push(a);
        Self::new(c)
    }

    pub fn coeffs(&self) -> &[T] {
        &self.c
    }

    pub fn coeff(&self, i: usize) -> T {
        self.c.get(i).cloned().unwrap_or_else(T::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn leading(&self) -> T {
        self.c.last().cloned().unwrap_or_else(T::zero)
    }

    pub fn is_monic(&self) -> bool {
        self.c.last().is_some_and(|x| *x == T::one())
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let l = self.leading();
        Self::new(self.c.iter().map(|x| x.clone() / l.clone()).collect())
    }

    pub fn eval(&self, x: &T) -> T {
        self.c.iter().rev().fold(T::zero(), |acc, a| acc * x.clone() + a.clone())
    }

    pub fn eval_matrix(&self, m: &Matrix<T>) -> Matrix<T> {
        let n = m.rows();
        let mut acc = Matrix::zeros(n, n);
        for a in self.c.iter().rev() {
            acc = &acc * m;
            for i in 0..n {
                acc[(i, i)] = acc[(i, i)].clone() + a.clone();
            }
        }
        acc
    }

    pub fn scale(&self, a: &T) -> Self {
        Self::new(self.c.iter().map(|x| x.clone() * a.clone()).collect())
    }

    pub fn derivative(&self) -> Self {
        let mut k = T::zero();
        let mut out = Vec::new();
        for a in self.c.iter() {
            out.push(a.clone() * k.clone());
            k = k + T::one();
        }
        if !out.is_empty() {
            out.remove(0);
        }
        Self::new(out)
    }

    /// Quotient and remainder; panics on a zero divisor.
    pub fn divrem(&self, d: &Self) -> (Self, Self) {
        let dd = d.degree().expect("division by the zero polynomial");
        let lead = d.leading();
        let mut r = self.c.clone();
        if r.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut q = vec![T::zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let f = r[k + dd].clone() / lead.clone();
            if !f.is_zero() {
                for (i, b) in d.c.iter().enumerate() {
                    r[k + i] = r[k + i].clone() - f.clone() * b.clone();
                }
            }
            q[k] = f;
        }
        r.truncate(dd);
        (Self::new(q), Self::new(r))
    }

    /// Monic gcd (zero if both are zero).
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.divrem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::constant(T::one()), |acc, _| &acc * self)
    }

    /// Taylor shift: the polynomial X -> p(X + a).
    pub fn shift(&self, a: &T) -> Self {
        let xa = Self::new(vec![a.clone(), T::one()]);
        self.c.iter().rev().fold(Self::zero(), |acc, b| &(&acc * &xa) + &Self::constant(b.clone()))
    }

    /// Companion matrix: ones on the subdiagonal, last column -c_0..-c_{d-1}.
    pub fn companion(&self) -> Matrix<T> {
        let p = self.monic();
        let d = p.degree().expect("companion of the zero polynomial");
        let mut m = Matrix::zeros(d, d);
        for i in 1..d {
            m[(i, i - 1)] = T::one();
        }
        for i in 0..d {
            m[(i, d - 1)] = -p.coeff(i);
        }
        m
    }

    /// Resultant via the Sylvester determinant (coefficients written from
    /// the leading term down, deg g rows of f then deg f rows of g).
    pub fn resultant(&self, g: &Self) -> Result<T, ResultantError> {
        let (Some(m), Some(n)) = (self.degree(), g.degree()) else {
            return Err(ResultantError::ZeroInput);
        };
        let size = m + n;
        if size == 0 {
            return Ok(T::one());
        }
        let mut s = Matrix::zeros(size, size);
        for r in 0..n {
            for k in 0..=m {
                s[(r, r + k)] = self.coeff(m - k);
            }
        }
        for r in 0..m {
            for k in 0..=n {
                s[(n + r, r + k)] = g.coeff(n - k);
            }
        }
        Ok(s.det())
    }
}

impl<T: Scalar> Add for &Polynomial<T> {
    type Output = Polynomial<T>;
    fn add(self, rhs: &Polynomial<T>) -> Polynomial<T> {
        let n = self.c.len().max(rhs.c.len());
        Polynomial::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl<T: Scalar> Sub for &Polynomial<T> {
    type Output = Polynomial<T>;
    fn sub(self, rhs: &Polynomial<T>) -> Polynomial<T> {
        let n = self.c.len().max(rhs.c.len());
        Polynomial::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl<T: Scalar> Mul for &Polynomial<T> {
    type Output = Polynomial<T>;
    fn mul(self, rhs: &Polynomial<T>) -> Polynomial<T> {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut out = vec![T::zero(); self.c.len() + rhs.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            for (j, b) in rhs.c.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Polynomial::new(out)
    }
}

impl<T: Scalar> Neg for &Polynomial<T> {
    type Output = Polynomial<T>;
    fn neg(self) -> Polynomial<T> {
        Polynomial::new(self.c.iter().map(|x| -x.clone()).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{int, Rat};

    fn p(c: &[i64]) -> Polynomial<Rat> {
        Polynomial::new(c.iter().map(|&x| int(x)).collect())
    }

    #[test]
    fn resultant_examples() {
        assert_eq!(p(&[-1, 1]).resultant(&p(&[-2, 1])).unwrap(), int(-1));
        assert_eq!(p(&[1, 0, 1]).resultant(&p(&[-1, 1])).unwrap(), int(2));
        let f = p(&[2, 0, 1]);
        assert_eq!(f.resultant(&f).unwrap(), int(0));
        assert_eq!(p(&[]).resultant(&f), Err(ResultantError::ZeroInput));
        assert_eq!(p(&[3]).resultant(&f).unwrap(), int(9));
    }

    #[test]
    fn division_and_gcd() {
        let a = &p(&[-1, 1]) * &p(&[-2, 1]);
        let b = &p(&[-1, 1]) * &p(&[5, 0, 1]);
        assert_eq!(a.gcd(&b), p(&[-1, 1]));
        let (q, r) = b.divrem(&a);
        assert_eq!(&(&q * &a) + &r, b);
    }

    #[test]
    fn shift_and_companion() {
        let f = p(&[-2, 1]);
        assert_eq!(f.shift(&int(2)), p(&[0, 1]));
        let c = p(&[1, 0, 1]).companion();
        assert_eq!(c.charpoly(), p(&[1, 0, 1]));
        assert_eq!(c[(1, 0)], int(1));
        assert_eq!(c[(0, 1)], int(-1));
    }
}
