use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use super::poly::Polynomial;
use super::Scalar;

/// Dense row-major matrix over a field.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> Matrix<T> {
    pub fn from_vec(rows: usize, cols: usize, data: Vec<T>) -> Self {
        assert_eq!(data.len(), rows * cols, "entry count must be rows*cols");
        Matrix { rows, cols, data }
    }

    /// Builds from nested rows; panics on ragged input.
    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        Matrix::from_vec(r, c, rows.into_iter().flatten().collect())
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix::from_vec(rows, cols, vec![T::zero(); rows * cols])
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn diag(d: &[T]) -> Self {
        let n = d.len();
        let mut m = Self::zeros(n, n);
        for (i, x) in d.iter().enumerate() {
            m[(i, i)] = x.clone();
        }
        m
    }

    /// Matrix unit E_ij (0-based).
    pub fn unit(n: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zeros(n, n);
        m[(i, j)] = T::one();
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[T] {
        &self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        self.data.chunks(self.cols.max(1)).map(|r| r.to_vec()).take(self.rows).collect()
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn scale(&self, c: &T) -> Self {
        Matrix::from_vec(
            self.rows,
            self.cols,
            self.data.iter().map(|x| x.clone() * c.clone()).collect(),
        )
    }

    pub fn trace(&self) -> T {
        (0..self.rows.min(self.cols)).fold(T::zero(), |acc, i| acc + self[(i, i)].clone())
    }

    /// Submatrix on the given row and column index lists.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut out = Vec::with_capacity(rows.len() * cols.len());
        for &i in rows {
            for &j in cols {
                out.push(self[(i, j)].clone());
            }
        }
        Matrix::from_vec(rows.len(), cols.len(), out)
    }

    /// Conjugation-style permutation: (P^{-1} A P) where P sends e_j to e_{perm[j]}.
    pub fn permute(&self, perm: &[usize]) -> Self {
        let n = self.rows;
        let mut out = Self::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] = self[(perm[i], perm[j])].clone();
            }
        }
        out
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::identity(self.rows);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Commutator [self, other].
    pub fn bracket(&self, other: &Self) -> Self {
        &(self * other) - &(other * self)
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(pr) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            m.swap_rows(r, pr);
            let inv = T::one() / m[(r, c)].clone();
            for j in c..m.cols {
                let v = m[(r, j)].clone() * inv.clone();
                m[(r, j)] = v;
            }
            for i in 0..m.rows {
                if i != r && !m[(i, c)].is_zero() {
                    let f = m[(i, c)].clone();
                    for j in c..m.cols {
                        let v = m[(i, j)].clone() - f.clone() * m[(r, j)].clone();
                        m[(i, j)] = v;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right null space {v : self v = 0}.
    pub fn kernel(&self) -> Vec<Vec<T>> {
        let (m, piv) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !piv.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![T::zero(); self.cols];
                v[f] = T::one();
                for (r, &pc) in piv.iter().enumerate() {
                    v[pc] = -m[(r, f)].clone();
                }
                v
            })
            .collect()
    }

    pub fn det(&self) -> T {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let mut m = self.clone();
        let n = self.rows;
        let mut d = T::one();
        for c in 0..n {
            let Some(pr) = (c..n).find(|&i| !m[(i, c)].is_zero()) else {
                return T::zero();
            };
            if pr != c {
                m.swap_rows(c, pr);
                d = -d;
            }
            let piv = m[(c, c)].clone();
            d = d * piv.clone();
            for i in c + 1..n {
                if !m[(i, c)].is_zero() {
                    let f = m[(i, c)].clone() / piv.clone();
                    for j in c..n {
                        let v = m[(i, j)].clone() - f.clone() * m[(c, j)].clone();
                        m[(i, j)] = v;
                    }
                }
            }
        }
        d
    }

    pub fn inverse(&self) -> Option<Self> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        if n == 0 {
            return Some(Self::zeros(0, 0));
        }
        let mut aug = Self::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, n + i)] = T::one();
        }
        let (r, piv) = aug.rref();
        if piv.len() < n || piv[n - 1] != n - 1 {
            return None;
        }
        let idx: Vec<usize> = (0..n).collect();
        let cols: Vec<usize> = (n..2 * n).collect();
        Some(r.select(&idx, &cols))
    }

    /// Characteristic polynomial det(T - A), by Faddeev-LeVerrier.
    pub fn charpoly(&self) -> Polynomial<T> {
        assert!(self.is_square(), "characteristic polynomial of a non-square matrix");
        let n = self.rows;
        let mut c = vec![T::zero(); n + 1];
        c[n] = T::one();
        let mut mk = Self::zeros(n, n);
        let mut k_t = T::zero();
        for k in 1..=n {
            k_t = k_t + T::one();
            let mut next = self * &mk;
            for i in 0..n {
                next[(i, i)] = next[(i, i)].clone() + c[n - k + 1].clone();
            }
            mk = next;
            c[n - k] = -((self * &mk).trace() / k_t.clone());
        }
        Polynomial::new(c)
    }

    /// Direct sum of square blocks along the diagonal.
    pub fn block_diag(blocks: &[Self]) -> Self {
        let n: usize = blocks.iter().map(|b| b.rows).sum();
        let mut m = Self::zeros(n, n);
        let mut o = 0;
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    m[(o + i, o + j)] = b[(i, j)].clone();
                }
            }
            o += b.rows;
        }
        m
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix::from_vec(self.rows, self.cols, self.data.iter().map(f).collect())
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.cols + j]
    }
}

impl<T: Scalar> Mul for &Matrix<T> {
    type Output = Matrix<T>;
    fn mul(self, rhs: &Matrix<T>) -> Matrix<T> {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in product");
        let mut out: Matrix<T> = Matrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    if !rhs[(k, j)].is_zero() {
                        out[(i, j)] = out[(i, j)].clone() + a.clone() * rhs[(k, j)].clone();
                    }
                }
            }
        }
        out
    }
}

impl<T: Scalar> Add for &Matrix<T> {
    type Output = Matrix<T>;
    fn add(self, rhs: &Matrix<T>) -> Matrix<T> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix::from_vec(
            self.rows,
            self.cols,
            self.data.iter().zip(&rhs.data).map(|(a, b)| a.clone() + b.clone()).collect(),
        )
    }
}

impl<T: Scalar> Sub for &Matrix<T> {
    type Output = Matrix<T>;
    fn sub(self, rhs: &Matrix<T>) -> Matrix<T> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix::from_vec(
            self.rows,
            self.cols,
            self.data.iter().zip(&rhs.data).map(|(a, b)| a.clone() - b.clone()).collect(),
        )
    }
}

impl<T: Scalar> Neg for &Matrix<T> {
    type Output = Matrix<T>;
    fn neg(self) -> Matrix<T> {
        self.map(|x| -x.clone())
    }
}

impl<T: fmt::Debug> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[")?;
        for i in 0..self.rows {
            let row = &self.data[i * self.cols..(i + 1) * self.cols];
            writeln!(f, "  {:?}", row)?;
        }
        write!(f, "]")
    }
}
