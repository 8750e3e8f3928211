use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{int, Matrix, Rat};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ConjError {
    #[error("matrices are not square of the same size")]
    Shape,
    #[error("matrices are not conjugate")]
    NotConjugate,
}

/// Matrix of the linear map g -> g y - x g on n x n matrices.
fn intertwiner_system(x: &Matrix<Rat>, y: &Matrix<Rat>) -> Matrix<Rat> {
    let n = x.rows();
    let mut s = Matrix::zeros(n * n, n * n);
    for i in 0..n {
        for j in 0..n {
            let row = i * n + j;
            for k in 0..n {
                let a = &y[(k, j)];
                if !a.is_zero() {
                    s[(row, i * n + k)] += a;
                }
                let b = &x[(i, k)];
                if !b.is_zero() {
                    s[(row, k * n + j)] -= b;
                }
            }
        }
    }
    s
}

/// Similarity test over Q: x ~ y iff the spaces {g : g y = x g},
/// {g : g x = x g} and {g : g y = y g} all have the same dimension.
pub fn similar(x: &Matrix<Rat>, y: &Matrix<Rat>) -> bool {
    if !x.is_square() || x.rows() != y.rows() || y.cols() != x.cols() {
        return false;
    }
    let nn = x.rows() * x.rows();
    let dxy = nn - intertwiner_system(x, y).rank();
    let dxx = nn - intertwiner_system(x, x).rank();
    let dyy = nn - intertwiner_system(y, y).rank();
    dxy == dxx && dxx == dyy
}

/// Returns an invertible g with g y g^{-1} = x.
///
/// The intertwiner space is computed exactly and an invertible element is
/// drawn from it with a fixed-seed generator, so the output is
/// deterministic.
pub fn conjugator(x: &Matrix<Rat>, y: &Matrix<Rat>) -> Result<Matrix<Rat>, ConjError> {
    if !x.is_square() || x.rows() != y.rows() || y.cols() != x.cols() {
        return Err(ConjError::Shape);
    }
    if x.charpoly() != y.charpoly() || !similar(x, y) {
        return Err(ConjError::NotConjugate);
    }
    let n = x.rows();
    let basis = intertwiner_system(x, y).kernel();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0c0e);
    for attempt in 0..400 {
        let range = 1 + attempt / 20;
        let mut g = Matrix::<Rat>::zeros(n, n);
        for v in &basis {
            let c = int(rng.gen_range(-range..=range));
            if c.is_zero() {
                continue;
            }
            for (idx, e) in v.iter().enumerate() {
                if !e.is_zero() {
                    g[(idx / n, idx % n)] += &c * e;
                }
            }
        }
        if !g.det().is_zero() {
            debug_assert_eq!(&(&g * y) * &g.inverse().unwrap(), x.clone());
            return Ok(g);
        }
    }
    // similar matrices always admit one; reaching here means bad luck only
    Err(ConjError::NotConjugate)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::int;

    fn m(rows: &[&[i64]]) -> Matrix<Rat> {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect())
    }

    fn check(x: &Matrix<Rat>, y: &Matrix<Rat>) {
        let g = conjugator(x, y).unwrap();
        assert_eq!(&(&g * y) * &g.inverse().unwrap(), *x);
    }

    #[test]
    fn examples() {
        let x = m(&[&[0, 1], &[0, 0]]);
        check(&x, &x);
        let y = m(&[&[0, 3], &[0, 0]]);
        check(&x, &y);
        check(&m(&[&[1, 0], &[0, 2]]), &m(&[&[2, 0], &[0, 1]]));
        assert_eq!(
            conjugator(&x, &Matrix::zeros(2, 2)),
            Err(ConjError::NotConjugate)
        );
        // same characteristic polynomial, different Jordan type
        let a = m(&[&[0, 1, 0], &[0, 0, 0], &[0, 0, 0]]);
        let b = m(&[&[0, 1, 0], &[0, 0, 1], &[0, 0, 0]]);
        assert_eq!(conjugator(&a, &b), Err(ConjError::NotConjugate));
    }
}
