use crate::arith::Field;
use crate::error::{Error, Result};

use super::Matrix;

/// Reduced row echelon form together with its pivot columns.
#[derive(Debug, Clone)]
pub struct Rref<E> {
    pub matrix: Matrix<E>,
    pub pivots: Vec<usize>,
}

/// Gauss–Jordan over a field, restricted to the first `ncols` columns for
/// pivoting (the remaining columns ride along as an augmented block).
/// Pivots are taken as the first nonzero entry scanning rows in order.
pub fn rref<F: Field>(field: &F, m: &Matrix<F::Elem>, ncols: usize) -> Rref<F::Elem> {
    let mut m = m.clone();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == m.rows() {
            break;
        }
        let Some(piv) = (r..m.rows()).find(|&i| !field.is_zero(&m[(i, c)])) else {
            continue;
        };
        m.swap_rows(piv, r);
        let inv = field.inv(&m[(r, c)]).expect("nonzero pivot");
        for j in c..m.cols() {
            m[(r, j)] = field.mul(&inv, &m[(r, j)]);
        }
        for i in (0..m.rows()).filter(|&i| i != r) {
            let factor = m[(i, c)].clone();
            if field.is_zero(&factor) {
                continue;
            }
            for j in c..m.cols() {
                let t = field.mul(&factor, &m[(r, j)]);
                m[(i, j)] = field.sub(&m[(i, j)], &t);
            }
        }
        pivots.push(c);
        r += 1;
    }
    Rref { matrix: m, pivots }
}

/// Some `Y` with `a * Y = b`; free variables are set to zero.
pub fn solve_right<F: Field>(
    field: &F,
    a: &Matrix<F::Elem>,
    b: &Matrix<F::Elem>,
) -> Result<Matrix<F::Elem>> {
    assert_eq!(a.rows(), b.rows(), "solve_right: row counts differ");
    let (n, k) = (a.cols(), b.cols());
    let mut aug = Matrix::zeros(field, a.rows(), n + k);
    aug.set_submatrix(0, 0, a);
    aug.set_submatrix(0, n, b);
    let Rref { matrix, pivots } = rref(field, &aug, n);
    let rank = pivots.len();
    for i in rank..matrix.rows() {
        if (n..n + k).any(|j| !field.is_zero(&matrix[(i, j)])) {
            return Err(Error::NoSolution);
        }
    }
    let mut y = Matrix::zeros(field, n, k);
    for (i, &c) in pivots.iter().enumerate() {
        for j in 0..k {
            y[(c, j)] = matrix[(i, n + j)].clone();
        }
    }
    Ok(y)
}

/// Some `X` with `X * a = b`; free variables are set to zero.
pub fn solve_left<F: Field>(
    field: &F,
    a: &Matrix<F::Elem>,
    b: &Matrix<F::Elem>,
) -> Result<Matrix<F::Elem>> {
    Ok(solve_right(field, &a.transpose(), &b.transpose())?.transpose())
}

/// Returns `(f, c)` with `f` invertible, `c = f * x` the reduced row echelon
/// form of `x`. For invertible `x` this is `(x^-1, I)`.
pub fn left_reduce<F: Field>(field: &F, x: &Matrix<F::Elem>) -> (Matrix<F::Elem>, Matrix<F::Elem>) {
    let (r, n) = (x.rows(), x.cols());
    let mut aug = Matrix::zeros(field, r, n + r);
    aug.set_submatrix(0, 0, x);
    aug.set_submatrix(0, n, &Matrix::identity(field, r));
    let reduced = rref(field, &aug, n).matrix;
    (reduced.submatrix(0, n, r, r), reduced.submatrix(0, 0, r, n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{Fp64, Ring};
    use crate::matlin::{is_identity, mat_det, mat_inv, mat_mul};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn f7() -> Fp64 {
        Fp64::new_unchecked(7)
    }

    fn m2(a: u64, b: u64, c: u64, d: u64) -> Matrix<u64> {
        Matrix::from_rows(vec![vec![a, b], vec![c, d]])
    }

    #[test]
    fn solve_left_identity_and_zero() {
        let f = f7();
        let m = m2(1, 2, 3, 4);
        assert_eq!(solve_left(&f, &Matrix::identity(&f, 2), &m).unwrap(), m);
        let zero = Matrix::zeros(&f, 2, 2);
        assert_eq!(solve_left(&f, &zero, &zero).unwrap(), zero);
        assert_eq!(solve_left(&f, &zero, &m), Err(Error::NoSolution));
    }

    #[test]
    fn solutions_satisfy_their_equations() {
        let f = Fp64::new_unchecked(1_000_003);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            let a = Matrix::from_vec(3, 3, (0..9).map(|_| f.random(&mut rng)).collect());
            let b = Matrix::from_vec(3, 3, (0..9).map(|_| f.random(&mut rng)).collect());
            let x = solve_left(&f, &a, &b).unwrap();
            assert_eq!(mat_mul(&f, &x, &a), b);
            let y = solve_right(&f, &a, &b).unwrap();
            assert_eq!(mat_mul(&f, &a, &y), b);
        }
    }

    #[test]
    fn singular_but_consistent_system() {
        let f = f7();
        // a has rank 1; b chosen in its column space
        let a = m2(1, 2, 2, 4);
        let b = mat_mul(&f, &a, &m2(3, 1, 5, 6));
        let y = solve_right(&f, &a, &b).unwrap();
        assert_eq!(mat_mul(&f, &a, &y), b);
        // free variable (second row of y) zeroed
        assert_eq!(y.row(1), &[0, 0]);
    }

    #[test]
    fn left_reduce_examples() {
        let f = f7();
        let x = m2(2, 3, 1, 4);
        assert_ne!(mat_det(&f, &x), 0);
        let (fx, c) = left_reduce(&f, &x);
        assert_eq!(fx, mat_inv(&f, &x).unwrap());
        assert!(is_identity(&f, &c));

        let zero = Matrix::zeros(&f, 2, 2);
        assert_eq!(left_reduce(&f, &zero), (Matrix::identity(&f, 2), zero));

        let (fx, c) = left_reduce(&f, &m2(0, 0, 1, 0));
        assert_eq!(fx, m2(0, 1, 1, 0));
        assert_eq!(c, m2(1, 0, 0, 0));
    }

    #[test]
    fn left_reduce_rank_one_with_offset() {
        let f = f7();
        let x = m2(2, 6, 1, 3);
        let (fx, c) = left_reduce(&f, &x);
        assert_eq!(mat_mul(&f, &fx, &x), c);
        assert_ne!(mat_det(&f, &fx), 0);
        assert_eq!(c, m2(1, 3, 0, 0));
        assert_eq!(left_reduce(&f, &c), (Matrix::identity(&f, 2), c.clone()));
        assert!(f.is_zero(&mat_det(&f, &c)));
    }
}
