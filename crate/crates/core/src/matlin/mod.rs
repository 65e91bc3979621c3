//! Dense matrices over a runtime ring.

mod sample;
mod solve;

pub use sample::{sample_sl, sample_word, word_to_matrix, Transvection};
pub use solve::{left_reduce, rref, solve_left, solve_right, Rref};

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::arith::{Ring, RingDescriptor};
use crate::error::{Error, Result};

/// Row-major dense matrix. Entries are only meaningful relative to a ring.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Matrix<E> {
    rows: usize,
    cols: usize,
    data: Vec<E>,
}

impl<E: Clone> Matrix<E> {
    pub fn from_vec(rows: usize, cols: usize, data: Vec<E>) -> Self {
        assert_eq!(rows * cols, data.len(), "matrix data has wrong length");
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<E>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix::from_vec(r, c, rows.into_iter().flatten().collect())
    }

    pub fn filled(rows: usize, cols: usize, v: E) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![v; rows * cols],
        }
    }

    pub fn zeros<R: Ring<Elem = E>>(ring: &R, rows: usize, cols: usize) -> Self {
        Self::filled(rows, cols, ring.zero())
    }

    pub fn identity<R: Ring<Elem = E>>(ring: &R, n: usize) -> Self {
        let mut m = Self::zeros(ring, n, n);
        for i in 0..n {
            m[(i, i)] = ring.one();
        }
        m
    }

    pub fn scalar<R: Ring<Elem = E>>(ring: &R, n: usize, s: &E) -> Self {
        let mut m = Self::zeros(ring, n, n);
        for i in 0..n {
            m[(i, i)] = s.clone();
        }
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

    pub fn entries(&self) -> &[E] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[E] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<E>> {
        self.data.chunks(self.cols.max(1)).map(|r| r.to_vec()).collect()
    }

    pub fn map<F, T>(&self, f: F) -> Matrix<T>
    where
        F: FnMut(&E) -> T,
    {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self[(i, j)].clone());
            }
        }
        Matrix {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn submatrix(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        assert!(r0 + rows <= self.rows && c0 + cols <= self.cols);
        let mut data = Vec::with_capacity(rows * cols);
        for i in r0..r0 + rows {
            data.extend_from_slice(&self.data[i * self.cols + c0..i * self.cols + c0 + cols]);
        }
        Matrix { rows, cols, data }
    }

    pub fn set_submatrix(&mut self, r0: usize, c0: usize, m: &Matrix<E>) {
        assert!(r0 + m.rows <= self.rows && c0 + m.cols <= self.cols);
        for i in 0..m.rows {
            for j in 0..m.cols {
                self[(r0 + i, c0 + j)] = m[(i, j)].clone();
            }
        }
    }

    /// Column vector view of a slice.
    pub fn column(v: &[E]) -> Self {
        Matrix::from_vec(v.len(), 1, v.to_vec())
    }
}

impl<E> std::ops::Index<(usize, usize)> for Matrix<E> {
    type Output = E;
    fn index(&self, (i, j): (usize, usize)) -> &E {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of range");
        &self.data[i * self.cols + j]
    }
}

impl<E> std::ops::IndexMut<(usize, usize)> for Matrix<E> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut E {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of range");
        &mut self.data[i * self.cols + j]
    }
}

pub fn mat_mul<R: Ring>(ring: &R, a: &Matrix<R::Elem>, b: &Matrix<R::Elem>) -> Matrix<R::Elem> {
    assert_eq!(a.cols, b.rows, "dimension mismatch in product");
    let mut out = Matrix::zeros(ring, a.rows, b.cols);
    for i in 0..a.rows {
        for k in 0..a.cols {
            let aik = &a[(i, k)];
            if ring.is_zero(aik) {
                continue;
            }
            for j in 0..b.cols {
                let t = ring.mul(aik, &b[(k, j)]);
                out[(i, j)] = ring.add(&out[(i, j)], &t);
            }
        }
    }
    out
}

/// Product of a sequence of matrices, left to right.
pub fn mat_prod<R: Ring>(ring: &R, factors: &[&Matrix<R::Elem>]) -> Matrix<R::Elem> {
    let (first, rest) = factors.split_first().expect("empty product");
    rest.iter().fold((*first).clone(), |acc, m| mat_mul(ring, &acc, m))
}

pub fn mat_add<R: Ring>(ring: &R, a: &Matrix<R::Elem>, b: &Matrix<R::Elem>) -> Matrix<R::Elem> {
    assert_eq!((a.rows, a.cols), (b.rows, b.cols));
    Matrix {
        rows: a.rows,
        cols: a.cols,
        data: a.data.iter().zip(&b.data).map(|(x, y)| ring.add(x, y)).collect(),
    }
}

pub fn mat_sub<R: Ring>(ring: &R, a: &Matrix<R::Elem>, b: &Matrix<R::Elem>) -> Matrix<R::Elem> {
    assert_eq!((a.rows, a.cols), (b.rows, b.cols));
    Matrix {
        rows: a.rows,
        cols: a.cols,
        data: a.data.iter().zip(&b.data).map(|(x, y)| ring.sub(x, y)).collect(),
    }
}

pub fn mat_scale<R: Ring>(ring: &R, s: &R::Elem, a: &Matrix<R::Elem>) -> Matrix<R::Elem> {
    a.map(|x| ring.mul(s, x))
}

pub fn mat_vec<R: Ring>(ring: &R, a: &Matrix<R::Elem>, v: &[R::Elem]) -> Vec<R::Elem> {
    assert_eq!(a.cols, v.len());
    (0..a.rows)
        .map(|i| {
            a.row(i)
                .iter()
                .zip(v)
                .fold(ring.zero(), |acc, (x, y)| ring.add(&acc, &ring.mul(x, y)))
        })
        .collect()
}

pub fn is_identity<R: Ring>(ring: &R, a: &Matrix<R::Elem>) -> bool {
    a.is_square() && *a == Matrix::identity(ring, a.rows)
}

pub fn commutes<R: Ring>(ring: &R, a: &Matrix<R::Elem>, b: &Matrix<R::Elem>) -> bool {
    mat_mul(ring, a, b) == mat_mul(ring, b, a)
}

/// Reduces an integer matrix into `ring` entrywise.
pub fn reduce<R: Ring>(ring: &R, a: &Matrix<BigInt>) -> Matrix<R::Elem> {
    a.map(|x| ring.from_bigint(x))
}

/// Determinant by Bareiss fraction-free elimination (exact over Z).
pub fn mat_det<R: Ring>(ring: &R, a: &Matrix<R::Elem>) -> R::Elem {
    assert!(a.is_square(), "determinant of non-square matrix");
    let n = a.rows;
    if n == 0 {
        return ring.one();
    }
    let mut m = a.clone();
    let mut negate = false;
    let mut prev = ring.one();
    for k in 0..n {
        let Some(piv) = (k..n).find(|&r| !ring.is_zero(&m[(r, k)])) else {
            return ring.zero();
        };
        if piv != k {
            m.swap_rows(piv, k);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = ring.sub(&ring.mul(&m[(k, k)], &m[(i, j)]), &ring.mul(&m[(i, k)], &m[(k, j)]));
                m[(i, j)] = ring.div_exact(&t, &prev).expect("Bareiss division is exact");
            }
        }
        prev = m[(k, k)].clone();
    }
    let d = m[(n - 1, n - 1)].clone();
    if negate {
        ring.neg(&d)
    } else {
        d
    }
}

/// Inverse by fraction-free Gauss–Jordan on `[a | I]`; over Z this needs `det(a) = ±1`.
pub fn mat_inv<R: Ring>(ring: &R, a: &Matrix<R::Elem>) -> Result<Matrix<R::Elem>> {
    if !a.is_square() {
        return Err(Error::InvalidArgument("inverse of non-square matrix".into()));
    }
    let n = a.rows;
    let mut m = Matrix::zeros(ring, n, 2 * n);
    m.set_submatrix(0, 0, a);
    m.set_submatrix(0, n, &Matrix::identity(ring, n));
    let mut prev = ring.one();
    for k in 0..n {
        let piv = (k..n)
            .find(|&r| !ring.is_zero(&m[(r, k)]))
            .ok_or(Error::NonInvertible)?;
        m.swap_rows(piv, k);
        let pivot = m[(k, k)].clone();
        for i in (0..n).filter(|&i| i != k) {
            let factor = m[(i, k)].clone();
            for j in 0..2 * n {
                let t = ring.sub(&ring.mul(&pivot, &m[(i, j)]), &ring.mul(&factor, &m[(k, j)]));
                m[(i, j)] = ring.div_exact(&t, &prev).expect("fraction-free step is exact");
            }
        }
        prev = pivot;
    }
    // every row has been scaled to carry the final pivot on the diagonal
    let d = prev;
    let mut inv = Matrix::zeros(ring, n, n);
    for i in 0..n {
        let dii = &m[(i, i)];
        debug_assert_eq!(*dii, d);
        for j in 0..n {
            inv[(i, j)] = ring.div_exact(&m[(i, n + j)], dii).ok_or(Error::NonInvertible)?;
        }
    }
    Ok(inv)
}

/// The 2x2 block `Z_ij` (`i, j` in `1..=2`) of a 4x4 matrix.
pub fn block_get<E: Clone>(z: &Matrix<E>, i: usize, j: usize) -> Matrix<E> {
    assert!(z.rows == 4 && z.cols == 4, "block access needs a 4x4 matrix");
    assert!((1..=2).contains(&i) && (1..=2).contains(&j), "block index out of range");
    z.submatrix(2 * (i - 1), 2 * (j - 1), 2, 2)
}

pub fn block_set<E: Clone>(z: &mut Matrix<E>, i: usize, j: usize, b: &Matrix<E>) {
    assert!(z.rows == 4 && z.cols == 4 && b.rows == 2 && b.cols == 2);
    assert!((1..=2).contains(&i) && (1..=2).contains(&j), "block index out of range");
    z.set_submatrix(2 * (i - 1), 2 * (j - 1), b);
}

pub fn from_blocks<E: Clone>(
    z11: &Matrix<E>,
    z12: &Matrix<E>,
    z21: &Matrix<E>,
    z22: &Matrix<E>,
) -> Matrix<E> {
    let mut z = Matrix::filled(4, 4, z11[(0, 0)].clone());
    block_set(&mut z, 1, 1, z11);
    block_set(&mut z, 1, 2, z12);
    block_set(&mut z, 2, 1, z21);
    block_set(&mut z, 2, 2, z22);
    z
}

/// Wire form: ring descriptor plus row-major decimal strings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub ring: RingDescriptor,
    pub rows: Vec<Vec<String>>,
}

impl MatrixJson {
    pub fn encode<R: Ring>(ring: &R, m: &Matrix<R::Elem>) -> Self {
        MatrixJson {
            ring: ring.descriptor(),
            rows: m
                .to_rows()
                .iter()
                .map(|r| r.iter().map(|x| ring.to_bigint(x).to_string()).collect())
                .collect(),
        }
    }

    /// Parses entries as integers without checking ring membership.
    pub fn integers(&self) -> Result<Matrix<BigInt>> {
        let rows = self
            .rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|s| {
                        s.parse::<BigInt>()
                            .map_err(|_| Error::Schema(format!("not a decimal integer: {s:?}")))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        if rows.iter().any(|r| r.len() != rows.len()) {
            return Err(Error::Schema("matrix is not square".into()));
        }
        Ok(Matrix::from_rows(rows))
    }

    /// Parses into `ring`, checking the descriptor and canonical entries.
    pub fn decode<R: Ring>(&self, ring: &R) -> Result<Matrix<R::Elem>> {
        if self.ring != ring.descriptor() {
            return Err(Error::RingMismatch(format!(
                "expected {}, found {}",
                ring.descriptor(),
                self.ring
            )));
        }
        let m = self.integers()?;
        if let Some(bad) = m.entries().iter().find(|x| !ring.is_canonical(x)) {
            return Err(Error::RingMismatch(format!("entry {bad} is not reduced in {}", self.ring)));
        }
        Ok(reduce(ring, &m))
    }
}

/// Wire form of a vector: ring descriptor plus decimal strings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VectorJson {
    pub ring: RingDescriptor,
    pub entries: Vec<String>,
}

impl VectorJson {
    pub fn encode<R: Ring>(ring: &R, v: &[R::Elem]) -> Self {
        VectorJson {
            ring: ring.descriptor(),
            entries: v.iter().map(|x| ring.to_bigint(x).to_string()).collect(),
        }
    }

    /// Parses into `ring`, checking the descriptor and canonical entries.
    pub fn decode<R: Ring>(&self, ring: &R) -> Result<Vec<R::Elem>> {
        if self.ring != ring.descriptor() {
            return Err(Error::RingMismatch(format!(
                "expected {}, found {}",
                ring.descriptor(),
                self.ring
            )));
        }
        self.entries
            .iter()
            .map(|s| {
                let x: BigInt = s
                    .parse()
                    .map_err(|_| Error::Schema(format!("not a decimal integer: {s:?}")))?;
                if !ring.is_canonical(&x) {
                    return Err(Error::RingMismatch(format!("entry {x} is not reduced in {}", self.ring)));
                }
                Ok(ring.from_bigint(&x))
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{Field, Fp64, Integers};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn zm(rows: Vec<Vec<i64>>) -> Matrix<BigInt> {
        Matrix::from_rows(rows.into_iter().map(|r| r.into_iter().map(BigInt::from).collect()).collect())
    }

    #[test]
    fn inverse_of_identity_and_transvection() {
        let z = Integers;
        assert_eq!(mat_inv(&z, &Matrix::identity(&z, 4)).unwrap(), Matrix::identity(&z, 4));
        let t = zm(vec![vec![1, 1], vec![0, 1]]);
        assert_eq!(mat_inv(&z, &t).unwrap(), zm(vec![vec![1, -1], vec![0, 1]]));
    }

    #[test]
    fn integer_inverse_requires_unit_determinant() {
        let z = Integers;
        let m = zm(vec![vec![2, 0], vec![0, 1]]);
        assert_eq!(mat_inv(&z, &m), Err(Error::NonInvertible));
        assert_eq!(mat_inv(&z, &zm(vec![vec![1, 2], vec![2, 4]])), Err(Error::NonInvertible));
        let swap = zm(vec![vec![0, 1], vec![1, 0]]);
        assert_eq!(mat_inv(&z, &swap).unwrap(), swap);
    }

    #[test]
    fn random_field_inverse_round_trips() {
        let f = Fp64::new_unchecked(1_000_000_007);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let n = 4;
            let a = Matrix::from_vec(n, n, (0..n * n).map(|_| f.random(&mut rng)).collect());
            match mat_inv(&f, &a) {
                Ok(ai) => {
                    assert!(is_identity(&f, &mat_mul(&f, &ai, &a)));
                    assert!(is_identity(&f, &mat_mul(&f, &a, &ai)));
                }
                Err(_) => assert_eq!(mat_det(&f, &a), 0),
            }
        }
    }

    #[test]
    fn determinant_matches_cofactor_expansion() {
        let z = Integers;
        let m = zm(vec![vec![2, -1, 0, 3], vec![1, 4, 2, 0], vec![0, 5, -3, 1], vec![7, 0, 1, 1]]);
        assert_eq!(mat_det(&z, &m), BigInt::from(cofactor_det(&m.map(|x| i64::try_from(x).unwrap()))));
        let zero_col = zm(vec![vec![0, 1], vec![0, 2]]);
        assert_eq!(mat_det(&z, &zero_col), BigInt::from(0));
        let swap = zm(vec![vec![0, 1], vec![1, 0]]);
        assert_eq!(mat_det(&z, &swap), BigInt::from(-1));
    }

    fn cofactor_det(m: &Matrix<i64>) -> i64 {
        let n = m.rows();
        if n == 1 {
            return m[(0, 0)];
        }
        (0..n)
            .map(|j| {
                let minor: Vec<i64> = (1..n)
                    .flat_map(|i| (0..n).filter(move |&c| c != j).map(move |c| (i, c)))
                    .map(|ij| m[ij])
                    .collect();
                let sign = if j % 2 == 0 { 1 } else { -1 };
                sign * m[(0, j)] * cofactor_det(&Matrix::from_vec(n - 1, n - 1, minor))
            })
            .sum()
    }

    #[test]
    fn block_access() {
        let z = Integers;
        let id = Matrix::identity(&z, 4);
        assert_eq!(block_get(&id, 1, 1), Matrix::identity(&z, 2));
        assert_eq!(block_get(&id, 1, 2), Matrix::zeros(&z, 2, 2));
        let seq = Matrix::from_vec(4, 4, (1..=16).map(BigInt::from).collect());
        assert_eq!(block_get(&seq, 2, 1), zm(vec![vec![9, 10], vec![13, 14]]));
        let rebuilt = from_blocks(
            &block_get(&seq, 1, 1),
            &block_get(&seq, 1, 2),
            &block_get(&seq, 2, 1),
            &block_get(&seq, 2, 2),
        );
        assert_eq!(rebuilt, seq);
    }

    #[test]
    fn commuting_checks() {
        let f = Fp64::new_unchecked(7);
        let a = Matrix::from_rows(vec![vec![0, 1], vec![0, 0]]);
        let b = Matrix::from_rows(vec![vec![0, 0], vec![1, 0]]);
        assert!(!commutes(&f, &a, &b));
        assert!(commutes(&f, &Matrix::identity(&f, 2), &a));
    }

    #[test]
    fn json_rejects_unreduced_entries() {
        let f = Fp64::new_unchecked(7);
        let m = Matrix::from_rows(vec![vec![1u64, 2], vec![3, 4]]);
        let js = MatrixJson::encode(&f, &m);
        assert_eq!(js.decode(&f).unwrap(), m);
        let mut bad = js.clone();
        bad.rows[0][0] = "7".into();
        assert!(matches!(bad.decode(&f), Err(Error::RingMismatch(_))));
        assert!(matches!(js.decode(&Fp64::new_unchecked(11)), Err(Error::RingMismatch(_))));
    }
}
