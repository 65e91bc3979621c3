use rand::Rng;

use crate::arith::Ring;

use super::Matrix;

/// Elementary transvection `I + s * e_{row,col}` with `s = ±1`, `row != col`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Transvection {
    pub row: usize,
    pub col: usize,
    pub negative: bool,
}

pub fn sample_word<R: Rng + ?Sized>(n: usize, len: usize, rng: &mut R) -> Vec<Transvection> {
    assert!(n >= 2, "transvections need dimension at least 2");
    (0..len)
        .map(|_| {
            let row = rng.gen_range(0..n);
            let mut col = rng.gen_range(0..n - 1);
            if col >= row {
                col += 1;
            }
            Transvection {
                row,
                col,
                negative: rng.gen(),
            }
        })
        .collect()
}

/// Evaluates the product `T_1 T_2 ... T_k` in `ring`.
pub fn word_to_matrix<R: Ring>(ring: &R, n: usize, word: &[Transvection]) -> Matrix<R::Elem> {
    let mut m = Matrix::identity(ring, n);
    for t in word {
        // right multiplication by I + s e_{row,col}: column col += s * column row
        for i in 0..n {
            let v = m[(i, t.row)].clone();
            m[(i, t.col)] = if t.negative {
                ring.sub(&m[(i, t.col)], &v)
            } else {
                ring.add(&m[(i, t.col)], &v)
            };
        }
    }
    m
}

/// Random element of `SL_n` as a product of `word_len` random `±1`
/// transvections. The word depends only on the generator state, so sampling
/// over Z and reducing agrees with sampling over `Z_p` directly.
pub fn sample_sl<R: Ring, G: Rng + ?Sized>(
    ring: &R,
    n: usize,
    word_len: usize,
    rng: &mut G,
) -> Matrix<R::Elem> {
    let word = sample_word(n, word_len, rng);
    word_to_matrix(ring, n, &word)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{Fp64, Integers};
    use crate::matlin::{mat_det, reduce};
    use num_bigint::BigInt;
    use num_traits::One;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn empty_word_is_identity() {
        let z = Integers;
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert_eq!(sample_sl(&z, 4, 0, &mut rng), Matrix::identity(&z, 4));
    }

    #[test]
    fn determinant_is_one() {
        let z = Integers;
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for len in 0..60 {
            let m = sample_sl(&z, 4, len, &mut rng);
            assert!(mat_det(&z, &m).is_one());
        }
    }

    #[test]
    fn reduction_commutes_with_sampling() {
        let z = Integers;
        let f = Fp64::new_unchecked(101);
        for seed in 0..20 {
            let mz = sample_sl(&z, 4, 40, &mut ChaCha8Rng::seed_from_u64(seed));
            let mf = sample_sl(&f, 4, 40, &mut ChaCha8Rng::seed_from_u64(seed));
            assert_eq!(reduce(&f, &mz), mf);
        }
    }

    #[test]
    fn entries_bounded_by_word_length() {
        // each step at most doubles the largest entry
        let z = Integers;
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for len in [1usize, 5, 12, 30] {
            let m = sample_sl(&z, 4, len, &mut rng);
            let bound = BigInt::from(2).pow(len as u32);
            assert!(m.entries().iter().all(|x| x.magnitude() <= bound.magnitude()));
        }
    }
}
