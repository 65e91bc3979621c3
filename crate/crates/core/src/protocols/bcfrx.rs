//! Three-pass key transport over `SL_4`, with the commuting subgroups
//! `A = M^-1 U M` and `B = M^-1 L M` as long-term key.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::Rng;

use crate::arith::{Integers, Ring};
use crate::matlin::{block_set, mat_inv, mat_prod, reduce, sample_sl, Matrix};

/// Long-term key `M` (det 1) and its inverse.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BcfrxKey<E> {
    pub m: Matrix<E>,
    pub m_inv: Matrix<E>,
}

impl<E: Clone> BcfrxKey<E> {
    pub fn from_matrix<R: Ring<Elem = E>>(ring: &R, m: Matrix<E>) -> crate::Result<Self> {
        let m_inv = mat_inv(ring, &m)?;
        Ok(BcfrxKey { m, m_inv })
    }
}

/// Which of the two commuting subgroups.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subgroup {
    /// `M^-1 U M`, `U` acting on the top-left 2x2 block.
    A,
    /// `M^-1 L M`, `L` acting on the bottom-right 2x2 block.
    B,
}

pub fn bcfrx_keygen<R: Ring, G: Rng + ?Sized>(ring: &R, word_len: usize, rng: &mut G) -> BcfrxKey<R::Elem> {
    let m = sample_sl(ring, 4, word_len, rng);
    BcfrxKey::from_matrix(ring, m).expect("transvection products are invertible")
}

/// Embeds a 2x2 matrix as an element of `U` or `L`.
pub fn embed_block<R: Ring>(ring: &R, which: Subgroup, x: &Matrix<R::Elem>) -> Matrix<R::Elem> {
    let mut u = Matrix::identity(ring, 4);
    let pos = match which {
        Subgroup::A => 1,
        Subgroup::B => 2,
    };
    block_set(&mut u, pos, pos, x);
    u
}

pub fn bcfrx_sample_subgroup<R: Ring, G: Rng + ?Sized>(
    ring: &R,
    key: &BcfrxKey<R::Elem>,
    which: Subgroup,
    word_len: usize,
    rng: &mut G,
) -> Matrix<R::Elem> {
    let x = sample_sl(ring, 2, word_len, rng);
    let u = embed_block(ring, which, &x);
    mat_prod(ring, &[&key.m_inv, &u, &key.m])
}

/// Ephemeral choices of one run: Bob's session key and both parties' subgroup elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BcfrxSecrets<E> {
    pub k: Matrix<E>,
    pub a: Matrix<E>,
    pub a2: Matrix<E>,
    pub b: Matrix<E>,
    pub b2: Matrix<E>,
}

/// What an eavesdropper sees: `C = B K B'`, `D = A C A'`, `E = B^-1 D B'^-1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BcfrxTranscript<E> {
    pub c: Matrix<E>,
    pub d: Matrix<E>,
    pub e: Matrix<E>,
    pub truth: Option<BcfrxSecrets<E>>,
}

impl<E: Clone> BcfrxTranscript<E> {
    pub fn public(&self) -> BcfrxTranscript<E> {
        BcfrxTranscript {
            truth: None,
            ..self.clone()
        }
    }

    pub fn reduce<R: Ring>(&self, from: &impl Ring<Elem = E>, to: &R) -> BcfrxTranscript<R::Elem> {
        let red = |m: &Matrix<E>| reduce(to, &m.map(|x| from.to_bigint(x)));
        BcfrxTranscript {
            c: red(&self.c),
            d: red(&self.d),
            e: red(&self.e),
            truth: self.truth.as_ref().map(|t| BcfrxSecrets {
                k: red(&t.k),
                a: red(&t.a),
                a2: red(&t.a2),
                b: red(&t.b),
                b2: red(&t.b2),
            }),
        }
    }
}

/// Runs the protocol honestly with a fixed session key `k`. Ground truth is
/// always attached; strip it with [`BcfrxTranscript::public`].
pub fn bcfrx_run<R: Ring, G: Rng + ?Sized>(
    ring: &R,
    key: &BcfrxKey<R::Elem>,
    k: &Matrix<R::Elem>,
    word_len: usize,
    rng: &mut G,
) -> BcfrxTranscript<R::Elem> {
    let b = bcfrx_sample_subgroup(ring, key, Subgroup::B, word_len, rng);
    let b2 = bcfrx_sample_subgroup(ring, key, Subgroup::B, word_len, rng);
    let c = mat_prod(ring, &[&b, k, &b2]);
    let a = bcfrx_sample_subgroup(ring, key, Subgroup::A, word_len, rng);
    let a2 = bcfrx_sample_subgroup(ring, key, Subgroup::A, word_len, rng);
    let d = mat_prod(ring, &[&a, &c, &a2]);
    let b_inv = mat_inv(ring, &b).expect("subgroup elements are invertible");
    let b2_inv = mat_inv(ring, &b2).expect("subgroup elements are invertible");
    let e = mat_prod(ring, &[&b_inv, &d, &b2_inv]);
    BcfrxTranscript {
        c,
        d,
        e,
        truth: Some(BcfrxSecrets {
            k: k.clone(),
            a,
            a2,
            b,
            b2,
        }),
    }
}

/// Alice's last step: `K = A^-1 E A'^-1`.
pub fn alice_finish<R: Ring>(
    ring: &R,
    a: &Matrix<R::Elem>,
    a2: &Matrix<R::Elem>,
    e: &Matrix<R::Elem>,
) -> crate::Result<Matrix<R::Elem>> {
    Ok(mat_prod(ring, &[&mat_inv(ring, a)?, e, &mat_inv(ring, a2)?]))
}

/// `Λ` such that every observed integer entry lies strictly inside `(-Λ/2, Λ/2)`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LambdaBound {
    max_abs: BigInt,
}

impl LambdaBound {
    pub fn observe(&mut self, m: &Matrix<BigInt>) {
        for x in m.entries() {
            if x.abs() > self.max_abs {
                self.max_abs = x.abs();
            }
        }
    }

    pub fn lambda(&self) -> BigInt {
        (&self.max_abs + 1) * 2
    }

    pub fn log2(&self) -> f64 {
        let l = self.lambda();
        if l.is_zero() {
            return 0.0;
        }
        let shift = l.bits().saturating_sub(64);
        let top = (&l >> shift).to_f64().unwrap_or(f64::MAX);
        top.log2() + shift as f64
    }

    pub fn contains(&self, m: &Matrix<BigInt>) -> bool {
        let half = self.lambda() / 2;
        m.entries().iter().all(|x| x.abs() < half)
    }
}

/// `Λ` over every matrix of an integer run, including the inverses used.
pub fn run_lambda(key: &BcfrxKey<BigInt>, runs: &[BcfrxTranscript<BigInt>]) -> LambdaBound {
    let z = Integers;
    let mut lb = LambdaBound::default();
    lb.observe(&key.m);
    lb.observe(&key.m_inv);
    for t in runs {
        for m in [&t.c, &t.d, &t.e] {
            lb.observe(m);
        }
        if let Some(s) = &t.truth {
            for m in [&s.k, &s.a, &s.a2, &s.b, &s.b2] {
                lb.observe(m);
                if let Ok(inv) = mat_inv(&z, m) {
                    lb.observe(&inv);
                }
            }
        }
    }
    lb
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::Fp64;
    use crate::matlin::{block_get, commutes, mat_det, mat_mul};
    use num_traits::One;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn zero_word_length_is_trivial() {
        let z = Integers;
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let key = bcfrx_keygen(&z, 0, &mut rng);
        assert_eq!(key.m, Matrix::identity(&z, 4));
        assert_eq!(bcfrx_sample_subgroup(&z, &key, Subgroup::A, 0, &mut rng), key.m);
        let k = sample_sl(&z, 4, 10, &mut rng);
        let t = bcfrx_run(&z, &key, &k, 0, &mut rng);
        assert_eq!((&t.c, &t.d, &t.e), (&k, &k, &k));
    }

    #[test]
    fn unconjugated_subgroups_have_block_shape() {
        let z = Integers;
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let key = bcfrx_keygen(&z, 0, &mut rng);
        let a = bcfrx_sample_subgroup(&z, &key, Subgroup::A, 9, &mut rng);
        assert_eq!(block_get(&a, 2, 2), Matrix::identity(&z, 2));
        assert_eq!(block_get(&a, 1, 2), Matrix::zeros(&z, 2, 2));
        assert_eq!(block_get(&a, 2, 1), Matrix::zeros(&z, 2, 2));
        let b = bcfrx_sample_subgroup(&z, &key, Subgroup::B, 9, &mut rng);
        assert_eq!(block_get(&b, 1, 1), Matrix::identity(&z, 2));
    }

    #[test]
    fn honest_runs_agree_over_z_and_zp() {
        let z = Integers;
        let f = Fp64::new_unchecked(4294967291);
        for seed in 0..30 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let key = bcfrx_keygen(&z, 12, &mut rng);
            let k = sample_sl(&z, 4, 12, &mut rng);
            let t = bcfrx_run(&z, &key, &k, 12, &mut rng);
            let s = t.truth.as_ref().unwrap();
            assert_eq!(alice_finish(&z, &s.a, &s.a2, &t.e).unwrap(), k);
            assert!(commutes(&z, &s.a, &s.b) && commutes(&z, &s.a2, &s.b2));
            assert!(mat_det(&z, &t.d).is_one());
            // E = A K A'
            assert_eq!(t.e, mat_prod(&z, &[&s.a, &k, &s.a2]));
            let lb = run_lambda(&key, std::slice::from_ref(&t));
            assert!([&t.c, &t.d, &t.e, &k].iter().all(|m| lb.contains(m)));

            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let key_p = bcfrx_keygen(&f, 12, &mut rng);
            let k_p = sample_sl(&f, 4, 12, &mut rng);
            let t_p = bcfrx_run(&f, &key_p, &k_p, 12, &mut rng);
            assert_eq!(t.reduce(&z, &f), t_p);
            let sp = t_p.truth.as_ref().unwrap();
            assert_eq!(alice_finish(&f, &sp.a, &sp.a2, &t_p.e).unwrap(), k_p);
            assert_eq!(mat_mul(&f, &key_p.m, &key_p.m_inv), Matrix::identity(&f, 4));
        }
    }
}
