//! Residue arithmetic round trips.

use matbreak::arith::{crt_combine, mod_inverse, PrimeField, PrimeStream, Residue};
use num_bigint::{BigInt, RandBigInt};
use num_traits::One;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn primes(bits: u64, count: usize, seed: u64) -> Vec<PrimeField> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut stream = PrimeStream::new(bits);
    (0..count).map(|_| stream.next_prime(&mut rng).unwrap()).collect()
}

proptest! {
    #[test]
    fn crt_recovers_centered_integers(seed in any::<u64>(), bits in 8u64..70, count in 1usize..6) {
        let ps = primes(bits, count, seed);
        let n: BigInt = ps.iter().map(|p| BigInt::from(p.modulus().clone())).product();
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(1));
        // x in (-n/2, n/2]
        let x = rng.gen_bigint_range(&(-&n / 2 + 1), &(&n / 2 + 1));
        let residues: Vec<_> = ps
            .iter()
            .map(|p| (BigInt::from(Residue::new(&x, p).value().clone()), p.clone()))
            .collect();
        prop_assert_eq!(crt_combine(&residues).unwrap(), x);
    }

    #[test]
    fn inverses_multiply_to_one(seed in any::<u64>(), bits in 3u64..130) {
        let p = &primes(bits, 1, seed)[0];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pm = BigInt::from(p.modulus().clone());
        let a = Residue::new(&rng.gen_bigint_range(&BigInt::one(), &pm), p);
        let inv = mod_inverse(&a).unwrap();
        prop_assert!(a.mul(&inv).value().is_one());
    }
}
