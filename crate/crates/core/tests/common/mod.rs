//! Oracles shared by the integration tests and the acceptance runner.
#![allow(dead_code)]

use matbreak::arith::{gen_prime, Field, Fp64, Ring};
use matbreak::attacks::{candidate_from_key, normalized_equivalent_key, recover_key_mod_p, restricted_equivalent_key, RestrictedCombo};
use matbreak::matlin::{block_get, from_blocks, mat_det, mat_inv, mat_mul, mat_prod, sample_sl, Matrix};
use matbreak::polysys::{
    buchberger, f4, lex_basis, shape_form, solve_form, Budget, GbConfig, MPoly, Monomial, MonomialOrder, PolyRing,
};
use matbreak::protocols::{bcfrx_keygen, bcfrx_run, bcfrx_sample_subgroup, embed_block, Subgroup};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const WORD_LEN: usize = 12;

fn random_invertible_2x2(f: &Fp64, rng: &mut ChaCha8Rng) -> Matrix<u64> {
    loop {
        let m = Matrix::from_vec(2, 2, (0..4).map(|_| f.random(rng)).collect());
        if !f.is_zero(&mat_det(f, &m)) {
            return m;
        }
    }
}

/// `g` lies in `U` (`which = A`) or `L` (`which = B`): identity on the other
/// diagonal block, zero off-diagonal blocks, determinant 1.
fn in_block_subgroup(f: &Fp64, g: &Matrix<u64>, which: Subgroup) -> bool {
    let (active, fixed) = match which {
        Subgroup::A => (1, 2),
        Subgroup::B => (2, 1),
    };
    block_get(g, fixed, fixed) == Matrix::identity(f, 2)
        && block_get(g, 1, 2) == Matrix::zeros(f, 2, 2)
        && block_get(g, 2, 1) == Matrix::zeros(f, 2, 2)
        && f.is_one(&mat_det(f, &block_get(g, active, active)))
}

/// `N^-1 U N = A` and `N^-1 L N = B`, tested on sampled elements from both
/// sides: `N a N^-1` lands in `U` and `N^-1 u N` in `A`.
fn conjugates_like_key(f: &Fp64, m: &Matrix<u64>, n: &Matrix<u64>, rng: &mut ChaCha8Rng) -> bool {
    let key = matbreak::protocols::BcfrxKey::from_matrix(f, m.clone()).expect("key is invertible");
    let n_inv = mat_inv(f, n).expect("equivalent key is invertible");
    [Subgroup::A, Subgroup::B].into_iter().all(|which| {
        let a = bcfrx_sample_subgroup(f, &key, which, WORD_LEN, rng);
        let forward = in_block_subgroup(f, &mat_prod(f, &[n, &a, &n_inv]), which);
        let u = embed_block(f, which, &sample_sl(f, 2, WORD_LEN, rng));
        let back = mat_prod(f, &[m, &n_inv, &u, n, &key.m_inv]);
        forward && in_block_subgroup(f, &back, which)
    })
}

/// Reduced row echelon 2x2 shapes: `I`, `[[1,a],[0,0]]`, `[[0,1],[0,0]]`, `0`.
pub fn is_canonical_block(f: &Fp64, b: &Matrix<u64>) -> bool {
    let (o, z) = (f.one(), f.zero());
    let e = |i, j| b[(i, j)];
    (e(0, 0) == o && e(0, 1) == z && e(1, 0) == z && e(1, 1) == o)
        || (e(0, 0) == o && e(1, 0) == z && e(1, 1) == z)
        || (e(0, 0) == z && e(0, 1) == o && e(1, 0) == z && e(1, 1) == z)
        || b.entries().iter().all(|x| *x == z)
}

fn tp_setup(seed: u64) -> (Fp64, ChaCha8Rng) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p = gen_prime(32, &mut rng).expect("32-bit primes exist");
    (p.fp64().expect("fits in 64 bits"), rng)
}

/// Any `N = H M` with random invertible block-diagonal `H` decrypts a run.
pub fn equivalent_key_recovery_trial(seed: u64) -> Result<(), String> {
    let (f, mut rng) = tp_setup(seed);
    let key = bcfrx_keygen(&f, WORD_LEN, &mut rng);
    let k = sample_sl(&f, 4, WORD_LEN, &mut rng);
    let t = bcfrx_run(&f, &key, &k, WORD_LEN, &mut rng).public();
    let z = Matrix::zeros(&f, 2, 2);
    let h = from_blocks(&random_invertible_2x2(&f, &mut rng), &z, &z, &random_invertible_2x2(&f, &mut rng));
    let n = mat_mul(&f, &h, &key.m);
    if !conjugates_like_key(&f, &key.m, &n, &mut rng) {
        return Err(format!("seed {seed}: H M does not conjugate like M"));
    }
    let cand = candidate_from_key(&f, &n, RestrictedCombo::GENERIC).map_err(|e| e.to_string())?;
    match recover_key_mod_p(&f, &t, &cand) {
        Ok(got) if got == k => Ok(()),
        Ok(_) => Err(format!("seed {seed}: wrong key")),
        Err(e) => Err(format!("seed {seed}: {e}")),
    }
}

/// `N = diag(f(M_11), f(M_22)) M` has canonical diagonal blocks and
/// conjugates like `M`; so does the block-row normalisation.
pub fn equivalent_key_normal_form_trial(seed: u64) -> Result<(), String> {
    let (f, mut rng) = tp_setup(seed);
    let m = bcfrx_keygen(&f, WORD_LEN, &mut rng).m;
    let (h, n) = restricted_equivalent_key(&f, &m);
    if block_get(&h, 1, 2) != Matrix::zeros(&f, 2, 2) || block_get(&h, 2, 1) != Matrix::zeros(&f, 2, 2) {
        return Err(format!("seed {seed}: H is not block diagonal"));
    }
    if f.is_zero(&mat_det(&f, &h)) || n != mat_mul(&f, &h, &m) {
        return Err(format!("seed {seed}: N is not H M with invertible H"));
    }
    if !is_canonical_block(&f, &block_get(&n, 1, 1)) || !is_canonical_block(&f, &block_get(&n, 2, 2)) {
        return Err(format!("seed {seed}: diagonal blocks of N are not canonical"));
    }
    if !conjugates_like_key(&f, &m, &n, &mut rng) {
        return Err(format!("seed {seed}: N does not conjugate like M"));
    }
    let (_, n2, _) = normalized_equivalent_key(&f, &m);
    if !conjugates_like_key(&f, &m, &n2, &mut rng) {
        return Err(format!("seed {seed}: normalised N does not conjugate like M"));
    }
    Ok(())
}

fn sorted<F: Field>(ring: &PolyRing<F>, mut polys: Vec<MPoly<F::Elem>>) -> Vec<MPoly<F::Elem>> {
    polys.sort_by(|a, b| ring.cmp(&a.lm(), &b.lm()));
    polys
}

fn mono(e: &[u32]) -> Monomial {
    Monomial::from_exponents(e)
}

/// Three small ideals with reduced bases worked out by hand.
pub fn textbook_ideals() -> Vec<(&'static str, Result<(), String>)> {
    let f = Fp64::new_unchecked(32003);
    let half = f.inv(&2).unwrap();
    let quarter = f.mul(&half, &half);
    let neg = |x: u64| f.neg(&x);
    let mut out = Vec::new();

    let mut check = |name: &'static str, ring: PolyRing<Fp64>, gens: Vec<MPoly<u64>>, expect: Vec<MPoly<u64>>| {
        let expect = sorted(&ring, expect);
        let mut result = Ok(());
        for (label, gb) in [
            ("buchberger", buchberger(&ring, &gens, Budget::default())),
            ("f4", f4(&ring, &gens, Budget::default())),
        ] {
            match gb {
                Ok(gb) if sorted(&ring, gb.polys.clone()) == expect => {}
                Ok(_) => result = Err(format!("{label} basis differs from the hand computation")),
                Err(e) => result = Err(format!("{label}: {e}")),
            }
        }
        if ring.order() == MonomialOrder::Lex {
            match lex_basis(&ring, &gens, &GbConfig::default()) {
                Ok(c) if sorted(&ring, c.lex().polys.clone()) == expect => {}
                Ok(_) => result = Err("basis via degrevlex differs".into()),
                Err(e) => result = Err(e.to_string()),
            }
        }
        out.push((name, result));
    };

    // x^3 - 2xy, x^2 y - 2y^2 + x  ->  x^2, xy, y^2 - x/2
    let r = PolyRing::new(f, 2, MonomialOrder::DegRevLex);
    let t = |c: u64, e: &[u32]| (c, mono(e));
    check(
        "cubic pair, degrevlex",
        r.clone(),
        vec![
            r.from_terms(vec![t(1, &[3, 0]), t(neg(2), &[1, 1])]),
            r.from_terms(vec![t(1, &[2, 1]), t(neg(2), &[0, 2]), t(1, &[1, 0])]),
        ],
        vec![
            r.from_terms(vec![t(1, &[2, 0])]),
            r.from_terms(vec![t(1, &[1, 1])]),
            r.from_terms(vec![t(1, &[0, 2]), t(neg(half), &[1, 0])]),
        ],
    );

    // x^2+y^2+z^2-1, x^2+z^2-y, x-z  ->  x - z, y - 2z^2, z^4 + z^2/2 - 1/4
    let r = PolyRing::new(f, 3, MonomialOrder::Lex);
    check(
        "sphere and paraboloid, lex",
        r.clone(),
        vec![
            r.from_terms(vec![t(1, &[2, 0, 0]), t(1, &[0, 2, 0]), t(1, &[0, 0, 2]), t(neg(1), &[0, 0, 0])]),
            r.from_terms(vec![t(1, &[2, 0, 0]), t(1, &[0, 0, 2]), t(neg(1), &[0, 1, 0])]),
            r.from_terms(vec![t(1, &[1, 0, 0]), t(neg(1), &[0, 0, 1])]),
        ],
        vec![
            r.from_terms(vec![t(1, &[1, 0, 0]), t(neg(1), &[0, 0, 1])]),
            r.from_terms(vec![t(1, &[0, 1, 0]), t(neg(2), &[0, 0, 2])]),
            r.from_terms(vec![t(1, &[0, 0, 4]), t(half, &[0, 0, 2]), t(neg(quarter), &[0, 0, 0])]),
        ],
    );

    // cyclic-3  ->  x + y + z, y^2 + yz + z^2, z^3 - 1
    check(
        "cyclic-3, lex",
        r.clone(),
        vec![
            r.from_terms(vec![t(1, &[1, 0, 0]), t(1, &[0, 1, 0]), t(1, &[0, 0, 1])]),
            r.from_terms(vec![t(1, &[1, 1, 0]), t(1, &[0, 1, 1]), t(1, &[1, 0, 1])]),
            r.from_terms(vec![t(1, &[1, 1, 1]), t(neg(1), &[0, 0, 0])]),
        ],
        vec![
            r.from_terms(vec![t(1, &[1, 0, 0]), t(1, &[0, 1, 0]), t(1, &[0, 0, 1])]),
            r.from_terms(vec![t(1, &[0, 2, 0]), t(1, &[0, 1, 1]), t(1, &[0, 0, 2])]),
            r.from_terms(vec![t(1, &[0, 0, 3]), t(neg(1), &[0, 0, 0])]),
        ],
    );
    out
}

/// Random quadratic generators in `v` variables over `F_p`, all vanishing at
/// a planted point.
pub fn planted_system(p: u64, v: usize, seed: u64) -> (PolyRing<Fp64>, Vec<MPoly<u64>>) {
    let f = Fp64::new_unchecked(p);
    let ring = PolyRing::new(f, v, MonomialOrder::Lex);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let point: Vec<u64> = (0..v).map(|_| rng.gen_range(0..p)).collect();
    let gens = (0..v)
        .map(|_| {
            let terms: Vec<(u64, Monomial)> = (0..4)
                .map(|_| {
                    let mut e = vec![0u32; v];
                    for _ in 0..rng.gen_range(0..=2) {
                        e[rng.gen_range(0..v)] += 1;
                    }
                    (rng.gen_range(1..p), mono(&e))
                })
                .collect();
            let g = ring.from_terms(terms);
            ring.sub(&g, &ring.constant(ring.eval(&g, &point)))
        })
        .collect();
    (ring, gens)
}

/// Every point of `F_p^v`, lexicographically.
pub fn enumerate_zeros(ring: &PolyRing<Fp64>, gens: &[MPoly<u64>]) -> Vec<Vec<u64>> {
    let p = ring.field().p();
    let v = ring.nvars();
    let mut out = Vec::new();
    let mut pt = vec![0u64; v];
    loop {
        if gens.iter().all(|g| ring.eval(g, &pt) == 0) {
            out.push(pt.clone());
        }
        let mut i = v;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            pt[i] += 1;
            if pt[i] < p {
                break;
            }
            pt[i] = 0;
        }
    }
}

/// Solving through the shape form agrees with enumeration; `None` when the
/// basis is not in shape position.
pub fn enumeration_trial(p: u64, v: usize, seed: u64) -> Option<Result<(), String>> {
    let (ring, gens) = planted_system(p, v, seed);
    let comp = lex_basis(&ring, &gens, &GbConfig::default()).ok()?;
    let form = match shape_form(&ring, comp.lex()) {
        Ok(Some(form)) => form,
        Ok(None) => return Some(Err(format!("p={p} v={v} seed={seed}: planted point lost"))),
        Err(_) => return None,
    };
    let mut got = solve_form(&ring, &form).ok()?;
    got.sort();
    let expect = enumerate_zeros(&ring, &gens);
    Some(if got == expect {
        Ok(())
    } else {
        Err(format!("p={p} v={v} seed={seed}: {} solutions, enumeration finds {}", got.len(), expect.len()))
    })
}
