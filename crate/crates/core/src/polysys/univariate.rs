//! Dense univariate polynomials over a prime field and root extraction.

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::arith::Field;
use crate::error::{Error, Result};

use super::poly::{MPoly, PolyRing};

/// Coefficients from degree 0 upwards, no trailing zeros.
pub type Dense<E> = Vec<E>;

const BRUTE_FORCE_LIMIT: u64 = 1 << 16;

fn trim<F: Field>(f: &F, a: &mut Dense<F::Elem>) {
    while a.last().is_some_and(|c| f.is_zero(c)) {
        a.pop();
    }
}

pub fn eval<F: Field>(f: &F, a: &[F::Elem], x: &F::Elem) -> F::Elem {
    a.iter().rev().fold(f.zero(), |acc, c| f.add(&f.mul(&acc, x), c))
}

fn sub<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Dense<F::Elem> {
    let n = a.len().max(b.len());
    let mut out: Dense<F::Elem> = (0..n)
        .map(|i| {
            let x = a.get(i).cloned().unwrap_or_else(|| f.zero());
            let y = b.get(i).cloned().unwrap_or_else(|| f.zero());
            f.sub(&x, &y)
        })
        .collect();
    trim(f, &mut out);
    out
}

fn mul<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Dense<F::Elem> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![f.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = f.add(&out[i + j], &f.mul(x, y));
        }
    }
    trim(f, &mut out);
    out
}

/// Remainder of `a` modulo nonzero `m`.
fn rem<F: Field>(f: &F, a: &[F::Elem], m: &[F::Elem]) -> Dense<F::Elem> {
    let mut r = a.to_vec();
    trim(f, &mut r);
    let lead_inv = f.inv(m.last().expect("nonzero modulus")).expect("nonzero lead");
    while r.len() >= m.len() {
        let shift = r.len() - m.len();
        let q = f.mul(r.last().expect("nonempty"), &lead_inv);
        for (i, c) in m.iter().enumerate() {
            r[shift + i] = f.sub(&r[shift + i], &f.mul(&q, c));
        }
        trim(f, &mut r);
    }
    r
}

fn monic<F: Field>(f: &F, a: &[F::Elem]) -> Dense<F::Elem> {
    match a.last() {
        None => Vec::new(),
        Some(l) => {
            let inv = f.inv(l).expect("nonzero lead");
            a.iter().map(|c| f.mul(c, &inv)).collect()
        }
    }
}

pub fn gcd<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Dense<F::Elem> {
    let (mut x, mut y) = (a.to_vec(), b.to_vec());
    trim(f, &mut x);
    trim(f, &mut y);
    while !y.is_empty() {
        let r = rem(f, &x, &y);
        x = y;
        y = r;
    }
    monic(f, &x)
}

/// `base^exp mod m`.
fn pow_mod<F: Field>(f: &F, base: &[F::Elem], exp: &BigUint, m: &[F::Elem]) -> Dense<F::Elem> {
    let mut acc = vec![f.one()];
    let base = rem(f, base, m);
    for i in (0..exp.bits()).rev() {
        acc = rem(f, &mul(f, &acc, &acc), m);
        if exp.bit(i) {
            acc = rem(f, &mul(f, &acc, &base), m);
        }
    }
    acc
}

/// Distinct roots of `a` in the field, ascending by canonical representative.
pub fn roots_dense<F: Field>(f: &F, a: &[F::Elem]) -> Result<Vec<F::Elem>> {
    let mut a = a.to_vec();
    trim(f, &mut a);
    if a.len() < 2 {
        return Err(Error::InvalidArgument("root finding needs degree at least 1".into()));
    }
    let p = f.modulus();
    let mut roots = match p.to_u64() {
        Some(small) if small < BRUTE_FORCE_LIMIT => (0..small)
            .map(|x| f.from_u64(x))
            .filter(|x| f.is_zero(&eval(f, &a, x)))
            .collect(),
        _ => {
            let a = monic(f, &a);
            let x = vec![f.zero(), f.one()];
            let xp = pow_mod(f, &x, &p, &a);
            let linear_part = gcd(f, &a, &sub(f, &xp, &x));
            let mut out = Vec::new();
            let mut rng = ChaCha8Rng::seed_from_u64(0x0f_1e1d);
            split_linear(f, &linear_part, &p, &mut rng, &mut out);
            out
        }
    };
    roots.sort_by_key(|r| f.to_bigint(r));
    roots.dedup();
    Ok(roots)
}

/// Equal-degree splitting of a monic product of distinct linear factors.
fn split_linear<F: Field>(
    f: &F,
    h: &[F::Elem],
    p: &BigUint,
    rng: &mut ChaCha8Rng,
    out: &mut Vec<F::Elem>,
) {
    match h.len() {
        0 | 1 => {}
        2 => out.push(f.neg(&h[0])),
        _ => {
            let half = (p - 1u8) >> 1;
            loop {
                let shift = f.random(rng);
                let t = vec![shift, f.one()];
                let w = sub(f, &pow_mod(f, &t, &half, h), &[f.one()]);
                let d = gcd(f, h, &w);
                if d.len() > 1 && d.len() < h.len() {
                    let (q, _) = div_exact_poly(f, h, &d);
                    split_linear(f, &d, p, rng, out);
                    split_linear(f, &q, p, rng, out);
                    return;
                }
            }
        }
    }
}

fn div_exact_poly<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> (Dense<F::Elem>, Dense<F::Elem>) {
    let mut r = a.to_vec();
    let mut q = vec![f.zero(); a.len().saturating_sub(b.len()) + 1];
    let lead_inv = f.inv(b.last().expect("nonzero")).expect("nonzero");
    while r.len() >= b.len() && !r.is_empty() {
        let shift = r.len() - b.len();
        let c = f.mul(r.last().expect("nonempty"), &lead_inv);
        q[shift] = c.clone();
        for (i, x) in b.iter().enumerate() {
            r[shift + i] = f.sub(&r[shift + i], &f.mul(&c, x));
        }
        trim(f, &mut r);
    }
    trim(f, &mut q);
    (q, r)
}

/// Dense coefficients of `g` viewed as a polynomial in variable `var` alone.
pub fn to_dense<F: Field>(ring: &PolyRing<F>, g: &MPoly<F::Elem>, var: usize) -> Result<Dense<F::Elem>> {
    let f = ring.field();
    let mut out: Dense<F::Elem> = Vec::new();
    for (c, m) in g.terms() {
        if m.support().any(|v| v != var) {
            return Err(Error::InvalidArgument(format!(
                "polynomial is not univariate in x{}",
                var + 1
            )));
        }
        let e = m.exp(var) as usize;
        if out.len() <= e {
            out.resize(e + 1, f.zero());
        }
        out[e] = c.clone();
    }
    Ok(out)
}

/// Roots of a univariate `g` (in whichever single variable it uses).
pub fn univariate_roots<F: Field>(ring: &PolyRing<F>, g: &MPoly<F::Elem>) -> Result<Vec<F::Elem>> {
    let var = g
        .terms()
        .iter()
        .flat_map(|(_, m)| m.support())
        .next()
        .ok_or_else(|| Error::InvalidArgument("constant polynomial".into()))?;
    roots_dense(ring.field(), &to_dense(ring, g, var)?)
}
