//! Linearization attacks on the commuting-matrix key agreements: any `X`
//! that satisfies the linear constraints of Alice's secret maps `w_B` to the
//! shared key.

use rand::Rng;

use crate::arith::Field;
use crate::error::{Error, Result};
use crate::matlin::{commutes, mat_vec, solve_right, Matrix};
use crate::protocols::{hks_sample_secret, poly_sum_eval, HksPublic, RuPublic};

/// Held-out sampler draws used to confirm that `X` commutes with Bob's images.
pub const HKS_CHECK_DRAWS: usize = 3;
/// Largest sample count tried before giving up.
pub const HKS_MAX_SAMPLES: usize = 128;

/// Result of a linearization attack.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearAttack<E> {
    pub key: Vec<E>,
    /// The functionally equivalent secret that was found.
    pub x: Matrix<E>,
    /// Commutation constraints in the final system.
    pub samples: usize,
}

/// Accumulates linear equations in the `m^2` entries of `X`, row-major.
struct XSystem<E> {
    m: usize,
    rows: Vec<Vec<E>>,
    rhs: Vec<E>,
}

impl<E: Clone> XSystem<E> {
    fn new(m: usize) -> Self {
        XSystem {
            m,
            rows: Vec::new(),
            rhs: Vec::new(),
        }
    }

    /// `X v = w`
    fn push_image<F: Field<Elem = E>>(&mut self, f: &F, v: &[E], w: &[E]) {
        let m = self.m;
        for i in 0..m {
            let mut row = vec![f.zero(); m * m];
            row[i * m..(i + 1) * m].clone_from_slice(v);
            self.rows.push(row);
            self.rhs.push(w[i].clone());
        }
    }

    /// `X a = a X`; entry `(i, k)` reads `sum_j X_ij a_jk - a_ij X_jk = 0`.
    fn push_commutes<F: Field<Elem = E>>(&mut self, f: &F, a: &Matrix<E>) {
        let m = self.m;
        for i in 0..m {
            for k in 0..m {
                let mut row = vec![f.zero(); m * m];
                for j in 0..m {
                    row[i * m + j] = f.add(&row[i * m + j], &a[(j, k)]);
                    row[j * m + k] = f.sub(&row[j * m + k], &a[(i, j)]);
                }
                self.rows.push(row);
                self.rhs.push(f.zero());
            }
        }
    }

    fn solve<F: Field<Elem = E>>(&self, f: &F) -> Result<Matrix<E>> {
        let a = Matrix::from_rows(self.rows.clone());
        let b = Matrix::from_vec(self.rhs.len(), 1, self.rhs.clone());
        let y = solve_right(f, &a, &b)?;
        Ok(Matrix::from_vec(self.m, self.m, y.entries().to_vec()))
    }
}

/// Eve's copy of Bob's key generator: `f(L)` for a fresh `L` in the public family.
pub fn hks_public_sampler<'a, F: Field, G: Rng + ?Sized>(
    f: &'a F,
    public: &'a HksPublic<F::Elem>,
    rng: &'a mut G,
) -> impl FnMut() -> Matrix<F::Elem> + 'a {
    move || {
        let (_, l) = hks_sample_secret(f, &public.q, public.deg, rng);
        poly_sum_eval(f, &l, public.n)
    }
}

/// Finds `X` with `X b = w_A` commuting with `s` sampled images `f(L)` and
/// returns `X w_B`. If `X` fails to commute with fresh draws, the sample
/// count doubles up to [`HKS_MAX_SAMPLES`].
pub fn attack_hks<F: Field>(
    f: &F,
    public: &HksPublic<F::Elem>,
    mut sampler: impl FnMut() -> Matrix<F::Elem>,
    s: usize,
) -> Result<LinearAttack<F::Elem>> {
    if s == 0 {
        return Err(Error::InvalidArgument("sample count must be positive".into()));
    }
    let mut sys = XSystem::new(public.m);
    sys.push_image(f, &public.b, &public.w_a);
    let mut used = 0;
    let mut target = s;
    loop {
        while used < target {
            sys.push_commutes(f, &sampler());
            used += 1;
        }
        let x = sys.solve(f)?;
        let held_out: Vec<_> = (0..HKS_CHECK_DRAWS).map(|_| sampler()).collect();
        if held_out.iter().all(|a| commutes(f, &x, a)) {
            return Ok(LinearAttack {
                key: mat_vec(f, &x, &public.w_b),
                x,
                samples: used,
            });
        }
        if target >= HKS_MAX_SAMPLES {
            return Err(Error::AttackFailed(format!(
                "no solution commuting with fresh samples after {used} samples"
            )));
        }
        // the failed draws are informative too
        for a in &held_out {
            sys.push_commutes(f, a);
        }
        used += held_out.len();
        target = (2 * target).max(used);
    }
}

/// Finds `X` with `XC = CX`, `XD = DX`, `X d = w_A` and returns `X w_B`.
pub fn attack_ru<F: Field>(f: &F, public: &RuPublic<F::Elem>) -> Result<LinearAttack<F::Elem>> {
    let mut sys = XSystem::new(public.n);
    sys.push_commutes(f, &public.c);
    sys.push_commutes(f, &public.d);
    sys.push_image(f, &public.vec_d, &public.w_a);
    let x = sys.solve(f)?;
    Ok(LinearAttack {
        key: mat_vec(f, &x, &public.w_b),
        x,
        samples: 0,
    })
}
