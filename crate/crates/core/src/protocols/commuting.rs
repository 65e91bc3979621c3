//! Key agreement from commuting matrix polynomials: the `f(J) b` scheme over a
//! vector space `F_p^m`, and the bivariate `f(C, D) d` scheme.

use rand::Rng;

use crate::arith::{Field, Ring};
use crate::matlin::{mat_add, mat_det, mat_mul, mat_scale, mat_vec, Matrix};

/// `c_0 I + c_1 Q + ... + c_k Q^k` by Horner's rule.
pub fn matrix_poly_eval<R: Ring>(ring: &R, coeffs: &[R::Elem], q: &Matrix<R::Elem>) -> Matrix<R::Elem> {
    let n = q.rows();
    let mut acc = Matrix::zeros(ring, n, n);
    for c in coeffs.iter().rev() {
        acc = mat_add(ring, &mat_mul(ring, &acc, q), &Matrix::scalar(ring, n, c));
    }
    acc
}

/// `f(J) = J + J^2 + ... + J^(n-1)`.
pub fn poly_sum_eval<R: Ring>(ring: &R, j: &Matrix<R::Elem>, n: usize) -> Matrix<R::Elem> {
    assert!(n >= 2, "exponent bound must be at least 2");
    let mut power = j.clone();
    let mut acc = j.clone();
    for _ in 2..n {
        power = mat_mul(ring, &power, j);
        acc = mat_add(ring, &acc, &power);
    }
    acc
}

fn random_matrix<F: Field, G: Rng + ?Sized>(f: &F, n: usize, rng: &mut G) -> Matrix<F::Elem> {
    Matrix::from_vec(n, n, (0..n * n).map(|_| f.random(rng)).collect())
}

fn random_vector<F: Field, G: Rng + ?Sized>(f: &F, n: usize, rng: &mut G) -> Vec<F::Elem> {
    (0..n).map(|_| f.random(rng)).collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HksPublic<E> {
    pub m: usize,
    /// Exponent bound of `f(x) = x + ... + x^(n-1)`.
    pub n: usize,
    /// Shared matrix whose polynomials give both parties' secrets.
    pub q: Matrix<E>,
    pub b: Vec<E>,
    pub w_a: Vec<E>,
    pub w_b: Vec<E>,
    /// Degree bound (exclusive) of the secret polynomials in `q`.
    pub deg: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HksSecrets<E> {
    pub g_a: Vec<E>,
    pub g_b: Vec<E>,
    pub j: Matrix<E>,
    pub k: Matrix<E>,
    pub key: Vec<E>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HksInstance<E> {
    pub public: HksPublic<E>,
    pub truth: Option<HksSecrets<E>>,
}

/// Bob's key-generation algorithm: a random polynomial of degree `< deg` in `Q`.
/// It is public, so an eavesdropper may run it too.
pub fn hks_sample_secret<F: Field, G: Rng + ?Sized>(
    f: &F,
    q: &Matrix<F::Elem>,
    deg: usize,
    rng: &mut G,
) -> (Vec<F::Elem>, Matrix<F::Elem>) {
    let g: Vec<F::Elem> = (0..deg).map(|_| f.random(rng)).collect();
    let m = matrix_poly_eval(f, &g, q);
    (g, m)
}

/// Builds public data and runs both parties with secrets from [`hks_sample_secret`].
pub fn hks_setup<F: Field, G: Rng + ?Sized>(
    f: &F,
    m: usize,
    n: usize,
    deg: usize,
    rng: &mut G,
) -> HksInstance<F::Elem> {
    assert!(m >= 2 && n >= 2 && deg >= 1, "invalid parameters");
    let q = random_matrix(f, m, rng);
    let b = random_vector(f, m, rng);
    let (g_a, j) = hks_sample_secret(f, &q, deg, rng);
    let (g_b, k) = hks_sample_secret(f, &q, deg, rng);
    hks_with_secrets(f, n, deg, q, b, g_a, j, g_b, k)
}

#[allow(clippy::too_many_arguments)]
pub fn hks_with_secrets<F: Field>(
    f: &F,
    n: usize,
    deg: usize,
    q: Matrix<F::Elem>,
    b: Vec<F::Elem>,
    g_a: Vec<F::Elem>,
    j: Matrix<F::Elem>,
    g_b: Vec<F::Elem>,
    k: Matrix<F::Elem>,
) -> HksInstance<F::Elem> {
    let fj = poly_sum_eval(f, &j, n);
    let fk = poly_sum_eval(f, &k, n);
    let w_a = mat_vec(f, &fj, &b);
    let w_b = mat_vec(f, &fk, &b);
    let key = mat_vec(f, &fj, &w_b);
    HksInstance {
        public: HksPublic {
            m: q.rows(),
            n,
            q,
            b,
            w_a,
            w_b,
            deg,
        },
        truth: Some(HksSecrets { g_a, g_b, j, k, key }),
    }
}

/// Key as Bob computes it: `f(K) w_A`.
pub fn hks_bob_key<F: Field>(f: &F, public: &HksPublic<F::Elem>, k: &Matrix<F::Elem>) -> Vec<F::Elem> {
    mat_vec(f, &poly_sum_eval(f, k, public.n), &public.w_a)
}

/// Bivariate polynomial `sum c_ij x^i y^j`, stored by `(i, j)`.
pub type Bivariate<E> = Vec<((usize, usize), E)>;

pub fn bivariate_eval<R: Ring>(
    ring: &R,
    poly: &Bivariate<R::Elem>,
    c: &Matrix<R::Elem>,
    d: &Matrix<R::Elem>,
) -> Matrix<R::Elem> {
    let n = c.rows();
    let max_i = poly.iter().map(|((i, _), _)| *i).max().unwrap_or(0);
    let max_j = poly.iter().map(|((_, j), _)| *j).max().unwrap_or(0);
    let powers = |m: &Matrix<R::Elem>, k: usize| {
        let mut out = vec![Matrix::identity(ring, n)];
        for _ in 0..k {
            out.push(mat_mul(ring, out.last().expect("nonempty"), m));
        }
        out
    };
    let (pc, pd) = (powers(c, max_i), powers(d, max_j));
    poly.iter().fold(Matrix::zeros(ring, n, n), |acc, ((i, j), coef)| {
        mat_add(ring, &acc, &mat_scale(ring, coef, &mat_mul(ring, &pc[*i], &pd[*j])))
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuPublic<E> {
    pub n: usize,
    pub c: Matrix<E>,
    pub d: Matrix<E>,
    pub vec_d: Vec<E>,
    pub w_a: Vec<E>,
    pub w_b: Vec<E>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuSecrets<E> {
    pub f_a: Bivariate<E>,
    pub f_b: Bivariate<E>,
    pub key: Vec<E>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuInstance<E> {
    pub public: RuPublic<E>,
    pub truth: Option<RuSecrets<E>>,
}

fn random_bivariate<F: Field, G: Rng + ?Sized>(f: &F, deg: usize, rng: &mut G) -> Bivariate<F::Elem> {
    let mut out = Vec::new();
    for i in 0..=deg {
        for j in 0..=deg - i {
            out.push(((i, j), f.random(rng)));
        }
    }
    out
}

/// Random invertible `C`, `D = h(C)` invertible, and random secrets of total degree `<= deg`.
pub fn ru_setup<F: Field, G: Rng + ?Sized>(f: &F, n: usize, deg: usize, rng: &mut G) -> RuInstance<F::Elem> {
    assert!(n >= 2, "dimension must be at least 2");
    let c = loop {
        let c = random_matrix(f, n, rng);
        if !f.is_zero(&mat_det(f, &c)) {
            break c;
        }
    };
    let d = loop {
        let h: Vec<F::Elem> = (0..n).map(|_| f.random(rng)).collect();
        let d = matrix_poly_eval(f, &h, &c);
        if !f.is_zero(&mat_det(f, &d)) {
            break d;
        }
    };
    let vec_d = random_vector(f, n, rng);
    let f_a = random_bivariate(f, deg, rng);
    let f_b = random_bivariate(f, deg, rng);
    ru_with_secrets(f, c, d, vec_d, f_a, f_b)
}

pub fn ru_with_secrets<F: Field>(
    f: &F,
    c: Matrix<F::Elem>,
    d: Matrix<F::Elem>,
    vec_d: Vec<F::Elem>,
    f_a: Bivariate<F::Elem>,
    f_b: Bivariate<F::Elem>,
) -> RuInstance<F::Elem> {
    let fa = bivariate_eval(f, &f_a, &c, &d);
    let fb = bivariate_eval(f, &f_b, &c, &d);
    let w_a = mat_vec(f, &fa, &vec_d);
    let w_b = mat_vec(f, &fb, &vec_d);
    let key = mat_vec(f, &fa, &w_b);
    RuInstance {
        public: RuPublic {
            n: c.rows(),
            c,
            d,
            vec_d,
            w_a,
            w_b,
        },
        truth: Some(RuSecrets { f_a, f_b, key }),
    }
}

/// Key as Bob computes it: `f_B(C, D) w_A`.
pub fn ru_bob_key<F: Field>(f: &F, public: &RuPublic<F::Elem>, f_b: &Bivariate<F::Elem>) -> Vec<F::Elem> {
    mat_vec(f, &bivariate_eval(f, f_b, &public.c, &public.d), &public.w_a)
}
