//! Recovering three-pass session keys modulo a prime.
//!
//! An equivalent long-term key `N` (any `N` with `N^-1 U N = A` and
//! `N^-1 L N = B`) suffices to decrypt every run. `N` can be normalised so
//! that its diagonal blocks are row-reduced, which leaves 8 unknown entries;
//! together with the 16 entries of `N^-1` they satisfy 24 quadratic
//! equations per observed run (8 more for each additional run).

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::arith::Field;
use crate::error::{Error, Result};
use crate::matlin::{
    block_get, from_blocks, is_identity, left_reduce, mat_inv, mat_mul, mat_prod, mat_sub, rref, solve_left,
    solve_right, Matrix,
};
use crate::polysys::{
    contains_all, lex_basis, shape_form, solve_form, verify_groebner, GbConfig, LexComputation, MPoly, MonomialOrder, PolyRing, PolySystem,
    ShapeStats,
};
use crate::protocols::BcfrxTranscript;

/// Unknowns of the generic system: 8 off-diagonal entries of `N`, 16 entries of `N^-1`.
pub const SYSTEM_VARS: usize = 24;

/// Reduced row-echelon shape of one block row of `N`, read with the diagonal
/// block's columns first. `pivots` are local column indices, increasing.
///
/// Over the diagonal block alone the shapes are `I`, `[[1,a],[0,0]]`,
/// `[[0,1],[0,0]]` and `0`; fixing the pivots in the off-diagonal block as
/// well removes the freedom a singular diagonal block would leave.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BlockRowPattern {
    pub pivots: [u8; 2],
}

impl BlockRowPattern {
    pub const IDENTITY: BlockRowPattern = BlockRowPattern { pivots: [0, 1] };

    /// Search order: identity, then the rank-1 and zero diagonal shapes in
    /// the canonical set, then `[[0,1],[0,0]]`.
    pub const ALL: [BlockRowPattern; 6] = [
        BlockRowPattern { pivots: [0, 1] },
        BlockRowPattern { pivots: [0, 2] },
        BlockRowPattern { pivots: [0, 3] },
        BlockRowPattern { pivots: [2, 3] },
        BlockRowPattern { pivots: [1, 2] },
        BlockRowPattern { pivots: [1, 3] },
    ];

    /// Local columns holding unknowns in each of the two rows.
    pub fn free_columns(&self) -> [Vec<usize>; 2] {
        let p = [self.pivots[0] as usize, self.pivots[1] as usize];
        [0, 1].map(|r| (p[r] + 1..4).filter(|c| !p.contains(c)).collect())
    }

    pub fn unknowns(&self) -> usize {
        self.free_columns().iter().map(Vec::len).sum()
    }

    /// The diagonal block with unknowns set to zero.
    pub fn diagonal_block<F: Field>(&self, f: &F) -> Matrix<F::Elem> {
        let mut m = Matrix::zeros(f, 2, 2);
        for (r, &p) in self.pivots.iter().enumerate() {
            if p < 2 {
                m[(r, p as usize)] = f.one();
            }
        }
        m
    }
}

/// Echelon patterns of the top (`N_11 | N_12`) and bottom (`N_22 | N_21`) block rows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RestrictedCombo {
    pub top: BlockRowPattern,
    pub bottom: BlockRowPattern,
}

impl RestrictedCombo {
    /// `N_11 = N_22 = I`.
    pub const GENERIC: RestrictedCombo = RestrictedCombo {
        top: BlockRowPattern::IDENTITY,
        bottom: BlockRowPattern::IDENTITY,
    };

    /// Entries of `N` that are unknowns, in variable order.
    pub fn unknown_positions(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (block, pat) in [(0, self.top), (1, self.bottom)] {
            for (r, cols) in pat.free_columns().iter().enumerate() {
                out.extend(cols.iter().map(|&c| (2 * block + r, global_col(block, c))));
            }
        }
        out
    }

    pub fn nvars(&self) -> usize {
        self.top.unknowns() + self.bottom.unknowns() + 16
    }

    /// `N` with unknowns set to zero.
    pub fn fixed_part<F: Field>(&self, f: &F) -> Matrix<F::Elem> {
        let mut n = Matrix::zeros(f, 4, 4);
        for (block, pat) in [(0, self.top), (1, self.bottom)] {
            for (r, &p) in pat.pivots.iter().enumerate() {
                n[(2 * block + r, global_col(block, p as usize))] = f.one();
            }
        }
        n
    }
}

fn global_col(block: usize, local: usize) -> usize {
    if block == 0 {
        local
    } else {
        (local + 2) % 4
    }
}

/// Every combination, `(I, I)` first.
pub fn combo_search_order() -> Vec<RestrictedCombo> {
    let all = BlockRowPattern::ALL;
    let mut out: Vec<RestrictedCombo> = all
        .iter()
        .flat_map(|&top| all.iter().map(move |&bottom| RestrictedCombo { top, bottom }))
        .collect();
    // stable: keeps (I, I) first, then combos by their less likely block
    out.sort_by_key(|c| {
        let rank = |p: BlockRowPattern| all.iter().position(|q| *q == p).unwrap();
        rank(c.top).max(rank(c.bottom))
    });
    out
}

type PolyMat<E> = Vec<Vec<MPoly<E>>>;

fn symbolic_n<F: Field>(ring: &PolyRing<F>, combo: RestrictedCombo) -> PolyMat<F::Elem> {
    let fixed = combo.fixed_part(ring.field());
    let mut n: PolyMat<F::Elem> = (0..4).map(|i| (0..4).map(|j| ring.constant(fixed[(i, j)].clone())).collect()).collect();
    for (v, (i, j)) in combo.unknown_positions().into_iter().enumerate() {
        n[i][j] = ring.var(v);
    }
    n
}

fn symbolic_inverse<F: Field>(ring: &PolyRing<F>, offset: usize) -> PolyMat<F::Elem> {
    (0..4).map(|i| (0..4).map(|j| ring.var(offset + 4 * i + j)).collect()).collect()
}

fn poly_times_const<F: Field>(ring: &PolyRing<F>, a: &PolyMat<F::Elem>, c: &Matrix<F::Elem>) -> PolyMat<F::Elem> {
    (0..4)
        .map(|i| {
            (0..4)
                .map(|j| {
                    (0..4).fold(MPoly::zero(), |acc, k| {
                        ring.add(&acc, &ring.scale(&c[(k, j)], &a[i][k]))
                    })
                })
                .collect()
        })
        .collect()
}

fn poly_entry<F: Field>(ring: &PolyRing<F>, a: &PolyMat<F::Elem>, b: &PolyMat<F::Elem>, i: usize, j: usize) -> MPoly<F::Elem> {
    (0..4).fold(MPoly::zero(), |acc, k| ring.add(&acc, &ring.mul(&a[i][k], &b[k][j])))
}

/// The 8 equations `(N D N^-1)_22 = (N C N^-1)_22`, `(N D N^-1)_11 = (N E N^-1)_11`.
fn run_equations<F: Field>(
    ring: &PolyRing<F>,
    n: &PolyMat<F::Elem>,
    w: &PolyMat<F::Elem>,
    t: &BcfrxTranscript<F::Elem>,
) -> Vec<MPoly<F::Elem>> {
    let f = ring.field();
    let dc = poly_times_const(ring, n, &mat_sub(f, &t.d, &t.c));
    let de = poly_times_const(ring, n, &mat_sub(f, &t.d, &t.e));
    let mut out = Vec::with_capacity(8);
    for i in 2..4 {
        for j in 2..4 {
            out.push(poly_entry(ring, &dc, w, i, j));
        }
    }
    for i in 0..2 {
        for j in 0..2 {
            out.push(poly_entry(ring, &de, w, i, j));
        }
    }
    out
}

/// The quadratic system for a fixed combination: unknown entries of `N`
/// first (all of `N_12`, then `N_21`, row-major, in the generic case), then
/// the 16 entries of `N^-1`.
pub fn build_system<F: Field>(
    field: &F,
    t: &BcfrxTranscript<F::Elem>,
    combo: RestrictedCombo,
    extra: &[BcfrxTranscript<F::Elem>],
) -> PolySystem<F> {
    let ring = PolyRing::new(field.clone(), combo.nvars(), MonomialOrder::Lex);
    let n = symbolic_n(&ring, combo);
    let w = symbolic_inverse(&ring, combo.nvars() - 16);
    let mut polys = run_equations(&ring, &n, &w, t);
    for i in 0..4 {
        for j in 0..4 {
            let mut e = poly_entry(&ring, &n, &w, i, j);
            if i == j {
                e = ring.sub(&e, &ring.one());
            }
            polys.push(e);
        }
    }
    for x in extra {
        polys.extend(run_equations(&ring, &n, &w, x));
    }
    PolySystem { ring, polys }
}

/// An equivalent long-term key obtained from one solution of the system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CandidateN<E> {
    pub n: Matrix<E>,
    pub n_inv: Matrix<E>,
    pub combo: RestrictedCombo,
    /// Index of the eliminant root this candidate came from.
    pub root: usize,
}

/// Materialises a solution vector as `(N, N^-1)`; `None` if they are not inverse.
pub fn candidate_from_point<F: Field>(
    field: &F,
    combo: RestrictedCombo,
    point: &[F::Elem],
    root: usize,
) -> Option<CandidateN<F::Elem>> {
    let mut n = combo.fixed_part(field);
    let pos = combo.unknown_positions();
    for (v, &(i, j)) in pos.iter().enumerate() {
        n[(i, j)] = point[v].clone();
    }
    let n_inv = Matrix::from_vec(4, 4, point[pos.len()..pos.len() + 16].to_vec());
    is_identity(field, &mat_mul(field, &n, &n_inv)).then_some(CandidateN { n, n_inv, combo, root })
}

/// Outcome of solving one system; failures are recorded, not raised.
#[derive(Debug, Clone)]
pub struct SolveOutcome<E> {
    pub candidates: Vec<CandidateN<E>>,
    /// Roots of the eliminant, including any discarded because `N` was singular.
    pub solutions: usize,
    pub shape: Option<ShapeStats>,
    pub computation: Option<LexComputation<E>>,
    pub diagnostic: Option<String>,
    pub budget_exhausted: bool,
    pub seconds: f64,
}

pub fn solve_for_n<F: Field>(system: &PolySystem<F>, combo: RestrictedCombo, opts: &GbConfig) -> SolveOutcome<F::Elem> {
    let start = Instant::now();
    let mut out = SolveOutcome {
        candidates: Vec::new(),
        solutions: 0,
        shape: None,
        computation: None,
        diagnostic: None,
        budget_exhausted: false,
        seconds: 0.0,
    };
    let lex_ring = system.ring.with_order(MonomialOrder::Lex);
    // same ideal, but the basis closes several degrees earlier
    let mut gens = system.polys.clone();
    gens.extend(implied_equations(system, combo));
    let comp = match lex_basis(&system.ring, &gens, opts) {
        Ok(c) => c,
        Err(e) => {
            out.budget_exhausted = matches!(e, Error::BudgetExhausted { .. });
            out.diagnostic = Some(e.to_string());
            out.seconds = start.elapsed().as_secs_f64();
            return out;
        }
    };
    match shape_form(&lex_ring, comp.lex()) {
        Ok(None) => out.diagnostic = Some("system is inconsistent".into()),
        Ok(Some(form)) => {
            out.shape = Some(form.stats());
            match solve_form(&lex_ring, &form) {
                Ok(points) => {
                    out.solutions = points.len();
                    out.candidates = points
                        .iter()
                        .enumerate()
                        .filter_map(|(i, p)| candidate_from_point(system.ring.field(), combo, p, i))
                        .collect();
                }
                Err(e) => out.diagnostic = Some(e.to_string()),
            }
        }
        Err(e) => out.diagnostic = Some(e.to_string()),
    }
    out.computation = Some(comp);
    out.seconds = start.elapsed().as_secs_f64();
    out
}

/// Entries of `N^-1 N - I`, which lie in the ideal generated by `N N^-1 - I`.
pub fn implied_equations<F: Field>(system: &PolySystem<F>, combo: RestrictedCombo) -> Vec<MPoly<F::Elem>> {
    let ring = &system.ring;
    let n = symbolic_n(ring, combo);
    let w = symbolic_inverse(ring, combo.nvars() - 16);
    let mut out = Vec::with_capacity(16);
    for i in 0..4 {
        for j in 0..4 {
            let mut e = poly_entry(ring, &w, &n, i, j);
            if i == j {
                e = ring.sub(&e, &ring.one());
            }
            out.push(e);
        }
    }
    out
}

/// Session key from a transcript and an equivalent key `N`.
pub fn recover_key_mod_p<F: Field>(
    field: &F,
    t: &BcfrxTranscript<F::Elem>,
    cand: &CandidateN<F::Elem>,
) -> Result<Matrix<F::Elem>> {
    let conj = |m: &Matrix<F::Elem>| mat_prod(field, &[&cand.n, m, &cand.n_inv]);
    let (c1, d1, e1) = (conj(&t.c), conj(&t.d), conj(&t.e));
    let k11 = block_get(&c1, 1, 1);
    let k22 = block_get(&e1, 2, 2);
    // X D'_12 = C'_12, then K'_12 = X E'_12
    let x = solve_left(field, &block_get(&d1, 1, 2), &block_get(&c1, 1, 2))
        .map_err(|_| Error::CandidateRejected("no X with X D'12 = C'12".into()))?;
    let k12 = mat_mul(field, &x, &block_get(&e1, 1, 2));
    // D'_21 Y = C'_21, then K'_21 = E'_21 Y
    let y = solve_right(field, &block_get(&d1, 2, 1), &block_get(&c1, 2, 1))
        .map_err(|_| Error::CandidateRejected("no Y with D'21 Y = C'21".into()))?;
    let k21 = mat_mul(field, &block_get(&e1, 2, 1), &y);
    let k_conj = from_blocks(&k11, &k12, &k21, &k22);
    Ok(mat_prod(field, &[&cand.n_inv, &k_conj, &cand.n]))
}

/// Per-combination record of an attack modulo one prime.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ComboAttempt {
    pub combo: RestrictedCombo,
    pub candidates: usize,
    pub keys: usize,
    pub shape: Option<ShapeStats>,
    pub diagnostic: Option<String>,
    pub seconds: f64,
}

#[derive(Debug, Clone)]
pub struct ModPAttack<F: Field> {
    /// Distinct recovered session keys.
    pub keys: Vec<Matrix<F::Elem>>,
    pub attempts: Vec<ComboAttempt>,
    /// Bases computed for the successful combination, for auditing.
    pub computation: Option<LexComputation<F::Elem>>,
    pub system: Option<PolySystem<F>>,
}

/// Stage 2–3 attack modulo one prime: search combinations until one yields keys.
pub fn attack_bcfrx_mod_p<F: Field>(
    field: &F,
    t: &BcfrxTranscript<F::Elem>,
    extra: &[BcfrxTranscript<F::Elem>],
    opts: &GbConfig,
) -> Result<ModPAttack<F>> {
    let t = t.public();
    let extra: Vec<_> = extra.iter().map(|x| x.public()).collect();
    let mut attempts = Vec::new();
    let mut exhausted = false;
    for combo in combo_search_order() {
        let system = build_system(field, &t, combo, &extra);
        let outcome = solve_for_n(&system, combo, opts);
        exhausted |= outcome.budget_exhausted;
        let mut keys: Vec<Matrix<F::Elem>> = Vec::new();
        for cand in &outcome.candidates {
            if let Ok(k) = recover_key_mod_p(field, &t, cand) {
                if !keys.contains(&k) {
                    keys.push(k);
                }
            }
        }
        attempts.push(ComboAttempt {
            combo,
            candidates: outcome.candidates.len(),
            keys: keys.len(),
            shape: outcome.shape,
            diagnostic: outcome.diagnostic.clone(),
            seconds: outcome.seconds,
        });
        if !keys.is_empty() {
            return Ok(ModPAttack {
                keys,
                attempts,
                computation: outcome.computation,
                system: Some(system),
            });
        }
    }
    if exhausted {
        return Err(Error::BudgetExhausted {
            pairs: opts.budget.max_pairs,
            reductions: opts.budget.max_reductions,
        });
    }
    Err(Error::AttackFailed(format!(
        "no combination of diagonal blocks produced a key ({} tried)",
        attempts.len()
    )))
}

/// Soundness record of the bases behind one solve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisAudit {
    pub bases: usize,
    /// S-polynomials reduced to zero across all bases.
    pub s_pairs: usize,
    /// Every basis is Gröbner and contains every generator.
    pub sound: bool,
}

/// Checks every basis of `comp`: all S-polynomials reduce to zero and every
/// generator (including the implied ones) reduces to zero.
pub fn audit_computation<F: Field>(
    system: &PolySystem<F>,
    combo: RestrictedCombo,
    comp: &LexComputation<F::Elem>,
) -> BasisAudit {
    let mut gens = system.polys.clone();
    gens.extend(implied_equations(system, combo));
    let mut audit = BasisAudit {
        bases: comp.bases.len(),
        s_pairs: 0,
        sound: true,
    };
    for gb in &comp.bases {
        let ring = system.ring.with_order(gb.order);
        let imported: Vec<_> = gens.iter().map(|g| ring.import(g)).collect();
        match verify_groebner(&ring, &gb.polys) {
            Ok(n) => audit.s_pairs += n,
            Err(_) => audit.sound = false,
        }
        audit.sound &= contains_all(&ring, &gb.polys, &imported);
    }
    audit
}

/// Equivalent key `N = H M` with `H = diag(f(M_11), f(M_22))`,
/// `f` from row reduction, so `N_11` and `N_22` are in reduced echelon form.
pub fn restricted_equivalent_key<F: Field>(field: &F, m: &Matrix<F::Elem>) -> (Matrix<F::Elem>, Matrix<F::Elem>) {
    let (f11, _) = left_reduce(field, &block_get(m, 1, 1));
    let (f22, _) = left_reduce(field, &block_get(m, 2, 2));
    let z = Matrix::zeros(field, 2, 2);
    let h = from_blocks(&f11, &z, &z, &f22);
    let n = mat_mul(field, &h, m);
    (h, n)
}

/// The equivalent key the attack searches for: `N = H M` with block-diagonal
/// `H` bringing both block rows to reduced echelon form. Agrees with
/// [`restricted_equivalent_key`] when `M_11` and `M_22` are invertible.
pub fn normalized_equivalent_key<F: Field>(field: &F, m: &Matrix<F::Elem>) -> (Matrix<F::Elem>, Matrix<F::Elem>, RestrictedCombo) {
    let mut h = Matrix::zeros(field, 4, 4);
    let mut patterns = [BlockRowPattern::IDENTITY; 2];
    for block in 0..2 {
        // [block row, diagonal columns first | I_2]
        let mut aug = Matrix::zeros(field, 2, 6);
        for r in 0..2 {
            for c in 0..4 {
                aug[(r, c)] = m[(2 * block + r, global_col(block, c))].clone();
            }
            aug[(r, 4 + r)] = field.one();
        }
        let red = rref(field, &aug, 4);
        assert_eq!(red.pivots.len(), 2, "block rows of an invertible matrix have rank 2");
        patterns[block] = BlockRowPattern {
            pivots: [red.pivots[0] as u8, red.pivots[1] as u8],
        };
        for r in 0..2 {
            for c in 0..2 {
                h[(2 * block + r, 2 * block + c)] = red.matrix[(r, 4 + c)].clone();
            }
        }
    }
    let n = mat_mul(field, &h, m);
    let combo = RestrictedCombo {
        top: patterns[0],
        bottom: patterns[1],
    };
    (h, n, combo)
}

/// Candidate wrapper for a known equivalent key.
pub fn candidate_from_key<F: Field>(field: &F, n: &Matrix<F::Elem>, combo: RestrictedCombo) -> Result<CandidateN<F::Elem>> {
    Ok(CandidateN {
        n_inv: mat_inv(field, n)?,
        n: n.clone(),
        combo,
        root: 0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{Fp64, Ring};
    use crate::matlin::sample_sl;
    use crate::polysys::is_solution;
    use crate::protocols::{bcfrx_keygen, bcfrx_run, BcfrxKey};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const P64: u64 = 18446744073709551557;
    const P32: u64 = 4294967291;

    struct Trial {
        f: Fp64,
        key: BcfrxKey<u64>,
        k: Matrix<u64>,
        runs: Vec<BcfrxTranscript<u64>>,
    }

    fn trial(p: u64, word_len: usize, runs: usize, seed: u64) -> Trial {
        let f = Fp64::new_unchecked(p);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let key = bcfrx_keygen(&f, word_len, &mut rng);
        let k = sample_sl(&f, 4, word_len, &mut rng);
        let runs = (0..runs).map(|_| bcfrx_run(&f, &key, &k, word_len, &mut rng)).collect();
        Trial { f, key, k, runs }
    }

    fn point_of(f: &Fp64, combo: RestrictedCombo, n: &Matrix<u64>) -> Vec<u64> {
        let mut pt: Vec<u64> = combo.unknown_positions().iter().map(|&(i, j)| n[(i, j)]).collect();
        pt.extend(mat_inv(f, n).unwrap().entries().iter().copied());
        pt
    }

    #[test]
    fn system_dimensions() {
        let t = trial(P32, 12, 2, 0);
        let sys = build_system(&t.f, &t.runs[0], RestrictedCombo::GENERIC, &[]);
        assert_eq!((sys.len(), sys.nvars(), sys.max_degree()), (24, SYSTEM_VARS, 2));
        let sys = build_system(&t.f, &t.runs[0], RestrictedCombo::GENERIC, &t.runs[1..]);
        assert_eq!(sys.len(), 32);
    }

    #[test]
    fn identity_transcript_is_solved_by_identity() {
        let f = Fp64::new_unchecked(P32);
        let id = Matrix::identity(&f, 4);
        let t = BcfrxTranscript {
            c: id.clone(),
            d: id.clone(),
            e: id.clone(),
            truth: None,
        };
        let sys = build_system(&f, &t, RestrictedCombo::GENERIC, &[]);
        assert!(is_solution(&sys.ring, &sys.polys, &point_of(&f, RestrictedCombo::GENERIC, &id)));
        let cand = candidate_from_key(&f, &id, RestrictedCombo::GENERIC).unwrap();
        assert_eq!(recover_key_mod_p(&f, &t, &cand).unwrap(), id);
    }

    #[test]
    fn true_normalized_key_solves_the_system() {
        for seed in 0..20 {
            let t = trial(P32, 12, 2, seed);
            let (_, n, combo) = normalized_equivalent_key(&t.f, &t.key.m);
            let sys = build_system(&t.f, &t.runs[0], combo, &t.runs[1..]);
            let pt = point_of(&t.f, combo, &n);
            assert!(is_solution(&sys.ring, &sys.polys, &pt));
            assert!(is_solution(&sys.ring, &implied_equations(&sys, combo), &pt));
            let cand = candidate_from_key(&t.f, &n, combo).unwrap();
            assert_eq!(recover_key_mod_p(&t.f, &t.runs[0], &cand).unwrap(), t.k);
        }
    }

    #[test]
    fn normalization_agrees_with_block_reduction_when_blocks_are_invertible() {
        let mut checked = 0;
        for seed in 0..20 {
            let t = trial(P32, 100, 0, seed);
            let (_, n, combo) = normalized_equivalent_key(&t.f, &t.key.m);
            if combo == RestrictedCombo::GENERIC {
                assert_eq!(restricted_equivalent_key(&t.f, &t.key.m).1, n);
                assert_eq!(block_get(&n, 1, 1), Matrix::identity(&t.f, 2));
                checked += 1;
            }
        }
        assert!(checked > 10);
    }

    #[test]
    fn key_with_zero_block_is_recovered() {
        let f = Fp64::new_unchecked(P32);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let key = bcfrx_keygen(&f, 12, &mut rng);
        // det 1 with K_12 = 0
        let mut k = Matrix::identity(&f, 4);
        k[(2, 0)] = 5;
        k[(3, 1)] = f.from_i64(-7);
        k[(2, 3)] = 11;
        let t = bcfrx_run(&f, &key, &k, 12, &mut rng);
        let (_, n, combo) = normalized_equivalent_key(&f, &key.m);
        let cand = candidate_from_key(&f, &n, combo).unwrap();
        assert_eq!(recover_key_mod_p(&f, &t, &cand).unwrap(), k);
    }

    #[test]
    fn two_transcripts_give_the_unique_key() {
        for seed in 0..5 {
            let t = trial(P64, 12, 2, seed);
            let out = attack_bcfrx_mod_p(&t.f, &t.runs[0], &t.runs[1..], &GbConfig::default()).unwrap();
            assert_eq!(out.keys, vec![t.k.clone()], "seed {seed}");
            let last = out.attempts.last().unwrap();
            assert_eq!(last.candidates, 1);
            if out.attempts[0].keys > 0 {
                assert_eq!(out.attempts.len(), 1);
                assert_eq!(out.attempts[0].combo, RestrictedCombo::GENERIC);
            }
        }
    }

    #[test]
    fn single_transcript_candidates_contain_the_truth() {
        for seed in 0..3 {
            let t = trial(P32, 100, 1, seed);
            let (_, n, combo) = normalized_equivalent_key(&t.f, &t.key.m);
            let sys = build_system(&t.f, &t.runs[0], combo, &[]);
            let out = solve_for_n(&sys, combo, &GbConfig::default());
            assert!((1..=6).contains(&out.candidates.len()), "seed {seed}");
            assert!(out.candidates.iter().any(|c| c.n == n));
            let stats = out.shape.unwrap();
            assert!(stats.eliminant_degree <= 6 && stats.max_cofactor_degree <= 5);
        }
    }

    #[test]
    fn search_order_starts_generic_and_covers_all_patterns() {
        let order = combo_search_order();
        assert_eq!(order[0], RestrictedCombo::GENERIC);
        assert_eq!(order.len(), 36);
        assert_eq!(RestrictedCombo::GENERIC.nvars(), SYSTEM_VARS);
        assert!(order.iter().all(|c| c.nvars() <= SYSTEM_VARS));
    }
}
