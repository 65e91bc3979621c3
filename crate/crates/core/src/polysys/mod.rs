//! Multivariate polynomials over prime fields, Gröbner bases and
//! shape-position solving.

mod buchberger;
mod f4;
mod fglm;
mod monomial;
mod poly;
mod shape;
mod univariate;

pub use buchberger::{buchberger, contains_all, interreduce, verify_groebner, Budget, GbStats, GroebnerBasis};
pub use f4::f4;
pub use fglm::{fglm, normal_set};
pub use monomial::{Monomial, MonomialOrder, MAX_VARS};
pub use poly::{MPoly, PolyRing, PolySystemJson};
pub use shape::{is_solution, shape_form, shape_solve, solve_form, ShapeForm, ShapeStats};
pub use univariate::{roots_dense, univariate_roots};

use serde::{Deserialize, Serialize};

use crate::arith::Field;
use crate::error::Result;

/// How a lex basis is obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LexStrategy {
    /// Buchberger directly in lex.
    Direct,
    /// Buchberger in degrevlex, then FGLM.
    #[default]
    ViaDegRevLex,
}

/// Which driver computes a basis in a given order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GbAlgorithm {
    /// One S-polynomial at a time.
    Buchberger,
    /// Batches of S-polynomials reduced as a sparse matrix.
    #[default]
    F4,
}

/// Reduced Gröbner basis of `gens` in `ring`'s order.
pub fn groebner<F: Field>(
    ring: &PolyRing<F>,
    gens: &[MPoly<F::Elem>],
    algorithm: GbAlgorithm,
    budget: Budget,
) -> Result<GroebnerBasis<F::Elem>> {
    match algorithm {
        GbAlgorithm::Buchberger => buchberger(ring, gens, budget),
        GbAlgorithm::F4 => f4(ring, gens, budget),
    }
}

/// Everything that controls a lex basis computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct GbConfig {
    pub strategy: LexStrategy,
    pub algorithm: GbAlgorithm,
    pub budget: Budget,
}

/// Intermediate and final bases of one lex computation.
#[derive(Debug, Clone)]
pub struct LexComputation<E> {
    /// Every basis computed on the way, the lex one last.
    pub bases: Vec<GroebnerBasis<E>>,
}

impl<E> LexComputation<E> {
    pub fn lex(&self) -> &GroebnerBasis<E> {
        self.bases.last().expect("at least one basis")
    }
}

/// Reduced lex Gröbner basis of `gens`, which must live in a ring of any order.
pub fn lex_basis<F: Field>(
    ring: &PolyRing<F>,
    gens: &[MPoly<F::Elem>],
    config: &GbConfig,
) -> Result<LexComputation<F::Elem>> {
    let (algorithm, budget) = (config.algorithm, config.budget);
    match config.strategy {
        LexStrategy::Direct => {
            let lex = ring.with_order(MonomialOrder::Lex);
            let gens: Vec<_> = gens.iter().map(|g| lex.import(g)).collect();
            Ok(LexComputation {
                bases: vec![groebner(&lex, &gens, algorithm, budget)?],
            })
        }
        LexStrategy::ViaDegRevLex => {
            let drl = ring.with_order(MonomialOrder::DegRevLex);
            let gens: Vec<_> = gens.iter().map(|g| drl.import(g)).collect();
            let gb = groebner(&drl, &gens, algorithm, budget)?;
            let lex = fglm(&drl, &gb, MonomialOrder::Lex)?;
            Ok(LexComputation { bases: vec![gb, lex] })
        }
    }
}

/// A list of generators together with their ring.
#[derive(Debug, Clone)]
pub struct PolySystem<F: Field> {
    pub ring: PolyRing<F>,
    pub polys: Vec<MPoly<F::Elem>>,
}

impl<F: Field> PolySystem<F> {
    pub fn len(&self) -> usize {
        self.polys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }

    pub fn nvars(&self) -> usize {
        self.ring.nvars()
    }

    pub fn max_degree(&self) -> u16 {
        self.polys.iter().map(|p| p.total_degree()).max().unwrap_or(0)
    }

    pub fn to_json(&self) -> PolySystemJson {
        PolySystemJson::encode(&self.ring, &self.polys)
    }
}
