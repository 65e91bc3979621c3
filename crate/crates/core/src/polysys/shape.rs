use serde::{Deserialize, Serialize};

use crate::arith::Field;
use crate::error::{Error, Result};

use super::buchberger::GroebnerBasis;
use super::monomial::{Monomial, MonomialOrder};
use super::poly::{MPoly, PolyRing};
use super::univariate::{eval, roots_dense, to_dense};

/// Degrees observed in a shape-position basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShapeStats {
    pub eliminant_degree: usize,
    /// Largest degree of the `f_i` in the elements `x_i + f_i(x_v)`.
    pub max_cofactor_degree: usize,
    pub basis_len: usize,
}

/// Decomposition of a lex basis `{x_i + f_i(x_v)} ∪ {g(x_v)}`.
#[derive(Debug, Clone)]
pub struct ShapeForm<E> {
    pub eliminant: Vec<E>,
    /// `cofactors[i]` holds `f_i` densely, for `i < v - 1`.
    pub cofactors: Vec<Vec<E>>,
}

impl<E> ShapeForm<E> {
    pub fn stats(&self) -> ShapeStats {
        ShapeStats {
            eliminant_degree: self.eliminant.len().saturating_sub(1),
            max_cofactor_degree: self
                .cofactors
                .iter()
                .map(|c| c.len().saturating_sub(1))
                .max()
                .unwrap_or(0),
            basis_len: self.cofactors.len() + 1,
        }
    }
}

/// Recognises shape position. A unit basis yields `Ok(None)` (no solutions).
pub fn shape_form<F: Field>(ring: &PolyRing<F>, gb: &GroebnerBasis<F::Elem>) -> Result<Option<ShapeForm<F::Elem>>> {
    if gb.order != MonomialOrder::Lex || ring.order() != MonomialOrder::Lex {
        return Err(Error::ShapeFailure("shape position needs a lex basis".into()));
    }
    if gb.is_unit() {
        return Ok(None);
    }
    let v = ring.nvars();
    let last = v - 1;
    if gb.polys.len() != v {
        return Err(Error::ShapeFailure(format!(
            "basis has {} elements for {} variables",
            gb.polys.len(),
            v
        )));
    }
    let eliminant = to_dense(ring, &gb.polys[0], last)
        .map_err(|_| Error::ShapeFailure("smallest element is not univariate in the last variable".into()))?;
    let mut cofactors: Vec<Option<Vec<F::Elem>>> = vec![None; last];
    for p in &gb.polys[1..] {
        let lm = p.lm();
        let Some(var) = (0..last).find(|&i| lm == Monomial::var(i)) else {
            return Err(Error::ShapeFailure(format!("unexpected leading monomial {lm:?}")));
        };
        let tail = ring.from_terms(p.terms()[1..].to_vec());
        let dense = to_dense(ring, &tail, last)
            .map_err(|_| Error::ShapeFailure(format!("element for x{} has a mixed tail", var + 1)))?;
        cofactors[var] = Some(dense);
    }
    let cofactors = cofactors
        .into_iter()
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| Error::ShapeFailure("a variable has no linear basis element".into()))?;
    Ok(Some(ShapeForm { eliminant, cofactors }))
}

/// All solutions of a shape-position lex basis, one per root of the eliminant.
pub fn shape_solve<F: Field>(ring: &PolyRing<F>, gb: &GroebnerBasis<F::Elem>) -> Result<Vec<Vec<F::Elem>>> {
    let Some(form) = shape_form(ring, gb)? else {
        return Ok(Vec::new());
    };
    Ok(solve_form(ring, &form)?)
}

pub fn solve_form<F: Field>(ring: &PolyRing<F>, form: &ShapeForm<F::Elem>) -> Result<Vec<Vec<F::Elem>>> {
    let f = ring.field();
    let roots = roots_dense(f, &form.eliminant)?;
    Ok(roots
        .into_iter()
        .map(|r| {
            let mut point: Vec<F::Elem> = form.cofactors.iter().map(|c| f.neg(&eval(f, c, &r))).collect();
            point.push(r);
            point
        })
        .collect())
}

/// Checks that `point` is a common zero of `polys`.
pub fn is_solution<F: Field>(ring: &PolyRing<F>, polys: &[MPoly<F::Elem>], point: &[F::Elem]) -> bool {
    polys.iter().all(|p| ring.field().is_zero(&ring.eval(p, point)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{Fp64, Ring};
    use crate::polysys::buchberger::{buchberger, Budget};

    fn lex(n: usize) -> PolyRing<Fp64> {
        PolyRing::new(Fp64::new_unchecked(7), n, MonomialOrder::Lex)
    }

    #[test]
    fn two_solutions() {
        let r = lex(2);
        let (x1, x2) = (r.var(0), r.var(1));
        let gens = [r.add(&x1, &x2), r.sub(&r.mul(&x2, &x2), &r.one())];
        let gb = buchberger(&r, &gens, Budget::default()).unwrap();
        let sols = shape_solve(&r, &gb).unwrap();
        assert_eq!(sols, vec![vec![6, 1], vec![1, 6]]);
        assert!(sols.iter().all(|s| is_solution(&r, &gens, s)));
    }

    #[test]
    fn unit_and_linear() {
        let r = lex(1);
        let gb = buchberger(&r, &[r.one()], Budget::default()).unwrap();
        assert!(shape_solve(&r, &gb).unwrap().is_empty());
        let g = r.sub(&r.var(0), &r.constant(3));
        let gb = buchberger(&r, &[g], Budget::default()).unwrap();
        assert_eq!(shape_solve(&r, &gb).unwrap(), vec![vec![3]]);
    }

    #[test]
    fn non_shape_is_reported() {
        // x1^2 - 1, x2^2 - 1: four points sharing x2 values
        let r = lex(2);
        let gens = [
            r.sub(&r.mul(&r.var(0), &r.var(0)), &r.one()),
            r.sub(&r.mul(&r.var(1), &r.var(1)), &r.one()),
        ];
        let gb = buchberger(&r, &gens, Budget::default()).unwrap();
        assert!(matches!(shape_solve(&r, &gb), Err(Error::ShapeFailure(_))));
        assert_eq!(r.field().from_i64(1), 1);
    }
}
