//! Change of order for zero-dimensional ideals by linear algebra in the
//! quotient ring.

use std::collections::{BTreeSet, HashMap};

use crate::arith::Field;
use crate::error::{Error, Result};
use crate::matlin::{solve_right, Matrix};

use super::buchberger::{GbStats, GroebnerBasis};
use super::monomial::{Monomial, MonomialOrder};
use super::poly::{MPoly, PolyRing};

/// Monomials not divisible by any leading monomial of `gb`, in ascending
/// order, or `None` when the ideal is not zero-dimensional.
pub fn normal_set<F: Field>(ring: &PolyRing<F>, gb: &GroebnerBasis<F::Elem>) -> Option<Vec<Monomial>> {
    let leads = gb.leading_monomials();
    if gb.is_unit() {
        return Some(Vec::new());
    }
    // zero-dimensional iff every variable has a pure power among the leads
    for v in 0..ring.nvars() {
        if !leads.iter().any(|m| m.exp(v) > 0 && m.support().all(|w| w == v)) {
            return None;
        }
    }
    let mut seen: BTreeSet<Vec<u32>> = BTreeSet::new();
    let mut stack = vec![Monomial::ONE];
    let mut out = Vec::new();
    while let Some(m) = stack.pop() {
        if !seen.insert(m.exponents(ring.nvars())) {
            continue;
        }
        out.push(m);
        for v in 0..ring.nvars() {
            let next = m.mul(&Monomial::var(v));
            if !leads.iter().any(|l| l.divides(&next)) {
                stack.push(next);
            }
        }
    }
    out.sort_by(|a, b| ring.cmp(a, b));
    Some(out)
}

/// Converts a reduced Gröbner basis of a zero-dimensional ideal to the
/// reduced basis for `target`.
pub fn fglm<F: Field>(
    ring: &PolyRing<F>,
    gb: &GroebnerBasis<F::Elem>,
    target: MonomialOrder,
) -> Result<GroebnerBasis<F::Elem>> {
    let field = ring.field();
    let out_ring = ring.with_order(target);
    if gb.is_unit() {
        return Ok(GroebnerBasis {
            polys: vec![out_ring.one()],
            order: target,
            stats: gb.stats,
        });
    }
    let staircase = normal_set(ring, gb)
        .ok_or_else(|| Error::ShapeFailure("ideal is not zero-dimensional".into()))?;
    let dim = staircase.len();
    let index: HashMap<Monomial, usize> = staircase.iter().enumerate().map(|(i, m)| (*m, i)).collect();

    // coordinates of NF(x_v * b) for each staircase monomial b
    let coords = |p: &MPoly<F::Elem>| -> Vec<F::Elem> {
        let mut v = vec![field.zero(); dim];
        for (c, m) in p.terms() {
            v[index[m]] = c.clone();
        }
        v
    };
    let mut mult: Vec<Vec<Vec<F::Elem>>> = Vec::with_capacity(ring.nvars());
    for var in 0..ring.nvars() {
        let cols = staircase
            .iter()
            .map(|b| {
                let m = b.mul(&Monomial::var(var));
                coords(&ring.normal_form(&ring.term(field.one(), m), &gb.polys))
            })
            .collect();
        mult.push(cols);
    }
    let apply = |var: usize, v: &[F::Elem]| -> Vec<F::Elem> {
        let mut out = vec![field.zero(); dim];
        for (k, c) in v.iter().enumerate() {
            if field.is_zero(c) {
                continue;
            }
            for (o, x) in out.iter_mut().zip(&mult[var][k]) {
                *o = field.add(o, &field.mul(c, x));
            }
        }
        out
    };

    let mut new_stair: Vec<(Monomial, Vec<F::Elem>)> = Vec::new();
    let mut new_basis: Vec<MPoly<F::Elem>> = Vec::new();
    let mut one = vec![field.zero(); dim];
    one[index[&Monomial::ONE]] = field.one();
    new_stair.push((Monomial::ONE, one));

    // candidates: (monomial, parent staircase position, variable)
    let mut frontier: Vec<(Monomial, usize, usize)> = Vec::new();
    let push_neighbours = |frontier: &mut Vec<(Monomial, usize, usize)>, pos: usize, m: Monomial| {
        for var in 0..ring.nvars() {
            frontier.push((m.mul(&Monomial::var(var)), pos, var));
        }
    };
    push_neighbours(&mut frontier, 0, Monomial::ONE);

    loop {
        // smallest candidate in the target order
        frontier.sort_by(|a, b| target.cmp(&b.0, &a.0));
        frontier.dedup_by(|a, b| a.0 == b.0);
        let Some((m, parent, var)) = frontier.pop() else { break };
        if new_basis.iter().any(|g| g.lm().divides(&m)) || new_stair.iter().any(|(s, _)| *s == m) {
            continue;
        }
        let v = apply(var, &new_stair[parent].1);
        let basis_mat = Matrix::from_vec(
            dim,
            new_stair.len(),
            (0..dim)
                .flat_map(|r| new_stair.iter().map(move |(_, col)| col[r].clone()))
                .collect(),
        );
        match solve_right(field, &basis_mat, &Matrix::column(&v)) {
            Ok(sol) => {
                let mut terms = vec![(field.one(), m)];
                for (k, (s, _)) in new_stair.iter().enumerate() {
                    terms.push((field.neg(&sol[(k, 0)]), *s));
                }
                new_basis.push(out_ring.from_terms(terms));
            }
            Err(_) => {
                new_stair.push((m, v));
                push_neighbours(&mut frontier, new_stair.len() - 1, m);
                if new_stair.len() > dim {
                    return Err(Error::ShapeFailure("quotient dimension exceeded".into()));
                }
            }
        }
    }
    new_basis.sort_by(|a, b| target.cmp(&a.lm(), &b.lm()));
    Ok(GroebnerBasis {
        polys: new_basis,
        order: target,
        stats: GbStats { ..gb.stats },
    })
}
