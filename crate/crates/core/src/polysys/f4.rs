//! Matrix-based Gröbner driver: all pairs of minimal sugar are reduced
//! together as rows of one sparse matrix.

use rustc_hash::{FxHashMap, FxHashSet};

use crate::arith::Field;
use crate::error::Result;

use super::buchberger::{Budget, Engine, GroebnerBasis, Pair};
use super::monomial::Monomial;
use super::poly::{MPoly, PolyRing};

/// Sparse row; `cols` ascending, i.e. monomials descending.
struct Row<E> {
    cols: Vec<u32>,
    coefs: Vec<E>,
}

/// Reduced Gröbner basis of `gens`, same contract as [`super::buchberger`].
pub fn f4<F: Field>(ring: &PolyRing<F>, gens: &[MPoly<F::Elem>], budget: Budget) -> Result<GroebnerBasis<F::Elem>> {
    let mut eng = Engine::new(ring, budget);
    if !eng.load(gens) {
        return Ok(eng.unit());
    }
    loop {
        eng.check_budget()?;
        let batch = eng.select_batch();
        if batch.is_empty() {
            break;
        }
        eng.stats.pairs_reduced += batch.len();
        let sugar = batch[0].sugar;
        let fresh = reduce_batch(&mut eng, &batch);
        eng.stats.zero_reductions += batch.len().saturating_sub(fresh.len());
        for p in fresh {
            if p.lm() == Monomial::ONE {
                return Ok(eng.unit());
            }
            eng.insert(p, sugar);
        }
    }
    Ok(eng.finish())
}

fn reduce_batch<F: Field>(eng: &mut Engine<'_, F>, batch: &[Pair]) -> Vec<MPoly<F::Elem>> {
    let ring = eng.ring;
    let f = ring.field();
    let polys = &eng.polys;

    // rows as (multiplier, polynomial index)
    let mut seen: FxHashSet<(Monomial, usize)> = FxHashSet::default();
    let mut rows: Vec<(Monomial, usize)> = Vec::new();
    for p in batch {
        for k in [p.i, p.j] {
            let u = polys[k].lm().quotient_of(&p.lcm);
            if seen.insert((u, k)) {
                rows.push((u, k));
            }
        }
    }

    // symbolic preprocessing: every monomial divisible by a basis leading
    // monomial gets a reducer row
    let leads: Vec<(usize, Monomial, u32)> = eng
        .basis
        .iter()
        .map(|&g| {
            let lm = polys[g].lm();
            (g, lm, lm.support_mask())
        })
        .collect();
    let mut done: FxHashMap<Monomial, bool> = FxHashMap::default();
    let mut todo: Vec<Monomial> = Vec::new();
    for &(u, k) in &rows {
        done.insert(u.mul(&polys[k].lm()), true);
    }
    let visit = |u: &Monomial, k: usize, done: &mut FxHashMap<Monomial, bool>, todo: &mut Vec<Monomial>| {
        for (_, m) in polys[k].terms() {
            let mm = u.mul(m);
            done.entry(mm).or_insert_with(|| {
                todo.push(mm);
                false
            });
        }
    };
    for &(u, k) in &rows {
        visit(&u, k, &mut done, &mut todo);
    }
    while let Some(m) = todo.pop() {
        if done[&m] {
            continue;
        }
        done.insert(m, true);
        let mask = m.support_mask();
        let best = leads
            .iter()
            .filter(|(_, lm, lmask)| lmask & !mask == 0 && lm.divides(&m))
            .min_by_key(|(g, _, _)| polys[*g].len());
        if let Some(&(g, lm, _)) = best {
            let u = lm.quotient_of(&m);
            rows.push((u, g));
            visit(&u, g, &mut done, &mut todo);
        }
    }

    // columns in descending monomial order
    let mut monos: Vec<Monomial> = done.into_keys().collect();
    monos.sort_unstable_by(|a, b| ring.cmp(b, a));
    let col_of: FxHashMap<Monomial, u32> = monos.iter().enumerate().map(|(i, m)| (*m, i as u32)).collect();
    let ncols = monos.len();

    let mut pivots: Vec<Option<Row<F::Elem>>> = (0..ncols).map(|_| None).collect();
    let mut pending: Vec<Row<F::Elem>> = Vec::new();
    for &(u, k) in &rows {
        let (cols, coefs): (Vec<u32>, Vec<F::Elem>) =
            polys[k].terms().iter().map(|(c, m)| (col_of[&u.mul(m)], c.clone())).unzip();
        let lead = cols[0] as usize;
        let row = Row { cols, coefs };
        if pivots[lead].is_none() {
            pivots[lead] = Some(row);
        } else {
            pending.push(row);
        }
    }

    let mut acc: Vec<F::Acc> = vec![f.acc_from(&f.zero()); ncols];
    let mut fresh = Vec::new();
    let mut steps = 0usize;
    for row in pending {
        let start = row.cols[0] as usize;
        for (c, x) in row.cols.iter().zip(&row.coefs) {
            acc[*c as usize] = f.acc_from(x);
        }
        let mut cols = Vec::new();
        let mut coefs = Vec::new();
        for c in start..ncols {
            if f.acc_is_trivially_zero(&acc[c]) {
                continue;
            }
            let q = f.acc_take(&mut acc[c]);
            if f.is_zero(&q) {
                continue;
            }
            match &pivots[c] {
                Some(p) => {
                    // pivot rows are monic
                    for (pc, px) in p.cols[1..].iter().zip(&p.coefs[1..]) {
                        f.acc_submul(&mut acc[*pc as usize], &q, px);
                    }
                    steps += 1;
                }
                None => {
                    cols.push(c as u32);
                    coefs.push(q);
                }
            }
        }
        if cols.is_empty() {
            continue;
        }
        let inv = f.inv(&coefs[0]).expect("nonzero lead");
        let coefs: Vec<F::Elem> = coefs.iter().map(|x| f.mul(&inv, x)).collect();
        let lead = cols[0] as usize;
        let poly = ring.from_sorted_terms(cols.iter().zip(&coefs).map(|(c, x)| (x.clone(), monos[*c as usize])).collect());
        pivots[lead] = Some(Row { cols, coefs });
        fresh.push(poly);
    }
    eng.stats.reduction_steps += steps;
    fresh
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{Fp64, Ring};
    use crate::polysys::buchberger::buchberger;
    use crate::polysys::monomial::MonomialOrder;

    #[test]
    fn agrees_with_buchberger() {
        let f = Fp64::new_unchecked(32003);
        for order in [MonomialOrder::Lex, MonomialOrder::DegRevLex] {
            let r = PolyRing::new(f, 3, order);
            let (x, y, z) = (r.var(0), r.var(1), r.var(2));
            // cyclic-3
            let gens = [
                r.add(&r.add(&x, &y), &z),
                r.add(&r.add(&r.mul(&x, &y), &r.mul(&y, &z)), &r.mul(&z, &x)),
                r.sub(&r.mul(&r.mul(&x, &y), &z), &r.one()),
            ];
            let a = buchberger(&r, &gens, Budget::default()).unwrap();
            let b = f4(&r, &gens, Budget::default()).unwrap();
            assert_eq!(a.polys, b.polys);
            assert_eq!(f.from_i64(-1), 32002);
        }
    }
}
