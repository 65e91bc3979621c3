use serde::{Deserialize, Serialize};

use crate::arith::Field;
use crate::error::{Error, Result};

use super::monomial::{Monomial, MonomialOrder};
use super::poly::{MPoly, PolyRing};

/// Caps on the work a single basis computation may do.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    pub max_pairs: usize,
    pub max_reductions: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_pairs: 200_000,
            max_reductions: 50_000_000,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GbStats {
    /// Pairs that survived the criteria and were reduced.
    pub pairs_reduced: usize,
    /// Pairs discarded by the product or chain criterion.
    pub pairs_discarded: usize,
    pub zero_reductions: usize,
    pub reduction_steps: usize,
    pub max_degree: u16,
}

/// A reduced Gröbner basis: monic, auto-reduced, sorted by ascending leading monomial.
#[derive(Debug, Clone)]
pub struct GroebnerBasis<E> {
    pub polys: Vec<MPoly<E>>,
    pub order: MonomialOrder,
    pub stats: GbStats,
}

impl<E> GroebnerBasis<E> {
    pub fn is_unit(&self) -> bool {
        self.polys.len() == 1 && self.polys[0].lm() == Monomial::ONE
    }

    pub fn leading_monomials(&self) -> Vec<Monomial> {
        self.polys.iter().map(|p| p.lm()).collect()
    }
}

#[derive(Debug, Clone, Copy)]
pub(super) struct Pair {
    pub i: usize,
    pub j: usize,
    pub lcm: Monomial,
    pub sugar: u16,
}

/// Critical-pair bookkeeping shared by the Buchberger and F4 drivers.
pub(super) struct Engine<'a, F: Field> {
    pub ring: &'a PolyRing<F>,
    pub polys: Vec<MPoly<F::Elem>>,
    sugar: Vec<u16>,
    /// Indices of polynomials whose leading monomial is not redundant.
    pub basis: Vec<usize>,
    pairs: Vec<Pair>,
    pub stats: GbStats,
    budget: Budget,
}

impl<'a, F: Field> Engine<'a, F> {
    pub fn new(ring: &'a PolyRing<F>, budget: Budget) -> Self {
        Engine {
            ring,
            polys: Vec::new(),
            sugar: Vec::new(),
            basis: Vec::new(),
            pairs: Vec::new(),
            stats: GbStats::default(),
            budget,
        }
    }

    /// Inserts the generators one at a time, each reduced by its predecessors.
    /// Returns `false` when the ideal turned out to be the unit ideal.
    pub fn load(&mut self, gens: &[MPoly<F::Elem>]) -> bool {
        let mut input: Vec<MPoly<F::Elem>> = gens.iter().filter(|g| !g.is_zero()).cloned().collect();
        input.sort_by(|a, b| self.ring.cmp(&a.lm(), &b.lm()));
        for g in input {
            let sugar = g.total_degree();
            let r = self.reduce(&g);
            if r.is_zero() {
                continue;
            }
            if r.lm() == Monomial::ONE {
                return false;
            }
            self.insert(r, sugar);
        }
        true
    }

    /// Removes every pair of minimal sugar.
    pub fn select_batch(&mut self) -> Vec<Pair> {
        let Some(min) = self.pairs.iter().map(|p| p.sugar).min() else {
            return Vec::new();
        };
        let (batch, rest): (Vec<Pair>, Vec<Pair>) = self.pairs.drain(..).partition(|p| p.sugar == min);
        self.pairs = rest;
        batch
    }

    pub fn finish(self) -> GroebnerBasis<F::Elem> {
        let basis: Vec<MPoly<F::Elem>> = self.basis.iter().map(|&g| self.polys[g].clone()).collect();
        GroebnerBasis {
            polys: interreduce(self.ring, basis),
            order: self.ring.order(),
            stats: self.stats,
        }
    }

    pub fn unit(&self) -> GroebnerBasis<F::Elem> {
        unit_basis(self.ring, self.stats)
    }
    fn pair(&self, i: usize, j: usize) -> Pair {
        let (li, lj) = (self.polys[i].lm(), self.polys[j].lm());
        let lcm = li.lcm(&lj);
        let si = self.sugar[i] + lcm.degree() - li.degree();
        let sj = self.sugar[j] + lcm.degree() - lj.degree();
        Pair {
            i,
            j,
            lcm,
            sugar: si.max(sj),
        }
    }

    /// Gebauer–Möller installation of a new polynomial `h`.
    fn update(&mut self, h: usize) {
        let lh = self.polys[h].lm();
        let mut fresh: Vec<Pair> = self.basis.iter().map(|&g| self.pair(h, g)).collect();

        // chain criterion among the new pairs: drop (h,g1) when some other
        // (h,g2) has an lcm strictly dividing it, or an equal lcm seen earlier
        let mut keep = vec![true; fresh.len()];
        for a in 0..fresh.len() {
            let ga = self.polys[fresh[a].j].lm();
            if lh.coprime(&ga) {
                continue;
            }
            for b in 0..fresh.len() {
                if a == b || !keep[b] {
                    continue;
                }
                let (la, lb) = (fresh[a].lcm, fresh[b].lcm);
                if lb.divides(&la) && (lb != la || b < a) {
                    keep[a] = false;
                    break;
                }
            }
        }
        let before = fresh.len();
        let mut idx = 0;
        fresh.retain(|_| {
            let k = keep[idx];
            idx += 1;
            k
        });
        // product criterion
        fresh.retain(|p| !lh.coprime(&self.polys[p.j].lm()));
        self.stats.pairs_discarded += before - fresh.len();

        // old pairs made redundant by h
        let before = self.pairs.len();
        let polys = &self.polys;
        self.pairs.retain(|p| {
            let li = polys[p.i].lm();
            let lj = polys[p.j].lm();
            !(lh.divides(&p.lcm) && li.lcm(&lh) != p.lcm && lj.lcm(&lh) != p.lcm)
        });
        self.stats.pairs_discarded += before - self.pairs.len();
        self.pairs.extend(fresh);

        let polys = &self.polys;
        self.basis.retain(|&g| !lh.divides(&polys[g].lm()));
        self.basis.push(h);
    }

    fn select(&mut self) -> Option<Pair> {
        if self.pairs.is_empty() {
            return None;
        }
        let order = self.ring.order();
        let mut best = 0;
        for k in 1..self.pairs.len() {
            let (a, b) = (&self.pairs[k], &self.pairs[best]);
            let better = a.sugar < b.sugar
                || (a.sugar == b.sugar && order.cmp(&a.lcm, &b.lcm) == std::cmp::Ordering::Less);
            if better {
                best = k;
            }
        }
        Some(self.pairs.swap_remove(best))
    }

    fn reduce(&mut self, p: &MPoly<F::Elem>) -> MPoly<F::Elem> {
        let divisors: Vec<&MPoly<F::Elem>> = self.basis.iter().map(|&g| &self.polys[g]).collect();
        self.ring.reduce_counted(p, &divisors, &mut self.stats.reduction_steps)
    }

    pub fn insert(&mut self, p: MPoly<F::Elem>, sugar: u16) -> usize {
        let p = self.ring.monic(&p);
        self.stats.max_degree = self.stats.max_degree.max(p.total_degree());
        self.polys.push(p);
        self.sugar.push(sugar);
        let h = self.polys.len() - 1;
        self.update(h);
        h
    }

    pub fn check_budget(&self) -> Result<()> {
        if self.stats.pairs_reduced > self.budget.max_pairs
            || self.stats.reduction_steps > self.budget.max_reductions
        {
            return Err(Error::BudgetExhausted {
                pairs: self.stats.pairs_reduced,
                reductions: self.stats.reduction_steps,
            });
        }
        Ok(())
    }
}

/// Reduced Gröbner basis of the ideal generated by `gens` in `ring`'s order.
pub fn buchberger<F: Field>(
    ring: &PolyRing<F>,
    gens: &[MPoly<F::Elem>],
    budget: Budget,
) -> Result<GroebnerBasis<F::Elem>> {
    let mut eng = Engine::new(ring, budget);
    if !eng.load(gens) {
        return Ok(eng.unit());
    }
    while let Some(pair) = eng.select() {
        eng.check_budget()?;
        eng.stats.pairs_reduced += 1;
        let s = ring.s_poly(&eng.polys[pair.i], &eng.polys[pair.j]);
        let r = eng.reduce(&s);
        if r.is_zero() {
            eng.stats.zero_reductions += 1;
            continue;
        }
        if r.lm() == Monomial::ONE {
            return Ok(eng.unit());
        }
        eng.insert(r, pair.sugar);
    }
    Ok(eng.finish())
}

fn unit_basis<F: Field>(ring: &PolyRing<F>, stats: GbStats) -> GroebnerBasis<F::Elem> {
    GroebnerBasis {
        polys: vec![ring.one()],
        order: ring.order(),
        stats,
    }
}

/// Turns a Gröbner basis into the reduced one: drops redundant leading
/// monomials, reduces every tail, normalises to monic and sorts ascending.
pub fn interreduce<F: Field>(ring: &PolyRing<F>, basis: Vec<MPoly<F::Elem>>) -> Vec<MPoly<F::Elem>> {
    let mut minimal: Vec<MPoly<F::Elem>> = Vec::new();
    let mut sorted = basis;
    sorted.retain(|p| !p.is_zero());
    sorted.sort_by(|a, b| ring.cmp(&a.lm(), &b.lm()));
    for p in sorted {
        let lm = p.lm();
        if !minimal.iter().any(|q| q.lm().divides(&lm)) {
            minimal.push(p);
        }
    }
    let mut out = Vec::with_capacity(minimal.len());
    for k in 0..minimal.len() {
        let others: Vec<&MPoly<F::Elem>> = minimal
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != k)
            .map(|(_, q)| q)
            .collect();
        let p = &minimal[k];
        let (c, m) = p.lead().expect("nonzero");
        let tail = ring.from_terms(p.terms()[1..].to_vec());
        let mut steps = 0;
        let reduced_tail = ring.reduce_counted(&tail, &others, &mut steps);
        let full = ring.add(&ring.term(c.clone(), *m), &reduced_tail);
        out.push(ring.monic(&full));
    }
    out
}

/// Checks the Gröbner property directly: every S-polynomial of `basis`
/// reduces to zero. Returns the number of pairs checked.
pub fn verify_groebner<F: Field>(ring: &PolyRing<F>, basis: &[MPoly<F::Elem>]) -> std::result::Result<usize, (usize, usize)> {
    let mut checked = 0;
    for i in 0..basis.len() {
        for j in i + 1..basis.len() {
            let s = ring.s_poly(&basis[i], &basis[j]);
            if !ring.normal_form(&s, basis).is_zero() {
                return Err((i, j));
            }
            checked += 1;
        }
    }
    Ok(checked)
}

/// Whether every generator has normal form zero against `basis`.
pub fn contains_all<F: Field>(ring: &PolyRing<F>, basis: &[MPoly<F::Elem>], gens: &[MPoly<F::Elem>]) -> bool {
    gens.iter().all(|g| ring.normal_form(g, basis).is_zero())
}
