use std::cmp::Ordering;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::arith::{Field, RingDescriptor};
use crate::error::{Error, Result};

use super::monomial::{Monomial, MonomialOrder, MAX_VARS};

/// Terms sorted strictly descending in the owning ring's order, no zero coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MPoly<E> {
    terms: Vec<(E, Monomial)>,
}

impl<E> MPoly<E> {
    pub fn zero() -> Self {
        MPoly { terms: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[(E, Monomial)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn lead(&self) -> Option<&(E, Monomial)> {
        self.terms.first()
    }

    pub fn lm(&self) -> Monomial {
        self.terms.first().expect("zero polynomial has no leading monomial").1
    }

    pub fn lc(&self) -> &E {
        &self.terms.first().expect("zero polynomial has no leading coefficient").0
    }

    pub fn total_degree(&self) -> u16 {
        self.terms.iter().map(|(_, m)| m.degree()).max().unwrap_or(0)
    }
}

/// `F[x_1, ..., x_v]` with a fixed monomial order.
#[derive(Debug, Clone)]
pub struct PolyRing<F: Field> {
    field: F,
    nvars: usize,
    order: MonomialOrder,
}

impl<F: Field> PolyRing<F> {
    pub fn new(field: F, nvars: usize, order: MonomialOrder) -> Self {
        assert!(nvars <= MAX_VARS, "at most {MAX_VARS} variables supported");
        PolyRing { field, nvars, order }
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn with_order(&self, order: MonomialOrder) -> Self {
        PolyRing::new(self.field.clone(), self.nvars, order)
    }

    #[inline]
    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        self.order.cmp(a, b)
    }

    /// Builds a polynomial from arbitrary terms: sorts, merges duplicates, drops zeros.
    pub fn from_terms(&self, mut terms: Vec<(F::Elem, Monomial)>) -> MPoly<F::Elem> {
        terms.sort_by(|a, b| self.cmp(&b.1, &a.1));
        let mut out: Vec<(F::Elem, Monomial)> = Vec::with_capacity(terms.len());
        for (c, m) in terms {
            match out.last_mut() {
                Some(last) if last.1 == m => last.0 = self.field.add(&last.0, &c),
                _ => out.push((c, m)),
            }
        }
        out.retain(|(c, _)| !self.field.is_zero(c));
        MPoly { terms: out }
    }

    /// Wraps terms already strictly descending with nonzero coefficients.
    pub(crate) fn from_sorted_terms(&self, terms: Vec<(F::Elem, Monomial)>) -> MPoly<F::Elem> {
        debug_assert!(terms.windows(2).all(|w| self.cmp(&w[0].1, &w[1].1) == Ordering::Greater));
        MPoly { terms }
    }

    pub fn constant(&self, c: F::Elem) -> MPoly<F::Elem> {
        self.from_terms(vec![(c, Monomial::ONE)])
    }

    pub fn one(&self) -> MPoly<F::Elem> {
        self.constant(self.field.one())
    }

    pub fn var(&self, i: usize) -> MPoly<F::Elem> {
        assert!(i < self.nvars);
        MPoly {
            terms: vec![(self.field.one(), Monomial::var(i))],
        }
    }

    pub fn term(&self, c: F::Elem, m: Monomial) -> MPoly<F::Elem> {
        self.from_terms(vec![(c, m)])
    }

    /// Re-sorts `f` (built in another ring with the same field and variables).
    pub fn import(&self, f: &MPoly<F::Elem>) -> MPoly<F::Elem> {
        let mut terms = f.terms.clone();
        terms.sort_by(|a, b| self.cmp(&b.1, &a.1));
        MPoly { terms }
    }

    fn merge(
        &self,
        a: &[(F::Elem, Monomial)],
        b: &[(F::Elem, Monomial)],
        scale_b: &F::Elem,
        shift_b: &Monomial,
    ) -> Vec<(F::Elem, Monomial)> {
        // a + scale_b * shift_b * b
        let f = &self.field;
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        let next_b = |j: usize| (f.mul(scale_b, &b[j].0), b[j].1.mul(shift_b));
        let mut pending = if j < b.len() { Some(next_b(j)) } else { None };
        while i < a.len() || pending.is_some() {
            match &pending {
                None => {
                    out.extend_from_slice(&a[i..]);
                    break;
                }
                Some((bc, bm)) => {
                    if i == a.len() {
                        out.push((bc.clone(), *bm));
                        j += 1;
                        pending = if j < b.len() { Some(next_b(j)) } else { None };
                        continue;
                    }
                    match self.cmp(&a[i].1, bm) {
                        Ordering::Greater => {
                            out.push(a[i].clone());
                            i += 1;
                        }
                        Ordering::Less => {
                            out.push((bc.clone(), *bm));
                            j += 1;
                            pending = if j < b.len() { Some(next_b(j)) } else { None };
                        }
                        Ordering::Equal => {
                            let s = f.add(&a[i].0, bc);
                            if !f.is_zero(&s) {
                                out.push((s, *bm));
                            }
                            i += 1;
                            j += 1;
                            pending = if j < b.len() { Some(next_b(j)) } else { None };
                        }
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, a: &MPoly<F::Elem>, b: &MPoly<F::Elem>) -> MPoly<F::Elem> {
        MPoly {
            terms: self.merge(&a.terms, &b.terms, &self.field.one(), &Monomial::ONE),
        }
    }

    pub fn sub(&self, a: &MPoly<F::Elem>, b: &MPoly<F::Elem>) -> MPoly<F::Elem> {
        let m1 = self.field.neg(&self.field.one());
        MPoly {
            terms: self.merge(&a.terms, &b.terms, &m1, &Monomial::ONE),
        }
    }

    /// `a + c * m * b`.
    pub fn add_scaled(
        &self,
        a: &MPoly<F::Elem>,
        c: &F::Elem,
        m: &Monomial,
        b: &MPoly<F::Elem>,
    ) -> MPoly<F::Elem> {
        if self.field.is_zero(c) {
            return a.clone();
        }
        MPoly {
            terms: self.merge(&a.terms, &b.terms, c, m),
        }
    }

    pub fn scale(&self, c: &F::Elem, a: &MPoly<F::Elem>) -> MPoly<F::Elem> {
        if self.field.is_zero(c) {
            return MPoly::zero();
        }
        MPoly {
            terms: a.terms.iter().map(|(x, m)| (self.field.mul(c, x), *m)).collect(),
        }
    }

    pub fn mul(&self, a: &MPoly<F::Elem>, b: &MPoly<F::Elem>) -> MPoly<F::Elem> {
        let mut acc = MPoly::zero();
        for (c, m) in &b.terms {
            acc = self.add_scaled(&acc, c, m, a);
        }
        acc
    }

    pub fn neg(&self, a: &MPoly<F::Elem>) -> MPoly<F::Elem> {
        self.scale(&self.field.neg(&self.field.one()), a)
    }

    /// Scales to leading coefficient 1 (zero stays zero).
    pub fn monic(&self, a: &MPoly<F::Elem>) -> MPoly<F::Elem> {
        match a.lead() {
            None => MPoly::zero(),
            Some((c, _)) if self.field.is_one(c) => a.clone(),
            Some((c, _)) => self.scale(&self.field.inv(c).expect("nonzero lead"), a),
        }
    }

    pub fn eval(&self, a: &MPoly<F::Elem>, point: &[F::Elem]) -> F::Elem {
        assert_eq!(point.len(), self.nvars, "point has wrong dimension");
        let f = &self.field;
        a.terms.iter().fold(f.zero(), |acc, (c, m)| {
            let mut t = c.clone();
            for v in m.support() {
                for _ in 0..m.exp(v) {
                    t = f.mul(&t, &point[v]);
                }
            }
            f.add(&acc, &t)
        })
    }

    /// S-polynomial of two monic-or-not polynomials.
    pub fn s_poly(&self, a: &MPoly<F::Elem>, b: &MPoly<F::Elem>) -> MPoly<F::Elem> {
        let f = &self.field;
        let (ca, ma) = a.lead().expect("nonzero");
        let (cb, mb) = b.lead().expect("nonzero");
        let l = ma.lcm(mb);
        let ua = ma.quotient_of(&l);
        let ub = mb.quotient_of(&l);
        let left = self.add_scaled(&MPoly::zero(), &f.inv(ca).expect("nonzero"), &ua, a);
        let scale = f.neg(&f.inv(cb).expect("nonzero"));
        self.add_scaled(&left, &scale, &ub, b)
    }

    /// Remainder of multivariate division of `p` by `divisors`; every term
    /// of the result is irreducible. Counts reduction steps into `steps`.
    pub fn reduce_counted(
        &self,
        p: &MPoly<F::Elem>,
        divisors: &[&MPoly<F::Elem>],
        steps: &mut usize,
    ) -> MPoly<F::Elem> {
        let f = &self.field;
        let leads: Vec<(Monomial, u32, F::Elem)> = divisors
            .iter()
            .map(|g| {
                let (c, m) = g.lead().expect("zero divisor");
                (*m, m.support_mask(), f.inv(c).expect("nonzero"))
            })
            .collect();
        let mut rem: Vec<(F::Elem, Monomial)> = Vec::new();
        let mut cur = p.terms.clone();
        let mut start = 0;
        while start < cur.len() {
            let (c, m) = cur[start].clone();
            let mask = m.support_mask();
            let hit = leads
                .iter()
                .position(|(lm, lmask, _)| lmask & !mask == 0 && lm.divides(&m));
            match hit {
                Some(k) => {
                    let (lm, _, linv) = &leads[k];
                    let q = lm.quotient_of(&m);
                    let coef = f.neg(&f.mul(&c, linv));
                    // the leading terms cancel exactly; merge the tails
                    cur = self.merge(&cur[start + 1..], &divisors[k].terms[1..], &coef, &q);
                    start = 0;
                    *steps += 1;
                }
                None => {
                    rem.push((c, m));
                    start += 1;
                }
            }
        }
        MPoly { terms: rem }
    }

    pub fn normal_form(&self, p: &MPoly<F::Elem>, divisors: &[MPoly<F::Elem>]) -> MPoly<F::Elem> {
        let refs: Vec<&MPoly<F::Elem>> = divisors.iter().filter(|g| !g.is_zero()).collect();
        let mut steps = 0;
        self.reduce_counted(p, &refs, &mut steps)
    }

    pub fn to_json(&self, a: &MPoly<F::Elem>) -> Vec<(String, Vec<u32>)> {
        a.terms
            .iter()
            .map(|(c, m)| (self.field.to_bigint(c).to_string(), m.exponents(self.nvars)))
            .collect()
    }

    pub fn from_json(&self, terms: &[(String, Vec<u32>)]) -> Result<MPoly<F::Elem>> {
        let mut out = Vec::with_capacity(terms.len());
        for (c, e) in terms {
            if e.len() != self.nvars {
                return Err(Error::Schema(format!(
                    "exponent vector has {} entries, ring has {} variables",
                    e.len(),
                    self.nvars
                )));
            }
            let c: BigInt = c
                .parse()
                .map_err(|_| Error::Schema(format!("bad coefficient {c:?}")))?;
            if !self.field.is_canonical(&c) {
                return Err(Error::RingMismatch(format!("coefficient {c} not reduced")));
            }
            out.push((self.field.from_bigint(&c), Monomial::from_exponents(e)));
        }
        Ok(self.from_terms(out))
    }
}

/// Wire form of a polynomial system.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolySystemJson {
    pub ring: RingDescriptor,
    pub order: MonomialOrder,
    pub nvars: usize,
    pub polys: Vec<Vec<(String, Vec<u32>)>>,
}

impl PolySystemJson {
    pub fn encode<F: Field>(ring: &PolyRing<F>, polys: &[MPoly<F::Elem>]) -> Self {
        PolySystemJson {
            ring: ring.field().descriptor(),
            order: ring.order(),
            nvars: ring.nvars(),
            polys: polys.iter().map(|p| ring.to_json(p)).collect(),
        }
    }

    pub fn decode<F: Field>(&self, field: &F) -> Result<(PolyRing<F>, Vec<MPoly<F::Elem>>)> {
        if self.ring != field.descriptor() {
            return Err(Error::RingMismatch(format!(
                "expected {}, found {}",
                field.descriptor(),
                self.ring
            )));
        }
        if self.nvars > MAX_VARS {
            return Err(Error::Schema(format!("too many variables: {}", self.nvars)));
        }
        let ring = PolyRing::new(field.clone(), self.nvars, self.order);
        let polys = self
            .polys
            .iter()
            .map(|t| ring.from_json(t))
            .collect::<Result<Vec<_>>>()?;
        Ok((ring, polys))
    }
}
