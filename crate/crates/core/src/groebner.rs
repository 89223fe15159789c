//! Buchberger's algorithm, reduced bases, normal forms and elimination.
//!
//! The engine is generic over the coefficient [`Field`]; the descent code
//! runs it both over the ground field and over the rational function field
//! `k(Y)`.

use std::collections::{BTreeSet, HashSet};
use std::sync::Arc;

use crate::arith::Field;
use crate::error::{Error, Result};
use crate::poly::{reduce, Monomial, MonomialOrder, PolyRing, Polynomial};

/// A reduced Gröbner basis: monic, inter-reduced, sorted by leading monomial
/// (largest first) under the order of its ring.
#[derive(Debug, Clone)]
pub struct GroebnerBasis<F: Field> {
    ring: Arc<PolyRing<F>>,
    generators: Vec<Polynomial<F>>,
}

impl<F: Field> GroebnerBasis<F> {
    pub fn ring(&self) -> &Arc<PolyRing<F>> {
        &self.ring
    }

    pub fn order(&self) -> MonomialOrder {
        self.ring.order()
    }

    pub fn generators(&self) -> &[Polynomial<F>] {
        &self.generators
    }

    pub fn is_zero_ideal(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn is_unit_ideal(&self) -> bool {
        self.generators.len() == 1 && self.generators[0].is_constant()
    }

    /// Remainder of `f` modulo the ideal; zero exactly for ideal members.
    pub fn normal_form(&self, f: &Polynomial<F>) -> Result<Polynomial<F>> {
        let f = f.in_ring(&self.ring)?;
        Ok(reduce(&f, &self.generators))
    }

    pub fn contains(&self, f: &Polynomial<F>) -> Result<bool> {
        Ok(self.normal_form(f)?.is_zero())
    }

    /// Re-checks Buchberger's criterion: every S-polynomial of a pair of
    /// generators reduces to zero.
    pub fn s_pairs_reduce_to_zero(&self) -> bool {
        let g = &self.generators;
        (0..g.len()).all(|i| (i + 1..g.len()).all(|j| reduce(&spoly(&g[i], &g[j]), g).is_zero()))
    }

    /// Whether the basis is reduced: monic and no generator term divisible
    /// by another generator's leading monomial.
    pub fn is_reduced(&self) -> bool {
        let field = self.ring.field();
        let leads: Vec<&Monomial> = self
            .generators
            .iter()
            .filter_map(Polynomial::leading_monomial)
            .collect();
        self.generators.iter().enumerate().all(|(i, g)| {
            field.is_one(g.leading_coeff().unwrap())
                && g.terms()
                    .iter()
                    .all(|(m, _)| leads.iter().enumerate().all(|(j, l)| j == i || !l.divides(m)))
        })
    }
}

fn spoly<F: Field>(f: &Polynomial<F>, g: &Polynomial<F>) -> Polynomial<F> {
    let field = f.field();
    let (fm, fc) = f.leading_term().unwrap();
    let (gm, gc) = g.leading_term().unwrap();
    let lcm = fm.lcm(gm);
    let a = f.mul_term(&fm.quotient_of(&lcm), &field.inv(fc).unwrap());
    let b = g.mul_term(&gm.quotient_of(&lcm), &field.inv(gc).unwrap());
    &a - &b
}

/// S-polynomial `(L/LT(f))·f − (L/LT(g))·g` with `L = lcm(LM(f), LM(g))`.
pub fn s_polynomial<F: Field>(f: &Polynomial<F>, g: &Polynomial<F>, order: MonomialOrder) -> Result<Polynomial<F>> {
    if f.is_zero() || g.is_zero() {
        return Err(Error::usage("S-polynomial of the zero polynomial"));
    }
    let ring = ring_with_order(f.ring(), order)?;
    Ok(spoly(&f.in_ring(&ring)?, &g.in_ring(&ring)?))
}

fn ring_with_order<F: Field>(ring: &Arc<PolyRing<F>>, order: MonomialOrder) -> Result<Arc<PolyRing<F>>> {
    if ring.order() == order {
        Ok(ring.clone())
    } else {
        ring.with_order(order)
    }
}

// Pending pairs ordered by the normal strategy: lcm degree, then lcm
// exponents lexicographically, then indices.
type PairKey = (u64, Vec<u32>, usize, usize);

/// Reduced Gröbner basis of the ideal generated by `generators` in `ring`
/// under `order`. Zero generators are ignored.
pub fn buchberger<F: Field>(
    ring: &Arc<PolyRing<F>>,
    generators: &[Polynomial<F>],
    order: MonomialOrder,
) -> Result<GroebnerBasis<F>> {
    let ring = ring_with_order(ring, order)?;
    let mut basis: Vec<Polynomial<F>> = Vec::new();
    for g in generators {
        let g = g.in_ring(&ring)?;
        if !g.is_zero() {
            let g = g.monic();
            if !basis.contains(&g) {
                basis.push(g);
            }
        }
    }
    if basis.iter().any(Polynomial::is_constant) {
        return Ok(unit_basis(&ring));
    }

    let mut pending: BTreeSet<PairKey> = BTreeSet::new();
    let mut pending_ids: HashSet<(usize, usize)> = HashSet::new();
    let key = |basis: &[Polynomial<F>], i: usize, j: usize| -> PairKey {
        let l = basis[i]
            .leading_monomial()
            .unwrap()
            .lcm(basis[j].leading_monomial().unwrap());
        (l.degree(), l.exponents().to_vec(), i, j)
    };
    for j in 0..basis.len() {
        for i in 0..j {
            pending.insert(key(&basis, i, j));
            pending_ids.insert((i, j));
        }
    }

    while let Some(k) = pending.pop_first() {
        let (_, _, i, j) = k;
        pending_ids.remove(&(i, j));
        let (li, lj) = (
            basis[i].leading_monomial().unwrap(),
            basis[j].leading_monomial().unwrap(),
        );
        if li.is_coprime(lj) {
            continue;
        }
        let lcm = li.lcm(lj);
        let is_pending = |a: usize, b: usize| pending_ids.contains(&(a.min(b), a.max(b)));
        let chain = (0..basis.len()).any(|c| {
            c != i
                && c != j
                && basis[c].leading_monomial().unwrap().divides(&lcm)
                && !is_pending(i, c)
                && !is_pending(j, c)
        });
        if chain {
            continue;
        }
        let r = reduce(&spoly(&basis[i], &basis[j]), &basis);
        if r.is_zero() {
            continue;
        }
        let r = r.monic();
        if r.is_constant() {
            return Ok(unit_basis(&ring));
        }
        basis.push(r);
        let new = basis.len() - 1;
        for i in 0..new {
            pending.insert(key(&basis, i, new));
            pending_ids.insert((i, new));
        }
    }

    Ok(GroebnerBasis {
        generators: reduce_basis(basis),
        ring,
    })
}

fn unit_basis<F: Field>(ring: &Arc<PolyRing<F>>) -> GroebnerBasis<F> {
    GroebnerBasis {
        ring: ring.clone(),
        generators: vec![Polynomial::one(ring)],
    }
}

fn reduce_basis<F: Field>(basis: Vec<Polynomial<F>>) -> Vec<Polynomial<F>> {
    let mut minimal: Vec<Polynomial<F>> = Vec::new();
    for (i, g) in basis.iter().enumerate() {
        let lm = g.leading_monomial().unwrap();
        let redundant = basis.iter().enumerate().any(|(j, h)| {
            let hl = h.leading_monomial().unwrap();
            j != i && hl.divides(lm) && (hl != lm || j < i)
        });
        if !redundant {
            minimal.push(g.clone());
        }
    }
    for i in 0..minimal.len() {
        let others: Vec<Polynomial<F>> = minimal
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, g)| g.clone())
            .collect();
        minimal[i] = reduce(&minimal[i], &others).monic();
    }
    if let Some(first) = minimal.first() {
        let order = first.ring().order();
        minimal.sort_by(|a, b| order.cmp(b.leading_monomial().unwrap(), a.leading_monomial().unwrap()));
    }
    minimal
}

/// Normal form of `f` modulo `gb`.
pub fn normal_form<F: Field>(f: &Polynomial<F>, gb: &GroebnerBasis<F>) -> Result<Polynomial<F>> {
    gb.normal_form(f)
}

/// Generators of `ideal(generators) ∩ k[kept variables]`, returned in `ring`.
///
/// The eliminated variables are moved to the front of a block order; basis
/// elements free of them generate the elimination ideal.
pub fn elimination_ideal<F: Field>(
    ring: &Arc<PolyRing<F>>,
    generators: &[Polynomial<F>],
    eliminate: &[usize],
) -> Result<Vec<Polynomial<F>>> {
    let n = ring.nvars();
    if let Some(&bad) = eliminate.iter().find(|&&v| v >= n) {
        return Err(Error::usage(format!("variable index {bad} out of range")));
    }
    // perm[new] = old
    let mut perm: Vec<usize> = (0..n).filter(|v| eliminate.contains(v)).collect();
    let split = perm.len();
    perm.extend((0..n).filter(|v| !eliminate.contains(v)));
    let mut to_new = vec![0; n];
    for (new, &old) in perm.iter().enumerate() {
        to_new[old] = new;
    }
    let names: Vec<String> = perm.iter().map(|&old| ring.vars()[old].clone()).collect();
    let elim_ring = PolyRing::new(ring.field().clone(), names, MonomialOrder::elimination(split))?;
    let gens = generators
        .iter()
        .map(|g| {
            if !ring.same_space(g.ring()) {
                return Err(Error::RingMismatch("generator outside the ring".into()));
            }
            Ok(g.embed(&elim_ring, &to_new))
        })
        .collect::<Result<Vec<_>>>()?;
    let gb = buchberger(&elim_ring, &gens, elim_ring.order())?;
    Ok(gb
        .generators()
        .iter()
        .filter(|g| (0..split).all(|v| !g.uses_var(v)))
        .map(|g| g.embed(ring, &perm))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::FieldSpec;
    use crate::poly::Poly;

    fn ring(vars: &[&str], order: MonomialOrder) -> Arc<PolyRing<FieldSpec>> {
        PolyRing::new(FieldSpec::RATIONALS, vars.iter().copied(), order).unwrap()
    }

    #[test]
    fn s_polynomial_examples() {
        let r = ring(&["x", "y"], MonomialOrder::Lex);
        let (x, y) = (Poly::var(&r, 0), Poly::var(&r, 1));
        let one = Poly::one(&r);
        let f = &x.pow(2) - &y;
        let g = &(&x * &y) - &one;
        assert_eq!(s_polynomial(&f, &g, MonomialOrder::Lex).unwrap(), &x - &y.pow(2));
        assert!(s_polynomial(&f, &f, MonomialOrder::Lex).unwrap().is_zero());
        assert!(s_polynomial(&x.pow(2), &(&x * &y), MonomialOrder::Lex)
            .unwrap()
            .is_zero());
        assert!(s_polynomial(&f, &Poly::zero(&r), MonomialOrder::Lex).is_err());
    }

    #[test]
    fn twisted_cubic_basis() {
        let r = ring(&["x", "y", "z"], MonomialOrder::Lex);
        let (x, y, z) = (Poly::var(&r, 0), Poly::var(&r, 1), Poly::var(&r, 2));
        let gb = buchberger(&r, &[&x.pow(2) - &y, &x.pow(3) - &z], MonomialOrder::Lex).unwrap();
        let expected = vec![
            &x.pow(2) - &y,
            &(&x * &y) - &z,
            &(&x * &z) - &y.pow(2),
            &y.pow(3) - &z.pow(2),
        ];
        assert_eq!(gb.generators(), expected.as_slice());
        assert!(gb.s_pairs_reduce_to_zero());
        assert!(gb.is_reduced());
    }

    #[test]
    fn trivial_bases() {
        let r = ring(&["x", "y"], MonomialOrder::Lex);
        let (x, y) = (Poly::var(&r, 0), Poly::var(&r, 1));
        let gb = buchberger(&r, &[&x - &y], MonomialOrder::Lex).unwrap();
        assert_eq!(gb.generators(), &[&x - &y]);
        let unit = buchberger(
            &r,
            &[Poly::constant(&r, r.field().from_i64(3)), x.clone()],
            MonomialOrder::Lex,
        )
        .unwrap();
        assert!(unit.is_unit_ideal());
        let zero = buchberger(&r, &[Poly::zero(&r)], MonomialOrder::Lex).unwrap();
        assert!(zero.is_zero_ideal());
        assert_eq!(zero.normal_form(&x).unwrap(), x);
    }

    #[test]
    fn normal_forms() {
        let r = ring(&["x", "y"], MonomialOrder::Lex);
        let (x, y) = (Poly::var(&r, 0), Poly::var(&r, 1));
        let g = &x.pow(2) - &y;
        let gb = buchberger(&r, std::slice::from_ref(&g), MonomialOrder::Lex).unwrap();
        assert_eq!(normal_form(&x.pow(2), &gb).unwrap(), y);
        assert!(normal_form(&g, &gb).unwrap().is_zero());
    }

    #[test]
    fn elimination_examples() {
        let r = ring(&["x", "y", "u", "v"], MonomialOrder::Grevlex);
        let (x, y, u, v) = (Poly::var(&r, 0), Poly::var(&r, 1), Poly::var(&r, 2), Poly::var(&r, 3));
        let sym = elimination_ideal(&r, &[&u - &(&x + &y), &v - &(&x * &y)], &[0, 1]).unwrap();
        assert!(sym.is_empty());
        let diag = elimination_ideal(&r, &[&u - &x, &v - &x], &[0]).unwrap();
        assert_eq!(diag.len(), 1);
        assert_eq!(diag[0], &u - &v);

        let r = ring(&["x", "T", "Y"], MonomialOrder::Grevlex);
        let (x, t, yy) = (Poly::var(&r, 0), Poly::var(&r, 1), Poly::var(&r, 2));
        let e = elimination_ideal(&r, &[&t - &x, &yy - &x.pow(2)], &[0]).unwrap();
        assert_eq!(e.len(), 1);
        // generator is monic in grevlex: T^2 - Y
        assert_eq!(e[0], &t.pow(2) - &yy);
    }
}
