use std::cmp::Ordering;
use std::sync::Arc;

use super::{Monomial, MonomialOrder, PolyRing, Polynomial, Term};
use crate::arith::Field;
use crate::error::{Error, Result};

/// `p - c * m * g` where `p` and `g` are sorted descending under `order`.
fn sub_scaled<F: Field>(
    field: &F,
    order: MonomialOrder,
    p: &[Term<F>],
    c: &F::Elem,
    m: &Monomial,
    g: &[Term<F>],
) -> Vec<Term<F>> {
    let mut out = Vec::with_capacity(p.len() + g.len());
    let (mut i, mut j) = (0, 0);
    let mut pending: Option<Term<F>> = None;
    while i < p.len() || j < g.len() || pending.is_some() {
        if pending.is_none() && j < g.len() {
            let (gm, gc) = &g[j];
            pending = Some((gm.mul(m), field.neg(&field.mul(gc, c))));
            j += 1;
        }
        match (&pending, p.get(i)) {
            (None, Some(t)) => {
                out.push(t.clone());
                i += 1;
            }
            (Some(_), None) => out.push(pending.take().unwrap()),
            (Some((sm, sc)), Some((pm, pc))) => match order.cmp(pm, sm) {
                Ordering::Greater => {
                    out.push((pm.clone(), pc.clone()));
                    i += 1;
                }
                Ordering::Less => out.push(pending.take().unwrap()),
                Ordering::Equal => {
                    let v = field.add(pc, sc);
                    if !field.is_zero(&v) {
                        out.push((pm.clone(), v));
                    }
                    pending = None;
                    i += 1;
                }
            },
            (None, None) => unreachable!(),
        }
    }
    out.retain(|(_, c)| !field.is_zero(c));
    out
}

fn divide_in_ring<F: Field>(
    ring: &Arc<PolyRing<F>>,
    f: &Polynomial<F>,
    divisors: &[Polynomial<F>],
    want_quotients: bool,
) -> (Vec<Vec<Term<F>>>, Vec<Term<F>>) {
    let field = ring.field();
    let order = ring.order();
    let leads: Vec<(Monomial, F::Elem)> = divisors
        .iter()
        .map(|d| {
            let (m, c) = d.leading_term().expect("nonzero divisor");
            (m.clone(), field.inv(c).expect("nonzero leading coefficient"))
        })
        .collect();
    let mut quotients: Vec<Vec<Term<F>>> = vec![Vec::new(); divisors.len()];
    let mut remainder = Vec::new();
    let mut p: Vec<Term<F>> = f.terms().to_vec();
    let mut start = 0;
    while start < p.len() {
        let (lm, lc) = &p[start];
        let hit = leads.iter().position(|(dm, _)| dm.divides(lm));
        match hit {
            Some(i) => {
                let m = leads[i].0.quotient_of(lm);
                let c = field.mul(lc, &leads[i].1);
                p = sub_scaled(field, order, &p[start..], &c, &m, divisors[i].terms());
                start = 0;
                if want_quotients {
                    // quotient terms are produced in strictly descending order
                    quotients[i].push((m, c));
                }
            }
            None => {
                remainder.push(p[start].clone());
                start += 1;
            }
        }
    }
    (quotients, remainder)
}

/// Multivariate division of `f` by an ordered list of divisors under `order`.
///
/// At each step the first divisor whose leading monomial divides the current
/// leading monomial is used. Returns the quotients and the remainder, all in
/// a ring carrying `order`.
pub fn divide<F: Field>(
    f: &Polynomial<F>,
    divisors: &[Polynomial<F>],
    order: MonomialOrder,
) -> Result<(Vec<Polynomial<F>>, Polynomial<F>)> {
    if divisors.iter().any(Polynomial::is_zero) {
        return Err(Error::usage("zero polynomial in divisor list"));
    }
    let ring = if f.ring().order() == order {
        f.ring().clone()
    } else {
        f.ring().with_order(order)?
    };
    let f = f.in_ring(&ring)?;
    let divisors = divisors.iter().map(|d| d.in_ring(&ring)).collect::<Result<Vec<_>>>()?;
    let (q, r) = divide_in_ring(&ring, &f, &divisors, true);
    Ok((
        q.into_iter().map(|t| Polynomial::from_sorted(&ring, t)).collect(),
        Polynomial::from_sorted(&ring, r),
    ))
}

/// Full reduction of `f` modulo `basis`; everything must share `f`'s ring.
pub fn reduce<F: Field>(f: &Polynomial<F>, basis: &[Polynomial<F>]) -> Polynomial<F> {
    let (_, r) = divide_in_ring(f.ring(), f, basis, false);
    Polynomial::from_sorted(f.ring(), r)
}

/// Exact quotient `a / b`, or `None` when `b` does not divide `a`.
pub fn exact_quotient<F: Field>(a: &Polynomial<F>, b: &Polynomial<F>) -> Option<Polynomial<F>> {
    if b.is_zero() {
        return None;
    }
    if let Some(c) = b.constant_value() {
        return Some(a.scale(&a.field().inv(&c).ok()?));
    }
    let (q, r) = divide_in_ring(a.ring(), a, std::slice::from_ref(b), true);
    r.is_empty()
        .then(|| Polynomial::from_sorted(a.ring(), q.into_iter().next().unwrap()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::FieldSpec;
    use crate::poly::Poly;

    fn xy() -> Arc<PolyRing<FieldSpec>> {
        PolyRing::new(FieldSpec::RATIONALS, ["x", "y"], MonomialOrder::Lex).unwrap()
    }

    #[test]
    fn single_step_division() {
        let r = xy();
        let (x, y) = (Poly::var(&r, 0), Poly::var(&r, 1));
        let d = &x.pow(2) - &y;
        let (q, rem) = divide(&(&x.pow(2) * &y), std::slice::from_ref(&d), MonomialOrder::Lex).unwrap();
        assert_eq!(q[0], y);
        assert_eq!(rem, y.pow(2));
        let (_, rem) = divide(&d, std::slice::from_ref(&d), MonomialOrder::Lex).unwrap();
        assert!(rem.is_zero());
        let (q, rem) = divide(&y, std::slice::from_ref(&d), MonomialOrder::Lex).unwrap();
        assert!(q[0].is_zero());
        assert_eq!(rem, y);
    }

    #[test]
    fn zero_divisor_rejected() {
        let r = xy();
        assert!(divide(&Poly::var(&r, 0), &[Poly::zero(&r)], MonomialOrder::Lex).is_err());
    }

    #[test]
    fn exact_quotients() {
        let r = xy();
        let (x, y) = (Poly::var(&r, 0), Poly::var(&r, 1));
        let a = &x.pow(2) - &y.pow(2);
        assert_eq!(exact_quotient(&a, &(&x - &y)).unwrap(), &x + &y);
        assert!(exact_quotient(&a, &(&x - &y.pow(2))).is_none());
    }
}
