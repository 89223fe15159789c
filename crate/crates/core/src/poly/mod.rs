//! Sparse multivariate polynomials over an abstract [`Field`].
//!
//! A polynomial stores its terms sorted descending under the order of its
//! ring. Rings that differ only in their monomial order describe the same
//! space; [`Polynomial::in_ring`] moves a polynomial between them.

mod divide;
mod monomial;
mod order;

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

pub use divide::{divide, exact_quotient, reduce};
pub use monomial::Monomial;
pub use order::{BlockOrder, MonomialOrder};

use crate::arith::{Field, FieldSpec};
use crate::error::{Error, Result};

/// Variable names, coefficient field and monomial order.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyRing<F: Field> {
    vars: Vec<String>,
    field: F,
    order: MonomialOrder,
}

pub type Term<F> = (Monomial, <F as Field>::Elem);

/// Polynomial over a ground field.
pub type Poly = Polynomial<FieldSpec>;

impl<F: Field> PolyRing<F> {
    pub fn new<S: Into<String>>(
        field: F,
        vars: impl IntoIterator<Item = S>,
        order: MonomialOrder,
    ) -> Result<Arc<Self>> {
        let vars: Vec<String> = vars.into_iter().map(Into::into).collect();
        for (i, v) in vars.iter().enumerate() {
            if vars[..i].contains(v) {
                return Err(Error::usage(format!("duplicate variable `{v}`")));
            }
        }
        order.validate(vars.len())?;
        Ok(Arc::new(PolyRing { vars, field, order }))
    }

    pub fn with_order(&self, order: MonomialOrder) -> Result<Arc<Self>> {
        Self::new(self.field.clone(), self.vars.clone(), order)
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    /// Same variables and field; the order may differ.
    pub fn same_space(&self, other: &Self) -> bool {
        self.vars == other.vars && self.field == other.field
    }
}

/// A multivariate polynomial; terms sorted descending, no zero coefficients.
#[derive(Clone)]
pub struct Polynomial<F: Field> {
    ring: Arc<PolyRing<F>>,
    terms: Vec<Term<F>>,
}

fn check_ring<F: Field>(a: &Arc<PolyRing<F>>, b: &Arc<PolyRing<F>>) -> Result<()> {
    if Arc::ptr_eq(a, b) || a == b {
        Ok(())
    } else {
        Err(Error::RingMismatch(format!(
            "{:?} over {} vs {:?} over {}",
            a.vars,
            a.field.describe(),
            b.vars,
            b.field.describe()
        )))
    }
}

impl<F: Field> Polynomial<F> {
    pub fn zero(ring: &Arc<PolyRing<F>>) -> Self {
        Polynomial {
            ring: ring.clone(),
            terms: Vec::new(),
        }
    }

    pub fn one(ring: &Arc<PolyRing<F>>) -> Self {
        Self::constant(ring, ring.field.one())
    }

    pub fn constant(ring: &Arc<PolyRing<F>>, c: F::Elem) -> Self {
        Self::monomial(ring, Monomial::one(ring.nvars()), c)
    }

    pub fn monomial(ring: &Arc<PolyRing<F>>, m: Monomial, c: F::Elem) -> Self {
        let terms = if ring.field.is_zero(&c) {
            Vec::new()
        } else {
            vec![(m, c)]
        };
        Polynomial {
            ring: ring.clone(),
            terms,
        }
    }

    pub fn var(ring: &Arc<PolyRing<F>>, index: usize) -> Self {
        Self::monomial(ring, Monomial::var(ring.nvars(), index, 1), ring.field.one())
    }

    /// Builds a polynomial from arbitrary terms, combining duplicates.
    pub fn from_terms(ring: &Arc<PolyRing<F>>, mut terms: Vec<Term<F>>) -> Self {
        let order = ring.order;
        terms.sort_by(|a, b| order.cmp(&b.0, &a.0));
        let field = &ring.field;
        let mut out: Vec<Term<F>> = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            match out.last_mut() {
                Some((lm, lc)) if *lm == m => *lc = field.add(lc, &c),
                _ => out.push((m, c)),
            }
        }
        out.retain(|(_, c)| !field.is_zero(c));
        Polynomial {
            ring: ring.clone(),
            terms: out,
        }
    }

    /// Terms already sorted and combined; used by hot paths.
    pub(crate) fn from_sorted(ring: &Arc<PolyRing<F>>, terms: Vec<Term<F>>) -> Self {
        Polynomial {
            ring: ring.clone(),
            terms,
        }
    }

    pub fn ring(&self) -> &Arc<PolyRing<F>> {
        &self.ring
    }

    pub fn field(&self) -> &F {
        &self.ring.field
    }

    pub fn terms(&self) -> &[Term<F>] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<Term<F>> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.is_one())
    }

    /// The scalar value of a constant polynomial.
    pub fn constant_value(&self) -> Option<F::Elem> {
        match self.terms.as_slice() {
            [] => Some(self.ring.field.zero()),
            [(m, c)] if m.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    pub fn leading_term(&self) -> Option<&Term<F>> {
        self.terms.first()
    }

    pub fn leading_monomial(&self) -> Option<&Monomial> {
        self.terms.first().map(|t| &t.0)
    }

    pub fn leading_coeff(&self) -> Option<&F::Elem> {
        self.terms.first().map(|t| &t.1)
    }

    /// Leading term with respect to an order other than the ring's.
    pub fn leading_term_under(&self, order: MonomialOrder) -> Option<&Term<F>> {
        if order == self.ring.order {
            return self.terms.first();
        }
        self.terms.iter().max_by(|a, b| order.cmp(&a.0, &b.0))
    }

    pub fn total_degree(&self) -> Option<u64> {
        self.terms.iter().map(|(m, _)| m.degree()).max()
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.iter().map(|(m, _)| m.exponents()[var]).max().unwrap_or(0)
    }

    pub fn uses_var(&self, var: usize) -> bool {
        self.terms.iter().any(|(m, _)| m.exponents()[var] > 0)
    }

    pub fn coeff_of(&self, m: &Monomial) -> F::Elem {
        self.terms
            .iter()
            .find(|(tm, _)| tm == m)
            .map(|(_, c)| c.clone())
            .unwrap_or_else(|| self.ring.field.zero())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        check_ring(&self.ring, &other.ring)?;
        Ok(self.merge(other, false))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        check_ring(&self.ring, &other.ring)?;
        Ok(self.merge(other, true))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        check_ring(&self.ring, &other.ring)?;
        Ok(self.mul_unchecked(other))
    }

    fn merge(&self, other: &Self, negate: bool) -> Self {
        let field = &self.ring.field;
        let order = self.ring.order;
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.terms, &other.terms);
        let take_b = |c: &F::Elem| if negate { field.neg(c) } else { c.clone() };
        while i < a.len() && j < b.len() {
            match order.cmp(&a[i].0, &b[j].0) {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push((b[j].0.clone(), take_b(&b[j].1)));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if negate {
                        field.sub(&a[i].1, &b[j].1)
                    } else {
                        field.add(&a[i].1, &b[j].1)
                    };
                    if !field.is_zero(&c) {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(a[i..].iter().cloned());
        out.extend(b[j..].iter().map(|(m, c)| (m.clone(), take_b(c))));
        Polynomial::from_sorted(&self.ring, out)
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Polynomial::zero(&self.ring);
        }
        if self.terms.len() < other.terms.len() {
            return other.mul_unchecked(self);
        }
        let field = &self.ring.field;
        let mut acc = Polynomial::zero(&self.ring);
        for (m, c) in &other.terms {
            let part: Vec<Term<F>> = self
                .terms
                .iter()
                .filter_map(|(tm, tc)| {
                    let prod = field.mul(tc, c);
                    (!field.is_zero(&prod)).then(|| (tm.mul(m), prod))
                })
                .collect();
            acc = acc.merge(&Polynomial::from_sorted(&self.ring, part), false);
        }
        acc
    }

    pub fn scale(&self, c: &F::Elem) -> Self {
        let field = &self.ring.field;
        if field.is_zero(c) {
            return Polynomial::zero(&self.ring);
        }
        let terms = self
            .terms
            .iter()
            .filter_map(|(m, tc)| {
                let v = field.mul(tc, c);
                (!field.is_zero(&v)).then(|| (m.clone(), v))
            })
            .collect();
        Polynomial::from_sorted(&self.ring, terms)
    }

    /// `c * m * self`; multiplicativity of the order keeps terms sorted.
    pub fn mul_term(&self, m: &Monomial, c: &F::Elem) -> Self {
        let field = &self.ring.field;
        if field.is_zero(c) {
            return Polynomial::zero(&self.ring);
        }
        let terms = self
            .terms
            .iter()
            .filter_map(|(tm, tc)| {
                let v = field.mul(tc, c);
                (!field.is_zero(&v)).then(|| (tm.mul(m), v))
            })
            .collect();
        Polynomial::from_sorted(&self.ring, terms)
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Polynomial::one(&self.ring);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_unchecked(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_unchecked(&base);
            }
        }
        acc
    }

    /// Partial derivative with respect to variable `var`.
    pub fn derivative(&self, var: usize) -> Self {
        let field = &self.ring.field;
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.exponents()[var] > 0)
            .map(|(m, c)| {
                let mut e = m.exponents().to_vec();
                let k = e[var];
                e[var] -= 1;
                (Monomial::new(e), field.mul(c, &field.from_i64(k as i64)))
            })
            .collect();
        Polynomial::from_terms(&self.ring, terms)
    }

    /// Divides by the leading coefficient (under the ring order).
    pub fn monic(&self) -> Self {
        match self.leading_coeff() {
            None => self.clone(),
            Some(lc) if self.ring.field.is_one(lc) => self.clone(),
            Some(lc) => {
                let inv = self.ring.field.inv(lc).expect("nonzero leading coefficient");
                self.scale(&inv)
            }
        }
    }

    /// Same polynomial viewed in a ring with identical variables and field.
    pub fn in_ring(&self, ring: &Arc<PolyRing<F>>) -> Result<Self> {
        if Arc::ptr_eq(&self.ring, ring) {
            return Ok(self.clone());
        }
        if !self.ring.same_space(ring) {
            return Err(Error::RingMismatch(format!(
                "cannot view {:?} over {} in {:?} over {}",
                self.ring.vars,
                self.ring.field.describe(),
                ring.vars,
                ring.field.describe()
            )));
        }
        if self.ring.order == ring.order {
            return Ok(Polynomial::from_sorted(ring, self.terms.clone()));
        }
        Ok(Polynomial::from_terms(ring, self.terms.clone()))
    }

    /// Renames variables into another ring over the same field:
    /// variable `i` of `self` becomes variable `var_map[i]` of `ring`.
    pub fn embed(&self, ring: &Arc<PolyRing<F>>, var_map: &[usize]) -> Self {
        let n = ring.nvars();
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut e = vec![0; n];
                for (i, &x) in m.exponents().iter().enumerate() {
                    e[var_map[i]] += x;
                }
                (Monomial::new(e), c.clone())
            })
            .collect();
        Polynomial::from_terms(ring, terms)
    }

    /// Changes the coefficient field through `f`, keeping exponent vectors.
    pub fn map_coeffs<G: Field>(&self, ring: &Arc<PolyRing<G>>, f: impl Fn(&F::Elem) -> G::Elem) -> Polynomial<G> {
        let terms = self.terms.iter().map(|(m, c)| (m.clone(), f(c))).collect();
        Polynomial::from_terms(ring, terms)
    }

    /// Substitutes `images[i]` for variable `i`.
    pub fn compose(&self, images: &[Polynomial<F>]) -> Result<Polynomial<F>> {
        if images.len() != self.ring.nvars() {
            return Err(Error::usage(format!(
                "composition needs {} images, got {}",
                self.ring.nvars(),
                images.len()
            )));
        }
        let Some(first) = images.first() else {
            // no variables: a constant
            return Err(Error::usage("composition in a ring without variables"));
        };
        let target = first.ring.clone();
        for img in images {
            check_ring(&target, &img.ring)?;
        }
        let mut powers: Vec<Vec<Polynomial<F>>> = images
            .iter()
            .map(|p| vec![Polynomial::one(&target), p.clone()])
            .collect();
        let mut acc = Polynomial::zero(&target);
        for (m, c) in &self.terms {
            let mut t = Polynomial::constant(&target, c.clone());
            for (i, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let e = e as usize;
                while powers[i].len() <= e {
                    let next = powers[i].last().unwrap().mul_unchecked(&images[i]);
                    powers[i].push(next);
                }
                t = t.mul_unchecked(&powers[i][e]);
            }
            acc = acc.merge(&t, false);
        }
        Ok(acc)
    }

    /// Evaluates at a point given as one field element per variable.
    pub fn eval(&self, point: &[F::Elem]) -> F::Elem {
        let field = &self.ring.field;
        let mut acc = field.zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(m.exponents()) {
                if e > 0 {
                    t = field.mul(&t, &field.pow(x, e as u64));
                }
            }
            acc = field.add(&acc, &t);
        }
        acc
    }

    /// Text rendering with terms descending under lex.
    pub fn render(&self) -> String {
        let mut sorted: Vec<&Term<F>> = self.terms.iter().collect();
        if self.ring.order != MonomialOrder::Lex {
            sorted.sort_by(|a, b| MonomialOrder::Lex.cmp(&b.0, &a.0));
        }
        render_terms(&self.ring.field, &self.ring.vars, sorted.into_iter())
    }
}

/// Renders `c * x^e * ...` terms joined by ` + ` / ` - `.
pub(crate) fn render_terms<'a, F: Field + 'a>(
    field: &F,
    vars: &[String],
    terms: impl Iterator<Item = &'a Term<F>>,
) -> String {
    let mut out = String::new();
    for (k, (m, c)) in terms.enumerate() {
        let ct = field.coeff_text(c);
        let mono = render_monomial(vars, m);
        if k == 0 {
            if ct.negative {
                out.push('-');
            }
        } else {
            out.push_str(if ct.negative { " - " } else { " + " });
        }
        match (mono.is_empty(), ct.unit) {
            (true, _) => out.push_str(&ct.text),
            (false, true) => out.push_str(&mono),
            (false, false) => {
                out.push_str(&ct.text);
                out.push('*');
                out.push_str(&mono);
            }
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

pub(crate) fn render_monomial(vars: &[String], m: &Monomial) -> String {
    let mut parts = Vec::new();
    for (v, &e) in vars.iter().zip(m.exponents()) {
        match e {
            0 => {}
            1 => parts.push(v.clone()),
            _ => parts.push(format!("{v}^{e}")),
        }
    }
    parts.join("*")
}

impl<F: Field> PartialEq for Polynomial<F> {
    fn eq(&self, other: &Self) -> bool {
        if !(Arc::ptr_eq(&self.ring, &other.ring) || self.ring.same_space(&other.ring)) {
            return false;
        }
        if self.ring.order == other.ring.order {
            return self.terms == other.terms;
        }
        match other.in_ring(&self.ring) {
            Ok(o) => o.terms == self.terms,
            Err(_) => false,
        }
    }
}

impl<F: Field> fmt::Debug for Polynomial<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({})", self.render())
    }
}

impl<F: Field> fmt::Display for Polynomial<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl<'a, F: Field> $tr<&'a Polynomial<F>> for &'a Polynomial<F> {
            type Output = Polynomial<F>;
            fn $method(self, rhs: &'a Polynomial<F>) -> Polynomial<F> {
                self.$checked(rhs).expect("polynomials from different rings")
            }
        }
        impl<F: Field> $tr<Polynomial<F>> for Polynomial<F> {
            type Output = Polynomial<F>;
            fn $method(self, rhs: Polynomial<F>) -> Polynomial<F> {
                (&self).$method(&rhs)
            }
        }
    };
}

binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);

impl<F: Field> Neg for &Polynomial<F> {
    type Output = Polynomial<F>;
    fn neg(self) -> Polynomial<F> {
        let field = &self.ring.field;
        let terms = self.terms.iter().map(|(m, c)| (m.clone(), field.neg(c))).collect();
        Polynomial::from_sorted(&self.ring, terms)
    }
}

impl<F: Field> Neg for Polynomial<F> {
    type Output = Polynomial<F>;
    fn neg(self) -> Polynomial<F> {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(p: u64, vars: &[&str]) -> Arc<PolyRing<FieldSpec>> {
        PolyRing::new(FieldSpec::new(p).unwrap(), vars.iter().copied(), MonomialOrder::Grevlex).unwrap()
    }

    #[test]
    fn derivatives() {
        let r = ring(0, &["x", "y"]);
        let (x, y) = (Poly::var(&r, 0), Poly::var(&r, 1));
        let p = &(&x.pow(3) * &y) + &y.pow(2);
        assert_eq!(p.derivative(0).render(), "3*x^2*y");
        assert_eq!(p.derivative(1).render(), "x^3 + 2*y");
        let r5 = ring(5, &["x"]);
        assert!(Poly::var(&r5, 0).pow(5).derivative(0).is_zero());
    }

    #[test]
    fn difference_of_squares() {
        let r = ring(0, &["x", "y"]);
        let (x, y) = (Poly::var(&r, 0), Poly::var(&r, 1));
        let prod = &(&x + &y) * &(&x - &y);
        assert_eq!(prod, &(&x * &x) - &(&y * &y));
        assert_eq!(prod.render(), "x^2 - y^2");
        assert_eq!(&prod + &Poly::zero(&r), prod);
    }

    #[test]
    fn frobenius_is_additive_in_char_two() {
        let r = ring(2, &["x", "y"]);
        let (x, y) = (Poly::var(&r, 0), Poly::var(&r, 1));
        assert_eq!((&x + &y).pow(2), &x.pow(2) + &y.pow(2));
    }

    #[test]
    fn ring_mismatch_is_an_error() {
        let r1 = ring(0, &["x", "y"]);
        let r2 = ring(0, &["x", "z"]);
        let r3 = ring(5, &["x", "y"]);
        assert!(Poly::var(&r1, 0).checked_add(&Poly::var(&r2, 0)).is_err());
        assert!(Poly::var(&r1, 0).checked_mul(&Poly::var(&r3, 0)).is_err());
        assert!(PolyRing::new(FieldSpec::RATIONALS, ["x", "x"], MonomialOrder::Lex).is_err());
    }

    #[test]
    fn rendering_uses_lex_and_signs() {
        let r = ring(0, &["x", "y"]);
        let k = *r.field();
        let (x, y) = (Poly::var(&r, 0), Poly::var(&r, 1));
        let half = k.div(&k.one(), &k.from_i64(2)).unwrap();
        let p = &(&(&x.pow(2) * &y) - &y.scale(&k.from_i64(3))) + &Poly::constant(&r, half);
        assert_eq!(p.render(), "x^2*y - 3*y + 1/2");
        assert_eq!((-&x).render(), "-x");
        assert_eq!(Poly::zero(&r).render(), "0");
        let r5 = ring(5, &["x"]);
        assert_eq!((-&Poly::var(&r5, 0)).render(), "4*x");
    }

    #[test]
    fn compose_and_eval() {
        let r = ring(0, &["x", "y"]);
        let s = ring(0, &["t"]);
        let k = *r.field();
        let t = Poly::var(&s, 0);
        let (x, y) = (Poly::var(&r, 0), Poly::var(&r, 1));
        let p = &(&x * &y) + &x;
        let c = p.compose(&[t.pow(2), &t + &Poly::one(&s)]).unwrap();
        assert_eq!(c.render(), "t^3 + 2*t^2");
        assert_eq!(p.eval(&[k.from_i64(2), k.from_i64(3)]), k.from_i64(8));
    }

    #[test]
    fn reorder_preserves_value() {
        let r = ring(0, &["x", "y", "z"]);
        let lex = r.with_order(MonomialOrder::Lex).unwrap();
        let p = &(&Poly::var(&r, 2).pow(3) + &Poly::var(&r, 0)) - &Poly::var(&r, 1).pow(2);
        let q = p.in_ring(&lex).unwrap();
        assert_eq!(q.leading_monomial().unwrap().exponents(), &[1, 0, 0]);
        assert_eq!(p.leading_monomial().unwrap().exponents(), &[0, 0, 3]);
        assert_eq!(p, q);
    }
}
