//! The rational function field `k(Y1..Ym)`.
//!
//! Fractions are kept normalized after every operation: numerator and
//! denominator coprime, denominator monic under grevlex. Multivariate gcds
//! come from a recursive content / primitive-part decomposition with
//! subresultant remainder sequences in a main variable.

use std::fmt;
use std::sync::Arc;

use crate::arith::{CoeffText, Field, FieldElement, FieldSpec};
use crate::error::{Error, Result};
use crate::poly::{exact_quotient, Monomial, MonomialOrder, Poly, PolyRing, Polynomial};

/// Monic normalization with respect to the grevlex leading term.
pub fn monic_grevlex<F: Field>(p: &Polynomial<F>) -> Polynomial<F> {
    match p.leading_term_under(MonomialOrder::Grevlex) {
        None => p.clone(),
        Some((_, c)) if p.field().is_one(c) => p.clone(),
        Some((_, c)) => p.scale(&p.field().inv(c).expect("nonzero")),
    }
}

/// Greatest common divisor, monic under grevlex; `gcd(a, 0) = monic(a)`.
pub fn multivariate_gcd<F: Field>(a: &Polynomial<F>, b: &Polynomial<F>) -> Result<Polynomial<F>> {
    if !a.ring().same_space(b.ring()) {
        return Err(Error::RingMismatch("gcd of polynomials from different rings".into()));
    }
    let b = b.in_ring(a.ring())?;
    Ok(monic_grevlex(&gcd_rec(a, &b)))
}

fn gcd_rec<F: Field>(a: &Polynomial<F>, b: &Polynomial<F>) -> Polynomial<F> {
    if a.is_zero() {
        return b.clone();
    }
    if b.is_zero() {
        return a.clone();
    }
    if a.is_constant() || b.is_constant() {
        return Polynomial::one(a.ring());
    }
    if a.len() == 1 {
        return monomial_gcd(&a.terms()[0].0, b);
    }
    if b.len() == 1 {
        return monomial_gcd(&b.terms()[0].0, a);
    }
    let n = a.ring().nvars();
    // a variable present in only one argument cannot occur in the gcd
    for v in 0..n {
        match (a.uses_var(v), b.uses_var(v)) {
            (true, false) => return gcd_rec(&content(a, v), b),
            (false, true) => return gcd_rec(a, &content(b, v)),
            _ => {}
        }
    }
    let main = (0..n)
        .filter(|&v| a.uses_var(v))
        .min_by_key(|&v| (a.degree_in(v).max(b.degree_in(v)), v))
        .expect("non-constant polynomial uses a variable");
    let (ca, cb) = (content(a, main), content(b, main));
    let pa = exact_quotient(a, &ca).expect("content divides");
    let pb = exact_quotient(b, &cb).expect("content divides");
    let c = gcd_rec(&ca, &cb);
    let g = prs_gcd(&pa, &pb, main);
    &c * &g
}

fn monomial_gcd<F: Field>(m: &Monomial, p: &Polynomial<F>) -> Polynomial<F> {
    let mut e: Vec<u32> = m.exponents().to_vec();
    for (tm, _) in p.terms() {
        for (x, &y) in e.iter_mut().zip(tm.exponents()) {
            *x = (*x).min(y);
        }
    }
    Polynomial::monomial(p.ring(), Monomial::new(e), p.field().one())
}

/// Coefficients of `p` as a polynomial in variable `v`; index = degree.
fn coeffs_in<F: Field>(p: &Polynomial<F>, v: usize) -> Vec<Polynomial<F>> {
    let d = p.degree_in(v) as usize;
    let mut buckets: Vec<Vec<(Monomial, F::Elem)>> = vec![Vec::new(); d + 1];
    for (m, c) in p.terms() {
        let k = m.exponents()[v] as usize;
        let mut e = m.exponents().to_vec();
        e[v] = 0;
        buckets[k].push((Monomial::new(e), c.clone()));
    }
    buckets
        .into_iter()
        .map(|t| Polynomial::from_terms(p.ring(), t))
        .collect()
}

fn from_coeffs<F: Field>(ring: &Arc<PolyRing<F>>, v: usize, coeffs: &[Polynomial<F>]) -> Polynomial<F> {
    let n = ring.nvars();
    let mut acc = Polynomial::zero(ring);
    for (k, c) in coeffs.iter().enumerate() {
        if !c.is_zero() {
            acc = &acc + &c.mul_term(&Monomial::var(n, v, k as u32), &ring.field().one());
        }
    }
    acc
}

/// Content of `p` with respect to `v`: gcd of its coefficients.
fn content<F: Field>(p: &Polynomial<F>, v: usize) -> Polynomial<F> {
    let mut g = Polynomial::zero(p.ring());
    for c in coeffs_in(p, v).iter().filter(|c| !c.is_zero()) {
        g = gcd_rec(&g, c);
        if g.is_constant() {
            return Polynomial::one(p.ring());
        }
    }
    monic_grevlex(&g)
}

type Upoly<F> = Vec<Polynomial<F>>;

fn trim<F: Field>(mut a: Upoly<F>) -> Upoly<F> {
    while a.last().is_some_and(Polynomial::is_zero) {
        a.pop();
    }
    a
}

fn udeg<F: Field>(a: &Upoly<F>) -> usize {
    a.len() - 1
}

/// Pseudo-remainder `lc(b)^(deg a - deg b + 1) a mod b`.
fn prem<F: Field>(a: &Upoly<F>, b: &Upoly<F>) -> Upoly<F> {
    let db = udeg(b);
    let lb = b.last().unwrap();
    let mut r = a.clone();
    let mut e = udeg(a) + 1 - db;
    while !r.is_empty() && udeg(&r) >= db {
        let shift = udeg(&r) - db;
        let lr = r.last().unwrap().clone();
        let mut next: Upoly<F> = r.iter().map(|c| c * lb).collect();
        for (k, bc) in b.iter().enumerate() {
            next[k + shift] = &next[k + shift] - &(&lr * bc);
        }
        r = trim(next);
        e -= 1;
    }
    if e > 0 {
        let s = lb.pow(e as u64);
        r = r.iter().map(|c| c * &s).collect();
    }
    r
}

fn exact_div_all<F: Field>(a: &Upoly<F>, d: &Polynomial<F>) -> Upoly<F> {
    a.iter()
        .map(|c| exact_quotient(c, d).expect("subresultant division is exact"))
        .collect()
}

/// Gcd of two polynomials primitive in `v`, by the subresultant PRS.
fn prs_gcd<F: Field>(a: &Polynomial<F>, b: &Polynomial<F>, v: usize) -> Polynomial<F> {
    let ring = a.ring();
    let (mut x, mut y) = (coeffs_in(a, v), coeffs_in(b, v));
    if x.len() < y.len() {
        std::mem::swap(&mut x, &mut y);
    }
    let univariate = x.iter().chain(&y).all(Polynomial::is_constant);
    if univariate {
        return euclid(ring, v, x, y);
    }
    let mut g = Polynomial::one(ring);
    let mut h = Polynomial::one(ring);
    loop {
        let delta = udeg(&x) - udeg(&y);
        let r = prem(&x, &y);
        if r.is_empty() {
            break;
        }
        if udeg(&r) == 0 {
            return Polynomial::one(ring);
        }
        x = y;
        y = exact_div_all(&r, &(&g * &h.pow(delta as u64)));
        g = x.last().unwrap().clone();
        if delta > 0 {
            h = exact_quotient(&g.pow(delta as u64), &h.pow(delta as u64 - 1)).expect("exact");
        }
    }
    let p = from_coeffs(ring, v, &y);
    exact_quotient(&p, &content(&p, v)).expect("content divides")
}

fn euclid<F: Field>(ring: &Arc<PolyRing<F>>, v: usize, mut x: Upoly<F>, mut y: Upoly<F>) -> Polynomial<F> {
    let field = ring.field();
    let scalar = |p: &Polynomial<F>| p.constant_value().unwrap();
    while !y.is_empty() {
        // x mod y over the field
        let inv = field.inv(&scalar(y.last().unwrap())).unwrap();
        while !x.is_empty() && x.len() >= y.len() {
            let shift = x.len() - y.len();
            let q = field.mul(&scalar(x.last().unwrap()), &inv);
            for (k, yc) in y.iter().enumerate() {
                let v = field.sub(&scalar(&x[k + shift]), &field.mul(&q, &scalar(yc)));
                x[k + shift] = Polynomial::constant(ring, v);
            }
            x = trim(x);
        }
        std::mem::swap(&mut x, &mut y);
    }
    from_coeffs(ring, v, &x)
}

/// A normalized element of `k(Y)`.
#[derive(Clone, PartialEq)]
pub struct RationalFunction {
    num: Poly,
    den: Poly,
}

impl RationalFunction {
    /// `num / den`, normalized. Fails when `den` is zero.
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let den = den.in_ring(num.ring())?;
        Ok(Self::normalized(num, den))
    }

    fn normalized(num: Poly, den: Poly) -> Self {
        if num.is_zero() {
            return Self::from_poly(num);
        }
        let (num, den) = if den.is_constant() {
            (num, den)
        } else {
            let g = gcd_rec(&num, &den);
            if g.is_constant() {
                (num, den)
            } else {
                (exact_quotient(&num, &g).unwrap(), exact_quotient(&den, &g).unwrap())
            }
        };
        Self::monic_den(num, den)
    }

    fn monic_den(num: Poly, den: Poly) -> Self {
        let field = *num.field();
        let (_, lc) = den
            .leading_term_under(MonomialOrder::Grevlex)
            .expect("nonzero denominator");
        if field.is_one(lc) {
            return RationalFunction { num, den };
        }
        let inv = field.inv(lc).unwrap();
        RationalFunction {
            num: num.scale(&inv),
            den: den.scale(&inv),
        }
    }

    pub fn from_poly(p: Poly) -> Self {
        let den = Poly::one(p.ring());
        RationalFunction { num: p, den }
    }

    pub fn constant(ring: &Arc<PolyRing<FieldSpec>>, c: FieldElement) -> Self {
        Self::from_poly(Poly::constant(ring, c))
    }

    pub fn zero(ring: &Arc<PolyRing<FieldSpec>>) -> Self {
        Self::from_poly(Poly::zero(ring))
    }

    pub fn one(ring: &Arc<PolyRing<FieldSpec>>) -> Self {
        Self::from_poly(Poly::one(ring))
    }

    pub fn var(ring: &Arc<PolyRing<FieldSpec>>, index: usize) -> Self {
        Self::from_poly(Poly::var(ring, index))
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn ring(&self) -> &Arc<PolyRing<FieldSpec>> {
        self.num.ring()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Denominator is a (necessarily unit) constant.
    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    pub fn as_polynomial(&self) -> Option<Poly> {
        let c = self.den.constant_value()?;
        Some(self.num.scale(&self.num.field().inv(&c).ok()?))
    }

    pub fn constant_value(&self) -> Option<FieldElement> {
        self.as_polynomial()?.constant_value()
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        let other = other.aligned(self)?;
        Ok(self.add_unchecked(&other, false))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        let other = other.aligned(self)?;
        Ok(self.add_unchecked(&other, true))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        let other = other.aligned(self)?;
        Ok(self.mul_unchecked(&other))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        let other = other.aligned(self)?;
        Ok(self.mul_unchecked(&other.inv()?))
    }

    fn aligned(&self, target: &Self) -> Result<Self> {
        if Arc::ptr_eq(self.ring(), target.ring()) || self.ring() == target.ring() {
            return Ok(self.clone());
        }
        Ok(RationalFunction {
            num: self.num.in_ring(target.ring())?,
            den: self.den.in_ring(target.ring())?,
        })
    }

    fn add_unchecked(&self, other: &Self, negate: bool) -> Self {
        let on = if negate { -&other.num } else { other.num.clone() };
        if self.den == other.den {
            if self.den.is_constant() {
                return RationalFunction {
                    num: &self.num + &on,
                    den: self.den.clone(),
                };
            }
            return Self::normalized(&self.num + &on, self.den.clone());
        }
        let g = gcd_rec(&self.den, &other.den);
        if g.is_constant() {
            // coprime monic denominators: the sum is already reduced
            let num = &(&self.num * &other.den) + &(&on * &self.den);
            if num.is_zero() {
                return Self::zero(self.ring());
            }
            return RationalFunction {
                num,
                den: &self.den * &other.den,
            };
        }
        let da = exact_quotient(&self.den, &g).unwrap();
        let db = exact_quotient(&other.den, &g).unwrap();
        let num = &(&self.num * &db) + &(&on * &da);
        Self::normalized(num, &(&da * &db) * &g)
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.ring());
        }
        let g1 = gcd_rec(&self.num, &other.den);
        let g2 = gcd_rec(&other.num, &self.den);
        let div = |a: &Poly, g: &Poly| {
            if g.is_constant() {
                a.clone()
            } else {
                exact_quotient(a, g).unwrap()
            }
        };
        let num = &div(&self.num, &g1) * &div(&other.num, &g2);
        let den = &div(&self.den, &g2) * &div(&other.den, &g1);
        Self::monic_den(num, den)
    }

    pub fn neg(&self) -> Self {
        RationalFunction {
            num: -&self.num,
            den: self.den.clone(),
        }
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::monic_den(self.den.clone(), self.num.clone()))
    }

    pub fn pow(&self, e: u64) -> Self {
        // coprimality and monic denominators survive powers
        RationalFunction {
            num: self.num.pow(e),
            den: self.den.pow(e),
        }
    }

    /// Value at a point, or `None` when the denominator vanishes there.
    pub fn eval(&self, point: &[FieldElement]) -> Option<FieldElement> {
        let field = self.num.field();
        let d = self.den.eval(point);
        if field.is_zero(&d) {
            return None;
        }
        Some(field.div(&self.num.eval(point), &d).unwrap())
    }

    /// `num * other.den == other.num * den`.
    pub fn cross_equal(&self, other: &Self) -> bool {
        match other.aligned(self) {
            Ok(o) => &self.num * &o.den == &o.num * &self.den,
            Err(_) => false,
        }
    }

    /// `num / den` with parenthesized polynomials; `den = 1` prints the numerator alone.
    pub fn render(&self) -> String {
        if self.den.constant_value().is_some_and(|c| self.num.field().is_one(&c)) {
            self.num.render()
        } else {
            format!("({}) / ({})", self.num.render(), self.den.render())
        }
    }
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RationalFunction({})", self.render())
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// `k(Y)` as a coefficient field for the polynomial and Gröbner engines.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalFunctionField {
    ring: Arc<PolyRing<FieldSpec>>,
}

impl RationalFunctionField {
    /// Function field of the polynomial ring `ring` (its order is replaced by grevlex).
    pub fn new(ring: &Arc<PolyRing<FieldSpec>>) -> Result<Self> {
        let ring = if ring.order() == MonomialOrder::Grevlex {
            ring.clone()
        } else {
            ring.with_order(MonomialOrder::Grevlex)?
        };
        Ok(RationalFunctionField { ring })
    }

    pub fn ring(&self) -> &Arc<PolyRing<FieldSpec>> {
        &self.ring
    }

    pub fn base(&self) -> FieldSpec {
        *self.ring.field()
    }

    pub fn var(&self, index: usize) -> RationalFunction {
        RationalFunction::var(&self.ring, index)
    }

    pub fn embed(&self, c: &FieldElement) -> RationalFunction {
        RationalFunction::constant(&self.ring, c.clone())
    }
}

impl Field for RationalFunctionField {
    type Elem = RationalFunction;

    fn zero(&self) -> RationalFunction {
        RationalFunction::zero(&self.ring)
    }

    fn one(&self) -> RationalFunction {
        RationalFunction::one(&self.ring)
    }

    fn from_i64(&self, n: i64) -> RationalFunction {
        self.embed(&self.ring.field().from_i64(n))
    }

    fn is_zero(&self, a: &RationalFunction) -> bool {
        a.is_zero()
    }

    fn is_one(&self, a: &RationalFunction) -> bool {
        a.den.is_constant() && a.num.constant_value().is_some_and(|c| self.ring.field().is_one(&c))
    }

    fn add(&self, a: &RationalFunction, b: &RationalFunction) -> RationalFunction {
        a.add_unchecked(b, false)
    }

    fn sub(&self, a: &RationalFunction, b: &RationalFunction) -> RationalFunction {
        a.add_unchecked(b, true)
    }

    fn mul(&self, a: &RationalFunction, b: &RationalFunction) -> RationalFunction {
        a.mul_unchecked(b)
    }

    fn neg(&self, a: &RationalFunction) -> RationalFunction {
        a.neg()
    }

    fn inv(&self, a: &RationalFunction) -> Result<RationalFunction> {
        a.inv()
    }

    fn pow(&self, a: &RationalFunction, e: u64) -> RationalFunction {
        a.pow(e)
    }

    fn characteristic(&self) -> u64 {
        self.ring.field().characteristic()
    }

    fn coeff_text(&self, a: &RationalFunction) -> CoeffText {
        if a.den.is_constant() && a.num.len() == 1 {
            let (m, c) = &a.num.terms()[0];
            let ct = self.ring.field().coeff_text(c);
            let mono = crate::poly::render_monomial(self.ring.vars(), m);
            let text = match (mono.is_empty(), ct.unit) {
                (true, _) => ct.text.clone(),
                (false, true) => mono,
                (false, false) => format!("{}*{}", ct.text, mono),
            };
            return CoeffText {
                negative: ct.negative,
                unit: ct.unit && m.is_one(),
                text,
            };
        }
        let lead_negative = a
            .num
            .leading_term_under(MonomialOrder::Lex)
            .is_some_and(|(_, c)| self.ring.field().coeff_text(c).negative);
        let shown = if lead_negative { a.neg() } else { a.clone() };
        CoeffText {
            negative: lead_negative,
            unit: false,
            text: format!("({})", shown.render()),
        }
    }

    fn describe(&self) -> String {
        format!("{}({})", self.ring.field(), self.ring.vars().join(", "))
    }
}
