//! Descent of a polynomial map `f` through a dominant map `phi: X -> A^m`.
//!
//! Each component of `f` is handled through its minimal polynomial over
//! `k(Y) = k(phi)`: the generator of the elimination ideal of the generic
//! fibre in `k(Y)[T]`, obtained from the base-field elimination ideal in
//! `k[T, Y]`. A linear minimal polynomial gives a
//! rational witness; in characteristic `p` a binomial `T^(p^N) - c` gives a
//! witness after the `N`-th Frobenius twist; anything else certifies that
//! `f` is not constant on the generic fibre.

use std::sync::Arc;

use rayon::prelude::*;

use crate::arith::{Field, FieldSpec};
use crate::error::{Error, Result};
use crate::groebner::{buchberger, elimination_ideal};
use crate::poly::{BlockOrder, Monomial, MonomialOrder, Poly, PolyRing, Polynomial};
use crate::ratfunc::{RationalFunction, RationalFunctionField};

/// A descent question: does `f: X -> A^r` factor through `phi: X -> A^m`?
#[derive(Debug, Clone)]
pub struct DescentProblem {
    field: FieldSpec,
    source: Arc<PolyRing<FieldSpec>>,
    target: Arc<PolyRing<FieldSpec>>,
    ideal: Vec<Poly>,
    phi: Vec<Poly>,
    f: Vec<Poly>,
}

impl DescentProblem {
    /// `ideal`, `phi` and `f` must live in a ring over `source_vars`
    /// (any order); `phi[i]` is the component assigned to `target_vars[i]`.
    pub fn new(
        field: FieldSpec,
        source_vars: &[String],
        target_vars: &[String],
        ideal: Vec<Poly>,
        phi: Vec<Poly>,
        f: Vec<Poly>,
    ) -> Result<Self> {
        if source_vars.is_empty() {
            return Err(Error::usage("at least one source variable is required"));
        }
        if target_vars.is_empty() {
            return Err(Error::usage("at least one target variable is required"));
        }
        if f.is_empty() {
            return Err(Error::usage("f needs at least one component"));
        }
        if phi.len() != target_vars.len() {
            return Err(Error::usage(format!(
                "phi has {} components but there are {} target variables",
                phi.len(),
                target_vars.len()
            )));
        }
        if let Some(v) = target_vars.iter().find(|v| source_vars.contains(v)) {
            return Err(Error::usage(format!("`{v}` is both a source and a target variable")));
        }
        let source = PolyRing::new(field, source_vars.iter().cloned(), MonomialOrder::Grevlex)?;
        let target = PolyRing::new(field, target_vars.iter().cloned(), MonomialOrder::Grevlex)?;
        let into = |ps: Vec<Poly>| ps.iter().map(|p| p.in_ring(&source)).collect::<Result<Vec<_>>>();
        Ok(DescentProblem {
            field,
            ideal: into(ideal)?,
            phi: into(phi)?,
            f: into(f)?,
            source,
            target,
        })
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    /// Ring of the source coordinates `x`.
    pub fn source(&self) -> &Arc<PolyRing<FieldSpec>> {
        &self.source
    }

    /// Ring of the target coordinates `Y`.
    pub fn target(&self) -> &Arc<PolyRing<FieldSpec>> {
        &self.target
    }

    pub fn ideal(&self) -> &[Poly] {
        &self.ideal
    }

    pub fn phi(&self) -> &[Poly] {
        &self.phi
    }

    pub fn f(&self) -> &[Poly] {
        &self.f
    }

    pub fn components(&self) -> usize {
        self.f.len()
    }

    /// Ring `k[x, Y]` under `order`.
    fn graph_ring(&self, order: MonomialOrder) -> Result<Arc<PolyRing<FieldSpec>>> {
        let vars = self.source.vars().iter().chain(self.target.vars()).cloned();
        PolyRing::new(self.field, vars, order)
    }

    /// `P ∪ {Y_i - phi_i}` in `ring = k[x, Y]`.
    fn graph_ideal(&self, ring: &Arc<PolyRing<FieldSpec>>) -> Vec<Poly> {
        let n = self.source.nvars();
        let xmap: Vec<usize> = (0..n).collect();
        let mut gens: Vec<Poly> = self.ideal.iter().map(|p| p.embed(ring, &xmap)).collect();
        for (i, phi) in self.phi.iter().enumerate() {
            gens.push(&Poly::var(ring, n + i) - &phi.embed(ring, &xmap));
        }
        gens
    }

    /// Generators of the graph ideal of `phi` in `k[x, Y]` (grevlex).
    pub fn graph_generators(&self) -> Result<Vec<Poly>> {
        let ring = self.graph_ring(MonomialOrder::Grevlex)?;
        Ok(self.graph_ideal(&ring))
    }

    /// A variable name for the minimal polynomial not clashing with the problem's.
    pub fn fresh_variable(&self) -> String {
        let taken = |s: &str| self.source.var_index(s).is_some() || self.target.var_index(s).is_some();
        if !taken("T") {
            return "T".to_string();
        }
        (0..).map(|i| format!("T{i}")).find(|s| !taken(s)).unwrap()
    }
}

/// Minimal polynomial of one component of `f` over `k(Y)`.
#[derive(Debug, Clone, PartialEq)]
pub enum MinimalPolynomial {
    /// Monic, coefficients constant term first.
    Algebraic {
        variable: String,
        coefficients: Vec<RationalFunction>,
    },
    /// The elimination ideal is zero: `f` is transcendental over `k(phi)`.
    ZeroIdeal,
}

impl MinimalPolynomial {
    pub fn degree(&self) -> Option<usize> {
        match self {
            MinimalPolynomial::Algebraic { coefficients, .. } => Some(coefficients.len() - 1),
            MinimalPolynomial::ZeroIdeal => None,
        }
    }

    pub fn coefficients(&self) -> Option<&[RationalFunction]> {
        match self {
            MinimalPolynomial::Algebraic { coefficients, .. } => Some(coefficients),
            MinimalPolynomial::ZeroIdeal => None,
        }
    }

    /// As a univariate polynomial over `k(Y)`.
    pub fn to_polynomial(&self) -> Option<Polynomial<RationalFunctionField>> {
        let MinimalPolynomial::Algebraic { variable, coefficients } = self else {
            return None;
        };
        let field = RationalFunctionField::new(coefficients[0].ring()).ok()?;
        let ring = PolyRing::new(field, [variable.clone()], MonomialOrder::Lex).ok()?;
        let terms = coefficients
            .iter()
            .enumerate()
            .map(|(k, c)| (Monomial::new(vec![k as u32]), c.clone()))
            .collect();
        Some(Polynomial::from_terms(&ring, terms))
    }

    /// Text such as `T^2 - u*T + v`; the zero ideal renders as `0`.
    pub fn render(&self) -> String {
        match self.to_polynomial() {
            Some(p) => p.render(),
            None => "0".to_string(),
        }
    }
}

impl std::fmt::Display for MinimalPolynomial {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.render())
    }
}

/// Shape of one component's minimal polynomial.
#[derive(Debug, Clone, PartialEq)]
pub enum Classification {
    /// `T - c`: the component equals `c(phi)`.
    Rational { h: RationalFunction },
    /// `T^(p^N) - c` with `N >= 1`: the `p^N`-th power equals `c(phi)`.
    Frobenius { n: u32, h: RationalFunction },
    /// Transcendental, or separable degree at least two.
    NoDescent,
}

/// Outcome of a descent computation.
#[derive(Debug, Clone, PartialEq)]
pub enum DescentResult {
    Regular {
        h: Vec<Poly>,
    },
    RationalMap {
        h: Vec<RationalFunction>,
    },
    FrobeniusTwist {
        n: u32,
        h: Vec<RationalFunction>,
    },
    NoDescent {
        component: usize,
        certificate: MinimalPolynomial,
    },
}

impl DescentResult {
    pub fn status(&self) -> &'static str {
        match self {
            DescentResult::Regular { .. } => "regular",
            DescentResult::RationalMap { .. } => "rational",
            DescentResult::FrobeniusTwist { .. } => "frobenius",
            DescentResult::NoDescent { .. } => "none",
        }
    }

    /// The twist exponent `N` (zero unless the result is a Frobenius twist).
    pub fn twist_exponent(&self) -> u32 {
        match self {
            DescentResult::FrobeniusTwist { n, .. } => *n,
            _ => 0,
        }
    }

    /// Witness components as fractions; empty for `NoDescent`.
    pub fn witness(&self) -> Vec<RationalFunction> {
        match self {
            DescentResult::Regular { h } => h.iter().cloned().map(RationalFunction::from_poly).collect(),
            DescentResult::RationalMap { h } | DescentResult::FrobeniusTwist { h, .. } => h.clone(),
            DescentResult::NoDescent { .. } => Vec::new(),
        }
    }

    pub fn is_descent(&self) -> bool {
        !matches!(self, DescentResult::NoDescent { .. })
    }
}

/// Full record of a descent run: per-component minimal polynomials and the
/// assembled result.
#[derive(Debug, Clone)]
pub struct Descent {
    pub minimal_polynomials: Vec<MinimalPolynomial>,
    pub result: DescentResult,
}

/// Whether `phi: V(P) -> A^m` is dominant, i.e. the graph ideal meets `k[Y]` in zero.
pub fn dominance_check(problem: &DescentProblem) -> Result<bool> {
    if problem.phi.len() > problem.source.nvars() {
        // the image has dimension at most n < m
        return Ok(false);
    }
    if problem.ideal.is_empty() && jacobian_full_rank(problem) {
        return Ok(true);
    }
    let ring = problem.graph_ring(MonomialOrder::Grevlex)?;
    let gens = problem.graph_ideal(&ring);
    let n = problem.source.nvars();
    let elim = elimination_ideal(&ring, &gens, &(0..n).collect::<Vec<_>>())?;
    Ok(elim.is_empty())
}

/// Looks for a point of `A^n` where the Jacobian of `phi` has rank `m`.
///
/// Full rank anywhere means the `d(phi_i)` are independent over `k(x)`, and
/// a polynomial relation among the `phi_i` of least degree would make them
/// dependent (in characteristic `p` some partial of that relation survives,
/// since otherwise it would be a `p`-th power). So a hit proves dominance;
/// a miss proves nothing.
fn jacobian_full_rank(problem: &DescentProblem) -> bool {
    let k = problem.field;
    let n = problem.source.nvars();
    let m = problem.phi.len();
    let jac: Vec<Vec<Poly>> = problem
        .phi
        .iter()
        .map(|p| (0..n).map(|v| p.derivative(v)).collect())
        .collect();
    (1..=6i64).any(|t| {
        let point: Vec<_> = (0..n as i64).map(|i| k.from_i64(t * (i + 2) + i * i + 1)).collect();
        let rows: Vec<Vec<_>> = jac
            .iter()
            .map(|row| row.iter().map(|d| d.eval(&point)).collect())
            .collect();
        rank(k, rows) == m
    })
}

fn rank(k: FieldSpec, mut rows: Vec<Vec<crate::arith::FieldElement>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(pivot) = (r..rows.len()).find(|&i| !k.is_zero(&rows[i][c])) else {
            continue;
        };
        rows.swap(r, pivot);
        let inv = k.inv(&rows[r][c]).expect("nonzero pivot");
        let (top, bottom) = rows.split_at_mut(r + 1);
        let pivot_row = &top[r];
        for row in bottom {
            let factor = k.mul(&row[c], &inv);
            for (x, p) in row[c..].iter_mut().zip(&pivot_row[c..]) {
                *x = k.sub(x, &k.mul(&factor, p));
            }
        }
        r += 1;
    }
    r
}

fn require_dominant(problem: &DescentProblem) -> Result<()> {
    if dominance_check(problem)? {
        Ok(())
    } else {
        Err(Error::usage(
            "phi is not dominant: its image closure is a proper subvariety of the target",
        ))
    }
}

/// Minimal polynomial of `f[component]` over `k(Y)`; requires dominant `phi`.
pub fn minimal_polynomial(problem: &DescentProblem, component: usize) -> Result<MinimalPolynomial> {
    if component >= problem.components() {
        return Err(Error::usage(format!("component {component} out of range")));
    }
    require_dominant(problem)?;
    minimal_polynomial_unchecked(problem, component)
}

/// Eliminates `x` from `P + (Y - phi) + (T - f_i)` in `k[x, T, Y]` with `T`
/// lex-dominating `Y`. The kernel of `k[Y, T] -> k[X]` then has a Gröbner
/// basis element of least positive `T`-degree, and since that kernel is
/// prime and `phi` dominant, this element made monic over `k(Y)` generates
/// the extended ideal in `k(Y)[T]`.
fn minimal_polynomial_unchecked(problem: &DescentProblem, component: usize) -> Result<MinimalPolynomial> {
    let n = problem.source.nvars();
    let m = problem.target.nvars();
    let t_name = problem.fresh_variable();
    let vars = problem
        .source
        .vars()
        .iter()
        .cloned()
        .chain([t_name.clone()])
        .chain(problem.target.vars().iter().cloned());
    let order = MonomialOrder::Block {
        split: n,
        front: BlockOrder::Grevlex,
        back: BlockOrder::Lex,
    };
    let ring = PolyRing::new(problem.field, vars, order)?;
    let xmap: Vec<usize> = (0..n).collect();
    let mut gens: Vec<Poly> = problem.ideal.iter().map(|p| p.embed(&ring, &xmap)).collect();
    for (i, phi) in problem.phi.iter().enumerate() {
        gens.push(&Poly::var(&ring, n + 1 + i) - &phi.embed(&ring, &xmap));
    }
    gens.push(&Poly::var(&ring, n) - &problem.f[component].embed(&ring, &xmap));
    let gb = buchberger(&ring, &gens, order)?;
    let eliminated: Vec<&Poly> = gb
        .generators()
        .iter()
        .filter(|g| (0..n).all(|v| !g.uses_var(v)))
        .collect();
    if eliminated.iter().any(|g| !g.uses_var(n)) {
        return Err(Error::Internal("relation among phi despite dominance".into()));
    }
    let Some(g) = eliminated.into_iter().min_by_key(|g| g.degree_in(n)) else {
        return Ok(MinimalPolynomial::ZeroIdeal);
    };
    let degree = g.degree_in(n) as usize;
    let mut parts: Vec<Vec<(Monomial, crate::arith::FieldElement)>> = vec![Vec::new(); degree + 1];
    for (mono, c) in g.terms() {
        let e = mono.exponents();
        parts[e[n] as usize].push((Monomial::new(e[n + 1..n + 1 + m].to_vec()), c.clone()));
    }
    let lead = Poly::from_terms(&problem.target, parts[degree].clone());
    let coefficients = parts
        .into_iter()
        .map(|t| RationalFunction::new(Poly::from_terms(&problem.target, t), lead.clone()))
        .collect::<Result<Vec<_>>>()?;
    Ok(MinimalPolynomial::Algebraic {
        variable: t_name,
        coefficients,
    })
}

/// The same minimal polynomial computed by Buchberger directly over the
/// coefficient field `k(Y)`. Exact but far slower, since every coefficient
/// operation costs multivariate gcds; kept as an independent route.
pub fn minimal_polynomial_over_fraction_field(problem: &DescentProblem, component: usize) -> Result<MinimalPolynomial> {
    if component >= problem.components() {
        return Err(Error::usage(format!("component {component} out of range")));
    }
    require_dominant(problem)?;
    let n = problem.source.nvars();
    let kfield = RationalFunctionField::new(&problem.target)?;
    let t_name = problem.fresh_variable();
    let vars = problem.source.vars().iter().cloned().chain([t_name.clone()]);
    let order = MonomialOrder::Block {
        split: n,
        front: BlockOrder::Grevlex,
        back: BlockOrder::Lex,
    };
    let ring = PolyRing::new(kfield.clone(), vars, order)?;
    let lift = |p: &Poly| -> Polynomial<RationalFunctionField> {
        let terms = p
            .terms()
            .iter()
            .map(|(m, c)| {
                let mut e = m.exponents().to_vec();
                e.push(0);
                (Monomial::new(e), kfield.embed(c))
            })
            .collect();
        Polynomial::from_terms(&ring, terms)
    };
    let mut gens: Vec<_> = problem.ideal.iter().map(&lift).collect();
    for (i, phi) in problem.phi.iter().enumerate() {
        gens.push(&lift(phi) - &Polynomial::constant(&ring, kfield.var(i)));
    }
    gens.push(&Polynomial::var(&ring, n) - &lift(&problem.f[component]));
    let gb = buchberger(&ring, &gens, order)?;
    let mut eliminated = gb.generators().iter().filter(|g| (0..n).all(|v| !g.uses_var(v)));
    let Some(g) = eliminated.next() else {
        return Ok(MinimalPolynomial::ZeroIdeal);
    };
    if eliminated.next().is_some() {
        return Err(Error::Internal("elimination ideal in k(Y)[T] is not principal".into()));
    }
    let g = g.monic();
    let degree = g.degree_in(n) as usize;
    let mut coefficients = vec![kfield.zero(); degree + 1];
    for (m, c) in g.terms() {
        coefficients[m.exponents()[n] as usize] = c.clone();
    }
    Ok(MinimalPolynomial::Algebraic {
        variable: t_name,
        coefficients,
    })
}

/// Reads the descent type off the shape of a minimal polynomial.
pub fn classify_descent(mu: &MinimalPolynomial, field: FieldSpec) -> Classification {
    let Some(coeffs) = mu.coefficients() else {
        return Classification::NoDescent;
    };
    let degree = coeffs.len() - 1;
    if degree == 1 {
        return Classification::Rational { h: coeffs[0].neg() };
    }
    let p = field.characteristic() as usize;
    if p == 0 || degree < p {
        return Classification::NoDescent;
    }
    let mut n = 0;
    let mut d = degree;
    while d % p == 0 {
        d /= p;
        n += 1;
    }
    if d != 1 || !coeffs[1..degree].iter().all(RationalFunction::is_zero) {
        return Classification::NoDescent;
    }
    Classification::Frobenius { n, h: coeffs[0].neg() }
}

/// Decides descent of every component and assembles a uniform twist.
pub fn descend_map(problem: &DescentProblem) -> Result<DescentResult> {
    Ok(analyze(problem)?.result)
}

/// [`descend_map`] together with the per-component minimal polynomials.
pub fn analyze(problem: &DescentProblem) -> Result<Descent> {
    require_dominant(problem)?;
    let minimal_polynomials = (0..problem.components())
        .into_par_iter()
        .map(|i| minimal_polynomial_unchecked(problem, i))
        .collect::<Result<Vec<_>>>()?;
    let result = assemble(problem.field, &minimal_polynomials)?;
    Ok(Descent {
        minimal_polynomials,
        result,
    })
}

fn assemble(field: FieldSpec, mus: &[MinimalPolynomial]) -> Result<DescentResult> {
    let mut parts = Vec::with_capacity(mus.len());
    for (component, mu) in mus.iter().enumerate() {
        match classify_descent(mu, field) {
            Classification::Rational { h } => parts.push((0, h)),
            Classification::Frobenius { n, h } => parts.push((n, h)),
            Classification::NoDescent => {
                return Ok(DescentResult::NoDescent {
                    component,
                    certificate: mu.clone(),
                })
            }
        }
    }
    let n = parts.iter().map(|(k, _)| *k).max().unwrap_or(0);
    if n == 0 {
        if parts.iter().all(|(_, h)| h.is_polynomial()) {
            let h = parts.iter().map(|(_, h)| h.as_polynomial().unwrap()).collect();
            return Ok(DescentResult::Regular { h });
        }
        return Ok(DescentResult::RationalMap {
            h: parts.into_iter().map(|(_, h)| h).collect(),
        });
    }
    let p = field.characteristic();
    if p == 0 {
        return Err(Error::Internal("Frobenius twist in characteristic 0".into()));
    }
    let h = parts
        .into_iter()
        .map(|(k, h)| {
            // scalars of a prime field are Frobenius-fixed, so h^(p^(N-k)) is the twisted witness
            let e = p
                .checked_pow(n - k)
                .ok_or_else(|| Error::Internal("twist exponent overflow".into()))?;
            Ok(h.pow(e))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DescentResult::FrobeniusTwist { n, h })
}

/// Result of [`regular_promotion`].
#[derive(Debug, Clone, PartialEq)]
pub struct Promotion {
    pub result: DescentResult,
    /// Generators of the denominator ideal when some witness component is
    /// not a polynomial.
    pub non_regular_locus: Option<Vec<Poly>>,
}

/// Promotes a rational witness with constant denominators to a polynomial one.
pub fn regular_promotion(result: &DescentResult) -> Promotion {
    let unchanged = |locus| Promotion {
        result: result.clone(),
        non_regular_locus: locus,
    };
    let h = match result {
        DescentResult::RationalMap { h } | DescentResult::FrobeniusTwist { h, .. } => h,
        _ => return unchanged(None),
    };
    if h.iter().all(RationalFunction::is_polynomial) {
        let polys: Vec<Poly> = h.iter().map(|c| c.as_polynomial().unwrap()).collect();
        let promoted = match result {
            DescentResult::FrobeniusTwist { n, .. } => DescentResult::FrobeniusTwist {
                n: *n,
                h: polys.into_iter().map(RationalFunction::from_poly).collect(),
            },
            _ => DescentResult::Regular { h: polys },
        };
        return Promotion {
            result: promoted,
            non_regular_locus: None,
        };
    }
    let mut locus: Vec<Poly> = Vec::new();
    for c in h.iter().filter(|c| !c.is_polynomial()) {
        if !locus.contains(c.den()) {
            locus.push(c.den().clone());
        }
    }
    unchanged(Some(locus))
}

/// Tag-variable test: a polynomial `H` in `Y` with `f[component] ≡ H(phi)`
/// modulo `P`, if one exists.
pub fn subalgebra_membership(problem: &DescentProblem, component: usize) -> Result<Option<Poly>> {
    if component >= problem.components() {
        return Err(Error::usage(format!("component {component} out of range")));
    }
    let n = problem.source.nvars();
    let ring = problem.graph_ring(MonomialOrder::elimination(n))?;
    let gb = buchberger(&ring, &problem.graph_ideal(&ring), ring.order())?;
    let xmap: Vec<usize> = (0..n).collect();
    let nf = gb.normal_form(&problem.f[component].embed(&ring, &xmap))?;
    if (0..n).any(|v| nf.uses_var(v)) {
        return Ok(None);
    }
    let ymap: Vec<usize> = (0..ring.nvars()).map(|v| v.saturating_sub(n)).collect();
    Ok(Some(nf.embed(&problem.target, &ymap)))
}
