//! Independent checks of descent results: the symbolic identity modulo `P`,
//! pointwise evaluation, and search for fibres on which `f` is not constant.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::arith::{Field, FieldElement, FieldSpec};
use crate::descent::{dominance_check, DescentProblem, DescentResult, MinimalPolynomial};
use crate::error::{Error, Result};
use crate::groebner::buchberger;
use crate::poly::{exact_quotient, MonomialOrder, Poly};
use crate::ratfunc::RationalFunction;

/// Largest point count allowed for exhaustive enumeration.
pub const EXHAUSTIVE_LIMIT: u64 = 1_000_000;

/// Default half-width of the integer box used in characteristic 0.
pub const DEFAULT_BOX: u32 = 10;

/// How many points of `V(P)` to visit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SampleBudget {
    Points(u64),
    Exhaustive,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Mismatch {
    pub point: Vec<FieldElement>,
    pub component: usize,
    pub lhs: FieldElement,
    pub rhs: FieldElement,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SampleReport {
    pub points_tested: u64,
    pub points_skipped_denominator_zero: u64,
    pub mismatches: Vec<Mismatch>,
}

impl SampleReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Two points of `X(k)` in one fibre of `phi` where `f` differs.
#[derive(Debug, Clone, PartialEq)]
pub struct FibreWitness {
    pub first: Vec<FieldElement>,
    pub second: Vec<FieldElement>,
}

impl FibreWitness {
    /// Re-checks the witness: both points on `V(P)`, equal `phi`, different `f`.
    pub fn validate(&self, problem: &DescentProblem) -> bool {
        let field = problem.field();
        let on_x = |pt: &[FieldElement]| problem.ideal().iter().all(|g| field.is_zero(&g.eval(pt)));
        let eval = |ps: &[Poly], pt: &[FieldElement]| ps.iter().map(|p| p.eval(pt)).collect::<Vec<_>>();
        on_x(&self.first)
            && on_x(&self.second)
            && eval(problem.phi(), &self.first) == eval(problem.phi(), &self.second)
            && eval(problem.f(), &self.first) != eval(problem.f(), &self.second)
    }
}

fn witness_parts(result: &DescentResult) -> Result<(u32, Vec<RationalFunction>)> {
    if !result.is_descent() {
        return Err(Error::usage("a NoDescent result has no witness to check"));
    }
    Ok((result.twist_exponent(), result.witness()))
}

fn twist_power(field: FieldSpec, n: u32) -> Result<u64> {
    if n == 0 {
        return Ok(1);
    }
    field
        .characteristic()
        .checked_pow(n)
        .filter(|_| field.characteristic() > 0)
        .ok_or_else(|| Error::usage(format!("twist exponent {n} is not valid over {field}")))
}

/// Checks `num(h_i)(phi) - f_i^(p^N) den(h_i)(phi) ∈ P` for every component.
pub fn symbolic_certificate(problem: &DescentProblem, result: &DescentResult) -> Result<bool> {
    let (n, h) = witness_parts(result)?;
    if h.len() != problem.components() {
        return Ok(false);
    }
    let e = twist_power(problem.field(), n)?;
    let gb = buchberger(problem.source(), problem.ideal(), MonomialOrder::Grevlex)?;
    for (hi, fi) in h.iter().zip(problem.f()) {
        let hi = aligned(hi, problem)?;
        let num = hi.num().compose(problem.phi())?;
        let den = hi.den().compose(problem.phi())?;
        let diff = &num - &(&fi.pow(e) * &den);
        if !gb.normal_form(&diff)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

fn aligned(h: &RationalFunction, problem: &DescentProblem) -> Result<RationalFunction> {
    if h.ring().same_space(problem.target()) {
        Ok(h.clone())
    } else {
        Err(Error::RingMismatch(format!(
            "witness over {:?} but target variables are {:?}",
            h.ring().vars(),
            problem.target().vars()
        )))
    }
}

/// Enumerates points of `V(P)`: all of `F_p^n` in lexicographic order, or the
/// integer box `[-B, B]^n` in characteristic 0.
struct PointSource<'a> {
    problem: &'a DescentProblem,
    digits: Vec<u64>,
    radix: u64,
    offset: i64,
    done: bool,
}

impl<'a> PointSource<'a> {
    fn new(problem: &'a DescentProblem, box_bound: u32) -> Self {
        let field = problem.field();
        let (radix, offset) = if field.is_rationals() {
            (2 * box_bound as u64 + 1, -(box_bound as i64))
        } else {
            (field.characteristic(), 0)
        };
        PointSource {
            problem,
            digits: vec![0; problem.source().nvars()],
            radix,
            offset,
            done: false,
        }
    }

    fn space_size(&self) -> Option<u64> {
        self.radix.checked_pow(self.digits.len() as u32)
    }

    fn advance(&mut self) {
        for d in self.digits.iter_mut().rev() {
            *d += 1;
            if *d < self.radix {
                return;
            }
            *d = 0;
        }
        self.done = true;
    }
}

impl Iterator for PointSource<'_> {
    type Item = Vec<FieldElement>;

    fn next(&mut self) -> Option<Vec<FieldElement>> {
        let field = self.problem.field();
        while !self.done {
            let pt: Vec<FieldElement> = self
                .digits
                .iter()
                .map(|&d| field.from_i64(d as i64 + self.offset))
                .collect();
            self.advance();
            if self.problem.ideal().iter().all(|g| field.is_zero(&g.eval(&pt))) {
                return Some(pt);
            }
        }
        None
    }
}

fn point_limit(problem: &DescentProblem, source: &PointSource<'_>, budget: SampleBudget) -> Result<u64> {
    match budget {
        SampleBudget::Points(0) => Err(Error::usage("sampling budget must be positive")),
        SampleBudget::Points(k) => Ok(k),
        SampleBudget::Exhaustive => {
            if problem.field().is_rationals() {
                return Err(Error::usage("exhaustive sampling needs a finite field"));
            }
            match source.space_size() {
                Some(s) if s <= EXHAUSTIVE_LIMIT => Ok(s),
                _ => Err(Error::usage(format!(
                    "exhaustive sampling limited to {EXHAUSTIVE_LIMIT} points"
                ))),
            }
        }
    }
}

enum PointOutcome {
    Tested(Vec<Mismatch>),
    Skipped,
}

/// Evaluates `f_i^(p^N)` against `h_i(phi)` at points of `V(P)`; points where
/// a denominator vanishes are skipped.
pub fn sample_certificate(
    problem: &DescentProblem,
    result: &DescentResult,
    budget: SampleBudget,
    box_bound: u32,
) -> Result<SampleReport> {
    let (n, h) = witness_parts(result)?;
    for hi in &h {
        aligned(hi, problem)?;
    }
    let e = twist_power(problem.field(), n)?;
    let field = problem.field();
    let source = PointSource::new(problem, box_bound);
    let limit = point_limit(problem, &source, budget)?;
    let points: Vec<Vec<FieldElement>> = source.take(limit as usize).collect();
    let outcomes: Vec<PointOutcome> = points
        .par_iter()
        .map(|pt| {
            let y: Vec<FieldElement> = problem.phi().iter().map(|p| p.eval(pt)).collect();
            let dens: Vec<FieldElement> = h.iter().map(|hi| hi.den().eval(&y)).collect();
            if dens.iter().any(|d| field.is_zero(d)) {
                return PointOutcome::Skipped;
            }
            let mismatches = h
                .iter()
                .zip(problem.f())
                .zip(dens)
                .enumerate()
                .filter_map(|(component, ((hi, fi), d))| {
                    let lhs = field.pow(&fi.eval(pt), e);
                    let rhs = field.div(&hi.num().eval(&y), &d).unwrap();
                    (lhs != rhs).then(|| Mismatch {
                        point: pt.clone(),
                        component,
                        lhs,
                        rhs,
                    })
                })
                .collect();
            PointOutcome::Tested(mismatches)
        })
        .collect();
    let mut report = SampleReport {
        points_tested: 0,
        points_skipped_denominator_zero: 0,
        mismatches: Vec::new(),
    };
    for o in outcomes {
        match o {
            PointOutcome::Tested(m) => {
                report.points_tested += 1;
                report.mismatches.extend(m);
            }
            PointOutcome::Skipped => report.points_skipped_denominator_zero += 1,
        }
    }
    Ok(report)
}

/// Checks `mu` against `f[component]` without recomputing it. A monic `mu`
/// of positive degree must vanish at `(phi, f_i)` modulo `P` once its
/// denominators are cleared; the zero ideal needs `(phi, f_i)` to be
/// dominant onto `A^(m+1)`, i.e. `f_i` transcendental over `k(phi)`.
pub fn minimal_polynomial_certificate(
    problem: &DescentProblem,
    component: usize,
    mu: &MinimalPolynomial,
) -> Result<bool> {
    let Some(fi) = problem.f().get(component) else {
        return Err(Error::usage(format!("component {component} out of range")));
    };
    let Some(coeffs) = mu.coefficients() else {
        let mut ys = problem.target().vars().to_vec();
        ys.push(problem.fresh_variable());
        let mut phi = problem.phi().to_vec();
        phi.push(fi.clone());
        let source = problem.source().vars();
        let widened = DescentProblem::new(
            problem.field(),
            source,
            &ys,
            problem.ideal().to_vec(),
            phi,
            vec![fi.clone()],
        )?;
        return dominance_check(&widened);
    };
    let degree = coeffs.len() - 1;
    if degree == 0 || !coeffs[degree].cross_equal(&RationalFunction::one(problem.target())) {
        return Ok(false);
    }
    let mut common = Poly::one(problem.target());
    for c in coeffs {
        if exact_quotient(&common, c.den()).is_none() {
            common = &common * c.den();
        }
    }
    let mut sum = Poly::zero(problem.source());
    let mut power = Poly::one(problem.source());
    for c in coeffs {
        let Some(scale) = exact_quotient(&common, c.den()) else {
            return Err(Error::Internal(
                "denominator does not divide the common multiple".into(),
            ));
        };
        sum = &sum + &(&(&scale * c.num()).compose(problem.phi())? * &power);
        power = &power * fi;
    }
    let gb = buchberger(problem.source(), problem.ideal(), MonomialOrder::Grevlex)?;
    Ok(gb.normal_form(&sum)?.is_zero())
}

/// Looks for two points of `V(P)` with equal `phi` and different `f` among
/// the first `budget` points. Absence proves nothing.
pub fn fibre_witness_search(problem: &DescentProblem, budget: u64, box_bound: u32) -> Result<Option<FibreWitness>> {
    if budget == 0 {
        return Err(Error::usage("witness budget must be positive"));
    }
    let mut seen: HashMap<Vec<FieldElement>, (Vec<FieldElement>, Vec<FieldElement>)> = HashMap::new();
    for pt in PointSource::new(problem, box_bound).take(budget as usize) {
        let y: Vec<FieldElement> = problem.phi().iter().map(|p| p.eval(&pt)).collect();
        let fv: Vec<FieldElement> = problem.f().iter().map(|p| p.eval(&pt)).collect();
        match seen.get(&y) {
            Some((first, f0)) if *f0 != fv => {
                return Ok(Some(FibreWitness {
                    first: first.clone(),
                    second: pt,
                }))
            }
            Some(_) => {}
            None => {
                seen.insert(y, (pt, fv));
            }
        }
    }
    Ok(None)
}
