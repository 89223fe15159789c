//! Minimal polynomials checked against a linear-algebra search: the least
//! `d` with a nonzero relation `sum_{i <= d} c_i(phi) f^i = 0` on `X`, each
//! `c_i` a polynomial of degree at most `D`, is found as a kernel over `k`.

mod common;

use std::collections::BTreeMap;

use common::*;
use fibre_descent::arith::{Field, FieldElement, FieldSpec};
use fibre_descent::descent::{minimal_polynomial, DescentProblem, MinimalPolynomial};
use fibre_descent::frontend::parse_problem;
use fibre_descent::groebner::buchberger;
use fibre_descent::poly::{Monomial, MonomialOrder, Poly};
use fibre_descent::ratfunc::RationalFunction;

fn exponents_up_to(vars: usize, degree: u32) -> Vec<Vec<u32>> {
    if vars == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for d in 0..=degree {
        for mut rest in exponents_up_to(vars - 1, degree - d) {
            rest.insert(0, d);
            out.push(rest);
        }
    }
    out
}

/// Kernel vectors of the matrix whose columns are `columns`.
fn kernel(k: FieldSpec, columns: &[BTreeMap<Monomial, FieldElement>]) -> Vec<Vec<FieldElement>> {
    let rows: Vec<&Monomial> = {
        let mut all: Vec<&Monomial> = columns.iter().flat_map(|c| c.keys()).collect();
        all.sort();
        all.dedup();
        all
    };
    let ncols = columns.len();
    let mut a: Vec<Vec<FieldElement>> = rows
        .iter()
        .map(|m| {
            columns
                .iter()
                .map(|c| c.get(*m).cloned().unwrap_or_else(|| k.zero()))
                .collect()
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..a.len()).find(|&i| !k.is_zero(&a[i][c])) else {
            continue;
        };
        a.swap(r, p);
        let inv = k.inv(&a[r][c]).unwrap();
        for x in a[r].iter_mut() {
            *x = k.mul(x, &inv);
        }
        let pivot_row = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i != r && !k.is_zero(&row[c]) {
                let f = row[c].clone();
                for (x, p) in row.iter_mut().zip(&pivot_row) {
                    *x = k.sub(x, &k.mul(&f, p));
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (0..ncols)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![k.zero(); ncols];
            v[free] = k.one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = k.neg(&a[row][free]);
            }
            v
        })
        .collect()
}

/// Least-degree relation with coefficient degree at most `bound`, as
/// polynomial coefficients in the target ring, constant term first.
fn least_relation(problem: &DescentProblem, component: usize, max_degree: usize, bound: u32) -> Option<Vec<Poly>> {
    let k = problem.field();
    let gb = buchberger(problem.source(), problem.ideal(), MonomialOrder::Grevlex).unwrap();
    let target = problem.target();
    let monos = exponents_up_to(target.nvars(), bound);
    let f = &problem.f()[component];
    for d in 1..=max_degree {
        let mut columns = Vec::new();
        for i in 0..=d {
            for e in &monos {
                let y = Poly::monomial(target, Monomial::new(e.clone()), k.one());
                let v = gb
                    .normal_form(&(&y.compose(problem.phi()).unwrap() * &f.pow(i as u64)))
                    .unwrap();
                columns.push(v.terms().iter().cloned().collect::<BTreeMap<_, _>>());
            }
        }
        if let Some(v) = kernel(k, &columns).into_iter().next() {
            let coeffs = (0..=d)
                .map(|i| {
                    let terms = monos
                        .iter()
                        .enumerate()
                        .map(|(j, e)| (Monomial::new(e.clone()), v[i * monos.len() + j].clone()))
                        .collect();
                    Poly::from_terms(target, terms)
                })
                .collect();
            return Some(coeffs);
        }
    }
    None
}

fn check(problem: &DescentProblem, component: usize, bound: u32) {
    let mu = minimal_polynomial(problem, component).unwrap();
    let relation = least_relation(problem, component, 3, bound).expect("a relation of degree at most 3");
    let MinimalPolynomial::Algebraic { coefficients, .. } = &mu else {
        panic!("zero ideal but a relation exists");
    };
    assert_eq!(coefficients.len(), relation.len(), "degree of {mu}");
    let lead = relation.last().unwrap().clone();
    assert!(!lead.is_zero());
    for (c, r) in coefficients.iter().zip(&relation) {
        let expected = RationalFunction::new(r.clone(), lead.clone()).unwrap();
        assert!(
            c.cross_equal(&expected),
            "{mu}: coefficient {} vs {}",
            c.render(),
            expected.render()
        );
    }
}

fn fixture(name: &str) -> DescentProblem {
    let path = format!("{}/tests/fixtures/{name}", env!("CARGO_MANIFEST_DIR"));
    parse_problem(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn fixtures_match_least_relations() {
    for (name, bound) in [
        ("symmetric.dp", 2),
        ("symmetric_nodescent.dp", 1),
        ("rational.dp", 1),
        ("frobenius_2.dp", 1),
        ("frobenius_3.dp", 1),
        ("cusp.dp", 3),
        ("cusp_char2.dp", 3),
    ] {
        let p = fixture(name);
        for i in 0..p.components() {
            check(&p, i, bound);
        }
    }
    let mixed = fixture("mixed.dp");
    check(&mixed, 0, 1);
    check(&mixed, 1, 1);
}

#[test]
fn cubic_symmetric_families() {
    for p in [0, 7] {
        let prob = problem(field(p), 3, 3, |v| {
            let e = elementary_symmetric(v);
            (e, vec![v[0].clone(), &v[0] + &(&v[1] * &v[2])])
        });
        check(&prob, 0, 1);
        check(&prob, 1, 3);
    }
}

#[test]
fn transcendental_component_has_no_relation() {
    let prob = problem(field(0), 2, 1, |v| (vec![v[0].clone()], vec![v[1].clone()]));
    assert_eq!(minimal_polynomial(&prob, 0).unwrap(), MinimalPolynomial::ZeroIdeal);
    assert!(least_relation(&prob, 0, 3, 3).is_none());
}
