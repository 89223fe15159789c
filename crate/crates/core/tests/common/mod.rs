#![allow(dead_code)]

use std::sync::Arc;

use fibre_descent::arith::{Field, FieldSpec};
use fibre_descent::descent::DescentProblem;
use fibre_descent::poly::{Monomial, MonomialOrder, Poly, PolyRing};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub type Ring = Arc<PolyRing<FieldSpec>>;

pub fn field(p: u64) -> FieldSpec {
    FieldSpec::new(p).unwrap()
}

pub fn names(prefix: &str, n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("{prefix}{i}")).collect()
}

pub fn ring(k: FieldSpec, vars: &[String], order: MonomialOrder) -> Ring {
    PolyRing::new(k, vars.iter().cloned(), order).unwrap()
}

pub fn vars(r: &Ring) -> Vec<Poly> {
    (0..r.nvars()).map(|i| Poly::var(r, i)).collect()
}

pub fn int(r: &Ring, c: i64) -> Poly {
    Poly::constant(r, r.field().from_i64(c))
}

/// Problem with empty ideal over `x1..xn` and targets `y1..ym`.
pub fn problem(k: FieldSpec, n: usize, m: usize, build: impl Fn(&[Poly]) -> (Vec<Poly>, Vec<Poly>)) -> DescentProblem {
    let xs = names("x", n);
    let ys = names("y", m);
    let r = ring(k, &xs, MonomialOrder::Grevlex);
    let (phi, f) = build(&vars(&r));
    assert_eq!(phi.len(), m);
    DescentProblem::new(k, &xs, &ys, vec![], phi, f).unwrap()
}

/// Random polynomial with at most `terms` terms of total degree at most
/// `degree` and coefficients in `[-bound, bound]`.
pub fn random_poly(rng: &mut ChaCha8Rng, r: &Ring, terms: usize, degree: u32, bound: i64) -> Poly {
    let n = r.nvars();
    let mut out = Vec::new();
    for _ in 0..terms {
        let d = rng.gen_range(0..=degree);
        let mut e = vec![0u32; n];
        for _ in 0..d {
            e[rng.gen_range(0..n)] += 1;
        }
        let c = loop {
            let c = rng.gen_range(-bound..=bound);
            if c != 0 {
                break c;
            }
        };
        out.push((Monomial::new(e), r.field().from_i64(c)));
    }
    Poly::from_terms(r, out)
}

/// Coefficients of `p` in variable `v`, lowest degree first; each still in `p`'s ring.
pub fn coeffs_in(p: &Poly, v: usize) -> Vec<Poly> {
    let d = p.degree_in(v) as usize;
    let mut parts = vec![Vec::new(); d + 1];
    for (m, c) in p.terms() {
        let mut e = m.exponents().to_vec();
        let k = e[v] as usize;
        e[v] = 0;
        parts[k].push((Monomial::new(e), c.clone()));
    }
    parts.into_iter().map(|t| Poly::from_terms(p.ring(), t)).collect()
}

/// Exact quotient by long division on lex leading terms; panics if inexact.
pub fn divide_exact(a: &Poly, b: &Poly) -> Poly {
    let r = a.ring();
    let lex = r.with_order(MonomialOrder::Lex).unwrap();
    let (a, b) = (a.in_ring(&lex).unwrap(), b.in_ring(&lex).unwrap());
    let (bm, bc) = b.leading_term().unwrap().clone();
    let k = lex.field();
    let mut rem = a.clone();
    let mut q = Poly::zero(&lex);
    while let Some((m, c)) = rem.leading_term().cloned() {
        assert!(bm.divides(&m), "inexact division");
        let t = Poly::monomial(&lex, bm.quotient_of(&m), k.div(&c, &bc).unwrap());
        rem = &rem - &(&t * &b);
        q = &q + &t;
    }
    q.in_ring(r).unwrap()
}

/// Determinant by fraction-free Bareiss elimination.
pub fn determinant(mut a: Vec<Vec<Poly>>, r: &Ring) -> Poly {
    let n = a.len();
    if n == 0 {
        return Poly::one(r);
    }
    let mut sign = false;
    let mut prev = Poly::one(r);
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    sign = !sign;
                }
                None => return Poly::zero(r),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&a[i][j] * &a[k][k]) - &(&a[i][k] * &a[k][j]);
                a[i][j] = divide_exact(&num, &prev);
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if sign {
        -d
    } else {
        d
    }
}

/// Sylvester resultant of `f` and `g` with respect to variable `v`.
pub fn resultant(f: &Poly, g: &Poly, v: usize) -> Poly {
    let r = f.ring();
    let (a, b) = (coeffs_in(f, v), coeffs_in(g, v));
    let (da, db) = (a.len() - 1, b.len() - 1);
    let size = da + db;
    let zero = Poly::zero(r);
    let mut rows = Vec::with_capacity(size);
    for i in 0..db {
        let mut row = vec![zero.clone(); size];
        for (j, c) in a.iter().rev().enumerate() {
            row[i + j] = c.clone();
        }
        rows.push(row);
    }
    for i in 0..da {
        let mut row = vec![zero.clone(); size];
        for (j, c) in b.iter().rev().enumerate() {
            row[i + j] = c.clone();
        }
        rows.push(row);
    }
    determinant(rows, r)
}

/// Elementary symmetric polynomials of `xs`, `e_1..e_n`.
pub fn elementary_symmetric(xs: &[Poly]) -> Vec<Poly> {
    let r = xs[0].ring().clone();
    // coefficients of prod (1 + x_i t)
    let mut e = vec![Poly::one(&r)];
    for x in xs {
        let mut next = e.clone();
        next.push(Poly::zero(&r));
        for k in 1..next.len() {
            next[k] = &next[k] + &(&e[k - 1] * x);
        }
        e = next;
    }
    e.split_off(1)
}

/// Monomial symmetric polynomial `m_lambda` in `xs`.
pub fn monomial_symmetric(xs: &[Poly], lambda: &[u32]) -> Poly {
    let n = xs.len();
    let r = xs[0].ring().clone();
    let mut exps: Vec<u32> = lambda.to_vec();
    exps.resize(n, 0);
    exps.sort_unstable();
    let mut seen = std::collections::BTreeSet::new();
    // all distinct permutations via next_permutation
    loop {
        seen.insert(exps.clone());
        if !next_permutation(&mut exps) {
            break;
        }
    }
    let k = r.field().one();
    let terms = seen.into_iter().map(|e| (Monomial::new(e), k.clone())).collect();
    Poly::from_terms(&r, terms)
}

fn next_permutation(a: &mut [u32]) -> bool {
    let Some(i) = (1..a.len()).rev().find(|&i| a[i - 1] < a[i]) else {
        return false;
    };
    let j = (i..a.len()).rev().find(|&j| a[j] > a[i - 1]).unwrap();
    a.swap(i - 1, j);
    a[i..].reverse();
    true
}

/// Partitions of `d` with at most `parts` parts.
pub fn partitions(d: u32, parts: usize) -> Vec<Vec<u32>> {
    fn go(d: u32, max: u32, parts: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if d == 0 {
            out.push(cur.clone());
            return;
        }
        if parts == 0 {
            return;
        }
        for k in (1..=d.min(max)).rev() {
            cur.push(k);
            go(d - k, k, parts - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(d, d, parts, &mut Vec::new(), &mut out);
    out
}
