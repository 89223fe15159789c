//! Text and JSON renderings of a descent run.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::parse::parse_rational_function;
use crate::arith::{Field, FieldElement};
use crate::descent::{classify_descent, Classification, DescentProblem, DescentResult, MinimalPolynomial};
use crate::error::{Error, Result};
use crate::poly::{Monomial, MonomialOrder, Poly, PolyRing};
use crate::ratfunc::RationalFunction;
use crate::verify::{FibreWitness, SampleReport};

#[derive(Debug, Clone)]
pub struct Certificates {
    /// Identity check modulo `P`, or for a NoDescent result the independent
    /// recomputation of the minimal polynomials.
    pub symbolic: bool,
    pub samples: Option<SampleReport>,
}

/// Everything `descend` reports about one problem.
#[derive(Debug, Clone)]
pub struct Report {
    pub dominant: bool,
    /// `None` when `phi` is not dominant.
    pub result: Option<DescentResult>,
    pub minimal_polynomials: Vec<MinimalPolynomial>,
    pub certificates: Certificates,
    pub witness: Option<FibreWitness>,
    /// Number of points the witness search visited.
    pub witness_budget: u64,
    pub non_regular_locus: Option<Vec<Poly>>,
}

#[derive(Serialize, Deserialize)]
struct JsonFraction {
    num: String,
    den: String,
}

#[derive(Serialize)]
struct JsonSamples {
    tested: u64,
    skipped: u64,
    mismatches: usize,
}

#[derive(Serialize)]
struct JsonCertificates {
    symbolic: bool,
    samples: Option<JsonSamples>,
}

#[derive(Serialize)]
struct JsonReport {
    status: &'static str,
    #[serde(rename = "N")]
    n: u32,
    h: Vec<JsonFraction>,
    minimal_polynomials: Vec<String>,
    certificates: JsonCertificates,
    dominant: bool,
}

impl Report {
    pub fn status(&self) -> &'static str {
        self.result.as_ref().map_or("none", DescentResult::status)
    }

    pub fn twist_exponent(&self) -> u32 {
        self.result.as_ref().map_or(0, DescentResult::twist_exponent)
    }

    /// Pretty-printed JSON, keys in schema order, trailing newline.
    pub fn to_json(&self) -> String {
        let h = self
            .result
            .iter()
            .flat_map(DescentResult::witness)
            .map(|c| JsonFraction {
                num: c.num().render(),
                den: c.den().render(),
            })
            .collect();
        let doc = JsonReport {
            status: self.status(),
            n: self.twist_exponent(),
            h,
            minimal_polynomials: self.minimal_polynomials.iter().map(MinimalPolynomial::render).collect(),
            certificates: JsonCertificates {
                symbolic: self.certificates.symbolic,
                samples: self.certificates.samples.as_ref().map(|s| JsonSamples {
                    tested: s.points_tested,
                    skipped: s.points_skipped_denominator_zero,
                    mismatches: s.mismatches.len(),
                }),
            },
            dominant: self.dominant,
        };
        let mut s = serde_json::to_string_pretty(&doc).expect("report serializes");
        s.push('\n');
        s
    }

    /// Human-readable report.
    pub fn to_text(&self, problem: &DescentProblem) -> String {
        let mut out = String::new();
        let field = problem.field();
        let _ = writeln!(out, "field: {field}");
        let _ = writeln!(out, "dominant: {}", yes_no(self.dominant));
        if !self.dominant {
            let _ = writeln!(out, "status: none");
            let _ = writeln!(out, "phi is not dominant, so no descent question can be asked");
            return out;
        }
        let _ = writeln!(out, "status: {}", self.status());
        let _ = writeln!(out, "N: {}", self.twist_exponent());
        let t = problem.fresh_variable();
        let _ = writeln!(
            out,
            "minimal polynomials over k({}):",
            problem.target().vars().join(", ")
        );
        for (i, mu) in self.minimal_polynomials.iter().enumerate() {
            match mu {
                MinimalPolynomial::ZeroIdeal => {
                    let _ = writeln!(out, "  f{}: none ({t} is transcendental)", i + 1);
                }
                _ => {
                    let _ = writeln!(out, "  f{}: {mu}", i + 1);
                }
            }
        }
        match self.result.as_ref() {
            Some(DescentResult::NoDescent { component, certificate }) => {
                let why = match certificate {
                    MinimalPolynomial::ZeroIdeal => "it is transcendental over k(phi)".to_string(),
                    mu => format!(
                        "its minimal polynomial {mu} has degree {} and is not of the form {t}^(p^N) - c",
                        mu.degree().unwrap_or(0)
                    ),
                };
                let _ = writeln!(out, "f{} does not descend: {why}", component + 1);
                match &self.witness {
                    Some(w) => {
                        let _ = writeln!(
                            out,
                            "fibre witness: {} and {} have the same image under phi but different f",
                            point(&w.first),
                            point(&w.second)
                        );
                    }
                    None => {
                        let _ = writeln!(
                            out,
                            "no fibre witness among the first {} points (this proves nothing)",
                            self.witness_budget
                        );
                    }
                }
            }
            Some(result) => {
                let _ = writeln!(out, "h:");
                for (i, c) in result.witness().iter().enumerate() {
                    let _ = writeln!(out, "  h{} = {c}", i + 1);
                }
                if let DescentResult::FrobeniusTwist { n, .. } = result {
                    let q = field.characteristic().pow(*n);
                    let _ = writeln!(
                        out,
                        "note: f^{q} = h(phi), so h lands in the Frobenius twist W^({q}) of the target; f itself is F_N followed by h with N = {n}"
                    );
                }
                if let Some(locus) = &self.non_regular_locus {
                    let dens: Vec<String> = locus.iter().map(Poly::render).collect();
                    let _ = writeln!(out, "h is not regular; denominators vanish on V({})", dens.join(", "));
                }
            }
            None => {}
        }
        let _ = writeln!(out, "certificates:");
        let _ = writeln!(out, "  symbolic: {}", pass_fail(self.certificates.symbolic));
        if let Some(s) = &self.certificates.samples {
            let _ = writeln!(
                out,
                "  samples: {} tested, {} skipped, {} mismatches ({})",
                s.points_tested,
                s.points_skipped_denominator_zero,
                s.mismatches.len(),
                pass_fail(s.passed())
            );
            for m in s.mismatches.iter().take(5) {
                let _ = writeln!(
                    out,
                    "    at {}: component {}: {} on the f side, {} on the h side",
                    point(&m.point),
                    m.component + 1,
                    m.lhs,
                    m.rhs
                );
            }
        }
        out
    }
}

#[derive(Deserialize)]
struct StoredJson {
    status: String,
    #[serde(rename = "N")]
    n: u32,
    h: Vec<JsonFraction>,
    minimal_polynomials: Vec<String>,
}

/// A result read back from a JSON report.
#[derive(Debug, Clone)]
pub struct StoredResult {
    pub result: DescentResult,
    pub minimal_polynomials: Vec<MinimalPolynomial>,
}

/// Reads a JSON report written by `descend --json` against `problem`.
pub fn parse_stored_result(text: &str, problem: &DescentProblem) -> Result<StoredResult> {
    let doc: StoredJson = serde_json::from_str(text).map_err(|e| Error::parse(e.line(), e.column(), e.to_string()))?;
    let target = problem.target();
    let bad = |msg: String| Error::usage(format!("result file: {msg}"));
    let h = doc
        .h
        .iter()
        .map(|c| {
            let num = parse_rational_function(&c.num, target).map_err(|e| bad(format!("`{}`: {e}", c.num)))?;
            let den = parse_rational_function(&c.den, target).map_err(|e| bad(format!("`{}`: {e}", c.den)))?;
            num.checked_div(&den)
        })
        .collect::<Result<Vec<_>>>()?;
    let minimal_polynomials = doc
        .minimal_polynomials
        .iter()
        .map(|t| parse_minimal_polynomial(t, problem).map_err(|e| bad(format!("`{t}`: {e}"))))
        .collect::<Result<Vec<_>>>()?;
    let result = match doc.status.as_str() {
        "regular" => DescentResult::Regular {
            h: h.iter()
                .map(|c| {
                    c.as_polynomial()
                        .ok_or_else(|| bad("regular result with a denominator".into()))
                })
                .collect::<Result<_>>()?,
        },
        "rational" => DescentResult::RationalMap { h },
        "frobenius" if doc.n > 0 => DescentResult::FrobeniusTwist { n: doc.n, h },
        "frobenius" => return Err(bad("frobenius result with N = 0".into())),
        "none" => {
            let component = minimal_polynomials
                .iter()
                .position(|mu| classify_descent(mu, problem.field()) == Classification::NoDescent)
                .ok_or_else(|| bad("status none but every minimal polynomial descends".into()))?;
            DescentResult::NoDescent {
                component,
                certificate: minimal_polynomials[component].clone(),
            }
        }
        other => return Err(bad(format!("unknown status `{other}`"))),
    };
    Ok(StoredResult {
        result,
        minimal_polynomials,
    })
}

/// Parses `T^2 - u*T + v` style text over `k(Y)`; `0` is the zero ideal.
pub fn parse_minimal_polynomial(text: &str, problem: &DescentProblem) -> Result<MinimalPolynomial> {
    let t = problem.fresh_variable();
    let m = problem.target().nvars();
    let vars = problem.target().vars().iter().cloned().chain([t.clone()]);
    let ring = PolyRing::new(problem.field(), vars, MonomialOrder::Grevlex)?;
    let value = parse_rational_function(text, &ring)?;
    if value.is_zero() {
        return Ok(MinimalPolynomial::ZeroIdeal);
    }
    if value.den().uses_var(m) {
        return Err(Error::usage(format!("`{t}` appears in a denominator")));
    }
    // the den is free of T, so T's slot in the map is never used
    let ymap: Vec<usize> = (0..m).chain([0]).collect();
    let down = |p: &Poly| p.embed(problem.target(), &ymap);
    let den = down(value.den());
    let degree = value.num().degree_in(m) as usize;
    let mut parts: Vec<Vec<_>> = vec![Vec::new(); degree + 1];
    for (mono, c) in value.num().terms() {
        let mut e = mono.exponents().to_vec();
        let k = e.pop().unwrap() as usize;
        parts[k].push((Monomial::new(e), c.clone()));
    }
    let coefficients = parts
        .into_iter()
        .map(|t| RationalFunction::new(Poly::from_terms(problem.target(), t), den.clone()))
        .collect::<Result<Vec<_>>>()?;
    if !coefficients[degree]
        .constant_value()
        .is_some_and(|c| problem.field().is_one(&c))
        || degree == 0
    {
        return Err(Error::usage("minimal polynomial must be monic of positive degree"));
    }
    Ok(MinimalPolynomial::Algebraic {
        variable: t,
        coefficients,
    })
}

fn point(p: &[FieldElement]) -> String {
    let parts: Vec<String> = p.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(", "))
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn pass_fail(b: bool) -> &'static str {
    if b {
        "pass"
    } else {
        "fail"
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontend::cli::build_report;
    use crate::frontend::parse::parse_problem;

    const SYMMETRIC: &str = "field Q\nsource vars x y\ntarget vars u v\nphi: u = x + y, v = x*y\nf: x^2 + y^2\n";

    #[test]
    fn json_schema_and_key_order() {
        let p = parse_problem(SYMMETRIC).unwrap();
        let r = build_report(&p, None, 100, 3).unwrap();
        let json = r.to_json();
        let keys = [
            "\"status\"",
            "\"N\"",
            "\"h\"",
            "\"minimal_polynomials\"",
            "\"certificates\"",
            "\"dominant\"",
        ];
        let pos: Vec<usize> = keys.iter().map(|k| json.find(k).unwrap()).collect();
        assert!(pos.windows(2).all(|w| w[0] < w[1]), "{json}");
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(v["status"], "regular");
        assert_eq!(v["N"], 0);
        assert_eq!(v["h"][0]["num"], "u^2 - 2*v");
        assert_eq!(v["h"][0]["den"], "1");
        assert_eq!(v["certificates"]["symbolic"], true);
        assert!(v["certificates"]["samples"].is_null());
        assert_eq!(v["dominant"], true);
    }

    #[test]
    fn stored_results_read_back() {
        for text in [
            SYMMETRIC,
            "field Fp 5\nsource vars t\ntarget vars y\nphi: y = t^5\nf: t\n",
            "field Fp 5\nsource vars x y\ntarget vars u v\nphi: u = x, v = x*y\nf: y\n",
            "field Q\nsource vars x y\ntarget vars u v\nphi: u = x + y, v = x*y\nf: x\n",
            "field Q\nsource vars x y\ntarget vars u\nphi: u = x\nf: y\n",
        ] {
            let p = parse_problem(text).unwrap();
            let r = build_report(&p, None, 100, 3).unwrap();
            let stored = parse_stored_result(&r.to_json(), &p).unwrap();
            assert_eq!(Some(&stored.result), r.result.as_ref(), "{text}");
            assert_eq!(stored.minimal_polynomials, r.minimal_polynomials);
        }
    }

    #[test]
    fn text_report_mentions_twist_and_locus() {
        let p = parse_problem("field Fp 3\nsource vars t\ntarget vars y\nphi: y = t^3\nf: t\n").unwrap();
        let text = build_report(&p, Some(crate::verify::SampleBudget::Exhaustive), 100, 3)
            .unwrap()
            .to_text(&p);
        assert!(text.contains("Frobenius twist W^(3)"), "{text}");
        assert!(
            text.contains("samples: 3 tested, 0 skipped, 0 mismatches (pass)"),
            "{text}"
        );
        let p = parse_problem("field Q\nsource vars x y\ntarget vars u v\nphi: u = x, v = x*y\nf: y\n").unwrap();
        let text = build_report(&p, None, 100, 3).unwrap().to_text(&p);
        assert!(text.contains("h1 = (v) / (u)"), "{text}");
        assert!(text.contains("vanish on V(u)"), "{text}");
    }

    #[test]
    fn non_dominant_report() {
        let p = parse_problem("field Q\nsource vars x\ntarget vars u v\nphi: u = x, v = x^2\nf: x\n").unwrap();
        let r = build_report(&p, None, 100, 3).unwrap();
        assert!(!r.dominant);
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(v["status"], "none");
        assert_eq!(v["dominant"], false);
    }
}
