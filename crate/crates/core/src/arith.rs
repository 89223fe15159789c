//! Exact coefficient arithmetic.
//!
//! Two concrete ground fields are supported: the rationals (characteristic 0,
//! arbitrary precision) and prime fields `F_p`. Both sit behind [`FieldSpec`],
//! which also implements the abstract [`Field`] trait used by the polynomial
//! and Gröbner machinery. The rational function field in `ratfunc` is the
//! other implementor.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// How a coefficient is printed in front of a monomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoeffText {
    /// Sign pulled out in front of the term.
    pub negative: bool,
    /// Absolute value (or the full value when `negative` is false).
    pub text: String,
    /// `true` when `text` is exactly one, so it can be omitted before a monomial.
    pub unit: bool,
}

/// A field of coefficients.
///
/// Elements do not carry their field; every operation goes through the field
/// value, which plays the role of a context object.
pub trait Field: Clone + PartialEq + fmt::Debug + Send + Sync + 'static {
    type Elem: Clone + PartialEq + fmt::Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    #[allow(clippy::wrong_self_convention)]
    fn from_i64(&self, n: i64) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Result<Self::Elem>;
    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem> {
        Ok(self.mul(a, &self.inv(b)?))
    }
    fn pow(&self, a: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }
    fn characteristic(&self) -> u64;
    fn coeff_text(&self, a: &Self::Elem) -> CoeffText;
    /// Short name used in error messages.
    fn describe(&self) -> String;
}

/// The ground field: `Q` when `characteristic == 0`, otherwise `F_p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldSpec {
    characteristic: u64,
}

/// An element of `Q` or of a prime field, in canonical form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum FieldElement {
    /// Reduced fraction with positive denominator.
    Rational(BigRational),
    /// Least non-negative residue modulo `modulus`.
    Residue { value: u64, modulus: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

// Largest modulus for which `u128` products never overflow after reduction.
const MAX_MODULUS: u64 = 1 << 62;

impl FieldSpec {
    pub const RATIONALS: FieldSpec = FieldSpec { characteristic: 0 };

    /// Builds a field of the given characteristic; `p` must be 0 or a prime.
    pub fn new(characteristic: u64) -> Result<Self> {
        if characteristic == 0 {
            return Ok(Self::RATIONALS);
        }
        if characteristic >= MAX_MODULUS {
            return Err(Error::usage(format!(
                "modulus {characteristic} too large (must be below 2^62)"
            )));
        }
        if !is_prime(characteristic) {
            return Err(Error::NotPrime(characteristic));
        }
        Ok(FieldSpec { characteristic })
    }

    pub fn rationals() -> Self {
        Self::RATIONALS
    }

    pub fn prime(p: u64) -> Result<Self> {
        if p == 0 {
            return Err(Error::NotPrime(0));
        }
        Self::new(p)
    }

    pub fn is_rationals(&self) -> bool {
        self.characteristic == 0
    }

    /// Canonical element from a big rational; fails in characteristic `p`
    /// when the denominator is divisible by `p`.
    pub fn from_rational(&self, q: &BigRational) -> Result<FieldElement> {
        if self.is_rationals() {
            return Ok(FieldElement::Rational(q.clone()));
        }
        let p = BigInt::from(self.characteristic);
        let num = residue_of(q.numer(), &p);
        let den = residue_of(q.denom(), &p);
        if den == 0 {
            return Err(Error::DivisionByZero);
        }
        let value = mul_mod(
            num,
            pow_mod(den, self.characteristic - 2, self.characteristic),
            self.characteristic,
        );
        Ok(self.residue(value))
    }

    pub fn from_bigint(&self, n: &BigInt) -> FieldElement {
        if self.is_rationals() {
            FieldElement::Rational(BigRational::from_integer(n.clone()))
        } else {
            let p = BigInt::from(self.characteristic);
            self.residue(residue_of(n, &p))
        }
    }

    fn residue(&self, value: u64) -> FieldElement {
        FieldElement::Residue {
            value,
            modulus: self.characteristic,
        }
    }

    /// Whether `a` is an element of this field.
    pub fn contains(&self, a: &FieldElement) -> bool {
        match a {
            FieldElement::Rational(_) => self.is_rationals(),
            FieldElement::Residue { value, modulus } => *modulus == self.characteristic && *value < *modulus,
        }
    }

    fn check(&self, a: &FieldElement) -> Result<()> {
        if self.contains(a) {
            Ok(())
        } else {
            Err(Error::FieldMismatch(self.describe(), element_field(a)))
        }
    }

    /// Checked binary operation: rejects operands from another field and
    /// division by zero.
    pub fn apply(&self, op: ArithOp, a: &FieldElement, b: &FieldElement) -> Result<FieldElement> {
        self.check(a)?;
        self.check(b)?;
        Ok(match op {
            ArithOp::Add => Field::add(self, a, b),
            ArithOp::Sub => Field::sub(self, a, b),
            ArithOp::Mul => Field::mul(self, a, b),
            ArithOp::Div => Field::div(self, a, b)?,
        })
    }

    /// Checked inverse.
    pub fn inverse(&self, a: &FieldElement) -> Result<FieldElement> {
        self.check(a)?;
        Field::inv(self, a)
    }

    /// Re-normalizes an element. Elements produced by this module are
    /// already canonical, so this is the identity on them.
    pub fn normalize(&self, a: &FieldElement) -> Result<FieldElement> {
        match a {
            FieldElement::Rational(q) if self.is_rationals() => Ok(FieldElement::Rational(BigRational::new(
                q.numer().clone(),
                q.denom().clone(),
            ))),
            FieldElement::Rational(q) => self.from_rational(q),
            FieldElement::Residue { value, modulus } if *modulus == self.characteristic => {
                Ok(self.residue(value % modulus))
            }
            _ => Err(Error::FieldMismatch(self.describe(), element_field(a))),
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_rationals() {
            write!(f, "Q")
        } else {
            write!(f, "Fp {}", self.characteristic)
        }
    }
}

fn element_field(a: &FieldElement) -> String {
    match a {
        FieldElement::Rational(_) => "Q".to_string(),
        FieldElement::Residue { modulus, .. } => format!("F_{modulus}"),
    }
}

impl FieldElement {
    /// Integer value in char `p`, or `None` for rationals.
    pub fn residue_value(&self) -> Option<u64> {
        match self {
            FieldElement::Residue { value, .. } => Some(*value),
            FieldElement::Rational(_) => None,
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            FieldElement::Rational(q) => Some(q),
            FieldElement::Residue { .. } => None,
        }
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldElement::Rational(q) => {
                if q.is_integer() {
                    write!(f, "{}", q.numer())
                } else {
                    write!(f, "{}/{}", q.numer(), q.denom())
                }
            }
            FieldElement::Residue { value, .. } => write!(f, "{value}"),
        }
    }
}

fn residue_of(n: &BigInt, p: &BigInt) -> u64 {
    let r = ((n % p) + p) % p;
    u64::try_from(r).expect("residue fits in u64")
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut base: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const SMALL: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &q in &SMALL {
        if n.is_multiple_of(q) {
            return n == q;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &SMALL {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

macro_rules! both {
    ($a:expr, $b:expr, $q:ident, $r:ident, $rat:expr, $res:expr) => {
        match ($a, $b) {
            (FieldElement::Rational($q), FieldElement::Rational($r)) => FieldElement::Rational($rat),
            (FieldElement::Residue { value: $q, modulus }, FieldElement::Residue { value: $r, .. }) => {
                let p = *modulus;
                FieldElement::Residue {
                    value: $res(*$q, *$r, p),
                    modulus: p,
                }
            }
            (a, b) => panic!("mixed-field operands {a:?} and {b:?}"),
        }
    };
}

impl Field for FieldSpec {
    type Elem = FieldElement;

    fn zero(&self) -> FieldElement {
        self.from_i64(0)
    }

    fn one(&self) -> FieldElement {
        self.from_i64(1)
    }

    fn from_i64(&self, n: i64) -> FieldElement {
        if self.is_rationals() {
            FieldElement::Rational(BigRational::from_integer(BigInt::from(n)))
        } else {
            let p = self.characteristic as i128;
            self.residue((((n as i128) % p + p) % p) as u64)
        }
    }

    fn is_zero(&self, a: &FieldElement) -> bool {
        match a {
            FieldElement::Rational(q) => q.is_zero(),
            FieldElement::Residue { value, .. } => *value == 0,
        }
    }

    fn is_one(&self, a: &FieldElement) -> bool {
        match a {
            FieldElement::Rational(q) => q.is_one(),
            FieldElement::Residue { value, .. } => *value == 1,
        }
    }

    fn add(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        both!(a, b, x, y, x + y, |x: u64, y: u64, p: u64| {
            let s = x + y;
            if s >= p {
                s - p
            } else {
                s
            }
        })
    }

    fn sub(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        both!(a, b, x, y, x - y, |x: u64, y: u64, p: u64| if x >= y {
            x - y
        } else {
            x + p - y
        })
    }

    fn mul(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        both!(a, b, x, y, x * y, mul_mod)
    }

    fn neg(&self, a: &FieldElement) -> FieldElement {
        match a {
            FieldElement::Rational(q) => FieldElement::Rational(-q),
            FieldElement::Residue { value, modulus } => FieldElement::Residue {
                value: if *value == 0 { 0 } else { modulus - value },
                modulus: *modulus,
            },
        }
    }

    fn inv(&self, a: &FieldElement) -> Result<FieldElement> {
        if Field::is_zero(self, a) {
            return Err(Error::DivisionByZero);
        }
        Ok(match a {
            FieldElement::Rational(q) => FieldElement::Rational(q.recip()),
            FieldElement::Residue { value, modulus } => FieldElement::Residue {
                value: pow_mod(*value, modulus - 2, *modulus),
                modulus: *modulus,
            },
        })
    }

    fn characteristic(&self) -> u64 {
        self.characteristic
    }

    fn coeff_text(&self, a: &FieldElement) -> CoeffText {
        match a {
            FieldElement::Rational(q) => {
                let abs = q.abs();
                CoeffText {
                    negative: q.is_negative(),
                    unit: abs.is_one(),
                    text: FieldElement::Rational(abs).to_string(),
                }
            }
            FieldElement::Residue { value, .. } => CoeffText {
                negative: false,
                unit: *value == 1,
                text: value.to_string(),
            },
        }
    }

    fn describe(&self) -> String {
        self.to_string()
    }
}
