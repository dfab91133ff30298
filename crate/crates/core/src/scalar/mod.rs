//! Exact scalars: bigint rationals and rational functions in two parameters.
//!
//! Linear algebra elsewhere in the crate is generic over [`Field`]; the
//! [`Scalar`] enum is the tagged form used at I/O boundaries.

mod parse;
mod poly;
mod ratfunc;

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};
use thiserror::Error;

pub use parse::parse_expr;
pub use poly::{Mono, Poly};
pub use ratfunc::RatFunc;

pub type Rational = num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("cannot combine a rational with a rational function")]
    VariantMismatch,
    #[error("valuation of zero is undefined")]
    ZeroArgument,
    #[error("{0} is not a prime")]
    NotPrime(String),
    #[error("parse error: {0}")]
    Parse(String),
}

/// Operations shared by the exact coefficient fields.
pub trait Field: Clone + PartialEq + Eq + fmt::Debug + fmt::Display + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn inv(&self) -> Option<Self>;
    fn from_rational(r: &Rational) -> Self;
    /// The value as a rational, when it has no parameter dependence.
    fn as_rational(&self) -> Option<Rational>;
    /// Canonical string used in JSON output.
    fn to_wire(&self) -> String;
    /// Reads the canonical string form (and general expressions).
    fn parse_wire(s: &str) -> Result<Self, ScalarError>;

    fn from_int(n: i64) -> Self {
        Self::from_rational(&Rational::from_integer(n.into()))
    }

    fn div(&self, o: &Self) -> Option<Self> {
        o.inv().map(|i| self.mul(&i))
    }

    fn is_one(&self) -> bool {
        *self == Self::one()
    }

    /// Total degree in the parameters; zero for constants.
    fn degree(&self) -> u32 {
        0
    }
}

impl Field for Rational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self.clone()
    }
    fn inv(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }
    fn as_rational(&self) -> Option<Rational> {
        Some(self.clone())
    }
    fn to_wire(&self) -> String {
        format!("{}/{}", self.numer(), self.denom())
    }
    fn parse_wire(s: &str) -> Result<Self, ScalarError> {
        parse_expr::<Rational>(s, |_| None)
    }
}

impl Field for RatFunc {
    fn zero() -> Self {
        RatFunc::constant(int(0))
    }
    fn one() -> Self {
        RatFunc::constant(int(1))
    }
    fn is_zero(&self) -> bool {
        RatFunc::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        RatFunc::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        RatFunc::sub(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        RatFunc::mul(self, o)
    }
    fn neg(&self) -> Self {
        RatFunc::neg(self)
    }
    fn inv(&self) -> Option<Self> {
        RatFunc::inv(self)
    }
    fn from_rational(r: &Rational) -> Self {
        RatFunc::constant(r.clone())
    }
    fn as_rational(&self) -> Option<Rational> {
        self.as_constant()
    }
    fn to_wire(&self) -> String {
        self.to_string()
    }
    fn degree(&self) -> u32 {
        RatFunc::degree(self)
    }
    fn parse_wire(s: &str) -> Result<Self, ScalarError> {
        parse_expr::<RatFunc>(s, |c| match c {
            'a' => Some(RatFunc::var_a()),
            'b' => Some(RatFunc::var_b()),
            _ => None,
        })
    }
}

/// A scalar of either kind. Arithmetic never mixes the two.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Scalar {
    Rational(Rational),
    RatFunc(RatFunc),
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

fn apply<F: Field>(op: ArithOp, x: &F, y: &F) -> Result<F, ScalarError> {
    Ok(match op {
        ArithOp::Add => x.add(y),
        ArithOp::Sub => x.sub(y),
        ArithOp::Mul => x.mul(y),
        ArithOp::Div => x.div(y).ok_or(ScalarError::DivisionByZero)?,
    })
}

/// Applies `op` to two scalars of the same kind.
pub fn field_arith(op: ArithOp, x: &Scalar, y: &Scalar) -> Result<Scalar, ScalarError> {
    match (x, y) {
        (Scalar::Rational(x), Scalar::Rational(y)) => apply(op, x, y).map(Scalar::Rational),
        (Scalar::RatFunc(x), Scalar::RatFunc(y)) => apply(op, x, y).map(Scalar::RatFunc),
        _ => Err(ScalarError::VariantMismatch),
    }
}

impl Scalar {
    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(r) => Zero::is_zero(r),
            Scalar::RatFunc(f) => f.is_zero(),
        }
    }

    pub fn to_wire(&self) -> String {
        match self {
            Scalar::Rational(r) => Field::to_wire(r),
            Scalar::RatFunc(f) => Field::to_wire(f),
        }
    }

    /// Reads a rational (`symbolic = false`) or a rational function in `a`, `b`.
    pub fn parse(s: &str, symbolic: bool) -> Result<Scalar, ScalarError> {
        if symbolic {
            RatFunc::parse_wire(s).map(Scalar::RatFunc)
        } else {
            Rational::parse_wire(s).map(Scalar::Rational)
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_wire())
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_wire())
    }
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn int_val(n: &BigInt, p: &BigInt) -> i64 {
    let mut n = n.abs();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(p);
        if !Zero::is_zero(&r) {
            return v;
        }
        n = q;
        v += 1;
    }
}

/// The exponent of `p` in `x`.
pub fn padic_val(x: &Rational, p: u64) -> Result<i64, ScalarError> {
    if !is_prime(p) {
        return Err(ScalarError::NotPrime(p.to_string()));
    }
    if Zero::is_zero(x) {
        return Err(ScalarError::ZeroArgument);
    }
    let pb = BigInt::from(p);
    Ok(int_val(x.numer(), &pb) - int_val(x.denom(), &pb))
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rf(s: &str) -> RatFunc {
        RatFunc::parse_wire(s).unwrap()
    }

    #[test]
    fn rational_sum() {
        let x = Scalar::parse("1/2", false).unwrap();
        let y = Scalar::parse("1/3", false).unwrap();
        let z = field_arith(ArithOp::Add, &x, &y).unwrap();
        assert_eq!(z.to_wire(), "5/6");
    }

    #[test]
    fn cancellation_to_one() {
        let x = rf("(a+b)/b");
        let y = rf("b/(a+b)");
        assert_eq!(x.mul(&y), RatFunc::one());
    }

    #[test]
    fn common_factor_cancels() {
        let x = rf("(a*b+a+b)/((a*b+a+b)*(b+1))");
        assert_eq!(x, rf("1/(b+1)"));
        assert_eq!(x.to_wire(), "1/(b + 1)");
    }

    #[test]
    fn bivariate_gcd_cancels() {
        let x = rf("((a+b)*(a-b)*(a*b+1))/((a-b)^2*(a*b+1)*(a+2))");
        assert_eq!(x, rf("(a+b)/((a-b)*(a+2))"));
    }

    #[test]
    fn valuations() {
        assert_eq!(padic_val(&int(8), 2), Ok(3));
        assert_eq!(padic_val(&rat(2, 9), 3), Ok(-2));
        assert_eq!(padic_val(&int(6), 5), Ok(0));
        assert_eq!(padic_val(&int(0), 5), Err(ScalarError::ZeroArgument));
    }

    #[test]
    fn mixing_kinds_fails() {
        let x = Scalar::parse("1/2", false).unwrap();
        let y = Scalar::parse("a", true).unwrap();
        assert_eq!(field_arith(ArithOp::Mul, &x, &y), Err(ScalarError::VariantMismatch));
    }

    #[test]
    fn zero_divisor() {
        let x = Scalar::parse("1", false).unwrap();
        let y = Scalar::parse("0", false).unwrap();
        assert_eq!(field_arith(ArithOp::Div, &x, &y), Err(ScalarError::DivisionByZero));
        assert!(RatFunc::parse_wire("1/(a-a)").is_err());
    }

    #[test]
    fn wire_round_trip() {
        for s in ["2/(b+1)", "(2*a+2)/(a*b+a+b)", "-a^2*b/3 + 7", "(a - b)/(a*b)", "3/a", "0"] {
            let x = rf(s);
            assert_eq!(rf(&x.to_wire()), x, "{s} -> {}", x.to_wire());
        }
        let q = rat(-7, 3);
        assert_eq!(Rational::parse_wire(&q.to_wire()).unwrap(), q);
    }
}
