use std::fmt;

use num_traits::{One, Zero};

use super::poly::{Mono, Poly};
use super::{Rational, ScalarError};

/// Reduced quotient of bivariate polynomials with a monic denominator.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl RatFunc {
    pub fn new(num: Poly, den: Poly) -> Result<Self, ScalarError> {
        if den.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(Self::reduce(num, den))
    }

    fn reduce(num: Poly, den: Poly) -> Self {
        if num.is_zero() {
            return RatFunc { num, den: Poly::one() };
        }
        let (num, den) = if den.num_terms() == 1 && den.as_constant().is_some() {
            (num, den)
        } else {
            let g = num.gcd(&den);
            if g.is_one() {
                (num, den)
            } else {
                (
                    num.exact_div(&g).expect("gcd divides numerator"),
                    den.exact_div(&g).expect("gcd divides denominator"),
                )
            }
        };
        Self::normalized(num, den)
    }

    /// Makes the denominator monic; the pair must already be coprime.
    fn normalized(num: Poly, den: Poly) -> Self {
        let lc = den.leading().map(|(_, c)| c.clone()).expect("nonzero denominator");
        if lc.is_one() {
            RatFunc { num, den }
        } else {
            let inv = lc.recip();
            RatFunc { num: num.scale(&inv), den: den.scale(&inv) }
        }
    }

    pub fn from_poly(p: Poly) -> Self {
        RatFunc { num: p, den: Poly::one() }
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_poly(Poly::constant(c))
    }

    pub fn var_a() -> Self {
        Self::from_poly(Poly::var_a())
    }

    pub fn var_b() -> Self {
        Self::from_poly(Poly::var_b())
    }

    pub fn numer(&self) -> &Poly {
        &self.num
    }

    pub fn denom(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn as_constant(&self) -> Option<Rational> {
        let n = self.num.as_constant()?;
        let d = self.den.as_constant()?;
        Some(n / d)
    }

    pub fn degree(&self) -> u32 {
        self.num.total_degree().max(self.den.total_degree())
    }

    pub fn add(&self, o: &Self) -> Self {
        if self.den == o.den {
            return Self::reduce(self.num.add(&o.num), self.den.clone());
        }
        if self.den.is_one() {
            return RatFunc { num: self.num.mul(&o.den).add(&o.num), den: o.den.clone() };
        }
        if o.den.is_one() {
            return RatFunc { num: o.num.mul(&self.den).add(&self.num), den: self.den.clone() };
        }
        // with d = gcd(d1, d2), the cofactors d1/d and d2/d are prime to the new numerator
        let d = self.den.gcd(&o.den);
        let c1 = self.den.exact_div(&d).expect("gcd divides");
        let c2 = o.den.exact_div(&d).expect("gcd divides");
        let t = self.num.mul(&c2).add(&o.num.mul(&c1));
        if t.is_zero() {
            return RatFunc::constant(Rational::zero());
        }
        let g = t.gcd(&d);
        let (t, d) = if g.is_one() {
            (t, d)
        } else {
            (t.exact_div(&g).expect("gcd divides"), d.exact_div(&g).expect("gcd divides"))
        };
        Self::normalized(t, c1.mul(&d).mul(&c2))
    }

    pub fn neg(&self) -> Self {
        RatFunc { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return RatFunc::constant(Rational::zero());
        }
        if self.den.is_one() && o.den.is_one() {
            return RatFunc { num: self.num.mul(&o.num), den: Poly::one() };
        }
        // both inputs are reduced, so only cross factors can cancel
        let (n1, d2) = cancel(&self.num, &o.den);
        let (n2, d1) = cancel(&o.num, &self.den);
        Self::normalized(n1.mul(&n2), d1.mul(&d2))
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        Some(Self::reduce(self.den.clone(), self.num.clone()))
    }

    /// Value at a rational point; `None` where the denominator vanishes.
    pub fn eval(&self, a: &Rational, b: &Rational) -> Option<Rational> {
        let d = self.den.eval(a, b);
        if d.is_zero() {
            None
        } else {
            Some(self.num.eval(a, b) / d)
        }
    }
}

fn needs_parens_as_divisor(p: &Poly) -> bool {
    if p.num_terms() != 1 {
        return true;
    }
    let (m, c) = p.leading().expect("nonzero");
    !(c.is_one() && (m.a == 0 || m.b == 0) && m != Mono::ONE)
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return write!(f, "{}", self.num);
        }
        if self.num.num_terms() > 1 {
            write!(f, "({})", self.num)?;
        } else {
            write!(f, "{}", self.num)?;
        }
        if needs_parens_as_divisor(&self.den) {
            write!(f, "/({})", self.den)
        } else {
            write!(f, "/{}", self.den)
        }
    }
}

fn cancel(n: &Poly, d: &Poly) -> (Poly, Poly) {
    if d.is_one() || n.as_constant().is_some() || d.as_constant().is_some() {
        return (n.clone(), d.clone());
    }
    let g = n.gcd(d);
    if g.is_one() {
        (n.clone(), d.clone())
    } else {
        (n.exact_div(&g).expect("gcd divides"), d.exact_div(&g).expect("gcd divides"))
    }
}
