//! Bivariate polynomials over the rationals in the variables `a` and `b`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use super::Rational;

/// Exponent pair `a^da * b^db`, ordered graded-lexicographically with `a > b`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Mono {
    pub a: u32,
    pub b: u32,
}

impl Mono {
    pub const ONE: Mono = Mono { a: 0, b: 0 };

    pub fn degree(self) -> u32 {
        self.a + self.b
    }

    fn divides(self, other: Mono) -> bool {
        self.a <= other.a && self.b <= other.b
    }
}

impl Ord for Mono {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then(self.a.cmp(&other.a))
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse polynomial; zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Poly {
    terms: BTreeMap<Mono, Rational>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Poly::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Poly::monomial(c, Mono::ONE)
    }

    pub fn monomial(c: Rational, m: Mono) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { terms }
    }

    pub fn var_a() -> Self {
        Poly::monomial(Rational::one(), Mono { a: 1, b: 0 })
    }

    pub fn var_b() -> Self {
        Poly::monomial(Rational::one(), Mono { a: 0, b: 1 })
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .get(&Mono::ONE)
                .map(|c| c.is_one())
                .unwrap_or(false)
    }

    /// The value if the polynomial has no variable part.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&Mono::ONE).cloned(),
            _ => None,
        }
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Mono, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn leading(&self) -> Option<(Mono, &Rational)> {
        self.terms.iter().next_back().map(|(m, c)| (*m, c))
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }

    pub fn degree_a(&self) -> u32 {
        self.terms.keys().map(|m| m.a).max().unwrap_or(0)
    }

    fn add_term(&mut self, m: Mono, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                *existing += c;
                if existing.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, -c.clone());
        }
        out
    }

    pub fn neg(&self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (*m, -c.clone())).collect(),
        }
    }

    pub fn scale(&self, k: &Rational) -> Poly {
        if k.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, c)| (*m, c * k)).collect(),
        }
    }

    fn mul_mono(&self, k: &Rational, m: Mono) -> Poly {
        if k.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(t, c)| (Mono { a: t.a + m.a, b: t.b + m.b }, c * k))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(Mono { a: m1.a + m2.a, b: m1.b + m2.b }, c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut out = Poly::one();
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    pub fn eval(&self, a: &Rational, b: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            acc += c * num_traits::pow(a.clone(), m.a as usize) * num_traits::pow(b.clone(), m.b as usize);
        }
        acc
    }

    /// Divides by the leading coefficient; the zero polynomial is returned unchanged.
    pub fn monic(&self) -> Poly {
        match self.leading() {
            Some((_, c)) => {
                let inv = c.recip();
                self.scale(&inv)
            }
            None => Poly::zero(),
        }
    }

    /// Exact quotient `self / d`, or `None` when `d` does not divide `self`.
    pub fn exact_div(&self, d: &Poly) -> Option<Poly> {
        let (dm, dc) = d.leading()?;
        let dc_inv = dc.recip();
        let mut rem = self.clone();
        let mut quot = Poly::zero();
        while let Some((rm, rc)) = rem.leading() {
            if !dm.divides(rm) {
                return None;
            }
            let qm = Mono { a: rm.a - dm.a, b: rm.b - dm.b };
            let qc = rc * &dc_inv;
            rem = rem.sub(&d.mul_mono(&qc, qm));
            quot.add_term(qm, qc);
        }
        Some(quot)
    }

    /// Coefficients with respect to `a`, each a polynomial in `b` alone.
    fn coeffs_in_a(&self) -> Vec<Poly> {
        let mut out = vec![Poly::zero(); self.degree_a() as usize + 1];
        for (m, c) in &self.terms {
            out[m.a as usize].add_term(Mono { a: 0, b: m.b }, c.clone());
        }
        out
    }

    fn leading_coeff_in_a(&self) -> Poly {
        let d = self.degree_a();
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            if m.a == d {
                out.add_term(Mono { a: 0, b: m.b }, c.clone());
            }
        }
        out
    }

    /// Content with respect to `a`: monic gcd of the `b`-polynomial coefficients.
    fn content_in_a(&self) -> Poly {
        let mut g = Poly::zero();
        for c in self.coeffs_in_a() {
            if !c.is_zero() {
                g = uni_gcd(&g, &c);
                if g.is_one() {
                    break;
                }
            }
        }
        g
    }

    fn primitive_in_a(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let c = self.content_in_a();
        self.exact_div(&c).expect("content divides").monic()
    }

    /// Pseudo-remainder with respect to `a`.
    fn prem_in_a(&self, g: &Poly) -> Poly {
        let dg = g.degree_a();
        let lg = g.leading_coeff_in_a();
        let mut r = self.clone();
        while !r.is_zero() && r.degree_a() >= dg {
            let shift = r.degree_a() - dg;
            let lr = r.leading_coeff_in_a();
            let shifted = g.mul(&lr).mul_mono(&Rational::one(), Mono { a: shift, b: 0 });
            r = r.mul(&lg).sub(&shifted);
        }
        r
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Poly) -> Poly {
        if self.is_zero() {
            return other.monic();
        }
        if other.is_zero() {
            return self.monic();
        }
        if self.degree_a() == 0 && other.degree_a() == 0 {
            return uni_gcd(self, other);
        }
        let cont = uni_gcd(&self.content_in_a(), &other.content_in_a());
        let mut f = self.primitive_in_a();
        let mut g = other.primitive_in_a();
        if f.degree_a() < g.degree_a() {
            std::mem::swap(&mut f, &mut g);
        }
        while !g.is_zero() {
            let r = f.prem_in_a(&g);
            f = g;
            g = r.primitive_in_a();
        }
        let prim = if f.degree_a() == 0 { Poly::one() } else { f.primitive_in_a() };
        prim.mul(&cont).monic()
    }
}

fn to_dense_b(p: &Poly) -> Vec<Rational> {
    let deg = p.terms.keys().map(|m| m.b).max().unwrap_or(0) as usize;
    let mut out = vec![Rational::zero(); deg + 1];
    for (m, c) in &p.terms {
        debug_assert_eq!(m.a, 0);
        out[m.b as usize] = c.clone();
    }
    out
}

fn from_dense_b(v: &[Rational]) -> Poly {
    let mut p = Poly::zero();
    for (i, c) in v.iter().enumerate() {
        p.add_term(Mono { a: 0, b: i as u32 }, c.clone());
    }
    p
}

fn trim(v: &mut Vec<Rational>) {
    while v.len() > 1 && v.last().map(|c| c.is_zero()).unwrap_or(false) {
        v.pop();
    }
}

fn dense_rem(f: &[Rational], g: &[Rational]) -> Vec<Rational> {
    let mut r = f.to_vec();
    trim(&mut r);
    let dg = g.len() - 1;
    let lg = &g[dg];
    while r.len() > dg && !(r.len() == 1 && r[0].is_zero()) {
        let k = r.len() - 1 - dg;
        let q = &r[r.len() - 1] / lg;
        for (i, gc) in g.iter().enumerate() {
            r[i + k] -= &q * gc;
        }
        r.pop();
        if r.is_empty() {
            r.push(Rational::zero());
        }
        trim(&mut r);
    }
    r
}

/// Monic gcd of two polynomials in `b` alone (Euclid over the rationals).
fn uni_gcd(f: &Poly, g: &Poly) -> Poly {
    if f.is_zero() {
        return g.monic();
    }
    if g.is_zero() {
        return f.monic();
    }
    let mut x = to_dense_b(f);
    let mut y = to_dense_b(g);
    trim(&mut x);
    trim(&mut y);
    loop {
        if y.len() == 1 && y[0].is_zero() {
            return from_dense_b(&x).monic();
        }
        let r = dense_rem(&x, &y);
        x = y;
        y = r;
    }
}

fn fmt_mono(m: Mono) -> String {
    let mut parts = Vec::new();
    for (name, e) in [("a", m.a), ("b", m.b)] {
        match e {
            0 => {}
            1 => parts.push(name.to_string()),
            _ => parts.push(format!("{name}^{e}")),
        }
    }
    parts.join("*")
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            let mono = fmt_mono(*m);
            if mono.is_empty() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{abs}*{mono}")?;
            }
        }
        Ok(())
    }
}
