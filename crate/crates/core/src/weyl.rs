//! The Weyl group of the similitude group as signed permutations of four
//! indices, its actions on weights, cocharacter tuples and characters, and the
//! reparametrisation map between the torus and its dual.
//!
//! Weights are triples `(n1, n2, n3)` standing for `n1 t1 + n2 t2 + n3 (t1 + t4)`
//! on a torus element `t = diag(t1, t2, t3, t4)` with `t1 + t4 = t2 + t3`.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;

use num_traits::Signed;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::scalar::{int, rat, Field, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WeylError {
    #[error("tuple violates m1 + m4 = m2 + m3")]
    ConstraintViolated,
    #[error("not a Weyl group element: {0}")]
    BadElement(String),
}

/// A permutation `w` of `{1,2,3,4}` with `w(1) + w(4) = w(2) + w(3) = 5`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct WeylElement {
    // 0-based one-line notation: image[i] = w(i + 1) - 1
    image: [u8; 4],
}

impl WeylElement {
    pub fn from_one_line(one_line: [u8; 4]) -> Result<Self, WeylError> {
        let mut seen = [false; 4];
        for &x in &one_line {
            if !(1..=4).contains(&x) || seen[x as usize - 1] {
                return Err(WeylError::BadElement(format!("{one_line:?}")));
            }
            seen[x as usize - 1] = true;
        }
        if one_line[0] + one_line[3] != 5 || one_line[1] + one_line[2] != 5 {
            return Err(WeylError::BadElement(format!("{one_line:?} does not preserve the pairing")));
        }
        Ok(WeylElement { image: one_line.map(|x| x - 1) })
    }

    pub fn identity() -> Self {
        WeylElement { image: [0, 1, 2, 3] }
    }

    pub fn s1() -> Self {
        WeylElement { image: [1, 0, 3, 2] }
    }

    pub fn s2() -> Self {
        WeylElement { image: [0, 2, 1, 3] }
    }

    /// The longest element.
    pub fn s0() -> Self {
        WeylElement { image: [3, 2, 1, 0] }
    }

    pub fn generator(i: u8) -> Self {
        match i {
            1 => Self::s1(),
            2 => Self::s2(),
            _ => panic!("generator index must be 1 or 2"),
        }
    }

    pub fn one_line(&self) -> [u8; 4] {
        self.image.map(|x| x + 1)
    }

    /// `w(j)` for 1-based `j`.
    pub fn apply(&self, j: usize) -> usize {
        self.image[j - 1] as usize + 1
    }

    /// The product `self * other`, acting as `other` first.
    pub fn compose(&self, other: &Self) -> Self {
        WeylElement { image: other.image.map(|j| self.image[j as usize]) }
    }

    pub fn inverse(&self) -> Self {
        let mut inv = [0u8; 4];
        for (i, &j) in self.image.iter().enumerate() {
            inv[j as usize] = i as u8;
        }
        WeylElement { image: inv }
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity()
    }

    pub fn from_word(word: &[u8]) -> Self {
        word.iter().fold(Self::identity(), |acc, &i| acc.compose(&Self::generator(i)))
    }

    /// The eight elements ordered by length, then by reduced word.
    pub fn all() -> Vec<Self> {
        reduced_words().into_iter().map(|(w, _)| w).collect()
    }

    /// Lexicographically least reduced word in the generators.
    pub fn reduced_word(&self) -> Vec<u8> {
        reduced_words()
            .into_iter()
            .find(|(w, _)| w == self)
            .map(|(_, word)| word)
            .expect("every element has a word")
    }

    pub fn length(&self) -> usize {
        self.reduced_word().len()
    }

    /// The image under the automorphism exchanging the two generators.
    pub fn check(&self) -> Self {
        let word: Vec<u8> = self.reduced_word().iter().map(|&i| 3 - i).collect();
        Self::from_word(&word)
    }

    /// Position in [`WeylElement::all`].
    pub fn index(&self) -> usize {
        Self::all().iter().position(|w| w == self).expect("element of W")
    }

    pub fn word_string(&self) -> String {
        let word = self.reduced_word();
        if word.is_empty() {
            "id".to_string()
        } else {
            word.iter().map(|i| format!("s{i}")).collect()
        }
    }

    /// Reads `id`, a word such as `s1s2s1`, or one-line notation `[2,1,4,3]`.
    pub fn parse(s: &str) -> Result<Self, WeylError> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if t == "id" || t == "1" || t == "e" {
            return Ok(Self::identity());
        }
        if t == "s0" {
            return Ok(Self::s0());
        }
        if let Some(inner) = t.strip_prefix('[').and_then(|x| x.strip_suffix(']')) {
            let parts: Vec<u8> = inner
                .split(',')
                .map(|x| x.parse::<u8>())
                .collect::<Result<_, _>>()
                .map_err(|_| WeylError::BadElement(s.into()))?;
            let arr: [u8; 4] = parts.try_into().map_err(|_| WeylError::BadElement(s.into()))?;
            return Self::from_one_line(arr);
        }
        let mut word = Vec::new();
        let mut rest = t.as_str();
        while !rest.is_empty() {
            let r = rest.strip_prefix('s').ok_or_else(|| WeylError::BadElement(s.into()))?;
            let (digit, tail) = r.split_at(1.min(r.len()));
            match digit {
                "1" => word.push(1),
                "2" => word.push(2),
                _ => return Err(WeylError::BadElement(s.into())),
            }
            rest = tail;
        }
        Ok(Self::from_word(&word))
    }

    /// `w . m = (m_{w^{-1}(1)}, ..., m_{w^{-1}(4)})`.
    pub fn act_tuple<T: Clone>(&self, m: &[T; 4]) -> [T; 4] {
        let inv = self.inverse();
        std::array::from_fn(|i| m[inv.image[i] as usize].clone())
    }

    /// Integer matrix of the action on weight coordinates.
    pub fn weight_matrix(&self) -> [[i64; 3]; 3] {
        // (w mu)(t) = mu(w^{-1} . t); evaluate on t = (1,0,0,-1), (0,1,-1,0), (0,0,1,1).
        let probes: [[i64; 4]; 3] = [[1, 0, 0, -1], [0, 1, -1, 0], [0, 0, 1, 1]];
        let inv = self.inverse();
        let mut m = [[0i64; 3]; 3];
        for (k, t) in probes.iter().enumerate() {
            let moved = inv.act_tuple(t);
            // coefficient of n1, n2, n3 in mu(moved)
            m[k] = [moved[0], moved[1], moved[0] + moved[3]];
        }
        m
    }

    pub fn act_weight(&self, mu: &Weight) -> Weight {
        let m = self.weight_matrix();
        Weight(std::array::from_fn(|k| {
            (0..3).fold(int(0), |acc, j| acc + int(m[k][j]) * &mu.0[j])
        }))
    }

    /// `u . lambda = u(lambda + rho) - rho`.
    pub fn dot_action(&self, lambda: &Weight) -> Weight {
        let r = rho();
        self.act_weight(&lambda.add(&r)).sub(&r)
    }
}

fn reduced_words() -> Vec<(WeylElement, Vec<u8>)> {
    let mut found: BTreeMap<WeylElement, Vec<u8>> = BTreeMap::new();
    let mut queue = VecDeque::from([(WeylElement::identity(), Vec::new())]);
    let mut order = Vec::new();
    while let Some((w, word)) = queue.pop_front() {
        if found.contains_key(&w) {
            continue;
        }
        found.insert(w, word.clone());
        order.push((w, word.clone()));
        for g in [1u8, 2] {
            let mut next = word.clone();
            next.push(g);
            queue.push_back((w.compose(&WeylElement::generator(g)), next));
        }
    }
    order
}

impl fmt::Display for WeylElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.word_string())
    }
}

impl Serialize for WeylElement {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.word_string())
    }
}

/// Weight coordinates `(n1, n2, n3)`.
#[derive(Clone, PartialEq, Eq, Debug, Hash)]
pub struct Weight(pub [Rational; 3]);

impl Weight {
    pub fn ints(n1: i64, n2: i64, n3: i64) -> Self {
        Weight([int(n1), int(n2), int(n3)])
    }

    pub fn add(&self, o: &Self) -> Self {
        Weight(std::array::from_fn(|i| &self.0[i] + &o.0[i]))
    }

    pub fn sub(&self, o: &Self) -> Self {
        Weight(std::array::from_fn(|i| &self.0[i] - &o.0[i]))
    }

    pub fn scale(&self, k: &Rational) -> Self {
        Weight(std::array::from_fn(|i| &self.0[i] * k))
    }

    /// `n1 >= n2 >= 0`.
    pub fn is_dominant(&self) -> bool {
        self.0[0] >= self.0[1] && !self.0[1].is_negative()
    }

    /// `n1 > n2 > 0`.
    pub fn is_strictly_dominant(&self) -> bool {
        self.0[0] > self.0[1] && self.0[1].is_positive()
    }
}

impl Serialize for Weight {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.0.iter().map(|x| x.to_wire()).collect::<Vec<_>>().serialize(s)
    }
}

pub fn sim_weight() -> Weight {
    Weight::ints(0, 0, 1)
}

/// Simple roots: `alpha` short, `beta` long.
pub fn alpha() -> Weight {
    Weight::ints(1, -1, 0)
}

pub fn beta() -> Weight {
    Weight::ints(0, 2, -1)
}

pub fn positive_roots() -> [Weight; 4] {
    [alpha(), beta(), alpha().add(&beta()), alpha().scale(&int(2)).add(&beta())]
}

/// Half the sum of the positive roots.
pub fn rho() -> Weight {
    positive_roots()
        .iter()
        .fold(Weight::ints(0, 0, 0), |acc, r| acc.add(r))
        .scale(&rat(1, 2))
}

/// Coroots as exponent tuples of `x -> diag(x^m1, ..., x^m4)`.
pub fn alpha_coroot() -> [i64; 4] {
    [1, -1, 1, -1]
}

pub fn beta_coroot() -> [i64; 4] {
    [0, 1, -1, 0]
}

/// The integer `<mu, m>`.
pub fn pairing(mu: &Weight, m: &[i64; 4]) -> Rational {
    &mu.0[0] * int(m[0]) + &mu.0[1] * int(m[1]) + &mu.0[2] * int(m[0] + m[3])
}

pub fn satisfies_constraint<T: Field>(m: &[T; 4]) -> bool {
    m[0].add(&m[3]) == m[1].add(&m[2])
}

/// `(m1 - m3, m1 - m2, m4)`: a tuple on the diagonal torus read as a weight.
pub fn ell_map<T: Field>(m: &[T; 4]) -> Result<[T; 3], WeylError> {
    if !satisfies_constraint(m) {
        return Err(WeylError::ConstraintViolated);
    }
    Ok([m[0].sub(&m[2]), m[0].sub(&m[1]), m[3].clone()])
}

/// One coordinate of a character of the torus: `x -> unit^{val x} * p^{p_exp val x} * x^{z_exp}`.
///
/// The unit is kept prime to `p`; its `p`-part lives in `p_exp`.
#[derive(Clone, PartialEq, Eq, Debug, Hash, Serialize)]
pub struct CharComponent {
    #[serde(serialize_with = "ser_rational")]
    pub unit: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub p_exp: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub z_exp: Rational,
}

fn ser_rational<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_wire())
}

impl CharComponent {
    fn normalized(unit: Rational, p_exp: Rational, z_exp: Rational, p: u64) -> Self {
        let v = crate::scalar::padic_val(&unit, p).expect("nonzero unit and prime p");
        let shift = num_traits::pow::pow(Rational::from_integer(p.into()), v.unsigned_abs() as usize);
        let unit = if v >= 0 { unit / shift } else { unit * shift };
        CharComponent { unit, p_exp: p_exp + int(v), z_exp }
    }

    fn mul(&self, o: &Self) -> Self {
        CharComponent { unit: &self.unit * &o.unit, p_exp: &self.p_exp + &o.p_exp, z_exp: &self.z_exp + &o.z_exp }
    }

    fn pow(&self, k: i64) -> Self {
        let base = num_traits::pow::pow(self.unit.clone(), k.unsigned_abs() as usize);
        CharComponent {
            unit: if k >= 0 { base } else { base.recip() },
            p_exp: &self.p_exp * int(k),
            z_exp: &self.z_exp * int(k),
        }
    }

    fn trivial() -> Self {
        CharComponent { unit: int(1), p_exp: int(0), z_exp: int(0) }
    }

    /// Whether this is `|.|^k` for some `k` in `{-1, 0, 1}`.
    fn is_small_norm_power(&self) -> bool {
        self.z_exp.is_zero()
            && self.unit.is_one()
            && self.p_exp.is_integer()
            && self.p_exp.abs() <= int(1)
    }
}

/// A character of the torus as three components on `(p1, p2, sim)`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct TChar {
    pub p: u64,
    pub comps: [CharComponent; 3],
}

#[derive(Clone, Debug)]
pub enum CharKind<'a> {
    /// From Frobenius eigenvalues `alpha1..alpha4`.
    Phi(&'a [Rational; 4]),
    Eta,
    /// From Hodge-Tate weights `h1..h4`.
    Lambda(&'a [i64; 4]),
    Delta(WeylElement, &'a [Rational; 4], &'a [i64; 4]),
    /// From four unramified characters given by their values at `p`.
    LlcParam(&'a [Rational; 4]),
}

impl TChar {
    fn from_parts(p: u64, parts: [(Rational, Rational, Rational); 3]) -> Self {
        TChar { p, comps: parts.map(|(u, e, z)| CharComponent::normalized(u, e, z, p)) }
    }

    pub fn mul(&self, o: &Self) -> Self {
        TChar { p: self.p, comps: std::array::from_fn(|i| self.comps[i].mul(&o.comps[i])) }
    }

    pub fn act(&self, w: &WeylElement) -> Self {
        let m = w.weight_matrix();
        TChar {
            p: self.p,
            comps: std::array::from_fn(|k| {
                (0..3).fold(CharComponent::trivial(), |acc, j| acc.mul(&self.comps[j].pow(m[k][j])))
            }),
        }
    }

    /// No component among `phi1, phi2, phi1 phi2, phi1/phi2` is trivial or `|.|^{±1}`.
    pub fn is_generic(&self) -> bool {
        let [c1, c2, _] = &self.comps;
        [c1.clone(), c2.clone(), c1.mul(c2), c1.mul(&c2.pow(-1))]
            .iter()
            .all(|c| !c.is_small_norm_power())
    }
}

pub fn build_char(kind: CharKind<'_>, p: u64) -> TChar {
    let one = || int(1);
    let zero = || int(0);
    match kind {
        CharKind::Phi(a) => TChar::from_parts(
            p,
            [(&a[0] / &a[2], zero(), zero()), (&a[0] / &a[1], zero(), zero()), (a[3].clone(), zero(), zero())],
        ),
        CharKind::Eta => TChar::from_parts(p, [(one(), int(2), zero()), (one(), int(1), zero()), (one(), zero(), zero())]),
        CharKind::Lambda(h) => TChar::from_parts(
            p,
            [(one(), zero(), int(h[0] - h[2] - 2)), (one(), zero(), int(h[0] - h[1] - 1)), (one(), zero(), int(h[3]))],
        ),
        CharKind::Delta(w, a, h) => build_char(CharKind::Phi(a), p)
            .act(&w)
            .mul(&build_char(CharKind::Eta, p))
            .mul(&build_char(CharKind::Lambda(h), p)),
        CharKind::LlcParam(c) => TChar::from_parts(
            p,
            [(&c[0] / &c[2], int(2), zero()), (&c[0] / &c[1], int(1), zero()), (c[3].clone(), rat(-3, 2), zero())],
        ),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn products_in_one_line() {
        let (s1, s2) = (WeylElement::s1(), WeylElement::s2());
        assert_eq!(s1.compose(&s2).one_line(), [2, 4, 1, 3]);
        assert_eq!(s2.compose(&s1).one_line(), [3, 1, 4, 2]);
        assert_eq!(WeylElement::from_word(&[1, 2, 1, 2]), WeylElement::s0());
        assert_eq!(WeylElement::from_word(&[2, 1, 2, 1]), WeylElement::s0());
        assert_eq!(WeylElement::all().len(), 8);
    }

    #[test]
    fn parse_forms() {
        assert_eq!(WeylElement::parse("[2,1,4,3]"), Ok(WeylElement::s1()));
        assert_eq!(WeylElement::parse("s1s2s1s2"), Ok(WeylElement::s0()));
        assert!(WeylElement::parse("[2,1,3,4]").is_err());
        for w in WeylElement::all() {
            assert_eq!(WeylElement::parse(&w.to_string()), Ok(w));
        }
    }

    #[test]
    fn generator_actions() {
        let mu = Weight::ints(5, 3, 7);
        assert_eq!(WeylElement::s1().act_weight(&mu), Weight::ints(3, 5, 7));
        assert_eq!(WeylElement::s2().act_weight(&mu), Weight::ints(5, -3, 10));
    }

    #[test]
    fn rho_value() {
        assert_eq!(rho(), Weight([int(2), int(1), rat(-3, 2)]));
    }

    #[test]
    fn dominance() {
        let w = Weight::ints(3, 1, -5);
        assert!(w.is_dominant() && w.is_strictly_dominant());
        assert!(Weight::ints(2, 2, 0).is_dominant());
        assert!(!Weight::ints(2, 2, 0).is_strictly_dominant());
    }

    #[test]
    fn ell_examples() {
        let h = [int(0), int(-2), int(-4), int(-6)];
        assert_eq!(ell_map(&h), Ok([int(4), int(2), int(-6)]));
        assert_eq!(ell_map(&[int(1), int(0), int(0), int(0)]), Err(WeylError::ConstraintViolated));
    }

    #[test]
    fn eta_and_lambda() {
        let h = [0, -2, -4, -6];
        let l = build_char(CharKind::Lambda(&h), 3);
        assert_eq!(l.comps[0].z_exp, int(2));
        assert_eq!(l.comps[1].z_exp, int(1));
        let eta = build_char(CharKind::Eta, 3);
        assert_eq!(eta.comps[0].p_exp, int(2));
    }
}
