//! Hecke eigenvalues at an unramified prime, the associated Frobenius
//! characteristic polynomial, and the classicality inequalities for points
//! of small slope.

use std::fmt;

use num_traits::Signed;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::phi_module::{weak_admissibility_for, all_subsets, HodgeFiltration};
use crate::scalar::{int, is_prime, padic_val, Field, Rational, ScalarError};
use crate::symplectic::{Flag, FlagKind};
use crate::weyl::WeylElement;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HeckeError {
    #[error("invalid data: {0}")]
    InvalidData(String),
    #[error("inconsistent data: {0}")]
    InconsistentData(String),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

/// Eigenvalues `c0, c1, c2` of the three spherical Hecke operators at `l`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeckeData {
    pub l: u64,
    pub c0: Rational,
    pub c1: Rational,
    pub c2: Rational,
}

/// Monic quartic `T^4 + coeffs[1] T^3 + ... + coeffs[4]` with its similitude.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrobeniusData {
    pub coeffs: [Rational; 5],
    pub sim: Rational,
}

fn check_prime(l: u64) -> Result<(), HeckeError> {
    if is_prime(l) {
        Ok(())
    } else {
        Err(HeckeError::InvalidData(format!("{l} is not prime")))
    }
}

pub fn hecke_charpoly(d: &HeckeData) -> Result<FrobeniusData, HeckeError> {
    check_prime(d.l)?;
    if d.c0 == int(0) {
        return Err(HeckeError::InvalidData("c0 must be invertible".into()));
    }
    let l = int(d.l as i64);
    let l3 = &l * &l * &l;
    let sim = &l3 * &d.c0;
    let coeffs = [
        int(1),
        -d.c1.clone(),
        (&l3 + &l) * &d.c0 + &l * &d.c2,
        -(&sim * &d.c1),
        &sim * &sim,
    ];
    Ok(FrobeniusData { coeffs, sim })
}

/// Eigenvalues cut out by the generators of the maximal ideal attached to `f`.
pub fn ideal_generators(f: &FrobeniusData, l: u64) -> Result<HeckeData, HeckeError> {
    check_prime(l)?;
    let [lead, c3, a2, a1, a0] = &f.coeffs;
    if *lead != int(1) {
        return Err(HeckeError::InconsistentData("polynomial is not monic".into()));
    }
    if f.sim == int(0) {
        return Err(HeckeError::InconsistentData("similitude vanishes".into()));
    }
    if *a0 != &f.sim * &f.sim {
        return Err(HeckeError::InconsistentData(format!("constant term {a0} is not sim^2 = {}", &f.sim * &f.sim)));
    }
    if *a1 != &f.sim * c3 {
        return Err(HeckeError::InconsistentData(format!("linear term {a1} is not -sim*trace = {}", &f.sim * c3)));
    }
    let l = int(l as i64);
    let l3 = &l * &l * &l;
    let c0 = &f.sim / &l3;
    let c1 = -c3.clone();
    let c2 = a2 / &l - (int(1) / &l + int(1) / &l3) * &f.sim;
    Ok(HeckeData { l: l.to_integer().try_into().expect("small prime"), c0, c1, c2 })
}

impl fmt::Display for FrobeniusData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::from("T^4");
        for (k, c) in self.coeffs.iter().enumerate().skip(1) {
            if *c == int(0) {
                continue;
            }
            let deg = 4 - k;
            let sign = if c.is_negative() { " - " } else { " + " };
            let mag = c.abs().to_wire();
            let mag = mag.strip_suffix("/1").unwrap_or(&mag).to_string();
            let term = match (deg, mag.as_str()) {
                (0, m) => m.to_string(),
                (1, "1") => "T".into(),
                (_, "1") => format!("T^{deg}"),
                (1, m) => format!("{m}*T"),
                (_, m) => format!("{m}*T^{deg}"),
            };
            out.push_str(sign);
            out.push_str(&term);
        }
        write!(f, "{out}")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HeckeJson {
    pub l: u64,
    pub c0: String,
    pub c1: String,
    pub c2: String,
}

impl HeckeJson {
    pub fn parse(&self) -> Result<HeckeData, HeckeError> {
        Ok(HeckeData {
            l: self.l,
            c0: Rational::parse_wire(&self.c0)?,
            c1: Rational::parse_wire(&self.c1)?,
            c2: Rational::parse_wire(&self.c2)?,
        })
    }
}

impl From<&HeckeData> for HeckeJson {
    fn from(d: &HeckeData) -> Self {
        HeckeJson { l: d.l, c0: d.c0.to_wire(), c1: d.c1.to_wire(), c2: d.c2.to_wire() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FrobeniusJson {
    pub coeffs: Vec<String>,
    pub sim: String,
    pub polynomial: String,
}

impl From<&FrobeniusData> for FrobeniusJson {
    fn from(f: &FrobeniusData) -> Self {
        FrobeniusJson { coeffs: f.coeffs.iter().map(|c| c.to_wire()).collect(), sim: f.sim.to_wire(), polynomial: f.to_string() }
    }
}

pub const GAP_SLOPE: i64 = 20170901;
pub const GAP_OFFSET: i64 = 20260630;

/// A nonzero `p`-adic number written `unit * p^exp` with `unit` prime to `p`,
/// so that huge powers of `p` never have to be expanded.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PadicNumber {
    pub unit: Rational,
    pub exp: i64,
}

impl PadicNumber {
    pub fn new(x: &Rational, exp: i64, p: u64) -> Result<Self, HeckeError> {
        if *x == int(0) {
            return Err(HeckeError::InvalidData("zero eigenvalue".into()));
        }
        let v = padic_val(x, p)?;
        let pv = int(p as i64);
        let unit = if v >= 0 { x / pv.pow(v as i32) } else { x * pv.pow((-v) as i32) };
        Ok(PadicNumber { unit, exp: exp + v })
    }

    /// Accepts `x`, `p^k`, or `x*p^k` with `x` a rational in wire form.
    pub fn parse(s: &str, p: u64) -> Result<Self, HeckeError> {
        let s = s.trim();
        let (coef, exp) = match s.split_once("p^") {
            Some((head, k)) => {
                let k: i64 = k.trim().parse().map_err(|_| HeckeError::InvalidData(format!("bad exponent in {s:?}")))?;
                let head = head.trim().trim_end_matches('*').trim();
                (if head.is_empty() { int(1) } else { Rational::parse_wire(head)? }, k)
            }
            None => (Rational::parse_wire(s)?, 0),
        };
        PadicNumber::new(&coef, exp, p)
    }

    pub fn mul(&self, o: &Self) -> Self {
        PadicNumber { unit: &self.unit * &o.unit, exp: self.exp + o.exp }
    }

    pub fn val(&self) -> i64 {
        self.exp
    }
}

impl fmt::Display for PadicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*p^{}", self.unit.to_wire(), self.exp)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassifyJson {
    pub alphas: [String; 4],
    pub weights: [i64; 4],
    pub p: u64,
    #[serde(rename = "C")]
    pub c: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundCheck {
    pub index: usize,
    /// `h_i + val_p(alpha_i)`.
    pub per_index: i64,
    /// `h_i + val_p(alpha_1)`, the reading with the first eigenvalue throughout.
    pub first_alpha: i64,
    pub per_index_ok: bool,
    pub first_alpha_ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RefinementCheck {
    pub w: String,
    /// `sum_{j<=i} (h_{w'^{-1}(j)} + val_p(alpha_j))` for `i = 1..4`, `w'` the dual element.
    pub partial_sums: [i64; 4],
    pub partial_sums_ok: bool,
    /// Newton above Hodge on every eigen-subspace, equality on the whole space.
    pub admissible: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassifyReport {
    pub valuations: [i64; 4],
    pub bounds: Vec<BoundCheck>,
    pub bound_ok: bool,
    pub bound_ok_first_alpha: bool,
    pub readings_differ: bool,
    pub gap_threshold: String,
    pub gaps: [i64; 3],
    pub gap_ok: bool,
    pub admissible_total: bool,
    pub refinements: Vec<RefinementCheck>,
    pub w_set: Vec<String>,
    pub very_classical: bool,
}

/// `sigma(j) = w'^{-1}(j)` with `w'` the dual element: `e_j` sits in `gr^{-h_{sigma(j)}}`.
fn hodge_position(w: &WeylElement) -> WeylElement {
    w.check().inverse()
}

pub fn condition_partial_sums(vals: &[i64; 4], weights: &[i64; 4], w: &WeylElement) -> [i64; 4] {
    let sigma = hodge_position(w);
    let mut acc = 0;
    std::array::from_fn(|j| {
        acc += weights[sigma.apply(j + 1) - 1] + vals[j];
        acc
    })
}

/// Admissibility of the eigenbasis module whose Hodge filtration is the
/// coordinate flag in position `w`, read off subset sums.
pub fn refinement_admissible(vals: &[i64; 4], weights: &[i64; 4], w: &WeylElement) -> bool {
    let sigma = hodge_position(w);
    let total: i64 = (0..4).map(|j| vals[j] + weights[sigma.apply(j + 1) - 1]).sum();
    total == 0 && all_subsets().iter().all(|s| s.iter().map(|&j| vals[j] + weights[sigma.apply(j + 1) - 1]).sum::<i64>() >= 0)
}

/// The same module with an explicit coordinate filtration, fed to the
/// subspace-intersection checker.
pub fn coordinate_filtration(w: &WeylElement) -> HodgeFiltration<Rational> {
    let sigma = hodge_position(w);
    // v_k = e_j with k = 5 - sigma(j)
    let vectors: [Vec<Rational>; 4] = std::array::from_fn(|k| {
        let j = (1..=4).find(|&j| 5 - sigma.apply(j) == k + 1).expect("permutation");
        (1..=4).map(|i| int((i == j) as i64)).collect()
    });
    let flag = Flag::from_vectors(FlagKind::Complete, &vectors).expect("coordinate flag");
    HodgeFiltration { vectors, flag }
}

pub fn refinement_admissible_brute(vals: &[i64; 4], weights: &[i64; 4], w: &WeylElement) -> bool {
    weak_admissibility_for(vals, weights, &coordinate_filtration(w)).admissible
}

pub fn classicality_classify(
    alphas: &[PadicNumber; 4],
    weights: &[i64; 4],
    p: u64,
    c: &Rational,
) -> Result<ClassifyReport, HeckeError> {
    if !is_prime(p) {
        return Err(HeckeError::InvalidData(format!("{p} is not prime")));
    }
    if !c.is_positive() {
        return Err(HeckeError::InvalidData("C must be positive".into()));
    }
    if weights.windows(2).any(|w| w[0] <= w[1]) {
        return Err(HeckeError::InvalidData("weights must be strictly decreasing".into()));
    }
    if weights[0] + weights[3] != weights[1] + weights[2] {
        return Err(HeckeError::InvalidData("weights must satisfy h1 + h4 = h2 + h3".into()));
    }
    if alphas[0].mul(&alphas[3]) != alphas[1].mul(&alphas[2]) {
        return Err(HeckeError::InvalidData("eigenvalues must satisfy a1*a4 = a2*a3".into()));
    }
    let vals = alphas.clone().map(|a| a.val());
    let in_bound = |x: i64| -c <= int(x) && int(x) <= *c;
    let bounds: Vec<BoundCheck> = (0..4)
        .map(|i| {
            let per_index = weights[i] + vals[i];
            let first_alpha = weights[i] + vals[0];
            BoundCheck { index: i + 1, per_index, first_alpha, per_index_ok: in_bound(per_index), first_alpha_ok: in_bound(first_alpha) }
        })
        .collect();
    let bound_ok = bounds.iter().all(|b| b.per_index_ok);
    let bound_ok_first_alpha = bounds.iter().all(|b| b.first_alpha_ok);
    let threshold = int(GAP_SLOPE) * c + int(GAP_OFFSET);
    let gaps: [i64; 3] = std::array::from_fn(|i| weights[i] - weights[i + 1]);
    let gap_ok = gaps.iter().all(|&g| int(g) > threshold);
    let admissible_total = vals.iter().sum::<i64>() + weights.iter().sum::<i64>() == 0;
    let refinements: Vec<RefinementCheck> = WeylElement::all()
        .iter()
        .map(|w| {
            let partial_sums = condition_partial_sums(&vals, weights, w);
            RefinementCheck {
                w: w.word_string(),
                partial_sums,
                partial_sums_ok: partial_sums[..3].iter().all(|&s| s >= 0) && partial_sums[3] == 0,
                admissible: refinement_admissible(&vals, weights, w),
            }
        })
        .collect();
    let w_set: Vec<String> = refinements.iter().filter(|r| r.admissible).map(|r| r.w.clone()).collect();
    let very_classical = w_set == ["id"];
    Ok(ClassifyReport {
        valuations: vals,
        bounds,
        bound_ok,
        bound_ok_first_alpha,
        readings_differ: bound_ok != bound_ok_first_alpha,
        gap_threshold: threshold.to_wire(),
        gaps,
        gap_ok,
        admissible_total,
        refinements,
        w_set,
        very_classical,
    })
}

impl ClassifyJson {
    pub fn run(&self) -> Result<ClassifyReport, HeckeError> {
        check_prime(self.p)?;
        let alphas: Vec<PadicNumber> =
            self.alphas.iter().map(|s| PadicNumber::parse(s, self.p)).collect::<Result<_, _>>()?;
        let alphas: [PadicNumber; 4] = alphas.try_into().expect("four entries");
        let c = Rational::parse_wire(&self.c)?;
        classicality_classify(&alphas, &self.weights, self.p, &c)
    }
}
