//! Filtered φ-module data: Frobenius eigenvalues, Hodge-Tate weights and the
//! two parameters `(a, b)` of the Hodge filtration in standard form.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::Subspace;
use crate::scalar::{is_prime, padic_val, Field, Rational, ScalarError};
use crate::symplectic::{perp, Flag, FlagKind};
use crate::weyl::WeylElement;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PhiModuleError {
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error("invalid φ-module data: {0}")]
    Invalid(String),
}

/// Frobenius eigenvalues `alpha_i` on `e_i`, weights `h_i`, and Hodge parameters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhiModuleData<F> {
    pub p: u64,
    pub alphas: [Rational; 4],
    pub weights: [i64; 4],
    pub a: F,
    pub b: F,
}

/// Wire form of [`PhiModuleData`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhiModuleJson {
    pub p: u64,
    pub alphas: [String; 4],
    pub weights: [i64; 4],
    pub a: String,
    pub b: String,
    #[serde(default)]
    pub symbolic: bool,
}

impl PhiModuleJson {
    pub fn parse<F: Field>(&self) -> Result<PhiModuleData<F>, PhiModuleError> {
        let mut alphas = Vec::with_capacity(4);
        for s in &self.alphas {
            alphas.push(<Rational as Field>::parse_wire(s)?);
        }
        Ok(PhiModuleData {
            p: self.p,
            alphas: alphas.try_into().expect("four entries"),
            weights: self.weights,
            a: F::parse_wire(&self.a)?,
            b: F::parse_wire(&self.b)?,
        })
    }
}

impl<F: Field> PhiModuleData<F> {
    pub fn to_json(&self, symbolic: bool) -> PhiModuleJson {
        PhiModuleJson {
            p: self.p,
            alphas: self.alphas.clone().map(|x| x.to_wire()),
            weights: self.weights,
            a: self.a.to_wire(),
            b: self.b.to_wire(),
            symbolic,
        }
    }

    pub fn valuations(&self) -> Result<[i64; 4], PhiModuleError> {
        let mut v = [0; 4];
        for (i, x) in self.alphas.iter().enumerate() {
            v[i] = padic_val(x, self.p)?;
        }
        Ok(v)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    /// True for checks whose failure means the Hodge parameters are degenerate.
    pub degeneracy: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidityReport {
    pub valid: bool,
    pub checks: Vec<Check>,
}

impl ValidityReport {
    pub fn failed(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn structurally_valid(&self) -> bool {
        self.checks.iter().all(|c| c.passed || c.degeneracy)
    }
}

/// The five factors whose product must be nonzero, with their names.
pub fn nondegeneracy_factors<F: Field>(a: &F, b: &F) -> [(&'static str, F); 5] {
    let one = F::one();
    [
        ("a", a.clone()),
        ("b", b.clone()),
        ("b+1", b.add(&one)),
        ("a+b", a.add(b)),
        ("ab+a+b", a.mul(b).add(a).add(b)),
    ]
}

pub fn nondegeneracy_poly<F: Field>(a: &F, b: &F) -> F {
    nondegeneracy_factors(a, b).iter().fold(F::one(), |acc, (_, f)| acc.mul(f))
}

pub fn validate<F: Field>(d: &PhiModuleData<F>) -> ValidityReport {
    let mut checks = Vec::new();
    let mut push = |name, passed: bool, degeneracy, witness: Option<String>| {
        checks.push(Check { name, passed, degeneracy, witness: if passed { None } else { witness } })
    };

    push("p_prime", is_prime(d.p), false, Some(format!("p = {}", d.p)));

    let zero_alpha = d.alphas.iter().position(|x| x.is_zero());
    push("alphas_nonzero", zero_alpha.is_none(), false, zero_alpha.map(|i| format!("alpha{} = 0", i + 1)));

    let lhs = d.alphas[0].mul(&d.alphas[3]);
    let rhs = d.alphas[1].mul(&d.alphas[2]);
    push(
        "alpha_product",
        lhs == rhs,
        false,
        Some(format!("alpha1*alpha4 = {} but alpha2*alpha3 = {}", lhs.to_wire(), rhs.to_wire())),
    );

    let p = Rational::from_integer(d.p.into());
    let forbidden = [Rational::from_integer(1.into()), p.clone(), p.recip()];
    let mut ratio_witness = None;
    if zero_alpha.is_none() {
        'outer: for i in 0..4 {
            for j in 0..4 {
                if i == j {
                    continue;
                }
                let r = d.alphas[i].div(&d.alphas[j]).expect("nonzero");
                if forbidden.contains(&r) {
                    ratio_witness = Some(format!("alpha{}/alpha{} = {}", i + 1, j + 1, r.to_wire()));
                    break 'outer;
                }
            }
        }
    }
    push("alpha_ratios_generic", zero_alpha.is_none() && ratio_witness.is_none(), false, ratio_witness.or(Some("zero eigenvalue".into())));

    let h = d.weights;
    push(
        "weights_strictly_decreasing",
        h[0] > h[1] && h[1] > h[2] && h[2] > h[3],
        false,
        Some(format!("weights {h:?}")),
    );
    push(
        "weights_sum_constraint",
        h[0] + h[3] == h[1] + h[2],
        false,
        Some(format!("h1+h4 = {} but h2+h3 = {}", h[0] + h[3], h[1] + h[2])),
    );

    let vanishing = nondegeneracy_factors(&d.a, &d.b).into_iter().find(|(_, f)| f.is_zero()).map(|(n, _)| n);
    push("hodge_nondegenerate", vanishing.is_none(), true, vanishing.map(|n| format!("factor {n} vanishes")));

    let valid = checks.iter().all(|c| c.passed);
    ValidityReport { valid, checks }
}

/// Basis `v1..v4` adapted to the Hodge filtration: `F^i = <v1, ..., v_i>`.
pub fn hodge_vectors<F: Field>(a: &F, b: &F) -> [Vec<F>; 4] {
    let i = F::from_int;
    [
        vec![a.clone(), i(-1), i(1), i(-1)],
        vec![b.clone(), b.add(&i(1)), i(-1), i(0)],
        vec![i(1), i(1), i(0), i(0)],
        vec![i(1), i(0), i(0), i(0)],
    ]
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HodgeFiltration<F> {
    pub vectors: [Vec<F>; 4],
    pub flag: Flag<F>,
}

impl<F: Field> HodgeFiltration<F> {
    /// `F^i` for `i` in `0..=4`.
    pub fn step(&self, i: usize) -> Subspace<F> {
        match i {
            0 => Subspace::zero(4),
            4 => Subspace::full(4),
            _ => self.flag.of_dim(i).expect("complete flag").clone(),
        }
    }
}

/// The complete flag in standard form; `None` when the vectors are dependent.
pub fn standard_filtration<F: Field>(a: &F, b: &F) -> Option<HodgeFiltration<F>> {
    let vectors = hodge_vectors(a, b);
    if Subspace::span(4, &vectors).dim() != 4 {
        return None;
    }
    let flag = Flag::from_vectors(FlagKind::Complete, &vectors).ok()?;
    Some(HodgeFiltration { vectors, flag })
}

/// Jump indices of the filtration for weights `h`: `gr^{-h_i}` is spanned by `v_{5-i}`.
pub fn filtration_jumps(h: &[i64; 4]) -> [i64; 4] {
    h.map(|x| -x)
}

pub fn all_subsets() -> Vec<Vec<usize>> {
    (0u32..16).map(|m| (0..4).filter(|i| m & (1 << i) != 0).collect()).collect()
}

/// `dim(F^i ∩ <e_S>) = max(0, i + |S| - 4)` for every coordinate subspace.
pub fn general_position<F: Field>(flag: &Flag<F>) -> bool {
    all_subsets().iter().all(|s| {
        let coord = Subspace::coordinate(4, s);
        flag.spaces().iter().all(|fi| {
            let expected = (fi.dim() + s.len()).saturating_sub(4);
            fi.intersect(&coord).dim() == expected
        })
    })
}

/// Plücker coordinates of `F^2 = <v1, v2>` in the order 12, 13, 14, 23, 24, 34.
pub fn plucker_f2<F: Field>(a: &F, b: &F) -> [F; 6] {
    let [v1, v2, _, _] = hodge_vectors(a, b);
    let pairs = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
    pairs.map(|(i, j)| v1[i].mul(&v2[j]).sub(&v1[j].mul(&v2[i])))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SubsetSlope {
    /// 1-based eigenvector indices.
    pub subset: Vec<usize>,
    pub newton: i64,
    pub hodge: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AdmissibilityReport {
    pub admissible: bool,
    pub newton_total: i64,
    pub hodge_total: i64,
    pub violations: Vec<SubsetSlope>,
    pub subsets: Vec<SubsetSlope>,
}

/// Hodge number of `V` for the filtration with `gr^{-h_i}` spanned by the `(5-i)`-th step.
pub fn hodge_number<F: Field>(v: &Subspace<F>, filt: &HodgeFiltration<F>, weights: &[i64; 4]) -> i64 {
    let dims: Vec<i64> = (0..=4).map(|k| v.intersect(&filt.step(k)).dim() as i64).collect();
    (1..=4).map(|m| -weights[m - 1] * (dims[5 - m] - dims[4 - m])).sum()
}

/// Newton number `sum_{j in S} val_p(alpha_j)` against the Hodge number of `<e_S>`,
/// over all coordinate subspaces, for an arbitrary filtration.
pub fn weak_admissibility_for<F: Field>(
    vals: &[i64; 4],
    weights: &[i64; 4],
    filt: &HodgeFiltration<F>,
) -> AdmissibilityReport {
    let mut subsets = Vec::new();
    for s in all_subsets() {
        let v = Subspace::coordinate(4, &s);
        subsets.push(SubsetSlope {
            subset: s.iter().map(|i| i + 1).collect(),
            newton: s.iter().map(|&i| vals[i]).sum(),
            hodge: hodge_number(&v, filt, weights),
        });
    }
    let total = subsets.last().expect("full subset").clone();
    let violations: Vec<SubsetSlope> = subsets.iter().filter(|s| s.newton < s.hodge).cloned().collect();
    AdmissibilityReport {
        admissible: violations.is_empty() && total.newton == total.hodge,
        newton_total: total.newton,
        hodge_total: total.hodge,
        violations,
        subsets,
    }
}

pub fn weak_admissibility<F: Field>(d: &PhiModuleData<F>) -> Result<AdmissibilityReport, PhiModuleError> {
    let filt = standard_filtration(&d.a, &d.b)
        .ok_or_else(|| PhiModuleError::Invalid("Hodge vectors are dependent".into()))?;
    Ok(weak_admissibility_for(&d.valuations()?, &d.weights, &filt))
}

/// Criterion through refinements, valid when the filtration is in general
/// position: for each `w`, partial sums of `val(alpha_{w^{-1}(j)})` dominate
/// those of `-h_j`, with equality at the end.
pub fn weak_admissibility_by_refinements(vals: &[i64; 4], weights: &[i64; 4]) -> bool {
    let total_ok = vals.iter().sum::<i64>() == -weights.iter().sum::<i64>();
    total_ok
        && WeylElement::all().iter().all(|w| {
            let inv = w.inverse();
            let mut newton = 0;
            let mut hodge = 0;
            (1..=3).all(|i| {
                newton += vals[inv.apply(i) - 1];
                hodge -= weights[i - 1];
                newton >= hodge
            })
        })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RefinementParameter {
    #[serde(serialize_with = "ser_wire")]
    pub alpha: Rational,
    pub weight: i64,
}

fn ser_wire<S: serde::Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_wire())
}

/// `(alpha_{w^{-1}(i)} z^{h_i})_{i=1..4}`.
pub fn refinement_parameters<F: Field>(d: &PhiModuleData<F>, w: &WeylElement) -> [RefinementParameter; 4] {
    let inv = w.inverse();
    std::array::from_fn(|i| RefinementParameter { alpha: d.alphas[inv.apply(i + 1) - 1].clone(), weight: d.weights[i] })
}

/// Anisotropy facts about the standard-form filtration.
pub fn filtration_is_symplectic<F: Field>(filt: &HodgeFiltration<F>) -> bool {
    filt.flag.is_anisotropic() && perp(&filt.step(1)) == filt.step(3) && perp(&filt.step(2)) == filt.step(2)
}
