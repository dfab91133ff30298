//! The symplectic form on `E^4`, the similitude group and its Lie algebra,
//! isotropic flags, and the trace-twisted involution of `gl_4`.
//!
//! The form is `r(x, y) = x^T J y` with `J` antidiagonal `(1, 1, -1, -1)` read
//! top to bottom, so `e1` pairs with `e4` and `e2` with `e3`. Matrices act on
//! column vectors.

use serde::Serialize;
use thiserror::Error;

use crate::linalg::{Matrix, Subspace};
use crate::scalar::Field;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SymplecticError {
    #[error("matrix does not scale the symplectic form")]
    NotSymplectic,
    #[error("matrix is not in the similitude Lie algebra")]
    NotInLieAlgebra,
    #[error("invalid flag: {0}")]
    BadFlag(String),
}

pub fn j_matrix<F: Field>() -> Matrix<F> {
    Matrix::from_ints(&[[0, 0, 0, 1], [0, 0, 1, 0], [0, -1, 0, 0], [-1, 0, 0, 0]])
}

pub fn form<F: Field>(x: &[F], y: &[F]) -> F {
    let jy = j_matrix::<F>().mul_vec(y);
    x.iter().zip(&jy).fold(F::zero(), |acc, (u, v)| acc.add(&u.mul(v)))
}

/// The scalar `c` with `M^T J M = c J`.
pub fn similitude<F: Field>(m: &Matrix<F>) -> Result<F, SymplecticError> {
    let j = j_matrix::<F>();
    let lhs = m.transpose().mul(&j).mul(m);
    let c = lhs.get(0, 3).clone();
    if c.is_zero() || lhs != j.scale(&c) {
        return Err(SymplecticError::NotSymplectic);
    }
    Ok(c)
}

/// Whether `A^T J + J A = (tr A / 2) J`, together with `tr A / 2`.
pub fn lie_membership<F: Field>(a: &Matrix<F>) -> (bool, F) {
    let j = j_matrix::<F>();
    let f = a.trace().mul(&F::from_int(2).inv().expect("2 is invertible"));
    let lhs = a.transpose().mul(&j).add(&j.mul(a));
    (lhs == j.scale(&f), f)
}

/// `J^{-1} A^T J`, the adjoint for the symplectic form.
pub fn adjoint<F: Field>(a: &Matrix<F>) -> Matrix<F> {
    let j = j_matrix::<F>();
    j.neg().mul(&a.transpose()).mul(&j)
}

/// `A -> -adj(A) + (tr A / 2) I`; an involution of `gl_4` fixing the similitude algebra.
pub fn s_involution<F: Field>(a: &Matrix<F>) -> Matrix<F> {
    let half = F::from_int(2).inv().expect("2 is invertible");
    adjoint(a).neg().add(&Matrix::identity(4).scale(&a.trace().mul(&half)))
}

/// Orthogonal complement under the symplectic form.
pub fn perp<F: Field>(u: &Subspace<F>) -> Subspace<F> {
    if u.dim() == 0 {
        return Subspace::full(u.ambient());
    }
    let rows = Matrix::from_rows(u.basis().to_vec()).mul(&j_matrix());
    Subspace::span(u.ambient(), &rows.kernel())
}

/// The 11 matrices spanning the Lie algebra: two torus directions, the identity,
/// then root vectors for `±a`, `±b`, `±(a+b)`, `±(2a+b)` with `a` short and `b` long.
pub fn gsp4_basis<F: Field>() -> Vec<Matrix<F>> {
    let e = |i: usize, j: usize| Matrix::<F>::unit(4, i, j);
    vec![
        Matrix::from_ints(&[[1, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, -1]]),
        Matrix::from_ints(&[[0, 0, 0, 0], [0, 1, 0, 0], [0, 0, -1, 0], [0, 0, 0, 0]]),
        Matrix::identity(4),
        e(0, 1).sub(&e(2, 3)),
        e(1, 0).sub(&e(3, 2)),
        e(1, 2),
        e(2, 1),
        e(0, 2).add(&e(1, 3)),
        e(2, 0).add(&e(3, 1)),
        e(0, 3),
        e(3, 0),
    ]
}

pub const GSP4_BASIS_LABELS: [&str; 11] =
    ["h1", "h2", "z", "x_a", "y_a", "x_b", "y_b", "x_ab", "y_ab", "x_2ab", "y_2ab"];

/// Coordinates of a Lie algebra element in [`gsp4_basis`].
pub fn gsp4_coords<F: Field>(a: &Matrix<F>) -> Result<Vec<F>, SymplecticError> {
    let half = F::from_int(2).inv().expect("2 is invertible");
    let c = a.get(0, 0).add(a.get(3, 3)).mul(&half);
    let coords = vec![
        a.get(0, 0).sub(&c),
        a.get(1, 1).sub(&c),
        c,
        a.get(0, 1).clone(),
        a.get(1, 0).clone(),
        a.get(1, 2).clone(),
        a.get(2, 1).clone(),
        a.get(0, 2).clone(),
        a.get(2, 0).clone(),
        a.get(0, 3).clone(),
        a.get(3, 0).clone(),
    ];
    if from_gsp4_coords(&coords) != *a {
        return Err(SymplecticError::NotInLieAlgebra);
    }
    Ok(coords)
}

pub fn from_gsp4_coords<F: Field>(coords: &[F]) -> Matrix<F> {
    gsp4_basis::<F>()
        .iter()
        .zip(coords)
        .fold(Matrix::zeros(4, 4), |acc, (m, c)| if c.is_zero() { acc } else { acc.add(&m.scale(c)) })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FlagKind {
    Complete,
    Siegel,
    Klingen,
}

impl FlagKind {
    pub fn dims(self) -> &'static [usize] {
        match self {
            FlagKind::Complete => &[1, 2, 3],
            FlagKind::Siegel => &[2],
            FlagKind::Klingen => &[1, 3],
        }
    }
}

/// Nested subspaces of `E^4` of the dimensions prescribed by the kind.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Flag<F> {
    kind: FlagKind,
    spaces: Vec<Subspace<F>>,
}

impl<F: Field> Flag<F> {
    pub fn new(kind: FlagKind, spaces: Vec<Subspace<F>>) -> Result<Self, SymplecticError> {
        let dims: Vec<usize> = spaces.iter().map(|s| s.dim()).collect();
        if dims != kind.dims() || spaces.iter().any(|s| s.ambient() != 4) {
            return Err(SymplecticError::BadFlag(format!("dimensions {dims:?} do not match {kind:?}")));
        }
        if spaces.windows(2).any(|w| !w[1].contains_space(&w[0])) {
            return Err(SymplecticError::BadFlag("subspaces are not nested".into()));
        }
        Ok(Flag { kind, spaces })
    }

    /// Flag built from the leading vectors of an ordered list.
    pub fn from_vectors(kind: FlagKind, vectors: &[Vec<F>]) -> Result<Self, SymplecticError> {
        let spaces = kind
            .dims()
            .iter()
            .map(|&d| Subspace::span(4, &vectors[..d.min(vectors.len())]))
            .collect();
        Flag::new(kind, spaces)
    }

    /// The flag of `<e1> ⊂ <e1,e2> ⊂ <e1,e2,e3>` members of the given kind.
    pub fn standard(kind: FlagKind) -> Self {
        let spaces = kind.dims().iter().map(|&d| Subspace::coordinate(4, &(0..d).collect::<Vec<_>>())).collect();
        Flag { kind, spaces }
    }

    pub fn kind(&self) -> FlagKind {
        self.kind
    }

    pub fn spaces(&self) -> &[Subspace<F>] {
        &self.spaces
    }

    /// Member of dimension `d`, if the kind has one.
    pub fn of_dim(&self, d: usize) -> Option<&Subspace<F>> {
        self.spaces.iter().find(|s| s.dim() == d)
    }

    /// Each member's complement under the form is the member of complementary dimension.
    pub fn is_anisotropic(&self) -> bool {
        self.spaces.iter().all(|s| self.of_dim(4 - s.dim()) == Some(&perp(s)))
    }

    pub fn is_stabilized_by(&self, g: &Matrix<F>) -> bool {
        self.spaces.iter().all(|s| {
            let image: Vec<Vec<F>> = s.basis().iter().map(|v| g.mul_vec(v)).collect();
            Subspace::span(4, &image) == *s
        })
    }
}

/// Elements of the Lie algebra preserving every member of the flag, in
/// [`gsp4_basis`] coordinates.
pub fn stabilizer_subalgebra<F: Field>(flag: &Flag<F>) -> Subspace<F> {
    let basis = gsp4_basis::<F>();
    let mut rows: Vec<Vec<F>> = Vec::new();
    for space in flag.spaces() {
        // A v ∈ V  <=>  A v is killed by the annihilator of V
        let ann = space.annihilator();
        for v in space.basis() {
            for f in ann.basis() {
                rows.push(
                    basis
                        .iter()
                        .map(|m| m.mul_vec(v).iter().zip(f).fold(F::zero(), |acc, (x, y)| acc.add(&x.mul(y))))
                        .collect(),
                );
            }
        }
    }
    if rows.is_empty() {
        return Subspace::full(basis.len());
    }
    Subspace::span(basis.len(), &Matrix::from_rows(rows).kernel())
}

/// `diag(x, y, c/y, c/x)`, a torus element with similitude `c`.
pub fn torus_element<F: Field>(x: &F, y: &F, c: &F) -> Option<Matrix<F>> {
    Some(Matrix::diag(&[x.clone(), y.clone(), c.div(y)?, c.div(x)?]))
}

/// `I + t X` for the root vector at position `k` (3..=10) of [`gsp4_basis`].
pub fn root_element<F: Field>(k: usize, t: &F) -> Matrix<F> {
    assert!((3..11).contains(&k), "not a root vector index");
    Matrix::identity(4).add(&gsp4_basis::<F>()[k].scale(t))
}
