//! The summed tangent map from eight copies of the torus Lie algebra (one per
//! Weyl element) to the similitude Lie algebra, and how its kernel encodes the
//! Hodge parameters `(a, b)`.
//!
//! For a permutation `w` the coordinate flag is `F_w^i = <e_{w^{-1}(1)}, ..., e_{w^{-1}(i)}>`.
//! Its relative position with the Hodge flag `F_H` cuts out lines
//! `L_{w,i} = F_w^i ∩ F_H^{5-i}`, and `nu_w(t)` is the operator acting by `t_i`
//! on `L_{w,i}`. A block vector assigns a torus element `t_w` to each `w ∈ W`;
//! the map sends it to `sum_w nu_w(t_w)`.
//!
//! Torus elements use flat coordinates `(t1, t2, t3)`, with `t4 = t2 + t3 - t1`.

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::linalg::{Matrix, Subspace};
use crate::phi_module::{hodge_vectors, nondegeneracy_factors, standard_filtration, HodgeFiltration};
use crate::scalar::Field;
use crate::symplectic::{gsp4_coords, similitude};
use crate::weyl::WeylElement;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KernelError {
    #[error("intersection F_w^{index} ∩ F_H^{co} for w = {w} has dimension {dim}, expected {expected}")]
    DegenerateIntersection { w: String, index: usize, co: usize, dim: usize, expected: usize },
    #[error("Hodge parameters are degenerate: {0}")]
    Degenerate(String),
    #[error("projection has dimension {0}, expected a line")]
    NotALine(usize),
    #[error("operator left the Lie algebra")]
    NotInLieAlgebra,
    #[error("kernel basis has wrong shape: {0}")]
    BadKernel(String),
}

/// Number of Weyl elements, torus coordinates per block, and total block length.
pub const BLOCKS: usize = 8;
pub const TORUS_DIM: usize = 3;
pub const BLOCK_LEN: usize = BLOCKS * TORUS_DIM;

/// A permutation of `{1,2,3,4}` in 1-based one-line notation.
pub type Perm = [u8; 4];

pub fn all_perms() -> Vec<Perm> {
    let mut out = Vec::new();
    for a in 1..=4u8 {
        for b in 1..=4u8 {
            for c in 1..=4u8 {
                for d in 1..=4u8 {
                    let p = [a, b, c, d];
                    let mut seen = [false; 5];
                    if p.iter().all(|&x| !std::mem::replace(&mut seen[x as usize], true)) {
                        out.push(p);
                    }
                }
            }
        }
    }
    out
}

fn perm_inverse(p: &Perm) -> Perm {
    let mut inv = [0u8; 4];
    for (i, &x) in p.iter().enumerate() {
        inv[x as usize - 1] = i as u8 + 1;
    }
    inv
}

fn perm_label(p: &Perm) -> String {
    WeylElement::from_one_line(*p)
        .map(|w| w.to_string())
        .unwrap_or_else(|_| format!("[{},{},{},{}]", p[0], p[1], p[2], p[3]))
}

/// `F_w^i` for `i` in `0..=4`.
pub fn coordinate_flag_step<F: Field>(w: &Perm, i: usize) -> Subspace<F> {
    let inv = perm_inverse(w);
    let idx: Vec<usize> = inv[..i].iter().map(|&x| x as usize - 1).collect();
    Subspace::coordinate(4, &idx)
}

/// Eigenlines `L_{w,1..4}` for each permutation in the grid.
#[derive(Clone, Debug)]
pub struct EigenGrid<F> {
    pub filtration: HodgeFiltration<F>,
    lines: BTreeMap<Perm, [Vec<F>; 4]>,
}

impl<F: Field> EigenGrid<F> {
    pub fn lines(&self, w: &Perm) -> Option<&[Vec<F>; 4]> {
        self.lines.get(w)
    }

    pub fn weyl_lines(&self, w: &WeylElement) -> &[Vec<F>; 4] {
        self.lines.get(&w.one_line()).expect("grid covers W")
    }

    pub fn perms(&self) -> impl Iterator<Item = &Perm> {
        self.lines.keys()
    }
}

fn hodge_filtration<F: Field>(a: &F, b: &F) -> Result<HodgeFiltration<F>, KernelError> {
    standard_filtration(a, b).ok_or_else(|| KernelError::Degenerate("Hodge vectors are dependent".into()))
}

/// Lines `L_{w,i}`; requires `F_w` and `F_H` transverse, i.e. `F_w^i ∩ F_H^{4-i} = 0`,
/// which makes each `L_{w,i}` a line and the four lines a basis.
fn lines_for<F: Field>(filt: &HodgeFiltration<F>, w: &Perm) -> Result<[Vec<F>; 4], KernelError> {
    let mut out: Vec<Vec<F>> = Vec::with_capacity(4);
    for i in 1..=4 {
        let fw = coordinate_flag_step::<F>(w, i);
        let l = fw.intersect(&filt.step(5 - i));
        if l.dim() != 1 {
            return Err(KernelError::DegenerateIntersection { w: perm_label(w), index: i, co: 5 - i, dim: l.dim(), expected: 1 });
        }
        let t = fw.intersect(&filt.step(4 - i));
        if t.dim() != 0 {
            return Err(KernelError::DegenerateIntersection { w: perm_label(w), index: i, co: 4 - i, dim: t.dim(), expected: 0 });
        }
        out.push(l.basis()[0].clone());
    }
    Ok(out.try_into().expect("four lines"))
}

/// Eigenlines for every `w ∈ W`, or for all of `S_4` when `full` is set.
pub fn eigenline_grid<F: Field>(a: &F, b: &F, full: bool) -> Result<EigenGrid<F>, KernelError> {
    let filtration = hodge_filtration(a, b)?;
    let perms: Vec<Perm> = if full { all_perms() } else { WeylElement::all().iter().map(|w| w.one_line()).collect() };
    let mut lines = BTreeMap::new();
    for w in perms {
        lines.insert(w, lines_for(&filtration, &w)?);
    }
    // Some degenerate parameters only show up in flags outside W.
    if let Some((name, _)) = nondegeneracy_factors(a, b).iter().find(|(_, f)| f.is_zero()) {
        return Err(KernelError::Degenerate(format!("factor {name} vanishes")));
    }
    Ok(EigenGrid { filtration, lines })
}

/// Diagonal entries of the torus element with flat coordinates `(t1, t2, t3)`.
pub fn torus_diag<F: Field>(t: &[F; 3]) -> [F; 4] {
    [t[0].clone(), t[1].clone(), t[2].clone(), t[1].add(&t[2]).sub(&t[0])]
}

/// Flat coordinates of `diag(d1, d2, d3, d4)`; `None` off the torus algebra.
pub fn torus_flat<F: Field>(d: &[F; 4]) -> Option<[F; 3]> {
    (d[0].add(&d[3]) == d[1].add(&d[2])).then(|| [d[0].clone(), d[1].clone(), d[2].clone()])
}

/// The operator acting by `t_i` on the `i`-th line.
pub fn nu_from_lines<F: Field>(lines: &[Vec<F>; 4], t: &[F; 4]) -> Matrix<F> {
    let p = Matrix::from_cols(lines);
    let pinv = p.inverse().expect("eigenlines span");
    p.mul(&Matrix::diag(t)).mul(&pinv)
}

pub fn nu_operator<F: Field>(grid: &EigenGrid<F>, w: &WeylElement, t: &[F; 4]) -> Matrix<F> {
    nu_from_lines(grid.weyl_lines(w), t)
}

fn torus_basis<F: Field>() -> [[F; 3]; 3] {
    let i = F::from_int;
    [[i(1), i(0), i(0)], [i(0), i(1), i(0)], [i(0), i(0), i(1)]]
}

/// Matrix of the summed tangent map, `11 x 24`, columns indexed by
/// `3 * (position of w in WeylElement::all()) + flat coordinate`.
pub fn jbar_matrix<F: Field>(a: &F, b: &F) -> Result<Matrix<F>, KernelError> {
    let grid = eigenline_grid(a, b, false)?;
    jbar_from_grid(&grid)
}

pub fn jbar_from_grid<F: Field>(grid: &EigenGrid<F>) -> Result<Matrix<F>, KernelError> {
    let mut cols = Vec::with_capacity(BLOCK_LEN);
    for w in WeylElement::all() {
        for t in torus_basis::<F>() {
            let nu = nu_operator(grid, &w, &torus_diag(&t));
            cols.push(gsp4_coords(&nu).map_err(|_| KernelError::NotInLieAlgebra)?);
        }
    }
    Ok(Matrix::from_cols(&cols))
}

pub fn kernel_basis<F: Field>(a: &F, b: &F) -> Result<Subspace<F>, KernelError> {
    let j = jbar_matrix(a, b)?;
    Ok(Subspace::span(BLOCK_LEN, &j.kernel()))
}

/// The block vector with `t` in block `w` and zero elsewhere.
pub fn block_vector<F: Field>(w: &WeylElement, t: &[F; 3]) -> Vec<F> {
    let mut v = vec![F::zero(); BLOCK_LEN];
    let k = w.index();
    for (c, x) in t.iter().enumerate() {
        v[TORUS_DIM * k + c] = x.clone();
    }
    v
}

/// Centre of the Levi of the parabolic preserving `<e1, e2>`: `diag(u, u, v, v)`.
pub fn siegel_levi_centre<F: Field>() -> [[F; 3]; 2] {
    let i = F::from_int;
    [[i(1), i(1), i(0)], [i(0), i(0), i(1)]]
}

/// Centre of the Levi of the parabolic preserving `<e1>`: `diag(u, v, v, 2v - u)`.
pub fn klingen_levi_centre<F: Field>() -> [[F; 3]; 2] {
    let i = F::from_int;
    [[i(1), i(0), i(0)], [i(0), i(1), i(1)]]
}

/// Differences `(z)_w - (z)_{s w}` over Levi centres, for `s = s1` with the
/// Siegel centre and `s = s2` with the Klingen centre. Sixteen vectors.
pub fn glue_generators<F: Field>() -> Vec<Vec<F>> {
    let mut out = Vec::new();
    let cases = [(WeylElement::s1(), siegel_levi_centre::<F>()), (WeylElement::s2(), klingen_levi_centre::<F>())];
    for (s, centre) in cases {
        let mut seen = Vec::new();
        for w in WeylElement::all() {
            let partner = s.compose(&w);
            if seen.contains(&partner) {
                continue;
            }
            seen.push(w);
            for z in &centre {
                let x = block_vector(&w, z);
                let y = block_vector(&partner, z);
                out.push(x.iter().zip(&y).map(|(u, v)| u.sub(v)).collect());
            }
        }
    }
    out
}

pub fn glue_subspace<F: Field>() -> Subspace<F> {
    Subspace::span(BLOCK_LEN, &glue_generators())
}

pub const GENERATOR_LABELS: [&str; 8] = ["f1", "f2", "f3", "f4", "g1", "g2", "g3", "g4"];

/// The eight distinguished block vectors, in the order of [`GENERATOR_LABELS`].
///
/// `f_k` carry `diag(-1,-1,1,1)` in blocks `id, s2, s0, s2 s1`;
/// `g_k` carry `diag(-1,0,0,1)` in blocks `id, s1, s1 s2, s0`.
pub fn generator_blocks() -> [(WeylElement, bool); 8] {
    let w = |word: &[u8]| WeylElement::from_word(word);
    [
        (w(&[]), true),
        (w(&[2]), true),
        (WeylElement::s0(), true),
        (w(&[2, 1]), true),
        (w(&[]), false),
        (w(&[1]), false),
        (w(&[1, 2]), false),
        (WeylElement::s0(), false),
    ]
}

fn generator_torus<F: Field>(first_kind: bool) -> [F; 3] {
    let i = F::from_int;
    if first_kind {
        [i(-1), i(-1), i(1)]
    } else {
        [i(-1), i(0), i(0)]
    }
}

pub fn generator_vectors<F: Field>() -> Vec<Vec<F>> {
    generator_blocks().iter().map(|(w, f)| block_vector(w, &generator_torus::<F>(*f))).collect()
}

/// The eight generator images, written in the Hodge basis `v1..v4`.
pub fn generator_matrices<F: Field>(a: &F, b: &F) -> Result<Vec<(&'static str, Matrix<F>)>, KernelError> {
    let grid = eigenline_grid(a, b, false)?;
    let basis = Matrix::from_cols(&hodge_vectors(a, b));
    let binv = basis.inverse().ok_or_else(|| KernelError::Degenerate("Hodge basis is singular".into()))?;
    Ok(generator_blocks()
        .iter()
        .zip(GENERATOR_LABELS)
        .map(|((w, f), label)| {
            let nu = nu_operator(&grid, w, &torus_diag(&generator_torus::<F>(*f)));
            (label, binv.mul(&nu).mul(&basis))
        })
        .collect())
}

/// Combinations of the selected generators that lie in `kernel`, projected
/// onto the coordinates of the last two selected generators.
fn projected_relations<F: Field>(kernel: &Subspace<F>, selected: &[usize]) -> Subspace<F> {
    let gens = generator_vectors::<F>();
    let ann = kernel.annihilator();
    let chosen: Vec<Vec<F>> = selected.iter().map(|&i| gens[i].clone()).collect();
    // c with sum c_k gen_k ∈ kernel  <=>  ann * G^T * c = 0
    let relations = if ann.dim() == 0 {
        Matrix::<F>::identity(selected.len()).to_rows()
    } else {
        Matrix::from_rows(ann.basis().to_vec()).mul(&Matrix::from_cols(&chosen)).kernel()
    };
    let n = selected.len();
    let projected: Vec<Vec<F>> = relations.iter().map(|c| vec![c[n - 2].clone(), c[n - 1].clone()]).collect();
    Subspace::span(2, &projected)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Recovered<F> {
    pub a: F,
    pub b: F,
    /// Spanning vector of the line in `(g2, g3)` coordinates.
    pub line_b: [F; 2],
    /// Spanning vector of the line in `(g2, g4)` coordinates.
    pub line_a: [F; 2],
}

fn single_line<F: Field>(s: &Subspace<F>) -> Result<[F; 2], KernelError> {
    if s.dim() != 1 {
        return Err(KernelError::NotALine(s.dim()));
    }
    let v = &s.basis()[0];
    Ok([v[0].clone(), v[1].clone()])
}

/// Reads `(a, b)` back from the kernel of the summed tangent map.
///
/// Relations among `f1..f4, g1, g2, g3` inside the kernel project to the line
/// `<(b+1) g2 - g3>`; with `g4` in place of `g3` they give `<b g2 + a g4>`.
pub fn recover_parameters<F: Field>(kernel: &Subspace<F>) -> Result<Recovered<F>, KernelError> {
    if kernel.ambient() != BLOCK_LEN {
        return Err(KernelError::BadKernel(format!("ambient dimension {} != {BLOCK_LEN}", kernel.ambient())));
    }
    let line_b = single_line(&projected_relations(kernel, &[0, 1, 2, 3, 4, 5, 6]))?;
    let line_a = single_line(&projected_relations(kernel, &[0, 1, 2, 3, 4, 5, 7]))?;
    let degenerate = || KernelError::Degenerate("line meets a coordinate axis".into());
    // line_b ∝ (b+1, -1)
    let b = line_b[0].div(&line_b[1]).ok_or_else(degenerate)?.neg().sub(&F::one());
    // line_a ∝ (b, a)
    let a = b.mul(&line_a[1].div(&line_a[0]).ok_or_else(degenerate)?);
    Ok(Recovered { a, b, line_b, line_a })
}

/// Echelon basis, in generator coordinates `f1..g4`, of the kernel's
/// intersection with the span of the eight generators.
pub fn generator_relations<F: Field>(kernel: &Subspace<F>) -> Subspace<F> {
    let gens = generator_vectors::<F>();
    let ann = kernel.annihilator();
    let rel = Matrix::from_rows(ann.basis().to_vec()).mul(&Matrix::from_cols(&gens)).kernel();
    Subspace::span(8, &rel)
}

/// Block vector with the given generator coordinates.
pub fn combine_generators<F: Field>(coords: &[F]) -> Vec<F> {
    let gens = generator_vectors::<F>();
    let mut v = vec![F::zero(); BLOCK_LEN];
    for (c, g) in coords.iter().zip(&gens) {
        for (x, y) in v.iter_mut().zip(g) {
            *x = x.add(&c.mul(y));
        }
    }
    v
}

/// Unique unipotent `n` in the unipotent radical attached to `F_w` with
/// `n (e_{w^{-1}(i)}) ∈ L_{w,i}`, so that `nu_w(t) = n (w t w^{-1}) n^{-1}`.
pub fn unipotent_conjugator<F: Field>(grid: &EigenGrid<F>, w: &WeylElement) -> Matrix<F> {
    let lines = grid.weyl_lines(w);
    let inv = w.inverse();
    let mut cols: Vec<Vec<F>> = vec![Vec::new(); 4];
    for (i, line) in lines.iter().enumerate() {
        let j = inv.apply(i + 1) - 1;
        let scale = line[j].inv().expect("line is transverse to F_w^{i-1}");
        cols[j] = line.iter().map(|x| x.mul(&scale)).collect();
    }
    Matrix::from_cols(&cols)
}

/// Checks the conjugator is unipotent for `F_w`, has similitude one, and
/// reproduces `nu_w` on the torus basis.
pub fn conjugator_agrees<F: Field>(grid: &EigenGrid<F>, w: &WeylElement) -> bool {
    let n = unipotent_conjugator(grid, w);
    let perm = w.one_line();
    let id = Matrix::<F>::identity(4);
    let nil = n.sub(&id);
    let preserves = (1..=4).all(|i| {
        let lower = coordinate_flag_step::<F>(&perm, i - 1);
        coordinate_flag_step::<F>(&perm, i).basis().iter().all(|v| lower.contains(&nil.mul_vec(v)))
    });
    if !preserves || similitude(&n).map(|c| c != F::one()).unwrap_or(true) {
        return false;
    }
    let ninv = n.inverse().expect("unipotent");
    let inv = w.inverse();
    torus_basis::<F>().iter().all(|t| {
        let d = torus_diag(t);
        let mut conj = vec![F::zero(); 4];
        for (i, x) in d.iter().enumerate() {
            conj[inv.apply(i + 1) - 1] = x.clone();
        }
        n.mul(&Matrix::diag(&conj)).mul(&ninv) == nu_operator(grid, w, &d)
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct KernelSummary {
    pub rank: usize,
    pub kernel_dim: usize,
    pub glue_dim: usize,
    pub glue_in_kernel: bool,
    pub quotient_dim: usize,
}

pub fn summarize<F: Field>(a: &F, b: &F) -> Result<(KernelSummary, Subspace<F>), KernelError> {
    let j = jbar_matrix(a, b)?;
    let kernel = Subspace::span(BLOCK_LEN, &j.kernel());
    let glue = glue_subspace::<F>();
    let summary = KernelSummary {
        rank: j.rank(),
        kernel_dim: kernel.dim(),
        glue_dim: glue.dim(),
        glue_in_kernel: kernel.contains_space(&glue),
        quotient_dim: kernel.dim() - glue.dim(),
    };
    Ok((summary, kernel))
}
