use gsp4h::linalg::{Matrix, Subspace};
use gsp4h::phi_module::{hodge_vectors, standard_filtration};
use gsp4h::scalar::{int, rat, Field, RatFunc, Rational};
use gsp4h::symplectic::*;
use proptest::prelude::*;

type M = Matrix<Rational>;

fn rational() -> impl Strategy<Value = Rational> {
    (-9i64..=9, 1i64..=5).prop_map(|(n, d)| rat(n, d))
}

fn nonzero() -> impl Strategy<Value = Rational> {
    rational().prop_filter("nonzero", |x| *x != int(0))
}

fn matrix() -> impl Strategy<Value = M> {
    prop::collection::vec(rational(), 16).prop_map(|v| Matrix::from_rows(v.chunks(4).map(|r| r.to_vec()).collect()))
}

fn vector() -> impl Strategy<Value = Vec<Rational>> {
    prop::collection::vec(-3i64..=3, 4).prop_map(|v| v.into_iter().map(int).collect())
}

fn subspace() -> impl Strategy<Value = Subspace<Rational>> {
    prop::collection::vec(vector(), 0..=3).prop_map(|vs| Subspace::span(4, &vs))
}

/// Product of random torus and root elements drawn from the allowed root indices.
fn group_element(roots: &'static [usize]) -> impl Strategy<Value = M> {
    let factor = (prop::sample::select(roots), rational());
    (prop::collection::vec(factor, 1..6), nonzero(), nonzero(), nonzero()).prop_map(|(fs, x, y, c)| {
        let t = torus_element(&x, &y, &c).unwrap();
        fs.iter().fold(t, |acc, (k, s)| acc.mul(&root_element(*k, s)))
    })
}

const BOREL: &[usize] = &[3, 5, 7, 9];
const SIEGEL: &[usize] = &[3, 4, 5, 7, 9];
const KLINGEN: &[usize] = &[3, 5, 6, 7, 9];
const ALL_ROOTS: &[usize] = &[3, 4, 5, 6, 7, 8, 9, 10];

fn unit(i: usize) -> Vec<Rational> {
    (0..4).map(|j| int((i == j) as i64)).collect()
}

/// Membership decided from scratch: `A^T J + J A` must be a multiple of `J`.
fn membership_oracle(a: &M) -> bool {
    let j = M::ints(&[[0, 0, 0, 1], [0, 0, 1, 0], [0, -1, 0, 0], [-1, 0, 0, 0]]);
    let s = a.transpose().mul(&j).add(&j.mul(a));
    let lambda = s.get(0, 3).clone();
    s == j.scale(&lambda)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn adjoint_reverses_products(a in matrix(), b in matrix()) {
        prop_assert_eq!(adjoint(&a.mul(&b)), adjoint(&b).mul(&adjoint(&a)));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn involution_squares_to_identity(a in matrix()) {
        prop_assert_eq!(s_involution(&s_involution(&a)), a.clone());
        let half = rat(1, 2);
        let p = a.add(&s_involution(&a)).scale(&half);
        prop_assert!(lie_membership(&p).0);
        prop_assert_eq!(p.add(&s_involution(&p)).scale(&half), p);
    }

    #[test]
    fn adjoint_is_form_adjoint(a in matrix(), x in vector(), y in vector()) {
        prop_assert_eq!(form(&a.mul_vec(&x), &y), form(&x, &adjoint(&a).mul_vec(&y)));
    }

    #[test]
    fn lie_algebra_coordinates(c in prop::collection::vec(rational(), 11)) {
        let a = from_gsp4_coords(&c);
        let (inside, f) = lie_membership(&a);
        prop_assert!(inside);
        prop_assert_eq!(f, a.trace() * rat(1, 2));
        prop_assert_eq!(gsp4_coords(&a).unwrap(), c);
        prop_assert_eq!(s_involution(&a), a);
    }

    #[test]
    fn membership_matches_oracle(a in matrix()) {
        prop_assert_eq!(lie_membership(&a).0, membership_oracle(&a));
    }

    #[test]
    fn similitude_squared_is_det(g in group_element(ALL_ROOTS)) {
        let sim = similitude(&g).unwrap();
        prop_assert_eq!(&sim * &sim, g.det());
    }

    #[test]
    fn borel_stabilizes_complete_flag(g in group_element(BOREL)) {
        prop_assert!(Flag::<Rational>::standard(FlagKind::Complete).is_stabilized_by(&g));
        prop_assert!(Flag::<Rational>::standard(FlagKind::Siegel).is_stabilized_by(&g));
        prop_assert!(Flag::<Rational>::standard(FlagKind::Klingen).is_stabilized_by(&g));
    }

    #[test]
    fn siegel_parabolic_stabilizes_siegel_flag(g in group_element(SIEGEL)) {
        prop_assert!(Flag::<Rational>::standard(FlagKind::Siegel).is_stabilized_by(&g));
    }

    #[test]
    fn klingen_parabolic_stabilizes_klingen_flag(g in group_element(KLINGEN)) {
        prop_assert!(Flag::<Rational>::standard(FlagKind::Klingen).is_stabilized_by(&g));
    }

    #[test]
    fn subspace_dimension_formula(u in subspace(), v in subspace()) {
        prop_assert_eq!(u.intersect(&v).dim() + u.sum(&v).dim(), u.dim() + v.dim());
        prop_assert!(u.sum(&v).contains_space(&u));
        prop_assert!(u.contains_space(&u.intersect(&v)));
    }

    #[test]
    fn perp_is_an_involution(u in subspace()) {
        prop_assert_eq!(perp(&perp(&u)), u.clone());
        prop_assert_eq!(perp(&u).dim(), 4 - u.dim());
    }

    #[test]
    fn anisotropy_is_preserved_by_the_group(g in group_element(ALL_ROOTS)) {
        let moved: Vec<Vec<Rational>> = (0..4).map(|i| g.mul_vec(&unit(i))).collect();
        prop_assert!(Flag::from_vectors(FlagKind::Complete, &moved).unwrap().is_anisotropic());
    }
}

#[test]
fn parabolics_are_proper() {
    let ya = root_element(4, &int(1));
    let yb = root_element(6, &int(1));
    assert!(!Flag::<Rational>::standard(FlagKind::Complete).is_stabilized_by(&ya));
    assert!(!Flag::<Rational>::standard(FlagKind::Klingen).is_stabilized_by(&ya));
    assert!(!Flag::<Rational>::standard(FlagKind::Siegel).is_stabilized_by(&yb));
}

#[test]
fn involution_rank_and_image() {
    let units: Vec<M> = (0..16).map(|k| M::unit(4, k / 4, k % 4)).collect();
    let half = rat(1, 2);
    let flat = |m: &M| m.entries().to_vec();
    let minus: Vec<Vec<Rational>> = units.iter().map(|e| flat(&e.sub(&s_involution(e)).scale(&half))).collect();
    let plus: Vec<Vec<Rational>> = units.iter().map(|e| flat(&e.add(&s_involution(e)).scale(&half))).collect();
    assert_eq!(Matrix::from_rows(minus).rank(), 5);
    let image = Subspace::span(16, &plus);
    let algebra = Subspace::span(16, &gsp4_basis::<Rational>().iter().map(flat).collect::<Vec<_>>());
    assert_eq!(algebra.dim(), 11);
    assert_eq!(image, algebra);
    for e in &units {
        let p = e.add(&s_involution(e)).scale(&half);
        assert_eq!(p.add(&s_involution(&p)).scale(&half), p);
    }
}

#[test]
fn membership_of_elementary_matrices() {
    let mut inside = Vec::new();
    for i in 0..4 {
        for j in 0..4 {
            let e = M::unit(4, i, j);
            assert_eq!(lie_membership(&e).0, membership_oracle(&e));
            if lie_membership(&e).0 {
                inside.push((i + 1, j + 1));
            }
        }
    }
    // only the corner root vectors are single units
    assert_eq!(inside, vec![(1, 4), (2, 3), (3, 2), (4, 1)]);
    let e21_e34 = M::unit(4, 1, 0).add(&M::unit(4, 2, 3));
    assert_eq!(lie_membership(&e21_e34).0, membership_oracle(&e21_e34));
    assert!(!lie_membership(&e21_e34).0);
    assert!(lie_membership(&M::unit(4, 1, 0).sub(&M::unit(4, 3, 2))).0);
    let t = M::diag(&[int(1), int(5), int(-2), int(2)]);
    assert_eq!(lie_membership(&t), (true, int(3)));
}

#[test]
fn hodge_flag_meets_siegel_space_in_third_vector() {
    let a = RatFunc::parse_wire("a").unwrap();
    let b = RatFunc::parse_wire("b").unwrap();
    let v = hodge_vectors(&a, &b);
    let f3 = Subspace::span(4, &v[..3]);
    let siegel = Subspace::<RatFunc>::coordinate(4, &[0, 1]);
    assert_eq!(siegel.intersect(&f3), Subspace::span(4, &[v[2].clone()]));
    let one = RatFunc::one();
    let filt = standard_filtration(&one, &one).unwrap();
    assert!(filt.flag.is_anisotropic());
    assert!(standard_filtration(&a, &b).unwrap().flag.is_anisotropic());
}

#[test]
fn j_form_identities() {
    let j = j_matrix::<Rational>();
    assert_eq!(j.mul(&j), M::identity(4).neg());
    assert_eq!(j.transpose(), j.neg());
    let s2 = M::ints(&[[1, 0, 0, 0], [0, 0, 1, 0], [0, -1, 0, 0], [0, 0, 0, 1]]);
    assert_eq!(similitude(&s2), Ok(int(1)));
}
