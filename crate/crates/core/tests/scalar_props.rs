use gsp4h::scalar::{field_arith, int, padic_val, rat, ArithOp, Field, RatFunc, Rational, Scalar, ScalarError};
use proptest::prelude::*;

fn rational() -> impl Strategy<Value = Rational> {
    (-60i64..=60, 1i64..=24).prop_map(|(n, d)| rat(n, d))
}

fn nonzero_rational() -> impl Strategy<Value = Rational> {
    rational().prop_filter("nonzero", |x| !x.is_zero())
}

fn poly_text() -> impl Strategy<Value = String> {
    prop::collection::vec((-4i64..=4, 0u32..=2, 0u32..=1), 1..=3).prop_map(|terms| {
        let parts: Vec<String> = terms.iter().map(|(c, i, j)| format!("({c})*a^{i}*b^{j}")).collect();
        parts.join(" + ")
    })
}

fn ratfunc() -> impl Strategy<Value = RatFunc> {
    (poly_text(), poly_text()).prop_filter_map("nonzero denominator", |(n, d)| {
        RatFunc::parse_wire(&format!("({n})/({d})")).ok()
    })
}

fn check_axioms<F: Field + std::fmt::Debug>(x: &F, y: &F, z: &F) -> Result<(), TestCaseError> {
    prop_assert_eq!(x.add(y).add(z), x.add(&y.add(z)));
    prop_assert_eq!(x.mul(y).mul(z), x.mul(&y.mul(z)));
    prop_assert_eq!(x.add(y), y.add(x));
    prop_assert_eq!(x.mul(y), y.mul(x));
    prop_assert_eq!(x.mul(&y.add(z)), x.mul(y).add(&x.mul(z)));
    prop_assert_eq!(x.add(&x.neg()), F::zero());
    prop_assert_eq!(x.mul(&F::one()), x.clone());
    match x.inv() {
        Some(i) => prop_assert_eq!(x.mul(&i), F::one()),
        None => prop_assert!(x.is_zero()),
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn rational_field_axioms(x in rational(), y in rational(), z in rational()) {
        check_axioms(&x, &y, &z)?;
    }

    #[test]
    fn ratfunc_field_axioms(x in ratfunc(), y in ratfunc(), z in ratfunc()) {
        check_axioms(&x, &y, &z)?;
    }

    #[test]
    fn valuation_is_additive(x in nonzero_rational(), y in nonzero_rational(), p in prop::sample::select(vec![2u64, 3, 5, 7, 11])) {
        prop_assert_eq!(padic_val(&(&x * &y), p)?, padic_val(&x, p)? + padic_val(&y, p)?);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn ratfunc_canonical_form(x in ratfunc(), y in ratfunc()) {
        let wire = x.to_wire();
        prop_assert_eq!(RatFunc::parse_wire(&wire).unwrap(), x.clone());
        prop_assert_eq!(x == y, wire == y.to_wire());
        prop_assert!(x.denom().leading().map(|(_, c)| *c == int(1)).unwrap_or(false));
    }

    #[test]
    fn rational_wire_round_trip(x in rational()) {
        let wire = x.to_wire();
        prop_assert!(wire.contains('/'));
        prop_assert_eq!(Rational::parse_wire(&wire).unwrap(), x);
    }

    #[test]
    fn ratfunc_evaluation_is_a_homomorphism(x in ratfunc(), y in ratfunc(), a in rational(), b in rational()) {
        if let (Some(ex), Some(ey)) = (x.eval(&a, &b), y.eval(&a, &b)) {
            prop_assert_eq!(x.mul(&y).eval(&a, &b), Some(&ex * &ey));
        }
    }
}

#[test]
fn valuation_examples() {
    assert_eq!(padic_val(&int(8), 2), Ok(3));
    assert_eq!(padic_val(&rat(2, 9), 3), Ok(-2));
    assert_eq!(padic_val(&int(6), 5), Ok(0));
    assert_eq!(padic_val(&int(0), 5), Err(ScalarError::ZeroArgument));
    assert!(matches!(padic_val(&int(3), 4), Err(ScalarError::NotPrime(_))));
}

#[test]
fn tagged_scalars() {
    let q = Scalar::parse("3/4", false).unwrap();
    let f = Scalar::parse("a/(a+b)", true).unwrap();
    assert_eq!(field_arith(ArithOp::Add, &q, &f), Err(ScalarError::VariantMismatch));
    let zero = Scalar::parse("0", false).unwrap();
    assert_eq!(field_arith(ArithOp::Div, &q, &zero), Err(ScalarError::DivisionByZero));
    let g = field_arith(ArithOp::Mul, &f, &Scalar::parse("(a+b)/a", true).unwrap()).unwrap();
    assert_eq!(g.to_wire(), "1");
    assert_eq!(serde_json::to_string(&q).unwrap(), "\"3/4\"");
    assert!(RatFunc::parse_wire("a/(b-b)").is_err());
}

#[test]
fn ratfunc_reduces_common_factors() {
    let x = RatFunc::parse_wire("(a^2 - b^2)/(a - b)").unwrap();
    assert_eq!(x, RatFunc::parse_wire("a + b").unwrap());
    let y = RatFunc::parse_wire("(2*a*b + 2*a)/(4*b + 4)").unwrap();
    assert_eq!(y.to_wire(), RatFunc::parse_wire("a/2").unwrap().to_wire());
}
