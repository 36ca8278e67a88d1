//! Field axioms in Q(p, q), derivations, and polynomial division in Q(p)[x, y].

mod common;

use common::laws::*;
use common::*;
use proptest::prelude::*;

proptest! {
    #![proptest_config(pinned(200))]

    #[test]
    fn addition_is_a_commutative_group(a in scalar(), b in scalar(), c in scalar()) {
        additive_group(&a, &b, &c)?;
    }

    #[test]
    fn multiplication_is_commutative_and_associative(a in scalar(), b in scalar(), c in scalar()) {
        multiplicative_monoid(&a, &b, &c)?;
    }

    #[test]
    fn multiplication_distributes(a in scalar(), b in scalar(), c in scalar()) {
        distributive(&a, &b, &c)?;
    }

    #[test]
    fn nonzero_elements_invert(a in scalar(), b in scalar()) {
        inverses(&a, &b)?;
    }

    #[test]
    fn partial_derivative_obeys_leibniz(f in ratfunc(), g in ratfunc()) {
        partial_leibniz(&f, &g)?;
    }

    #[test]
    fn field_derivation_obeys_leibniz(s in field(), f in ratfunc(), g in ratfunc()) {
        field_leibniz(&s, &f, &g)?;
    }

    #[test]
    fn divrem_reconstructs_dividend(num in multipoly(), den in multipoly()) {
        divrem_reconstructs(&num, &den)?;
    }

    #[test]
    fn exact_division_recovers_factor(a in multipoly(), b in multipoly()) {
        exact_division(&a, &b)?;
    }

    #[test]
    fn gcd_is_the_greatest_common_divisor(
        a in poly_in(&["x", "y", "z"], 2, 4),
        b in poly_in(&["x", "y", "z"], 2, 4),
        c in poly_in(&["x", "y", "z"], 2, 3),
    ) {
        gcd_is_greatest(&a, &b, &c)?;
    }
}
