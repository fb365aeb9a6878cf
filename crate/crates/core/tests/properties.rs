use itsub::bcd::{bcd_search, bcd_validate, from_bcd, to_bcd};
use itsub::consistency::{consistent, self_consistent};
use itsub::derivation::check_subformula_conjunction;
use itsub::syntax::{derivation_from_json, derivation_to_json};
use itsub::types::{contained_in, is_part, is_top, measure_less, size, MeasureTriple};
use itsub::{check_sub, parse, print, trans_compose, validate, Ty};
use proptest::prelude::*;

fn ty() -> impl Strategy<Value = Ty> {
    let atom = prop_oneof![Just(Ty::top()), (0u32..3).prop_map(Ty::constant)];
    atom.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Ty::arrow(a, b)),
            (inner.clone(), inner).prop_map(|(a, b)| Ty::inter(a, b)),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn print_parse_roundtrip(a in ty()) {
        prop_assert_eq!(parse(&print(&a)).unwrap(), a);
    }

    #[test]
    fn certificates_validate(a in ty(), b in ty()) {
        if let Some(d) = check_sub(&a, &b) {
            prop_assert_eq!(d.lhs(), &a);
            prop_assert_eq!(d.rhs(), &b);
            prop_assert!(validate(&d).is_ok());
            prop_assert!(check_subformula_conjunction(&d));
        }
    }

    #[test]
    fn reflexive(a in ty()) {
        prop_assert!(check_sub(&a, &a).is_some());
    }

    #[test]
    fn everything_below_top(a in ty(), b in ty()) {
        if is_top(&b) {
            prop_assert!(check_sub(&a, &b).is_some());
        }
    }

    #[test]
    fn transitive(a in ty(), b in ty(), c in ty()) {
        if let (Some(d1), Some(d2)) = (check_sub(&a, &b), check_sub(&b, &c)) {
            let d = trans_compose(&d1, &d2).unwrap();
            prop_assert_eq!(d.lhs(), &a);
            prop_assert_eq!(d.rhs(), &c);
            prop_assert!(validate(&d).is_ok());
        }
    }

    #[test]
    fn contained_in_is_transitive(a in ty(), b in ty(), c in ty()) {
        if contained_in(&a, &b) && contained_in(&b, &c) {
            prop_assert!(contained_in(&a, &c));
        }
    }

    #[test]
    fn contained_means_supertype(a in ty(), b in ty()) {
        if contained_in(&a, &b) {
            prop_assert!(check_sub(&b, &a).is_some());
        }
    }

    #[test]
    fn intersections_are_not_parts(a in ty(), b in ty(), c in ty()) {
        prop_assert!(!is_part(&Ty::inter(a, b), &c));
    }

    #[test]
    fn measure_is_a_strict_order(
        x in (0usize..4, 0usize..6, 0usize..6),
        y in (0usize..4, 0usize..6, 0usize..6),
    ) {
        let (m1, m2) = (MeasureTriple::new(x.0, x.1, x.2), MeasureTriple::new(y.0, y.1, y.2));
        prop_assert!(!measure_less(m1, m1));
        prop_assert!(!(measure_less(m1, m2) && measure_less(m2, m1)));
    }

    #[test]
    fn size_counts_constructors(a in ty(), b in ty()) {
        prop_assert_eq!(size(&Ty::arrow(a.clone(), b.clone())), 1 + size(&a) + size(&b));
        prop_assert_eq!(size(&Ty::inter(a.clone(), b.clone())), 1 + size(&a) + size(&b));
    }

    #[test]
    fn json_roundtrip(a in ty(), b in ty()) {
        if let Some(d) = check_sub(&a, &b) {
            let text = derivation_to_json(&d).unwrap();
            let back = derivation_from_json(&text).unwrap();
            prop_assert_eq!(derivation_to_json(&back).unwrap(), text);
        }
    }

    #[test]
    fn translations_agree(a in ty(), b in ty()) {
        if let Some(d) = check_sub(&a, &b) {
            prop_assert!(bcd_validate(&to_bcd(&d).unwrap()).is_ok());
        }
        if let Some(e) = bcd_search(&a, &b, 6) {
            prop_assert!(check_sub(&a, &b).is_some());
            prop_assert!(validate(&from_bcd(&e).unwrap()).is_ok());
        }
    }

    #[test]
    fn consistency_is_symmetric(a in ty(), b in ty()) {
        prop_assert_eq!(consistent(&a, &b), consistent(&b, &a));
    }

    #[test]
    fn top_is_self_consistent(a in ty()) {
        if is_top(&a) {
            prop_assert!(self_consistent(&a));
        }
    }
}
