//! Consistency of types read as approximations of function graphs.
//!
//! Two constants are consistent when equal. Two arrows are consistent when
//! their domains are inconsistent, or both domains and codomains are
//! consistent. Intersections are compared part by part. A part equivalent
//! to `U` (top) carries no information and is consistent with anything.

use crate::types::{is_top, Ty, TyKind};

pub fn consistent(a: &Ty, b: &Ty) -> bool {
    a.all_parts(&mut |p| b.all_parts(&mut |q| parts_consistent(p, q)))
}

fn parts_consistent(p: &Ty, q: &Ty) -> bool {
    if is_top(p) || is_top(q) {
        return true;
    }
    match (p.kind(), q.kind()) {
        (TyKind::Const(i), TyKind::Const(j)) => i == j,
        (TyKind::Arrow(a, b), TyKind::Arrow(a2, b2)) => !consistent(a, a2) || consistent(b, b2),
        _ => false,
    }
}

pub fn self_consistent(a: &Ty) -> bool {
    consistent(a, a)
}

/// Every subterm is self-consistent.
pub fn hereditarily_self_consistent(a: &Ty) -> bool {
    a.subterms().iter().all(self_consistent)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(i: u32) -> Ty {
        Ty::constant(i)
    }
    fn arr(a: Ty, b: Ty) -> Ty {
        Ty::arrow(a, b)
    }
    fn and(a: Ty, b: Ty) -> Ty {
        Ty::inter(a, b)
    }

    #[test]
    fn constants() {
        assert!(consistent(&c(0), &c(0)));
        assert!(!consistent(&c(0), &c(1)));
    }

    #[test]
    fn arrows() {
        assert!(consistent(&arr(c(0), c(1)), &arr(c(2), c(3))));
        assert!(!consistent(&arr(c(0), c(1)), &arr(c(0), c(2))));
        assert!(!consistent(&arr(c(0), c(1)), &c(0)));
    }

    #[test]
    fn self_consistency() {
        assert!(!self_consistent(&and(c(0), c(1))));
        assert!(self_consistent(&and(arr(c(0), c(1)), arr(c(2), c(3)))));
        assert!(self_consistent(&Ty::top()));
        // self-consistent but with a self-inconsistent domain
        let t = arr(and(c(0), c(1)), c(0));
        assert!(self_consistent(&t));
        assert!(!hereditarily_self_consistent(&t));
    }

    #[test]
    fn top_parts_are_neutral() {
        let u = Ty::top();
        assert!(consistent(&u, &c(0)));
        assert!(consistent(&arr(c(1), u.clone()), &c(0)));
        assert!(consistent(&and(c(0), arr(c(1), and(u.clone(), u))), &c(0)));
    }
}
