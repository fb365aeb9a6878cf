//! Deciding `A <: B` with certificates, and the constructive metatheory of
//! the transitivity-free system: reflexivity, inversion, the factor merger
//! and the transitivity composer.

use std::collections::HashMap;

use crate::derivation::{validate, Derivation, Rule, ValidationError};
use crate::types::{
    cod, contained_in, dom, is_arrow_shaped, is_part, is_top, measure_less, top_in_cod,
    MeasureTriple, Ty, TyKind,
};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum SubtypeError {
    #[error("input derivation is invalid: {0}")]
    Invalid(#[from] ValidationError),
    #[error("derivations do not compose: {left} is not {right}")]
    EndpointMismatch { left: Ty, right: Ty },
    #[error("precondition violated: {0}")]
    Precondition(String),
}

/// Evidence that `lhs → rhs` factors `against`: a witness contained in
/// `against` whose domain is above `lhs` and whose codomain is below `rhs`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factoring {
    pub witness: Ty,
    /// `lhs <: dom(witness)`
    pub dom_deriv: Derivation,
    /// `cod(witness) <: rhs`
    pub cod_deriv: Derivation,
    pub against: Ty,
    pub lhs: Ty,
    pub rhs: Ty,
}

impl Factoring {
    /// Checks the side conditions and both sub-derivations.
    pub fn validate(&self) -> Result<(), String> {
        if !contained_in(&self.witness, &self.against) {
            return Err(format!(
                "witness {} not contained in {}",
                self.witness, self.against
            ));
        }
        if top_in_cod(&self.witness) {
            return Err(format!("witness {} has a top codomain", self.witness));
        }
        let (Some(wd), Some(wc)) = (dom(&self.witness), cod(&self.witness)) else {
            return Err(format!("witness {} has a non-arrow part", self.witness));
        };
        if self.dom_deriv.lhs() != &self.lhs || self.dom_deriv.rhs() != &wd {
            return Err("domain derivation has the wrong endpoints".into());
        }
        if self.cod_deriv.lhs() != &wc || self.cod_deriv.rhs() != &self.rhs {
            return Err("codomain derivation has the wrong endpoints".into());
        }
        validate(&self.dom_deriv).map_err(|e| e.to_string())?;
        validate(&self.cod_deriv).map_err(|e| e.to_string())
    }

    /// The function-rule node `against <: lhs → rhs` built from this factoring.
    pub fn into_derivation(self) -> Derivation {
        Derivation::arrow_prime(self.against, self.witness, self.dom_deriv, self.cod_deriv)
    }
}

/// Decides `a <: b`, returning a certificate when it holds.
///
/// Syntax-directed on `b`: `U` by the top rule, a constant by walking the
/// intersection spine of `a` to its leftmost occurrence, an intersection by
/// `glb`, and an arrow by the top-arrow rule or the function rule with the
/// witness chosen by [`find_factor`].
pub fn check_sub(a: &Ty, b: &Ty) -> Option<Derivation> {
    match b.kind() {
        TyKind::Top => Some(Derivation::u_top(a.clone())),
        TyKind::Const(_) => atom_chain(a, b),
        TyKind::Inter(c, d) => {
            let left = check_sub(a, c)?;
            let right = check_sub(a, d)?;
            Some(Derivation::glb(left, right))
        }
        TyKind::Arrow(c, d) => {
            if is_top(d) {
                Some(Derivation::u_arrow(a.clone(), b.clone()))
            } else {
                find_factor(a, c, d).map(Factoring::into_derivation)
            }
        }
    }
}

fn atom_chain(a: &Ty, atom: &Ty) -> Option<Derivation> {
    match a.kind() {
        _ if a == atom => Some(Derivation::refl_atom(atom.clone())),
        TyKind::Inter(l, r) => {
            if is_part(atom, l) {
                atom_chain(l, atom).map(|d| Derivation::lb_l(a.clone(), d))
            } else if is_part(atom, r) {
                atom_chain(r, atom).map(|d| Derivation::lb_r(a.clone(), d))
            } else {
                None
            }
        }
        _ => None,
    }
}

/// The same decision as [`check_sub`] without building a certificate.
pub fn decide(a: &Ty, b: &Ty) -> bool {
    match b.kind() {
        TyKind::Top => true,
        TyKind::Const(_) => is_part(b, a),
        TyKind::Inter(c, d) => decide(a, c) && decide(a, d),
        TyKind::Arrow(c, d) => {
            if is_top(d) {
                return true;
            }
            let mut cods: Option<Ty> = None;
            a.any_part(&mut |p| {
                if let TyKind::Arrow(p1, p2) = p.kind() {
                    if !is_top(p2) && decide(c, p1) {
                        cods = Some(match cods.take() {
                            None => p2.clone(),
                            Some(acc) => Ty::inter(acc, p2.clone()),
                        });
                    }
                }
                false
            });
            cods.is_some_and(|w| decide(&w, d))
        }
    }
}

/// Witness search for the function rule: `a <: c → d` with `d` not top.
///
/// Takes every arrow part `A₁ → A₂` of `a` with `c <: A₁` and `A₂` not top,
/// left-folded under `∩` in parts order. That witness is the largest
/// admissible one, so it only fails when `cod` of it is not below `d`.
pub fn find_factor(a: &Ty, c: &Ty, d: &Ty) -> Option<Factoring> {
    debug_assert!(!is_top(d), "find_factor on top codomain {d}");
    let mut acc: Option<(Ty, Derivation)> = None;
    for part in a.parts() {
        let TyKind::Arrow(p1, p2) = part.kind() else {
            continue;
        };
        if is_top(p2) {
            continue;
        }
        let Some(sub) = check_sub(c, p1) else {
            continue;
        };
        acc = Some(match acc {
            None => (part.clone(), sub),
            Some((w, dd)) => (Ty::inter(w, part.clone()), Derivation::glb(dd, sub)),
        });
    }
    let (witness, dom_deriv) = acc?;
    let wc = cod(&witness).expect("witness is built from arrows");
    let cod_deriv = check_sub(&wc, d)?;
    Some(Factoring {
        witness,
        dom_deriv,
        cod_deriv,
        against: a.clone(),
        lhs: c.clone(),
        rhs: d.clone(),
    })
}

/// Tries every nonempty subset of the arrow parts of `a` (in increasing
/// bitmask order, each folded in parts order) and returns the first that
/// satisfies all premises of the function rule. Exponential; for testing
/// [`find_factor`].
pub fn find_factor_exhaustive(a: &Ty, c: &Ty, d: &Ty) -> Option<Factoring> {
    debug_assert!(!is_top(d));
    let arrows: Vec<Ty> = a.parts().into_iter().filter(Ty::is_arrow).collect();
    assert!(arrows.len() < 32, "too many arrow parts to enumerate");
    for mask in 1u32..(1u32 << arrows.len()) {
        let witness = arrows
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, p)| p.clone())
            .reduce(Ty::inter)
            .expect("mask is nonempty");
        if top_in_cod(&witness) {
            continue;
        }
        let (wd, wc) = (dom(&witness).unwrap(), cod(&witness).unwrap());
        let Some(dom_deriv) = check_sub(c, &wd) else {
            continue;
        };
        let Some(cod_deriv) = check_sub(&wc, d) else {
            continue;
        };
        return Some(Factoring {
            witness,
            dom_deriv,
            cod_deriv,
            against: a.clone(),
            lhs: c.clone(),
            rhs: d.clone(),
        });
    }
    None
}

/// Merges per-part factorings into one for `dom(a) → cod(a)` against `b`.
///
/// `per_part` must hold a factoring against `b` for every arrow part of `a`
/// (no part of `a` may have a top codomain). Intersections combine their two
/// witnesses as `W₁ ∩ W₂`.
pub fn lemma_factor_all(
    a: &Ty,
    b: &Ty,
    per_part: &HashMap<Ty, Factoring>,
) -> Result<Factoring, SubtypeError> {
    if top_in_cod(a) {
        return Err(SubtypeError::Precondition(format!(
            "{a} has a top codomain"
        )));
    }
    if !is_arrow_shaped(a) {
        return Err(SubtypeError::Precondition(format!(
            "dom/cod of {a} undefined"
        )));
    }
    factor_all(a, b, per_part)
}

fn factor_all(
    a: &Ty,
    b: &Ty,
    per_part: &HashMap<Ty, Factoring>,
) -> Result<Factoring, SubtypeError> {
    match a.kind() {
        TyKind::Arrow(c, d) => {
            let f = per_part
                .get(a)
                .ok_or_else(|| SubtypeError::Precondition(format!("no factoring for {a}")))?;
            if &f.against != b || &f.lhs != c || &f.rhs != d {
                return Err(SubtypeError::Precondition(format!(
                    "factoring for {a} has the wrong shape"
                )));
            }
            Ok(f.clone())
        }
        TyKind::Inter(a1, a2) => {
            let f1 = factor_all(a1, b, per_part)?;
            let f2 = factor_all(a2, b, per_part)?;
            let lhs = Ty::inter(f1.lhs, f2.lhs);
            let rhs = Ty::inter(f1.rhs, f2.rhs);
            // dom(a1) ∩ dom(a2) <: dom(w1) ∩ dom(w2)
            let dom_deriv = Derivation::glb(
                Derivation::lb_l(lhs.clone(), f1.dom_deriv),
                Derivation::lb_r(lhs.clone(), f2.dom_deriv),
            );
            // cod(w1) ∩ cod(w2) <: cod(a1) ∩ cod(a2)
            let wc = Ty::inter(f1.cod_deriv.lhs().clone(), f2.cod_deriv.lhs().clone());
            let cod_deriv = Derivation::glb(
                Derivation::lb_l(wc.clone(), f1.cod_deriv),
                Derivation::lb_r(wc, f2.cod_deriv),
            );
            Ok(Factoring {
                witness: Ty::inter(f1.witness, f2.witness),
                dom_deriv,
                cod_deriv,
                against: b.clone(),
                lhs,
                rhs,
            })
        }
        TyKind::Top | TyKind::Const(_) => Err(SubtypeError::Precondition(format!(
            "atom {a} has no domain"
        ))),
    }
}

/// Reflexivity certificate `a <: a`, by induction on `a`. Arrows use the
/// top-arrow rule when their codomain is top and the function rule with the
/// arrow itself as witness otherwise.
pub fn refl(a: &Ty) -> Derivation {
    match a.kind() {
        TyKind::Top | TyKind::Const(_) => Derivation::refl_atom(a.clone()),
        TyKind::Arrow(a1, a2) => {
            if is_top(a2) {
                Derivation::u_arrow(a.clone(), a.clone())
            } else {
                Derivation::arrow_prime(a.clone(), a.clone(), refl(a1), refl(a2))
            }
        }
        TyKind::Inter(a1, a2) => Derivation::glb(
            Derivation::lb_l(a.clone(), refl(a1)),
            Derivation::lb_r(a.clone(), refl(a2)),
        ),
    }
}

/// `b <: a` for any `b`, given that `a` is top.
pub fn top_sub(b: &Ty, a: &Ty) -> Result<Derivation, SubtypeError> {
    match a.kind() {
        TyKind::Top => Ok(Derivation::u_top(b.clone())),
        TyKind::Arrow(_, a2) if is_top(a2) => Ok(Derivation::u_arrow(b.clone(), a.clone())),
        TyKind::Inter(a1, a2) => Ok(Derivation::glb(top_sub(b, a1)?, top_sub(b, a2)?)),
        _ => Err(SubtypeError::Precondition(format!("{a} is not top"))),
    }
}

/// Splits `A <: B ∩ C` into `A <: B` and `A <: C`.
pub fn split_glb(d: &Derivation) -> Result<(Derivation, Derivation), SubtypeError> {
    match d.rule() {
        Rule::Glb(l, r) => Ok((l.clone(), r.clone())),
        Rule::LbL(sub) => {
            let (l, r) = split_glb(sub)?;
            Ok((
                Derivation::lb_l(d.lhs().clone(), l),
                Derivation::lb_l(d.lhs().clone(), r),
            ))
        }
        Rule::LbR(sub) => {
            let (l, r) = split_glb(sub)?;
            Ok((
                Derivation::lb_r(d.lhs().clone(), l),
                Derivation::lb_r(d.lhs().clone(), r),
            ))
        }
        _ => Err(SubtypeError::Precondition(format!(
            "{} <: {} does not end in an intersection",
            d.lhs(),
            d.rhs()
        ))),
    }
}

/// From `A <: B` and `c` a part of `B`, `A <: c`.
pub fn part_sub(d: &Derivation, c: &Ty) -> Result<Derivation, SubtypeError> {
    let b = d.rhs();
    if b == c && !matches!(c.kind(), TyKind::Inter(..)) {
        return Ok(d.clone());
    }
    match b.kind() {
        TyKind::Inter(b1, b2) => {
            let (l, r) = split_glb(d)?;
            if is_part(c, b1) {
                part_sub(&l, c)
            } else if is_part(c, b2) {
                part_sub(&r, c)
            } else {
                Err(SubtypeError::Precondition(format!("{c} is not a part of {b}")))
            }
        }
        _ => Err(SubtypeError::Precondition(format!("{c} is not a part of {b}"))),
    }
}

/// From `A <: B` and `c` contained in `B`, `A <: c`.
pub fn contained_sub(d: &Derivation, c: &Ty) -> Result<Derivation, SubtypeError> {
    match c.kind() {
        TyKind::Inter(c1, c2) => Ok(Derivation::glb(
            contained_sub(d, c1)?,
            contained_sub(d, c2)?,
        )),
        _ => part_sub(d, c),
    }
}

/// Inversion for function types: from `A <: B`, `c → e` a part of `B` and
/// `e` not top, a factoring of `A` for `c → e`. Follows the derivation.
pub fn invert_arrow(d: &Derivation, c: &Ty, e: &Ty) -> Result<Factoring, SubtypeError> {
    let fail = || {
        SubtypeError::Precondition(format!(
            "{c} -> {e} is not a non-top arrow part of {}",
            d.rhs()
        ))
    };
    if is_top(e) {
        return Err(fail());
    }
    match d.rule() {
        Rule::LbL(sub) | Rule::LbR(sub) => {
            let mut f = invert_arrow(sub, c, e)?;
            f.against = d.lhs().clone();
            Ok(f)
        }
        Rule::Glb(l, r) => {
            let part = Ty::arrow(c.clone(), e.clone());
            if is_part(&part, l.rhs()) {
                invert_arrow(l, c, e)
            } else {
                invert_arrow(r, c, e)
            }
        }
        Rule::ArrowPrime { witness, dom, cod } if d.rhs().as_arrow() == Some((c, e)) => {
            Ok(Factoring {
                witness: witness.clone(),
                dom_deriv: dom.clone(),
                cod_deriv: cod.clone(),
                against: d.lhs().clone(),
                lhs: c.clone(),
                rhs: e.clone(),
            })
        }
        _ => Err(fail()),
    }
}

/// Composes `a <: b` and `b <: c` into `a <: c` without a transitivity
/// rule, by recursion on the last rule of the second derivation.
pub fn trans_compose(d1: &Derivation, d2: &Derivation) -> Result<Derivation, SubtypeError> {
    if d1.rhs() != d2.lhs() {
        return Err(SubtypeError::EndpointMismatch {
            left: d1.rhs().clone(),
            right: d2.lhs().clone(),
        });
    }
    validate(d1)?;
    validate(d2)?;
    compose(d1, d2)
}

fn compose(d1: &Derivation, d2: &Derivation) -> Result<Derivation, SubtypeError> {
    let measure = MeasureTriple::of(d2.lhs(), d2.rhs());
    let recurse = |x: &Derivation, y: &Derivation| {
        debug_assert!(
            measure_less(MeasureTriple::of(y.lhs(), y.rhs()), measure),
            "transitivity measure did not decrease: {} <: {} <: {}",
            x.lhs(),
            y.lhs(),
            y.rhs()
        );
        compose(x, y)
    };
    let a = d1.lhs();
    match d2.rule() {
        Rule::ReflAtom => Ok(d1.clone()),
        Rule::LbL(sub) => recurse(&split_glb(d1)?.0, sub),
        Rule::LbR(sub) => recurse(&split_glb(d1)?.1, sub),
        Rule::Glb(l, r) => Ok(Derivation::glb(recurse(d1, l)?, recurse(d1, r)?)),
        Rule::ArrowPrime { witness, dom, cod } => {
            // A <: B' for the witness B' contained in B, then every arrow part
            // of B' factors A, and those merge into one factoring A'.
            let to_witness = contained_sub(d1, witness)?;
            let mut per_part = HashMap::new();
            for part in witness.parts() {
                if per_part.contains_key(&part) {
                    continue;
                }
                let (p1, p2) = part.as_arrow().ok_or_else(|| {
                    SubtypeError::Precondition(format!("witness part {part} is not an arrow"))
                })?;
                let f = invert_arrow(&to_witness, p1, p2)?;
                per_part.insert(part.clone(), f);
            }
            let merged = lemma_factor_all(witness, a, &per_part)?;
            // C₁ <: dom(B') <: dom(A') and cod(A') <: cod(B') <: C₂
            let new_dom = recurse(dom, &merged.dom_deriv)?;
            let new_cod = recurse(&merged.cod_deriv, cod)?;
            Ok(Derivation::arrow_prime(
                a.clone(),
                merged.witness,
                new_dom,
                new_cod,
            ))
        }
        Rule::UTop => Ok(Derivation::u_top(a.clone())),
        Rule::UArrow => Ok(Derivation::u_arrow(a.clone(), d2.rhs().clone())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::derivation::check_subformula_conjunction;

    fn c(i: u32) -> Ty {
        Ty::constant(i)
    }
    fn u() -> Ty {
        Ty::top()
    }
    fn arr(a: Ty, b: Ty) -> Ty {
        Ty::arrow(a, b)
    }
    fn and(a: Ty, b: Ty) -> Ty {
        Ty::inter(a, b)
    }

    fn assert_valid(d: &Derivation, lhs: &Ty, rhs: &Ty) {
        assert_eq!(d.lhs(), lhs);
        assert_eq!(d.rhs(), rhs);
        validate(d).unwrap();
        assert!(check_subformula_conjunction(d));
    }

    #[test]
    fn check_sub_examples() {
        let d = check_sub(&c(0), &c(0)).unwrap();
        assert!(matches!(d.rule(), Rule::ReflAtom));

        let lhs = and(arr(c(0), c(1)), arr(c(0), c(2)));
        let rhs = arr(c(0), and(c(1), c(2)));
        assert_valid(&check_sub(&lhs, &rhs).unwrap(), &lhs, &rhs);

        let d = check_sub(&u(), &arr(c(0), u())).unwrap();
        assert!(matches!(d.rule(), Rule::UArrow));

        assert!(check_sub(&c(0), &c(1)).is_none());

        let big = arr(c(0), and(c(1), c(2)));
        let small = arr(c(0), c(1));
        assert_valid(&check_sub(&big, &small).unwrap(), &big, &small);
        assert!(check_sub(&small, &big).is_none());
    }

    #[test]
    fn atom_chain_takes_leftmost_occurrence() {
        let a = and(and(c(1), c(0)), c(0));
        let d = check_sub(&a, &c(0)).unwrap();
        assert!(matches!(d.rule(), Rule::LbL(_)));
        assert_valid(&d, &a, &c(0));
    }

    #[test]
    fn decide_matches_check_sub_on_examples() {
        let cases = [
            (and(arr(c(0), c(1)), arr(c(0), c(2))), arr(c(0), and(c(1), c(2)))),
            (arr(c(0), c(1)), arr(c(0), and(c(1), c(2)))),
            (u(), arr(c(0), and(u(), u()))),
            (and(c(0), c(1)), and(c(1), c(0))),
        ];
        for (a, b) in cases {
            assert_eq!(decide(&a, &b), check_sub(&a, &b).is_some(), "{a} <: {b}");
        }
    }

    #[test]
    fn find_factor_examples() {
        let p = arr(c(0), c(1));
        let q = arr(c(0), c(2));
        let a = and(p.clone(), q.clone());
        let f = find_factor(&a, &c(0), &and(c(1), c(2))).unwrap();
        assert_eq!(f.witness, a);
        f.validate().unwrap();
        let g = find_factor_exhaustive(&a, &c(0), &and(c(1), c(2))).unwrap();
        g.validate().unwrap();

        let a = and(p.clone(), arr(c(0), u()));
        let f = find_factor(&a, &c(0), &c(1)).unwrap();
        assert_eq!(f.witness, p);

        assert!(find_factor(&c(0), &c(1), &c(2)).is_none());
        assert!(find_factor_exhaustive(&arr(c(0), u()), &c(0), &c(1)).is_none());
    }

    #[test]
    fn exhaustive_finds_two_arrow_witness() {
        let a = and(arr(c(1), c(2)), arr(c(0), c(3)));
        let f = find_factor_exhaustive(&a, &and(c(0), c(1)), &and(c(2), c(3))).unwrap();
        assert_eq!(f.witness.parts().len(), 2);
        f.validate().unwrap();
        assert!(find_factor(&a, &and(c(0), c(1)), &and(c(2), c(3))).is_some());
    }

    #[test]
    fn factor_all_single_arrow_passes_through() {
        let a = arr(c(0), c(1));
        let f = find_factor(&a, &c(0), &c(1)).unwrap();
        let map = HashMap::from([(a.clone(), f.clone())]);
        assert_eq!(lemma_factor_all(&a, &a, &map).unwrap(), f);
    }

    #[test]
    fn factor_all_merges_witnesses() {
        let p = arr(c(0), c(1));
        let q = arr(c(0), c(2));
        let a = and(p.clone(), q.clone());
        let map = HashMap::from([
            (p.clone(), find_factor(&a, &c(0), &c(1)).unwrap()),
            (q.clone(), find_factor(&a, &c(0), &c(2)).unwrap()),
        ]);
        let f = lemma_factor_all(&a, &a, &map).unwrap();
        assert_eq!(f.lhs, and(c(0), c(0)));
        assert_eq!(f.rhs, and(c(1), c(2)));
        f.validate().unwrap();
    }

    #[test]
    fn factor_all_rejects_top_codomain() {
        let a = arr(c(0), u());
        let err = lemma_factor_all(&a, &a, &HashMap::new()).unwrap_err();
        assert!(matches!(err, SubtypeError::Precondition(_)));
    }

    #[test]
    fn reflexivity_and_top() {
        for t in [
            u(),
            c(3),
            arr(c(0), u()),
            and(arr(c(0), c(1)), and(u(), c(0))),
            arr(arr(c(0), c(1)), c(1)),
        ] {
            assert_valid(&refl(&t), &t, &t);
            assert_valid(&top_sub(&t, &and(u(), arr(c(0), u()))).unwrap(), &t, &and(u(), arr(c(0), u())));
        }
        assert!(top_sub(&c(0), &c(1)).is_err());
    }

    #[test]
    fn structural_lemmas() {
        let a = and(c(0), and(c(1), arr(c(0), c(1))));
        let d = refl(&a);
        let (l, r) = split_glb(&d).unwrap();
        assert_valid(&l, &a, &c(0));
        assert_valid(&r, &a, &and(c(1), arr(c(0), c(1))));
        assert_valid(&part_sub(&d, &c(1)).unwrap(), &a, &c(1));
        let sub = and(arr(c(0), c(1)), c(0));
        assert_valid(&contained_sub(&d, &sub).unwrap(), &a, &sub);
        let f = invert_arrow(&d, &c(0), &c(1)).unwrap();
        f.validate().unwrap();
        assert_eq!(f.against, a);
    }

    #[test]
    fn trans_refl_case() {
        let a = and(c(0), c(1));
        let d1 = check_sub(&a, &c(0)).unwrap();
        let d2 = check_sub(&c(0), &c(0)).unwrap();
        assert_valid(&trans_compose(&d1, &d2).unwrap(), &a, &c(0));
    }

    #[test]
    fn trans_arrow_case() {
        let a = arr(c(0), and(c(1), c(2)));
        let b = arr(c(0), c(1));
        let cc = arr(and(c(0), c(3)), c(1));
        let d = trans_compose(&check_sub(&a, &b).unwrap(), &check_sub(&b, &cc).unwrap()).unwrap();
        assert_valid(&d, &a, &cc);
        assert!(check_sub(&a, &cc).is_some());
    }

    #[test]
    fn trans_into_top() {
        let a = arr(c(0), c(1));
        let b = and(arr(c(0), c(1)), c(2));
        let d1 = check_sub(&b, &a).unwrap();
        let d = trans_compose(&d1, &check_sub(&a, &u()).unwrap()).unwrap();
        assert!(matches!(d.rule(), Rule::UTop));
    }

    #[test]
    fn trans_rejects_mismatch() {
        let d1 = check_sub(&c(0), &c(0)).unwrap();
        let d2 = check_sub(&c(1), &c(1)).unwrap();
        assert!(matches!(
            trans_compose(&d1, &d2),
            Err(SubtypeError::EndpointMismatch { .. })
        ));
    }
}
