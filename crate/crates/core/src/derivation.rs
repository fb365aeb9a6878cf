//! Derivation certificates for `A <: B` and their independent checker.
//!
//! A [`Derivation`] is a proof tree with one node kind per inference rule.
//! The function rule stores its witness explicitly, so [`validate`] never
//! has to search: it re-checks each node against its rule and nothing else.

use std::fmt;
use std::sync::Arc;

use crate::types::{cod, contained_in, dom, is_top, top_in_cod, Ty};

/// A proof of `lhs <: rhs`. Cheap to clone.
#[derive(Clone, PartialEq, Eq)]
pub struct Derivation(Arc<Node>);

#[derive(Debug, PartialEq, Eq)]
struct Node {
    lhs: Ty,
    rhs: Ty,
    rule: Rule,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Rule {
    /// `α <: α` for an atom `α`.
    ReflAtom,
    /// From `A <: C` conclude `A ∩ B <: C`.
    LbL(Derivation),
    /// From `B <: C` conclude `A ∩ B <: C`.
    LbR(Derivation),
    /// From `A <: C` and `A <: D` conclude `A <: C ∩ D`.
    Glb(Derivation, Derivation),
    /// From `C <: dom(W)` and `cod(W) <: D` conclude `A <: C → D`, where
    /// `W` is contained in `A`, `D` is not top and no codomain of `W` is top.
    ArrowPrime {
        witness: Ty,
        dom: Derivation,
        cod: Derivation,
    },
    /// `A <: U`.
    UTop,
    /// `A <: C → D` whenever `D` is top.
    UArrow,
}

impl Derivation {
    /// Whether both handles point at the same node.
    pub fn same_node(&self, other: &Derivation) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }

    pub fn new(lhs: Ty, rhs: Ty, rule: Rule) -> Self {
        Derivation(Arc::new(Node { lhs, rhs, rule }))
    }

    pub fn lhs(&self) -> &Ty {
        &self.0.lhs
    }

    pub fn rhs(&self) -> &Ty {
        &self.0.rhs
    }

    pub fn rule(&self) -> &Rule {
        &self.0.rule
    }

    pub fn refl_atom(atom: Ty) -> Self {
        Derivation::new(atom.clone(), atom, Rule::ReflAtom)
    }

    /// `lhs ∩ _ <: sub.rhs` from `sub`. `lhs` must be that intersection.
    pub fn lb_l(lhs: Ty, sub: Derivation) -> Self {
        let rhs = sub.rhs().clone();
        Derivation::new(lhs, rhs, Rule::LbL(sub))
    }

    pub fn lb_r(lhs: Ty, sub: Derivation) -> Self {
        let rhs = sub.rhs().clone();
        Derivation::new(lhs, rhs, Rule::LbR(sub))
    }

    pub fn glb(left: Derivation, right: Derivation) -> Self {
        let lhs = left.lhs().clone();
        let rhs = Ty::inter(left.rhs().clone(), right.rhs().clone());
        Derivation::new(lhs, rhs, Rule::Glb(left, right))
    }

    pub fn arrow_prime(lhs: Ty, witness: Ty, dom: Derivation, cod: Derivation) -> Self {
        let rhs = Ty::arrow(dom.lhs().clone(), cod.rhs().clone());
        Derivation::new(lhs, rhs, Rule::ArrowPrime { witness, dom, cod })
    }

    pub fn u_top(lhs: Ty) -> Self {
        Derivation::new(lhs, Ty::top(), Rule::UTop)
    }

    pub fn u_arrow(lhs: Ty, rhs: Ty) -> Self {
        Derivation::new(lhs, rhs, Rule::UArrow)
    }

    /// Direct sub-derivations in premise order.
    pub fn premises(&self) -> Vec<&Derivation> {
        match self.rule() {
            Rule::ReflAtom | Rule::UTop | Rule::UArrow => vec![],
            Rule::LbL(d) | Rule::LbR(d) => vec![d],
            Rule::Glb(l, r) => vec![l, r],
            Rule::ArrowPrime { dom, cod, .. } => vec![dom, cod],
        }
    }

    pub fn rule_name(&self) -> &'static str {
        match self.rule() {
            Rule::ReflAtom => "refl_atom",
            Rule::LbL(_) => "lb_l",
            Rule::LbR(_) => "lb_r",
            Rule::Glb(..) => "glb",
            Rule::ArrowPrime { .. } => "arrow_prime",
            Rule::UTop => "u_top",
            Rule::UArrow => "u_arrow",
        }
    }

    /// Number of nodes in the tree.
    pub fn node_count(&self) -> usize {
        1 + self.premises().iter().map(|d| d.node_count()).sum::<usize>()
    }
}

impl fmt::Debug for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Derivation")
            .field("lhs", self.lhs())
            .field("rhs", self.rhs())
            .field("rule", self.rule())
            .finish()
    }
}

/// Location of a node: premise indices from the root.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct NodePath(pub Vec<usize>);

impl fmt::Display for NodePath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("root")?;
        for i in &self.0 {
            write!(f, ".{i}")?;
        }
        Ok(())
    }
}

/// The first node that does not instantiate its rule.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("invalid {rule} node at {path}: {reason}")]
pub struct ValidationError {
    pub path: NodePath,
    pub rule: &'static str,
    pub reason: String,
}

/// Re-checks every node of `d` against its rule, top-down and premises
/// left to right, stopping at the first failure.
pub fn validate(d: &Derivation) -> Result<(), ValidationError> {
    let mut path = Vec::new();
    validate_at(d, &mut path)
}

fn validate_at(d: &Derivation, path: &mut Vec<usize>) -> Result<(), ValidationError> {
    if let Err(reason) = check_node(d) {
        return Err(ValidationError {
            path: NodePath(path.clone()),
            rule: d.rule_name(),
            reason,
        });
    }
    for (i, p) in d.premises().into_iter().enumerate() {
        path.push(i);
        validate_at(p, path)?;
        path.pop();
    }
    Ok(())
}

/// Checks only the last rule of `d`, assuming its premises are valid.
pub(crate) fn validate_root(d: &Derivation) -> Result<(), ValidationError> {
    check_node(d).map_err(|reason| ValidationError {
        path: NodePath(Vec::new()),
        rule: d.rule_name(),
        reason,
    })
}

fn expect_eq(what: &str, found: &Ty, expected: &Ty) -> Result<(), String> {
    if found == expected {
        Ok(())
    } else {
        Err(format!("{what} is {found}, expected {expected}"))
    }
}

fn check_node(d: &Derivation) -> Result<(), String> {
    let (lhs, rhs) = (d.lhs(), d.rhs());
    match d.rule() {
        Rule::ReflAtom => {
            if !lhs.is_atom() {
                return Err(format!("{lhs} is not an atom"));
            }
            expect_eq("rhs", rhs, lhs)
        }
        Rule::LbL(sub) | Rule::LbR(sub) => {
            let Some((l, r)) = lhs.as_inter() else {
                return Err(format!("lhs {lhs} is not an intersection"));
            };
            let kept = if matches!(d.rule(), Rule::LbL(_)) { l } else { r };
            expect_eq("premise lhs", sub.lhs(), kept)?;
            expect_eq("premise rhs", sub.rhs(), rhs)
        }
        Rule::Glb(left, right) => {
            let Some((c, e)) = rhs.as_inter() else {
                return Err(format!("rhs {rhs} is not an intersection"));
            };
            expect_eq("left premise lhs", left.lhs(), lhs)?;
            expect_eq("right premise lhs", right.lhs(), lhs)?;
            expect_eq("left premise rhs", left.rhs(), c)?;
            expect_eq("right premise rhs", right.rhs(), e)
        }
        Rule::ArrowPrime {
            witness,
            dom: dd,
            cod: cd,
        } => {
            let Some((c, e)) = rhs.as_arrow() else {
                return Err(format!("rhs {rhs} is not an arrow"));
            };
            if !contained_in(witness, lhs) {
                return Err(format!("witness {witness} is not contained in {lhs}"));
            }
            if is_top(e) {
                return Err(format!("codomain {e} is top"));
            }
            if top_in_cod(witness) {
                return Err(format!("witness {witness} has a top codomain"));
            }
            let (Some(wd), Some(wc)) = (dom(witness), cod(witness)) else {
                return Err(format!("witness {witness} is not an intersection of arrows"));
            };
            expect_eq("domain premise lhs", dd.lhs(), c)?;
            expect_eq("domain premise rhs", dd.rhs(), &wd)?;
            expect_eq("codomain premise lhs", cd.lhs(), &wc)?;
            expect_eq("codomain premise rhs", cd.rhs(), e)
        }
        Rule::UTop => expect_eq("rhs", rhs, &Ty::top()),
        Rule::UArrow => match rhs.as_arrow() {
            Some((_, e)) if is_top(e) => Ok(()),
            Some((_, e)) => Err(format!("codomain {e} is not top")),
            None => Err(format!("rhs {rhs} is not an arrow")),
        },
    }
}

/// Every type the derivation mentions: the endpoints of each node, and for
/// function-rule nodes the witness with its domain and codomain.
pub fn occurring_types(d: &Derivation) -> Vec<Ty> {
    let mut out = Vec::new();
    let mut stack = vec![d];
    while let Some(n) = stack.pop() {
        out.push(n.lhs().clone());
        out.push(n.rhs().clone());
        if let Rule::ArrowPrime { witness, .. } = n.rule() {
            out.push(witness.clone());
            out.extend(dom(witness));
            out.extend(cod(witness));
        }
        stack.extend(n.premises().into_iter().rev());
    }
    out
}

/// Every occurring type is a subterm of one of the endpoints or an
/// intersection of such subterms.
pub fn check_subformula_conjunction(d: &Derivation) -> bool {
    let mut subformulas: Vec<Ty> = d.lhs().subterms();
    subformulas.extend(d.rhs().subterms());
    subformulas.sort();
    subformulas.dedup();
    let known = |t: &Ty| subformulas.binary_search(t).is_ok();
    occurring_types(d)
        .iter()
        .all(|t| known(t) || t.all_parts(&mut |p| known(p)))
}

/// Same as [`check_subformula_conjunction`] but reports the first type that
/// breaks the property.
pub fn subformula_violation(d: &Derivation) -> Option<Ty> {
    let mut subformulas: Vec<Ty> = d.lhs().subterms();
    subformulas.extend(d.rhs().subterms());
    subformulas.sort();
    subformulas.dedup();
    let known = |t: &Ty| subformulas.binary_search(t).is_ok();
    occurring_types(d)
        .into_iter()
        .find(|t| !(known(t) || t.all_parts(&mut |p| known(p))))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(i: u32) -> Ty {
        Ty::constant(i)
    }

    #[test]
    fn refl_leaf() {
        let d = Derivation::refl_atom(c(0));
        assert!(validate(&d).is_ok());
        assert_eq!(occurring_types(&d), vec![c(0), c(0)]);
        assert!(check_subformula_conjunction(&d));
    }

    #[test]
    fn glb_with_mismatched_lhs_is_rejected() {
        let d = Derivation::new(
            c(0),
            Ty::inter(c(0), c(1)),
            Rule::Glb(
                Derivation::refl_atom(c(0)),
                Derivation::refl_atom(c(1)),
            ),
        );
        let err = validate(&d).unwrap_err();
        assert_eq!(err.path, NodePath(vec![]));
        assert_eq!(err.rule, "glb");
    }

    #[test]
    fn arrow_prime_with_top_codomain_is_rejected() {
        // c0 -> U <: c0 -> U through the function rule is not allowed
        let a = Ty::arrow(c(0), Ty::top());
        let d = Derivation::arrow_prime(
            a.clone(),
            a.clone(),
            Derivation::refl_atom(c(0)),
            Derivation::refl_atom(Ty::top()),
        );
        let err = validate(&d).unwrap_err();
        assert!(err.reason.contains("top"), "{err}");
    }

    #[test]
    fn nested_failure_reports_path() {
        let bad = Derivation::new(c(0), c(1), Rule::ReflAtom);
        let d = Derivation::lb_r(Ty::inter(c(2), c(0)), bad);
        let err = validate(&d).unwrap_err();
        assert_eq!(err.path.to_string(), "root.0");
    }

    #[test]
    fn u_top_occurrences() {
        let a = Ty::arrow(c(0), c(1));
        let d = Derivation::u_top(a.clone());
        assert_eq!(occurring_types(&d), vec![a, Ty::top()]);
        assert!(validate(&d).is_ok());
    }

    #[test]
    fn fresh_constant_breaks_subformula_property() {
        // c0 ∩ c9 <: c0 is fine on its own, but claim it for c0 <: c0 by
        // tucking a c9 into an occurring type via a bogus witness chain.
        let inner = Derivation::lb_l(Ty::inter(c(0), c(9)), Derivation::refl_atom(c(0)));
        let outer = Derivation::new(c(0), c(0), Rule::LbL(inner));
        assert!(!check_subformula_conjunction(&outer));
        assert!(validate(&outer).is_err());
    }

    #[test]
    fn witness_from_lhs_parts_is_a_conjunction_of_subformulas() {
        // (c0 -> c1) ∩ (c0 -> c2) <: c0 -> c1 ∩ c2 with the whole left side as witness
        let p = Ty::arrow(c(0), c(1));
        let q = Ty::arrow(c(0), c(2));
        let lhs = Ty::inter(p, q);
        let dom = Derivation::glb(Derivation::refl_atom(c(0)), Derivation::refl_atom(c(0)));
        let cod = Derivation::glb(
            Derivation::lb_l(Ty::inter(c(1), c(2)), Derivation::refl_atom(c(1))),
            Derivation::lb_r(Ty::inter(c(1), c(2)), Derivation::refl_atom(c(2))),
        );
        let d = Derivation::arrow_prime(lhs.clone(), lhs, dom, cod);
        assert!(validate(&d).is_ok(), "{:?}", validate(&d));
        assert!(check_subformula_conjunction(&d));
        // dom of the witness, c0 ∩ c0, is not a subterm but is a conjunction of one
        assert!(occurring_types(&d).contains(&Ty::inter(c(0), c(0))));
    }
}
