//! The type language and the syntactic helpers the subtyping rules are
//! stated in terms of: parts, containment, `dom`/`cod`, the top predicates,
//! and the size/depth measure used by the transitivity recursion.
//!
//! Types are immutable trees behind an [`Arc`], so cloning is cheap and
//! values can be shared freely between threads. Equality is structural:
//! intersections are never reordered, flattened or deduplicated.

use std::fmt;
use std::sync::Arc;

/// An intersection type.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Ty(Arc<TyKind>);

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TyKind {
    /// The top atom `U`.
    Top,
    /// A type constant `c<i>`.
    Const(u32),
    Arrow(Ty, Ty),
    Inter(Ty, Ty),
}

impl Ty {
    pub fn top() -> Ty {
        Ty(Arc::new(TyKind::Top))
    }

    pub fn constant(index: u32) -> Ty {
        Ty(Arc::new(TyKind::Const(index)))
    }

    pub fn arrow(dom: Ty, cod: Ty) -> Ty {
        Ty(Arc::new(TyKind::Arrow(dom, cod)))
    }

    pub fn inter(left: Ty, right: Ty) -> Ty {
        Ty(Arc::new(TyKind::Inter(left, right)))
    }

    pub fn kind(&self) -> &TyKind {
        &self.0
    }

    /// `U` or a constant.
    pub fn is_atom(&self) -> bool {
        matches!(*self.0, TyKind::Top | TyKind::Const(_))
    }

    pub fn is_arrow(&self) -> bool {
        matches!(*self.0, TyKind::Arrow(..))
    }

    pub fn as_arrow(&self) -> Option<(&Ty, &Ty)> {
        match &*self.0 {
            TyKind::Arrow(d, c) => Some((d, c)),
            _ => None,
        }
    }

    pub fn as_inter(&self) -> Option<(&Ty, &Ty)> {
        match &*self.0 {
            TyKind::Inter(l, r) => Some((l, r)),
            _ => None,
        }
    }

    /// Atoms and arrows reachable through intersection nodes only, left to
    /// right. Duplicates are kept.
    pub fn parts(&self) -> Vec<Ty> {
        let mut out = Vec::new();
        self.collect_parts(&mut out);
        out
    }

    fn collect_parts(&self, out: &mut Vec<Ty>) {
        match &*self.0 {
            TyKind::Inter(l, r) => {
                l.collect_parts(out);
                r.collect_parts(out);
            }
            _ => out.push(self.clone()),
        }
    }

    /// Calls `f` on each part, left to right, stopping at the first `true`.
    pub(crate) fn any_part(&self, f: &mut impl FnMut(&Ty) -> bool) -> bool {
        match &*self.0 {
            TyKind::Inter(l, r) => l.any_part(f) || r.any_part(f),
            _ => f(self),
        }
    }

    pub(crate) fn all_parts(&self, f: &mut impl FnMut(&Ty) -> bool) -> bool {
        !self.any_part(&mut |p| !f(p))
    }

    /// All syntactic subterms, the type itself included, in pre-order.
    /// Duplicates are kept.
    pub fn subterms(&self) -> Vec<Ty> {
        let mut out = Vec::new();
        let mut stack = vec![self.clone()];
        while let Some(t) = stack.pop() {
            match &*t.0 {
                TyKind::Arrow(l, r) | TyKind::Inter(l, r) => {
                    stack.push(r.clone());
                    stack.push(l.clone());
                }
                _ => {}
            }
            out.push(t);
        }
        out
    }

    pub fn size(&self) -> usize {
        size(self)
    }

    pub fn depth(&self) -> usize {
        depth(self)
    }
}

impl fmt::Debug for Ty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Parts of `a`; see [`Ty::parts`].
pub fn parts(a: &Ty) -> Vec<Ty> {
    a.parts()
}

/// `c` is one of the parts of `b`. An intersection is never a part.
pub fn is_part(c: &Ty, b: &Ty) -> bool {
    if matches!(c.kind(), TyKind::Inter(..)) {
        return false;
    }
    b.any_part(&mut |p| p == c)
}

/// Every part of `a` is a part of `b`.
pub fn contained_in(a: &Ty, b: &Ty) -> bool {
    a.all_parts(&mut |p| is_part(p, b))
}

/// Domain of an arrow, or the intersection of the domains of an
/// intersection of arrows. Absent as soon as an atom is reached.
pub fn dom(a: &Ty) -> Option<Ty> {
    match a.kind() {
        TyKind::Arrow(d, _) => Some(d.clone()),
        TyKind::Inter(l, r) => Some(Ty::inter(dom(l)?, dom(r)?)),
        TyKind::Top | TyKind::Const(_) => None,
    }
}

pub fn cod(a: &Ty) -> Option<Ty> {
    match a.kind() {
        TyKind::Arrow(_, c) => Some(c.clone()),
        TyKind::Inter(l, r) => Some(Ty::inter(cod(l)?, cod(r)?)),
        TyKind::Top | TyKind::Const(_) => None,
    }
}

/// `dom`/`cod` are defined, i.e. every part is an arrow.
pub fn is_arrow_shaped(a: &Ty) -> bool {
    a.all_parts(&mut |p| p.is_arrow())
}

/// Types equivalent to `U`: `U` itself, arrows into a top type, and
/// intersections of top types.
pub fn is_top(a: &Ty) -> bool {
    match a.kind() {
        TyKind::Top => true,
        TyKind::Const(_) => false,
        TyKind::Arrow(_, c) => is_top(c),
        TyKind::Inter(l, r) => is_top(l) && is_top(r),
    }
}

/// Some arrow part of `d` has a top codomain.
pub fn top_in_cod(d: &Ty) -> bool {
    d.any_part(&mut |p| matches!(p.kind(), TyKind::Arrow(_, c) if is_top(c)))
}

/// Atoms count 0; arrows and intersections count 1 plus their children.
pub fn size(a: &Ty) -> usize {
    match a.kind() {
        TyKind::Top | TyKind::Const(_) => 0,
        TyKind::Arrow(l, r) | TyKind::Inter(l, r) => 1 + size(l) + size(r),
    }
}

/// Arrow nesting depth. Intersections do not add to it.
pub fn depth(a: &Ty) -> usize {
    match a.kind() {
        TyKind::Top | TyKind::Const(_) => 0,
        TyKind::Arrow(l, r) => 1 + depth(l).max(depth(r)),
        TyKind::Inter(l, r) => depth(l).max(depth(r)),
    }
}

/// The parts of a transitivity instance `⟨A, B, C⟩` that the termination
/// order looks at. `A` is ignored.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MeasureTriple {
    pub depth_mid: usize,
    pub size_mid: usize,
    pub size_right: usize,
}

impl MeasureTriple {
    pub fn new(depth_mid: usize, size_mid: usize, size_right: usize) -> Self {
        MeasureTriple {
            depth_mid,
            size_mid,
            size_right,
        }
    }

    /// Measure of composing `_ <: mid` with `mid <: right`.
    pub fn of(mid: &Ty, right: &Ty) -> Self {
        MeasureTriple::new(depth(mid), size(mid), size(right))
    }
}

/// Strict lexicographic order on (depth of the middle type, size of the
/// middle type, size of the right type).
pub fn measure_less(m1: MeasureTriple, m2: MeasureTriple) -> bool {
    m1.depth_mid < m2.depth_mid
        || (m1.depth_mid <= m2.depth_mid && m1.size_mid < m2.size_mid)
        || (m1.depth_mid <= m2.depth_mid
            && m1.size_mid <= m2.size_mid
            && m1.size_right < m2.size_right)
}
