//! Classic BCD subtyping `A ≤ B`: certificates, a rule-by-rule checker, a
//! bounded proof search used as a test oracle, and translations in both
//! directions between BCD certificates and transitivity-free ones.

use std::fmt;
use std::sync::Arc;

use crate::derivation::{validate, Derivation, NodePath, ValidationError};
use crate::subtype::{refl, top_sub, trans_compose, SubtypeError};
use crate::types::{cod, dom, is_arrow_shaped, is_part, is_top, Ty, TyKind};

/// A proof of `lhs ≤ rhs` in the BCD system. Cheap to clone.
#[derive(Clone, PartialEq, Eq)]
pub struct BcdDerivation(Arc<BcdNode>);

#[derive(Debug, PartialEq, Eq)]
struct BcdNode {
    lhs: Ty,
    rhs: Ty,
    rule: BcdRule,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BcdRule {
    Refl,
    Trans {
        mid: Ty,
        left: BcdDerivation,
        right: BcdDerivation,
    },
    /// `A ∩ B ≤ A`
    InclL,
    /// `A ∩ B ≤ B`
    InclR,
    Glb(BcdDerivation, BcdDerivation),
    /// From `C ≤ A` and `B ≤ D` conclude `A → B ≤ C → D`.
    Arrow {
        dom: BcdDerivation,
        cod: BcdDerivation,
    },
    /// `(A → B) ∩ (A → C) ≤ A → (B ∩ C)`
    ArrowInter,
    UTop,
    /// `U ≤ C → U`
    UArrow,
}

impl BcdDerivation {
    pub fn new(lhs: Ty, rhs: Ty, rule: BcdRule) -> Self {
        BcdDerivation(Arc::new(BcdNode { lhs, rhs, rule }))
    }

    pub fn lhs(&self) -> &Ty {
        &self.0.lhs
    }

    pub fn rhs(&self) -> &Ty {
        &self.0.rhs
    }

    pub fn rule(&self) -> &BcdRule {
        &self.0.rule
    }

    pub fn refl(a: Ty) -> Self {
        BcdDerivation::new(a.clone(), a, BcdRule::Refl)
    }

    pub fn trans(left: BcdDerivation, right: BcdDerivation) -> Self {
        let (lhs, mid, rhs) = (left.lhs().clone(), left.rhs().clone(), right.rhs().clone());
        BcdDerivation::new(lhs, rhs, BcdRule::Trans { mid, left, right })
    }

    pub fn glb(left: BcdDerivation, right: BcdDerivation) -> Self {
        let lhs = left.lhs().clone();
        let rhs = Ty::inter(left.rhs().clone(), right.rhs().clone());
        BcdDerivation::new(lhs, rhs, BcdRule::Glb(left, right))
    }

    /// `A → B ≤ C → D` from `C ≤ A` and `B ≤ D`.
    pub fn arrow(dom: BcdDerivation, cod: BcdDerivation) -> Self {
        let lhs = Ty::arrow(dom.rhs().clone(), cod.lhs().clone());
        let rhs = Ty::arrow(dom.lhs().clone(), cod.rhs().clone());
        BcdDerivation::new(lhs, rhs, BcdRule::Arrow { dom, cod })
    }

    pub fn premises(&self) -> Vec<&BcdDerivation> {
        match self.rule() {
            BcdRule::Trans { left, right, .. } | BcdRule::Glb(left, right) => vec![left, right],
            BcdRule::Arrow { dom, cod } => vec![dom, cod],
            _ => vec![],
        }
    }

    pub fn rule_name(&self) -> &'static str {
        match self.rule() {
            BcdRule::Refl => "refl",
            BcdRule::Trans { .. } => "trans",
            BcdRule::InclL => "incl_l",
            BcdRule::InclR => "incl_r",
            BcdRule::Glb(..) => "glb",
            BcdRule::Arrow { .. } => "arrow",
            BcdRule::ArrowInter => "arrow_inter",
            BcdRule::UTop => "u_top",
            BcdRule::UArrow => "u_arrow",
        }
    }

    pub fn node_count(&self) -> usize {
        1 + self.premises().iter().map(|d| d.node_count()).sum::<usize>()
    }
}

impl fmt::Debug for BcdDerivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BcdDerivation")
            .field("lhs", self.lhs())
            .field("rhs", self.rhs())
            .field("rule", self.rule())
            .finish()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum BcdError {
    #[error("invalid BCD derivation: {0}")]
    InvalidBcd(ValidationError),
    #[error(transparent)]
    Subtype(#[from] SubtypeError),
    #[error("precondition violated: {0}")]
    Precondition(String),
}

pub fn bcd_validate(d: &BcdDerivation) -> Result<(), ValidationError> {
    let mut path = Vec::new();
    validate_at(d, &mut path)
}

fn validate_at(d: &BcdDerivation, path: &mut Vec<usize>) -> Result<(), ValidationError> {
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

fn same(what: &str, found: &Ty, expected: &Ty) -> Result<(), String> {
    if found == expected {
        Ok(())
    } else {
        Err(format!("{what} is {found}, expected {expected}"))
    }
}

fn check_node(d: &BcdDerivation) -> Result<(), String> {
    let (lhs, rhs) = (d.lhs(), d.rhs());
    let not_inter = || format!("lhs {lhs} is not an intersection");
    match d.rule() {
        BcdRule::Refl => same("rhs", rhs, lhs),
        BcdRule::Trans { mid, left, right } => {
            same("left premise lhs", left.lhs(), lhs)?;
            same("left premise rhs", left.rhs(), mid)?;
            same("right premise lhs", right.lhs(), mid)?;
            same("right premise rhs", right.rhs(), rhs)
        }
        BcdRule::InclL => same("rhs", rhs, lhs.as_inter().ok_or_else(not_inter)?.0),
        BcdRule::InclR => same("rhs", rhs, lhs.as_inter().ok_or_else(not_inter)?.1),
        BcdRule::Glb(left, right) => {
            let (c, e) = rhs
                .as_inter()
                .ok_or_else(|| format!("rhs {rhs} is not an intersection"))?;
            same("left premise lhs", left.lhs(), lhs)?;
            same("right premise lhs", right.lhs(), lhs)?;
            same("left premise rhs", left.rhs(), c)?;
            same("right premise rhs", right.rhs(), e)
        }
        BcdRule::Arrow { dom, cod } => {
            let (a, b) = lhs
                .as_arrow()
                .ok_or_else(|| format!("lhs {lhs} is not an arrow"))?;
            let (c, e) = rhs
                .as_arrow()
                .ok_or_else(|| format!("rhs {rhs} is not an arrow"))?;
            same("domain premise lhs", dom.lhs(), c)?;
            same("domain premise rhs", dom.rhs(), a)?;
            same("codomain premise lhs", cod.lhs(), b)?;
            same("codomain premise rhs", cod.rhs(), e)
        }
        BcdRule::ArrowInter => {
            let shape = || format!("{lhs} <= {rhs} is not (A->B)&(A->C) <= A->B&C");
            let (l, r) = lhs.as_inter().ok_or_else(shape)?;
            let (a1, b) = l.as_arrow().ok_or_else(shape)?;
            let (a2, c) = r.as_arrow().ok_or_else(shape)?;
            let (a3, bc) = rhs.as_arrow().ok_or_else(shape)?;
            let (b2, c2) = bc.as_inter().ok_or_else(shape)?;
            if a1 != a2 || a1 != a3 {
                return Err(format!("domains {a1}, {a2}, {a3} differ"));
            }
            same("first codomain", b2, b)?;
            same("second codomain", c2, c)
        }
        BcdRule::UTop => same("rhs", rhs, &Ty::top()),
        BcdRule::UArrow => {
            same("lhs", lhs, &Ty::top())?;
            match rhs.as_arrow() {
                Some((_, u)) => same("codomain", u, &Ty::top()),
                None => Err(format!("rhs {rhs} is not an arrow")),
            }
        }
    }
}

/// Default height bound for [`bcd_search`].
pub const DEFAULT_SEARCH_DEPTH: usize = 8;

/// Last rule of a derived pair. Premises of glb and arrow steps follow
/// from the shapes of the pair; transitivity midpoints from the levels.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[repr(u8)]
enum Step {
    None,
    Refl,
    InclL,
    InclR,
    UTop,
    UArrow,
    ArrowInter,
    Trans,
    Glb,
    Arrow,
}

/// Bounded search for a BCD proof of `a ≤ b` of height at most `max_depth`.
///
/// Every type in the derivation, including each transitivity midpoint, is
/// drawn from a finite pool: the subterms of `a` and `b`, `U`, and the
/// intersections of two distinct such subterms. The pool is saturated
/// level by level, so a pair first derived at level `k` has a proof of
/// height `k`. Absence of a result proves nothing; in particular pools of
/// more than [`MAX_POOL`] types are not searched.
pub fn bcd_search(a: &Ty, b: &Ty, max_depth: usize) -> Option<BcdDerivation> {
    if max_depth == 0 {
        return None;
    }
    let pool = Pool::new(a, b);
    let (ia, ib) = (pool.index(a)?, pool.index(b)?);
    match pool.len().div_ceil(64) {
        1 => saturate::<1>(&pool, ia, ib, max_depth),
        2 => saturate::<2>(&pool, ia, ib, max_depth),
        3..=4 => saturate::<4>(&pool, ia, ib, max_depth),
        5..=8 => saturate::<8>(&pool, ia, ib, max_depth),
        9..=16 => saturate::<16>(&pool, ia, ib, max_depth),
        17..=32 => saturate::<32>(&pool, ia, ib, max_depth),
        33..=64 => saturate::<64>(&pool, ia, ib, max_depth),
        _ => None,
    }
}

/// Largest pool [`bcd_search`] will saturate.
pub const MAX_POOL: usize = 64 * 64;

fn saturate<const W: usize>(
    pool: &Pool,
    ia: usize,
    ib: usize,
    max_depth: usize,
) -> Option<BcdDerivation> {
    let mut sat = Saturation::<W>::new(pool.len());
    sat.axioms(pool);
    for level in 2..=max_depth.min(u8::MAX as usize) {
        if sat.derived(ia, ib) || !sat.step(pool, level) {
            break;
        }
    }
    if !sat.derived(ia, ib) {
        return None;
    }
    Some(sat.rebuild(pool, ia, ib))
}

type Row<const W: usize> = [u64; W];

fn has<const W: usize>(row: &Row<W>, y: usize) -> bool {
    row[y / 64] >> (y % 64) & 1 == 1
}

fn or_into<const W: usize>(acc: &mut Row<W>, src: &Row<W>) {
    for (a, b) in acc.iter_mut().zip(src) {
        *a |= b;
    }
}

fn ones<const W: usize>(row: Row<W>) -> impl Iterator<Item = usize> {
    row.into_iter().enumerate().flat_map(|(wi, word)| {
        let mut bits = word;
        std::iter::from_fn(move || {
            (bits != 0).then(|| {
                let y = wi * 64 + bits.trailing_zeros() as usize;
                bits &= bits - 1;
                y
            })
        })
    })
}

/// Derived pairs as bit rows, with the level and last rule of each.
struct Saturation<const W: usize> {
    n: usize,
    rows: Vec<Row<W>>,
    /// pairs first derived at the previous level
    delta: Vec<Row<W>>,
    level: Vec<u8>,
    steps: Vec<Step>,
}

impl<const W: usize> Saturation<W> {
    fn new(n: usize) -> Self {
        Saturation {
            n,
            rows: vec![[0; W]; n],
            delta: vec![[0; W]; n],
            level: vec![0; n * n],
            steps: vec![Step::None; n * n],
        }
    }

    fn derived(&self, x: usize, y: usize) -> bool {
        has(&self.rows[x], y)
    }

    /// Records a pair into `fresh` unless it is already known.
    fn set(&mut self, fresh: &mut [Row<W>], x: usize, y: usize, level: usize, step: Step) -> bool {
        let (i, mask) = (y / 64, 1u64 << (y % 64));
        if (self.rows[x][i] | fresh[x][i]) & mask != 0 {
            return false;
        }
        fresh[x][i] |= mask;
        self.level[x * self.n + y] = level as u8;
        self.steps[x * self.n + y] = step;
        true
    }

    fn axioms(&mut self, pool: &Pool) {
        let mut fresh = vec![[0u64; W]; self.n];
        for x in 0..self.n {
            self.set(&mut fresh, x, x, 1, Step::Refl);
            if let Some(u) = pool.top {
                self.set(&mut fresh, x, u, 1, Step::UTop);
            }
        }
        for z in 0..self.n {
            if let Some((p, q)) = pool.inter[z] {
                self.set(&mut fresh, z, p, 1, Step::InclL);
                self.set(&mut fresh, z, q, 1, Step::InclR);
            }
        }
        if let Some(u) = pool.top {
            for &z in &pool.arrows {
                if pool.arrow[z].map(|(_, c)| c) == Some(u) {
                    self.set(&mut fresh, u, z, 1, Step::UArrow);
                }
            }
        }
        for &(l, r) in &pool.arrow_inters {
            self.set(&mut fresh, l, r, 1, Step::ArrowInter);
        }
        self.rows.copy_from_slice(&fresh);
        self.delta = fresh;
    }

    /// One level: every rule applied to premises known so far, at least one
    /// of them new at the previous level. Returns whether anything changed.
    fn step(&mut self, pool: &Pool, level: usize) -> bool {
        let n = self.n;
        let mut fresh = vec![[0u64; W]; n];
        let mut changed = false;
        let mut active = [0u64; W];
        for (y, r) in self.delta.iter().enumerate() {
            if r.iter().any(|&b| b != 0) {
                active[y / 64] |= 1 << (y % 64);
            }
        }
        for x in 0..n {
            let (row, new) = (self.rows[x], self.delta[x]);
            let mut acc = [0u64; W];
            for y in ones(new) {
                or_into(&mut acc, &self.rows[y]);
            }
            let mut old = [0u64; W];
            for wi in 0..W {
                old[wi] = row[wi] & !new[wi] & active[wi];
            }
            for y in ones(old) {
                or_into(&mut acc, &self.delta[y]);
            }
            for wi in 0..W {
                acc[wi] &= !row[wi];
            }
            for z in ones(acc) {
                changed |= self.set(&mut fresh, x, z, level, Step::Trans);
            }
            for p in ones(new) {
                for &(z, q) in pool.parents(p) {
                    if has(&row, q) {
                        changed |= self.set(&mut fresh, x, z, level, Step::Glb);
                    }
                }
            }
        }
        for &l in &pool.arrows {
            let (la, lb) = pool.arrow[l].expect("arrow");
            for &r in &pool.arrows {
                let (rc, rd) = pool.arrow[r].expect("arrow");
                let new = has(&self.delta[rc], la) || has(&self.delta[lb], rd);
                if new && self.derived(rc, la) && self.derived(lb, rd) {
                    changed |= self.set(&mut fresh, l, r, level, Step::Arrow);
                }
            }
        }
        for (r, f) in self.rows.iter_mut().zip(&fresh) {
            or_into(r, f);
        }
        self.delta = fresh;
        changed
    }

    fn rebuild(&self, pool: &Pool, x: usize, y: usize) -> BcdDerivation {
        let n = self.n;
        let (lhs, rhs) = (pool.ty(x), pool.ty(y));
        let rule = match self.steps[x * n + y] {
            Step::None => unreachable!("only derived pairs are rebuilt"),
            Step::Refl => BcdRule::Refl,
            Step::InclL => BcdRule::InclL,
            Step::InclR => BcdRule::InclR,
            Step::UTop => BcdRule::UTop,
            Step::UArrow => BcdRule::UArrow,
            Step::ArrowInter => BcdRule::ArrowInter,
            Step::Trans => {
                let k = self.level[x * n + y];
                let below = |i: usize| self.level[i] != 0 && self.level[i] < k;
                let m = (0..n)
                    .find(|&m| below(x * n + m) && below(m * n + y))
                    .expect("transitive pair has an earlier midpoint");
                BcdRule::Trans {
                    mid: pool.ty(m),
                    left: self.rebuild(pool, x, m),
                    right: self.rebuild(pool, m, y),
                }
            }
            Step::Glb => {
                let (p, q) = pool.inter[y].expect("glb concludes an intersection");
                BcdRule::Glb(self.rebuild(pool, x, p), self.rebuild(pool, x, q))
            }
            Step::Arrow => {
                let (a, b) = pool.arrow[x].expect("arrow rule relates arrows");
                let (c, d) = pool.arrow[y].expect("arrow rule relates arrows");
                BcdRule::Arrow {
                    dom: self.rebuild(pool, c, a),
                    cod: self.rebuild(pool, b, d),
                }
            }
        };
        BcdDerivation::new(lhs, rhs, rule)
    }
}

/// Candidate types for a bounded search: the sorted, distinct subterms of
/// both endpoints and `U`, then the intersections of two distinct of them
/// that are not already present. Shapes are indexed by position so rules
/// never compare types; the added intersections are only built as types
/// when they appear in a rebuilt proof.
struct Pool {
    /// the base types
    types: Vec<Ty>,
    len: usize,
    top: Option<usize>,
    inter: Vec<Option<(usize, usize)>>,
    arrow: Vec<Option<(usize, usize)>>,
    arrows: Vec<usize>,
    /// for each `p`, every `(z, q)` with `z` the intersection of `p` and
    /// `q` in either order, at `parents[parent_start[p]..parent_start[p + 1]]`
    parent_start: Vec<usize>,
    parents: Vec<(usize, usize)>,
    /// `(l, r)` instances of the distributivity axiom
    arrow_inters: Vec<(usize, usize)>,
}

impl Pool {
    fn new(a: &Ty, b: &Ty) -> Self {
        let mut types = a.subterms();
        types.extend(b.subterms());
        types.push(Ty::top());
        types.sort();
        types.dedup();
        let m = types.len();
        let find = |t: &Ty| types.binary_search(t).expect("subterm closed");
        // base shapes by child position; subterms are closed under children
        let mut inter = vec![None; m];
        let mut arrow = vec![None; m];
        let mut inter_at = vec![usize::MAX; m * m];
        let mut arrow_at = vec![usize::MAX; m * m];
        for (z, t) in types.iter().enumerate() {
            match t.kind() {
                TyKind::Inter(p, q) => {
                    let (ip, iq) = (find(p), find(q));
                    inter[z] = Some((ip, iq));
                    inter_at[ip * m + iq] = z;
                }
                TyKind::Arrow(d, c) => {
                    let (id, ic) = (find(d), find(c));
                    arrow[z] = Some((id, ic));
                    arrow_at[id * m + ic] = z;
                }
                _ => {}
            }
        }
        for i in 0..m {
            for j in i + 1..m {
                if inter_at[i * m + j] == usize::MAX {
                    inter_at[i * m + j] = inter.len();
                    inter.push(Some((i, j)));
                    arrow.push(None);
                }
            }
        }
        let n = inter.len();
        let mut parent_start = vec![0usize; n + 1];
        for &(p, q) in inter.iter().flatten() {
            parent_start[p + 1] += 1;
            if p != q {
                parent_start[q + 1] += 1;
            }
        }
        for i in 0..n {
            parent_start[i + 1] += parent_start[i];
        }
        let mut parents = vec![(0, 0); parent_start[n]];
        let mut fill = parent_start.clone();
        let mut arrows = Vec::new();
        let mut arrow_inters = Vec::new();
        for z in 0..n {
            if let Some((p, q)) = inter[z] {
                parents[fill[p]] = (z, q);
                fill[p] += 1;
                if p != q {
                    parents[fill[q]] = (z, p);
                    fill[q] += 1;
                }
                if let (Some((a1, b1)), Some((a2, c1))) = (arrow[p], arrow[q]) {
                    let cod = inter_at[b1 * m + c1];
                    if a1 == a2 && cod < m {
                        let r = arrow_at[a1 * m + cod];
                        if r != usize::MAX {
                            arrow_inters.push((z, r));
                        }
                    }
                }
            }
            if arrow[z].is_some() {
                arrows.push(z);
            }
        }
        let top = types.binary_search(&Ty::top()).ok();
        Pool {
            types,
            len: n,
            top,
            inter,
            arrow,
            arrows,
            parent_start,
            parents,
            arrow_inters,
        }
    }

    fn len(&self) -> usize {
        self.len
    }

    fn ty(&self, z: usize) -> Ty {
        match self.types.get(z) {
            Some(t) => t.clone(),
            None => {
                let (p, q) = self.inter[z].expect("added types are intersections");
                Ty::inter(self.ty(p), self.ty(q))
            }
        }
    }

    fn parents(&self, p: usize) -> &[(usize, usize)] {
        &self.parents[self.parent_start[p]..self.parent_start[p + 1]]
    }

    /// Position of an endpoint; endpoints are always base types.
    fn index(&self, t: &Ty) -> Option<usize> {
        self.types.binary_search(t).ok()
    }
}

/// `A → B <: C → D` from `C <: A` and `B <: D`.
pub fn lemma_fun(d1: &Derivation, d2: &Derivation) -> Result<Derivation, SubtypeError> {
    validate(d1)?;
    validate(d2)?;
    Ok(fun(d1, d2))
}

/// [`lemma_fun`] for inputs already known to be valid.
pub(crate) fn fun(d1: &Derivation, d2: &Derivation) -> Derivation {
    let (c, a) = (d1.lhs(), d1.rhs());
    let (b, d) = (d2.lhs(), d2.rhs());
    let lhs = Ty::arrow(a.clone(), b.clone());
    if is_top(d) {
        return Derivation::u_arrow(lhs, Ty::arrow(c.clone(), d.clone()));
    }
    // top(B) and B <: D would force top(D)
    assert!(!is_top(b), "valid derivation from top {b} to non-top {d}");
    Derivation::arrow_prime(lhs.clone(), lhs, d1.clone(), d2.clone())
}

/// `(A → B) ∩ (A → C) <: A → (B ∩ C)`, split on which codomains are top.
pub fn lemma_dist(a: &Ty, b: &Ty, c: &Ty) -> Derivation {
    let ab = Ty::arrow(a.clone(), b.clone());
    let ac = Ty::arrow(a.clone(), c.clone());
    let lhs = Ty::inter(ab.clone(), ac.clone());
    let bc = Ty::inter(b.clone(), c.clone());
    let rhs = Ty::arrow(a.clone(), bc.clone());
    match (is_top(b), is_top(c)) {
        (true, true) => Derivation::u_arrow(lhs, rhs),
        (true, false) => {
            let cod = Derivation::glb(top_sub(c, b).expect("b is top"), refl(c));
            Derivation::arrow_prime(lhs, ac, refl(a), cod)
        }
        (false, true) => {
            let cod = Derivation::glb(refl(b), top_sub(b, c).expect("c is top"));
            Derivation::arrow_prime(lhs, ab, refl(a), cod)
        }
        (false, false) => {
            let dom = Derivation::glb(refl(a), refl(a));
            Derivation::arrow_prime(lhs.clone(), lhs, dom, refl(&bc))
        }
    }
}

/// `A ≤ dom(A) → cod(A)` for a type whose parts are all arrows.
pub fn lemma_eta(a: &Ty) -> Result<BcdDerivation, BcdError> {
    if !is_arrow_shaped(a) {
        return Err(BcdError::Precondition(format!("dom/cod of {a} undefined")));
    }
    Ok(eta(a))
}

fn eta(a: &Ty) -> BcdDerivation {
    match a.kind() {
        TyKind::Arrow(..) => BcdDerivation::refl(a.clone()),
        TyKind::Inter(a1, a2) => {
            let (d1, c1) = (dom(a1).unwrap(), cod(a1).unwrap());
            let (d2, c2) = (dom(a2).unwrap(), cod(a2).unwrap());
            let d = Ty::inter(d1.clone(), d2.clone());
            let incl_l = |x: &Ty, l: &Ty| BcdDerivation::new(x.clone(), l.clone(), BcdRule::InclL);
            let incl_r = |x: &Ty, r: &Ty| BcdDerivation::new(x.clone(), r.clone(), BcdRule::InclR);
            // a1 ∩ a2 ≤ (d1 → c1) ∩ (d2 → c2)
            let split = BcdDerivation::glb(
                BcdDerivation::trans(incl_l(a, a1), eta(a1)),
                BcdDerivation::trans(incl_r(a, a2), eta(a2)),
            );
            // (d1 → c1) ∩ (d2 → c2) ≤ (d → c1) ∩ (d → c2)
            let pair = split.rhs().clone();
            let (f1, f2) = pair.as_inter().unwrap();
            let narrow = BcdDerivation::glb(
                BcdDerivation::trans(
                    incl_l(&pair, f1),
                    BcdDerivation::arrow(incl_l(&d, &d1), BcdDerivation::refl(c1.clone())),
                ),
                BcdDerivation::trans(
                    incl_r(&pair, f2),
                    BcdDerivation::arrow(incl_r(&d, &d2), BcdDerivation::refl(c2.clone())),
                ),
            );
            // (d → c1) ∩ (d → c2) ≤ d → c1 ∩ c2
            let dist = BcdDerivation::new(
                narrow.rhs().clone(),
                Ty::arrow(d, Ty::inter(c1, c2)),
                BcdRule::ArrowInter,
            );
            BcdDerivation::trans(split, BcdDerivation::trans(narrow, dist))
        }
        TyKind::Top | TyKind::Const(_) => unreachable!("checked by lemma_eta"),
    }
}

/// Translates a transitivity-free certificate into a BCD one with the same
/// endpoints.
pub fn to_bcd(d: &Derivation) -> Result<BcdDerivation, BcdError> {
    validate(d).map_err(SubtypeError::from)?;
    Ok(translate_to_bcd(d))
}

fn translate_to_bcd(d: &Derivation) -> BcdDerivation {
    use crate::derivation::Rule;
    let (lhs, rhs) = (d.lhs(), d.rhs());
    match d.rule() {
        Rule::ReflAtom => BcdDerivation::refl(lhs.clone()),
        Rule::LbL(sub) => {
            let (l, _) = lhs.as_inter().unwrap();
            let incl = BcdDerivation::new(lhs.clone(), l.clone(), BcdRule::InclL);
            BcdDerivation::trans(incl, translate_to_bcd(sub))
        }
        Rule::LbR(sub) => {
            let (_, r) = lhs.as_inter().unwrap();
            let incl = BcdDerivation::new(lhs.clone(), r.clone(), BcdRule::InclR);
            BcdDerivation::trans(incl, translate_to_bcd(sub))
        }
        Rule::Glb(l, r) => BcdDerivation::glb(translate_to_bcd(l), translate_to_bcd(r)),
        Rule::ArrowPrime { witness, dom, cod } => {
            // A ≤ W ≤ dom(W) → cod(W) ≤ C → D
            let to_witness = bcd_contained(lhs, witness);
            let eta = eta(witness);
            let arrow = BcdDerivation::arrow(translate_to_bcd(dom), translate_to_bcd(cod));
            BcdDerivation::trans(to_witness, BcdDerivation::trans(eta, arrow))
        }
        Rule::UTop => BcdDerivation::new(lhs.clone(), rhs.clone(), BcdRule::UTop),
        Rule::UArrow => {
            // A ≤ U ≤ C → U ≤ C → D
            let (c, e) = rhs.as_arrow().unwrap();
            let u = Ty::top();
            let c_to_u = Ty::arrow(c.clone(), u.clone());
            let chain = BcdDerivation::trans(
                BcdDerivation::new(lhs.clone(), u.clone(), BcdRule::UTop),
                BcdDerivation::new(u.clone(), c_to_u, BcdRule::UArrow),
            );
            if *e == u {
                return chain;
            }
            let u_below = top_sub(&u, e).expect("codomain is top");
            let widen = BcdDerivation::arrow(BcdDerivation::refl(c.clone()), translate_to_bcd(&u_below));
            BcdDerivation::trans(chain, widen)
        }
    }
}

/// `a ≤ w` for `w` contained in `a`.
fn bcd_contained(a: &Ty, w: &Ty) -> BcdDerivation {
    match w.kind() {
        TyKind::Inter(w1, w2) => BcdDerivation::glb(bcd_contained(a, w1), bcd_contained(a, w2)),
        _ => bcd_part(a, w),
    }
}

fn bcd_part(a: &Ty, p: &Ty) -> BcdDerivation {
    if a == p {
        return BcdDerivation::refl(a.clone());
    }
    let (l, r) = a.as_inter().expect("part lies under an intersection");
    let (side, rule) = if is_part(p, l) {
        (l, BcdRule::InclL)
    } else {
        (r, BcdRule::InclR)
    };
    let incl = BcdDerivation::new(a.clone(), side.clone(), rule);
    if side == p {
        incl
    } else {
        BcdDerivation::trans(incl, bcd_part(side, p))
    }
}

/// Translates a BCD certificate into a transitivity-free one with the same
/// endpoints; each `trans` node is eliminated by composition.
pub fn from_bcd(d: &BcdDerivation) -> Result<Derivation, BcdError> {
    bcd_validate(d).map_err(BcdError::InvalidBcd)?;
    translate_from_bcd(d)
}

fn translate_from_bcd(d: &BcdDerivation) -> Result<Derivation, BcdError> {
    let (lhs, rhs) = (d.lhs(), d.rhs());
    Ok(match d.rule() {
        BcdRule::Refl => refl(lhs),
        BcdRule::Trans { left, right, .. } => {
            trans_compose(&translate_from_bcd(left)?, &translate_from_bcd(right)?)?
        }
        BcdRule::InclL => Derivation::lb_l(lhs.clone(), refl(rhs)),
        BcdRule::InclR => Derivation::lb_r(lhs.clone(), refl(rhs)),
        BcdRule::Glb(l, r) => Derivation::glb(translate_from_bcd(l)?, translate_from_bcd(r)?),
        BcdRule::Arrow { dom, cod } => {
            lemma_fun(&translate_from_bcd(dom)?, &translate_from_bcd(cod)?)?
        }
        BcdRule::ArrowInter => {
            let (l, r) = lhs.as_inter().unwrap();
            let (a, b) = l.as_arrow().unwrap();
            let (_, c) = r.as_arrow().unwrap();
            lemma_dist(a, b, c)
        }
        BcdRule::UTop => Derivation::u_top(lhs.clone()),
        BcdRule::UArrow => Derivation::u_arrow(lhs.clone(), rhs.clone()),
    })
}
