//! Exhaustive and seeded property suites.
//!
//! Types are enumerated up to a size bound over `U` and a few constants;
//! each suite checks one group of metatheoretic properties on every case of
//! that universe and reports failures as data. Reports are deterministic:
//! work is split by rows across a thread pool and merged back in order.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::bcd::{
    bcd_search, bcd_validate, from_bcd, fun, lemma_dist, lemma_eta, lemma_fun, to_bcd,
    DEFAULT_SEARCH_DEPTH,
};
use crate::consistency::{consistent, hereditarily_self_consistent, self_consistent};
use crate::derivation::{
    occurring_types, subformula_violation, validate, validate_root, Derivation,
};
use crate::subtype::{
    check_sub, decide, find_factor, find_factor_exhaustive, invert_arrow, lemma_factor_all,
    refl, top_sub, trans_compose,
};
use crate::syntax::{derivation_to_json, parse, print};
use crate::types::{cod, contained_in, depth, dom, is_arrow_shaped, is_top, top_in_cod, Ty, TyKind};

/// Which types a suite ranges over: `U` plus constants `c0..c{atom_count-1}`,
/// closed under `→` and `∩` up to `max_size`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct UniverseSpec {
    pub atom_count: u32,
    pub max_size: usize,
}

/// All types of the universe ordered by size, then structurally.
pub fn enumerate_universe(spec: UniverseSpec) -> Vec<Ty> {
    let mut by_size: Vec<Vec<Ty>> = Vec::with_capacity(spec.max_size + 1);
    let mut atoms = vec![Ty::top()];
    atoms.extend((0..spec.atom_count).map(Ty::constant));
    atoms.sort();
    by_size.push(atoms);
    for s in 1..=spec.max_size {
        let mut group = Vec::new();
        for s1 in 0..s {
            let s2 = s - 1 - s1;
            for x in &by_size[s1] {
                for y in &by_size[s2] {
                    group.push(Ty::arrow(x.clone(), y.clone()));
                    group.push(Ty::inter(x.clone(), y.clone()));
                }
            }
        }
        group.sort();
        by_size.push(group);
    }
    by_size.into_iter().flatten().collect()
}

/// A deterministic pseudo-random type. Below `max_depth` each node is an
/// atom, an arrow or an intersection with equal probability; at the bound
/// it is an atom. Atoms are uniform over `U` and the constants.
pub fn random_type(seed: u64, atom_count: u32, max_depth: usize) -> Ty {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    gen_type(&mut rng, atom_count, max_depth)
}

fn gen_type(rng: &mut ChaCha8Rng, atom_count: u32, depth: usize) -> Ty {
    let kind = if depth == 0 { 0 } else { rng.gen_range(0..3) };
    match kind {
        0 => match rng.gen_range(0..=atom_count) {
            0 => Ty::top(),
            k => Ty::constant(k - 1),
        },
        1 => {
            let l = gen_type(rng, atom_count, depth - 1);
            Ty::arrow(l, gen_type(rng, atom_count, depth - 1))
        }
        _ => {
            let l = gen_type(rng, atom_count, depth - 1);
            Ty::inter(l, gen_type(rng, atom_count, depth - 1))
        }
    }
}

/// Nesting depth counting every constructor, the bound `random_type` obeys.
pub fn tree_height(t: &Ty) -> usize {
    match t.kind() {
        TyKind::Top | TyKind::Const(_) => 0,
        TyKind::Arrow(l, r) | TyKind::Inter(l, r) => 1 + tree_height(l).max(tree_height(r)),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Failure {
    /// Short name of the violated check.
    pub check: String,
    pub inputs: Vec<String>,
    pub detail: String,
    /// Serialized certificates relevant to the failure, when there are any.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub certificates: Vec<String>,
}

impl Failure {
    fn new(check: &str, inputs: &[&Ty], detail: impl Into<String>) -> Self {
        Failure {
            check: check.to_string(),
            inputs: inputs.iter().map(|t| print(t)).collect(),
            detail: detail.into(),
            certificates: Vec::new(),
        }
    }

    fn with_certificates(mut self, ds: &[&Derivation]) -> Self {
        self.certificates = ds
            .iter()
            .map(|d| derivation_to_json(d).unwrap_or_else(|e| format!("<invalid: {e}>")))
            .collect();
        self
    }
}

/// Failures beyond this many are counted but not kept.
pub const MAX_KEPT_FAILURES: usize = 200;

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub name: String,
    pub parameters: String,
    pub cases: u64,
    pub failure_count: u64,
    /// Failures per check name, including those not kept.
    pub failure_counts: BTreeMap<String, u64>,
    pub failures: Vec<Failure>,
    /// Counts worth reporting besides pass/fail.
    pub notes: Vec<String>,
    #[serde(skip)]
    pub wall_time: Duration,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failure_count == 0
    }

    /// Failures of one named check.
    pub fn failures_of(&self, check: &str) -> u64 {
        self.failure_counts.get(check).copied().unwrap_or(0)
    }

    /// Everything but the wall time, which goes on its own last line.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let status = if self.passed() { "PASS" } else { "FAIL" };
        let _ = writeln!(
            out,
            "{status} {} ({}): {} cases, {} failures",
            self.name, self.parameters, self.cases, self.failure_count
        );
        for n in &self.notes {
            let _ = writeln!(out, "  note: {n}");
        }
        if !self.failure_counts.is_empty() {
            let by: Vec<String> = self
                .failure_counts
                .iter()
                .map(|(k, v)| format!("{k}={v}"))
                .collect();
            let _ = writeln!(out, "  failures by check: {}", by.join(", "));
        }
        for f in &self.failures {
            let _ = writeln!(out, "  [{}] {} -- {}", f.check, f.inputs.join(" | "), f.detail);
            for c in &f.certificates {
                let _ = writeln!(out, "    {c}");
            }
        }
        if self.failure_count > self.failures.len() as u64 {
            let _ = writeln!(
                out,
                "  ... {} more not shown",
                self.failure_count - self.failures.len() as u64
            );
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }
}

/// Per-partition accumulator.
#[derive(Default)]
struct Tally {
    cases: u64,
    failure_count: u64,
    failure_counts: BTreeMap<String, u64>,
    failures: Vec<Failure>,
    counters: HashMap<&'static str, u64>,
}

impl Tally {
    fn case(&mut self) {
        self.cases += 1;
    }

    fn fail(&mut self, f: Failure) {
        self.failure_count += 1;
        *self.failure_counts.entry(f.check.clone()).or_default() += 1;
        if self.failures.len() < MAX_KEPT_FAILURES {
            self.failures.push(f);
        }
    }

    fn check(&mut self, ok: bool, f: impl FnOnce() -> Failure) {
        self.case();
        if !ok {
            self.fail(f());
        }
    }

    fn count(&mut self, key: &'static str) {
        *self.counters.entry(key).or_default() += 1;
    }

    fn merge(mut self, other: Tally) -> Tally {
        self.cases += other.cases;
        self.failure_count += other.failure_count;
        for (k, v) in other.failure_counts {
            *self.failure_counts.entry(k).or_default() += v;
        }
        let room = MAX_KEPT_FAILURES.saturating_sub(self.failures.len());
        self.failures.extend(other.failures.into_iter().take(room));
        for (k, v) in other.counters {
            *self.counters.entry(k).or_default() += v;
        }
        self
    }
}

/// Parameters shared by all suites. `max_size` of `None` picks the suite's
/// default: 3 for pair suites, 2 for triple suites.
#[derive(Clone, Debug)]
pub struct SuiteParams {
    pub atoms: u32,
    pub max_size: Option<usize>,
    pub seed: u64,
    /// Number of random types for `roundtrip`.
    pub samples: usize,
    pub random_atoms: u32,
    pub random_depth: usize,
    pub search_depth: usize,
    /// Worker threads; 0 lets the pool decide.
    pub jobs: usize,
}

impl Default for SuiteParams {
    fn default() -> Self {
        SuiteParams {
            atoms: 2,
            max_size: None,
            seed: 0,
            samples: 100_000,
            random_atoms: 4,
            random_depth: 5,
            search_depth: DEFAULT_SEARCH_DEPTH,
            jobs: 0,
        }
    }
}

pub const PAIR_SIZE: usize = 3;
pub const TRIPLE_SIZE: usize = 2;

/// Every suite name accepted by [`run_suite`], in the order `all` runs them.
pub const SUITES: &[&str] = &[
    "soundness",
    "subformula",
    "prop1",
    "prop2",
    "prop3",
    "prop4",
    "lemma1",
    "lemmas",
    "transitivity",
    "witness-completeness",
    "equivalence",
    "consistency-upward",
    "consistency-derivation",
    "roundtrip",
];

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("unknown suite {0:?}")]
pub struct UnknownSuite(pub String);

/// Runs one named suite.
pub fn run_suite(name: &str, params: &SuiteParams) -> Result<SuiteReport, UnknownSuite> {
    let triple = matches!(
        name,
        "transitivity"
            | "witness-completeness"
            | "consistency-upward"
            | "consistency-derivation"
            | "lemmas"
    );
    let spec = UniverseSpec {
        atom_count: params.atoms,
        max_size: params
            .max_size
            .unwrap_or(if triple { TRIPLE_SIZE } else { PAIR_SIZE }),
    };
    let start = Instant::now();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(params.jobs)
        .build()
        .expect("thread pool");
    let (tally, mut parameters) = pool.install(|| -> Result<_, UnknownSuite> {
        let u = || Universe::new(spec);
        let tally = match name {
            "soundness" => soundness(&u()),
            "subformula" => subformula(&u()),
            "prop1" => prop1(&u()),
            "prop2" => prop2(&u()),
            "prop3" => prop3(&u()),
            "prop4" => prop4(&u()),
            "lemma1" => lemma1(&u()),
            "lemmas" => lemmas(&u()),
            "transitivity" => transitivity(&u()),
            "witness-completeness" => witness_completeness(&u()),
            "equivalence" => equivalence(&u(), params.search_depth),
            "consistency-upward" => consistency_upward(&u()),
            "consistency-derivation" => consistency_derivation(&u()),
            "roundtrip" => roundtrip(&u(), params),
            other => return Err(UnknownSuite(other.to_string())),
        };
        Ok((tally, format!("atoms={} max_size={}", spec.atom_count, spec.max_size)))
    })?;
    match name {
        "equivalence" => {
            let _ = write!(parameters, " search_depth={}", params.search_depth);
        }
        "roundtrip" => {
            let _ = write!(
                parameters,
                " seed={} samples={} random_atoms={} random_depth={}",
                params.seed, params.samples, params.random_atoms, params.random_depth
            );
        }
        _ => {}
    }
    let mut notes: Vec<String> = tally
        .counters
        .iter()
        .map(|(k, v)| format!("{k}={v}"))
        .collect();
    notes.sort();
    Ok(SuiteReport {
        name: name.to_string(),
        parameters,
        cases: tally.cases,
        failure_count: tally.failure_count,
        failure_counts: tally.failure_counts,
        failures: tally.failures,
        notes,
        wall_time: start.elapsed(),
    })
}

/// An enumerated universe with indices and the subtype relation tabulated.
struct Universe {
    types: Vec<Ty>,
    index: HashMap<Ty, usize>,
    /// `sub[a * n + b]` iff `types[a] <: types[b]`
    sub: Vec<bool>,
}

impl Universe {
    fn new(spec: UniverseSpec) -> Self {
        let types = enumerate_universe(spec);
        let index = types
            .iter()
            .enumerate()
            .map(|(i, t)| (t.clone(), i))
            .collect();
        let n = types.len();
        let rows: Vec<Vec<bool>> = (0..n)
            .into_par_iter()
            .map(|a| types.iter().map(|b| decide(&types[a], b)).collect())
            .collect();
        Universe {
            types,
            index,
            sub: rows.concat(),
        }
    }

    fn len(&self) -> usize {
        self.types.len()
    }

    fn sub(&self, a: usize, b: usize) -> bool {
        self.sub[a * self.len() + b]
    }

    fn idx(&self, t: &Ty) -> usize {
        self.index[t]
    }

    /// Runs `f` once per row index in parallel and merges in row order.
    fn rows(&self, f: impl Fn(usize, &mut Tally) + Sync) -> Tally {
        (0..self.len())
            .into_par_iter()
            .map(|i| {
                let mut t = Tally::default();
                f(i, &mut t);
                t
            })
            .collect::<Vec<_>>()
            .into_iter()
            .fold(Tally::default(), Tally::merge)
    }

    /// Certificates for every derivable pair, row-major.
    fn certificates(&self) -> Vec<Option<Derivation>> {
        let rows: Vec<Vec<Option<Derivation>>> = (0..self.len())
            .into_par_iter()
            .map(|a| {
                (0..self.len())
                    .map(|b| {
                        if self.sub(a, b) {
                            check_sub(&self.types[a], &self.types[b])
                        } else {
                            None
                        }
                    })
                    .collect()
            })
            .collect();
        rows.concat()
    }
}

fn check_certificate(t: &mut Tally, d: &Derivation, lhs: &Ty, rhs: &Ty, what: &str) {
    t.case();
    if d.lhs() != lhs || d.rhs() != rhs {
        t.fail(Failure::new(
            what,
            &[lhs, rhs],
            format!("certificate proves {} <: {}", d.lhs(), d.rhs()),
        ));
    } else if let Err(e) = validate(d) {
        t.fail(Failure::new(what, &[lhs, rhs], e.to_string()).with_certificates(&[d]));
    }
    check_subformula(t, d);
}

fn check_subformula(t: &mut Tally, d: &Derivation) {
    t.case();
    if let Some(bad) = subformula_violation(d) {
        t.fail(
            Failure::new("subformula", &[d.lhs(), d.rhs()], format!("occurring type {bad}"))
                .with_certificates(&[d]),
        );
    }
}

fn soundness(u: &Universe) -> Tally {
    u.rows(|a, t| {
        let ta = &u.types[a];
        for (b, tb) in u.types.iter().enumerate() {
            let d = check_sub(ta, tb);
            t.check(d.is_some() == u.sub(a, b), || {
                Failure::new("decide", &[ta, tb], "check_sub and decide disagree")
            });
            if let Some(d) = d {
                t.count("derivable");
                check_certificate(t, &d, ta, tb, "validate");
            }
        }
    })
}

fn subformula(u: &Universe) -> Tally {
    u.rows(|a, t| {
        check_subformula(t, &refl(&u.types[a]));
        for b in 0..u.len() {
            if let Some(d) = check_sub(&u.types[a], &u.types[b]) {
                check_subformula(t, &d);
            }
        }
    })
}

fn prop1(u: &Universe) -> Tally {
    u.rows(|x, t| {
        let tx = &u.types[x];
        let parts = tx.parts();
        t.check(parts.iter().all(|p| p.as_inter().is_none()), || {
            Failure::new("parts-atomic", &[tx], "an intersection was returned as a part")
        });
        if let Some((l, r)) = tx.as_inter() {
            let mut expected = l.parts();
            expected.extend(r.parts());
            t.check(parts == expected, || {
                Failure::new("parts-concat", &[tx], "parts of A & B are not parts(A) ++ parts(B)")
            });
        }
        t.check(contained_in(tx, tx), || {
            Failure::new("contained-refl", &[tx], "not contained in itself")
        });
        t.check(
            is_arrow_shaped(tx) == dom(tx).is_some() && dom(tx).is_some() == cod(tx).is_some(),
            || Failure::new("dom-defined", &[tx], "dom/cod defined on the wrong types"),
        );
        let Some((l, r)) = tx.as_inter() else { return };
        for tc in &u.types {
            if contained_in(tx, tc) {
                t.check(contained_in(l, tc) && contained_in(r, tc), || {
                    Failure::new("containment-inversion", &[tx, tc], "a side is not contained")
                });
            }
        }
    })
}

fn prop2(u: &Universe) -> Tally {
    // types contained in each type, by index
    let contained: Vec<Vec<usize>> = (0..u.len())
        .into_par_iter()
        .map(|b| {
            (0..u.len())
                .filter(|&c| contained_in(&u.types[c], &u.types[b]))
                .collect()
        })
        .collect();
    u.rows(|a, t| {
        let ta = &u.types[a];
        t.check(u.sub(a, a), || Failure::new("reflexivity", &[ta], "A <: A not derivable"));
        let r = refl(ta);
        check_certificate(t, &r, ta, ta, "reflexivity-certificate");
        for (b, tb) in u.types.iter().enumerate() {
            if let Some((c1, c2)) = tb.as_inter() {
                let (i1, i2) = (u.idx(c1), u.idx(c2));
                t.check(u.sub(a, b) == (u.sub(a, i1) && u.sub(a, i2)), || {
                    Failure::new("inter-inversion", &[ta, tb], "A <: B & C disagrees with the sides")
                });
            }
            if !u.sub(a, b) {
                continue;
            }
            for p in tb.parts() {
                let ip = u.idx(&p);
                t.check(u.sub(a, ip), || {
                    Failure::new("part-monotone", &[ta, tb, &p], "not below a part")
                });
            }
            for &c in &contained[b] {
                t.check(u.sub(a, c), || {
                    Failure::new("contained-monotone", &[ta, tb, &u.types[c]], "not below a contained type")
                });
            }
        }
    })
}

fn prop3(u: &Universe) -> Tally {
    u.rows(|a, t| {
        let ta = &u.types[a];
        if !is_top(ta) {
            return;
        }
        t.count("top types");
        if let Some(c) = cod(ta) {
            t.check(is_top(&c), || Failure::new("top-cod", &[ta], "codomain not top"));
        }
        for p in ta.parts() {
            t.check(is_top(&p), || Failure::new("top-part", &[ta, &p], "part not top"));
        }
        for (b, tb) in u.types.iter().enumerate() {
            if contained_in(tb, ta) {
                t.check(is_top(tb), || {
                    Failure::new("top-contained", &[ta, tb], "contained type not top")
                });
            }
            if u.sub(a, b) {
                t.check(is_top(tb), || {
                    Failure::new("top-upward", &[ta, tb], "supertype of a top type not top")
                });
            }
            t.check(u.sub(b, a), || {
                Failure::new("top-above-all", &[tb, ta], "not below a top type")
            });
            match top_sub(tb, ta) {
                Ok(d) => {
                    t.case();
                    if let Err(e) = validate(&d) {
                        t.fail(Failure::new("top-above-all", &[tb, ta], e.to_string()));
                    }
                }
                Err(e) => t.fail(Failure::new("top-above-all", &[tb, ta], e.to_string())),
            }
        }
    })
}

fn prop4(u: &Universe) -> Tally {
    let n = u.len();
    u.rows(|a, t| {
        let ta = &u.types[a];
        // exhaustive witness search per (A, arrow part), computed once
        let mut memo: HashMap<usize, bool> = HashMap::new();
        for (b, tb) in u.types.iter().enumerate() {
            if !u.sub(a, b) {
                continue;
            }
            let mut cert: Option<Derivation> = None;
            for p in tb.parts() {
                let Some((c, d)) = p.as_arrow() else { continue };
                if is_top(d) {
                    continue;
                }
                let ip = u.idx(&p);
                let found = *memo
                    .entry(ip)
                    .or_insert_with(|| find_factor_exhaustive(ta, c, d).is_some());
                t.check(found, || {
                    Failure::new("inversion", &[ta, tb, &p], "no factoring found exhaustively")
                });
                let cert = cert.get_or_insert_with(|| check_sub(ta, tb).expect("tabulated"));
                t.case();
                match invert_arrow(cert, c, d) {
                    Ok(f) => {
                        if let Err(e) = f.validate() {
                            t.fail(Failure::new("inversion-certificate", &[ta, tb, &p], e));
                        }
                    }
                    Err(e) => t.fail(Failure::new("inversion-certificate", &[ta, tb, &p], e.to_string())),
                }
            }
        }
        let _ = n;
    })
}

fn lemma1(u: &Universe) -> Tally {
    u.rows(|a, t| {
        let ta = &u.types[a];
        if !is_arrow_shaped(ta) || top_in_cod(ta) {
            return;
        }
        let (da, ca) = (dom(ta).unwrap(), cod(ta).unwrap());
        for tb in &u.types {
            let mut per_part = HashMap::new();
            let all = ta.all_parts(&mut |p| {
                let (c, d) = p.as_arrow().unwrap();
                match find_factor(tb, c, d) {
                    Some(f) => {
                        per_part.insert(p.clone(), f);
                        true
                    }
                    None => false,
                }
            });
            if !all {
                continue;
            }
            t.count("premise holds");
            t.case();
            match lemma_factor_all(ta, tb, &per_part) {
                Ok(f) => {
                    let shape = f.lhs == da && f.rhs == ca && &f.against == tb;
                    if !shape {
                        t.fail(Failure::new("lemma1", &[ta, tb], "factoring has the wrong endpoints"));
                    } else if let Err(e) = f.validate() {
                        t.fail(Failure::new("lemma1", &[ta, tb], e));
                    }
                }
                Err(e) => t.fail(Failure::new("lemma1", &[ta, tb], e.to_string())),
            }
        }
    })
}

/// `lemma_fun` on every pair of derivable pairs, `lemma_dist` on every
/// triple of types, and `lemma_eta` on every type of the pair-size universe
/// with `dom`/`cod` defined.
fn lemmas(u: &Universe) -> Tally {
    let certs = u.certificates();
    let n = u.len();
    let derivable: Vec<&Derivation> = certs.iter().flatten().collect();
    let mut tally = Tally::default();
    for d in &derivable {
        tally.check(validate(d).is_ok(), || {
            Failure::new("lemma_fun-input", &[d.lhs(), d.rhs()], "input certificate invalid")
        });
    }
    let rows = u.rows(|a, t| {
        // d1 : C <: A ranges over pairs with lhs types[a]; inputs are valid,
        // so an output whose premises are exactly them needs only its root checked
        for d1 in certs[a * n..(a + 1) * n].iter().flatten() {
            for (k, d2) in derivable.iter().enumerate() {
                t.case();
                let fail = |detail: String| {
                    let lhs = Ty::arrow(d1.rhs().clone(), d2.lhs().clone());
                    let rhs = Ty::arrow(d1.lhs().clone(), d2.rhs().clone());
                    Failure::new("lemma_fun", &[&lhs, &rhs], detail)
                };
                let d = if k == 0 {
                    match lemma_fun(d1, d2) {
                        Ok(d) => d,
                        Err(e) => {
                            t.fail(fail(e.to_string()));
                            continue;
                        }
                    }
                } else {
                    fun(d1, d2)
                };
                let ends = d.lhs().as_arrow() == Some((d1.rhs(), d2.lhs()))
                    && d.rhs().as_arrow() == Some((d1.lhs(), d2.rhs()));
                if !ends {
                    t.fail(fail(format!("proved {} <: {}", d.lhs(), d.rhs())));
                    continue;
                }
                let premises = d.premises();
                let reused = premises.is_empty()
                    || (premises.len() == 2 && premises[0].same_node(d1) && premises[1].same_node(d2));
                let checked = if reused { validate_root(&d) } else { validate(&d) };
                if let Err(e) = checked {
                    t.fail(fail(e.to_string()));
                }
            }
        }
        let ta = &u.types[a];
        for tb in &u.types {
            for tc in &u.types {
                t.case();
                let d = lemma_dist(ta, tb, tc);
                let lhs = Ty::inter(Ty::arrow(ta.clone(), tb.clone()), Ty::arrow(ta.clone(), tc.clone()));
                let rhs = Ty::arrow(ta.clone(), Ty::inter(tb.clone(), tc.clone()));
                if d.lhs() != &lhs || d.rhs() != &rhs {
                    t.fail(Failure::new("lemma_dist", &[ta, tb, tc], "wrong endpoints"));
                } else if let Err(e) = validate(&d) {
                    t.fail(Failure::new("lemma_dist", &[ta, tb, tc], e.to_string()));
                }
            }
        }
    });
    tally = tally.merge(rows);
    let eta_universe = enumerate_universe(UniverseSpec {
        atom_count: u.types.iter().filter(|t| matches!(t.kind(), TyKind::Const(_))).count() as u32,
        max_size: PAIR_SIZE,
    });
    let eta = eta_universe.par_iter().map(|ta| {
        let mut t = Tally::default();
        if !is_arrow_shaped(ta) {
            return t;
        }
        t.case();
        let expected = Ty::arrow(dom(ta).unwrap(), cod(ta).unwrap());
        match lemma_eta(ta) {
            Ok(d) if d.lhs() == ta && d.rhs() == &expected => {
                if let Err(e) = bcd_validate(&d) {
                    t.fail(Failure::new("lemma_eta", &[ta], e.to_string()));
                }
            }
            Ok(_) => t.fail(Failure::new("lemma_eta", &[ta], "wrong endpoints")),
            Err(e) => t.fail(Failure::new("lemma_eta", &[ta], e.to_string())),
        }
        t
    });
    let eta = eta.collect::<Vec<_>>().into_iter().fold(Tally::default(), Tally::merge);
    tally = tally.merge(eta);
    tally
}

fn transitivity(u: &Universe) -> Tally {
    let certs = u.certificates();
    let n = u.len();
    // by middle type B: every A <: B composed with every B <: C
    u.rows(|b, t| {
        let below: Vec<&Derivation> = (0..n).filter_map(|a| certs[a * n + b].as_ref()).collect();
        let above: Vec<&Derivation> = certs[b * n..(b + 1) * n].iter().flatten().collect();
        for d1 in &below {
            for d2 in &above {
                let (ta, tc) = (d1.lhs(), d2.rhs());
                t.count("compositions");
                let composed = catch_unwind(AssertUnwindSafe(|| trans_compose(d1, d2)));
                match composed {
                    Ok(Ok(d)) => check_certificate(t, &d, ta, tc, "transitivity"),
                    Ok(Err(e)) => {
                        t.case();
                        t.fail(Failure::new("transitivity", &[ta, d1.rhs(), tc], e.to_string())
                            .with_certificates(&[d1, d2]));
                    }
                    Err(panic) => {
                        t.case();
                        let msg = panic
                            .downcast_ref::<String>()
                            .cloned()
                            .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
                            .unwrap_or_default();
                        t.fail(Failure::new("measure", &[ta, d1.rhs(), tc], msg)
                            .with_certificates(&[d1, d2]));
                    }
                }
            }
        }
    })
}

fn witness_completeness(u: &Universe) -> Tally {
    let targets: Vec<(&Ty, &Ty, &Ty)> = u
        .types
        .iter()
        .filter_map(|t| t.as_arrow().map(|(c, d)| (t, c, d)))
        .filter(|(_, _, d)| !is_top(d))
        .collect();
    u.rows(|a, t| {
        let ta = &u.types[a];
        for &(target, c, d) in &targets {
            let fast = find_factor(ta, c, d);
            let slow = find_factor_exhaustive(ta, c, d);
            t.check(fast.is_some() == slow.is_some(), || {
                Failure::new(
                    "witness-agreement",
                    &[ta, target],
                    format!("find_factor {:?}, exhaustive {:?}", fast.is_some(), slow.is_some()),
                )
            });
            for (which, f) in [("find_factor", &fast), ("exhaustive", &slow)] {
                if let Some(f) = f {
                    t.case();
                    if let Err(e) = f.validate() {
                        t.fail(Failure::new("witness-valid", &[ta, target], format!("{which}: {e}")));
                    }
                }
            }
            if fast.is_some() {
                t.count("factorable");
            }
        }
    })
}

fn equivalence(u: &Universe, search_depth: usize) -> Tally {
    u.rows(|a, t| {
        let ta = &u.types[a];
        for tb in &u.types {
            let ours = check_sub(ta, tb);
            if let Some(d) = &ours {
                t.count("derivable");
                t.case();
                match to_bcd(d) {
                    Ok(bcd) if bcd.lhs() == ta && bcd.rhs() == tb => {
                        if let Err(e) = bcd_validate(&bcd) {
                            t.fail(Failure::new("to_bcd", &[ta, tb], e.to_string()).with_certificates(&[d]));
                        }
                    }
                    Ok(_) => t.fail(Failure::new("to_bcd", &[ta, tb], "endpoints changed")),
                    Err(e) => t.fail(Failure::new("to_bcd", &[ta, tb], e.to_string())),
                }
            }
            let Some(found) = bcd_search(ta, tb, search_depth) else {
                continue;
            };
            t.count("bcd hits");
            t.check(bcd_validate(&found).is_ok(), || {
                Failure::new("bcd_search", &[ta, tb], "search returned an invalid certificate")
            });
            t.check(ours.is_some(), || {
                Failure::new("agreement", &[ta, tb], "BCD derivation found but check_sub says no")
            });
            t.case();
            match from_bcd(&found) {
                Ok(d) => check_certificate(t, &d, ta, tb, "from_bcd"),
                Err(e) => t.fail(Failure::new("from_bcd", &[ta, tb], e.to_string())),
            }
        }
    })
}

fn consistency_upward(u: &Universe) -> Tally {
    let n = u.len();
    let sc: Vec<usize> = (0..n).filter(|&i| self_consistent(&u.types[i])).collect();
    let up: Vec<Vec<usize>> = (0..n)
        .map(|a| sc.iter().copied().filter(|&c| u.sub(a, c)).collect())
        .collect();
    u.rows(|a, t| {
        let ta = &u.types[a];
        if !self_consistent(ta) {
            return;
        }
        for &b in &sc {
            let tb = &u.types[b];
            if !consistent(ta, tb) {
                continue;
            }
            t.count("consistent pairs");
            for &c in &up[a] {
                for &d in &up[b] {
                    let (tc, td) = (&u.types[c], &u.types[d]);
                    t.check(consistent(tc, td), || {
                        let ac = check_sub(ta, tc).expect("tabulated");
                        let bd = check_sub(tb, td).expect("tabulated");
                        Failure::new("upward-closure", &[ta, tb, tc, td], "C and D are inconsistent")
                            .with_certificates(&[&ac, &bd])
                    });
                }
            }
        }
    })
}

/// Occurring types of certificates between consistent endpoints. The check
/// requires every subterm of both endpoints to be self-consistent; pairs
/// whose endpoints are only self-consistent at the top are counted in a note,
/// since their certificates can mention inconsistent domains.
fn consistency_derivation(u: &Universe) -> Tally {
    u.rows(|a, t| {
        let ta = &u.types[a];
        if !self_consistent(ta) {
            return;
        }
        for (b, tb) in u.types.iter().enumerate() {
            if !u.sub(a, b) || !self_consistent(tb) || !consistent(ta, tb) {
                continue;
            }
            let d = check_sub(ta, tb).expect("tabulated");
            let bad = occurring_types(&d).into_iter().find(|x| !self_consistent(x));
            if !(hereditarily_self_consistent(ta) && hereditarily_self_consistent(tb)) {
                if bad.is_some() {
                    t.count("shallow endpoints with inconsistent occurring types");
                }
                continue;
            }
            t.check(bad.is_none(), || {
                Failure::new(
                    "occurring-self-consistent",
                    &[ta, tb],
                    format!("occurring type {} is not self-consistent", bad.as_ref().unwrap()),
                )
                .with_certificates(&[&d])
            });
        }
    })
}

fn roundtrip(u: &Universe, params: &SuiteParams) -> Tally {
    let check = |t: &mut Tally, ty: &Ty| {
        let text = print(ty);
        t.check(parse(&text).as_ref() == Ok(ty), || {
            Failure::new("roundtrip", &[ty], format!("printed as {text:?}"))
        });
    };
    let mut tally = u.rows(|a, t| check(t, &u.types[a]));
    let random = (0..params.samples)
        .into_par_iter()
        .map(|i| {
            let mut t = Tally::default();
            let ty = random_type(
                params.seed.wrapping_add(i as u64),
                params.random_atoms,
                params.random_depth,
            );
            t.check(tree_height(&ty) <= params.random_depth && depth(&ty) <= params.random_depth, || {
                Failure::new("random-depth", &[&ty], "generator exceeded its depth bound")
            });
            check(&mut t, &ty);
            t
        })
        .collect::<Vec<_>>();
    for t in random {
        tally = tally.merge(t);
    }
    tally
}
