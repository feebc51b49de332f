//! Brute-force ground truth. Factorizations are found by exact cover straight
//! from the definition (every element written exactly once as `xy`), with no
//! use of the construction machinery.
//!
//! Only normalized pairs (`1 ∈ X`, `1 ∈ Y`) are searched; every factorization
//! is a central shift `(zX, wY)` of one of them, which gives the raw counts.

use std::collections::BTreeSet;
use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::central::class_stabilizer;
use crate::construct::SubgroupView;
use crate::error::{Error, Result};
use crate::group::GroupTable;
use crate::setdirect::{directness_criteria, kernel, verify_main_theorem, SetDirectFactorization};
use crate::subset::Subset;

pub const MAX_CLASSES: usize = 26;
pub const MAX_ABELIAN_ORDER: usize = 64;
pub const RAW_LIST_LIMIT: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnumerationOptions {
    pub normalized_only: bool,
    pub nontrivial_only: bool,
    pub time_budget: Duration,
}

impl Default for EnumerationOptions {
    fn default() -> Self {
        EnumerationOptions {
            normalized_only: true,
            nontrivial_only: false,
            time_budget: Duration::from_secs(60),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct EnumerationCounts {
    /// Unordered pairs, all central shifts included.
    pub total: u64,
    pub nontrivial: u64,
    /// Unordered pairs with `1 ∈ X` and `1 ∈ Y`.
    pub normalized: u64,
    pub normalized_nontrivial: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct EnumerationResult {
    pub group: String,
    pub order: usize,
    pub normalized_only: bool,
    pub nontrivial_only: bool,
    /// Sorted, one entry per unordered pair, `X ≤ Y` in subset order.
    /// Entries are not passed through the verifier (`certified` is false).
    pub factorizations: Vec<SetDirectFactorization>,
    pub counts: EnumerationCounts,
    pub elapsed_secs: f64,
}

impl EnumerationResult {
    pub fn named(mut self, name: &str) -> Self {
        self.group = name.to_string();
        self
    }

    /// Normalized unordered pairs as `(min, max)` tuples.
    pub fn pair_set(&self) -> BTreeSet<(Subset, Subset)> {
        self.factorizations
            .iter()
            .map(|f| ordered_pair(f.x.clone(), f.y.clone()))
            .collect()
    }
}

fn ordered_pair(a: Subset, b: Subset) -> (Subset, Subset) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

struct Search<'a> {
    g: &'a GroupTable,
    atoms: Vec<Subset>,
    atom_of: Vec<usize>,
    identity_atom: usize,
    deadline: Instant,
    aborted: AtomicBool,
    found: AtomicUsize,
    nodes: AtomicUsize,
}

impl<'a> Search<'a> {
    fn new(g: &'a GroupTable, atoms: Vec<Subset>, budget: Duration) -> Self {
        let mut atom_of = vec![0; g.order()];
        for (i, a) in atoms.iter().enumerate() {
            for x in a {
                atom_of[x] = i;
            }
        }
        Search {
            g,
            identity_atom: atom_of[g.identity()],
            atoms,
            atom_of,
            deadline: Instant::now() + budget,
            aborted: AtomicBool::new(false),
            found: AtomicUsize::new(0),
            nodes: AtomicUsize::new(0),
        }
    }

    fn tick(&self) -> bool {
        if self.aborted.load(Ordering::Relaxed) {
            return false;
        }
        if self.nodes.fetch_add(1, Ordering::Relaxed) % 1024 == 0 && Instant::now() > self.deadline
        {
            self.aborted.store(true, Ordering::Relaxed);
            return false;
        }
        true
    }

    /// Candidate normalized left factors with `|X|² ≤ |G|`, grouped by the
    /// first atom added after the identity, then completed.
    fn run(&self) -> Vec<(Subset, Subset)> {
        let n = self.g.order();
        let cap = (1..=n).take_while(|s| s * s <= n).last().unwrap_or(1);
        let start = self.atoms[self.identity_atom].clone();
        let mut firsts: Vec<Option<usize>> = vec![None];
        firsts.extend(
            (0..self.atoms.len())
                .filter(|&a| a != self.identity_atom && start.len() + self.atoms[a].len() <= cap)
                .map(Some),
        );
        let mut pairs: Vec<(Subset, Subset)> = firsts
            .into_par_iter()
            .flat_map_iter(|first| {
                let mut out = Vec::new();
                match first {
                    None => self.complete(&start, &mut out),
                    Some(a) => {
                        let x = start.union(&self.atoms[a]);
                        self.extend_x(x, a, cap, &mut out);
                    }
                }
                out
            })
            .collect();
        pairs.sort();
        pairs.dedup();
        pairs
    }

    fn extend_x(&self, x: Subset, last: usize, cap: usize, out: &mut Vec<(Subset, Subset)>) {
        if !self.tick() {
            return;
        }
        self.complete(&x, out);
        for a in last + 1..self.atoms.len() {
            if a == self.identity_atom || x.len() + self.atoms[a].len() > cap {
                continue;
            }
            self.extend_x(x.union(&self.atoms[a]), a, cap, out);
        }
    }

    fn complete(&self, x: &Subset, out: &mut Vec<(Subset, Subset)>) {
        if self.g.order() % x.len() != 0 {
            return;
        }
        let mut covered = Subset::empty(self.g.order());
        let mut y = Subset::empty(self.g.order());
        if !self.place(x, self.identity_atom, &mut covered, &mut y) {
            return;
        }
        self.cover(x, &mut covered, &mut y, out);
    }

    /// Adds the block `X·atom` if all its products are new and distinct.
    fn place(&self, x: &Subset, atom: usize, covered: &mut Subset, y: &mut Subset) -> bool {
        let mut block = Subset::empty(self.g.order());
        for a in x {
            for b in &self.atoms[atom] {
                let p = self.g.mul(a, b);
                if covered.contains(p) || !block.insert(p) {
                    return false;
                }
            }
        }
        covered.union_with(&block);
        y.union_with(&self.atoms[atom]);
        true
    }

    fn cover(
        &self,
        x: &Subset,
        covered: &mut Subset,
        y: &mut Subset,
        out: &mut Vec<(Subset, Subset)>,
    ) {
        if !self.tick() {
            return;
        }
        let Some(target) = covered.complement().first() else {
            out.push(ordered_pair(x.clone(), y.clone()));
            self.found.fetch_add(1, Ordering::Relaxed);
            return;
        };
        let mut tried = BTreeSet::new();
        for a in x {
            let atom = self.atom_of[self.g.mul(self.g.inv(a), target)];
            if !tried.insert(atom) {
                continue;
            }
            let (saved_c, saved_y) = (covered.clone(), y.clone());
            if self.place(x, atom, covered, y) {
                self.cover(x, covered, y, out);
            }
            *covered = saved_c;
            *y = saved_y;
        }
    }
}

fn orbit_min(g: &GroupTable, center: &Subset, s: &Subset) -> Subset {
    center
        .iter()
        .map(|z| g.left_translate(z, s))
        .min()
        .expect("center is non-empty")
}

fn orbit(g: &GroupTable, center: &Subset, s: &Subset) -> BTreeSet<Subset> {
    center.iter().map(|z| g.left_translate(z, s)).collect()
}

fn enumerate_atoms(
    g: &GroupTable,
    atoms: Vec<Subset>,
    opts: &EnumerationOptions,
) -> Result<EnumerationResult> {
    let started = Instant::now();
    let search = Search::new(g, atoms, opts.time_budget);
    let normalized = search.run();
    if search.aborted.load(Ordering::Relaxed) {
        return Err(Error::TimeBudgetExceeded {
            budget_secs: opts.time_budget.as_secs(),
            found: search.found.load(Ordering::Relaxed),
        });
    }

    let n = g.order();
    let center = g.center();
    let mut keys = BTreeSet::new();
    for (a, b) in &normalized {
        let (ka, kb) = (orbit_min(g, center, a), orbit_min(g, center, b));
        keys.insert((ka.clone(), kb.clone()));
        keys.insert((kb, ka));
    }
    let orbit_len = |s: &Subset| {
        center.len()
            / center
                .iter()
                .filter(|&z| g.left_translate(z, s) == *s)
                .count()
    };
    let ordered: u64 = keys
        .iter()
        .map(|(a, b)| (orbit_len(a) * orbit_len(b)) as u64)
        .sum();
    let total = if n == 1 { 1 } else { ordered / 2 };
    let trivial_raw = if n == 1 { 1 } else { center.len() as u64 };
    let is_trivial = |a: &Subset, b: &Subset| {
        (a.len() == 1 && a.is_subset(center)) || (b.len() == 1 && b.is_subset(center))
    };
    let normalized_trivial = normalized.iter().filter(|(a, b)| is_trivial(a, b)).count() as u64;
    let counts = EnumerationCounts {
        total,
        nontrivial: total - trivial_raw,
        normalized: normalized.len() as u64,
        normalized_nontrivial: normalized.len() as u64 - normalized_trivial,
    };

    let pairs: Vec<(Subset, Subset)> = if opts.normalized_only {
        normalized
    } else {
        if total > RAW_LIST_LIMIT as u64 {
            return Err(Error::SearchSpaceTooLarge(format!(
                "{total} raw factorizations exceed the listing limit of {RAW_LIST_LIMIT}"
            )));
        }
        let mut raw = Vec::with_capacity(total as usize);
        for (a, b) in &keys {
            let oa = orbit(g, center, a);
            let ob = orbit(g, center, b);
            for p in &oa {
                for q in &ob {
                    if p < q || n == 1 {
                        raw.push((p.clone(), q.clone()));
                    }
                }
            }
        }
        raw.sort();
        raw.dedup();
        raw
    };
    let factorizations = pairs
        .into_iter()
        .filter(|(a, b)| !(opts.nontrivial_only && is_trivial(a, b)))
        .map(|(x, y)| SetDirectFactorization::uncertified(x, y))
        .collect();
    Ok(EnumerationResult {
        group: format!("order {n}"),
        order: n,
        normalized_only: opts.normalized_only,
        nontrivial_only: opts.nontrivial_only,
        factorizations,
        counts,
        elapsed_secs: started.elapsed().as_secs_f64(),
    })
}

/// All set-direct factorizations of `g` by normal subsets. Abelian groups of
/// order up to `MAX_ABELIAN_ORDER` are searched whatever their class count.
pub fn enumerate_setdirect(g: &GroupTable, opts: &EnumerationOptions) -> Result<EnumerationResult> {
    let k = g.class_count();
    if g.is_abelian() && g.order() <= MAX_ABELIAN_ORDER {
        return enumerate_atoms(g, g.classes().classes.clone(), opts);
    }
    if k > MAX_CLASSES {
        return Err(Error::SearchSpaceTooLarge(format!(
            "{k} conjugacy classes (limit {MAX_CLASSES})"
        )));
    }
    enumerate_atoms(g, g.classes().classes.clone(), opts)
}

/// All factorizations `Z = A × B` of an abelian group, normalized pairs only.
pub fn enumerate_abelian_factorizations(z: &GroupTable) -> Result<EnumerationResult> {
    enumerate_abelian_factorizations_with(z, &EnumerationOptions::default())
}

pub fn enumerate_abelian_factorizations_with(
    z: &GroupTable,
    opts: &EnumerationOptions,
) -> Result<EnumerationResult> {
    if !z.is_abelian() {
        return Err(Error::NotAbelian);
    }
    if z.order() > MAX_ABELIAN_ORDER {
        return Err(Error::SearchSpaceTooLarge(format!(
            "|Z| = {} (limit {MAX_ABELIAN_ORDER})",
            z.order()
        )));
    }
    let atoms = (0..z.order())
        .map(|x| Subset::singleton(z.order(), x))
        .collect();
    enumerate_atoms(z, atoms, opts)
}

/// A union of classes meeting every coset of the central subgroup `z` exactly
/// once, found by exact cover of the cosets. Returns the first one in class
/// order.
pub fn find_normal_transversal(g: &GroupTable, z: &Subset) -> Result<Option<Subset>> {
    if !g.is_central(z) || !g.is_subgroup(z) {
        return Err(Error::NotCentral(format!("{z:?}")));
    }
    let n = g.order();
    let mut coset_of = vec![usize::MAX; n];
    let mut cosets = 0;
    for x in 0..n {
        if coset_of[x] == usize::MAX {
            for w in z {
                coset_of[g.mul(x, w)] = cosets;
            }
            cosets += 1;
        }
    }
    let classes = &g.classes().classes;
    // cosets hit by each class, or None when two elements share a coset
    let hits: Vec<Option<BTreeSet<usize>>> = classes
        .iter()
        .map(|c| {
            let mut s = BTreeSet::new();
            c.iter().all(|x| s.insert(coset_of[x])).then_some(s)
        })
        .collect();

    fn go(hits: &[Option<BTreeSet<usize>>], covered: &mut [bool], chosen: &mut Vec<usize>) -> bool {
        let Some(target) = covered.iter().position(|&c| !c) else {
            return true;
        };
        for (c, h) in hits.iter().enumerate() {
            let Some(h) = h else { continue };
            if !h.contains(&target) || h.iter().any(|&k| covered[k]) {
                continue;
            }
            for &k in h {
                covered[k] = true;
            }
            chosen.push(c);
            if go(hits, covered, chosen) {
                return true;
            }
            chosen.pop();
            for &k in h {
                covered[k] = false;
            }
        }
        false
    }

    let mut covered = vec![false; cosets];
    let mut chosen = Vec::new();
    if !go(&hits, &mut covered, &mut chosen) {
        return Ok(None);
    }
    let mut t = Subset::empty(n);
    for c in chosen {
        t.union_with(&classes[c]);
    }
    Ok(Some(t))
}

/// A non-empty union of between 1 and `max_classes` random classes.
pub fn random_normal_subset<R: Rng>(g: &GroupTable, rng: &mut R, max_classes: usize) -> Subset {
    let classes = &g.classes().classes;
    let k = rng.gen_range(1..=max_classes.clamp(1, classes.len()));
    let mut idx: Vec<usize> = (0..classes.len()).collect();
    idx.shuffle(rng);
    let mut s = Subset::empty(g.order());
    for &c in &idx[..k] {
        s.union_with(&classes[c]);
    }
    s
}

/// A union of a random non-empty selection of the classes inside `s`.
pub fn random_class_subset<R: Rng>(g: &GroupTable, rng: &mut R, s: &Subset) -> Subset {
    let classes = g.classes();
    let inside = classes.classes_in(s);
    let mut out = Subset::empty(g.order());
    for &c in &inside {
        if rng.gen_bool(0.5) {
            out.union_with(&classes.classes[c]);
        }
    }
    if out.is_empty() {
        out.union_with(&classes.classes[*inside.choose(rng).expect("non-empty")]);
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteOptions {
    pub seed: u64,
    pub samples: usize,
    pub time_budget: Duration,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            seed: 0,
            samples: 200,
            time_budget: Duration::from_secs(60),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PropertyCheck {
    pub name: String,
    pub passed: bool,
    pub checked: usize,
    pub witness: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub group: String,
    pub order: usize,
    pub factorizations: usize,
    pub checks: Vec<PropertyCheck>,
    /// Pairs of non-central classes whose product is direct.
    pub direct_class_pairs: Vec<(Subset, Subset)>,
    pub passed: bool,
}

impl SuiteReport {
    pub fn named(mut self, name: &str) -> Self {
        self.group = name.to_string();
        self
    }

    pub fn check(&self, name: &str) -> Option<&PropertyCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

struct Tally {
    name: &'static str,
    checked: usize,
    witness: Option<String>,
}

impl Tally {
    fn new(name: &'static str) -> Self {
        Tally {
            name,
            checked: 0,
            witness: None,
        }
    }

    fn record(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok && self.witness.is_none() {
            self.witness = Some(describe());
        }
    }

    fn finish(self) -> PropertyCheck {
        PropertyCheck {
            name: self.name.to_string(),
            passed: self.witness.is_none(),
            checked: self.checked,
            witness: self.witness,
        }
    }
}

fn minimal_normal_subgroups(g: &GroupTable) -> Vec<Subset> {
    let normals: Vec<Subset> = g
        .normal_subgroups()
        .into_iter()
        .filter(|s| s.len() > 1)
        .collect();
    normals
        .iter()
        .filter(|s| !normals.iter().any(|t| t.len() < s.len() && t.is_subset(s)))
        .cloned()
        .collect()
}

fn fmt_pair(a: &Subset, b: &Subset) -> String {
    format!("X = {a:?}, Y = {b:?}")
}

pub fn property_suite(g: &GroupTable) -> Result<SuiteReport> {
    property_suite_with(g, &SuiteOptions::default())
}

/// Cross-checks the structural consequences of directness over the oracle's
/// factorizations and over random normal subsets.
pub fn property_suite_with(g: &GroupTable, opts: &SuiteOptions) -> Result<SuiteReport> {
    let enumeration = enumerate_setdirect(
        g,
        &EnumerationOptions {
            time_budget: opts.time_budget,
            ..EnumerationOptions::default()
        },
    )?;
    let pairs = enumeration.pair_set();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let center = g.center();
    let classes = g.classes();
    let n = g.order();

    let mut centralization = Tally::new("centralization");
    let mut intersection = Tally::new("intersection_at_most_one");
    let mut central_pair = Tally::new("central_pair_exists");
    let mut slices = Tally::new("slice_coset_structure");
    let mut main = Tally::new("main_theorem_agreement");
    let mut counting = Tally::new("counting");
    let center_elems: Vec<usize> = center.to_vec();
    for (x, y) in &pairs {
        counting.record(x.len() * y.len() == n, || fmt_pair(x, y));
        let comm = g.commutator_set(x, y)?;
        centralization.record(comm.len() == 1, || fmt_pair(x, y));
        let (z, w) = (
            *center_elems.choose(&mut rng).expect("center"),
            *center_elems.choose(&mut rng).expect("center"),
        );
        let (sx, sy) = (g.left_translate(z, x), g.left_translate(w, y));
        intersection.record(sx.intersection(&sy).len() <= 1, || fmt_pair(&sx, &sy));
        let exists = center
            .iter()
            .any(|c| sx.contains(c) && sy.contains(g.inv(c)));
        central_pair.record(exists, || fmt_pair(&sx, &sy));

        let report = verify_main_theorem(g, &sx, &sy)?;
        main.record(report.verdict, || fmt_pair(&sx, &sy));
        let zview = SubgroupView::new(g, &report.z)?;
        for s in report.x_slices.iter().chain(&report.y_slices) {
            if s.set.is_empty() {
                continue;
            }
            let stab = class_stabilizer(g, s.representative, &report.z)?;
            let local = zview.localize(&s.set).expect("slices lie in Z");
            let k = zview.globalize(&kernel(&zview.table, &local)?);
            slices.record(stab.is_subset(&k), || {
                format!(
                    "slice {:?} at {} for {}",
                    s.set,
                    s.representative,
                    fmt_pair(&sx, &sy)
                )
            });
        }
    }

    let mut criteria = Tally::new("criteria_equivalence");
    let mut association = Tally::new("association");
    let factor_list: Vec<&(Subset, Subset)> = pairs.iter().collect();
    for i in 0..opts.samples {
        let (a, b) = if i % 2 == 0 || factor_list.is_empty() {
            (
                random_normal_subset(g, &mut rng, 3),
                random_normal_subset(g, &mut rng, 3),
            )
        } else {
            let (x, y) = factor_list[rng.gen_range(0..factor_list.len())];
            (
                random_class_subset(g, &mut rng, x),
                random_class_subset(g, &mut rng, y),
            )
        };
        let d = directness_criteria(g, &a, &b)?;
        criteria.record(d.agree(), || format!("{d:?} for {}", fmt_pair(&a, &b)));
        let r = verify_main_theorem(g, &a, &b);
        main.record(r.is_ok(), || format!("{r:?}"));
        if d.direct {
            let comm = g.commutator_set(&a, &b)?;
            centralization.record(comm.len() == 1, || fmt_pair(&a, &b));
        }

        let c = random_normal_subset(g, &mut rng, 2);
        if d.direct && directness_criteria(g, &g.product_set(&a, &b), &c)?.direct {
            let bc = directness_criteria(g, &b, &c)?.direct;
            let a_bc = bc && directness_criteria(g, &a, &g.product_set(&b, &c))?.direct;
            association.record(a_bc, || format!("A = {a:?}, B = {b:?}, C = {c:?}"));
        }
    }

    let nontrivial: Vec<usize> = (0..classes.len())
        .filter(|&c| classes.classes[c] != Subset::singleton(n, g.identity()))
        .collect();
    let mut centralizing = Tally::new("centralizing_classes");
    let mut direct_class_pairs = Vec::new();
    let mut class_direct = Vec::new();
    let normal_proper = |s: &Subset| s.len() > 1 && s.len() < n;
    for (i, &c) in nontrivial.iter().enumerate() {
        for &d in &nontrivial[i..] {
            let (cs, ds) = (&classes.classes[c], &classes.classes[d]);
            let direct = directness_criteria(g, cs, ds)?.direct;
            class_direct.push(((c, d), direct));
            if direct && cs.len() > 1 && ds.len() > 1 {
                direct_class_pairs.push((cs.clone(), ds.clone()));
            }
            if g.commutator_set(cs, ds)?.len() == 1 {
                let gc = g.generated_subgroup(cs)?;
                let gd = g.generated_subgroup(ds)?;
                let ok = (gc.is_full() && gd.is_full() && g.is_cyclic())
                    || normal_proper(&gc)
                    || normal_proper(&gd);
                centralizing.record(ok, || format!("C = {cs:?}, D = {ds:?}"));
            }
        }
    }
    let mut cd = Tally::new("class_pairs_non_direct");
    let minimal = minimal_normal_subgroups(g);
    if minimal.len() == 1 && g.commutator_set(&minimal[0], &minimal[0])?.len() > 1 {
        for ((c, d), direct) in &class_direct {
            cd.record(!direct, || {
                format!(
                    "C = {:?}, D = {:?}",
                    classes.classes[*c], classes.classes[*d]
                )
            });
        }
    }

    let checks: Vec<PropertyCheck> = [
        counting,
        centralization,
        intersection,
        central_pair,
        slices,
        main,
        criteria,
        association,
        centralizing,
        cd,
    ]
    .into_iter()
    .map(Tally::finish)
    .collect();
    let passed = checks.iter().all(|c| c.passed);
    Ok(SuiteReport {
        group: enumeration.group,
        order: n,
        factorizations: pairs.len(),
        checks,
        direct_class_pairs,
        passed,
    })
}
