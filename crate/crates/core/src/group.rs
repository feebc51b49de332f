//! Finite groups as explicit multiplication tables.
//!
//! Elements are the integers `0..n`, with `0` always the identity. Structural
//! data that every caller needs (conjugacy classes, center, a small generating
//! set) is computed on first use and cached; the table itself never changes
//! after construction, so a `GroupTable` can be shared freely across threads.

use std::fmt;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::subset::Subset;

/// Size bounds for construction and enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Largest group order any constructor will produce.
    pub max_order: usize,
    /// Tables up to this order get the full O(n^3) associativity check.
    pub associativity_check_max: usize,
    /// Largest order for which central decompositions are enumerated.
    pub enumeration_max: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_order: 20_000,
            associativity_check_max: 256,
            enumeration_max: 512,
        }
    }
}

impl Limits {
    /// Defaults, with `max_order` overridden by `SETDIRECT_MAX_ORDER` when it
    /// holds a positive integer.
    pub fn from_env() -> Self {
        let mut limits = Limits::default();
        if let Some(v) = std::env::var("SETDIRECT_MAX_ORDER")
            .ok()
            .and_then(|s| s.trim().parse::<usize>().ok())
            .filter(|&v| v > 0)
        {
            limits.max_order = v;
        }
        limits
    }
}

/// The conjugacy classes of a group, ordered by their smallest member.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassPartition {
    pub classes: Vec<Subset>,
    /// Element index to class index.
    pub class_of: Vec<usize>,
}

impl ClassPartition {
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    /// Smallest member of class `c`.
    pub fn representative(&self, c: usize) -> usize {
        self.classes[c].first().expect("classes are non-empty")
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.classes.iter().map(Subset::len).collect()
    }

    /// Indices of the classes contained in a normal subset, ascending.
    pub fn classes_in(&self, s: &Subset) -> Vec<usize> {
        let mut out: Vec<usize> = s.iter().map(|x| self.class_of[x]).collect();
        out.sort_unstable();
        out.dedup();
        out
    }
}

/// The product set `AB` together with the number of pairs hitting each element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetProduct {
    pub set: Subset,
    pub multiplicity: Vec<u32>,
}

impl SetProduct {
    pub fn max_multiplicity(&self) -> u32 {
        self.multiplicity.iter().copied().max().unwrap_or(0)
    }

    pub fn total_pairs(&self) -> u64 {
        self.multiplicity.iter().map(|&m| m as u64).sum()
    }
}

#[derive(Clone)]
pub struct GroupTable {
    order: usize,
    mult: Vec<u32>,
    inv: Vec<u32>,
    labels: Vec<String>,
    classes: OnceLock<ClassPartition>,
    center: OnceLock<Subset>,
    generators: OnceLock<Vec<usize>>,
}

impl fmt::Debug for GroupTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GroupTable")
            .field("order", &self.order)
            .finish_non_exhaustive()
    }
}

impl GroupTable {
    /// Builds a group from an explicit table, checking every group axiom.
    ///
    /// If the identity is not element 0 it is swapped into slot 0 (labels move
    /// with their elements).
    pub fn from_table(rows: &[Vec<usize>], labels: Option<Vec<String>>) -> Result<Self> {
        Self::from_table_with(rows, labels, &Limits::default())
    }

    pub fn from_table_with(
        rows: &[Vec<usize>],
        labels: Option<Vec<String>>,
        limits: &Limits,
    ) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::NotAGroup("empty table".into()));
        }
        if n > limits.max_order {
            return Err(Error::OrderLimitExceeded {
                limit: limits.max_order,
            });
        }
        if let Some(l) = &labels {
            if l.len() != n {
                return Err(Error::NotAGroup(format!(
                    "{} labels for {} elements",
                    l.len(),
                    n
                )));
            }
        }
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::NotAGroup(format!(
                    "row {i} has length {}",
                    row.len()
                )));
            }
            if let Some(&bad) = row.iter().find(|&&x| x >= n) {
                return Err(Error::NotAGroup(format!(
                    "entry {bad} out of range in row {i}"
                )));
            }
        }
        check_latin(n, |a, b| rows[a][b])?;

        let identity = (0..n)
            .find(|&e| (0..n).all(|x| rows[e][x] == x && rows[x][e] == x))
            .ok_or_else(|| Error::NotAGroup("no two-sided identity".into()))?;

        // relabel so that the identity is element 0
        let swap = |x: usize| {
            if x == identity {
                0
            } else if x == 0 {
                identity
            } else {
                x
            }
        };
        let mut mult = vec![0u32; n * n];
        for a in 0..n {
            for b in 0..n {
                mult[swap(a) * n + swap(b)] = swap(rows[a][b]) as u32;
            }
        }
        let mut labels = labels.unwrap_or_else(|| (0..n).map(|i| i.to_string()).collect());
        labels.swap(0, identity);

        let mut inv = vec![0u32; n];
        for x in 0..n {
            let y = (0..n)
                .find(|&y| mult[x * n + y] == 0)
                .expect("latin rows contain the identity");
            if mult[y * n + x] != 0 {
                return Err(Error::NotAGroup(format!(
                    "element {x} has no two-sided inverse"
                )));
            }
            inv[x] = y as u32;
        }

        if n <= limits.associativity_check_max {
            for a in 0..n {
                for b in 0..n {
                    let ab = mult[a * n + b] as usize;
                    for c in 0..n {
                        let bc = mult[b * n + c] as usize;
                        if mult[ab * n + c] != mult[a * n + bc] {
                            return Err(Error::NotAGroup(format!(
                                "associativity fails for ({a}, {b}, {c})"
                            )));
                        }
                    }
                }
            }
        }
        Ok(Self::assemble(n, mult, inv, labels))
    }

    /// Builds a table that is a group by construction (generated closures,
    /// quotients, products). Only the identity position is checked.
    pub(crate) fn from_trusted(n: usize, mult: Vec<u32>, labels: Vec<String>) -> Self {
        debug_assert_eq!(mult.len(), n * n);
        debug_assert!((0..n).all(|x| mult[x] as usize == x && mult[x * n] as usize == x));
        let mut inv = vec![0u32; n];
        for x in 0..n {
            let row = &mult[x * n..(x + 1) * n];
            inv[x] = row.iter().position(|&v| v == 0).expect("inverse exists") as u32;
        }
        Self::assemble(n, mult, inv, labels)
    }

    fn assemble(order: usize, mult: Vec<u32>, inv: Vec<u32>, labels: Vec<String>) -> Self {
        GroupTable {
            order,
            mult,
            inv,
            labels,
            classes: OnceLock::new(),
            center: OnceLock::new(),
            generators: OnceLock::new(),
        }
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn identity(&self) -> usize {
        0
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mult[a * self.order + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a] as usize
    }

    /// `g^-1 x g`
    #[inline]
    pub fn conjugate(&self, x: usize, g: usize) -> usize {
        self.mul(self.mul(self.inv(g), x), g)
    }

    /// `[a, b] = a^-1 b^-1 a b`
    #[inline]
    pub fn commutator(&self, a: usize, b: usize) -> usize {
        self.mul(self.mul(self.inv(a), self.inv(b)), self.mul(a, b))
    }

    pub fn label(&self, x: usize) -> &str {
        &self.labels[x]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Looks an element up by label. `^` and whitespace are ignored on both
    /// sides, so `r2s` finds `r^2s`.
    pub fn find_label(&self, name: &str) -> Option<usize> {
        let norm = |s: &str| -> String {
            s.chars()
                .filter(|c| *c != '^' && !c.is_whitespace())
                .collect()
        };
        let key = norm(name);
        self.labels.iter().position(|l| norm(l) == key)
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        (0..self.order)
            .map(|a| (0..self.order).map(|b| self.mul(a, b)).collect())
            .collect()
    }

    pub fn all(&self) -> Subset {
        Subset::full(self.order)
    }

    pub fn trivial_subgroup(&self) -> Subset {
        Subset::singleton(self.order, 0)
    }

    pub fn subset<I: IntoIterator<Item = usize>>(&self, items: I) -> Result<Subset> {
        let items: Vec<usize> = items.into_iter().collect();
        Subset::try_from_indices(self.order, items.iter().copied()).ok_or_else(|| {
            Error::InvalidElement(format!(
                "indices {items:?} not all below group order {}",
                self.order
            ))
        })
    }

    pub fn is_abelian(&self) -> bool {
        let gens = self.generators();
        gens.iter()
            .all(|&a| gens.iter().all(|&b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn element_order(&self, x: usize) -> usize {
        let mut k = 1;
        let mut y = x;
        while y != 0 {
            y = self.mul(y, x);
            k += 1;
        }
        k
    }

    pub fn power(&self, x: usize, k: usize) -> usize {
        (0..k).fold(0, |acc, _| self.mul(acc, x))
    }

    pub fn is_cyclic(&self) -> bool {
        (0..self.order).any(|x| self.element_order(x) == self.order)
    }

    /// A small generating set, found greedily.
    pub fn generators(&self) -> &[usize] {
        self.generators.get_or_init(|| {
            let mut gens = Vec::new();
            let mut span = self.trivial_subgroup();
            for g in 1..self.order {
                if !span.contains(g) {
                    gens.push(g);
                    span = self.closure_from(&gens);
                }
            }
            gens
        })
    }

    fn closure_from(&self, gens: &[usize]) -> Subset {
        let mut seen = self.trivial_subgroup();
        let mut queue = vec![0usize];
        while let Some(e) = queue.pop() {
            for &g in gens {
                let p = self.mul(e, g);
                if seen.insert(p) {
                    queue.push(p);
                }
            }
        }
        seen
    }

    pub fn classes(&self) -> &ClassPartition {
        self.classes.get_or_init(|| {
            let n = self.order;
            let gens = self.generators().to_vec();
            let mut class_of = vec![usize::MAX; n];
            let mut classes = Vec::new();
            for x in 0..n {
                if class_of[x] != usize::MAX {
                    continue;
                }
                let idx = classes.len();
                let mut members = Subset::singleton(n, x);
                class_of[x] = idx;
                let mut queue = vec![x];
                while let Some(y) = queue.pop() {
                    for &g in &gens {
                        let c = self.conjugate(y, g);
                        if members.insert(c) {
                            class_of[c] = idx;
                            queue.push(c);
                        }
                    }
                }
                classes.push(members);
            }
            ClassPartition { classes, class_of }
        })
    }

    /// Number of conjugacy classes, k(G).
    pub fn class_count(&self) -> usize {
        self.classes().len()
    }

    pub fn center(&self) -> &Subset {
        self.center.get_or_init(|| {
            let gens = self.generators();
            Subset::from_indices(
                self.order,
                (0..self.order).filter(|&z| gens.iter().all(|&g| self.mul(z, g) == self.mul(g, z))),
            )
        })
    }

    pub fn is_central(&self, s: &Subset) -> bool {
        s.is_subset(self.center())
    }

    /// Smallest subgroup containing `s`.
    pub fn generated_subgroup(&self, s: &Subset) -> Result<Subset> {
        if s.is_empty() {
            return Err(Error::EmptyGeneratingSet);
        }
        let gens: Vec<usize> = s.iter().filter(|&x| x != 0).collect();
        Ok(self.closure_from(&gens))
    }

    /// The set `{a^-1 b^-1 a b : a in A, b in B}` (a set, not the subgroup it
    /// generates).
    pub fn commutator_set(&self, a: &Subset, b: &Subset) -> Result<Subset> {
        if a.is_empty() || b.is_empty() {
            return Err(Error::EmptySet);
        }
        let mut out = Subset::empty(self.order);
        for x in a {
            for y in b {
                out.insert(self.commutator(x, y));
            }
        }
        Ok(out)
    }

    /// True iff `s` is a union of conjugacy classes.
    pub fn is_normal_subset(&self, s: &Subset) -> bool {
        let classes = self.classes();
        s.iter()
            .all(|x| classes.classes[classes.class_of[x]].is_subset(s))
    }

    pub fn is_subgroup(&self, s: &Subset) -> bool {
        s.contains(0)
            && s.iter()
                .all(|a| s.iter().all(|b| s.contains(self.mul(a, b))))
    }

    pub fn is_normal_subgroup(&self, s: &Subset) -> bool {
        self.is_subgroup(s) && self.is_normal_subset(s)
    }

    pub fn set_product(&self, a: &Subset, b: &Subset) -> SetProduct {
        let mut multiplicity = vec![0u32; self.order];
        let mut set = Subset::empty(self.order);
        for x in a {
            for y in b {
                let p = self.mul(x, y);
                multiplicity[p] += 1;
                set.insert(p);
            }
        }
        SetProduct { set, multiplicity }
    }

    /// The product set `AB` without multiplicities.
    pub fn product_set(&self, a: &Subset, b: &Subset) -> Subset {
        let mut set = Subset::empty(self.order);
        for x in a {
            for y in b {
                set.insert(self.mul(x, y));
            }
        }
        set
    }

    /// `gS`
    pub fn left_translate(&self, g: usize, s: &Subset) -> Subset {
        Subset::from_indices(self.order, s.iter().map(|x| self.mul(g, x)))
    }

    /// `Sg`
    pub fn right_translate(&self, s: &Subset, g: usize) -> Subset {
        Subset::from_indices(self.order, s.iter().map(|x| self.mul(x, g)))
    }

    /// `S^-1`
    pub fn inverse_set(&self, s: &Subset) -> Subset {
        Subset::from_indices(self.order, s.iter().map(|x| self.inv(x)))
    }

    /// Union of the conjugacy classes meeting `s`.
    pub fn normal_closure_set(&self, s: &Subset) -> Subset {
        let classes = self.classes();
        let mut out = Subset::empty(self.order);
        for c in classes.classes_in(s) {
            out.union_with(&classes.classes[c]);
        }
        out
    }

    /// `{z in Z : zS = S}`, computed inside the ambient group.
    pub fn kernel_in(&self, ambient: &Subset, s: &Subset) -> Subset {
        Subset::from_indices(
            self.order,
            ambient.iter().filter(|&z| self.left_translate(z, s) == *s),
        )
    }

    /// All normal subgroups, ascending by (size, members).
    ///
    /// Each normal subgroup is generated by the classes it contains, so closing
    /// the normal closures of single classes under pairwise products reaches
    /// every one of them.
    pub fn normal_subgroups(&self) -> Vec<Subset> {
        let classes = self.classes();
        let mut found: Vec<Subset> = vec![self.trivial_subgroup()];
        let mut seen: std::collections::HashSet<Subset> = found.iter().cloned().collect();
        for c in &classes.classes {
            let h = self.generated_subgroup(c).expect("classes are non-empty");
            if seen.insert(h.clone()) {
                found.push(h);
            }
        }
        let mut frontier = found.clone();
        while !frontier.is_empty() {
            let mut next = Vec::new();
            let snapshot = found.clone();
            for a in &frontier {
                for b in &snapshot {
                    let p = self.product_set(a, b);
                    if seen.insert(p.clone()) {
                        next.push(p.clone());
                        found.push(p);
                    }
                }
            }
            frontier = next;
        }
        found.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        found
    }

    /// All subgroups of an abelian subgroup `z` (typically a center),
    /// ascending by (size, members).
    pub fn subgroups_of_abelian(&self, z: &Subset) -> Result<Vec<Subset>> {
        if !self.is_subgroup(z) {
            return Err(Error::NotSubgroup("ambient set is not a subgroup".into()));
        }
        if !z
            .iter()
            .all(|a| z.iter().all(|b| self.mul(a, b) == self.mul(b, a)))
        {
            return Err(Error::NotAbelian);
        }
        let mut found = vec![self.trivial_subgroup()];
        let mut seen: std::collections::HashSet<Subset> = found.iter().cloned().collect();
        let mut frontier = found.clone();
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for h in &frontier {
                for g in z.iter().filter(|&g| !h.contains(g)) {
                    let mut gens = h.clone();
                    gens.insert(g);
                    let k = self.generated_subgroup(&gens)?;
                    if seen.insert(k.clone()) {
                        next.push(k.clone());
                        found.push(k);
                    }
                }
            }
            frontier = next;
        }
        found.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        Ok(found)
    }

    /// True iff the derived subgroup is the whole group.
    pub fn is_perfect(&self) -> bool {
        let all = self.all();
        let comms = self.commutator_set(&all, &all).expect("group is non-empty");
        self.generated_subgroup(&comms)
            .map(|d| d.is_full())
            .unwrap_or(false)
    }
}

fn check_latin(n: usize, at: impl Fn(usize, usize) -> usize) -> Result<()> {
    let mut seen = vec![false; n];
    for a in 0..n {
        seen.iter_mut().for_each(|s| *s = false);
        for b in 0..n {
            let v = at(a, b);
            if std::mem::replace(&mut seen[v], true) {
                return Err(Error::NotAGroup(format!("row {a} repeats {v}")));
            }
        }
    }
    for b in 0..n {
        seen.iter_mut().for_each(|s| *s = false);
        for a in 0..n {
            let v = at(a, b);
            if std::mem::replace(&mut seen[v], true) {
                return Err(Error::NotAGroup(format!("column {b} repeats {v}")));
            }
        }
    }
    Ok(())
}
