//! Directness tests, the verifier for `G = X × Y`, factorization systems over
//! an abelian `Z`, and the constructions built on them.

use std::collections::BTreeSet;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::central::{
    class_count_report, is_central_product, z_orbits, CentralDecomposition, ClassCountReport,
    DecompositionFailure, ZActionData, ZOrbit,
};
use crate::construct::SubgroupView;
use crate::error::{Error, Result};
use crate::group::GroupTable;
use crate::subset::Subset;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct SetDirectFactorization {
    #[serde(rename = "X")]
    pub x: Subset,
    #[serde(rename = "Y")]
    pub y: Subset,
    pub certified: bool,
}

impl SetDirectFactorization {
    pub fn uncertified(x: Subset, y: Subset) -> Self {
        SetDirectFactorization {
            x,
            y,
            certified: false,
        }
    }

    /// Runs the verifier and records its verdict.
    pub fn certify(g: &GroupTable, x: Subset, y: Subset) -> Result<Self> {
        let certified = verify_main_theorem(g, &x, &y)?.verdict;
        Ok(SetDirectFactorization { x, y, certified })
    }

    /// Trivial when one side is a single central element.
    pub fn is_trivial(&self, g: &GroupTable) -> bool {
        let central_singleton = |s: &Subset| s.len() == 1 && g.is_central(s);
        central_singleton(&self.x) || central_singleton(&self.y)
    }

    pub fn is_normalized(&self) -> bool {
        self.x.contains(0) && self.y.contains(0)
    }

    pub fn swapped(&self) -> Self {
        SetDirectFactorization {
            x: self.y.clone(),
            y: self.x.clone(),
            certified: self.certified,
        }
    }
}

fn require_normal_nonempty(g: &GroupTable, sets: &[&Subset]) -> Result<()> {
    for s in sets {
        if s.universe() != g.order() {
            return Err(Error::InvalidElement(format!(
                "subset over {} elements used with a group of order {}",
                s.universe(),
                g.order()
            )));
        }
        if s.is_empty() {
            return Err(Error::EmptySet);
        }
        if !g.is_normal_subset(s) {
            return Err(Error::NotNormal(format!("{:?}", g_labels(g, s))));
        }
    }
    Ok(())
}

fn g_labels(g: &GroupTable, s: &Subset) -> Vec<String> {
    s.iter().map(|x| g.label(x).to_string()).collect()
}

/// The four equivalent directness criteria, evaluated independently.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DirectnessReport {
    /// Every product `xy` arises from exactly one pair.
    pub unique_representation: bool,
    /// `XX⁻¹ ∩ YY⁻¹ = {1}`
    pub difference_sets: bool,
    /// `{Xy}` or `{xY}` partitions `XY`.
    pub coset_partition: bool,
    /// `|XY| = |X||Y|`
    pub cardinality: bool,
    pub direct: bool,
}

impl DirectnessReport {
    pub fn agree(&self) -> bool {
        let v = self.unique_representation;
        self.difference_sets == v && self.coset_partition == v && self.cardinality == v
    }
}

fn quotient_set(g: &GroupTable, s: &Subset) -> Subset {
    let mut out = Subset::empty(g.order());
    for a in s {
        for b in s {
            out.insert(g.mul(a, g.inv(b)));
        }
    }
    out
}

fn translates_partition(translates: &[Subset]) -> bool {
    let mut seen = Subset::empty(translates.first().map_or(0, Subset::universe));
    for t in translates {
        if seen.intersects(t) {
            return false;
        }
        seen.union_with(t);
    }
    true
}

/// Evaluates all four criteria without requiring them to agree.
pub fn directness_criteria(g: &GroupTable, x: &Subset, y: &Subset) -> Result<DirectnessReport> {
    require_normal_nonempty(g, &[x, y])?;
    let product = g.set_product(x, y);
    let unique_representation = product.max_multiplicity() <= 1;
    let difference_sets = quotient_set(g, x).intersection(&quotient_set(g, y)).len() == 1;
    let right: Vec<Subset> = y.iter().map(|b| g.right_translate(x, b)).collect();
    let left: Vec<Subset> = x.iter().map(|a| g.left_translate(a, y)).collect();
    let coset_partition = translates_partition(&right) || translates_partition(&left);
    let cardinality = g.product_set(x, y).len() == x.len() * y.len();
    Ok(DirectnessReport {
        unique_representation,
        difference_sets,
        coset_partition,
        cardinality,
        direct: unique_representation,
    })
}

/// Directness of `XY`; errors if the four criteria ever disagree.
pub fn is_direct(g: &GroupTable, x: &Subset, y: &Subset) -> Result<DirectnessReport> {
    let report = directness_criteria(g, x, y)?;
    if !report.agree() {
        return Err(Error::Inconsistent(format!(
            "directness criteria disagree: {report:?}"
        )));
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Slice {
    /// The element `m` (or `n`) the slice belongs to; one per class when `Z`
    /// is central.
    pub representative: usize,
    pub set: Subset,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SliceWitness {
    pub m: usize,
    pub n: usize,
    pub x_slice: Subset,
    pub y_slice: Subset,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MainTheoremReport {
    #[serde(rename = "M")]
    pub m: Subset,
    #[serde(rename = "N")]
    pub n: Subset,
    #[serde(rename = "Z")]
    pub z: Subset,
    pub product_is_group: bool,
    pub directness: DirectnessReport,
    pub condition_a: bool,
    pub condition_a_failure: Option<DecompositionFailure>,
    #[serde(serialize_with = "slice_map")]
    pub x_slices: Vec<Slice>,
    #[serde(serialize_with = "slice_map")]
    pub y_slices: Vec<Slice>,
    /// Number of distinct `(X_m, Y_n)` pairs actually tested.
    pub slice_pairs_checked: usize,
    pub condition_b: bool,
    pub witness: Option<SliceWitness>,
    pub verdict: bool,
}

fn slice_map<S: Serializer>(slices: &[Slice], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_map(slices.iter().map(|sl| (sl.representative, &sl.set)))
}

fn slices(g: &GroupTable, s: &Subset, ambient: &Subset, z: &Subset, per_class: bool) -> Vec<Slice> {
    let reps: Vec<usize> = if per_class {
        let classes = g.classes();
        classes
            .classes_in(ambient)
            .into_iter()
            .map(|c| classes.representative(c))
            .collect()
    } else {
        ambient.to_vec()
    };
    reps.into_iter()
        .map(|m| Slice {
            representative: m,
            set: g.left_translate(g.inv(m), s).intersection(z),
        })
        .collect()
}

fn factors_exactly(g: &GroupTable, a: &Subset, b: &Subset, z: &Subset) -> bool {
    !a.is_empty() && !b.is_empty() && a.len() * b.len() == z.len() && g.product_set(a, b) == *z
}

/// Checks `G = X × Y` through conditions (a) `G = M ∘_Z N` and (b)
/// `Z = X_m × Y_n` for all `m ∈ M`, `n ∈ N`.
///
/// Slices only depend on the class of `m` when `Z` is central, so one slice per
/// class is computed in that case; otherwise one per element. Each distinct
/// pair of slice sets is tested once. Empty slices fail (b).
pub fn verify_main_theorem(g: &GroupTable, x: &Subset, y: &Subset) -> Result<MainTheoremReport> {
    require_normal_nonempty(g, &[x, y])?;
    let directness = is_direct(g, x, y)?;
    let product_is_group = g.product_set(x, y).is_full();
    let m = g.generated_subgroup(x)?;
    let n = g.generated_subgroup(y)?;
    let z = m.intersection(&n);

    let (condition_a, condition_a_failure) = match is_central_product(g, &m, &n) {
        Ok(_) => (true, None),
        Err(e) => (false, Some(e)),
    };
    let per_class = g.is_central(&z);
    let x_slices = slices(g, x, &m, &z, per_class);
    let y_slices = slices(g, y, &n, &z, per_class);

    let mut seen_x: Vec<&Slice> = Vec::new();
    for s in &x_slices {
        if !seen_x.iter().any(|t| t.set == s.set) {
            seen_x.push(s);
        }
    }
    let mut seen_y: Vec<&Slice> = Vec::new();
    for s in &y_slices {
        if !seen_y.iter().any(|t| t.set == s.set) {
            seen_y.push(s);
        }
    }
    let mut witness = None;
    let mut slice_pairs_checked = 0;
    'outer: for a in &seen_x {
        for b in &seen_y {
            slice_pairs_checked += 1;
            if !factors_exactly(g, &a.set, &b.set, &z) {
                witness = Some(SliceWitness {
                    m: a.representative,
                    n: b.representative,
                    x_slice: a.set.clone(),
                    y_slice: b.set.clone(),
                });
                break 'outer;
            }
        }
    }
    let condition_b = witness.is_none();
    let verdict = condition_a && condition_b;
    if verdict != (directness.direct && product_is_group) {
        return Err(Error::Inconsistent(format!(
            "verifier verdict {verdict} but direct = {}, XY = G is {}",
            directness.direct, product_is_group
        )));
    }
    Ok(MainTheoremReport {
        m,
        n,
        z,
        product_is_group,
        directness,
        condition_a,
        condition_a_failure,
        x_slices,
        y_slices,
        slice_pairs_checked,
        condition_b,
        witness,
        verdict,
    })
}

/// `K(S) = {h ∈ Z : hS = S}` for a subset of an abelian group.
pub fn kernel(z: &GroupTable, s: &Subset) -> Result<Subset> {
    if !z.is_abelian() {
        return Err(Error::NotAbelian);
    }
    if s.is_empty() {
        return Err(Error::EmptySet);
    }
    Ok(z.kernel_in(&z.all(), s))
}

/// Families `(M_i)`, `(N_j)` of subgroups and `(A_i)`, `(B_j)` of subsets of an
/// abelian group `Z`, all given in the local indices of `z.table`.
#[derive(Debug, Clone)]
pub struct FactorizationSystem {
    pub z: SubgroupView,
    pub m: Vec<Subset>,
    pub n: Vec<Subset>,
    pub a: Vec<Subset>,
    pub b: Vec<Subset>,
}

impl FactorizationSystem {
    pub fn new(
        z: SubgroupView,
        m: Vec<Subset>,
        n: Vec<Subset>,
        a: Vec<Subset>,
        b: Vec<Subset>,
    ) -> Self {
        FactorizationSystem { z, m, n, a, b }
    }

    /// Builds a system from subsets of the parent group lying inside `z`.
    pub fn from_parent(
        g: &GroupTable,
        z: &Subset,
        m: &[Subset],
        n: &[Subset],
        a: &[Subset],
        b: &[Subset],
    ) -> Result<Self> {
        let view = SubgroupView::new(g, z)?;
        let local = |sets: &[Subset]| -> Result<Vec<Subset>> {
            sets.iter()
                .map(|s| {
                    view.localize(s)
                        .ok_or_else(|| Error::NotContained(format!("{s:?} is not inside Z")))
                })
                .collect()
        };
        let (m, n, a, b) = (local(m)?, local(n)?, local(a)?, local(b)?);
        Ok(FactorizationSystem {
            z: view,
            m,
            n,
            a,
            b,
        })
    }

    /// `A_i = a0` and `B_j = b0` for every index of `shape`.
    pub fn constant(shape: &SystemShape, a0: &Subset, b0: &Subset) -> Self {
        FactorizationSystem {
            z: shape.z.clone(),
            m: shape.m.clone(),
            n: shape.n.clone(),
            a: vec![a0.clone(); shape.m.len()],
            b: vec![b0.clone(); shape.n.len()],
        }
    }

    pub fn global(&self, s: &Subset) -> Subset {
        self.z.globalize(s)
    }
}

impl Serialize for FactorizationSystem {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let global = |v: &[Subset]| -> Vec<Subset> { v.iter().map(|s| self.global(s)).collect() };
        let mut st = serializer.serialize_struct("FactorizationSystem", 5)?;
        st.serialize_field("Z", &self.z.members())?;
        st.serialize_field("M", &global(&self.m))?;
        st.serialize_field("N", &global(&self.n))?;
        st.serialize_field("A", &global(&self.a))?;
        st.serialize_field("B", &global(&self.b))?;
        st.end()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SystemReport {
    pub valid: bool,
    /// `Z = A_i × B_j` for all `i, j`.
    pub factorizations_ok: bool,
    pub m_kernels_ok: bool,
    pub n_kernels_ok: bool,
    /// `|A_i B_j|` for every pair.
    pub product_sizes: Vec<Vec<usize>>,
    pub sizes_equal: bool,
    pub lcm_divides: bool,
    pub coset_separation: bool,
    pub trivial_intersections: bool,
    pub first_failure: Option<String>,
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm_of(values: impl Iterator<Item = usize>) -> usize {
    values.fold(1, |acc, v| acc / gcd(acc, v) * v)
}

/// Distinct elements of `s` lie in distinct cosets of the subgroup `h`.
fn separated_by_cosets(z: &GroupTable, s: &Subset, h: &Subset) -> bool {
    let mut covered = Subset::empty(z.order());
    for a in s {
        let coset = z.left_translate(a, h);
        if covered.intersects(&coset) {
            return false;
        }
        covered.union_with(&coset);
    }
    true
}

/// Checks the defining conditions of a factorization system and, for valid
/// systems, the arithmetic and coset consequences they force.
pub fn check_factorization_system(sys: &FactorizationSystem) -> Result<SystemReport> {
    let z = &sys.z.table;
    if !z.is_abelian() {
        return Err(Error::NotAbelian);
    }
    if sys.m.len() != sys.a.len() || sys.n.len() != sys.b.len() {
        return Err(Error::IndexMismatch(format!(
            "|M| = {}, |A| = {}, |N| = {}, |B| = {}",
            sys.m.len(),
            sys.a.len(),
            sys.n.len(),
            sys.b.len()
        )));
    }
    for s in sys.m.iter().chain(&sys.n) {
        if !z.is_subgroup(s) {
            return Err(Error::NotSubgroup(format!("{s:?} in the system")));
        }
    }
    let all = z.all();
    let mut first_failure = None;
    let mut fail = |msg: String| {
        if first_failure.is_none() {
            first_failure = Some(msg);
        }
    };

    let mut m_kernels_ok = true;
    for (i, (a, m)) in sys.a.iter().zip(&sys.m).enumerate() {
        if a.is_empty() || !m.is_subset(&z.kernel_in(&all, a)) {
            m_kernels_ok = false;
            fail(format!("M_{i} is not inside K(A_{i})"));
        }
    }
    let mut n_kernels_ok = true;
    for (j, (b, n)) in sys.b.iter().zip(&sys.n).enumerate() {
        if b.is_empty() || !n.is_subset(&z.kernel_in(&all, b)) {
            n_kernels_ok = false;
            fail(format!("N_{j} is not inside K(B_{j})"));
        }
    }
    let mut factorizations_ok = true;
    let mut product_sizes = Vec::with_capacity(sys.a.len());
    for (i, a) in sys.a.iter().enumerate() {
        let mut row = Vec::with_capacity(sys.b.len());
        for (j, b) in sys.b.iter().enumerate() {
            let prod = z.product_set(a, b);
            row.push(prod.len());
            if !(prod.is_full() && a.len() * b.len() == z.order()) {
                factorizations_ok = false;
                fail(format!(
                    "Z != A_{i} x B_{j} (|A_{i}B_{j}| = {})",
                    prod.len()
                ));
            }
        }
        product_sizes.push(row);
    }
    let valid = factorizations_ok && m_kernels_ok && n_kernels_ok;

    let a_sizes: BTreeSet<usize> = sys.a.iter().map(Subset::len).collect();
    let b_sizes: BTreeSet<usize> = sys.b.iter().map(Subset::len).collect();
    let sizes_equal = a_sizes.len() <= 1
        && b_sizes.len() <= 1
        && sys
            .a
            .iter()
            .all(|a| sys.b.iter().all(|b| a.len() * b.len() == z.order()));
    let lcm_m = lcm_of(sys.m.iter().map(Subset::len));
    let lcm_n = lcm_of(sys.n.iter().map(Subset::len));
    let lcm_divides = sys.a.first().map_or(true, |a| a.len() % lcm_m == 0)
        && sys.b.first().map_or(true, |b| b.len() % lcm_n == 0);
    let coset_separation = sys
        .a
        .iter()
        .all(|a| sys.n.iter().all(|n| separated_by_cosets(z, a, n)))
        && sys
            .b
            .iter()
            .all(|b| sys.m.iter().all(|m| separated_by_cosets(z, b, m)));
    let trivial_intersections = sys
        .m
        .iter()
        .all(|m| sys.n.iter().all(|n| m.intersection(n).len() == 1));

    let report = SystemReport {
        valid,
        factorizations_ok,
        m_kernels_ok,
        n_kernels_ok,
        product_sizes,
        sizes_equal,
        lcm_divides,
        coset_separation,
        trivial_intersections,
        first_failure,
    };
    if valid
        && !(report.sizes_equal
            && report.lcm_divides
            && report.coset_separation
            && report.trivial_intersections)
    {
        return Err(Error::Inconsistent(format!(
            "valid system violates a consequence: {report:?}"
        )));
    }
    Ok(report)
}

/// Index sets and stabilizers a system must have to be used with a central
/// product: one index per `Z`-orbit on the classes in `M` (resp. `N`).
#[derive(Debug, Clone)]
pub struct SystemShape {
    pub z: SubgroupView,
    pub m_action: ZActionData,
    pub n_action: ZActionData,
    /// Orbit stabilizers in local indices of `z.table`.
    pub m: Vec<Subset>,
    pub n: Vec<Subset>,
}

pub fn system_shape(g: &GroupTable, cp: &CentralDecomposition) -> Result<SystemShape> {
    if is_central_product(g, &cp.m, &cp.n).as_ref() != Ok(cp) {
        return Err(Error::SystemMismatch(
            "the decomposition is not certified".into(),
        ));
    }
    let z = SubgroupView::new(g, &cp.z)?;
    let m_action = z_orbits(g, &cp.m, &cp.z)?;
    let n_action = z_orbits(g, &cp.n, &cp.z)?;
    let local = |orbits: &[ZOrbit]| -> Vec<Subset> {
        orbits
            .iter()
            .map(|o| z.localize(&o.stabilizer).expect("stabilizers lie in Z"))
            .collect()
    };
    let m = local(&m_action.orbits);
    let n = local(&n_action.orbits);
    Ok(SystemShape {
        z,
        m_action,
        n_action,
        m,
        n,
    })
}

/// One class index per orbit on each side.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassChoices {
    pub c: Vec<usize>,
    pub d: Vec<usize>,
}

impl ClassChoices {
    /// The smallest class of every orbit.
    pub fn minimal(shape: &SystemShape) -> Self {
        ClassChoices {
            c: shape.m_action.orbits.iter().map(|o| o.classes[0]).collect(),
            d: shape.n_action.orbits.iter().map(|o| o.classes[0]).collect(),
        }
    }
}

/// `X = ⋃ A_i C_i`, `Y = ⋃ B_j D_j`, certified by the verifier.
pub fn construct_from_system(
    g: &GroupTable,
    cp: &CentralDecomposition,
    sys: &FactorizationSystem,
    choices: Option<&ClassChoices>,
) -> Result<SetDirectFactorization> {
    let shape = system_shape(g, cp)?;
    if sys.z.parent_order() != g.order() || sys.z.members() != cp.z {
        return Err(Error::SystemMismatch(
            "the system lives on a different Z".into(),
        ));
    }
    if sys.m.len() != shape.m.len() || sys.n.len() != shape.n.len() {
        return Err(Error::SystemMismatch(format!(
            "expected {} x {} indices (Z-orbits on M and N), got {} x {}",
            shape.m.len(),
            shape.n.len(),
            sys.m.len(),
            sys.n.len()
        )));
    }
    for (i, (have, want)) in sys.m.iter().zip(&shape.m).enumerate() {
        if have != want {
            return Err(Error::SystemMismatch(format!(
                "M_{i} is not the orbit stabilizer"
            )));
        }
    }
    for (j, (have, want)) in sys.n.iter().zip(&shape.n).enumerate() {
        if have != want {
            return Err(Error::SystemMismatch(format!(
                "N_{j} is not the orbit stabilizer"
            )));
        }
    }
    let report = check_factorization_system(sys)?;
    if !report.valid {
        return Err(Error::InvalidSystem(
            report.first_failure.unwrap_or_else(|| "invalid".into()),
        ));
    }
    let default = ClassChoices::minimal(&shape);
    let choices = choices.unwrap_or(&default);
    if choices.c.len() != shape.m.len() || choices.d.len() != shape.n.len() {
        return Err(Error::InvalidChoice(
            "one class per orbit is required".into(),
        ));
    }
    let classes = g.classes();
    let assemble = |sets: &[Subset], picks: &[usize], action: &ZActionData| -> Result<Subset> {
        let mut out = Subset::empty(g.order());
        for (k, (s, &c)) in sets.iter().zip(picks).enumerate() {
            if !action.orbits[k].classes.contains(&c) {
                return Err(Error::InvalidChoice(format!(
                    "class {c} is not in orbit {k}"
                )));
            }
            out.union_with(&g.product_set(&sys.global(s), &classes.classes[c]));
        }
        Ok(out)
    };
    let x = assemble(&sys.a, &choices.c, &shape.m_action)?;
    let y = assemble(&sys.b, &choices.d, &shape.n_action)?;
    let f = SetDirectFactorization::certify(g, x, y)?;
    if !f.certified {
        return Err(Error::Inconsistent(
            "a valid factorization system produced an uncertified pair".into(),
        ));
    }
    Ok(f)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum TransversalOutcome {
    Found {
        factorization: SetDirectFactorization,
        counts: ClassCountReport,
    },
    NotSemiRegular {
        orbit: ZOrbit,
        counts: ClassCountReport,
    },
}

/// `X = M` and `Y` one class from each `Z`-orbit on the classes in `N`, when
/// `Z` acts semi-regularly there.
pub fn transversal_factorization(
    g: &GroupTable,
    cp: &CentralDecomposition,
) -> Result<TransversalOutcome> {
    let shape = system_shape(g, cp)?;
    let n_view = SubgroupView::new(g, &cp.n)?;
    let z_local = n_view.localize(&cp.z).expect("Z lies in N");
    let counts = class_count_report(&n_view.table, &z_local)?;
    let action = &shape.n_action;
    if action.is_semi_regular() != counts.semiregular {
        return Err(Error::Inconsistent(
            "semi-regularity on the classes in N differs from that in N itself".into(),
        ));
    }
    if let Some(orbit) = action.first_non_regular() {
        return Ok(TransversalOutcome::NotSemiRegular {
            orbit: orbit.clone(),
            counts,
        });
    }
    let classes = g.classes();
    let mut y = Subset::empty(g.order());
    for o in &action.orbits {
        y.union_with(&classes.classes[o.classes[0]]);
    }
    let f = SetDirectFactorization::certify(g, cp.m.clone(), y)?;
    if !f.certified {
        return Err(Error::Inconsistent(
            "normal transversal failed to certify".into(),
        ));
    }
    Ok(TransversalOutcome::Found {
        factorization: f,
        counts,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum CyclicOutcome {
    Found {
        factorization: SetDirectFactorization,
    },
    /// `[M,M] ∩ [N,N]` contains `witness ≠ 1`, so no factorization with
    /// `X ⊆ M`, `Y ⊆ N` exists.
    CommutatorObstruction { witness: usize },
}

/// The cyclic-`Z` construction with `A_i = X0`, `B_j = Y0` and identity
/// classes on the orbit of `Z` itself.
///
/// The commutator condition is tested before the kernel hypotheses: its
/// failure rules out any factorization with `X ⊆ M`, `Y ⊆ N` on its own.
pub fn cyclic_center_factorization(
    g: &GroupTable,
    cp: &CentralDecomposition,
    x0: &Subset,
    y0: &Subset,
) -> Result<CyclicOutcome> {
    let z_view = SubgroupView::new(g, &cp.z)?;
    if !z_view.table.is_cyclic() {
        return Err(Error::NotCyclic);
    }
    let (Some(x0l), Some(y0l)) = (z_view.localize(x0), z_view.localize(y0)) else {
        return Err(Error::NotContained("X0 and Y0 must lie in Z".into()));
    };
    let zt = &z_view.table;
    if !factors_exactly(zt, &x0l, &y0l, &zt.all()) {
        return Err(Error::NotADirectFactorizationOfZ);
    }
    let mm = g.commutator_set(&cp.m, &cp.m)?;
    let nn = g.commutator_set(&cp.n, &cp.n)?;
    if let Some(witness) = mm.intersection(&nn).iter().find(|&w| w != 0) {
        return Ok(CyclicOutcome::CommutatorObstruction { witness });
    }
    let zm = z_view.localize(&mm.intersection(&cp.z)).expect("inside Z");
    let zn = z_view.localize(&nn.intersection(&cp.z)).expect("inside Z");
    if !zm.is_subset(&kernel(zt, &x0l)?) {
        return Err(Error::HypothesisViolated(
            "[M,M] ∩ Z is not inside K(X0)".into(),
        ));
    }
    if !zn.is_subset(&kernel(zt, &y0l)?) {
        return Err(Error::HypothesisViolated(
            "[N,N] ∩ Z is not inside K(Y0)".into(),
        ));
    }
    let shape = system_shape(g, cp)?;
    let sys = FactorizationSystem::constant(&shape, &x0l, &y0l);
    // the minimal class of the orbit through {1} is {1} itself
    let f = construct_from_system(g, cp, &sys, None)?;
    if f.x.intersection(&cp.z) != *x0 || f.y.intersection(&cp.z) != *y0 {
        return Err(Error::Inconsistent(
            "constructed factors do not meet Z in X0, Y0".into(),
        ));
    }
    Ok(CyclicOutcome::Found { factorization: f })
}

fn prime_power(n: usize) -> Option<(usize, u32)> {
    if n < 2 {
        return None;
    }
    let p = (2..=n).find(|d| n % d == 0)?;
    let mut k = 0;
    let mut m = n;
    while m % p == 0 {
        m /= p;
        k += 1;
    }
    (m == 1).then_some((p, k))
}

/// `G = X × Y` from a central semi-regular `z` of order `p^k`, `k ≥ 2`, with
/// `X ∩ ⟨z⟩ = ⟨z^p⟩` and `Y = {1, z, ..., z^(p-1)}`.
pub fn prime_power_factorization(g: &GroupTable, z: usize) -> Result<SetDirectFactorization> {
    if z >= g.order() {
        return Err(Error::InvalidElement(z.to_string()));
    }
    if !g.center().contains(z) {
        return Err(Error::NotCentral(g.label(z).to_string()));
    }
    let classes = g.classes();
    let fixes_a_class =
        (0..classes.len()).any(|c| classes.class_of[g.mul(z, classes.representative(c))] == c);
    if fixes_a_class {
        return Err(Error::NotSemiRegular);
    }
    let order = g.element_order(z);
    let p = match prime_power(order) {
        Some((p, k)) if k >= 2 => p,
        _ => return Err(Error::OrderNotPrimePowerAtLeastSquare(order)),
    };
    let n = g.generated_subgroup(&Subset::singleton(g.order(), z))?;
    let cp = is_central_product(g, &g.all(), &n)
        .map_err(|e| Error::Inconsistent(format!("G and <z> failed to decompose: {e}")))?;
    let x0 = g.generated_subgroup(&Subset::singleton(g.order(), g.power(z, p)))?;
    let y0 = Subset::from_indices(g.order(), (0..p).map(|i| g.power(z, i)));
    let f = match cyclic_center_factorization(g, &cp, &x0, &y0)? {
        CyclicOutcome::Found { factorization } => factorization,
        CyclicOutcome::CommutatorObstruction { .. } => {
            return Err(Error::Inconsistent("[G,G] meets [<z>,<z>] = {1}".into()))
        }
    };
    if f.is_trivial(g) || g.is_subgroup(&f.y) {
        return Err(Error::Inconsistent(
            "prime-power construction is degenerate".into(),
        ));
    }
    if g.is_perfect() && g.is_subgroup(&f.x) {
        return Err(Error::Inconsistent(
            "X is a subgroup of a perfect group".into(),
        ));
    }
    Ok(f)
}

/// Shifts a certified factorization by a central `z` with `z ∈ X`, `z⁻¹ ∈ Y`
/// so that both factors contain 1. Normalized inputs come back unchanged.
pub fn normalize(g: &GroupTable, f: &SetDirectFactorization) -> Result<SetDirectFactorization> {
    if !f.certified {
        return Err(Error::NotCertified);
    }
    let z = g
        .center()
        .iter()
        .find(|&z| f.x.contains(z) && f.y.contains(g.inv(z)))
        .ok_or_else(|| Error::Inconsistent("no central z with z in X and z^-1 in Y".into()))?;
    let x = g.left_translate(g.inv(z), &f.x);
    let y = g.left_translate(z, &f.y);
    let out = SetDirectFactorization::certify(g, x, y)?;
    if !out.certified {
        return Err(Error::Inconsistent("central shift lost directness".into()));
    }
    Ok(out)
}

/// `M = X × (Y ∩ Z)` and `N = Y × (X ∩ Z)`, each certified inside its
/// subgroup and returned in parent indices.
pub fn induced_decompositions(
    g: &GroupTable,
    f: &SetDirectFactorization,
    cp: &CentralDecomposition,
) -> Result<(SetDirectFactorization, SetDirectFactorization)> {
    if !f.certified {
        return Err(Error::NotCertified);
    }
    if !f.x.is_subset(&cp.m) || !f.y.is_subset(&cp.n) {
        return Err(Error::ContainmentViolated("need X ⊆ M and Y ⊆ N".into()));
    }
    let induced = |h: &Subset, a: &Subset, b: &Subset| -> Result<SetDirectFactorization> {
        let view = SubgroupView::new(g, h)?;
        let al = view.localize(a).expect("inside");
        let bl = view.localize(b).expect("inside");
        let local = SetDirectFactorization::certify(&view.table, al, bl)?;
        if !local.certified {
            return Err(Error::Inconsistent("induced factorization failed".into()));
        }
        Ok(SetDirectFactorization {
            x: view.globalize(&local.x),
            y: view.globalize(&local.y),
            certified: true,
        })
    };
    let on_m = induced(&cp.m, &f.x, &f.y.intersection(&cp.z))?;
    let on_n = induced(&cp.n, &f.y, &f.x.intersection(&cp.z))?;
    Ok((on_m, on_n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::lookup;
    use crate::central::enumerate_central_decompositions;

    fn set(g: &GroupTable, labels: &[&str]) -> Subset {
        Subset::from_indices(g.order(), labels.iter().map(|l| g.find_label(l).unwrap()))
    }

    #[test]
    fn d10_rotation_classes_are_direct() {
        let g = lookup("D10").unwrap();
        let x = set(&g, &["r", "r^4"]);
        let y = set(&g, &["r^2", "r^3"]);
        let r = is_direct(&g, &x, &y).unwrap();
        assert!(r.direct && r.agree());
        let p = g.set_product(&x, &y);
        assert_eq!(p.set, set(&g, &["r", "r^2", "r^3", "r^4"]));
        assert_eq!(p.max_multiplicity(), 1);
    }

    #[test]
    fn s3_rotations_times_reflections_not_direct() {
        let g = lookup("S3").unwrap();
        let classes = g.classes();
        let rot = classes.classes.iter().find(|c| c.len() == 2).unwrap();
        let refl = classes.classes.iter().find(|c| c.len() == 3).unwrap();
        let r = is_direct(&g, rot, refl).unwrap();
        assert!(!r.direct);
        assert_eq!(g.product_set(rot, refl).len(), 3);
    }

    #[test]
    fn trivial_and_invalid_inputs() {
        let g = lookup("S3").unwrap();
        let one = g.trivial_subgroup();
        assert!(is_direct(&g, &one, &g.all()).unwrap().direct);
        assert_eq!(is_direct(&g, &Subset::empty(6), &one), Err(Error::EmptySet));
        let a3 = g
            .generated_subgroup(g.classes().classes.iter().find(|c| c.len() == 2).unwrap())
            .unwrap();
        let t = g
            .classes()
            .classes
            .iter()
            .find(|c| c.len() == 3)
            .unwrap()
            .first()
            .unwrap();
        let y = Subset::from_indices(6, [0, t]);
        assert!(matches!(
            verify_main_theorem(&g, &a3, &y),
            Err(Error::NotNormal(_))
        ));
    }

    #[test]
    fn c4_main_theorem() {
        let g = lookup("C4").unwrap();
        let x = Subset::from_indices(4, [0, 2]);
        let y = Subset::from_indices(4, [0, 1]);
        let r = verify_main_theorem(&g, &x, &y).unwrap();
        assert!(r.verdict && r.condition_a && r.condition_b);
        assert_eq!(r.m, x);
        assert!(r.n.is_full());
        assert_eq!(r.z, x);
        let bad = verify_main_theorem(&g, &y, &y).unwrap();
        assert!(!bad.verdict);
        let full = verify_main_theorem(&g, &g.all(), &g.trivial_subgroup()).unwrap();
        assert!(full.verdict);
        assert_eq!(full.z.len(), 1);
    }

    #[test]
    fn kernels() {
        let c6 = lookup("C6").unwrap();
        assert_eq!(kernel(&c6, &c6.all()).unwrap(), c6.all());
        assert_eq!(kernel(&c6, &Subset::singleton(6, 4)).unwrap().len(), 1);
        assert_eq!(
            kernel(&c6, &Subset::from_indices(6, [0, 3]))
                .unwrap()
                .to_vec(),
            vec![0, 3]
        );
        assert_eq!(
            kernel(&lookup("S3").unwrap(), &Subset::singleton(6, 0)),
            Err(Error::NotAbelian)
        );
        assert_eq!(kernel(&c6, &Subset::empty(6)), Err(Error::EmptySet));
    }

    #[test]
    fn c4_system_and_construction() {
        let g = lookup("C4").unwrap();
        let all = g.all();
        let cp = is_central_product(&g, &all, &all).unwrap();
        let shape = system_shape(&g, &cp).unwrap();
        assert_eq!(shape.m.len(), 1);
        let sys = FactorizationSystem::constant(
            &shape,
            &Subset::from_indices(4, [0, 2]),
            &Subset::from_indices(4, [0, 1]),
        );
        let rep = check_factorization_system(&sys).unwrap();
        assert!(rep.valid);
        let f = construct_from_system(&g, &cp, &sys, None).unwrap();
        assert_eq!(f.x.to_vec(), vec![0, 2]);
        assert_eq!(f.y.to_vec(), vec![0, 1]);
    }

    #[test]
    fn trivial_center_construction_gives_whole_group() {
        let g = lookup("S3").unwrap();
        let cp = is_central_product(&g, &g.all(), &g.trivial_subgroup()).unwrap();
        let shape = system_shape(&g, &cp).unwrap();
        let one = Subset::singleton(1, 0);
        let sys = FactorizationSystem::constant(&shape, &one, &one);
        let f = construct_from_system(&g, &cp, &sys, None).unwrap();
        assert!(f.x.is_full());
        assert_eq!(f.y.len(), 1);
    }

    #[test]
    fn transversal_outcomes() {
        let q8 = lookup("Q8").unwrap();
        let cp = is_central_product(&q8, q8.center(), &q8.all()).unwrap();
        match transversal_factorization(&q8, &cp).unwrap() {
            TransversalOutcome::NotSemiRegular { counts, .. } => {
                assert_eq!((counts.k_g, counts.k_z, counts.k_g_mod_z), (5, 2, 4));
            }
            other => panic!("unexpected {other:?}"),
        }
        // N = Z is abelian, so any transversal works
        let cp = is_central_product(&q8, &q8.all(), q8.center()).unwrap();
        assert!(matches!(
            transversal_factorization(&q8, &cp).unwrap(),
            TransversalOutcome::Found { .. }
        ));
    }

    #[test]
    fn prime_power_examples() {
        let c4 = lookup("C4").unwrap();
        let f = prime_power_factorization(&c4, 1).unwrap();
        assert_eq!((f.x.to_vec(), f.y.to_vec()), (vec![0, 2], vec![0, 1]));
        let c9 = lookup("C9").unwrap();
        let f = prime_power_factorization(&c9, 1).unwrap();
        assert_eq!((f.x.to_vec(), f.y.to_vec()), (vec![0, 3, 6], vec![0, 1, 2]));
        let q8 = lookup("Q8").unwrap();
        let minus_one = q8.find_label("-1").unwrap();
        assert_eq!(
            prime_power_factorization(&q8, minus_one),
            Err(Error::NotSemiRegular)
        );
        assert_eq!(
            prime_power_factorization(&lookup("C2").unwrap(), 1),
            Err(Error::OrderNotPrimePowerAtLeastSquare(2))
        );
    }

    #[test]
    fn cyclic_construction_on_q8_central_products() {
        let g = lookup("Q8oC4").unwrap();
        let cps = enumerate_central_decompositions(&g).unwrap();
        // the Q8 image: non-abelian normal subgroup of order 8
        let q = cps
            .iter()
            .map(|cp| &cp.m)
            .find(|m| {
                m.len() == 8
                    && !m
                        .iter()
                        .all(|a| m.iter().all(|b| g.mul(a, b) == g.mul(b, a)))
            })
            .unwrap()
            .clone();
        let c4 = cps
            .iter()
            .find(|cp| cp.m == q && cp.n.len() == 4)
            .unwrap()
            .clone();
        let z = c4.z.clone();
        let one = g.trivial_subgroup();
        match cyclic_center_factorization(&g, &c4, &z, &one).unwrap() {
            CyclicOutcome::Found { factorization } => {
                assert!(factorization.certified);
                assert_eq!(factorization.x.len() * factorization.y.len(), 16);
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            cyclic_center_factorization(&g, &c4, &one, &z),
            Err(Error::HypothesisViolated(_))
        ));

        let h = lookup("Q8oQ8").unwrap();
        let cps = enumerate_central_decompositions(&h).unwrap();
        let nonabelian = |s: &Subset| h.commutator_set(s, s).unwrap().len() > 1;
        let cp = cps
            .iter()
            .find(|cp| cp.m.len() == 8 && nonabelian(&cp.m) && nonabelian(&cp.n))
            .unwrap();
        let one = h.trivial_subgroup();
        assert!(matches!(
            cyclic_center_factorization(&h, cp, &cp.z, &one).unwrap(),
            CyclicOutcome::CommutatorObstruction { .. }
        ));
    }

    #[test]
    fn normalization_and_induced() {
        let g = lookup("C4").unwrap();
        let f = SetDirectFactorization::certify(
            &g,
            Subset::from_indices(4, [1, 3]),
            Subset::from_indices(4, [0, 1]),
        )
        .unwrap();
        assert!(f.certified);
        let n = normalize(&g, &f).unwrap();
        assert!(n.is_normalized());
        assert_eq!(normalize(&g, &n).unwrap(), n);

        let f = SetDirectFactorization::certify(
            &g,
            Subset::from_indices(4, [0, 2]),
            Subset::from_indices(4, [0, 1]),
        )
        .unwrap();
        let cp = is_central_product(&g, &Subset::from_indices(4, [0, 2]), &g.all()).unwrap();
        let (on_m, on_n) = induced_decompositions(&g, &f, &cp).unwrap();
        assert_eq!(on_m.y.to_vec(), vec![0]);
        assert_eq!(on_n.y.to_vec(), vec![0, 2]);
        let wrong = is_central_product(&g, &g.all(), &Subset::from_indices(4, [0, 2])).unwrap();
        assert!(matches!(
            induced_decompositions(&g, &f, &wrong),
            Err(Error::ContainmentViolated(_))
        ));
    }
}
