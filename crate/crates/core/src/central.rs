//! Central products and the multiplication action of a central subgroup on
//! conjugacy classes.

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;

use crate::construct::quotient_group;
use crate::error::{Error, Result};
use crate::group::{GroupTable, Limits};
use crate::subset::Subset;

/// A certified triple with `G = M ∘_Z N`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct CentralDecomposition {
    #[serde(rename = "M")]
    pub m: Subset,
    #[serde(rename = "N")]
    pub n: Subset,
    #[serde(rename = "Z")]
    pub z: Subset,
}

impl CentralDecomposition {
    /// The same decomposition with the roles of `M` and `N` exchanged.
    pub fn swapped(&self) -> CentralDecomposition {
        CentralDecomposition {
            m: self.n.clone(),
            n: self.m.clone(),
            z: self.z.clone(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum DecompositionFailure {
    NotSubgroup,
    NotNormal,
    ProductNotG,
    IntersectionNotCentral,
    NotCentralizing,
}

impl fmt::Display for DecompositionFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            DecompositionFailure::NotSubgroup => "NotSubgroup",
            DecompositionFailure::NotNormal => "NotNormal",
            DecompositionFailure::ProductNotG => "ProductNotG",
            DecompositionFailure::IntersectionNotCentral => "IntersectionNotCentral",
            DecompositionFailure::NotCentralizing => "NotCentralizing",
        };
        f.write_str(s)
    }
}

pub fn is_central_product(
    g: &GroupTable,
    m: &Subset,
    n: &Subset,
) -> std::result::Result<CentralDecomposition, DecompositionFailure> {
    if !g.is_subgroup(m) || !g.is_subgroup(n) {
        return Err(DecompositionFailure::NotSubgroup);
    }
    if !g.is_normal_subset(m) || !g.is_normal_subset(n) {
        return Err(DecompositionFailure::NotNormal);
    }
    let z = m.intersection(n);
    // |MN| = |M||N|/|M∩N| for subgroups
    if m.len() * n.len() != g.order() * z.len() {
        return Err(DecompositionFailure::ProductNotG);
    }
    if !g.is_central(&z) {
        return Err(DecompositionFailure::IntersectionNotCentral);
    }
    if m.iter()
        .any(|a| n.iter().any(|b| g.mul(a, b) != g.mul(b, a)))
    {
        return Err(DecompositionFailure::NotCentralizing);
    }
    Ok(CentralDecomposition {
        m: m.clone(),
        n: n.clone(),
        z,
    })
}

/// All central decompositions as unordered pairs; within a pair the larger
/// factor (then the smaller member list) is reported as `M`.
pub fn enumerate_central_decompositions(g: &GroupTable) -> Result<Vec<CentralDecomposition>> {
    enumerate_central_decompositions_with(g, &Limits::default())
}

pub fn enumerate_central_decompositions_with(
    g: &GroupTable,
    limits: &Limits,
) -> Result<Vec<CentralDecomposition>> {
    let limit = limits.enumeration_max;
    if g.order() > limit {
        return Err(Error::OrderLimitExceeded { limit });
    }
    let normals = g.normal_subgroups();
    let mut out = Vec::new();
    for (i, a) in normals.iter().enumerate() {
        for b in &normals[..=i] {
            // `normals` ascends by size, so `a` is the larger one
            if let Ok(cp) = is_central_product(g, a, b) {
                out.push(cp);
            }
        }
    }
    out.sort_by(|x, y| {
        y.m.len()
            .cmp(&x.m.len())
            .then_with(|| x.m.cmp(&y.m))
            .then_with(|| x.n.cmp(&y.n))
    });
    Ok(out)
}

/// `{g : gs = sg for all s in S}`
pub fn centralizer(g: &GroupTable, s: &Subset) -> Subset {
    Subset::from_indices(
        g.order(),
        (0..g.order()).filter(|&x| s.iter().all(|y| g.mul(x, y) == g.mul(y, x))),
    )
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ZOrbit {
    /// Indices into the class partition of the ambient group.
    pub classes: Vec<usize>,
    pub stabilizer: Subset,
}

/// Orbits of `acting` on the classes of `G` inside `ambient` under `D ↦ zD`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ZActionData {
    pub ambient: Subset,
    pub acting: Subset,
    pub orbits: Vec<ZOrbit>,
    /// For each class of `G`, the orbit containing it (if inside `ambient`).
    #[serde(skip)]
    pub orbit_of: Vec<Option<usize>>,
}

impl ZActionData {
    pub fn is_semi_regular(&self) -> bool {
        self.orbits.iter().all(|o| o.stabilizer.len() == 1)
    }

    pub fn first_non_regular(&self) -> Option<&ZOrbit> {
        self.orbits.iter().find(|o| o.stabilizer.len() > 1)
    }

    pub fn stabilizer_of_class(&self, class: usize) -> Option<&Subset> {
        self.orbit_of[class].map(|o| &self.orbits[o].stabilizer)
    }
}

fn require_central_subgroup(g: &GroupTable, z: &Subset) -> Result<()> {
    if !g.is_central(z) {
        return Err(Error::NotCentral(format!("{z:?}")));
    }
    if !g.is_subgroup(z) {
        return Err(Error::NotSubgroup(format!("{z:?}")));
    }
    Ok(())
}

pub fn z_orbits(g: &GroupTable, n: &Subset, z: &Subset) -> Result<ZActionData> {
    require_central_subgroup(g, z)?;
    if !g.is_normal_subset(n) {
        return Err(Error::NotNormal(format!("{n:?}")));
    }
    if g.is_subgroup(n) && !z.is_subset(n) {
        return Err(Error::NotContained("Z must lie inside N".into()));
    }
    let classes = g.classes();
    let mut orbit_of = vec![None; classes.len()];
    let mut orbits = Vec::new();
    for c in classes.classes_in(n) {
        if orbit_of[c].is_some() {
            continue;
        }
        let rep = classes.representative(c);
        let mut members = Vec::new();
        let mut stabilizer = Subset::empty(g.order());
        for zz in z {
            let image = g.mul(zz, rep);
            if !n.contains(image) {
                return Err(Error::HypothesisViolated(
                    "the ambient set is not closed under multiplication by Z".into(),
                ));
            }
            let d = classes.class_of[image];
            if d == c {
                stabilizer.insert(zz);
            }
            if orbit_of[d].is_none() {
                orbit_of[d] = Some(orbits.len());
                members.push(d);
            }
        }
        members.sort_unstable();
        if members.len() * stabilizer.len() != z.len() {
            return Err(Error::Inconsistent("orbit-stabilizer count failed".into()));
        }
        orbits.push(ZOrbit {
            classes: members,
            stabilizer,
        });
    }
    Ok(ZActionData {
        ambient: n.clone(),
        acting: z.clone(),
        orbits,
        orbit_of,
    })
}

/// Stabilizer of the class of `x` under multiplication by `Z`, computed as
/// `{z : xz ∈ x^G}` and as `[x,G] ∩ Z`; the two must agree.
pub fn class_stabilizer(g: &GroupTable, x: usize, z: &Subset) -> Result<Subset> {
    if !g.is_central(z) {
        return Err(Error::NotCentral(format!("{z:?}")));
    }
    if x >= g.order() {
        return Err(Error::InvalidElement(x.to_string()));
    }
    let classes = g.classes();
    let class = classes.class_of[x];
    let direct = Subset::from_indices(
        g.order(),
        z.iter()
            .filter(|&zz| classes.class_of[g.mul(x, zz)] == class),
    );
    let via_commutators = g
        .commutator_set(&Subset::singleton(g.order(), x), &g.all())?
        .intersection(z);
    if direct != via_commutators {
        return Err(Error::Inconsistent(format!(
            "stabilizer of class of {x}: {direct:?} vs {via_commutators:?}"
        )));
    }
    Ok(direct)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ZBracket {
    pub set: Subset,
    pub generated: Subset,
    /// Whether the union-of-stabilizers identity applied and was checked.
    pub union_identity_checked: bool,
}

/// `Z_[K] = [K,K] ∩ Z` and the subgroup it generates.
///
/// When `K·C_G(K) = G` and `Z ⊆ K` the set also equals the union of the
/// orbit stabilizers of `Z` on the classes inside `K`; that is checked.
pub fn z_bracket(g: &GroupTable, k: &Subset, z: &Subset) -> Result<ZBracket> {
    if !g.is_subgroup(k) {
        return Err(Error::NotSubgroup(format!("{k:?}")));
    }
    if !g.is_normal_subset(k) {
        return Err(Error::NotNormal(format!("{k:?}")));
    }
    if !g.is_central(z) {
        return Err(Error::NotCentral(format!("{z:?}")));
    }
    let set = g.commutator_set(k, k)?.intersection(z);
    let generated = g.generated_subgroup(&set)?;
    let c = centralizer(g, k);
    let applies = z.is_subset(k) && g.is_subgroup(z) && g.product_set(k, &c).is_full();
    if applies {
        let action = z_orbits(g, k, z)?;
        let mut union = Subset::empty(g.order());
        for o in &action.orbits {
            union.union_with(&o.stabilizer);
        }
        if union != set {
            return Err(Error::Inconsistent(format!(
                "Z_[K] = {set:?} but the stabilizers cover {union:?}"
            )));
        }
    }
    Ok(ZBracket {
        set,
        generated,
        union_identity_checked: applies,
    })
}

/// Central elements other than 1 that fix no conjugacy class.
pub fn semi_regular_elements(g: &GroupTable) -> Subset {
    let action = z_orbits(g, &g.all(), g.center()).expect("the center is a central subgroup");
    let mut fixing = Subset::singleton(g.order(), 0);
    for o in &action.orbits {
        fixing.union_with(&o.stabilizer);
    }
    g.center().difference(&fixing)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ClassCountReport {
    pub k_g: usize,
    pub k_z: usize,
    pub k_g_mod_z: usize,
    pub orbit_count: usize,
    pub semiregular: bool,
}

pub fn class_count_report(g: &GroupTable, z: &Subset) -> Result<ClassCountReport> {
    require_central_subgroup(g, z)?;
    let action = z_orbits(g, &g.all(), z)?;
    let quotient = quotient_group(g, z)?;
    let report = ClassCountReport {
        k_g: g.class_count(),
        k_z: z.len(),
        k_g_mod_z: quotient.group.class_count(),
        orbit_count: action.orbits.len(),
        semiregular: action.is_semi_regular(),
    };
    if report.orbit_count != report.k_g_mod_z {
        return Err(Error::Inconsistent(format!(
            "{} orbits but k(G/Z) = {}",
            report.orbit_count, report.k_g_mod_z
        )));
    }
    if report.semiregular != (report.k_g == report.k_z * report.k_g_mod_z) {
        return Err(Error::Inconsistent(
            "semi-regularity disagrees with the class-count identity".into(),
        ));
    }
    Ok(report)
}

/// Classes of the subgroup `h` under conjugation by `h` only, sorted by
/// minimal member.
pub fn subgroup_classes(g: &GroupTable, h: &Subset) -> Vec<Subset> {
    let mut seen = Subset::empty(g.order());
    let mut out = Vec::new();
    for x in h {
        if seen.contains(x) {
            continue;
        }
        let class = Subset::from_indices(g.order(), h.iter().map(|y| g.conjugate(x, y)));
        seen.union_with(&class);
        out.push(class);
    }
    out
}

/// Outcome of the structural checks on a central product.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CentralProductChecks {
    pub mutually_centralizing: bool,
    pub subgroup_classes_match: bool,
    pub classes_factor: bool,
    pub stabilizers_multiply: bool,
    pub orbit_pairs_bijective: bool,
}

impl CentralProductChecks {
    pub fn all(&self) -> bool {
        self.mutually_centralizing
            && self.subgroup_classes_match
            && self.classes_factor
            && self.stabilizers_multiply
            && self.orbit_pairs_bijective
    }
}

/// Checks the conjugacy structure of `G = M ∘_Z N`: `[M,N] = 1`, every class
/// is `C_M C_N`, stabilizers multiply, and orbit pairs biject onto orbits.
pub fn check_central_product(
    g: &GroupTable,
    cp: &CentralDecomposition,
) -> Result<CentralProductChecks> {
    let classes = g.classes();
    let mutually_centralizing = g.commutator_set(&cp.m, &cp.n)?.len() == 1;

    let g_classes_in = |h: &Subset| -> Vec<Subset> {
        classes
            .classes_in(h)
            .into_iter()
            .map(|c| classes.classes[c].clone())
            .collect()
    };
    let subgroup_classes_match = subgroup_classes(g, &cp.m) == g_classes_in(&cp.m)
        && subgroup_classes(g, &cp.n) == g_classes_in(&cp.n);

    let om = z_orbits(g, &cp.m, &cp.z)?;
    let on = z_orbits(g, &cp.n, &cp.z)?;
    let og = z_orbits(g, &g.all(), &cp.z)?;

    let mut classes_factor = true;
    let mut stabilizers_multiply = true;
    let mut pair_to_orbit: HashMap<(usize, usize), usize> = HashMap::new();
    let cm_list = classes.classes_in(&cp.m);
    let cn_list = classes.classes_in(&cp.n);
    // every class is hit by some product C_M C_N with representatives multiplied
    let mut covered = vec![false; classes.len()];
    for &cm in &cm_list {
        for &cn in &cn_list {
            let prod = g.product_set(&classes.classes[cm], &classes.classes[cn]);
            let c = classes.class_of[prod.first().expect("non-empty")];
            if prod != classes.classes[c] {
                classes_factor = false;
                continue;
            }
            covered[c] = true;
            let stab = g.product_set(
                om.stabilizer_of_class(cm).expect("class in M"),
                on.stabilizer_of_class(cn).expect("class in N"),
            );
            if Some(&stab) != og.stabilizer_of_class(c) {
                stabilizers_multiply = false;
            }
            let key = (
                om.orbit_of[cm].expect("class in M"),
                on.orbit_of[cn].expect("class in N"),
            );
            let target = og.orbit_of[c].expect("class in G");
            if let Some(&prev) = pair_to_orbit.get(&key) {
                if prev != target {
                    classes_factor = false;
                }
            }
            pair_to_orbit.insert(key, target);
        }
    }
    classes_factor &= covered.iter().all(|&b| b);
    let mut targets: Vec<usize> = pair_to_orbit.values().copied().collect();
    targets.sort_unstable();
    targets.dedup();
    let orbit_pairs_bijective = pair_to_orbit.len() == om.orbits.len() * on.orbits.len()
        && targets.len() == pair_to_orbit.len()
        && targets.len() == og.orbits.len();

    Ok(CentralProductChecks {
        mutually_centralizing,
        subgroup_classes_match,
        classes_factor,
        stabilizers_multiply,
        orbit_pairs_bijective,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::lookup;
    use crate::construct::{external_central_product, CentralProductGroup};

    fn q8() -> GroupTable {
        lookup("Q8").unwrap()
    }

    fn d8_c4() -> CentralProductGroup {
        let d8 = lookup("D8").unwrap();
        let c4 = lookup("C4").unwrap();
        let zd = d8.find_label("r^2").unwrap();
        external_central_product(&d8, &c4, &[(0, 0), (zd, 2)]).unwrap()
    }

    #[test]
    fn klein_four_is_direct_central_product() {
        let g = lookup("C2xC2").unwrap();
        let a = Subset::from_indices(4, [0, 2]);
        let b = Subset::from_indices(4, [0, 1]);
        let cp = is_central_product(&g, &a, &b).unwrap();
        assert_eq!(cp.z.len(), 1);
    }

    #[test]
    fn external_product_images_form_decomposition() {
        let p = d8_c4();
        assert_eq!(p.group.order(), 16);
        assert_eq!(p.group.center().len(), 4);
        let cp = is_central_product(&p.group, &p.left_image(), &p.right_image()).unwrap();
        assert_eq!(cp.z.len(), 2);
        assert!(check_central_product(&p.group, &cp).unwrap().all());
    }

    #[test]
    fn s3_decompositions() {
        let g = lookup("S3").unwrap();
        let rotations = g.classes().classes.iter().find(|c| c.len() == 2).unwrap();
        let a3 = g.generated_subgroup(rotations).unwrap();
        assert_eq!(a3.len(), 3);
        assert_eq!(
            is_central_product(&g, &a3, &g.all()),
            Err(DecompositionFailure::IntersectionNotCentral)
        );
        let all = enumerate_central_decompositions(&g).unwrap();
        assert_eq!(all.len(), 1);
        assert!(all[0].m.is_full());
        assert_eq!(all[0].n.len(), 1);
    }

    #[test]
    fn q8_cyclic_pair_does_not_centralize() {
        let g = q8();
        let i = g
            .generated_subgroup(&Subset::singleton(8, g.find_label("i").unwrap()))
            .unwrap();
        let j = g
            .generated_subgroup(&Subset::singleton(8, g.find_label("j").unwrap()))
            .unwrap();
        assert_eq!(
            is_central_product(&g, &i, &j),
            Err(DecompositionFailure::NotCentralizing)
        );
    }

    #[test]
    fn q8_decompositions_include_center() {
        let g = q8();
        let all = enumerate_central_decompositions(&g).unwrap();
        assert!(all
            .iter()
            .any(|cp| cp.m.is_full() && cp.n == *g.center() && cp.z == *g.center()));
    }

    #[test]
    fn q8_orbits_and_stabilizers() {
        let g = q8();
        let z = g.center().clone();
        let data = z_orbits(&g, &g.all(), &z).unwrap();
        assert_eq!(data.orbits.len(), 4);
        let i = g.find_label("i").unwrap();
        let ci = g.classes().class_of[i];
        assert_eq!(data.stabilizer_of_class(ci), Some(&z));
        assert_eq!(class_stabilizer(&g, i, &z).unwrap(), z);
        assert_eq!(class_stabilizer(&g, 0, &z).unwrap().len(), 1);
        let r = class_count_report(&g, &z).unwrap();
        assert_eq!(
            (r.k_g, r.k_z, r.k_g_mod_z, r.orbit_count, r.semiregular),
            (5, 2, 4, 4, false)
        );
        assert!(semi_regular_elements(&g).is_empty());
        let b = z_bracket(&g, &g.all(), &z).unwrap();
        assert_eq!(b.set, z);
        assert_eq!(b.generated, z);
        assert!(b.union_identity_checked);
    }

    #[test]
    fn cyclic_four_action() {
        let g = lookup("C4").unwrap();
        let data = z_orbits(&g, &g.all(), &g.all()).unwrap();
        assert_eq!(data.orbits.len(), 1);
        assert_eq!(data.orbits[0].classes.len(), 4);
        assert_eq!(semi_regular_elements(&g).to_vec(), vec![1, 2, 3]);
        let r = class_count_report(&g, &Subset::from_indices(4, [0, 2])).unwrap();
        assert_eq!(
            (r.k_g, r.k_z, r.k_g_mod_z, r.orbit_count, r.semiregular),
            (4, 2, 2, 2, true)
        );
    }

    #[test]
    fn trivial_z_has_singleton_orbits() {
        let g = lookup("S4").unwrap();
        let data = z_orbits(&g, &g.all(), &g.trivial_subgroup()).unwrap();
        assert_eq!(data.orbits.len(), g.class_count());
        assert!(data.is_semi_regular());
        let b = z_bracket(&g, &g.all(), &g.trivial_subgroup()).unwrap();
        assert_eq!(b.set.len(), 1);
    }

    #[test]
    fn non_central_z_rejected() {
        let g = lookup("S3").unwrap();
        let bad = g.all();
        assert!(matches!(
            z_orbits(&g, &g.all(), &bad),
            Err(Error::NotCentral(_))
        ));
        assert!(matches!(
            class_stabilizer(&g, 1, &bad),
            Err(Error::NotCentral(_))
        ));
    }
}
