//! Group constructors: permutation closures, direct and central products,
//! quotients, and subgroup views.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::group::{GroupTable, Limits};
use crate::subset::Subset;

/// Closure of a set of permutations of `0..d`.
///
/// Products compose left to right: `(a*b)(i) = b(a(i))`. Element 0 is the
/// identity and elements are numbered in breadth-first discovery order.
pub fn group_from_permutations(generators: &[Vec<usize>]) -> Result<GroupTable> {
    group_from_permutations_with(generators, &Limits::default())
}

pub fn group_from_permutations_with(
    generators: &[Vec<usize>],
    limits: &Limits,
) -> Result<GroupTable> {
    let degree = generators.first().map_or(0, Vec::len);
    for (k, g) in generators.iter().enumerate() {
        if g.len() != degree {
            return Err(Error::NotAGroup(format!(
                "generator {k} has degree {} instead of {degree}",
                g.len()
            )));
        }
        let mut hit = vec![false; degree];
        for &p in g {
            if p >= degree || std::mem::replace(&mut hit[p], true) {
                return Err(Error::NotAGroup(format!(
                    "generator {k} is not a bijection"
                )));
            }
        }
    }

    let identity: Vec<u32> = (0..degree as u32).collect();
    let gens: Vec<Vec<u32>> = generators
        .iter()
        .map(|g| g.iter().map(|&x| x as u32).collect())
        .collect();
    let mut elements = vec![identity.clone()];
    let mut index: HashMap<Vec<u32>, usize> = HashMap::from([(identity, 0)]);
    // parent[b] = (p, k) with b = p * gens[k]
    let mut parent: Vec<(usize, usize)> = vec![(0, 0)];
    let mut right_gen: Vec<Vec<u32>> = Vec::new();

    let mut head = 0;
    while head < elements.len() {
        let mut row = Vec::with_capacity(gens.len());
        for (k, g) in gens.iter().enumerate() {
            let prod: Vec<u32> = elements[head].iter().map(|&i| g[i as usize]).collect();
            let idx = match index.get(&prod) {
                Some(&i) => i,
                None => {
                    let i = elements.len();
                    if i >= limits.max_order {
                        return Err(Error::OrderLimitExceeded {
                            limit: limits.max_order,
                        });
                    }
                    index.insert(prod.clone(), i);
                    elements.push(prod);
                    parent.push((head, k));
                    i
                }
            };
            row.push(idx as u32);
        }
        right_gen.push(row);
        head += 1;
    }

    let n = elements.len();
    let mut mult = vec![0u32; n * n];
    for a in 0..n {
        mult[a * n] = a as u32;
        for b in 1..n {
            let (p, k) = parent[b];
            let ap = mult[a * n + p] as usize;
            mult[a * n + b] = right_gen[ap][k];
        }
    }
    let labels = elements.iter().map(|p| cycle_notation(p)).collect();
    Ok(GroupTable::from_trusted(n, mult, labels))
}

/// Cycle notation such as `(0 1 2)(3 4)`; the identity is `()`.
pub fn cycle_notation(perm: &[u32]) -> String {
    let mut seen = vec![false; perm.len()];
    let mut out = String::new();
    for start in 0..perm.len() {
        if seen[start] || perm[start] as usize == start {
            continue;
        }
        out.push('(');
        let mut x = start;
        let mut first = true;
        while !seen[x] {
            seen[x] = true;
            if !first {
                out.push(' ');
            }
            out.push_str(&x.to_string());
            first = false;
            x = perm[x] as usize;
        }
        out.push(')');
    }
    if out.is_empty() {
        out.push_str("()");
    }
    out
}

/// Direct product of several groups. Element `(a_1, ..., a_r)` is numbered in
/// mixed radix with the last factor varying fastest.
pub fn direct_product(factors: &[&GroupTable]) -> Result<GroupTable> {
    direct_product_with(factors, &Limits::default())
}

pub fn direct_product_with(factors: &[&GroupTable], limits: &Limits) -> Result<GroupTable> {
    let n = factors
        .iter()
        .try_fold(1usize, |acc, g| acc.checked_mul(g.order()))
        .filter(|&n| n <= limits.max_order)
        .ok_or(Error::OrderLimitExceeded {
            limit: limits.max_order,
        })?;
    let decode = |mut x: usize| -> Vec<usize> {
        let mut coords = vec![0; factors.len()];
        for (i, g) in factors.iter().enumerate().rev() {
            coords[i] = x % g.order();
            x /= g.order();
        }
        coords
    };
    let encode = |coords: &[usize]| -> usize {
        coords
            .iter()
            .zip(factors)
            .fold(0, |acc, (&c, g)| acc * g.order() + c)
    };
    let coords: Vec<Vec<usize>> = (0..n).map(decode).collect();
    let mut mult = vec![0u32; n * n];
    let mut buf = vec![0; factors.len()];
    for a in 0..n {
        for b in 0..n {
            for (i, g) in factors.iter().enumerate() {
                buf[i] = g.mul(coords[a][i], coords[b][i]);
            }
            mult[a * n + b] = encode(&buf) as u32;
        }
    }
    let labels = coords
        .iter()
        .map(|c| {
            let parts: Vec<&str> = c.iter().zip(factors).map(|(&x, g)| g.label(x)).collect();
            format!("({})", parts.join(","))
        })
        .collect();
    Ok(GroupTable::from_trusted(n, mult, labels))
}

/// A central product together with the embeddings of both factors.
#[derive(Debug, Clone)]
pub struct CentralProductGroup {
    pub group: GroupTable,
    /// Image of each element of the left factor.
    pub left: Vec<usize>,
    /// Image of each element of the right factor.
    pub right: Vec<usize>,
}

impl CentralProductGroup {
    pub fn left_image(&self) -> Subset {
        Subset::from_indices(self.group.order(), self.left.iter().copied())
    }

    pub fn right_image(&self) -> Subset {
        Subset::from_indices(self.group.order(), self.right.iter().copied())
    }
}

/// The quotient of `M x N` by `{(z, theta(z)^-1)}` where `theta` is given by
/// `pairing` as `(z in M, theta(z) in N)` pairs.
///
/// The first components must form a central subgroup of `M`, and the pairing
/// must be an isomorphism onto a central subgroup of `N`.
pub fn external_central_product(
    m: &GroupTable,
    n: &GroupTable,
    pairing: &[(usize, usize)],
) -> Result<CentralProductGroup> {
    external_central_product_with(m, n, pairing, &Limits::default())
}

pub fn external_central_product_with(
    m: &GroupTable,
    n: &GroupTable,
    pairing: &[(usize, usize)],
    limits: &Limits,
) -> Result<CentralProductGroup> {
    let (om, on) = (m.order(), n.order());
    let mut theta: HashMap<usize, usize> = HashMap::new();
    for &(a, b) in pairing {
        if a >= om || b >= on {
            return Err(Error::InvalidElement(format!(
                "pair ({a}, {b}) out of range"
            )));
        }
        if let Some(prev) = theta.insert(a, b) {
            if prev != b {
                return Err(Error::NotIsomorphism(format!("{a} paired twice")));
            }
        }
    }
    let z_m = Subset::from_indices(om, theta.keys().copied());
    let z_n = Subset::from_indices(on, theta.values().copied());
    if !m.is_subgroup(&z_m) {
        return Err(Error::NotCentral(
            "first components do not form a subgroup".into(),
        ));
    }
    if !m.is_central(&z_m) {
        return Err(Error::NotCentral(
            "first components not central in M".into(),
        ));
    }
    if z_n.len() != z_m.len() {
        return Err(Error::NotIsomorphism("pairing is not injective".into()));
    }
    for a in &z_m {
        for b in &z_m {
            if theta[&m.mul(a, b)] != n.mul(theta[&a], theta[&b]) {
                return Err(Error::NotIsomorphism(format!(
                    "theta({a}*{b}) != theta({a})*theta({b})"
                )));
            }
        }
    }
    if !n.is_central(&z_n) {
        return Err(Error::NotCentral("image not central in N".into()));
    }

    let zs: Vec<(usize, usize)> = z_m.iter().map(|z| (z, n.inv(theta[&z]))).collect();
    let code = |a: usize, b: usize| a * on + b;
    let canon = |a: usize, b: usize| -> usize {
        zs.iter()
            .map(|&(z, tz_inv)| code(m.mul(a, z), n.mul(b, tz_inv)))
            .min()
            .expect("Z contains the identity")
    };
    let mut reps: Vec<usize> = (0..om * on)
        .filter(|&c| canon(c / on, c % on) == c)
        .collect();
    reps.sort_unstable();
    let size = reps.len();
    if size > limits.max_order {
        return Err(Error::OrderLimitExceeded {
            limit: limits.max_order,
        });
    }
    let mut position = vec![usize::MAX; om * on];
    for (i, &c) in reps.iter().enumerate() {
        position[c] = i;
    }
    let mut mult = vec![0u32; size * size];
    for (i, &ci) in reps.iter().enumerate() {
        let (a1, b1) = (ci / on, ci % on);
        for (j, &cj) in reps.iter().enumerate() {
            let (a2, b2) = (cj / on, cj % on);
            mult[i * size + j] = position[canon(m.mul(a1, a2), n.mul(b1, b2))] as u32;
        }
    }
    let labels = reps
        .iter()
        .map(|&c| format!("({},{})", m.label(c / on), n.label(c % on)))
        .collect();
    let group = GroupTable::from_trusted(size, mult, labels);
    let left = (0..om).map(|a| position[canon(a, 0)]).collect();
    let right = (0..on).map(|b| position[canon(0, b)]).collect();
    Ok(CentralProductGroup { group, left, right })
}

/// A quotient group with the projection from the parent.
#[derive(Debug, Clone)]
pub struct Quotient {
    pub group: GroupTable,
    /// Parent element to coset index.
    pub projection: Vec<usize>,
}

/// `G / K` on the cosets of a normal subgroup, numbered by smallest member.
pub fn quotient_group(g: &GroupTable, k: &Subset) -> Result<Quotient> {
    if !g.is_normal_subgroup(k) {
        return Err(Error::NotNormalSubgroup);
    }
    let mut projection = vec![usize::MAX; g.order()];
    let mut reps = Vec::new();
    for x in 0..g.order() {
        if projection[x] != usize::MAX {
            continue;
        }
        let idx = reps.len();
        for y in k {
            projection[g.mul(x, y)] = idx;
        }
        reps.push(x);
    }
    let q = reps.len();
    let mut mult = vec![0u32; q * q];
    for (i, &a) in reps.iter().enumerate() {
        for (j, &b) in reps.iter().enumerate() {
            mult[i * q + j] = projection[g.mul(a, b)] as u32;
        }
    }
    let labels = reps.iter().map(|&r| format!("[{}]", g.label(r))).collect();
    Ok(Quotient {
        group: GroupTable::from_trusted(q, mult, labels),
        projection,
    })
}

/// A subgroup re-wrapped as a group table of its own.
///
/// Elements of the view are the subgroup members in ascending parent order,
/// so the identity stays at index 0.
#[derive(Debug, Clone)]
pub struct SubgroupView {
    pub table: GroupTable,
    pub to_parent: Vec<usize>,
    from_parent: Vec<Option<usize>>,
}

impl SubgroupView {
    pub fn new(g: &GroupTable, h: &Subset) -> Result<Self> {
        if !g.is_subgroup(h) {
            return Err(Error::NotSubgroup(
                "cannot build a table for a non-subgroup".into(),
            ));
        }
        let to_parent: Vec<usize> = h.to_vec();
        let mut from_parent = vec![None; g.order()];
        for (i, &x) in to_parent.iter().enumerate() {
            from_parent[x] = Some(i);
        }
        let k = to_parent.len();
        let mut mult = vec![0u32; k * k];
        for (i, &a) in to_parent.iter().enumerate() {
            for (j, &b) in to_parent.iter().enumerate() {
                mult[i * k + j] = from_parent[g.mul(a, b)].expect("closed") as u32;
            }
        }
        let labels = to_parent.iter().map(|&x| g.label(x).to_string()).collect();
        Ok(SubgroupView {
            table: GroupTable::from_trusted(k, mult, labels),
            to_parent,
            from_parent,
        })
    }

    /// The whole group viewed as a subgroup of itself.
    pub fn whole(g: &GroupTable) -> Self {
        SubgroupView {
            table: g.clone(),
            to_parent: (0..g.order()).collect(),
            from_parent: (0..g.order()).map(Some).collect(),
        }
    }

    pub fn parent_order(&self) -> usize {
        self.from_parent.len()
    }

    pub fn local(&self, parent_element: usize) -> Option<usize> {
        self.from_parent.get(parent_element).copied().flatten()
    }

    /// Parent subset to local subset; `None` if it leaves the subgroup.
    pub fn localize(&self, s: &Subset) -> Option<Subset> {
        let mut out = Subset::empty(self.table.order());
        for x in s {
            out.insert(self.local(x)?);
        }
        Some(out)
    }

    pub fn globalize(&self, s: &Subset) -> Subset {
        Subset::from_indices(self.parent_order(), s.iter().map(|x| self.to_parent[x]))
    }

    pub fn members(&self) -> Subset {
        Subset::from_indices(self.parent_order(), self.to_parent.iter().copied())
    }
}
