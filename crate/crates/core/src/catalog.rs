//! Named groups: cyclic, dihedral, dicyclic, symmetric and alternating groups,
//! PSL(2,7), and direct (`x`) or central (`o`) products of those.
//!
//! Names are case-insensitive. `D<m>` is the dihedral group of order `m`,
//! `Q<m>` the dicyclic (generalized quaternion for powers of two) group of
//! order `m`. `AoB` glues the unique central involutions of `A` and `B`.

use crate::construct::{direct_product, external_central_product, group_from_permutations};
use crate::error::{Error, Result};
use crate::group::GroupTable;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Family {
    Cyclic(usize),
    /// Dihedral group of order `2n`.
    Dihedral(usize),
    /// Dicyclic group of order `4n`.
    Dicyclic(usize),
    Symmetric(usize),
    Alternating(usize),
    Psl27,
    Direct(Vec<Family>),
    /// Central product over the unique central involution of each factor.
    Central(Box<Family>, Box<Family>),
}

impl Family {
    pub fn order(&self) -> usize {
        match self {
            Family::Cyclic(n) => *n,
            Family::Dihedral(n) => 2 * n,
            Family::Dicyclic(n) => 4 * n,
            Family::Symmetric(n) => (1..=*n).product(),
            Family::Alternating(n) => (1..=*n).product::<usize>() / 2,
            Family::Psl27 => 168,
            Family::Direct(fs) => fs.iter().map(Family::order).product(),
            Family::Central(a, b) => a.order() * b.order() / 2,
        }
    }

    pub fn build(&self) -> Result<GroupTable> {
        match self {
            Family::Cyclic(n) => Ok(cyclic(*n)),
            Family::Dihedral(n) => Ok(dihedral(*n)),
            Family::Dicyclic(n) => Ok(dicyclic(*n)),
            Family::Symmetric(n) => symmetric(*n),
            Family::Alternating(n) => alternating(*n),
            Family::Psl27 => psl27(),
            Family::Direct(fs) => {
                let tables = fs.iter().map(Family::build).collect::<Result<Vec<_>>>()?;
                let refs: Vec<&GroupTable> = tables.iter().collect();
                direct_product(&refs)
            }
            Family::Central(a, b) => {
                let (ga, gb) = (a.build()?, b.build()?);
                let za = unique_central_involution(&ga)?;
                let zb = unique_central_involution(&gb)?;
                Ok(external_central_product(&ga, &gb, &[(0, 0), (za, zb)])?.group)
            }
        }
    }
}

/// A named catalog group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CatalogEntry {
    pub name: String,
    pub family: Family,
}

impl CatalogEntry {
    pub fn order(&self) -> usize {
        self.family.order()
    }

    pub fn build(&self) -> Result<GroupTable> {
        self.family.build()
    }
}

const PRODUCTS: &[&str] = &[
    "C2xC2",
    "C2xC4",
    "C2xC2xC2",
    "C3xC3",
    "C2xC6",
    "C2xC8",
    "C4xC4",
    "C2xC2xC4",
    "C2xC2xC2xC2",
    "C3xC2xC2",
    "C3xC3xC2",
    "C3xC3xC4",
    "C2xC10",
    "C2xC12",
    "C2xC2xC6",
    "S3xC3",
    "S3xS3",
    "D8xC2",
    "Q8xC2",
    "A4xC2",
    "Q8oC4",
    "D8oC4",
    "Q8oQ8",
    "D8oD8",
];

/// The fixed catalog, in a deterministic order.
pub fn entries() -> Vec<CatalogEntry> {
    let mut names: Vec<String> = Vec::new();
    names.extend((1..=64).map(|n| format!("C{n}")));
    names.extend((3..=20).map(|n| format!("D{}", 2 * n)));
    names.extend(["Q8", "Q16", "S3", "S4", "S5", "A4", "A5", "A6", "PSL27"].map(String::from));
    names.extend(PRODUCTS.iter().map(|s| s.to_string()));
    names
        .into_iter()
        .map(|name| {
            let family = parse_name(&name).expect("catalog names parse");
            CatalogEntry { name, family }
        })
        .collect()
}

/// Catalog entries of order at most `max_order`.
pub fn entries_up_to(max_order: usize) -> Vec<CatalogEntry> {
    entries()
        .into_iter()
        .filter(|e| e.order() <= max_order)
        .collect()
}

/// Builds a group by name; any well-formed product expression is accepted,
/// not only the names listed in [`entries`].
pub fn lookup(name: &str) -> Result<GroupTable> {
    parse_name(name)?.build()
}

pub fn parse_name(name: &str) -> Result<Family> {
    let upper = name.trim().to_ascii_uppercase();
    if upper.is_empty() {
        return Err(Error::Parse("empty group name".into()));
    }
    if let Some((a, b)) = upper.split_once('O') {
        if b.contains('O') {
            return Err(Error::Parse(format!(
                "only one central product allowed: {name}"
            )));
        }
        return Ok(Family::Central(
            Box::new(parse_name(a)?),
            Box::new(parse_name(b)?),
        ));
    }
    if upper.contains('X') {
        let parts = upper
            .split('X')
            .map(parse_atom)
            .collect::<Result<Vec<_>>>()?;
        return Ok(Family::Direct(parts));
    }
    parse_atom(&upper)
}

fn parse_atom(s: &str) -> Result<Family> {
    let bad = || Error::Parse(format!("unknown group name '{s}'"));
    if s == "PSL27" || s == "PSL(2,7)" {
        return Ok(Family::Psl27);
    }
    if s == "V4" {
        return Ok(Family::Direct(vec![Family::Cyclic(2), Family::Cyclic(2)]));
    }
    let (head, digits) = s.split_at(s.find(|c: char| c.is_ascii_digit()).ok_or_else(bad)?);
    let k: usize = digits.parse().map_err(|_| bad())?;
    match head {
        "C" if k >= 1 => Ok(Family::Cyclic(k)),
        "D" if k >= 6 && k % 2 == 0 => Ok(Family::Dihedral(k / 2)),
        "Q" if k >= 8 && k % 4 == 0 => Ok(Family::Dicyclic(k / 4)),
        "S" if (1..=7).contains(&k) => Ok(Family::Symmetric(k)),
        "A" if (3..=7).contains(&k) => Ok(Family::Alternating(k)),
        _ => Err(bad()),
    }
}

fn unique_central_involution(g: &GroupTable) -> Result<usize> {
    let invs: Vec<usize> = g
        .center()
        .iter()
        .filter(|&z| z != 0 && g.element_order(z) == 2)
        .collect();
    match invs.as_slice() {
        [z] => Ok(*z),
        _ => Err(Error::HypothesisViolated(format!(
            "central product needs a unique central involution, found {}",
            invs.len()
        ))),
    }
}

fn power_label(base: &str, k: usize) -> String {
    match k {
        0 => String::new(),
        1 => base.to_string(),
        _ => format!("{base}^{k}"),
    }
}

/// `C_n = <z>`, element `i` is `z^i`.
pub fn cyclic(n: usize) -> GroupTable {
    let mult = (0..n * n).map(|c| ((c / n + c % n) % n) as u32).collect();
    let labels = (0..n)
        .map(|i| {
            if i == 0 {
                "1".to_string()
            } else {
                power_label("z", i)
            }
        })
        .collect();
    GroupTable::from_trusted(n, mult, labels)
}

/// Dihedral group of order `2n`: element `i + n*j` is `r^i s^j`.
pub fn dihedral(n: usize) -> GroupTable {
    let size = 2 * n;
    let decode = |x: usize| (x % n, x / n);
    let mut mult = vec![0u32; size * size];
    for a in 0..size {
        let (i, j) = decode(a);
        for b in 0..size {
            let (k, l) = decode(b);
            // r^i s^j r^k s^l = r^(i + (-1)^j k) s^(j+l)
            let rot = if j == 0 { (i + k) % n } else { (i + n - k) % n };
            mult[a * size + b] = (rot + n * ((j + l) % 2)) as u32;
        }
    }
    let labels = (0..size)
        .map(|x| {
            let (i, j) = decode(x);
            let s = format!("{}{}", power_label("r", i), if j == 1 { "s" } else { "" });
            if s.is_empty() {
                "1".to_string()
            } else {
                s
            }
        })
        .collect();
    GroupTable::from_trusted(size, mult, labels)
}

/// Dicyclic group of order `4n`: `a^(2n) = 1`, `x^2 = a^n`, `x^-1 a x = a^-1`.
/// Element `p + 2n*q` is `a^p x^q`. For `n = 2` this is Q8, labelled with
/// quaternion units (`a = i`, `x = j`).
pub fn dicyclic(n: usize) -> GroupTable {
    let m = 2 * n;
    let size = 2 * m;
    let decode = |x: usize| (x % m, x / m);
    let mut mult = vec![0u32; size * size];
    for a in 0..size {
        let (p, q) = decode(a);
        for b in 0..size {
            let (r, s) = decode(b);
            let (e, t) = match (q, s) {
                (0, _) => ((p + r) % m, s),
                (_, 0) => ((p + m - r) % m, 1),
                _ => ((p + m - r + n) % m, 0),
            };
            mult[a * size + b] = (e + m * t) as u32;
        }
    }
    let labels = if n == 2 {
        ["1", "i", "-1", "-i", "j", "k", "-j", "-k"]
            .iter()
            .map(|s| s.to_string())
            .collect()
    } else {
        (0..size)
            .map(|x| {
                let (p, q) = decode(x);
                let s = format!("{}{}", power_label("a", p), if q == 1 { "x" } else { "" });
                if s.is_empty() {
                    "1".to_string()
                } else {
                    s
                }
            })
            .collect()
    };
    GroupTable::from_trusted(size, mult, labels)
}

pub fn symmetric(n: usize) -> Result<GroupTable> {
    match n {
        0 | 1 => Ok(cyclic(1)),
        2 => group_from_permutations(&[vec![1, 0]]),
        _ => {
            let transposition: Vec<usize> = (0..n)
                .map(|i| match i {
                    0 => 1,
                    1 => 0,
                    _ => i,
                })
                .collect();
            let cycle: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
            group_from_permutations(&[transposition, cycle])
        }
    }
}

pub fn alternating(n: usize) -> Result<GroupTable> {
    if n < 3 {
        return Ok(cyclic(1));
    }
    let gens: Vec<Vec<usize>> = (2..n)
        .map(|k| {
            (0..n)
                .map(|i| match i {
                    0 => 1,
                    1 => k,
                    _ if i == k => 0,
                    _ => i,
                })
                .collect()
        })
        .collect();
    group_from_permutations(&gens)
}

/// PSL(2,7) acting on the projective line over F_7 (point 7 is infinity),
/// generated by `x -> x + 1` and `x -> -1/x`.
pub fn psl27() -> Result<GroupTable> {
    let translate: Vec<usize> = (0..8)
        .map(|x| if x == 7 { 7 } else { (x + 1) % 7 })
        .collect();
    let inverse_mod7 = [0, 1, 4, 5, 2, 3, 6];
    let negate_inverse: Vec<usize> = (0..8)
        .map(|x| match x {
            0 => 7,
            7 => 0,
            _ => (7 - inverse_mod7[x]) % 7,
        })
        .collect();
    group_from_permutations(&[translate, negate_inverse])
}
