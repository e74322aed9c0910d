//! Finite groups given by a multiplication table over a fixed listing.
//!
//! Every group here is a table `g_i * g_j = g_{table[i][j]}` over indices
//! `0..n`, with the identity always at index 0. The listing (the order of the
//! indices) matters: group ring matrices are only defined relative to it.
//!
//! Built-in families use these listings:
//!
//! * `C_n`: `1, g, g², …, gⁿ⁻¹`
//! * `D_2n`: `1, a, …, aⁿ⁻¹, b, ab, …, aⁿ⁻¹b` with `bab = a⁻¹`
//! * `Q_8`: `1, a, a², a³, b, ab, a²b, a³b` with `a² = b²`, `bab⁻¹ = a⁻¹`
//! * `K × H`: the listing of `K` repeated for `h⁰, h¹, …`, later factors
//!   outermost, so `C3 × C3` lists as `1, g, g², h, hg, hg², h², h²g, h²g²`.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Generator names handed out to the factors of an all-cyclic product.
const PRODUCT_GENERATORS: [&str; 15] = [
    "g", "h", "k", "l", "m", "p", "q", "r", "s", "t", "u", "v", "w", "y", "z",
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupSpec {
    /// Cyclic group of the given order.
    Cyclic(usize),
    /// Dihedral group of the given order `2n`.
    Dihedral(usize),
    /// Quaternion group; only order 8 exists as a built-in.
    Quaternion(usize),
    /// Direct product, later factors outermost in the listing.
    Product(Vec<GroupSpec>),
    /// A user-supplied table file.
    Table(PathBuf),
}

impl GroupSpec {
    /// Flattened list of product factors (a non-product is its own single factor).
    pub fn factors(&self) -> Vec<GroupSpec> {
        match self {
            GroupSpec::Product(parts) => parts.iter().flat_map(|p| p.factors()).collect(),
            other => vec![other.clone()],
        }
    }

    /// Cyclic orders when every factor is cyclic.
    pub fn cyclic_orders(&self) -> Option<Vec<usize>> {
        self.factors()
            .iter()
            .map(|f| match f {
                GroupSpec::Cyclic(n) => Some(*n),
                _ => None,
            })
            .collect()
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::Cyclic(n) => write!(f, "C{n}"),
            GroupSpec::Dihedral(n) => write!(f, "D{n}"),
            GroupSpec::Quaternion(n) => write!(f, "Q{n}"),
            GroupSpec::Product(parts) => {
                let names: Vec<String> = parts.iter().map(|p| p.to_string()).collect();
                write!(f, "{}", names.join("x"))
            }
            GroupSpec::Table(path) => write!(f, "table:{}", path.display()),
        }
    }
}

impl FromStr for GroupSpec {
    type Err = Error;

    /// Parses `C12`, `D6`, `Q8` (or `K8`), `C3xC3`, `table:<path>`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(path) = s.strip_prefix("table:") {
            if path.is_empty() {
                return Err(Error::Spec("table: needs a path".into()));
            }
            return Ok(GroupSpec::Table(PathBuf::from(path)));
        }
        let parts: Vec<&str> = s.split(['x', '×', '*']).map(str::trim).collect();
        if parts.len() > 1 {
            let factors = parts
                .iter()
                .map(|p| parse_factor(p))
                .collect::<Result<Vec<_>>>()?;
            return Ok(GroupSpec::Product(factors));
        }
        parse_factor(s)
    }
}

fn parse_factor(s: &str) -> Result<GroupSpec> {
    let mut chars = s.chars();
    let kind = chars
        .next()
        .ok_or_else(|| Error::Spec("empty group spec".into()))?;
    let order: usize = chars
        .as_str()
        .parse()
        .map_err(|_| Error::Spec(format!("cannot read order in {s:?}")))?;
    match kind.to_ascii_uppercase() {
        'C' => Ok(GroupSpec::Cyclic(order)),
        'D' => Ok(GroupSpec::Dihedral(order)),
        'Q' | 'K' => Ok(GroupSpec::Quaternion(order)),
        _ => Err(Error::Spec(format!("unknown group family in {s:?}"))),
    }
}

/// A finite group as a multiplication table over a fixed listing.
#[derive(Debug, Clone)]
pub struct FiniteGroup {
    order: usize,
    table: Vec<usize>,
    labels: Vec<String>,
    inverses: Vec<usize>,
    spec: Option<GroupSpec>,
}

impl PartialEq for FiniteGroup {
    /// Two groups are equal when their tables agree; labels are cosmetic.
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order && self.table == other.table
    }
}

impl FiniteGroup {
    /// Builds a group from a user table, checking every group axiom.
    ///
    /// The table must have the identity at index 0, be a Latin square and be
    /// associative (an O(n³) scan).
    pub fn from_table(labels: Vec<String>, rows: Vec<Vec<usize>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::Structure("group must have at least one element".into()));
        }
        if labels.len() != n {
            return Err(Error::Structure(format!(
                "{} labels for a table of order {n}",
                labels.len()
            )));
        }
        let mut table = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Structure(format!(
                    "row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            if let Some(&bad) = row.iter().find(|&&x| x >= n) {
                return Err(Error::Structure(format!("row {i} contains out-of-range index {bad}")));
            }
            table.extend_from_slice(row);
        }
        for j in 0..n {
            if table[j] != j || table[j * n] != j {
                return Err(Error::Structure(format!(
                    "index 0 must be the identity, but it fails on element {j} ({})",
                    labels[j]
                )));
            }
        }
        for i in 0..n {
            let mut row_seen = vec![false; n];
            let mut col_seen = vec![false; n];
            for j in 0..n {
                let r = table[i * n + j];
                let c = table[j * n + i];
                if std::mem::replace(&mut row_seen[r], true) {
                    return Err(Error::Structure(format!(
                        "not a Latin square: row {i} ({}) repeats {}",
                        labels[i], labels[r]
                    )));
                }
                if std::mem::replace(&mut col_seen[c], true) {
                    return Err(Error::Structure(format!(
                        "not a Latin square: column {i} ({}) repeats {}",
                        labels[i], labels[c]
                    )));
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                let ij = table[i * n + j];
                for k in 0..n {
                    let jk = table[j * n + k];
                    if table[ij * n + k] != table[i * n + jk] {
                        return Err(Error::Structure(format!(
                            "not associative: ({a}·{b})·{c} ≠ {a}·({b}·{c}) for the triple ({i}, {j}, {k})",
                            a = labels[i],
                            b = labels[j],
                            c = labels[k]
                        )));
                    }
                }
            }
        }
        Ok(Self::from_valid_table(labels, table, None))
    }

    fn from_valid_table(labels: Vec<String>, table: Vec<usize>, spec: Option<GroupSpec>) -> Self {
        let n = labels.len();
        let mut inverses = vec![0; n];
        for (i, inv) in inverses.iter_mut().enumerate() {
            *inv = (0..n)
                .find(|&j| table[i * n + j] == 0)
                .expect("Latin square has an inverse in every row");
        }
        Self {
            order: n,
            table,
            labels,
            inverses,
            spec,
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        0
    }

    /// Index of `g_i · g_j`.
    #[inline]
    pub fn mul(&self, i: usize, j: usize) -> usize {
        self.table[i * self.order + j]
    }

    #[inline]
    pub fn inverse(&self, i: usize) -> usize {
        self.inverses[i]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    /// The built-in family this group came from, if any.
    pub fn spec(&self) -> Option<&GroupSpec> {
        self.spec.as_ref()
    }

    pub fn table_rows(&self) -> Vec<Vec<usize>> {
        self.table.chunks(self.order).map(<[usize]>::to_vec).collect()
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|i| (0..i).all(|j| self.mul(i, j) == self.mul(j, i)))
    }

    /// Looks up an element by label. Accepts `a^2b` as well as `a²b`, and
    /// `#k` for the raw index.
    pub fn find_element(&self, name: &str) -> Option<usize> {
        let name = name.trim();
        if let Some(idx) = name.strip_prefix('#') {
            return idx.parse().ok().filter(|&i| i < self.order);
        }
        let normalized = normalize_label(name);
        self.labels.iter().position(|l| *l == normalized)
    }

    /// The group with the listing permuted: new element `i` is old element
    /// `perm[i]`. The identity must stay first.
    pub fn relabel(&self, perm: &[usize]) -> Result<FiniteGroup> {
        let n = self.order;
        if perm.len() != n {
            return Err(Error::dimension(n, perm.len()));
        }
        let mut position = vec![usize::MAX; n];
        for (new, &old) in perm.iter().enumerate() {
            if old >= n || position[old] != usize::MAX {
                return Err(Error::Structure("relabeling is not a permutation".into()));
            }
            position[old] = new;
        }
        if perm[0] != 0 {
            return Err(Error::Structure("relabeling must keep the identity first".into()));
        }
        let mut table = vec![0; n * n];
        for i in 0..n {
            for j in 0..n {
                table[i * n + j] = position[self.mul(perm[i], perm[j])];
            }
        }
        let labels = perm.iter().map(|&old| self.labels[old].clone()).collect();
        Ok(Self::from_valid_table(labels, table, None))
    }
}

/// Exponents written with superscript digits, as in the group labels.
fn superscript(k: usize) -> String {
    const DIGITS: [char; 10] = ['⁰', '¹', '²', '³', '⁴', '⁵', '⁶', '⁷', '⁸', '⁹'];
    k.to_string()
        .chars()
        .map(|c| DIGITS[c.to_digit(10).unwrap() as usize])
        .collect()
}

fn power_label(generator: &str, k: usize) -> String {
    match k {
        0 => String::new(),
        1 => generator.to_string(),
        _ => format!("{generator}{}", superscript(k)),
    }
}

fn or_identity(s: String) -> String {
    if s.is_empty() {
        "1".to_string()
    } else {
        s
    }
}

/// Rewrites `x^12` as `x¹²` so ASCII input matches the stored labels.
fn normalize_label(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    let mut chars = s.chars().filter(|c| !c.is_whitespace()).peekable();
    while let Some(c) = chars.next() {
        if c == '^' {
            let mut digits = String::new();
            while let Some(d) = chars.peek().filter(|d| d.is_ascii_digit()) {
                digits.push(*d);
                chars.next();
            }
            match digits.parse::<usize>() {
                Ok(k) => out.push_str(&superscript(k)),
                Err(_) => out.push('^'),
            }
        } else {
            out.push(c);
        }
    }
    out
}

fn cyclic_group(n: usize, generator: &str) -> (Vec<String>, Vec<usize>) {
    let labels = (0..n).map(|k| or_identity(power_label(generator, k))).collect();
    let mut table = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            table.push((i + j) % n);
        }
    }
    (labels, table)
}

/// `a^i b^s` is index `i + s·n`. `twist` adds `a^{twist}` when `b·b` occurs
/// (0 for dihedral, 2 for quaternion).
fn metacyclic_group(n: usize, twist: usize) -> (Vec<String>, Vec<usize>) {
    let mut labels: Vec<String> = (0..n).map(|k| or_identity(power_label("a", k))).collect();
    labels.extend((0..n).map(|k| format!("{}b", power_label("a", k))));
    let m = 2 * n;
    let mut table = Vec::with_capacity(m * m);
    for x in 0..m {
        let (i, s) = (x % n, x / n);
        for y in 0..m {
            let (j, t) = (y % n, y / n);
            let mut e = if s == 0 { i + j } else { i + n - j };
            if s == 1 && t == 1 {
                e += twist;
            }
            table.push(e % n + n * (s ^ t));
        }
    }
    (labels, table)
}

/// Builds a group from a spec, using the fixed built-in listings.
pub fn build_group(spec: &GroupSpec) -> Result<FiniteGroup> {
    match spec {
        GroupSpec::Cyclic(n) => {
            if *n == 0 {
                return Err(Error::Spec("cyclic order must be at least 1".into()));
            }
            let (labels, table) = cyclic_group(*n, "g");
            Ok(FiniteGroup::from_valid_table(labels, table, Some(spec.clone())))
        }
        GroupSpec::Dihedral(m) => {
            if *m < 2 || m % 2 != 0 {
                return Err(Error::Spec(format!(
                    "dihedral order must be even and at least 2, got {m}"
                )));
            }
            let (labels, table) = metacyclic_group(m / 2, 0);
            Ok(FiniteGroup::from_valid_table(labels, table, Some(spec.clone())))
        }
        GroupSpec::Quaternion(m) => {
            if *m != 8 {
                return Err(Error::Spec(format!(
                    "only the quaternion group of order 8 is built in, got order {m}"
                )));
            }
            let (labels, table) = metacyclic_group(4, 2);
            Ok(FiniteGroup::from_valid_table(labels, table, Some(spec.clone())))
        }
        GroupSpec::Product(_) => build_product(spec),
        GroupSpec::Table(path) => crate::io::read_group_table(path),
    }
}

fn build_product(spec: &GroupSpec) -> Result<FiniteGroup> {
    let factor_specs = spec.factors();
    if factor_specs.is_empty() {
        return Err(Error::Spec("empty product".into()));
    }
    let factors = factor_specs
        .iter()
        .map(build_group)
        .collect::<Result<Vec<_>>>()?;
    let orders: Vec<usize> = factors.iter().map(FiniteGroup::order).collect();
    let n: usize = orders.iter().product();
    let digits_of = |mut x: usize| -> Vec<usize> {
        orders
            .iter()
            .map(|&o| {
                let d = x % o;
                x /= o;
                d
            })
            .collect()
    };
    let index_of = |digits: &[usize]| -> usize {
        digits
            .iter()
            .zip(&orders)
            .rev()
            .fold(0, |acc, (&d, &o)| acc * o + d)
    };

    let all_cyclic = spec.cyclic_orders().is_some();
    let labels: Vec<String> = (0..n)
        .map(|x| {
            let digits = digits_of(x);
            if all_cyclic {
                let word: String = digits
                    .iter()
                    .enumerate()
                    .rev()
                    .map(|(t, &d)| {
                        let generator = PRODUCT_GENERATORS
                            .get(t)
                            .map(|g| g.to_string())
                            .unwrap_or_else(|| format!("g{}", t + 1));
                        power_label(&generator, d)
                    })
                    .collect();
                or_identity(word)
            } else {
                let parts: Vec<&str> = digits
                    .iter()
                    .zip(&factors)
                    .map(|(&d, f)| f.label(d))
                    .collect();
                format!("({})", parts.join(","))
            }
        })
        .collect();

    let mut table = Vec::with_capacity(n * n);
    for x in 0..n {
        let dx = digits_of(x);
        for y in 0..n {
            let dy = digits_of(y);
            let prod: Vec<usize> = factors
                .iter()
                .zip(dx.iter().zip(&dy))
                .map(|(f, (&a, &b))| f.mul(a, b))
                .collect();
            table.push(index_of(&prod));
        }
    }
    Ok(FiniteGroup::from_valid_table(
        labels,
        table,
        Some(GroupSpec::Product(factor_specs)),
    ))
}

/// Index of the inverse of element `i`.
pub fn element_inverse(group: &FiniteGroup, i: usize) -> usize {
    group.inverse(i)
}

/// Partition of a group into conjugacy classes, ordered by smallest member.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConjugacyPartition {
    classes: Vec<Vec<usize>>,
    class_of: Vec<usize>,
}

impl ConjugacyPartition {
    /// Number of classes (`r`).
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn class(&self, j: usize) -> &[usize] {
        &self.classes[j]
    }

    /// Smallest index in class `j`.
    pub fn representative(&self, j: usize) -> usize {
        self.classes[j][0]
    }

    pub fn size(&self, j: usize) -> usize {
        self.classes[j].len()
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.classes.iter().map(Vec::len).collect()
    }

    /// Class containing element `g`.
    pub fn class_of(&self, g: usize) -> usize {
        self.class_of[g]
    }
}

pub fn conjugacy_classes(group: &FiniteGroup) -> ConjugacyPartition {
    let n = group.order();
    let mut class_of = vec![usize::MAX; n];
    let mut classes = Vec::new();
    for g in 0..n {
        if class_of[g] != usize::MAX {
            continue;
        }
        let id = classes.len();
        let mut members = Vec::new();
        for x in 0..n {
            let c = group.mul(group.mul(group.inverse(x), g), x);
            if class_of[c] == usize::MAX {
                class_of[c] = id;
                members.push(c);
            }
        }
        members.sort_unstable();
        classes.push(members);
    }
    ConjugacyPartition { classes, class_of }
}

/// The matrix of the group: entry `(i, j)` is the index of `g_i⁻¹ g_j`.
pub fn group_matrix(group: &FiniteGroup) -> Vec<Vec<usize>> {
    let n = group.order();
    (0..n)
        .map(|i| {
            let inv = group.inverse(i);
            (0..n).map(|j| group.mul(inv, j)).collect()
        })
        .collect()
}
