//! Character tables and complete orthogonal sets of primitive central
//! idempotents of ℂG.
//!
//! Character tables come from built-in formulas for the standard families,
//! from a file, or numerically from the class algebra: the class-sum
//! structure-constant matrices commute, and their common eigenvectors are the
//! central characters `ω_i(C_j) = |C_j| χ_i(g_j) / d_i`.
//!
//! The idempotent of character `χ_i` is `e_i = (d_i/|G|) Σ_g conj(χ_i(g)) g`.

use std::cmp::Ordering;
use std::f64::consts::PI;
use std::fmt;
use std::path::PathBuf;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::group::{conjugacy_classes, ConjugacyPartition, FiniteGroup, GroupSpec};
use crate::linalg::CMatrix;
use crate::ring::{involution, ring_multiply, GroupRingElement};

/// Tolerance the character table invariants are checked at.
pub const CHARACTER_TOL: f64 = 1e-8;
/// Tolerance idempotent sets are certified at.
pub const IDEMPOTENT_TOL: f64 = 1e-9;
/// Allowed distance of a trace from the nearest integer.
pub const TRACE_INTEGRALITY_TOL: f64 = 1e-6;

/// Relative eigenvalue gap below which two eigenvalues count as one cluster.
const CLUSTER_GAP: f64 = 1e-6;

/// Irreducible character values on conjugacy classes.
#[derive(Debug, Clone)]
pub struct CharacterTable {
    values: CMatrix,
    classes: ConjugacyPartition,
    degrees: Vec<usize>,
    group_order: usize,
}

impl CharacterTable {
    /// Wraps an `r × r` table whose columns follow `classes`, checking every
    /// invariant at [`CHARACTER_TOL`].
    pub fn new(group_order: usize, classes: ConjugacyPartition, values: CMatrix) -> Result<Self> {
        let r = classes.len();
        if values.shape() != (r, r) {
            return Err(Error::dimension(
                format!("{r}x{r}"),
                format!("{}x{}", values.nrows(), values.ncols()),
            ));
        }
        let mut degrees = Vec::with_capacity(r);
        for i in 0..r {
            let d = values[(i, 0)];
            let rounded = d.re.round();
            if rounded < 1.0 || (d - Complex64::new(rounded, 0.0)).norm() > CHARACTER_TOL {
                return Err(Error::Verification {
                    what: format!("degree of character {i}"),
                    residual: (d - Complex64::new(rounded.max(1.0), 0.0)).norm(),
                    tol: CHARACTER_TOL,
                });
            }
            degrees.push(rounded as usize);
        }
        let table = Self {
            values,
            classes,
            degrees,
            group_order,
        };
        table.validate(CHARACTER_TOL)?;
        Ok(table)
    }

    /// Checks row orthogonality, the trivial first row and `Σ d_i² = |G|`.
    pub fn validate(&self, tol: f64) -> Result<()> {
        let r = self.len();
        let n = self.group_order as f64;
        let sizes = self.classes.sizes();
        let mut worst: f64 = 0.0;
        for i in 0..r {
            for k in 0..r {
                let inner: Complex64 = (0..r)
                    .map(|j| self.values[(i, j)] * self.values[(k, j)].conj() * sizes[j] as f64)
                    .sum();
                let expected = if i == k { n } else { 0.0 };
                worst = worst.max((inner - Complex64::new(expected, 0.0)).norm() / n);
            }
        }
        if worst > tol {
            return Err(Error::Verification {
                what: "character row orthogonality".into(),
                residual: worst,
                tol,
            });
        }
        let trivial = (0..r)
            .map(|j| (self.values[(0, j)] - Complex64::new(1.0, 0.0)).norm())
            .fold(0.0, f64::max);
        if trivial > tol {
            return Err(Error::Verification {
                what: "first row is the trivial character".into(),
                residual: trivial,
                tol,
            });
        }
        let sum_sq: usize = self.degrees.iter().map(|d| d * d).sum();
        if sum_sq != self.group_order {
            return Err(Error::Verification {
                what: format!("sum of squared degrees ({sum_sq}) equals |G|"),
                residual: (sum_sq as f64 - n).abs(),
                tol: 0.0,
            });
        }
        Ok(())
    }

    /// Number of irreducible characters (and classes).
    pub fn len(&self) -> usize {
        self.degrees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.degrees.is_empty()
    }

    pub fn values(&self) -> &CMatrix {
        &self.values
    }

    /// `χ_i` on class `j`.
    pub fn value(&self, i: usize, j: usize) -> Complex64 {
        self.values[(i, j)]
    }

    /// `χ_i(g)` for an element index.
    pub fn character_at(&self, i: usize, g: usize) -> Complex64 {
        self.values[(i, self.classes.class_of(g))]
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    pub fn classes(&self) -> &ConjugacyPartition {
        &self.classes
    }

    pub fn class_sizes(&self) -> Vec<usize> {
        self.classes.sizes()
    }

    pub fn representatives(&self) -> Vec<usize> {
        (0..self.len()).map(|j| self.classes.representative(j)).collect()
    }

    pub fn group_order(&self) -> usize {
        self.group_order
    }

    /// Largest entrywise distance to `other` after the best row matching,
    /// or `None` when no one-to-one matching within `tol` exists.
    pub fn distance_up_to_row_order(&self, other: &CharacterTable, tol: f64) -> Option<f64> {
        if self.values.shape() != other.values.shape() || self.classes != other.classes {
            return None;
        }
        let r = self.len();
        let mut used = vec![false; r];
        let mut worst: f64 = 0.0;
        for i in 0..r {
            let best = (0..r)
                .filter(|&k| !used[k])
                .map(|k| {
                    let d = (0..r)
                        .map(|j| (self.values[(i, j)] - other.values[(k, j)]).norm())
                        .fold(0.0, f64::max);
                    (k, d)
                })
                .min_by(|a, b| a.1.total_cmp(&b.1))?;
            if best.1 > tol {
                return None;
            }
            used[best.0] = true;
            worst = worst.max(best.1);
        }
        Some(worst)
    }
}

/// Where a character table comes from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CharacterSource {
    /// Closed forms for `C_n`, `D_2n`, `Q_8` and their direct products.
    Builtin,
    /// Simultaneous eigenvectors of the class-sum matrices.
    Numeric { seed: u64 },
    File(PathBuf),
}

/// Structure constants of the class algebra. Matrix `M_j` has entry
/// `(l, m) = a_{jlm}` where `C_j · C_l = Σ_m a_{jlm} C_m`.
pub fn class_sum_matrices(group: &FiniteGroup, classes: &ConjugacyPartition) -> Vec<DMatrix<f64>> {
    let r = classes.len();
    (0..r)
        .map(|j| {
            DMatrix::from_fn(r, r, |l, m| {
                let z = classes.representative(m);
                // Count x ∈ C_j with x⁻¹z ∈ C_l, i.e. pairs (x, y) with xy = z.
                classes
                    .class(j)
                    .iter()
                    .filter(|&&x| classes.class_of(group.mul(group.inverse(x), z)) == l)
                    .count() as f64
            })
        })
        .collect()
}

pub fn character_table(group: &FiniteGroup, source: &CharacterSource) -> Result<CharacterTable> {
    match source {
        CharacterSource::Builtin => builtin_character_table(group),
        CharacterSource::Numeric { seed } => numeric_character_table(group, *seed),
        CharacterSource::File(path) => crate::io::read_character_table(path, group),
    }
}

fn root_of_unity(k: usize, n: usize) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI * ((k % n) as f64) / n as f64)
}

fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn sign(k: usize) -> f64 {
    if k % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Characters of a built-in family as functions on elements, one row per
/// character, in the conventional order.
fn builtin_element_characters(spec: &GroupSpec) -> Result<Vec<Vec<Complex64>>> {
    match spec {
        GroupSpec::Cyclic(n) => Ok((0..*n)
            .map(|k| (0..*n).map(|j| root_of_unity(j * k, *n)).collect())
            .collect()),
        GroupSpec::Dihedral(m) => {
            let n = m / 2;
            let split = |x: usize| (x % n, x / n);
            let mut rows: Vec<Vec<Complex64>> = vec![
                vec![real(1.0); *m],
                (0..*m).map(|x| real(sign(split(x).1))).collect(),
            ];
            if n % 2 == 0 {
                rows.push((0..*m).map(|x| real(sign(split(x).0))).collect());
                rows.push((0..*m).map(|x| { let (i, s) = split(x); real(sign(i + s)) }).collect());
            }
            for h in 1..=(n - 1) / 2 {
                rows.push(
                    (0..*m)
                        .map(|x| match split(x) {
                            (i, 0) => real(2.0 * (2.0 * PI * ((h * i) % n) as f64 / n as f64).cos()),
                            _ => real(0.0),
                        })
                        .collect(),
                );
            }
            Ok(rows)
        }
        GroupSpec::Quaternion(8) => {
            let split = |x: usize| (x % 4, x / 4);
            Ok(vec![
                vec![real(1.0); 8],
                (0..8).map(|x| real(sign(split(x).1))).collect(),
                (0..8).map(|x| real(sign(split(x).0))).collect(),
                (0..8).map(|x| { let (i, s) = split(x); real(sign(i + s)) }).collect(),
                (0..8)
                    .map(|x| match split(x) {
                        (0, 0) => real(2.0),
                        (2, 0) => real(-2.0),
                        _ => real(0.0),
                    })
                    .collect(),
            ])
        }
        GroupSpec::Product(_) => {
            let factors = spec
                .factors()
                .iter()
                .map(builtin_element_characters)
                .collect::<Result<Vec<_>>>()?;
            // Characters and elements both indexed mixed-radix, later factors outermost.
            let mut rows: Vec<Vec<Complex64>> = vec![vec![real(1.0)]];
            for f in &factors {
                let size = f[0].len();
                let mut next = Vec::with_capacity(rows.len() * f.len());
                for outer in f {
                    for inner in &rows {
                        let mut row = Vec::with_capacity(inner.len() * size);
                        for &y in outer {
                            row.extend(inner.iter().map(|&x| x * y));
                        }
                        next.push(row);
                    }
                }
                rows = next;
            }
            Ok(rows)
        }
        other => Err(Error::NoBuiltin(other.to_string())),
    }
}

fn builtin_character_table(group: &FiniteGroup) -> Result<CharacterTable> {
    let spec = group
        .spec()
        .ok_or_else(|| Error::NoBuiltin("a user-supplied table".into()))?;
    let rows = builtin_element_characters(spec)?;
    let classes = conjugacy_classes(group);
    let r = classes.len();
    if rows.len() != r {
        return Err(Error::Internal(format!(
            "{} built-in characters for {r} classes",
            rows.len()
        )));
    }
    let values = CMatrix::from_fn(r, r, |i, j| rows[i][classes.representative(j)]);
    CharacterTable::new(group.order(), classes, values)
}

/// Random Hermitian `a(S + Sᵀ) + iβ(S − Sᵀ)` from the normal combination
/// `S = Σ c_j S_j`. Its eigenvectors are those of `S`, and its eigenvalue
/// `2(Re λ − β Im λ)` separates conjugate pairs.
fn random_hermitian(scaled: &[DMatrix<f64>], rng: &mut ChaCha8Rng) -> CMatrix {
    let r = scaled[0].nrows();
    let mut s = DMatrix::<f64>::zeros(r, r);
    for m in scaled {
        s += m * rng.gen_range(-1.0..1.0);
    }
    let beta = rng.gen_range(0.5..1.5);
    let sym = &s + s.transpose();
    let skew = &s - s.transpose();
    CMatrix::from_fn(r, r, |i, j| Complex64::new(sym[(i, j)], beta * skew[(i, j)]))
}

/// Groups sorted eigenvalue indices into runs whose consecutive gaps are
/// below `CLUSTER_GAP` times the spectral scale.
fn clusters(eigenvalues: &[f64]) -> Vec<Vec<usize>> {
    let mut order: Vec<usize> = (0..eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eigenvalues[a].total_cmp(&eigenvalues[b]));
    let scale = eigenvalues.iter().map(|x| x.abs()).fold(1.0, f64::max);
    let mut out: Vec<Vec<usize>> = Vec::new();
    for (pos, &idx) in order.iter().enumerate() {
        let joins = pos > 0 && eigenvalues[idx] - eigenvalues[order[pos - 1]] < CLUSTER_GAP * scale;
        match out.last_mut() {
            Some(run) if joins => run.push(idx),
            _ => out.push(vec![idx]),
        }
    }
    out
}

/// Orthonormal common eigenvectors (columns) of the normalized class matrices.
fn common_eigenvectors(scaled: &[DMatrix<f64>], seed: u64) -> Result<CMatrix> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let h = random_hermitian(scaled, &mut rng);
    let eig = h.symmetric_eigen();
    let mut vectors = eig.eigenvectors;
    let values: Vec<f64> = eig.eigenvalues.iter().copied().collect();

    let degenerate: Vec<Vec<usize>> = clusters(&values).into_iter().filter(|c| c.len() > 1).collect();
    if !degenerate.is_empty() {
        // Split each cluster with an independent second combination.
        let h2 = random_hermitian(scaled, &mut rng);
        for cluster in degenerate {
            let basis = CMatrix::from_fn(vectors.nrows(), cluster.len(), |i, k| {
                vectors[(i, cluster[k])]
            });
            let restricted = basis.adjoint() * &h2 * &basis;
            let sub = restricted.symmetric_eigen();
            let sub_values: Vec<f64> = sub.eigenvalues.iter().copied().collect();
            if clusters(&sub_values).len() < cluster.len() {
                return Err(Error::EigenClustering {
                    seed,
                    detail: format!("{} eigenvalues stay clustered after a second combination", cluster.len()),
                });
            }
            let rotated = &basis * sub.eigenvectors;
            for (k, &col) in cluster.iter().enumerate() {
                vectors.set_column(col, &rotated.column(k));
            }
        }
    }
    Ok(vectors)
}

fn numeric_character_table(group: &FiniteGroup, seed: u64) -> Result<CharacterTable> {
    let classes = conjugacy_classes(group);
    let r = classes.len();
    let n = group.order() as f64;
    let sizes: Vec<f64> = classes.sizes().iter().map(|&s| s as f64).collect();
    let structure = class_sum_matrices(group, &classes);

    // D^{-1/2} M_j D^{1/2} is normal because the scaled characters are orthogonal.
    let scaled: Vec<DMatrix<f64>> = structure
        .iter()
        .map(|m| DMatrix::from_fn(r, r, |l, k| m[(l, k)] * (sizes[k] / sizes[l]).sqrt()))
        .collect();
    let vectors = common_eigenvectors(&scaled, seed)?;

    let mut rows: Vec<(usize, Vec<Complex64>)> = Vec::with_capacity(r);
    for col in 0..r {
        let raw: Vec<Complex64> = (0..r).map(|m| vectors[(m, col)] * sizes[m].sqrt()).collect();
        if raw[0].norm() < 1e-12 {
            return Err(Error::EigenClustering {
                seed,
                detail: "eigenvector vanishes on the identity class".into(),
            });
        }
        let omega: Vec<Complex64> = raw.iter().map(|x| x / raw[0]).collect();

        // Every class matrix must act on ω by the scalar ω_j.
        for (j, m) in structure.iter().enumerate() {
            let residual = (0..r)
                .map(|l| {
                    let mv: Complex64 = (0..r).map(|k| omega[k] * m[(l, k)]).sum();
                    (mv - omega[j] * omega[l]).norm()
                })
                .fold(0.0, f64::max);
            let scale = omega.iter().map(|x| x.norm()).fold(1.0, f64::max).powi(2);
            if residual > 1e-7 * scale {
                return Err(Error::EigenClustering {
                    seed,
                    detail: format!("vector {col} is not a common eigenvector (residual {residual:.2e})"),
                });
            }
        }

        let norm: f64 = omega.iter().zip(&sizes).map(|(w, s)| w.norm_sqr() / s).sum();
        let degree = (n / norm).sqrt();
        let rounded = degree.round();
        if rounded < 1.0 || (degree - rounded).abs() > TRACE_INTEGRALITY_TOL {
            return Err(Error::NumericQuality(format!(
                "character degree {degree} is not an integer"
            )));
        }
        let chi = omega
            .iter()
            .zip(&sizes)
            .map(|(w, s)| w * rounded / *s)
            .collect();
        rows.push((rounded as usize, chi));
    }

    rows.sort_by(|a, b| compare_rows(a, b));
    let values = CMatrix::from_fn(r, r, |i, j| rows[i].1[j]);
    CharacterTable::new(group.order(), classes, values)
}

/// Degree ascending, then character values descending (rounded to six
/// decimals), which puts the trivial character first.
fn compare_rows(a: &(usize, Vec<Complex64>), b: &(usize, Vec<Complex64>)) -> Ordering {
    let key = |z: &Complex64| ((z.re * 1e6).round() as i64, (z.im * 1e6).round() as i64);
    a.0.cmp(&b.0).then_with(|| {
        a.1.iter()
            .zip(&b.1)
            .map(|(x, y)| key(y).cmp(&key(x)))
            .find(|o| *o != Ordering::Equal)
            .unwrap_or(Ordering::Equal)
    })
}

/// Residuals of the idempotent axioms, each a largest coefficient modulus.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdempotentReport {
    pub idempotency: f64,
    pub orthogonality: f64,
    pub completeness: f64,
    pub symmetry: f64,
    pub tol: f64,
}

impl IdempotentReport {
    pub fn max_residual(&self) -> f64 {
        self.idempotency
            .max(self.orthogonality)
            .max(self.completeness)
            .max(self.symmetry)
    }

    pub fn passed(&self) -> bool {
        self.max_residual() <= self.tol
    }
}

impl fmt::Display for IdempotentReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mark = |x: f64| if x <= self.tol { "ok" } else { "FAIL" };
        writeln!(f, "idempotency   {:.3e} {}", self.idempotency, mark(self.idempotency))?;
        writeln!(f, "orthogonality {:.3e} {}", self.orthogonality, mark(self.orthogonality))?;
        writeln!(f, "completeness  {:.3e} {}", self.completeness, mark(self.completeness))?;
        writeln!(f, "symmetry      {:.3e} {}", self.symmetry, mark(self.symmetry))?;
        write!(
            f,
            "{} at tolerance {:.3e}",
            if self.passed() { "PASS" } else { "FAIL" },
            self.tol
        )
    }
}

/// Checks `e_i² = e_i`, `e_i e_j = 0`, `Σ e_i = 1` and `e_i* = e_i`.
pub fn verify_idempotent_set(elements: &[GroupRingElement], tol: f64) -> Result<IdempotentReport> {
    let mut report = IdempotentReport {
        idempotency: 0.0,
        orthogonality: 0.0,
        completeness: 1.0,
        symmetry: 0.0,
        tol,
    };
    let Some(first) = elements.first() else {
        return Ok(report);
    };
    let group = first.group().clone();
    let mut total = GroupRingElement::zero(group.clone());
    for (i, e) in elements.iter().enumerate() {
        let square = ring_multiply(e, e)?;
        report.idempotency = report.idempotency.max(square.checked_sub(e)?.max_abs());
        for f in &elements[i + 1..] {
            report.orthogonality = report
                .orthogonality
                .max(ring_multiply(e, f)?.max_abs())
                .max(ring_multiply(f, e)?.max_abs());
        }
        report.symmetry = report.symmetry.max(involution(e).checked_sub(e)?.max_abs());
        total = total.checked_add(e)?;
    }
    report.completeness = total
        .checked_sub(&GroupRingElement::one(group))?
        .max_abs();
    Ok(report)
}

/// `rank σ(e_i) = tr σ(e_i) = |G| · α_1(e_i)` for each idempotent.
pub fn idempotent_ranks(elements: &[GroupRingElement]) -> Result<Vec<usize>> {
    let Some(first) = elements.first() else {
        return Ok(Vec::new());
    };
    let n = first.group().order();
    let ranks = elements
        .iter()
        .enumerate()
        .map(|(i, e)| {
            let trace = e.coeff(0) * n as f64;
            let rounded = trace.re.round();
            let off = (trace - Complex64::new(rounded, 0.0)).norm();
            if off > TRACE_INTEGRALITY_TOL || rounded < 0.0 {
                Err(Error::NumericQuality(format!(
                    "trace of idempotent {i} is {trace}, not an integer"
                )))
            } else {
                Ok(rounded as usize)
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let total: usize = ranks.iter().sum();
    if total != n {
        return Err(Error::NumericQuality(format!(
            "idempotent ranks sum to {total}, not the group order {n}"
        )));
    }
    Ok(ranks)
}

/// A verified complete orthogonal set of symmetric idempotents, with ranks.
#[derive(Debug, Clone)]
pub struct IdempotentSet {
    elements: Vec<GroupRingElement>,
    ranks: Vec<usize>,
}

impl IdempotentSet {
    /// Certifies `elements` at `tol`, failing with the worst residual.
    pub fn new(elements: Vec<GroupRingElement>, tol: f64) -> Result<Self> {
        if elements.is_empty() {
            return Err(Error::Verification {
                what: "completeness of the idempotent set".into(),
                residual: 1.0,
                tol,
            });
        }
        let group = elements[0].group().clone();
        if elements.iter().any(|e| **e.group() != *group) {
            return Err(Error::GroupMismatch);
        }
        let report = verify_idempotent_set(&elements, tol)?;
        if !report.passed() {
            return Err(Error::Verification {
                what: "idempotent set verification".into(),
                residual: report.max_residual(),
                tol,
            });
        }
        let ranks = idempotent_ranks(&elements)?;
        Ok(Self { elements, ranks })
    }

    pub fn elements(&self) -> &[GroupRingElement] {
        &self.elements
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        self.elements[0].group()
    }

    /// `Σ α_i e_i`.
    pub fn combine(&self, alphas: &[Complex64]) -> Result<GroupRingElement> {
        if alphas.len() != self.len() {
            return Err(Error::dimension(self.len(), alphas.len()));
        }
        let mut out = GroupRingElement::zero(self.group().clone());
        for (e, &a) in self.elements.iter().zip(alphas) {
            out = out.checked_add(&e.scale(a))?;
        }
        Ok(out)
    }
}

/// `e_i = (d_i/|G|) Σ_g conj(χ_i(g)) g`, ordered as the table rows.
pub fn central_idempotents(group: &Arc<FiniteGroup>, table: &CharacterTable) -> Result<IdempotentSet> {
    let n = group.order();
    if table.group_order() != n || *table.classes() != conjugacy_classes(group) {
        return Err(Error::GroupMismatch);
    }
    let elements = (0..table.len())
        .map(|i| {
            let scale = table.degrees()[i] as f64 / n as f64;
            let coeffs = (0..n).map(|g| table.character_at(i, g).conj() * scale).collect();
            GroupRingElement::new(group.clone(), coeffs)
        })
        .collect::<Result<Vec<_>>>()?;
    IdempotentSet::new(elements, IDEMPOTENT_TOL)
}

/// Convenience: the built-in or numeric table and its idempotents.
pub fn idempotents_for(group: &Arc<FiniteGroup>, source: &CharacterSource) -> Result<IdempotentSet> {
    let table = character_table(group, source)?;
    central_idempotents(group, &table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::build_group;
    use crate::linalg::{complexify, numerical_rank};
    use crate::ring::sigma;

    fn grp(s: &str) -> Arc<FiniteGroup> {
        Arc::new(build_group(&s.parse().unwrap()).unwrap())
    }

    fn elem(g: &Arc<FiniteGroup>, scale: f64, coeffs: &[f64]) -> GroupRingElement {
        GroupRingElement::new(g.clone(), coeffs.iter().map(|&x| real(x * scale)).collect()).unwrap()
    }

    #[test]
    fn class_sums_of_d6() {
        let g = grp("D6");
        let classes = conjugacy_classes(&g);
        let m = class_sum_matrices(&g, &classes);
        assert_eq!(m[0], DMatrix::identity(3, 3));
        // (a + a²)² = 2·1 + (a + a²): brute-force expansion over the table.
        let mut counts = [0.0; 3];
        for &x in classes.class(1) {
            for &y in classes.class(1) {
                let z = g.mul(x, y);
                if z == classes.representative(classes.class_of(z)) {
                    counts[classes.class_of(z)] += 1.0;
                }
            }
        }
        assert_eq!(counts, [2.0, 1.0, 0.0]);
        assert_eq!(m[1].row(1).iter().copied().collect::<Vec<_>>(), vec![2.0, 1.0, 0.0]);
        for a in &m {
            for b in &m {
                assert_eq!(a * b, b * a);
            }
        }
    }

    #[test]
    fn class_sums_of_abelian_group_are_permutations() {
        let g = grp("C2xC3");
        let classes = conjugacy_classes(&g);
        for m in class_sum_matrices(&g, &classes) {
            for row in m.row_iter() {
                assert_eq!(row.iter().sum::<f64>(), 1.0);
            }
        }
    }

    #[test]
    fn trivial_group_table_and_idempotent() {
        let g = grp("C1");
        for src in [CharacterSource::Builtin, CharacterSource::Numeric { seed: 0 }] {
            let t = character_table(&g, &src).unwrap();
            assert_eq!(t.values(), &CMatrix::from_element(1, 1, real(1.0)));
            let set = central_idempotents(&g, &t).unwrap();
            assert_eq!(set.ranks(), [1]);
            assert_eq!(set.elements()[0].coeffs(), [real(1.0)]);
        }
    }

    #[test]
    fn d6_idempotents_match_printed() {
        let g = grp("D6");
        let t = character_table(&g, &CharacterSource::Builtin).unwrap();
        let set = central_idempotents(&g, &t).unwrap();
        let expected = [
            elem(&g, 1.0 / 6.0, &[1.0, 1.0, 1.0, 1.0, 1.0, 1.0]),
            elem(&g, 1.0 / 6.0, &[1.0, 1.0, 1.0, -1.0, -1.0, -1.0]),
            elem(&g, 1.0 / 3.0, &[2.0, -1.0, -1.0, 0.0, 0.0, 0.0]),
        ];
        for (e, want) in set.elements().iter().zip(&expected) {
            assert!(e.distance(want).unwrap() < 1e-15);
        }
        assert_eq!(set.ranks(), [1, 1, 4]);
    }

    #[test]
    fn verification_reports() {
        let g = grp("D6");
        let e = [
            elem(&g, 1.0 / 6.0, &[1.0, 1.0, 1.0, 1.0, 1.0, 1.0]),
            elem(&g, 1.0 / 6.0, &[1.0, 1.0, 1.0, -1.0, -1.0, -1.0]),
            elem(&g, 1.0 / 3.0, &[2.0, -1.0, -1.0, 0.0, 0.0, 0.0]),
        ];
        let report = verify_idempotent_set(&e, 1e-12).unwrap();
        assert!(report.passed(), "{report}");

        let mut scaled = e.clone();
        scaled[2] = scaled[2].scale(real(1.01));
        let report = verify_idempotent_set(&scaled, 1e-12).unwrap();
        assert!(!report.passed());
        assert!(report.idempotency > 1e-3);

        let report = verify_idempotent_set(&e[..2], 1e-12).unwrap();
        assert!(!report.passed());
        assert!((report.completeness - e[2].max_abs()).abs() < 1e-15);
        assert!(report.idempotency < 1e-15);

        assert!(IdempotentSet::new(scaled.to_vec(), 1e-9).is_err());
    }

    #[test]
    fn ranks_of_builtin_families() {
        for (s, want) in [
            ("D6", vec![1, 1, 4]),
            ("Q8", vec![1, 1, 1, 1, 4]),
            ("D10", vec![1, 1, 4, 4]),
            ("D8", vec![1, 1, 1, 1, 4]),
        ] {
            let g = grp(s);
            let set = idempotents_for(&g, &CharacterSource::Builtin).unwrap();
            assert_eq!(set.ranks(), want.as_slice(), "{s}");
        }
    }

    #[test]
    fn rank_is_trace_and_additive() {
        let g = grp("D10");
        let set = idempotents_for(&g, &CharacterSource::Builtin).unwrap();
        let mats: Vec<CMatrix> = set.elements().iter().map(|e| sigma(e).into_inner()).collect();
        for (m, &r) in mats.iter().zip(set.ranks()) {
            assert_eq!(numerical_rank(m, 1e-9), r);
        }
        for mask in 1u32..(1 << mats.len()) {
            let mut sum = CMatrix::zeros(10, 10);
            let mut want = 0;
            for (k, m) in mats.iter().enumerate() {
                if mask & (1 << k) != 0 {
                    sum += m;
                    want += set.ranks()[k];
                }
            }
            assert_eq!(numerical_rank(&sum, 1e-9), want);
        }
    }

    #[test]
    fn d10_table_matches_printed() {
        let g = grp("D10");
        let t = character_table(&g, &CharacterSource::Numeric { seed: 0 }).unwrap();
        // Printed columns are the classes of 1, b, a, a².
        let cols = [0, 5, 1, 2].map(|x| t.classes().class_of(x));
        let c1 = 2.0 * (2.0 * PI / 5.0).cos();
        let c2 = 2.0 * (4.0 * PI / 5.0).cos();
        let c4 = 2.0 * (8.0 * PI / 5.0).cos();
        let printed = [
            [1.0, 1.0, 1.0, 1.0],
            [1.0, -1.0, 1.0, 1.0],
            [2.0, 0.0, c1, c2],
            [2.0, 0.0, c2, c4],
        ];
        assert!((c1 - 0.618034).abs() < 1e-6);
        for (i, row) in printed.iter().enumerate() {
            for (k, &x) in row.iter().enumerate() {
                assert!((t.value(i, cols[k]) - real(x)).norm() < 1e-8, "row {i} col {k}");
            }
        }
    }

    #[test]
    fn numeric_tables_match_builtin() {
        for s in ["C5", "C12", "D6", "D10", "D8", "Q8", "C2xC4", "D6xC2"] {
            let g = grp(s);
            let b = character_table(&g, &CharacterSource::Builtin).unwrap();
            let n = character_table(&g, &CharacterSource::Numeric { seed: 3 }).unwrap();
            let d = n.distance_up_to_row_order(&b, 1e-8);
            assert!(d.is_some(), "{s}");
        }
    }

    #[test]
    fn numeric_table_is_seed_independent_and_sorted() {
        let g = grp("Q8");
        let a = character_table(&g, &CharacterSource::Numeric { seed: 0 }).unwrap();
        let b = character_table(&g, &CharacterSource::Numeric { seed: 99 }).unwrap();
        assert!(crate::linalg::max_abs_diff(a.values(), b.values()) < 1e-10);
        assert_eq!(a.degrees(), [1, 1, 1, 1, 2]);
        // Numeric ordering reproduces the conventional Q8 order.
        let builtin = character_table(&g, &CharacterSource::Builtin).unwrap();
        assert!(crate::linalg::max_abs_diff(a.values(), builtin.values()) < 1e-10);
    }

    #[test]
    fn c3_rows() {
        let g = grp("C3");
        let t = character_table(&g, &CharacterSource::Builtin).unwrap();
        let w = root_of_unity(1, 3);
        let want = [[real(1.0); 3], [real(1.0), w, w * w], [real(1.0), w * w, w]];
        for i in 0..3 {
            for j in 0..3 {
                assert!((t.value(i, j) - want[i][j]).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn central_inverse_formula() {
        let g = grp("Q8");
        let set = idempotents_for(&g, &CharacterSource::Builtin).unwrap();
        let alphas: Vec<Complex64> = (1..=5).map(|k| Complex64::new(k as f64, 0.5)).collect();
        let inv: Vec<Complex64> = alphas.iter().map(|a| a.inv()).collect();
        let w = set.combine(&alphas).unwrap();
        let winv = set.combine(&inv).unwrap();
        let prod = ring_multiply(&w, &winv).unwrap();
        assert!(prod.distance(&GroupRingElement::one(g)).unwrap() < 1e-10);
    }

    #[test]
    fn table_validation_rejects_bad_rows() {
        let g = grp("C3");
        let classes = conjugacy_classes(&g);
        let bad = complexify(&DMatrix::from_row_slice(3, 3, &[1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 0.0, 0.0]));
        assert!(CharacterTable::new(3, classes, bad).is_err());
    }

    #[test]
    fn cluster_grouping() {
        assert_eq!(clusters(&[0.0, 1.0, 1.0 + 1e-9, 3.0]).len(), 3);
        assert_eq!(clusters(&[2.0, 1.0]), vec![vec![1], vec![0]]);
    }
}
