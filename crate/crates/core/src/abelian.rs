//! Explicit diagonalization for finite abelian groups.
//!
//! A group ring matrix of `K × C_h` is the block circulant
//! `circ(K_1, …, K_h)` of group ring matrices of `K`. If `P` diagonalizes the
//! `K_l`, the block Fourier matrix whose `(j, l)` block is `ω^{jl} P`
//! diagonalizes the whole thing, with diagonal
//! `D_1 + ω^j D_2 + … + ω^{(h-1)j} D_h` in block row `j`. Iterating over the
//! cyclic factors gives one explicit `P` for any finite abelian group; its rows
//! are the characters.
//!
//! Convention: block `(j, l)` of [`block_fourier`] is `ω^{jl} P`, i.e. the
//! Fourier matrix is the outer factor. This matches the listing where later
//! factors are outermost.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::blockdiag::{Diagonalizer, Provenance};
use crate::error::{Error, Result};
use crate::group::{build_group, conjugacy_classes, FiniteGroup, GroupSpec};
use crate::idempotents::CharacterTable;
use crate::linalg::{max_abs_diff, CMatrix, ONE, ZERO};
use crate::ring::GroupRingElement;

/// Cyclic orders `(n_1, …, n_m)` of a product `C_{n_1} × … × C_{n_m}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbelianFactors(Vec<usize>);

impl AbelianFactors {
    pub fn new(orders: Vec<usize>) -> Result<Self> {
        if orders.is_empty() || orders.contains(&0) {
            return Err(Error::Spec(format!("cyclic orders must be at least 1, got {orders:?}")));
        }
        Ok(Self(orders))
    }

    /// Factors of a built-in group made only of cyclic pieces.
    pub fn from_group(group: &FiniteGroup) -> Result<Self> {
        group
            .spec()
            .and_then(GroupSpec::cyclic_orders)
            .ok_or_else(|| Error::Spec("not a product of cyclic groups".into()))
            .and_then(Self::new)
    }

    pub fn orders(&self) -> &[usize] {
        &self.0
    }

    /// Total order `q = Π n_t`.
    pub fn order(&self) -> usize {
        self.0.iter().product()
    }

    /// Mixed-radix digits of an index, first factor fastest.
    pub fn digits(&self, mut index: usize) -> Vec<usize> {
        self.0
            .iter()
            .map(|&n| {
                let d = index % n;
                index /= n;
                d
            })
            .collect()
    }

    pub fn spec(&self) -> GroupSpec {
        let parts: Vec<GroupSpec> = self.0.iter().map(|&n| GroupSpec::Cyclic(n)).collect();
        match parts.len() {
            1 => parts[0].clone(),
            _ => GroupSpec::Product(parts),
        }
    }

    pub fn group(&self) -> Result<FiniteGroup> {
        build_group(&self.spec())
    }
}

/// `exp(2πi·k/n)` with `k` reduced mod `n` first.
pub fn root_of_unity(k: usize, n: usize) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI * ((k % n) as f64) / n as f64)
}

/// `F[j][k] = ω^{jk}`, `ω = exp(2πi/n)`.
pub fn fourier_matrix(n: usize) -> CMatrix {
    CMatrix::from_fn(n, n, |j, k| root_of_unity(j * k, n))
}

/// `circ(A_1, …, A_k)`: block `(i, j)` is `A_{(j − i mod k) + 1}`.
pub fn block_circulant(blocks: &[CMatrix]) -> Result<CMatrix> {
    let Some(first) = blocks.first() else {
        return Err(Error::dimension("at least one block", 0));
    };
    let (m, t) = first.shape();
    if let Some(bad) = blocks.iter().find(|b| b.shape() != (m, t)) {
        return Err(Error::dimension(
            format!("{m}x{t} blocks"),
            format!("{}x{}", bad.nrows(), bad.ncols()),
        ));
    }
    let k = blocks.len();
    let mut out = CMatrix::zeros(k * m, k * t);
    for i in 0..k {
        for j in 0..k {
            out.view_mut((i * m, j * t), (m, t))
                .copy_from(&blocks[(j + k - i) % k]);
        }
    }
    Ok(out)
}

/// Block `(j, l)` is `ω^{jl} P` with `ω` a primitive `k`-th root of unity.
pub fn block_fourier(p: &CMatrix, k: usize) -> CMatrix {
    let (r, c) = p.shape();
    let mut out = CMatrix::zeros(k * r, k * c);
    for j in 0..k {
        for l in 0..k {
            let w = root_of_unity(j * l, k);
            out.view_mut((j * r, l * c), (r, c)).copy_from(&(p * w));
        }
    }
    out
}

/// Inverse of [`block_fourier`] given `P⁻¹`: block `(j, l)` is `ω^{-jl} P⁻¹ / k`.
pub fn block_fourier_inverse(p_inv: &CMatrix, k: usize) -> CMatrix {
    let (r, c) = p_inv.shape();
    let mut out = CMatrix::zeros(k * r, k * c);
    let scale = 1.0 / k as f64;
    for j in 0..k {
        for l in 0..k {
            let w = root_of_unity(k - (j * l) % k, k) * scale;
            out.view_mut((j * r, l * c), (r, c)).copy_from(&(p_inv * w));
        }
    }
    out
}

/// The explicit `q × q` diagonalizer: the Fourier matrix of the first factor,
/// lifted through [`block_fourier`] once per further factor.
pub fn abelian_diagonalizer(factors: &AbelianFactors) -> Diagonalizer {
    let orders = factors.orders();
    let mut p = fourier_matrix(orders[0]);
    for &n in &orders[1..] {
        p = block_fourier(&p, n);
    }
    let q = factors.order();
    let p_inv = p.adjoint() / Complex64::new(q as f64, 0.0);
    Diagonalizer::from_parts(
        p,
        p_inv,
        vec![1; q],
        false,
        Provenance::Abelian {
            factors: orders.to_vec(),
        },
    )
}

fn check_group(w: &GroupRingElement, factors: &AbelianFactors) -> Result<()> {
    if w.group().order() != factors.order() {
        return Err(Error::dimension(factors.order(), w.group().order()));
    }
    if **w.group() != factors.group()? {
        return Err(Error::GroupMismatch);
    }
    Ok(())
}

/// Diagonal of `P⁻¹σ(w)P` as the character sum
/// `λ(j) = Σ_i α_i Π_t ω_t^{i_t j_t}`.
pub fn abelian_diagonal(w: &GroupRingElement, factors: &AbelianFactors) -> Result<Vec<Complex64>> {
    check_group(w, factors)?;
    let q = factors.order();
    let orders = factors.orders();
    let digits: Vec<Vec<usize>> = (0..q).map(|i| factors.digits(i)).collect();
    Ok((0..q)
        .map(|j| {
            w.coeffs()
                .iter()
                .enumerate()
                .map(|(i, &a)| {
                    // Phase Σ_t (i_t j_t mod n_t) / n_t, as a fraction of a turn.
                    let turns: f64 = orders
                        .iter()
                        .enumerate()
                        .map(|(t, &n)| ((digits[i][t] * digits[j][t]) % n) as f64 / n as f64)
                        .sum();
                    a * Complex64::from_polar(1.0, 2.0 * PI * turns.fract())
                })
                .sum()
        })
        .collect())
}

/// The same diagonal by the block formula: diagonalize each block of the
/// block circulant recursively, then combine with roots of the outer factor.
pub fn abelian_diagonal_block_formula(w: &GroupRingElement, factors: &AbelianFactors) -> Result<Vec<Complex64>> {
    check_group(w, factors)?;
    Ok(block_formula(w.coeffs(), factors.orders()))
}

fn block_formula(coeffs: &[Complex64], orders: &[usize]) -> Vec<Complex64> {
    let (&h, inner) = orders.split_last().expect("at least one factor");
    let s = coeffs.len() / h;
    // D_l: diagonal of the l-th block K_{l+1}, whose first row is the slice
    // of coefficients with outer digit l.
    let inner_diagonals: Vec<Vec<Complex64>> = if inner.is_empty() {
        coeffs.iter().map(|&c| vec![c]).collect()
    } else {
        coeffs.chunks(s).map(|chunk| block_formula(chunk, inner)).collect()
    };
    let mut out = vec![ZERO; coeffs.len()];
    for j in 0..h {
        for (l, d) in inner_diagonals.iter().enumerate() {
            let w = root_of_unity(j * l, h);
            for (r, &x) in d.iter().enumerate() {
                out[r + s * j] += w * x;
            }
        }
    }
    out
}

/// Rows of the explicit diagonalizer, read as characters on the product
/// listing.
pub fn abelian_character_table(factors: &AbelianFactors) -> Result<CharacterTable> {
    let group = factors.group()?;
    let p = abelian_diagonalizer(factors).matrix().clone();
    CharacterTable::new(group.order(), conjugacy_classes(&group), p)
}

/// Deviations of a candidate complex Hadamard matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HadamardReport {
    /// `max | |p_ij| − 1 |`
    pub modulus_deviation: f64,
    /// `max |PP* − nI|`
    pub gram_deviation: f64,
    /// `max_ij min(|p_ij − 1|, |p_ij + 1|)`; zero for a real ±1 matrix.
    pub real_sign_deviation: f64,
    pub tol: f64,
}

impl HadamardReport {
    pub fn passed(&self) -> bool {
        self.modulus_deviation <= self.tol && self.gram_deviation <= self.tol
    }

    /// Real Hadamard: entries ±1 as well.
    pub fn is_real(&self) -> bool {
        self.passed() && self.real_sign_deviation <= self.tol
    }
}

impl fmt::Display for HadamardReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "unimodular entries  max deviation {:.3e}", self.modulus_deviation)?;
        writeln!(f, "PP* = nI            max deviation {:.3e}", self.gram_deviation)?;
        writeln!(f, "real ±1 entries     max deviation {:.3e}", self.real_sign_deviation)?;
        write!(
            f,
            "{} at tolerance {:.3e}{}",
            if self.passed() { "PASS" } else { "FAIL" },
            self.tol,
            if self.is_real() { " (real Hadamard)" } else { "" }
        )
    }
}

/// Default tolerance `1e-9 · n`.
pub fn hadamard_check(p: &CMatrix, tol: Option<f64>) -> Result<HadamardReport> {
    let n = p.nrows();
    if p.ncols() != n {
        return Err(Error::dimension("square matrix", format!("{}x{}", n, p.ncols())));
    }
    let tol = tol.unwrap_or(1e-9 * n as f64);
    let modulus_deviation = p.iter().map(|z| (z.norm() - 1.0).abs()).fold(0.0, f64::max);
    let gram = p * p.adjoint();
    let gram_deviation = max_abs_diff(&gram, &(CMatrix::identity(n, n) * Complex64::new(n as f64, 0.0)));
    let real_sign_deviation = p
        .iter()
        .map(|z| (z - ONE).norm().min((z + ONE).norm()))
        .fold(0.0, f64::max);
    Ok(HadamardReport {
        modulus_deviation,
        gram_deviation,
        real_sign_deviation,
        tol,
    })
}

/// Convenience for callers holding a shared group.
pub fn factors_of(group: &Arc<FiniteGroup>) -> Result<AbelianFactors> {
    AbelianFactors::from_group(group)
}
