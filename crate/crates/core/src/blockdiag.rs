//! The universal block diagonalizer of a group ring.
//!
//! Stacking a column basis of every `E_i = σ(e_i)` for a complete orthogonal
//! set of central idempotents gives one matrix `P` with `P⁻¹ A P` block
//! diagonal (block sizes `rank E_i`) for every group ring matrix `A` of the
//! group. Orthonormalizing each block's basis makes `P` unitary.

use std::sync::Arc;

use nalgebra::DVector;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::idempotents::IdempotentSet;
use crate::linalg::{default_rank_tol, identity_residual, max_abs, CMatrix};
use crate::ring::{sigma, GroupRingElement};

/// Default off-block tolerance for [`block_transform`].
pub const BLOCK_TOL: f64 = 1e-8;
/// Largest acceptable `‖P·P⁻¹ − I‖` before a diagonalizer is rejected.
pub const INVERSE_TOL: f64 = 1e-8;
/// Coefficients this small are treated as zero by [`center_inverse`].
pub const ZERO_DIVISOR_TOL: f64 = 1e-12;

/// How a diagonalizer was built.
#[derive(Debug, Clone, PartialEq)]
pub enum Provenance {
    /// Column bases of the idempotents, in set order.
    Idempotents { ranks: Vec<usize> },
    /// Iterated block Fourier matrices over the cyclic factors.
    Abelian { factors: Vec<usize> },
    /// Loaded from a file.
    External,
}

#[derive(Debug, Clone)]
pub struct Diagonalizer {
    p: CMatrix,
    p_inv: CMatrix,
    block_sizes: Vec<usize>,
    unitary: bool,
    provenance: Provenance,
}

impl Diagonalizer {
    /// Wraps `p`, computing and checking its inverse. A unitary `p` uses `P*`.
    pub fn new(p: CMatrix, block_sizes: Vec<usize>, unitary: bool, provenance: Provenance) -> Result<Self> {
        let n = p.nrows();
        if p.ncols() != n {
            return Err(Error::dimension("square matrix", format!("{}x{}", n, p.ncols())));
        }
        let total: usize = block_sizes.iter().sum();
        if total != n || block_sizes.contains(&0) {
            return Err(Error::dimension(
                format!("positive block sizes summing to {n}"),
                format!("{block_sizes:?}"),
            ));
        }
        let p_inv = if unitary {
            p.adjoint()
        } else {
            p.clone()
                .try_inverse()
                .ok_or_else(|| Error::Internal("diagonalizer is singular".into()))?
        };
        let residual = identity_residual(&p, &p_inv);
        if residual > INVERSE_TOL {
            return Err(Error::Internal(format!(
                "‖P·P⁻¹ − I‖ = {residual:.3e}{}",
                if unitary { " (P is not unitary)" } else { "" }
            )));
        }
        Ok(Self::from_parts(p, p_inv, block_sizes, unitary, provenance))
    }

    /// Trusted constructor when the inverse is known in closed form.
    pub(crate) fn from_parts(
        p: CMatrix,
        p_inv: CMatrix,
        block_sizes: Vec<usize>,
        unitary: bool,
        provenance: Provenance,
    ) -> Self {
        Self {
            p,
            p_inv,
            block_sizes,
            unitary,
            provenance,
        }
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.p
    }

    pub fn inverse(&self) -> &CMatrix {
        &self.p_inv
    }

    pub fn block_sizes(&self) -> &[usize] {
        &self.block_sizes
    }

    pub fn is_unitary(&self) -> bool {
        self.unitary
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn dim(&self) -> usize {
        self.p.nrows()
    }

    /// Starting row/column of each block.
    pub fn block_offsets(&self) -> Vec<usize> {
        self.block_sizes
            .iter()
            .scan(0, |acc, &s| {
                let start = *acc;
                *acc += s;
                Some(start)
            })
            .collect()
    }

    /// `‖P·P⁻¹ − I‖_max`.
    pub fn inverse_residual(&self) -> f64 {
        identity_residual(&self.p, &self.p_inv)
    }
}

/// Picks `rank` columns of `e` greedily left to right, keeping a column when
/// its Gram–Schmidt residual exceeds `tol`. Each kept column is divided by
/// the modulus of its smallest nonzero entry.
pub fn column_basis(e: &CMatrix, rank: usize, tol: Option<f64>) -> Result<Vec<DVector<Complex64>>> {
    let tol = tol.unwrap_or_else(|| default_rank_tol(e));
    let mut orthonormal: Vec<DVector<Complex64>> = Vec::with_capacity(rank);
    let mut chosen = Vec::with_capacity(rank);
    for j in 0..e.ncols() {
        if chosen.len() == rank {
            break;
        }
        let col = e.column(j).into_owned();
        let mut residual = col.clone();
        // Two passes of modified Gram–Schmidt.
        for _ in 0..2 {
            for q in &orthonormal {
                let proj = q.dotc(&residual);
                residual -= q * proj;
            }
        }
        let norm = residual.norm();
        if norm > tol {
            orthonormal.push(residual / Complex64::new(norm, 0.0));
            let smallest = col
                .iter()
                .map(|z| z.norm())
                .filter(|&m| m > tol)
                .fold(f64::INFINITY, f64::min);
            chosen.push(col / Complex64::new(smallest, 0.0));
        }
    }
    if chosen.len() < rank {
        return Err(Error::RankDeficient {
            expected: rank,
            found: chosen.len(),
        });
    }
    Ok(chosen)
}

/// Modified Gram–Schmidt with re-orthogonalization; columns come out unit length.
fn orthonormalize(vectors: &[DVector<Complex64>]) -> Result<Vec<DVector<Complex64>>> {
    let mut out: Vec<DVector<Complex64>> = Vec::with_capacity(vectors.len());
    for v in vectors {
        let mut w = v.clone();
        for _ in 0..2 {
            for q in &out {
                let proj = q.dotc(&w);
                w -= q * proj;
            }
        }
        let norm = w.norm();
        if norm <= 1e-12 * v.norm().max(1.0) {
            return Err(Error::Internal("dependent column in block basis".into()));
        }
        out.push(w / Complex64::new(norm, 0.0));
    }
    Ok(out)
}

/// Assembles `P` from the column bases of the idempotents, in set order.
pub fn build_diagonalizer(set: &IdempotentSet, orthonormal: bool) -> Result<Diagonalizer> {
    let n = set.group().order();
    let mut columns = Vec::with_capacity(n);
    for (e, &rank) in set.elements().iter().zip(set.ranks()) {
        let basis = column_basis(sigma(e).matrix(), rank, None)?;
        if orthonormal {
            columns.extend(orthonormalize(&basis)?);
        } else {
            columns.extend(basis);
        }
    }
    let p = CMatrix::from_columns(&columns);
    Diagonalizer::new(
        p,
        set.ranks().to_vec(),
        orthonormal,
        Provenance::Idempotents {
            ranks: set.ranks().to_vec(),
        },
    )
}

/// Diagonal blocks `T_1, …, T_k` of a transformed matrix.
#[derive(Debug, Clone)]
pub struct BlockDiagonal {
    blocks: Vec<CMatrix>,
    off_block_residual: f64,
}

impl BlockDiagonal {
    pub fn blocks(&self) -> &[CMatrix] {
        &self.blocks
    }

    pub fn block(&self, i: usize) -> &CMatrix {
        &self.blocks[i]
    }

    /// Largest modulus outside the diagonal blocks before extraction.
    pub fn off_block_residual(&self) -> f64 {
        self.off_block_residual
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.blocks.iter().map(|b| b.nrows()).collect()
    }

    /// `diag(T_1, …, T_k)` as a dense matrix.
    pub fn assemble(&self) -> CMatrix {
        let n: usize = self.blocks.iter().map(|b| b.nrows()).sum();
        let mut out = CMatrix::zeros(n, n);
        let mut at = 0;
        for b in &self.blocks {
            let s = b.nrows();
            out.view_mut((at, at), (s, s)).copy_from(b);
            at += s;
        }
        out
    }

    /// Blockwise product.
    pub fn multiply(&self, other: &BlockDiagonal) -> Result<BlockDiagonal> {
        if self.sizes() != other.sizes() {
            return Err(Error::dimension(format!("{:?}", self.sizes()), format!("{:?}", other.sizes())));
        }
        Ok(BlockDiagonal {
            blocks: self.blocks.iter().zip(&other.blocks).map(|(a, b)| a * b).collect(),
            off_block_residual: 0.0,
        })
    }
}

/// `P⁻¹ A P` split into its diagonal blocks. Fails when anything outside the
/// blocks exceeds `tol` (default [`BLOCK_TOL`]), i.e. `A` is not a group ring
/// matrix for this listing.
pub fn block_transform(a: &CMatrix, d: &Diagonalizer, tol: Option<f64>) -> Result<BlockDiagonal> {
    let n = d.dim();
    if a.shape() != (n, n) {
        return Err(Error::dimension(format!("{n}x{n}"), format!("{}x{}", a.nrows(), a.ncols())));
    }
    let tol = tol.unwrap_or(BLOCK_TOL);
    let t = d.inverse() * a * d.matrix();
    let offsets = d.block_offsets();
    let mut block_of = vec![0; n];
    for (k, (&start, &size)) in offsets.iter().zip(d.block_sizes()).enumerate() {
        block_of[start..start + size].fill(k);
    }
    let mut residual: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            if block_of[i] != block_of[j] {
                residual = residual.max(t[(i, j)].norm());
            }
        }
    }
    if residual > tol {
        return Err(Error::OffBlock { residual, tol });
    }
    let blocks = offsets
        .iter()
        .zip(d.block_sizes())
        .map(|(&start, &size)| t.view((start, start), (size, size)).into_owned())
        .collect();
    Ok(BlockDiagonal {
        blocks,
        off_block_residual: residual,
    })
}

/// The representation `g ↦ (block_index-th block of P⁻¹σ(g)P)`, indexed by
/// element.
pub fn group_block_representation(
    group: &Arc<FiniteGroup>,
    d: &Diagonalizer,
    block_index: usize,
) -> Result<Vec<CMatrix>> {
    if block_index >= d.block_sizes().len() {
        return Err(Error::dimension(
            format!("block index below {}", d.block_sizes().len()),
            block_index,
        ));
    }
    (0..group.order())
        .map(|g| {
            let image = sigma(&GroupRingElement::basis(group.clone(), g));
            let blocks = block_transform(image.matrix(), d, None)?;
            Ok(blocks.block(block_index).clone())
        })
        .collect()
}

/// `(Σ α_i e_i)⁻¹ = Σ α_i⁻¹ e_i`; a vanishing `α_i` makes the element a zero-divisor.
pub fn center_inverse(alphas: &[Complex64], set: &IdempotentSet) -> Result<GroupRingElement> {
    if alphas.len() != set.len() {
        return Err(Error::dimension(set.len(), alphas.len()));
    }
    if let Some(index) = alphas.iter().position(|a| a.norm() <= ZERO_DIVISOR_TOL) {
        return Err(Error::ZeroDivisor { index });
    }
    let inverses: Vec<Complex64> = alphas.iter().map(|a| a.inv()).collect();
    set.combine(&inverses)
}

/// `det(Σ α_i E_i) = Π α_i^{rank E_i}`.
pub fn determinant_from_ranks(alphas: &[Complex64], ranks: &[usize]) -> Result<Complex64> {
    if alphas.len() != ranks.len() {
        return Err(Error::dimension(ranks.len(), alphas.len()));
    }
    Ok(alphas
        .iter()
        .zip(ranks)
        .map(|(a, &r)| a.powu(r as u32))
        .product())
}

/// Multiplies in the block domain: transform both factors, multiply blockwise,
/// transform back and read the first row.
pub fn transform_multiply(w: &GroupRingElement, v: &GroupRingElement, d: &Diagonalizer) -> Result<GroupRingElement> {
    if **w.group() != **v.group() {
        return Err(Error::GroupMismatch);
    }
    let tol = BLOCK_TOL * w.max_abs().max(v.max_abs()).max(1.0);
    let bw = block_transform(sigma(w).matrix(), d, Some(tol))?;
    let bv = block_transform(sigma(v).matrix(), d, Some(tol))?;
    let product = bw.multiply(&bv)?.assemble();
    let back = d.matrix() * product * d.inverse();
    GroupRingElement::new(w.group().clone(), back.row(0).iter().copied().collect())
}

/// Shape of a square block of even size split into half-size quadrants.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SplitForm {
    /// `[[X, 0], [0, Y]]`
    Diagonal,
    /// `[[0, X], [Y, 0]]`
    AntiDiagonal,
}

/// Classifies `m` as one of the two quadrant patterns, or `None`.
pub fn split_form(m: &CMatrix, tol: f64) -> Option<SplitForm> {
    let k = m.nrows();
    if k != m.ncols() || k % 2 != 0 || k == 0 {
        return None;
    }
    let h = k / 2;
    let quad = |r: usize, c: usize| max_abs(&m.view((r, c), (h, h)).into_owned());
    if quad(0, h) <= tol && quad(h, 0) <= tol {
        Some(SplitForm::Diagonal)
    } else if quad(0, 0) <= tol && quad(h, h) <= tol {
        Some(SplitForm::AntiDiagonal)
    } else {
        None
    }
}
