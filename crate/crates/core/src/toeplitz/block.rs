//! Block-tridiagonal operators whose diagonal blocks are one Toeplitz matrix
//! and whose off-diagonal blocks are a multiple of the identity.

use num_complex::Complex64;

use super::{CirculantSpectrum, ToeplitzOperator};
use crate::error::{Error, Result};
use crate::krylov::DenseMatrix;
use crate::operator::LinearOperator;

/// `m_blocks x m_blocks` block tridiagonal matrix with diagonal blocks `T`
/// (dimension `block_dim`) and off-diagonal blocks `beta * I`.
///
/// Vectors are laid out block by block: entries `[i * block_dim, (i+1) * block_dim)`
/// belong to block `i`.
#[derive(Debug, Clone)]
pub struct BlockTridiagonalToeplitz {
    m_blocks: usize,
    diag_block: ToeplitzOperator,
    spectrum: CirculantSpectrum,
    off_block_scale: f64,
}

impl BlockTridiagonalToeplitz {
    pub fn new(m_blocks: usize, diag_block: ToeplitzOperator, off_block_scale: f64) -> Result<Self> {
        if m_blocks == 0 {
            return Err(Error::Size("block operator needs at least one block".into()));
        }
        let spectrum = diag_block.spectrum();
        Ok(Self {
            m_blocks,
            diag_block,
            spectrum,
            off_block_scale,
        })
    }

    pub fn m_blocks(&self) -> usize {
        self.m_blocks
    }

    pub fn block_dim(&self) -> usize {
        self.diag_block.dim()
    }

    pub fn diag_block(&self) -> &ToeplitzOperator {
        &self.diag_block
    }

    pub fn off_block_scale(&self) -> f64 {
        self.off_block_scale
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let nb = self.block_dim();
        let dim = self.m_blocks * nb;
        let beta = self.off_block_scale;
        DenseMatrix::from_fn(dim, |r, c| {
            let (bi, i) = (r / nb, r % nb);
            let (bj, j) = (c / nb, c % nb);
            if bi == bj {
                self.diag_block.entry(i, j)
            } else if bi.abs_diff(bj) == 1 && i == j {
                beta
            } else {
                0.0
            }
        })
    }
}

impl LinearOperator for BlockTridiagonalToeplitz {
    fn dim(&self) -> usize {
        self.m_blocks * self.block_dim()
    }

    fn apply_into(&self, x: &[f64], y: &mut [f64]) {
        let nb = self.block_dim();
        let mut buf: Vec<Complex64> = Vec::with_capacity(self.spectrum.len());

        // Diagonal blocks, two per transform pair.
        let mut xs = x.chunks_exact(nb);
        let mut ys = y.chunks_exact_mut(nb);
        while let (Some(xa), Some(ya)) = (xs.next(), ys.next()) {
            match (xs.next(), ys.next()) {
                (Some(xb), Some(yb)) => self.spectrum.apply_pair_into(xa, xb, ya, yb, &mut buf),
                _ => self.spectrum.apply_with_buffer(xa, ya, &mut buf),
            }
        }

        let beta = self.off_block_scale;
        if beta == 0.0 || self.m_blocks == 1 {
            return;
        }
        for b in 0..self.m_blocks {
            let yb = &mut y[b * nb..(b + 1) * nb];
            if b > 0 {
                let xp = &x[(b - 1) * nb..b * nb];
                for (yi, xi) in yb.iter_mut().zip(xp) {
                    *yi += beta * xi;
                }
            }
            if b + 1 < self.m_blocks {
                let xn = &x[(b + 1) * nb..(b + 2) * nb];
                for (yi, xi) in yb.iter_mut().zip(xn) {
                    *yi += beta * xi;
                }
            }
        }
    }
}

/// Checked product `op x`.
pub fn block_matvec(op: &BlockTridiagonalToeplitz, x: &[f64]) -> Result<Vec<f64>> {
    if x.len() != op.dim() {
        return Err(Error::Size(format!(
            "vector has length {} but block operator has dimension {}",
            x.len(),
            op.dim()
        )));
    }
    Ok(op.apply(x))
}
