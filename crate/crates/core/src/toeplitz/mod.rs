//! Toeplitz operators and their `O(n log n)` products via circulant embedding.
//!
//! An `n x n` Toeplitz matrix is placed in the leading block of a circulant of
//! length `L` (the smallest power of two with `L >= 2n`). The circulant is
//! diagonalised by the DFT, `C = F^-1 diag(F c) F`, so a product costs two
//! length-`L` FFTs and a pointwise multiply once `F c` has been cached.

mod block;
mod fft;

use std::cell::RefCell;
use std::sync::Arc;

use num_complex::Complex64;

pub use block::{block_matvec, BlockTridiagonalToeplitz};
pub use fft::{fft, Direction, Fft};

use crate::error::{Error, Result};
use crate::krylov::DenseMatrix;
use crate::operator::LinearOperator;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Structure {
    General,
    Symmetric,
    LowerTriangular,
}

/// A Toeplitz matrix stored by its first column and first row.
///
/// Entry `(i, j)` is `first_row[j - i]` when `j >= i` and `first_col[i - j]`
/// otherwise.
#[derive(Debug, Clone, PartialEq)]
pub struct ToeplitzOperator {
    first_col: Vec<f64>,
    first_row: Vec<f64>,
    structure: Structure,
}

impl ToeplitzOperator {
    pub fn new(first_col: Vec<f64>, first_row: Vec<f64>) -> Result<Self> {
        if first_col.is_empty() {
            return Err(Error::Size("Toeplitz operator needs dimension >= 1".into()));
        }
        if first_col.len() != first_row.len() {
            return Err(Error::Size(format!(
                "first column has length {} but first row has length {}",
                first_col.len(),
                first_row.len()
            )));
        }
        if first_col[0] != first_row[0] {
            return Err(Error::Config(format!(
                "first column starts with {} but first row starts with {}",
                first_col[0], first_row[0]
            )));
        }
        Ok(Self {
            first_col,
            first_row,
            structure: Structure::General,
        })
    }

    pub fn symmetric(first_col: Vec<f64>) -> Result<Self> {
        if first_col.is_empty() {
            return Err(Error::Size("Toeplitz operator needs dimension >= 1".into()));
        }
        Ok(Self {
            first_row: first_col.clone(),
            first_col,
            structure: Structure::Symmetric,
        })
    }

    pub fn lower_triangular(first_col: Vec<f64>) -> Result<Self> {
        if first_col.is_empty() {
            return Err(Error::Size("Toeplitz operator needs dimension >= 1".into()));
        }
        let mut first_row = vec![0.0; first_col.len()];
        first_row[0] = first_col[0];
        Ok(Self {
            first_col,
            first_row,
            structure: Structure::LowerTriangular,
        })
    }

    pub fn identity(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Size("Toeplitz operator needs dimension >= 1".into()));
        }
        let mut col = vec![0.0; n];
        col[0] = 1.0;
        Self::symmetric(col)
    }

    pub fn dim(&self) -> usize {
        self.first_col.len()
    }

    pub fn first_col(&self) -> &[f64] {
        &self.first_col
    }

    pub fn first_row(&self) -> &[f64] {
        &self.first_row
    }

    pub fn structure(&self) -> Structure {
        self.structure
    }

    #[inline]
    pub fn entry(&self, i: usize, j: usize) -> f64 {
        if j >= i {
            self.first_row[j - i]
        } else {
            self.first_col[i - j]
        }
    }

    /// `alpha * self`, keeping the structure tag.
    pub fn scaled(&self, alpha: f64) -> Self {
        Self {
            first_col: self.first_col.iter().map(|v| alpha * v).collect(),
            first_row: self.first_row.iter().map(|v| alpha * v).collect(),
            structure: self.structure,
        }
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let n = self.dim();
        DenseMatrix::from_fn(n, |i, j| self.entry(i, j))
    }

    /// Builds the cached circulant spectrum for fast products.
    pub fn spectrum(&self) -> CirculantSpectrum {
        embed_circulant(self)
    }
}

/// Direct `O(n^2)` product without materialising the matrix.
impl LinearOperator for ToeplitzOperator {
    fn dim(&self) -> usize {
        self.first_col.len()
    }

    fn apply_into(&self, x: &[f64], y: &mut [f64]) {
        let n = self.dim();
        let lower_only = self.structure == Structure::LowerTriangular;
        // row i of the lower part reads first_col backwards; keep a reversed copy
        let rev: Vec<f64> = self.first_col.iter().rev().copied().collect();
        for (i, yi) in y.iter_mut().enumerate().take(n) {
            let mut acc = dot4(&rev[n - 1 - i..], &x[..=i]);
            if !lower_only {
                acc += dot4(&self.first_row[1..n - i], &x[i + 1..]);
            }
            *yi = acc;
        }
    }
}

/// Dot product with four independent partial sums.
fn dot4(a: &[f64], b: &[f64]) -> f64 {
    let mut s = [0.0; 4];
    let (ca, cb) = (a.chunks_exact(4), b.chunks_exact(4));
    let tail: f64 = ca.remainder().iter().zip(cb.remainder()).map(|(p, q)| p * q).sum();
    for (p, q) in ca.zip(cb) {
        for k in 0..4 {
            s[k] += p[k] * q[k];
        }
    }
    (s[0] + s[1]) + (s[2] + s[3]) + tail
}

/// First column of the length-`L` circulant whose leading `n x n` block is
/// `t`: `[a_0, a_-1, ..., a_-(n-1), 0, ..., 0, a_(n-1), ..., a_1]`.
pub fn embedding_column(t: &ToeplitzOperator) -> Vec<f64> {
    let n = t.dim();
    let len = embedding_len(n);
    let mut c = vec![0.0; len];
    c[..n].copy_from_slice(&t.first_col);
    for k in 1..n {
        c[len - k] = t.first_row[k];
    }
    c
}

/// Smallest power of two `>= 2n`.
pub fn embedding_len(n: usize) -> usize {
    (2 * n).next_power_of_two()
}

/// Eigenvalues of the embedding circulant, with the FFT plan that produced them.
#[derive(Debug, Clone)]
pub struct CirculantSpectrum {
    n: usize,
    eigenvalues: Vec<Complex64>,
    /// `eigenvalues / L` in bit-reversed order, matching the unordered
    /// transforms used by the products.
    scaled: Vec<Complex64>,
    plan: Arc<Fft>,
}

thread_local! {
    static SCRATCH: RefCell<Vec<Complex64>> = const { RefCell::new(Vec::new()) };
}

/// Embeds `t` in a circulant and returns the DFT of its first column.
pub fn embed_circulant(t: &ToeplitzOperator) -> CirculantSpectrum {
    let column = embedding_column(t);
    let plan = Arc::new(Fft::new(column.len()).expect("embedding length is a power of two"));
    let mut eigenvalues: Vec<Complex64> =
        column.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    plan.process(&mut eigenvalues, Direction::Forward);
    // fold the inverse-transform normalisation into the spectrum
    let scale = 1.0 / column.len() as f64;
    let mut scaled: Vec<Complex64> = eigenvalues.iter().map(|z| z * scale).collect();
    plan.bit_reverse(&mut scaled);
    CirculantSpectrum {
        scaled,
        n: t.dim(),
        eigenvalues,
        plan,
    }
}

impl CirculantSpectrum {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Embedding length `L`.
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn eigenvalues(&self) -> &[Complex64] {
        &self.eigenvalues
    }

    fn convolve(&self, buf: &mut [Complex64]) {
        self.plan.forward_to_bitrev(buf);
        for (z, &lam) in buf.iter_mut().zip(&self.scaled) {
            *z *= lam;
        }
        self.plan.inverse_from_bitrev(buf);
    }

    /// Applies the Toeplitz block to two real vectors with one complex
    /// transform pair, using `T (a + i b) = T a + i T b`.
    pub(crate) fn apply_pair_into(
        &self,
        a: &[f64],
        b: &[f64],
        ya: &mut [f64],
        yb: &mut [f64],
        buf: &mut Vec<Complex64>,
    ) {
        buf.clear();
        buf.extend(a.iter().zip(b).map(|(&re, &im)| Complex64::new(re, im)));
        buf.resize(self.len(), Complex64::new(0.0, 0.0));
        self.convolve(buf);
        for ((z, ra), rb) in buf.iter().zip(ya.iter_mut()).zip(yb.iter_mut()) {
            *ra = z.re;
            *rb = z.im;
        }
    }

    pub(crate) fn apply_with_buffer(&self, x: &[f64], y: &mut [f64], buf: &mut Vec<Complex64>) {
        buf.clear();
        buf.extend(x.iter().map(|&v| Complex64::new(v, 0.0)));
        buf.resize(self.len(), Complex64::new(0.0, 0.0));
        self.convolve(buf);
        for (yi, z) in y.iter_mut().zip(buf.iter()) {
            *yi = z.re;
        }
    }

    /// Complex output of the circulant product before truncation; used to
    /// check that the imaginary residue stays at rounding level.
    pub fn circulant_apply_full(&self, x: &[f64]) -> Vec<Complex64> {
        let mut buf: Vec<Complex64> = x.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        buf.resize(self.len(), Complex64::new(0.0, 0.0));
        self.convolve(&mut buf);
        buf
    }
}

impl LinearOperator for CirculantSpectrum {
    fn dim(&self) -> usize {
        self.n
    }

    fn apply_into(&self, x: &[f64], y: &mut [f64]) {
        SCRATCH.with(|buf| self.apply_with_buffer(x, y, &mut buf.borrow_mut()));
    }
}

/// FFT-based product `t x`, where `spec` was built from `t`.
pub fn toeplitz_matvec(spec: &CirculantSpectrum, x: &[f64]) -> Result<Vec<f64>> {
    if x.len() != spec.n {
        return Err(Error::Size(format!(
            "vector has length {} but operator has dimension {}",
            x.len(),
            spec.n
        )));
    }
    Ok(spec.apply(x))
}

/// Forward substitution for a lower-triangular Toeplitz system; `O(n^2)`.
pub fn lower_toeplitz_forward_solve(t: &ToeplitzOperator, b: &[f64]) -> Result<Vec<f64>> {
    if t.structure != Structure::LowerTriangular {
        return Err(Error::Config(
            "forward substitution needs a lower-triangular operator".into(),
        ));
    }
    let n = t.dim();
    if b.len() != n {
        return Err(Error::Size(format!(
            "right-hand side has length {} but operator has dimension {n}",
            b.len()
        )));
    }
    let d = t.first_col[0];
    if d == 0.0 {
        return Err(Error::Singular("zero on the diagonal".into()));
    }
    let mut x = vec![0.0; n];
    for i in 0..n {
        let hist: f64 = t.first_col[1..=i].iter().zip(x[..i].iter().rev()).map(|(c, v)| c * v).sum();
        x[i] = (b[i] - hist) / d;
    }
    Ok(x)
}
