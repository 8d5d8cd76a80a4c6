//! Dense complex matrix helpers shared by the state, measure and spin code.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Result, TomoError};

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;

pub const I: C64 = C64::new(0.0, 1.0);

/// Eigen-decomposition of a Hermitian matrix with eigenvalues in ascending
/// order; column `k` of `vectors` belongs to `values[k]`.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: CMatrix,
}

impl HermitianEigen {
    pub fn new(m: &CMatrix) -> Self {
        let n = m.nrows();
        // nalgebra only reads the lower triangle; symmetrize first so that
        // tiny Hermiticity defects do not bias the result.
        let mut sym = hermitian_part(m);
        // Entries below eps^2 * max are invisible to the solver anyway, but
        // squaring them underflows inside the Householder steps and yields
        // NaN (e.g. the far tail of a coherent state at large dimension).
        let floor = f64::EPSILON * f64::EPSILON * max_abs(&sym);
        sym.iter_mut()
            .filter(|z| z.norm() < floor)
            .for_each(|z| *z = C64::new(0.0, 0.0));
        let eig = SymmetricEigen::new(sym);
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
        let vectors = CMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
        HermitianEigen { values, vectors }
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }

    /// `V f(Λ) V†`.
    pub fn apply_fn(&self, f: impl Fn(f64) -> C64) -> CMatrix {
        let n = self.dim();
        let mut scaled = self.vectors.clone();
        for (k, &lam) in self.values.iter().enumerate() {
            let fk = f(lam);
            for r in 0..n {
                scaled[(r, k)] *= fk;
            }
        }
        &scaled * self.vectors.adjoint()
    }

    /// Diagonal `<v_k| a |v_k>` of an operator in the eigenbasis.
    pub fn diagonal_of(&self, a: &CMatrix) -> Vec<C64> {
        let av = a * &self.vectors;
        (0..self.dim())
            .map(|k| self.vectors.column(k).dotc(&av.column(k)))
            .collect()
    }
}

pub fn hermitian_part(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()).scale(0.5)
}

/// Largest entrywise modulus of `m - m†`.
pub fn hermiticity_defect(m: &CMatrix) -> f64 {
    max_abs(&(m - m.adjoint()))
}

pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn trace(m: &CMatrix) -> C64 {
    m.diagonal().iter().sum()
}

pub fn require_square(m: &CMatrix) -> Result<usize> {
    if m.nrows() != m.ncols() {
        return Err(TomoError::DimensionMismatch {
            expected: m.nrows(),
            found: m.ncols(),
        });
    }
    Ok(m.nrows())
}

pub fn require_hermitian(m: &CMatrix, tolerance: f64) -> Result<()> {
    require_square(m)?;
    let defect = hermiticity_defect(m);
    if defect > tolerance {
        return Err(TomoError::NotHermitian { defect, tolerance });
    }
    Ok(())
}

/// Top-left `dim x dim` block.
pub fn compress(m: &CMatrix, dim: usize) -> CMatrix {
    m.view((0, 0), (dim, dim)).into_owned()
}

/// Zero-pad a square matrix to `dim x dim`.
pub fn embed(m: &CMatrix, dim: usize) -> CMatrix {
    let mut out = CMatrix::zeros(dim, dim);
    let n = m.nrows().min(dim);
    out.view_mut((0, 0), (n, n)).copy_from(&m.view((0, 0), (n, n)));
    out
}

/// `Tr(a b)` without forming the product.
pub fn trace_of_product(a: &CMatrix, b: &CMatrix) -> C64 {
    let n = a.nrows();
    let mut acc = C64::new(0.0, 0.0);
    for i in 0..n {
        for k in 0..n {
            acc += a[(i, k)] * b[(k, i)];
        }
    }
    acc
}

pub fn from_real_rows(rows: &[Vec<f64>], imag: Option<&[Vec<f64>]>) -> Result<CMatrix> {
    let n = rows.len();
    if n == 0 {
        return Err(TomoError::InvalidParameter("empty matrix".into()));
    }
    for row in rows {
        if row.len() != n {
            return Err(TomoError::DimensionMismatch {
                expected: n,
                found: row.len(),
            });
        }
    }
    if let Some(im) = imag {
        if im.len() != n || im.iter().any(|r| r.len() != n) {
            return Err(TomoError::InvalidParameter(
                "imaginary part must match the real part's shape".into(),
            ));
        }
    }
    Ok(CMatrix::from_fn(n, n, |r, c| {
        C64::new(rows[r][c], imag.map_or(0.0, |im| im[r][c]))
    }))
}
