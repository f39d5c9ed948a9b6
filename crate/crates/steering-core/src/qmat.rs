//! Dense complex linear algebra for small Hilbert spaces.
//!
//! Everything in this crate works on matrices of dimension a few dozen at
//! most (two qudits, or four phase-space quadratures), so the solvers here
//! favour robustness and determinism over asymptotic speed: a cyclic Jacobi
//! eigensolver for Hermitian matrices and a partially pivoted LU for
//! inversion. Both are deterministic across runs on the same platform.

use num_complex::Complex;

use crate::{Error, Result};

/// Complex scalar used throughout the crate.
pub type C64 = Complex<f64>;

/// Asymmetry above which a would-be Hermitian matrix is rejected instead of
/// symmetrized.
pub const HERMITICITY_TOL: f64 = 1e-12;

/// Default relative tolerance for positive-semidefiniteness tests.
pub const PSD_TOL: f64 = 1e-9;

/// Dense row-major complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<C64>,
}

impl ComplexMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<C64>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "entry count {} does not match {}x{}",
                entries.len(),
                rows,
                cols
            )));
        }
        Ok(Self { rows, cols, entries })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, entries: vec![C64::new(0.0, 0.0); rows * cols] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim, dim);
        for i in 0..dim {
            m[(i, i)] = C64::new(1.0, 0.0);
        }
        m
    }

    /// Build from a closure over (row, col).
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                entries.push(f(r, c));
            }
        }
        Self { rows, cols, entries }
    }

    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        let entries = rows.iter().flatten().map(|&x| C64::new(x, 0.0)).collect();
        Self::new(r, c, entries)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[C64] {
        &self.entries
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..rhs.cols {
                    out[(i, j)] += a * rhs[(k, j)];
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        self.zip_with(rhs, |a, b| a + b)
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        self.zip_with(rhs, |a, b| a - b)
    }

    fn zip_with(&self, rhs: &Self, f: impl Fn(C64, C64) -> C64) -> Result<Self> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(Error::Dimension(format!(
                "shape mismatch {}x{} vs {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let entries = self
            .entries
            .iter()
            .zip(&rhs.entries)
            .map(|(&a, &b)| f(a, b))
            .collect();
        Ok(Self { rows: self.rows, cols: self.cols, entries })
    }

    pub fn scale(&self, s: C64) -> Self {
        let entries = self.entries.iter().map(|&e| e * s).collect();
        Self { rows: self.rows, cols: self.cols, entries }
    }

    pub fn scale_re(&self, s: f64) -> Self {
        self.scale(C64::new(s, 0.0))
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)])
    }

    pub fn conj(&self) -> Self {
        let entries = self.entries.iter().map(|e| e.conj()).collect();
        Self { rows: self.rows, cols: self.cols, entries }
    }

    pub fn trace(&self) -> C64 {
        debug_assert!(self.is_square());
        (0..self.rows).map(|i| self[(i, i)]).sum()
    }

    /// Largest entry magnitude; used for relative tolerances.
    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|e| e.norm()).fold(0.0, f64::max)
    }

    /// Maximum deviation from Hermitian symmetry, `max |m - m†|`.
    pub fn hermitian_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.rows {
            for j in i..self.cols {
                let d = (self[(i, j)] - self[(j, i)].conj()).norm();
                worst = worst.max(d);
            }
        }
        worst
    }

    /// Inverse via LU with partial pivoting.
    ///
    /// `context` names the matrix in the singularity error.
    pub fn inverse(&self, context: &str) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::Dimension("inverse of non-square matrix".into()));
        }
        let n = self.rows;
        let mut a = self.entries.clone();
        let mut inv = Self::identity(n);
        let scale = self.max_abs().max(1.0);
        for col in 0..n {
            let (pivot_row, pivot_mag) = (col..n)
                .map(|r| (r, a[r * n + col].norm()))
                .max_by(|x, y| x.1.total_cmp(&y.1))
                .expect("non-empty column");
            if pivot_mag <= 1e-14 * scale {
                return Err(Error::SingularBlock(context.to_string()));
            }
            if pivot_row != col {
                for j in 0..n {
                    a.swap(col * n + j, pivot_row * n + j);
                    inv.entries.swap(col * n + j, pivot_row * n + j);
                }
            }
            let pivot = a[col * n + col];
            for j in 0..n {
                a[col * n + j] /= pivot;
                inv.entries[col * n + j] /= pivot;
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let factor = a[r * n + col];
                if factor.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..n {
                    let ac = a[col * n + j];
                    a[r * n + j] -= factor * ac;
                    let ic = inv.entries[col * n + j];
                    inv.entries[r * n + j] -= factor * ic;
                }
            }
        }
        Ok(inv)
    }
}

impl std::ops::Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;
    fn index(&self, (r, c): (usize, usize)) -> &C64 {
        &self.entries[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut C64 {
        &mut self.entries[r * self.cols + c]
    }
}

/// Kronecker product; dimensions multiply.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let rows = a.rows() * b.rows();
    let cols = a.cols() * b.cols();
    let mut out = ComplexMatrix::zeros(rows, cols);
    for ia in 0..a.rows() {
        for ja in 0..a.cols() {
            let f = a[(ia, ja)];
            if f.norm_sqr() == 0.0 {
                continue;
            }
            for ib in 0..b.rows() {
                for jb in 0..b.cols() {
                    out[(ia * b.rows() + ib, ja * b.cols() + jb)] = f * b[(ib, jb)];
                }
            }
        }
    }
    out
}

/// Hermitian matrix, enforced at construction.
///
/// Asymmetry below [`HERMITICITY_TOL`] is absorbed by replacing the matrix
/// with `(m + m†)/2`; anything larger is rejected as a real bug.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    m: ComplexMatrix,
}

impl HermitianMatrix {
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::Dimension("Hermitian matrix must be square".into()));
        }
        let defect = m.hermitian_defect();
        let tol = HERMITICITY_TOL * m.max_abs().max(1.0);
        if defect > tol {
            return Err(Error::NotHermitian { defect });
        }
        let sym = m.add(&m.adjoint()).expect("same shape").scale_re(0.5);
        Ok(Self { m: sym })
    }

    pub fn zeros(dim: usize) -> Self {
        Self { m: ComplexMatrix::zeros(dim, dim) }
    }

    pub fn identity(dim: usize) -> Self {
        Self { m: ComplexMatrix::identity(dim) }
    }

    pub fn dim(&self) -> usize {
        self.m.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.m
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.m
    }

    pub fn trace(&self) -> f64 {
        self.m.trace().re
    }

    /// All eigenvalues, ascending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let (vals, _) = jacobi_hermitian(&self.m, false);
        vals
    }

    /// Eigenvalues (ascending) and the matching unitary of column eigenvectors.
    pub fn eigen(&self) -> (Vec<f64>, ComplexMatrix) {
        let (vals, vecs) = jacobi_hermitian(&self.m, true);
        (vals, vecs.expect("vectors requested"))
    }

    pub fn min_eigenvalue(&self) -> f64 {
        *self
            .eigenvalues()
            .first()
            .expect("eigenvalues of non-empty matrix")
    }

    /// Spectral norm, `max |eigenvalue|`.
    pub fn spectral_norm(&self) -> f64 {
        let vals = self.eigenvalues();
        vals.first()
            .map(|lo| lo.abs())
            .unwrap_or(0.0)
            .max(vals.last().map(|hi| hi.abs()).unwrap_or(0.0))
    }

    /// Positive semidefinite within a relative tolerance: true iff
    /// `min_eigenvalue >= -tol * max(1, spectral_norm)`.
    pub fn is_psd(&self, tol: f64) -> bool {
        let vals = self.eigenvalues();
        let norm = vals
            .first()
            .map(|lo| lo.abs())
            .unwrap_or(0.0)
            .max(vals.last().map(|hi| hi.abs()).unwrap_or(0.0));
        let min = vals.first().copied().unwrap_or(0.0);
        min >= -tol * norm.max(1.0)
    }
}

/// Which diagonal block of a 2x2-blocked matrix gets inverted.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SchurBlock {
    /// Invert the upper-left block `P`, producing `Δ_P = Q - R† P⁻¹ R`.
    Upper,
    /// Invert the lower-right block `Q`, producing `Δ_Q = P - R Q⁻¹ R†`.
    Lower,
}

/// Schur complement of a Hermitian matrix blocked as `[[P, R], [R†, Q]]`
/// with `P` of dimension `split`.
///
/// The pivot block must be nonsingular (min |eigenvalue| > 1e-12); a
/// singular pivot is reported by name.
pub fn schur_complement(
    m: &HermitianMatrix,
    split: usize,
    which: SchurBlock,
) -> Result<HermitianMatrix> {
    let n = m.dim();
    if split == 0 || split >= n {
        return Err(Error::Dimension(format!(
            "block split {split} out of range for dimension {n}"
        )));
    }
    let full = m.matrix();
    let slice = |r0: usize, r1: usize, c0: usize, c1: usize| {
        ComplexMatrix::from_fn(r1 - r0, c1 - c0, |r, c| full[(r0 + r, c0 + c)])
    };
    let p = slice(0, split, 0, split);
    let r = slice(0, split, split, n);
    let q = slice(split, n, split, n);

    let (pivot, pivot_name, other, coupling) = match which {
        SchurBlock::Upper => (p, "upper-left block P", q, r),
        SchurBlock::Lower => (q, "lower-right block Q", p, r.adjoint()),
    };
    let pivot_h = HermitianMatrix::new(pivot.clone())?;
    if pivot_h
        .eigenvalues()
        .iter()
        .any(|ev| ev.abs() <= 1e-12)
    {
        return Err(Error::SingularBlock(pivot_name.to_string()));
    }
    let pinv = pivot.inverse(pivot_name)?;
    // Δ = other - coupling† pivot⁻¹ coupling
    let corr = coupling.adjoint().mul(&pinv.mul(&coupling)?)?;
    HermitianMatrix::new(other.sub(&corr)?)
}

/// Partial trace over the first (Alice) factor of a `dA·dB`-dimensional
/// bipartite operator, with basis ordering `|i⟩⊗|j⟩ ↦ i·dB + j`.
pub fn partial_trace_a(w: &HermitianMatrix, da: usize, db: usize) -> Result<HermitianMatrix> {
    if w.dim() != da * db {
        return Err(Error::Dimension(format!(
            "partial trace of a {} dim matrix as {}x{}",
            w.dim(),
            da,
            db
        )));
    }
    let full = w.matrix();
    let out = ComplexMatrix::from_fn(db, db, |j, k| {
        (0..da).map(|i| full[(i * db + j, i * db + k)]).sum()
    });
    HermitianMatrix::new(out)
}

/// Cyclic Jacobi eigendecomposition of a Hermitian matrix.
///
/// Each rotation annihilates one off-diagonal pair exactly; sweeps repeat
/// until the off-diagonal Frobenius norm falls below machine-level relative
/// tolerance. Fixed sweep order keeps the result deterministic.
fn jacobi_hermitian(m: &ComplexMatrix, want_vectors: bool) -> (Vec<f64>, Option<ComplexMatrix>) {
    let n = m.rows();
    let mut a = m.clone();
    let mut v = want_vectors.then(|| ComplexMatrix::identity(n));

    let fro: f64 = a.entries().iter().map(|e| e.norm_sqr()).sum::<f64>().sqrt();
    let stop = 1e-15 * fro.max(f64::MIN_POSITIVE);

    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|p| ((p + 1)..n).map(move |q| (p, q)))
            .map(|(p, q)| a[(p, q)].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= stop {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                let r = apq.norm();
                if r <= stop / (n as f64) {
                    continue;
                }
                let phase = apq / r; // apq = r e^{iθ}
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let tau = (aqq - app) / (2.0 * r);
                // smaller-magnitude root of t² - 2τt - 1 = 0
                let t = if tau >= 0.0 {
                    -1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;

                // Unitary differs from identity only in the (p,q) plane:
                //   J[p][p] = c, J[p][q] = -s·phase, J[q][p] = s·conj(phase), J[q][q] = c.
                let sp = C64::new(s, 0.0) * phase;

                // A <- J† A J: rows then columns.
                for j in 0..n {
                    let arp = a[(p, j)];
                    let arq = a[(q, j)];
                    a[(p, j)] = arp * c + arq * sp;
                    a[(q, j)] = -arp * sp.conj() + arq * c;
                }
                for i in 0..n {
                    let acp = a[(i, p)];
                    let acq = a[(i, q)];
                    a[(i, p)] = acp * c + acq * sp.conj();
                    a[(i, q)] = -acp * sp + acq * c;
                }
                let new_app = app * c * c + 2.0 * r * s * c + aqq * s * s;
                let new_aqq = app * s * s - 2.0 * r * s * c + aqq * c * c;
                a[(p, p)] = C64::new(new_app, 0.0);
                a[(q, q)] = C64::new(new_aqq, 0.0);
                a[(p, q)] = C64::new(0.0, 0.0);
                a[(q, p)] = C64::new(0.0, 0.0);

                if let Some(vm) = v.as_mut() {
                    for i in 0..n {
                        let vp = vm[(i, p)];
                        let vq = vm[(i, q)];
                        vm[(i, p)] = vp * c + vq * sp.conj();
                        vm[(i, q)] = -vp * sp + vq * c;
                    }
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let vals: Vec<f64> = order.iter().map(|&i| a[(i, i)].re).collect();
    let vecs = v.map(|vm| ComplexMatrix::from_fn(n, n, |r, c| vm[(r, order[c])]));
    (vals, vecs)
}
