//! Covariance-matrix criteria for Gaussian states.
//!
//! Conventions: quadratures are ordered `(q₁, p₁, q₂, p₂, …)` with Alice's
//! modes first, and are vacuum-normalized — `q̂ = â + â†`, so the vacuum
//! variance is 1 and the canonical commutator is `[R_i, R_j] = 2iΣ_ij`.
//! (ħ conventions differ across the literature; everything here assumes
//! this one.) A symmetric matrix V is a valid state CM iff `V + iΣ ⪰ 0`.
//!
//! A state is *not* steerable by Alice's Gaussian measurements iff
//! `V + 0_α ⊕ iΣ_β ⪰ 0`. When that holds, the ensemble CM
//! `U = V_β − Cᵀ V_α⁻¹ C` simulates every conditioned state; equivalently
//! (by the Schur complement with respect to the Alice block) steerability
//! is exactly the failure of `U + iΣ_β ⪰ 0`, which gives an independent
//! second route to the same verdict.

use rand::Rng;
use serde::Deserialize;

use crate::qmat::{schur_complement, ComplexMatrix, HermitianMatrix, SchurBlock, C64, PSD_TOL};
use crate::{Error, Result};

/// Symmetry tolerance for covariance matrices.
pub const SYMMETRY_TOL: f64 = 1e-10;

/// Real symmetric covariance matrix of a bipartite Gaussian state, blocked
/// as `[[V_α, C], [Cᵀ, V_β]]`.
#[derive(Debug, Clone)]
pub struct CovarianceMatrix {
    n_modes_a: usize,
    n_modes_b: usize,
    v: ComplexMatrix,
}

/// Wire schema for covariance-matrix files:
/// `{"n_modes_a": 1, "n_modes_b": 1, "matrix": [[…], …]}` with the matrix
/// of dimension `2(n_a + n_b)`, row-major, quadratures ordered
/// `(q₁, p₁, …)`, Alice's modes first.
#[derive(Deserialize)]
struct CmFile {
    n_modes_a: usize,
    n_modes_b: usize,
    matrix: Vec<Vec<f64>>,
}

impl CovarianceMatrix {
    pub fn new(n_modes_a: usize, n_modes_b: usize, rows: &[Vec<f64>]) -> Result<Self> {
        let dim = 2 * (n_modes_a + n_modes_b);
        if n_modes_a == 0 || n_modes_b == 0 {
            return Err(Error::InvalidCovariance("each party needs at least one mode".into()));
        }
        if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
            return Err(Error::MalformedInput(format!(
                "covariance matrix must be {dim}x{dim} for {n_modes_a}+{n_modes_b} modes"
            )));
        }
        let m = ComplexMatrix::from_real_rows(rows)?;
        let defect = m.sub(&m.transpose())?.max_abs();
        if defect > SYMMETRY_TOL * m.max_abs().max(1.0) {
            return Err(Error::InvalidCovariance(format!(
                "not symmetric (defect {defect:.3e})"
            )));
        }
        let v = m.add(&m.transpose())?.scale_re(0.5);
        Ok(Self { n_modes_a, n_modes_b, v })
    }

    fn from_blocks(
        n_modes_a: usize,
        n_modes_b: usize,
        va: &ComplexMatrix,
        c: &ComplexMatrix,
        vb: &ComplexMatrix,
    ) -> Self {
        let (da, db) = (2 * n_modes_a, 2 * n_modes_b);
        let v = ComplexMatrix::from_fn(da + db, da + db, |r, col| match (r < da, col < da) {
            (true, true) => va[(r, col)],
            (true, false) => c[(r, col - da)],
            (false, true) => c[(col, r - da)],
            (false, false) => vb[(r - da, col - da)],
        });
        Self { n_modes_a, n_modes_b, v }
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let file: CmFile =
            serde_json::from_str(s).map_err(|e| Error::MalformedInput(e.to_string()))?;
        Self::new(file.n_modes_a, file.n_modes_b, &file.matrix)
    }

    pub fn n_modes_a(&self) -> usize {
        self.n_modes_a
    }

    pub fn n_modes_b(&self) -> usize {
        self.n_modes_b
    }

    pub fn dim(&self) -> usize {
        2 * (self.n_modes_a + self.n_modes_b)
    }

    pub fn full(&self) -> &ComplexMatrix {
        &self.v
    }

    pub fn block_a(&self) -> ComplexMatrix {
        let da = 2 * self.n_modes_a;
        ComplexMatrix::from_fn(da, da, |r, c| self.v[(r, c)])
    }

    pub fn block_b(&self) -> ComplexMatrix {
        let da = 2 * self.n_modes_a;
        let db = 2 * self.n_modes_b;
        ComplexMatrix::from_fn(db, db, |r, c| self.v[(da + r, da + c)])
    }

    /// Off-diagonal block C (Alice rows, Bob columns).
    pub fn block_c(&self) -> ComplexMatrix {
        let da = 2 * self.n_modes_a;
        let db = 2 * self.n_modes_b;
        ComplexMatrix::from_fn(da, db, |r, c| self.v[(r, da + c)])
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        matrix_rows(&self.v)
    }
}

pub fn matrix_rows(m: &ComplexMatrix) -> Vec<Vec<f64>> {
    (0..m.rows())
        .map(|r| (0..m.cols()).map(|c| m[(r, c)].re).collect())
        .collect()
}

/// Symplectic form `Σ = ⊕ J` with `J = [[0, 1], [-1, 0]]`, as a real matrix.
pub fn symplectic_form(n_modes: usize) -> ComplexMatrix {
    let mut s = ComplexMatrix::zeros(2 * n_modes, 2 * n_modes);
    for k in 0..n_modes {
        s[(2 * k, 2 * k + 1)] = C64::new(1.0, 0.0);
        s[(2 * k + 1, 2 * k)] = C64::new(-1.0, 0.0);
    }
    s
}

/// `iΣ` as a Hermitian complex matrix.
fn i_sigma(n_modes: usize) -> ComplexMatrix {
    symplectic_form(n_modes).scale(C64::new(0.0, 1.0))
}

fn hermitian(m: ComplexMatrix) -> HermitianMatrix {
    HermitianMatrix::new(m).expect("construction guarantees Hermitian input")
}

/// Validity of a state CM: `V + iΣ ⪰ 0`.
pub fn is_valid_cm(v: &CovarianceMatrix) -> bool {
    let n = v.n_modes_a + v.n_modes_b;
    let m = v.full().add(&i_sigma(n)).expect("same dims");
    hermitian(m).is_psd(PSD_TOL)
}

/// Gaussian measurement for Alice, described by a CM T with `T + iΣ_α ⪰ 0`.
#[derive(Debug, Clone)]
pub struct GaussianMeasurement {
    t: ComplexMatrix,
}

impl GaussianMeasurement {
    pub fn new(n_modes: usize, rows: &[Vec<f64>]) -> Result<Self> {
        let dim = 2 * n_modes;
        if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
            return Err(Error::MalformedInput(format!(
                "measurement CM must be {dim}x{dim}"
            )));
        }
        let m = ComplexMatrix::from_real_rows(rows)?;
        Self::from_matrix(m)
    }

    pub fn from_matrix(m: ComplexMatrix) -> Result<Self> {
        let n_modes = m.rows() / 2;
        let defect = m.sub(&m.transpose())?.max_abs();
        if defect > SYMMETRY_TOL * m.max_abs().max(1.0) {
            return Err(Error::InvalidCovariance(format!(
                "measurement CM not symmetric (defect {defect:.3e})"
            )));
        }
        let t = m.add(&m.transpose())?.scale_re(0.5);
        let check = t.add(&i_sigma(n_modes))?;
        if !hermitian(check).is_psd(PSD_TOL) {
            return Err(Error::InvalidCovariance(
                "measurement CM violates T + iΣ ⪰ 0".into(),
            ));
        }
        Ok(Self { t })
    }

    /// Heterodyne detection, `T = I`.
    pub fn heterodyne(n_modes: usize) -> Self {
        Self { t: ComplexMatrix::identity(2 * n_modes) }
    }

    /// Single-mode measurement squeezed to variance `t` along the axis at
    /// angle `theta` in the (q, p) plane, `1/t` along the conjugate axis.
    /// `t → 0` approaches homodyne detection of that quadrature.
    pub fn squeezed(t: f64, theta: f64) -> Result<Self> {
        if !t.is_finite() || t <= 0.0 {
            return Err(Error::ParameterOutOfRange {
                name: "t",
                value: t,
                range: "t > 0",
            });
        }
        let (c, s) = (theta.cos(), theta.sin());
        let rot = |a: f64, b: f64| {
            // R diag(a, b) Rᵀ
            vec![
                vec![a * c * c + b * s * s, (a - b) * s * c],
                vec![(a - b) * s * c, a * s * s + b * c * c],
            ]
        };
        Self::new(1, &rot(t, 1.0 / t))
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.t
    }

    pub fn n_modes(&self) -> usize {
        self.t.rows() / 2
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        matrix_rows(&self.t)
    }
}

/// Bob's conditioned CM after Alice's Gaussian measurement:
/// `V_β^A = V_β − Cᵀ (V_α + T)⁻¹ C` (independent of her outcome).
pub fn conditioned_cm(v: &CovarianceMatrix, t: &GaussianMeasurement) -> Result<ComplexMatrix> {
    if t.n_modes() != v.n_modes_a {
        return Err(Error::Dimension(format!(
            "measurement acts on {} modes but Alice holds {}",
            t.n_modes(),
            v.n_modes_a
        )));
    }
    let va_t = v.block_a().add(t.matrix())?;
    if hermitian(va_t.clone())
        .eigenvalues()
        .iter()
        .any(|ev| ev.abs() <= 1e-12)
    {
        return Err(Error::SingularBlock("V_alpha + T".into()));
    }
    let inv = va_t.inverse("V_alpha + T")?;
    let c = v.block_c();
    v.block_b().sub(&c.adjoint().mul(&inv.mul(&c)?)?)
}

/// Peres–Horodecki separability for 1+1 modes: `ΛVΛ + iΣ ⪰ 0` with
/// `Λ = diag(1, 1, 1, −1)` (partial transposition flips Bob's momentum).
pub fn is_separable_two_mode(v: &CovarianceMatrix) -> Result<bool> {
    if v.n_modes_a != 1 || v.n_modes_b != 1 {
        return Err(Error::Dimension(format!(
            "partial-transpose test implemented for 1+1 modes, got {}+{}",
            v.n_modes_a, v.n_modes_b
        )));
    }
    let mut lambda = ComplexMatrix::identity(4);
    lambda[(3, 3)] = C64::new(-1.0, 0.0);
    let tilde = lambda.mul(v.full())?.mul(&lambda)?;
    let m = tilde.add(&i_sigma(2))?;
    Ok(hermitian(m).is_psd(PSD_TOL))
}

/// Steerability of W by Alice's Gaussian measurements: steerable iff
/// `V + 0_α ⊕ iΣ_β` is *not* PSD.
pub fn is_steerable_gaussian(v: &CovarianceMatrix) -> bool {
    !hermitian(lmi_matrix(v)).is_psd(PSD_TOL)
}

/// `V + 0_α ⊕ iΣ_β`.
fn lmi_matrix(v: &CovarianceMatrix) -> ComplexMatrix {
    let da = 2 * v.n_modes_a;
    let mut m = v.full().clone();
    let sigma_b = i_sigma(v.n_modes_b);
    for r in 0..2 * v.n_modes_b {
        for c in 0..2 * v.n_modes_b {
            let add = sigma_b[(r, c)];
            m[(da + r, da + c)] += add;
        }
    }
    m
}

/// The ensemble CM `U = V_β − Cᵀ V_α⁻¹ C` that simulates every conditioned
/// state of a non-steerable W. Computed as the Schur complement of the
/// Alice block of V. It satisfies `U + iΣ_β ⪰ 0` and `V_β^A − U ⪰ 0` for
/// every valid measurement.
pub fn non_steering_ensemble_cm(v: &CovarianceMatrix) -> Result<ComplexMatrix> {
    if is_steerable_gaussian(v) {
        return Err(Error::RequiresNonSteerable);
    }
    let u = schur_complement(
        &hermitian(v.full().clone()),
        2 * v.n_modes_a,
        SchurBlock::Upper,
    )?;
    Ok(u.into_matrix())
}

/// A steering-witness measurement for a steerable CM, plus the data behind
/// its construction.
#[derive(Debug, Clone)]
pub struct SteeringWitness {
    pub measurement: GaussianMeasurement,
    /// Magnitude g of the most negative eigenvalue of
    /// `G = V_α − C (V_β + iΣ_β)⁻¹ Cᵀ`.
    pub g_negativity: f64,
    /// Unit vector in the (q, p) plane along which the measurement squeezes.
    pub axis: [f64; 2],
    /// True when `V_β + iΣ_β` sat on the validity boundary and the inverse
    /// was regularized with +1e-10·I (pure conditional states).
    pub regularized: bool,
}

/// Construct the measurement aligned with the negative direction of the
/// Schur complement `G = V_α − C (V_β + iΣ_β)⁻¹ Cᵀ`: squeezing t = g/2
/// along the real part of the most negative eigenvector, `max(1/t, 10³)`
/// on the conjugate axis so the measurement stays valid.
///
/// This is the measurement whose homodyne-limit conditioning extracts the
/// conditional-variance deficit of a steerable state; see
/// [`witness_pair_certifies`] for the two-quadrature certificate built on
/// it. Note that `G + T ⪰ 0` still holds for every valid T — the witness
/// matrix `V + T ⊕ iΣ_β` is the sum of the two PSD matrices `V + iΣ` and
/// `(T − iΣ_α) ⊕ 0`, so its Schur complement can never go strictly
/// negative. Certifying steering therefore takes a *pair* of conjugate
/// measurements (or the ensemble route in [`non_steering_ensemble_cm`]),
/// never a single measurement.
pub fn steering_witness_measurement(v: &CovarianceMatrix) -> Result<SteeringWitness> {
    if !is_steerable_gaussian(v) {
        return Err(Error::RequiresSteerable);
    }
    if v.n_modes_a != 1 {
        return Err(Error::Dimension(
            "witness construction implemented for a single Alice mode".into(),
        ));
    }
    let vb_is = v.block_b().add(&i_sigma(v.n_modes_b))?;
    let near_singular = hermitian(vb_is.clone())
        .eigenvalues()
        .iter()
        .any(|ev| ev.abs() < 1e-9);
    let (vb_inv_arg, regularized) = if near_singular {
        (
            vb_is.add(&ComplexMatrix::identity(2 * v.n_modes_b).scale_re(1e-10))?,
            true,
        )
    } else {
        (vb_is, false)
    };
    let inv = vb_inv_arg.inverse("V_beta + i*Sigma_beta")?;
    let c = v.block_c();
    let g = HermitianMatrix::new(v.block_a().sub(&c.mul(&inv.mul(&c.adjoint())?)?)?)?;
    let (vals, vecs) = g.eigen();
    let lambda_min = vals[0];
    if lambda_min >= 0.0 {
        // Only possible within the PSD tolerance band right at the boundary.
        return Err(Error::RequiresSteerable);
    }
    let g_neg = -lambda_min;
    let x = [vecs[(0, 0)].re, vecs[(1, 0)].re];
    let y = [vecs[(0, 0)].im, vecs[(1, 0)].im];
    let nx = (x[0] * x[0] + x[1] * x[1]).sqrt();
    let ny = (y[0] * y[0] + y[1] * y[1]).sqrt();
    let (dir, norm) = if nx >= ny { (x, nx) } else { (y, ny) };
    let axis = [dir[0] / norm, dir[1] / norm];
    let theta = axis[1].atan2(axis[0]);
    let t = g_neg / 2.0;
    let kappa = (1.0 / t).max(1e3);
    let (cth, sth) = (theta.cos(), theta.sin());
    let rows = vec![
        vec![t * cth * cth + kappa * sth * sth, (t - kappa) * sth * cth],
        vec![(t - kappa) * sth * cth, t * sth * sth + kappa * cth * cth],
    ];
    Ok(SteeringWitness {
        measurement: GaussianMeasurement::new(1, &rows)?,
        g_negativity: g_neg,
        axis,
        regularized,
    })
}

/// Two-quadrature steering certificate for standard-form CMs.
///
/// Conditioning on near-homodyne q And p measurements bounds the diagonal
/// of any single simulator ensemble CM U: `U₁₁ ≤ V(q_β|q_α)` and
/// `U₂₂ ≤ V(p_β|p_α)`, while validity demands `det U ≥ 1 ⇒ U₁₁U₂₂ ≥ 1`.
/// When the product of conditional variances drops below 1 no such U
/// exists, which certifies steering from two explicit measurements.
pub fn witness_pair_certifies(v: &CovarianceMatrix) -> Result<bool> {
    let (n, m, c, cp) = standard_form_params(v)?;
    let t = 1e-8;
    let vq = m - c * c / (n + t);
    let vp = m - cp * cp / (n + t);
    Ok(vq * vp < 1.0)
}

/// Parameters (n, m, c, c′) of a standard-form CM
/// `[[nI, diag(c, c′)], [diag(c, c′), mI]]`.
pub fn standard_form_params(v: &CovarianceMatrix) -> Result<(f64, f64, f64, f64)> {
    if v.n_modes_a != 1 || v.n_modes_b != 1 {
        return Err(Error::NotStandardForm("needs 1+1 modes".into()));
    }
    let f = v.full();
    let n = f[(0, 0)].re;
    let m = f[(2, 2)].re;
    let c = f[(0, 2)].re;
    let cp = f[(1, 3)].re;
    let tol = 1e-9 * f.max_abs().max(1.0);
    let resid = [
        (f[(1, 1)].re - n).abs(),
        (f[(3, 3)].re - m).abs(),
        f[(0, 1)].re.abs(),
        f[(2, 3)].re.abs(),
        f[(0, 3)].re.abs(),
        f[(1, 2)].re.abs(),
    ];
    if resid.iter().any(|&r| r > tol) {
        return Err(Error::NotStandardForm(
            "off-pattern entries exceed tolerance".into(),
        ));
    }
    Ok((n, m, c, cp))
}

/// Margin of the standard-form separability inequality
/// `(m − c²n/(n²−1))(m − c′²n/(n²−1)) − (1 − cc′/(n²−1))²`;
/// separable iff nonnegative.
pub fn separable_closed_form_margin(n: f64, m: f64, c: f64, cp: f64) -> f64 {
    let d = n * n - 1.0;
    (m - c * c * n / d) * (m - cp * cp * n / d) - (1.0 - c * cp / d).powi(2)
}

/// Margin of the standard-form steerability inequality
/// `(m − c²/n)(m − c′²/n) − 1`; steerable iff negative.
pub fn steerable_closed_form_margin(n: f64, m: f64, c: f64, cp: f64) -> f64 {
    (m - c * c / n) * (m - cp * cp / n) - 1.0
}

/// Product of conditional variances `V(q_β|q_α)·V(p_β|p_α)` for a
/// standard-form CM; an EPR paradox is demonstrated iff it is below 1,
/// which coincides exactly with Gaussian steerability.
pub fn reid_epr_product(v: &CovarianceMatrix) -> Result<f64> {
    let (n, m, c, cp) = standard_form_params(v)?;
    Ok((m - c * c / n) * (m - cp * cp / n))
}

/// Symmetric two-mode family: diagonal `γ = 1 + 2n̄` and correlations
/// `δ = 2η√(n̄(1+n̄))` with signature (+δ on q-q, −δ on p-p).
pub fn symmetric_two_mode_cm(nbar: f64, eta: f64) -> Result<CovarianceMatrix> {
    if !nbar.is_finite() || nbar <= 0.0 {
        return Err(Error::ParameterOutOfRange {
            name: "nbar",
            value: nbar,
            range: "nbar > 0",
        });
    }
    if !(0.0..=1.0).contains(&eta) {
        return Err(Error::ParameterOutOfRange {
            name: "eta",
            value: eta,
            range: "[0, 1]",
        });
    }
    let gamma = 1.0 + 2.0 * nbar;
    let delta = 2.0 * eta * (nbar * (1.0 + nbar)).sqrt();
    let va = ComplexMatrix::identity(2).scale_re(gamma);
    let mut c = ComplexMatrix::zeros(2, 2);
    c[(0, 0)] = C64::new(delta, 0.0);
    c[(1, 1)] = C64::new(-delta, 0.0);
    Ok(CovarianceMatrix::from_blocks(1, 1, &va, &c, &va.clone()))
}

/// Two-mode squeezed vacuum: `n = m = cosh 2r`, `c = −c′ = sinh 2r`.
pub fn two_mode_squeezed_cm(r: f64) -> CovarianceMatrix {
    let n = (2.0 * r).cosh();
    let s = (2.0 * r).sinh();
    let va = ComplexMatrix::identity(2).scale_re(n);
    let mut c = ComplexMatrix::zeros(2, 2);
    c[(0, 0)] = C64::new(s, 0.0);
    c[(1, 1)] = C64::new(-s, 0.0);
    CovarianceMatrix::from_blocks(1, 1, &va, &c, &va.clone())
}

// ── Random instances for verification suites ────────────────────────────────

/// Random standard-form CM with a healthy mix of separable, entangled, and
/// steerable instances (rejection-sampled to validity).
pub fn random_standard_form_cm(rng: &mut impl Rng) -> CovarianceMatrix {
    loop {
        let bucket = rng.random::<f64>();
        let (n, m, c, cp) = if bucket < 0.4 {
            // two-mode squeezed plus thermal noise: steerable for strong
            // squeezing and weak noise
            let r = 0.15 + rng.random::<f64>() * 1.05;
            let t = rng.random::<f64>() * 0.2;
            let nn = (2.0 * r).cosh() + t;
            let s = (2.0 * r).sinh();
            (nn, nn, s, -s)
        } else if bucket < 0.7 {
            let n = 1.0 + rng.random::<f64>() * 3.0 + 1e-2;
            let m = 1.0 + rng.random::<f64>() * 3.0 + 1e-2;
            let cmax = ((n - 1.0) * (m + 1.0)).sqrt().min(((m - 1.0) * (n + 1.0)).sqrt());
            let s = 0.5 + 0.5 * rng.random::<f64>();
            (n, m, s * cmax, -s * cmax)
        } else {
            let n = 1.0 + rng.random::<f64>() * 3.0 + 1e-2;
            let m = 1.0 + rng.random::<f64>() * 3.0 + 1e-2;
            let bound = (n * m).sqrt();
            (
                n,
                m,
                (2.0 * rng.random::<f64>() - 1.0) * bound,
                (2.0 * rng.random::<f64>() - 1.0) * bound,
            )
        };
        let rows = vec![
            vec![n, 0.0, c, 0.0],
            vec![0.0, n, 0.0, cp],
            vec![c, 0.0, m, 0.0],
            vec![0.0, cp, 0.0, m],
        ];
        let v = CovarianceMatrix::new(1, 1, &rows).expect("shape is fixed");
        if is_valid_cm(&v) {
            return v;
        }
    }
}

/// Random valid 1+1 CM: a standard-form draw conjugated by random local
/// phase rotations (which preserve validity and the steering class), with
/// occasional extra isotropic noise.
pub fn random_valid_cm(rng: &mut impl Rng) -> CovarianceMatrix {
    let base = random_standard_form_cm(rng);
    let rot = |theta: f64| {
        let (c, s) = (theta.cos(), theta.sin());
        let mut r = ComplexMatrix::zeros(2, 2);
        r[(0, 0)] = C64::new(c, 0.0);
        r[(0, 1)] = C64::new(s, 0.0);
        r[(1, 0)] = C64::new(-s, 0.0);
        r[(1, 1)] = C64::new(c, 0.0);
        r
    };
    let ra = rot(rng.random::<f64>() * std::f64::consts::TAU);
    let rb = rot(rng.random::<f64>() * std::f64::consts::TAU);
    let local = ComplexMatrix::from_fn(4, 4, |r, c| match (r < 2, c < 2) {
        (true, true) => ra[(r, c)],
        (false, false) => rb[(r - 2, c - 2)],
        _ => C64::new(0.0, 0.0),
    });
    let mut v = local.mul(base.full()).expect("4x4").mul(&local.transpose()).expect("4x4");
    if rng.random::<f64>() < 0.25 {
        let noise = 0.1 * rng.random::<f64>();
        v = v
            .add(&ComplexMatrix::identity(4).scale_re(noise))
            .expect("4x4");
    }
    CovarianceMatrix { n_modes_a: 1, n_modes_b: 1, v }
}

/// Random valid single-mode Gaussian measurement: a rotated squeezed CM
/// plus isotropic noise, so `det T ≥ 1`.
pub fn random_gaussian_measurement(rng: &mut impl Rng) -> GaussianMeasurement {
    let t = (rng.random::<f64>() * 6.0 - 3.0).exp();
    let theta = rng.random::<f64>() * std::f64::consts::PI;
    let noise = rng.random::<f64>();
    let base = GaussianMeasurement::squeezed(t, theta).expect("t > 0");
    let m = base
        .matrix()
        .add(&ComplexMatrix::identity(2).scale_re(noise))
        .expect("2x2");
    GaussianMeasurement::from_matrix(m).expect("noise only helps validity")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lhs_sim::shot_rng;

    fn vacuum() -> CovarianceMatrix {
        CovarianceMatrix::new(
            1,
            1,
            &[
                vec![1.0, 0.0, 0.0, 0.0],
                vec![0.0, 1.0, 0.0, 0.0],
                vec![0.0, 0.0, 1.0, 0.0],
                vec![0.0, 0.0, 0.0, 1.0],
            ],
        )
        .unwrap()
    }

    #[test]
    fn validity_basics() {
        assert!(is_valid_cm(&vacuum()));
        let below = CovarianceMatrix::new(
            1,
            1,
            &[
                vec![0.5, 0.0, 0.0, 0.0],
                vec![0.0, 0.5, 0.0, 0.0],
                vec![0.0, 0.0, 0.5, 0.0],
                vec![0.0, 0.0, 0.0, 0.5],
            ],
        )
        .unwrap();
        assert!(!is_valid_cm(&below));
        for &r in &[0.1, 0.5, 1.0] {
            assert!(is_valid_cm(&two_mode_squeezed_cm(r)), "r = {r}");
        }
    }

    #[test]
    fn pure_two_mode_squeezed_touches_boundary() {
        let v = two_mode_squeezed_cm(0.7);
        let m = hermitian(v.full().add(&i_sigma(2)).unwrap());
        let min = m.eigenvalues()[0].abs();
        assert!(min < 1e-10, "pure-state CM should have a null direction, min = {min}");
    }

    #[test]
    fn conditioned_cm_uncorrelated_and_homodyne() {
        // C = 0 leaves Bob untouched
        let mut rows = vec![vec![0.0; 4]; 4];
        for (i, row) in rows.iter_mut().enumerate() {
            row[i] = if i < 2 { 2.0 } else { 3.0 };
        }
        let v = CovarianceMatrix::new(1, 1, &rows).unwrap();
        let out = conditioned_cm(&v, &GaussianMeasurement::heterodyne(1)).unwrap();
        assert!(out.sub(&v.block_b()).unwrap().max_abs() < 1e-12);

        // near-homodyne q on a two-mode squeezed state: V(q|q) → 1/cosh 2r
        let r = 0.6;
        let v = two_mode_squeezed_cm(r);
        let t = GaussianMeasurement::squeezed(1e-6, 0.0).unwrap();
        let out = conditioned_cm(&v, &t).unwrap();
        let expect = 1.0 / (2.0 * r).cosh();
        assert!((out[(0, 0)].re - expect).abs() < 1e-4);
    }

    #[test]
    fn conditioned_cm_is_valid_for_random_states() {
        let mut rng = shot_rng(0xc0, 0);
        for _ in 0..100 {
            let v = random_valid_cm(&mut rng);
            let out = conditioned_cm(&v, &GaussianMeasurement::heterodyne(1)).unwrap();
            let h = hermitian(out.add(&i_sigma(1)).unwrap());
            assert!(h.is_psd(PSD_TOL));
        }
    }

    #[test]
    fn separability_examples() {
        let mut rows = vec![vec![0.0; 4]; 4];
        for (i, row) in rows.iter_mut().enumerate() {
            row[i] = 2.0;
        }
        let product = CovarianceMatrix::new(1, 1, &rows).unwrap();
        assert!(is_separable_two_mode(&product).unwrap());

        let ent = symmetric_two_mode_cm(1.0, 0.8).unwrap();
        assert!(!is_separable_two_mode(&ent).unwrap());
        let sep = symmetric_two_mode_cm(1.0, 0.6).unwrap();
        assert!(is_separable_two_mode(&sep).unwrap());
    }

    #[test]
    fn steerability_examples() {
        assert!(is_steerable_gaussian(&two_mode_squeezed_cm(0.02)));
        assert!(is_steerable_gaussian(&symmetric_two_mode_cm(1.0, 0.9).unwrap()));
        assert!(!is_steerable_gaussian(&symmetric_two_mode_cm(1.0, 0.8).unwrap()));
        assert!(!is_steerable_gaussian(&vacuum()));
    }

    #[test]
    fn steerability_monotone_in_eta() {
        let mut steerable_seen = false;
        let mut last = false;
        for i in 0..=100 {
            let eta = i as f64 / 100.0;
            let now = is_steerable_gaussian(&symmetric_two_mode_cm(1.0, eta).unwrap());
            if steerable_seen {
                assert!(now, "steerability must be monotone in eta, broke at {eta}");
            }
            steerable_seen |= now;
            last = now;
        }
        assert!(last);
    }

    #[test]
    fn ensemble_cm_for_uncorrelated_state_is_bob_block() {
        let mut rows = vec![vec![0.0; 4]; 4];
        for (i, row) in rows.iter_mut().enumerate() {
            row[i] = if i < 2 { 1.5 } else { 2.5 };
        }
        let v = CovarianceMatrix::new(1, 1, &rows).unwrap();
        let u = non_steering_ensemble_cm(&v).unwrap();
        assert!(u.sub(&v.block_b()).unwrap().max_abs() < 1e-12);
    }

    #[test]
    fn ensemble_cm_postconditions() {
        let v = symmetric_two_mode_cm(1.0, 0.8).unwrap();
        let u = non_steering_ensemble_cm(&v).unwrap();
        // LMI1: U + iΣ_β ⪰ 0
        assert!(hermitian(u.add(&i_sigma(1)).unwrap()).is_psd(PSD_TOL));
        // LMI2 against fixed extreme and random measurements
        let mut checks = vec![
            GaussianMeasurement::heterodyne(1),
            GaussianMeasurement::squeezed(1e-3, 0.0).unwrap(),
        ];
        let mut rng = shot_rng(0xc1, 0);
        checks.extend((0..100).map(|_| random_gaussian_measurement(&mut rng)));
        for t in &checks {
            let vba = conditioned_cm(&v, t).unwrap();
            let diff = hermitian(vba.sub(&u).unwrap());
            assert!(diff.is_psd(PSD_TOL), "LMI2 failed");
        }
    }

    #[test]
    fn ensemble_cm_rejects_steerable_input() {
        assert!(matches!(
            non_steering_ensemble_cm(&two_mode_squeezed_cm(0.5)),
            Err(Error::RequiresNonSteerable)
        ));
    }

    #[test]
    fn ensemble_route_matches_direct_lmi() {
        // Steerability ⟺ failure of U + iΣ_β ⪰ 0, via the Schur complement
        // of the Alice block. Checked on random CMs against the 4x4 LMI.
        let mut rng = shot_rng(0xc2, 0);
        for _ in 0..300 {
            let v = random_valid_cm(&mut rng);
            let direct = is_steerable_gaussian(&v);
            let u = schur_complement(&hermitian(v.full().clone()), 2, SchurBlock::Upper).unwrap();
            let u_route = !hermitian(u.matrix().add(&i_sigma(1)).unwrap()).is_psd(PSD_TOL);
            // skip the tolerance band right at the boundary
            let margin = hermitian(lmi_matrix(&v)).min_eigenvalue().abs();
            if margin < 1e-8 {
                continue;
            }
            assert_eq!(direct, u_route);
        }
    }

    #[test]
    fn witness_measurement_is_valid_and_oriented() {
        for v in [two_mode_squeezed_cm(0.5), symmetric_two_mode_cm(1.0, 0.95).unwrap()] {
            let w = steering_witness_measurement(&v).unwrap();
            assert!(w.g_negativity > 0.0);
            let t = w.measurement.matrix();
            // valid measurement with strong squeezing along the axis
            let check = hermitian(t.add(&i_sigma(1)).unwrap());
            assert!(check.is_psd(PSD_TOL));
            let ax = w.axis;
            let along: f64 = (0..2)
                .map(|i| (0..2).map(|j| ax[i] * t[(i, j)].re * ax[j]).sum::<f64>())
                .sum();
            assert!((along - w.g_negativity / 2.0).abs() < 1e-9);
        }
    }

    #[test]
    fn witness_rejects_non_steerable() {
        assert!(matches!(
            steering_witness_measurement(&symmetric_two_mode_cm(1.0, 0.5).unwrap()),
            Err(Error::RequiresSteerable)
        ));
    }

    #[test]
    fn witness_pair_certificate_matches_steerability() {
        let mut rng = shot_rng(0xc3, 0);
        let mut certified = 0;
        for _ in 0..300 {
            let v = random_standard_form_cm(&mut rng);
            let (n, m, c, cp) = standard_form_params(&v).unwrap();
            let margin = steerable_closed_form_margin(n, m, c, cp);
            if margin.abs() < 1e-6 {
                continue;
            }
            let steerable = is_steerable_gaussian(&v);
            assert_eq!(witness_pair_certifies(&v).unwrap(), steerable);
            certified += steerable as u32;
        }
        assert!(certified > 20, "want a real steerable population, got {certified}");
    }

    #[test]
    fn reid_product_examples() {
        for &r in &[0.2, 0.5, 1.0] {
            let v = two_mode_squeezed_cm(r);
            let product = reid_epr_product(&v).unwrap();
            let expect = 1.0 / (2.0 * r).cosh().powi(2);
            assert!((product - expect).abs() < 1e-10, "r = {r}");
        }
        // uncorrelated: product = m² ≥ 1
        let mut rows = vec![vec![0.0; 4]; 4];
        for (i, row) in rows.iter_mut().enumerate() {
            row[i] = if i < 2 { 1.3 } else { 1.7 };
        }
        let v = CovarianceMatrix::new(1, 1, &rows).unwrap();
        assert!((reid_epr_product(&v).unwrap() - 1.7 * 1.7).abs() < 1e-12);
    }

    #[test]
    fn reid_product_detects_steering_exactly() {
        let mut rng = shot_rng(0xc4, 0);
        for _ in 0..500 {
            let v = random_standard_form_cm(&mut rng);
            let product = reid_epr_product(&v).unwrap();
            if (product - 1.0).abs() < 1e-8 {
                continue;
            }
            assert_eq!(product < 1.0, is_steerable_gaussian(&v));
        }
    }

    #[test]
    fn symmetric_family_construction() {
        let thermal = symmetric_two_mode_cm(0.7, 0.0).unwrap();
        let gamma = 1.0 + 2.0 * 0.7;
        for i in 0..4 {
            assert!((thermal.full()[(i, i)].re - gamma).abs() < 1e-12);
        }
        assert!((thermal.full()[(0, 2)].re).abs() < 1e-12);

        // η = 1 is a pure two-mode squeezed state: boundary of validity
        let pure = symmetric_two_mode_cm(1.0, 1.0).unwrap();
        assert!(is_valid_cm(&pure));
        let min = hermitian(pure.full().add(&i_sigma(2)).unwrap()).eigenvalues()[0].abs();
        assert!(min < 1e-10);

        // n̄ = 1, η = 0.8 sits between the thresholds
        let mid = symmetric_two_mode_cm(1.0, 0.8).unwrap();
        assert!(!is_separable_two_mode(&mid).unwrap());
        assert!(!is_steerable_gaussian(&mid));
    }

    #[test]
    fn woodbury_difference_is_psd() {
        // V_α⁻¹ − (V_α + T)⁻¹ ⪰ 0 for valid blocks
        let mut rng = shot_rng(0xc5, 0);
        for _ in 0..1000 {
            let v = random_valid_cm(&mut rng);
            let t = random_gaussian_measurement(&mut rng);
            let va = v.block_a();
            let inv_a = va.inverse("V_alpha").unwrap();
            let inv_at = va.add(t.matrix()).unwrap().inverse("V_alpha + T").unwrap();
            let diff = hermitian(inv_a.sub(&inv_at).unwrap());
            assert!(diff.is_psd(1e-8));
        }
    }

    #[test]
    fn steering_implies_entanglement_in_random_population() {
        let mut rng = shot_rng(0xc6, 0);
        for _ in 0..400 {
            let v = random_valid_cm(&mut rng);
            if is_steerable_gaussian(&v) {
                assert!(
                    !is_separable_two_mode(&v).unwrap(),
                    "steerable but separable CM found"
                );
            }
        }
    }

    #[test]
    fn symplectic_form_relations() {
        for n in 1..=3 {
            let s = symplectic_form(n);
            assert!(s.add(&s.transpose()).unwrap().max_abs() == 0.0, "Σᵀ = -Σ");
            let s2 = s.mul(&s).unwrap();
            let neg_i = ComplexMatrix::identity(2 * n).scale_re(-1.0);
            assert!(s2.sub(&neg_i).unwrap().max_abs() == 0.0, "Σ² = -I");
        }
    }

    #[test]
    fn multi_mode_cms_go_through_the_lmi_path() {
        // 2+1 modes: vacuum is valid and not steerable; the LMI checks are
        // not limited to 1+1 even though the closed forms are.
        let dim = 6;
        let rows: Vec<Vec<f64>> = (0..dim)
            .map(|i| (0..dim).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
            .collect();
        let v = CovarianceMatrix::new(2, 1, &rows).unwrap();
        assert!(is_valid_cm(&v));
        assert!(!is_steerable_gaussian(&v));
        assert!(is_separable_two_mode(&v).is_err());
        assert!(reid_epr_product(&v).is_err());
        let u = non_steering_ensemble_cm(&v).unwrap();
        assert_eq!(u.rows(), 2);
    }

    #[test]
    fn json_schema_roundtrip_and_errors() {
        let json = r#"{"n_modes_a": 1, "n_modes_b": 1,
            "matrix": [[1,0,0,0],[0,1,0,0],[0,0,1,0],[0,0,0,1]]}"#;
        let v = CovarianceMatrix::from_json_str(json).unwrap();
        assert!(is_valid_cm(&v));
        assert!(matches!(
            CovarianceMatrix::from_json_str("{not json"),
            Err(Error::MalformedInput(_))
        ));
        let wrong_dim = r#"{"n_modes_a": 1, "n_modes_b": 1, "matrix": [[1,0],[0,1]]}"#;
        assert!(matches!(
            CovarianceMatrix::from_json_str(wrong_dim),
            Err(Error::MalformedInput(_))
        ));
        let asym = r#"{"n_modes_a": 1, "n_modes_b": 1,
            "matrix": [[1,0.5,0,0],[0,1,0,0],[0,0,1,0],[0,0,0,1]]}"#;
        assert!(matches!(
            CovarianceMatrix::from_json_str(asym),
            Err(Error::InvalidCovariance(_))
        ));
    }
}
