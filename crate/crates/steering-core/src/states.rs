//! The four state families under study and Bob's conditioned states.
//!
//! Basis convention, fixed project-wide: the joint computational basis is
//! ordered `|i⟩⊗|j⟩ ↦ i·dB + j` with Alice's index first. Pauli operators
//! use the standard convention `σ_z|0⟩ = +|0⟩`.

use num_complex::Complex;

use crate::qmat::{kron, partial_trace_a, ComplexMatrix, HermitianMatrix, C64, PSD_TOL};
use crate::{Error, Result};

/// Trace tolerance for density-matrix validation.
pub const TRACE_TOL: f64 = 1e-10;

/// Orthonormality tolerance for measurement bases.
pub const ORTHO_TOL: f64 = 1e-10;

// ── Pauli operators ─────────────────────────────────────────────────────────

pub fn pauli_x() -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(2, 2);
    m[(0, 1)] = C64::new(1.0, 0.0);
    m[(1, 0)] = C64::new(1.0, 0.0);
    m
}

pub fn pauli_y() -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(2, 2);
    m[(0, 1)] = C64::new(0.0, -1.0);
    m[(1, 0)] = C64::new(0.0, 1.0);
    m
}

pub fn pauli_z() -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(2, 2);
    m[(0, 0)] = C64::new(1.0, 0.0);
    m[(1, 1)] = C64::new(-1.0, 0.0);
    m
}

// ── Core types ──────────────────────────────────────────────────────────────

/// Trace-one positive-semidefinite Hermitian operator on a `dA × dB`
/// bipartite Hilbert space.
#[derive(Debug, Clone)]
pub struct BipartiteDensityMatrix {
    da: usize,
    db: usize,
    w: HermitianMatrix,
}

impl BipartiteDensityMatrix {
    pub fn new(da: usize, db: usize, w: HermitianMatrix) -> Result<Self> {
        if w.dim() != da * db {
            return Err(Error::Dimension(format!(
                "state of dimension {} cannot be {}x{} bipartite",
                w.dim(),
                da,
                db
            )));
        }
        let trace = w.trace();
        if (trace - 1.0).abs() > TRACE_TOL {
            return Err(Error::InvalidState(format!("trace {trace} is not 1")));
        }
        if !w.is_psd(PSD_TOL) {
            return Err(Error::InvalidState(format!(
                "not positive semidefinite (min eigenvalue {:.3e})",
                w.min_eigenvalue()
            )));
        }
        Ok(Self { da, db, w })
    }

    pub fn da(&self) -> usize {
        self.da
    }

    pub fn db(&self) -> usize {
        self.db
    }

    pub fn w(&self) -> &HermitianMatrix {
        &self.w
    }

    /// Bob's unconditioned marginal `Tr_A[W]`.
    pub fn bob_marginal(&self) -> HermitianMatrix {
        partial_trace_a(&self.w, self.da, self.db).expect("dimensions validated at construction")
    }

    /// Conjugate by a local unitary `u_a ⊗ u_b`.
    pub fn conjugate_local(&self, u_a: &ComplexMatrix, u_b: &ComplexMatrix) -> Result<Self> {
        let u = kron(u_a, u_b);
        let w = u.mul(self.w.matrix())?.mul(&u.adjoint())?;
        Self::new(self.da, self.db, HermitianMatrix::new(w)?)
    }
}

/// Rank-one projective measurement for Alice: an orthonormal basis plus an
/// outcome label per basis vector.
#[derive(Debug, Clone)]
pub struct ProjectiveMeasurement {
    basis: Vec<Vec<C64>>,
    labels: Vec<i64>,
}

impl ProjectiveMeasurement {
    pub fn new(basis: Vec<Vec<C64>>, labels: Vec<i64>) -> Result<Self> {
        let d = basis.len();
        if d == 0 || labels.len() != d {
            return Err(Error::Dimension(
                "measurement needs one label per basis vector".into(),
            ));
        }
        if basis.iter().any(|v| v.len() != d) {
            return Err(Error::Dimension(
                "basis must span the space: need d vectors of length d".into(),
            ));
        }
        for i in 0..d {
            for j in i..d {
                let inner: C64 = basis[i]
                    .iter()
                    .zip(&basis[j])
                    .map(|(a, b)| a.conj() * b)
                    .sum();
                let target = if i == j { 1.0 } else { 0.0 };
                if (inner - C64::new(target, 0.0)).norm() > ORTHO_TOL {
                    return Err(Error::InvalidState(format!(
                        "basis vectors {i},{j} not orthonormal (⟨{i}|{j}⟩ = {inner})"
                    )));
                }
            }
        }
        Ok(Self { basis, labels })
    }

    /// Computational basis with labels `0..d`.
    pub fn computational(d: usize) -> Self {
        let basis = (0..d)
            .map(|i| {
                let mut v = vec![C64::new(0.0, 0.0); d];
                v[i] = C64::new(1.0, 0.0);
                v
            })
            .collect();
        Self { basis, labels: (0..d as i64).collect() }
    }

    /// σ_z on a qubit: outcome +1 on `|0⟩`, −1 on `|1⟩`.
    pub fn sigma_z() -> Self {
        let mut m = Self::computational(2);
        m.labels = vec![1, -1];
        m
    }

    /// σ_θ = cos(θ)σ_x + sin(θ)σ_y: outcome ±1 on `(|0⟩ ± e^{iθ}|1⟩)/√2`.
    pub fn sigma_theta(theta: f64) -> Self {
        let inv = std::f64::consts::FRAC_1_SQRT_2;
        let phase = Complex::from_polar(inv, theta);
        Self {
            basis: vec![
                vec![C64::new(inv, 0.0), phase],
                vec![C64::new(inv, 0.0), -phase],
            ],
            labels: vec![1, -1],
        }
    }

    /// Measurement in the columns of a unitary, labelled `0..d`.
    pub fn from_unitary_columns(u: &ComplexMatrix) -> Result<Self> {
        let d = u.rows();
        let basis = (0..d)
            .map(|c| (0..d).map(|r| u[(r, c)]).collect())
            .collect();
        Self::new(basis, (0..d as i64).collect())
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn labels(&self) -> &[i64] {
        &self.labels
    }

    pub fn vector(&self, index: usize) -> &[C64] {
        &self.basis[index]
    }

    fn index_of(&self, label: i64) -> Result<usize> {
        self.labels
            .iter()
            .position(|&l| l == label)
            .ok_or(Error::UnknownLabel(label))
    }
}

/// Bob's unnormalized state after Alice reports an outcome; its trace is the
/// probability of that outcome.
#[derive(Debug, Clone)]
pub struct ConditionedState {
    pub rho_tilde: HermitianMatrix,
    pub weight: f64,
}

// ── State constructors ──────────────────────────────────────────────────────

fn check_unit(name: &'static str, value: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&value) || !value.is_finite() {
        return Err(Error::ParameterOutOfRange { name, value, range: "[0, 1]" });
    }
    Ok(())
}

fn check_dim(d: usize) -> Result<()> {
    if d < 2 {
        return Err(Error::ParameterOutOfRange {
            name: "d",
            value: d as f64,
            range: "d >= 2",
        });
    }
    Ok(())
}

/// Flip (swap) operator `V|φ⟩|ψ⟩ = |ψ⟩|φ⟩` on `C^d ⊗ C^d`.
pub fn flip_operator(d: usize) -> ComplexMatrix {
    let mut v = ComplexMatrix::zeros(d * d, d * d);
    for i in 0..d {
        for j in 0..d {
            v[(i * d + j, j * d + i)] = C64::new(1.0, 0.0);
        }
    }
    v
}

/// Projector onto `|ψ+⟩ = Σ_i |ii⟩/√d`.
pub fn max_entangled_projector(d: usize) -> ComplexMatrix {
    let mut p = ComplexMatrix::zeros(d * d, d * d);
    let amp = C64::new(1.0 / d as f64, 0.0);
    for i in 0..d {
        for j in 0..d {
            p[(i * d + i, j * d + j)] = amp;
        }
    }
    p
}

/// Werner state on `C^d ⊗ C^d`:
/// `W = ((d-1+η)/(d-1))·I/d² − (η/(d-1))·V/d`.
///
/// Product state at η = 0, the antisymmetric (singlet, for d = 2) projector
/// mixture at η = 1. η is restricted to [0, 1]. An older parametrization of
/// the same family uses `Φ = (1 − (d+1)η)/d`; only η appears in this API.
pub fn werner_state(d: usize, eta: f64) -> Result<BipartiteDensityMatrix> {
    check_dim(d)?;
    check_unit("eta", eta)?;
    let dd = d as f64;
    let a = (dd - 1.0 + eta) / ((dd - 1.0) * dd * dd);
    let b = eta / ((dd - 1.0) * dd);
    let w = ComplexMatrix::identity(d * d)
        .scale_re(a)
        .sub(&flip_operator(d).scale_re(b))?;
    BipartiteDensityMatrix::new(d, d, HermitianMatrix::new(w)?)
}

/// Isotropic state on `C^d ⊗ C^d`: `W = (1-η)·I/d² + η·P₊`.
pub fn isotropic_state(d: usize, eta: f64) -> Result<BipartiteDensityMatrix> {
    check_dim(d)?;
    check_unit("eta", eta)?;
    let dd = d as f64;
    let w = ComplexMatrix::identity(d * d)
        .scale_re((1.0 - eta) / (dd * dd))
        .add(&max_entangled_projector(d).scale_re(eta))?;
    BipartiteDensityMatrix::new(d, d, HermitianMatrix::new(w)?)
}

/// Inept two-qubit state `W = η|ψ⟩⟨ψ| + (1-η)·ρ_α⊗ρ_β` with
/// `|ψ⟩ = √(1-ε)|00⟩ + √ε|11⟩` and `ρ_α, ρ_β` its marginals.
pub fn inept_state(epsilon: f64, eta: f64) -> Result<BipartiteDensityMatrix> {
    check_unit("epsilon", epsilon)?;
    check_unit("eta", eta)?;
    let c0 = (1.0 - epsilon).sqrt();
    let c1 = epsilon.sqrt();
    let mut psi = ComplexMatrix::zeros(4, 1);
    psi[(0, 0)] = C64::new(c0, 0.0);
    psi[(3, 0)] = C64::new(c1, 0.0);
    let pure = psi.mul(&psi.adjoint())?;

    let mut marginal = ComplexMatrix::zeros(2, 2);
    marginal[(0, 0)] = C64::new(1.0 - epsilon, 0.0);
    marginal[(1, 1)] = C64::new(epsilon, 0.0);
    let product = kron(&marginal, &marginal);

    let w = pure.scale_re(eta).add(&product.scale_re(1.0 - eta))?;
    BipartiteDensityMatrix::new(2, 2, HermitianMatrix::new(w)?)
}

/// Bob's unnormalized conditioned state
/// `ρ̃ᴬ_a = Tr_α[W (Π̂ᴬ_a ⊗ I)]` for the outcome carrying `label`.
///
/// Summed over outcomes this recovers Bob's marginal, so Alice's choice of
/// measurement never changes Bob's unconditioned state.
pub fn conditioned_state(
    w: &BipartiteDensityMatrix,
    m: &ProjectiveMeasurement,
    label: i64,
) -> Result<ConditionedState> {
    if m.dim() != w.da() {
        return Err(Error::Dimension(format!(
            "measurement dimension {} does not match Alice dimension {}",
            m.dim(),
            w.da()
        )));
    }
    let idx = m.index_of(label)?;
    let a = m.vector(idx);
    let (da, db) = (w.da(), w.db());
    let full = w.w().matrix();
    // (ρ̃)_{jk} = ⟨a|⊗⟨j| W |a⟩⊗|k⟩
    let rho = ComplexMatrix::from_fn(db, db, |j, k| {
        let mut acc = C64::new(0.0, 0.0);
        for i in 0..da {
            if a[i].norm_sqr() == 0.0 {
                continue;
            }
            for ip in 0..da {
                acc += a[i].conj() * a[ip] * full[(i * db + j, ip * db + k)];
            }
        }
        acc
    });
    let rho_tilde = HermitianMatrix::new(rho)?;
    let weight = rho_tilde.trace();
    Ok(ConditionedState { rho_tilde, weight })
}

/// Bloch z-coordinates of the two rings in the optimal inept cheating
/// ensemble: `z₊ = 1 − 2η − 2ε(1−η)` and `z₋ = 1 − 2ε(1−η)`.
pub fn inept_ring_coordinates(epsilon: f64, eta: f64) -> (f64, f64) {
    let z_minus = 1.0 - 2.0 * epsilon * (1.0 - eta);
    (z_minus - 2.0 * eta, z_minus)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_close(m: &ComplexMatrix, e: &ComplexMatrix, tol: f64) {
        assert!(
            m.sub(e).unwrap().max_abs() < tol,
            "matrices differ by {:.3e}",
            m.sub(e).unwrap().max_abs()
        );
    }

    #[test]
    fn werner_product_point() {
        let w = werner_state(2, 0.0).unwrap();
        assert_close(
            w.w().matrix(),
            &ComplexMatrix::identity(4).scale_re(0.25),
            1e-14,
        );
    }

    #[test]
    fn werner_eta_one_is_singlet() {
        let w = werner_state(2, 1.0).unwrap();
        // |ψ−⟩⟨ψ−| with |ψ−⟩ = (|01⟩ − |10⟩)/√2
        let mut psi = ComplexMatrix::zeros(4, 1);
        psi[(1, 0)] = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        psi[(2, 0)] = C64::new(-std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let proj = psi.mul(&psi.adjoint()).unwrap();
        assert_close(w.w().matrix(), &proj, 1e-14);
    }

    #[test]
    fn constructors_are_normalized_across_grid() {
        for d in 2..=5 {
            for &eta in &[0.0, 0.5, 1.0] {
                let w = werner_state(d, eta).unwrap();
                assert!((w.w().trace() - 1.0).abs() < 1e-12);
                let i = isotropic_state(d, eta).unwrap();
                assert!((i.w().trace() - 1.0).abs() < 1e-12);
            }
        }
        for &eps in &[0.1, 0.3, 0.5, 0.9] {
            for &eta in &[0.0, 0.4, 1.0] {
                let w = inept_state(eps, eta).unwrap();
                assert!((w.w().trace() - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn parameter_range_is_enforced() {
        assert!(werner_state(1, 0.5).is_err());
        assert!(werner_state(2, -0.1).is_err());
        assert!(werner_state(2, 1.1).is_err());
        assert!(isotropic_state(3, f64::NAN).is_err());
        assert!(inept_state(-0.2, 0.5).is_err());
    }

    #[test]
    fn isotropic_basics() {
        let i9 = isotropic_state(3, 0.0).unwrap();
        assert_close(
            i9.w().matrix(),
            &ComplexMatrix::identity(9).scale_re(1.0 / 9.0),
            1e-14,
        );
        let bell = isotropic_state(2, 1.0).unwrap();
        assert_close(bell.w().matrix(), &max_entangled_projector(2), 1e-14);
    }

    #[test]
    fn isotropic_is_werner_up_to_sigma_y_on_alice() {
        // σ_y ⊗ I maps P₊ to the singlet projector, so the families coincide
        // at d = 2. Checked as matrix equality plus spectrum equality.
        for &eta in &[0.0, 0.3, 0.7, 1.0] {
            let iso = isotropic_state(2, eta).unwrap();
            let wern = werner_state(2, eta).unwrap();
            let rotated = iso
                .conjugate_local(&pauli_y(), &ComplexMatrix::identity(2))
                .unwrap();
            assert_close(rotated.w().matrix(), wern.w().matrix(), 1e-12);
            let si = iso.w().eigenvalues();
            let sw = wern.w().eigenvalues();
            for (a, b) in si.iter().zip(&sw) {
                assert!((a - b).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn inept_special_points() {
        // ε = 1/2 coincides with the d = 2 isotropic state
        for &eta in &[0.0, 0.25, 0.6, 1.0] {
            let inept = inept_state(0.5, eta).unwrap();
            let iso = isotropic_state(2, eta).unwrap();
            assert_close(inept.w().matrix(), iso.w().matrix(), 1e-14);
        }
        // η = 0 is the product of the marginals
        let prod = inept_state(0.3, 0.0).unwrap();
        let mut marginal = ComplexMatrix::zeros(2, 2);
        marginal[(0, 0)] = C64::new(0.7, 0.0);
        marginal[(1, 1)] = C64::new(0.3, 0.0);
        assert_close(prod.w().matrix(), &kron(&marginal, &marginal), 1e-14);
        // ε = 0, η = 1 is |00⟩⟨00|
        let zero = inept_state(0.0, 1.0).unwrap();
        let mut expect = ComplexMatrix::zeros(4, 4);
        expect[(0, 0)] = C64::new(1.0, 0.0);
        assert_close(zero.w().matrix(), &expect, 1e-14);
    }

    #[test]
    fn werner_conditioned_state_closed_form() {
        for d in [2usize, 3] {
            for &eta in &[0.2, 0.8] {
                let w = werner_state(d, eta).unwrap();
                let m = ProjectiveMeasurement::computational(d);
                let dd = d as f64;
                for a in 0..d {
                    let cs = conditioned_state(&w, &m, a as i64).unwrap();
                    let mut proj = ComplexMatrix::zeros(d, d);
                    proj[(a, a)] = C64::new(1.0, 0.0);
                    let expect = ComplexMatrix::identity(d)
                        .scale_re((dd - 1.0 + eta) / (dd * dd * (dd - 1.0)))
                        .sub(&proj.scale_re(eta / (dd * (dd - 1.0))))
                        .unwrap();
                    assert_close(cs.rho_tilde.matrix(), &expect, 1e-13);
                    assert!((cs.weight - 1.0 / dd).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn isotropic_conditioned_state_closed_form() {
        for d in [2usize, 3] {
            for &eta in &[0.3, 0.9] {
                let w = isotropic_state(d, eta).unwrap();
                let m = ProjectiveMeasurement::computational(d);
                let dd = d as f64;
                for a in 0..d {
                    let cs = conditioned_state(&w, &m, a as i64).unwrap();
                    let mut proj = ComplexMatrix::zeros(d, d);
                    proj[(a, a)] = C64::new(1.0, 0.0);
                    let expect = ComplexMatrix::identity(d)
                        .scale_re((1.0 - eta) / (dd * dd))
                        .add(&proj.scale_re(eta / dd))
                        .unwrap();
                    assert_close(cs.rho_tilde.matrix(), &expect, 1e-13);
                }
            }
        }
    }

    #[test]
    fn inept_conditioned_states_give_ring_coordinates() {
        // For σ_z the branch of probability ε sits at Bloch coordinate z₊ and
        // the branch of probability 1-ε at z₋; with σ_z|0⟩ = +|0⟩ the
        // ε-branch is the |1⟩ outcome.
        let (eps, eta) = (0.3, 0.7);
        let w = inept_state(eps, eta).unwrap();
        let m = ProjectiveMeasurement::sigma_z();
        let (z_plus, z_minus) = inept_ring_coordinates(eps, eta);

        let minus = conditioned_state(&w, &m, -1).unwrap();
        assert!((minus.weight - eps).abs() < 1e-12);
        let expect_minus = ComplexMatrix::identity(2)
            .add(&pauli_z().scale_re(z_plus))
            .unwrap()
            .scale_re(eps / 2.0);
        assert_close(minus.rho_tilde.matrix(), &expect_minus, 1e-13);

        let plus = conditioned_state(&w, &m, 1).unwrap();
        assert!((plus.weight - (1.0 - eps)).abs() < 1e-12);
        let expect_plus = ComplexMatrix::identity(2)
            .add(&pauli_z().scale_re(z_minus))
            .unwrap()
            .scale_re((1.0 - eps) / 2.0);
        assert_close(plus.rho_tilde.matrix(), &expect_plus, 1e-13);
    }

    #[test]
    fn inept_sigma_theta_conditioned_state() {
        // Normalized conditioned state after σ_θ has transverse Bloch length
        // 2η√(ε(1-ε)) and longitudinal component 1-2ε. The y component is
        // anti-correlated (⟨σ_y⊗σ_y⟩ < 0 for this family), so the transverse
        // direction is (cos θ, −sin θ).
        let (eps, eta, theta) = (0.25, 0.6, 0.8);
        let w = inept_state(eps, eta).unwrap();
        let m = ProjectiveMeasurement::sigma_theta(theta);
        let cs = conditioned_state(&w, &m, 1).unwrap();
        assert!((cs.weight - 0.5).abs() < 1e-12);
        let rho = cs.rho_tilde.matrix().scale_re(1.0 / cs.weight);
        let bloch = |op: &ComplexMatrix| rho.mul(op).unwrap().trace().re;
        let t = 2.0 * eta * (eps * (1.0 - eps)).sqrt();
        assert!((bloch(&pauli_x()) - t * theta.cos()).abs() < 1e-12);
        assert!((bloch(&pauli_y()) + t * theta.sin()).abs() < 1e-12);
        assert!((bloch(&pauli_z()) - (1.0 - 2.0 * eps)).abs() < 1e-12);
    }

    #[test]
    fn unknown_label_is_rejected() {
        let w = werner_state(2, 0.5).unwrap();
        let m = ProjectiveMeasurement::sigma_z();
        assert!(matches!(
            conditioned_state(&w, &m, 7),
            Err(Error::UnknownLabel(7))
        ));
    }

    #[test]
    fn measurement_validation() {
        // non-orthogonal basis is rejected
        let v = vec![
            vec![C64::new(1.0, 0.0), C64::new(0.0, 0.0)],
            vec![C64::new(0.6, 0.0), C64::new(0.8, 0.0)],
        ];
        assert!(ProjectiveMeasurement::new(v, vec![0, 1]).is_err());
    }
}
