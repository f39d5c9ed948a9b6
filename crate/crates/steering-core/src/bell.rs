//! Bell-nonlocality oracle for two-qubit states: the optimal CHSH value
//! from the spin correlation matrix.
//!
//! For a two-qubit state W with correlation matrix
//! `T_ij = Tr[W (σ_i ⊗ σ_j)]`, the maximum of the CHSH expression over all
//! measurement settings is `2√(u₁+u₂)`, where u₁ ≥ u₂ are the two largest
//! eigenvalues of `TᵀT`. This is exact, so it serves as an oracle for the
//! closed-form thresholds elsewhere in the crate.

use crate::numeric::bisect;
use crate::qmat::{kron, ComplexMatrix, HermitianMatrix};
use crate::states::{inept_state, pauli_x, pauli_y, pauli_z, BipartiteDensityMatrix};
use crate::{Error, Result};

/// Spin correlation matrix `T_ij = Tr[W (σ_i ⊗ σ_j)]`, i, j ∈ {x, y, z}.
#[derive(Debug, Clone)]
pub struct CorrelationMatrix {
    pub t: [[f64; 3]; 3],
}

impl CorrelationMatrix {
    pub fn of(w: &BipartiteDensityMatrix) -> Result<Self> {
        if w.da() != 2 || w.db() != 2 {
            return Err(Error::Dimension(format!(
                "correlation matrix needs a two-qubit state, got {}x{}",
                w.da(),
                w.db()
            )));
        }
        let paulis = [pauli_x(), pauli_y(), pauli_z()];
        let mut t = [[0.0; 3]; 3];
        for (i, si) in paulis.iter().enumerate() {
            for (j, sj) in paulis.iter().enumerate() {
                let op = kron(si, sj);
                let val = w.w().matrix().mul(&op)?.trace();
                debug_assert!(val.im.abs() < 1e-10);
                t[i][j] = val.re;
                debug_assert!(t[i][j] <= 1.0 + 1e-9 && t[i][j] >= -1.0 - 1e-9);
            }
        }
        Ok(Self { t })
    }

    /// Sum of the two largest eigenvalues of `TᵀT`.
    fn two_largest_of_ttt(&self) -> f64 {
        let mut m = ComplexMatrix::zeros(3, 3);
        for r in 0..3 {
            for c in 0..3 {
                let v: f64 = (0..3).map(|k| self.t[k][r] * self.t[k][c]).sum();
                m[(r, c)] = v.into();
            }
        }
        let eigs = HermitianMatrix::new(m)
            .expect("TᵀT is symmetric by construction")
            .eigenvalues();
        eigs[1] + eigs[2]
    }
}

/// Maximal CHSH value of a two-qubit state over all measurement settings;
/// the state violates the inequality iff the result exceeds 2.
pub fn chsh_max(w: &BipartiteDensityMatrix) -> Result<f64> {
    Ok(2.0 * CorrelationMatrix::of(w)?.two_largest_of_ttt().sqrt())
}

/// Closed-form mixing threshold above which the inept state violates CHSH:
/// `(4ε² − 4ε + 1 − √(4ε² − 4ε + 3)) / (4ε² − 4ε − 1)`.
pub fn chsh_threshold_inept(epsilon: f64) -> Result<f64> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::ParameterOutOfRange {
            name: "epsilon",
            value: epsilon,
            range: "(0, 1)",
        });
    }
    let u = 4.0 * epsilon * epsilon - 4.0 * epsilon;
    Ok((u + 1.0 - (u + 3.0).sqrt()) / (u - 1.0))
}

/// The same threshold found numerically as the root of `chsh_max = 2` in η.
pub fn chsh_threshold_inept_numeric(epsilon: f64) -> Result<f64> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::ParameterOutOfRange {
            name: "epsilon",
            value: epsilon,
            range: "(0, 1)",
        });
    }
    let f = |eta: f64| {
        chsh_max(&inept_state(epsilon, eta).expect("parameters in range")).expect("two qubits")
            - 2.0
    };
    bisect(f, 0.0, 1.0, 1e-10, "chsh_max(inept) = 2")
}
