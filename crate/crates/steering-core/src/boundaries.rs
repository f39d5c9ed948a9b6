//! Mixing-parameter thresholds separating separable, steerable, and
//! Bell-nonlocal states for each family.
//!
//! A state of a family is entangled iff η > η_ent and steerable iff
//! η > η_steer; η_Bell is bracketed by the best published bounds. For the
//! inept and symmetric-Gaussian families the steering threshold from a
//! restricted measurement set is only an upper bound, and is flagged as
//! such.

use crate::numeric::bisect;
use crate::states::inept_ring_coordinates;
use crate::{Error, Result};

/// Grothendieck's constant of order 3 (upper bound), as used for the d = 2
/// Bell lower bound 1/K_g(3).
pub const GROTHENDIECK_K3_BOUND: f64 = 1.5163;

/// Catalan's constant, controlling the large-d limit of the isotropic Bell
/// bound π²/(16·Catalan).
pub const CATALAN: f64 = 0.9159;

/// Bell-nonlocality lower bound for two-qubit Werner states, 1/K_g(3).
pub const BELL_LOWER_D2: f64 = 0.6595;

/// Direct harmonic-number summation is exact enough up to here; beyond, the
/// asymptotic expansion takes over.
const HARMONIC_DIRECT_LIMIT: u64 = 10_000_000;

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Werner,
    Isotropic,
    Inept,
    GaussianSymmetric,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Werner => "werner",
            Family::Isotropic => "isotropic",
            Family::Inept => "inept",
            Family::GaussianSymmetric => "gaussian_symmetric",
        }
    }
}

/// Whether a steering threshold is exact or only an upper bound from a
/// restricted measurement class.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SteerKind {
    Exact,
    UpperBound,
}

impl SteerKind {
    pub fn name(self) -> &'static str {
        match self {
            SteerKind::Exact => "exact",
            SteerKind::UpperBound => "upper_bound",
        }
    }
}

/// Threshold set for one family at one parameter point.
#[derive(Debug, Clone)]
pub struct BoundaryReport {
    pub family: Family,
    /// The family parameter: d for Werner/isotropic, ε for inept, n̄ for the
    /// symmetric Gaussian family.
    pub param: f64,
    pub eta_ent: f64,
    pub eta_steer: f64,
    pub eta_steer_kind: SteerKind,
    pub eta_bell_lower: Option<f64>,
    pub eta_bell_upper: Option<f64>,
    /// True when the upper Bell bound is only the trivial value 1.
    pub bell_upper_trivial: bool,
}

impl BoundaryReport {
    fn checked(self) -> Self {
        debug_assert!(self.eta_ent >= 0.0 && self.eta_ent <= self.eta_steer);
        debug_assert!(self.eta_steer <= 1.0);
        if let (Some(lo), Some(hi)) = (self.eta_bell_lower, self.eta_bell_upper) {
            debug_assert!(lo <= hi);
        }
        if let Some(hi) = self.eta_bell_upper {
            debug_assert!(self.eta_steer <= hi + 1e-12);
        }
        self
    }
}

/// d-th harmonic number `H_d = 1 + 1/2 + … + 1/d`.
///
/// Summed directly (small terms first) up to 10⁷; beyond that the expansion
/// `ln d + γ + 1/(2d)` is used.
pub fn harmonic_number(d: u64) -> f64 {
    if d <= HARMONIC_DIRECT_LIMIT {
        (1..=d).rev().map(|k| 1.0 / k as f64).sum()
    } else {
        let x = d as f64;
        x.ln() + EULER_GAMMA + 1.0 / (2.0 * x)
    }
}

fn check_d(d: u64) -> Result<()> {
    if d < 2 {
        return Err(Error::ParameterOutOfRange {
            name: "d",
            value: d as f64,
            range: "d >= 2",
        });
    }
    Ok(())
}

/// Werner-family thresholds: η_ent = 1/(d+1) and η_steer = 1 − 1/d (exact).
///
/// For d = 2 the Bell window is [0.6595, 1/√2]; for d > 2 only the
/// lower bound 1 − 1/d and the trivial upper bound 1 are known.
pub fn werner_boundaries(d: u64) -> Result<BoundaryReport> {
    check_d(d)?;
    let dd = d as f64;
    let report = BoundaryReport {
        family: Family::Werner,
        param: dd,
        eta_ent: 1.0 / (dd + 1.0),
        eta_steer: 1.0 - 1.0 / dd,
        eta_steer_kind: SteerKind::Exact,
        eta_bell_lower: Some(if d == 2 { BELL_LOWER_D2 } else { 1.0 - 1.0 / dd }),
        eta_bell_upper: Some(if d == 2 {
            std::f64::consts::FRAC_1_SQRT_2
        } else {
            1.0
        }),
        bell_upper_trivial: d > 2,
    };
    Ok(report.checked())
}

/// Isotropic-family thresholds: η_ent = 1/(d+1) and
/// η_steer = (H_d − 1)/(d − 1) (exact); the Bell upper bound is 2/I_d.
pub fn isotropic_boundaries(d: u64) -> Result<BoundaryReport> {
    check_d(d)?;
    let dd = d as f64;
    let report = BoundaryReport {
        family: Family::Isotropic,
        param: dd,
        eta_ent: 1.0 / (dd + 1.0),
        eta_steer: (harmonic_number(d) - 1.0) / (dd - 1.0),
        eta_steer_kind: SteerKind::Exact,
        eta_bell_lower: (d == 2).then_some(BELL_LOWER_D2),
        eta_bell_upper: Some(2.0 / collins_i_d(d)),
        bell_upper_trivial: false,
    };
    Ok(report.checked())
}

/// The maximal quantum value `I_d` of the d-outcome Bell expression whose
/// violation threshold for isotropic states is `2/I_d`:
///
/// `I_d = 4d · Σ_{k=0}^{⌊d/2⌋-1} (1 − 2k/(d−1)) (q_k − q_{−(k+1)})`
/// with `q_k = 1 / (2d³ sin²(π(k + 1/4)/d))`.
pub fn collins_i_d(d: u64) -> f64 {
    let dd = d as f64;
    let q = |k: i64| {
        let s = (std::f64::consts::PI * (k as f64 + 0.25) / dd).sin();
        1.0 / (2.0 * dd * dd * dd * s * s)
    };
    let mut total = 0.0;
    for k in 0..(d / 2) as i64 {
        total += (1.0 - 2.0 * k as f64 / (dd - 1.0)) * (q(k) - q(-(k + 1)));
    }
    4.0 * dd * total
}

/// Left-hand side of the inept steering condition: steering is demonstrated
/// with the planar-plus-z measurement set iff this is positive,
///
/// `f(η) = πη√(ε(1−ε)) − (1−ε)√(1−z₋²) − ε√(1−z₊²)`.
pub fn inept_steering_gap(epsilon: f64, eta: f64) -> f64 {
    let (z_plus, z_minus) = inept_ring_coordinates(epsilon, eta);
    std::f64::consts::PI * eta * (epsilon * (1.0 - epsilon)).sqrt()
        - (1.0 - epsilon) * (1.0 - z_minus * z_minus).max(0.0).sqrt()
        - epsilon * (1.0 - z_plus * z_plus).max(0.0).sqrt()
}

/// Inept-family thresholds.
///
/// η_ent and the CHSH threshold are closed forms; η_steer is the root of
/// [`inept_steering_gap`] in η, found by bisection on [η_ent, 1] after
/// verifying a sign change, and flagged as an upper bound. At ε = 1/2 the
/// family coincides with the d = 2 isotropic states, so the exact value 1/2
/// overrides the root.
pub fn inept_boundaries(epsilon: f64) -> Result<BoundaryReport> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::ParameterOutOfRange {
            name: "epsilon",
            value: epsilon,
            range: "(0, 1): at the endpoints the state is never entangled",
        });
    }
    let e1 = epsilon * (1.0 - epsilon);
    let eta_ent = e1 / (e1 + e1.sqrt());
    let eta_bell_upper = crate::bell::chsh_threshold_inept(epsilon)?;

    // The band absorbs float noise from grid arithmetic and 9-significant-
    // digit round-trips, so ε values that print as 0.5 report the exact
    // threshold.
    let (eta_steer, kind) = if (epsilon - 0.5).abs() <= 1e-9 {
        (0.5, SteerKind::Exact)
    } else {
        (inept_steering_root(epsilon, eta_ent)?, SteerKind::UpperBound)
    };

    let report = BoundaryReport {
        family: Family::Inept,
        param: epsilon,
        eta_ent,
        eta_steer,
        eta_steer_kind: kind,
        eta_bell_lower: None,
        eta_bell_upper: Some(eta_bell_upper),
        bell_upper_trivial: false,
    };
    Ok(report.checked())
}

/// Root of the inept steering condition in η. Exposed separately because at
/// ε = 1/2 the reported threshold is the exact value, not this root.
pub fn inept_steering_root(epsilon: f64, lo: f64) -> Result<f64> {
    let f = |eta: f64| inept_steering_gap(epsilon, eta);
    // The gap function is not assumed monotone: scan a coarse grid and
    // require exactly one sign change before bisecting inside it.
    let n = 64;
    let mut bracket = None;
    let mut changes = 0;
    let mut prev = (lo, f(lo));
    for i in 1..=n {
        let eta = lo + (1.0 - lo) * i as f64 / n as f64;
        let fe = f(eta);
        if prev.1.signum() != fe.signum() {
            changes += 1;
            bracket = Some((prev.0, eta));
        }
        prev = (eta, fe);
    }
    if changes != 1 {
        return Err(Error::NoBracket(format!(
            "inept steering condition at epsilon = {epsilon}: {changes} sign changes on [{lo}, 1]"
        )));
    }
    let (a, b) = bracket.expect("one sign change recorded");
    bisect(f, a, b, 1e-10, "inept steering condition")
}

/// Symmetric two-mode Gaussian family thresholds:
/// η_ent = √(n̄/(1+n̄)), η_steer ≤ √((1+2n̄)/(2(1+n̄))).
///
/// Gaussian measurements cannot violate a Bell inequality (the Wigner
/// function is an explicit hidden-variable model), so the Bell upper bound
/// is the trivial 1.
pub fn gaussian_symmetric_boundaries(nbar: f64) -> Result<BoundaryReport> {
    if !nbar.is_finite() || nbar <= 0.0 {
        return Err(Error::ParameterOutOfRange {
            name: "nbar",
            value: nbar,
            range: "nbar > 0",
        });
    }
    let report = BoundaryReport {
        family: Family::GaussianSymmetric,
        param: nbar,
        eta_ent: (nbar / (1.0 + nbar)).sqrt(),
        eta_steer: ((1.0 + 2.0 * nbar) / (2.0 * (1.0 + nbar))).sqrt(),
        eta_steer_kind: SteerKind::UpperBound,
        eta_bell_lower: None,
        eta_bell_upper: Some(1.0),
        bell_upper_trivial: true,
    };
    Ok(report.checked())
}
