//! Monte Carlo simulation of the steering game: honest quantum statistics
//! versus an optimal cheating strategy over a local-hidden-state ensemble.
//!
//! Alice, instead of measuring half of an entangled state, draws a pure
//! state from a fixed ensemble and announces outcomes as a function of the
//! drawn state. For the Werner and isotropic families the optimal ensemble
//! is Haar-uniform and the optimal announcements pick the basis vector of
//! least (respectively greatest) overlap; the achievable conditional
//! overlaps are 1/d³ and H_d/d². For the inept family the ensemble is two
//! rings on the Bloch sphere. The simulations here estimate those values
//! empirically; verdicts always come from the closed forms — simulation
//! validates, analytics decides.
//!
//! # Reproducibility
//!
//! Every shot draws from its own counter-derived RNG stream
//! (`ChaCha8Rng::seed_from_u64(seed)` + `set_stream(shot)`), and partial
//! sums are combined in a fixed pairwise order over fixed-size chunks, so
//! results are byte-identical for a given `(seed, shots)` no matter how
//! many worker threads run the chunks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::boundaries::harmonic_number;
use crate::numeric::{adaptive_simpson, pairwise_reduce};
use crate::qmat::{ComplexMatrix, C64};
use crate::states::{inept_ring_coordinates, ProjectiveMeasurement};
use crate::{Error, Result};

/// Shots per work item; parallelism never crosses a chunk boundary.
const CHUNK: u64 = 1 << 14;

/// A Haar-distributed pure state together with the squared norm of the
/// Gaussian vector it was drawn from (normalized so its mean is 1).
#[derive(Debug, Clone)]
pub struct HaarSample {
    pub psi: Vec<C64>,
    pub weight_m2: f64,
}

/// RNG stream for one shot, derived from the run seed and the shot index.
pub fn shot_rng(seed: u64, shot: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(shot);
    rng
}

/// Draw `ψ = z/‖z‖` for z a vector of i.i.d. standard complex Gaussians
/// (real and imaginary parts of variance 1/2 each), with
/// `weight_m2 = ‖z‖²/d`.
pub fn sample_haar(d: usize, rng: &mut impl Rng) -> HaarSample {
    let mut psi = Vec::with_capacity(d);
    let mut norm_sqr = 0.0;
    for _ in 0..d {
        let re: f64 = rng.sample::<f64, _>(StandardNormal) * std::f64::consts::FRAC_1_SQRT_2;
        let im: f64 = rng.sample::<f64, _>(StandardNormal) * std::f64::consts::FRAC_1_SQRT_2;
        let z = C64::new(re, im);
        norm_sqr += z.norm_sqr();
        psi.push(z);
    }
    let inv = 1.0 / norm_sqr.sqrt();
    for z in &mut psi {
        *z *= inv;
    }
    HaarSample { psi, weight_m2: norm_sqr / d as f64 }
}

/// Haar-random unitary: Gaussian matrix orthonormalized column by column
/// (modified Gram–Schmidt, two passes).
pub fn random_haar_unitary(d: usize, rng: &mut impl Rng) -> ComplexMatrix {
    let mut cols: Vec<Vec<C64>> = (0..d)
        .map(|_| {
            (0..d)
                .map(|_| {
                    C64::new(
                        rng.sample::<f64, _>(StandardNormal),
                        rng.sample::<f64, _>(StandardNormal),
                    )
                })
                .collect()
        })
        .collect();
    for c in 0..d {
        let (done, rest) = cols.split_at_mut(c);
        let cur = &mut rest[0];
        // two passes keep orthogonality at machine level
        for _pass in 0..2 {
            for prev in done.iter() {
                let proj: C64 = prev.iter().zip(cur.iter()).map(|(p, x)| p.conj() * x).sum();
                for (x, p) in cur.iter_mut().zip(prev.iter()) {
                    *x -= proj * p;
                }
            }
        }
        let norm: f64 = cur.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for x in cur.iter_mut() {
            *x /= norm;
        }
    }
    ComplexMatrix::from_fn(d, d, |r, c| cols[c][r])
}

// ── Outcome types ───────────────────────────────────────────────────────────

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Steerable,
    NotSteerableAtThisEta,
}

impl Verdict {
    pub fn name(self) -> &'static str {
        match self {
            Verdict::Steerable => "steerable",
            Verdict::NotSteerableAtThisEta => "not_steerable_at_this_eta",
        }
    }
}

/// Result of one simulation run: the Monte Carlo estimate next to the
/// closed-form quantum value and cheating bound that decide the verdict.
#[derive(Debug, Clone)]
pub struct SimOutcome {
    pub shots: u64,
    pub empirical: f64,
    pub std_error: f64,
    pub theoretical_quantum: f64,
    pub theoretical_cheat_bound: f64,
    pub verdict: Verdict,
}

/// Plain Monte Carlo estimate (mean of the per-shot statistic).
#[derive(Debug, Clone)]
pub struct CheatEstimate {
    pub shots: u64,
    pub mean: f64,
    pub std_error: f64,
}

/// Family selector for the closed-form steering verdict. The inept family
/// has its own simulation entry point; Gaussian states are handled by the
/// covariance-matrix module.
#[derive(Debug, Clone, Copy)]
pub enum SimFamily {
    Werner { d: usize },
    Isotropic { d: usize },
}

/// Closed-form comparison deciding steerability at a given η.
#[derive(Debug, Clone)]
pub struct VerdictReport {
    pub theoretical_quantum: f64,
    pub theoretical_cheat_bound: f64,
    pub verdict: Verdict,
}

/// Announcement rules for the cheating Alice. `Optimal` is the rule that
/// attains the bound (least overlap for Werner, greatest for isotropic);
/// the others are deliberately suboptimal opponents for dominance tests.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheatRule {
    Optimal,
    /// Announce uniformly at random.
    UniformRandom,
    /// Always announce outcome 0.
    FixedFirst,
    /// Announce the runner-up of the optimal ordering.
    SecondBest,
    /// Announce the optimal rule's worst choice.
    Opposite,
    /// Sample an outcome with probability proportional to how much the
    /// optimal rule likes it.
    SoftWeighted,
}

// ── Verdict logic (closed forms) ────────────────────────────────────────────

fn check_eta(eta: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&eta) || !eta.is_finite() {
        return Err(Error::ParameterOutOfRange { name: "eta", value: eta, range: "[0, 1]" });
    }
    Ok(())
}

/// Steering verdict from the exact overlap comparison. Werner states are
/// steerable iff `(1-η)/d² < 1/d³`; isotropic states iff
/// `η/d + (1-η)/d² > H_d/d²`. Ties are resolved as not steerable.
pub fn steering_verdict(family: SimFamily, eta: f64) -> Result<VerdictReport> {
    check_eta(eta)?;
    let (d, quantum, bound, steer_when_smaller) = match family {
        SimFamily::Werner { d } => {
            let dd = d as f64;
            (d, (1.0 - eta) / (dd * dd), 1.0 / (dd * dd * dd), true)
        }
        SimFamily::Isotropic { d } => {
            let dd = d as f64;
            (
                d,
                eta / dd + (1.0 - eta) / (dd * dd),
                harmonic_number(d as u64) / (dd * dd),
                false,
            )
        }
    };
    if d < 2 {
        return Err(Error::ParameterOutOfRange {
            name: "d",
            value: d as f64,
            range: "d >= 2",
        });
    }
    let steerable = if steer_when_smaller { quantum < bound } else { quantum > bound };
    Ok(VerdictReport {
        theoretical_quantum: quantum,
        theoretical_cheat_bound: bound,
        verdict: if steerable { Verdict::Steerable } else { Verdict::NotSteerableAtThisEta },
    })
}

// ── Werner / isotropic overlap estimators ───────────────────────────────────

#[derive(Clone, Copy)]
struct Moments {
    sum: f64,
    sum_sq: f64,
}

impl Moments {
    const ZERO: Self = Self { sum: 0.0, sum_sq: 0.0 };

    fn push(&mut self, x: f64) {
        self.sum += x;
        self.sum_sq += x * x;
    }

    fn merge(a: &Self, b: &Self) -> Self {
        Self { sum: a.sum + b.sum, sum_sq: a.sum_sq + b.sum_sq }
    }

    fn estimate(&self, shots: u64) -> CheatEstimate {
        let n = shots as f64;
        let mean = self.sum / n;
        let var = ((self.sum_sq - self.sum * self.sum / n) / (n - 1.0)).max(0.0);
        CheatEstimate { shots, mean, std_error: (var / n).sqrt() }
    }
}

fn parallel_moments(shots: u64, per_shot: impl Fn(u64) -> f64 + Sync) -> Moments {
    let chunks = shots.div_ceil(CHUNK);
    let parts: Vec<Moments> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let lo = c * CHUNK;
            let hi = (lo + CHUNK).min(shots);
            let mut m = Moments::ZERO;
            for shot in lo..hi {
                m.push(per_shot(shot));
            }
            m
        })
        .collect();
    pairwise_reduce(parts, Moments::merge).unwrap_or(Moments::ZERO)
}

/// Squared overlaps of the sample's unnormalized vector with each basis
/// vector of `m`; for the computational basis this is `|z_a|²`.
fn basis_overlaps(sample: &HaarSample, m: &ProjectiveMeasurement, d: usize) -> Vec<f64> {
    let scale = (sample.weight_m2 * d as f64).sqrt(); // back to the raw Gaussian vector
    (0..d)
        .map(|a| {
            let amp: C64 = m
                .vector(a)
                .iter()
                .zip(&sample.psi)
                .map(|(b, z)| b.conj() * z * scale)
                .sum();
            amp.norm_sqr()
        })
        .collect()
}

fn announce(rule: CheatRule, u: &[f64], minimize: bool, rng: &mut impl Rng) -> usize {
    let better = |a: f64, b: f64| if minimize { a < b } else { a > b };
    let ordered_best = || {
        let mut best = 0;
        for (i, &v) in u.iter().enumerate().skip(1) {
            if better(v, u[best]) {
                best = i;
            }
        }
        best
    };
    match rule {
        CheatRule::Optimal => ordered_best(),
        CheatRule::UniformRandom => rng.random_range(0..u.len()),
        CheatRule::FixedFirst => 0,
        CheatRule::SecondBest => {
            let best = ordered_best();
            let mut second = usize::from(best == 0);
            for (i, &v) in u.iter().enumerate() {
                if i == best || i == second {
                    continue;
                }
                if better(v, u[second]) {
                    second = i;
                }
            }
            second
        }
        CheatRule::Opposite => {
            let mut worst = 0;
            for (i, &v) in u.iter().enumerate().skip(1) {
                if better(u[worst], v) {
                    worst = i;
                }
            }
            worst
        }
        CheatRule::SoftWeighted => {
            let total: f64 = u.iter().sum();
            // weight ∝ u/Σu for a maximizer, ∝ (1 − u/Σu)/(d−1) for a minimizer
            let mut t = rng.random::<f64>();
            for (i, &v) in u.iter().enumerate() {
                let p = if minimize {
                    (1.0 - v / total) / (u.len() as f64 - 1.0)
                } else {
                    v / total
                };
                if t < p || i == u.len() - 1 {
                    return i;
                }
                t -= p;
            }
            u.len() - 1
        }
    }
}

fn check_sim_params(d: usize, shots: u64) -> Result<()> {
    if d < 2 {
        return Err(Error::ParameterOutOfRange {
            name: "d",
            value: d as f64,
            range: "d >= 2",
        });
    }
    if shots < 2 {
        return Err(Error::ParameterOutOfRange {
            name: "shots",
            value: shots as f64,
            range: "shots >= 2",
        });
    }
    Ok(())
}

/// Which per-shot statistic a cheat run records.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OverlapStatistic {
    /// Overlap with the fixed first basis vector, counted only on shots
    /// announcing that outcome. For the optimal rules this converges to the
    /// per-outcome bounds 1/d³ (least-overlap game) and H_d/d² (greatest).
    FixedOutcome,
    /// Overlap with whichever basis vector was announced. This is the sum
    /// of the per-outcome values and is pointwise extremized by the optimal
    /// rules (expected 1/d² and H_d/d), so it ranks arbitrary rules fairly.
    Announced,
}

fn cheat_estimate(
    d: usize,
    shots: u64,
    seed: u64,
    m: &ProjectiveMeasurement,
    rule: CheatRule,
    minimize: bool,
    statistic: OverlapStatistic,
) -> Result<CheatEstimate> {
    check_sim_params(d, shots)?;
    if m.dim() != d {
        return Err(Error::Dimension("measurement dimension mismatch".into()));
    }
    let moments = parallel_moments(shots, |shot| {
        let mut rng = shot_rng(seed, shot);
        let sample = sample_haar(d, &mut rng);
        let u = basis_overlaps(&sample, m, d);
        let a = announce(rule, &u, minimize, &mut rng);
        match statistic {
            OverlapStatistic::FixedOutcome => {
                if a == 0 {
                    u[0] / d as f64
                } else {
                    0.0
                }
            }
            OverlapStatistic::Announced => u[a] / d as f64,
        }
    });
    Ok(moments.estimate(shots))
}

/// Monte Carlo estimate of the conditional overlap
/// `⟨a₀| ∫ dμ(ψ) |ψ⟩⟨ψ| ℘(a₀|Â,ψ) |a₀⟩` for a cheating Alice announcing via
/// `rule` against the measurement basis `m` (least-overlap game).
pub fn werner_cheat_estimate(
    d: usize,
    shots: u64,
    seed: u64,
    m: &ProjectiveMeasurement,
    rule: CheatRule,
) -> Result<CheatEstimate> {
    cheat_estimate(d, shots, seed, m, rule, true, OverlapStatistic::FixedOutcome)
}

/// Least-overlap game with the announced-outcome statistic (see
/// [`OverlapStatistic::Announced`]).
pub fn werner_announced_overlap_estimate(
    d: usize,
    shots: u64,
    seed: u64,
    m: &ProjectiveMeasurement,
    rule: CheatRule,
) -> Result<CheatEstimate> {
    cheat_estimate(d, shots, seed, m, rule, true, OverlapStatistic::Announced)
}

/// Same estimator with the greatest-overlap announcement game.
pub fn isotropic_cheat_estimate(
    d: usize,
    shots: u64,
    seed: u64,
    m: &ProjectiveMeasurement,
    rule: CheatRule,
) -> Result<CheatEstimate> {
    cheat_estimate(d, shots, seed, m, rule, false, OverlapStatistic::FixedOutcome)
}

/// Greatest-overlap game with the announced-outcome statistic.
pub fn isotropic_announced_overlap_estimate(
    d: usize,
    shots: u64,
    seed: u64,
    m: &ProjectiveMeasurement,
    rule: CheatRule,
) -> Result<CheatEstimate> {
    cheat_estimate(d, shots, seed, m, rule, false, OverlapStatistic::Announced)
}

/// Werner steering game at mixing parameter η: empirical optimal-cheat
/// overlap (expected value 1/d³) next to the exact quantum overlap
/// `(1-η)/d²`; steerable iff the quantum value is below the cheat bound.
pub fn werner_cheat_overlap(d: usize, eta: f64, shots: u64, seed: u64) -> Result<SimOutcome> {
    let est = werner_cheat_estimate(
        d,
        shots,
        seed,
        &ProjectiveMeasurement::computational(d),
        CheatRule::Optimal,
    )?;
    let report = steering_verdict(SimFamily::Werner { d }, eta)?;
    Ok(SimOutcome {
        shots,
        empirical: est.mean,
        std_error: est.std_error,
        theoretical_quantum: report.theoretical_quantum,
        theoretical_cheat_bound: report.theoretical_cheat_bound,
        verdict: report.verdict,
    })
}

/// Isotropic steering game at mixing parameter η: empirical optimal-cheat
/// overlap (expected value H_d/d²) next to the exact quantum overlap
/// `η/d + (1-η)/d²`; steerable iff the quantum value exceeds the bound.
pub fn isotropic_cheat_overlap(d: usize, eta: f64, shots: u64, seed: u64) -> Result<SimOutcome> {
    let est = isotropic_cheat_estimate(
        d,
        shots,
        seed,
        &ProjectiveMeasurement::computational(d),
        CheatRule::Optimal,
    )?;
    let report = steering_verdict(SimFamily::Isotropic { d }, eta)?;
    Ok(SimOutcome {
        shots,
        empirical: est.mean,
        std_error: est.std_error,
        theoretical_quantum: report.theoretical_quantum,
        theoretical_cheat_bound: report.theoretical_cheat_bound,
        verdict: report.verdict,
    })
}

// ── Inept simulation ────────────────────────────────────────────────────────

/// Announcement statistics of the σ_z branch of the inept cheating
/// strategy: the z₊ ring is announced with probability ε and carries Bloch
/// coordinate z₊, the z₋ ring with probability 1-ε at z₋.
#[derive(Debug, Clone)]
pub struct RingStats {
    pub plus_ring_frequency: f64,
    pub plus_ring_frequency_std_error: f64,
    /// Mean Bloch-z over shots in the z₊ ring (exactly z₊ up to rounding).
    pub plus_ring_mean_z: f64,
    pub minus_ring_mean_z: f64,
}

/// Inept simulation result: σ_x cheat coefficient plus σ_z branch
/// statistics from the same run.
#[derive(Debug, Clone)]
pub struct IneptSimOutcome {
    pub outcome: SimOutcome,
    pub ring_stats: RingStats,
}

/// Closed-form verdict for the inept family: the quantum transverse
/// coefficient `η√(ε(1-ε))` against the optimal cheating value
/// `(1/π)[ε√(1-z₊²) + (1-ε)√(1-z₋²)]`.
pub fn inept_verdict(epsilon: f64, eta: f64) -> Result<VerdictReport> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::ParameterOutOfRange {
            name: "epsilon",
            value: epsilon,
            range: "(0, 1)",
        });
    }
    check_eta(eta)?;
    let (z_plus, z_minus) = inept_ring_coordinates(epsilon, eta);
    let quantum = eta * (epsilon * (1.0 - epsilon)).sqrt();
    let cheat = (epsilon * (1.0 - z_plus * z_plus).max(0.0).sqrt()
        + (1.0 - epsilon) * (1.0 - z_minus * z_minus).max(0.0).sqrt())
        / std::f64::consts::PI;
    Ok(VerdictReport {
        theoretical_quantum: quantum,
        theoretical_cheat_bound: cheat,
        verdict: if quantum > cheat { Verdict::Steerable } else { Verdict::NotSteerableAtThisEta },
    })
}

#[derive(Clone, Copy)]
struct IneptPartial {
    x: Moments,
    plus_count: u64,
    sum_z_plus: f64,
    sum_z_minus: f64,
}

/// Simulate the optimal inept cheating strategy: Alice draws a ring
/// (`z₊` with probability ε, else `z₋`) and a uniform azimuth φ, answers
/// σ_z queries by ring membership and σ_x queries by the sign of cos φ.
/// `empirical` estimates the σ_x coefficient of Bob's average conditioned
/// state, `(1/π)[ε√(1-z₊²) + (1-ε)√(1-z₋²)]`.
pub fn inept_cheat_simulation(
    epsilon: f64,
    eta: f64,
    shots: u64,
    seed: u64,
) -> Result<IneptSimOutcome> {
    let report = inept_verdict(epsilon, eta)?;
    if shots < 2 {
        return Err(Error::ParameterOutOfRange {
            name: "shots",
            value: shots as f64,
            range: "shots >= 2",
        });
    }
    let (z_plus, z_minus) = inept_ring_coordinates(epsilon, eta);
    let chunks = shots.div_ceil(CHUNK);
    let parts: Vec<IneptPartial> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let lo = c * CHUNK;
            let hi = (lo + CHUNK).min(shots);
            let mut p = IneptPartial {
                x: Moments::ZERO,
                plus_count: 0,
                sum_z_plus: 0.0,
                sum_z_minus: 0.0,
            };
            for shot in lo..hi {
                let mut rng = shot_rng(seed, shot);
                let in_plus_ring = rng.random::<f64>() < epsilon;
                let z = if in_plus_ring { z_plus } else { z_minus };
                if in_plus_ring {
                    p.plus_count += 1;
                    p.sum_z_plus += z;
                } else {
                    p.sum_z_minus += z;
                }
                let phi = rng.random::<f64>() * std::f64::consts::TAU;
                let c = phi.cos();
                // σ_x query: announce +1 on cos φ > 0; the announced branch
                // contributes its transverse Bloch component.
                p.x.push(if c > 0.0 { (1.0 - z * z).max(0.0).sqrt() * c } else { 0.0 });
            }
            p
        })
        .collect();
    let total = pairwise_reduce(parts, |a, b| IneptPartial {
        x: Moments::merge(&a.x, &b.x),
        plus_count: a.plus_count + b.plus_count,
        sum_z_plus: a.sum_z_plus + b.sum_z_plus,
        sum_z_minus: a.sum_z_minus + b.sum_z_minus,
    })
    .expect("at least one chunk");

    let est = total.x.estimate(shots);
    let n = shots as f64;
    let freq = total.plus_count as f64 / n;
    let ring_stats = RingStats {
        plus_ring_frequency: freq,
        plus_ring_frequency_std_error: (freq * (1.0 - freq) / n).sqrt(),
        plus_ring_mean_z: if total.plus_count > 0 {
            total.sum_z_plus / total.plus_count as f64
        } else {
            f64::NAN
        },
        minus_ring_mean_z: if total.plus_count < shots {
            total.sum_z_minus / (shots - total.plus_count) as f64
        } else {
            f64::NAN
        },
    };
    Ok(IneptSimOutcome {
        outcome: SimOutcome {
            shots,
            empirical: est.mean,
            std_error: est.std_error,
            theoretical_quantum: report.theoretical_quantum,
            theoretical_cheat_bound: report.theoretical_cheat_bound,
            verdict: report.verdict,
        },
        ring_stats,
    })
}

// ── Independent numeric cross-checks ────────────────────────────────────────

/// The mean overlap captured by the greatest-overlap rule, as the 1-D
/// integral `(1/d) ∫₀^∞ u e^{-u} (1 - e^{-u})^{d-1} du`, evaluated by
/// adaptive quadrature. Equals H_d/d².
pub fn epsilon_d_quadrature(d: usize) -> f64 {
    let dd = d as f64;
    let f = move |u: f64| u * (-u).exp() * (1.0 - (-u).exp()).powi(d as i32 - 1);
    let upper = 60.0 + (dd.ln().max(0.0)) * 4.0;
    adaptive_simpson(&f, 0.0, upper, 1e-13) / dd
}

/// The same quantity as the alternating binomial sum
/// `(1/d²) Σ_{k=1}^d (-1)^{k-1} C(d,k)/k`.
///
/// Catastrophic cancellation makes this useless beyond d = 10, so larger
/// dimensions are rejected; the harmonic form is authoritative.
pub fn epsilon_d_alternating(d: usize) -> Result<f64> {
    if d == 0 || d > 10 {
        return Err(Error::ParameterOutOfRange {
            name: "d",
            value: d as f64,
            range: "1..=10 (alternating sum is numerically unstable beyond)",
        });
    }
    let mut binom = 1.0; // C(d, k), starting at k = 1
    let dd = d as f64;
    let mut total = 0.0;
    for k in 1..=d {
        binom = binom * (dd - k as f64 + 1.0) / k as f64;
        let term = binom / k as f64;
        total += if k % 2 == 1 { term } else { -term };
    }
    Ok(total / (dd * dd))
}
