//! Brute-force cross-checks that share no numerics with the quadrature and
//! grid code: importance-sampled Monte Carlo, a 2D FFT of the sampled wave
//! function, and grid-refinement domain counts.
//!
//! Monte Carlo draws come from the Gaussian `(alpha / pi) exp(-alpha r^2)` and
//! carry weight `w = (pi / alpha) P^2`. Samples are split into fixed shards,
//! each with its own ChaCha stream, and shard statistics are merged in shard
//! order, so results do not depend on the thread count.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::nodal::{grid_polynomial, partition_state, GridSpec, NodalPartition};
use crate::shell::{build_affine_poly, ShellState};

pub const MIN_SAMPLES: usize = 100_000;
pub const SHARD_SIZE: usize = 1 << 16;
/// Limbo fraction above which domain classification is reported as
/// under-resolved.
pub const LIMBO_WARNING: f64 = 1e-3;
pub const ALIASING_TOL: f64 = 1e-10;
pub const FFT_MIN_HALF_WIDTH: f64 = 10.0;
pub const FFT_MIN_SUBDIVISIONS: usize = 512;
/// Rings of grid nodes searched around a sample for a labelled neighbour.
const MAX_RING: usize = 4;

/// Running mean and centred sum of squares.
#[derive(Debug, Clone, Copy, Default)]
struct Moments {
    n: f64,
    mean: f64,
    m2: f64,
}

impl Moments {
    fn push(&mut self, v: f64) {
        self.n += 1.0;
        let d = v - self.mean;
        self.mean += d / self.n;
        self.m2 += d * (v - self.mean);
    }

    fn merge(self, o: Moments) -> Moments {
        if o.n == 0.0 {
            return self;
        }
        if self.n == 0.0 {
            return o;
        }
        let n = self.n + o.n;
        let d = o.mean - self.mean;
        Moments {
            n,
            mean: self.mean + d * o.n / n,
            m2: self.m2 + o.m2 + d * d * self.n * o.n / n,
        }
    }

    fn standard_error(&self) -> f64 {
        if self.n < 2.0 {
            return f64::INFINITY;
        }
        (self.m2 / (self.n - 1.0) / self.n).sqrt()
    }
}

fn shard_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn shards(samples: usize) -> Vec<(usize, usize)> {
    (0..samples.div_ceil(SHARD_SIZE))
        .map(|k| (k, SHARD_SIZE.min(samples - k * SHARD_SIZE)))
        .collect()
}

fn check_samples(samples: usize) -> Result<()> {
    if samples < MIN_SAMPLES {
        return Err(Error::TooFewSamples {
            got: samples,
            min: MIN_SAMPLES,
        });
    }
    Ok(())
}

fn gaussian_point(rng: &mut ChaCha8Rng, sigma: f64) -> (f64, f64) {
    let x: f64 = rng.sample(StandardNormal);
    let y: f64 = rng.sample(StandardNormal);
    (sigma * x, sigma * y)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub mean: f64,
    pub standard_error: f64,
}

impl McEstimate {
    /// Distance to `value` in standard errors.
    pub fn z_score(&self, value: f64) -> f64 {
        (self.mean - value).abs() / self.standard_error
    }
}

/// Importance-sampled position entropy `S_r`.
pub fn mc_entropy(state: &ShellState, samples: usize, seed: u64) -> Result<McEstimate> {
    check_samples(samples)?;
    let alpha = state.alpha();
    let poly = build_affine_poly(state);
    let sigma = (0.5 / alpha).sqrt();
    let scale = std::f64::consts::PI / alpha;
    let parts: Vec<Moments> = shards(samples)
        .into_par_iter()
        .map(|(shard, count)| {
            let mut rng = shard_rng(seed, shard as u64);
            let mut m = Moments::default();
            for _ in 0..count {
                let (x, y) = gaussian_point(&mut rng, sigma);
                let p2 = poly.eval(x, y).powi(2);
                let v = if p2 > 0.0 {
                    scale * p2 * (alpha * (x * x + y * y) - p2.ln())
                } else {
                    0.0
                };
                m.push(v);
            }
            m
        })
        .collect();
    let total = parts.into_iter().fold(Moments::default(), Moments::merge);
    Ok(McEstimate {
        mean: total.mean,
        standard_error: total.standard_error(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DomainWeightEstimate {
    pub weights: Vec<McEstimate>,
    /// Fraction of samples that could not be assigned to a component.
    pub limbo_fraction: f64,
    pub resolution_warning: bool,
}

/// Component of the nearest labelled node whose sign matches `sign`, searching
/// square rings around the nearest node.
fn classify(partition: &NodalPartition, labels: &[Option<usize>], xi: f64, eta: f64, sign: i8) -> Option<usize> {
    let grid = partition.grid();
    let side = grid.side() as isize;
    let h = grid.cell();
    let fi = (xi + grid.half_width) / h;
    let fj = (eta + grid.half_width) / h;
    let (ci, cj) = (fi.round() as isize, fj.round() as isize);
    let mut best: Option<(f64, usize)> = None;
    for ring in 0..=MAX_RING as isize {
        for dj in -ring..=ring {
            for di in -ring..=ring {
                if di.abs().max(dj.abs()) != ring {
                    continue;
                }
                let (i, j) = (ci + di, cj + dj);
                if i < 0 || j < 0 || i >= side || j >= side {
                    continue;
                }
                let k = (j * side + i) as usize;
                let Some(c) = labels[k] else { continue };
                if partition.components[c].sign != sign {
                    continue;
                }
                let d = (i as f64 - fi).powi(2) + (j as f64 - fj).powi(2);
                if best.is_none_or(|(bd, _)| d < bd) {
                    best = Some((d, c));
                }
            }
        }
        // a node in the next ring can still be closer than a corner hit
        if let Some((d, c)) = best {
            if d.sqrt() <= ring as f64 + 0.5 {
                return Some(c);
            }
        }
    }
    best.map(|(_, c)| c)
}

/// Monte Carlo estimate of each component weight of `partition`, which must
/// have been computed for `state`.
pub fn mc_domain_weights(
    state: &ShellState,
    partition: &NodalPartition,
    samples: usize,
    seed: u64,
) -> Result<DomainWeightEstimate> {
    check_samples(samples)?;
    let alpha = state.alpha();
    let poly = build_affine_poly(state);
    let q = grid_polynomial(&poly, alpha);
    let labels = partition.node_labels();
    let sigma = (0.5_f64).sqrt();
    let count = partition.count();
    let parts: Vec<(Vec<Moments>, usize)> = shards(samples)
        .into_par_iter()
        .map(|(shard, n)| {
            let mut rng = shard_rng(seed, shard as u64);
            let mut m = vec![Moments::default(); count];
            let mut limbo = 0;
            for _ in 0..n {
                // dimensionless coordinates: the Gaussian has alpha = 1 here
                let (xi, eta) = gaussian_point(&mut rng, sigma);
                let v = q.eval(xi, eta);
                let w = std::f64::consts::PI * v * v / alpha;
                let sign = if v > 0.0 {
                    1
                } else if v < 0.0 {
                    -1
                } else {
                    0
                };
                let hit = if sign == 0 {
                    None
                } else {
                    classify(partition, &labels, xi, eta, sign)
                };
                if hit.is_none() {
                    limbo += 1;
                }
                for (c, mc) in m.iter_mut().enumerate() {
                    mc.push(if hit == Some(c) { w } else { 0.0 });
                }
            }
            (m, limbo)
        })
        .collect();
    let mut total = vec![Moments::default(); count];
    let mut limbo = 0;
    for (m, l) in parts {
        for (t, s) in total.iter_mut().zip(m) {
            *t = t.merge(s);
        }
        limbo += l;
    }
    let limbo_fraction = limbo as f64 / samples as f64;
    Ok(DomainWeightEstimate {
        weights: total
            .iter()
            .map(|m| McEstimate {
                mean: m.mean,
                standard_error: m.standard_error(),
            })
            .collect(),
        limbo_fraction,
        resolution_warning: limbo_fraction > LIMBO_WARNING,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentumCheck {
    pub max_density_mismatch: f64,
    /// `|phase - (-i)^N|` at the largest-magnitude momentum sample.
    pub phase_mismatch: f64,
    /// Measured global phase as `[re, im]`.
    pub phase: [f64; 2],
    /// Mass of the position density on the window edge exceeded the aliasing
    /// tolerance.
    pub aliasing: bool,
}

/// Default FFT grid: `n = 512` on `[-10, 10]^2` in physical units.
pub fn fft_grid() -> GridSpec {
    GridSpec {
        half_width: FFT_MIN_HALF_WIDTH,
        subdivisions: FFT_MIN_SUBDIVISIONS,
    }
}

fn fft_2d(data: &mut [Complex64], n: usize) {
    let fft = FftPlanner::new().plan_fft_forward(n);
    for row in data.chunks_mut(n) {
        fft.process(row);
    }
    let mut col = vec![Complex64::default(); n];
    for i in 0..n {
        for j in 0..n {
            col[j] = data[j * n + i];
        }
        fft.process(&mut col);
        for j in 0..n {
            data[j * n + i] = col[j];
        }
    }
}

/// Samples `psi` on the periodic `n x n` grid of `grid` (physical units),
/// transforms it, and compares with `(-i)^N / alpha * psi(p / alpha)`.
pub fn fft_momentum_check(state: &ShellState, grid: &GridSpec) -> Result<MomentumCheck> {
    grid.validate()?;
    let n = grid.subdivisions;
    let l = grid.half_width;
    let h = grid.cell();
    let alpha = state.alpha();
    let poly = build_affine_poly(state);
    let psi = |x: f64, y: f64| (-0.5 * alpha * (x * x + y * y)).exp() * poly.eval(x, y);

    let mut data = Vec::with_capacity(n * n);
    let mut edge_mass = 0.0;
    for j in 0..n {
        let y = grid.coord(j);
        for i in 0..n {
            let x = grid.coord(i);
            let v = psi(x, y);
            if i == 0 || j == 0 || i == n - 1 || j == n - 1 {
                edge_mass += v * v * h * h;
            }
            data.push(Complex64::new(v, 0.0));
        }
    }
    fft_2d(&mut data, n);

    let dp = 2.0 * std::f64::consts::PI / (n as f64 * h);
    let momentum = |k: usize| {
        let signed = if k < n.div_ceil(2) {
            k as f64
        } else {
            k as f64 - n as f64
        };
        signed * dp
    };
    let norm = h * h / (2.0 * std::f64::consts::PI);
    let expected_phase = match state.shell() % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, -1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, 1.0),
    };

    let mut max_mismatch: f64 = 0.0;
    let mut peak = (0.0, Complex64::default(), 0.0);
    for ky in 0..n {
        let py = momentum(ky);
        for kx in 0..n {
            let px = momentum(kx);
            // shift the transform origin from -L to 0 on each axis
            let shift = Complex64::from_polar(1.0, (px + py) * l);
            let computed = data[ky * n + kx] * shift * norm;
            let expected = psi(px / alpha, py / alpha) / alpha;
            max_mismatch = max_mismatch.max((computed.norm_sqr() - expected * expected).abs());
            let mag = computed.norm();
            if mag > peak.0 {
                peak = (mag, computed, expected);
            }
        }
    }
    let (mag, computed, expected) = peak;
    let phase = if mag > 0.0 {
        computed / mag * expected.signum()
    } else {
        Complex64::default()
    };
    Ok(MomentumCheck {
        max_density_mismatch: max_mismatch,
        phase_mismatch: (phase - expected_phase).norm(),
        phase: [phase.re, phase.im],
        aliasing: edge_mass > ALIASING_TOL,
    })
}

/// `count` states of shell `shell` with standard normal coefficients and
/// `alpha` uniform in `[0.5, 2]`, reproducible from `seed`.
pub fn random_states(shell: usize, count: usize, seed: u64) -> Result<Vec<ShellState>> {
    let mut rng = shard_rng(seed, 1 << 32 | shell as u64);
    (0..count)
        .map(|_| {
            let coeffs: Vec<f64> = (0..=shell).map(|_| rng.sample(StandardNormal)).collect();
            let alpha = rng.random_range(0.5..2.0);
            ShellState::normalized(shell, coeffs, alpha).map(|(s, _)| s)
        })
        .collect()
}

/// Domain counts at `grid` and at its refinement.
pub fn refinement_counts(state: &ShellState, grid: &GridSpec) -> Result<(usize, usize)> {
    let coarse = partition_state(state, grid)?.count();
    let fine = partition_state(state, &grid.refined())?.count();
    Ok((coarse, fine))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nodal::partition_state;

    const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

    #[test]
    fn ground_state_entropy() {
        let s = ShellState::basis(0, 0, 1.0).unwrap();
        let est = mc_entropy(&s, 200_000, 1).unwrap();
        let exact = std::f64::consts::PI.ln() + 1.0;
        assert!(est.z_score(exact) < 3.0, "{est:?}");
    }

    #[test]
    fn n1_entropy() {
        let s = ShellState::new(1, vec![0.6, 0.8], 1.0).unwrap();
        let est = mc_entropy(&s, 400_000, 3).unwrap();
        let exact = (2.0 * std::f64::consts::PI).ln() + EULER_GAMMA;
        assert!(est.z_score(exact) < 3.0, "{est:?}");
    }

    #[test]
    fn deterministic_for_seed() {
        let s = ShellState::new(2, vec![0.5, 0.5, 0.5f64.sqrt()], 1.3).unwrap();
        let a = mc_entropy(&s, 150_000, 9).unwrap();
        let b = mc_entropy(&s, 150_000, 9).unwrap();
        assert_eq!(a.mean.to_bits(), b.mean.to_bits());
        assert_eq!(a.standard_error.to_bits(), b.standard_error.to_bits());
        let c = mc_entropy(&s, 150_000, 10).unwrap();
        assert_ne!(a.mean.to_bits(), c.mean.to_bits());
    }

    #[test]
    fn too_few_samples() {
        let s = ShellState::basis(1, 0, 1.0).unwrap();
        assert!(matches!(mc_entropy(&s, 10, 0), Err(Error::TooFewSamples { .. })));
    }

    #[test]
    fn n1_domains_split_evenly() {
        let s = ShellState::new(1, vec![0.6, 0.8], 2.0).unwrap();
        let part = partition_state(&s, &GridSpec::default()).unwrap();
        let est = mc_domain_weights(&s, &part, 200_000, 5).unwrap();
        assert_eq!(est.weights.len(), 2);
        for w in &est.weights {
            assert!(w.z_score(0.5) < 3.0, "{w:?}");
        }
        assert!(!est.resolution_warning);
    }

    #[test]
    fn fft_ground_state() {
        let s = ShellState::basis(0, 0, 1.0).unwrap();
        let chk = fft_momentum_check(&s, &fft_grid()).unwrap();
        assert!(chk.max_density_mismatch < 1e-8, "{chk:?}");
        assert!(chk.phase_mismatch < 1e-8);
        assert!(!chk.aliasing);
    }

    #[test]
    fn fft_phase_follows_shell() {
        let (s, _) = ShellState::normalized(3, vec![0.1, 0.5, 0.7, 0.3], 0.8).unwrap();
        let chk = fft_momentum_check(&s, &fft_grid()).unwrap();
        assert!(chk.phase_mismatch < 1e-6, "{chk:?}");
        assert!((chk.phase[1] - 1.0).abs() < 1e-6);
    }

    #[test]
    fn fft_reports_aliasing_on_small_window() {
        let s = ShellState::basis(2, 1, 1.0).unwrap();
        let chk = fft_momentum_check(&s, &GridSpec::new(2.0, 64).unwrap()).unwrap();
        assert!(chk.aliasing);
    }
}
