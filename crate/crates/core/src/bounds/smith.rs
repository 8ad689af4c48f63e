//! Amplitude- and power-constrained capacity of the scalar Gaussian channel.
//!
//! The input is restricted to `G` equispaced atoms on `[-A, A]` and the
//! optimal distribution is found by Blahut–Arimoto with a Lagrange
//! multiplier `s` for the power constraint; `s` is bisected until
//! `E X² ≤ P` is tight. Output integrals use a composite Gauss–Legendre
//! grid over `±(A + 8σ)`.

use std::f64::consts::PI;

use super::quadrature::{composite_gauss_legendre, QuadratureGrid};
use crate::error::{invalid, Result, SoccError};

/// Finite-support real distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteInput {
    pub atoms: Vec<f64>,
    pub probs: Vec<f64>,
}

impl DiscreteInput {
    pub fn new(atoms: Vec<f64>, probs: Vec<f64>) -> Result<Self> {
        if atoms.len() != probs.len() || atoms.is_empty() {
            return Err(invalid("probs", "need one probability per atom"));
        }
        if probs.iter().any(|p| !(*p >= 0.0)) {
            return Err(invalid("probs", "probabilities must be non-negative"));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(invalid("probs", "probabilities must sum to one"));
        }
        Ok(Self { atoms, probs })
    }

    pub fn point(x: f64) -> Self {
        Self {
            atoms: vec![x],
            probs: vec![1.0],
        }
    }

    pub fn mean(&self) -> f64 {
        self.atoms.iter().zip(&self.probs).map(|(x, p)| x * p).sum()
    }

    pub fn second_moment(&self) -> f64 {
        self.atoms.iter().zip(&self.probs).map(|(x, p)| x * x * p).sum()
    }

    pub fn peak(&self) -> f64 {
        self.atoms
            .iter()
            .zip(&self.probs)
            .filter(|(_, p)| **p > 0.0)
            .fold(0.0, |m, (x, _)| m.max(x.abs()))
    }

    /// Largest deviation of the law from its mirror image.
    pub fn asymmetry(&self) -> f64 {
        let n = self.probs.len();
        (0..n)
            .map(|i| (self.probs[i] - self.probs[n - 1 - i]).abs())
            .fold(0.0, f64::max)
    }

    /// Law of the sum of two independent inputs. Atoms closer than `bin`
    /// are merged at their probability-weighted mean; masses below
    /// `prune` are dropped before convolving.
    pub fn convolve(&self, other: &Self, bin: f64, prune: f64) -> Self {
        let keep = |d: &Self| -> Vec<(f64, f64)> {
            d.atoms
                .iter()
                .zip(&d.probs)
                .filter(|(_, p)| **p > prune)
                .map(|(x, p)| (*x, *p))
                .collect()
        };
        let (a, b) = (keep(self), keep(other));
        let mut pairs: Vec<(f64, f64)> = Vec::with_capacity(a.len() * b.len());
        for &(x, p) in &a {
            for &(y, q) in &b {
                pairs.push((x + y, p * q));
            }
        }
        pairs.sort_by(|u, v| u.0.total_cmp(&v.0));
        let mut atoms = Vec::new();
        let mut probs = Vec::new();
        let mut acc: Option<(f64, f64, f64)> = None;
        for (x, p) in pairs {
            match acc {
                Some((start, mass, moment)) if x - start < bin => acc = Some((start, mass + p, moment + p * x)),
                _ => {
                    if let Some((_, mass, moment)) = acc {
                        atoms.push(moment / mass);
                        probs.push(mass);
                    }
                    acc = Some((x, p, p * x));
                }
            }
        }
        if let Some((_, mass, moment)) = acc {
            atoms.push(moment / mass);
            probs.push(mass);
        }
        let total: f64 = probs.iter().sum();
        probs.iter_mut().for_each(|p| *p /= total);
        Self { atoms, probs }
    }
}

/// `h(X + N) − h(N)` for discrete `X` and `N ~ N(0, σ²)`, i.e. the
/// information carried by a Gaussian mixture.
pub fn mixture_information(input: &DiscreteInput, noise_var: f64) -> Result<f64> {
    mixture_information_with(input, noise_var, 0.5, 8.0)
}

/// As [`mixture_information`] with panel width `panel·σ` and range
/// `tail·σ` beyond the extreme atoms.
pub fn mixture_information_with(input: &DiscreteInput, noise_var: f64, panel: f64, tail: f64) -> Result<f64> {
    if !(noise_var > 0.0) {
        return Err(invalid("noise_var", "must be positive"));
    }
    let sigma = noise_var.sqrt();
    let support: Vec<(f64, f64)> = input
        .atoms
        .iter()
        .zip(&input.probs)
        .filter(|(_, p)| **p > 0.0)
        .map(|(x, p)| (*x, *p))
        .collect();
    let lo = support.iter().map(|a| a.0).fold(f64::INFINITY, f64::min) - tail * sigma;
    let hi = support.iter().map(|a| a.0).fold(f64::NEG_INFINITY, f64::max) + tail * sigma;
    let grid = composite_gauss_legendre(lo, hi, panel * sigma)?;
    let norm = 1.0 / (2.0 * PI * noise_var).sqrt();
    let mut entropy = 0.0;
    for (&y, &w) in grid.nodes.iter().zip(&grid.weights) {
        let q: f64 = support
            .iter()
            .map(|&(x, p)| p * (-(y - x) * (y - x) / (2.0 * noise_var)).exp())
            .sum::<f64>()
            * norm;
        if q > 0.0 {
            entropy -= w * q * q.ln();
        }
    }
    let noise_entropy = 0.5 * (2.0 * PI * std::f64::consts::E * noise_var).ln();
    Ok(entropy - noise_entropy)
}

#[derive(Debug, Clone, PartialEq)]
pub struct BaSettings {
    /// Number of equispaced input atoms `G`.
    pub atoms: usize,
    /// Stopping gap between the Blahut–Arimoto upper and lower bounds.
    pub tolerance: f64,
    pub max_iterations: usize,
    /// Quadrature panel width in units of `σ`.
    pub panel: f64,
    /// Output range beyond `±A` in units of `σ`.
    pub tail: f64,
    /// Relative tolerance on `E X² = P` when the power constraint binds.
    pub power_tolerance: f64,
    /// Largest exponent `μ` of the update `p ← p e^{μ(d − s x²)}`; `μ` is
    /// halved whenever the information decreases and regrows otherwise.
    pub step: f64,
}

impl Default for BaSettings {
    fn default() -> Self {
        Self {
            atoms: 201,
            tolerance: 1e-5,
            max_iterations: 200_000,
            panel: 0.5,
            tail: 8.0,
            power_tolerance: 1e-6,
            step: 32.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConstrainedCapacity {
    /// Mutual information of the returned (feasible) input, nats.
    pub capacity: f64,
    pub input: DiscreteInput,
    pub second_moment: f64,
    /// Lagrange multiplier of the power constraint (0 when slack).
    pub multiplier: f64,
    pub iterations: usize,
    /// Final Blahut–Arimoto bound gap.
    pub gap: f64,
}

struct Problem {
    x: Vec<f64>,
    x2: Vec<f64>,
    /// `w_j W(y_j | x_i)`, row-major in `i`.
    b: Vec<f64>,
    /// `Σ_j w_j W log W`.
    c: Vec<f64>,
    ln_w: Vec<f64>,
    j: usize,
}

struct Run {
    p: Vec<f64>,
    information: f64,
    second_moment: f64,
    multiplier: f64,
    gap: f64,
    iterations: usize,
}

impl Problem {
    fn new(amplitude: f64, noise_var: f64, settings: &BaSettings) -> Result<Self> {
        let g = settings.atoms;
        let sigma = noise_var.sqrt();
        let x: Vec<f64> = (0..g)
            .map(|i| -amplitude + 2.0 * amplitude * i as f64 / (g - 1) as f64)
            .collect();
        let span = amplitude + settings.tail * sigma;
        let QuadratureGrid { nodes, weights } =
            composite_gauss_legendre(-span, span, settings.panel * sigma)?;
        let j = nodes.len();
        let ln_norm = -0.5 * (2.0 * PI * noise_var).ln();
        let mut b = vec![0.0; g * j];
        let mut c = vec![0.0; g];
        for (i, &xi) in x.iter().enumerate() {
            for (jj, (&y, &w)) in nodes.iter().zip(&weights).enumerate() {
                let ln_w = ln_norm - (y - xi) * (y - xi) / (2.0 * noise_var);
                let v = w * ln_w.exp();
                b[i * j + jj] = v;
                c[i] += v * ln_w;
            }
        }
        Ok(Self {
            x2: x.iter().map(|v| v * v).collect(),
            x,
            b,
            c,
            ln_w: weights.iter().map(|w| w.ln()).collect(),
            j,
        })
    }

    fn divergences(&self, p: &[f64], d: &mut [f64], ln_q: &mut [f64]) {
        let j = self.j;
        ln_q.iter_mut().for_each(|v| *v = 0.0);
        for (i, &pi) in p.iter().enumerate() {
            if pi == 0.0 {
                continue;
            }
            for (q, &bij) in ln_q.iter_mut().zip(&self.b[i * j..(i + 1) * j]) {
                *q += pi * bij;
            }
        }
        for (q, lw) in ln_q.iter_mut().zip(&self.ln_w) {
            *q = q.max(f64::MIN_POSITIVE).ln() - lw;
        }
        for (i, di) in d.iter_mut().enumerate() {
            let row = &self.b[i * j..(i + 1) * j];
            *di = self.c[i] - row.iter().zip(ln_q.iter()).map(|(b, l)| b * l).sum::<f64>();
        }
    }

    /// Second moment of `p_i exp(d_i − s x_i²)` after normalization.
    fn tilted_moment(&self, p: &[f64], d: &[f64], s: f64, step: f64) -> f64 {
        let top = d
            .iter()
            .zip(&self.x2)
            .zip(p)
            .filter(|(_, &pi)| pi > 0.0)
            .map(|((di, x2), _)| di - s * x2)
            .fold(f64::NEG_INFINITY, f64::max);
        let (mut z, mut m) = (0.0, 0.0);
        for ((pi, di), x2) in p.iter().zip(d).zip(&self.x2) {
            let w = pi * (step * (di - s * x2 - top)).exp();
            z += w;
            m += w * x2;
        }
        m / z
    }

    /// Smallest `s ≥ 0` whose tilted update meets `E X² ≤ power`.
    fn multiplier(&self, p: &[f64], d: &[f64], power: f64, previous: f64, step: f64) -> f64 {
        if !power.is_finite() || self.tilted_moment(p, d, 0.0, step) <= power {
            return 0.0;
        }
        let mut hi = previous.max(1e-3);
        while self.tilted_moment(p, d, hi, step) > power {
            hi *= 2.0;
            if hi > 1e12 {
                return hi;
            }
        }
        let mut lo = 0.0;
        for _ in 0..100 {
            let mid = 0.5 * (lo + hi);
            if self.tilted_moment(p, d, mid, step) > power {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo <= 1e-14 * hi {
                break;
            }
        }
        hi
    }

    /// Blahut–Arimoto with the power multiplier refitted every iteration so
    /// the iterate stays feasible. Over-relaxed steps that lower the
    /// information are undone and retried with half the exponent. Stops on
    /// the gap between the dual bound `max_i (d_i − s x_i²) + sP` and `I(p)`.
    fn run(&self, power: f64, settings: &BaSettings) -> Result<Run> {
        let g = self.x.len();
        let mut p = vec![1.0 / g as f64; g];
        let mut d = vec![0.0; g];
        let mut ln_q = vec![0.0; self.j];
        // Last accepted feasible iterate: distribution, divergences, information.
        let mut accepted: Option<(Vec<f64>, Vec<f64>, f64)> = None;
        let mut s = 0.0;
        let mut gap = f64::INFINITY;
        let mut step = settings.step.max(1.0);
        for iteration in 0..=settings.max_iterations {
            self.divergences(&p, &mut d, &mut ln_q);
            let second_moment: f64 = p.iter().zip(&self.x2).map(|(a, b)| a * b).sum();
            let information: f64 = p.iter().zip(&d).map(|(a, b)| a * b).sum();
            if second_moment <= power * (1.0 + settings.power_tolerance) {
                match &accepted {
                    Some((prev_p, prev_d, prev_info)) if information < prev_info - 1e-12 && step > 1.0 => {
                        step = (step / 2.0).max(1.0);
                        p.copy_from_slice(prev_p);
                        d.copy_from_slice(prev_d);
                    }
                    _ => {
                        s = if s > 0.0 { self.multiplier(&p, &d, power, s, 1.0) } else { s };
                        let dual = d
                            .iter()
                            .zip(&self.x2)
                            .map(|(di, x2)| di - s * x2)
                            .fold(f64::NEG_INFINITY, f64::max)
                            + if s > 0.0 { s * power } else { 0.0 };
                        gap = dual - information;
                        if gap <= settings.tolerance {
                            return Ok(Run {
                                p,
                                information,
                                second_moment,
                                multiplier: s,
                                gap,
                                iterations: iteration,
                            });
                        }
                        step = (step * 1.1).min(settings.step.max(1.0));
                        accepted = Some((p.clone(), d.clone(), information));
                    }
                }
            }
            if iteration == settings.max_iterations {
                break;
            }
            s = self.multiplier(&p, &d, power, s, step);
            let top = d
                .iter()
                .zip(&self.x2)
                .map(|(di, x2)| di - s * x2)
                .fold(f64::NEG_INFINITY, f64::max);
            let mut z = 0.0;
            for i in 0..g {
                // Keep every atom alive so a large step cannot remove it for good.
                p[i] = (p[i] * (step * (d[i] - s * self.x2[i] - top)).exp()).max(1e-300);
                z += p[i];
            }
            for pi in p.iter_mut() {
                *pi /= z;
            }
            for i in 0..g / 2 {
                let m = 0.5 * (p[i] + p[g - 1 - i]);
                p[i] = m;
                p[g - 1 - i] = m;
            }
        }
        Err(SoccError::NotConverged {
            iterations: settings.max_iterations,
            residual: gap,
        })
    }
}

pub fn ba_constrained_capacity(power: f64, amplitude: f64, noise_var: f64) -> Result<ConstrainedCapacity> {
    ba_constrained_capacity_with(power, amplitude, noise_var, &BaSettings::default())
}

/// Capacity under `|X| ≤ amplitude` and `E X² ≤ power`; pass
/// `power = ∞` for the amplitude constraint alone.
pub fn ba_constrained_capacity_with(
    power: f64,
    amplitude: f64,
    noise_var: f64,
    settings: &BaSettings,
) -> Result<ConstrainedCapacity> {
    if !(power > 0.0) {
        return Err(invalid("power", "must be positive"));
    }
    if !(amplitude > 0.0 && amplitude.is_finite()) {
        return Err(invalid("amplitude", "must be positive and finite"));
    }
    if !(noise_var > 0.0 && noise_var.is_finite()) {
        return Err(invalid("noise_var", "must be positive and finite"));
    }
    if settings.atoms < 2 {
        return Err(invalid("atoms", "need at least two atoms"));
    }
    let problem = Problem::new(amplitude, noise_var, settings)?;
    let run = problem.run(power, settings)?;
    Ok(ConstrainedCapacity {
        capacity: run.information,
        second_moment: run.second_moment,
        input: DiscreteInput::new(problem.x.clone(), run.p)?,
        multiplier: run.multiplier,
        iterations: run.iterations,
        gap: run.gap,
    })
}
