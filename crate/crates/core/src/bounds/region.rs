//! Digital rate regions under amplitude and power constraints.
//!
//! * [`InnerRegion`]: `Σ_{k∈J} R_k ≤ I(Σ_{k∈J} X_k; Y | X_{J^c})` with every
//!   user drawing from its own single-user optimal input,
//! * [`OuterRegion`]: per-user constrained capacities intersected with
//!   the power-only Gaussian region,
//! * [`GaussianRegion`]: the power-only Gaussian MAC region.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use super::smith::{ba_constrained_capacity_with, mixture_information, BaSettings, ConstrainedCapacity, DiscreteInput};
use super::{beta_prime, gaussian_capacity, outer_bound_sumrate, socc_mse, trivial_converse};
use crate::error::{check_len, invalid, Result};
use crate::zerosum::PEAK_FACTOR;

/// Relative slack used by membership tests.
pub const MEMBERSHIP_TOL: f64 = 1e-12;

/// Masses below this are dropped when convolving inputs.
const PRUNE: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UserConstraint {
    pub power: f64,
    pub amplitude: f64,
}

/// A region given by one sum-rate bound per nonempty user subset.
pub trait RateRegion {
    fn users(&self) -> usize;

    /// Bound on `Σ_{k∈J} R_k`, with `J` encoded as a bit mask.
    fn subset_bound(&self, mask: u64) -> f64;

    fn contains(&self, rates: &[f64]) -> Result<bool> {
        check_len(self.users(), rates.len())?;
        if rates.iter().any(|r| *r < 0.0) {
            return Ok(false);
        }
        for mask in 1..(1u64 << self.users()) {
            let s: f64 = (0..self.users())
                .filter(|k| mask >> k & 1 == 1)
                .map(|k| rates[k])
                .sum();
            let bound = self.subset_bound(mask);
            if s > bound + MEMBERSHIP_TOL * bound.abs().max(1.0) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Bound on the sum of all rates; the largest sum rate when the
    /// subset bounds are submodular.
    fn full_set_bound(&self) -> f64 {
        self.subset_bound((1u64 << self.users()) - 1)
    }
}

fn check_users(users: usize) -> Result<()> {
    if users == 0 || users > 20 {
        return Err(invalid("users", "need between 1 and 20 users"));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct GaussianRegion {
    powers: Vec<f64>,
    noise_var: f64,
}

impl GaussianRegion {
    pub fn new(powers: Vec<f64>, noise_var: f64) -> Result<Self> {
        check_users(powers.len())?;
        if powers.iter().any(|p| !(*p >= 0.0)) || !(noise_var > 0.0) {
            return Err(invalid("powers", "need non-negative powers and positive noise"));
        }
        Ok(Self { powers, noise_var })
    }
}

impl RateRegion for GaussianRegion {
    fn users(&self) -> usize {
        self.powers.len()
    }

    fn subset_bound(&self, mask: u64) -> f64 {
        let p: f64 = (0..self.users())
            .filter(|k| mask >> k & 1 == 1)
            .map(|k| self.powers[k])
            .sum();
        0.5 * (p / self.noise_var).ln_1p()
    }
}

/// Single-user optimal inputs, shared between users with equal constraints.
fn solve_inputs(
    constraints: &[UserConstraint],
    noise_var: f64,
    settings: &BaSettings,
) -> Result<(Vec<usize>, Vec<ConstrainedCapacity>)> {
    let mut groups: Vec<UserConstraint> = Vec::new();
    let mut solved = Vec::new();
    let mut group_of = Vec::with_capacity(constraints.len());
    for c in constraints {
        let g = match groups.iter().position(|x| x == c) {
            Some(g) => g,
            None => {
                groups.push(*c);
                solved.push(ba_constrained_capacity_with(c.power, c.amplitude, noise_var, settings)?);
                groups.len() - 1
            }
        };
        group_of.push(g);
    }
    Ok((group_of, solved))
}

/// Information of the sum of independent inputs through `N(0, σ²)`.
pub fn sum_information(inputs: &[&DiscreteInput], noise_var: f64) -> Result<f64> {
    let Some((first, rest)) = inputs.split_first() else {
        return Ok(0.0);
    };
    let bin = 1e-6 * noise_var.sqrt();
    let mut acc = (*first).clone();
    for d in rest {
        acc = acc.convolve(d, bin, PRUNE);
    }
    mixture_information(&acc, noise_var)
}

#[derive(Debug, Clone, PartialEq)]
pub struct InnerRegion {
    users: usize,
    bounds: Vec<f64>,
    single_user: Vec<ConstrainedCapacity>,
}

impl InnerRegion {
    pub fn new(constraints: &[UserConstraint], noise_var: f64) -> Result<Self> {
        Self::with_settings(constraints, noise_var, &BaSettings::default())
    }

    pub fn with_settings(constraints: &[UserConstraint], noise_var: f64, settings: &BaSettings) -> Result<Self> {
        let users = constraints.len();
        check_users(users)?;
        let (group_of, solved) = solve_inputs(constraints, noise_var, settings)?;
        let mut memo: HashMap<Vec<usize>, f64> = HashMap::new();
        let mut bounds = vec![0.0; 1 << users];
        for mask in 1..(1u64 << users) {
            let mut counts = vec![0usize; solved.len()];
            for k in (0..users).filter(|k| mask >> k & 1 == 1) {
                counts[group_of[k]] += 1;
            }
            let value = match memo.get(&counts) {
                Some(v) => *v,
                None => {
                    let inputs: Vec<&DiscreteInput> = counts
                        .iter()
                        .enumerate()
                        .flat_map(|(g, &n)| std::iter::repeat_n(&solved[g].input, n))
                        .collect();
                    let v = sum_information(&inputs, noise_var)?;
                    memo.insert(counts, v);
                    v
                }
            };
            bounds[mask as usize] = value;
        }
        let single_user = group_of.iter().map(|&g| solved[g].clone()).collect();
        Ok(Self {
            users,
            bounds,
            single_user,
        })
    }

    /// Single-user optimal input of user `k`.
    pub fn single_user(&self, k: usize) -> &ConstrainedCapacity {
        &self.single_user[k]
    }
}

impl RateRegion for InnerRegion {
    fn users(&self) -> usize {
        self.users
    }

    fn subset_bound(&self, mask: u64) -> f64 {
        self.bounds[mask as usize]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OuterRegion {
    caps: Vec<f64>,
    gaussian: GaussianRegion,
}

impl OuterRegion {
    pub fn caps(&self) -> &[f64] {
        &self.caps
    }

    pub fn gaussian(&self) -> &GaussianRegion {
        &self.gaussian
    }
}

impl RateRegion for OuterRegion {
    fn users(&self) -> usize {
        self.caps.len()
    }

    fn subset_bound(&self, mask: u64) -> f64 {
        let caps: f64 = (0..self.users())
            .filter(|k| mask >> k & 1 == 1)
            .map(|k| self.caps[k])
            .sum();
        caps.min(self.gaussian.subset_bound(mask))
    }
}

/// Sum-rate bound of subset `subset` of the inner region.
pub fn constrained_region_inner(constraints: &[UserConstraint], noise_var: f64, subset: &[usize]) -> Result<f64> {
    for &k in subset {
        if k >= constraints.len() {
            return Err(invalid("subset", format!("user {k} does not exist")));
        }
    }
    if subset.is_empty() {
        return Ok(0.0);
    }
    let chosen: Vec<UserConstraint> = subset.iter().map(|&k| constraints[k]).collect();
    let (group_of, solved) = solve_inputs(&chosen, noise_var, &BaSettings::default())?;
    let inputs: Vec<&DiscreteInput> = group_of.iter().map(|&g| &solved[g].input).collect();
    sum_information(&inputs, noise_var)
}

pub fn constrained_region_outer(constraints: &[UserConstraint], noise_var: f64) -> Result<OuterRegion> {
    check_users(constraints.len())?;
    let (group_of, solved) = solve_inputs(constraints, noise_var, &BaSettings::default())?;
    Ok(OuterRegion {
        caps: group_of.iter().map(|&g| solved[g].capacity).collect(),
        gaussian: GaussianRegion::new(constraints.iter().map(|c| c.power).collect(), noise_var)?,
    })
}

/// Constraints at which the base region is evaluated for analog rate `β`:
/// powers `P_k/(1−β)` and amplitudes `A_k/PEAK_FACTOR`.
pub fn rescaled_constraints(constraints: &[UserConstraint], beta: f64) -> Result<Vec<UserConstraint>> {
    if !(beta > 0.0 && beta < 1.0) {
        return Err(invalid("beta", "must lie in (0, 1)"));
    }
    Ok(constraints
        .iter()
        .map(|c| UserConstraint {
            power: c.power / (1.0 - beta),
            amplitude: c.amplitude / PEAK_FACTOR,
        })
        .collect())
}

/// Whether `rates` are achievable alongside analog rate `β`, given the base
/// region evaluated at the rescaled constraints.
pub fn inner_bound_membership(rates: &[f64], beta: f64, rescaled_region: &dyn RateRegion) -> Result<bool> {
    let scale = 1.0 - beta_prime(beta)?;
    let scaled: Vec<f64> = rates.iter().map(|r| r / scale).collect();
    rescaled_region.contains(&scaled)
}

/// Sum-rate bounds of `K_d` identical digital users next to `K_a` analog
/// users, as functions of `K_d` and `β`.
#[derive(Debug)]
pub struct SumRateScenario {
    pub noise_var: f64,
    pub analog_amplitude: f64,
    pub analog_users: usize,
    pub digital_power: f64,
    pub digital_amplitude: f64,
    pub settings: BaSettings,
    inputs: Mutex<HashMap<(u64, u64), Arc<ConstrainedCapacity>>>,
    sums: Mutex<HashMap<(u64, u64, usize), f64>>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SumRateRow {
    pub digital_users: usize,
    pub beta: f64,
    pub achievable: f64,
    pub converse: f64,
    pub trivial: f64,
}

impl SumRateScenario {
    pub fn new(
        noise_var: f64,
        analog_amplitude: f64,
        analog_users: usize,
        digital_power: f64,
        digital_amplitude: f64,
    ) -> Result<Self> {
        for (v, name) in [
            (noise_var, "noise_var"),
            (analog_amplitude, "analog_amplitude"),
            (digital_power, "digital_power"),
            (digital_amplitude, "digital_amplitude"),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(invalid(name, "must be positive and finite"));
            }
        }
        Ok(Self {
            noise_var,
            analog_amplitude,
            analog_users,
            digital_power,
            digital_amplitude,
            settings: BaSettings::default(),
            inputs: Mutex::new(HashMap::new()),
            sums: Mutex::new(HashMap::new()),
        })
    }

    /// `σ² = 0 dB`, `A_a = 2.5 dB`, `P_k = 8 dB`, `A_k = 2√(2P_k)`, ten
    /// analog users.
    pub fn reference() -> Self {
        let p = 10f64.powf(0.8);
        Self::new(1.0, 10f64.powf(0.25), 10, p, 2.0 * (2.0 * p).sqrt()).expect("valid constants")
    }

    pub fn trivial(&self, digital_users: usize) -> Result<f64> {
        trivial_converse(&vec![self.digital_power; digital_users], self.noise_var)
    }

    pub fn converse(&self, digital_users: usize, beta: f64) -> Result<f64> {
        let v = socc_mse(beta, self.noise_var, self.analog_amplitude)?;
        outer_bound_sumrate(
            &vec![self.digital_power; digital_users],
            self.analog_users,
            self.analog_amplitude,
            self.noise_var,
            beta,
            v,
        )
    }

    /// `(1 − β') · I(Σ X_k; Y)` with every user at its single-user optimum
    /// for power `P/(1−β)` and amplitude `A/PEAK_FACTOR`.
    pub fn achievable(&self, digital_users: usize, beta: f64) -> Result<f64> {
        let scale = 1.0 - beta_prime(beta)?;
        let c = rescaled_constraints(
            &[UserConstraint {
                power: self.digital_power,
                amplitude: self.digital_amplitude,
            }],
            beta,
        )?[0];
        // When A² ≤ P the power constraint cannot bind.
        let power = if c.amplitude * c.amplitude <= c.power {
            f64::INFINITY
        } else {
            c.power
        };
        let key = (c.amplitude.to_bits(), power.to_bits());
        let input = {
            let mut cache = self.inputs.lock().expect("cache lock");
            match cache.get(&key) {
                Some(v) => v.clone(),
                None => {
                    let v = Arc::new(ba_constrained_capacity_with(
                        power,
                        c.amplitude,
                        self.noise_var,
                        &self.settings,
                    )?);
                    cache.insert(key, v.clone());
                    v
                }
            }
        };
        let sum_key = (key.0, key.1, digital_users);
        let cached = self.sums.lock().expect("cache lock").get(&sum_key).copied();
        let info = match cached {
            Some(v) => v,
            None => {
                let inputs = vec![&input.input; digital_users];
                let v = sum_information(&inputs, self.noise_var)?;
                self.sums.lock().expect("cache lock").insert(sum_key, v);
                v
            }
        };
        Ok(scale * info)
    }

    pub fn row(&self, digital_users: usize, beta: f64) -> Result<SumRateRow> {
        Ok(SumRateRow {
            digital_users,
            beta,
            achievable: self.achievable(digital_users, beta)?,
            converse: self.converse(digital_users, beta)?,
            trivial: self.trivial(digital_users)?,
        })
    }

    /// Converse of the single-user constrained capacity, `C(P/σ²)`.
    pub fn single_user_power_cap(&self) -> Result<f64> {
        gaussian_capacity(self.digital_power / self.noise_var)
    }
}
