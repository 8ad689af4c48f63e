//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness so the lines always reach stdout. The
//! process fails if any criterion outside `EXPECTED_FAILURES` fails, or if an
//! expected failure unexpectedly passes.

use std::collections::BTreeSet;
use std::f64::consts::{PI, SQRT_2};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use socc_core::bounds::smith::mixture_information;
use socc_core::bounds::{
    ba_constrained_capacity, find_jumps, gaussian_capacity, nomographic_tail, reciprocal_thresholds, socc_mse,
    timeshare_mse, DiscreteInput, InnerRegion, RateRegion, SumRateScenario, UserConstraint,
};
use socc_core::channel::{ComplexNoiseConvention, NoiseModel};
use socc_core::codec::{qam, BlockPartition, LdpcQamCode, MacCode, RandomCodebookMac, WrappedCode};
use socc_core::experiments::{
    run_amplitude_histogram, run_ber_sweep, HistogramSpec, NoiseLaw, ScenarioSpec, SimulationSpec, TrialBudget,
};
use socc_core::socc::fading::{FadingConfig, FadingScheme};
use socc_core::socc::{Activity, NomographicFunction, SoccConfig, SoccScheme};
use socc_core::zerosum::build_planemap;

/// Criteria that cannot pass as stated; see the detail lines.
const EXPECTED_FAILURES: [u32; 2] = [6, 10];

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: String) -> Verdict {
    Verdict { pass, detail }
}

fn db(x: f64) -> f64 {
    10f64.powf(x / 10.0)
}

fn mean_var(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    (mean, xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n)
}

/// `Σ_{i=1..k} 2^{-i/2} + k'/2^k` for `n = 2^k + k'`.
fn induction_oracle(n: usize) -> f64 {
    let mut k = 0;
    while 1usize << (k + 1) <= n {
        k += 1;
    }
    let rest = (n - (1 << k)) as f64 / (1u64 << k) as f64;
    (1..=k).map(|i| 2f64.powf(-(i as f64) / 2.0)).sum::<f64>() + rest
}

fn c1_planemap() -> Verdict {
    let mut worst = (0.0f64, 0.0f64, f64::NEG_INFINITY);
    let mut bad = Vec::new();
    for n in 2..=512 {
        let r = build_planemap(n).unwrap().report();
        let bound = (2.0 + SQRT_2).min(induction_oracle(n));
        worst.0 = worst.0.max(r.orthonormality_residual);
        worst.1 = worst.1.max(r.max_abs_column_sum);
        worst.2 = worst.2.max(r.max_row_abs_sum - bound);
        if r.orthonormality_residual > 1e-10 || r.max_abs_column_sum > 1e-10 || r.max_row_abs_sum > bound {
            bad.push(n);
        }
    }
    verdict(
        bad.is_empty(),
        format!(
            "max residual {:.1e}, max column sum {:.1e}, max row sum minus bound {:.3}; failing n: {bad:?}",
            worst.0, worst.1, worst.2
        ),
    )
}

fn c2_norm_u10() -> Verdict {
    let dense = build_planemap(10).unwrap().to_dense();
    let norm = dense.iter().map(|r| r.iter().map(|v| v.abs()).sum::<f64>()).fold(0.0, f64::max);
    // Heaviest row of the recursion: 1/√2 + 1/2 + 1/√20 + 1/√10.
    let oracle = 0.5f64.sqrt() + 0.5 + 20f64.sqrt().recip() + 10f64.sqrt().recip();
    verdict(
        (norm - 1.75).abs() <= 0.01 && (norm - oracle).abs() < 1e-12,
        format!("‖U_10‖∞ = {norm:.6} (closed form {oracle:.6}, target 1.75 ± 0.01)"),
    )
}

fn c3_emulation() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(301);
    let mut worst: f64 = 0.0;
    let mut mismatches = 0;
    for trial in 0..100 {
        let blocks = rng.random_range(2..6);
        let lengths: Vec<usize> = (0..blocks).map(|_| rng.random_range(2..12)).collect();
        let partition = BlockPartition::new(lengths).unwrap();
        let powers = [rng.random_range(0.5..2.0), rng.random_range(0.5..2.0)];
        let base = RandomCodebookMac::new(&[4, 3], partition.digital_len(), &powers, trial).unwrap();
        let code = WrappedCode::new(base, partition.clone()).unwrap();
        let messages = [rng.random_range(0..4usize), rng.random_range(0..3usize)];
        let var = rng.random_range(0.05..2.0);
        let noise = NoiseModel::gaussian(var).unwrap().realize(partition.total(), &mut rng);

        // Wrapped pipeline: zero-sum codewords plus per-block biases.
        let mut y = noise.clone();
        for (start, len) in partition.blocks() {
            let bias: f64 = rng.random_range(-5.0..5.0);
            y[start..start + len].iter_mut().for_each(|v| *v += bias);
        }
        for (k, m) in messages.iter().enumerate() {
            for (a, b) in y.iter_mut().zip(code.wrap_encode(k, m).unwrap()) {
                *a += b;
            }
        }
        let wrapped_input = code.unwrap_receive(&y).unwrap();

        // Base pipeline: base codewords plus the noise seen through dense Uᵀ.
        let mut base_input = vec![0.0; partition.digital_len()];
        for (k, m) in messages.iter().enumerate() {
            for (a, b) in base_input.iter_mut().zip(code.base().encode(k, m).unwrap()) {
                *a += b;
            }
        }
        let mut dst = 0;
        for (start, len) in partition.blocks() {
            let u = build_planemap(len).unwrap().to_dense();
            for j in 0..len - 1 {
                base_input[dst + j] += (0..len).map(|i| u[i][j] * noise[start + i]).sum::<f64>();
            }
            dst += len - 1;
        }

        for (a, b) in wrapped_input.iter().zip(&base_input) {
            worst = worst.max((a - b).abs());
        }
        let dw = code.base().decode(&wrapped_input, var).unwrap();
        let db_ = code.base().decode(&base_input, var).unwrap();
        mismatches += (dw.messages != db_.messages) as usize;
    }
    verdict(
        worst <= 1e-9 && mismatches == 0,
        format!("100 tuples: max decoder-input difference {worst:.1e}, decision mismatches {mismatches}"),
    )
}

fn c4_analog_law() -> Verdict {
    let partition = BlockPartition::uniform(10, 4).unwrap();
    let base = RandomCodebookMac::new(&[16], partition.digital_len(), &[1.0], 4).unwrap();
    let config = SoccConfig {
        analog_users: 5,
        analog_amplitude: 1.0,
        digital_power: vec![1.0],
        digital_amplitude: vec![2.0],
        noise: NoiseModel::gaussian(1.0).unwrap(),
        beta: 0.099,
        partition,
    };
    let s = SoccScheme::new(config, base).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(404);
    let rounds = 100_000;
    let (mut on, mut off) = (Vec::with_capacity(4 * rounds), Vec::with_capacity(4 * rounds));
    let mut max_diff: f64 = 0.0;
    for _ in 0..rounds {
        let analog = s.random_analog(&mut rng);
        let m = s.code().random_message(0, &mut rng);
        let noise = s.config().noise.realize(s.block_len(), &mut rng);
        let a = s.round_with_noise(&analog, &[m], Activity::ALL, &noise).unwrap();
        let b = s.round_with_noise(&analog, &[m], Activity::ANALOG_ONLY, &noise).unwrap();
        for i in 0..a.estimates.len() {
            max_diff = max_diff.max((a.estimates[i] - b.estimates[i]).abs());
            on.push(a.estimates[i] - a.targets[i]);
            off.push(b.estimates[i] - b.targets[i]);
        }
    }
    let (m_on, v_on) = mean_var(&on);
    let (_, v_off) = mean_var(&off);
    let se = (v_on / on.len() as f64).sqrt();
    let pass = m_on.abs() <= 3.0 * se
        && (v_on / 0.1 - 1.0).abs() <= 0.05
        && (v_off / v_on - 1.0).abs() <= 1e-9
        && max_diff <= 1e-12;
    verdict(
        pass,
        format!(
            "mean {m_on:.2e} (3 SE {:.2e}), variance {v_on:.5} vs 0.1, silenced variance {v_off:.5}, \
             max on/off estimate difference {max_diff:.1e} (rounding of the zero-sum block totals; limit 1e-12)",
            3.0 * se
        ),
    )
}

fn experiment_scheme(noise_db: f64) -> (ScenarioSpec, SoccScheme<LdpcQamCode>) {
    let spec = ScenarioSpec::default();
    let base = spec.base_code().unwrap();
    let s = spec.scheme(base, NoiseModel::gaussian(db(noise_db)).unwrap()).unwrap();
    (spec, s)
}

fn c5_digital_noninterference() -> Verdict {
    let (_, s) = experiment_scheme(-10.0);
    let mut rng = ChaCha8Rng::seed_from_u64(505);
    let frames = 100;
    let (mut differing, mut bit_errors) = (0, 0);
    for _ in 0..frames {
        let analog = s.random_analog(&mut rng);
        let m = s.code().random_message(0, &mut rng);
        let noise = s.config().noise.realize(s.block_len(), &mut rng);
        let on = s.round_with_noise(&analog, std::slice::from_ref(&m), Activity::ALL, &noise).unwrap();
        let off = s.round_with_noise(&analog, &[m], Activity::DIGITAL_ONLY, &noise).unwrap();
        let same = on.decoded.as_ref().unwrap().messages == off.decoded.as_ref().unwrap().messages
            && on.bit_errors == off.bit_errors;
        differing += !same as usize;
        bit_errors += on.bit_errors;
    }
    verdict(
        differing == 0 && bit_errors > 0,
        format!("{frames} frames at -10 dB, {bit_errors} bit errors, {differing} frames differ between analog on and off"),
    )
}

/// Exact probability that a wrapped codeword's complex peak ratio is at most
/// `x`, for i.i.d. uniform 16QAM symbols and a corner point in every
/// codeword. Each complex block applies `U_10` to nine symbols; its rows
/// split into two groups sharing only the last input.
fn peak_ratio_cdf(x: f64, blocks: i32) -> f64 {
    let u = build_planemap(10).unwrap().to_dense();
    let unit = qam::level_unit();
    let levels = [-3.0 * unit, -unit, unit, 3.0 * unit];
    let points: Vec<Complex64> = levels
        .iter()
        .flat_map(|&a| levels.iter().map(move |&b| Complex64::new(a, b)))
        .collect();
    let limit = x * 3.0 * SQRT_2 * unit;
    let groups: [(Vec<usize>, [usize; 4]); 2] = [((0..5).collect(), [0, 1, 2, 3]), ((5..10).collect(), [4, 5, 6, 7])];
    for (rows, cols) in &groups {
        for &r in rows {
            for j in 0..8 {
                assert!(cols.contains(&j) || u[r][j] == 0.0, "unexpected support in row {r}");
            }
        }
    }
    let group_prob = |rows: &[usize], cols: &[usize; 4], shared: Complex64| {
        let mut ok = 0usize;
        for i in 0..points.len().pow(4) {
            let s = [points[i & 15], points[(i >> 4) & 15], points[(i >> 8) & 15], points[(i >> 12) & 15]];
            let peak = rows
                .iter()
                .map(|&r| (cols.iter().zip(&s).map(|(&c, v)| v * u[r][c]).sum::<Complex64>() + shared * u[r][8]).norm())
                .fold(0.0, f64::max);
            ok += (peak <= limit) as usize;
        }
        ok as f64 / points.len().pow(4) as f64
    };
    let q: f64 = points
        .iter()
        .map(|&p| group_prob(&groups[0].0, &groups[0].1, p) * group_prob(&groups[1].0, &groups[1].1, p))
        .sum::<f64>()
        / points.len() as f64;
    q.powi(blocks)
}

fn c6_histogram() -> Verdict {
    let spec = HistogramSpec {
        scenario: ScenarioSpec::default(),
        codewords: 10_000,
        bin_width: 0.01,
        seed: 606,
    };
    let h = run_amplitude_histogram(&spec).unwrap();
    let below = h.fraction_at_most(1.65);
    let oracle = peak_ratio_cdf(1.65, 74);
    let se = (oracle * (1.0 - oracle) / h.ratios.len() as f64).sqrt();
    let real_max_share = h.real_ratios.iter().filter(|r| **r >= h.bound - 1e-12).count() as f64 / h.real_ratios.len() as f64;
    let pass = h.max_ratio() <= 1.75 && h.max_energy_deviation <= 1e-9 && below >= 0.95;
    verdict(
        pass,
        format!(
            "max ratio {:.4} (≤ 1.75 holds), {:.2}% ≤ 1.65 (needs 95%); exact i.i.d.-symbol value {:.2}% \
             (Monte Carlo within {:.1} SE), so the 95% level is out of reach for this map; \
             per real use {:.1}% of codewords sit at the worst case {:.4}",
            h.max_ratio(),
            100.0 * below,
            100.0 * oracle,
            (below - oracle).abs() / se,
            100.0 * real_max_share,
            h.bound
        ),
    )
}

fn analog_mse_at(noise: NoiseLaw, frames: usize) -> (f64, f64) {
    let spec = SimulationSpec {
        scenario: ScenarioSpec::default(),
        noise,
        noise_power_db: vec![Some(-12.0)],
        trials: TrialBudget {
            max_frames: frames,
            max_frame_errors: usize::MAX,
            ..Default::default()
        },
        seed: 707,
    };
    let r = run_ber_sweep(&spec).unwrap()[0];
    (r.analog_mse, r.analog_mse_theory)
}

fn c7_mse_invariance() -> Verdict {
    let frames = 1000;
    let (g, theory) = analog_mse_at(NoiseLaw::Gaussian, frames);
    // σ²/(n_ℓ A_a²) with σ² = -12 dB, n_ℓ = 10, A_a² = -10 dB.
    let oracle = db(-12.0) / (10.0 * db(-10.0));
    let mut pass = (g / oracle - 1.0).abs() <= 0.05 && (theory - oracle).abs() < 1e-12;
    let mut detail = format!("-12 dB: gaussian {g:.5e}");
    for (a, gamma) in [(1.5, 1.5), (0.1, 0.1)] {
        let (m, _) = analog_mse_at(
            NoiseLaw::Middleton {
                impulsive_index: a,
                gaussian_ratio: gamma,
            },
            frames,
        );
        pass &= (m / g - 1.0).abs() <= 0.05 && (m / oracle - 1.0).abs() <= 0.05;
        detail.push_str(&format!(", class A ({a}, {gamma}) {m:.5e}"));
    }
    detail.push_str(&format!(", theory {oracle:.5e}"));
    verdict(pass, detail)
}

fn c8_rate_bounds() -> Verdict {
    let s = SumRateScenario::reference();
    let trivial = s.trivial(7).unwrap();
    let oracle = 0.5 * (1.0 + 7.0 * db(8.0)).ln();
    let mut pass = (trivial - 1.905_183_5).abs() <= 1e-6 && (trivial - oracle).abs() < 1e-12;
    let mut ordered = true;
    for kd in 1..=10 {
        let r = s.row(kd, 0.099).unwrap();
        ordered &= r.achievable <= r.converse && r.converse <= r.trivial;
    }
    let betas: Vec<f64> = (0..=440).map(|i| 0.05 + 0.001 * i as f64).collect();
    let rows: Vec<_> = betas.iter().map(|&b| s.row(7, b).unwrap()).collect();
    ordered &= rows.iter().all(|r| r.achievable <= r.converse && r.converse <= r.trivial);
    let ach: Vec<f64> = rows.iter().map(|r| r.achievable).collect();
    let jumps = find_jumps(&betas, &ach, 1e-9);
    let thresholds = reciprocal_thresholds(0.05, 0.49);
    let jumps_ok = jumps.len() == thresholds.len()
        && jumps.iter().zip(&thresholds).all(|((lo, hi), t)| lo < t && t <= hi);
    let conv_ok = thresholds.iter().filter(|t| **t > 0.1).all(|t| {
        let i = betas.iter().position(|b| b >= t).unwrap();
        rows[i].converse > rows[i - 1].converse
    });
    pass &= ordered && jumps_ok && conv_ok;
    verdict(
        pass,
        format!(
            "trivial converse {trivial:.7} (closed form {oracle:.7}); ordering on K_d = 1..10 and 441 β points: {ordered}; \
             {} achievable jumps at {} thresholds 1/m: {jumps_ok}; converse steps up at each 1/m > 0.1: {conv_ok}",
            jumps.len(),
            thresholds.len()
        ),
    )
}

fn c9_timeshare_values() -> Verdict {
    let a = db(2.5);
    let ts = timeshare_mse(1.0, a).unwrap();
    let socc = socc_mse(0.5 - 1e-6, 1.0, a).unwrap();
    // V = σ²/A_a² and β' σ²/A_a² with β' = 1/2.
    let (ts_oracle, socc_oracle) = (db(-5.0), 0.5 * db(-5.0));
    let pass = (ts - 0.316).abs() <= 0.005
        && (socc - 0.158).abs() <= 0.005
        && (ts - ts_oracle).abs() < 1e-12
        && (socc - socc_oracle).abs() < 1e-12;
    verdict(pass, format!("time-share {ts:.4}, SOCC at β = 0.5⁻ {socc:.4}"))
}

/// Equispaced truncated Gaussian on `[−A, A]` with second moment `power`.
fn truncated_gaussian(power: f64, amplitude: f64, atoms: usize) -> DiscreteInput {
    let x: Vec<f64> = (0..atoms)
        .map(|i| -amplitude + 2.0 * amplitude * i as f64 / (atoms - 1) as f64)
        .collect();
    let weights = |sd: f64| -> Vec<f64> {
        let w: Vec<f64> = x.iter().map(|v| (-v * v / (2.0 * sd * sd)).exp()).collect();
        let z: f64 = w.iter().sum();
        w.into_iter().map(|v| v / z).collect()
    };
    let moment = |sd: f64| weights(sd).iter().zip(&x).map(|(p, v)| p * v * v).sum::<f64>();
    let (mut lo, mut hi) = (1e-3f64, 1e3f64);
    for _ in 0..200 {
        let mid = (lo * hi).sqrt();
        if moment(mid) > power {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    DiscreteInput::new(x.clone(), weights(lo)).unwrap()
}

fn corner_rates(ratio: f64) -> (f64, f64, f64) {
    let c: Vec<UserConstraint> = [db(1.0), db(4.0)]
        .iter()
        .map(|&p| UserConstraint {
            power: p,
            amplitude: ratio * p.sqrt(),
        })
        .collect();
    let r = InnerRegion::new(&c, 1.0).unwrap();
    (r.subset_bound(1), r.subset_bound(2), r.full_set_bound())
}

fn c10_constrained_capacity() -> Verdict {
    let mut worst: f64 = 0.0;
    for p in [0.5, 1.0, 4.0, 10.0] {
        let c = ba_constrained_capacity(p, 10.0 * p.sqrt(), 1.0).unwrap().capacity;
        let g = gaussian_capacity(p).unwrap();
        worst = worst.max((g - c).abs() / g);
    }
    let wide_ok = worst <= 0.01;
    let (r1, r2, _) = corner_rates(2.0);
    let corners_ok = (r1 - 0.4040).abs() <= 0.002 && (r2 - 0.6150).abs() <= 0.002;
    let lower = mixture_information(&truncated_gaussian(db(4.0), 2.0 * db(4.0).sqrt(), 401), 1.0).unwrap();
    let (s1, s2, s12) = corner_rates(SQRT_2);
    verdict(
        wide_ok && corners_ok,
        format!(
            "A = 10√P within {:.3}% of C(P): {wide_ok}; corners at A = 2√P are {r1:.4} / {r2:.4} vs 0.4040 / 0.6150; \
             a feasible truncated Gaussian already gives {lower:.4} for user 2, so 0.6150 ± 0.002 is unreachable; \
             at A = √(2P) the corners are {s1:.4} / {s2:.4} with sum {s12:.4} vs 0.7765",
            100.0 * worst
        ),
    )
}

fn c11_fading_tail() -> Verdict {
    let users = 6;
    let trials = 100_000;
    let mut rng = ChaCha8Rng::seed_from_u64(1111);
    let partition = BlockPartition::uniform(4, 3).unwrap();
    let n = partition.total();
    let base = RandomCodebookMac::new(&[4], 2 * n - 3, &[0.5], 2).unwrap();
    let epsilons = [0.5, 0.8, 1.0, 1.3, 1.6];
    let mut pass = true;
    let mut worst_margin = f64::INFINITY;
    let mut sum_oracle_ok = true;
    for function in [NomographicFunction::Sum, NomographicFunction::PNorm(2.0)] {
        for convention in [ComplexNoiseConvention::PerComponent, ComplexNoiseConvention::SplitTotal] {
            let mut errors = Vec::with_capacity(trials * 3);
            let mut amplitude = 0.0;
            // Fresh unit-modulus fading every thousand trials.
            for _ in 0..trials / 1000 {
                let fading: Vec<Complex64> = (0..users)
                    .map(|_| Complex64::from_polar(1.0, rng.random_range(0.0..2.0 * PI)))
                    .collect();
                let config = FadingConfig {
                    function: function.clone(),
                    analog_fading: fading,
                    analog_amplitudes: vec![0.5; users],
                    digital_fading: vec![Complex64::from_polar(1.0, rng.random_range(0.0..2.0 * PI))],
                    noise_variance: 1.0,
                    convention,
                    partition: partition.clone(),
                };
                let s = FadingScheme::new(config, base.clone()).unwrap();
                amplitude = s.analog_amplitude();
                for _ in 0..1000 {
                    let values: Vec<Vec<f64>> = (0..users)
                        .map(|_| (0..3).map(|_| rng.random_range(-1.0..=1.0)).collect())
                        .collect();
                    let m = s.code().random_message(0, &mut rng);
                    let out = s.round(&values, &[m], Activity::ALL, &mut rng).unwrap();
                    errors.extend(out.estimates.iter().zip(&out.targets).map(|(e, t)| (e - t).abs()));
                }
            }
            for eps in epsilons {
                let freq = errors.iter().filter(|e| **e > eps).count() as f64 / errors.len() as f64;
                let bound = nomographic_tail(eps, &function, users, 4, amplitude, 1.0).unwrap();
                if function == NomographicFunction::Sum {
                    // Δ_max = 2 and ω⁻¹ = id: x = ε² A² n / (2σ²).
                    let x = eps * eps * amplitude * amplitude * 4.0 / 2.0;
                    sum_oracle_ok &= (bound - ((-x).exp() / (PI * x).sqrt()).min(1.0)).abs() < 1e-15;
                }
                let se = (bound * (1.0 - bound) / errors.len() as f64).sqrt();
                pass &= freq <= bound + 3.0 * se;
                worst_margin = worst_margin.min(bound + 3.0 * se - freq);
            }
        }
    }
    verdict(
        pass && sum_oracle_ok,
        format!(
            "sum and 2-norm, both noise conventions, 5 ε values, {trials} trials each: smallest margin {worst_margin:.2e}"
        ),
    )
}

fn c12_waterfall() -> Verdict {
    let grid: Vec<Option<f64>> = (0..=6).map(|i| Some(-13.0 + 0.5 * i as f64)).collect();
    let spec = SimulationSpec {
        scenario: ScenarioSpec::default(),
        noise: NoiseLaw::Gaussian,
        noise_power_db: grid,
        trials: TrialBudget {
            max_frames: 500,
            max_frame_errors: 100,
            ..Default::default()
        },
        seed: 1212,
    };
    let rows = run_ber_sweep(&spec).unwrap();
    let bers: Vec<f64> = rows.iter().map(|r| r.ber()).collect();
    let monotone = bers.windows(2).all(|w| w[0] <= w[1]);
    let at_11 = rows.iter().find(|r| r.noise_power_db == Some(-11.0)).unwrap();
    let listing: Vec<String> = rows
        .iter()
        .map(|r| format!("{} dB {:.2e} ({} frames)", r.noise_power_db.unwrap(), r.ber(), r.frames))
        .collect();
    verdict(
        monotone && at_11.ber() < 1e-3,
        format!("monotone: {monotone}; {}", listing.join(", ")),
    )
}

type Criterion = (u32, &'static str, Duration, fn() -> Verdict);

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        (1, "PlaneMap algebra for n = 2..512", Duration::from_secs(10), c1_planemap),
        (2, "norm of U_10", Duration::from_secs(1), c2_norm_u10),
        (3, "emulation equivalence", Duration::from_secs(30), c3_emulation),
        (4, "analog estimator law", Duration::from_secs(60), c4_analog_law),
        (5, "analog users do not disturb digital decoding", Duration::from_secs(60), c5_digital_noninterference),
        (6, "amplitude histogram", Duration::from_secs(120), c6_histogram),
        (7, "analog MSE across noise laws", Duration::from_secs(120), c7_mse_invariance),
        (8, "rate-bound numerics", Duration::from_secs(300), c8_rate_bounds),
        (9, "time-sharing comparison", Duration::from_secs(60), c9_timeshare_values),
        (10, "constrained capacity", Duration::from_secs(120), c10_constrained_capacity),
        (11, "fading tail bound", Duration::from_secs(120), c11_fading_tail),
        (12, "BER waterfall", Duration::from_secs(300), c12_waterfall),
    ];
    let expected: BTreeSet<u32> = EXPECTED_FAILURES.into_iter().collect();
    let mut failed = BTreeSet::new();
    for (id, name, limit, run) in criteria {
        let start = Instant::now();
        let v = run();
        let elapsed = start.elapsed();
        let pass = v.pass && elapsed <= limit;
        if !pass {
            failed.insert(id);
        }
        let timing = if elapsed <= limit { "" } else { " OVER TIME LIMIT" };
        println!(
            "{} criterion {id:>2} {name}: {} [{:.1} s / {} s{timing}]",
            if pass { "PASS" } else { "FAIL" },
            v.detail,
            elapsed.as_secs_f64(),
            limit.as_secs()
        );
    }
    println!(
        "{} passed, {} failed; expected failures {:?}",
        12 - failed.len(),
        failed.len(),
        expected
    );
    if failed == expected {
        ExitCode::SUCCESS
    } else {
        println!("unexpected outcome: failed {failed:?}");
        ExitCode::FAILURE
    }
}
