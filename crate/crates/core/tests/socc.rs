use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use socc_core::bounds::nomographic_tail;
use socc_core::channel::{ComplexNoiseConvention, NoiseModel};
use socc_core::codec::{BlockPartition, MacCode, RandomCodebookMac};
use socc_core::socc::fading::{FadingConfig, FadingScheme};
use socc_core::socc::{Activity, NomographicFunction, SoccConfig, SoccScheme};

fn scheme(noise: NoiseModel) -> SoccScheme<RandomCodebookMac> {
    let partition = BlockPartition::uniform(10, 4).unwrap();
    let base = RandomCodebookMac::new(&[16], partition.digital_len(), &[1.0], 8).unwrap();
    let config = SoccConfig {
        analog_users: 5,
        analog_amplitude: 1.0,
        digital_power: vec![1.0],
        digital_amplitude: vec![2.0],
        noise,
        beta: 0.099,
        partition,
    };
    SoccScheme::new(config, base).unwrap()
}

/// Per-block analog errors over `rounds` rounds.
fn analog_errors(s: &SoccScheme<RandomCodebookMac>, rounds: usize, activity: Activity, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut errors = Vec::with_capacity(rounds * 4);
    for _ in 0..rounds {
        let analog = s.random_analog(&mut rng);
        let m = s.code().random_message(0, &mut rng);
        let out = s.round(&analog, &[m], activity, &mut rng).unwrap();
        errors.extend(out.estimates.iter().zip(&out.targets).map(|(e, t)| e - t));
    }
    errors
}

#[test]
fn analog_estimator_is_unbiased_with_predicted_variance() {
    let s = scheme(NoiseModel::gaussian(1.0).unwrap());
    let e = analog_errors(&s, 20_000, Activity::ALL, 1);
    let n = e.len() as f64;
    let mean = e.iter().sum::<f64>() / n;
    let var = e.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
    let m4 = e.iter().map(|x| (x - mean).powi(4)).sum::<f64>() / n;
    assert!((s.config().analog_variance(0) - 0.1).abs() < 1e-15);
    assert!(mean.abs() < 3.0 * (0.1 / n).sqrt());
    assert!((var / 0.1 - 1.0).abs() < 0.05);
    assert!((m4 / (var * var) - 3.0).abs() < 0.1);
}

#[test]
fn digital_users_do_not_disturb_analog_estimates() {
    let s = scheme(NoiseModel::gaussian(0.5).unwrap());
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..200 {
        let analog = s.random_analog(&mut rng);
        let m = s.code().random_message(0, &mut rng);
        let noise = s.config().noise.realize(s.block_len(), &mut rng);
        let on = s.round_with_noise(&analog, &[m], Activity::ALL, &noise).unwrap();
        let off = s.round_with_noise(&analog, &[m], Activity::ANALOG_ONLY, &noise).unwrap();
        for (a, b) in on.estimates.iter().zip(&off.estimates) {
            assert!((a - b).abs() < 1e-12);
        }
    }
}

#[test]
fn analog_users_do_not_disturb_digital_decoding() {
    let s = scheme(NoiseModel::gaussian(2.0).unwrap());
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut errors = 0;
    for _ in 0..300 {
        let analog = s.random_analog(&mut rng);
        let m = s.code().random_message(0, &mut rng);
        let noise = s.config().noise.realize(s.block_len(), &mut rng);
        let on = s.round_with_noise(&analog, &[m], Activity::ALL, &noise).unwrap();
        let off = s.round_with_noise(&analog, &[m], Activity::DIGITAL_ONLY, &noise).unwrap();
        assert_eq!(on.decoded.as_ref().unwrap().messages, off.decoded.as_ref().unwrap().messages);
        assert_eq!(on.bit_errors, off.bit_errors);
        for (a, b) in on.decoder_input.iter().zip(&off.decoder_input) {
            assert!((a - b).abs() < 1e-9);
        }
        errors += on.frame_error as usize;
    }
    // The noise is strong enough that some frames fail.
    assert!(errors > 0);
}

#[test]
fn analog_mse_does_not_depend_on_noise_law() {
    let gaussian = scheme(NoiseModel::gaussian(1.0).unwrap());
    let impulsive = scheme(NoiseModel::middleton(0.1, 0.1, 1.0).unwrap());
    let mse = |s: &SoccScheme<RandomCodebookMac>| {
        let e = analog_errors(s, 10_000, Activity::ALL, 6);
        e.iter().map(|x| x * x).sum::<f64>() / e.len() as f64
    };
    let (g, m) = (mse(&gaussian), mse(&impulsive));
    assert!((g / 0.1 - 1.0).abs() < 0.05, "{g}");
    assert!((m / 0.1 - 1.0).abs() < 0.05, "{m}");
}

#[test]
fn fading_tail_stays_below_prediction() {
    let users = 6;
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let analog_fading: Vec<Complex64> = (0..users)
        .map(|_| Complex64::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU)))
        .collect();
    let partition = BlockPartition::uniform(4, 3).unwrap();
    let n = partition.total();
    let base = RandomCodebookMac::new(&[4], 2 * n - 3, &[0.5], 2).unwrap();
    let trials = 20_000;
    for function in [NomographicFunction::Sum, NomographicFunction::PNorm(2.0)] {
        for convention in [ComplexNoiseConvention::SplitTotal, ComplexNoiseConvention::PerComponent] {
            let config = FadingConfig {
                function: function.clone(),
                analog_fading: analog_fading.clone(),
                analog_amplitudes: vec![0.5; users],
                digital_fading: vec![Complex64::new(0.8, 0.6)],
                noise_variance: 1.0,
                convention,
                partition: partition.clone(),
            };
            let s = FadingScheme::new(config, base.clone()).unwrap();
            let mut errors = Vec::with_capacity(trials * 3);
            for _ in 0..trials {
                let values: Vec<Vec<f64>> = (0..users)
                    .map(|_| (0..3).map(|_| rng.random_range(-1.0..=1.0)).collect())
                    .collect();
                let m = s.code().random_message(0, &mut rng);
                let out = s.round(&values, &[m], Activity::ALL, &mut rng).unwrap();
                errors.extend(out.estimates.iter().zip(&out.targets).map(|(e, t)| (e - t).abs()));
            }
            for eps in [0.5, 0.8, 1.0, 1.3, 1.6] {
                let freq = errors.iter().filter(|e| **e > eps).count() as f64 / errors.len() as f64;
                let bound = nomographic_tail(eps, &function, users, 4, s.analog_amplitude(), 1.0).unwrap();
                let se = (bound * (1.0 - bound) / errors.len() as f64).sqrt();
                assert!(freq <= bound + 3.0 * se, "{function:?} {convention:?} ε={eps}: {freq} > {bound}");
            }
        }
    }
}
