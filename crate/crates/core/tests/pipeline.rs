use srd_core::bounds::{best_lower, evaluate, BoundId, MatrixClass};
use srd_core::distributions::DistributionSpec;
use srd_core::montecarlo::{mp_logdet_sweep, McConfig};
use srd_core::ratefun::{logdet_rate, SourceParams};
use srd_core::runner::Serial;
use srd_core::simulate::{run_experiment, MatrixKind, Noise, SimConfig};

#[test]
fn logdet_gap_shrinks_with_dimension() {
    let gaps: Vec<f64> = [25, 50, 200]
        .iter()
        .map(|&n| {
            let e = mp_logdet_sweep(&Serial, n, 1.0, &[10.0], 40, 3).unwrap();
            e[0].relative_gap
        })
        .collect();
    assert!(gaps[2] < gaps[0], "{gaps:?}");
    assert!(gaps[2] < 0.02, "{gaps:?}");
}

#[test]
fn logdet_estimate_is_reproducible() {
    let c = McConfig::new(30, 2.0, 5.0, 8, 17).unwrap();
    let a = srd_core::montecarlo::mp_logdet(&c).unwrap();
    let b = srd_core::montecarlo::mp_logdet(&c).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.target, logdet_rate(2.0, 5.0).unwrap());
}

#[test]
fn simulation_is_reproducible_and_seed_sensitive() {
    let make = |seed| {
        SimConfig::new(
            12,
            0.25,
            DistributionSpec::gaussian(0.0, 1.0).unwrap(),
            Noise::SnrDb(5.0),
            0.4,
            MatrixKind::IidGaussian,
            20,
            seed,
        )
        .unwrap()
    };
    let a = run_experiment(&make(1)).unwrap();
    assert_eq!(a, run_experiment(&make(1)).unwrap());
    assert_ne!(a.outcomes, run_experiment(&make(2)).unwrap().outcomes);
}

#[test]
fn best_lower_dominates_each_bound() {
    let shapes = [
        DistributionSpec::gaussian(0.0, 1.0).unwrap(),
        DistributionSpec::uniform(1.0, 1.0).unwrap(),
        DistributionSpec::sliced_at_power(0.3, 1.0).unwrap(),
    ];
    for d in shapes {
        let s = SourceParams::at_snr(0.05, d, 15.0).unwrap();
        for alpha in [0.02, 0.2] {
            let (best, _) = best_lower(&s, alpha, MatrixClass::Iid).unwrap();
            for b in [BoundId::P3General, BoundId::T2Genie, BoundId::P4Iid, BoundId::T4IidGenie] {
                assert!(evaluate(b, &s, alpha).unwrap().rho <= best, "{} {b:?}", d.name());
            }
            let (any, _) = best_lower(&s, alpha, MatrixClass::Any).unwrap();
            assert!(any <= best);
        }
    }
}

#[test]
fn more_samples_lower_distortion() {
    let run = |rho| {
        let c = SimConfig::new(
            16,
            0.25,
            DistributionSpec::gaussian(0.0, 1.0).unwrap(),
            Noise::SnrDb(10.0),
            rho,
            MatrixKind::IidGaussian,
            60,
            8,
        )
        .unwrap();
        run_experiment(&c).unwrap().summary.mean_distortion
    };
    assert!(run(1.5) < run(0.25));
}
