use floquet_core::analysis::{aggregate_bars, sweep, Experiment};
use floquet_core::{build_layout, CodeKind, NoiseModel};

const P_VALUES: [f64; 5] = [0.001, 0.01, 0.05, 0.1, 0.2];

#[test]
fn sweep_is_nondecreasing_within_two_sigma() {
    let layout = build_layout("falcon27").unwrap();
    for code in [CodeKind::Honeycomb, CodeKind::Color] {
        let reports = sweep(code, &layout, &P_VALUES, 10_000, 11, true).unwrap();
        assert_eq!(reports.len(), P_VALUES.len());
        for w in reports.windows(2) {
            let (a, b) = (w[0].aggregate.unwrap(), w[1].aggregate.unwrap());
            let sigma = (a.stderr.powi(2) + b.stderr.powi(2)).sqrt();
            assert!(b.mean > a.mean - 2.0 * sigma, "{code}: {} -> {}", a.mean, b.mean);
        }
        // Well below saturation the increase is unmistakable.
        let means: Vec<f64> = reports.iter().map(|r| r.aggregate.unwrap().mean).collect();
        assert!(means[0] < means[1] && means[1] < means[2], "{means:?}");
    }
}

#[test]
fn zero_p_sweep_is_silent() {
    let layout = build_layout("falcon27").unwrap();
    let reports = sweep(CodeKind::Color, &layout, &[0.0], 500, 1, false).unwrap();
    assert_eq!(aggregate_bars(&reports[0]).unwrap(), (0.0, 0.0, 0.0));
}

#[test]
fn color_code_reports_both_bases_per_plaquette() {
    let mut exp = Experiment::new(CodeKind::Color, build_layout("hummingbird65").unwrap());
    exp.noise = NoiseModel::uniform(0.05);
    exp.shots = 2000;
    let report = exp.run().unwrap().report;
    assert_eq!(report.plaquettes.len(), 16);
    for p in 0..8 {
        let bases: Vec<String> =
            report.plaquettes.iter().filter(|r| r.plaquette == p).map(|r| r.basis.to_string()).collect();
        assert_eq!(bases, ["x", "z"]);
    }
    let (mean, min, max) = aggregate_bars(&report).unwrap();
    assert!(min <= mean && mean <= max);
}

#[test]
fn hummingbird_honeycomb_has_eight_plaquette_rates() {
    let mut exp = Experiment::new(CodeKind::Honeycomb, build_layout("hummingbird65").unwrap());
    exp.noise = NoiseModel::uniform(0.05);
    exp.shots = 2000;
    let report = exp.run().unwrap().report;
    assert_eq!(report.plaquettes.len(), 8);
    let (mean, min, max) = aggregate_bars(&report).unwrap();
    assert!(min <= mean && mean <= max);
    assert!(report.plaquettes.iter().all(|r| (0.0..=1.0).contains(&r.rate)));
}

#[test]
fn doubling_shots_stays_within_binomial_noise() {
    let mut exp = Experiment::new(CodeKind::Honeycomb, build_layout("falcon27").unwrap());
    exp.noise = NoiseModel::uniform(0.01);
    exp.shots = 5000;
    exp.seed = 5;
    let small = exp.run().unwrap().report;
    exp.shots = 10_000;
    let large = exp.run().unwrap().report;
    for (a, b) in small.detectors.iter().zip(&large.detectors) {
        // The first 5000 shots are shared, so the difference is driven by
        // the second half alone: |a - b| = |a - a'| / 2.
        let sigma = (a.stderr.powi(2) + b.stderr.powi(2)).sqrt();
        assert!((a.rate - b.rate).abs() <= 3.0 * sigma, "{} vs {}", a.rate, b.rate);
    }
}
