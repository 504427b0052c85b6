use fapanc::anc::{
    run_anc, snri_db, synth_scenario, AncScenario, NoiseKind, RunOptions, SynthConfig,
};
use fapanc::{Algorithm, Fap, FapConfig, FilterSettings};

fn scenario(seed: u64, length: usize) -> AncScenario {
    synth_scenario(&SynthConfig {
        seed,
        length,
        channel_order: 8,
        snr_db: -10.0,
        noise_kind: NoiseKind::Colored,
    })
    .unwrap()
}

#[test]
fn speech_and_residual_noise_are_nearly_uncorrelated() {
    let sc = scenario(21, 20_000);
    for algo in Algorithm::ALL {
        let mut f = FilterSettings::defaults(algo).build().unwrap();
        let r = run_anc(sc.signals(), &mut f, &RunOptions::default()).unwrap();
        let from = sc.len() / 2;
        let (mut cross, mut ps, mut pn) = (0.0, 0.0, 0.0);
        for t in from..sc.len() {
            let resid = sc.n0[t] - r.y[t];
            cross += sc.s[t] * resid;
            ps += sc.s[t] * sc.s[t];
            pn += resid * resid;
        }
        let rho = cross / (ps * pn).sqrt();
        assert!(rho.abs() < 0.05, "{algo}: normalized cross term {rho}");
    }
}

#[test]
fn improvement_ignores_global_gain() {
    let sc = scenario(22, 12_000);
    for algo in [Algorithm::Nlms, Algorithm::Fap, Algorithm::Rls] {
        let snri = |scene: &AncScenario| {
            let mut f = FilterSettings::defaults(algo).build().unwrap();
            snri_db(&run_anc(scene.signals(), &mut f, &RunOptions::default()).unwrap()).unwrap()
        };
        let base = snri(&sc);
        for gain in [0.1, 10.0] {
            let scaled = snri(&sc.scaled(gain));
            assert!(
                (base - scaled).abs() < 0.1,
                "{algo} gain {gain}: {base} vs {scaled}"
            );
        }
    }
}

#[test]
fn converging_filters_improve_snr() {
    let sc = scenario(23, 30_000);
    for algo in Algorithm::ALL {
        let mut f = FilterSettings::defaults(algo).build().unwrap();
        let r = run_anc(sc.signals(), &mut f, &RunOptions::default()).unwrap();
        assert!(snri_db(&r).unwrap() > 0.0, "{algo}");
    }
}

#[test]
fn silent_speech_recovers_channel() {
    let sc = scenario(24, 5000);
    let quiet =
        AncScenario::from_parts(vec![0.0; sc.len()], sc.n1.clone(), sc.w_e.clone()).unwrap();
    let mut fap = Fap::new(FapConfig {
        mu: 1.0,
        ..FapConfig::new(8)
    })
    .unwrap();
    let r = run_anc(quiet.signals(), &mut fap, &RunOptions::default()).unwrap();
    let err: f64 = fapanc::AdaptiveFilter::taps(&fap)
        .iter()
        .zip(&quiet.w_e)
        .map(|(a, b)| (a - b).powi(2))
        .sum::<f64>()
        .sqrt();
    assert!(err < 1e-3, "err = {err}");
    assert!(r.e[r.e.len() - 100..].iter().all(|v| v.abs() < 1e-6));
}
