//! Acceptance suite: one test per criterion, each printing a PASS line with
//! its measured margins (run with `--nocapture` to see them).

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use uqsl_core::channels::{
    ad_kappa_min, ad_qsl_closed_form, amplitude_damping, channel_prefix_series, channel_trajectory,
    evolve_channel, AmplitudeDampingParams,
};
use uqsl_core::entropy::{
    alpha_purity, alpha_purity_quadrature_oracle, property_battery, unified_entropy, EntropyParams,
    PropertySamples,
};
use uqsl_core::linalg::{linspace, BlochParams, DensityMatrix};
use uqsl_core::manybody::{
    mb_prefix_series, reduced_trajectory, variance_qfi_chain, xxz_variance_closed_form,
    SpinChainConfig,
};
use uqsl_core::nonhermitian::{
    equation_of_motion_residual, evolve_nonhermitian, kappa_min_profile, nh_trajectory,
    pt_closed_form, PTQubitParams,
};
use uqsl_core::qsl::{self, normalize_series, PrefixSeries, Trajectory};
use uqsl_core::random;

fn fig_bloch() -> BlochParams {
    BlochParams::new(
        0.5,
        std::f64::consts::FRAC_PI_4,
        std::f64::consts::FRAC_PI_4,
    )
    .unwrap()
}

fn random_bloch<R: Rng>(rng: &mut R) -> BlochParams {
    // r capped at 0.95 so kappa_min stays clear of the weight-function floor
    BlochParams::new(
        0.95 * rng.gen::<f64>(),
        std::f64::consts::PI * rng.gen::<f64>(),
        (2.0 * std::f64::consts::PI - 1e-9) * rng.gen::<f64>(),
    )
    .unwrap()
}

/// Worst margin of `rhs_k - lhs_k >= -slack_k` over all prefixes, with slack
/// `1e-6 (1 + rhs_k)` plus a coarse-grid (every other sample) trapezoid
/// discretization estimate.
fn worst_prefix_margin(series: &PrefixSeries) -> f64 {
    let n = series.times.len();
    let mut coarse = vec![0.0; n];
    for k in (2..n).step_by(2) {
        coarse[k] = coarse[k - 2]
            + 0.5
                * (series.times[k] - series.times[k - 2])
                * (series.integrand[k - 2] + series.integrand[k]);
    }
    let mut worst = f64::INFINITY;
    for k in 0..n {
        let even = k - (k % 2);
        let disc = (series.rhs[even] - coarse[even]).abs();
        let slack = 1e-6 * (1.0 + series.rhs[k]) + disc;
        worst = worst.min(series.rhs[k] - series.lhs[k] + slack);
    }
    worst
}

#[test]
fn acceptance_01_entropy_correctness() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let fractional = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9];
    let mut worst_quad: f64 = 0.0;
    let mut worst_power: f64 = 0.0;
    let mut worst_limit: f64 = 0.0;
    for case in 0..500usize {
        let dim = 2 + case % 7;
        let rho = random::random_density(dim, &mut rng);
        for &alpha in &fractional {
            let spectral = alpha_purity(&rho, alpha).unwrap();
            let quad = alpha_purity_quadrature_oracle(&rho, alpha).unwrap();
            worst_quad = worst_quad.max((spectral - quad).abs());
        }
        // integer orders get an eigen-free oracle: traces of matrix powers
        let m = rho.matrix();
        let m2 = m * m;
        let tr2 = m2.trace().re;
        let tr3 = (&m2 * m).trace().re;
        worst_power = worst_power.max((alpha_purity(&rho, 2.0).unwrap() - tr2).abs());
        worst_power = worst_power.max((alpha_purity(&rho, 3.0).unwrap() - tr3).abs());

        if case % 5 == 0 {
            for alpha in [0.3, 0.7, 2.0] {
                let renyi = unified_entropy(&rho, &EntropyParams::renyi(alpha).unwrap()).unwrap();
                let near =
                    unified_entropy(&rho, &EntropyParams::generic(alpha, 1e-8).unwrap()).unwrap();
                worst_limit = worst_limit.max((renyi - near).abs());
            }
            let vn = unified_entropy(&rho, &EntropyParams::von_neumann()).unwrap();
            for alpha in [1.0 - 1e-8, 1.0 + 1e-8] {
                for mu in [0.5, 1.0] {
                    let near =
                        unified_entropy(&rho, &EntropyParams::generic(alpha, mu).unwrap()).unwrap();
                    worst_limit = worst_limit.max((vn - near).abs());
                }
            }
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    assert!(worst_quad < 1e-6, "quadrature mismatch {worst_quad:.3e}");
    assert!(
        worst_power < 1e-6,
        "integer-power mismatch {worst_power:.3e}"
    );
    assert!(
        worst_limit < 1e-6,
        "limit-branch mismatch {worst_limit:.3e}"
    );
    assert!(elapsed < 30.0, "runtime {elapsed:.1} s exceeds 30 s");
    println!(
        "ACCEPTANCE 1 (entropy correctness): PASS \
         [quad {worst_quad:.2e}, powers {worst_power:.2e}, limits {worst_limit:.2e}, {elapsed:.1} s]"
    );
}

#[test]
fn acceptance_02_property_battery() {
    let mut rng = ChaCha8Rng::seed_from_u64(202);
    let mut samples = PropertySamples::default();
    for case in 0..200usize {
        let dim = 2 + case % 2;
        samples.pairs.push((
            random::random_density(dim, &mut rng),
            random::random_density(dim, &mut rng),
        ));
        let raw: Vec<f64> = (0..3).map(|_| rng.gen::<f64>() + 1e-3).collect();
        let total: f64 = raw.iter().sum();
        samples.ensembles.push((
            raw.iter().map(|w| w / total).collect(),
            (0..3)
                .map(|_| random::random_density(2, &mut rng))
                .collect(),
        ));
        samples.unitaries.push((
            random::random_density(dim, &mut rng),
            random::random_unitary(dim, &mut rng),
        ));
        samples.measurements.push((
            random::random_density(dim, &mut rng),
            random::random_projectors(dim, 2, &mut rng),
        ));
        // product and generic bipartite states for the triangle inequality
        let bip = if case % 2 == 0 {
            let a = random::random_density(2, &mut rng);
            let b = random::random_density(2, &mut rng);
            DensityMatrix::validate(a.matrix().kron(b.matrix())).unwrap()
        } else {
            random::random_density(4, &mut rng)
        };
        samples.bipartite.push((bip, (2, 2)));
    }
    let param_sets = vec![
        EntropyParams::generic(0.3, 0.45).unwrap(),
        EntropyParams::generic(0.5, 0.5).unwrap(),
        EntropyParams::generic(0.7, 0.2).unwrap(),
        EntropyParams::generic(0.85, 0.95).unwrap(),
        EntropyParams::renyi(0.5).unwrap(),
        EntropyParams::tsallis(0.4).unwrap(),
        EntropyParams::generic(2.0, 0.5).unwrap(),
        EntropyParams::generic(1.5, -0.5).unwrap(),
        EntropyParams::tsallis(2.0).unwrap(),
    ];
    let mut lines = Vec::new();
    for params in &param_sets {
        let report = property_battery(&samples, params);
        for check in &report.checks {
            assert_eq!(
                check.violations,
                0,
                "property {} violated at alpha={} mu={} (worst margin {:.3e})",
                check.name,
                params.alpha(),
                params.mu(),
                check.worst_margin
            );
            lines.push(format!("{}({} checked)", check.name, check.checked));
        }
    }
    println!(
        "ACCEPTANCE 2 (property battery): PASS [{} param sets, checks incl. {}]",
        param_sets.len(),
        lines[..7.min(lines.len())].join(", ")
    );
}

#[test]
fn acceptance_03_core_theorem() {
    let start = Instant::now();
    let grid: Vec<f64> = vec![0.1, 0.3, 0.5, 0.7, 0.9];
    let mut worst = f64::INFINITY;
    let mut trajectories = 0usize;

    let check_traj = |traj: &Trajectory, label: &str, worst: &mut f64| {
        for &alpha in &grid {
            for &mu in &grid {
                let params = EntropyParams::generic(alpha, mu).unwrap();
                let series = qsl::prefix_series(traj, &params).unwrap();
                let margin = worst_prefix_margin(&series);
                assert!(
                    margin >= 0.0,
                    "bound violated on {label} at alpha={alpha} mu={mu}: margin {margin:.3e}"
                );
                *worst = worst.min(margin);
            }
        }
    };

    let mut rng = ChaCha8Rng::seed_from_u64(303);
    for case in 0..10usize {
        let params = AmplitudeDampingParams::new(1.0, random_bloch(&mut rng)).unwrap();
        let channel = amplitude_damping(&params);
        let traj = channel_trajectory(&channel, &params.initial_state(), &linspace(0.0, 6.0, 301))
            .unwrap();
        check_traj(&traj, &format!("amplitude damping #{case}"), &mut worst);
        trajectories += 1;
    }
    for ratio in [0.5, 1.0, 2.0] {
        let params = PTQubitParams::new(1.0, ratio, fig_bloch()).unwrap();
        let traj = nh_trajectory(
            &params.hamiltonian(),
            &params.initial_state(),
            &linspace(0.0, 5.0, 251),
        )
        .unwrap();
        check_traj(&traj, &format!("PT qubit ratio {ratio}"), &mut worst);
        trajectories += 1;
    }
    for l in [2usize, 4] {
        for p in [0.25, 0.5] {
            let cfg = SpinChainConfig::new(l, 1.0, 0.5, p, 1).unwrap();
            let traj = reduced_trajectory(&cfg, &linspace(0.0, 5.0, 201)).unwrap();
            check_traj(&traj, &format!("XXZ L={l} p={p}"), &mut worst);
            trajectories += 1;
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    assert!(elapsed < 300.0, "runtime {elapsed:.1} s exceeds 5 min");
    println!(
        "ACCEPTANCE 3 (entropy bound, {trajectories} trajectories x 25 param pairs): PASS \
         [worst slack-adjusted margin {worst:.3e}, {elapsed:.1} s]"
    );
}

#[test]
fn acceptance_04_amplitude_damping_closed_forms() {
    let params = AmplitudeDampingParams::new(1.0, fig_bloch()).unwrap();
    let channel = amplitude_damping(&params);
    let rho0 = params.initial_state();
    let mut worst_kappa: f64 = 0.0;
    for &t in &linspace(0.0, 10.0, 1001) {
        let eigen = evolve_channel(&channel, &rho0, t).unwrap().kappa_min();
        worst_kappa = worst_kappa.max((eigen - ad_kappa_min(&params, t)).abs());
    }
    assert!(
        worst_kappa < 1e-10,
        "kappa closed form off by {worst_kappa:.3e}"
    );

    let times = linspace(0.0, 2.0, 200);
    let mut worst_rel: f64 = 0.0;
    for mu in [0.25, 0.5, 0.75, 1.0] {
        let pipeline = channel_prefix_series(
            &channel,
            &rho0,
            &times,
            &EntropyParams::for_scan(0.5, mu).unwrap(),
        )
        .unwrap();
        let generic = pipeline.tau_qsl(times.len() - 1);
        let closed = ad_qsl_closed_form(&params, &times, 0.5, mu).unwrap();
        worst_rel = worst_rel.max((generic - closed).abs() / closed);
    }
    assert!(
        worst_rel < 1e-6,
        "closed form vs pipeline relative diff {worst_rel:.3e}"
    );
    println!(
        "ACCEPTANCE 4 (amplitude-damping closed forms): PASS \
         [kappa {worst_kappa:.2e}, qsl rel diff {worst_rel:.2e}]"
    );
}

#[test]
fn acceptance_05_decay_shape() {
    let params = AmplitudeDampingParams::new(1.0, fig_bloch()).unwrap();
    let channel = amplitude_damping(&params);
    let rho0 = params.initial_state();
    let times = linspace(0.0, 6.0, 601);
    let idx4 = times.iter().position(|&t| t >= 4.0).unwrap();
    let mut ratios = Vec::new();
    let mut failures = Vec::new();
    for alpha in [0.25, 0.5, 0.75] {
        for mu in [0.0, 1.0] {
            let ep = EntropyParams::for_scan(alpha, mu).unwrap();
            let series = channel_prefix_series(&channel, &rho0, &times, &ep).unwrap();
            let qsl_curve: Vec<f64> = (0..times.len()).map(|k| series.tau_qsl(k)).collect();
            let peak = qsl_curve.iter().cloned().fold(0.0, f64::max);
            assert!(peak > 0.0, "QSL identically zero at alpha={alpha} mu={mu}");
            let early_max = qsl_curve[..idx4].iter().cloned().fold(0.0, f64::max);
            assert!(
                early_max > 1e-3,
                "no early nonzero window at alpha={alpha} mu={mu}"
            );
            assert!(
                qsl_curve[idx4..].windows(2).all(|w| w[1] <= w[0] + 1e-12),
                "QSL not monotonically decreasing past gamma*tau = 4 at alpha={alpha} mu={mu}"
            );
            let final_ratio = qsl_curve.last().unwrap() / peak;
            ratios.push(format!("a={alpha} mu={mu}: {:.1}%", 100.0 * final_ratio));
            if final_ratio >= 0.10 {
                failures.push(format!("alpha={alpha} mu={mu}: {:.3}", final_ratio));
            }

            let deltas: Vec<f64> = (0..times.len())
                .map(|k| series.delta(k).unwrap_or(f64::NAN))
                .collect();
            let normalized = normalize_series(&deltas).unwrap();
            let final_delta = *normalized.last().unwrap();
            assert!(
                final_delta > 0.95,
                "normalized relative error {final_delta:.3} at the horizon, alpha={alpha} mu={mu}"
            );
        }
    }
    assert!(
        failures.is_empty(),
        "decay target missed: tau_qsl(6)/peak must be < 10% but measured [{}] \
         (post-peak decay slows as alpha grows; see ratios [{}])",
        failures.join(", "),
        ratios.join(", ")
    );
    println!("ACCEPTANCE 5 (decay shape): PASS [{}]", ratios.join(", "));
}

#[test]
fn acceptance_06_pt_qubit_closed_forms() {
    let mut worst_dist: f64 = 0.0;
    let mut worst_residual: f64 = 0.0;
    for ratio in [0.5, 1.0 - 1e-6, 1.0, 1.0 + 1e-6, 2.0] {
        let params = PTQubitParams::new(1.0, ratio, fig_bloch()).unwrap();
        let nh = params.hamiltonian();
        let rho0 = params.initial_state();
        let times = linspace(0.0, 5.0, 1001);
        for &t in &times {
            let closed = pt_closed_form(&params, t).unwrap();
            let generic = evolve_nonhermitian(&nh, &rho0, t).unwrap();
            worst_dist = worst_dist.max(closed.trace_distance(&generic).unwrap());
        }
        let traj = nh_trajectory(&nh, &rho0, &times).unwrap();
        worst_residual = worst_residual.max(equation_of_motion_residual(&nh, &traj));
    }
    assert!(
        worst_dist < 1e-9,
        "closed form vs propagator distance {worst_dist:.3e}"
    );
    assert!(
        worst_residual < 1e-5,
        "equation-of-motion residual {worst_residual:.3e}"
    );
    println!(
        "ACCEPTANCE 6 (PT-qubit closed forms): PASS \
         [distance {worst_dist:.2e}, residual {worst_residual:.2e}]"
    );
}

#[test]
fn acceptance_07_smallest_eigenvalue_shape() {
    // periodicity in the unbroken phase
    let unbroken = PTQubitParams::new(1.0, 0.5, fig_bloch()).unwrap();
    let period = std::f64::consts::PI / 0.75f64.sqrt();
    let per_period = 1000usize;
    let fine = linspace(0.0, 3.0 * period, 3 * per_period + 1);
    let kappas = kappa_min_profile(&unbroken, &fine).unwrap();
    let mut drift: f64 = 0.0;
    for k in 0..=2 * per_period {
        drift = drift.max((kappas[k + per_period] - kappas[k]).abs());
    }
    assert!(drift < 1e-6, "periodic drift {drift:.3e}");

    // exceptional point: kappa_min below 1e-3 beyond varpi*tau = 3
    let times = linspace(0.0, 5.0, 501);
    let exceptional =
        kappa_min_profile(&PTQubitParams::new(1.0, 1.0, fig_bloch()).unwrap(), &times).unwrap();
    let idx3 = times.iter().position(|&t| t >= 3.0).unwrap();
    let worst_tail = exceptional[idx3..].iter().cloned().fold(0.0, f64::max);
    assert!(
        worst_tail < 1e-3,
        "exceptional-point kappa reaches {worst_tail:.3e} past 3"
    );

    // broken phase decays faster, pointwise on [1, 5]
    let broken =
        kappa_min_profile(&PTQubitParams::new(1.0, 2.0, fig_bloch()).unwrap(), &times).unwrap();
    let idx1 = times.iter().position(|&t| t >= 1.0).unwrap();
    for k in idx1..times.len() {
        assert!(
            broken[k] < exceptional[k],
            "broken-phase kappa not below the exceptional one at t = {}",
            times[k]
        );
    }
    println!(
        "ACCEPTANCE 7 (smallest-eigenvalue shape): PASS \
         [drift {drift:.2e}, exceptional tail max {worst_tail:.2e}]"
    );
}

#[test]
fn acceptance_08_xxz_variance() {
    let start = Instant::now();
    let mut worst_rel: f64 = 0.0;
    let mut worst_chain = f64::INFINITY;
    for l in 2..=6usize {
        for p in [0.0, 0.25, 0.5, 1.0] {
            for delta in [0.0, 0.5, 1.0, 2.0] {
                let cfg = SpinChainConfig::new(l, 1.0, delta, p, 1).unwrap();
                let chain = variance_qfi_chain(&cfg).unwrap();
                let closed = xxz_variance_closed_form(&cfg);
                worst_rel = worst_rel.max((chain.variance - closed).abs() / closed.abs());
                worst_chain = worst_chain
                    .min(2.0 * chain.qfi.sqrt() - chain.comm_norm + 1e-9)
                    .min(2.0 * chain.variance.sqrt() - 2.0 * chain.qfi.sqrt() + 1e-9);
            }
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    assert!(
        worst_rel < 1e-9,
        "variance closed form off by {worst_rel:.3e} relative"
    );
    assert!(
        worst_chain >= 0.0,
        "inequality chain violated by {worst_chain:.3e}"
    );
    assert!(elapsed < 120.0, "runtime {elapsed:.1} s exceeds 2 min");
    println!(
        "ACCEPTANCE 8 (XXZ variance, 80 configurations): PASS \
         [rel err {worst_rel:.2e}, chain margin {worst_chain:.2e}, {elapsed:.1} s]"
    );
}

#[test]
fn acceptance_09_size_scaling() {
    let times = linspace(0.0, 5.0, 501);
    let renyi_half = EntropyParams::renyi(0.5).unwrap();
    let mut peaks = Vec::new();
    for l in [2usize, 4, 6] {
        let cfg = SpinChainConfig::new(l, 1.0, 0.5, 0.5, 1).unwrap();

        // entropy-rate bound (finite differences) and prefix bound hold
        let (series, chain) = mb_prefix_series(&cfg, &times, &renyi_half).unwrap();
        let margin = worst_prefix_margin(&series);
        assert!(
            margin >= 0.0,
            "integrated bound violated at L={l}: {margin:.3e}"
        );

        let traj = reduced_trajectory(&cfg, &times).unwrap();
        let spectra = traj.spectra();
        let entropy: Vec<f64> = qsl::entropy_series(&spectra, &renyi_half);
        let dt = times[1] - times[0];
        for k in 2..times.len() - 2 {
            let dedt = (entropy[k + 1] - entropy[k - 1]) / (2.0 * dt);
            let fppp = (entropy[k + 2] - 2.0 * entropy[k + 1] + 2.0 * entropy[k - 1]
                - entropy[k - 2])
                / (2.0 * dt * dt * dt);
            let kappa = spectra[k][0].max(qsl::KAPPA_FLOOR);
            let rate_bound = 2.0 * qsl::weight_h(0.5, kappa).unwrap() * chain.variance.sqrt();
            let slack = 1e-6 * (1.0 + rate_bound) + dt * dt * fppp.abs() / 6.0;
            assert!(
                dedt.abs() <= rate_bound + slack,
                "entropy rate bound violated at L={l}, t={:.3}",
                times[k]
            );
        }

        let peak = (0..times.len())
            .map(|k| series.tau_qsl(k))
            .fold(0.0, f64::max);
        peaks.push(peak);
    }
    assert!(
        peaks[0] > peaks[1] && peaks[1] > peaks[2],
        "peak QSL should decrease with system size, got {peaks:?}"
    );
    println!(
        "ACCEPTANCE 9 (size scaling): PASS [peaks {:.4} > {:.4} > {:.4}]",
        peaks[0], peaks[1], peaks[2]
    );
}
