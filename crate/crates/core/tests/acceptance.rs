//! Acceptance checks. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use covosc::density::{
    default_grid, entropy_report, marginal_closed_form, marginal_numeric, marginal_std_dev,
    reduced_density_kernel, EntropyMatch,
};
use covosc::kinematics::PROTON_MASS_GEV;
use covosc::numerics::{FourierConvention, GridSpec};
use covosc::parton::{beam_report, momentum_width, spatial_width_numeric};
use covosc::wavefunction::{
    momentum_duality_error, oscillator_equation_residual, psi_boosted, psi_coupled, schmidt_coefficients,
    BoostedGroundState, DEFAULT_FD_STEP,
};
use covosc::{Rapidity, Result};
use rand::{rngs::StdRng, Rng, SeedableRng};

type Outcome = std::result::Result<String, String>;

fn eta(x: f64) -> Rapidity {
    Rapidity::new(x).expect("finite rapidity")
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn lib<T>(r: Result<T>) -> std::result::Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn marginal_closed_form_check() -> Outcome {
    let mut worst = 0.0f64;
    for e in [0.0, 0.5, 1.0, 2.0] {
        // the default grid covers ±6σ; compare on the |z| ≤ 8 window
        let p = lib(marginal_numeric(eta(e), &default_grid(eta(e))))?;
        for (i, &z) in p.grid.nodes().iter().enumerate() {
            if z.abs() <= 8.0 {
                worst = worst.max((p.values[i] - marginal_closed_form(eta(e), z)).abs());
            }
        }
    }
    ensure(worst < 1e-8, || format!("max pointwise deviation {worst:e}"))?;
    Ok(format!("max pointwise deviation {worst:.2e}"))
}

fn probability_check() -> Outcome {
    let mut worst = 0.0f64;
    for k in 0..=12 {
        let e = 0.25 * k as f64;
        let p = lib(marginal_numeric(eta(e), &default_grid(eta(e))))?;
        worst = worst.max((p.integral() - 1.0).abs());
    }
    ensure(worst < 1e-8, || format!("max |∫ρ − 1| = {worst:e}"))?;
    Ok(format!("max |∫ρ − 1| = {worst:.2e} over 13 rapidities"))
}

fn entropy_check() -> Outcome {
    let zero = lib(entropy_report(eta(0.0)))?;
    ensure(zero.s_numeric.abs() < 1e-8, || format!("S(0) = {:e}", zero.s_numeric))?;

    let mut matched = None;
    let mut s = Vec::new();
    for e in [0.25, 0.5, 1.0, 1.5, 2.0] {
        let r = lib(entropy_report(eta(e)))?;
        let m = r.matched_form;
        ensure(matches!(m, EntropyMatch::HalfRapidityForm | EntropyMatch::SchmidtClosedForm), || {
            format!(
                "η={e}: S={} half_rapidity={} schmidt={} matched {}",
                r.s_numeric,
                r.s_half_rapidity_form,
                r.s_schmidt_closed_form,
                m.as_str()
            )
        })?;
        ensure(matched.is_none_or(|prev| prev == m), || format!("η={e}: inconsistent match {}", m.as_str()))?;
        matched = Some(m);
        s.push((e, r.s_numeric));
    }

    // large-η behaviour: slope settles to a constant
    let slope = |a: (f64, f64), b: (f64, f64)| (b.1 - a.1) / (b.0 - a.0);
    let early = slope(s[2], s[3]);
    let late = slope(s[3], s[4]);
    ensure((late - early).abs() < 0.02 && (late - 2.0).abs() < 0.01, || {
        format!("slopes {early} then {late} are not affine")
    })?;
    Ok(format!(
        "matched {} at every η; S(0) = {:.1e}; slope {early:.4} → {late:.4}",
        matched.unwrap().as_str(),
        zero.s_numeric
    ))
}

fn decoherence_check() -> Outcome {
    let r = lib(beam_report(900.0, PROTON_MASS_GEV))?;
    ensure((1e-7..=1e-6).contains(&r.ratio), || format!("ratio {:e}", r.ratio))?;
    Ok(format!("η = {:.4}, ratio = {:.3e}", r.eta.value(), r.ratio))
}

fn residual_check() -> Outcome {
    let mut rng = StdRng::seed_from_u64(20);
    let mut worst = 0.0f64;
    for e in [0.0, 0.7, 1.3] {
        let state = BoostedGroundState::new(eta(e));
        for _ in 0..20 {
            let (z, t) = (rng.gen_range(-2.0..=2.0), rng.gen_range(-2.0..=2.0));
            worst = worst.max(oscillator_equation_residual(&state, z, t, DEFAULT_FD_STEP).abs());
        }
    }
    ensure(worst < 1e-5, || format!("max residual {worst:e}"))?;

    // halving the step quarters the truncation error
    let state = BoostedGroundState::new(eta(0.7));
    let (a, b) = (
        oscillator_equation_residual(&state, 0.8, -0.3, 4e-2).abs(),
        oscillator_equation_residual(&state, 0.8, -0.3, 2e-2).abs(),
    );
    let ratio = a / b;
    ensure((3.6..4.4).contains(&ratio), || format!("step-halving ratio {ratio}"))?;
    Ok(format!("max residual {worst:.2e}; step-halving ratio {ratio:.3}"))
}

fn fourier_check() -> Outcome {
    let q_grid = lib(GridSpec::symmetric(6.0, 161))?;
    let mut passing = Vec::new();
    let mut summary = Vec::new();
    for convention in FourierConvention::ALL {
        let mut worst = 0.0f64;
        for e in [0.0, 1.0] {
            worst = worst.max(lib(momentum_duality_error(eta(e), convention, &q_grid))?);
        }
        summary.push(format!("{convention}: {worst:.1e}"));
        if worst < 1e-6 {
            passing.push(convention.to_string());
        }
    }
    ensure(!passing.is_empty(), || format!("no convention passed ({})", summary.join(", ")))?;
    Ok(format!("passing: {} ({})", passing.join(", "), summary.join(", ")))
}

fn schmidt_check() -> Outcome {
    let x = lib(schmidt_coefficients(eta(1.0), 20))?;
    ensure(x.max_cross_term < 1e-8, || format!("cross term {:e}", x.max_cross_term))?;
    let ratios = x.ratios(1e-12);
    let spread = ratios.iter().map(|r| (r - ratios[0]).abs()).fold(0.0, f64::max);
    ensure(ratios.len() == 20 && spread < 1e-6, || format!("ratio spread {spread:e} over {} ratios", ratios.len()))?;

    let kernel = lib(reduced_density_kernel(eta(1.0), &default_grid(eta(1.0))))?;
    let spectrum = lib(kernel.spectrum())?;
    let eig_dev = x
        .coefficients
        .iter()
        .zip(&spectrum)
        .map(|(c, l)| (c * c - l).abs())
        .fold(0.0, f64::max);
    ensure(eig_dev < 1e-6, || format!("eigenvalue deviation {eig_dev:e}"))?;

    // tanh^{2(n+1)}(1) drops below 1e-8 only past n ≈ 33
    let full = lib(schmidt_coefficients(eta(1.0), 40))?;
    let deficit = (full.sum_of_squares() - 1.0).abs();
    ensure(deficit < 1e-8, || format!("|Σc² − 1| = {deficit:e}"))?;
    Ok(format!(
        "cross {:.1e}; ratio {:.8} (spread {spread:.1e}); eigenvalue dev {eig_dev:.1e}; |Σc² − 1| = {deficit:.1e} (nmax 40)",
        x.max_cross_term, ratios[0]
    ))
}

fn coupled_check() -> Outcome {
    let grid = lib(GridSpec::symmetric(4.0, 41))?;
    let mut worst = 0.0f64;
    for e in [0.3, 1.0] {
        let state = BoostedGroundState::new(eta(e));
        for &x1 in &grid.nodes() {
            for &x2 in &grid.nodes() {
                worst = worst.max((psi_coupled(x1, x2, eta(e)) - psi_boosted(&state, x1, x2)).abs());
            }
        }
    }
    ensure(worst < 1e-12, || format!("max deviation {worst:e}"))?;
    Ok(format!("max deviation {worst:.1e}"))
}

fn width_check() -> Outcome {
    let mut worst = 0.0f64;
    for e in [0.0, 1.0, 2.0] {
        let expected = marginal_std_dev(eta(e));
        worst = worst.max((lib(spatial_width_numeric(eta(e)))? - expected).abs());
        worst = worst.max((momentum_width(eta(e)) - expected).abs());
    }
    ensure(worst < 1e-6, || format!("max width deviation {worst:e}"))?;
    Ok(format!("max width deviation {worst:.1e}"))
}

fn run_cli(args: &[&str], output: &Path) -> std::result::Result<Vec<u8>, String> {
    let status = Command::new(env!("CARGO_BIN_EXE_covosc"))
        .args(args)
        .arg("--output")
        .arg(output)
        .env_remove("COVOSC_GRID_DEFAULT")
        .status()
        .map_err(|e| e.to_string())?;
    ensure(status.success(), || format!("{args:?} exited with {status}"))?;
    std::fs::read(output).map_err(|e| e.to_string())
}

fn determinism_check() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let configs: [&[&str]; 8] = [
        &["wavefunction", "--eta", "0.5", "--grid", "-5:5:61"],
        &["momentum", "--eta", "1", "--grid", "-10:10:201", "--format", "json"],
        &["marginal", "--eta", "1"],
        &["kernel", "--eta", "0.5", "--grid", "-12:12:121"],
        &["entropy-curve", "--eta-range", "0:1:2", "--format", "json"],
        &["schmidt", "--eta", "1", "--nmax", "10"],
        &["parton", "--energy", "900"],
        &["figure-data", "--eta", "1", "--format", "json"],
    ];
    for (k, args) in configs.iter().enumerate() {
        let a = run_cli(args, &dir.path().join(format!("{k}a")))?;
        let b = run_cli(args, &dir.path().join(format!("{k}b")))?;
        ensure(!a.is_empty() && a == b, || format!("{args:?} differs between runs"))?;
    }
    Ok(format!("{} subcommand configurations byte-identical", configs.len()))
}

struct Criterion {
    name: &'static str,
    budget: Option<Duration>,
    check: fn() -> Outcome,
}

fn main() -> ExitCode {
    let criteria = [
        Criterion { name: "marginal closed form", budget: Some(Duration::from_secs(5)), check: marginal_closed_form_check },
        Criterion { name: "probability preservation", budget: Some(Duration::from_secs(5)), check: probability_check },
        Criterion { name: "entropy adjudication", budget: Some(Duration::from_secs(60)), check: entropy_check },
        Criterion { name: "decoherence number", budget: Some(Duration::from_millis(1)), check: decoherence_check },
        Criterion { name: "oscillator equation residual", budget: Some(Duration::from_secs(1)), check: residual_check },
        Criterion { name: "Fourier duality", budget: Some(Duration::from_secs(120)), check: fourier_check },
        Criterion { name: "Schmidt structure", budget: None, check: schmidt_check },
        Criterion { name: "coupled-oscillator identity", budget: None, check: coupled_check },
        Criterion { name: "widths", budget: None, check: width_check },
        Criterion { name: "CLI determinism", budget: None, check: determinism_check },
    ];

    let mut failed = 0;
    for (k, c) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = (c.check)();
        let elapsed = start.elapsed();
        let outcome = match (outcome, c.budget) {
            (Ok(_), Some(budget)) if elapsed > budget => Err(format!("took {elapsed:?}, budget {budget:?}")),
            (o, _) => o,
        };
        let (status, detail) = match outcome {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!("{status} {:>2} {:<30} [{elapsed:.3?}] {detail}", k + 1, c.name);
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
