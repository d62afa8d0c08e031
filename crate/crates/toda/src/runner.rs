//! Run dispatch for the CLI: integrate the configured system and write
//! trajectory, observable, verdict and manifest files.
//!
//! Output layout under the chosen directory:
//! - `trajectory.csv` — path 0, `t` plus state columns (lattice systems)
//! - `snapshots.csv` — continuum fields, `t,x,a,b`
//! - `obs_<name>.csv` — `t,mean,variance,stderr,n_paths`
//! - `verdict.txt` — `key=value` summary (bound, drifts, residuals)
//! - `manifest.txt` — the resolved config, re-parseable

use crate::config::{InitSpec, RunConfig, SigmaSpec, SystemKind};
use crate::continuum::{continuum_energy, continuum_stochastic_step, FieldState};
use crate::dissipative::{combined_step, detect_equilibrium, dissipative_drift};
use crate::ensemble::{
    energy_bound_verdict, run_ensemble, tridiagonality_residual, EnsembleSpec, ObservableSeries,
};
use crate::error::TodaError;
use crate::integrate::{rk4_step, OdeRunSpec, Trajectory};
use crate::lattice::{build_l, integral_h, FlaschkaState};
use crate::matrix::DenseSquare;
use crate::noise::{NoiseConfig, SdeScheme, WienerDriver};
use crate::stochastic::isospectral_step;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

fn h_k_dense(l: &DenseSquare, k: usize) -> f64 {
    let mut p = l.clone();
    for _ in 1..k {
        p = p.matmul(l);
    }
    p.trace() / k as f64
}

fn write_file(dir: &Path, name: &str, content: &str) -> Result<(), TodaError> {
    fs::create_dir_all(dir)?;
    fs::write(dir.join(name), content)?;
    Ok(())
}

fn csv_row(t: f64, values: &[f64]) -> String {
    let mut s = String::new();
    let _ = write!(s, "{t}");
    for v in values {
        let _ = write!(s, ",{v}");
    }
    s.push('\n');
    s
}

fn flaschka_header(n: usize) -> String {
    let mut h = String::from("t");
    for i in 1..=n {
        let _ = write!(h, ",a{i}");
    }
    for i in 1..n {
        let _ = write!(h, ",b{i}");
    }
    h.push('\n');
    h
}

fn observable_csv(s: &ObservableSeries) -> String {
    let mut out = String::from("t,mean,variance,stderr,n_paths\n");
    let se = s.stderr();
    for k in 0..s.times.len() {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            s.times[k], s.mean[k], s.variance[k], se[k], s.n_paths
        );
    }
    out
}

fn init_to_config_lines(init: &InitSpec) -> String {
    match init {
        InitSpec::RestEqualSpacing => "init = rest-equal-spacing\n".into(),
        InitSpec::TwoSolitonLike => "init = two-soliton-like\n".into(),
        InitSpec::SmoothSine => "init = smooth-sine\n".into(),
        InitSpec::Random { seed, scale } => format!("init = random({seed}, {scale})\n"),
        InitSpec::Explicit { a, b } => {
            let join = |v: &[f64]| {
                v.iter()
                    .map(|x| x.to_string())
                    .collect::<Vec<_>>()
                    .join(", ")
            };
            format!("init = explicit\na = {}\nb = {}\n", join(a), join(b))
        }
    }
}

fn manifest(cfg: &RunConfig) -> String {
    let mut m = String::new();
    let _ = writeln!(m, "system = {}", cfg.system.name());
    let _ = writeln!(m, "n = {}", cfg.n);
    let _ = writeln!(m, "dt = {}", cfg.dt);
    let _ = writeln!(m, "t_end = {}", cfg.t_end);
    let _ = writeln!(m, "record_every = {}", cfg.record_every);
    match &cfg.sigma {
        SigmaSpec::Scalar(s) => {
            let _ = writeln!(m, "sigma = {s}");
        }
        SigmaSpec::PerBond(v) => {
            let _ = writeln!(
                m,
                "sigma = {}",
                v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
            );
        }
    }
    let _ = writeln!(m, "theta = {}", cfg.theta);
    let _ = writeln!(m, "seed = {}", cfg.seed);
    let _ = writeln!(m, "n_paths = {}", cfg.n_paths);
    if let Some(eps) = cfg.eps {
        let _ = writeln!(m, "eps = {eps}");
    }
    m.push_str(&init_to_config_lines(&cfg.init));
    if let Some(dir) = &cfg.output_dir {
        let _ = writeln!(m, "output_dir = {}", dir.display());
    }
    m
}

struct Verdict {
    lines: Vec<(String, String)>,
}

impl Verdict {
    fn new() -> Self {
        Verdict { lines: Vec::new() }
    }

    fn put(&mut self, key: &str, value: impl ToString) {
        self.lines.push((key.to_string(), value.to_string()));
    }

    fn render(&self) -> String {
        let mut s = String::new();
        for (k, v) in &self.lines {
            let _ = writeln!(s, "{k}={v}");
        }
        s
    }
}

fn noise_config(cfg: &RunConfig) -> Result<NoiseConfig, TodaError> {
    NoiseConfig::new(cfg.sigma.broadcast(cfg.n - 1)?, cfg.seed)
}

fn sigma_for_bound(cfg: &RunConfig) -> f64 {
    match &cfg.sigma {
        SigmaSpec::Scalar(s) => *s,
        SigmaSpec::PerBond(v) => v.iter().cloned().fold(0.0, f64::max),
    }
}

/// Integrate one lattice SDE path, recording [H_1, H_2] at the trajectory
/// sample times; `step` advances one dt.
fn lattice_sde_path(
    f0: &FlaschkaState,
    spec: &OdeRunSpec,
    mut step: impl FnMut(&FlaschkaState) -> Result<FlaschkaState, TodaError>,
    mut on_record: impl FnMut(f64, &FlaschkaState),
) -> Result<Trajectory<Vec<f64>>, TodaError> {
    let steps = spec.n_steps();
    let mut obs = Trajectory::new();
    let record = |s: &FlaschkaState| -> Vec<f64> {
        let l = build_l(s);
        vec![integral_h(&l, 1), integral_h(&l, 2)]
    };
    obs.push(0.0, record(f0));
    on_record(0.0, f0);
    let mut s = f0.clone();
    for k in 0..steps {
        s = step(&s)?;
        if (k + 1) % spec.record_every == 0 || k + 1 == steps {
            let t = (k + 1) as f64 * spec.dt;
            obs.push(t, record(&s));
            on_record(t, &s);
        }
    }
    Ok(obs)
}

fn count_positivity_breaches(states: &[FlaschkaState]) -> usize {
    states.iter().filter(|s| s.min_b() <= 0.0).count()
}

fn run_deterministic_like(
    cfg: &RunConfig,
    dir: &Path,
    dissipative: bool,
) -> Result<Verdict, TodaError> {
    let f0 = cfg.init.build_lattice(cfg.n)?;
    let spec = OdeRunSpec::new(cfg.dt, cfg.t_end, cfg.record_every)?;
    let theta = if dissipative { cfg.theta } else { 0.0 };
    let n = cfg.n;
    let drift = |v: &[f64]| dissipative_drift(&FlaschkaState::from_slice(n, v), theta).to_vec();
    let steps = spec.n_steps();
    let mut traj: Trajectory<FlaschkaState> = Trajectory::new();
    traj.push(0.0, f0.clone());
    let mut v = f0.to_vec();
    for k in 0..steps {
        v = rk4_step(&drift, &v, spec.dt);
        if !v.iter().all(|x| x.is_finite()) {
            return Err(TodaError::NonFinite {
                t: (k + 1) as f64 * spec.dt,
            });
        }
        if (k + 1) % spec.record_every == 0 || k + 1 == steps {
            traj.push((k + 1) as f64 * spec.dt, FlaschkaState::from_slice(n, &v));
        }
    }

    let mut csv = flaschka_header(n);
    for (t, s) in traj.times.iter().zip(&traj.states) {
        csv.push_str(&csv_row(*t, &s.to_vec()));
    }
    write_file(dir, "trajectory.csv", &csv)?;

    // single-path observable series for H_1..H_4
    let mut verdict = Verdict::new();
    let mut h2_series = None;
    for k in 1..=4usize {
        let series = ObservableSeries {
            name: format!("h{k}"),
            times: traj.times.clone(),
            mean: traj.states.iter().map(|s| integral_h(&build_l(s), k)).collect(),
            variance: vec![0.0; traj.times.len()],
            n_paths: 1,
        };
        write_file(dir, &format!("obs_h{k}.csv"), &observable_csv(&series))?;
        let h0 = series.mean[0];
        let drift_max = series
            .mean
            .iter()
            .map(|h| (h - h0).abs())
            .fold(0.0, f64::max);
        if !dissipative || k == 1 {
            verdict.put(&format!("h{k}_drift"), drift_max);
        }
        if k == 2 {
            h2_series = Some(series);
        }
    }
    let h2 = h2_series.unwrap();
    if dissipative {
        let breaches = h2
            .mean
            .windows(2)
            .filter(|w| w[1] > w[0] + 1e-10)
            .count();
        verdict.put("h2_monotone_breaches", breaches);
        verdict.put("h2_final", *h2.mean.last().unwrap());
        let eq = detect_equilibrium(&traj, theta, 1e-6);
        verdict.put("equilibrium_converged", eq.converged);
        verdict.put("bound_holds", energy_bound_verdict(&h2, 0.0).holds);
    } else {
        verdict.put("bound_holds", energy_bound_verdict(&h2, 0.0).holds);
    }
    verdict.put("tridiag_residual_max", 0.0);
    verdict.put(
        "positivity_breaches",
        count_positivity_breaches(&traj.states),
    );
    verdict.put("excluded_paths", 0);
    Ok(verdict)
}

fn run_lattice_sde(cfg: &RunConfig, dir: &Path, combined: bool) -> Result<Verdict, TodaError> {
    let f0 = cfg.init.build_lattice(cfg.n)?;
    let spec = OdeRunSpec::new(cfg.dt, cfg.t_end, cfg.record_every)?;
    let noise = noise_config(cfg)?;
    let theta = if combined { cfg.theta } else { 0.0 };
    let ens = EnsembleSpec::new(cfg.n_paths, cfg.seed)?;

    // path 0 trajectory file
    let mut csv = flaschka_header(cfg.n);
    {
        let mut driver = WienerDriver::new(cfg.seed, 0);
        lattice_sde_path(
            &f0,
            &spec,
            |s| combined_step(s, &noise, theta, spec.dt, &mut driver),
            |t, s| csv.push_str(&csv_row(t, &s.to_vec())),
        )?;
    }
    write_file(dir, "trajectory.csv", &csv)?;

    let out = run_ensemble(&ens, &["h1", "h2"], |stream| {
        let mut driver = WienerDriver::new(cfg.seed, stream);
        lattice_sde_path(
            &f0,
            &spec,
            |s| combined_step(s, &noise, theta, spec.dt, &mut driver),
            |_, _| {},
        )
    })?;
    for s in &out.series {
        write_file(dir, &format!("obs_{}.csv", s.name), &observable_csv(s))?;
    }

    let mut verdict = Verdict::new();
    let h1 = &out.series[0];
    let drift_h1 = h1
        .mean
        .iter()
        .map(|h| (h - h1.mean[0]).abs())
        .fold(0.0, f64::max);
    verdict.put("h1_drift", drift_h1);
    let bound = energy_bound_verdict(&out.series[1], sigma_for_bound(cfg));
    verdict.put("bound_holds", bound.holds);
    verdict.put("tridiag_residual_max", 0.0);
    verdict.put("positivity_breaches", 0);
    verdict.put("excluded_paths", out.excluded_paths);
    Ok(verdict)
}

fn run_isospectral(cfg: &RunConfig, dir: &Path) -> Result<Verdict, TodaError> {
    let f0 = cfg.init.build_lattice(cfg.n)?;
    let l0 = build_l(&f0).to_dense();
    let spec = OdeRunSpec::new(cfg.dt, cfg.t_end, cfg.record_every)?;
    let noise = noise_config(cfg)?;
    let ens = EnsembleSpec::new(cfg.n_paths, cfg.seed)?;
    let n = cfg.n;
    let steps = spec.n_steps();

    let run_path = |stream: u64,
                    on_record: &mut dyn FnMut(f64, &DenseSquare)|
     -> Result<Trajectory<Vec<f64>>, TodaError> {
        let mut driver = WienerDriver::new(cfg.seed, stream);
        let mut l = l0.clone();
        let record = |l: &DenseSquare| vec![h_k_dense(l, 1), h_k_dense(l, 2), h_k_dense(l, 3)];
        let mut obs = Trajectory::new();
        obs.push(0.0, record(&l));
        on_record(0.0, &l);
        for k in 0..steps {
            l = isospectral_step(&l, &noise, spec.dt, &mut driver, SdeScheme::StratonovichHeun)?;
            if (k + 1) % spec.record_every == 0 || k + 1 == steps {
                let t = (k + 1) as f64 * spec.dt;
                obs.push(t, record(&l));
                on_record(t, &l);
            }
        }
        Ok(obs)
    };

    // path 0: dense trajectory and off-band residual
    let mut header = String::from("t");
    for i in 0..n {
        for j in 0..n {
            let _ = write!(header, ",l{i}_{j}");
        }
    }
    header.push('\n');
    let mut csv = header;
    let mut residual_max = 0.0_f64;
    run_path(0, &mut |t, l| {
        csv.push_str(&csv_row(t, l.data()));
        residual_max = residual_max.max(tridiagonality_residual(l));
    })?;
    write_file(dir, "trajectory.csv", &csv)?;

    let out = run_ensemble(&ens, &["h1", "h2", "h3"], |stream| {
        run_path(stream, &mut |_, _| {})
    })?;
    for s in &out.series {
        write_file(dir, &format!("obs_{}.csv", s.name), &observable_csv(s))?;
    }

    let mut verdict = Verdict::new();
    for s in &out.series {
        let drift = s
            .mean
            .iter()
            .map(|h| (h - s.mean[0]).abs())
            .fold(0.0, f64::max);
        verdict.put(&format!("{}_drift", s.name), drift);
    }
    verdict.put("bound_holds", energy_bound_verdict(&out.series[1], sigma_for_bound(cfg)).holds);
    verdict.put("tridiag_residual_max", residual_max);
    verdict.put("excluded_paths", out.excluded_paths);
    Ok(verdict)
}

fn run_continuum(cfg: &RunConfig, dir: &Path) -> Result<Verdict, TodaError> {
    let grid = cfg.grid()?;
    let f0 = cfg.init.build_field(&grid)?;
    let spec = OdeRunSpec::new(cfg.dt, cfg.t_end, cfg.record_every)?;
    let sigma = match &cfg.sigma {
        SigmaSpec::Scalar(s) => *s,
        SigmaSpec::PerBond(_) => {
            return Err(TodaError::InvalidSpec(
                "continuum noise takes a scalar sigma".into(),
            ))
        }
    };
    let ens = EnsembleSpec::new(cfg.n_paths, cfg.seed)?;
    let steps = spec.n_steps();
    let n = grid.n_points;

    let run_path = |stream: u64,
                    on_record: &mut dyn FnMut(f64, &FieldState)|
     -> Result<Trajectory<Vec<f64>>, TodaError> {
        let mut driver = WienerDriver::new(cfg.seed, stream);
        let mut f = f0.clone();
        let record =
            |f: &FieldState| vec![f.a.iter().sum::<f64>() * grid.eps, continuum_energy(f, &grid)];
        let mut obs = Trajectory::new();
        obs.push(0.0, record(&f));
        on_record(0.0, &f);
        for k in 0..steps {
            f = continuum_stochastic_step(&f, sigma, cfg.theta, spec.dt, &grid, &mut driver)?;
            if (k + 1) % spec.record_every == 0 || k + 1 == steps {
                let t = (k + 1) as f64 * spec.dt;
                obs.push(t, record(&f));
                on_record(t, &f);
            }
        }
        Ok(obs)
    };

    let mut snapshots = String::from("t,x,a,b\n");
    let mut b_breaches = 0usize;
    run_path(0, &mut |t, f| {
        for j in 0..n {
            let _ = writeln!(snapshots, "{t},{},{},{}", grid.x(j), f.a[j], f.b[j]);
        }
        if f.b.iter().any(|b| *b <= 0.0) {
            b_breaches += 1;
        }
    })?;
    write_file(dir, "snapshots.csv", &snapshots)?;

    let out = run_ensemble(&ens, &["suma", "energy"], |stream| {
        run_path(stream, &mut |_, _| {})
    })?;
    for s in &out.series {
        write_file(dir, &format!("obs_{}.csv", s.name), &observable_csv(s))?;
    }

    let mut verdict = Verdict::new();
    let suma = &out.series[0];
    let drift = suma
        .mean
        .iter()
        .map(|h| (h - suma.mean[0]).abs())
        .fold(0.0, f64::max);
    verdict.put("suma_drift", drift);
    verdict.put("energy_final", *out.series[1].mean.last().unwrap());
    verdict.put("positivity_breaches", b_breaches);
    verdict.put("excluded_paths", out.excluded_paths);
    Ok(verdict)
}

/// Run the configured system and write all artifacts under `dir`.
pub fn execute(cfg: &RunConfig, dir: &Path) -> Result<(), TodaError> {
    let verdict = match cfg.system {
        SystemKind::Deterministic => run_deterministic_like(cfg, dir, false)?,
        SystemKind::Dissipative => run_deterministic_like(cfg, dir, true)?,
        SystemKind::Stochastic => run_lattice_sde(cfg, dir, false)?,
        SystemKind::Combined => run_lattice_sde(cfg, dir, true)?,
        SystemKind::Isospectral => run_isospectral(cfg, dir)?,
        SystemKind::Continuum => run_continuum(cfg, dir)?,
    };
    write_file(dir, "verdict.txt", &verdict.render())?;
    write_file(dir, "manifest.txt", &manifest(cfg))?;
    Ok(())
}
