//! Monte Carlo ensemble execution with order-independent aggregation, plus
//! the mean-energy bound verdict and spectral diagnostics.
//!
//! Paths are computed in parallel but merged in path-index order with
//! Welford updates, so the statistics are byte-identical for any worker
//! count; path p always draws from Wiener stream p.

use crate::error::TodaError;
use crate::integrate::Trajectory;
use crate::lattice::{build_l, FlaschkaState};
use crate::matrix::DenseSquare;
use rayon::prelude::*;

/// Monte Carlo estimate of one observable over time.
#[derive(Clone, Debug, PartialEq)]
pub struct ObservableSeries {
    pub name: String,
    pub times: Vec<f64>,
    pub mean: Vec<f64>,
    pub variance: Vec<f64>,
    pub n_paths: usize,
}

impl ObservableSeries {
    pub fn stderr(&self) -> Vec<f64> {
        self.mean
            .iter()
            .enumerate()
            .map(|(k, _)| (self.variance[k] / self.n_paths as f64).sqrt())
            .collect()
    }
}

/// Ensemble parameters: path count and the master seed; stream p of the
/// seeded driver is reserved for path p.
#[derive(Clone, Copy, Debug)]
pub struct EnsembleSpec {
    pub n_paths: usize,
    pub base_seed: u64,
}

impl EnsembleSpec {
    pub fn new(n_paths: usize, base_seed: u64) -> Result<Self, TodaError> {
        if n_paths == 0 {
            return Err(TodaError::InvalidSpec("n_paths must be >= 1".into()));
        }
        Ok(Self { n_paths, base_seed })
    }
}

/// Result of an ensemble run; excluded paths are counted, never dropped
/// silently (`completed + excluded == n_paths`).
#[derive(Clone, Debug)]
pub struct EnsembleOutcome {
    pub series: Vec<ObservableSeries>,
    pub completed_paths: usize,
    pub excluded_paths: usize,
}

/// Run `path_fn(stream)` for streams `0..n_paths` and aggregate the returned
/// observable trajectories (one vector of observable values per recorded
/// time).  All successful paths must share the same time grid.
pub fn run_ensemble<F>(
    spec: &EnsembleSpec,
    names: &[&str],
    path_fn: F,
) -> Result<EnsembleOutcome, TodaError>
where
    F: Fn(u64) -> Result<Trajectory<Vec<f64>>, TodaError> + Sync,
{
    let results: Vec<Result<Trajectory<Vec<f64>>, TodaError>> = (0..spec.n_paths as u64)
        .into_par_iter()
        .map(&path_fn)
        .collect();

    let mut times: Option<Vec<f64>> = None;
    let mut mean: Vec<Vec<f64>> = Vec::new();
    let mut m2: Vec<Vec<f64>> = Vec::new();
    let mut completed = 0usize;
    let mut excluded = 0usize;
    // sequential merge in path order keeps the output independent of the
    // parallel schedule
    for r in results {
        let traj = match r {
            Ok(t) => t,
            Err(_) => {
                excluded += 1;
                continue;
            }
        };
        let t0 = times.get_or_insert_with(|| {
            mean = vec![vec![0.0; traj.times.len()]; names.len()];
            m2 = vec![vec![0.0; traj.times.len()]; names.len()];
            traj.times.clone()
        });
        if traj.times != *t0 {
            return Err(TodaError::InvalidSpec(
                "paths recorded on different time grids".into(),
            ));
        }
        completed += 1;
        for (k, obs) in traj.states.iter().enumerate() {
            if obs.len() != names.len() {
                return Err(TodaError::DimensionMismatch(obs.len(), names.len()));
            }
            for (i, v) in obs.iter().enumerate() {
                let delta = v - mean[i][k];
                mean[i][k] += delta / completed as f64;
                m2[i][k] += delta * (v - mean[i][k]);
            }
        }
    }
    if completed == 0 {
        return Err(TodaError::InsufficientSamples {
            got: 0,
            need: 1,
        });
    }
    let times = times.unwrap();
    let denom = (completed.max(2) - 1) as f64;
    let series = names
        .iter()
        .enumerate()
        .map(|(i, name)| ObservableSeries {
            name: (*name).to_string(),
            times: times.clone(),
            mean: mean[i].clone(),
            variance: m2[i].iter().map(|s| s / denom).collect(),
            n_paths: completed,
        })
        .collect();
    Ok(EnsembleOutcome {
        series,
        completed_paths: completed,
        excluded_paths: excluded,
    })
}

/// Verdict on the mean-energy bound `E[H_2(t)] <= H_2(0) e^{4 sigma^2 t}`,
/// allowed a 3-standard-error statistical margin.
#[derive(Clone, Debug)]
pub struct BoundVerdict {
    pub holds: bool,
    /// `bound(t) - mean(t)` at each recorded time (negative where exceeded
    /// beyond the margin).
    pub margin: Vec<f64>,
}

pub fn energy_bound_verdict(series: &ObservableSeries, sigma: f64) -> BoundVerdict {
    let h0 = series.mean[0];
    let se = series.stderr();
    let mut holds = true;
    let mut margin = Vec::with_capacity(series.times.len());
    for (k, t) in series.times.iter().enumerate() {
        let bound = h0 * (4.0 * sigma * sigma * t).exp();
        let mean = series.mean[k];
        // the 1e-12 headroom keeps the sigma = 0 case (exact conservation up
        // to integrator rounding) from flapping
        let tol = if mean > 0.0 {
            bound * (3.0 * se[k] / mean + 1e-12)
        } else {
            3.0 * se[k]
        };
        if mean > bound + tol {
            holds = false;
        }
        margin.push(bound - mean);
    }
    BoundVerdict { holds, margin }
}

/// `max_k |lambda_k(t) - lambda_k(0)|` per recorded time, eigenvalues of the
/// Lax matrix sorted ascending.
pub fn spectrum_drift(traj: &Trajectory<FlaschkaState>) -> Vec<f64> {
    let tol = 1e-11;
    let base = match traj.states.first() {
        Some(s) => build_l(s).eigenvalues(tol),
        None => return Vec::new(),
    };
    traj.states
        .iter()
        .map(|s| {
            build_l(s)
                .eigenvalues(tol)
                .iter()
                .zip(&base)
                .map(|(e, e0)| (e - e0).abs())
                .fold(0.0, f64::max)
        })
        .collect()
}

/// Largest entry outside the tridiagonal band.
pub fn tridiagonality_residual(l: &DenseSquare) -> f64 {
    let n = l.n();
    let mut r = 0.0_f64;
    for i in 0..n {
        for j in 0..n {
            if i.abs_diff(j) >= 2 {
                r = r.max(l.get(i, j).abs());
            }
        }
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::integrate::{run_toda, OdeRunSpec, TodaForm, TodaInit};
    use crate::lattice::integral_h;
    use crate::noise::{NoiseConfig, WienerDriver};
    use crate::stochastic::stochastic_toda_step;
    use crate::test_util::{assert_close, rand_flaschka};

    fn brownian_path(stream: u64, steps: usize, dt: f64) -> Trajectory<Vec<f64>> {
        let mut d = WienerDriver::new(123, stream);
        let mut traj = Trajectory::new();
        let mut x = 0.0;
        traj.push(0.0, vec![x]);
        for k in 0..steps {
            x += d.increments(1, dt)[0];
            traj.push((k + 1) as f64 * dt, vec![x]);
        }
        traj
    }

    #[test]
    fn deterministic_ensemble_has_zero_variance() {
        let spec = EnsembleSpec::new(8, 0).unwrap();
        let out = run_ensemble(&spec, &["x"], |_| {
            let mut t = Trajectory::new();
            t.push(0.0, vec![1.5]);
            t.push(1.0, vec![2.5]);
            Ok(t)
        })
        .unwrap();
        assert_eq!(out.completed_paths, 8);
        assert_eq!(out.excluded_paths, 0);
        assert_eq!(out.series[0].variance, vec![0.0, 0.0]);
        assert_eq!(out.series[0].mean, vec![1.5, 2.5]);
    }

    #[test]
    fn same_seed_reproduces_identical_output() {
        let spec = EnsembleSpec::new(32, 7).unwrap();
        let run = || {
            run_ensemble(&spec, &["w"], |s| Ok(brownian_path(s, 20, 0.01))).unwrap()
        };
        let a = run();
        let b = run();
        assert_eq!(a.series, b.series);
    }

    #[test]
    fn output_independent_of_worker_count() {
        let spec = EnsembleSpec::new(64, 3).unwrap();
        let job = || run_ensemble(&spec, &["w"], |s| Ok(brownian_path(s, 10, 0.01))).unwrap();
        let one = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap()
            .install(job);
        let four = rayon::ThreadPoolBuilder::new()
            .num_threads(4)
            .build()
            .unwrap()
            .install(job);
        assert_eq!(one.series, four.series);
    }

    #[test]
    fn excluded_paths_are_counted() {
        let spec = EnsembleSpec::new(10, 0).unwrap();
        let out = run_ensemble(&spec, &["x"], |s| {
            if s == 3 || s == 7 {
                return Err(TodaError::NonFinite { t: 0.5 });
            }
            let mut t = Trajectory::new();
            t.push(0.0, vec![s as f64]);
            Ok(t)
        })
        .unwrap();
        assert_eq!(out.completed_paths, 8);
        assert_eq!(out.excluded_paths, 2);
        assert_eq!(out.completed_paths + out.excluded_paths, 10);
    }

    #[test]
    fn brownian_variance_matches_ito_isometry() {
        let spec = EnsembleSpec::new(100_000, 0).unwrap();
        let out = run_ensemble(&spec, &["w"], |s| Ok(brownian_path(s, 10, 0.01))).unwrap();
        let series = &out.series[0];
        // Var W(t) = t
        let last = series.times.len() - 1;
        let t = series.times[last];
        assert!(
            (series.variance[last] - t).abs() < 0.05 * t,
            "var {} vs {t}",
            series.variance[last]
        );
    }

    #[test]
    fn mean_h1_exactly_constant_for_stochastic_toda() {
        let mut rng = 101u64;
        let f0 = rand_flaschka(4, &mut rng);
        let cfg = NoiseConfig::uniform(4, 0.2, 55).unwrap();
        let spec = EnsembleSpec::new(20, 55).unwrap();
        let dt = 1e-3;
        let steps = 200;
        let out = run_ensemble(&spec, &["h1"], |stream| {
            let mut d = WienerDriver::new(55, stream);
            let mut s = f0.clone();
            let mut traj = Trajectory::new();
            traj.push(0.0, vec![s.a.iter().sum()]);
            for k in 0..steps {
                s = stochastic_toda_step(&s, &cfg, dt, &mut d)?;
                traj.push((k + 1) as f64 * dt, vec![s.a.iter().sum()]);
            }
            Ok(traj)
        })
        .unwrap();
        let series = &out.series[0];
        let h1 = series.mean[0];
        for m in &series.mean {
            assert_close(*m, h1, 1e-13);
        }
        for v in &series.variance {
            assert!(*v < 1e-26);
        }
    }

    #[test]
    fn bound_verdict_sigma_zero_is_conservation() {
        let s = ObservableSeries {
            name: "h2".into(),
            times: vec![0.0, 1.0, 2.0],
            mean: vec![3.0, 3.0, 3.0],
            variance: vec![0.0, 0.0, 0.0],
            n_paths: 10,
        };
        let v = energy_bound_verdict(&s, 0.0);
        assert!(v.holds);
        for m in v.margin {
            assert_eq!(m, 0.0);
        }
    }

    #[test]
    fn bound_verdict_flags_violation() {
        let s = ObservableSeries {
            name: "h2".into(),
            times: vec![0.0, 1.0],
            mean: vec![1.0, 100.0],
            variance: vec![0.0, 0.01],
            n_paths: 100,
        };
        let v = energy_bound_verdict(&s, 0.1);
        assert!(!v.holds);
        assert!(v.margin[1] < 0.0);
    }

    #[test]
    fn bound_verdict_tolerates_small_excess() {
        // mean is above the bound but within 3 SE
        let s = ObservableSeries {
            name: "h2".into(),
            times: vec![0.0, 1.0],
            mean: vec![1.0, 1.001],
            variance: vec![0.0, 1.0],
            n_paths: 100,
        };
        let v = energy_bound_verdict(&s, 0.0);
        assert!(v.holds);
    }

    #[test]
    fn spectrum_constant_for_deterministic_run() {
        let mut rng = 103u64;
        let f = rand_flaschka(3, &mut rng);
        let spec = OdeRunSpec::new(1e-3, 2.0, 200).unwrap();
        let traj = run_toda(TodaForm::Flaschka, &TodaInit::Flaschka(f), &spec)
            .unwrap()
            .to_flaschka()
            .unwrap();
        for d in spectrum_drift(&traj) {
            assert!(d < 1e-9, "drift {d}");
        }
    }

    #[test]
    fn spectrum_drifts_under_orbit_noise() {
        // orbit-preserving noise moves the spectrum
        let mut rng = 107u64;
        let f = rand_flaschka(3, &mut rng);
        let cfg = NoiseConfig::uniform(3, 0.5, 77).unwrap();
        let mut d = WienerDriver::new(77, 0);
        let mut s = f.clone();
        let mut traj = Trajectory::new();
        traj.push(0.0, s.clone());
        for k in 0..2000 {
            s = stochastic_toda_step(&s, &cfg, 1e-3, &mut d).unwrap();
            if (k + 1) % 500 == 0 {
                traj.push((k + 1) as f64 * 1e-3, s.clone());
            }
        }
        let drift = spectrum_drift(&traj);
        assert!(drift.last().unwrap() > &1e-3, "drift {drift:?}");
        // H_2 moved, so the spectrum must have
        let h2_0 = integral_h(&build_l(&f), 2);
        let h2_t = integral_h(&build_l(&s), 2);
        assert!((h2_t - h2_0).abs() > 1e-4);
    }

    #[test]
    fn residual_zero_on_tridiagonal() {
        let mut rng = 109u64;
        let f = rand_flaschka(5, &mut rng);
        assert_eq!(tridiagonality_residual(&build_l(&f).to_dense()), 0.0);
        let mut m = build_l(&f).to_dense();
        m.set(0, 3, 1e-7);
        assert_eq!(tridiagonality_residual(&m), 1e-7);
    }

    #[test]
    fn all_paths_failing_is_an_error() {
        let spec = EnsembleSpec::new(4, 0).unwrap();
        let r = run_ensemble(&spec, &["x"], |_| {
            Err::<Trajectory<Vec<f64>>, _>(TodaError::NonFinite { t: 0.0 })
        });
        assert!(matches!(r, Err(TodaError::InsufficientSamples { .. })));
    }
}
