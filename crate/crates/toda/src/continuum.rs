//! Continuum limit of the lattice on a periodic grid: the deterministic
//! nonlinear-viscosity system `a_t = 2(b^2(1 + theta a_x))_x`,
//! `b_t = b(a_x + 2 theta b_xx)`, its space-time-white-noise version, the
//! energy law, and the lattice-embedding comparison.
//!
//! The a-equation is discretized in conservative flux form (arithmetic-mean
//! `b` on bonds, centered `a_x`), so the discrete momentum `sum a_j` is
//! conserved to rounding by every stepper, noise included.

use crate::dissipative::dissipative_drift;
use crate::error::TodaError;
use crate::integrate::rk4_step;
use crate::lattice::FlaschkaState;
use crate::noise::WienerDriver;

/// Uniform periodic 1-D grid; domain length `n_points * eps`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Grid1D {
    pub n_points: usize,
    pub eps: f64,
}

impl Grid1D {
    pub fn new(n_points: usize, eps: f64) -> Result<Self, TodaError> {
        if n_points < 8 {
            return Err(TodaError::InvalidSpec(format!(
                "grid needs at least 8 points, got {n_points}"
            )));
        }
        if !(eps > 0.0) || !eps.is_finite() {
            return Err(TodaError::InvalidSpec(format!("eps = {eps} must be > 0")));
        }
        Ok(Self { n_points, eps })
    }

    pub fn length(&self) -> f64 {
        self.n_points as f64 * self.eps
    }

    pub fn x(&self, j: usize) -> f64 {
        j as f64 * self.eps
    }
}

/// Periodic fields a(x), b(x) sampled on the grid nodes.
#[derive(Clone, Debug, PartialEq)]
pub struct FieldState {
    pub a: Vec<f64>,
    pub b: Vec<f64>,
}

impl FieldState {
    pub fn new(a: Vec<f64>, b: Vec<f64>) -> Result<Self, TodaError> {
        if a.len() != b.len() {
            return Err(TodaError::DimensionMismatch(a.len(), b.len()));
        }
        if !a.iter().chain(b.iter()).all(|v| v.is_finite()) {
            return Err(TodaError::InvalidState("non-finite field entry".into()));
        }
        Ok(Self { a, b })
    }

    pub fn n(&self) -> usize {
        self.a.len()
    }

    pub fn to_vec(&self) -> Vec<f64> {
        let mut v = self.a.clone();
        v.extend_from_slice(&self.b);
        v
    }

    pub fn from_slice(n: usize, v: &[f64]) -> Self {
        assert_eq!(v.len(), 2 * n);
        Self {
            a: v[..n].to_vec(),
            b: v[n..].to_vec(),
        }
    }

    pub fn sup_norm(&self) -> f64 {
        self.a
            .iter()
            .chain(self.b.iter())
            .fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.a.iter().chain(self.b.iter()).all(|v| v.is_finite())
    }
}

#[inline]
fn wrap(j: isize, n: usize) -> usize {
    j.rem_euclid(n as isize) as usize
}

/// Centered first derivative at node j.
#[inline]
fn dx_c(f: &[f64], j: usize, eps: f64) -> f64 {
    let n = f.len();
    (f[wrap(j as isize + 1, n)] - f[wrap(j as isize - 1, n)]) / (2.0 * eps)
}

/// Second derivative at node j.
#[inline]
fn dxx(f: &[f64], j: usize, eps: f64) -> f64 {
    let n = f.len();
    (f[wrap(j as isize + 1, n)] - 2.0 * f[j] + f[wrap(j as isize - 1, n)]) / (eps * eps)
}

/// Flux `F_{j+1/2} = 2 b_{j+1/2}^2 (1 + theta (a_x)_{j+1/2})` on bond j.
#[inline]
fn a_flux(f: &FieldState, j: usize, theta: f64, eps: f64) -> f64 {
    let n = f.n();
    let jp = wrap(j as isize + 1, n);
    let bm = 0.5 * (f.b[j] + f.b[jp]);
    let ax = (f.a[jp] - f.a[j]) / eps;
    2.0 * bm * bm * (1.0 + theta * ax)
}

/// Continuum vector field.  The a-equation is the flux divergence
/// `(F_{j+1/2} - F_{j-1/2}) / eps`, so `sum da_j` telescopes to rounding;
/// the b-equation uses centered `a_x` and the standard 3-point `b_xx`.
pub fn continuum_drift(f: &FieldState, theta: f64, grid: &Grid1D) -> FieldState {
    let n = f.n();
    assert_eq!(n, grid.n_points);
    let eps = grid.eps;
    let mut a_dot = Vec::with_capacity(n);
    for j in 0..n {
        let jm = wrap(j as isize - 1, n);
        a_dot.push((a_flux(f, j, theta, eps) - a_flux(f, jm, theta, eps)) / eps);
    }
    let mut b_dot = Vec::with_capacity(n);
    for j in 0..n {
        b_dot.push(f.b[j] * (dx_c(&f.a, j, eps) + 2.0 * theta * dxx(&f.b, j, eps)));
    }
    FieldState { a: a_dot, b: b_dot }
}

/// Discrete energy `E = 1/2 int (a^2/2 + b^2) dx`.
pub fn continuum_energy(f: &FieldState, grid: &Grid1D) -> f64 {
    f.a.iter()
        .zip(&f.b)
        .map(|(a, b)| 0.25 * a * a + 0.5 * b * b)
        .sum::<f64>()
        * grid.eps
}

/// Closed-form energy rate `dE/dt = theta int b^2 (2 b_xx - a_x^2) dx`,
/// evaluated with the same stencils as the drift.
pub fn continuum_energy_rate(f: &FieldState, theta: f64, grid: &Grid1D) -> f64 {
    if theta == 0.0 {
        return 0.0;
    }
    let n = f.n();
    let eps = grid.eps;
    let mut acc = 0.0;
    for j in 0..n {
        let ax = dx_c(&f.a, j, eps);
        acc += f.b[j] * f.b[j] * (2.0 * dxx(&f.b, j, eps) - ax * ax);
    }
    theta * acc * eps
}

/// Bond noise coefficient `c_{j+1/2} = (b_{j+1} - b_j) / (sqrt(2) eps)`;
/// the flux difference of these reproduces the per-cell variance
/// `4 sigma^2 b_x^2 dt / eps` while conserving `sum a` exactly.
#[inline]
fn noise_coeff(b: &[f64], j: usize, eps: f64) -> f64 {
    let n = b.len();
    (b[wrap(j as isize + 1, n)] - b[j]) / (std::f64::consts::SQRT_2 * eps)
}

/// One step of the stochastic continuum system: RK4 on the deterministic
/// drift, then the flux-form white-noise increment on `a` with `b` frozen at
/// the start of the step.  sigma = 0 is bit-identical to the deterministic
/// step.  Reports `Instability` when the field sup-norm doubles in one step.
pub fn continuum_stochastic_step_with(
    f: &FieldState,
    sigma: f64,
    theta: f64,
    dt: f64,
    grid: &Grid1D,
    dw: &[f64],
) -> Result<FieldState, TodaError> {
    assert!(dt > 0.0);
    let n = f.n();
    let drift = |v: &[f64]| continuum_drift(&FieldState::from_slice(n, v), theta, grid).to_vec();
    let stepped = rk4_step(&drift, &f.to_vec(), dt);
    let mut out = FieldState::from_slice(n, &stepped);
    if sigma != 0.0 {
        assert_eq!(dw.len(), n);
        let scale = 2.0 * sigma / grid.eps.sqrt();
        for j in 0..n {
            let jm = wrap(j as isize - 1, n);
            out.a[j] += scale
                * (noise_coeff(&f.b, j, grid.eps) * dw[j]
                    - noise_coeff(&f.b, jm, grid.eps) * dw[jm]);
        }
    }
    if !out.is_finite() {
        return Err(TodaError::NonFinite { t: dt });
    }
    if out.sup_norm() > 2.0 * f.sup_norm().max(1e-8) {
        return Err(TodaError::Instability { t: dt });
    }
    Ok(out)
}

pub fn continuum_stochastic_step(
    f: &FieldState,
    sigma: f64,
    theta: f64,
    dt: f64,
    grid: &Grid1D,
    driver: &mut WienerDriver,
) -> Result<FieldState, TodaError> {
    let dw = if sigma == 0.0 {
        Vec::new()
    } else {
        driver.increments(f.n(), dt)
    };
    continuum_stochastic_step_with(f, sigma, theta, dt, grid, &dw)
}

/// L2 errors of the rescaled dissipative lattice against the PDE at a list
/// of grid sizes.
#[derive(Clone, Debug)]
pub struct EmbeddingReport {
    pub sizes: Vec<usize>,
    pub l2_errors: Vec<f64>,
}

/// Run the open dissipative lattice at each size n (spacing eps = 1/n on the
/// unit domain) against the periodic PDE started from the same smooth
/// profiles, and report the interior L2 differences.
///
/// The embedding uses the continuum rescalings theta -> theta/eps,
/// t -> t/eps, and identifies lattice `a_k` with `-a(eps k)` (the lattice
/// drift `db = b(a_k - a_{k+1})` is `-eps b a_x`, so the orientations are
/// opposite).  The comparison is restricted to the window `x in [w0, w1]`:
/// the lattice is open while the PDE is periodic, and disturbances from the
/// lattice ends travel at finite speed, so a short horizon keeps the window
/// clean.
pub fn lattice_embedding_compare(
    a_profile: &dyn Fn(f64) -> f64,
    b_profile: &dyn Fn(f64) -> f64,
    theta: f64,
    t_end: f64,
    dt: f64,
    sizes: &[usize],
    window: (f64, f64),
) -> Result<EmbeddingReport, TodaError> {
    if !(t_end > 0.0) || !(dt > 0.0) || dt > t_end {
        return Err(TodaError::InvalidSpec(format!(
            "need 0 < dt <= t_end, got dt = {dt}, t_end = {t_end}"
        )));
    }
    if !(0.0 <= window.0 && window.0 < window.1 && window.1 <= 1.0) {
        return Err(TodaError::InvalidSpec(format!(
            "window {window:?} must satisfy 0 <= w0 < w1 <= 1"
        )));
    }
    let steps = (t_end / dt).round().max(1.0) as usize;
    let mut errors = Vec::with_capacity(sizes.len());
    for &n in sizes {
        let eps = 1.0 / n as f64;
        let grid = Grid1D::new(n, eps)?;

        // PDE side
        let a0: Vec<f64> = (0..n).map(|j| a_profile(grid.x(j))).collect();
        let b0: Vec<f64> = (0..n).map(|j| b_profile(grid.x(j))).collect();
        let mut pde = FieldState::new(a0, b0)?;
        let drift =
            |v: &[f64]| continuum_drift(&FieldState::from_slice(n, v), theta, &grid).to_vec();
        let mut v = pde.to_vec();
        for k in 0..steps {
            v = rk4_step(&drift, &v, dt);
            if !v.iter().all(|x| x.is_finite()) {
                return Err(TodaError::NonFinite {
                    t: (k + 1) as f64 * dt,
                });
            }
        }
        pde = FieldState::from_slice(n, &v);

        // lattice side: bond-centered b, negated a, rescaled theta and time
        let a_lat: Vec<f64> = (0..n).map(|j| -a_profile(grid.x(j))).collect();
        let b_lat: Vec<f64> = (0..n - 1)
            .map(|i| b_profile((i as f64 + 0.5) * eps))
            .collect();
        let f0 = FlaschkaState::new(a_lat, b_lat)?;
        let theta_lat = theta / eps;
        let dt_lat = dt / eps;
        let ldrift =
            |v: &[f64]| dissipative_drift(&FlaschkaState::from_slice(n, v), theta_lat).to_vec();
        let mut lv = f0.to_vec();
        for k in 0..steps {
            lv = rk4_step(&ldrift, &lv, dt_lat);
            if !lv.iter().all(|x| x.is_finite()) {
                return Err(TodaError::NonFinite {
                    t: (k + 1) as f64 * dt,
                });
            }
        }
        let lat = FlaschkaState::from_slice(n, &lv);

        let mut acc = 0.0;
        for j in 0..n {
            let x = grid.x(j);
            if x < window.0 || x > window.1 {
                continue;
            }
            let d = pde.a[j] - (-lat.a[j]);
            acc += d * d;
        }
        for i in 0..n - 1 {
            let x = (i as f64 + 0.5) * eps;
            if x < window.0 || x > window.1 {
                continue;
            }
            let b_pde_bond = 0.5 * (pde.b[i] + pde.b[i + 1]);
            let d = b_pde_bond - lat.b[i];
            acc += d * d;
        }
        errors.push((acc * eps).sqrt());
    }
    Ok(EmbeddingReport {
        sizes: sizes.to_vec(),
        l2_errors: errors,
    })
}

/// Sample covariance of components j and j' across independent increment
/// vectors, with its normal-approximation standard error.
#[derive(Clone, Copy, Debug)]
pub struct CovEstimate {
    pub cov: f64,
    pub stderr: f64,
    pub n: usize,
}

pub fn autocovariance(
    samples: &[Vec<f64>],
    j: usize,
    jp: usize,
) -> Result<CovEstimate, TodaError> {
    let n = samples.len();
    if n < 1000 {
        return Err(TodaError::InsufficientSamples { got: n, need: 1000 });
    }
    let mean_j = samples.iter().map(|s| s[j]).sum::<f64>() / n as f64;
    let mean_jp = samples.iter().map(|s| s[jp]).sum::<f64>() / n as f64;
    let prods: Vec<f64> = samples
        .iter()
        .map(|s| (s[j] - mean_j) * (s[jp] - mean_jp))
        .collect();
    let cov = prods.iter().sum::<f64>() / (n - 1) as f64;
    let pm = prods.iter().sum::<f64>() / n as f64;
    let pvar = prods.iter().map(|p| (p - pm) * (p - pm)).sum::<f64>() / (n - 1) as f64;
    Ok(CovEstimate {
        cov,
        stderr: (pvar / n as f64).sqrt(),
        n,
    })
}
