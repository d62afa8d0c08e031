//! Fixed-step deterministic integration (classical RK4) and trajectory
//! recording for the three equivalent forms of the Toda flow.

use crate::error::TodaError;
use crate::lattice::{
    flaschka_from_physical, physical_from_flaschka, toda_drift_flaschka, toda_drift_physical,
    FlaschkaState, PhysicalState,
};
use crate::matrix::{commutator, DenseSquare, SymTridiag};

/// Fixed-step run parameters.
#[derive(Clone, Copy, Debug)]
pub struct OdeRunSpec {
    pub dt: f64,
    pub t_end: f64,
    pub record_every: usize,
}

impl OdeRunSpec {
    pub fn new(dt: f64, t_end: f64, record_every: usize) -> Result<Self, TodaError> {
        let spec = Self {
            dt,
            t_end,
            record_every,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<(), TodaError> {
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            return Err(TodaError::InvalidSpec(format!("dt = {} must be > 0", self.dt)));
        }
        if !(self.t_end > 0.0) || !self.t_end.is_finite() {
            return Err(TodaError::InvalidSpec(format!(
                "t_end = {} must be > 0",
                self.t_end
            )));
        }
        if self.dt > self.t_end {
            return Err(TodaError::InvalidSpec(format!(
                "dt = {} exceeds t_end = {}",
                self.dt, self.t_end
            )));
        }
        if self.record_every == 0 {
            return Err(TodaError::InvalidSpec("record_every must be >= 1".into()));
        }
        let steps = self.t_end / self.dt;
        if steps > 1e15 {
            return Err(TodaError::InvalidSpec("step count overflows".into()));
        }
        Ok(())
    }

    pub fn n_steps(&self) -> usize {
        (self.t_end / self.dt).round().max(1.0) as usize
    }
}

/// Recorded states at strictly increasing times.
#[derive(Clone, Debug)]
pub struct Trajectory<S> {
    pub times: Vec<f64>,
    pub states: Vec<S>,
}

impl<S> Trajectory<S> {
    pub fn new() -> Self {
        Self {
            times: Vec::new(),
            states: Vec::new(),
        }
    }

    pub fn push(&mut self, t: f64, s: S) {
        debug_assert!(self.times.last().map_or(true, |last| t > *last));
        self.times.push(t);
        self.states.push(s);
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn last(&self) -> Option<(&f64, &S)> {
        self.times.last().zip(self.states.last())
    }

    pub fn map<T>(&self, f: impl Fn(&S) -> T) -> Trajectory<T> {
        Trajectory {
            times: self.times.clone(),
            states: self.states.iter().map(f).collect(),
        }
    }
}

impl<S> Default for Trajectory<S> {
    fn default() -> Self {
        Self::new()
    }
}

/// One classical 4th-order Runge-Kutta step on a flat state vector.
pub fn rk4_step(drift: &dyn Fn(&[f64]) -> Vec<f64>, state: &[f64], dt: f64) -> Vec<f64> {
    assert!(dt > 0.0);
    let n = state.len();
    let k1 = drift(state);
    let mid1: Vec<f64> = (0..n).map(|i| state[i] + 0.5 * dt * k1[i]).collect();
    let k2 = drift(&mid1);
    let mid2: Vec<f64> = (0..n).map(|i| state[i] + 0.5 * dt * k2[i]).collect();
    let k3 = drift(&mid2);
    let end: Vec<f64> = (0..n).map(|i| state[i] + dt * k3[i]).collect();
    let k4 = drift(&end);
    (0..n)
        .map(|i| state[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
        .collect()
}

/// Integrate with RK4 and record every `record_every`-th state (the initial
/// state is always recorded).  Fails on the first non-finite state.
pub fn integrate(
    drift: &dyn Fn(&[f64]) -> Vec<f64>,
    init: Vec<f64>,
    spec: &OdeRunSpec,
) -> Result<Trajectory<Vec<f64>>, TodaError> {
    spec.validate()?;
    let steps = spec.n_steps();
    let mut traj = Trajectory::new();
    traj.push(0.0, init.clone());
    let mut state = init;
    for k in 0..steps {
        state = rk4_step(drift, &state, spec.dt);
        let t = (k + 1) as f64 * spec.dt;
        if !state.iter().all(|v| v.is_finite()) {
            return Err(TodaError::NonFinite { t });
        }
        if (k + 1) % spec.record_every == 0 || k + 1 == steps {
            traj.push(t, state.clone());
        }
    }
    Ok(traj)
}

/// Which of the three equivalent coordinate systems to integrate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TodaForm {
    Flaschka,
    Physical,
    Lax,
}

#[derive(Clone, Debug)]
pub enum TodaInit {
    Flaschka(FlaschkaState),
    Physical(PhysicalState),
    Lax(DenseSquare),
}

#[derive(Clone, Debug)]
pub enum TodaTrajectory {
    Flaschka(Trajectory<FlaschkaState>),
    Physical(Trajectory<PhysicalState>),
    Lax(Trajectory<DenseSquare>),
}

impl TodaTrajectory {
    pub fn times(&self) -> &[f64] {
        match self {
            TodaTrajectory::Flaschka(t) => &t.times,
            TodaTrajectory::Physical(t) => &t.times,
            TodaTrajectory::Lax(t) => &t.times,
        }
    }

    /// View every recorded state in Flaschka variables.  Lax states are
    /// reduced to their tridiagonal content (the off-band residual is a
    /// separate diagnostic, not an error here).
    pub fn to_flaschka(&self) -> Result<Trajectory<FlaschkaState>, TodaError> {
        match self {
            TodaTrajectory::Flaschka(t) => Ok(t.clone()),
            TodaTrajectory::Physical(t) => {
                let mut out = Trajectory::new();
                for (time, s) in t.times.iter().zip(&t.states) {
                    out.push(*time, flaschka_from_physical(s)?);
                }
                Ok(out)
            }
            TodaTrajectory::Lax(t) => {
                let mut out = Trajectory::new();
                for (time, m) in t.times.iter().zip(&t.states) {
                    let n = m.n();
                    let diag = (0..n).map(|i| m.get(i, i)).collect();
                    let off = (0..n - 1)
                        .map(|i| 0.5 * (m.get(i, i + 1) + m.get(i + 1, i)))
                        .collect();
                    out.push(*time, FlaschkaState::new(diag, off)?);
                }
                Ok(out)
            }
        }
    }
}

/// Lax-form drift `dL/dt = [L, pi_q L]`; the dense matrix is integrated as-is,
/// with no projection back to the tridiagonal band.
pub fn lax_drift(l: &DenseSquare) -> DenseSquare {
    commutator(l, &l.pi_q())
}

fn init_for_form(form: TodaForm, init: &TodaInit) -> Result<TodaInit, TodaError> {
    let to_flaschka = |init: &TodaInit| -> Result<FlaschkaState, TodaError> {
        match init {
            TodaInit::Flaschka(f) => Ok(f.clone()),
            TodaInit::Physical(s) => flaschka_from_physical(s),
            TodaInit::Lax(m) => {
                let t = SymTridiag::from_dense(m, 1e-9)?;
                FlaschkaState::new(t.diag().to_vec(), t.off().to_vec())
            }
        }
    };
    Ok(match form {
        TodaForm::Flaschka => TodaInit::Flaschka(to_flaschka(init)?),
        TodaForm::Physical => match init {
            TodaInit::Physical(s) => TodaInit::Physical(s.clone()),
            other => TodaInit::Physical(physical_from_flaschka(&to_flaschka(other)?, 0.0)?),
        },
        TodaForm::Lax => match init {
            TodaInit::Lax(m) => TodaInit::Lax(m.clone()),
            other => {
                let f = to_flaschka(other)?;
                TodaInit::Lax(SymTridiag::new(f.a, f.b)?.to_dense())
            }
        },
    })
}

/// Run the deterministic Toda lattice in the requested form.
pub fn run_toda(
    form: TodaForm,
    init: &TodaInit,
    spec: &OdeRunSpec,
) -> Result<TodaTrajectory, TodaError> {
    match init_for_form(form, init)? {
        TodaInit::Flaschka(f) => {
            let n = f.n();
            let drift = move |v: &[f64]| -> Vec<f64> {
                toda_drift_flaschka(&FlaschkaState::from_slice(n, v)).to_vec()
            };
            let traj = integrate(&drift, f.to_vec(), spec)?;
            Ok(TodaTrajectory::Flaschka(
                traj.map(|v| FlaschkaState::from_slice(n, v)),
            ))
        }
        TodaInit::Physical(s) => {
            let n = s.n();
            let drift = move |v: &[f64]| -> Vec<f64> {
                toda_drift_physical(&PhysicalState::from_slice(n, v)).to_vec()
            };
            let traj = integrate(&drift, s.to_vec(), spec)?;
            Ok(TodaTrajectory::Physical(
                traj.map(|v| PhysicalState::from_slice(n, v)),
            ))
        }
        TodaInit::Lax(m) => {
            let n = m.n();
            let drift = move |v: &[f64]| -> Vec<f64> {
                lax_drift(&DenseSquare::from_vec(n, v.to_vec())).into_vec()
            };
            let traj = integrate(&drift, m.into_vec(), spec)?;
            Ok(TodaTrajectory::Lax(
                traj.map(|v| DenseSquare::from_vec(n, v.clone())),
            ))
        }
    }
}
