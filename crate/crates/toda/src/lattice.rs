//! Lattice state representations, the Flaschka change of variables, the
//! conserved integrals, and the deterministic Toda vector fields.
//!
//! Sign conventions: `a_i = -y_i / 2`, `b_i = exp((x_{i+1} - x_i) / 2) / 2`,
//! so that the component equations `db_i = b_i (a_i - a_{i+1})`,
//! `da_i = 2 (b_{i-1}^2 - b_i^2)` coincide with the Lax form
//! `dL/dt = [L, M]`, `M = L_+ - L_-`, and with the canonical Hamilton
//! equations of `H_p = sum y_i^2 / 2 + sum exp(x_{i+1} - x_i)`.
//! Open boundaries: `b_0 = b_n = 0` everywhere.

use crate::error::TodaError;
use crate::matrix::{DenseSquare, SymTridiag};

/// Positions and momenta (unit masses) of the n particles.
#[derive(Clone, Debug, PartialEq)]
pub struct PhysicalState {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
}

impl PhysicalState {
    pub fn new(x: Vec<f64>, y: Vec<f64>) -> Result<Self, TodaError> {
        if x.len() != y.len() {
            return Err(TodaError::DimensionMismatch(x.len(), y.len()));
        }
        if x.len() < 2 {
            return Err(TodaError::InvalidState("need at least 2 particles".into()));
        }
        if !x.iter().chain(y.iter()).all(|v| v.is_finite()) {
            return Err(TodaError::InvalidState("non-finite entry".into()));
        }
        Ok(Self { x, y })
    }

    pub fn n(&self) -> usize {
        self.x.len()
    }

    pub fn to_vec(&self) -> Vec<f64> {
        let mut v = self.x.clone();
        v.extend_from_slice(&self.y);
        v
    }

    pub fn from_slice(n: usize, v: &[f64]) -> Self {
        assert_eq!(v.len(), 2 * n);
        Self {
            x: v[..n].to_vec(),
            y: v[n..].to_vec(),
        }
    }
}

/// Flaschka variables: `a` (n entries) and `b` (n-1 bond entries).
/// Same data layout as the Lax matrix, kept as a distinct semantic role.
#[derive(Clone, Debug, PartialEq)]
pub struct FlaschkaState {
    pub a: Vec<f64>,
    pub b: Vec<f64>,
}

impl FlaschkaState {
    pub fn new(a: Vec<f64>, b: Vec<f64>) -> Result<Self, TodaError> {
        if a.len() < 2 || b.len() + 1 != a.len() {
            return Err(TodaError::DimensionMismatch(a.len(), b.len() + 1));
        }
        if !a.iter().chain(b.iter()).all(|v| v.is_finite()) {
            return Err(TodaError::InvalidState("non-finite entry".into()));
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
        assert_eq!(v.len(), 2 * n - 1);
        Self {
            a: v[..n].to_vec(),
            b: v[n..].to_vec(),
        }
    }

    pub fn min_b(&self) -> f64 {
        self.b.iter().cloned().fold(f64::INFINITY, f64::min)
    }

    pub fn is_finite(&self) -> bool {
        self.a.iter().chain(self.b.iter()).all(|v| v.is_finite())
    }
}

/// Flaschka map: `a_i = -y_i/2`, `b_i = exp((x_{i+1}-x_i)/2)/2`.
pub fn flaschka_from_physical(s: &PhysicalState) -> Result<FlaschkaState, TodaError> {
    let n = s.n();
    let a: Vec<f64> = s.y.iter().map(|y| -y / 2.0).collect();
    let mut b = Vec::with_capacity(n - 1);
    for i in 0..n - 1 {
        let v = ((s.x[i + 1] - s.x[i]) / 2.0).exp() / 2.0;
        if !v.is_finite() {
            return Err(TodaError::Range(format!(
                "gap x[{}] - x[{}] = {} overflows the Flaschka map",
                i + 1,
                i,
                s.x[i + 1] - s.x[i]
            )));
        }
        b.push(v);
    }
    FlaschkaState::new(a, b)
}

/// Inverse Flaschka map.  The absolute position is lost by the forward map
/// and restored through the base point `x1`.
pub fn physical_from_flaschka(f: &FlaschkaState, x1: f64) -> Result<PhysicalState, TodaError> {
    let n = f.n();
    for (i, &b) in f.b.iter().enumerate() {
        if b <= 0.0 {
            return Err(TodaError::NonpositiveB {
                index: i + 1,
                value: b,
            });
        }
    }
    let mut x = Vec::with_capacity(n);
    x.push(x1);
    for i in 0..n - 1 {
        x.push(x[i] + 2.0 * (2.0 * f.b[i]).ln());
    }
    let y = f.a.iter().map(|a| -2.0 * a).collect();
    PhysicalState::new(x, y)
}

/// Lax matrix of a Flaschka state.
pub fn build_l(f: &FlaschkaState) -> SymTridiag {
    SymTridiag::new(f.a.clone(), f.b.clone()).expect("FlaschkaState is always a valid tridiagonal")
}

/// `M = L_+ - L_-`; equals `pi_q` of the densified Lax matrix.
pub fn build_m(l: &SymTridiag) -> DenseSquare {
    l.to_dense().pi_q()
}

/// Integral of motion `H_k = tr(L^k) / k`.
pub fn integral_h(l: &SymTridiag, k: usize) -> f64 {
    assert!(k >= 1);
    match k {
        1 => l.diag().iter().sum(),
        2 => {
            0.5 * l.diag().iter().map(|a| a * a).sum::<f64>()
                + l.off().iter().map(|b| b * b).sum::<f64>()
        }
        _ => {
            let d = l.to_dense();
            let mut p = d.clone();
            for _ in 1..k {
                p = p.matmul(&d);
            }
            p.trace() / k as f64
        }
    }
}

/// Toda vector field in Flaschka variables:
/// `da_i = 2(b_{i-1}^2 - b_i^2)`, `db_i = b_i (a_i - a_{i+1})`.
pub fn toda_drift_flaschka(f: &FlaschkaState) -> FlaschkaState {
    let n = f.n();
    let b2 = |i: usize| -> f64 {
        // 1-based bond index with b_0 = b_n = 0
        if i == 0 || i == n {
            0.0
        } else {
            f.b[i - 1] * f.b[i - 1]
        }
    };
    let a_dot: Vec<f64> = (1..=n).map(|i| 2.0 * (b2(i - 1) - b2(i))).collect();
    let b_dot: Vec<f64> = (0..n - 1).map(|i| f.b[i] * (f.a[i] - f.a[i + 1])).collect();
    FlaschkaState { a: a_dot, b: b_dot }
}

/// Toda vector field in physical variables (canonical Hamilton equations of
/// `H_p`): `dx_i = y_i`, `dy_i = exp(x_{i+1}-x_i) - exp(x_i-x_{i-1})`.
pub fn toda_drift_physical(s: &PhysicalState) -> PhysicalState {
    let n = s.n();
    let gap = |i: usize| -> f64 {
        // exp(x_{i+1} - x_i) for 1-based bond i, zero at the open ends
        if i == 0 || i == n {
            0.0
        } else {
            (s.x[i] - s.x[i - 1]).exp()
        }
    };
    let x_dot = s.y.clone();
    let y_dot: Vec<f64> = (1..=n).map(|i| gap(i) - gap(i - 1)).collect();
    PhysicalState { x: x_dot, y: y_dot }
}

/// `H_p = sum y_i^2/2 + sum exp(x_{i+1}-x_i)`.
pub fn hamiltonian_physical(s: &PhysicalState) -> f64 {
    let kinetic: f64 = s.y.iter().map(|y| y * y / 2.0).sum();
    let potential: f64 = (0..s.n() - 1).map(|i| (s.x[i + 1] - s.x[i]).exp()).sum();
    kinetic + potential
}
