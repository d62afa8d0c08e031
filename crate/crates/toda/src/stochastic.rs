//! Stochastic Toda lattice: component, matrix and physical forms of the
//! orbit-preserving multiplicative noise, plus the isospectral variant with
//! eigenfunction propagation.
//!
//! The component form has noise only in the `a` equation with coefficients
//! depending on `b` alone, so the Itô correction vanishes and Euler-Maruyama
//! (on top of an RK4 drift substep) is exact in the scheme sense.  The
//! isospectral flow has state-dependent diffusion and must be stepped with
//! Stratonovich Heun.

use crate::error::TodaError;
use crate::integrate::rk4_step;
use crate::lattice::{toda_drift_flaschka, toda_drift_physical, FlaschkaState, PhysicalState};
use crate::matrix::{coad_r, commutator, DenseSquare, SymTridiag};
use crate::noise::{NoiseConfig, SdeScheme, WienerDriver};

/// Stochastic potential `Phi_i = tr(L^T sigma_i e_i) = 2 sigma_i b_i`
/// (1-based bond index).
pub fn stochastic_potential(l: &SymTridiag, i: usize, cfg: &NoiseConfig) -> Result<f64, TodaError> {
    let max = l.n() - 1;
    if i < 1 || i > max || i > cfg.n_bonds() {
        return Err(TodaError::IndexOutOfRange { index: i, max });
    }
    Ok(2.0 * cfg.sigma()[i - 1] * l.off()[i - 1])
}

/// Add the bond-noise contribution to the `a` components:
/// `da_i += 2 sigma_{i-1} b_{i-1} dW^{i-1} - 2 sigma_i b_i dW^i`,
/// with `b` frozen at the start-of-step values (Itô point).
pub(crate) fn apply_bond_noise_a(a: &mut [f64], b0: &[f64], cfg: &NoiseConfig, dw: &[f64]) {
    let n = a.len();
    debug_assert_eq!(b0.len(), n - 1);
    debug_assert_eq!(dw.len(), n - 1);
    debug_assert_eq!(cfg.n_bonds(), n - 1);
    let sigma = cfg.sigma();
    for i in 0..n {
        let mut d = 0.0;
        if i > 0 {
            d += 2.0 * sigma[i - 1] * b0[i - 1] * dw[i - 1];
        }
        if i < n - 1 {
            d -= 2.0 * sigma[i] * b0[i] * dw[i];
        }
        a[i] += d;
    }
}

fn check_finite_flaschka(f: &FlaschkaState, dt: f64) -> Result<(), TodaError> {
    if f.is_finite() {
        Ok(())
    } else {
        Err(TodaError::NonFinite { t: dt })
    }
}

/// One step of the component stochastic Toda lattice: RK4 on the
/// deterministic drift, then the bond-noise increment on `a`.
/// With all sigma = 0 this is bit-identical to the deterministic RK4 step.
pub fn stochastic_toda_step_with(
    f: &FlaschkaState,
    cfg: &NoiseConfig,
    dt: f64,
    dw: &[f64],
) -> Result<FlaschkaState, TodaError> {
    let n = f.n();
    let drift = |v: &[f64]| toda_drift_flaschka(&FlaschkaState::from_slice(n, v)).to_vec();
    let stepped = rk4_step(&drift, &f.to_vec(), dt);
    let mut out = FlaschkaState::from_slice(n, &stepped);
    if !cfg.is_zero() {
        apply_bond_noise_a(&mut out.a, &f.b, cfg, dw);
    }
    check_finite_flaschka(&out, dt)?;
    Ok(out)
}

pub fn stochastic_toda_step(
    f: &FlaschkaState,
    cfg: &NoiseConfig,
    dt: f64,
    driver: &mut WienerDriver,
) -> Result<FlaschkaState, TodaError> {
    let dw = driver.increments(f.n() - 1, dt);
    stochastic_toda_step_with(f, cfg, dt, &dw)
}

/// Matrix form of the same flow: RK4 on `dL = -[pi_q L, L]`, then the noise
/// increment `sum_i coad_r(sigma_i e_i, L_0) dW^i` with `L_0` the
/// start-of-step matrix.  Stays on the tridiagonal orbit.
pub fn stochastic_toda_matrix_step_with(
    l: &DenseSquare,
    cfg: &NoiseConfig,
    dt: f64,
    dw: &[f64],
) -> Result<DenseSquare, TodaError> {
    let n = l.n();
    let drift = |v: &[f64]| {
        let m = DenseSquare::from_vec(n, v.to_vec());
        commutator(&m, &m.pi_q()).into_vec()
    };
    let stepped = rk4_step(&drift, l.data(), dt);
    let mut out = DenseSquare::from_vec(n, stepped);
    if !cfg.is_zero() {
        for i in 0..n - 1 {
            let s = cfg.sigma()[i];
            if s == 0.0 {
                continue;
            }
            let e = DenseSquare::unit_offdiag_pair(n, i);
            out = out.add(&coad_r(&e, l).scale(s * dw[i]));
        }
    }
    if !out.is_finite() {
        return Err(TodaError::NonFinite { t: dt });
    }
    Ok(out)
}

pub fn stochastic_toda_matrix_step(
    l: &DenseSquare,
    cfg: &NoiseConfig,
    dt: f64,
    driver: &mut WienerDriver,
) -> Result<DenseSquare, TodaError> {
    let dw = driver.increments(l.n() - 1, dt);
    stochastic_toda_matrix_step_with(l, cfg, dt, &dw)
}

/// Physical form: RK4 on the canonical drift, then multiplicative noise in
/// the momentum equation only.  The noise signs are the image of the
/// component form under `a = -y/2`, so pathwise mapping through the Flaschka
/// change of variables reproduces the component step with the same
/// increments; `W` and `-W` being equal in law, this matches the published
/// equation in distribution.
pub fn stochastic_toda_physical_step_with(
    s: &PhysicalState,
    cfg: &NoiseConfig,
    dt: f64,
    dw: &[f64],
) -> Result<PhysicalState, TodaError> {
    let n = s.n();
    let drift = |v: &[f64]| toda_drift_physical(&PhysicalState::from_slice(n, v)).to_vec();
    let stepped = rk4_step(&drift, &s.to_vec(), dt);
    let mut out = PhysicalState::from_slice(n, &stepped);
    if !cfg.is_zero() {
        let sigma = cfg.sigma();
        // exp((x_{i+1} - x_i)/2) = 2 b_i at the start of the step
        let half_gap_exp: Vec<f64> = (0..n - 1)
            .map(|i| ((s.x[i + 1] - s.x[i]) / 2.0).exp())
            .collect();
        for i in 0..n {
            let mut d = 0.0;
            if i > 0 {
                d -= 2.0 * sigma[i - 1] * half_gap_exp[i - 1] * dw[i - 1];
            }
            if i < n - 1 {
                d += 2.0 * sigma[i] * half_gap_exp[i] * dw[i];
            }
            out.y[i] += d;
        }
    }
    if !out.x.iter().chain(out.y.iter()).all(|v| v.is_finite()) {
        return Err(TodaError::NonFinite { t: dt });
    }
    Ok(out)
}

pub fn stochastic_toda_physical_step(
    s: &PhysicalState,
    cfg: &NoiseConfig,
    dt: f64,
    driver: &mut WienerDriver,
) -> Result<PhysicalState, TodaError> {
    let dw = driver.increments(s.n() - 1, dt);
    stochastic_toda_physical_step_with(s, cfg, dt, &dw)
}

/// Diffusion matrices `(R sigma_i e_i)^T` of the isospectral flow.
fn iso_noise_mats(n: usize, cfg: &NoiseConfig) -> Vec<DenseSquare> {
    (0..n - 1)
        .map(|i| {
            DenseSquare::unit_offdiag_pair(n, i)
                .r_map()
                .transpose()
                .scale(cfg.sigma()[i])
        })
        .collect()
}

fn iso_drift(l: &DenseSquare) -> DenseSquare {
    commutator(&l.pi_q(), l).scale(-1.0)
}

/// One Stratonovich Heun step of the isospectral flow
/// `dL = -[pi_q L, L] dt + sum_i [(R sigma_i)^T, L] o dW^i`.
pub fn isospectral_step_with(
    l: &DenseSquare,
    cfg: &NoiseConfig,
    dt: f64,
    dw: &[f64],
) -> Result<DenseSquare, TodaError> {
    let n = l.n();
    let mats = iso_noise_mats(n, cfg);
    let diffusion = |m: &DenseSquare| -> DenseSquare {
        let mut acc = DenseSquare::zeros(n);
        for (k, g) in mats.iter().enumerate() {
            if cfg.sigma()[k] == 0.0 {
                continue;
            }
            acc = acc.add(&commutator(g, m).scale(dw[k]));
        }
        acc
    };
    let f0 = iso_drift(l);
    let g0 = diffusion(l);
    let pred = l.add(&f0.scale(dt)).add(&g0);
    let f1 = iso_drift(&pred);
    let g1 = diffusion(&pred);
    let out = l
        .add(&f0.add(&f1).scale(0.5 * dt))
        .add(&g0.add(&g1).scale(0.5));
    if !out.is_finite() {
        return Err(TodaError::NonFinite { t: dt });
    }
    Ok(out)
}

/// Scheme-checked entry point; Euler-Maruyama is rejected because the
/// diffusion here depends on `L`.
pub fn isospectral_step(
    l: &DenseSquare,
    cfg: &NoiseConfig,
    dt: f64,
    driver: &mut WienerDriver,
    scheme: SdeScheme,
) -> Result<DenseSquare, TodaError> {
    if scheme != SdeScheme::StratonovichHeun {
        return Err(TodaError::SchemeMismatch(
            "isospectral flow has state-dependent diffusion; use StratonovichHeun".into(),
        ));
    }
    let dw = driver.increments(l.n() - 1, dt);
    isospectral_step_with(l, cfg, dt, &dw)
}

fn apply_mat_vec(m: &DenseSquare, v: &[f64]) -> Vec<f64> {
    let n = m.n();
    (0..n)
        .map(|i| (0..n).map(|j| m.get(i, j) * v[j]).sum())
        .collect()
}

/// Joint Stratonovich Heun step of the isospectral flow and its
/// eigenfunction `d psi = -pi_q L psi dt + sum_i (R sigma_i)^T psi o dW^i`,
/// driven by one shared set of increments.
pub fn eigenfunction_pair_step_with(
    l: &DenseSquare,
    psi: &[f64],
    cfg: &NoiseConfig,
    dt: f64,
    dw: &[f64],
) -> Result<(DenseSquare, Vec<f64>), TodaError> {
    let n = l.n();
    assert_eq!(psi.len(), n);
    let mats = iso_noise_mats(n, cfg);

    let drift = |m: &DenseSquare, v: &[f64]| -> (DenseSquare, Vec<f64>) {
        let fv = apply_mat_vec(&m.pi_q(), v).iter().map(|x| -x).collect();
        (iso_drift(m), fv)
    };
    let diffusion = |m: &DenseSquare, v: &[f64]| -> (DenseSquare, Vec<f64>) {
        let mut dm = DenseSquare::zeros(n);
        let mut dv = vec![0.0; n];
        for (k, g) in mats.iter().enumerate() {
            if cfg.sigma()[k] == 0.0 {
                continue;
            }
            dm = dm.add(&commutator(g, m).scale(dw[k]));
            for (dvi, gv) in dv.iter_mut().zip(apply_mat_vec(g, v)) {
                *dvi += gv * dw[k];
            }
        }
        (dm, dv)
    };

    let (fl0, fp0) = drift(l, psi);
    let (gl0, gp0) = diffusion(l, psi);
    let lp = l.add(&fl0.scale(dt)).add(&gl0);
    let pp: Vec<f64> = (0..n).map(|i| psi[i] + fp0[i] * dt + gp0[i]).collect();
    let (fl1, fp1) = drift(&lp, &pp);
    let (gl1, gp1) = diffusion(&lp, &pp);
    let l_out = l
        .add(&fl0.add(&fl1).scale(0.5 * dt))
        .add(&gl0.add(&gl1).scale(0.5));
    let psi_out: Vec<f64> = (0..n)
        .map(|i| psi[i] + 0.5 * dt * (fp0[i] + fp1[i]) + 0.5 * (gp0[i] + gp1[i]))
        .collect();
    if !l_out.is_finite() || !psi_out.iter().all(|v| v.is_finite()) {
        return Err(TodaError::NonFinite { t: dt });
    }
    Ok((l_out, psi_out))
}

/// Eigenfunction update paired with an `L` step on the same Wiener path.
pub fn eigenfunction_step(
    psi: &[f64],
    l: &DenseSquare,
    cfg: &NoiseConfig,
    dt: f64,
    dw: &[f64],
) -> Result<Vec<f64>, TodaError> {
    eigenfunction_pair_step_with(l, psi, cfg, dt, dw).map(|(_, p)| p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::build_l;
    use crate::matrix::trace_pairing;
    use crate::test_util::{assert_close, rand_flaschka};

    #[test]
    fn stochastic_potential_matches_trace_pairing() {
        let f = FlaschkaState::new(vec![0.4, -0.2, 0.9], vec![3.0, 0.7]).unwrap();
        let l = build_l(&f);
        let cfg = NoiseConfig::new(vec![1.0, 0.5], 0).unwrap();
        assert_eq!(stochastic_potential(&l, 1, &cfg).unwrap(), 6.0);
        // trace-pairing oracle
        for i in 1..=2usize {
            let e = DenseSquare::unit_offdiag_pair(3, i - 1).scale(cfg.sigma()[i - 1]);
            let want = trace_pairing(&l.to_dense(), &e).unwrap();
            assert_close(stochastic_potential(&l, i, &cfg).unwrap(), want, 1e-14);
        }
        assert!(stochastic_potential(&l, 0, &cfg).is_err());
        assert!(stochastic_potential(&l, 3, &cfg).is_err());
    }

    #[test]
    fn stochastic_potential_zero_bond() {
        let f = FlaschkaState::new(vec![0.0, 0.0], vec![1e-300]).unwrap();
        let l = build_l(&f);
        let cfg = NoiseConfig::uniform(2, 1.0, 0).unwrap();
        assert!(stochastic_potential(&l, 1, &cfg).unwrap().abs() < 1e-299);
    }

    #[test]
    fn zero_noise_reduces_to_deterministic_step() {
        let mut rng = 50u64;
        let f = rand_flaschka(5, &mut rng);
        let cfg = NoiseConfig::uniform(5, 0.0, 1).unwrap();
        let mut driver = WienerDriver::new(1, 0);
        let noisy = stochastic_toda_step(&f, &cfg, 1e-3, &mut driver).unwrap();
        let n = f.n();
        let drift = |v: &[f64]| toda_drift_flaschka(&FlaschkaState::from_slice(n, v)).to_vec();
        let det = rk4_step(&drift, &f.to_vec(), 1e-3);
        assert_eq!(noisy.to_vec(), det);
    }

    #[test]
    fn trace_conserved_every_step() {
        let mut rng = 51u64;
        let f = rand_flaschka(4, &mut rng);
        let cfg = NoiseConfig::uniform(4, 0.3, 9).unwrap();
        let mut driver = WienerDriver::new(9, 0);
        let mut state = f.clone();
        let tr0: f64 = state.a.iter().sum();
        let max_a = state.a.iter().fold(0.0_f64, |m, v| m.max(v.abs())).max(1.0);
        for _ in 0..1000 {
            state = stochastic_toda_step(&state, &cfg, 1e-3, &mut driver).unwrap();
            let tr: f64 = state.a.iter().sum();
            assert!((tr - tr0).abs() < 1e-13 * 4.0 * max_a);
        }
    }

    #[test]
    fn single_step_variance_matches_ito_isometry() {
        // da_i variance ~ 4 (sigma_{i-1}^2 b_{i-1}^2 + sigma_i^2 b_i^2) dt
        let f = FlaschkaState::new(vec![0.1, -0.3, 0.2, 0.0], vec![0.8, 0.5, 1.1]).unwrap();
        let sigma = [0.4, 0.7, 0.2];
        let cfg = NoiseConfig::new(sigma.to_vec(), 0).unwrap();
        let dt = 0.01;
        let n_samples = 100_000usize;
        let n = f.n();
        let base = {
            let cfg0 = NoiseConfig::uniform(n, 0.0, 0).unwrap();
            let mut d = WienerDriver::new(0, 0);
            stochastic_toda_step(&f, &cfg0, dt, &mut d).unwrap()
        };
        let mut sum = vec![0.0; n];
        let mut sum2 = vec![0.0; n];
        for p in 0..n_samples {
            let mut d = WienerDriver::new(777, p as u64);
            let s = stochastic_toda_step(&f, &cfg, dt, &mut d).unwrap();
            for i in 0..n {
                let inc = s.a[i] - base.a[i];
                sum[i] += inc;
                sum2[i] += inc * inc;
            }
        }
        for i in 0..n {
            let mean = sum[i] / n_samples as f64;
            let var = sum2[i] / n_samples as f64 - mean * mean;
            let bl = if i > 0 { sigma[i - 1] * f.b[i - 1] } else { 0.0 };
            let br = if i < n - 1 { sigma[i] * f.b[i] } else { 0.0 };
            let want = 4.0 * (bl * bl + br * br) * dt;
            assert!(
                (var - want).abs() < 0.05 * want,
                "site {i}: var {var} vs {want}"
            );
        }
    }

    #[test]
    fn matrix_form_agrees_with_component_form_pathwise() {
        let mut rng = 53u64;
        let f = rand_flaschka(4, &mut rng);
        let cfg = NoiseConfig::uniform(4, 0.25, 11).unwrap();
        let dt = 1e-3;
        let mut comp = f.clone();
        let mut mat = build_l(&f).to_dense();
        let mut d1 = WienerDriver::new(11, 0);
        let mut d2 = WienerDriver::new(11, 0);
        for _ in 0..1000 {
            comp = stochastic_toda_step(&comp, &cfg, dt, &mut d1).unwrap();
            mat = stochastic_toda_matrix_step(&mat, &cfg, dt, &mut d2).unwrap();
        }
        for i in 0..4 {
            assert_close(mat.get(i, i), comp.a[i], 1e-10);
        }
        for i in 0..3 {
            assert_close(mat.get(i, i + 1), comp.b[i], 1e-10);
        }
    }

    #[test]
    fn matrix_form_stays_on_orbit() {
        let mut rng = 57u64;
        let f = rand_flaschka(4, &mut rng);
        let cfg = NoiseConfig::uniform(4, 0.2, 3).unwrap();
        let mut mat = build_l(&f).to_dense();
        let mut d = WienerDriver::new(3, 0);
        for _ in 0..2000 {
            mat = stochastic_toda_matrix_step(&mat, &cfg, 1e-3, &mut d).unwrap();
            for i in 0usize..4 {
                for j in 0..4 {
                    if i.abs_diff(j) >= 2 {
                        assert!(mat.get(i, j).abs() < 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn coad_r_noise_coefficient_shape() {
        // coad_r(e_i, L) is diagonal: -2 b_i at (i,i), +2 b_i at (i+1,i+1)
        let f = FlaschkaState::new(vec![0.7, -0.2, 0.4], vec![0.9, 0.3]).unwrap();
        let l = build_l(&f).to_dense();
        for i in 0..2usize {
            let d = coad_r(&DenseSquare::unit_offdiag_pair(3, i), &l);
            for r in 0..3 {
                for c in 0..3 {
                    let want = if r == c && r == i {
                        -2.0 * f.b[i]
                    } else if r == c && r == i + 1 {
                        2.0 * f.b[i]
                    } else {
                        0.0
                    };
                    assert_close(d.get(r, c), want, 1e-13);
                }
            }
        }
    }

    #[test]
    fn physical_form_maps_to_component_form_pathwise() {
        use crate::lattice::{flaschka_from_physical, physical_from_flaschka};
        let mut rng = 59u64;
        let f = rand_flaschka(4, &mut rng);
        let s0 = physical_from_flaschka(&f, 0.0).unwrap();
        let cfg = NoiseConfig::uniform(4, 0.3, 21).unwrap();
        let dt = 1e-3;
        let mut s = s0;
        let mut comp = f;
        let mut d1 = WienerDriver::new(21, 0);
        let mut d2 = WienerDriver::new(21, 0);
        let sum_y0: f64 = s.y.iter().sum();
        for _ in 0..500 {
            s = stochastic_toda_physical_step(&s, &cfg, dt, &mut d1).unwrap();
            comp = stochastic_toda_step(&comp, &cfg, dt, &mut d2).unwrap();
            let sum_y: f64 = s.y.iter().sum();
            assert!((sum_y - sum_y0).abs() < 1e-11, "momentum drifted");
        }
        let fb = flaschka_from_physical(&s).unwrap();
        for i in 0..4 {
            // RK4 is applied in different coordinates, so agreement is up to
            // scheme error, not bitwise
            assert_close(fb.a[i], comp.a[i], 1e-6);
        }
        for i in 0..3 {
            assert_close(fb.b[i], comp.b[i], 1e-6);
        }
    }

    #[test]
    fn isospectral_rejects_euler_maruyama() {
        let f = FlaschkaState::new(vec![0.0, 0.0], vec![0.5]).unwrap();
        let l = build_l(&f).to_dense();
        let cfg = NoiseConfig::uniform(2, 0.1, 0).unwrap();
        let mut d = WienerDriver::new(0, 0);
        assert!(matches!(
            isospectral_step(&l, &cfg, 1e-3, &mut d, SdeScheme::EulerMaruyama),
            Err(TodaError::SchemeMismatch(_))
        ));
    }

    #[test]
    fn isospectral_conserves_traces_approximately() {
        let mut rng = 61u64;
        let f = rand_flaschka(3, &mut rng);
        let l0 = build_l(&f).to_dense();
        let cfg = NoiseConfig::uniform(3, 0.2, 5).unwrap();
        let mut l = l0.clone();
        let mut d = WienerDriver::new(5, 0);
        let dt = 1e-4;
        for _ in 0..10_000 {
            l = isospectral_step(&l, &cfg, dt, &mut d, SdeScheme::StratonovichHeun).unwrap();
        }
        for k in 1..=3usize {
            let tr = |m: &DenseSquare| {
                let mut p = m.clone();
                for _ in 1..k {
                    p = p.matmul(m);
                }
                p.trace()
            };
            assert_close(tr(&l), tr(&l0), 2e-3);
        }
    }

    #[test]
    fn isospectral_leaves_tridiagonal_band() {
        let mut rng = 63u64;
        let f = rand_flaschka(3, &mut rng);
        let mut l = build_l(&f).to_dense();
        let cfg = NoiseConfig::uniform(3, 0.2, 6).unwrap();
        let mut d = WienerDriver::new(6, 0);
        for _ in 0..1000 {
            l = isospectral_step(&l, &cfg, 1e-3, &mut d, SdeScheme::StratonovichHeun).unwrap();
        }
        let mut off_band = 0.0_f64;
        for i in 0usize..3 {
            for j in 0..3 {
                if i.abs_diff(j) >= 2 {
                    off_band = off_band.max(l.get(i, j).abs());
                }
            }
        }
        assert!(off_band > 1e-6, "orbit unexpectedly preserved: {off_band}");
    }

    #[test]
    fn eigenfunction_zero_stays_zero() {
        let f = FlaschkaState::new(vec![0.1, -0.1], vec![0.4]).unwrap();
        let l = build_l(&f).to_dense();
        let cfg = NoiseConfig::uniform(2, 0.3, 0).unwrap();
        let dw = WienerDriver::increments_at(0, 0, 0, 1, 1e-3);
        let psi = eigenfunction_step(&[0.0, 0.0], &l, &cfg, 1e-3, &dw).unwrap();
        assert_eq!(psi, vec![0.0, 0.0]);
    }

    #[test]
    fn deterministic_eigenfunction_residual_stays_small() {
        // sigma = 0, psi an exact eigenvector of a 2x2 Lax matrix
        let f = FlaschkaState::new(vec![0.0, 0.0], vec![1.0]).unwrap();
        let l0 = build_l(&f).to_dense();
        // eigenvalue +1, eigenvector (1, 1)/sqrt(2)
        let s = 1.0 / 2.0_f64.sqrt();
        let mut psi = vec![s, s];
        let lambda = 1.0;
        let cfg = NoiseConfig::uniform(2, 0.0, 0).unwrap();
        let dt = 1e-4;
        let mut l = l0;
        for _ in 0..10_000 {
            let dw = vec![0.0];
            let (l2, p2) = eigenfunction_pair_step_with(&l, &psi, &cfg, dt, &dw).unwrap();
            l = l2;
            psi = p2;
        }
        let res: f64 = (0..2)
            .map(|i| {
                let lv: f64 = (0..2).map(|j| l.get(i, j) * psi[j]).sum();
                (lv - lambda * psi[i]).powi(2)
            })
            .sum::<f64>()
            .sqrt();
        assert!(res < 1e-6, "residual {res}");
    }
}
