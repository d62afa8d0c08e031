//! Lie-algebra operations behind the QL splitting of gl(n).
//!
//! The splitting separates a square matrix into its antisymmetric part built
//! from the strict upper triangle (`pi_q`) and the complementary lower
//! triangular part (`pi_l`).  Subscript conventions throughout: `+` is the
//! strict upper triangle, `-` the strict lower triangle, `0` the diagonal.
//! The classical R-matrix of this splitting is `R = pi_q - 1/2`; its adjoint
//! under the Frobenius pairing `<x, y> = tr(x^T y)` is `R* = pi_lperp - 1/2`.
//!
//! Also hosts the symmetric tridiagonal container and a Sturm-sequence
//! bisection eigensolver for it.

use crate::error::TodaError;

/// Dense real n-by-n matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseSquare {
    n: usize,
    data: Vec<f64>,
}

impl DenseSquare {
    pub fn zeros(n: usize) -> Self {
        assert!(n > 0, "matrix dimension must be positive");
        Self {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.set(i, i, 1.0);
        }
        m
    }

    /// Elementary symmetric off-diagonal pair: ones at (i, i+1) and (i+1, i),
    /// zero elsewhere.  `i` is zero-based, `i < n - 1`.
    pub fn unit_offdiag_pair(n: usize, i: usize) -> Self {
        assert!(i + 1 < n);
        let mut m = Self::zeros(n);
        m.set(i, i + 1, 1.0);
        m.set(i + 1, i, 1.0);
        m
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        let n = rows.len();
        assert!(n > 0 && rows.iter().all(|r| r.len() == n), "not square");
        let mut data = Vec::with_capacity(n * n);
        for r in rows {
            data.extend_from_slice(r);
        }
        Self { n, data }
    }

    pub fn from_vec(n: usize, data: Vec<f64>) -> Self {
        assert_eq!(data.len(), n * n);
        Self { n, data }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n + j] = v;
    }

    pub fn transpose(&self) -> Self {
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.set(j, i, self.get(i, j));
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a + b)
            .collect();
        Self { n: self.n, data }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a - b)
            .collect();
        Self { n: self.n, data }
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            n: self.n,
            data: self.data.iter().map(|a| a * s).collect(),
        }
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let aik = self.get(i, k);
                if aik == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += aik * other.get(k, j);
                }
            }
        }
        out
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    /// Strict upper triangle (`+` part).
    pub fn strict_upper(&self) -> Self {
        let mut out = Self::zeros(self.n);
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                out.set(i, j, self.get(i, j));
            }
        }
        out
    }

    /// Strict lower triangle (`-` part).
    pub fn strict_lower(&self) -> Self {
        let mut out = Self::zeros(self.n);
        for i in 0..self.n {
            for j in 0..i {
                out.set(i, j, self.get(i, j));
            }
        }
        out
    }

    /// Diagonal (`0` part).
    pub fn diagonal_part(&self) -> Self {
        let mut out = Self::zeros(self.n);
        for i in 0..self.n {
            out.set(i, i, self.get(i, i));
        }
        out
    }

    /// Projection onto so(n): `pi_q(x) = x_+ - x_+^T`.
    pub fn pi_q(&self) -> Self {
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in (i + 1)..n {
                let v = self.get(i, j);
                out.set(i, j, v);
                out.set(j, i, -v);
            }
        }
        out
    }

    /// Complementary projection: `pi_l(x) = x_- + x_0 + x_+^T`.
    pub fn pi_l(&self) -> Self {
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            out.set(i, i, self.get(i, i));
            for j in 0..i {
                out.set(i, j, self.get(i, j) + self.get(j, i));
            }
        }
        out
    }

    /// `pi_lperp(x) = x_+ - x_-^T` (adjoint of `pi_q` under the trace pairing).
    pub fn pi_lperp(&self) -> Self {
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in (i + 1)..n {
                out.set(i, j, self.get(i, j) - self.get(j, i));
            }
        }
        out
    }

    /// `pi_qperp(x) = x_- + x_0 + x_-^T` (adjoint of `pi_l`).
    pub fn pi_qperp(&self) -> Self {
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            out.set(i, i, self.get(i, i));
            for j in 0..i {
                let v = self.get(i, j);
                out.set(i, j, v);
                out.set(j, i, v);
            }
        }
        out
    }

    /// Classical R-matrix of the QL splitting: `R = pi_q - 1/2`.
    pub fn r_map(&self) -> Self {
        self.pi_q().sub(&self.scale(0.5))
    }

    /// Trace-pairing adjoint of `r_map`: `R* = pi_lperp - 1/2`.
    ///
    /// Note this differs from naively dualizing the projections one by one;
    /// it is forced by `<x, R y> = <R* x, y>` together with `pi_q* = pi_lperp`.
    pub fn r_star(&self) -> Self {
        self.pi_lperp().sub(&self.scale(0.5))
    }
}

/// Frobenius inner product `tr(a^T b)`.
pub fn trace_pairing(a: &DenseSquare, b: &DenseSquare) -> Result<f64, TodaError> {
    if a.n != b.n {
        return Err(TodaError::DimensionMismatch(a.n, b.n));
    }
    Ok(a.data.iter().zip(&b.data).map(|(x, y)| x * y).sum())
}

/// Matrix commutator `[a, b] = ab - ba`.
pub fn commutator(a: &DenseSquare, b: &DenseSquare) -> DenseSquare {
    a.matmul(b).sub(&b.matmul(a))
}

/// R-bracket `[x, y]_R = [Rx, y] + [x, Ry]`.
pub fn r_bracket(x: &DenseSquare, y: &DenseSquare) -> DenseSquare {
    commutator(&x.r_map(), y).add(&commutator(x, &y.r_map()))
}

/// Coadjoint operator of the R-bracket under the trace pairing:
/// `coad_r(x, m) = [(Rx)^T, m] + R*([x^T, m])`,
/// satisfying `<coad_r(x, m), y> = <m, [x, y]_R>` for all y.
pub fn coad_r(x: &DenseSquare, m: &DenseSquare) -> DenseSquare {
    let first = commutator(&x.r_map().transpose(), m);
    let second = commutator(&x.transpose(), m).r_star();
    first.add(&second)
}

/// Symmetric tridiagonal matrix: diagonal `a_1..a_n`, off-diagonal
/// `b_1..b_{n-1}` mirrored above and below.
#[derive(Clone, Debug, PartialEq)]
pub struct SymTridiag {
    diag: Vec<f64>,
    off: Vec<f64>,
}

impl SymTridiag {
    pub fn new(diag: Vec<f64>, off: Vec<f64>) -> Result<Self, TodaError> {
        if diag.is_empty() || off.len() + 1 != diag.len() {
            return Err(TodaError::DimensionMismatch(diag.len(), off.len() + 1));
        }
        if !diag.iter().chain(off.iter()).all(|v| v.is_finite()) {
            return Err(TodaError::InvalidState(
                "non-finite tridiagonal entry".into(),
            ));
        }
        Ok(Self { diag, off })
    }

    pub fn n(&self) -> usize {
        self.diag.len()
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn off(&self) -> &[f64] {
        &self.off
    }

    pub fn to_dense(&self) -> DenseSquare {
        let n = self.n();
        let mut m = DenseSquare::zeros(n);
        for i in 0..n {
            m.set(i, i, self.diag[i]);
        }
        for i in 0..n - 1 {
            m.set(i, i + 1, self.off[i]);
            m.set(i + 1, i, self.off[i]);
        }
        m
    }

    /// Extract the tridiagonal content of a dense matrix, rejecting it when
    /// any entry outside the band (or any asymmetry) exceeds `tol`.
    pub fn from_dense(m: &DenseSquare, tol: f64) -> Result<Self, TodaError> {
        let n = m.n();
        for i in 0..n {
            for j in 0..n {
                if i.abs_diff(j) >= 2 && m.get(i, j).abs() > tol {
                    return Err(TodaError::InvalidState(format!(
                        "entry ({i},{j}) = {} outside tridiagonal band",
                        m.get(i, j)
                    )));
                }
            }
        }
        for i in 0..n - 1 {
            if (m.get(i, i + 1) - m.get(i + 1, i)).abs() > tol {
                return Err(TodaError::InvalidState(format!(
                    "asymmetric off-diagonal at ({i},{})",
                    i + 1
                )));
            }
        }
        let diag = (0..n).map(|i| m.get(i, i)).collect();
        let off = (0..n - 1).map(|i| m.get(i, i + 1)).collect();
        Self::new(diag, off)
    }

    /// Number of eigenvalues strictly below `x`, via the Sturm sequence of
    /// leading principal minors (LDL^T pivot recurrence).
    fn sturm_count(&self, x: f64) -> usize {
        let mut count = 0usize;
        let mut q = self.diag[0] - x;
        if q < 0.0 {
            count += 1;
        }
        for i in 1..self.n() {
            let b2 = self.off[i - 1] * self.off[i - 1];
            if q == 0.0 {
                // shift a zero pivot off the singularity
                q = f64::MIN_POSITIVE;
            }
            q = (self.diag[i] - x) - b2 / q;
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// All eigenvalues in nondecreasing order, each within `tol` of a true
    /// eigenvalue.  Bisection on Sturm counts inside the Gershgorin interval.
    pub fn eigenvalues(&self, tol: f64) -> Vec<f64> {
        assert!(tol > 0.0, "tolerance must be positive");
        let n = self.n();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let r = if i > 0 { self.off[i - 1].abs() } else { 0.0 }
                + if i < n - 1 { self.off[i].abs() } else { 0.0 };
            lo = lo.min(self.diag[i] - r);
            hi = hi.max(self.diag[i] + r);
        }
        // widen so the endpoints are strictly outside the spectrum
        let pad = (hi - lo).max(1.0) * 1e-12 + tol;
        lo -= pad;
        hi += pad;

        let mut eigs = Vec::with_capacity(n);
        for k in 0..n {
            let mut a = lo;
            let mut b = hi;
            // bisection terminates: the interval halves every pass
            for _ in 0..4096 {
                if b - a <= tol {
                    break;
                }
                let mid = 0.5 * (a + b);
                if mid <= a || mid >= b {
                    break;
                }
                if self.sturm_count(mid) > k {
                    b = mid;
                } else {
                    a = mid;
                }
            }
            eigs.push(0.5 * (a + b));
        }
        eigs
    }
}
