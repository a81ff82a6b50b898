//! Numerical inverse Laplace transform.
//!
//! The Bromwich integral is discretized on an extended window `T = 2·tm`
//! with damping abscissa `c = α − ln(rel_err)/T`. With `N = 2m` frequency
//! samples `s_n = c + j·n·2π/T`, the time samples `t_k = k·tm/m` are
//!
//! ```text
//! h(t_k) ≈ (e^(c·t_k) / T) · [2·Re Σ_n F(s_n)·e^(j2πnk/N) − F(c)]
//! ```
//!
//! where the sum over `n < N` is one inverse FFT. The remaining tail of the
//! series converges slowly when `h` jumps at `t = 0` (any `F ~ 1/s` at
//! infinity), so a few extra terms past `N` are appended per time sample and
//! the partial sums are extrapolated with Wynn's epsilon algorithm.
//!
//! Only the first half of the window (`t ≤ tm`) is returned, and the last
//! 20% of that is still exposed to aliasing; accuracy is validated on
//! `[dt, 0.8·tm]`. Sample `t = 0` is never returned.

use num_complex::Complex64;
use rustfft::FftPlanner;
use std::f64::consts::PI;

use crate::error::{IridError, Result};
use crate::lti::TimeSeries;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NiltConfig {
    /// End of the returned window in seconds.
    pub tm: f64,
    /// Number of returned samples; a power of two, at least 64.
    pub m: usize,
    /// Abscissa shift; must exceed the real part of every singularity of F.
    pub alpha: f64,
    /// Target relative aliasing error.
    pub rel_err: f64,
    /// Extra series terms fed to the epsilon accelerator (even; 0 disables).
    pub accel_terms: usize,
}

impl Default for NiltConfig {
    fn default() -> Self {
        Self {
            tm: 1.0,
            m: 1024,
            alpha: 0.0,
            rel_err: 1e-8,
            accel_terms: 4,
        }
    }
}

impl NiltConfig {
    pub fn new(tm: f64, m: usize) -> Result<Self> {
        let cfg = Self {
            tm,
            m,
            ..Self::default()
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_alpha(mut self, alpha: f64) -> Self {
        self.alpha = alpha;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tm > 0.0 && self.tm.is_finite()) {
            return Err(IridError::Config(format!(
                "tm must be positive and finite, got {}",
                self.tm
            )));
        }
        if self.m < 64 || !self.m.is_power_of_two() {
            return Err(IridError::Config(format!(
                "sample count must be a power of two >= 64, got {}",
                self.m
            )));
        }
        if !(self.alpha >= 0.0 && self.alpha.is_finite()) {
            return Err(IridError::Config(format!(
                "alpha must be finite and >= 0, got {}",
                self.alpha
            )));
        }
        if !(self.rel_err > 0.0 && self.rel_err < 1.0) {
            return Err(IridError::Config(format!(
                "rel_err must lie in (0, 1), got {}",
                self.rel_err
            )));
        }
        if !self.accel_terms.is_multiple_of(2) {
            return Err(IridError::Config(format!(
                "accel_terms must be even, got {}",
                self.accel_terms
            )));
        }
        Ok(())
    }

    pub fn dt(&self) -> f64 {
        self.tm / self.m as f64
    }

    fn period(&self) -> f64 {
        2.0 * self.tm
    }

    fn abscissa(&self) -> f64 {
        self.alpha - self.rel_err.ln() / self.period()
    }

    fn node(&self, n: usize) -> Complex64 {
        Complex64::new(self.abscissa(), n as f64 * 2.0 * PI / self.period())
    }
}

/// Evaluates `f` at `s_0 .. s_{count-1}`, rejecting non-finite values.
fn sample_transform<F>(f: &F, cfg: &NiltConfig, count: usize) -> Result<Vec<Complex64>>
where
    F: Fn(Complex64) -> Complex64,
{
    (0..count)
        .map(|n| {
            let s = cfg.node(n);
            let v = f(s);
            if v.is_finite() {
                Ok(v)
            } else {
                Err(IridError::Evaluation { re: s.re, im: s.im })
            }
        })
        .collect()
}

fn inverse_fft(mut buf: Vec<Complex64>) -> Vec<Complex64> {
    let mut planner = FftPlanner::<f64>::new();
    let fft = planner.plan_fft_inverse(buf.len());
    fft.process(&mut buf);
    buf
}

/// Inverts `f` on `t_k = k·tm/m`, `k = 1..=m`.
///
/// `f` must be analytic for `Re s > alpha` and satisfy `f(s̄) = conj(f(s))`.
/// If a singularity lies right of `alpha` the output is meaningless; this is
/// not detected.
pub fn nilt<F>(f: F, cfg: &NiltConfig) -> Result<TimeSeries>
where
    F: Fn(Complex64) -> Complex64,
{
    cfg.validate()?;
    let m = cfg.m;
    let n_fft = 2 * m;
    let samples = sample_transform(&f, cfg, n_fft + cfg.accel_terms)?;
    let head = inverse_fft(samples[..n_fft].to_vec());
    let tail = &samples[n_fft..];

    let c = cfg.abscissa();
    let period = cfg.period();
    let dt = cfg.dt();
    let f_c = samples[0].re;

    let mut partial = Vec::with_capacity(tail.len() + 1);
    let values = (1..=m)
        .map(|k| {
            let sum = if tail.is_empty() {
                head[k]
            } else {
                // e^(j2πk(N+i)/N) = e^(j2πki/N)
                let z = Complex64::from_polar(1.0, 2.0 * PI * k as f64 / n_fft as f64);
                partial.clear();
                partial.push(head[k]);
                let mut acc = head[k];
                let mut zp = Complex64::new(1.0, 0.0);
                for &term in tail {
                    acc += term * zp;
                    zp *= z;
                    partial.push(acc);
                }
                wynn_epsilon(&partial)
            };
            let t = k as f64 * dt;
            (c * t).exp() / period * (2.0 * sum.re - f_c)
        })
        .collect();
    TimeSeries::new(dt, dt, values)
}

/// Limit estimate of a sequence of partial sums by Wynn's epsilon algorithm.
///
/// Returns the highest even-order estimate reached before the table breaks
/// down on a vanishing difference (which means the sequence has converged).
pub fn wynn_epsilon(partial: &[Complex64]) -> Complex64 {
    let Some(&last) = partial.last() else {
        return Complex64::new(0.0, 0.0);
    };
    let mut best = last;
    let mut prev: Vec<Complex64> = vec![Complex64::new(0.0, 0.0); partial.len() + 1];
    let mut cur: Vec<Complex64> = partial.to_vec();
    for order in 1..partial.len() {
        let mut next = Vec::with_capacity(cur.len() - 1);
        for i in 0..cur.len() - 1 {
            let d = cur[i + 1] - cur[i];
            let scale = cur[i].norm().max(cur[i + 1].norm());
            if d.norm() <= f64::EPSILON * scale || d.norm() == 0.0 {
                return best;
            }
            next.push(prev[i + 1] + d.inv());
        }
        prev = cur;
        cur = next;
        if order % 2 == 0 {
            let est = cur[cur.len() - 1];
            if !est.is_finite() {
                return best;
            }
            best = est;
        }
    }
    best
}

/// Largest imaginary part of the two-sided reconstruction, relative to the
/// peak of the real part. Near zero for a conjugate-symmetric `f`.
///
/// The negative-frequency half is evaluated directly at `conj(s_n)` rather
/// than inferred from symmetry, so this checks the symmetry assumption.
pub fn imaginary_residue<F>(f: F, cfg: &NiltConfig) -> Result<f64>
where
    F: Fn(Complex64) -> Complex64,
{
    cfg.validate()?;
    let n_fft = 2 * cfg.m;
    let pos = sample_transform(&f, cfg, n_fft)?;
    let neg = sample_transform(&|s: Complex64| f(s.conj()), cfg, n_fft)?;
    let pos_sum = inverse_fft(pos);
    // Σ_{n≥1} F(s̄_n) e^(−j2πnk/N): a forward transform with the n=0 term removed
    let mut planner = FftPlanner::<f64>::new();
    let mut neg_buf = neg;
    neg_buf[0] = Complex64::new(0.0, 0.0);
    planner.plan_fft_forward(n_fft).process(&mut neg_buf);

    let c = cfg.abscissa();
    let period = cfg.period();
    let dt = cfg.dt();
    let mut peak = 0.0_f64;
    let mut worst = 0.0_f64;
    for k in 1..=cfg.m {
        let scale = (c * k as f64 * dt).exp() / period;
        let total = (pos_sum[k] + neg_buf[k]) * scale;
        peak = peak.max(total.re.abs());
        worst = worst.max(total.im.abs());
    }
    Ok(if peak > 0.0 { worst / peak } else { worst })
}
