//! Rational model fitting from a sampled impulse response.
//!
//! [`prony_init`] gives a one-shot linear-prediction fit, [`stmcb_fit`]
//! refines it with Steiglitz–McBride iterations, and [`bilinear_d2c`] maps
//! the discrete model to continuous time.

use nalgebra::{DMatrix, DVector};

use crate::error::{IridError, Result};
use crate::lti::{filter, ContinuousTransferFunction, DiscreteTransferFunction, Polynomial, TimeSeries};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitConfig {
    /// Numerator degree; the model has `nb + 1` numerator coefficients.
    pub nb: usize,
    /// Denominator degree.
    pub na: usize,
    pub iterations: usize,
    /// Ridge weight added to every least-squares solve.
    pub regularization: f64,
}

impl FitConfig {
    pub fn new(nb: usize, na: usize) -> Self {
        Self {
            nb,
            na,
            iterations: 5,
            regularization: 0.0,
        }
    }

    pub fn with_iterations(mut self, iterations: usize) -> Self {
        self.iterations = iterations;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.na < 1 {
            return Err(IridError::Config("denominator degree must be >= 1".into()));
        }
        if self.iterations < 1 {
            return Err(IridError::Config("need at least one iteration".into()));
        }
        if !(self.regularization >= 0.0 && self.regularization.is_finite()) {
            return Err(IridError::Config(format!(
                "regularization must be finite and >= 0, got {}",
                self.regularization
            )));
        }
        Ok(())
    }
}

/// Least squares `min ‖A x − b‖² + ridge·‖x‖²` by Householder QR.
fn least_squares(a: DMatrix<f64>, b: DVector<f64>, ridge: f64) -> Result<DVector<f64>> {
    let (rows, cols) = a.shape();
    let (a, b) = if ridge > 0.0 {
        let mut aa = DMatrix::<f64>::zeros(rows + cols, cols);
        aa.view_mut((0, 0), (rows, cols)).copy_from(&a);
        for i in 0..cols {
            aa[(rows + i, i)] = ridge.sqrt();
        }
        let mut bb = DVector::<f64>::zeros(rows + cols);
        bb.rows_mut(0, rows).copy_from(&b);
        (aa, bb)
    } else {
        (a, b)
    };
    let (rows, cols) = a.shape();
    if rows < cols {
        return Err(IridError::SingularSystem(format!(
            "{rows} equations for {cols} unknowns"
        )));
    }
    let qr = a.qr();
    let r = qr.r();
    let diag_max = (0..cols).fold(0.0_f64, |m, i| m.max(r[(i, i)].abs()));
    let tol = rows.max(cols) as f64 * f64::EPSILON * diag_max;
    if let Some(i) = (0..cols).find(|&i| r[(i, i)].abs() <= tol || r[(i, i)].is_nan()) {
        return Err(IridError::SingularSystem(format!(
            "rank deficient in column {i} (|R_ii| = {:e})",
            r[(i, i)].abs()
        )));
    }
    let mut qtb = b;
    qr.q_tr_mul(&mut qtb);
    let rhs = qtb.rows(0, cols).into_owned();
    r.solve_upper_triangular(&rhs)
        .ok_or_else(|| IridError::SingularSystem("triangular solve failed".into()))
}

fn sample(h: &[f64], idx: isize) -> f64 {
    if idx < 0 {
        0.0
    } else {
        h.get(idx as usize).copied().unwrap_or(0.0)
    }
}

fn prony_with_ridge(h: &TimeSeries, nb: usize, na: usize, ridge: f64) -> Result<DiscreteTransferFunction> {
    let x = h.values();
    let needed = nb + na + 2;
    if x.len() < needed {
        return Err(IridError::InsufficientData {
            needed,
            got: x.len(),
        });
    }
    let first = nb + 1;
    let rows = x.len() - first;
    let mut a = DMatrix::<f64>::zeros(rows, na);
    let mut rhs = DVector::<f64>::zeros(rows);
    for (r, n) in (first..x.len()).enumerate() {
        for i in 1..=na {
            a[(r, i - 1)] = sample(x, n as isize - i as isize);
        }
        rhs[r] = -x[n];
    }
    let coeffs = least_squares(a, rhs, ridge)?;

    let mut den = Vec::with_capacity(na + 1);
    den.push(1.0);
    den.extend(coeffs.iter());
    // b = (a * h) truncated to nb + 1 terms
    let num: Vec<f64> = (0..=nb)
        .map(|k| {
            den.iter()
                .enumerate()
                .map(|(i, ai)| ai * sample(x, k as isize - i as isize))
                .sum()
        })
        .collect();
    DiscreteTransferFunction::new(num, den, h.dt())
}

/// Linear-prediction (Prony) fit with `nb + 1` numerator and `na`
/// denominator coefficients; the denominator is monic.
pub fn prony_init(h: &TimeSeries, nb: usize, na: usize) -> Result<DiscreteTransferFunction> {
    prony_with_ridge(h, nb, na, 0.0)
}

/// Steiglitz–McBride fit of `B(z)/A(z)` to the impulse response `h`.
///
/// Each pass prefilters `h` and the unit impulse through `1/A_prev` (zero
/// initial state) and solves one joint least-squares problem for `B` and
/// `A` with `a0 = 1`. Unstable fits are returned as they are.
pub fn stmcb_fit(h: &TimeSeries, cfg: &FitConfig) -> Result<DiscreteTransferFunction> {
    cfg.validate()?;
    let x = h.values();
    let needed = 3 * (cfg.nb + cfg.na);
    if x.len() < needed {
        return Err(IridError::InsufficientData {
            needed,
            got: x.len(),
        });
    }
    let (nb, na) = (cfg.nb, cfg.na);
    let init = prony_with_ridge(h, nb, na, cfg.regularization)?;
    let mut den: Vec<f64> = init.den().coeffs()[..=na].to_vec();
    let mut num: Vec<f64> = init.num().coeffs()[..=nb].to_vec();

    let mut impulse = vec![0.0; x.len()];
    impulse[0] = 1.0;
    for iteration in 1..=cfg.iterations {
        let hf = filter(&[1.0], &den, x);
        let df = filter(&[1.0], &den, &impulse);
        let mut a = DMatrix::<f64>::zeros(x.len(), na + nb + 1);
        for n in 0..x.len() {
            for i in 1..=na {
                a[(n, i - 1)] = -sample(&hf, n as isize - i as isize);
            }
            for j in 0..=nb {
                a[(n, na + j)] = sample(&df, n as isize - j as isize);
            }
        }
        let sol = least_squares(a, DVector::from_vec(hf), cfg.regularization)?;
        if sol.iter().any(|v| !v.is_finite()) {
            return Err(IridError::NonFiniteIterate { iteration });
        }
        den = std::iter::once(1.0).chain(sol.rows(0, na).iter().copied()).collect();
        num = sol.rows(na, nb + 1).iter().copied().collect();
    }
    DiscreteTransferFunction::new(num, den, h.dt())
}

/// Bilinear (Tustin) map to continuous time: substitutes
/// `z = (1 + s·ts/2)/(1 − s·ts/2)` and clears denominators, so that
/// `Gc(s) = Gd(z(s))` wherever `1 − s·ts/2 ≠ 0`.
pub fn bilinear_d2c(g: &DiscreteTransferFunction) -> Result<ContinuousTransferFunction> {
    let den = g.den();
    let num = g.num();
    let scale: f64 = den.coeffs().iter().map(|c| c.abs()).sum();
    if den.eval_real(-1.0).abs() <= 1e-12 * scale {
        return Err(IridError::PoleAtMinusOne);
    }
    let n = den.degree();
    let kernel = bilinear_kernel(n);
    let half = g.ts() / 2.0;
    // z^(n-i) -> P^(n-i) Q^i with P = 1 + half·s, Q = 1 - half·s; the s^m
    // coefficient is half^m times an integer combination of the inputs
    let substitute = |poly: &Polynomial| -> Vec<f64> {
        (0..=n)
            .map(|m| {
                let column: Vec<f64> = (0..=n).map(|i| kernel[i][m]).collect();
                half.powi(m as i32) * dot_compensated(poly.coeffs(), &column)
            })
            .rev()
            .collect()
    };
    ContinuousTransferFunction::new(substitute(num), substitute(den))
}

/// `kernel[i][m]` is the `s^m` coefficient of `(1 + s)^(n-i) (1 - s)^i`.
fn bilinear_kernel(n: usize) -> Vec<Vec<f64>> {
    let binom: Vec<Vec<f64>> = (0..=n)
        .map(|k| {
            let mut row = vec![1.0; k + 1];
            for j in 1..k {
                row[j] = row[j - 1] * (k + 1 - j) as f64 / j as f64;
            }
            row
        })
        .collect();
    (0..=n)
        .map(|i| {
            let a = n - i;
            (0..=n)
                .map(|m| {
                    (m.saturating_sub(i)..=m.min(a))
                        .map(|j| {
                            let sign = if (m - j) % 2 == 0 { 1.0 } else { -1.0 };
                            sign * binom[a][j] * binom[i][m - j]
                        })
                        .sum()
                })
                .collect()
        })
        .collect()
}

/// Dot product accumulated in twice the working precision.
fn dot_compensated(a: &[f64], b: &[f64]) -> f64 {
    let (mut hi, mut lo) = (0.0_f64, 0.0_f64);
    for (&x, &y) in a.iter().zip(b) {
        let p = x * y;
        let p_err = x.mul_add(y, -p);
        let s = hi + p;
        let bb = s - hi;
        let s_err = (hi - (s - bb)) + (p - bb);
        hi = s;
        lo += p_err + s_err;
    }
    hi + lo
}
