//! The complex fractional order integrator (CFOI).
//!
//! A CFOI of order `λ + jμ` with gain-crossover frequency `ω_gc` is realized
//! as the real-valued transfer function
//!
//! ```text
//! G(s) = (ω_gc / s)^λ · cos(μ · ln(ω_gc / s))
//! ```
//!
//! which equals `½[(ω_gc/s)^(λ+jμ) + (ω_gc/s)^(λ−jμ)]` and therefore has a
//! real impulse response. Only `μ ≤ 0` is supported; for `μ < 0` the outer
//! exponent `−sign(μ)` of the generic form is `+1`.
//!
//! Two independent evaluation routes are provided: [`cfoi_transfer`]
//! evaluates the expression above with complex arithmetic anywhere in the
//! cut plane, while [`cfoi_freq_response`] uses the closed-form real and
//! imaginary parts on the imaginary axis.

use num_complex::Complex64;
use std::f64::consts::FRAC_PI_2;

use crate::error::{IridError, Result};
use crate::lti::{FrequencyGrid, FrequencyResponseSeries};
use crate::special::gamma;

/// Order `lambda + j·mu` and gain-crossover frequency `wgc` (rad/s).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CfoiParams {
    lambda: f64,
    mu: f64,
    wgc: f64,
}

impl CfoiParams {
    /// Validates `lambda ∈ (0, 2)`, `mu ∈ (−1, 0]` and `wgc > 0`.
    pub fn new(lambda: f64, mu: f64, wgc: f64) -> Result<Self> {
        if !(lambda > 0.0 && lambda < 2.0) {
            return Err(IridError::Param(format!(
                "lambda must lie in the open interval (0, 2), got {lambda}"
            )));
        }
        if !(mu > -1.0 && mu <= 0.0) {
            return Err(IridError::Param(format!(
                "mu must lie in (-1, 0], got {mu}"
            )));
        }
        if !(wgc > 0.0 && wgc.is_finite()) {
            return Err(IridError::Param(format!(
                "wgc must be positive and finite, got {wgc}"
            )));
        }
        Ok(Self { lambda, mu, wgc })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn wgc(&self) -> f64 {
        self.wgc
    }
}

/// `G(s) = (ω_gc/s)^λ · cos(μ ln(ω_gc/s))` on the principal branch.
pub fn cfoi_transfer(p: &CfoiParams, s: Complex64) -> Result<Complex64> {
    if s.re == 0.0 && s.im == 0.0 {
        return Err(IridError::SingularInput);
    }
    let log_w = (Complex64::new(p.wgc, 0.0) / s).ln();
    Ok((p.lambda * log_w).exp() * (p.mu * log_w).cos())
}

/// `G(jω)` from the closed-form real and imaginary parts.
pub fn cfoi_freq_response(p: &CfoiParams, omega: f64) -> Result<Complex64> {
    if !(omega > 0.0 && omega.is_finite()) {
        return Err(IridError::Domain(format!(
            "frequency must be positive, got {omega}"
        )));
    }
    let ratio = p.wgc / omega;
    let gain = ratio.powf(p.lambda);
    let phi = p.mu * ratio.ln();

    // numerator cos(μ ln(ω_gc/(jω))) = A + jB
    let a = (p.mu * FRAC_PI_2).cosh() * phi.cos();
    let b = (p.mu * FRAC_PI_2).sinh() * phi.sin();
    // j^λ = C + jD, with C² + D² = 1
    let c = (p.lambda * FRAC_PI_2).cos();
    let d = (p.lambda * FRAC_PI_2).sin();

    Ok(Complex64::new(gain * (a * c + b * d), gain * (b * c - a * d)))
}

pub fn cfoi_freq_grid(p: &CfoiParams, grid: &FrequencyGrid) -> Result<FrequencyResponseSeries> {
    let response = grid
        .omegas()
        .iter()
        .map(|&w| cfoi_freq_response(p, w))
        .collect::<Result<Vec<_>>>()?;
    FrequencyResponseSeries::new(grid.clone(), response)
}

/// Exact impulse response `h(t) = Re[ω_gc^ν t^(ν−1) / Γ(ν)]`, `ν = λ + jμ`.
///
/// Follows from the pair `s^−ν ↔ t^(ν−1)/Γ(ν)` applied to both terms of the
/// cosine expansion. Used to validate the numerical inversion.
pub fn cfoi_analytic_impulse(p: &CfoiParams, t: f64) -> Result<f64> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(IridError::Domain(format!(
            "impulse response is defined for t > 0, got {t}"
        )));
    }
    let nu = Complex64::new(p.lambda, p.mu);
    let log_term = nu * p.wgc.ln() + (nu - 1.0) * t.ln();
    Ok((log_term.exp() / gamma(nu)).re)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn params(l: f64, m: f64, w: f64) -> CfoiParams {
        CfoiParams::new(l, m, w).unwrap()
    }

    #[test]
    fn parameter_validation() {
        assert!(CfoiParams::new(2.5, -0.4, 1.0).is_err());
        assert!(CfoiParams::new(0.0, -0.4, 1.0).is_err());
        assert!(CfoiParams::new(2.0, -0.4, 1.0).is_err());
        assert!(CfoiParams::new(1.5, 0.1, 1.0).is_err());
        assert!(CfoiParams::new(1.5, -1.0, 1.0).is_err());
        assert!(CfoiParams::new(1.5, -0.4, 0.0).is_err());
        assert!(CfoiParams::new(1.5, f64::NAN, 1.0).is_err());
        assert!(CfoiParams::new(1.5, 0.0, 1.0).is_ok());
        let e = CfoiParams::new(3.0, -0.4, 1.0).unwrap_err();
        assert!(e.to_string().contains("(0, 2)"));
        assert!(e.is_validation());
    }

    #[test]
    fn transfer_examples() {
        let g = cfoi_transfer(&params(1.0, 0.0, 1.0), c(2.0, 0.0)).unwrap();
        assert!((g - c(0.5, 0.0)).norm() < 1e-15);
        let g = cfoi_transfer(&params(0.5, 0.0, 4.0), c(1.0, 0.0)).unwrap();
        assert!((g - c(2.0, 0.0)).norm() < 1e-15);
        // at s = jω_gc only the cosh(μπ/2) factor and j^-λ survive
        let g = cfoi_transfer(&params(1.5, -0.4, 1.0), c(0.0, 1.0)).unwrap();
        let k = (0.2 * PI).cosh() * (0.75 * PI).cos();
        assert!((g - c(k, k)).norm() < 1e-14);
        assert!((g.re + 0.8514).abs() < 1e-4);
    }

    #[test]
    fn transfer_rejects_origin() {
        assert!(matches!(
            cfoi_transfer(&params(1.5, -0.4, 1.0), c(0.0, 0.0)),
            Err(IridError::SingularInput)
        ));
    }

    #[test]
    fn transfer_is_real_on_positive_axis() {
        let p = params(1.3, -0.6, 2.0);
        for s in [0.1, 1.0, 7.5] {
            assert_eq!(cfoi_transfer(&p, c(s, 0.0)).unwrap().im, 0.0);
        }
    }

    #[test]
    fn freq_response_examples() {
        let g = cfoi_freq_response(&params(1.0, 0.0, 2.0), 1.0).unwrap();
        assert!((g - c(0.0, -2.0)).norm() < 1e-15);
        let g = cfoi_freq_response(&params(0.5, 0.0, 1.0), 1.0).unwrap();
        let r = 0.5f64.sqrt();
        assert!((g - c(r, -r)).norm() < 1e-15);
        let g = cfoi_freq_response(&params(1.5, -0.4, 1.0), 1.0).unwrap();
        assert!((g - c(-0.8513368287303917, -0.8513368287303917)).norm() < 1e-14);
    }

    #[test]
    fn freq_response_domain() {
        let p = params(1.5, -0.4, 1.0);
        assert!(matches!(cfoi_freq_response(&p, 0.0), Err(IridError::Domain(_))));
        assert!(matches!(cfoi_freq_response(&p, -1.0), Err(IridError::Domain(_))));
    }

    #[test]
    fn grid_matches_pointwise() {
        let p = params(1.0, 0.0, 1.0);
        let single = cfoi_freq_grid(&p, &FrequencyGrid::new(vec![1.0]).unwrap()).unwrap();
        assert!((single.response()[0] - c(0.0, -1.0)).norm() < 1e-15);

        let p = params(1.5, -0.2, 0.5);
        let grid = FrequencyGrid::new(vec![0.3, 4.0]).unwrap();
        let series = cfoi_freq_grid(&p, &grid).unwrap();
        for (w, h) in grid.omegas().iter().zip(series.response()) {
            assert_eq!(*h, cfoi_freq_response(&p, *w).unwrap());
        }
    }

    #[test]
    fn magnitude_slope_tracks_real_order() {
        // |G| ∝ ω^-λ times a bounded oscillating factor; least-squares slope
        // of dB against log10 ω over four decades.
        let p = params(1.5, -0.4, 1.0);
        let grid = FrequencyGrid::logspace(0.01, 100.0, 200).unwrap();
        let series = cfoi_freq_grid(&p, &grid).unwrap();
        let x: Vec<f64> = grid.omegas().iter().map(|w| w.log10()).collect();
        let y = series.magnitude_db();
        let n = x.len() as f64;
        let (mx, my) = (x.iter().sum::<f64>() / n, y.iter().sum::<f64>() / n);
        let sxy: f64 = x.iter().zip(&y).map(|(a, b)| (a - mx) * (b - my)).sum();
        let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
        let slope = sxy / sxx;
        assert!((slope + 30.0).abs() < 1.0, "slope {slope}");
    }

    #[test]
    fn analytic_impulse_examples() {
        let h = cfoi_analytic_impulse(&params(1.0, 0.0, 1.0), 3.0).unwrap();
        assert!((h - 1.0).abs() < 1e-14);
        let h = cfoi_analytic_impulse(&params(0.5, 0.0, 1.0), 1.0).unwrap();
        assert!((h - 1.0 / PI.sqrt()).abs() < 1e-14);
        // Re[1/Γ(1.5 − 0.4j)] from an arbitrary-precision reference
        let h = cfoi_analytic_impulse(&params(1.5, -0.4, 1.0), 1.0).unwrap();
        assert!((h - 1.2139208114219906).abs() < 1e-13);
        let h = cfoi_analytic_impulse(&params(1.5, -0.4, 1.0), 2.0).unwrap();
        assert!((h - 1.662061646622573).abs() < 1e-13);
        assert!(cfoi_analytic_impulse(&params(1.5, -0.4, 1.0), 0.0).is_err());
    }

    #[test]
    fn analytic_impulse_real_order_limit() {
        // μ = 0 reduces to ω_gc^λ t^(λ−1) / Γ(λ)
        let p = params(1.5, 0.0, 2.0);
        let t: f64 = 0.7;
        let want = 2f64.powf(1.5) * t.powf(0.5) / (0.5 * PI.sqrt());
        let got = cfoi_analytic_impulse(&p, t).unwrap();
        assert!((got - want).abs() < 1e-13 * want);
    }
}
