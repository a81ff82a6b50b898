//! Polynomials and rational transfer functions.
//!
//! Coefficient lists are always stored in **descending powers**, leading
//! coefficient first: `[1.0, -3.0, 2.0]` is `x^2 - 3x + 2`.
//!
//! Discrete transfer functions follow the digital-filter convention: `num`
//! and `den` are aligned at their leading coefficient, i.e. they are read as
//! ascending powers of `z^-1`. The constructor pads the shorter list with
//! trailing zeros so both have the same length, after which the lists are
//! also exactly the descending-`z` coefficients of `H(z) = num(z) / den(z)`.
//! Continuous transfer functions are plain ratios of polynomials in `s`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{IridError, Result};

/// A real polynomial with coefficients in descending powers.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<f64>,
}

impl Polynomial {
    /// Builds a polynomial from descending-power coefficients.
    ///
    /// Leading zeros are kept; call [`Polynomial::normalize`] for the
    /// canonical form.
    pub fn new(coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(IridError::InvalidPolynomial(
                "coefficient list is empty".into(),
            ));
        }
        if let Some(i) = coeffs.iter().position(|c| !c.is_finite()) {
            return Err(IridError::InvalidPolynomial(format!(
                "coefficient {i} is not finite"
            )));
        }
        Ok(Self { coeffs })
    }

    pub fn constant(c: f64) -> Self {
        Self { coeffs: vec![c] }
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<f64> {
        self.coeffs
    }

    /// Length of the coefficient list minus one.
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn leading(&self) -> f64 {
        self.coeffs[0]
    }

    /// Strips leading zeros. The zero polynomial becomes `[0]`, never empty.
    pub fn normalize(&self) -> Self {
        let first = self.coeffs.iter().position(|&c| c != 0.0);
        match first {
            Some(i) => Self {
                coeffs: self.coeffs[i..].to_vec(),
            },
            None => Self { coeffs: vec![0.0] },
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0.0)
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().fold(0.0_f64, |m, c| m.max(c.abs()))
    }

    /// Horner evaluation at a complex point.
    pub fn eval(&self, x: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * x + c)
    }

    pub fn eval_real(&self, x: f64) -> f64 {
        self.coeffs.iter().fold(0.0, |acc, &c| acc * x + c)
    }

    /// Value and first derivative at `x`.
    fn eval_with_derivative(&self, x: Complex64) -> (Complex64, Complex64) {
        let mut p = Complex64::new(0.0, 0.0);
        let mut dp = Complex64::new(0.0, 0.0);
        for &c in &self.coeffs {
            dp = dp * x + p;
            p = p * x + c;
        }
        (p, dp)
    }

    pub fn scale(&self, k: f64) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| c * k).collect(),
        }
    }

    pub fn mul(&self, other: &Polynomial) -> Self {
        let mut out = vec![0.0; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self { coeffs: out }
    }

    /// Sum aligned at the constant term.
    pub fn add(&self, other: &Polynomial) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![0.0; n];
        for (dst, c) in out.iter_mut().rev().zip(self.coeffs.iter().rev()) {
            *dst += c;
        }
        for (dst, c) in out.iter_mut().rev().zip(other.coeffs.iter().rev()) {
            *dst += c;
        }
        Self { coeffs: out }
    }

    pub fn pow(&self, k: usize) -> Self {
        (0..k).fold(Polynomial::constant(1.0), |acc, _| acc.mul(self))
    }

    /// Builds the monic polynomial with the given roots. Complex roots must
    /// come in conjugate pairs; the imaginary residue is discarded.
    pub fn from_roots(roots: &[Complex64]) -> Self {
        let mut acc = vec![Complex64::new(1.0, 0.0)];
        for &r in roots {
            let mut next = vec![Complex64::new(0.0, 0.0); acc.len() + 1];
            for (i, &a) in acc.iter().enumerate() {
                next[i] += a;
                next[i + 1] -= a * r;
            }
            acc = next;
        }
        Self {
            coeffs: acc.into_iter().map(|c| c.re).collect(),
        }
    }

    /// All complex roots, from the eigenvalues of the companion matrix
    /// followed by a guarded Newton polish.
    pub fn roots(&self) -> Result<Vec<Complex64>> {
        let p = self.normalize();
        let n = p.degree();
        if n == 0 {
            return Err(IridError::Degree(
                "root finding needs degree >= 1 after normalization".into(),
            ));
        }
        let lead = p.leading();
        let monic: Vec<f64> = p.coeffs.iter().map(|c| c / lead).collect();
        if n == 1 {
            return Ok(vec![Complex64::new(-monic[1], 0.0)]);
        }

        let mut companion = DMatrix::<f64>::zeros(n, n);
        for j in 0..n {
            companion[(0, j)] = -monic[j + 1];
        }
        for i in 1..n {
            companion[(i, i - 1)] = 1.0;
        }
        let eig = companion.complex_eigenvalues();
        let mut roots: Vec<Complex64> = eig.iter().copied().collect();
        for r in roots.iter_mut() {
            *r = p.polish_root(*r);
        }
        Ok(roots)
    }

    fn polish_root(&self, mut r: Complex64) -> Complex64 {
        let mut best = self.eval(r).norm();
        for _ in 0..3 {
            let (val, der) = self.eval_with_derivative(r);
            if der.norm() == 0.0 || !der.is_finite() {
                break;
            }
            let cand = r - val / der;
            let res = self.eval(cand).norm();
            if res.is_finite() && res < best {
                best = res;
                r = cand;
            } else {
                break;
            }
        }
        r
    }
}

/// Horner evaluation of `p` at `x`.
pub fn poly_eval(p: &Polynomial, x: Complex64) -> Complex64 {
    p.eval(x)
}

/// All roots of `p`; a constant polynomial is a [`IridError::Degree`] error.
pub fn poly_roots(p: &Polynomial) -> Result<Vec<Complex64>> {
    p.roots()
}

/// Uniformly sampled real signal; sample `k` sits at `t0 + k * dt`.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    t0: f64,
    dt: f64,
    values: Vec<f64>,
}

impl TimeSeries {
    pub fn new(t0: f64, dt: f64, values: Vec<f64>) -> Result<Self> {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(IridError::Domain(format!(
                "sample step must be positive and finite, got {dt}"
            )));
        }
        if !t0.is_finite() {
            return Err(IridError::Domain("start time must be finite".into()));
        }
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(IridError::NonFiniteSample { index });
        }
        Ok(Self { t0, dt, values })
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn time(&self, k: usize) -> f64 {
        self.t0 + k as f64 * self.dt
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.values.len()).map(move |k| self.time(k))
    }

    /// Leading samples with `t <= t_max` (with a half-step rounding guard).
    pub fn window(&self, t_max: f64) -> TimeSeries {
        let keep = self
            .times()
            .take_while(|&t| t <= t_max + 0.5 * self.dt * 1e-6)
            .count();
        TimeSeries {
            t0: self.t0,
            dt: self.dt,
            values: self.values[..keep].to_vec(),
        }
    }

    pub fn scaled(&self, k: f64) -> Result<TimeSeries> {
        TimeSeries::new(self.t0, self.dt, self.values.iter().map(|v| v * k).collect())
    }

    /// Same samples stamped on a different time origin.
    pub fn with_t0(mut self, t0: f64) -> TimeSeries {
        self.t0 = t0;
        self
    }

    pub fn same_grid(&self, other: &TimeSeries) -> bool {
        self.t0 == other.t0 && self.dt == other.dt && self.len() == other.len()
    }
}

/// Strictly increasing list of positive angular frequencies in rad/s.
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyGrid {
    omegas: Vec<f64>,
}

impl FrequencyGrid {
    pub fn new(omegas: Vec<f64>) -> Result<Self> {
        if omegas.is_empty() {
            return Err(IridError::Domain("frequency grid is empty".into()));
        }
        if omegas.iter().any(|w| !(w.is_finite() && *w > 0.0)) {
            return Err(IridError::Domain(
                "frequencies must be positive and finite".into(),
            ));
        }
        if omegas.windows(2).any(|w| w[1] <= w[0]) {
            return Err(IridError::Domain(
                "frequencies must be strictly increasing".into(),
            ));
        }
        Ok(Self { omegas })
    }

    /// `n` logarithmically spaced points from `wmin` to `wmax`, both endpoints exact.
    pub fn logspace(wmin: f64, wmax: f64, n: usize) -> Result<Self> {
        if !(wmin > 0.0 && wmin < wmax && wmax.is_finite()) {
            return Err(IridError::Domain(format!(
                "need 0 < wmin < wmax, got [{wmin}, {wmax}]"
            )));
        }
        if n < 2 {
            return Err(IridError::Domain(format!(
                "log grid needs at least 2 points, got {n}"
            )));
        }
        let (lo, hi) = (wmin.log10(), wmax.log10());
        let step = (hi - lo) / (n - 1) as f64;
        let mut omegas: Vec<f64> = (0..n)
            .map(|k| 10f64.powf(lo + step * k as f64))
            .collect();
        omegas[0] = wmin;
        omegas[n - 1] = wmax;
        Self::new(omegas)
    }

    pub fn omegas(&self) -> &[f64] {
        &self.omegas
    }

    pub fn len(&self) -> usize {
        self.omegas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.omegas.is_empty()
    }
}

/// Complex response sampled on a frequency grid.
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyResponseSeries {
    grid: FrequencyGrid,
    response: Vec<Complex64>,
}

impl FrequencyResponseSeries {
    pub fn new(grid: FrequencyGrid, response: Vec<Complex64>) -> Result<Self> {
        if grid.len() != response.len() {
            return Err(IridError::GridMismatch(format!(
                "{} frequencies but {} response values",
                grid.len(),
                response.len()
            )));
        }
        Ok(Self { grid, response })
    }

    pub fn grid(&self) -> &FrequencyGrid {
        &self.grid
    }

    pub fn response(&self) -> &[Complex64] {
        &self.response
    }

    /// `20 log10 |H|` per point.
    pub fn magnitude_db(&self) -> Vec<f64> {
        self.response
            .iter()
            .map(|h| 20.0 * h.norm().log10())
            .collect()
    }

    /// Phase in degrees, unwrapped along the grid.
    pub fn phase_deg(&self) -> Vec<f64> {
        unwrap_phase(self.response.iter().map(|h| h.arg()))
            .into_iter()
            .map(f64::to_degrees)
            .collect()
    }
}

/// Removes 2π jumps from a sequence of principal-value angles (radians).
pub fn unwrap_phase(angles: impl IntoIterator<Item = f64>) -> Vec<f64> {
    let mut out: Vec<f64> = Vec::new();
    let mut offset = 0.0;
    let mut prev: Option<f64> = None;
    for a in angles {
        if let Some(p) = prev {
            let d = a - p;
            if d > PI {
                offset -= 2.0 * PI * ((d + PI) / (2.0 * PI)).floor();
            } else if d < -PI {
                offset += 2.0 * PI * ((-d + PI) / (2.0 * PI)).floor();
            }
        }
        out.push(a + offset);
        prev = Some(a);
    }
    out
}

/// `H(z) = num(z) / den(z)` with sample period `ts`; see the module docs for
/// the alignment convention.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteTransferFunction {
    num: Polynomial,
    den: Polynomial,
    ts: f64,
}

impl DiscreteTransferFunction {
    /// Pads `num`/`den` to a common length and scales both so `den` is monic.
    pub fn new(num: Vec<f64>, den: Vec<f64>, ts: f64) -> Result<Self> {
        let num = Polynomial::new(num)?.into_coeffs();
        let den = Polynomial::new(den)?.into_coeffs();
        if !(ts > 0.0 && ts.is_finite()) {
            return Err(IridError::Domain(format!(
                "sample period must be positive, got {ts}"
            )));
        }
        let a0 = den[0];
        if a0 == 0.0 {
            return Err(IridError::InvalidPolynomial(
                "leading denominator coefficient is zero".into(),
            ));
        }
        let n = num.len().max(den.len());
        let pad = |mut v: Vec<f64>| {
            v.resize(n, 0.0);
            v.into_iter().map(|c| c / a0).collect::<Vec<_>>()
        };
        Ok(Self {
            num: Polynomial { coeffs: pad(num) },
            den: Polynomial { coeffs: pad(den) },
            ts,
        })
    }

    pub fn num(&self) -> &Polynomial {
        &self.num
    }

    pub fn den(&self) -> &Polynomial {
        &self.den
    }

    pub fn ts(&self) -> f64 {
        self.ts
    }

    pub fn eval_z(&self, z: Complex64) -> Complex64 {
        self.num.eval(z) / self.den.eval(z)
    }

    /// Impulse response by direct recursion of the difference equation.
    pub fn impulse(&self, n: usize) -> Result<TimeSeries> {
        discrete_impulse(self, n)
    }
}

/// Zero-state response of the difference equation to `δ[0] = 1`.
pub fn discrete_impulse(g: &DiscreteTransferFunction, n: usize) -> Result<TimeSeries> {
    if n == 0 {
        return Err(IridError::Domain("impulse length must be >= 1".into()));
    }
    let mut input = vec![0.0; n];
    input[0] = 1.0;
    let values = filter(g.num.coeffs(), g.den.coeffs(), &input);
    TimeSeries::new(0.0, g.ts, values)
}

/// Direct-form IIR filter, `a[0]` assumed to be 1, zero initial state.
pub(crate) fn filter(b: &[f64], a: &[f64], x: &[f64]) -> Vec<f64> {
    let mut y = vec![0.0; x.len()];
    for k in 0..x.len() {
        let mut acc = 0.0;
        for (j, &bj) in b.iter().enumerate().take(k + 1) {
            acc += bj * x[k - j];
        }
        for (i, &ai) in a.iter().enumerate().skip(1).take(k) {
            acc -= ai * y[k - i];
        }
        y[k] = acc;
    }
    y
}

pub fn discrete_freq_response(
    g: &DiscreteTransferFunction,
    grid: &FrequencyGrid,
) -> Result<FrequencyResponseSeries> {
    let nyquist = PI / g.ts;
    if let Some(w) = grid.omegas().iter().find(|&&w| w >= nyquist) {
        log::warn!(
            "frequency {w} rad/s is at or above the Nyquist frequency {nyquist} rad/s"
        );
    }
    let response = grid
        .omegas()
        .iter()
        .map(|&w| {
            let z = Complex64::from_polar(1.0, w * g.ts);
            let d = g.den.eval(z);
            if d.norm() < 1e-300 {
                Err(IridError::DenominatorZero { omega: w })
            } else {
                Ok(g.num.eval(z) / d)
            }
        })
        .collect::<Result<Vec<_>>>()?;
    FrequencyResponseSeries::new(grid.clone(), response)
}

/// `H(s) = num(s) / den(s)` with a monic denominator.
#[derive(Debug, Clone, PartialEq)]
pub struct ContinuousTransferFunction {
    num: Polynomial,
    den: Polynomial,
}

impl ContinuousTransferFunction {
    pub fn new(num: Vec<f64>, den: Vec<f64>) -> Result<Self> {
        let num = Polynomial::new(num)?.normalize();
        let den = Polynomial::new(den)?.normalize();
        if den.is_zero() {
            return Err(IridError::InvalidPolynomial(
                "denominator is identically zero".into(),
            ));
        }
        let lead = den.leading();
        Ok(Self {
            num: num.scale(1.0 / lead),
            den: den.scale(1.0 / lead),
        })
    }

    pub fn num(&self) -> &Polynomial {
        &self.num
    }

    pub fn den(&self) -> &Polynomial {
        &self.den
    }

    pub fn eval(&self, s: Complex64) -> Complex64 {
        self.num.eval(s) / self.den.eval(s)
    }

    /// Splits `H(s) = d + R(s)/den(s)` with `R/den` strictly proper.
    /// `d` is zero unless `deg num == deg den`.
    pub fn split_feedthrough(&self) -> Result<(f64, ContinuousTransferFunction)> {
        let (nd, dd) = (self.num.degree(), self.den.degree());
        if nd > dd {
            return Err(IridError::Degree(format!(
                "improper transfer function: numerator degree {nd} > denominator degree {dd}"
            )));
        }
        if nd < dd || self.num.is_zero() {
            return Ok((0.0, self.clone()));
        }
        let d = self.num.leading();
        let rem = self.num.add(&self.den.scale(-d));
        let rem = if rem.coeffs.len() > 1 {
            Polynomial {
                coeffs: rem.coeffs[1..].to_vec(),
            }
        } else {
            Polynomial::constant(0.0)
        };
        Ok((
            d,
            ContinuousTransferFunction {
                num: rem.normalize(),
                den: self.den.clone(),
            },
        ))
    }
}

pub fn continuous_freq_response(
    g: &ContinuousTransferFunction,
    grid: &FrequencyGrid,
) -> Result<FrequencyResponseSeries> {
    let response = grid
        .omegas()
        .iter()
        .map(|&w| {
            let s = Complex64::new(0.0, w);
            let d = g.den.eval(s);
            if d.norm() < 1e-300 {
                Err(IridError::DenominatorZero { omega: w })
            } else {
                Ok(g.num.eval(s) / d)
            }
        })
        .collect::<Result<Vec<_>>>()?;
    FrequencyResponseSeries::new(grid.clone(), response)
}

/// `(stable, margin)` with `margin = 1 - max |pole|`. A constant denominator
/// has no poles and reports margin 1.
pub fn is_stable_discrete(g: &DiscreteTransferFunction) -> Result<(bool, f64)> {
    let den = g.den.normalize();
    if den.degree() == 0 {
        return Ok((true, 1.0));
    }
    let max_mod = den
        .roots()?
        .iter()
        .fold(0.0_f64, |m, r| m.max(r.norm()));
    let margin = 1.0 - max_mod;
    Ok((margin > 0.0, margin))
}
