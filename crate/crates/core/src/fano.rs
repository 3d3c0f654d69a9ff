//! Exact diagonalization data for the oscillator–continuum Hamiltonian.
//!
//! The dressed annihilation operator at frequency `ω` is
//! `B(ω) = α a + β a† + ∫dω' [γ(ω,ω') b(ω') + δ(ω,ω') b†(ω')]` with
//!
//! ```text
//! α(ω)     = (ω + Ω₀) / (Ω₀ V(ω)) · 1/(Y(ω) − iπ)
//! β(ω)     = α(ω) (ω − Ω₀)/(ω + Ω₀)
//! γ(ω,ω')  = [P/(ω − ω') + Y(ω) δ(ω − ω')] V(ω') Ω₀ α(ω)/(ω + Ω₀)
//! δ(ω,ω')  = V(ω') Ω₀ α(ω) / ((ω + ω')(ω + Ω₀))
//! ```
//!
//! and `Y(ω) V²(ω) = 2(ω² − Ω₀²)/Ω₀ − ∫dω' [P/(ω−ω') − 1/(ω+ω')] V²(ω')`.
//! We call `D(ω) = Y(ω) V²(ω)` the resonance denominator; it is smooth
//! where `Y` itself is not, and its single zero locates the peak of `π(ω)`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::{self, ModelParams};
use crate::quadrature::{self, principal_value, Estimate, QuadRule, QuadratureConfig, SingularKernel};

/// Evaluates the diagonalization functions for one parameter set.
#[derive(Debug, Clone, Copy)]
pub struct FanoSolver {
    pub params: ModelParams,
    /// Tight configuration used for `D(ω)`; the integral terms are `O(a)`
    /// and must resolve the narrow peak of `π`.
    pub cfg: QuadratureConfig,
}

impl FanoSolver {
    pub fn new(params: &ModelParams) -> Result<Self> {
        params.validate()?;
        params.require_below_threshold()?;
        let scale = (params.amplitude() * params.omega_c.powi(3)).max(f64::MIN_POSITIVE);
        let cfg = params.quadrature().with_tolerances(1e-12, 1e-15 * scale);
        Ok(Self { params: *params, cfg })
    }

    pub fn v2(&self, omega: f64) -> f64 {
        model::v2_unchecked(&self.params, omega)
    }

    fn check_frequency(&self, omega: f64) -> Result<()> {
        if !(omega.is_finite() && omega > 0.0) {
            return Err(Error::Domain(format!("frequency must be positive, got {omega}")));
        }
        if self.params.is_uncoupled() {
            return Err(Error::Domain("Fano coefficients are singular at zero coupling (V = 0)".into()));
        }
        if self.v2(omega) == 0.0 {
            return Err(Error::Domain(format!("V²({omega}) underflows to zero")));
        }
        Ok(())
    }

    /// `P∫₀^∞ V²(ω')/(ω − ω') dω'`.
    pub fn pv_integral(&self, omega: f64) -> Result<Estimate> {
        let k = SingularKernel::new(|x| self.v2(x), Some(omega), 0.0);
        principal_value(&k, &self.cfg.covering(omega))
    }

    /// `∫₀^∞ V²(ω')/(ω + ω') dω'`.
    pub fn anti_resonant_integral(&self, omega: f64) -> Result<Estimate> {
        quadrature::integrate_semi_infinite(|x| self.v2(x) / (omega + x), &self.cfg)
    }

    /// `D(ω) = Y(ω) V²(ω)`, finite for all `ω ≥ 0`.
    pub fn denominator(&self, omega: f64) -> Result<f64> {
        let w0 = self.params.omega0;
        let bare = 2.0 * (omega * omega - w0 * w0) / w0;
        if self.params.is_uncoupled() {
            return Ok(bare);
        }
        if omega == 0.0 {
            return Ok(bare + 2.0 * model::threshold_frequency(&self.params));
        }
        let pv = self.pv_integral(omega)?.value;
        let anti = self.anti_resonant_integral(omega)?.value;
        Ok(bare - pv + anti)
    }

    pub fn y(&self, omega: f64) -> Result<f64> {
        self.check_frequency(omega)?;
        Ok(self.denominator(omega)? / self.v2(omega))
    }

    /// `π(ω) = |α|² 4Ω₀ω/(Ω₀+ω)² = 4ωV²/(Ω₀ (D² + π²V⁴))`.
    pub fn pi_density(&self, omega: f64) -> Result<f64> {
        if omega <= 0.0 || self.params.is_uncoupled() {
            return Ok(0.0);
        }
        let v2 = self.v2(omega);
        if v2 == 0.0 {
            return Ok(0.0);
        }
        let d = self.denominator(omega)?;
        Ok(4.0 * omega * v2 / (self.params.omega0 * (d * d + PI * PI * v2 * v2)))
    }

    pub fn coefficients(&self, omega: f64) -> Result<FanoCoefficients> {
        let y = self.y(omega)?;
        Ok(FanoCoefficients::from_y(&self.params, omega, y))
    }

    /// Zero of `D`, which sits just below `sqrt(Ω₀(Ω₀ − Ω_T))`.
    pub fn resonance(&self) -> Result<Resonance> {
        let w0 = self.params.omega0;
        let guess = model::renormalized_frequency(&self.params)?.max(1e-300);
        if self.params.is_uncoupled() {
            return Ok(Resonance { center: w0, width: 0.0 });
        }
        let mut hi = guess;
        let mut d_hi = self.denominator(hi)?;
        let mut steps = 0;
        while d_hi <= 0.0 {
            hi *= 1.5;
            d_hi = self.denominator(hi)?;
            steps += 1;
            if steps > 200 {
                return Err(Error::Refinement("no zero of the resonance denominator".into()));
            }
        }
        let mut lo = hi / 1.5;
        let mut d_lo = self.denominator(lo)?;
        while d_lo >= 0.0 {
            lo /= 1.5;
            d_lo = self.denominator(lo)?;
            steps += 1;
            if steps > 400 {
                return Err(Error::Refinement("no zero of the resonance denominator".into()));
            }
        }
        // regula falsi with Illinois modification, bisection fallback
        let mut side = 0;
        for _ in 0..200 {
            let mut x = (lo * d_hi - hi * d_lo) / (d_hi - d_lo);
            if !(x > lo && x < hi) {
                x = 0.5 * (lo + hi);
            }
            let dx = self.denominator(x)?;
            if dx == 0.0 || (hi - lo) < 1e-15 * hi {
                lo = x;
                hi = x;
                break;
            }
            if dx < 0.0 {
                lo = x;
                d_lo = dx;
                if side == -1 {
                    d_hi *= 0.5;
                }
                side = -1;
            } else {
                hi = x;
                d_hi = dx;
                if side == 1 {
                    d_lo *= 0.5;
                }
                side = 1;
            }
        }
        let center = 0.5 * (lo + hi);
        let h = 1e-6 * center;
        let slope = (self.denominator(center + h)? - self.denominator(center - h)?) / (2.0 * h);
        let width = PI * self.v2(center) / slope.abs();
        Ok(Resonance { center, width })
    }

    /// `P∫₀^∞ π(x) g(x) / (x − pole) dx`, with `π` evaluated afresh.
    pub fn pi_principal_value<G: Fn(f64) -> f64 + Sync>(
        &self,
        g: G,
        pole: f64,
        resonance: &Resonance,
    ) -> Result<f64> {
        let smooth = |x: f64| self.pi_density(x).unwrap_or(f64::NAN) * g(x);
        let k = SingularKernel::new(smooth, Some(pole), 0.0)
            .with_breakpoints(resonance.breakpoints(self.params.omega_c));
        let cfg = self.params.quadrature().with_tolerances(1e-11, 1e-16).covering(pole);
        let v = principal_value(&k, &cfg)?.value;
        if v.is_nan() {
            return Err(Error::QuadratureFailure { estimate: v, error: f64::INFINITY });
        }
        // 1/(x − pole) = −1/(pole − x)
        Ok(-v)
    }
}

/// Location and half-width of the Lorentzian peak of `π(ω)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Resonance {
    pub center: f64,
    pub width: f64,
}

impl Resonance {
    /// Points graded geometrically away from the peak, down to 0 and up to
    /// a few cut-offs beyond it.
    pub fn breakpoints(&self, omega_c: f64) -> Vec<f64> {
        if self.width <= 0.0 {
            return vec![self.center];
        }
        let mut pts = vec![self.center];
        let reach = self.center + 8.0 * omega_c;
        let mut d = self.width;
        while d < reach {
            if d < self.center {
                pts.push(self.center - d);
            }
            pts.push(self.center + d);
            d *= 2.0;
        }
        pts.sort_by(f64::total_cmp);
        pts
    }
}

/// Diagonalization data at one frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FanoCoefficients {
    pub omega: f64,
    pub omega0: f64,
    pub y_value: f64,
    /// `V(ω)`.
    pub v: f64,
    pub alpha: Complex64,
    pub beta: Complex64,
    params: ModelParams,
}

impl FanoCoefficients {
    fn from_y(params: &ModelParams, omega: f64, y: f64) -> Self {
        let w0 = params.omega0;
        let v = model::v2_unchecked(params, omega).sqrt();
        let alpha = Complex64::new((omega + w0) / (w0 * v), 0.0) / Complex64::new(y, -PI);
        let beta = alpha * ((omega - w0) / (omega + w0));
        Self { omega, omega0: w0, y_value: y, v, alpha, beta, params: *params }
    }

    /// `Ω₀ α(ω)/(ω + Ω₀)`, the common factor of `γ` and `δ`.
    pub fn kernel_scale(&self) -> Complex64 {
        self.alpha * (self.omega0 / (self.omega + self.omega0))
    }

    /// Coefficient of `P/(ω − ω')` in `γ(ω, ω')`.
    pub fn gamma_smooth(&self, omega_prime: f64) -> Complex64 {
        self.kernel_scale() * model::v2_unchecked(&self.params, omega_prime).sqrt()
    }

    /// Coefficient of `δ(ω − ω')` in `γ(ω, ω')`.
    pub fn gamma_delta_coeff(&self) -> Complex64 {
        self.kernel_scale() * (self.y_value * self.v)
    }

    /// `δ(ω, ω')`, a regular function of `ω'`.
    pub fn delta_kernel(&self, omega_prime: f64) -> Complex64 {
        self.gamma_smooth(omega_prime) / (self.omega + omega_prime)
    }

    /// `|α|²` written as `(ω+Ω₀)²/(Ω₀² V² (Y² + π²))`.
    pub fn alpha_norm_sqr_closed(&self) -> f64 {
        let (w, w0) = (self.omega, self.omega0);
        (w + w0).powi(2) / (w0 * w0 * self.v * self.v * (self.y_value.powi(2) + PI * PI))
    }

    /// Real part of `γ(ω, ·)` divided by [`kernel_scale`](Self::kernel_scale).
    pub fn gamma_kernel(&self) -> SingularKernel<'static> {
        let p = self.params;
        SingularKernel::new(
            move |x| model::v2_unchecked(&p, x).sqrt(),
            Some(self.omega),
            self.y_value * self.v,
        )
    }

    /// `δ(ω, ·)` divided by [`kernel_scale`](Self::kernel_scale).
    pub fn delta_kernel_real(&self) -> SingularKernel<'static> {
        let p = self.params;
        let w = self.omega;
        SingularKernel::new(move |x| model::v2_unchecked(&p, x).sqrt() / (w + x), None, 0.0)
    }
}

pub fn y_function(params: &ModelParams, omega: f64) -> Result<f64> {
    FanoSolver::new(params)?.y(omega)
}

pub fn alpha_beta(params: &ModelParams, omega: f64) -> Result<(Complex64, Complex64)> {
    let c = FanoSolver::new(params)?.coefficients(omega)?;
    Ok((c.alpha, c.beta))
}

pub fn gamma_delta(params: &ModelParams, omega: f64) -> Result<FanoCoefficients> {
    FanoSolver::new(params)?.coefficients(omega)
}

/// Resolution controls for [`pi_distribution`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PiGrid {
    /// Gauss–Legendre order on each panel.
    pub order: usize,
    /// Largest panel width near the peak region, in units of `ω_c`.
    pub max_width: f64,
    /// Extent of the grid beyond the peak, in units of `ω_c`.
    pub reach: f64,
}

impl Default for PiGrid {
    fn default() -> Self {
        Self { order: 16, max_width: 0.05, reach: 50.0 }
    }
}

/// `π(ω)` tabulated on a composite rule that resolves its peak.
#[derive(Debug, Clone, PartialEq)]
pub struct PiDistribution {
    pub grid: Vec<f64>,
    /// Plain quadrature weights: `∫h dω ≈ Σ weights[i] h(grid[i])`.
    pub weights: Vec<f64>,
    pub values: Vec<f64>,
    /// `Y` at each node; empty for the uncoupled point mass.
    pub y_values: Vec<f64>,
    /// `∫π` over the grid plus the tail beyond it.
    pub norm: f64,
    pub tail: f64,
    /// Right end of the tabulated range.
    pub upper: f64,
    pub resonance: Resonance,
    pub omega0: f64,
}

impl PiDistribution {
    /// Point mass at `Ω₀`, the zero-coupling limit.
    pub fn point_mass(omega0: f64) -> Self {
        Self {
            grid: vec![omega0],
            weights: vec![1.0],
            values: vec![1.0],
            y_values: Vec::new(),
            norm: 1.0,
            tail: 0.0,
            upper: omega0,
            resonance: Resonance { center: omega0, width: 0.0 },
            omega0,
        }
    }

    pub fn is_point_mass(&self) -> bool {
        self.y_values.is_empty()
    }

    /// `∫ π(ω) g(ω) dω` on the grid.
    pub fn expect<G: Fn(f64) -> f64>(&self, g: G) -> f64 {
        self.grid.iter().zip(&self.weights).zip(&self.values).map(|((&x, &w), &p)| w * p * g(x)).sum()
    }

    /// Plain rule over the grid nodes.
    pub fn rule(&self) -> QuadRule {
        QuadRule { nodes: self.grid.clone(), weights: self.weights.clone() }
    }

    /// Fails if the normalization defect exceeds `tol`.
    pub fn require_normalized(&self, tol: f64) -> Result<()> {
        if (self.norm - 1.0).abs() > tol {
            return Err(Error::Validation(format!(
                "pi distribution not normalized: integral = {}",
                self.norm
            )));
        }
        Ok(())
    }
}

fn panel_edges(res: &Resonance, omega_c: f64, grid: &PiGrid) -> Vec<f64> {
    let upper = res.center + grid.reach * omega_c;
    let mut pts = res.breakpoints(omega_c);
    pts.push(0.0);
    pts.push(upper);
    pts.retain(|&x| (0.0..=upper).contains(&x));
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    let cap = |x: f64| {
        let near = grid.max_width * omega_c;
        if x < 5.0 * omega_c + res.center {
            near
        } else {
            near.max(0.15 * (x - 5.0 * omega_c - res.center))
        }
    };
    let mut edges = vec![pts[0]];
    for w in pts.windows(2) {
        let (a, b) = (w[0], w[1]);
        let h = cap(a).min(cap(b));
        let n = ((b - a) / h).ceil().max(1.0) as usize;
        for i in 1..=n {
            edges.push(a + (b - a) * i as f64 / n as f64);
        }
    }
    edges
}

/// Tabulates `π(ω)` and checks `∫π = 1`.
pub fn pi_distribution(params: &ModelParams, grid: &PiGrid) -> Result<PiDistribution> {
    params.validate()?;
    params.require_below_threshold()?;
    if params.is_uncoupled() {
        return Ok(PiDistribution::point_mass(params.omega0));
    }
    if grid.order == 0 || !(grid.max_width > 0.0) || !(grid.reach > 0.0) {
        return Err(Error::Config(format!("invalid pi grid {grid:?}")));
    }
    let solver = FanoSolver::new(params)?;
    let resonance = solver.resonance()?;
    let edges = panel_edges(&resonance, params.omega_c, grid);
    let rule = QuadRule::composite(&edges, grid.order);
    let denominators: Vec<f64> =
        rule.nodes.par_iter().map(|&x| solver.denominator(x)).collect::<Result<_>>()?;
    let w0 = params.omega0;
    let mut values = Vec::with_capacity(rule.len());
    let mut y_values = Vec::with_capacity(rule.len());
    for (&x, &d) in rule.nodes.iter().zip(&denominators) {
        let v2 = solver.v2(x);
        values.push(4.0 * x * v2 / (w0 * (d * d + PI * PI * v2 * v2)));
        y_values.push(d / v2);
    }
    let upper = *edges.last().expect("non-empty edges");
    let tail = quadrature::integrate_from(
        |x| solver.pi_density(x).unwrap_or(0.0),
        upper,
        &[],
        &params.quadrature().covering(upper),
    )?
    .value;
    let body: f64 = rule.weights.iter().zip(&values).map(|(w, p)| w * p).sum();
    let norm = body + tail;
    if (norm - 1.0).abs() > 1e-3 {
        return Err(Error::GridRefinement(format!(
            "pi normalization {norm} is off by more than 1e-3; refine the grid"
        )));
    }
    Ok(PiDistribution {
        grid: rule.nodes,
        weights: rule.weights,
        values,
        y_values,
        norm,
        tail,
        upper,
        resonance,
        omega0: w0,
    })
}

/// Relative residuals of the four coupled eigenoperator equations at `ω`:
/// the `a` and `a†` coefficients, then the `b(ω')` and `b†(ω')`
/// coefficients (worst case over sample `ω'` and, for `b(ω')`, a smeared
/// test of the delta balance).
pub fn eigen_residual(params: &ModelParams, omega: f64) -> Result<[f64; 4]> {
    let solver = FanoSolver::new(params)?;
    let c = solver.coefficients(omega)?;
    let w0 = params.omega0;
    // an independent, default-tolerance quadrature path for the integrals
    let cfg = params.quadrature().covering(omega);
    let s = c.kernel_scale();
    // ∫V(ω')γ(ω,ω')dω' = s [P∫V²/(ω−ω') + Y V²(ω)]
    let pv_v2 = principal_value(&SingularKernel::new(|x| solver.v2(x), Some(omega), 0.0), &cfg)?.value;
    let v_gamma = s * (pv_v2 + c.y_value * c.v * c.v);
    let v_delta = s * quadrature::integrate_semi_infinite(|x| solver.v2(x) / (omega + x), &cfg)?.value;
    let coupling = 0.5 * (v_gamma - v_delta);

    let rel = |terms: &[Complex64]| {
        let sum: Complex64 = terms.iter().sum();
        let scale = terms.iter().map(|t| t.norm()).fold(0.0, f64::max);
        if scale == 0.0 {
            0.0
        } else {
            sum.norm() / scale
        }
    };
    let r1 = rel(&[c.alpha * w0, coupling, -c.alpha * omega]);
    let r2 = rel(&[-c.beta * w0, coupling, -c.beta * omega]);

    let a_minus_b = c.alpha - c.beta;
    let samples = [0.1 * omega, 0.5 * omega, 0.9 * omega, 1.3 * omega, 2.0 * omega, omega + params.omega_c];
    let mut r3: f64 = 0.0;
    let mut r4: f64 = 0.0;
    for &wp in &samples {
        let vp = solver.v2(wp).sqrt();
        // γ's pole part times (ω' − ω) is −V(ω') s; its delta part vanishes
        let gamma_term = -c.gamma_smooth(wp);
        r3 = r3.max(rel(&[0.5 * vp * a_minus_b, gamma_term]));
        let delta_term = -c.delta_kernel(wp) * (wp + omega);
        r4 = r4.max(rel(&[0.5 * vp * a_minus_b, delta_term]));
    }
    // smeared: ∫g(ω')[½V(α−β) + (ω'−ω)γ(ω,ω')]dω' = 0 for a bump g at ω
    let width = 0.05 * omega.min(params.omega_c);
    let bump = |x: f64| (-((x - omega) / width).powi(2)).exp();
    let kernel = c.gamma_kernel().with_breakpoints(vec![omega - 6.0 * width, omega + 6.0 * width]);
    let paired = kernel.pair(|x| bump(x) * (x - omega), &cfg)?;
    let direct = quadrature::integrate(
        |x| bump(x) * solver.v2(x).sqrt(),
        (omega - 8.0 * width).max(0.0),
        omega + 8.0 * width,
        &[omega],
        &cfg,
    )?
    .value;
    r3 = r3.max(rel(&[0.5 * direct * a_minus_b, s * paired]));
    Ok([r1, r2, r3, r4])
}

/// Result of the smeared completeness test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompletenessReport {
    /// `∫∫ f(ω) g(ν) ∫dω' [γ*(ω',ω)γ(ω',ν) − δ(ω',ω)δ*(ω',ν)]`.
    pub lhs: f64,
    /// `∫ f g`.
    pub overlap: f64,
    /// `|lhs − overlap| / sqrt(∫f² ∫g²)`.
    pub deviation: f64,
}

/// A Gaussian bump `exp(−(ω − center)²/(2 width²))`, treated as supported
/// on `center ± 10 width`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bump {
    pub center: f64,
    pub width: f64,
}

impl Bump {
    pub fn new(center: f64, width: f64) -> Result<Self> {
        if !(width > 0.0) || center - 10.0 * width <= 0.0 {
            return Err(Error::Domain(format!(
                "bump at {center} with width {width} must be supported inside (0, ∞)"
            )));
        }
        Ok(Self { center, width })
    }

    pub fn eval(&self, x: f64) -> f64 {
        let t = (x - self.center) / self.width;
        if t.abs() > 10.0 {
            0.0
        } else {
            (-0.5 * t * t).exp()
        }
    }

    pub fn support(&self) -> (f64, f64) {
        (self.center - 10.0 * self.width, self.center + 10.0 * self.width)
    }

    pub fn breakpoints(&self) -> Vec<f64> {
        (-10..=10).step_by(2).map(|k| self.center + k as f64 * self.width).collect()
    }
}

/// Smeared check of `∫dω'[γ*(ω',ω)γ(ω',ν) − δ(ω',ω)δ*(ω',ν)] = δ(ω − ν)`.
pub fn completeness_check(
    params: &ModelParams,
    pi: &PiDistribution,
    f: Bump,
    g: Bump,
) -> Result<CompletenessReport> {
    let cfg = params.quadrature();
    let (fl, fh) = f.support();
    let (gl, gh) = g.support();
    let overlap = quadrature::integrate(
        |x| f.eval(x) * g.eval(x),
        fl.min(gl),
        fh.max(gh),
        &[f.center, g.center],
        &cfg,
    )?
    .value;
    let norm_f = quadrature::integrate(|x| f.eval(x).powi(2), fl, fh, &[f.center], &cfg)?.value;
    let norm_g = quadrature::integrate(|x| g.eval(x).powi(2), gl, gh, &[g.center], &cfg)?.value;
    let scale = (norm_f * norm_g).sqrt();

    if params.is_uncoupled() {
        // γ = δ(ω−ω'), δ = 0: the identity is exact
        return Ok(CompletenessReport { lhs: overlap, overlap, deviation: 0.0 });
    }
    if pi.is_point_mass() {
        return Err(Error::Validation("coupled model needs a tabulated pi".into()));
    }
    let solver = FanoSolver::new(params)?;
    // |γ(ω',·)|-common factor: |Ω₀ α(ω')/(ω'+Ω₀)|² = π(ω') Ω₀ / (4ω')
    let w0 = params.omega0;
    let outer = QuadRule {
        nodes: pi.grid.clone(),
        weights: pi
            .grid
            .iter()
            .zip(&pi.weights)
            .zip(&pi.values)
            .map(|((&x, &w), &p)| w * p * w0 / (4.0 * x))
            .collect(),
    };
    let y_at = |x: f64| -> f64 {
        match pi.grid.binary_search_by(|n| n.total_cmp(&x)) {
            Ok(i) => pi.y_values[i],
            Err(_) => solver.y(x).unwrap_or(f64::NAN),
        }
    };
    let mut breaks = f.breakpoints();
    breaks.extend(g.breakpoints());
    let gamma = |x: f64| {
        let v = solver.v2(x).sqrt();
        let p = params;
        SingularKernel::new(move |t| model::v2_unchecked(p, t).sqrt(), Some(x), y_at(x) * v)
            .with_breakpoints(breaks.clone())
    };
    let delta = |x: f64| {
        let p = params;
        SingularKernel::new(move |t| model::v2_unchecked(p, t).sqrt() / (x + t), None, 0.0)
            .with_breakpoints(breaks.clone())
    };
    let cfg = cfg.covering(*pi.grid.last().unwrap_or(&1.0));
    let fe = |x: f64| f.eval(x);
    let ge = |x: f64| g.eval(x);
    let gg = quadrature::smeared_delta_pairing(&outer, |_| 1.0, gamma, gamma, fe, ge, &cfg)?;
    let dd = quadrature::smeared_delta_pairing(&outer, |_| 1.0, delta, delta, fe, ge, &cfg)?;
    let lhs = gg - dd;
    Ok(CompletenessReport { lhs, overlap, deviation: (lhs - overlap).abs() / scale })
}
