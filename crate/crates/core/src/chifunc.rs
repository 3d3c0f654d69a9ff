//! Normal-ordered characteristic functional of the dressed ground state,
//! `χ[ξ, η] = ⟨e^{∫ξ b†} e^{η a†} e^{−η* a} e^{−∫ξ* b}⟩`.
//!
//! With `q = α Q` and `p = α* P` the Gaussian exponent becomes
//! `−½∫qp − ½∫q*p* − ∫|p|² = −∫|α|² [Re(QP) + |P|²]`, an average over the
//! tabulated `π` because `|α|² = π (ν+Ω₀)²/(4Ω₀ν)`. Test functions are
//! finite sums of Gaussian bumps so their transforms against the kernels
//! can be computed once per bump and reused.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fano::{Bump, PiDistribution};
use crate::model::{self, ModelParams};
use crate::quadrature::gauss_legendre;

/// `ξ(ω) = Σ amplitude_k · bump_k(ω)` together with the atomic argument `η`.
#[derive(Debug, Clone, PartialEq)]
pub struct TestFunction {
    pub eta: Complex64,
    pub xi: Vec<(Complex64, Bump)>,
}

impl TestFunction {
    pub fn atomic(eta: Complex64) -> Self {
        Self { eta, xi: Vec::new() }
    }

    pub fn xi_at(&self, omega: f64) -> Complex64 {
        self.xi.iter().map(|(a, b)| a * b.eval(omega)).sum()
    }

    /// `∫|ξ|²`, from closed-form Gaussian overlaps.
    pub fn xi_norm_sqr(&self) -> f64 {
        let mut s = Complex64::new(0.0, 0.0);
        for (a, b) in &self.xi {
            for (c, d) in &self.xi {
                s += a.conj() * c * gaussian_overlap(b, d);
            }
        }
        s.re
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self { eta: self.eta * s, xi: self.xi.iter().map(|(a, b)| (a * s, *b)).collect() }
    }
}

fn gaussian_overlap(a: &Bump, b: &Bump) -> f64 {
    let s2 = a.width * a.width + b.width * b.width;
    (2.0 * PI * a.width * a.width * b.width * b.width / s2).sqrt()
        * (-(a.center - b.center).powi(2) / (2.0 * s2)).exp()
}

/// `∫ bump = √(2π) σ`.
pub fn bump_integral(b: &Bump) -> f64 {
    (2.0 * PI).sqrt() * b.width
}

/// `p(ν)` and `q(ν)` on the nodes of the tabulated `π`.
#[derive(Debug, Clone, PartialEq)]
pub struct PQFunctions {
    pub grid: Vec<f64>,
    pub p: Vec<Complex64>,
    pub q: Vec<Complex64>,
}

/// Kernel transforms of one bump on the `π` nodes.
#[derive(Debug, Clone)]
struct BumpTransform {
    bump: Bump,
    /// `P∫ b V/(ν − ω) dω + Y(ν) V(ν) b(ν)`.
    gamma: Vec<f64>,
    /// `∫ b V/(ν + ω) dω`.
    delta: Vec<f64>,
}

fn transform(params: &ModelParams, pi: &PiDistribution, bump: Bump) -> BumpTransform {
    let (lo, hi) = bump.support();
    let panels = 40;
    let (x, w) = gauss_legendre(16);
    let mut nodes = Vec::with_capacity(panels * 16);
    let mut weights = Vec::with_capacity(panels * 16);
    let h = (hi - lo) / panels as f64;
    for k in 0..panels {
        let c = lo + (k as f64 + 0.5) * h;
        for (xi, wi) in x.iter().zip(&w) {
            nodes.push(c + 0.5 * h * xi);
            weights.push(0.5 * h * wi);
        }
    }
    let vb = |t: f64| bump.eval(t) * model::v2_unchecked(params, t).sqrt();
    let vals: Vec<f64> = nodes.iter().map(|&t| vb(t)).collect();
    let (gamma, delta) = pi
        .grid
        .par_iter()
        .zip(&pi.y_values)
        .map(|(&nu, &y)| {
            let mut pv = 0.0;
            let mut anti = 0.0;
            let inside = nu > lo && nu < hi;
            let h_nu = if inside { vb(nu) } else { 0.0 };
            for ((&t, &wt), &f) in nodes.iter().zip(&weights).zip(&vals) {
                let d = nu - t;
                if d != 0.0 {
                    pv += wt * (f - h_nu) / d;
                }
                anti += wt * f / (nu + t);
            }
            if inside {
                pv += h_nu * ((nu - lo) / (hi - nu)).ln();
            }
            (pv + y * h_nu, anti)
        })
        .unzip();
    BumpTransform { bump, gamma, delta }
}

/// Precomputed data for repeated evaluation of `χ` with test functions
/// drawn from a fixed set of bumps.
#[derive(Debug, Clone)]
pub struct ChiEngine<'a> {
    params: ModelParams,
    pi: &'a PiDistribution,
    /// `w_i |α(ν_i)|²`.
    weight: Vec<f64>,
    transforms: Vec<BumpTransform>,
}

impl<'a> ChiEngine<'a> {
    pub fn new(params: &ModelParams, pi: &'a PiDistribution, bumps: &[Bump]) -> Result<Self> {
        params.validate()?;
        let w0 = params.omega0;
        if params.is_uncoupled() {
            return Ok(Self { params: *params, pi, weight: Vec::new(), transforms: Vec::new() });
        }
        if pi.is_point_mass() {
            return Err(Error::Validation("coupled model needs a tabulated pi".into()));
        }
        let weight = pi
            .grid
            .iter()
            .zip(&pi.weights)
            .zip(&pi.values)
            .map(|((&nu, &w), &p)| w * p * (nu + w0).powi(2) / (4.0 * w0 * nu))
            .collect();
        let mut engine = Self { params: *params, pi, weight, transforms: Vec::new() };
        for &b in bumps {
            engine.ensure(b);
        }
        Ok(engine)
    }

    fn ensure(&mut self, bump: Bump) -> usize {
        if let Some(i) = self.transforms.iter().position(|t| t.bump == bump) {
            return i;
        }
        self.transforms.push(transform(&self.params, self.pi, bump));
        self.transforms.len() - 1
    }

    fn index(&self, bump: &Bump) -> Result<usize> {
        self.transforms
            .iter()
            .position(|t| t.bump == *bump)
            .ok_or_else(|| Error::Validation(format!("bump {bump:?} not prepared")))
    }

    /// `Q(ν_i)` and `P(ν_i)`, the `α`-stripped `q` and `p`.
    fn reduced_pq(&self, tf: &TestFunction) -> Result<(Vec<Complex64>, Vec<Complex64>)> {
        let w0 = self.params.omega0;
        let idx: Vec<(Complex64, usize)> =
            tf.xi.iter().map(|(a, b)| self.index(b).map(|i| (*a, i))).collect::<Result<_>>()?;
        let n = self.pi.grid.len();
        let mut q = Vec::with_capacity(n);
        let mut p = Vec::with_capacity(n);
        for (i, &nu) in self.pi.grid.iter().enumerate() {
            let fac = w0 / (nu + w0);
            let mut g = Complex64::new(0.0, 0.0);
            let mut d = Complex64::new(0.0, 0.0);
            for &(a, k) in &idx {
                g += a * self.transforms[k].gamma[i];
                d += a * self.transforms[k].delta[i];
            }
            q.push(tf.eta + fac * g);
            p.push(tf.eta * ((nu - w0) / (nu + w0)) + fac * d);
        }
        Ok((q, p))
    }

    pub fn build_pq(&self, tf: &TestFunction) -> Result<PQFunctions> {
        if self.params.is_uncoupled() {
            return Err(Error::NotApplicable("p and q are distributions at zero coupling".into()));
        }
        let (q, p) = self.reduced_pq(tf)?;
        let w0 = self.params.omega0;
        let mut qs = Vec::with_capacity(q.len());
        let mut ps = Vec::with_capacity(p.len());
        for (i, &nu) in self.pi.grid.iter().enumerate() {
            let v = model::v2_unchecked(&self.params, nu).sqrt();
            let alpha = Complex64::new((nu + w0) / (w0 * v), 0.0) / Complex64::new(self.pi.y_values[i], -PI);
            qs.push(alpha * q[i]);
            ps.push(alpha.conj() * p[i]);
        }
        Ok(PQFunctions { grid: self.pi.grid.clone(), p: ps, q: qs })
    }

    /// `ln χ`, which is real for `η*` and `ξ*` taken as true conjugates.
    pub fn log_chi(&self, tf: &TestFunction) -> Result<f64> {
        if self.params.is_uncoupled() {
            return Ok(0.0);
        }
        let (q, p) = self.reduced_pq(tf)?;
        let mut e = 0.0;
        for ((w, q), p) in self.weight.iter().zip(&q).zip(&p) {
            e -= w * ((q * p).re + p.norm_sqr());
        }
        Ok(e)
    }

    pub fn chi(&self, tf: &TestFunction) -> Result<Complex64> {
        let e = self.log_chi(tf)?;
        if !e.is_finite() || e > 700.0 {
            return Err(Error::Range(format!("ln chi = {e} cannot be exponentiated")));
        }
        Ok(Complex64::new(e.exp(), 0.0))
    }

    /// `|χ| e^{−(|η|² + ∫|ξ|²)/2}`, the modulus of the symmetrically ordered
    /// characteristic function; never above 1 for a physical state.
    pub fn weyl_modulus(&self, tf: &TestFunction) -> Result<f64> {
        let e = self.log_chi(tf)? - 0.5 * (tf.eta.norm_sqr() + tf.xi_norm_sqr());
        Ok(e.exp())
    }
}

pub fn build_pq(params: &ModelParams, pi: &PiDistribution, tf: &TestFunction) -> Result<PQFunctions> {
    let bumps: Vec<Bump> = tf.xi.iter().map(|(_, b)| *b).collect();
    ChiEngine::new(params, pi, &bumps)?.build_pq(tf)
}

pub fn evaluate_chi(params: &ModelParams, pi: &PiDistribution, tf: &TestFunction) -> Result<Complex64> {
    let bumps: Vec<Bump> = tf.xi.iter().map(|(_, b)| *b).collect();
    ChiEngine::new(params, pi, &bumps)?.chi(tf)
}

/// Moments extracted by differentiating `χ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Moment {
    /// `⟨a²⟩ = ∂²χ/∂η*²`.
    ASquared,
    /// `⟨a†a⟩ = −∂²χ/∂η∂η*`.
    Number,
    /// `⟨a⟩ = −∂χ/∂η*`.
    AMean,
    /// `⟨a†⟩ = ∂χ/∂η`.
    ADaggerMean,
    /// `⟨b†(ν)b(ν')⟩ = −δ²χ/δξ(ν)δξ*(ν')`.
    BDaggerB { nu: f64, nu_prime: f64 },
    /// `⟨a b(ν)⟩ = ∂/∂η* δχ/δξ*(ν)`.
    AB { nu: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiffOptions {
    /// Finite-difference step in `η` and in bump amplitudes.
    pub step: f64,
    /// Bump width for functional derivatives; the result is extrapolated
    /// from this width and half of it.
    pub width: f64,
}

impl Default for DiffOptions {
    fn default() -> Self {
        Self { step: 1e-3, width: 0.02 }
    }
}

/// Real coordinates: `η`, then up to two bump amplitudes, each as (re, im).
type Coords = [f64; 6];

/// `∂_a∂_b f(0)` from the four-point stencil, Richardson-extrapolated in
/// the step.
fn mixed_partial<F: Fn(&Coords) -> Result<f64>>(f: &F, a: usize, b: usize, h: f64) -> Result<f64> {
    let at = |sa: f64, sb: f64| {
        let mut c = [0.0; 6];
        c[a] += sa;
        c[b] += sb;
        f(&c)
    };
    let stencil =
        |h: f64| -> Result<f64> { Ok((at(h, h)? - at(h, -h)? - at(-h, h)? + at(-h, -h)?) / (4.0 * h * h)) };
    let coarse = stencil(h)?;
    let fine = stencil(0.5 * h)?;
    check_stable(coarse, fine)?;
    Ok((4.0 * fine - coarse) / 3.0)
}

fn partial<F: Fn(&Coords) -> Result<f64>>(f: &F, a: usize, h: f64) -> Result<f64> {
    let at = |s: f64| {
        let mut c = [0.0; 6];
        c[a] = s;
        f(&c)
    };
    let stencil = |h: f64| -> Result<f64> { Ok((at(h)? - at(-h)?) / (2.0 * h)) };
    let coarse = stencil(h)?;
    let fine = stencil(0.5 * h)?;
    check_stable(coarse, fine)?;
    Ok((4.0 * fine - coarse) / 3.0)
}

fn check_stable(coarse: f64, fine: f64) -> Result<()> {
    if !(coarse.is_finite() && fine.is_finite()) {
        return Err(Error::Differentiation("non-finite difference quotient".into()));
    }
    let scale = coarse.abs().max(fine.abs());
    if (coarse - fine).abs() > 1e-2 * scale && (coarse - fine).abs() > 1e-9 {
        return Err(Error::Differentiation(format!(
            "difference quotients disagree: {coarse} at h, {fine} at h/2"
        )));
    }
    Ok(())
}

/// `∂/∂u^{(*)} ∂/∂v^{(*)}` for complex variables stored at coordinate
/// pairs `u`, `v`; `conj_u` selects `∂/∂u*`.
fn wirtinger2<F: Fn(&Coords) -> Result<f64>>(
    f: &F,
    u: usize,
    conj_u: bool,
    v: usize,
    conj_v: bool,
    h: f64,
) -> Result<Complex64> {
    let su = if conj_u { 1.0 } else { -1.0 };
    let sv = if conj_v { 1.0 } else { -1.0 };
    let xx = mixed_partial(f, u, v, h)?;
    let xy = mixed_partial(f, u, v + 1, h)?;
    let yx = mixed_partial(f, u + 1, v, h)?;
    let yy = mixed_partial(f, u + 1, v + 1, h)?;
    Ok(0.25 * Complex64::new(xx - su * sv * yy, sv * xy + su * yx))
}

fn wirtinger1<F: Fn(&Coords) -> Result<f64>>(f: &F, u: usize, conj_u: bool, h: f64) -> Result<Complex64> {
    let s = if conj_u { 1.0 } else { -1.0 };
    Ok(0.5 * Complex64::new(partial(f, u, h)?, s * partial(f, u + 1, h)?))
}

/// `χ − 1`. The stencils are linear, so dropping the constant is exact and
/// keeps the tiny smeared field derivatives clear of roundoff.
fn chi_of(engine: &ChiEngine<'_>, bumps: &[Bump], c: &Coords) -> Result<f64> {
    let mut tf = TestFunction::atomic(Complex64::new(c[0], c[1]));
    for (k, b) in bumps.iter().enumerate() {
        tf.xi.push((Complex64::new(c[2 + 2 * k], c[3 + 2 * k]), *b));
    }
    engine.chi(&tf)?;
    Ok(engine.log_chi(&tf)?.exp_m1())
}

fn functional_moment(
    params: &ModelParams,
    pi: &PiDistribution,
    which: Moment,
    width: f64,
    h: f64,
) -> Result<Complex64> {
    let bumps: Vec<Bump> = match which {
        Moment::BDaggerB { nu, nu_prime } => vec![Bump::new(nu, width)?, Bump::new(nu_prime, width)?],
        Moment::AB { nu } => vec![Bump::new(nu, width)?],
        _ => Vec::new(),
    };
    let engine = ChiEngine::new(params, pi, &bumps)?;
    let f = |c: &Coords| chi_of(&engine, &bumps, c);
    Ok(match which {
        Moment::ASquared => wirtinger2(&f, 0, true, 0, true, h)?,
        Moment::Number => -wirtinger2(&f, 0, false, 0, true, h)?,
        Moment::AMean => -wirtinger1(&f, 0, true, h)?,
        Moment::ADaggerMean => wirtinger1(&f, 0, false, h)?,
        Moment::BDaggerB { .. } => {
            -wirtinger2(&f, 2, false, 4, true, h)? / (bump_integral(&bumps[0]) * bump_integral(&bumps[1]))
        }
        Moment::AB { .. } => wirtinger2(&f, 0, true, 2, true, h)? / bump_integral(&bumps[0]),
    })
}

/// Extracts `which` by finite differences of `χ`. Functional derivatives
/// are smeared with bumps of width `opts.width` and `opts.width/2` and
/// extrapolated to zero width.
pub fn moment_by_differentiation(
    params: &ModelParams,
    pi: &PiDistribution,
    which: Moment,
    opts: &DiffOptions,
) -> Result<Complex64> {
    if !(opts.step > 0.0 && opts.width > 0.0) {
        return Err(Error::Config("step and width must be positive".into()));
    }
    match which {
        Moment::BDaggerB { .. } | Moment::AB { .. } => {
            let wide = functional_moment(params, pi, which, opts.width, opts.step)?;
            let narrow = functional_moment(params, pi, which, 0.5 * opts.width, opts.step)?;
            Ok((4.0 * narrow - wide) / 3.0)
        }
        _ => functional_moment(params, pi, which, opts.width, opts.step),
    }
}

/// `⟨b†(ν)b(ν')⟩ = V(ν)V(ν') Ω₀/4 ∫ π(x)/(x (x+ν)(x+ν')) dx`.
pub fn field_number_correlation(params: &ModelParams, pi: &PiDistribution, nu: f64, nu_prime: f64) -> f64 {
    if params.is_uncoupled() {
        return 0.0;
    }
    let vv = (model::v2_unchecked(params, nu) * model::v2_unchecked(params, nu_prime)).sqrt();
    vv * params.omega0 / 4.0 * pi.expect(|x| 1.0 / (x * (x + nu) * (x + nu_prime)))
}
