//! Real-line quadrature: adaptive Gauss–Kronrod on finite intervals,
//! semi-infinite integrals with a mapped tail, principal values by pole
//! subtraction, and smeared pairings of distributional kernels.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

/// A quadrature result with its estimated absolute error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

impl Estimate {
    pub fn new(value: f64, error: f64) -> Self {
        Self { value, error }
    }

    fn plus(self, other: Estimate) -> Estimate {
        Estimate::new(self.value + other.value, self.error + other.error)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Split point between the adaptive finite part and the mapped tail.
    pub truncation: f64,
    /// Maximum number of adaptive panels per integral.
    pub panels: usize,
    /// Half-width of the window around a pole inside which the subtracted
    /// integrand is replaced by a centred difference.
    pub pole_guard: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self::for_cutoff(1.0)
    }
}

impl QuadratureConfig {
    /// Defaults for integrands bounded by a polynomial times `e^{-ω/ω_c}`.
    /// The truncation `X` satisfies `e^{-X/ω_c} (X/ω_c)³ < abs_tol`.
    pub fn for_cutoff(omega_c: f64) -> Self {
        let abs_tol = 1e-14;
        let mut t: f64 = 1.0;
        while (-t).exp() * t.powi(3) >= abs_tol {
            t += 0.5;
        }
        Self { rel_tol: 1e-9, abs_tol, truncation: t * omega_c, panels: 4000, pole_guard: 1e-5 * omega_c }
    }

    pub fn with_tolerances(mut self, rel_tol: f64, abs_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self.abs_tol = abs_tol;
        self
    }

    /// Moves the truncation out far enough to keep `point` well inside it.
    pub fn covering(mut self, point: f64) -> Self {
        if point * 1.5 > self.truncation {
            self.truncation = 2.0 * point;
        }
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.abs_tol > 0.0) {
            return Err(Error::Config("quadrature tolerances must be positive".into()));
        }
        if !(self.truncation > 0.0 && self.truncation.is_finite()) {
            return Err(Error::Config("quadrature truncation must be positive".into()));
        }
        if self.panels == 0 {
            return Err(Error::Config("quadrature panel budget must be positive".into()));
        }
        Ok(())
    }
}

// 15-point Kronrod nodes (non-negative half) and weights, with the embedded
// 7-point Gauss weights.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.000_000_000_000_000_000_000_000_000_000_000,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    abs: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Panel {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    let mut abs = kronrod.abs();
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];
    for j in 0..7 {
        let x = half * XGK[j];
        let f1 = f(center - x);
        let f2 = f(center + x);
        fv1[j] = f1;
        fv2[j] = f2;
        kronrod += WGK[j] * (f1 + f2);
        abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * kronrod;
    let mut asc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let h = half.abs();
    let value = kronrod * half;
    abs *= h;
    asc *= h;
    let mut error = ((kronrod - gauss) * half).abs();
    if asc != 0.0 && error != 0.0 {
        error = asc * (200.0 * error / asc).powf(1.5).min(1.0);
    }
    if abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(50.0 * f64::EPSILON * abs);
    }
    Panel { a, b, value, error, abs }
}

/// Adaptive Gauss–Kronrod integration of `f` over `[a, b]`, with the
/// interval pre-split at every breakpoint strictly inside it.
pub fn integrate<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    breakpoints: &[f64],
    cfg: &QuadratureConfig,
) -> Result<Estimate> {
    if a == b {
        return Ok(Estimate::new(0.0, 0.0));
    }
    if !(a.is_finite() && b.is_finite()) || a > b {
        return Err(Error::Domain(format!("bad integration interval [{a}, {b}]")));
    }
    let mut cuts: Vec<f64> = breakpoints.iter().copied().filter(|&x| x > a && x < b).collect();
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let mut edges = Vec::with_capacity(cuts.len() + 2);
    edges.push(a);
    edges.extend(cuts);
    edges.push(b);

    let mut heap = BinaryHeap::with_capacity(edges.len() * 4);
    for w in edges.windows(2) {
        if w[1] > w[0] {
            heap.push(gk15(&f, w[0], w[1]));
        }
    }
    let width_floor = 64.0 * f64::EPSILON * (b - a).abs().max(a.abs()).max(b.abs());
    let mut frozen = Estimate::new(0.0, 0.0);
    let mut frozen_abs = 0.0;
    loop {
        let (mut value, mut error, mut abs) = (frozen.value, frozen.error, frozen_abs);
        for p in heap.iter() {
            value += p.value;
            error += p.error;
            abs += p.abs;
        }
        if !value.is_finite() {
            return Err(Error::QuadratureFailure { estimate: value, error });
        }
        let tol = cfg.abs_tol.max(cfg.rel_tol * value.abs());
        if error <= tol || error <= 100.0 * f64::EPSILON * abs || heap.is_empty() {
            return Ok(Estimate::new(value, error));
        }
        if heap.len() + 1 >= cfg.panels {
            return Err(Error::QuadratureFailure { estimate: value, error });
        }
        let worst = heap.pop().expect("non-empty heap");
        let mid = 0.5 * (worst.a + worst.b);
        if worst.b - worst.a <= width_floor {
            // cannot split further; keep the panel out of the queue
            frozen = frozen.plus(Estimate::new(worst.value, worst.error));
            frozen_abs += worst.abs;
            continue;
        }
        heap.push(gk15(&f, worst.a, mid));
        heap.push(gk15(&f, mid, worst.b));
    }
}

/// `∫_a^∞ f`, adaptive on `[a, X]` plus the tail `[X, ∞)` mapped onto
/// `[0, 1)` by `x = X + t/(1-t)`.
pub fn integrate_from<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    breakpoints: &[f64],
    cfg: &QuadratureConfig,
) -> Result<Estimate> {
    cfg.validate()?;
    let split = cfg.truncation.max(a);
    let head = integrate(&f, a, split, breakpoints, cfg)?;
    let tail_cfg = QuadratureConfig { abs_tol: cfg.abs_tol.max(cfg.rel_tol * head.value.abs()), ..*cfg };
    let tail = integrate(
        |t: f64| {
            let s = 1.0 - t;
            let v = f(split + t / s) / (s * s);
            if v.is_finite() {
                v
            } else {
                0.0
            }
        },
        0.0,
        1.0,
        &[],
        &tail_cfg,
    )?;
    Ok(head.plus(tail))
}

/// `∫₀^∞ f(ω) dω` for a continuous integrand with exponential decay.
pub fn integrate_semi_infinite<F: Fn(f64) -> f64>(f: F, cfg: &QuadratureConfig) -> Result<Estimate> {
    integrate_from(f, 0.0, &[], cfg)
}

/// A kernel in the integration variable `ω'`:
/// `smooth(ω')/(ω − ω')` (or just `smooth(ω')` without a pole) plus
/// `delta_coeff · δ(ω − ω')`.
pub struct SingularKernel<'a> {
    pub smooth: Box<dyn Fn(f64) -> f64 + 'a>,
    pub pole: Option<f64>,
    pub delta_coeff: f64,
    /// Points where `smooth` has structure worth splitting at.
    pub breakpoints: Vec<f64>,
}

impl<'a> SingularKernel<'a> {
    pub fn new(smooth: impl Fn(f64) -> f64 + 'a, pole: Option<f64>, delta_coeff: f64) -> Self {
        Self { smooth: Box::new(smooth), pole, delta_coeff, breakpoints: Vec::new() }
    }

    pub fn pure_delta(at: f64, coeff: f64) -> Self {
        Self { smooth: Box::new(|_| 0.0), pole: Some(at), delta_coeff: coeff, breakpoints: Vec::new() }
    }

    pub fn zero() -> Self {
        Self::new(|_| 0.0, None, 0.0)
    }

    pub fn with_breakpoints(mut self, breakpoints: Vec<f64>) -> Self {
        self.breakpoints = breakpoints;
        self
    }

    /// `∫ K(ω') g(ω') dω'` with the delta part applied analytically.
    pub fn pair<G: Fn(f64) -> f64>(&self, g: G, cfg: &QuadratureConfig) -> Result<f64> {
        let product = SingularKernel {
            smooth: Box::new(|x| (self.smooth)(x) * g(x)),
            pole: self.pole,
            delta_coeff: 0.0,
            breakpoints: self.breakpoints.clone(),
        };
        let integral = principal_value(&product, cfg)?.value;
        let delta = match self.pole {
            Some(at) if self.delta_coeff != 0.0 => self.delta_coeff * g(at),
            _ => 0.0,
        };
        Ok(integral + delta)
    }
}

/// `P∫₀^∞ smooth(ω')/(ω − ω') dω'`, or the plain integral of `smooth` when
/// the kernel has no pole. The delta part is not included.
///
/// Uses `P∫₀^X f/(ω−ω') = ∫₀^X [f(ω') − f(ω)]/(ω − ω') dω' + f(ω) ln(ω/(X−ω))`
/// and integrates the tail beyond `X` directly.
pub fn principal_value(k: &SingularKernel<'_>, cfg: &QuadratureConfig) -> Result<Estimate> {
    cfg.validate()?;
    let Some(pole) = k.pole else {
        return integrate_from(&k.smooth, 0.0, &k.breakpoints, cfg);
    };
    let x_max = cfg.truncation;
    if !(pole > 0.0) || pole >= x_max {
        return Err(Error::Domain(format!("pole {pole} must lie inside (0, {x_max})")));
    }
    let f = &k.smooth;
    let f_pole = f(pole);
    let guard = cfg.pole_guard.min(0.5 * pole).min(0.5 * (x_max - pole));
    let slope = (f(pole + guard) - f(pole - guard)) / (2.0 * guard);
    let regular = |x: f64| {
        let d = pole - x;
        if d.abs() < guard {
            -slope
        } else {
            (f(x) - f_pole) / d
        }
    };
    let mut breaks = k.breakpoints.clone();
    breaks.push(pole);
    let head = integrate(regular, 0.0, x_max, &breaks, cfg)?;
    let log_term = f_pole * (pole / (x_max - pole)).ln();
    let tail = integrate_from(|x| f(x) / (pole - x), x_max, &[], cfg)?;
    Ok(Estimate::new(head.value + log_term + tail.value, head.error + tail.error))
}

/// Composite quadrature rule: `∫ h ≈ Σ weights[i] h(nodes[i])`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl QuadRule {
    pub fn integrate<F: Fn(f64) -> f64>(&self, h: F) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * h(x)).sum()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Gauss–Legendre of order `order` on each panel between consecutive `edges`.
    pub fn composite(edges: &[f64], order: usize) -> Self {
        let (x, w) = gauss_legendre(order);
        let mut nodes = Vec::with_capacity(edges.len() * order);
        let mut weights = Vec::with_capacity(edges.len() * order);
        for e in edges.windows(2) {
            let (c, h) = (0.5 * (e[0] + e[1]), 0.5 * (e[1] - e[0]));
            if h <= 0.0 {
                continue;
            }
            for (xi, wi) in x.iter().zip(&w) {
                nodes.push(c + h * xi);
                weights.push(h * wi);
            }
        }
        Self { nodes, weights }
    }
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`, ascending.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n > 0, "Gauss-Legendre order must be positive");
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, 0.0);
            for j in 0..n {
                let p2 = p1;
                p1 = p0;
                p0 = ((2 * j + 1) as f64 * z * p1 - j as f64 * p2) / (j + 1) as f64;
            }
            dp = n as f64 * (z * p0 - p1) / (z * z - 1.0);
            let dz = p0 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    if n % 2 == 1 {
        x[n / 2] = 0.0;
    }
    (x, w)
}

/// Smeared product of two distributional kernel families,
/// `∫ dx weight(x) ⟨A(x), f⟩ ⟨B(x), g⟩`, evaluated on an outer rule. Each
/// inner pairing expands the delta part analytically and the pole part as a
/// principal value.
pub fn smeared_delta_pairing<'k, W, KA, KB, F, G>(
    outer: &QuadRule,
    weight: W,
    kernel_a: KA,
    kernel_b: KB,
    test_f: F,
    test_g: G,
    cfg: &QuadratureConfig,
) -> Result<f64>
where
    W: Fn(f64) -> f64,
    KA: Fn(f64) -> SingularKernel<'k>,
    KB: Fn(f64) -> SingularKernel<'k>,
    F: Fn(f64) -> f64 + Copy,
    G: Fn(f64) -> f64 + Copy,
{
    let mut total = 0.0;
    for (&x, &w) in outer.nodes.iter().zip(&outer.weights) {
        let mu = weight(x);
        if mu == 0.0 {
            continue;
        }
        let ka = kernel_a(x);
        let kb = kernel_b(x);
        if let (Some(pa), Some(pb)) = (ka.pole, kb.pole) {
            if pa != pb && (pa - pb).abs() < cfg.pole_guard {
                return Err(Error::Refinement(format!("poles at {pa} and {pb} closer than the guard width")));
            }
        }
        let fa = ka.pair(test_f, cfg)?;
        if fa == 0.0 {
            continue;
        }
        let gb = kb.pair(test_g, cfg)?;
        total += w * mu * fa * gb;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> QuadratureConfig {
        QuadratureConfig::for_cutoff(1.0)
    }

    fn factorial(n: u32) -> f64 {
        (1..=n).map(f64::from).product()
    }

    #[test]
    fn gamma_integrals() {
        let c = cfg();
        for k in 0..=6 {
            let r = integrate_semi_infinite(|w| w.powi(k) * (-w).exp(), &c).unwrap();
            let exact = factorial(k as u32);
            assert!((r.value - exact).abs() <= 1e-10 * exact, "k={k}: {}", r.value);
        }
        let r = integrate_semi_infinite(|_| 0.0, &c).unwrap();
        assert_eq!(r.value, 0.0);
    }

    #[test]
    fn gamma_integrals_scaled_cutoff() {
        let wc = 2.5;
        let c = QuadratureConfig::for_cutoff(wc);
        let r = integrate_semi_infinite(|w| w.powi(3) * (-w / wc).exp(), &c).unwrap();
        assert!((r.value / (6.0 * wc.powi(4)) - 1.0).abs() < 1e-10);
    }

    #[test]
    fn pv_polynomial_examples() {
        let c = QuadratureConfig { truncation: 2.0, ..cfg() };
        let k = SingularKernel::new(|x| x, Some(1.0), 0.0);
        // finite domain [0, 2]: the tail integral is over zero-extended smooth
        let head = finite_pv(&k, 2.0, &c);
        assert!((head + 2.0).abs() < 1e-12, "{head}");
        let k = SingularKernel::new(|_| 1.0, Some(1.0), 0.0);
        assert!(finite_pv(&k, 2.0, &c).abs() < 1e-12);
    }

    fn finite_pv(k: &SingularKernel<'_>, x_max: f64, c: &QuadratureConfig) -> f64 {
        let f = &k.smooth;
        let smooth = |x: f64| if x <= x_max { f(x) } else { 0.0 };
        let kk = SingularKernel::new(smooth, k.pole, 0.0);
        principal_value(&kk, c).unwrap().value
    }

    /// Brute-force oracle: symmetric excision `P∫ = lim (∫₀^{ω-ε} + ∫_{ω+ε}^∞)`
    /// on a uniform midpoint grid, using the odd symmetry of `1/(ω−ω')` to
    /// cancel the excised window exactly.
    fn brute_pv_exp(pole: f64, panels: usize) -> f64 {
        let x_max = 60.0;
        let h = x_max / panels as f64;
        let f = |x: f64| (-x).exp();
        let f0 = f(pole);
        let mut sum = 0.0;
        for i in 0..panels {
            let x = (i as f64 + 0.5) * h;
            let d = pole - x;
            sum += if d.abs() < 1e-12 { 0.0 } else { (f(x) - f0) / d * h };
        }
        sum + f0 * (pole / (x_max - pole)).ln()
    }

    #[test]
    fn pv_exponential_against_brute_force() {
        let k = SingularKernel::new(|x| (-x).exp(), Some(1.0), 0.0);
        let v = principal_value(&k, &cfg()).unwrap().value;
        let brute = brute_pv_exp(1.0, 1_000_000);
        assert!((v - brute).abs() < 1e-8, "{v} vs {brute}");
        // closed form: e^{-1} Ei(1)
        let ei1 = 1.895_117_816_355_936_8;
        assert!((v - (-1f64).exp() * ei1).abs() < 1e-10);
    }

    #[test]
    fn pv_independent_of_guard_width() {
        let mk = || SingularKernel::new(|x| x.powi(3) * (-x).exp(), Some(0.7), 0.0);
        let base = principal_value(&mk(), &QuadratureConfig { pole_guard: 1e-5, ..cfg() }).unwrap().value;
        for guard in [1e-6, 1e-4] {
            let v = principal_value(&mk(), &QuadratureConfig { pole_guard: guard, ..cfg() }).unwrap().value;
            assert!((v - base).abs() < 1e-9 * base.abs().max(1.0), "guard {guard}");
        }
    }

    #[test]
    fn pv_domain_errors() {
        let c = cfg();
        let k = SingularKernel::new(|x| x, Some(0.0), 0.0);
        assert!(matches!(principal_value(&k, &c), Err(Error::Domain(_))));
        let k = SingularKernel::new(|x| x, Some(c.truncation + 1.0), 0.0);
        assert!(matches!(principal_value(&k, &c), Err(Error::Domain(_))));
    }

    #[test]
    fn failure_carries_best_estimate() {
        let c = QuadratureConfig { panels: 3, rel_tol: 1e-14, abs_tol: 1e-300, ..cfg() };
        match integrate(|x: f64| (1.0 / x).sin(), 1e-3, 1.0, &[], &c) {
            Err(Error::QuadratureFailure { estimate, error }) => {
                assert!(estimate.is_finite() && error > 0.0);
            }
            other => panic!("expected failure, got {other:?}"),
        }
    }

    #[test]
    fn gauss_legendre_is_exact_for_polynomials() {
        for n in [1usize, 2, 5, 16, 40] {
            let (x, w) = gauss_legendre(n);
            for k in 0..(2 * n) {
                let q: f64 = x.iter().zip(&w).map(|(xi, wi)| wi * xi.powi(k as i32)).sum();
                let exact = if k % 2 == 1 { 0.0 } else { 2.0 / (k as f64 + 1.0) };
                assert!((q - exact).abs() < 1e-13, "n={n} k={k}");
            }
        }
    }

    #[test]
    fn pairing_of_pure_deltas_is_overlap() {
        let outer = QuadRule::composite(&(0..=200).map(|i| i as f64 * 0.02).collect::<Vec<_>>(), 10);
        let f = |x: f64| (-(x - 1.5f64).powi(2) / 0.02).exp();
        let g = |x: f64| (-(x - 1.6f64).powi(2) / 0.03).exp();
        let c = cfg();
        let v = smeared_delta_pairing(
            &outer,
            |_| 1.0,
            |x| SingularKernel::pure_delta(x, 1.0),
            |x| SingularKernel::pure_delta(x, 1.0),
            f,
            g,
            &c,
        )
        .unwrap();
        let direct = integrate(|x| f(x) * g(x), 0.0, 4.0, &[], &c).unwrap().value;
        assert!((v - direct).abs() < 1e-10 * direct);
        let zero = smeared_delta_pairing(
            &outer,
            |_| 1.0,
            |_| SingularKernel::zero(),
            |_| SingularKernel::zero(),
            f,
            g,
            &c,
        )
        .unwrap();
        assert_eq!(zero, 0.0);
    }

    proptest::proptest! {
        #[test]
        fn integration_is_linear(a in -3.0f64..3.0, b in -3.0f64..3.0, s in 0.3f64..3.0) {
            let c = cfg();
            let f = |x: f64| x * x * (-x).exp();
            let g = |x: f64| (x / s).sin().powi(2) * (-x).exp();
            let lhs = integrate_semi_infinite(|x| a * f(x) + b * g(x), &c).unwrap().value;
            let rf = integrate_semi_infinite(f, &c).unwrap().value;
            let rg = integrate_semi_infinite(g, &c).unwrap().value;
            let rhs = a * rf + b * rg;
            proptest::prop_assert!((lhs - rhs).abs() <= 1e-9 * (a.abs() * rf + b.abs() * rg) + 1e-13);
        }
    }
}
