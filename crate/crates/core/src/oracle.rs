//! Finite-mode ground truth.
//!
//! The continuum is replaced by `M` modes from a quadrature rule,
//! `b_j = w_j^{-1/2} ∫_cell b(ω) dω`, with couplings `V_j = V(ω_j)√w_j`. The
//! interaction only couples positions, so in mass-scaled coordinates the
//! Hamiltonian is `½pᵀp + ½xᵀKx` and the ground state has
//! `⟨xxᵀ⟩ = ½K^{-1/2}`, `⟨ppᵀ⟩ = ½K^{1/2}`. No Bogoliubov transformation is
//! needed.
//!
//! `K` is an arrowhead matrix: `K₀₀ = Ω₀²`, `K_jj = ω_j²`,
//! `K₀ⱼ = V_j√(Ω₀ω_j)`. Its eigenpairs come from the secular equation
//! `Ω₀² − λ − Σ K₀ⱼ²/(ω_j² − λ) = 0`, one root per gap between poles, each
//! solved relative to its nearest pole so that `λ − ω_j²` keeps full
//! precision. Eigenvectors are `(1, K₀ⱼ/(λ − ω_j²))` up to normalization.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fano::PiDistribution;
use crate::model::{self, ModelParams};
use crate::observables::{self, MomentSet};

/// Largest Gauss–Laguerre order before the Golub–Welsch weights lose all
/// precision in `e^{t}` scaling.
pub const GAUSS_LAGUERRE_MAX: usize = 160;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiscretizationRule {
    /// Midpoint nodes on `M` equal panels over `(0, X]`.
    LinearPanel,
    /// Gauss–Laguerre nodes scaled by `ω_c`, weights carrying `e^{ω/ω_c}`.
    GaussLaguerreScaled,
}

impl std::str::FromStr for DiscretizationRule {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "linear-panel" => Ok(Self::LinearPanel),
            "gauss-laguerre-scaled" => Ok(Self::GaussLaguerreScaled),
            other => Err(Error::InvalidRule(format!(
                "unknown rule '{other}' (expected linear-panel or gauss-laguerre-scaled)"
            ))),
        }
    }
}

impl std::fmt::Display for DiscretizationRule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::LinearPanel => "linear-panel",
            Self::GaussLaguerreScaled => "gauss-laguerre-scaled",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiscretizedModel {
    pub mode_freqs: Vec<f64>,
    pub mode_weights: Vec<f64>,
    /// `V_j = V(ω_j)√w_j`.
    pub couplings: Vec<f64>,
    pub omega0: f64,
}

impl DiscretizedModel {
    /// A model from explicit modes; couplings may have either sign.
    pub fn from_modes(
        omega0: f64,
        mode_freqs: Vec<f64>,
        mode_weights: Vec<f64>,
        couplings: Vec<f64>,
    ) -> Result<Self> {
        if mode_freqs.len() != couplings.len() || mode_freqs.len() != mode_weights.len() {
            return Err(Error::InvalidRule("mode arrays differ in length".into()));
        }
        if !(omega0 > 0.0) || mode_freqs.iter().any(|&w| !(w > 0.0)) {
            return Err(Error::Domain("frequencies must be positive".into()));
        }
        if mode_weights.iter().any(|&w| !(w > 0.0)) {
            return Err(Error::InvalidRule("weights must be positive".into()));
        }
        if mode_freqs.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::InvalidRule("mode frequencies must be strictly increasing".into()));
        }
        Ok(Self { mode_freqs, mode_weights, couplings, omega0 })
    }

    pub fn len(&self) -> usize {
        self.mode_freqs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mode_freqs.is_empty()
    }

    /// `Σ V_j²/ω_j`, the discrete counterpart of `Ω_T`.
    pub fn threshold(&self) -> f64 {
        self.couplings.iter().zip(&self.mode_freqs).map(|(v, w)| v * v / w).sum()
    }

    fn arrow(&self) -> Vec<f64> {
        let w0 = self.omega0;
        self.couplings.iter().zip(&self.mode_freqs).map(|(v, w)| v * (w0 * w).sqrt()).collect()
    }

    /// Dense stiffness matrix; only for small `M`.
    pub fn stiffness_dense(&self) -> DMatrix<f64> {
        let n = self.len() + 1;
        let c = self.arrow();
        let mut k = DMatrix::zeros(n, n);
        k[(0, 0)] = self.omega0 * self.omega0;
        for j in 0..self.len() {
            k[(j + 1, j + 1)] = self.mode_freqs[j].powi(2);
            k[(0, j + 1)] = c[j];
            k[(j + 1, 0)] = c[j];
        }
        k
    }

    pub fn is_positive_definite(&self) -> bool {
        self.omega0 > self.threshold()
    }
}

fn gauss_laguerre(m: usize) -> (Vec<f64>, Vec<f64>) {
    // Golub–Welsch on the Laguerre Jacobi matrix
    let mut j = DMatrix::<f64>::zeros(m, m);
    for i in 0..m {
        j[(i, i)] = (2 * i + 1) as f64;
        if i + 1 < m {
            j[(i, i + 1)] = (i + 1) as f64;
            j[(i + 1, i)] = (i + 1) as f64;
        }
    }
    let eig = SymmetricEigen::new(j);
    let mut pairs: Vec<(f64, f64)> =
        (0..m).map(|k| (eig.eigenvalues[k], eig.eigenvectors[(0, k)].powi(2))).collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    pairs.into_iter().unzip()
}

pub fn discretize(params: &ModelParams, m: usize, rule: DiscretizationRule) -> Result<DiscretizedModel> {
    params.validate()?;
    if m < 2 {
        return Err(Error::InvalidRule(format!("need at least 2 modes, got {m}")));
    }
    let wc = params.omega_c;
    let (nodes, weights) = match rule {
        DiscretizationRule::LinearPanel => {
            let x = params.quadrature().truncation;
            let h = x / m as f64;
            ((0..m).map(|j| (j as f64 + 0.5) * h).collect::<Vec<_>>(), vec![h; m])
        }
        DiscretizationRule::GaussLaguerreScaled => {
            if m > GAUSS_LAGUERRE_MAX {
                return Err(Error::InvalidRule(format!(
                    "gauss-laguerre-scaled supports at most {GAUSS_LAGUERRE_MAX} modes, got {m}"
                )));
            }
            let (t, w) = gauss_laguerre(m);
            let nodes: Vec<f64> = t.iter().map(|t| wc * t).collect();
            let weights: Vec<f64> = t.iter().zip(&w).map(|(t, w)| wc * (w.ln() + t).exp()).collect();
            (nodes, weights)
        }
    };
    let couplings =
        nodes.iter().zip(&weights).map(|(&w, &q)| (model::v2_unchecked(params, w) * q).sqrt()).collect();
    DiscretizedModel::from_modes(params.omega0, nodes, weights, couplings)
}

/// One eigenpair of `K`, with `λ = base + tau`.
#[derive(Debug, Clone, Copy)]
struct SecularRoot {
    base: f64,
    tau: f64,
    /// Atom component of the unit eigenvector.
    v0: f64,
}

/// Ground-state covariance of the discretized model, with entries of
/// `⟨xxᵀ⟩` and `⟨ppᵀ⟩` produced on demand from the eigenpairs of `K`.
#[derive(Debug, Clone)]
pub struct CovarianceMatrix {
    omega0: f64,
    freqs: Vec<f64>,
    /// Squared mode frequencies.
    poles: Vec<f64>,
    arrow: Vec<f64>,
    /// Secular roots, ascending.
    roots: Vec<SecularRoot>,
    /// Modes with zero coupling; each is its own eigenvector.
    deflated: Vec<usize>,
}

/// `R(τ) = d0 − base − τ − Σ_{j≠skip} c_j²/(e_j − base − τ)` and `R'(τ)`.
fn secular_rest(
    d0: f64,
    arrow: &[f64],
    poles: &[f64],
    active: &[usize],
    skip: Option<usize>,
    base: f64,
    tau: f64,
) -> (f64, f64) {
    let mut f = d0 - base - tau;
    let mut df = -1.0;
    for &j in active {
        if Some(j) == skip {
            continue;
        }
        let d = (poles[j] - base) - tau;
        let c2 = arrow[j] * arrow[j];
        f -= c2 / d;
        df -= c2 / (d * d);
    }
    (f, df)
}

/// Root of the secular function between two poles (`None` for the
/// interval ends at 0 and above the spectrum).
fn solve_root(
    d0: f64,
    arrow: &[f64],
    poles: &[f64],
    active: &[usize],
    left: (f64, Option<usize>),
    right: (f64, Option<usize>),
) -> SecularRoot {
    let mid = 0.5 * (left.0 + right.0);
    let (f_mid, _) = secular_rest(d0, arrow, poles, active, None, 0.0, mid);
    // measure tau from the pole nearest the root
    let root_right = f_mid > 0.0;
    let (base, pole, mut lo, mut hi) = match (root_right, right.1, left.1) {
        (true, Some(j), _) => (right.0, Some(j), mid - right.0, 0.0),
        (true, None, _) => (left.0, left.1, mid - left.0, right.0 - left.0),
        (false, _, Some(j)) => (left.0, Some(j), 0.0, mid - left.0),
        (false, _, None) => (left.0, None, 0.0, mid - left.0),
    };
    let c2 = pole.map_or(0.0, |j| arrow[j] * arrow[j]);
    // Newton on g(τ) = τ f(τ) = τ R(τ) + c_b², which has no pole at τ = 0
    let mut tau = match pole {
        Some(_) => {
            let (r0, _) = secular_rest(d0, arrow, poles, active, pole, base, 0.0);
            -c2 / r0
        }
        None => 0.5 * (lo + hi),
    };
    if !(tau > lo && tau < hi) {
        tau = 0.5 * (lo + hi);
    }
    for _ in 0..300 {
        let (r, dr) = secular_rest(d0, arrow, poles, active, pole, base, tau);
        let (g, dg) = if pole.is_some() { (tau * r + c2, r + tau * dr) } else { (r, dr) };
        // sign of f = g/τ; f decreases in τ
        let f_sign = if pole.is_some() { g * tau.signum() } else { g };
        if f_sign == 0.0 {
            break;
        }
        if f_sign > 0.0 {
            lo = tau;
        } else {
            hi = tau;
        }
        let step = g / dg;
        if step.abs() <= 2.0 * f64::EPSILON * tau.abs() {
            break;
        }
        let newton = tau - step;
        tau = if newton > lo && newton < hi { newton } else { 0.5 * (lo + hi) };
        if hi - lo <= 4.0 * f64::EPSILON * tau.abs().max(f64::MIN_POSITIVE) {
            break;
        }
    }
    let mut s = 1.0;
    for &j in active {
        let d = (poles[j] - base) - tau;
        s += (arrow[j] / d).powi(2);
    }
    SecularRoot { base, tau, v0: 1.0 / s.sqrt() }
}

pub fn ground_covariance(dm: &DiscretizedModel) -> Result<CovarianceMatrix> {
    let omega_t = dm.threshold();
    if !dm.is_positive_definite() {
        return Err(Error::ThresholdViolation { omega0: dm.omega0, omega_t });
    }
    let d0 = dm.omega0 * dm.omega0;
    let poles: Vec<f64> = dm.mode_freqs.iter().map(|w| w * w).collect();
    let arrow = dm.arrow();
    let (active, deflated): (Vec<usize>, Vec<usize>) = (0..dm.len()).partition(|&j| arrow[j] != 0.0);
    let gersh = d0 + arrow.iter().map(|c| c.abs()).sum::<f64>();
    let top = poles.iter().cloned().fold(gersh, f64::max) + arrow.iter().map(|c| c.abs()).fold(0.0, f64::max);
    let mut edges = Vec::with_capacity(active.len() + 2);
    edges.push((0.0, None));
    edges.extend(active.iter().map(|&j| (poles[j], Some(j))));
    edges.push((top, None));
    let roots: Vec<SecularRoot> =
        edges.par_windows(2).map(|w| solve_root(d0, &arrow, &poles, &active, w[0], w[1])).collect();
    let lambda_min = roots.first().map(|r| r.base + r.tau).unwrap_or(d0);
    let lambda_max = roots.last().map(|r| r.base + r.tau).unwrap_or(d0);
    if !(lambda_min > 1e-12 * lambda_max) {
        return Err(Error::ThresholdViolation { omega0: dm.omega0, omega_t });
    }
    Ok(CovarianceMatrix { omega0: dm.omega0, freqs: dm.mode_freqs.clone(), poles, arrow, roots, deflated })
}

impl CovarianceMatrix {
    /// Number of coordinates, `M + 1`.
    pub fn dim(&self) -> usize {
        self.freqs.len() + 1
    }

    /// Eigenvalues of `K`, ascending among the coupled ones, then the
    /// decoupled mode frequencies squared.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = self.roots.iter().map(|r| r.base + r.tau).collect();
        ev.extend(self.deflated.iter().map(|&j| self.poles[j]));
        ev
    }

    /// Frequency of coordinate `i` (0 is the atom).
    fn nu(&self, i: usize) -> f64 {
        if i == 0 {
            self.omega0
        } else {
            self.freqs[i - 1]
        }
    }

    /// Component `i` of the eigenvector for secular root `r`.
    fn component(&self, r: &SecularRoot, i: usize) -> f64 {
        if i == 0 {
            return r.v0;
        }
        let j = i - 1;
        if self.arrow[j] == 0.0 {
            return 0.0;
        }
        let d = r.tau - (self.poles[j] - r.base);
        r.v0 * self.arrow[j] / d
    }

    /// `Σ_k v_k[i] v_k[j] h(λ_k)`, deflated modes included.
    fn spectral_sum<H: Fn(f64) -> f64>(&self, i: usize, j: usize, h: H) -> f64 {
        let mut s = 0.0;
        for r in &self.roots {
            s += self.component(r, i) * self.component(r, j) * h(r.base + r.tau);
        }
        for &d in &self.deflated {
            if i == d + 1 && j == d + 1 {
                s += h(self.poles[d]);
            }
        }
        s
    }

    /// `⟨x_i x_j⟩ = ½(K^{-1/2})_{ij}`.
    pub fn xx(&self, i: usize, j: usize) -> f64 {
        0.5 * self.spectral_sum(i, j, |l| 1.0 / l.sqrt())
    }

    /// `⟨p_i p_j⟩ = ½(K^{1/2})_{ij}`.
    pub fn pp(&self, i: usize, j: usize) -> f64 {
        0.5 * self.spectral_sum(i, j, f64::sqrt)
    }

    /// `(K^{-1})_{00}`.
    pub fn inverse_atom_entry(&self) -> f64 {
        self.spectral_sum(0, 0, |l| 1.0 / l)
    }

    /// `⟨c_i†c_i⟩` for the ladder operator of coordinate `i`, summed
    /// without cancellation.
    pub fn number(&self, i: usize) -> f64 {
        let nu = self.nu(i);
        0.25 * self.spectral_sum(i, i, |l| {
            let s = l.sqrt();
            (s - nu).powi(2) / (nu * s)
        })
    }

    /// `⟨c_i† c_j⟩`, real and symmetric.
    pub fn number_cross(&self, i: usize, j: usize) -> f64 {
        if i == j {
            return self.number(i);
        }
        let g = (self.nu(i) * self.nu(j)).sqrt();
        0.25 * self.spectral_sum(i, j, |l| {
            let s = l.sqrt();
            g / s + s / g
        })
    }

    /// `⟨c_i c_j⟩`, real.
    pub fn anomalous(&self, i: usize, j: usize) -> f64 {
        let g = (self.nu(i) * self.nu(j)).sqrt();
        0.25 * self.spectral_sum(i, j, |l| {
            let s = l.sqrt();
            g / s - s / g
        })
    }

    /// `⟨(c_i + c_i†)(c_j + c_j†)⟩` for `i ≠ j`.
    pub fn x_correlation(&self, i: usize, j: usize) -> f64 {
        2.0 * (self.nu(i) * self.nu(j)).sqrt() * self.xx(i, j)
    }

    /// `⟨[−i(c_i − c_i†)][−i(c_j − c_j†)]⟩` for `i ≠ j`.
    pub fn p_correlation(&self, i: usize, j: usize) -> f64 {
        2.0 * self.pp(i, j) / (self.nu(i) * self.nu(j)).sqrt()
    }

    /// `½ Σ √λ`.
    pub fn ground_energy(&self) -> f64 {
        0.5 * self.eigenvalues().iter().map(|l| l.sqrt()).sum::<f64>()
    }

    /// `tr(½⟨ppᵀ⟩ + ½K⟨xxᵀ⟩)`, from the covariance entries.
    pub fn trace_energy(&self) -> f64 {
        let n = self.dim();
        // collected before summing so the result does not depend on scheduling
        let diag: Vec<f64> = (0..n)
            .into_par_iter()
            .map(|i| {
                let k_ii = if i == 0 { self.omega0 * self.omega0 } else { self.poles[i - 1] };
                0.5 * self.pp(i, i) + 0.5 * k_ii * self.xx(i, i)
            })
            .collect();
        let off: Vec<f64> = (1..n).into_par_iter().map(|j| self.arrow[j - 1] * self.xx(0, j)).collect();
        diag.iter().sum::<f64>() + off.iter().sum::<f64>()
    }

    /// Dense blocks `(⟨xxᵀ⟩, ⟨ppᵀ⟩)`; only for small `M`.
    pub fn dense_blocks(&self) -> (DMatrix<f64>, DMatrix<f64>) {
        let n = self.dim();
        let x = DMatrix::from_fn(n, n, |i, j| self.xx(i, j));
        let p = DMatrix::from_fn(n, n, |i, j| self.pp(i, j));
        (x, p)
    }
}

/// Ground covariance from a dense symmetric eigendecomposition.
pub fn dense_covariance(dm: &DiscretizedModel) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
    let eig = SymmetricEigen::new(dm.stiffness_dense());
    let max = eig.eigenvalues.max();
    if eig.eigenvalues.min() <= 1e-12 * max {
        return Err(Error::ThresholdViolation { omega0: dm.omega0, omega_t: dm.threshold() });
    }
    let f = |p: f64| {
        let d = DMatrix::from_diagonal(&eig.eigenvalues.map(|l| 0.5 * l.powf(p)));
        &eig.eigenvectors * d * eig.eigenvectors.transpose()
    };
    Ok((f(-0.5), f(0.5)))
}

/// Continuum observables read off the discretized ground state.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleObservables {
    pub moments: MomentSet,
    pub mode_freqs: Vec<f64>,
    /// `⟨b_j†b_j⟩/w_j`, approximating `N(ω_j)`.
    pub photon_density: Vec<f64>,
    /// `⟨(a+a†)(b_j+b_j†)⟩/√w_j`.
    pub x_b_plus: Vec<f64>,
    /// `⟨[−i(a−a†)][−i(b_j−b_j†)]⟩/√w_j`.
    pub p_b_minus: Vec<f64>,
    /// `⟨a b_j⟩/√w_j`.
    pub cross_ab: Vec<f64>,
    pub ground_energy: f64,
    pub trace_energy: f64,
    pub threshold: f64,
    /// `1/(K^{-1})₀₀`, which equals `Ω₀(Ω₀ − threshold)`.
    pub atom_schur: f64,
}

pub fn atom_moments(cov: &CovarianceMatrix) -> MomentSet {
    let w0 = cov.omega0;
    let var_x = w0 * cov.spectral_sum(0, 0, |l| 1.0 / l.sqrt());
    let var_p = cov.spectral_sum(0, 0, f64::sqrt) / w0;
    let mean_excitation = cov.number(0);
    MomentSet {
        avg_omega: var_p * w0,
        avg_inv_omega: var_x / w0,
        var_x_quadrature: var_x,
        var_p_quadrature: var_p,
        atom_energy: w0 * (mean_excitation + 0.5),
        mean_excitation,
        a_squared: cov.anomalous(0, 0),
    }
}

pub fn oracle_observables(cov: &CovarianceMatrix, dm: &DiscretizedModel) -> OracleObservables {
    let m = dm.len();
    let per_mode: Vec<[f64; 4]> = (1..=m)
        .into_par_iter()
        .map(|i| {
            let sw = dm.mode_weights[i - 1].sqrt();
            [
                cov.number(i) / dm.mode_weights[i - 1],
                cov.x_correlation(0, i) / sw,
                cov.p_correlation(0, i) / sw,
                cov.anomalous(0, i) / sw,
            ]
        })
        .collect();
    OracleObservables {
        moments: atom_moments(cov),
        mode_freqs: dm.mode_freqs.clone(),
        photon_density: per_mode.iter().map(|r| r[0]).collect(),
        x_b_plus: per_mode.iter().map(|r| r[1]).collect(),
        p_b_minus: per_mode.iter().map(|r| r[2]).collect(),
        cross_ab: per_mode.iter().map(|r| r[3]).collect(),
        ground_energy: cov.ground_energy(),
        trace_energy: cov.trace_energy(),
        threshold: dm.threshold(),
        atom_schur: 1.0 / cov.inverse_atom_entry(),
    }
}

/// `⟨b_j b_k⟩/√(w_j w_k)` for mode indices `j`, `k` (0-based).
pub fn oracle_coherence(cov: &CovarianceMatrix, dm: &DiscretizedModel, j: usize, k: usize) -> f64 {
    cov.anomalous(j + 1, k + 1) / (dm.mode_weights[j] * dm.mode_weights[k]).sqrt()
}

/// Index of the mode nearest `omega`.
/// Normal-ordered `ln χ` of the finite-mode ground state for atomic argument
/// `eta` and field argument `xi`, sampled as `ζ_j = ξ(ω_j)√w_j`. Modes where
/// `ξ` vanishes are skipped, so narrow test functions stay cheap.
pub fn oracle_log_chi<F: Fn(f64) -> Complex64>(
    cov: &CovarianceMatrix,
    dm: &DiscretizedModel,
    eta: Complex64,
    xi: F,
) -> f64 {
    let mut active: Vec<(usize, Complex64)> = vec![(0, eta)];
    for (j, (&w, &wt)) in dm.mode_freqs.iter().zip(&dm.mode_weights).enumerate() {
        let z = xi(w) * wt.sqrt();
        if z != Complex64::new(0.0, 0.0) {
            active.push((j + 1, z));
        }
    }
    let rows: Vec<f64> = active
        .par_iter()
        .map(|&(i, zi)| {
            let mut acc = 0.0;
            for &(j, zj) in &active {
                acc += 0.5 * cov.anomalous(i, j) * (2.0 * (zi * zj).re);
                acc -= cov.number_cross(i, j) * (zi.conj() * zj).re;
            }
            acc
        })
        .collect();
    rows.iter().sum()
}

pub fn nearest_mode(dm: &DiscretizedModel, omega: f64) -> usize {
    match dm.mode_freqs.binary_search_by(|w| w.total_cmp(&omega)) {
        Ok(i) => i,
        Err(0) => 0,
        Err(i) if i >= dm.len() => dm.len() - 1,
        Err(i) => {
            if omega - dm.mode_freqs[i - 1] < dm.mode_freqs[i] - omega {
                i - 1
            } else {
                i
            }
        }
    }
}

/// Observables compared in a convergence study.
pub const STUDY_COLUMNS: [&str; 6] =
    ["mean_excitation", "a_squared", "atom_energy", "photon_density", "x_b_plus", "cross_ab"];

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRow {
    pub modes: usize,
    /// Relative errors, in the order of [`STUDY_COLUMNS`].
    pub errors: [f64; 6],
}

fn rel(a: f64, b: f64) -> f64 {
    if b == 0.0 {
        a.abs()
    } else {
        ((a - b) / b).abs()
    }
}

/// Relative errors of oracle observables against the continuum formulas.
/// Field observables are compared at the mode nearest `probe`.
pub fn convergence_study(
    params: &ModelParams,
    pi: &PiDistribution,
    modes: &[usize],
    rule: DiscretizationRule,
    probe: f64,
) -> Result<Vec<ConvergenceRow>> {
    if modes.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Config("mode counts must be increasing".into()));
    }
    let exact = observables::compute_moments(params, pi)?;
    let mut rows = Vec::with_capacity(modes.len());
    for &m in modes {
        let dm = discretize(params, m, rule)?;
        let cov = ground_covariance(&dm)?;
        let obs = oracle_observables(&cov, &dm);
        let j = nearest_mode(&dm, probe);
        let w = dm.mode_freqs[j];
        let n = observables::photon_density_at(params, pi, w);
        let xb = observables::x_b_plus_at(params, pi, w);
        let ab = observables::cross_moment_ab(params, pi, w)?.re;
        rows.push(ConvergenceRow {
            modes: m,
            errors: [
                rel(obs.moments.mean_excitation, exact.mean_excitation),
                rel(obs.moments.a_squared, exact.a_squared),
                rel(obs.moments.atom_energy, exact.atom_energy),
                rel(obs.photon_density[j], n),
                rel(obs.x_b_plus[j], xb),
                rel(obs.cross_ab[j], ab),
            ],
        });
    }
    Ok(rows)
}

/// True when each error is at most 10% above its predecessor or already
/// below `floor`.
pub fn is_monotone(errors: &[f64], floor: f64) -> bool {
    errors.windows(2).all(|w| w[1] <= 1.1 * w[0] || w[1] <= floor)
}

/// Bisects the `Ω₀` at which the discretized stiffness matrix stops being
/// positive definite.
pub fn positive_definite_flip(params: &ModelParams, m: usize, rule: DiscretizationRule) -> Result<f64> {
    let pd = |w0: f64| -> Result<bool> {
        Ok(discretize(&params.with_omega0(w0), m, rule)?.is_positive_definite())
    };
    let mut hi = params.omega0.max(1e-300);
    while !pd(hi)? {
        hi *= 2.0;
        if !hi.is_finite() {
            return Err(Error::Range("no positive-definite bare frequency".into()));
        }
    }
    let mut lo = hi;
    while pd(lo)? {
        lo *= 0.5;
        if lo < 1e-300 {
            return Ok(0.0);
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if pd(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}
