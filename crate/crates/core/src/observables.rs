//! Ground-state expectation values written as averages over `π(ω)`.
//!
//! Inner integrals over `π` run on the tabulated rule of a
//! [`PiDistribution`]; principal values subtract the pole value and add the
//! logarithm analytically. Outer frequency integrals are adaptive.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fano::{FanoSolver, PiDistribution};
use crate::model::{self, ModelParams, Units};
use crate::quadrature;

/// Normalization defect tolerated before an input `π` is rejected.
pub const NORM_TOL: f64 = 1e-5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentSet {
    /// `⟨⟨ω⟩⟩`.
    pub avg_omega: f64,
    /// `⟨⟨ω⁻¹⟩⟩`.
    pub avg_inv_omega: f64,
    /// `⟨(a+a†)²⟩`.
    pub var_x_quadrature: f64,
    /// `−⟨(a−a†)²⟩`.
    pub var_p_quadrature: f64,
    /// `ħΩ₀⟨a†a + ½⟩`.
    pub atom_energy: f64,
    /// `⟨a†a⟩`.
    pub mean_excitation: f64,
    /// `⟨a²⟩`, real.
    pub a_squared: f64,
}

impl MomentSet {
    pub fn uncertainty_product(&self) -> f64 {
        self.var_x_quadrature * self.var_p_quadrature
    }
}

pub fn compute_moments(params: &ModelParams, pi: &PiDistribution) -> Result<MomentSet> {
    params.validate()?;
    pi.require_normalized(NORM_TOL)?;
    let w0 = params.omega0;
    let avg_omega = pi.expect(|w| w);
    let avg_inv_omega = pi.expect(|w| 1.0 / w);
    let var_x = w0 * avg_inv_omega;
    let var_p = avg_omega / w0;
    let mean_excitation = 0.25 * (var_x + var_p - 2.0);
    let a_squared = 0.25 * (var_x - var_p);
    let set = MomentSet {
        avg_omega,
        avg_inv_omega,
        var_x_quadrature: var_x,
        var_p_quadrature: var_p,
        atom_energy: params.hbar() * w0 * (mean_excitation + 0.5),
        mean_excitation,
        a_squared,
    };
    let lhs_x = 1.0 + 2.0 * mean_excitation + 2.0 * a_squared;
    let lhs_p = 1.0 + 2.0 * mean_excitation - 2.0 * a_squared;
    if (lhs_x - var_x).abs() > 1e-8 * var_x || (lhs_p - var_p).abs() > 1e-8 * var_p {
        return Err(Error::Validation("moment identities violated".into()));
    }
    Ok(set)
}

/// `⟨a†a⟩ = ∫|β|²` and `⟨a²⟩ = −∫α*β`, summed directly from the Fano
/// coefficients on the grid.
pub fn moments_from_coefficients(params: &ModelParams, pi: &PiDistribution) -> Result<(f64, f64)> {
    if pi.is_point_mass() {
        return Ok((0.0, 0.0));
    }
    let w0 = params.omega0;
    let mut n = 0.0;
    let mut a2 = 0.0;
    for ((&x, &w), &y) in pi.grid.iter().zip(&pi.weights).zip(&pi.y_values) {
        let v = model::v2_unchecked(params, x).sqrt();
        let alpha = Complex64::new((x + w0) / (w0 * v), 0.0) / Complex64::new(y, -PI);
        let beta = alpha * ((x - w0) / (x + w0));
        n += w * beta.norm_sqr();
        a2 -= w * (alpha.conj() * beta).re;
    }
    Ok((n, a2))
}

#[derive(Debug, Clone, PartialEq)]
pub struct PhotonSpectrum {
    pub grid: Vec<f64>,
    /// `N(ω)`.
    pub density: Vec<f64>,
    /// `S(ω) = ω N(ω)`.
    pub spectrum: Vec<f64>,
    pub total_number: f64,
    /// `∫ħωN dω`.
    pub total_energy: f64,
    /// Cut-off the totals depend on.
    pub omega_c: f64,
}

/// `N(ω) = V²(ω) Ω₀/4 ∫ π(x)/(x (x+ω)²) dx` at one frequency.
pub fn photon_density_at(params: &ModelParams, pi: &PiDistribution, omega: f64) -> f64 {
    if omega == 0.0 || params.is_uncoupled() {
        return 0.0;
    }
    let w0 = params.omega0;
    model::v2_unchecked(params, omega) * w0 / 4.0 * pi.expect(|x| 1.0 / (x * (x + omega).powi(2)))
}

fn check_grid(pi: &PiDistribution, grid: &[f64]) -> Result<()> {
    let limit = if pi.is_point_mass() { f64::INFINITY } else { pi.upper };
    for &w in grid {
        if !(w >= 0.0 && w <= limit) {
            return Err(Error::Domain(format!("frequency {w} outside the resolvable range [0, {limit}]")));
        }
    }
    Ok(())
}

pub fn photon_spectral_density(
    params: &ModelParams,
    pi: &PiDistribution,
    grid: &[f64],
) -> Result<PhotonSpectrum> {
    pi.require_normalized(NORM_TOL)?;
    check_grid(pi, grid)?;
    let density: Vec<f64> = grid.par_iter().map(|&w| photon_density_at(params, pi, w)).collect();
    let spectrum = grid.iter().zip(&density).map(|(w, n)| w * n).collect();
    let cfg = params.quadrature();
    let (total_number, total_energy) = if params.is_uncoupled() {
        (0.0, 0.0)
    } else {
        let n = quadrature::integrate_semi_infinite(|w| photon_density_at(params, pi, w), &cfg)?;
        let e = quadrature::integrate_semi_infinite(|w| w * photon_density_at(params, pi, w), &cfg)?;
        (n.value, params.hbar() * e.value)
    };
    Ok(PhotonSpectrum {
        grid: grid.to_vec(),
        density,
        spectrum,
        total_number,
        total_energy,
        omega_c: params.omega_c,
    })
}

/// `P∫ π(x) g(x)/(x − pole) dx` on the tabulated rule, given
/// `c = π(pole) g(pole)`.
fn rule_principal_value<G: Fn(f64) -> f64>(pi: &PiDistribution, g: G, pole: f64, c: f64) -> Result<f64> {
    if !(pole > 0.0 && pole < pi.upper) {
        return Err(Error::Domain(format!("pole {pole} outside (0, {})", pi.upper)));
    }
    let mut sum = 0.0;
    for ((&x, &w), &p) in pi.grid.iter().zip(&pi.weights).zip(&pi.values) {
        let d = x - pole;
        if d.abs() <= 1e-13 * pole {
            continue;
        }
        sum += w * (p * g(x) - c) / d;
    }
    Ok(sum + c * ((pi.upper - pole) / pole).ln())
}

/// `π(ω)` and `π(ω)Y(ω)` at an arbitrary frequency.
fn pi_and_pi_y(solver: &FanoSolver, omega: f64) -> Result<(f64, f64)> {
    let v2 = solver.v2(omega);
    let d = solver.denominator(omega)?;
    let den = solver.params.omega0 * (d * d + PI * PI * v2 * v2);
    Ok((4.0 * omega * v2 / den, 4.0 * omega * d / den))
}

/// `⟨b(ω) b(ω')⟩`.
pub fn field_coherence(
    params: &ModelParams,
    pi: &PiDistribution,
    omega: f64,
    omega_prime: f64,
) -> Result<Complex64> {
    if !(omega > 0.0 && omega_prime > 0.0) {
        return Err(Error::Domain("coherence needs positive frequencies".into()));
    }
    if params.is_uncoupled() {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let solver = FanoSolver::new(params)?;
    coherence_with(&solver, pi, omega, omega_prime)
}

fn coherence_with(
    solver: &FanoSolver,
    pi: &PiDistribution,
    omega: f64,
    omega_prime: f64,
) -> Result<Complex64> {
    let params = &solver.params;
    let (p_w, py_w) = pi_and_pi_y(solver, omega)?;
    let g = |x: f64| 1.0 / (x * (x + omega_prime));
    let pv = rule_principal_value(pi, g, omega, p_w * g(omega))?;
    let vv = (solver.v2(omega) * solver.v2(omega_prime)).sqrt();
    let value = -vv * params.omega0 / 4.0 * (pv + py_w / (omega * (omega + omega_prime)));
    Ok(Complex64::new(value, 0.0))
}

/// `⟨a b(ν)⟩ = −½∫[γ*(ω,ν)β(ω) + δ(ω,ν)α*(ω)]dω`.
pub fn cross_moment_ab(params: &ModelParams, pi: &PiDistribution, nu: f64) -> Result<Complex64> {
    if !(nu > 0.0) {
        return Err(Error::Domain(format!("nu must be positive, got {nu}")));
    }
    if params.is_uncoupled() {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let solver = FanoSolver::new(params)?;
    cross_ab_with(&solver, pi, nu)
}

fn cross_ab_with(solver: &FanoSolver, pi: &PiDistribution, nu: f64) -> Result<Complex64> {
    let w0 = solver.params.omega0;
    let v = solver.v2(nu).sqrt();
    let (p_nu, py_nu) = pi_and_pi_y(solver, nu)?;
    let g = |x: f64| (x - w0) / x;
    let pv = rule_principal_value(pi, g, nu, p_nu * g(nu))?;
    let gamma_beta = v / 4.0 * (pv + py_nu * (nu - w0) / nu);
    let delta_alpha = v / 4.0 * pi.expect(|x| (x + w0) / (x * (x + nu)));
    Ok(Complex64::new(-0.5 * (gamma_beta + delta_alpha), 0.0))
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationSet {
    pub grid: Vec<f64>,
    /// `⟨(a+a†)(b(ω)+b†(ω))⟩`.
    pub x_b_plus: Vec<f64>,
    /// `⟨[−i(a−a†)][−i(b(ω)−b†(ω))]⟩`.
    pub p_b_minus: Vec<f64>,
    /// `⟨[−i(a−a†)](b+b†)⟩`.
    pub cross_zero_1: Vec<f64>,
    /// `⟨(a+a†)[−i(b−b†)]⟩`.
    pub cross_zero_2: Vec<f64>,
    /// `⟨z E_z(0)⟩`; in reduced units the unit is `(ħ²/(12π²ε₀c³mΩ₀))^{1/2}`.
    pub z_e: f64,
    /// `⟨ż Ė_z(0)⟩` in the same unit as `z_e`.
    pub dz_de: f64,
    /// `⟨b(ω_i) b(ω_j)⟩`, row-major over `grid`.
    pub coherence_bb: Vec<Vec<f64>>,
    /// `⟨a b(ν)⟩` over `grid`.
    pub cross_ab: Vec<f64>,
}

/// The four pieces `⟨(a+a†)b⟩`, `⟨(a+a†)b†⟩`, `⟨(a−a†)b⟩`, `⟨(a−a†)b†⟩`.
fn quadrature_field_pieces(params: &ModelParams, pi: &PiDistribution, omega: f64) -> [f64; 4] {
    if params.is_uncoupled() {
        return [0.0; 4];
    }
    let w0 = params.omega0;
    let v = model::v2_unchecked(params, omega).sqrt();
    let x_piece = -0.5 * v * w0 * pi.expect(|x| 1.0 / (x * (x + omega)));
    let p_piece = 0.5 * v * pi.expect(|x| 1.0 / (x + omega));
    [x_piece, x_piece, -p_piece, p_piece]
}

/// `⟨(a+a†)(b(ω)+b†(ω))⟩`.
pub fn x_b_plus_at(params: &ModelParams, pi: &PiDistribution, omega: f64) -> f64 {
    let [xb, xbd, _, _] = quadrature_field_pieces(params, pi, omega);
    xb + xbd
}

/// `⟨[−i(a−a†)][−i(b(ω)−b†(ω))]⟩ = −⟨(a−a†)b⟩ + ⟨(a−a†)b†⟩`.
pub fn p_b_minus_at(params: &ModelParams, pi: &PiDistribution, omega: f64) -> f64 {
    let [_, _, pb, pbd] = quadrature_field_pieces(params, pi, omega);
    -(pb - pbd)
}

/// Prefactor `(ħ²/(12π²ε₀c³mΩ₀))^{1/2}` of `⟨z E⟩` (1 in reduced units).
pub fn field_correlation_unit(params: &ModelParams) -> f64 {
    match params.units {
        Units::Reduced => 1.0,
        Units::Physical(c) => {
            (c.hbar * c.hbar / (12.0 * PI * PI * c.epsilon0 * c.c.powi(3) * c.mass * params.omega0)).sqrt()
        }
    }
}

pub fn atom_field_correlations(
    params: &ModelParams,
    pi: &PiDistribution,
    grid: &[f64],
) -> Result<CorrelationSet> {
    pi.require_normalized(NORM_TOL)?;
    params.require_below_threshold()?;
    check_grid(pi, grid)?;
    let pieces: Vec<[f64; 4]> = grid.par_iter().map(|&w| quadrature_field_pieces(params, pi, w)).collect();
    let x_b_plus = pieces.iter().map(|p| p[0] + p[1]).collect();
    let p_b_minus = pieces.iter().map(|p| -(p[2] - p[3])).collect();
    // −i(a−a†)(b+b†) has real part from the imaginary parts of the pieces,
    // which vanish; its remaining content is the sum of the p-pieces
    let cross_zero_1 = pieces.iter().map(|p| p[2] + p[3]).collect();
    let cross_zero_2 = pieces.iter().map(|p| p[0] - p[1]).collect();

    let (z_e, dz_de) = if params.is_uncoupled() {
        (0.0, 0.0)
    } else {
        // V(ω) decays like e^{−ω/2ω_c}
        let cfg = params.quadrature();
        let cfg = cfg.with_tolerances(1e-9, 1e-15).covering(cfg.truncation);
        let z = quadrature::integrate_semi_infinite(|w| w.powf(1.5) * x_b_plus_at(params, pi, w), &cfg)?;
        let d = quadrature::integrate_semi_infinite(|w| w.powf(2.5) * p_b_minus_at(params, pi, w), &cfg)?;
        let unit = field_correlation_unit(params);
        (unit * z.value, unit * params.omega0 * d.value)
    };

    let (coherence_bb, cross_ab) = if params.is_uncoupled() {
        (vec![vec![0.0; grid.len()]; grid.len()], vec![0.0; grid.len()])
    } else {
        let solver = FanoSolver::new(params)?;
        let positive = |w: f64| {
            if w > 0.0 {
                Ok(())
            } else {
                Err(Error::Domain("coherence grid must be positive".into()))
            }
        };
        grid.iter().try_for_each(|&w| positive(w))?;
        let rows = grid
            .par_iter()
            .map(|&w| {
                grid.iter()
                    .map(|&wp| coherence_with(&solver, pi, w, wp).map(|c| c.re))
                    .collect::<Result<Vec<f64>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let ab = grid
            .par_iter()
            .map(|&nu| cross_ab_with(&solver, pi, nu).map(|c| c.re))
            .collect::<Result<Vec<f64>>>()?;
        (rows, ab)
    };

    Ok(CorrelationSet {
        grid: grid.to_vec(),
        x_b_plus,
        p_b_minus,
        cross_zero_1,
        cross_zero_2,
        z_e,
        dz_de,
        coherence_bb,
        cross_ab,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fano::{pi_distribution, PiGrid};

    fn reference() -> (ModelParams, PiDistribution) {
        let p = ModelParams::reduced(0.5, 1.0, 0.01).unwrap();
        let pi = pi_distribution(&p, &PiGrid::default()).unwrap();
        (p, pi)
    }

    #[test]
    fn uncoupled_moments() {
        let p = ModelParams::reduced(0.7, 1.0, 0.0).unwrap();
        let pi = pi_distribution(&p, &PiGrid::default()).unwrap();
        let m = compute_moments(&p, &pi).unwrap();
        assert_eq!(m.avg_omega, 0.7);
        assert!((1.0 / m.avg_inv_omega - 0.7).abs() < 1e-15);
        assert!((m.atom_energy - 0.35).abs() < 1e-15);
        assert!(m.mean_excitation.abs() < 1e-15);
        assert!(m.a_squared.abs() < 1e-15);
    }

    #[test]
    fn coupled_moment_inequalities() {
        let (p, pi) = reference();
        let m = compute_moments(&p, &pi).unwrap();
        assert!(m.avg_omega * m.avg_inv_omega > 1.0);
        assert!(m.uncertainty_product() > 1.0);
        assert!(m.atom_energy > 0.5 * p.omega0);
        assert!(m.mean_excitation > 0.0);
    }

    #[test]
    fn moments_agree_with_coefficient_sums() {
        let (p, pi) = reference();
        let m = compute_moments(&p, &pi).unwrap();
        let (n, a2) = moments_from_coefficients(&p, &pi).unwrap();
        assert!((n - m.mean_excitation).abs() < 1e-9 * m.mean_excitation);
        assert!((a2 - m.a_squared).abs() < 1e-9 * m.a_squared.abs());
    }

    #[test]
    fn unnormalized_pi_is_rejected() {
        let (p, mut pi) = reference();
        pi.norm = 0.9;
        assert!(matches!(compute_moments(&p, &pi), Err(Error::Validation(_))));
    }

    #[test]
    fn photon_density_is_positive_and_vanishes_at_zero() {
        let (p, pi) = reference();
        let grid: Vec<f64> = (0..40).map(|i| 0.1 * i as f64).collect();
        let s = photon_spectral_density(&p, &pi, &grid).unwrap();
        assert_eq!(s.density[0], 0.0);
        assert!(s.density[1..].iter().all(|&n| n > 0.0));
        assert!(s.total_number.is_finite() && s.total_number > 0.0);
        assert!(s.total_energy > 0.0);
    }

    #[test]
    fn photon_density_grows_as_omega0_drops() {
        let grid: Vec<f64> = (1..30).map(|i| 0.2 * i as f64).collect();
        let mut prev: Option<Vec<f64>> = None;
        for w0 in [0.3, 0.6, 1.2] {
            let p = ModelParams::reduced(w0, 1.0, 0.01).unwrap();
            let pi = pi_distribution(&p, &PiGrid::default()).unwrap();
            let s = photon_spectral_density(&p, &pi, &grid).unwrap();
            if let Some(prev) = prev {
                assert!(prev.iter().zip(&s.density).all(|(a, b)| a > b));
            }
            prev = Some(s.density);
        }
    }

    #[test]
    fn weak_coupling_matches_first_order_perturbation() {
        let a = 1e-7;
        let p = ModelParams::reduced(0.5, 1.0, a).unwrap();
        let pi = pi_distribution(&p, &PiGrid::default()).unwrap();
        let w0 = 0.5;
        for w in [0.2, 0.9, 2.0] {
            let v = model::v2_unchecked(&p, w).sqrt();
            let xb = x_b_plus_at(&p, &pi, w);
            assert!((xb / (-v / (w0 + w)) - 1.0).abs() < 1e-4);
            let ab = cross_moment_ab(&p, &pi, w).unwrap().re;
            assert!((ab / (-v / (2.0 * (w0 + w))) - 1.0).abs() < 1e-4, "ab {ab}");
            let n = photon_density_at(&p, &pi, w);
            assert!((n / (v * v / (4.0 * (w0 + w).powi(2))) - 1.0).abs() < 1e-4);
            for wp in [0.4, 1.1] {
                let vp = model::v2_unchecked(&p, wp).sqrt();
                let c = field_coherence(&p, &pi, w, wp).unwrap().re;
                let exact = v * vp * (2.0 * w0 + w + wp) / (4.0 * (w0 + w) * (w0 + wp) * (w + wp));
                assert!((c / exact - 1.0).abs() < 1e-4, "coherence {c} vs {exact}");
            }
        }
    }

    #[test]
    fn coherence_is_symmetric() {
        let (p, pi) = reference();
        let a = field_coherence(&p, &pi, 0.4, 0.9).unwrap();
        let b = field_coherence(&p, &pi, 0.9, 0.4).unwrap();
        assert!((a - b).norm() < 1e-6 * a.norm(), "{a} vs {b}");
        let near = field_coherence(&p, &pi, pi.resonance.center, 1.3).unwrap();
        let swap = field_coherence(&p, &pi, 1.3, pi.resonance.center).unwrap();
        assert!((near - swap).norm() < 1e-6 * near.norm());
    }

    #[test]
    fn correlation_signs_on_reference_set() {
        let (p, pi) = reference();
        let grid: Vec<f64> = (1..12).map(|i| 0.25 * i as f64).collect();
        let c = atom_field_correlations(&p, &pi, &grid).unwrap();
        assert!(c.x_b_plus.iter().all(|&v| v < 0.0));
        assert!(c.p_b_minus.iter().all(|&v| v > 0.0));
        assert!(c.cross_zero_1.iter().chain(&c.cross_zero_2).all(|&v| v.abs() < 1e-15));
        assert!(c.z_e < 0.0);
        assert!(c.dz_de > 0.0);
        for i in 0..grid.len() {
            for j in 0..grid.len() {
                let (a, b) = (c.coherence_bb[i][j], c.coherence_bb[j][i]);
                assert!((a - b).abs() <= 1e-6 * a.abs().max(b.abs()));
            }
        }
    }

    #[test]
    fn uncoupled_correlations_vanish() {
        let p = ModelParams::reduced(0.5, 1.0, 0.0).unwrap();
        let pi = pi_distribution(&p, &PiGrid::default()).unwrap();
        let c = atom_field_correlations(&p, &pi, &[0.3, 0.6]).unwrap();
        assert!(c.x_b_plus.iter().all(|&v| v == 0.0));
        assert_eq!(c.z_e, 0.0);
        assert_eq!(field_coherence(&p, &pi, 0.3, 0.6).unwrap().norm(), 0.0);
        assert_eq!(cross_moment_ab(&p, &pi, 0.3).unwrap().norm(), 0.0);
    }
}
