//! Two identical oscillators with position coupling `−2g m Ω₀² x₁x₂ / 2`,
//! i.e. `V = p₁²/2m + p₂²/2m + ½mΩ₀²(x₁² + x₂² − 2g x₁x₂)`, with `ħ = 1`.
//!
//! The normal modes are `(x₁ ± x₂)/√2` at frequencies `Ω₀√(1 ∓ g)`.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairParams {
    pub m: f64,
    pub omega0: f64,
    pub g: f64,
}

impl PairParams {
    pub fn new(m: f64, omega0: f64, g: f64) -> Result<Self> {
        let p = Self { m, omega0, g };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.m.is_finite() && self.m > 0.0 && self.omega0.is_finite() && self.omega0 > 0.0) {
            return Err(Error::Domain("mass and frequency must be positive".into()));
        }
        if !(self.g.abs() < 1.0) {
            return Err(Error::ThresholdViolation { omega0: 1.0, omega_t: self.g.abs() });
        }
        Ok(())
    }

    fn roots(&self) -> (f64, f64) {
        ((1.0 - self.g).sqrt(), (1.0 + self.g).sqrt())
    }

    /// Mass-scaled stiffness matrix `Ω₀²[[1, −g], [−g, 1]]`.
    pub fn stiffness(&self) -> [[f64; 2]; 2] {
        let w2 = self.omega0 * self.omega0;
        [[w2, -self.g * w2], [-self.g * w2, w2]]
    }
}

/// `½Ω₀(√(1−g) + √(1+g))`.
pub fn pair_ground_energy(p: &PairParams) -> Result<f64> {
    p.validate()?;
    let (lo, hi) = p.roots();
    Ok(0.5 * p.omega0 * (lo + hi))
}

/// Energy held by one oscillator, `⟨p₁²/2m + ½mΩ₀²x₁²⟩`.
pub fn pair_single_oscillator_energy(p: &PairParams) -> Result<f64> {
    p.validate()?;
    let (lo, hi) = p.roots();
    Ok(p.omega0 / 8.0 * (lo + hi + 1.0 / lo + 1.0 / hi))
}

/// Cross correlations between the oscillators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairCorrelations {
    /// `⟨x₁x₂⟩`.
    pub xx: f64,
    /// `⟨p₁p₂⟩`.
    pub pp: f64,
    /// `⟨x₁p₂⟩`.
    pub xp: f64,
    /// `⟨p₁x₂⟩`.
    pub px: f64,
}

pub fn pair_correlations(p: &PairParams) -> Result<PairCorrelations> {
    p.validate()?;
    let (lo, hi) = p.roots();
    Ok(PairCorrelations {
        xx: (1.0 / lo - 1.0 / hi) / (4.0 * p.m * p.omega0),
        pp: p.m * p.omega0 / 4.0 * (lo - hi),
        xp: 0.0,
        px: 0.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::Matrix2;

    fn unit(g: f64) -> PairParams {
        PairParams::new(1.0, 1.0, g).unwrap()
    }

    #[test]
    fn uncoupled_values() {
        assert_eq!(pair_ground_energy(&unit(0.0)).unwrap(), 1.0);
        assert_eq!(pair_single_oscillator_energy(&unit(0.0)).unwrap(), 0.5);
        let c = pair_correlations(&unit(0.0)).unwrap();
        assert_eq!((c.xx, c.pp, c.xp, c.px), (0.0, 0.0, 0.0, 0.0));
    }

    #[test]
    fn reference_values_at_g_06() {
        let p = unit(0.6);
        assert!((pair_ground_energy(&p).unwrap() - 0.9486833).abs() < 1e-7);
        assert!((pair_single_oscillator_energy(&p).unwrap() - 0.5336344).abs() < 1e-7);
        let c = pair_correlations(&p).unwrap();
        assert!((c.xx - 0.1976424).abs() < 1e-7);
        assert!((c.pp + 0.1581139).abs() < 1e-7);
    }

    #[test]
    fn symmetric_in_g_and_bounded() {
        for g in [0.1, 0.4, 0.8, 0.99] {
            let e = pair_ground_energy(&unit(g)).unwrap();
            assert_eq!(e, pair_ground_energy(&unit(-g)).unwrap());
            assert!(e < 1.0);
            let single = pair_single_oscillator_energy(&unit(g)).unwrap();
            assert!(single > 0.5 && single > e / 2.0);
            let c = pair_correlations(&unit(g)).unwrap();
            assert!(c.xx * g > 0.0 && c.pp * g < 0.0);
        }
    }

    #[test]
    fn unstable_coupling_rejected() {
        assert!(PairParams::new(1.0, 1.0, 1.0).is_err());
        assert!(PairParams::new(1.0, 1.0, -1.5).is_err());
        assert!(PairParams::new(0.0, 1.0, 0.2).is_err());
    }

    #[test]
    fn matches_matrix_square_roots() {
        // ⟨xx⟩ = ½K^{-1/2}, ⟨pp⟩ = ½K^{1/2} in mass-scaled coordinates
        for g in [-0.7, 0.3, 0.6] {
            let p = PairParams::new(1.0, 1.3, g).unwrap();
            let k = p.stiffness();
            let eig = Matrix2::new(k[0][0], k[0][1], k[1][0], k[1][1]).symmetric_eigen();
            let root = |pw: f64| {
                let d = Matrix2::from_diagonal(&eig.eigenvalues.map(|l| l.powf(pw)));
                eig.eigenvectors * d * eig.eigenvectors.transpose()
            };
            let xx = 0.5 * root(-0.5);
            let pp = 0.5 * root(0.5);
            let c = pair_correlations(&p).unwrap();
            assert!((xx[(0, 1)] - c.xx).abs() < 1e-12);
            assert!((pp[(0, 1)] - c.pp).abs() < 1e-12);
            let energy = 0.5 * eig.eigenvalues.map(f64::sqrt).sum();
            assert!((energy - pair_ground_energy(&p).unwrap()).abs() < 1e-12);
            let single = 0.5 * pp[(0, 0)] + 0.5 * k[0][0] * xx[(0, 0)];
            assert!((single - pair_single_oscillator_energy(&p).unwrap()).abs() < 1e-12);
        }
    }
}
