//! Donor ground-state density at the nucleus, the Fermi contact formula, the
//! central-cell energy shift and the inter-donor exchange coupling.

use std::f64::consts::PI;

use serde::Serialize;

use crate::constants::{nm_to_cm, MaterialParams, PhysicalConstants};
use crate::error::{Error, Result};
use crate::numerics::{find_root, RootResult};
use crate::single_donor::FieldConfig;

/// Densities in cm⁻³.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GroundStateModel {
    pub material: MaterialParams,
    /// (F_j(0))², envelope density at the nucleus.
    pub f0_sq: f64,
    /// |Ψ₀(0)|².
    pub contact_density: f64,
}

impl GroundStateModel {
    /// From the variational envelope: F_j(0)² = 1/(π a_t² a_l).
    pub fn variational(material: MaterialParams) -> Result<Self> {
        let contact_density = contact_density_variational(&material)?;
        let f0_sq = 1.0 / (PI * nm_to_cm(material.a_t).powi(2) * nm_to_cm(material.a_l));
        Ok(GroundStateModel { material, f0_sq, contact_density })
    }

    /// From a measured contact density.
    pub fn from_contact_density(material: MaterialParams, contact_density: f64) -> Result<Self> {
        let f0_sq = modulation_density_from_experiment(contact_density, &material)?;
        Ok(GroundStateModel { material, f0_sq, contact_density })
    }
}

fn bloch_factor(material: &MaterialParams) -> Result<f64> {
    material.bloch_factor.ok_or_else(|| {
        Error::InvalidInput(format!("no Bloch amplitude |ψ(k_j,0)|² registered for {}", material.host))
    })
}

/// valley_count · |ψ(k_j,0)|² / (π a_t² a_l), cm⁻³.
pub fn contact_density_variational(material: &MaterialParams) -> Result<f64> {
    if !(material.a_t > 0.0 && material.a_l > 0.0) {
        return Err(Error::InvalidInput("variational radii must be positive".into()));
    }
    let bloch = bloch_factor(material)?;
    let volume = PI * nm_to_cm(material.a_t).powi(2) * nm_to_cm(material.a_l);
    Ok(material.valley_count as f64 * bloch / volume)
}

/// A = (8π/3) |Ψ₀(0)|² · 2μ_B g_N μ_N · μ₀/4π, returned in MHz.
pub fn hyperfine_constant_fermi(consts: &PhysicalConstants, contact_density: f64, g_n: f64) -> f64 {
    let joule = 8.0 * PI / 3.0
        * contact_density
        * 2.0
        * consts.mu_b
        * g_n
        * consts.mu_n
        * consts.mu0_over_4pi;
    consts.to_frequency(joule)
}

/// Inverse of the Fermi formula: contact density (cm⁻³) from A in MHz.
pub fn contact_density_from_hyperfine(consts: &PhysicalConstants, a_mhz: f64, g_n: f64) -> f64 {
    a_mhz / hyperfine_constant_fermi(consts, 1.0, g_n)
}

/// (F_j(0))² = |Ψ₀(0)|² / (valley_count · |ψ(k_j,0)|²).
pub fn modulation_density_from_experiment(contact_density: f64, material: &MaterialParams) -> Result<f64> {
    let bloch = bloch_factor(material)?;
    Ok(contact_density / (material.valley_count as f64 * bloch))
}

/// ΔE_d = (2π/3) F_j(0)² · q²/(4π ε_s ε₀) · r̄², in eV.
///
/// `f0_sq` in cm⁻³, `r_sq_mean` in cm².
pub fn energy_shift_potential_deviation(
    consts: &PhysicalConstants,
    f0_sq: f64,
    r_sq_mean: f64,
    eps_s: f64,
) -> f64 {
    let coulomb = consts.q * consts.q / (4.0 * PI * eps_s * consts.eps0); // J·cm
    consts.joule_to_ev(2.0 * PI / 3.0 * f0_sq * coulomb * r_sq_mean)
}

/// r.m.s. radius (nm) of the central-cell region that produces `shift_ev`.
pub fn deviation_radius_for_shift(consts: &PhysicalConstants, f0_sq: f64, shift_ev: f64, eps_s: f64) -> f64 {
    let per_cm2 = energy_shift_potential_deviation(consts, f0_sq, 1.0, eps_s);
    (shift_ev / per_cm2).sqrt() * 1e7
}

/// Asymptotic exchange J(l) = 1.6 · q²/(4π ε ε₀ a_t) · (l/a_t)^{5/2} · e^{−2l/a_t}.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExchangeModel {
    /// nm
    pub a_t: f64,
    pub eps_s: f64,
    /// q²/(4π ε_s ε₀ a_t) in MHz.
    pub prefactor: f64,
}

pub const EXCHANGE_COEFFICIENT: f64 = 1.6;

/// Below this l/a_t the asymptotic form is flagged as unreliable.
pub const EXCHANGE_VALIDITY_RATIO: f64 = 3.0;

impl ExchangeModel {
    pub fn new(consts: &PhysicalConstants, a_t: f64, eps_s: f64) -> Result<Self> {
        if !(a_t > 0.0 && eps_s > 0.0) {
            return Err(Error::InvalidInput("a_t and eps_s must be positive".into()));
        }
        let prefactor = consts.to_frequency(consts.coulomb_energy(eps_s, a_t));
        Ok(ExchangeModel { a_t, eps_s, prefactor })
    }

    pub fn for_material(consts: &PhysicalConstants, material: &MaterialParams, a_t: Option<f64>) -> Result<Self> {
        Self::new(consts, a_t.unwrap_or(material.a_t), material.eps_s)
    }

    /// J(l) in MHz, `l` in nm.
    pub fn coupling(&self, l: f64) -> f64 {
        let x = l / self.a_t;
        EXCHANGE_COEFFICIENT * self.prefactor * x.powf(2.5) * (-2.0 * x).exp()
    }

    /// d ln J / dl in nm⁻¹.
    pub fn log_derivative(&self, l: f64) -> f64 {
        2.5 / l - 2.0 / self.a_t
    }

    pub fn is_asymptotic(&self, l: f64) -> bool {
        l / self.a_t >= EXCHANGE_VALIDITY_RATIO
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExchangeValue {
    /// MHz
    pub j: f64,
    /// false when l/a_t < 3
    pub asymptotic: bool,
}

pub fn exchange_coupling(l: f64, model: &ExchangeModel) -> Result<ExchangeValue> {
    if !(l > 0.0) {
        return Err(Error::InvalidInput(format!("inter-donor distance must be positive, got {l}")));
    }
    Ok(ExchangeValue { j: model.coupling(l), asymptotic: model.is_asymptotic(l) })
}

pub const CROSSING_TOL_NM: f64 = 1e-10;

/// Distance l* (nm) where J(l*) = 2μ_B B, bisected on [a_t, 100 a_t].
pub fn crossing_distance(
    consts: &PhysicalConstants,
    field: FieldConfig,
    model: &ExchangeModel,
) -> Result<RootResult> {
    if !(field.b > 0.0) {
        return Err(Error::InvalidInput("crossing distance needs B > 0".into()));
    }
    let target = consts.electron_zeeman(field.b);
    // ln J − ln target keeps the function well scaled over many decades
    find_root(
        |l| model.coupling(l).ln() - target.ln(),
        model.a_t,
        100.0 * model.a_t,
        CROSSING_TOL_NM,
    )
}
