//! Disk-gate electrostatics at the donor and the quadratic Stark reduction of
//! the hyperfine constant.
//!
//! The gate is a conducting disk of radius `a` on the surface of a
//! semi-infinite dielectric; the donor sits on the axis at depth `c`.

use std::f64::consts::PI;

use serde::Serialize;

use crate::constants::per_nm_to_per_cm;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GateGeometry {
    /// Disk radius, nm.
    pub a: f64,
    /// Donor depth below the gate, nm.
    pub c: f64,
    /// Applied voltage, V.
    pub v: f64,
    /// Flat-band voltage, V.
    pub v_fb: f64,
}

impl Default for GateGeometry {
    fn default() -> Self {
        GateGeometry { a: 5.0, c: 10.0, v: 0.0, v_fb: 0.0 }
    }
}

impl GateGeometry {
    pub fn with_voltage(self, v: f64) -> Self {
        GateGeometry { v, ..self }
    }

    pub fn effective_voltage(&self) -> f64 {
        self.v + self.v_fb
    }

    fn validate(&self) -> Result<()> {
        if self.a > 0.0 && self.c > 0.0 && self.v.is_finite() && self.v_fb.is_finite() {
            Ok(())
        } else {
            Err(Error::InvalidInput(format!("gate needs a > 0 and c > 0, got a = {}, c = {}", self.a, self.c)))
        }
    }
}

/// φ(ρ, z) = (2V/π) arctan √(2a² / (ρ² + z² − a² + √((ρ² + z² − a²)² + 4a²z²))).
///
/// Valid in the dielectric half-space z ≥ 0; lengths in nm, result in V.
pub fn gate_potential(rho: f64, z: f64, geom: &GateGeometry) -> Result<f64> {
    geom.validate()?;
    if !(z >= 0.0 && rho.is_finite() && z.is_finite()) {
        return Err(Error::Domain(format!("point (rho = {rho}, z = {z}) outside the z >= 0 half-space")));
    }
    let a2 = geom.a * geom.a;
    let s = rho * rho + z * z - a2;
    let denom = s + (s * s + 4.0 * a2 * z * z).sqrt();
    let angle = if denom <= 0.0 {
        PI / 2.0
    } else {
        (2.0 * a2 / denom).sqrt().atan()
    };
    Ok(2.0 * geom.v / PI * angle)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FieldAtDonor {
    /// V
    pub phi: f64,
    /// V/cm
    pub e_c: f64,
    /// d²φ/dz² at the donor, V/cm²
    pub e_c_prime: f64,
}

/// On-axis potential, field and field gradient at (ρ = 0, z = c) for the
/// applied voltage.
pub fn field_at_donor(geom: &GateGeometry) -> Result<FieldAtDonor> {
    field_for_voltage(geom, geom.v)
}

fn field_for_voltage(geom: &GateGeometry, v: f64) -> Result<FieldAtDonor> {
    geom.validate()?;
    let (a, c) = (geom.a, geom.c);
    let r2 = a * a + c * c;
    Ok(FieldAtDonor {
        phi: 2.0 * v / PI * (a / c).atan(),
        e_c: per_nm_to_per_cm(2.0 * v / PI * a / r2),
        e_c_prime: per_nm_to_per_cm(per_nm_to_per_cm(4.0 * v / PI * a * c / (r2 * r2))),
    })
}

/// Relative change of the envelope at the nucleus per (V/cm)².
pub const ENVELOPE_STARK_COEFFICIENT: f64 = -1.55e-12;
/// ΔA/A per (V/cm)²; twice the envelope coefficient since A ∝ |F(0)|².
pub const HYPERFINE_STARK_COEFFICIENT: f64 = 2.0 * ENVELOPE_STARK_COEFFICIENT;
/// Field scale (V/cm) below which the quadratic correction is small.
pub const STARK_FIELD_SCALE: f64 = 8e5;
/// |ΔA/A| above which cubic terms would be needed.
pub const STARK_VALIDITY_LIMIT: f64 = 0.3;
/// Donor polarizability from the hydrogenic estimate with a*_B = 2 nm, F·cm².
/// Documented only; the coefficient above already folds it in.
pub const DONOR_POLARIZABILITY: f64 = 4e-32;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StarkShift {
    /// ΔA/A, always ≤ 0.
    pub fraction: f64,
    /// |E_c| ≥ 8e5 V/cm.
    pub strong_field: bool,
    /// |ΔA/A| > 0.3: second order no longer adequate.
    pub beyond_second_order: bool,
}

impl StarkShift {
    pub fn flagged(&self) -> bool {
        self.strong_field || self.beyond_second_order
    }
}

/// ΔA/A = −3.1e-12 · E_c² with E_c in V/cm.
pub fn stark_fraction(e_c: f64) -> StarkShift {
    let fraction = HYPERFINE_STARK_COEFFICIENT * e_c * e_c;
    StarkShift {
        fraction,
        strong_field: e_c.abs() >= STARK_FIELD_SCALE,
        beyond_second_order: fraction.abs() > STARK_VALIDITY_LIMIT,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Detuning {
    /// Δν_A in MHz.
    pub delta_nu: f64,
    /// Field at the donor for the effective voltage, V/cm.
    pub e_c: f64,
    pub stark: StarkShift,
}

/// Δν_A = ΔA/A · ν_A with the field from the effective voltage V + V_FB.
pub fn resonance_detuning(geom: &GateGeometry, nu_a: f64) -> Result<Detuning> {
    let f = field_for_voltage(geom, geom.effective_voltage())?;
    let stark = stark_fraction(f.e_c);
    Ok(Detuning { delta_nu: stark.fraction * nu_a, e_c: f.e_c, stark })
}

/// Δν_A per squared effective volt for the geometry (MHz/V²).
pub fn stark_coefficient(geom: &GateGeometry, nu_a: f64) -> Result<f64> {
    let per_volt = field_for_voltage(geom, 1.0)?.e_c;
    Ok(HYPERFINE_STARK_COEFFICIENT * per_volt * per_volt * nu_a)
}

/// Tuning slope α = dΔν_A/dV at the geometry's applied voltage, MHz/V.
pub fn tuning_slope(geom: &GateGeometry, nu_a: f64) -> Result<f64> {
    Ok(2.0 * stark_coefficient(geom, nu_a)? * geom.effective_voltage())
}

/// Coefficients (c₀, c₁, c₂) of Δν_A(V) = c₀ + c₁V + c₂V² for the geometry's V_FB.
pub fn flat_band_expansion(geom: &GateGeometry, nu_a: f64) -> Result<[f64; 3]> {
    let k = stark_coefficient(geom, nu_a)?;
    Ok([k * geom.v_fb * geom.v_fb, 2.0 * k * geom.v_fb, k])
}

pub const THIN_GATE_RATIO: f64 = 0.2;
pub const COMPARABLE_RATIO: (f64, f64) = (0.5, 2.0);

/// δA/A from a mean-square lateral placement error δρ² (nm²).
///
/// 2δρ²/a² for c/a < 0.2, 2δρ²/c² for 0.5 ≤ c/a ≤ 2, otherwise 2δρ²/max(a, c)².
pub fn placement_sensitivity(delta_rho_sq: f64, geom: &GateGeometry) -> Result<f64> {
    geom.validate()?;
    if !(delta_rho_sq >= 0.0) {
        return Err(Error::InvalidInput("mean-square placement error must be >= 0".into()));
    }
    let ratio = geom.c / geom.a;
    let scale = if ratio < THIN_GATE_RATIO {
        geom.a
    } else if (COMPARABLE_RATIO.0..=COMPARABLE_RATIO.1).contains(&ratio) {
        geom.c
    } else {
        geom.a.max(geom.c)
    };
    Ok(2.0 * delta_rho_sq / (scale * scale))
}
