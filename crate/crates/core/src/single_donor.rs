//! One donor: electron spin ½ coupled to nuclear spin ½ in a field along z.
//!
//! Product basis order is `|M, m⟩` = (−½,−½), (−½,+½), (+½,−½), (+½,+½),
//! electron projection `M` first. The two-donor builder uses the same
//! convention per donor.

use serde::Serialize;

use crate::constants::{DonorParams, PhysicalConstants};
use crate::numerics::SymmetricMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FieldConfig {
    /// Induction along z, T.
    pub b: f64,
}

impl FieldConfig {
    pub fn new(b: f64) -> Self {
        debug_assert!(b >= 0.0, "field must be non-negative");
        FieldConfig { b }
    }

    /// Field that corresponds to a given Breit–Rabi parameter X.
    pub fn from_breit_rabi_x(consts: &PhysicalConstants, donor: &DonorParams, x: f64) -> Self {
        let per_tesla = consts.electron_zeeman(1.0) + consts.nuclear_zeeman(donor.g_n, 1.0);
        FieldConfig { b: x * donor.a_mhz / per_tesla }
    }
}

pub const SINGLE_DONOR_BASIS: [(f64, f64); 4] = [(-0.5, -0.5), (-0.5, 0.5), (0.5, -0.5), (0.5, 0.5)];

/// `2μ_B B S_z − g_N μ_N B I_z + A I·S` in MHz.
pub fn single_donor_hamiltonian(
    consts: &PhysicalConstants,
    field: FieldConfig,
    donor: &DonorParams,
) -> SymmetricMatrix {
    let ez = consts.electron_zeeman(field.b);
    let nz = consts.nuclear_zeeman(donor.g_n, field.b);
    let a = donor.a_mhz;
    let mut h = SymmetricMatrix::zeros(4);
    for (i, &(m_e, m_n)) in SINGLE_DONOR_BASIS.iter().enumerate() {
        h.set(i, i, ez * m_e - nz * m_n + a * m_e * m_n);
    }
    // flip-flop (I+S- + I-S+)/2
    h.set(1, 2, a / 2.0);
    h
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LabeledLevel {
    pub f: u8,
    pub m_f: i8,
    /// MHz
    pub energy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BreitRabiLevels {
    /// Ordered (1,+1), (1,0), (1,−1), (0,0).
    pub levels: [LabeledLevel; 4],
    /// (2μ_B + g_N μ_N) B / A; infinite when A = 0 and B > 0.
    pub x: f64,
}

impl BreitRabiLevels {
    pub fn get(&self, f: u8, m_f: i8) -> Option<f64> {
        self.levels
            .iter()
            .find(|l| l.f == f && l.m_f == m_f)
            .map(|l| l.energy)
    }

    pub fn ground(&self) -> f64 {
        self.levels[3].energy
    }

    pub fn energies_ascending(&self) -> Vec<f64> {
        let mut e: Vec<f64> = self.levels.iter().map(|l| l.energy).collect();
        e.sort_by(f64::total_cmp);
        e
    }
}

/// Closed-form Breit–Rabi levels for I = ½.
///
/// The stretched states m_F = ±1 are exact product states; their square root
/// √(1 ± 2X + X²) is taken with sign, (1 ± X), which keeps E(1,−1) on its
/// linear branch for X > 1.
pub fn breit_rabi_levels(
    consts: &PhysicalConstants,
    field: FieldConfig,
    donor: &DonorParams,
) -> BreitRabiLevels {
    let a = donor.a_mhz;
    let ez = consts.electron_zeeman(field.b);
    let nz = consts.nuclear_zeeman(donor.g_n, field.b);
    let zs = ez + nz; // (2μ_B + g_N μ_N) B
    let x = zs / a;

    let stretched = |m_f: f64| -a / 4.0 - nz * m_f + 0.5 * (a + m_f * zs);
    let root = 0.5 * (a * a + zs * zs).sqrt();
    let levels = [
        LabeledLevel { f: 1, m_f: 1, energy: stretched(1.0) },
        LabeledLevel { f: 1, m_f: 0, energy: -a / 4.0 + root },
        LabeledLevel { f: 1, m_f: -1, energy: stretched(-1.0) },
        LabeledLevel { f: 0, m_f: 0, energy: -a / 4.0 - root },
    ];
    BreitRabiLevels { levels, x }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub enum ResonanceVariant {
    /// E(1,−1) − E(0,0) from the closed-form levels.
    #[default]
    Exact,
    /// A/2 + g_N μ_N B + A²/(8 μ_B B); infinite at B = 0.
    Asymptotic,
}

/// Nuclear resonance frequency ν_A in MHz.
pub fn nuclear_resonance_frequency(
    consts: &PhysicalConstants,
    field: FieldConfig,
    donor: &DonorParams,
    variant: ResonanceVariant,
) -> f64 {
    match variant {
        ResonanceVariant::Exact => {
            let l = breit_rabi_levels(consts, field, donor);
            l.levels[2].energy - l.levels[3].energy
        }
        ResonanceVariant::Asymptotic => {
            let a = donor.a_mhz;
            let ez = consts.electron_zeeman(field.b);
            a / 2.0 + consts.nuclear_zeeman(donor.g_n, field.b) + a * a / (4.0 * ez)
        }
    }
}

/// (ν_A⁺, ν_A⁻) = |g_N μ_N B ± A/2| in MHz, the two resonance lines of an
/// antiferromagnetically ordered donor chain.
pub fn sublattice_frequencies(
    consts: &PhysicalConstants,
    field: FieldConfig,
    donor: &DonorParams,
) -> (f64, f64) {
    let nz = consts.nuclear_zeeman(donor.g_n, field.b);
    let half_a = donor.a_mhz / 2.0;
    ((nz + half_a).abs(), (nz - half_a).abs())
}

/// Enhancement A·S∥/(g_N μ_N B) of the RF field seen by the nucleus through the
/// transverse electron polarization.
pub fn gain_enhancement(
    consts: &PhysicalConstants,
    field: FieldConfig,
    donor: &DonorParams,
    electron_polarization: f64,
) -> f64 {
    donor.a_mhz * electron_polarization / consts.nuclear_zeeman(donor.g_n, field.b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::{donor_params, DonorSpecies};
    use crate::numerics::eigvals_sym;
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const C: PhysicalConstants = PhysicalConstants::PAPER;

    fn si() -> DonorParams {
        donor_params(DonorSpecies::P31InSi)
    }

    #[test]
    fn zero_field_spectrum() {
        let e = eigvals_sym(&single_donor_hamiltonian(&C, FieldConfig::new(0.0), &si())).unwrap();
        assert_relative_eq!(e[0], -87.0, epsilon = 1e-12);
        for x in &e[1..] {
            assert_relative_eq!(*x, 29.0, epsilon = 1e-12);
        }
        let l = breit_rabi_levels(&C, FieldConfig::new(0.0), &si());
        assert_eq!(l.get(0, 0), Some(-87.0));
        for m in [-1, 0, 1] {
            assert_eq!(l.get(1, m), Some(29.0));
        }
    }

    #[test]
    fn pure_zeeman_without_hyperfine() {
        let d = si().with_hyperfine(0.0);
        let b = FieldConfig::new(2.0);
        let e = eigvals_sym(&single_donor_hamiltonian(&C, b, &d)).unwrap();
        let ez = C.electron_zeeman(2.0);
        let nz = C.nuclear_zeeman(2.26, 2.0);
        assert_relative_eq!(nz, 34.45, max_relative = 1e-3);
        let mut expect = vec![
            -ez / 2.0 - nz / 2.0,
            -ez / 2.0 + nz / 2.0,
            ez / 2.0 - nz / 2.0,
            ez / 2.0 + nz / 2.0,
        ];
        expect.sort_by(f64::total_cmp);
        for (x, y) in e.iter().zip(&expect) {
            assert_relative_eq!(x, y, epsilon = 1e-9);
        }
        assert_relative_eq!(e[1] - e[0], nz, epsilon = 1e-9);
        assert_relative_eq!(ez / 2.0, 27_980.0, max_relative = 1e-3);
    }

    #[test]
    fn ground_level_two_tesla() {
        let e = eigvals_sym(&single_donor_hamiltonian(&C, FieldConfig::new(2.0), &si())).unwrap();
        let zs = C.electron_zeeman(2.0) + C.nuclear_zeeman(2.26, 2.0);
        let closed = -116.0 / 4.0 - 0.5 * (zs * zs + 116.0 * 116.0).sqrt();
        assert_relative_eq!(e[0], closed, epsilon = 1e-8);
        assert_relative_eq!(e[0], -28.03e3, max_relative = 1e-3);
    }

    #[test]
    fn stretched_level_matches_linear_form() {
        let l = breit_rabi_levels(&C, FieldConfig::new(2.0), &si());
        let expect = 116.0 / 4.0 - (C.electron_zeeman(2.0) - C.nuclear_zeeman(2.26, 2.0)) / 2.0;
        assert_relative_eq!(l.get(1, -1).unwrap(), expect, epsilon = 1e-9);
    }

    #[test]
    fn closed_form_matches_numeric_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let b = rng.gen_range(0.0..10.0);
            let a = rng.gen_range(0.0..500.0);
            let d = si().with_hyperfine(a);
            let h = single_donor_hamiltonian(&C, FieldConfig::new(b), &d);
            assert_eq!(h.trace(), 0.0);
            let num = eigvals_sym(&h).unwrap();
            let cf = breit_rabi_levels(&C, FieldConfig::new(b), &d).energies_ascending();
            for (x, y) in num.iter().zip(&cf) {
                assert!((x - y).abs() < 1e-6, "B={b} A={a}: {x} vs {y}");
            }
        }
    }

    #[test]
    fn nu_a_two_tesla() {
        let b = FieldConfig::new(2.0);
        let exact = nuclear_resonance_frequency(&C, b, &si(), ResonanceVariant::Exact);
        let asym = nuclear_resonance_frequency(&C, b, &si(), ResonanceVariant::Asymptotic);
        assert_relative_eq!(exact, 92.6, max_relative = 5e-3);
        assert_relative_eq!(asym, 92.5, max_relative = 1e-3);
        assert_relative_eq!(exact, asym, max_relative = 1e-3);
        let zero = nuclear_resonance_frequency(&C, FieldConfig::new(0.0), &si(), ResonanceVariant::Exact);
        assert_relative_eq!(zero, 116.0, epsilon = 1e-12);
    }

    #[test]
    fn sublattice_lines() {
        let (p, m) = sublattice_frequencies(&C, FieldConfig::new(2.0), &si());
        assert_relative_eq!(p, 92.45, max_relative = 2e-3);
        assert_relative_eq!(m, 23.55, max_relative = 5e-3);
        assert_eq!(sublattice_frequencies(&C, FieldConfig::new(0.0), &si()), (58.0, 58.0));
        let (p, m) = sublattice_frequencies(&C, FieldConfig::new(2.0), &si().with_hyperfine(0.0));
        assert_eq!(p, m);
        assert_relative_eq!(p, C.nuclear_zeeman(2.26, 2.0));
    }

    #[test]
    fn level_shape_on_grid() {
        let d = si();
        let mut prev: Option<BreitRabiLevels> = None;
        for k in 0..200 {
            let b = FieldConfig::new(k as f64 * 0.05);
            let l = breit_rabi_levels(&C, b, &d);
            // F = 0 is the global minimum
            assert!(l.levels[..3].iter().all(|x| x.energy > l.ground()));
            if let Some(p) = &prev {
                assert!(l.ground() < p.ground());
                assert!(l.levels[0].energy > p.levels[0].energy);
                assert!(l.levels[2].energy < p.levels[2].energy);
            }
            prev = Some(l);
        }
        // large X: two branches up at ~+μ_B B, two down at ~−μ_B B
        let l = breit_rabi_levels(&C, FieldConfig::new(5.0), &d);
        let half = C.electron_zeeman(5.0) / 2.0;
        let e = l.energies_ascending();
        assert!(e[0] < 0.0 && e[1] < 0.0 && e[2] > 0.0 && e[3] > 0.0);
        for x in e {
            assert_relative_eq!(x.abs(), half, max_relative = 0.01);
        }
    }

    #[test]
    fn x_from_field_round_trip() {
        let d = si();
        let f = FieldConfig::from_breit_rabi_x(&C, &d, 2.5);
        assert_relative_eq!(breit_rabi_levels(&C, f, &d).x, 2.5, max_relative = 1e-12);
    }

    #[test]
    fn gain_factor() {
        let g = gain_enhancement(&C, FieldConfig::new(2.0), &si(), 0.5);
        assert_relative_eq!(g, 58.0 / 34.45, max_relative = 2e-3);
    }
}
