//! Operations a sweep can drive, with their parameter schemas and observables.

use std::collections::BTreeMap;
use std::str::FromStr;

use crate::constants::{Host, SI_EXCHANGE_A_T_NM};
use crate::effective_mass::{crossing_distance, exchange_coupling, ExchangeModel};
use crate::error::{Error, Result};
use crate::gate_stark::{gate_potential, resonance_detuning, GateGeometry};
use crate::numerics::eigvals_sym;
use crate::single_donor::{
    breit_rabi_levels, nuclear_resonance_frequency, sublattice_frequencies, FieldConfig, ResonanceVariant,
};
use crate::two_donor::{
    closed_form_eigs, nu_j, two_donor_hamiltonian, unperturbed_levels, NuJVariant, TwoDonorConfig,
};

use super::SweepContext;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Target {
    BreitRabiLevels,
    NuA,
    ResonanceDetuning,
    GatePotential,
    ExchangeCoupling,
    TwoDonorLevels,
    Anticross,
    CrossingDistance,
}

const ALL: [Target; 8] = [
    Target::BreitRabiLevels,
    Target::NuA,
    Target::ResonanceDetuning,
    Target::GatePotential,
    Target::ExchangeCoupling,
    Target::TwoDonorLevels,
    Target::Anticross,
    Target::CrossingDistance,
];

/// A parameter with no default must be supplied by the spec.
struct Param {
    name: &'static str,
    required: bool,
}

const fn req(name: &'static str) -> Param {
    Param { name, required: true }
}

const fn opt(name: &'static str) -> Param {
    Param { name, required: false }
}

impl FromStr for Target {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ALL.into_iter().find(|t| t.id() == s).ok_or_else(|| {
            let ids: Vec<&str> = ALL.iter().map(|t| t.id()).collect();
            Error::Spec(format!("unknown target {s:?}; available: {}", ids.join(", ")))
        })
    }
}

pub(crate) struct RowValues {
    pub values: Vec<f64>,
    pub flag: Option<String>,
}

impl RowValues {
    fn ok(values: Vec<f64>) -> Self {
        RowValues { values, flag: None }
    }
}

struct Params<'a> {
    map: &'a BTreeMap<String, f64>,
    ctx: &'a SweepContext,
}

impl Params<'_> {
    fn get(&self, name: &str) -> Option<f64> {
        self.map.get(name).copied()
    }

    fn req(&self, name: &str) -> f64 {
        self.get(name).expect("required parameters are checked in prepare")
    }

    fn or(&self, name: &str, default: f64) -> f64 {
        self.get(name).unwrap_or(default)
    }

    fn hyperfine(&self) -> f64 {
        self.or("A", self.ctx.donor.a_mhz)
    }

    fn g_n(&self) -> f64 {
        self.or("g_N", self.ctx.donor.g_n)
    }

    fn donor(&self) -> crate::constants::DonorParams {
        crate::constants::DonorParams { g_n: self.g_n(), ..self.ctx.donor.with_hyperfine(self.hyperfine()) }
    }

    fn exchange_model(&self) -> Result<ExchangeModel> {
        let m = &self.ctx.material;
        let a_t = match m.host {
            Host::Si => SI_EXCHANGE_A_T_NM,
            Host::Ge => m.a_t,
        };
        ExchangeModel::new(&self.ctx.consts, self.or("a_t", a_t), self.or("eps_s", m.eps_s))
    }

    fn geometry(&self) -> GateGeometry {
        let d = GateGeometry::default();
        GateGeometry {
            a: self.or("a", d.a),
            c: self.or("c", d.c),
            v: self.or("V", 1.0),
            v_fb: self.or("V_FB", 0.0),
        }
    }
}

const LEVEL_NAMES: [&str; 4] = ["E_1_+1", "E_1_0", "E_1_-1", "E_0_0"];

impl Target {
    pub fn id(self) -> &'static str {
        match self {
            Target::BreitRabiLevels => "breit_rabi_levels",
            Target::NuA => "nu_a",
            Target::ResonanceDetuning => "resonance_detuning",
            Target::GatePotential => "gate_potential",
            Target::ExchangeCoupling => "exchange_coupling",
            Target::TwoDonorLevels => "two_donor_levels",
            Target::Anticross => "anticross",
            Target::CrossingDistance => "crossing_distance",
        }
    }

    pub fn all() -> &'static [Target] {
        &ALL
    }

    fn schema(self) -> Vec<Param> {
        match self {
            Target::BreitRabiLevels => vec![opt("B"), opt("X"), opt("A"), opt("g_N")],
            Target::NuA => vec![req("B"), opt("A"), opt("g_N")],
            Target::ResonanceDetuning => {
                vec![req("V"), opt("V_FB"), opt("a"), opt("c"), opt("B"), opt("A"), opt("g_N")]
            }
            Target::GatePotential => vec![opt("rho"), req("z"), opt("a"), opt("V")],
            Target::ExchangeCoupling => vec![req("l"), opt("a_t"), opt("eps_s")],
            Target::TwoDonorLevels => vec![req("B"), req("J"), opt("A_a"), opt("A_b"), opt("g_N")],
            Target::Anticross => vec![req("B"), req("J"), opt("A"), opt("g_N")],
            Target::CrossingDistance => vec![req("B"), opt("a_t"), opt("eps_s")],
        }
    }

    pub fn parameters(self) -> Vec<&'static str> {
        self.schema().iter().map(|p| p.name).collect()
    }

    pub fn observables(self) -> Vec<String> {
        let owned = |v: &[&str]| v.iter().map(|s| s.to_string()).collect();
        match self {
            Target::BreitRabiLevels => owned(&LEVEL_NAMES),
            Target::NuA => owned(&["nu_A", "nu_A_asymptotic", "nu_A_plus", "nu_A_minus"]),
            Target::ResonanceDetuning => owned(&["delta_nu", "E_c", "fraction", "nu_A"]),
            Target::GatePotential => owned(&["phi"]),
            Target::ExchangeCoupling => owned(&["J", "asymptotic"]),
            Target::TwoDonorLevels => {
                let mut v: Vec<String> = owned(&["E0_S", "E0_T-1", "E0_T0", "E0_T+1"]);
                v.extend((0..16).map(|k| format!("level_{k:02}")));
                v
            }
            Target::Anticross => owned(&["E_sym_plus", "E_sym_minus", "E_anti_plus", "E_anti_minus", "gap_anti", "nu_J"]),
            Target::CrossingDistance => owned(&["l_star", "residual"]),
        }
    }

    /// Every supplied name must belong to the schema and every required one
    /// must be supplied.
    pub fn check_parameters<'a>(self, variable: &str, fixed: impl Iterator<Item = &'a str>) -> Result<()> {
        let schema = self.schema();
        let known = |n: &str| schema.iter().any(|p| p.name == n);
        let mut supplied = vec![variable.to_string()];
        for f in fixed {
            if f == variable {
                return Err(Error::Spec(format!("{f} is both fixed and the sweep variable")));
            }
            supplied.push(f.to_string());
        }
        for s in &supplied {
            if !known(s) {
                return Err(Error::Spec(format!(
                    "target {} has no parameter {s:?}; available: {}",
                    self.id(),
                    self.parameters().join(", ")
                )));
            }
        }
        for p in schema.iter().filter(|p| p.required) {
            if !supplied.iter().any(|s| s == p.name) {
                return Err(Error::Spec(format!("target {} needs parameter {}", self.id(), p.name)));
            }
        }
        if self == Target::BreitRabiLevels {
            let field_given = supplied.iter().filter(|s| *s == "B" || *s == "X").count();
            if field_given != 1 {
                return Err(Error::Spec("breit_rabi_levels needs exactly one of B or X".into()));
            }
        }
        Ok(())
    }

    pub(crate) fn evaluate(self, ctx: &SweepContext, map: &BTreeMap<String, f64>) -> Result<RowValues> {
        let p = Params { map, ctx };
        let c = &ctx.consts;
        Ok(match self {
            Target::BreitRabiLevels => {
                let donor = p.donor();
                let field = match p.get("X") {
                    Some(x) => FieldConfig::from_breit_rabi_x(c, &donor, x),
                    None => FieldConfig::new(p.req("B")),
                };
                let l = breit_rabi_levels(c, field, &donor);
                RowValues::ok(l.levels.iter().map(|x| x.energy).collect())
            }
            Target::NuA => {
                let donor = p.donor();
                let field = FieldConfig::new(p.req("B"));
                let (plus, minus) = sublattice_frequencies(c, field, &donor);
                RowValues::ok(vec![
                    nuclear_resonance_frequency(c, field, &donor, ResonanceVariant::Exact),
                    nuclear_resonance_frequency(c, field, &donor, ResonanceVariant::Asymptotic),
                    plus,
                    minus,
                ])
            }
            Target::ResonanceDetuning => {
                let donor = p.donor();
                let nu_a = nuclear_resonance_frequency(c, FieldConfig::new(p.or("B", 2.0)), &donor, ResonanceVariant::Exact);
                let d = resonance_detuning(&p.geometry(), nu_a)?;
                let flag = d.stark.flagged().then(|| {
                    format!("E_c = {:.4e} V/cm, dA/A = {:.4}: outside the quadratic Stark regime", d.e_c, d.stark.fraction)
                });
                RowValues { values: vec![d.delta_nu, d.e_c, d.stark.fraction, nu_a], flag }
            }
            Target::GatePotential => {
                RowValues::ok(vec![gate_potential(p.or("rho", 0.0), p.req("z"), &p.geometry())?])
            }
            Target::ExchangeCoupling => {
                let e = exchange_coupling(p.req("l"), &p.exchange_model()?)?;
                RowValues::ok(vec![e.j, if e.asymptotic { 1.0 } else { 0.0 }])
            }
            Target::TwoDonorLevels => {
                let (b, j) = (p.req("B"), p.req("J"));
                let a = p.hyperfine();
                let cfg = TwoDonorConfig { b, j, a_a: p.or("A_a", a), a_b: p.or("A_b", a), g_n: p.g_n() };
                let e0 = unperturbed_levels(c, b, j);
                let mut values = vec![e0.singlet, e0.triplet[0], e0.triplet[1], e0.triplet[2]];
                values.extend(eigvals_sym(&two_donor_hamiltonian(c, &cfg))?);
                RowValues::ok(values)
            }
            Target::Anticross => {
                let cfg = TwoDonorConfig::symmetric(p.req("B"), p.req("J"), p.hyperfine(), p.g_n());
                let e = closed_form_eigs(c, &cfg)?;
                RowValues::ok(vec![
                    e.sym_plus,
                    e.sym_minus,
                    e.anti_plus,
                    e.anti_minus,
                    e.anti_plus - e.anti_minus,
                    nu_j(c, &cfg, NuJVariant::Exact)?,
                ])
            }
            Target::CrossingDistance => {
                let r = crossing_distance(c, FieldConfig::new(p.req("B")), &p.exchange_model()?)?;
                RowValues::ok(vec![r.x, r.residual])
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_round_trip() {
        for t in Target::all() {
            assert_eq!(t.id().parse::<Target>().unwrap(), *t);
        }
    }

    #[test]
    fn every_target_has_observables_and_a_required_or_field_parameter() {
        for t in Target::all() {
            assert!(!t.observables().is_empty());
            assert!(!t.parameters().is_empty());
        }
    }
}
