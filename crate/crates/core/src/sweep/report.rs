//! Headline numbers: computed value, published value and relative deviation.

use std::fmt;

use serde::Serialize;

use crate::constants::{donor_params, material_params, DonorSpecies, Host, PhysicalConstants, SI_EXCHANGE_A_T_NM};
use crate::effective_mass::{crossing_distance, ExchangeModel};
use crate::error::{Error, Result};
use crate::gate_stark::{field_at_donor, flat_band_expansion, stark_coefficient, GateGeometry};
use crate::single_donor::{nuclear_resonance_frequency, FieldConfig, ResonanceVariant};
use crate::two_donor::{anticrossing_exchange, closed_form_eigs, nu_j, NuJVariant, TwoDonorConfig};

const TOPICS: [&str; 6] = ["nu_A", "crossing", "nu_J", "stark", "flat-band", "anticross-gap"];

pub fn report_topics() -> &'static [&'static str] {
    &TOPICS
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReportInputs {
    pub consts: PhysicalConstants,
    pub b: f64,
    pub host: Host,
    /// Exchange for the nu_J topic, MHz.
    pub j: f64,
}

impl Default for ReportInputs {
    fn default() -> Self {
        ReportInputs { consts: PhysicalConstants::PAPER, b: 2.0, host: Host::Si, j: 30e3 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportEntry {
    pub quantity: String,
    pub unit: &'static str,
    pub computed: f64,
    pub published: Option<f64>,
    /// Published as a range rather than a value.
    pub published_range: Option<(f64, f64)>,
    /// (computed − published)/|published|; for a range, distance to the nearer
    /// bound relative to it, zero inside.
    pub deviation: Option<f64>,
}

impl ReportEntry {
    fn new(quantity: impl Into<String>, unit: &'static str, computed: f64) -> Self {
        ReportEntry { quantity: quantity.into(), unit, computed, published: None, published_range: None, deviation: None }
    }

    fn against(mut self, published: f64) -> Self {
        self.published = Some(published);
        self.deviation = Some((self.computed - published) / published.abs());
        self
    }

    fn within(mut self, lo: f64, hi: f64) -> Self {
        self.published_range = Some((lo, hi));
        self.deviation = Some(if self.computed < lo {
            (self.computed - lo) / lo.abs()
        } else if self.computed > hi {
            (self.computed - hi) / hi.abs()
        } else {
            0.0
        });
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub topic: String,
    pub b: f64,
    pub host: String,
    pub entries: Vec<ReportEntry>,
}

impl Report {
    pub fn entry(&self, quantity: &str) -> Option<&ReportEntry> {
        self.entries.iter().find(|e| e.quantity == quantity)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "report {} (B = {} T, host {})", self.topic, self.b, self.host)?;
        for e in &self.entries {
            write!(f, "  {:<28} computed {:>14.6e} {:<8}", e.quantity, e.computed, e.unit)?;
            match (e.published, e.published_range) {
                (Some(p), _) => write!(f, " published {p:>12.6e}")?,
                (None, Some((lo, hi))) => write!(f, " published [{lo}, {hi}]")?,
                _ => write!(f, " published -")?,
            }
            match e.deviation {
                Some(d) => writeln!(f, "  deviation {:+.3}%", 100.0 * d)?,
                None => writeln!(f)?,
            }
        }
        Ok(())
    }
}

fn close(x: f64, y: f64) -> bool {
    (x - y).abs() <= 1e-9 * y.abs().max(1.0)
}

pub fn report(topic: &str, inputs: &ReportInputs) -> Result<Report> {
    let c = &inputs.consts;
    let b = inputs.b;
    let donor = donor_params(match inputs.host {
        Host::Si => DonorSpecies::P31InSi,
        Host::Ge => DonorSpecies::P31InGe,
    });
    let material = material_params(inputs.host);
    let at_2t = close(b, 2.0);
    let si = inputs.host == Host::Si;
    let field = FieldConfig::new(b);
    let nu_a = nuclear_resonance_frequency(c, field, &donor, ResonanceVariant::Exact);
    let mut entries = Vec::new();
    match topic {
        "nu_A" => {
            let exact = ReportEntry::new("nu_A", "MHz", nu_a);
            let asym = ReportEntry::new("nu_A asymptotic", "MHz", nuclear_resonance_frequency(c, field, &donor, ResonanceVariant::Asymptotic));
            if at_2t && si {
                entries.push(exact.against(92.6));
                entries.push(asym.against(92.6));
            } else {
                entries.extend([exact, asym]);
            }
        }
        "crossing" => {
            let a_t = if si { SI_EXCHANGE_A_T_NM } else { material.a_t };
            let model = ExchangeModel::new(c, a_t, material.eps_s)?;
            let root = crossing_distance(c, field, &model)?;
            let l = ReportEntry::new("crossing distance l*", "nm", root.x);
            entries.push(if at_2t && si { l.within(10.0, 20.0) } else { l });
            entries.push(ReportEntry::new("J(l*)", "MHz", model.coupling(root.x)).against(c.electron_zeeman(b)));
            entries.push(ReportEntry::new("l*/a_t", "", root.x / a_t));
        }
        "nu_J" => {
            let cfg = TwoDonorConfig::symmetric(b, inputs.j, donor.a_mhz, donor.g_n);
            let exact = ReportEntry::new("nu_J", "MHz", nu_j(c, &cfg, NuJVariant::Exact)?);
            entries.push(if at_2t && si && close(inputs.j, 30e3) { exact.against(0.075) } else { exact });
            entries.push(ReportEntry::new("nu_J weak-exchange", "MHz", nu_j(c, &cfg, NuJVariant::WeakExchange)?));
            entries.push(ReportEntry::new("J", "MHz", inputs.j));
        }
        "stark" => {
            let g = GateGeometry::default();
            let e_c = ReportEntry::new("E_c per volt", "V/cm", field_at_donor(&g.with_voltage(1.0))?.e_c);
            let k = ReportEntry::new("Stark coefficient", "MHz/V^2", stark_coefficient(&g, nu_a)?);
            entries.push(e_c.against(2.5e5));
            entries.push(if at_2t && si { k.against(-17.5) } else { k });
        }
        "flat-band" => {
            let g = GateGeometry { v_fb: 0.6, ..GateGeometry::default() };
            let coeffs = flat_band_expansion(&g, nu_a)?;
            let published = [-6.3, -21.0, -17.5];
            for (k, (value, p)) in coeffs.iter().zip(published).enumerate() {
                let e = ReportEntry::new(format!("c{k} (V_FB = 0.6 V)"), "MHz/V^k", *value);
                entries.push(if at_2t && si { e.against(p) } else { e });
            }
        }
        "anticross-gap" => {
            let a = donor.a_mhz;
            let jc = anticrossing_exchange(c, b, donor.g_n);
            let at_center = TwoDonorConfig::symmetric(b, jc, a, donor.g_n);
            let e = closed_form_eigs(c, &at_center)?;
            entries.push(ReportEntry::new("J at minimum gap", "MHz", jc));
            entries.push(ReportEntry::new("minimum antisymmetric gap", "MHz", e.anti_plus - e.anti_minus).against(a));
            let at_zeeman = TwoDonorConfig::symmetric(b, c.electron_zeeman(b), a, donor.g_n);
            entries.push(ReportEntry::new("nu_J at J = 2 mu_B B", "MHz", nu_j(c, &at_zeeman, NuJVariant::Exact)?).against(a / 2.0));
            entries.push(ReportEntry::new("nu_J at minimum gap", "MHz", nu_j(c, &at_center, NuJVariant::Exact)?).against(a / 2.0));
        }
        _ => {
            return Err(Error::Registry { kind: "report topic", tag: topic.to_string() });
        }
    }
    Ok(Report { topic: topic.to_string(), b, host: inputs.host.to_string(), entries })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nu_a_report() {
        let r = report("nu_A", &ReportInputs::default()).unwrap();
        let e = r.entry("nu_A").unwrap();
        assert!(e.deviation.unwrap().abs() < 0.005);
        assert!(r.to_string().contains("published"));
    }

    #[test]
    fn crossing_report_in_range() {
        let r = report("crossing", &ReportInputs::default()).unwrap();
        let e = r.entry("crossing distance l*").unwrap();
        assert!((e.computed - 14.3).abs() < 0.1, "{}", e.computed);
        assert_eq!(e.deviation, Some(0.0));
    }

    #[test]
    fn nu_j_report_deviation_is_reported() {
        let r = report("nu_J", &ReportInputs::default()).unwrap();
        let e = r.entry("nu_J").unwrap();
        assert!((0.066..=0.070).contains(&e.computed), "{}", e.computed);
        assert_eq!(e.published, Some(0.075));
        assert!(e.deviation.unwrap() < 0.0);
    }

    #[test]
    fn every_topic_runs_and_unknown_fails() {
        for t in report_topics() {
            for host in [Host::Si, Host::Ge] {
                let r = report(t, &ReportInputs { host, ..Default::default() }).unwrap();
                assert!(r.entries.iter().all(|e| e.computed.is_finite()), "{t}");
            }
        }
        assert!(matches!(report("bogus", &ReportInputs::default()), Err(Error::Registry { .. })));
    }
}
