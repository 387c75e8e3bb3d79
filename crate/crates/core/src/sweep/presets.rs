//! Bundled sweep specs.

use super::SweepSpec;
use crate::error::{Error, Result};

pub const PRESETS: [(&str, &str); 6] = [
    ("fig2", include_str!("../../presets/fig2.toml")),
    ("fig3-vs-B", include_str!("../../presets/fig3-vs-B.toml")),
    ("fig3-vs-J", include_str!("../../presets/fig3-vs-J.toml")),
    ("stark", include_str!("../../presets/stark.toml")),
    ("exchange", include_str!("../../presets/exchange.toml")),
    ("anticross", include_str!("../../presets/anticross.toml")),
];

pub fn preset_names() -> impl Iterator<Item = &'static str> {
    PRESETS.iter().map(|p| p.0)
}

pub fn preset(name: &str) -> Result<SweepSpec> {
    let (_, text) = PRESETS
        .iter()
        .find(|p| p.0 == name)
        .ok_or_else(|| Error::Spec(format!("unknown preset {name:?}; available: {}", preset_names().collect::<Vec<_>>().join(", "))))?;
    text.parse()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_presets_prepare() {
        for name in preset_names() {
            preset(name).unwrap().prepare().unwrap_or_else(|e| panic!("{name}: {e}"));
        }
        assert!(preset("fig9").is_err());
    }
}
