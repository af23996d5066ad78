//! Golden scenarios shipped with the binary.

use crate::config::Scenario;
use crate::error::CliResult;

pub const BUNDLED: [(&str, &str); 8] = [
    ("fig3a", include_str!("../scenarios/fig3a.toml")),
    ("fig3b_sweep", include_str!("../scenarios/fig3b_sweep.toml")),
    ("heatingA3", include_str!("../scenarios/heatingA3.toml")),
    ("keldyshA4", include_str!("../scenarios/keldyshA4.toml")),
    ("readoutA6", include_str!("../scenarios/readoutA6.toml")),
    ("dispersiveA7", include_str!("../scenarios/dispersiveA7.toml")),
    ("tableIV", include_str!("../scenarios/tableIV.toml")),
    ("tableV", include_str!("../scenarios/tableV.toml")),
];

pub fn names() -> impl Iterator<Item = &'static str> {
    BUNDLED.iter().map(|(n, _)| *n)
}

pub fn text(name: &str) -> Option<&'static str> {
    BUNDLED.iter().find(|(n, _)| *n == name).map(|(_, t)| *t)
}

/// Parses a bundled scenario. Relative paths resolve from the working
/// directory.
pub fn load(name: &str) -> Option<CliResult<Scenario>> {
    text(name).map(|t| Scenario::from_str(t, "."))
}

pub fn load_all() -> CliResult<Vec<Scenario>> {
    BUNDLED.iter().map(|(_, t)| Scenario::from_str(t, ".")).collect()
}
