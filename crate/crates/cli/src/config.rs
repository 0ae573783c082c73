use std::path::Path;

use serde::Deserialize;

/// Default caps, overridable from a TOML file.
#[derive(Clone, Debug, PartialEq, Eq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    /// Laurent window for duality computations.
    pub window: usize,
    /// Internal degree cap for Koszul complexes.
    pub degree_cap: usize,
    /// Random cochains per split hypercover.
    pub trials: usize,
    /// Largest |twist| accepted on the projective line.
    pub twist_bound: u64,
    /// Largest number of torus factors.
    pub torus_bound: usize,
    /// Entry window for bar constructions over lattices.
    pub lattice_window: u32,
    /// Truncation level for solid identity checks.
    pub level: usize,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            window: 8,
            degree_cap: 4,
            trials: 100,
            twist_bound: 8,
            torus_bound: 3,
            lattice_window: 2,
            level: 8,
        }
    }
}

impl Config {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
        toml::from_str(&text).map_err(|e| format!("bad config {}: {e}", path.display()))
    }
}
