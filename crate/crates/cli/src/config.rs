use clap::ValueEnum;
use gq_core::exactfield::is_prime;
use gq_core::symmetry::GROUP_NAMES;
use serde::Serialize;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, ValueEnum)]
pub enum ModelName {
    #[value(name = "Z")]
    #[serde(rename = "Z")]
    Z,
    #[value(name = "S_Z")]
    #[serde(rename = "S_Z")]
    SZ,
    #[value(name = "W_Z")]
    #[serde(rename = "W_Z")]
    WZ,
    #[value(name = "Y")]
    #[serde(rename = "Y")]
    Y,
    #[value(name = "S_fmt")]
    #[serde(rename = "S_fmt")]
    SFmt,
    #[value(name = "T36")]
    #[serde(rename = "T36")]
    T36,
    #[value(name = "dual")]
    #[serde(rename = "dual")]
    Dual,
    #[value(name = "campedelli")]
    #[serde(rename = "campedelli")]
    Campedelli,
    #[value(name = "appA1")]
    #[serde(rename = "appA1")]
    AppA1,
    #[value(name = "appA2")]
    #[serde(rename = "appA2")]
    AppA2,
}

impl ModelName {
    pub const ALL: [ModelName; 10] = [
        ModelName::Y,
        ModelName::Z,
        ModelName::SFmt,
        ModelName::SZ,
        ModelName::WZ,
        ModelName::T36,
        ModelName::AppA1,
        ModelName::AppA2,
        ModelName::Dual,
        ModelName::Campedelli,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ModelName::Z => "Z",
            ModelName::SZ => "S_Z",
            ModelName::WZ => "W_Z",
            ModelName::Y => "Y",
            ModelName::SFmt => "S_fmt",
            ModelName::T36 => "T36",
            ModelName::Dual => "dual",
            ModelName::Campedelli => "campedelli",
            ModelName::AppA1 => "appA1",
            ModelName::AppA2 => "appA2",
        }
    }

    /// Group each model is built to be invariant under.
    pub fn default_group(self) -> &'static str {
        match self {
            ModelName::Y => "D7_rho6",
            ModelName::T36 => "D7_gr36",
            ModelName::AppA1 => "F21",
            ModelName::AppA2 => "D7_perm",
            ModelName::Dual | ModelName::Campedelli => "Z7",
            _ => "D7_rho7",
        }
    }

    /// Whether some stage of the model uses an element of order 7 over `F_p`.
    fn needs_seventh_roots(self) -> bool {
        matches!(
            self,
            ModelName::Z | ModelName::SZ | ModelName::WZ | ModelName::SFmt | ModelName::AppA1
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, ValueEnum, Default)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Json,
    Markdown,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Toggles {
    pub invariance: bool,
    pub smoothness: bool,
    pub fixed_loci: bool,
    pub freeness: bool,
    pub hodge: bool,
    pub quotient: bool,
    pub duality: bool,
    pub properties: bool,
}

impl Toggles {
    pub fn all() -> Self {
        Toggles {
            invariance: true,
            smoothness: true,
            fixed_loci: true,
            freeness: true,
            hodge: true,
            quotient: true,
            duality: true,
            properties: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RunConfig {
    pub model: ModelName,
    pub group: String,
    pub seed: u64,
    /// Primes for point censuses and involution fixed loci.
    pub census_primes: Vec<u64>,
    /// Primes for the freeness certificates; need `p ≡ 1 (mod 7)`.
    pub free_primes: Vec<u64>,
    /// Largest `k` with `N_k` reported for fixed points.
    pub extension_depth: usize,
    pub format: OutputFormat,
    /// Also run the upstream models the chosen one depends on.
    pub full: bool,
    pub toggles: Toggles,
}

impl RunConfig {
    pub fn new(model: ModelName) -> Self {
        RunConfig {
            model,
            group: model.default_group().to_string(),
            seed: 1,
            census_primes: vec![11, 13],
            free_primes: vec![29, 43],
            extension_depth: 6,
            format: OutputFormat::Json,
            full: false,
            toggles: Toggles::all(),
        }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if !GROUP_NAMES.contains(&self.group.as_str()) {
            return Err(CliError::Config(format!(
                "unknown group {}; known: {}",
                self.group,
                GROUP_NAMES.join(", ")
            )));
        }
        if self.census_primes.is_empty() {
            return Err(CliError::Config("no census primes".into()));
        }
        for &p in self.census_primes.iter().chain(&self.free_primes) {
            if !is_prime(p) || p == 2 || p == 7 {
                return Err(CliError::Config(format!(
                    "{p} is not an odd prime different from 7"
                )));
            }
        }
        if self.model.needs_seventh_roots() || self.group == "F21" || self.group == "G42" {
            if let Some(p) = self.free_primes.iter().find(|&&p| p % 7 != 1) {
                return Err(CliError::Config(format!(
                    "F_{p} has no primitive 7th root of unity"
                )));
            }
        }
        if !(1..=6).contains(&self.extension_depth) {
            return Err(CliError::Config(format!(
                "extension depth {} outside 1..=6",
                self.extension_depth
            )));
        }
        Ok(())
    }
}

pub fn parse_primes(s: &str) -> Result<Vec<u64>, String> {
    s.split(',')
        .map(|t| t.trim().parse::<u64>().map_err(|e| format!("{t}: {e}")))
        .collect()
}
