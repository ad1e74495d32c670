//! Run configuration, report documents and their serialization.

mod text;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub use text::render;

use crate::dual::{crosscheck, dual, Annihilation, ConstraintFamily, CrosscheckReport, DualError, DualOptions, DualResult};
use crate::fusion::{fuse, FuseOptions, FusionError, FusionResult};
use crate::linalg::{Rat, RatMatrix};
use crate::module::{
    find_singular_vectors, gram_matrix, singular_coefficients, Module, ModuleDescription, ModuleError, ModuleSpec,
};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Subcommand {
    Singular,
    ModuleBasis,
    Fuse,
    Dual,
    Crosscheck,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Text,
}

/// A singular level to impose, on both modules or on one of them (`1=2`
/// imposes level 2 on the first module only).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SingularLevel {
    pub module: Option<u8>,
    pub level: usize,
}

impl fmt::Display for SingularLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.module {
            Some(m) => write!(f, "{m}={}", self.level),
            None => write!(f, "{}", self.level),
        }
    }
}

impl FromStr for SingularLevel {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || format!("invalid singular level `{s}`; expected N, 1=N or 2=N");
        match s.split_once('=') {
            Some((m, l)) => {
                let module: u8 = m.trim().parse().map_err(|_| bad())?;
                if !(1..=2).contains(&module) {
                    return Err(bad());
                }
                let level = l.trim().parse().map_err(|_| bad())?;
                Ok(SingularLevel {
                    module: Some(module),
                    level,
                })
            }
            None => Ok(SingularLevel {
                module: None,
                level: s.trim().parse().map_err(|_| bad())?,
            }),
        }
    }
}

impl Serialize for SingularLevel {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for SingularLevel {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        String::deserialize(deserializer)?.parse().map_err(serde::de::Error::custom)
    }
}

/// Everything a run needs. Echoed verbatim into the report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunConfig {
    pub subcommand: Subcommand,
    pub algebra: String,
    pub central_charge: Option<Rat>,
    pub h1: Option<Rat>,
    pub h2: Option<Rat>,
    pub lambda1: Option<Rat>,
    pub lambda2: Option<Rat>,
    pub singular_levels: Vec<SingularLevel>,
    /// Highest level searched when singular vectors are detected automatically.
    pub auto_singular_max: Option<usize>,
    pub depth: usize,
    pub w: Rat,
    pub lmax: Option<usize>,
    pub format: Format,
    pub check_dual: bool,
    pub constraint_family: ConstraintFamily,
    pub annihilation: Annihilation,
}

impl RunConfig {
    pub fn new(subcommand: Subcommand) -> Self {
        RunConfig {
            subcommand,
            algebra: "virasoro".into(),
            central_charge: None,
            h1: None,
            h2: None,
            lambda1: None,
            lambda2: None,
            singular_levels: Vec::new(),
            auto_singular_max: None,
            depth: 0,
            w: Rat::one(),
            lmax: None,
            format: Format::Json,
            check_dual: false,
            constraint_family: ConstraintFamily::Standard,
            annihilation: Annihilation::Words,
        }
    }

    pub fn validate(&self) -> Result<(), RunError> {
        if self.w.is_zero() {
            return Err(RunError::Usage("--w must be nonzero".into()));
        }
        if let Some(l) = self.lmax {
            if l < self.depth {
                return Err(RunError::Usage(format!("--lmax {l} is below --depth {}", self.depth)));
            }
        }
        Ok(())
    }

    fn base_module(&self, which: u8) -> Result<ModuleSpec, RunError> {
        let pick = |a: &Option<Rat>, b: &Option<Rat>| if which == 1 { a.clone() } else { b.clone().or(a.clone()) };
        match self.algebra.as_str() {
            "virasoro" => {
                let c = self
                    .central_charge
                    .clone()
                    .ok_or_else(|| RunError::Usage("virasoro needs --central-charge".into()))?;
                let h = pick(&self.h1, &self.h2).ok_or_else(|| RunError::Usage(format!("missing --h{which}")))?;
                Ok(ModuleSpec::virasoro(c, h))
            }
            "heisenberg" => {
                let l = pick(&self.lambda1, &self.lambda2)
                    .ok_or_else(|| RunError::Usage(format!("missing --lambda{which}")))?;
                Ok(ModuleSpec::heisenberg(l))
            }
            other => Err(RunError::Usage(format!("unknown algebra `{other}`; expected virasoro or heisenberg"))),
        }
    }

    /// The first (`which = 1`) or second module, with its singular relations.
    pub fn module(&self, which: u8) -> Result<ModuleSpec, RunError> {
        let spec = self.base_module(which)?;
        let levels: Vec<usize> = self
            .singular_levels
            .iter()
            .filter(|s| s.module.map_or(true, |m| m == which))
            .map(|s| s.level)
            .collect();
        let spec = if levels.is_empty() {
            spec.with_auto_singular(self.auto_singular_max.unwrap_or(DEFAULT_AUTO_SINGULAR))
        } else {
            levels.into_iter().try_fold(spec, |s, l| s.with_singular_level(l))
        };
        spec.map_err(RunError::from)
    }
}

const DEFAULT_AUTO_SINGULAR: usize = 3;
const DEFAULT_BASIS_LEVELS: usize = 4;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SingularLevelReport {
    pub level: usize,
    pub basis: Vec<String>,
    pub gram: RatMatrix,
    pub determinant: Rat,
    pub singular_vectors: Vec<BTreeMap<String, Rat>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelBasis {
    pub level: usize,
    pub dimension: usize,
    pub basis: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Output {
    Singular {
        module: ModuleDescription,
        levels: Vec<SingularLevelReport>,
    },
    ModuleBasis {
        module: ModuleDescription,
        levels: Vec<LevelBasis>,
    },
    Fuse {
        left: ModuleDescription,
        right: ModuleDescription,
        fusion: FusionResult,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        dual: Option<DualResult>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        crosscheck: Option<CrosscheckReport>,
    },
    Dual {
        left: ModuleDescription,
        right: ModuleDescription,
        dual: DualResult,
    },
    Crosscheck {
        left: ModuleDescription,
        right: ModuleDescription,
        fusion: FusionResult,
        dual: DualResult,
        crosscheck: CrosscheckReport,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub schema_version: u32,
    pub config: RunConfig,
    pub output: Output,
}

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("not stabilized: {0}")]
    NotStabilized(String),
    #[error("internal: {0}")]
    Internal(String),
    #[error("the two pipelines disagree")]
    Mismatch(Box<ReportDocument>),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Usage(_) => 1,
            RunError::NotStabilized(_) => 2,
            RunError::Internal(_) | RunError::Mismatch(_) => 3,
        }
    }
}

impl From<ModuleError> for RunError {
    fn from(e: ModuleError) -> Self {
        RunError::Usage(e.to_string())
    }
}

impl From<FusionError> for RunError {
    fn from(e: FusionError) -> Self {
        match e {
            FusionError::NotStabilized { .. } => RunError::NotStabilized(e.to_string()),
            FusionError::ZeroInsertionPoint => RunError::Usage(e.to_string()),
            _ => RunError::Internal(e.to_string()),
        }
    }
}

impl From<DualError> for RunError {
    fn from(e: DualError) -> Self {
        match e {
            DualError::Fusion(f) => f.into(),
            DualError::NotStabilized { .. } | DualError::Underdetermined { .. } => {
                RunError::NotStabilized(e.to_string())
            }
            DualError::NotQuasiprimary(_) | DualError::ZeroInsertionPoint => RunError::Usage(e.to_string()),
            DualError::OutsideDomain { .. } => RunError::Internal(e.to_string()),
        }
    }
}

fn fuse_options(config: &RunConfig) -> FuseOptions {
    FuseOptions {
        depth: config.depth,
        w: config.w.clone(),
        lmax: config.lmax,
    }
}

fn dual_options(config: &RunConfig) -> DualOptions {
    DualOptions {
        depth: config.depth,
        w: config.w.clone(),
        lmax: config.lmax,
        family: config.constraint_family,
        annihilation: config.annihilation,
    }
}

fn singular_report(spec: &ModuleSpec, max: usize) -> Vec<SingularLevelReport> {
    let cover = spec.verma_cover();
    let verma = Module::new(cover.clone());
    (1..=max)
        .map(|level| {
            let gram = gram_matrix(&cover, level);
            SingularLevelReport {
                level,
                basis: verma.labels(level),
                determinant: gram.determinant(),
                gram,
                singular_vectors: find_singular_vectors(&cover, level)
                    .iter()
                    .map(|e| singular_coefficients(e, &cover))
                    .collect(),
            }
        })
        .collect()
}

/// Dispatches to the pipeline named by the subcommand.
pub fn run(config: &RunConfig) -> Result<ReportDocument, RunError> {
    config.validate()?;
    let output = match config.subcommand {
        Subcommand::Singular => {
            let spec = config.base_module(1)?;
            let max = config.auto_singular_max.or(config.lmax).unwrap_or(DEFAULT_AUTO_SINGULAR);
            Output::Singular {
                module: spec.describe(),
                levels: singular_report(&spec, max),
            }
        }
        Subcommand::ModuleBasis => {
            let spec = config.module(1)?;
            let m = Module::new(spec.clone());
            let top = config.lmax.unwrap_or(DEFAULT_BASIS_LEVELS);
            Output::ModuleBasis {
                module: spec.describe(),
                levels: (0..=top)
                    .map(|level| LevelBasis {
                        level,
                        dimension: m.level_dim(level),
                        basis: m.labels(level),
                    })
                    .collect(),
            }
        }
        Subcommand::Fuse => {
            let (l, r) = (config.module(1)?, config.module(2)?);
            let (left, right) = (Module::new(l.clone()), Module::new(r.clone()));
            let fusion = fuse(&left, &right, &fuse_options(config))?;
            let (dual, check) = if config.check_dual {
                let d = dual(&left, &right, &dual_options(config))?;
                let c = crosscheck(&fusion, &d);
                (Some(d), Some(c))
            } else {
                (None, None)
            };
            Output::Fuse {
                left: l.describe(),
                right: r.describe(),
                fusion,
                dual,
                crosscheck: check,
            }
        }
        Subcommand::Dual => {
            let (l, r) = (config.module(1)?, config.module(2)?);
            let (left, right) = (Module::new(l.clone()), Module::new(r.clone()));
            Output::Dual {
                left: l.describe(),
                right: r.describe(),
                dual: dual(&left, &right, &dual_options(config))?,
            }
        }
        Subcommand::Crosscheck => {
            let (l, r) = (config.module(1)?, config.module(2)?);
            let (left, right) = (Module::new(l.clone()), Module::new(r.clone()));
            let fusion = fuse(&left, &right, &fuse_options(config))?;
            let dual = dual(&left, &right, &dual_options(config))?;
            let crosscheck = crosscheck(&fusion, &dual);
            Output::Crosscheck {
                left: l.describe(),
                right: r.describe(),
                fusion,
                dual,
                crosscheck,
            }
        }
    };
    let doc = ReportDocument {
        schema_version: SCHEMA_VERSION,
        config: config.clone(),
        output,
    };
    let disagrees = match &doc.output {
        Output::Crosscheck { crosscheck, .. } => !crosscheck.agrees(),
        Output::Fuse { crosscheck: Some(c), .. } => !c.agrees(),
        _ => false,
    };
    if disagrees {
        return Err(RunError::Mismatch(Box::new(doc)));
    }
    Ok(doc)
}

/// Serializes a report. JSON output has sorted keys and ends with a newline.
pub fn emit(doc: &ReportDocument, format: Format) -> String {
    let value = serde_json::to_value(doc).expect("reports serialize");
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&value).expect("reports serialize");
            s.push('\n');
            s
        }
        Format::Text => render(&value),
    }
}

/// Reads back a JSON report.
pub fn parse(json: &str) -> Result<ReportDocument, serde_json::Error> {
    serde_json::from_str(json)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fuse_config() -> RunConfig {
        let mut c = RunConfig::new(Subcommand::Fuse);
        c.central_charge = Some(Rat::from(-2));
        c.h1 = Some(Rat::new(-1, 8));
        c.h2 = Some(Rat::new(-1, 8));
        c.singular_levels = vec![SingularLevel { module: None, level: 2 }];
        c
    }

    #[test]
    fn singular_levels_parse() {
        assert_eq!("2".parse(), Ok(SingularLevel { module: None, level: 2 }));
        assert_eq!("1=1".parse(), Ok(SingularLevel { module: Some(1), level: 1 }));
        assert!("3=1".parse::<SingularLevel>().is_err());
        assert!("x".parse::<SingularLevel>().is_err());
    }

    #[test]
    fn fuse_report_round_trips() {
        let mut c = fuse_config();
        c.check_dual = true;
        let doc = run(&c).unwrap();
        let json = emit(&doc, Format::Json);
        assert_eq!(parse(&json).unwrap(), doc);
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(v["output"]["fusion"]["dimension"], 2);
        assert_eq!(v["output"]["fusion"]["jordan"], serde_json::json!([{"eigenvalue": "0", "block_sizes": [2]}]));
        assert_eq!(v["schema_version"], 1);
    }

    #[test]
    fn exit_codes() {
        let mut c = fuse_config();
        c.w = Rat::zero();
        assert_eq!(run(&c).unwrap_err().exit_code(), 1);
        let mut c = fuse_config();
        c.singular_levels.clear();
        c.auto_singular_max = Some(1);
        assert_eq!(run(&c).unwrap_err().exit_code(), 2);
        let mut c = fuse_config();
        c.central_charge = None;
        assert_eq!(run(&c).unwrap_err().exit_code(), 1);
    }

    #[test]
    fn text_has_the_same_numbers() {
        let mut c = fuse_config();
        c.subcommand = Subcommand::Dual;
        c.w = Rat::from(2);
        let doc = run(&c).unwrap();
        let text = emit(&doc, Format::Text);
        assert!(text.contains("-1/32"));
        assert!(text.contains("schema_version: 1"));
    }
}
