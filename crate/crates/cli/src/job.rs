//! Job file schema.

use serde::Deserialize;

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Job {
    #[serde(default)]
    pub name: String,
    pub ring: RingSpec,
    #[serde(default)]
    pub law: Option<LawSpec>,
    #[serde(default)]
    pub model: Option<ModelSpec>,
    /// `[a1, a2, a3, a4, a6]`; defines the model when `model` is absent.
    #[serde(default)]
    pub weierstrass: Option<[String; 5]>,
    #[serde(default)]
    pub sections: Vec<Vec<String>>,
    #[serde(default)]
    pub form: Option<FormSpec>,
    pub commands: Vec<Command>,
    #[serde(default)]
    pub caps: Option<Caps>,
}

#[derive(Clone, Copy, Debug, Deserialize, PartialEq, Eq)]
#[serde(tag = "kind", deny_unknown_fields)]
pub enum RingSpec {
    /// The rationals.
    Q,
    /// The prime field `F_p`.
    Fp { p: u64 },
    /// `Z` localized at `p`; named constant `p`.
    Zp { p: u64 },
    /// `F_p[t]` localized at `t`; named constant `t`.
    FpT { p: u64 },
}

impl std::fmt::Display for RingSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RingSpec::Q => f.write_str("Q"),
            RingSpec::Fp { p } => write!(f, "F_{p}"),
            RingSpec::Zp { p } => write!(f, "Z_({p})"),
            RingSpec::FpT { p } => write!(f, "F_{p}[t]_(t)"),
        }
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LawSpec {
    pub variables: Vec<String>,
    #[serde(default)]
    pub equations: Vec<String>,
    /// Polynomials inverted on `X`.
    #[serde(default)]
    pub localize: Vec<String>,
    /// Slot variable names; defaults to the variables suffixed 1, 2, 3.
    #[serde(default)]
    pub slots: Option<[Vec<String>; 3]>,
    pub m12: Vec<String>,
    pub m13: Vec<String>,
    pub m23: Vec<String>,
    #[serde(default)]
    pub witnesses: Witnesses,
    #[serde(default)]
    pub probes: Vec<Vec<String>>,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Witnesses {
    pub m12: Option<String>,
    pub m13: Option<String>,
    pub m23: Option<String>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSpec {
    pub variables: Vec<String>,
    pub equations: Vec<String>,
}

/// `coefficient · d(differential)`.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FormSpec {
    pub coefficient: String,
    pub differential: String,
}

#[derive(Clone, Copy, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Caps {
    pub max_degree: Option<u32>,
    pub max_basis: Option<usize>,
    pub word_bound: Option<usize>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LetterSpec {
    pub point: Vec<String>,
    #[serde(default)]
    pub inverse: bool,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Command {
    CheckLaw,
    Group {
        #[serde(default)]
        words: Vec<Vec<LetterSpec>>,
        #[serde(default)]
        generators: Vec<Vec<String>>,
        #[serde(default)]
        bound: Option<usize>,
    },
    Delta,
    Smoothen,
    Orders {
        /// Special-fibre factors as polynomials over `F_p`; empty means the
        /// components found by splitting the special fibre.
        #[serde(default)]
        components: Vec<String>,
        #[serde(default)]
        scale: i64,
    },
    FilterMinimal,
    CheckInvariance,
    Pipeline {
        #[serde(default)]
        bound: Option<usize>,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::CheckLaw => "check-law",
            Command::Group { .. } => "group",
            Command::Delta => "delta",
            Command::Smoothen => "smoothen",
            Command::Orders { .. } => "orders",
            Command::FilterMinimal => "filter-minimal",
            Command::CheckInvariance => "check-invariance",
            Command::Pipeline { .. } => "pipeline",
        }
    }

    /// Job blocks the command reads.
    pub fn inputs(&self) -> Vec<&'static str> {
        match self {
            Command::CheckLaw | Command::Group { .. } => vec!["ring", "law"],
            Command::Delta | Command::Smoothen => vec!["ring", "model", "sections"],
            Command::Orders { .. } => vec!["ring", "model", "form"],
            Command::FilterMinimal => vec!["ring", "model", "sections", "form"],
            Command::CheckInvariance => vec!["ring", "law", "form"],
            Command::Pipeline { .. } => vec!["ring", "weierstrass", "sections"],
        }
    }
}
