use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Coarse error classes, used by the command-line front end to pick an exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Category {
    Config,
    Geometry,
    Condition,
    Io,
}

impl Category {
    pub fn exit_code(self) -> i32 {
        match self {
            Category::Config => 2,
            Category::Geometry => 3,
            Category::Condition => 4,
            Category::Io => 5,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Category::Config => "ConfigError",
            Category::Geometry => "GeometryError",
            Category::Condition => "ConditionError",
            Category::Io => "IoError",
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid curve specification: {0}")]
    InvalidSpec(String),
    #[error("degenerate samples: {0}")]
    DegenerateSamples(String),
    #[error("curve is not regular: speed {speed:e} at parameter {at}")]
    NotRegular { at: f64, speed: f64 },
    #[error("parameter {at} outside domain [{min}, {max}]")]
    OutOfDomain { at: f64, min: f64, max: f64 },
    #[error("derivative order {0} not supported (1..=3)")]
    BadOrder(usize),
    #[error("Frenet frame undefined (curvature below threshold) at {} point(s), first at s = {}", .at.len(), .at.first().copied().unwrap_or(f64::NAN))]
    FrameUndefined { at: Vec<f64> },
    #[error("prescribed curvature is not positive at s = {0}")]
    NonPositiveKappa(f64),
    #[error("frame field is not unit: |V|^2 - 1 = {defect:e} at s = {at}")]
    NonUnitField { at: f64, defect: f64 },
    #[error("coefficients are not unit: u^2 + w^2 - 1 = {0:e}")]
    NonUnitCoefficients(f64),
    #[error("donor field vanishes: cos of the torsion integral crosses zero at {crossings:?}")]
    VanishingV { crossings: Vec<f64> },
    #[error("principal normal derivative vanishes at s = {0}")]
    VanishingNormalDerivative(f64),
    #[error("curve is not Bertrand: {0}")]
    NotBertrand(String),
    #[error("mate condition violated: residual {residual:e} exceeds {tolerance:e}")]
    ConditionViolated { residual: f64, tolerance: f64 },
    #[error("no real coefficient branch: discriminant {0:e} < 0")]
    NoRealBranch(f64),
    #[error("degenerate offset: the candidate coincides with the base up to translation")]
    DegenerateOffset,
    #[error("curve does not lie on the unit sphere (max deviation {0:e})")]
    NotOnUnitSphere(f64),
    #[error("degenerate parameters: {0}")]
    DegenerateParameters(String),
    #[error("constructed curve drifts from unit speed by {0:e}")]
    SpeedDrift(f64),
    #[error("offset parameter {t} outside the real branch domain |t| <= {limit}")]
    OutOfBranchDomain { t: f64, limit: f64 },
    #[error("curves are not a Bertrand mate pair: {0}")]
    NotMates(String),
    #[error("incomplete surface grid: {0}")]
    IncompleteGrid(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn category(&self) -> Category {
        use Error::*;
        match self {
            InvalidSpec(_)
            | BadOrder(_)
            | NonUnitField { .. }
            | NonUnitCoefficients(_)
            | DegenerateParameters(_)
            | OutOfBranchDomain { .. }
            | Config(_) => Category::Config,
            DegenerateSamples(_)
            | NotRegular { .. }
            | OutOfDomain { .. }
            | FrameUndefined { .. }
            | NonPositiveKappa(_)
            | VanishingV { .. }
            | VanishingNormalDerivative(_)
            | NotOnUnitSphere(_)
            | SpeedDrift(_)
            | IncompleteGrid(_) => Category::Geometry,
            NotBertrand(_)
            | ConditionViolated { .. }
            | NoRealBranch(_)
            | DegenerateOffset
            | NotMates(_) => Category::Condition,
            Io(_) => Category::Io,
        }
    }
}
