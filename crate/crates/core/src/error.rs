use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("elements belong to different groups")]
    GroupMismatch,
    #[error("operands live in different rings")]
    Mismatch,
    #[error("order undecided within Magnus degree {degree}")]
    UndecidedAtTruncation { degree: usize },
    #[error("element is not positive: {0}")]
    NotPositive(String),
    #[error("operation not supported for this group family: {0}")]
    UnsupportedFamily(String),
    #[error("subgroup is not normal: {0}")]
    NotNormal(String),
    #[error("series multiplication needs an abelian exponent group")]
    NonAbelianExponent,
    #[error("geometric inversion needs strictly positive valuation, got {0}")]
    NonPositiveValuation(String),
    #[error("zero up to frontier {frontier}{}", context_suffix(.context))]
    ZeroUpToFrontier { frontier: String, context: String },
    #[error("coefficient at level {level} is zero up to its frontier {frontier}")]
    LevelExhausted { level: usize, frontier: String },
    #[error("requested frontier {requested} not reachable (best certified: {achieved})")]
    FrontierBudgetExceeded { requested: String, achieved: String },
    #[error("no proper representation: element is a single term at every certified level")]
    SingleTermOnly,
    #[error("Magnus image has zero constant term; not invertible in the truncated model")]
    MagnusNotReducible,
    #[error("window exhausted: {0}")]
    WindowExhausted(String),
    #[error("no preimage found in window for {0}")]
    NotFoundInWindow(String),
    #[error("certification failed: {0}")]
    CertificationFailed(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("config error: {0}")]
    Config(String),
}

fn context_suffix(context: &str) -> String {
    if context.is_empty() {
        String::new()
    } else {
        format!(" in `{context}`")
    }
}

impl Error {
    pub fn zero_up_to(frontier: impl ToString) -> Self {
        Error::ZeroUpToFrontier { frontier: frontier.to_string(), context: String::new() }
    }

    /// Attaches the offending subexpression to frontier failures.
    pub fn with_context(self, ctx: &str) -> Self {
        match self {
            Error::ZeroUpToFrontier { frontier, context } if context.is_empty() => {
                Error::ZeroUpToFrontier { frontier, context: ctx.to_string() }
            }
            other => other,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
