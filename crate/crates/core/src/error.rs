use thiserror::Error;

use crate::network::ExecState;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed processor: {0}")]
    Processor(String),

    #[error("invalid function: {0}")]
    Function(String),

    #[error("table of {points} points exceeds the limit of {limit}")]
    TableTooLarge { points: u128, limit: u128 },

    #[error("processor has {0} terminal components reachable from the initial state")]
    MultipleTerminalComponents(usize),

    #[error("malformed network: {0}")]
    Network(String),

    #[error("input vector has {got} entries, network has {expected} inputs")]
    InputArity { expected: usize, got: usize },

    #[error("step budget of {budget} exceeded")]
    BudgetExceeded {
        budget: u64,
        state: Box<ExecState>,
    },

    #[error("joint state space exceeds the cap of {0} states")]
    StateCap(usize),

    #[error("synthesis failed in {pass}: {detail}")]
    Synthesis { pass: &'static str, detail: String },

    #[error("wrong synthesis mode: {0}")]
    Mode(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn synth(pass: &'static str, detail: impl Into<String>) -> Self {
        Error::Synthesis {
            pass,
            detail: detail.into(),
        }
    }
}
