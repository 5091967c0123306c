//! Abelian networks: finite abelian processors, the functions they compute,
//! and a compiler from those functions to acyclic networks of gates.

pub mod convert;
pub mod error;
pub mod fixtures;
pub mod gates;
pub mod grid;
pub mod network;
pub mod processor;
pub mod pseudomin;
pub mod synth;
pub mod verify;
pub mod zilep;

pub use convert::{processor_to_zilep, zilep_to_processor};
pub use error::{Error, Result};
pub use processor::{AbelianProcessor, AbelianVerdict, Evaluation, Recurrence, RhoShape};
pub use zilep::{LayerProfile, ZilepFunction};
pub use gates::GateSpec;
pub use network::{Network, NetworkBuilder, NodeKind, Wire};
pub use pseudomin::PseudoMin;
pub use synth::{compile, Compiled, Mode, SynthReport};
pub use verify::{verify, VerifyConfig, VerifyReport};
