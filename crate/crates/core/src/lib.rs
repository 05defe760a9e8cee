//! Build a 3D scene by talking to it.
//!
//! An utterance such as "Add a Yaskawa MA2010 in front on the right" is
//! classified into an intent with parameters ([`nlu`]), handed to a
//! belief/plan agent as a `request(..)` belief ([`agent`]), which sends a
//! scene command over a small path-based wire format ([`protocol`]) to a
//! collision-checked scene ([`scene`]). [`session`] wires these together and
//! [`store`] loads the TOML workspace that configures them.

pub mod agent;
pub mod nlu;
pub mod protocol;
pub mod scene;
pub mod session;
pub mod store;

pub use session::{ChatOutcome, ChatTurn, LocalSession, TurnStatus, Vesna};
