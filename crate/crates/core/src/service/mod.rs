//! Operational shell around the dialogue engine: transcripts, file-backed
//! sessions and the HTTP API. The `icb` binary and the examples drive the
//! same [`Engine`](crate::dialogue::Engine) through these.

pub mod http;
pub mod store;
pub mod transcript;

pub use http::{router, AppState};
pub use store::{SessionRecord, SessionStatus, Workspace};
pub use transcript::{replay, ReplayReport, Turn};

/// Environment variable naming the default workspace directory.
pub const WORKSPACE_ENV: &str = "ICB_WORKSPACE";
