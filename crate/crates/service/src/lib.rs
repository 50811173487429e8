//! Interactive repair over HTTP: a person answers the questions a strategy
//! asks, one at a time, and sessions survive restarts.

pub mod api;
pub mod error;
pub mod session;
pub mod store;

pub use api::{router, serve, Answer};
pub use error::ServiceError;
pub use session::{CreateSession, PendingQuestion, SessionResult, SessionView, State};
pub use store::Store;
