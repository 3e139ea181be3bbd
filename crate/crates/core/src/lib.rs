pub mod algorithms;
pub mod error;
pub mod functions;
pub mod harness;
pub mod metrics;
pub mod rng;
pub mod space;
pub mod whale;

pub use error::{Error, Result};
pub use rng::RngStream;
pub use space::{clamp_to_bounds, euclidean_distance, Bounds, Position};
pub use whale::{find_better_nearest, Whale};
