//! Density states, Kraus channels and time-parametrized noise models.

mod kraus;
mod noise;
mod state;

pub use kraus::{apply_channel, make_channel, ChannelReport, KrausChannel, StandardChannel};
pub use noise::{channel_at_time, NoiseModel};
pub use state::DensityState;
