//! Channels in Kraus form, POVMs, classical post-processing, and the
//! predicates that sort channels into CPTP / unital / DIO / MIO.

mod channel;
mod povm;
mod stochastic;

pub use channel::{compose, Channel, ChannelClass, Side};
pub use povm::{classical_postprocess, measurement_as_channel, pullback_povm, Measurement};
pub use stochastic::Stochastic;
