//! System model: SM constellations, Rayleigh channels, the artificial-noise
//! projector, interference-plus-noise covariances, transmission and ML detection.

mod channel;
mod codebook;
mod link;
mod projector;

pub use channel::{sample_channel, ChannelPair};
pub use codebook::{make_codebook, sm_signal, Scheme, SmCodebook};
pub use link::{ml_detect, noise_covariance, transmit, PowerConfig};
pub use projector::{an_projector, AnProjector};
