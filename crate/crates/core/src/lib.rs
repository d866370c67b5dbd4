//! Smith-Purcell radiation of vortex electron packets.
//!
//! The packet is a spreading Laguerre-Gaussian state carrying charge, a
//! magnetic moment along its axis and a time-dependent electric quadrupole.
//! Its evanescent field is Fourier transformed analytically, converted into
//! grating surface currents and summed into spectral-angular distributions
//! split by multipole interference term.

pub mod analysis;
pub mod error;
pub mod fields;
pub mod fourier;
pub mod packet;
pub mod quad;
pub mod radiation;
pub mod regime;
pub mod units;

pub use error::{Error, Result};
pub use packet::LgPacket;
pub use units::{Beam, Constants, Geometry, Observation};
