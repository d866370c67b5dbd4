//! Surface currents, grating form factor and the multipole interference
//! terms of the spectral-angular distribution.

pub mod current;
pub mod form_factor;
pub mod spectral;

pub use current::{surface_current, SurfaceCurrent};
pub use form_factor::{form_factor, FormFactor};
pub use spectral::{
    amplitudes, dw_ee_closed, dw_emu_closed, spectral_terms, Amplitudes, SpectralDecomposition, Term, TermSet,
};
