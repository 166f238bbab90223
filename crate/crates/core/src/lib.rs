//! Wave-packet revivals in quadratic spectra: coherent packets, fractional
//! revivals, geometric phases of cyclic Pöschl–Teller drives, stroboscopic
//! cancellation and the three-gap statistics of near revivals.

// `!(x > 0.0)` guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod berry;
pub mod cli;
pub mod config;
pub mod contfrac;
pub mod error;
pub mod evolution;
pub mod fractional;
pub mod packets;
pub mod phase;
pub mod recurrence;
pub mod spectra;
pub mod strobe;
pub mod tridiag;
pub mod verify;

pub use error::{Error, Result};
pub use packets::{coherent_packet, correlation, gaussian_packet, WavePacket};
pub use spectra::{PoschlTellerParams, QuadraticSpectrum};
