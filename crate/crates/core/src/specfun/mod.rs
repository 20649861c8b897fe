//! Bessel/Hankel functions of integer order and the Helmholtz fundamental
//! solutions built from them.

mod bessel;
mod fundamental;

pub use bessel::{bessel_j, bessel_y, hankel1, MAX_ORDER};
pub use fundamental::{phi_2d, phi_3d, SourcePoint};

pub(crate) use fundamental::phi_2d_unchecked;
