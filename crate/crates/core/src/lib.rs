//! Direct and inverse scattering, scalar Riemann-Hilbert factors, the
//! parabolic-cylinder model problem and the long-time leading-order formula
//! for the reverse space-time nonlocal Hirota equation
//! q_t + i α (q_xx + 2 q² q(−x,−t)) + β (q_xxx + 6 q q(−x,−t) q_x) = 0.

pub mod asymptotics;
pub mod deltafun;
pub mod interp;
pub mod modelrh;
pub mod ode;
pub mod phase;
pub mod quad;
pub mod rhoracle;
pub mod scattering;
pub mod specfun;

/// 2×2 complex matrix used for jumps, Jost matrices and moments.
pub type Mat2 = nalgebra::Matrix2<num_complex::Complex64>;
