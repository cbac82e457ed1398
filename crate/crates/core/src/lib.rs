//! Kashaev's invariant of knots by R-matrix state sums, the hyperbolic
//! gluing equations of the figure-eight knot complement, and numerical
//! checks of the volume conjecture.
//!
//! Modules, bottom up:
//!
//! - [`qkernel`]: arithmetic at `q = exp(2πi/N)`.
//! - [`yang_baxter`]: entries of `R`, `R⁻¹`, `μ`, `μ⁻¹` and a dense check of
//!   the enhanced Yang-Baxter identities.
//! - [`tangle`]: (1,1)-tangle diagrams in Morse position, labelings, angle
//!   conditions, and the state-sum contraction.
//! - [`hypergeo`]: dilogarithm, the potential `V(z)`, gluing systems and their
//!   Newton solver, Bloch-Wigner volumes.
//! - [`asymptotics`]: the closed form for the figure-eight, volume sequences,
//!   and growth fits.

pub mod asymptotics;
pub mod error;
pub mod hypergeo;
pub mod qkernel;
pub mod tangle;
pub mod yang_baxter;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use qkernel::{QBase, QContext};

use serde::{Deserialize, Serialize};

/// A complex number as `{"re": .., "im": ..}` in JSON output.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexValue {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for ComplexValue {
    fn from(z: Complex64) -> Self {
        ComplexValue { re: z.re, im: z.im }
    }
}

impl From<ComplexValue> for Complex64 {
    fn from(z: ComplexValue) -> Self {
        Complex64::new(z.re, z.im)
    }
}
