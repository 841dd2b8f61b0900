//! Labelled dense linear algebra and measurement semantics.

mod label;
mod measure;
mod operator;
pub mod spectral;
mod state;

pub use label::{Basis, Mode, PortLabel};
pub use measure::{
    computational_projectors, diagonal_projector, measure, state_projector, Branch, BranchState,
    ClassicalValue, Record,
};
pub use operator::Operator;
pub use spectral::{eigen_normal, spectral_power, Eigensystem};
pub use state::PureState;

/// Complex amplitude.
pub type C64 = num_complex::Complex64;

/// Kronecker product of two operators or two states, left operand outer.
pub trait Tensor: Sized {
    fn tensor(&self, other: &Self) -> crate::Result<Self>;
}

impl Tensor for Operator {
    fn tensor(&self, other: &Self) -> crate::Result<Self> {
        Operator::tensor(self, other)
    }
}

impl Tensor for PureState {
    fn tensor(&self, other: &Self) -> crate::Result<Self> {
        PureState::tensor(self, other)
    }
}

/// `Uⁿ` by repeated multiplication.
pub fn matrix_power_direct(u: &Operator, n: u32) -> Operator {
    u.matrix_power_direct(n)
}
