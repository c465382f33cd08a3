//! Exact numerics for metrology with collective atomic spins.
//!
//! States live in the symmetric (Dicke) subspace of `N` qubits, or in the
//! zero-magnetization pair basis of a spin-1 condensate. Everything is dense
//! linear algebra on dimensions up to a few thousand.

pub mod dynamics;
pub mod error;
pub mod estimation;
pub mod linalg;
pub mod metrology;
pub mod reference;
pub mod spinspace;
pub mod states;
pub mod tomography;

pub use error::{Error, Result};
pub use linalg::{CMatrix, CVector, C64};
pub use spinspace::{Axis, HermitianOperator, KetState, MixedState, SpinSpace, SpinState};
