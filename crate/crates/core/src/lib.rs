pub mod anf;
pub mod attack;
pub mod espresso;
pub mod fsr;
pub mod gf2;
pub mod transform;

pub use anf::{AnfError, BooleanFunction, Monomial, Var};
pub use fsr::{Configuration, FsrError, FsrFile, FsrFileError, FsrSpec, RegisterState, Simulator};
pub use transform::{CompensationList, Move, ShiftPlan, TermCheck, TransformError, Transformed};
