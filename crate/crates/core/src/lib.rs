//! Exact finite data attached to stable gradings of simple Lie algebras.

pub mod charmono;
pub mod cyclotomic;
pub mod endoscopy;
pub mod grading;
pub mod lemmas;
pub mod linalg;
pub mod reflgroup;
pub mod rootdata;
pub mod rootsys;
pub mod verify;
