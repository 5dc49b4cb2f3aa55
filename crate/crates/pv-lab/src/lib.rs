//! Exact computations on prehomogeneous vector spaces of parabolic type.

pub mod chevalley;
pub mod classify;
pub mod diagram;
pub mod grading;
pub mod linalg;
pub mod models;
pub mod pvcore;
pub mod rootsys;
