//! Hierarchical locally recoverable codes from surfaces fibered into
//! Artin-Schreier and Kummer curves.
//!
//! The crate is organised bottom-up:
//!
//! * [`gf`]: finite fields `GF(p^h)` with table arithmetic.
//! * [`surface`]: fibered surfaces, their fibers and the evaluation set `T`.
//! * [`code`]: the monomial space, generator matrix and closed-form parameters.
//! * [`recovery`]: two-level erasure recovery and simulation.
//! * [`verify`]: distance and point-count checks producing audit records.
//! * [`job`]: JSON job configs, presets, sweeps and file output used by the CLI.

pub mod code;
pub mod export;
pub mod families;
pub mod gf;
pub mod job;
pub mod linalg;
pub mod recovery;
pub mod surface;
pub mod verify;

pub use code::{validate_spec, Code, CodeError, CodeSpec, Eta, GeneratorMatrix, ParamReport, Rho};
pub use gf::{make_field, Elem, Field, FieldParams};
pub use surface::{evaluation_set, Point, SurfaceSpec};
