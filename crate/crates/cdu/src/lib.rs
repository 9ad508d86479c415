//! Exact-arithmetic laboratory for the c-differential uniformity of several
//! families of permutation polynomials over small finite fields.
//!
//! The crate is organised around an immutable [`gf::FieldCtx`]:
//!
//! * [`gf`] — arithmetic in GF(p^n) (traces, Frobenius maps, subfield and
//!   d-th-power tests);
//! * [`cyclotomic`] — exact integers in Z[w], w a primitive p-th root of
//!   unity, the carrier for every Walsh coefficient and character sum;
//! * [`families`] — the five permutation-polynomial constructions and their
//!   expanded forms;
//! * [`analysis`] — c-DDT entries, uniformity spectra, Walsh coefficients and
//!   the character-sum counting oracle;
//! * [`solvers`] — linearized-polynomial kernels, trinomial root recurrences,
//!   characteristic-2 cubics and the two bespoke equation checkers;
//! * [`harness`] — verification suites, sampling policy, reports and the CLI.
//!
//! No floating point is used anywhere in the verification paths.

pub mod analysis;
pub mod cyclotomic;
pub mod error;
pub mod families;
pub mod gf;
pub mod harness;
pub mod solvers;

pub use error::{Error, Result};
pub use gf::{FieldCtx, FieldElem, FieldSpec};
