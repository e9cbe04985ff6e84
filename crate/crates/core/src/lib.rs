//! Exact GCD and LCM matrices over ordered sets of positive integers.
//!
//! The crate decides total nonnegativity of GCD matrices three independent
//! ways (prime-exponent column monotonicity, the gcd triple identity, and
//! exhaustive minors), evaluates the closed-form tridiagonal inverse and the
//! closed-form integer quotient `[S](S)^-1`, and checks divisibility of LCM
//! matrices by GCD matrices against an exact linear-solve oracle.
//!
//! Everything is exact: integers are arbitrary precision and matrices carry
//! reduced rationals. With the default `parallel` feature the data-parallel
//! loops (minor enumeration, orderability search, counterexample search,
//! batch helpers) run on rayon; without it they run sequentially and return
//! identical results.

pub mod divisibility;
pub mod exactmatrix;
pub mod generate;
pub mod io;
pub mod numtheory;
pub mod parallel;
pub mod setmodel;
pub mod tncore;

pub use divisibility::{
    divide_oracle, divide_power, divide_via_closed_form, search_gcd_closed_nondivisor,
    DivisibilityMethod, DivisibilityReport, SearchError, SearchOutcome, SearchStats, Side,
};
pub use exactmatrix::{ExactMatrix, MatrixError, MinorCheck, MinorWitness, DEFAULT_MINOR_CAP};
pub use numtheory::{Factorization, Nat, NumError, Rat};
pub use setmodel::{
    ColumnDirection, CoprimeChains, ExponentMatrix, MonotoneReport, OrderedSet, Permutation,
    SetError,
};
pub use tncore::{IdentityViolation, TnError, TnMethod, TnSet, TnVerdict, TnWitness, TridiagonalInverse};
