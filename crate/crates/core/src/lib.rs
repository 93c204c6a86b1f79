//! Normal graded surface singularities given by Q-divisors on the projective
//! line: rationality, fundamental cycles, F-rationality and the
//! classification of low-multiplicity cases.

pub mod classify;
pub mod cli;
pub mod divisor;
pub mod error;
pub mod frational;
pub mod hj;
pub mod number;
pub mod resolution;

pub use classify::{
    canonical_order, enumerate_and_verify, instantiate_family, match_families, threshold_report,
    EnumerationBounds, Family, FamilyMatch, Table,
};
pub use divisor::{
    deg_floor, is_rational_singularity, normalize, period, Fraction, NormalizedDivisor, QDivisor,
    Rationality, RationalityVerdict,
};
pub use error::{Error, Result};
pub use frational::{
    criterion_value, failing_primes, is_f_rational, BnRecord, FRationalVerdict, FRationality,
};
pub use hj::{
    hj_closed_form, hj_eval, hj_expand, hj_tails, t_signature, ClosedForm, HjSequence, TSignature,
};
pub use number::{rat, Rational};
pub use resolution::{
    dual_graph, fundamental_cycle, intersections, laufer_cycle, multiplicity, recursion_cycle,
    verify_cycle, verify_cycle_with, CycleCheck, DualGraph, FundamentalCycle, MultiplicityReport,
    VerifyOptions, Vertex,
};
