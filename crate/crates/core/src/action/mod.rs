//! Line integrals of primitives, action differences, flux, action spectra,
//! and the inequality chains built on them.

pub mod checks;
pub mod delta;
pub mod flux;
pub mod forms;
pub mod spectrum;

/// Report tags for checks built on this module.
pub const TAGS: &[&str] = &[
    "action.iterate-scaling",
    "action.well-defined",
    "action.certificate",
    "action.width",
    "action.geometric-inequality",
    "action.isoperimetric",
    "action.flux-hamiltonian",
];

pub use delta::{action_difference, verify_iterate_scaling, ActionRecord, ScalingReport};
pub use flux::{flux_of_path, path_functionals, CircleFunction, Flux, PathFunctionals, TorusPath};
pub use forms::{line_integral, PrimitiveForm, Polyline};
pub use spectrum::{hamiltonian_action_spectrum, twist_spectrum, width_conjugation_check, SpectrumRecord};
pub use checks::{
    corpus_report, geometric_inequality_check, isoperimetric_consistency, loop_corpus, lower_bound_certificate, winding_corpus,
    Certificate, CorpusReport, FillingLower, GeometricInequality, IsoperimetricRecord,
};
