//! Finite lattice-based logics and their normal modal extensions.
//!
//! A [`Lattice`] with a [`DesignatedSet`] forms a [`Matrix`]. Formulas are
//! evaluated over Kripke models whose worlds take values in the lattice,
//! with `□φ` read as the meet of `φ` over accessible worlds. The
//! [`search`] and [`harness`] modules check, exhaustively at small sizes,
//! which structural properties of a matrix correspond to which modal
//! validities.

mod compiled;
pub mod consequence;
pub mod constructions;
pub mod enumeration;
pub mod error;
pub mod formula;
pub mod harness;
pub mod io;
pub mod kripke;
pub mod lattice;
pub mod properties;
pub mod search;

pub use consequence::{entails, eval_propositional, Assignment, Entailment};
pub use error::{Error, Result};
pub use formula::{Formula, SyntaxError};
pub use kripke::{
    evaluate, frame_valid, model_satisfies, world_satisfies, BoxMode, Frame, KripkeModel, Valuation,
};
pub use lattice::{
    build_implication, validate_lattice, DesignatedSet, Elem, ElemSet, ImpMode, ImplicationTable,
    Lattice, Matrix, Operator,
};
pub use properties::{
    check_designated, check_lattice_properties, classify_implication, Check, DownDistMode, Witness,
};
pub use search::{
    check_regularity, construct_witness, enumerate_frames, find_frame_counterexample,
    CounterexampleReport, Limits, WitnessKind,
};
