//! Exact transversals of small hypergraphs, the family of bad hypergraphs,
//! transversal bounds for 4-uniform hypergraphs and total domination via open
//! neighbourhood hypergraphs.
//!
//! ```
//! use transversal_lab::{named, tau};
//!
//! let h8 = named("h8").unwrap().into_hypergraph().unwrap();
//! assert_eq!(tau(&h8).unwrap(), 3);
//! ```

pub mod bounds;
pub mod canon;
pub mod domination;
pub mod error;
pub mod family_b;
pub mod hypergraph;
pub mod instances;
pub mod io;
pub mod report;
pub mod solver;

pub use bounds::{certify, phi, BoundReport, TheoremId};
pub use canon::{canonical_form, is_isomorphic, CanonicalForm};
pub use domination::{gamma_t, onh, pipeline_3n7, Graph};
pub use error::{Error, Result};
pub use family_b::{generate_all_b, is_in_b, verify_lemma5, BCertificate, Member};
pub use hypergraph::{Hypergraph, Transversal, Vertex};
pub use instances::{named, random_hypergraph, GeneratorConfig, Mode, Named};
pub use solver::{greedy_peel, tau, tau_bruteforce, Constraints, SolveResult, Solver};
