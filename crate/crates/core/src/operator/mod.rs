//! Truncated operator models: Weyl representations on finite windows,
//! Cayley transforms, graph norms, the Toeplitz generator and Gram-matrix
//! positivity.

mod cayley;
mod graph_norm;
mod inducibility;
mod rep;
mod sparse;
mod surd;
mod toeplitz;

pub use cayley::{cayley, defect_lower_bound, deficiency_model, CayleyReport, DeficiencyReport, REGULARITY_TOLERANCE};
pub use graph_norm::{graph_norm, graph_norm_directed_check, graph_norm_matrix, random_vector, GraphNormReport, DIRECTED_BOUND};
pub use inducibility::{inducibility_matrix_check, DiagonalRep, InducibilityVerdict, PSD_TOLERANCE};
pub use rep::{check_relations, weyl_rep, weyl_rep_float, OperatorReport, RelationReport, TruncatedRep, RELATION_TOLERANCE};
pub use sparse::{SparseMatrix, Triple};
pub use surd::{split_square, SurdScalar};
pub use toeplitz::{toeplitz_generator, toeplitz_suite, truncated_shift, ToeplitzReport, TOEPLITZ_TOLERANCE};

#[cfg(test)]
mod tests;
