//! Code-based bipartite gadgets with low contact dimension, biclique covers,
//! and the grid reductions between Orthogonal Vectors, Bichromatic Closest
//! Pair, Closest Pair and Maximum Inner Product.
//!
//! Every construction ships with a brute-force checker so that gadgets,
//! covers and reductions can be verified exhaustively at desk scale.

pub mod bits;
pub mod center;
pub mod code;
pub mod cover;
pub mod editembed;
pub mod error;
pub mod field;
pub mod gadget;
pub mod io;
pub mod reduce;
pub mod solver;

pub use bits::{BitMatrix, BitPoint};
pub use center::{find_center, verify_certificate, CenterCertificate};
pub use code::{rs_code, Codeword, EnumBudget, LinearCode};
pub use cover::{best_permutation, cover_biclique, verify_cover, PermutationCover, SidePreservingPermutation};
pub use editembed::{edit_distance, estimate_lambda, gen_substitution_code, zeta, SubstitutionCode};
pub use error::{Error, Result};
pub use field::{nth_prime, FieldElement, PrimeField};
pub use gadget::{
    build_cd_gadget, build_gap_cd_gadget, build_ip_gadget, simplex_embed, verify_gadget, BipartiteGadget,
    GadgetKind, VerifiedGadget,
};
pub use solver::{Instance, InstanceKind, PointSet, Verdict};

/// Exact rational used for thresholds, gaps and density floors.
pub type Rational = num_rational::Ratio<i128>;
