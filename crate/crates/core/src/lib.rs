//! Stable permutations of `[n]^t`: tuple permutations, tensor products, the
//! `Ψ_k` flow, stability certificates, and a closed-form classifier for
//! transpositions of `[n]^3` together with an exhaustive checker for it.

pub mod cli;
pub mod error;
pub mod perm;
pub mod psi;
pub mod stability;
pub mod text;
pub mod transposition;
pub mod verify;

pub use error::{Error, Result};
pub use perm::{lex_rank, lex_unrank, Budget, TuplePerm, Word};
pub use psi::{psi_apply, psi_factors, psi_materialize, Factor, PsiFactorization};
pub use stability::{
    definitional_prefix_check, exact_rank_for_stable, rank_one_check, rank_one_verdict, stability_search,
    Method, StabilityVerdict, Status,
};
pub use transposition::{
    check_witnesses, classify, stability_condition, witness_points, Branch, CaseTag, Claim, Classification, ClassificationRecord,
    Transposition3, Witness, WitnessCheck,
};
pub use verify::{
    emit_report, enumerate_transpositions, parse_report, verify_theorem, verify_theorem_with, InstanceRow,
    Mismatch, ReportFormat, VerificationReport, VerifyOptions,
};
