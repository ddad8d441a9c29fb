//! Exact symbolic engine for differential graded commutative algebras over
//! rings of differential operators.
//!
//! The coefficient ring is the normal-ordered Weyl algebra `D` over `ℚ` in a
//! configurable number of base variables (`p = 0` recovers the classical
//! setting of differential graded commutative algebras over `ℚ`). On top of
//! it the crate builds free graded modules with disc/sphere building blocks,
//! free graded-commutative algebras with Koszul-sign normal forms, the two
//! explicit functorial factorizations (trivial-cofibration/fibration and
//! cofibration/trivial-fibration), and Koszul and Koszul-Tate resolutions.
//! All homological claims are checked on finite degree/order truncations by
//! exact rational linear algebra; truncation leakage is flagged, never
//! silently ignored.

pub mod algebra;
pub mod dga;
pub mod error;
pub mod factorization;
pub mod gens;
pub mod homology;
pub mod jet;
pub mod koszul;
pub mod linalg;
pub mod module;
pub mod morphism;
pub mod multiindex;
pub mod poly;
pub mod scalar;
pub mod symmetrize;
pub mod weyl;

pub use algebra::{AlgElem, Degree, Monomial, OGen};
pub use dga::{Dga, RewriteRule};
pub use error::Error;
pub use factorization::{
    cof_trivfib, cofibrant_replacement, functorial_square, minimal_variant, pushout_gen_cof,
    pushout_universal, trivcof_fib, verify_rsda, EnumerationBudget, FactorizationKind,
    FactorizationResult, PushoutData, RsdaReport, StageLog,
};
pub use gens::{canonical_well_order, GenId, GenKind, Payload};
pub use homology::{
    is_cofibration_module, is_fibration, is_weak_equivalence, HomologyReport, TruncatedComplex,
    Truncation,
};
pub use jet::{jet_algebra, prolong, total_derivative, JetSpec};
pub use koszul::{koszul_resolution, koszul_tate, kt_as_undercategory_replacement, kt_verify,
    EquationSystem, KtComplex, NoetherSet};
pub use module::{disc, extend_differential, sphere, FreeDgModule, ModElem, ModMorphism};
pub use morphism::DgaMorphism;
pub use multiindex::MultiIndex;
pub use poly::Poly;
pub use scalar::Scalar;
pub use weyl::WeylOp;

/// Shorthand result type used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
