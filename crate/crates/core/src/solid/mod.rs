//! A symbolic calculus of solid abelian groups with a truncated numerical
//! oracle.

mod expr;
mod measures;
mod normalize;
mod parse;
mod truncated;

pub use expr::{Atom, IndexSet, SolidExpr};
pub use measures::{measures_module, MeasuresReport};
pub use normalize::{normal_form, normalize, AdicFactor, NormalForm, Term};
pub use parse::parse_expr;
pub use truncated::{
    identity_check, reduced_realization, truncated_realization, IdentityReport, Presentation, Realizations,
    TruncatedModule, MAX_GENERATORS,
};

/// Identities among solid modules that every truncation must respect.
pub const BASIC_IDENTITIES: [(&str, &str); 5] = [
    ("Zp(5) (x) R", "0"),
    ("Zp(2) (x) Zp(3)", "0"),
    ("Zp(3) (x) Zp(3)", "Zp(3)"),
    ("Zp(2) (x) PS(T)", "Zp(2)[[T]]"),
    ("PS(U) (x) PS(T)", "PS(U,T)"),
];
