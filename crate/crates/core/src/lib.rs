//! Analysis toolkit for functions over small finite fields: c-differential
//! uniformity, exact Walsh spectra, the cubic root criterion, five families of
//! permutation polynomials and drivers that check their claimed
//! c-differential behaviour exhaustively.

pub mod cdiff;
pub mod cubic;
pub mod error;
pub mod families;
pub mod field;
pub mod funcspec;
mod poly;
pub mod report;
pub mod walsh;

pub use error::{Error, Result};

pub use field::{FieldCtx, FieldElem, FieldId};
pub use funcspec::{parse_func, Bijectivity, FuncSpec, Term, TermKind, ValueTable};

pub use cdiff::{cdu, CDdtSummary, Nonlinearity};
pub use families::{FamilyId, FamilyInstance};
pub use report::{Profile, RunAllReport, VerdictReport};
pub use walsh::{GoldVerdict, LinearizedMap, WalshPoint};
