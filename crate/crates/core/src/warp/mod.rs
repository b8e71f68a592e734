//! Warp factors `ψ(r, s)`: expression language, evaluation and models.

pub mod eval;
pub mod expr;
pub mod model;
pub mod parser;

pub use eval::{eval_warp, eval_warp_log, DomainError, DomainIssue, LogJet, WarpJet};
pub use expr::{BinOp, Constant, Func, Var, WarpExpr};
pub use model::{builtin_model, Builtin, ManifoldModel, ModelError};
pub use parser::{parse_warp, ParseError, ParseErrorKind};
