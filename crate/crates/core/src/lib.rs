//! Symbolic solver for exact differential equations
//! `M_1 dx_1 + ... + M_n dx_n = 0`.
//!
//! The main entry points are [`parse_form`], [`check_exact`],
//! [`solve_basic`] and [`solve_standard`]:
//!
//! ```
//! use exactform::{canonicalize, parse_expression, parse_form, solve_basic};
//!
//! let form = parse_form("cos(x)*cos(y) dx - sin(x)*sin(y) dy = 0").unwrap();
//! let solution = solve_basic(&form).unwrap();
//! let expected = parse_expression("sin(x)*cos(y)").unwrap();
//! assert_eq!(canonicalize(&solution.potential), canonicalize(&expected));
//! assert_eq!(solution.tally.integrations, 2);
//! ```

pub mod calculus;
pub mod exact;
pub mod expr;
pub mod fuzz;
pub mod numcheck;
pub mod par;
pub mod parser;
pub mod sample;

pub use calculus::{differentiate, integrate, is_basic_type_one, is_basic_type_two, CalculusError};
pub use exact::{
    check_exact, cost_model_standard, solve_basic, solve_standard, term_multiplicity_diagnostic, verify_solution,
    DifferentialForm, ExactnessReport, Method, OperationTally, Solution, SolveError, SolveOptions,
};
pub use expr::{canonicalize, equivalence, eval_numeric, free_vars, render, Assignment, Equivalence, Expr};
pub use parser::{format_expr, format_form, parse_expression, parse_form, ParseError};
pub use sample::{DomainBox, SampleConfig};
