//! A call-by-value refinement-type calculus with semantic subtyping and
//! type-indexed propositional equality, packaged as a checker, evaluator,
//! prover, and executable metatheory harness.
//!
//! The language has two base types (`Bool`, `Unit`), dependent function
//! types, refinement types whose predicates are expressions of the language
//! itself, and a propositional equality type `EqRT ty l r` inhabited by
//! proof values (`beq` for base equality, `xeq` for pointwise function
//! equality). Subtyping on base refinements is semantic: it is decided by
//! enumerating the finite carriers and evaluating refinements, so the
//! checker is exact on the first-order fragment and explicitly three-valued
//! everywhere else.

pub mod tri;

pub mod syntax;

pub mod parse;

pub mod eval;

pub mod btype;

pub mod denote;

pub mod typing;

pub mod proofs;

pub mod lr;

pub mod parred;

pub mod infer;

pub mod gen;

pub use btype::{btype, unrefine, BaseTypeError, UEnv, UType};
pub use denote::{
    closing_substs, constants_sound, denote_member, enumerate_values, Bounds, ClosingSubst,
    ConstantsReport, Enumeration,
};
pub use eval::{eval, evaluates_to_const, step, EvalOutcome};
pub use gen::{GenConfig, Generator};
pub use infer::{
    check_implication, gen_funext_constraints, gen_xeq_constraints, houdini_solve, run_demo,
    Atom, Candidate, Constraint, DemoReport, PredVar, Solution,
};
pub use lr::{
    ctx_apply, ctx_typecheck, equiv_envs, expr_related, open_related, val_related, Ctx, EquivEnv,
};
pub use parred::{
    check_backward_simulation, check_cotermination, check_forward_simulation, congruent, parred,
    parred_type, sample_parred, ParredTrace, SimReport, StepTag,
};
pub use parse::{parse_expr, parse_query, parse_type, ParseError, Query};
pub use proofs::{pfty, proof_index, prove_refl, prove_sym, prove_trans, EquableType, ProofError};
pub use syntax::{alpha_eq, alpha_eq_type, free_vars, is_value, subst, subst_type, tycon, BaseType,
    ConstKind, Env, Expr, Type};
pub use tri::TriBool;
pub use typing::{check, selfify, subtype, subtype_witness, synth, wf, wf_env, CheckOutcome,
    Subtyped, TypeError};
