//! Binary relational model: when do two terms behave the same at a type?
//!
//! The relation is indexed by a type and a pair environment binding each
//! variable to a pair of closed values. Base-refined values are related
//! when they are the same constant and the refinement accepts it under
//! both sides of the environment; functions when they send related
//! arguments to related results; equality types relate any value pair as
//! long as the type's own endpoints are related at the index, so proofs
//! are irrelevant. Function clauses quantify over enumerated arguments,
//! which keeps every verdict decidable and three-valued.
//!
//! Contexts (`Ctx`) are expressions with one hole, typed as a function
//! from the hole's contents; plugging is literal and captures on purpose.

use crate::btype::unrefine;
use crate::denote::{enumerate_values, Bounds};
use crate::eval::{eval, EvalOutcome};
use crate::syntax::{
    free_vars, is_value, subst, BaseType, Env, Expr, Name, Type,
};
use crate::tri::TriBool;
use crate::typing::{synth, TypeError};
use std::collections::BTreeSet;
use std::fmt;

/// Ordered bindings of one variable to a pair of closed values.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct EquivEnv {
    triples: Vec<(Name, Expr, Expr)>,
}

impl EquivEnv {
    pub fn empty() -> EquivEnv {
        EquivEnv::default()
    }

    pub fn bind(&self, name: impl Into<Name>, v1: Expr, v2: Expr) -> EquivEnv {
        let mut triples = self.triples.clone();
        triples.push((name.into(), v1, v2));
        EquivEnv { triples }
    }

    pub fn iter(&self) -> impl Iterator<Item = &(Name, Expr, Expr)> {
        self.triples.iter()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    /// Closes `e` with the left projection.
    pub fn apply_left(&self, e: &Expr) -> Expr {
        self.triples
            .iter()
            .fold(e.clone(), |acc, (x, v1, _)| subst(&acc, x, v1))
    }

    /// Closes `e` with the right projection.
    pub fn apply_right(&self, e: &Expr) -> Expr {
        self.triples
            .iter()
            .fold(e.clone(), |acc, (x, _, v2)| subst(&acc, x, v2))
    }
}

impl fmt::Display for EquivEnv {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, (x, v1, v2)) in self.triples.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x} -> ({v1} | {v2})")?;
        }
        write!(f, "]")
    }
}

fn closes_to_true(e: &Expr, fuel: usize) -> TriBool {
    match eval(e, fuel) {
        EvalOutcome::Value(Expr::Const(c)) => {
            TriBool::from_bool(c == crate::syntax::ConstKind::True)
        }
        EvalOutcome::Value(_) => TriBool::No,
        EvalOutcome::FuelExhausted(_) => TriBool::Unknown,
        EvalOutcome::Stuck(_) => TriBool::No,
    }
}

/// Are closed values `v1` and `v2` related at `ty` under `delta`?
pub fn val_related(delta: &EquivEnv, v1: &Expr, v2: &Expr, ty: &Type, b: &Bounds) -> TriBool {
    if !is_value(v1) || !is_value(v2) {
        return TriBool::No;
    }
    match ty {
        Type::Refined {
            binder,
            base,
            refinement,
        } => {
            let (c1, c2) = match (v1, v2) {
                (Expr::Const(c1), Expr::Const(c2)) => (c1, c2),
                _ => return TriBool::No,
            };
            if c1 != c2 || c1.literal_base() != Some(*base) {
                return TriBool::No;
            }
            let inst = subst(refinement, binder, v1);
            let left = closes_to_true(&delta.apply_left(&inst), b.fuel);
            if left == TriBool::No {
                return TriBool::No;
            }
            left.and(closes_to_true(&delta.apply_right(&inst), b.fuel))
        }
        Type::Fun { binder, dom, cod } => {
            let args = enumerate_values(&unrefine(dom), b.fn_depth);
            let mut incomplete = !args.complete;
            for a1 in &args.values {
                for a2 in &args.values {
                    match val_related(delta, a1, a2, dom, b) {
                        TriBool::Yes => {
                            let inner = delta.bind(binder.clone(), a1.clone(), a2.clone());
                            let app1 = Expr::app(v1.clone(), a1.clone());
                            let app2 = Expr::app(v2.clone(), a2.clone());
                            match expr_related(&inner, &app1, &app2, cod, b) {
                                TriBool::Yes => {}
                                TriBool::No => return TriBool::No,
                                TriBool::Unknown => incomplete = true,
                            }
                        }
                        TriBool::No => {}
                        TriBool::Unknown => incomplete = true,
                    }
                }
            }
            TriBool::Yes.weaken_if(incomplete)
        }
        Type::EqRT { index, left, right } => {
            // Proof contents never matter: the type's own endpoints carry
            // the claim.
            expr_related(delta, left, right, index, b)
        }
    }
}

/// Are `e1` and `e2`, closed by the respective sides of `delta`, related
/// computations at `ty`?
pub fn expr_related(delta: &EquivEnv, e1: &Expr, e2: &Expr, ty: &Type, b: &Bounds) -> TriBool {
    let c1 = delta.apply_left(e1);
    let c2 = delta.apply_right(e2);
    let o1 = eval(&c1, b.fuel);
    let o2 = eval(&c2, b.fuel);
    if matches!(o1, EvalOutcome::Stuck(_)) || matches!(o2, EvalOutcome::Stuck(_)) {
        return TriBool::No;
    }
    match (o1, o2) {
        (EvalOutcome::Value(v1), EvalOutcome::Value(v2)) => {
            val_related(delta, &v1, &v2, ty, b)
        }
        _ => TriBool::Unknown,
    }
}

/// All pair environments agreeing with `env`: each binding enumerates
/// related value pairs at its type, dependencies respected left to right.
/// The flag reports whether the enumeration covered everything.
pub fn equiv_envs(env: &Env, b: &Bounds) -> (Vec<EquivEnv>, bool) {
    let mut out = vec![EquivEnv::empty()];
    let mut complete = true;
    for (name, ty) in env.iter() {
        let carrier = enumerate_values(&unrefine(ty), b.fn_depth);
        complete &= carrier.complete;
        let mut next = Vec::new();
        for delta in &out {
            for v1 in &carrier.values {
                for v2 in &carrier.values {
                    match val_related(delta, v1, v2, ty, b) {
                        TriBool::Yes => {
                            next.push(delta.bind(name.clone(), v1.clone(), v2.clone()))
                        }
                        TriBool::No => {}
                        TriBool::Unknown => complete = false,
                    }
                }
            }
        }
        out = next;
    }
    (out, complete)
}

/// Open relatedness: `e1` and `e2` are related at `ty` under every pair
/// environment for `env`.
pub fn open_related(env: &Env, e1: &Expr, e2: &Expr, ty: &Type, b: &Bounds) -> TriBool {
    let (deltas, complete) = equiv_envs(env, b);
    let mut acc = TriBool::Yes;
    for delta in &deltas {
        match expr_related(delta, e1, e2, ty, b) {
            TriBool::No => return TriBool::No,
            v => acc = acc.and(v),
        }
    }
    acc.weaken_if(!complete)
}

/// An expression with one hole. The hole records the type expected of its
/// contents. Lambda contexts deliberately capture: plugging an open term
/// under a binder is the point of contextual reasoning.
#[derive(Debug, Clone, PartialEq)]
pub enum Ctx {
    Hole(Type),
    AppL(Box<Ctx>, Expr),
    AppR(Expr, Box<Ctx>),
    Lam(Name, Type, Box<Ctx>),
    BEqProof {
        base: BaseType,
        left: Expr,
        right: Expr,
        ctx: Box<Ctx>,
    },
    XEqProof {
        binder: Name,
        dom: Type,
        cod: Type,
        left: Expr,
        right: Expr,
        ctx: Box<Ctx>,
    },
}

impl Ctx {
    pub fn hole_type(&self) -> &Type {
        match self {
            Ctx::Hole(t) => t,
            Ctx::AppL(c, _) => c.hole_type(),
            Ctx::AppR(_, c) => c.hole_type(),
            Ctx::Lam(_, _, c) => c.hole_type(),
            Ctx::BEqProof { ctx, .. } => ctx.hole_type(),
            Ctx::XEqProof { ctx, .. } => ctx.hole_type(),
        }
    }

    fn collect_names(&self, acc: &mut BTreeSet<Name>) {
        match self {
            Ctx::Hole(_) => {}
            Ctx::AppL(c, e) => {
                c.collect_names(acc);
                acc.extend(free_vars(e));
            }
            Ctx::AppR(e, c) => {
                acc.extend(free_vars(e));
                c.collect_names(acc);
            }
            Ctx::Lam(x, _, c) => {
                acc.insert(x.clone());
                c.collect_names(acc);
            }
            Ctx::BEqProof {
                left, right, ctx, ..
            } => {
                acc.extend(free_vars(left));
                acc.extend(free_vars(right));
                ctx.collect_names(acc);
            }
            Ctx::XEqProof {
                binder,
                left,
                right,
                ctx,
                ..
            } => {
                acc.insert(binder.clone());
                acc.extend(free_vars(left));
                acc.extend(free_vars(right));
                ctx.collect_names(acc);
            }
        }
    }
}

/// Plugs `e` into the hole. No renaming happens: binders in the context
/// capture free variables of `e`.
pub fn ctx_apply(ctx: &Ctx, e: &Expr) -> Expr {
    match ctx {
        Ctx::Hole(_) => e.clone(),
        Ctx::AppL(c, a) => Expr::app(ctx_apply(c, e), a.clone()),
        Ctx::AppR(f, c) => Expr::app(f.clone(), ctx_apply(c, e)),
        Ctx::Lam(x, t, c) => Expr::lam(x.clone(), t.clone(), ctx_apply(c, e)),
        Ctx::BEqProof {
            base,
            left,
            right,
            ctx,
        } => Expr::beq(*base, left.clone(), right.clone(), ctx_apply(ctx, e)),
        Ctx::XEqProof {
            binder,
            dom,
            cod,
            left,
            right,
            ctx,
        } => Expr::xeq(
            binder.clone(),
            dom.clone(),
            cod.clone(),
            left.clone(),
            right.clone(),
            ctx_apply(ctx, e),
        ),
    }
}

/// Types a context as a function from hole contents to result. The
/// returned type binds a fresh variable standing for the hole, so the
/// result may depend on what gets plugged in.
pub fn ctx_typecheck(env: &Env, ctx: &Ctx, b: &Bounds) -> Result<Type, TypeError> {
    let hole_ty = ctx.hole_type().clone();
    let mut avoid: BTreeSet<Name> = env.names().cloned().collect();
    ctx.collect_names(&mut avoid);
    let hole = crate::syntax::fresh_name("hole", &avoid);
    let plugged = ctx_apply(ctx, &Expr::var(hole.clone()));
    let inner = env.bind(hole.clone(), hole_ty.clone());
    let result = synth(&inner, &plugged, b)?;
    Ok(Type::fun(hole, hole_ty, result))
}
