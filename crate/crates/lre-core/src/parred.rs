//! Parallel reduction: contract any subset of ready redexes in one round.
//!
//! The relation is decided exactly, by enumerating every term reachable in
//! one round (`reducts`) and testing membership up to alpha renaming. A
//! round may contract a beta redex whose argument is a value, stage an
//! equality tester on its first constant, or resolve a staged tester on
//! its second, each combined freely with reduction inside subterms,
//! annotations, and refinements. Reducts of the argument are substituted
//! into reducts of the body, so contraction and congruence compose in a
//! single round.
//!
//! `sample_parred` draws one reduct at random, bottom up, for use as a
//! test-pair generator. The simulation checks compare a parallel step
//! against the small-step evaluator on both sides.

use crate::eval::{eval, EvalOutcome};
use crate::syntax::{
    alpha_key, alpha_eq_type, free_vars, fresh_name, is_value, subst, subst_type, ConstKind,
    Expr, Name, Type,
};
use crate::tri::TriBool;
use rand::Rng;
use std::collections::BTreeSet;
use std::fmt;

fn push_unique(out: &mut Vec<Expr>, seen: &mut BTreeSet<String>, e: Expr) {
    if seen.insert(alpha_key(&e)) {
        out.push(e);
    }
}

/// Every term reachable from `e` in one parallel round, `e` included.
pub fn reducts(e: &Expr) -> Vec<Expr> {
    let mut out = Vec::new();
    let mut seen = BTreeSet::new();
    match e {
        Expr::Const(_) | Expr::Var(_) => push_unique(&mut out, &mut seen, e.clone()),
        Expr::Lam(x, t, body) => {
            let ts = reducts_type(t);
            let bs = reducts(body);
            for t2 in &ts {
                for b2 in &bs {
                    push_unique(
                        &mut out,
                        &mut seen,
                        Expr::lam(x.clone(), t2.clone(), b2.clone()),
                    );
                }
            }
        }
        Expr::App(f, a) => {
            let fs = reducts(f);
            let args = reducts(a);
            for f2 in &fs {
                for a2 in &args {
                    push_unique(&mut out, &mut seen, Expr::app(f2.clone(), a2.clone()));
                }
            }
            if let Expr::Lam(x, _, body) = &**f {
                if is_value(a) {
                    let bodies = reducts(body);
                    for b2 in &bodies {
                        for a2 in &args {
                            push_unique(&mut out, &mut seen, subst(b2, x, a2));
                        }
                    }
                }
            }
            if let (Expr::Const(ConstKind::EqOp(b)), Expr::Const(c)) = (&**f, &**a) {
                if c.literal_base() == Some(*b) {
                    push_unique(
                        &mut out,
                        &mut seen,
                        Expr::Const(ConstKind::EqOpPartial(Box::new(c.clone()), *b)),
                    );
                }
            }
            if let (Expr::Const(ConstKind::EqOpPartial(c1, b)), Expr::Const(c2)) =
                (&**f, &**a)
            {
                if c2.literal_base() == Some(*b) {
                    push_unique(&mut out, &mut seen, Expr::truth(**c1 == *c2));
                }
            }
        }
        Expr::BEq {
            base,
            left,
            right,
            proof,
        } => {
            let ls = reducts(left);
            let rs = reducts(right);
            let ps = reducts(proof);
            for l2 in &ls {
                for r2 in &rs {
                    for p2 in &ps {
                        push_unique(
                            &mut out,
                            &mut seen,
                            Expr::beq(*base, l2.clone(), r2.clone(), p2.clone()),
                        );
                    }
                }
            }
        }
        Expr::XEq {
            binder,
            dom,
            cod,
            left,
            right,
            proof,
        } => {
            let ds = reducts_type(dom);
            let cs = reducts_type(cod);
            let ls = reducts(left);
            let rs = reducts(right);
            let ps = reducts(proof);
            for d2 in &ds {
                for c2 in &cs {
                    for l2 in &ls {
                        for r2 in &rs {
                            for p2 in &ps {
                                push_unique(
                                    &mut out,
                                    &mut seen,
                                    Expr::xeq(
                                        binder.clone(),
                                        d2.clone(),
                                        c2.clone(),
                                        l2.clone(),
                                        r2.clone(),
                                        p2.clone(),
                                    ),
                                );
                            }
                        }
                    }
                }
            }
        }
    }
    out
}

/// Every type reachable from `t` in one parallel round, `t` included.
pub fn reducts_type(t: &Type) -> Vec<Type> {
    let mut out: Vec<Type> = Vec::new();
    let push = |out: &mut Vec<Type>, t2: Type| {
        if !out.iter().any(|u| alpha_eq_type(u, &t2)) {
            out.push(t2);
        }
    };
    match t {
        Type::Refined {
            binder,
            base,
            refinement,
        } => {
            for r2 in reducts(refinement) {
                push(
                    &mut out,
                    Type::refined(binder.clone(), *base, r2),
                );
            }
        }
        Type::Fun { binder, dom, cod } => {
            let ds = reducts_type(dom);
            let cs = reducts_type(cod);
            for d2 in &ds {
                for c2 in &cs {
                    push(&mut out, Type::fun(binder.clone(), d2.clone(), c2.clone()));
                }
            }
        }
        Type::EqRT { index, left, right } => {
            let is = reducts_type(index);
            let ls = reducts(left);
            let rs = reducts(right);
            for i2 in &is {
                for l2 in &ls {
                    for r2 in &rs {
                        push(&mut out, Type::eqrt(i2.clone(), l2.clone(), r2.clone()));
                    }
                }
            }
        }
    }
    out
}

/// Does `e1` parallel-step to `e2` in one round?
pub fn parred(e1: &Expr, e2: &Expr) -> bool {
    let key = alpha_key(e2);
    reducts(e1).iter().any(|r| alpha_key(r) == key)
}

/// Does `t1` parallel-step to `t2` in one round?
pub fn parred_type(t1: &Type, t2: &Type) -> bool {
    reducts_type(t1).iter().any(|r| alpha_eq_type(r, t2))
}

/// Parallel step with the same root constructor on both sides: subterms
/// step, the root is not contracted.
pub fn congruent(e1: &Expr, e2: &Expr) -> bool {
    match (e1, e2) {
        (Expr::Const(a), Expr::Const(b)) => a == b,
        (Expr::Var(a), Expr::Var(b)) => a == b,
        (Expr::App(f1, a1), Expr::App(f2, a2)) => parred(f1, f2) && parred(a1, a2),
        (Expr::Lam(x1, t1, b1), Expr::Lam(x2, t2, b2)) => {
            let mut avoid: BTreeSet<Name> = free_vars(b1);
            avoid.extend(free_vars(b2));
            avoid.insert(x1.clone());
            avoid.insert(x2.clone());
            let z = fresh_name(x1, &avoid);
            parred_type(t1, t2)
                && parred(
                    &subst(b1, x1, &Expr::var(z.clone())),
                    &subst(b2, x2, &Expr::var(z)),
                )
        }
        (
            Expr::BEq {
                base: ba,
                left: l1,
                right: r1,
                proof: p1,
            },
            Expr::BEq {
                base: bb,
                left: l2,
                right: r2,
                proof: p2,
            },
        ) => ba == bb && parred(l1, l2) && parred(r1, r2) && parred(p1, p2),
        (
            Expr::XEq {
                binder: x1,
                dom: d1,
                cod: c1,
                left: l1,
                right: r1,
                proof: p1,
            },
            Expr::XEq {
                binder: x2,
                dom: d2,
                cod: c2,
                left: l2,
                right: r2,
                proof: p2,
            },
        ) => {
            let mut avoid: BTreeSet<Name> = crate::syntax::free_vars_type(c1);
            avoid.extend(crate::syntax::free_vars_type(c2));
            avoid.insert(x1.clone());
            avoid.insert(x2.clone());
            let z = fresh_name(x1, &avoid);
            parred_type(d1, d2)
                && parred_type(
                    &subst_type(c1, x1, &Expr::var(z.clone())),
                    &subst_type(c2, x2, &Expr::var(z)),
                )
                && parred(l1, l2)
                && parred(r1, r2)
                && parred(p1, p2)
        }
        _ => false,
    }
}

/// Draws one parallel reduct of `e`, bottom up, contracting each ready
/// redex with probability one half. Returns the reduct and how many
/// contractions fired.
pub fn sample_parred<R: Rng + ?Sized>(e: &Expr, rng: &mut R) -> (Expr, usize) {
    match e {
        Expr::Const(_) | Expr::Var(_) => (e.clone(), 0),
        Expr::Lam(x, t, body) => {
            let (t2, n1) = sample_parred_type(t, rng);
            let (b2, n2) = sample_parred(body, rng);
            (Expr::lam(x.clone(), t2, b2), n1 + n2)
        }
        Expr::App(f, a) => {
            let (f2, nf) = sample_parred(f, rng);
            let (a2, na) = sample_parred(a, rng);
            if let Expr::Lam(..) = &**f {
                if is_value(a) && rng.gen_bool(0.5) {
                    if let Expr::Lam(x, _, body2) = &f2 {
                        return (subst(body2, x, &a2), nf + na + 1);
                    }
                }
            }
            if let (Expr::Const(ConstKind::EqOp(b)), Expr::Const(c)) = (&**f, &**a) {
                if c.literal_base() == Some(*b) && rng.gen_bool(0.5) {
                    return (
                        Expr::Const(ConstKind::EqOpPartial(Box::new(c.clone()), *b)),
                        1,
                    );
                }
            }
            if let (Expr::Const(ConstKind::EqOpPartial(c1, b)), Expr::Const(c2)) =
                (&**f, &**a)
            {
                if c2.literal_base() == Some(*b) && rng.gen_bool(0.5) {
                    return (Expr::truth(**c1 == *c2), 1);
                }
            }
            (Expr::app(f2, a2), nf + na)
        }
        Expr::BEq {
            base,
            left,
            right,
            proof,
        } => {
            let (l2, n1) = sample_parred(left, rng);
            let (r2, n2) = sample_parred(right, rng);
            let (p2, n3) = sample_parred(proof, rng);
            (Expr::beq(*base, l2, r2, p2), n1 + n2 + n3)
        }
        Expr::XEq {
            binder,
            dom,
            cod,
            left,
            right,
            proof,
        } => {
            let (d2, n1) = sample_parred_type(dom, rng);
            let (c2, n2) = sample_parred_type(cod, rng);
            let (l2, n3) = sample_parred(left, rng);
            let (r2, n4) = sample_parred(right, rng);
            let (p2, n5) = sample_parred(proof, rng);
            (
                Expr::xeq(binder.clone(), d2, c2, l2, r2, p2),
                n1 + n2 + n3 + n4 + n5,
            )
        }
    }
}

fn sample_parred_type<R: Rng + ?Sized>(t: &Type, rng: &mut R) -> (Type, usize) {
    match t {
        Type::Refined {
            binder,
            base,
            refinement,
        } => {
            let (r2, n) = sample_parred(refinement, rng);
            (Type::refined(binder.clone(), *base, r2), n)
        }
        Type::Fun { binder, dom, cod } => {
            let (d2, n1) = sample_parred_type(dom, rng);
            let (c2, n2) = sample_parred_type(cod, rng);
            (Type::fun(binder.clone(), d2, c2), n1 + n2)
        }
        Type::EqRT { index, left, right } => {
            let (i2, n1) = sample_parred_type(index, rng);
            let (l2, n2) = sample_parred(left, rng);
            let (r2, n3) = sample_parred(right, rng);
            (Type::eqrt(i2, l2, r2), n1 + n2 + n3)
        }
    }
}

/// One step of a sampled parallel-reduction chain.
#[derive(Debug, Clone, PartialEq)]
pub enum StepTag {
    Start,
    Parallel { contractions: usize },
}

/// A chain e0 => e1 => ... drawn by repeated sampling.
#[derive(Debug, Clone, PartialEq)]
pub struct ParredTrace {
    pub steps: Vec<(Expr, StepTag)>,
}

impl ParredTrace {
    pub fn sample<R: Rng + ?Sized>(e: &Expr, rounds: usize, rng: &mut R) -> ParredTrace {
        let mut steps = vec![(e.clone(), StepTag::Start)];
        let mut cur = e.clone();
        for _ in 0..rounds {
            let (next, n) = sample_parred(&cur, rng);
            steps.push((next.clone(), StepTag::Parallel { contractions: n }));
            cur = next;
        }
        ParredTrace { steps }
    }
}

impl fmt::Display for ParredTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (e, tag) in &self.steps {
            match tag {
                StepTag::Start => writeln!(f, "start      {e}")?,
                StepTag::Parallel { contractions } => {
                    writeln!(f, "step ({contractions} fired)  {e}")?
                }
            }
        }
        Ok(())
    }
}

/// Outcome of playing a parallel step against the evaluator.
#[derive(Debug, Clone, PartialEq)]
pub struct SimReport {
    /// Whether the two terms are one parallel round apart at all.
    pub premise_holds: bool,
    pub verdict: TriBool,
    pub left: EvalOutcome,
    pub right: EvalOutcome,
}

/// If `e1` steps to `e2` in one round and `e1` evaluates to a value, then
/// `e2` evaluates to a value one round ahead of it.
pub fn check_forward_simulation(e1: &Expr, e2: &Expr, fuel: usize) -> SimReport {
    let premise = parred(e1, e2);
    let left = eval(e1, fuel);
    let right = eval(e2, fuel);
    let verdict = if !premise {
        TriBool::No
    } else {
        match (&left, &right) {
            (EvalOutcome::Value(v1), EvalOutcome::Value(v2)) => {
                TriBool::from_bool(parred(v1, v2))
            }
            (EvalOutcome::Value(_), EvalOutcome::FuelExhausted(_)) => TriBool::Unknown,
            (EvalOutcome::Value(_), EvalOutcome::Stuck(_)) => TriBool::No,
            (EvalOutcome::FuelExhausted(_), _) => TriBool::Unknown,
            // The left side never reaches a value, so there is nothing to
            // simulate.
            (EvalOutcome::Stuck(_), _) => TriBool::Yes,
        }
    };
    SimReport {
        premise_holds: premise,
        verdict,
        left,
        right,
    }
}

/// If `e1` steps to `e2` in one round and `e2` evaluates to a value, then
/// `e1` evaluates to a value one round behind it.
pub fn check_backward_simulation(e1: &Expr, e2: &Expr, fuel: usize) -> SimReport {
    let premise = parred(e1, e2);
    let left = eval(e1, fuel);
    let right = eval(e2, fuel);
    let verdict = if !premise {
        TriBool::No
    } else {
        match (&left, &right) {
            (EvalOutcome::Value(v1), EvalOutcome::Value(v2)) => {
                TriBool::from_bool(parred(v1, v2))
            }
            (EvalOutcome::FuelExhausted(_), EvalOutcome::Value(_)) => TriBool::Unknown,
            (EvalOutcome::Stuck(_), EvalOutcome::Value(_)) => TriBool::No,
            (_, EvalOutcome::FuelExhausted(_)) => TriBool::Unknown,
            (_, EvalOutcome::Stuck(_)) => TriBool::Yes,
        }
    };
    SimReport {
        premise_holds: premise,
        verdict,
        left,
        right,
    }
}

/// Terms one round apart reach a constant together, and the same one.
/// Vacuously yes when neither side reaches a constant.
pub fn check_cotermination(e1: &Expr, e2: &Expr, fuel: usize) -> SimReport {
    let premise = parred(e1, e2);
    let left = eval(e1, fuel);
    let right = eval(e2, fuel);
    let verdict = if !premise {
        TriBool::No
    } else {
        let constant = |o: &EvalOutcome| match o {
            EvalOutcome::Value(Expr::Const(c)) => Some(Some(c.clone())),
            EvalOutcome::Value(_) | EvalOutcome::Stuck(_) => Some(None),
            EvalOutcome::FuelExhausted(_) => None,
        };
        match (constant(&left), constant(&right)) {
            (Some(Some(c1)), Some(Some(c2))) => TriBool::from_bool(c1 == c2),
            (Some(Some(_)), Some(None)) | (Some(None), Some(Some(_))) => TriBool::No,
            (Some(None), Some(None)) => TriBool::Yes,
            _ => TriBool::Unknown,
        }
    };
    SimReport {
        premise_holds: premise,
        verdict,
        left,
        right,
    }
}
