//! Call-by-value small-step evaluator.
//!
//! Evaluation contexts: the function position of an application, then the
//! argument once the function is a value, and the proof slot of `beq`/`xeq`.
//! The equated subterms of proofs are never evaluated. Three axioms fire at
//! the root: beta, staging a partially applied equality tester, and comparing
//! the staged constant against a second constant syntactically.

use crate::syntax::{is_value, subst, BaseType, ConstKind, Expr};
use crate::tri::TriBool;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EvalOutcome {
    /// Reached a value.
    Value(Expr),
    /// Fuel ran out; carries the last expression reached.
    FuelExhausted(Expr),
    /// No step applies and the expression is not a value.
    Stuck(Expr),
}

impl EvalOutcome {
    pub fn value(self) -> Option<Expr> {
        match self {
            EvalOutcome::Value(v) => Some(v),
            _ => None,
        }
    }
}

/// One deterministic step; `None` when `e` is a value or stuck.
pub fn step(e: &Expr) -> Option<Expr> {
    match e {
        Expr::Const(_) | Expr::Var(_) | Expr::Lam(..) => None,
        Expr::App(f, a) => {
            if !is_value(f) {
                return step(f).map(|f2| Expr::App(Box::new(f2), a.clone()));
            }
            if !is_value(a) {
                return step(a).map(|a2| Expr::App(f.clone(), Box::new(a2)));
            }
            apply(f, a)
        }
        Expr::BEq {
            base,
            left,
            right,
            proof,
        } => step(proof).map(|p2| Expr::beq(*base, (**left).clone(), (**right).clone(), p2)),
        Expr::XEq {
            binder,
            dom,
            cod,
            left,
            right,
            proof,
        } => step(proof).map(|p2| Expr::XEq {
            binder: binder.clone(),
            dom: dom.clone(),
            cod: cod.clone(),
            left: left.clone(),
            right: right.clone(),
            proof: Box::new(p2),
        }),
    }
}

/// Root axioms, both operands already values.
fn apply(f: &Expr, a: &Expr) -> Option<Expr> {
    match f {
        Expr::Lam(x, _, body) => Some(subst(body, x, a)),
        Expr::Const(ConstKind::EqOp(b)) => match a {
            Expr::Const(c) if c.literal_base() == Some(*b) => Some(Expr::Const(
                ConstKind::EqOpPartial(Box::new(c.clone()), *b),
            )),
            _ => None,
        },
        Expr::Const(ConstKind::EqOpPartial(c1, b)) => match a {
            Expr::Const(c2) if c2.literal_base() == Some(*b) => {
                Some(Expr::truth(**c1 == *c2))
            }
            _ => None,
        },
        _ => None,
    }
}

/// Iterates `step` at most `fuel` times.
pub fn eval(e: &Expr, fuel: usize) -> EvalOutcome {
    let mut cur = e.clone();
    let mut remaining = fuel;
    loop {
        if is_value(&cur) {
            return EvalOutcome::Value(cur);
        }
        match step(&cur) {
            None => return EvalOutcome::Stuck(cur),
            Some(next) => {
                if remaining == 0 {
                    return EvalOutcome::FuelExhausted(cur);
                }
                cur = next;
                remaining -= 1;
            }
        }
    }
}

/// Does `e` evaluate to exactly the constant `c` within `fuel` steps?
pub fn evaluates_to_const(e: &Expr, c: &ConstKind, fuel: usize) -> TriBool {
    match eval(e, fuel) {
        EvalOutcome::Value(Expr::Const(got)) => TriBool::from_bool(&got == c),
        EvalOutcome::Value(_) | EvalOutcome::Stuck(_) => TriBool::No,
        EvalOutcome::FuelExhausted(_) => TriBool::Unknown,
    }
}

/// Convenience tag for the base type of the comparison `l ≈_b r` evaluated
/// to `true`; used by refinement checks everywhere.
pub fn eq_holds(b: BaseType, l: &Expr, r: &Expr, fuel: usize) -> TriBool {
    evaluates_to_const(&Expr::eq_at(b, l.clone(), r.clone()), &ConstKind::True, fuel)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::Type;

    fn id_bool() -> Expr {
        Expr::lam("x", Type::trivial(BaseType::Bool), Expr::var("x"))
    }

    #[test]
    fn beta_steps() {
        let e = Expr::app(id_bool(), Expr::truth(true));
        assert_eq!(step(&e), Some(Expr::truth(true)));
    }

    #[test]
    fn eq_stages_then_compares() {
        let staged = step(&Expr::app(
            Expr::Const(ConstKind::EqOp(BaseType::Bool)),
            Expr::truth(true),
        ))
        .unwrap();
        assert_eq!(
            staged,
            Expr::Const(ConstKind::EqOpPartial(
                Box::new(ConstKind::True),
                BaseType::Bool
            ))
        );
        let compared = step(&Expr::app(staged, Expr::truth(false))).unwrap();
        assert_eq!(compared, Expr::truth(false));
    }

    #[test]
    fn eq_chain_evaluates() {
        let e = Expr::eq_at(BaseType::Bool, Expr::truth(true), Expr::truth(true));
        assert_eq!(eval(&e, 10), EvalOutcome::Value(Expr::truth(true)));
        let e = Expr::eq_at(BaseType::Unit, Expr::unit(), Expr::unit());
        assert_eq!(eval(&e, 10), EvalOutcome::Value(Expr::truth(true)));
    }

    #[test]
    fn proof_slot_is_an_evaluation_context() {
        let pending = Expr::app(
            Expr::lam("u", Type::trivial(BaseType::Unit), Expr::unit()),
            Expr::unit(),
        );
        let e = Expr::beq(BaseType::Bool, Expr::truth(true), Expr::truth(true), pending);
        let stepped = step(&e).unwrap();
        assert_eq!(
            stepped,
            Expr::beq(BaseType::Bool, Expr::truth(true), Expr::truth(true), Expr::unit())
        );
    }

    #[test]
    fn equated_subterms_stay_inert() {
        let pending = Expr::app(id_bool(), Expr::truth(true));
        let e = Expr::beq(BaseType::Bool, pending.clone(), pending, Expr::unit());
        assert_eq!(step(&e), None);
        assert!(is_value(&e));
    }

    #[test]
    fn values_are_normal_forms() {
        for v in [
            Expr::truth(true),
            Expr::unit(),
            id_bool(),
            Expr::Const(ConstKind::EqOp(BaseType::Unit)),
        ] {
            assert!(is_value(&v));
            assert_eq!(step(&v), None);
        }
    }

    #[test]
    fn stuck_terms_are_reported() {
        // true applied to true is base-ill-typed and stuck.
        let e = Expr::app(Expr::truth(true), Expr::truth(true));
        assert!(matches!(eval(&e, 10), EvalOutcome::Stuck(_)));
        // A free variable in evaluation position is stuck.
        let e = Expr::app(Expr::var("f"), Expr::truth(true));
        assert!(matches!(eval(&e, 10), EvalOutcome::Stuck(_)));
        // Comparing at the wrong base is stuck, not false.
        let e = Expr::eq_at(BaseType::Bool, Expr::unit(), Expr::unit());
        assert!(matches!(eval(&e, 10), EvalOutcome::Stuck(_)));
    }

    #[test]
    fn fuel_exhaustion_reports_progress() {
        // Two redexes, one unit of fuel.
        let e = Expr::app(
            id_bool(),
            Expr::app(id_bool(), Expr::truth(true)),
        );
        match eval(&e, 1) {
            EvalOutcome::FuelExhausted(last) => {
                assert_eq!(last, Expr::app(id_bool(), Expr::truth(true)));
            }
            other => panic!("expected fuel exhaustion, got {other:?}"),
        }
        assert_eq!(eval(&e, 2), EvalOutcome::Value(Expr::truth(true)));
    }

    #[test]
    fn evaluates_to_const_verdicts() {
        let e = Expr::eq_at(BaseType::Bool, Expr::truth(true), Expr::truth(false));
        assert_eq!(evaluates_to_const(&e, &ConstKind::False, 10), TriBool::Yes);
        assert_eq!(evaluates_to_const(&e, &ConstKind::True, 10), TriBool::No);
        assert_eq!(
            evaluates_to_const(&e, &ConstKind::False, 1),
            TriBool::Unknown
        );
        assert_eq!(
            evaluates_to_const(&id_bool(), &ConstKind::True, 10),
            TriBool::No
        );
    }

    #[test]
    fn determinism_single_successor() {
        // step is a function; re-stepping the same term gives the same result.
        let e = Expr::app(
            Expr::app(Expr::Const(ConstKind::EqOp(BaseType::Bool)), Expr::truth(true)),
            Expr::app(id_bool(), Expr::truth(false)),
        );
        let s1 = step(&e);
        let s2 = step(&e);
        assert_eq!(s1, s2);
    }
}
