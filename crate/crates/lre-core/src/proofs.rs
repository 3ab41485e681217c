//! Construction of equality proofs: reflexivity, symmetry, transitivity.
//!
//! Proof terms are ordinary expressions headed by the equality value
//! constructors, so these combinators are syntax transforms. They do not
//! call the type checker; callers wanting assurance recheck the result.
//! Symmetry and transitivity expect proofs in value form (the shape the
//! evaluator and the reflexivity builder produce) and recurse through the
//! bodies of pointwise proof lambdas, failing with `NotAValue` when a body
//! is computed rather than directly proof-headed.

use crate::syntax::{
    alpha_eq, alpha_eq_type, free_vars, free_vars_type, fresh_name, subst, subst_type,
    BaseType, Expr, Name, Type,
};
use std::collections::BTreeSet;
use std::fmt;

/// Shape of a type that supports equality: base types and functions built
/// from them, with no equality type anywhere in the structure.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EquableType {
    Base(BaseType),
    Fun,
}

impl EquableType {
    /// Classifies `ty`, or None when an equality type occurs within it.
    /// Refinement expressions are not scanned: only the type skeleton
    /// matters for proof shapes.
    pub fn classify(ty: &Type) -> Option<EquableType> {
        match ty {
            Type::Refined { base, .. } => Some(EquableType::Base(*base)),
            Type::Fun { dom, cod, .. } => {
                EquableType::classify(dom)?;
                EquableType::classify(cod)?;
                Some(EquableType::Fun)
            }
            Type::EqRT { .. } => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ProofError {
    /// The type cannot index an equality.
    NotEquable(Type),
    /// Expected an equality-proof value; found this expression.
    NotAValue(Expr),
    /// Two proofs disagree on constructor or annotation.
    HeadMismatch(String),
    /// Transitivity endpoints fail to meet: first proof ends here, second
    /// begins there.
    MiddleMismatch { end: Expr, start: Expr },
    /// Inputs violate a stated precondition.
    Precondition(String),
}

impl fmt::Display for ProofError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProofError::NotEquable(t) => write!(f, "type {t} cannot index an equality"),
            ProofError::NotAValue(e) => {
                write!(f, "expected an equality proof value, found {e}")
            }
            ProofError::HeadMismatch(msg) => write!(f, "proof head mismatch: {msg}"),
            ProofError::MiddleMismatch { end, start } => {
                write!(f, "transitivity endpoints do not meet: {end} vs {start}")
            }
            ProofError::Precondition(msg) => write!(f, "{msg}"),
        }
    }
}

impl std::error::Error for ProofError {}

/// The index a constructed proof actually inhabits. The base proof
/// constructor works at the bare base type, and equality types are
/// invariant in their index, so refined leaves in codomain position are
/// unreachable; this drops them. Domains are left alone: they only feed
/// the pointwise obligation and may be as narrow as the caller likes.
pub fn proof_index(ty: &Type) -> Result<Type, ProofError> {
    EquableType::classify(ty).ok_or_else(|| ProofError::NotEquable(ty.clone()))?;
    Ok(strip_codomain_leaves(ty))
}

fn strip_codomain_leaves(ty: &Type) -> Type {
    match ty {
        Type::Refined { base, .. } => Type::trivial(*base),
        Type::Fun { binder, dom, cod } => Type::fun(
            binder.clone(),
            (**dom).clone(),
            strip_codomain_leaves(cod),
        ),
        Type::EqRT { .. } => ty.clone(),
    }
}

/// The type of proofs that `l` equals `r` at `ty`: a unit refinement
/// recording the comparison at base types, a function producing pointwise
/// equalities at function types. The index is normalized via
/// [`proof_index`] first.
pub fn pfty(l: &Expr, r: &Expr, ty: &Type) -> Result<Type, ProofError> {
    let ty = &proof_index(ty)?;
    match ty {
        Type::Refined { base, .. } => Ok(Type::refined(
            "u",
            BaseType::Unit,
            Expr::eq_at(*base, l.clone(), r.clone()),
        )),
        Type::Fun { binder, dom, cod } => {
            let mut avoid: BTreeSet<Name> = free_vars(l);
            avoid.extend(free_vars(r));
            avoid.extend(free_vars_type(cod));
            let x = fresh_name(binder, &avoid);
            let cod_x = subst_type(cod, binder, &Expr::var(x.clone()));
            Ok(Type::fun(
                x.clone(),
                (**dom).clone(),
                Type::eqrt(
                    cod_x,
                    Expr::app(l.clone(), Expr::var(x.clone())),
                    Expr::app(r.clone(), Expr::var(x)),
                ),
            ))
        }
        Type::EqRT { .. } => Err(ProofError::NotEquable(ty.clone())),
    }
}

/// Builds a proof that `e` equals itself at `ty`. The result checks
/// against the equality type over [`proof_index`]`(ty)`.
pub fn prove_refl(e: &Expr, ty: &Type) -> Result<Expr, ProofError> {
    let ty = &proof_index(ty)?;
    match ty {
        Type::Refined { base, .. } => {
            Ok(Expr::beq(*base, e.clone(), e.clone(), Expr::unit()))
        }
        Type::Fun { binder, dom, cod } => {
            let mut avoid: BTreeSet<Name> = free_vars(e);
            avoid.extend(free_vars_type(cod));
            let x = fresh_name(binder, &avoid);
            let cod_x = subst_type(cod, binder, &Expr::var(x.clone()));
            let body = prove_refl(&Expr::app(e.clone(), Expr::var(x.clone())), &cod_x)?;
            Ok(Expr::xeq(
                binder.clone(),
                (**dom).clone(),
                (**cod).clone(),
                e.clone(),
                e.clone(),
                Expr::lam(x, (**dom).clone(), body),
            ))
        }
        Type::EqRT { .. } => Err(ProofError::NotEquable(ty.clone())),
    }
}

/// Flips a proof of `l` equals `r` into a proof of `r` equals `l`.
pub fn prove_sym(proof: &Expr) -> Result<Expr, ProofError> {
    match proof {
        Expr::BEq {
            base,
            left,
            right,
            proof,
        } => Ok(Expr::BEq {
            base: *base,
            left: right.clone(),
            right: left.clone(),
            proof: proof.clone(),
        }),
        Expr::XEq {
            binder,
            dom,
            cod,
            left,
            right,
            proof,
        } => {
            let (y, ann, body) = match &**proof {
                Expr::Lam(y, ann, body) => (y, ann, body),
                other => return Err(ProofError::NotAValue(other.clone())),
            };
            // The body is flipped in place; no substitution happens, so the
            // lambda variable and all open subterms stay untouched.
            let flipped = prove_sym(body)?;
            Ok(Expr::XEq {
                binder: binder.clone(),
                dom: dom.clone(),
                cod: cod.clone(),
                left: right.clone(),
                right: left.clone(),
                proof: Box::new(Expr::Lam(y.clone(), ann.clone(), Box::new(flipped))),
            })
        }
        other => Err(ProofError::NotAValue(other.clone())),
    }
}

/// Chains a proof of `e1` equals `e2` with a proof of `e2` equals `e3`.
/// The meeting endpoints must agree up to alpha renaming.
pub fn prove_trans(p1: &Expr, p2: &Expr) -> Result<Expr, ProofError> {
    match (p1, p2) {
        (
            Expr::BEq {
                base: b1,
                left: l1,
                right: r1,
                ..
            },
            Expr::BEq {
                base: b2,
                left: l2,
                right: r2,
                ..
            },
        ) => {
            if b1 != b2 {
                return Err(ProofError::HeadMismatch(format!(
                    "equalities at different bases: {b1} vs {b2}"
                )));
            }
            if !alpha_eq(r1, l2) {
                return Err(ProofError::MiddleMismatch {
                    end: (**r1).clone(),
                    start: (**l2).clone(),
                });
            }
            Ok(Expr::beq(*b1, (**l1).clone(), (**r2).clone(), Expr::unit()))
        }
        (
            Expr::XEq {
                binder: bn1,
                dom: d1,
                cod: c1,
                left: l1,
                right: r1,
                proof: pf1,
            },
            Expr::XEq {
                binder: bn2,
                dom: d2,
                cod: c2,
                left: l2,
                right: r2,
                proof: pf2,
            },
        ) => {
            let ann1 = Type::Fun {
                binder: bn1.clone(),
                dom: d1.clone(),
                cod: c1.clone(),
            };
            let ann2 = Type::Fun {
                binder: bn2.clone(),
                dom: d2.clone(),
                cod: c2.clone(),
            };
            if !alpha_eq_type(&ann1, &ann2) {
                return Err(ProofError::HeadMismatch(format!(
                    "equalities at different function types: {ann1} vs {ann2}"
                )));
            }
            if !alpha_eq(r1, l2) {
                return Err(ProofError::MiddleMismatch {
                    end: (**r1).clone(),
                    start: (**l2).clone(),
                });
            }
            let (y1, _, body1) = match &**pf1 {
                Expr::Lam(y, ann, body) => (y, ann, body),
                other => return Err(ProofError::NotAValue(other.clone())),
            };
            let (y2, _, body2) = match &**pf2 {
                Expr::Lam(y, ann, body) => (y, ann, body),
                other => return Err(ProofError::NotAValue(other.clone())),
            };
            // Align the two pointwise proofs on one fresh variable before
            // chaining them.
            let mut avoid: BTreeSet<Name> = free_vars(body1);
            avoid.extend(free_vars(body2));
            avoid.extend(free_vars(l1));
            avoid.extend(free_vars(r2));
            let z = fresh_name(y1, &avoid);
            let zb = Expr::var(z.clone());
            let body1z = subst(body1, y1, &zb);
            let body2z = subst(body2, y2, &zb);
            let chained = prove_trans(&body1z, &body2z)?;
            Ok(Expr::XEq {
                binder: bn1.clone(),
                dom: d1.clone(),
                cod: c1.clone(),
                left: l1.clone(),
                right: r2.clone(),
                proof: Box::new(Expr::lam(z, (**d1).clone(), chained)),
            })
        }
        (Expr::BEq { .. }, Expr::XEq { .. }) | (Expr::XEq { .. }, Expr::BEq { .. }) => {
            Err(ProofError::HeadMismatch(
                "one proof is at a base type, the other at a function type".into(),
            ))
        }
        (Expr::BEq { .. } | Expr::XEq { .. }, other)
        | (other, Expr::BEq { .. } | Expr::XEq { .. }) => {
            Err(ProofError::NotAValue(other.clone()))
        }
        (other, _) => Err(ProofError::NotAValue(other.clone())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::denote::Bounds;
    use crate::syntax::Env;
    use crate::typing::check;

    fn bool_ty() -> Type {
        Type::trivial(BaseType::Bool)
    }

    fn id_bool() -> Expr {
        Expr::lam("x", bool_ty(), Expr::var("x"))
    }

    #[test]
    fn classify_rejects_equality_types_anywhere() {
        assert_eq!(
            EquableType::classify(&bool_ty()),
            Some(EquableType::Base(BaseType::Bool))
        );
        let f = Type::fun("x", bool_ty(), bool_ty());
        assert_eq!(EquableType::classify(&f), Some(EquableType::Fun));
        let eq = Type::eqrt(bool_ty(), Expr::truth(true), Expr::truth(true));
        assert_eq!(EquableType::classify(&eq), None);
        let buried = Type::fun("x", eq, bool_ty());
        assert_eq!(EquableType::classify(&buried), None);
    }

    #[test]
    fn pfty_shapes() {
        let base = pfty(&Expr::truth(true), &Expr::truth(true), &bool_ty()).unwrap();
        match base {
            Type::Refined {
                base: BaseType::Unit,
                refinement,
                ..
            } => assert!(alpha_eq(
                &refinement,
                &Expr::eq_at(BaseType::Bool, Expr::truth(true), Expr::truth(true))
            )),
            other => panic!("expected unit refinement, got {other}"),
        }
        let f = Type::fun("x", bool_ty(), bool_ty());
        let fun = pfty(&id_bool(), &id_bool(), &f).unwrap();
        match fun {
            Type::Fun { cod, .. } => assert!(matches!(*cod, Type::EqRT { .. })),
            other => panic!("expected function proof type, got {other}"),
        }
        let eq = Type::eqrt(bool_ty(), Expr::truth(true), Expr::truth(true));
        assert!(matches!(
            pfty(&Expr::truth(true), &Expr::truth(true), &eq),
            Err(ProofError::NotEquable(_))
        ));
    }

    #[test]
    fn refl_base_rechecks() {
        let p = prove_refl(&Expr::truth(true), &bool_ty()).unwrap();
        let ty = Type::eqrt(bool_ty(), Expr::truth(true), Expr::truth(true));
        assert!(check(&Env::empty(), &p, &ty, &Bounds::default()).is_yes());
    }

    #[test]
    fn refl_fun_rechecks() {
        let f = Type::fun("x", bool_ty(), bool_ty());
        let p = prove_refl(&id_bool(), &f).unwrap();
        assert!(matches!(p, Expr::XEq { .. }));
        let ty = Type::eqrt(f, id_bool(), id_bool());
        assert!(check(&Env::empty(), &p, &ty, &Bounds::default()).is_yes());
    }

    #[test]
    fn sym_flips_endpoints_and_rechecks() {
        // Proof of f = g on the domain where they agree, flipped to g = f.
        let tru = Type::refined(
            "v",
            BaseType::Bool,
            Expr::eq_at(BaseType::Bool, Expr::var("v"), Expr::truth(true)),
        );
        let f = id_bool();
        let g = Expr::lam("x", bool_ty(), Expr::truth(true));
        let pointwise = Expr::lam(
            "x",
            tru.clone(),
            Expr::beq(
                BaseType::Bool,
                Expr::app(f.clone(), Expr::var("x")),
                Expr::app(g.clone(), Expr::var("x")),
                Expr::unit(),
            ),
        );
        let p = Expr::xeq("x", tru.clone(), bool_ty(), f.clone(), g.clone(), pointwise);
        let flipped = prove_sym(&p).unwrap();
        let ty = Type::eqrt(Type::fun("x", tru, bool_ty()), g, f);
        assert!(check(&Env::empty(), &flipped, &ty, &Bounds::default()).is_yes());
    }

    #[test]
    fn trans_base_requires_meeting_endpoints() {
        let p1 = Expr::beq(
            BaseType::Bool,
            Expr::var("a"),
            Expr::var("b"),
            Expr::unit(),
        );
        let p2 = Expr::beq(
            BaseType::Bool,
            Expr::var("b"),
            Expr::var("c"),
            Expr::unit(),
        );
        let p = prove_trans(&p1, &p2).unwrap();
        match &p {
            Expr::BEq { left, right, .. } => {
                assert_eq!(**left, Expr::var("a"));
                assert_eq!(**right, Expr::var("c"));
            }
            other => panic!("expected base proof, got {other}"),
        }
        let bad = Expr::beq(
            BaseType::Bool,
            Expr::var("z"),
            Expr::var("c"),
            Expr::unit(),
        );
        assert!(matches!(
            prove_trans(&p1, &bad),
            Err(ProofError::MiddleMismatch { .. })
        ));
    }

    #[test]
    fn trans_fun_chains_pointwise() {
        let f = Type::fun("x", bool_ty(), bool_ty());
        let refl = prove_refl(&id_bool(), &f).unwrap();
        let chained = prove_trans(&refl, &refl).unwrap();
        let ty = Type::eqrt(f, id_bool(), id_bool());
        assert!(check(&Env::empty(), &chained, &ty, &Bounds::default()).is_yes());
    }

    #[test]
    fn sym_rejects_computed_proof_bodies() {
        // An xeq whose proof slot is an application, not a lambda.
        let p = Expr::xeq(
            "x",
            bool_ty(),
            bool_ty(),
            id_bool(),
            id_bool(),
            Expr::app(id_bool(), id_bool()),
        );
        assert!(matches!(prove_sym(&p), Err(ProofError::NotAValue(_))));
    }

    #[test]
    fn trans_rejects_mixed_heads() {
        let pb = Expr::beq(
            BaseType::Bool,
            Expr::truth(true),
            Expr::truth(true),
            Expr::unit(),
        );
        let pf = prove_refl(&id_bool(), &Type::fun("x", bool_ty(), bool_ty())).unwrap();
        assert!(matches!(
            prove_trans(&pb, &pf),
            Err(ProofError::HeadMismatch(_))
        ));
    }
}
