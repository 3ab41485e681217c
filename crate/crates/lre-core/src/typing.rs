//! Bidirectional refinement typing with semantic subtyping.
//!
//! `synth` computes the strongest type the rules justify: constants get
//! their assigned types, base-typed variables are selfified, applications
//! substitute the argument into the codomain, and proof constructors check
//! their proof obligation before handing back the equality type. `check` is
//! synthesis followed by subtyping, with one twist: a base-typed expression
//! may also be checked through its selfified type, which is how the
//! self-strengthening rule becomes algorithmic.
//!
//! Subtyping on base refinements is semantic: enumerate every closing
//! substitution of the environment, then test carrier values for set
//! inclusion. It is exact when the closings are complete (first-order
//! environments) and three-valued otherwise. Equality types are invariant:
//! mutual index subtyping with syntactically (alpha) equal endpoints.

use crate::btype::{btype, UEnv, UType};
use crate::denote::{closing_substs, denote_member, enumerate_values, Bounds, ClosingSubst};
use crate::syntax::{
    alpha_eq, free_vars, free_vars_type, fresh_name, subst_type, tycon, BaseType, Env, Expr,
    Name, Type,
};
use crate::tri::TriBool;
use std::collections::BTreeSet;
use std::fmt;

#[derive(Debug, Clone, PartialEq)]
pub enum TypeError {
    Unbound(Name),
    NotWellFormed(Type),
    SubtypeFailed {
        sub: Type,
        sup: Type,
        witness: Option<(ClosingSubst, Expr)>,
    },
    /// Equality types with endpoints that are not alpha-equal.
    EqIndexMismatch {
        left: Type,
        right: Type,
    },
    /// Shape mismatch: applied a non-function, compared across bases, etc.
    BaseMismatch(String),
    /// A required semantic check came back Unknown.
    BoundsExceeded,
}

impl fmt::Display for TypeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TypeError::Unbound(x) => write!(f, "unbound variable {x}"),
            TypeError::NotWellFormed(t) => write!(f, "type is not well-formed: {t}"),
            TypeError::SubtypeFailed { sub, sup, witness } => {
                write!(f, "{sub} is not a subtype of {sup}")?;
                if let Some((theta, v)) = witness {
                    write!(f, " (witness: value {v} under {theta})")?;
                }
                Ok(())
            }
            TypeError::EqIndexMismatch { left, right } => {
                write!(f, "equality types have mismatched endpoints: {left} vs {right}")
            }
            TypeError::BaseMismatch(msg) => write!(f, "{msg}"),
            TypeError::BoundsExceeded => write!(f, "verdict unknown: bounds exceeded"),
        }
    }
}

impl std::error::Error for TypeError {}

/// Verdict of `check`; a definite No carries the reason.
#[derive(Debug, Clone, PartialEq)]
pub enum CheckOutcome {
    Yes,
    No(TypeError),
    Unknown,
}

impl CheckOutcome {
    pub fn tri(&self) -> TriBool {
        match self {
            CheckOutcome::Yes => TriBool::Yes,
            CheckOutcome::No(_) => TriBool::No,
            CheckOutcome::Unknown => TriBool::Unknown,
        }
    }

    pub fn is_yes(&self) -> bool {
        matches!(self, CheckOutcome::Yes)
    }
}

/// Subtyping verdict with a counterexample when the failure is at a base
/// comparison: a closing substitution and a carrier value separating the two
/// types.
#[derive(Debug, Clone, PartialEq)]
pub struct Subtyped {
    pub verdict: TriBool,
    pub witness: Option<(ClosingSubst, Expr)>,
}

impl Subtyped {
    fn yes() -> Subtyped {
        Subtyped {
            verdict: TriBool::Yes,
            witness: None,
        }
    }

    fn no(witness: Option<(ClosingSubst, Expr)>) -> Subtyped {
        Subtyped {
            verdict: TriBool::No,
            witness,
        }
    }

    fn unknown() -> Subtyped {
        Subtyped {
            verdict: TriBool::Unknown,
            witness: None,
        }
    }
}

/// Strengthens a base-refined type to the singleton at `e`. Function and
/// equality types are returned unchanged.
pub fn selfify(ty: &Type, e: &Expr) -> Type {
    match ty {
        Type::Refined { base, .. } => Type::selfified(*base, e),
        _ => ty.clone(),
    }
}

/// Well-formedness of `ty` under `env`. Refinements must erase-typecheck at
/// Bool; equality endpoints must check at the index, which can be Unknown.
pub fn wf(env: &Env, ty: &Type, b: &Bounds) -> TriBool {
    match ty {
        Type::Refined {
            binder,
            base,
            refinement,
        } => {
            let uenv = UEnv::from_env(env).bind(binder.clone(), UType::base(*base));
            match btype(&uenv, refinement) {
                Ok(UType::Bool) => TriBool::Yes,
                _ => TriBool::No,
            }
        }
        Type::Fun { binder, dom, cod } => {
            let dv = wf(env, dom, b);
            if dv == TriBool::No {
                return TriBool::No;
            }
            let inner = env.bind(binder.clone(), (**dom).clone());
            dv.and(wf(&inner, cod, b))
        }
        Type::EqRT { index, left, right } => {
            let iv = wf(env, index, b);
            if iv == TriBool::No {
                return TriBool::No;
            }
            iv.and(check(env, left, index, b).tri())
                .and(check(env, right, index, b).tri())
        }
    }
}

/// Every binding well-formed under its prefix, names distinct.
pub fn wf_env(env: &Env, b: &Bounds) -> TriBool {
    if !env.distinct_names() {
        return TriBool::No;
    }
    let mut prefix = Env::empty();
    let mut acc = TriBool::Yes;
    for (name, ty) in env.iter() {
        let v = wf(&prefix, ty, b);
        if v == TriBool::No {
            return TriBool::No;
        }
        acc = acc.and(v);
        prefix = prefix.bind(name.clone(), ty.clone());
    }
    acc
}

pub fn subtype(env: &Env, sub: &Type, sup: &Type, b: &Bounds) -> TriBool {
    subtype_witness(env, sub, sup, b).verdict
}

/// Subtyping with witness extraction.
pub fn subtype_witness(env: &Env, sub: &Type, sup: &Type, b: &Bounds) -> Subtyped {
    match (sub, sup) {
        (
            Type::Refined { base: b1, .. },
            Type::Refined { base: b2, .. },
        ) => {
            if b1 != b2 {
                return Subtyped::no(None);
            }
            let (thetas, complete) = closing_substs(env, b);
            let carrier = enumerate_values(&UType::base(*b1), 0);
            let mut saw_unknown = !complete;
            for theta in &thetas {
                let sub_c = theta.apply_type(sub);
                let sup_c = theta.apply_type(sup);
                for v in &carrier.values {
                    match denote_member(v, &sub_c, b) {
                        TriBool::Yes => match denote_member(v, &sup_c, b) {
                            TriBool::Yes => {}
                            TriBool::No => {
                                return Subtyped::no(Some((theta.clone(), v.clone())))
                            }
                            TriBool::Unknown => saw_unknown = true,
                        },
                        TriBool::No => {}
                        TriBool::Unknown => saw_unknown = true,
                    }
                }
            }
            if saw_unknown {
                Subtyped::unknown()
            } else {
                Subtyped::yes()
            }
        }
        (
            Type::Fun {
                binder: x1,
                dom: d1,
                cod: c1,
            },
            Type::Fun {
                binder: x2,
                dom: d2,
                cod: c2,
            },
        ) => {
            let dv = subtype_witness(env, d2, d1, b);
            if dv.verdict == TriBool::No {
                return dv;
            }
            // Codomains compare under a common binder at the supertype's
            // domain, the smaller of the two. Only variables free past the
            // binders can collide, so when the binder names agree the
            // common name stays theirs and witnesses read naturally.
            let mut avoid: BTreeSet<Name> = env.names().cloned().collect();
            let mut fv1 = free_vars_type(c1);
            fv1.remove(x1);
            let mut fv2 = free_vars_type(c2);
            fv2.remove(x2);
            avoid.extend(fv1);
            avoid.extend(fv2);
            let z = fresh_name(x2, &avoid);
            let c1z = subst_type(c1, x1, &Expr::var(z.clone()));
            let c2z = subst_type(c2, x2, &Expr::var(z.clone()));
            let inner = env.bind(z, (**d2).clone());
            let cv = subtype_witness(&inner, &c1z, &c2z, b);
            if cv.verdict == TriBool::No {
                return cv;
            }
            Subtyped {
                verdict: dv.verdict.and(cv.verdict),
                witness: None,
            }
        }
        (
            Type::EqRT {
                index: i1,
                left: l1,
                right: r1,
            },
            Type::EqRT {
                index: i2,
                left: l2,
                right: r2,
            },
        ) => {
            if !alpha_eq(l1, l2) || !alpha_eq(r1, r2) {
                return Subtyped::no(None);
            }
            let fwd = subtype_witness(env, i1, i2, b);
            if fwd.verdict == TriBool::No {
                return fwd;
            }
            let bwd = subtype_witness(env, i2, i1, b);
            if bwd.verdict == TriBool::No {
                return bwd;
            }
            Subtyped {
                verdict: fwd.verdict.and(bwd.verdict),
                witness: None,
            }
        }
        _ => Subtyped::no(None),
    }
}

/// Synthesizes the type of `e` under `env`.
pub fn synth(env: &Env, e: &Expr, b: &Bounds) -> Result<Type, TypeError> {
    match e {
        Expr::Const(c) => Ok(tycon(c)),
        Expr::Var(x) => {
            let ty = env
                .lookup(x)
                .ok_or_else(|| TypeError::Unbound(x.clone()))?;
            // Base-typed variables are selfified: the variable itself is the
            // most precise witness of its value.
            Ok(selfify(ty, &Expr::var(x.clone())))
        }
        Expr::App(f, a) => {
            let tf = synth(env, f, b)?;
            match tf {
                Type::Fun { binder, dom, cod } => {
                    match check(env, a, &dom, b) {
                        CheckOutcome::Yes => {}
                        CheckOutcome::No(err) => return Err(err),
                        CheckOutcome::Unknown => return Err(TypeError::BoundsExceeded),
                    }
                    Ok(subst_type(&cod, &binder, a))
                }
                other => Err(TypeError::BaseMismatch(format!(
                    "cannot apply expression of type {other}"
                ))),
            }
        }
        Expr::Lam(x, ann, body) => {
            match wf(env, ann, b) {
                TriBool::Yes => {}
                TriBool::No => return Err(TypeError::NotWellFormed((**ann).clone())),
                TriBool::Unknown => return Err(TypeError::BoundsExceeded),
            }
            let inner = env.bind(x.clone(), (**ann).clone());
            let cod = synth(&inner, body, b)?;
            Ok(Type::fun(x.clone(), (**ann).clone(), cod))
        }
        Expr::BEq {
            base,
            left,
            right,
            proof,
        } => {
            let tl = selfify(&synth(env, left, b)?, left);
            let tr = selfify(&synth(env, right, b)?, right);
            let triv = Type::trivial(*base);
            for ty in [&tl, &tr] {
                let sv = subtype_witness(env, ty, &triv, b);
                match sv.verdict {
                    TriBool::Yes => {}
                    TriBool::No => {
                        return Err(TypeError::SubtypeFailed {
                            sub: ty.clone(),
                            sup: triv.clone(),
                            witness: sv.witness,
                        })
                    }
                    TriBool::Unknown => return Err(TypeError::BoundsExceeded),
                }
            }
            // Proof obligation: under fresh names for the endpoints at their
            // selfified types, the proof checks at {u:Unit | l ≈ r}.
            let mut avoid: BTreeSet<Name> = env.names().cloned().collect();
            avoid.extend(free_vars(proof));
            avoid.extend(free_vars_type(&tl));
            avoid.extend(free_vars_type(&tr));
            let ln = fresh_name("l", &avoid);
            avoid.insert(ln.clone());
            let rn = fresh_name("r", &avoid);
            let inner = env
                .bind(ln.clone(), tl)
                .bind(rn.clone(), tr);
            let target = Type::refined(
                "u",
                BaseType::Unit,
                Expr::eq_at(*base, Expr::var(ln), Expr::var(rn)),
            );
            match check(&inner, proof, &target, b) {
                CheckOutcome::Yes => {}
                CheckOutcome::No(err) => return Err(err),
                CheckOutcome::Unknown => return Err(TypeError::BoundsExceeded),
            }
            Ok(Type::eqrt(
                Type::trivial(*base),
                (**left).clone(),
                (**right).clone(),
            ))
        }
        Expr::XEq {
            binder,
            dom,
            cod,
            left,
            right,
            proof,
        } => {
            let ann = Type::Fun {
                binder: binder.clone(),
                dom: dom.clone(),
                cod: cod.clone(),
            };
            match wf(env, &ann, b) {
                TriBool::Yes => {}
                TriBool::No => return Err(TypeError::NotWellFormed(ann)),
                TriBool::Unknown => return Err(TypeError::BoundsExceeded),
            }
            for side in [left, right] {
                let ts = synth(env, side, b)?;
                let sv = subtype_witness(env, &ts, &ann, b);
                match sv.verdict {
                    TriBool::Yes => {}
                    TriBool::No => {
                        return Err(TypeError::SubtypeFailed {
                            sub: ts,
                            sup: ann.clone(),
                            witness: sv.witness,
                        })
                    }
                    TriBool::Unknown => return Err(TypeError::BoundsExceeded),
                }
            }
            // Proof obligation: a function taking x:dom to a proof that the
            // endpoints agree at x. The endpoints are the concrete
            // expressions, so the equality indices below stay alpha-stable.
            let mut avoid: BTreeSet<Name> = env.names().cloned().collect();
            avoid.extend(free_vars(left));
            avoid.extend(free_vars(right));
            avoid.extend(free_vars_type(cod));
            let x = fresh_name(binder, &avoid);
            let cod_x = subst_type(cod, binder, &Expr::var(x.clone()));
            let target = Type::fun(
                x.clone(),
                (**dom).clone(),
                Type::eqrt(
                    cod_x,
                    Expr::app((**left).clone(), Expr::var(x.clone())),
                    Expr::app((**right).clone(), Expr::var(x)),
                ),
            );
            match check(env, proof, &target, b) {
                CheckOutcome::Yes => {}
                CheckOutcome::No(err) => return Err(err),
                CheckOutcome::Unknown => return Err(TypeError::BoundsExceeded),
            }
            Ok(Type::eqrt(ann, (**left).clone(), (**right).clone()))
        }
    }
}

/// Checks `e` against `ty`: synthesis followed by subtyping, retrying
/// through the selfified synthesis for base-typed expressions.
pub fn check(env: &Env, e: &Expr, ty: &Type, b: &Bounds) -> CheckOutcome {
    let synthed = match synth(env, e, b) {
        Ok(t) => t,
        Err(TypeError::BoundsExceeded) => return CheckOutcome::Unknown,
        Err(err) => return CheckOutcome::No(err),
    };
    let direct = subtype_witness(env, &synthed, ty, b);
    if direct.verdict == TriBool::Yes {
        return CheckOutcome::Yes;
    }
    // Self-strengthening: a base-typed expression also has its singleton
    // type, which may be the one that fits.
    if matches!(synthed, Type::Refined { .. }) {
        let selfed = selfify(&synthed, e);
        let via_self = subtype_witness(env, &selfed, ty, b);
        if via_self.verdict == TriBool::Yes {
            return CheckOutcome::Yes;
        }
        if direct.verdict == TriBool::Unknown || via_self.verdict == TriBool::Unknown {
            return CheckOutcome::Unknown;
        }
    } else if direct.verdict == TriBool::Unknown {
        return CheckOutcome::Unknown;
    }
    CheckOutcome::No(TypeError::SubtypeFailed {
        sub: synthed,
        sup: ty.clone(),
        witness: direct.witness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bounds() -> Bounds {
        Bounds::default()
    }

    fn pos_bool() -> Type {
        Type::refined(
            "v",
            BaseType::Bool,
            Expr::eq_at(BaseType::Bool, Expr::var("v"), Expr::truth(true)),
        )
    }

    fn id_bool() -> Expr {
        Expr::lam("x", Type::trivial(BaseType::Bool), Expr::var("x"))
    }

    #[test]
    fn synth_constant_and_lambda() {
        let t = synth(&Env::empty(), &Expr::truth(true), &bounds()).unwrap();
        assert!(alpha_eq(
            match &t {
                Type::Refined { refinement, .. } => refinement,
                _ => panic!("expected refined"),
            },
            &Expr::eq_at(BaseType::Bool, Expr::var("v"), Expr::truth(true))
        ));
        let t = synth(&Env::empty(), &id_bool(), &bounds()).unwrap();
        match t {
            Type::Fun { cod, .. } => match *cod {
                Type::Refined { refinement, .. } => {
                    assert!(alpha_eq(
                        &refinement,
                        &Expr::eq_at(BaseType::Bool, Expr::var("v"), Expr::var("x"))
                    ));
                }
                other => panic!("expected selfified codomain, got {other}"),
            },
            other => panic!("expected function type, got {other}"),
        }
    }

    #[test]
    fn subtype_base_semantic() {
        assert_eq!(
            subtype(&Env::empty(), &pos_bool(), &Type::trivial(BaseType::Bool), &bounds()),
            TriBool::Yes
        );
        let sv = subtype_witness(
            &Env::empty(),
            &Type::trivial(BaseType::Bool),
            &pos_bool(),
            &bounds(),
        );
        assert_eq!(sv.verdict, TriBool::No);
        assert_eq!(sv.witness.unwrap().1, Expr::truth(false));
    }

    #[test]
    fn subtype_base_uses_environment() {
        // Under x:{v ≈ true}, the type {v ≈ x} is exactly {v ≈ true}.
        let env = Env::empty().bind("x", pos_bool());
        let self_x = Type::refined(
            "v",
            BaseType::Bool,
            Expr::eq_at(BaseType::Bool, Expr::var("v"), Expr::var("x")),
        );
        assert_eq!(subtype(&env, &self_x, &pos_bool(), &bounds()), TriBool::Yes);
        assert_eq!(subtype(&env, &pos_bool(), &self_x, &bounds()), TriBool::Yes);
    }

    #[test]
    fn subtype_fun_contra_co() {
        // (x:Bool) -> {v ≈ true}  <:  (x:{v ≈ true}) -> Bool
        let strong = Type::fun("x", Type::trivial(BaseType::Bool), pos_bool());
        let weak = Type::fun("x", pos_bool(), Type::trivial(BaseType::Bool));
        assert_eq!(subtype(&Env::empty(), &strong, &weak, &bounds()), TriBool::Yes);
        assert_eq!(subtype(&Env::empty(), &weak, &strong, &bounds()), TriBool::No);
    }

    #[test]
    fn subtype_eqrt_invariant() {
        let f = id_bool();
        let g = Expr::lam("x", Type::trivial(BaseType::Bool), Expr::truth(true));
        let t_dom = Type::fun("x", pos_bool(), Type::trivial(BaseType::Bool));
        let full_dom = Type::fun(
            "x",
            Type::trivial(BaseType::Bool),
            Type::trivial(BaseType::Bool),
        );
        let narrow = Type::eqrt(t_dom, f.clone(), g.clone());
        let wide = Type::eqrt(full_dom, f.clone(), g.clone());
        assert_eq!(subtype(&Env::empty(), &narrow, &wide, &bounds()), TriBool::No);
        // Endpoints must match alpha-exactly.
        let swapped = Type::eqrt(
            Type::fun("x", pos_bool(), Type::trivial(BaseType::Bool)),
            g,
            f,
        );
        assert_eq!(subtype(&Env::empty(), &narrow, &swapped, &bounds()), TriBool::No);
        assert_eq!(subtype(&Env::empty(), &narrow, &narrow, &bounds()), TriBool::Yes);
    }

    #[test]
    fn check_beq_reflexive() {
        let e = Expr::beq(
            BaseType::Bool,
            Expr::truth(true),
            Expr::truth(true),
            Expr::unit(),
        );
        let t = synth(&Env::empty(), &e, &bounds()).unwrap();
        assert!(alpha_eq_types(
            &t,
            &Type::eqrt(Type::trivial(BaseType::Bool), Expr::truth(true), Expr::truth(true))
        ));
    }

    fn alpha_eq_types(a: &Type, b: &Type) -> bool {
        crate::syntax::alpha_eq_type(a, b)
    }

    #[test]
    fn beq_of_distinct_constants_fails() {
        let e = Expr::beq(
            BaseType::Bool,
            Expr::truth(true),
            Expr::truth(false),
            Expr::unit(),
        );
        assert!(synth(&Env::empty(), &e, &bounds()).is_err());
    }

    #[test]
    fn beq_under_hypothesis_uses_selfified_endpoints() {
        // x:{v ≈ true} ⊢ beq Bool x true unit : EqRT Bool x true
        let env = Env::empty().bind("x", pos_bool());
        let e = Expr::beq(BaseType::Bool, Expr::var("x"), Expr::truth(true), Expr::unit());
        let t = synth(&env, &e, &bounds()).unwrap();
        assert!(alpha_eq_types(
            &t,
            &Type::eqrt(Type::trivial(BaseType::Bool), Expr::var("x"), Expr::truth(true))
        ));
    }

    #[test]
    fn check_lambda_against_dependent_type() {
        let target = Type::fun(
            "x",
            Type::trivial(BaseType::Bool),
            Type::refined(
                "v",
                BaseType::Bool,
                Expr::eq_at(BaseType::Bool, Expr::var("v"), Expr::var("x")),
            ),
        );
        assert!(check(&Env::empty(), &id_bool(), &target, &bounds()).is_yes());
        let const_true = Expr::lam("x", Type::trivial(BaseType::Bool), Expr::truth(true));
        match check(&Env::empty(), &const_true, &target, &bounds()) {
            CheckOutcome::No(TypeError::SubtypeFailed { witness, .. }) => {
                let (theta, _) = witness.expect("witness expected");
                assert_eq!(theta.lookup("x"), Some(&Expr::truth(false)));
            }
            other => panic!("expected subtype failure, got {other:?}"),
        }
    }

    #[test]
    fn check_self_strengthening_for_applications() {
        // f : Bool -> Bool (unrefined), yet f true checks at {v ≈ f true}.
        let env = Env::empty().bind(
            "f",
            Type::fun(
                "x",
                Type::trivial(BaseType::Bool),
                Type::trivial(BaseType::Bool),
            ),
        );
        let app = Expr::app(Expr::var("f"), Expr::truth(true));
        let self_ty = Type::selfified(BaseType::Bool, &app);
        assert!(check(&env, &app, &self_ty, &bounds()).is_yes());
    }

    #[test]
    fn funext_demo_checks_on_agreement_domain_only() {
        let f = id_bool();
        let g = Expr::lam("x", Type::trivial(BaseType::Bool), Expr::truth(true));
        let t = pos_bool();
        let proof = Expr::lam(
            "x",
            t.clone(),
            Expr::beq(
                BaseType::Bool,
                Expr::app(f.clone(), Expr::var("x")),
                Expr::app(g.clone(), Expr::var("x")),
                Expr::unit(),
            ),
        );
        let xeq_narrow = Expr::xeq(
            "x",
            t.clone(),
            Type::trivial(BaseType::Bool),
            f.clone(),
            g.clone(),
            proof.clone(),
        );
        let narrow_ty = Type::eqrt(
            Type::fun("x", t, Type::trivial(BaseType::Bool)),
            f.clone(),
            g.clone(),
        );
        assert!(check(&Env::empty(), &xeq_narrow, &narrow_ty, &bounds()).is_yes());

        // The same proof over the full Bool domain is rejected.
        let proof_wide = Expr::lam(
            "x",
            Type::trivial(BaseType::Bool),
            Expr::beq(
                BaseType::Bool,
                Expr::app(f.clone(), Expr::var("x")),
                Expr::app(g.clone(), Expr::var("x")),
                Expr::unit(),
            ),
        );
        let xeq_wide = Expr::xeq(
            "x",
            Type::trivial(BaseType::Bool),
            Type::trivial(BaseType::Bool),
            f.clone(),
            g.clone(),
            proof_wide,
        );
        let wide_ty = Type::eqrt(
            Type::fun(
                "x",
                Type::trivial(BaseType::Bool),
                Type::trivial(BaseType::Bool),
            ),
            f,
            g,
        );
        let out = check(&Env::empty(), &xeq_wide, &wide_ty, &bounds());
        assert_eq!(out.tri(), TriBool::No);
    }

    #[test]
    fn wf_checks_refinement_erasure() {
        // {v:Bool | v} is fine; {v:Bool | unit} erases to Unit, rejected.
        let good = Type::refined("v", BaseType::Bool, Expr::var("v"));
        assert_eq!(wf(&Env::empty(), &good, &bounds()), TriBool::Yes);
        let bad = Type::refined("v", BaseType::Bool, Expr::unit());
        assert_eq!(wf(&Env::empty(), &bad, &bounds()), TriBool::No);
    }

    #[test]
    fn wf_eqrt_requires_endpoints_at_index() {
        let ok = Type::eqrt(pos_bool(), Expr::truth(true), Expr::truth(true));
        assert_eq!(wf(&Env::empty(), &ok, &bounds()), TriBool::Yes);
        let bad = Type::eqrt(pos_bool(), Expr::truth(false), Expr::truth(true));
        assert_eq!(wf(&Env::empty(), &bad, &bounds()), TriBool::No);
    }

    #[test]
    fn wf_env_rejects_duplicates() {
        let env = Env::empty()
            .bind("x", Type::trivial(BaseType::Bool))
            .bind("x", Type::trivial(BaseType::Bool));
        assert_eq!(wf_env(&env, &bounds()), TriBool::No);
    }

    #[test]
    fn vacuous_hypotheses_make_subtyping_trivial() {
        let env = Env::empty().bind(
            "x",
            Type::refined("v", BaseType::Bool, Expr::truth(false)),
        );
        // No closings exist, so anything is a subtype of anything at base.
        assert_eq!(
            subtype(&env, &Type::trivial(BaseType::Bool), &pos_bool(), &bounds()),
            TriBool::Yes
        );
    }
}
