//! Syntax-directed typing for the unrefined system: refinements are erased,
//! equality types keep only the erased index. This is the decidable skeleton
//! the semantic layers (denotation, subtyping) build on.

use crate::syntax::{BaseType, ConstKind, Expr, Name, Type};
use std::fmt;

/// Unrefined types. Equality drops its endpoints: two erased equality types
/// compare by index alone.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum UType {
    Bool,
    Unit,
    Eq(Box<UType>),
    Fun(Box<UType>, Box<UType>),
}

impl UType {
    pub fn base(b: BaseType) -> UType {
        match b {
            BaseType::Bool => UType::Bool,
            BaseType::Unit => UType::Unit,
        }
    }

    pub fn fun(dom: UType, cod: UType) -> UType {
        UType::Fun(Box::new(dom), Box::new(cod))
    }

    pub fn eq(of: UType) -> UType {
        UType::Eq(Box::new(of))
    }

    pub fn as_base(&self) -> Option<BaseType> {
        match self {
            UType::Bool => Some(BaseType::Bool),
            UType::Unit => Some(BaseType::Unit),
            _ => None,
        }
    }
}

impl fmt::Display for UType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UType::Bool => write!(f, "Bool"),
            UType::Unit => write!(f, "Unit"),
            UType::Eq(t) => write!(f, "(Eq {t})"),
            UType::Fun(d, c) => write!(f, "({d} -> {c})"),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct UEnv {
    bindings: Vec<(Name, UType)>,
}

impl UEnv {
    pub fn empty() -> UEnv {
        UEnv::default()
    }

    pub fn bind(&self, name: impl Into<Name>, ty: UType) -> UEnv {
        let mut next = self.clone();
        next.bindings.push((name.into(), ty));
        next
    }

    pub fn lookup(&self, name: &str) -> Option<&UType> {
        self.bindings
            .iter()
            .rev()
            .find(|(n, _)| n == name)
            .map(|(_, t)| t)
    }

    pub fn from_env(env: &crate::syntax::Env) -> UEnv {
        let mut u = UEnv::empty();
        for (n, t) in env.iter() {
            u = u.bind(n.clone(), unrefine(t));
        }
        u
    }
}

/// Erases refinements; equality types keep only the erased index.
pub fn unrefine(t: &Type) -> UType {
    match t {
        Type::Refined { base, .. } => UType::base(*base),
        Type::Fun { dom, cod, .. } => UType::fun(unrefine(dom), unrefine(cod)),
        Type::EqRT { index, .. } => UType::eq(unrefine(index)),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BaseTypeError {
    Unbound(Name),
    /// Application of a non-function or at the wrong argument type.
    AppMismatch { fun: UType, arg: UType },
    NotAFunction(UType),
    /// A `beq`/`xeq` component does not have the required erased type.
    EqMismatch { expected: UType, found: UType },
}

impl fmt::Display for BaseTypeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BaseTypeError::Unbound(x) => write!(f, "unbound variable {x}"),
            BaseTypeError::AppMismatch { fun, arg } => {
                write!(f, "cannot apply {fun} to argument of type {arg}")
            }
            BaseTypeError::NotAFunction(t) => write!(f, "expected a function, found {t}"),
            BaseTypeError::EqMismatch { expected, found } => {
                write!(f, "equality component expected {expected}, found {found}")
            }
        }
    }
}

impl std::error::Error for BaseTypeError {}

/// Erased type of a constant; agrees with `unrefine(tycon(c))`.
pub fn const_utype(c: &ConstKind) -> UType {
    match c {
        ConstKind::True | ConstKind::False => UType::Bool,
        ConstKind::UnitVal => UType::Unit,
        ConstKind::EqOp(b) => UType::fun(
            UType::base(*b),
            UType::fun(UType::base(*b), UType::Bool),
        ),
        ConstKind::EqOpPartial(_, b) => UType::fun(UType::base(*b), UType::Bool),
    }
}

/// Synthesizes the unique erased type of `e`, if any.
pub fn btype(env: &UEnv, e: &Expr) -> Result<UType, BaseTypeError> {
    match e {
        Expr::Const(c) => Ok(const_utype(c)),
        Expr::Var(x) => env
            .lookup(x)
            .cloned()
            .ok_or_else(|| BaseTypeError::Unbound(x.clone())),
        Expr::App(f, a) => {
            let tf = btype(env, f)?;
            let ta = btype(env, a)?;
            match tf {
                UType::Fun(dom, cod) => {
                    if *dom == ta {
                        Ok(*cod)
                    } else {
                        Err(BaseTypeError::AppMismatch {
                            fun: UType::Fun(dom, cod),
                            arg: ta,
                        })
                    }
                }
                other => Err(BaseTypeError::NotAFunction(other)),
            }
        }
        Expr::Lam(x, ann, body) => {
            let dom = unrefine(ann);
            let cod = btype(&env.bind(x.clone(), dom.clone()), body)?;
            Ok(UType::fun(dom, cod))
        }
        Expr::BEq {
            base,
            left,
            right,
            proof,
        } => {
            let want = UType::base(*base);
            for side in [left, right] {
                let t = btype(env, side)?;
                if t != want {
                    return Err(BaseTypeError::EqMismatch {
                        expected: want,
                        found: t,
                    });
                }
            }
            let tp = btype(env, proof)?;
            if tp != UType::Unit {
                return Err(BaseTypeError::EqMismatch {
                    expected: UType::Unit,
                    found: tp,
                });
            }
            Ok(UType::eq(want))
        }
        Expr::XEq {
            dom,
            cod,
            left,
            right,
            proof,
            ..
        } => {
            let udom = unrefine(dom);
            let ucod = unrefine(cod);
            let want = UType::fun(udom.clone(), ucod.clone());
            for side in [left, right] {
                let t = btype(env, side)?;
                if t != want {
                    return Err(BaseTypeError::EqMismatch {
                        expected: want,
                        found: t,
                    });
                }
            }
            // The proof of a pointwise equality is a function from the domain
            // into proofs of the codomain equality.
            let want_proof = UType::fun(udom, UType::eq(ucod));
            let tp = btype(env, proof)?;
            if tp != want_proof {
                return Err(BaseTypeError::EqMismatch {
                    expected: want_proof,
                    found: tp,
                });
            }
            Ok(UType::eq(want))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::tycon;

    #[test]
    fn const_types_agree_with_erased_tycon() {
        let consts = [
            ConstKind::True,
            ConstKind::False,
            ConstKind::UnitVal,
            ConstKind::EqOp(BaseType::Bool),
            ConstKind::EqOp(BaseType::Unit),
            ConstKind::EqOpPartial(Box::new(ConstKind::True), BaseType::Bool),
            ConstKind::EqOpPartial(Box::new(ConstKind::UnitVal), BaseType::Unit),
        ];
        for c in consts {
            assert_eq!(const_utype(&c), unrefine(&tycon(&c)), "constant {c}");
        }
    }

    #[test]
    fn beq_synthesizes_erased_equality() {
        let e = Expr::beq(
            BaseType::Bool,
            Expr::truth(true),
            Expr::truth(false),
            Expr::unit(),
        );
        assert_eq!(btype(&UEnv::empty(), &e), Ok(UType::eq(UType::Bool)));
    }

    #[test]
    fn xeq_proof_must_be_pointwise() {
        let id = Expr::lam("x", Type::trivial(BaseType::Bool), Expr::var("x"));
        let pointwise = Expr::lam(
            "x",
            Type::trivial(BaseType::Bool),
            Expr::beq(
                BaseType::Bool,
                Expr::app(id.clone(), Expr::var("x")),
                Expr::app(id.clone(), Expr::var("x")),
                Expr::unit(),
            ),
        );
        let good = Expr::xeq(
            "x",
            Type::trivial(BaseType::Bool),
            Type::trivial(BaseType::Bool),
            id.clone(),
            id.clone(),
            pointwise,
        );
        assert_eq!(
            btype(&UEnv::empty(), &good),
            Ok(UType::eq(UType::fun(UType::Bool, UType::Bool)))
        );
        let bad = Expr::xeq(
            "x",
            Type::trivial(BaseType::Bool),
            Type::trivial(BaseType::Bool),
            id.clone(),
            id,
            Expr::unit(),
        );
        assert!(matches!(
            btype(&UEnv::empty(), &bad),
            Err(BaseTypeError::EqMismatch { .. })
        ));
    }

    #[test]
    fn application_checks_domain() {
        let not = Expr::lam(
            "x",
            Type::trivial(BaseType::Bool),
            Expr::eq_at(BaseType::Bool, Expr::var("x"), Expr::truth(false)),
        );
        let ok = Expr::app(not.clone(), Expr::truth(true));
        assert_eq!(btype(&UEnv::empty(), &ok), Ok(UType::Bool));
        let bad = Expr::app(not, Expr::unit());
        assert!(matches!(
            btype(&UEnv::empty(), &bad),
            Err(BaseTypeError::AppMismatch { .. })
        ));
    }

    #[test]
    fn unbound_variables_error() {
        assert_eq!(
            btype(&UEnv::empty(), &Expr::var("z")),
            Err(BaseTypeError::Unbound("z".into()))
        );
    }
}
