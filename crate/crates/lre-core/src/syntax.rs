//! Core term and type syntax: expressions, refinement types, environments,
//! capture-avoiding substitution, alpha equivalence, and the printer.
//!
//! Binders use locally-unique string names; substitution freshens on demand
//! by appending primes, so printed terms stay readable and tests can compare
//! up to alpha equivalence with [`alpha_eq`].

use std::collections::BTreeSet;
use std::fmt;

pub type Name = String;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BaseType {
    Bool,
    Unit,
}

impl fmt::Display for BaseType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BaseType::Bool => write!(f, "Bool"),
            BaseType::Unit => write!(f, "Unit"),
        }
    }
}

/// Constants. `EqOp(b)` is the equality tester at base type `b`; applying it
/// to a first constant stages the partially-applied tester `EqOpPartial`,
/// which is a first-class value so that evaluation never builds closures.
///
/// Invariant: the inner constant of `EqOpPartial` is a literal
/// (`True`/`False`/`UnitVal`) whose base type matches the tag.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ConstKind {
    True,
    False,
    UnitVal,
    EqOp(BaseType),
    EqOpPartial(Box<ConstKind>, BaseType),
}

impl ConstKind {
    /// Base type of a literal constant; `None` for the equality testers.
    pub fn literal_base(&self) -> Option<BaseType> {
        match self {
            ConstKind::True | ConstKind::False => Some(BaseType::Bool),
            ConstKind::UnitVal => Some(BaseType::Unit),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Expr {
    Const(ConstKind),
    Var(Name),
    App(Box<Expr>, Box<Expr>),
    Lam(Name, Box<Type>, Box<Expr>),
    /// Base equality proof `beq b l r p`: a value as soon as `p` is.
    BEq {
        base: BaseType,
        left: Box<Expr>,
        right: Box<Expr>,
        proof: Box<Expr>,
    },
    /// Function extensionality proof `xeq (x:dom) cod l r p`. The binder
    /// scopes over `cod` only.
    XEq {
        binder: Name,
        dom: Box<Type>,
        cod: Box<Type>,
        left: Box<Expr>,
        right: Box<Expr>,
        proof: Box<Expr>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Type {
    /// `{binder : base | refinement}`. The binder scopes over the refinement.
    Refined {
        binder: Name,
        base: BaseType,
        refinement: Box<Expr>,
    },
    /// Dependent function type; the binder scopes over the codomain.
    Fun {
        binder: Name,
        dom: Box<Type>,
        cod: Box<Type>,
    },
    /// Propositional equality of `left` and `right` at the index type.
    EqRT {
        index: Box<Type>,
        left: Box<Expr>,
        right: Box<Expr>,
    },
}

impl Expr {
    pub fn truth(b: bool) -> Expr {
        Expr::Const(if b { ConstKind::True } else { ConstKind::False })
    }

    pub fn unit() -> Expr {
        Expr::Const(ConstKind::UnitVal)
    }

    pub fn var(n: impl Into<Name>) -> Expr {
        Expr::Var(n.into())
    }

    pub fn app(f: Expr, a: Expr) -> Expr {
        Expr::App(Box::new(f), Box::new(a))
    }

    pub fn lam(x: impl Into<Name>, ty: Type, body: Expr) -> Expr {
        Expr::Lam(x.into(), Box::new(ty), Box::new(body))
    }

    pub fn beq(base: BaseType, l: Expr, r: Expr, p: Expr) -> Expr {
        Expr::BEq {
            base,
            left: Box::new(l),
            right: Box::new(r),
            proof: Box::new(p),
        }
    }

    pub fn xeq(x: impl Into<Name>, dom: Type, cod: Type, l: Expr, r: Expr, p: Expr) -> Expr {
        Expr::XEq {
            binder: x.into(),
            dom: Box::new(dom),
            cod: Box::new(cod),
            left: Box::new(l),
            right: Box::new(r),
            proof: Box::new(p),
        }
    }

    /// `l ≈_b r` spelled with the staged equality tester.
    pub fn eq_at(base: BaseType, l: Expr, r: Expr) -> Expr {
        Expr::app(Expr::app(Expr::Const(ConstKind::EqOp(base)), l), r)
    }
}

impl Type {
    /// `{v : base | true}`, the trivial refinement the surface shorthand
    /// `Bool`/`Unit` expands to.
    pub fn trivial(base: BaseType) -> Type {
        Type::refined("v", base, Expr::truth(true))
    }

    pub fn refined(binder: impl Into<Name>, base: BaseType, refinement: Expr) -> Type {
        Type::Refined {
            binder: binder.into(),
            base,
            refinement: Box::new(refinement),
        }
    }

    pub fn fun(binder: impl Into<Name>, dom: Type, cod: Type) -> Type {
        Type::Fun {
            binder: binder.into(),
            dom: Box::new(dom),
            cod: Box::new(cod),
        }
    }

    pub fn eqrt(index: Type, l: Expr, r: Expr) -> Type {
        Type::EqRT {
            index: Box::new(index),
            left: Box::new(l),
            right: Box::new(r),
        }
    }

    /// `{v : base | v ≈_base e}`, the strongest base type containing `e`.
    pub fn selfified(base: BaseType, e: &Expr) -> Type {
        let v = fresh_name("v", &free_vars(e));
        Type::refined(
            v.clone(),
            base,
            Expr::eq_at(base, Expr::var(v), e.clone()),
        )
    }
}

/// Ordered typing environment; later entries may mention earlier names.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Env {
    bindings: Vec<(Name, Type)>,
}

impl Env {
    pub fn empty() -> Env {
        Env::default()
    }

    pub fn bind(&self, name: impl Into<Name>, ty: Type) -> Env {
        let mut next = self.clone();
        next.bindings.push((name.into(), ty));
        next
    }

    pub fn lookup(&self, name: &str) -> Option<&Type> {
        self.bindings
            .iter()
            .rev()
            .find(|(n, _)| n == name)
            .map(|(_, t)| t)
    }

    pub fn names(&self) -> impl Iterator<Item = &Name> {
        self.bindings.iter().map(|(n, _)| n)
    }

    pub fn iter(&self) -> impl Iterator<Item = &(Name, Type)> {
        self.bindings.iter()
    }

    pub fn len(&self) -> usize {
        self.bindings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }

    pub fn distinct_names(&self) -> bool {
        let mut seen = BTreeSet::new();
        self.bindings.iter().all(|(n, _)| seen.insert(n.clone()))
    }
}

/// Type assigned to each constant. Literals get their selfified base type;
/// the equality testers get the dependent type describing the staged
/// comparison they perform.
pub fn tycon(c: &ConstKind) -> Type {
    match c {
        ConstKind::True => Type::selfified(BaseType::Bool, &Expr::truth(true)),
        ConstKind::False => Type::selfified(BaseType::Bool, &Expr::truth(false)),
        ConstKind::UnitVal => Type::selfified(BaseType::Unit, &Expr::unit()),
        ConstKind::EqOp(b) => {
            // x:b -> y:b -> {v:Bool | v ≈ (x ≈ y)}
            let cmp = Expr::eq_at(*b, Expr::var("x"), Expr::var("y"));
            let ref_v = Expr::eq_at(BaseType::Bool, Expr::var("v"), cmp);
            Type::fun(
                "x",
                Type::trivial(*b),
                Type::fun(
                    "y",
                    Type::trivial(*b),
                    Type::refined("v", BaseType::Bool, ref_v),
                ),
            )
        }
        ConstKind::EqOpPartial(c1, b) => {
            // y:b -> {v:Bool | v ≈ (c1 ≈ y)}
            let cmp = Expr::eq_at(*b, Expr::Const((**c1).clone()), Expr::var("y"));
            let ref_v = Expr::eq_at(BaseType::Bool, Expr::var("v"), cmp);
            Type::fun(
                "y",
                Type::trivial(*b),
                Type::refined("v", BaseType::Bool, ref_v),
            )
        }
    }
}

/// Values: constants, lambdas, and proof constructors whose proof slot has
/// converged. Equated subterms of `beq`/`xeq` are inert and need not be
/// values.
pub fn is_value(e: &Expr) -> bool {
    match e {
        Expr::Const(_) | Expr::Lam(..) => true,
        Expr::BEq { proof, .. } | Expr::XEq { proof, .. } => is_value(proof),
        Expr::Var(_) | Expr::App(..) => false,
    }
}

pub fn free_vars(e: &Expr) -> BTreeSet<Name> {
    let mut out = BTreeSet::new();
    collect_expr(e, &mut Vec::new(), &mut out);
    out
}

pub fn free_vars_type(t: &Type) -> BTreeSet<Name> {
    let mut out = BTreeSet::new();
    collect_type(t, &mut Vec::new(), &mut out);
    out
}

fn collect_expr(e: &Expr, scope: &mut Vec<Name>, out: &mut BTreeSet<Name>) {
    match e {
        Expr::Const(_) => {}
        Expr::Var(x) => {
            if !scope.iter().any(|s| s == x) {
                out.insert(x.clone());
            }
        }
        Expr::App(f, a) => {
            collect_expr(f, scope, out);
            collect_expr(a, scope, out);
        }
        Expr::Lam(x, ty, body) => {
            collect_type(ty, scope, out);
            scope.push(x.clone());
            collect_expr(body, scope, out);
            scope.pop();
        }
        Expr::BEq {
            left, right, proof, ..
        } => {
            collect_expr(left, scope, out);
            collect_expr(right, scope, out);
            collect_expr(proof, scope, out);
        }
        Expr::XEq {
            binder,
            dom,
            cod,
            left,
            right,
            proof,
        } => {
            collect_type(dom, scope, out);
            scope.push(binder.clone());
            collect_type(cod, scope, out);
            scope.pop();
            collect_expr(left, scope, out);
            collect_expr(right, scope, out);
            collect_expr(proof, scope, out);
        }
    }
}

fn collect_type(t: &Type, scope: &mut Vec<Name>, out: &mut BTreeSet<Name>) {
    match t {
        Type::Refined {
            binder, refinement, ..
        } => {
            scope.push(binder.clone());
            collect_expr(refinement, scope, out);
            scope.pop();
        }
        Type::Fun { binder, dom, cod } => {
            collect_type(dom, scope, out);
            scope.push(binder.clone());
            collect_type(cod, scope, out);
            scope.pop();
        }
        Type::EqRT { index, left, right } => {
            collect_type(index, scope, out);
            collect_expr(left, scope, out);
            collect_expr(right, scope, out);
        }
    }
}

/// Picks a name based on `base` that is not in `avoid`, priming as needed.
pub fn fresh_name(base: &str, avoid: &BTreeSet<Name>) -> Name {
    let mut candidate = base.to_string();
    while avoid.contains(&candidate) {
        candidate.push('\'');
    }
    candidate
}

/// Capture-avoiding substitution `e[x := v]`.
pub fn subst(e: &Expr, x: &str, v: &Expr) -> Expr {
    match e {
        Expr::Const(_) => e.clone(),
        Expr::Var(y) => {
            if y == x {
                v.clone()
            } else {
                e.clone()
            }
        }
        Expr::App(f, a) => Expr::app(subst(f, x, v), subst(a, x, v)),
        Expr::Lam(y, ty, body) => {
            let ty2 = subst_type(ty, x, v);
            if y == x {
                Expr::Lam(y.clone(), Box::new(ty2), body.clone())
            } else {
                let (y2, body2) = avoid_capture_expr(y, body, x, v);
                Expr::Lam(y2, Box::new(ty2), Box::new(subst(&body2, x, v)))
            }
        }
        Expr::BEq {
            base,
            left,
            right,
            proof,
        } => Expr::beq(
            *base,
            subst(left, x, v),
            subst(right, x, v),
            subst(proof, x, v),
        ),
        Expr::XEq {
            binder,
            dom,
            cod,
            left,
            right,
            proof,
        } => {
            let dom2 = subst_type(dom, x, v);
            let (binder2, cod2) = if binder == x {
                (binder.clone(), (**cod).clone())
            } else {
                avoid_capture_type(binder, cod, x, v)
            };
            let cod3 = if binder == x {
                cod2
            } else {
                subst_type(&cod2, x, v)
            };
            Expr::XEq {
                binder: binder2,
                dom: Box::new(dom2),
                cod: Box::new(cod3),
                left: Box::new(subst(left, x, v)),
                right: Box::new(subst(right, x, v)),
                proof: Box::new(subst(proof, x, v)),
            }
        }
    }
}

/// Capture-avoiding substitution `t[x := v]`.
pub fn subst_type(t: &Type, x: &str, v: &Expr) -> Type {
    match t {
        Type::Refined {
            binder,
            base,
            refinement,
        } => {
            if binder == x {
                t.clone()
            } else {
                let (b2, r2) = avoid_capture_expr(binder, refinement, x, v);
                Type::Refined {
                    binder: b2,
                    base: *base,
                    refinement: Box::new(subst(&r2, x, v)),
                }
            }
        }
        Type::Fun { binder, dom, cod } => {
            let dom2 = subst_type(dom, x, v);
            if binder == x {
                Type::Fun {
                    binder: binder.clone(),
                    dom: Box::new(dom2),
                    cod: cod.clone(),
                }
            } else {
                let (b2, cod2) = avoid_capture_type(binder, cod, x, v);
                Type::Fun {
                    binder: b2,
                    dom: Box::new(dom2),
                    cod: Box::new(subst_type(&cod2, x, v)),
                }
            }
        }
        Type::EqRT { index, left, right } => Type::eqrt(
            subst_type(index, x, v),
            subst(left, x, v),
            subst(right, x, v),
        ),
    }
}

/// Renames `binder` (scoping over an expression body) away from the free
/// variables of `v` when substituting for `x` could capture.
fn avoid_capture_expr(binder: &str, body: &Expr, x: &str, v: &Expr) -> (Name, Expr) {
    let fv_v = free_vars(v);
    if fv_v.contains(binder) && free_vars(body).contains(x) {
        let mut avoid = fv_v;
        avoid.extend(free_vars(body));
        avoid.insert(x.to_string());
        let fresh = fresh_name(binder, &avoid);
        let renamed = subst(body, binder, &Expr::var(fresh.clone()));
        (fresh, renamed)
    } else {
        (binder.to_string(), body.clone())
    }
}

fn avoid_capture_type(binder: &str, body: &Type, x: &str, v: &Expr) -> (Name, Type) {
    let fv_v = free_vars(v);
    if fv_v.contains(binder) && free_vars_type(body).contains(x) {
        let mut avoid = fv_v;
        avoid.extend(free_vars_type(body));
        avoid.insert(x.to_string());
        let fresh = fresh_name(binder, &avoid);
        let renamed = subst_type(body, binder, &Expr::var(fresh.clone()));
        (fresh, renamed)
    } else {
        (binder.to_string(), body.clone())
    }
}

/// Alpha equivalence of expressions.
pub fn alpha_eq(e1: &Expr, e2: &Expr) -> bool {
    alpha_expr(e1, e2, &mut Vec::new())
}

/// Alpha equivalence of types.
pub fn alpha_eq_type(t1: &Type, t2: &Type) -> bool {
    alpha_type(t1, t2, &mut Vec::new())
}

fn lookup_pair(scope: &[(Name, Name)], x: &str, y: &str) -> bool {
    for (a, b) in scope.iter().rev() {
        let hit_l = a == x;
        let hit_r = b == y;
        if hit_l || hit_r {
            return hit_l && hit_r;
        }
    }
    x == y
}

fn alpha_expr(e1: &Expr, e2: &Expr, scope: &mut Vec<(Name, Name)>) -> bool {
    match (e1, e2) {
        (Expr::Const(a), Expr::Const(b)) => a == b,
        (Expr::Var(x), Expr::Var(y)) => lookup_pair(scope, x, y),
        (Expr::App(f1, a1), Expr::App(f2, a2)) => {
            alpha_expr(f1, f2, scope) && alpha_expr(a1, a2, scope)
        }
        (Expr::Lam(x1, t1, b1), Expr::Lam(x2, t2, b2)) => {
            if !alpha_type(t1, t2, scope) {
                return false;
            }
            scope.push((x1.clone(), x2.clone()));
            let ok = alpha_expr(b1, b2, scope);
            scope.pop();
            ok
        }
        (
            Expr::BEq {
                base: base1,
                left: l1,
                right: r1,
                proof: p1,
            },
            Expr::BEq {
                base: base2,
                left: l2,
                right: r2,
                proof: p2,
            },
        ) => {
            base1 == base2
                && alpha_expr(l1, l2, scope)
                && alpha_expr(r1, r2, scope)
                && alpha_expr(p1, p2, scope)
        }
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
            if !alpha_type(d1, d2, scope) {
                return false;
            }
            scope.push((x1.clone(), x2.clone()));
            let cod_ok = alpha_type(c1, c2, scope);
            scope.pop();
            cod_ok
                && alpha_expr(l1, l2, scope)
                && alpha_expr(r1, r2, scope)
                && alpha_expr(p1, p2, scope)
        }
        _ => false,
    }
}

fn alpha_type(t1: &Type, t2: &Type, scope: &mut Vec<(Name, Name)>) -> bool {
    match (t1, t2) {
        (
            Type::Refined {
                binder: b1,
                base: base1,
                refinement: r1,
            },
            Type::Refined {
                binder: b2,
                base: base2,
                refinement: r2,
            },
        ) => {
            if base1 != base2 {
                return false;
            }
            scope.push((b1.clone(), b2.clone()));
            let ok = alpha_expr(r1, r2, scope);
            scope.pop();
            ok
        }
        (
            Type::Fun {
                binder: b1,
                dom: d1,
                cod: c1,
            },
            Type::Fun {
                binder: b2,
                dom: d2,
                cod: c2,
            },
        ) => {
            if !alpha_type(d1, d2, scope) {
                return false;
            }
            scope.push((b1.clone(), b2.clone()));
            let ok = alpha_type(c1, c2, scope);
            scope.pop();
            ok
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
            alpha_type(i1, i2, scope) && alpha_expr(l1, l2, scope) && alpha_expr(r1, r2, scope)
        }
        _ => false,
    }
}

/// Canonical de Bruijn rendering; two terms get the same key iff they are
/// alpha-equivalent. Used as a set/map key by the parallel-reduction engine.
pub fn alpha_key(e: &Expr) -> String {
    let mut out = String::new();
    key_expr(e, &mut Vec::new(), &mut out);
    out
}

fn key_expr(e: &Expr, scope: &mut Vec<Name>, out: &mut String) {
    match e {
        Expr::Const(c) => {
            out.push('c');
            key_const(c, out);
        }
        Expr::Var(x) => {
            match scope.iter().rev().position(|s| s == x) {
                Some(i) => {
                    out.push('#');
                    out.push_str(&i.to_string());
                }
                None => {
                    out.push('!');
                    out.push_str(x);
                }
            }
            out.push(' ');
        }
        Expr::App(f, a) => {
            out.push('(');
            key_expr(f, scope, out);
            key_expr(a, scope, out);
            out.push(')');
        }
        Expr::Lam(x, ty, body) => {
            out.push('L');
            key_type(ty, scope, out);
            scope.push(x.clone());
            key_expr(body, scope, out);
            scope.pop();
        }
        Expr::BEq {
            base,
            left,
            right,
            proof,
        } => {
            out.push('B');
            out.push(if *base == BaseType::Bool { 'b' } else { 'u' });
            key_expr(left, scope, out);
            key_expr(right, scope, out);
            key_expr(proof, scope, out);
        }
        Expr::XEq {
            binder,
            dom,
            cod,
            left,
            right,
            proof,
        } => {
            out.push('X');
            key_type(dom, scope, out);
            scope.push(binder.clone());
            key_type(cod, scope, out);
            scope.pop();
            key_expr(left, scope, out);
            key_expr(right, scope, out);
            key_expr(proof, scope, out);
        }
    }
}

fn key_const(c: &ConstKind, out: &mut String) {
    match c {
        ConstKind::True => out.push('t'),
        ConstKind::False => out.push('f'),
        ConstKind::UnitVal => out.push('u'),
        ConstKind::EqOp(b) => {
            out.push('e');
            out.push(if *b == BaseType::Bool { 'b' } else { 'u' });
        }
        ConstKind::EqOpPartial(inner, b) => {
            out.push('p');
            key_const(inner, out);
            out.push(if *b == BaseType::Bool { 'b' } else { 'u' });
        }
    }
}

fn key_type(t: &Type, scope: &mut Vec<Name>, out: &mut String) {
    match t {
        Type::Refined {
            binder,
            base,
            refinement,
        } => {
            out.push('R');
            out.push(if *base == BaseType::Bool { 'b' } else { 'u' });
            scope.push(binder.clone());
            key_expr(refinement, scope, out);
            scope.pop();
        }
        Type::Fun { binder, dom, cod } => {
            out.push('F');
            key_type(dom, scope, out);
            scope.push(binder.clone());
            key_type(cod, scope, out);
            scope.pop();
        }
        Type::EqRT { index, left, right } => {
            out.push('E');
            key_type(index, scope, out);
            key_expr(left, scope, out);
            key_expr(right, scope, out);
        }
    }
}

impl fmt::Display for ConstKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConstKind::True => write!(f, "true"),
            ConstKind::False => write!(f, "false"),
            ConstKind::UnitVal => write!(f, "unit"),
            ConstKind::EqOp(b) => write!(f, "(eq {b})"),
            ConstKind::EqOpPartial(c, b) => write!(f, "(eqp {b} {c})"),
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Const(c) => write!(f, "{c}"),
            Expr::Var(x) => write!(f, "{x}"),
            Expr::App(..) => {
                // Flatten nested applications: ((f a) b) prints as (f a b).
                let mut parts = Vec::new();
                let mut cur = self;
                while let Expr::App(g, a) = cur {
                    parts.push(a);
                    cur = g;
                }
                write!(f, "({cur}")?;
                for p in parts.iter().rev() {
                    write!(f, " {p}")?;
                }
                write!(f, ")")
            }
            Expr::Lam(x, ty, body) => write!(f, "(lam ({x} : {ty}) {body})"),
            Expr::BEq {
                base,
                left,
                right,
                proof,
            } => write!(f, "(beq {base} {left} {right} {proof})"),
            Expr::XEq {
                binder,
                dom,
                cod,
                left,
                right,
                proof,
            } => write!(f, "(xeq ({binder} : {dom}) {cod} {left} {right} {proof})"),
        }
    }
}

impl fmt::Display for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Type::Refined {
                binder,
                base,
                refinement,
            } => {
                if matches!(**refinement, Expr::Const(ConstKind::True)) {
                    write!(f, "{base}")
                } else {
                    write!(f, "(refine ({binder} : {base}) {refinement})")
                }
            }
            Type::Fun { binder, dom, cod } => write!(f, "(fun ({binder} : {dom}) {cod})"),
            Type::EqRT { index, left, right } => write!(f, "(eqrt {index} {left} {right})"),
        }
    }
}
