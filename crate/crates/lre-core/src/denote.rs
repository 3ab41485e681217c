//! Executable denotations: bounded membership in the semantic interpretation
//! of types, enumeration of canonical carrier values, and closing
//! substitutions for environments.
//!
//! The interpretation of a closed type is a set of closed expressions. Base
//! refinements test the erased type, termination, and the refinement
//! instantiated at the expression itself. Function types quantify over
//! enumerated members of the domain. Equality types demand a proof-shaped
//! value and conditions on the *type's* endpoints; the value's own equated
//! slots are never inspected.
//!
//! Everything here is bounded by [`Bounds`]: evaluation fuel plus the nesting
//! depth of function-argument enumeration. Verdicts are three-valued and
//! `Unknown` is sticky: exhausting a bound can weaken `Yes` to `Unknown` but
//! never flips a verdict.

use crate::btype::{btype, unrefine, UEnv, UType};
use crate::eval::{eval, EvalOutcome};
use crate::syntax::{
    alpha_key, subst, subst_type, BaseType, ConstKind, Env, Expr, Name, Type,
};
use crate::tri::TriBool;

pub const DEFAULT_FUEL: usize = 100_000;
pub const DEFAULT_FN_DEPTH: usize = 2;

/// Resource bounds for semantic checks. `fuel` caps evaluation steps per
/// evaluation; `fn_depth` caps how deep function-typed argument spaces are
/// enumerated before falling back to the constant-function family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Bounds {
    pub fuel: usize,
    pub fn_depth: usize,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            fuel: DEFAULT_FUEL,
            fn_depth: DEFAULT_FN_DEPTH,
        }
    }
}

impl Bounds {
    pub fn new(fuel: usize, fn_depth: usize) -> Bounds {
        assert!(fuel >= 1, "fuel must be at least 1");
        Bounds { fuel, fn_depth }
    }
}

/// Result of enumerating canonical values at an erased type. `complete`
/// means the list covers every extensional inhabitant class, so universal
/// quantification over it is exact.
#[derive(Debug, Clone)]
pub struct Enumeration {
    pub values: Vec<Expr>,
    pub complete: bool,
}

/// Trivially refined syntactic type for an erased type, used for generated
/// lambda annotations. `None` when the type needs a canonical inhabitant
/// that does not exist (nested equality-of-equality indices).
pub fn trivial_type(u: &UType) -> Option<Type> {
    match u {
        UType::Bool => Some(Type::trivial(BaseType::Bool)),
        UType::Unit => Some(Type::trivial(BaseType::Unit)),
        UType::Fun(d, c) => Some(Type::fun("x", trivial_type(d)?, trivial_type(c)?)),
        UType::Eq(of) => {
            let index = trivial_type(of)?;
            let witness = canonical_value(of)?;
            Some(Type::eqrt(index, witness.clone(), witness))
        }
    }
}

/// One canonical closed value for an erased type, when one exists.
pub fn canonical_value(u: &UType) -> Option<Expr> {
    match u {
        UType::Bool => Some(Expr::truth(true)),
        UType::Unit => Some(Expr::unit()),
        UType::Fun(d, c) => Some(Expr::lam(
            "x",
            trivial_type(d)?,
            canonical_value(c)?,
        )),
        UType::Eq(of) => {
            let w = canonical_value(of)?;
            reflexive_proof(of, &w, &w)
        }
    }
}

/// A proof value witnessing `l = r` at erased index `of`, shaped like the
/// reflexivity construction. `None` if the index admits no proof form.
fn reflexive_proof(of: &UType, l: &Expr, r: &Expr) -> Option<Expr> {
    match of {
        UType::Bool => Some(Expr::beq(BaseType::Bool, l.clone(), r.clone(), Expr::unit())),
        UType::Unit => Some(Expr::beq(BaseType::Unit, l.clone(), r.clone(), Expr::unit())),
        UType::Fun(d, c) => {
            let dom_ty = trivial_type(d)?;
            let cod_ty = trivial_type(c)?;
            let body = reflexive_proof(
                c,
                &Expr::app(l.clone(), Expr::var("x")),
                &Expr::app(r.clone(), Expr::var("x")),
            )?;
            Some(Expr::xeq(
                "x",
                dom_ty.clone(),
                cod_ty,
                l.clone(),
                r.clone(),
                Expr::lam("x", dom_ty, body),
            ))
        }
        UType::Eq(_) => None,
    }
}

/// Enumerates canonical values of erased type `u`. At `depth` zero a
/// function space degrades to the constant-function family and is marked
/// incomplete; at positive depth, tables over the enumerated domain are
/// encoded with equality tests. First-order spaces (base domain and
/// codomain) enumerate completely.
pub fn enumerate_values(u: &UType, depth: usize) -> Enumeration {
    match u {
        UType::Bool => Enumeration {
            values: vec![Expr::truth(true), Expr::truth(false)],
            complete: true,
        },
        UType::Unit => Enumeration {
            values: vec![Expr::unit()],
            complete: true,
        },
        UType::Fun(d, c) => enumerate_functions(d, c, depth),
        UType::Eq(of) => enumerate_proofs(of, depth),
    }
}

fn enumerate_functions(dom: &UType, cod: &UType, depth: usize) -> Enumeration {
    let Some(dom_ty) = trivial_type(dom) else {
        return Enumeration {
            values: Vec::new(),
            complete: false,
        };
    };
    if depth == 0 {
        let outs = enumerate_values(cod, 0);
        let values = outs
            .values
            .iter()
            .map(|o| Expr::lam("x", dom_ty.clone(), o.clone()))
            .collect();
        return Enumeration {
            values,
            complete: false,
        };
    }
    let args = enumerate_values(dom, depth - 1);
    let outs = enumerate_values(cod, depth - 1);
    let mut complete = args.complete && outs.complete;
    let mut values: Vec<Expr> = Vec::new();
    if args.values.is_empty() {
        // Empty domain: every function is extensionally the same; one
        // canonical inhabitant if the codomain has one.
        if let Some(c) = canonical_value(cod) {
            values.push(Expr::lam("x", dom_ty, c));
        } else {
            complete = false;
        }
        return Enumeration { values, complete };
    }
    // Every assignment of an output to each enumerated argument.
    let n = args.values.len();
    let m = outs.values.len();
    if m == 0 {
        // Inhabited domain into an empty codomain: no functions to list.
        return Enumeration {
            values,
            complete: complete && outs.complete,
        };
    }
    let mut table = vec![0usize; n];
    loop {
        let picked: Vec<&Expr> = table.iter().map(|&i| &outs.values[i]).collect();
        match encode_table(dom, &dom_ty, &args.values, &picked) {
            Some(lambda) => values.push(lambda),
            None => complete = false,
        }
        // Odometer increment.
        let mut i = 0;
        loop {
            if i == n {
                let mut seen = std::collections::BTreeSet::new();
                values.retain(|v| seen.insert(alpha_key(v)));
                return Enumeration { values, complete };
            }
            table[i] += 1;
            if table[i] < m {
                break;
            }
            table[i] = 0;
            i += 1;
        }
    }
}

/// Encodes the finite table `args[i] ↦ outs[i]` as a lambda, when the
/// calculus can express it: constant tables always, and the two non-constant
/// Bool→Bool tables via an equality test.
fn encode_table(dom: &UType, dom_ty: &Type, args: &[Expr], outs: &[&Expr]) -> Option<Expr> {
    let first = outs[0];
    if outs.iter().all(|o| alpha_key(o) == alpha_key(first)) {
        return Some(Expr::lam("x", dom_ty.clone(), first.clone()));
    }
    // Non-constant tables are only expressible over Bool into Bool: the
    // identity and the negation, written with the equality tester.
    if *dom == UType::Bool && args.len() == 2 {
        let out_true = if args[0] == Expr::truth(true) { outs[0] } else { outs[1] };
        let out_false = if args[0] == Expr::truth(true) { outs[1] } else { outs[0] };
        if *out_true == Expr::truth(true) && *out_false == Expr::truth(false) {
            return Some(Expr::lam("x", dom_ty.clone(), Expr::var("x")));
        }
        if *out_true == Expr::truth(false) && *out_false == Expr::truth(true) {
            return Some(Expr::lam(
                "x",
                dom_ty.clone(),
                Expr::eq_at(BaseType::Bool, Expr::var("x"), Expr::truth(false)),
            ));
        }
    }
    None
}

/// Proof values at erased index `of`. Proofs are never inspected, so the
/// reflexivity-shaped family over enumerated endpoints covers every
/// observable inhabitant; for base indices all endpoint pairs are listed,
/// for function indices the diagonal suffices.
fn enumerate_proofs(of: &UType, depth: usize) -> Enumeration {
    match of {
        UType::Bool | UType::Unit => {
            let ends = enumerate_values(of, depth);
            let mut values = Vec::new();
            for l in &ends.values {
                for r in &ends.values {
                    if let Some(p) = reflexive_proof(of, l, r) {
                        values.push(p);
                    }
                }
            }
            Enumeration {
                values,
                complete: ends.complete,
            }
        }
        UType::Fun(..) => {
            let ends = enumerate_values(of, depth);
            let mut values = Vec::new();
            for f in &ends.values {
                if let Some(p) = reflexive_proof(of, f, f) {
                    values.push(p);
                }
            }
            Enumeration {
                values,
                complete: ends.complete,
            }
        }
        // No value form erases to an equality over an equality index.
        UType::Eq(_) => Enumeration {
            values: Vec::new(),
            complete: true,
        },
    }
}

/// Is the closed expression `e` a member of the interpretation of the closed
/// type `ty`?
pub fn denote_member(e: &Expr, ty: &Type, b: &Bounds) -> TriBool {
    match ty {
        Type::Refined {
            binder,
            base,
            refinement,
        } => {
            match btype(&UEnv::empty(), e) {
                Ok(u) if u == UType::base(*base) => {}
                _ => return TriBool::No,
            }
            match eval(e, b.fuel) {
                EvalOutcome::Value(_) => {}
                EvalOutcome::FuelExhausted(_) => return TriBool::Unknown,
                EvalOutcome::Stuck(_) => return TriBool::No,
            }
            // The refinement is instantiated at the expression itself.
            eval_to_true(&subst(refinement, binder, e), b)
        }
        Type::Fun { binder, dom, cod } => {
            let args = enumerate_values(&unrefine(dom), b.fn_depth);
            let mut verdict = TriBool::Yes;
            let mut saw_unknown = false;
            for a in &args.values {
                match denote_member(a, dom, b) {
                    TriBool::Yes => {
                        let cod_at = subst_type(cod, binder, a);
                        match denote_member(&Expr::app(e.clone(), a.clone()), &cod_at, b) {
                            TriBool::Yes => {}
                            TriBool::No => return TriBool::No,
                            TriBool::Unknown => saw_unknown = true,
                        }
                    }
                    TriBool::No => {}
                    TriBool::Unknown => saw_unknown = true,
                }
            }
            if saw_unknown {
                verdict = TriBool::Unknown;
            }
            verdict.weaken_if(!args.complete)
        }
        Type::EqRT { index, left, right } => denote_eqrt(e, index, left, right, b),
    }
}

fn denote_eqrt(e: &Expr, index: &Type, left: &Expr, right: &Expr, b: &Bounds) -> TriBool {
    let want = UType::eq(unrefine(index));
    match btype(&UEnv::empty(), e) {
        Ok(u) if u == want => {}
        _ => return TriBool::No,
    }
    match index {
        Type::Refined { base, .. } => {
            let value = match eval(e, b.fuel) {
                EvalOutcome::Value(v) => v,
                EvalOutcome::FuelExhausted(_) => return TriBool::Unknown,
                EvalOutcome::Stuck(_) => return TriBool::No,
            };
            match value {
                Expr::BEq { base: vb, .. } if vb == *base => {}
                _ => return TriBool::No,
            }
            eval_to_true(&Expr::eq_at(*base, left.clone(), right.clone()), b)
        }
        Type::Fun {
            binder: x,
            dom,
            cod,
        } => {
            let value = match eval(e, b.fuel) {
                EvalOutcome::Value(v) => v,
                EvalOutcome::FuelExhausted(_) => return TriBool::Unknown,
                EvalOutcome::Stuck(_) => return TriBool::No,
            };
            let proof = match &value {
                Expr::XEq {
                    dom: vdom,
                    cod: vcod,
                    proof,
                    ..
                } => {
                    // Any xeq head is accepted whose annotation erases to the
                    // index's erasure; the equated slots are not inspected.
                    if unrefine(vdom) != unrefine(dom) || unrefine(vcod) != unrefine(cod) {
                        return TriBool::No;
                    }
                    (**proof).clone()
                }
                _ => return TriBool::No,
            };
            let mut verdict = denote_member(left, index, b).and(denote_member(right, index, b));
            if verdict == TriBool::No {
                return TriBool::No;
            }
            let args = enumerate_values(&unrefine(dom), b.fn_depth);
            let mut saw_unknown = false;
            for a in &args.values {
                match denote_member(a, dom, b) {
                    TriBool::Yes => {
                        let cod_at = subst_type(cod, x, a);
                        let pointwise = Type::eqrt(
                            cod_at,
                            Expr::app(left.clone(), a.clone()),
                            Expr::app(right.clone(), a.clone()),
                        );
                        match denote_member(&Expr::app(proof.clone(), a.clone()), &pointwise, b) {
                            TriBool::Yes => {}
                            TriBool::No => return TriBool::No,
                            TriBool::Unknown => saw_unknown = true,
                        }
                    }
                    TriBool::No => {}
                    TriBool::Unknown => saw_unknown = true,
                }
            }
            if saw_unknown {
                verdict = TriBool::Unknown;
            }
            verdict.weaken_if(!args.complete)
        }
        // Equality over an equality index has no inhabiting value form.
        Type::EqRT { .. } => TriBool::No,
    }
}

fn eval_to_true(e: &Expr, b: &Bounds) -> TriBool {
    match eval(e, b.fuel) {
        EvalOutcome::Value(Expr::Const(ConstKind::True)) => TriBool::Yes,
        EvalOutcome::Value(_) => TriBool::No,
        EvalOutcome::Stuck(_) => TriBool::No,
        EvalOutcome::FuelExhausted(_) => TriBool::Unknown,
    }
}

/// A closing substitution: an ordered assignment of closed values to the
/// names of an environment.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ClosingSubst {
    pairs: Vec<(Name, Expr)>,
}

impl ClosingSubst {
    pub fn empty() -> ClosingSubst {
        ClosingSubst::default()
    }

    pub fn bind(&self, name: impl Into<Name>, value: Expr) -> ClosingSubst {
        let mut next = self.clone();
        next.pairs.push((name.into(), value));
        next
    }

    pub fn iter(&self) -> impl Iterator<Item = &(Name, Expr)> {
        self.pairs.iter()
    }

    pub fn lookup(&self, name: &str) -> Option<&Expr> {
        self.pairs
            .iter()
            .rev()
            .find(|(n, _)| n == name)
            .map(|(_, v)| v)
    }

    pub fn apply_expr(&self, e: &Expr) -> Expr {
        let mut out = e.clone();
        for (n, v) in &self.pairs {
            out = subst(&out, n, v);
        }
        out
    }

    pub fn apply_type(&self, t: &Type) -> Type {
        let mut out = t.clone();
        for (n, v) in &self.pairs {
            out = subst_type(&out, n, v);
        }
        out
    }
}

impl std::fmt::Display for ClosingSubst {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[")?;
        for (i, (n, v)) in self.pairs.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{n} := {v}")?;
        }
        write!(f, "]")
    }
}

/// All closing substitutions for `env`, built left to right: each binding's
/// candidates are enumerated at the erased type and filtered by membership
/// in the binding's type closed by the prefix. `complete` is true when every
/// enumeration was complete and no membership check was `Unknown`.
pub fn closing_substs(env: &Env, b: &Bounds) -> (Vec<ClosingSubst>, bool) {
    let mut partial = vec![ClosingSubst::empty()];
    let mut complete = true;
    for (name, ty) in env.iter() {
        let candidates = enumerate_values(&unrefine(ty), b.fn_depth);
        complete &= candidates.complete;
        let mut next = Vec::new();
        for theta in &partial {
            let ty_closed = theta.apply_type(ty);
            for cand in &candidates.values {
                match denote_member(cand, &ty_closed, b) {
                    TriBool::Yes => next.push(theta.bind(name.clone(), cand.clone())),
                    TriBool::No => {}
                    TriBool::Unknown => complete = false,
                }
            }
        }
        partial = next;
    }
    (partial, complete)
}

/// Per-constant soundness report: each constant is a member of its assigned
/// type's interpretation.
#[derive(Debug, Clone)]
pub struct ConstantsReport {
    pub entries: Vec<(ConstKind, TriBool)>,
}

impl ConstantsReport {
    pub fn all_yes(&self) -> bool {
        self.entries.iter().all(|(_, t)| t.is_yes())
    }
}

/// Checks every constant of the language against `tycon`.
pub fn constants_sound(b: &Bounds) -> ConstantsReport {
    use ConstKind::*;
    let consts = [
        True,
        False,
        UnitVal,
        EqOp(BaseType::Bool),
        EqOp(BaseType::Unit),
        EqOpPartial(Box::new(True), BaseType::Bool),
        EqOpPartial(Box::new(False), BaseType::Bool),
        EqOpPartial(Box::new(UnitVal), BaseType::Unit),
    ];
    let entries = consts
        .into_iter()
        .map(|c| {
            let verdict = denote_member(&Expr::Const(c.clone()), &crate::syntax::tycon(&c), b);
            (c, verdict)
        })
        .collect();
    ConstantsReport { entries }
}
