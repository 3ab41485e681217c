//! Refinement inference over implication constraints, Houdini style.
//!
//! A single predicate unknown stands for a refinement over one base-typed
//! variable. Constraints are implications between atoms under a small
//! first-order environment, and implication is checked by enumerating the
//! environment's carrier outright: no solver, no surprises. The solver
//! starts from a finite candidate set, keeps the conjunction of all of
//! them, and drops any candidate not justified wherever the unknown
//! appears on the right of an implication; the fixpoint is the strongest
//! conjunction the constraints admit.
//!
//! `run_demo` plays two derivations of the same function equality against
//! each other: the honest one, where the equality type's domain is pinned
//! by its use site, and the extensionality shortcut, which leaves the
//! domain unconstrained and collapses to the empty refinement.

use crate::denote::Bounds;
use crate::eval::{eval, EvalOutcome};
use crate::syntax::{subst, BaseType, ConstKind, Env, Expr, Name, Type};
use crate::tri::TriBool;
use crate::typing::{check, subtype_witness, Subtyped};
use std::fmt;

/// The predicate unknown: a refinement over `var` at `base`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PredVar {
    pub name: Name,
    pub var: Name,
    pub base: BaseType,
}

impl PredVar {
    pub fn new(name: impl Into<Name>, var: impl Into<Name>, base: BaseType) -> PredVar {
        PredVar {
            name: name.into(),
            var: var.into(),
            base,
        }
    }
}

/// One candidate conjunct for the unknown.
#[derive(Debug, Clone, PartialEq)]
pub struct Candidate {
    pub expr: Expr,
}

impl fmt::Display for Candidate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.expr)
    }
}

/// The stock candidate lattice over a boolean variable: constants and
/// comparisons against each literal.
pub fn default_candidates(pred: &PredVar) -> Vec<Candidate> {
    let v = Expr::var(pred.var.clone());
    let mut out = vec![
        Candidate {
            expr: Expr::truth(true),
        },
        Candidate {
            expr: Expr::truth(false),
        },
    ];
    if pred.base == BaseType::Bool {
        out.push(Candidate {
            expr: Expr::eq_at(BaseType::Bool, v.clone(), Expr::truth(true)),
        });
        out.push(Candidate {
            expr: Expr::eq_at(BaseType::Bool, v, Expr::truth(false)),
        });
    }
    out
}

/// An atom: a concrete boolean expression over the constraint's
/// environment, or the predicate unknown applied to its variable.
#[derive(Debug, Clone, PartialEq)]
pub enum Atom {
    Pred(Expr),
    Kappa,
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Pred(e) => write!(f, "{e}"),
            Atom::Kappa => write!(f, "?k"),
        }
    }
}

/// An implication: under `env`, the conjunction of `hyps` entails `head`.
#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub env: Vec<(Name, BaseType)>,
    pub hyps: Vec<Atom>,
    pub head: Atom,
    pub label: String,
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] ", self.label)?;
        for (i, (x, b)) in self.env.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x}:{b}")?;
        }
        write!(f, " | ")?;
        for (i, h) in self.hyps.iter().enumerate() {
            if i > 0 {
                write!(f, " /\\ ")?;
            }
            write!(f, "{h}")?;
        }
        if self.hyps.is_empty() {
            write!(f, "true")?;
        }
        write!(f, " => {}", self.head)
    }
}

fn carrier(base: BaseType) -> Vec<Expr> {
    match base {
        BaseType::Bool => vec![Expr::truth(true), Expr::truth(false)],
        BaseType::Unit => vec![Expr::unit()],
    }
}

fn eval_to_truth(e: &Expr, fuel: usize) -> TriBool {
    match eval(e, fuel) {
        EvalOutcome::Value(Expr::Const(ConstKind::True)) => TriBool::Yes,
        EvalOutcome::Value(_) => TriBool::No,
        EvalOutcome::FuelExhausted(_) => TriBool::Unknown,
        EvalOutcome::Stuck(_) => TriBool::No,
    }
}

fn atom_holds(atom: &Atom, conjuncts: &[Expr], valuation: &[(Name, Expr)], fuel: usize) -> TriBool {
    let close = |e: &Expr| {
        valuation
            .iter()
            .fold(e.clone(), |acc, (x, v)| subst(&acc, x, v))
    };
    match atom {
        Atom::Pred(e) => eval_to_truth(&close(e), fuel),
        Atom::Kappa => {
            let mut acc = TriBool::Yes;
            for c in conjuncts {
                acc = acc.and(eval_to_truth(&close(c), fuel));
                if acc == TriBool::No {
                    break;
                }
            }
            acc
        }
    }
}

/// Does `c` hold when the unknown stands for the conjunction of
/// `conjuncts`? Checked by enumerating every valuation of the constraint
/// environment.
pub fn check_implication(c: &Constraint, conjuncts: &[Expr], fuel: usize) -> TriBool {
    let mut valuations: Vec<Vec<(Name, Expr)>> = vec![Vec::new()];
    for (x, b) in &c.env {
        let mut next = Vec::new();
        for val in &valuations {
            for v in carrier(*b) {
                let mut ext = val.clone();
                ext.push((x.clone(), v));
                next.push(ext);
            }
        }
        valuations = next;
    }
    let mut acc = TriBool::Yes;
    for val in &valuations {
        let mut hyp = TriBool::Yes;
        for h in &c.hyps {
            hyp = hyp.and(atom_holds(h, conjuncts, val, fuel));
            if hyp == TriBool::No {
                break;
            }
        }
        match hyp {
            TriBool::No => continue,
            TriBool::Unknown => {
                acc = acc.and(TriBool::Unknown);
                continue;
            }
            TriBool::Yes => {}
        }
        match atom_holds(&c.head, conjuncts, val, fuel) {
            TriBool::Yes => {}
            TriBool::No => return TriBool::No,
            TriBool::Unknown => acc = acc.and(TriBool::Unknown),
        }
    }
    acc
}

/// The solver's answer: the surviving conjuncts, strongest first in the
/// order the candidates were given.
#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    pub conjuncts: Vec<Expr>,
}

impl Solution {
    /// Evaluates the conjunction at one carrier value of the unknown's
    /// variable.
    pub fn eval_at(&self, var: &str, v: &Expr, fuel: usize) -> TriBool {
        let mut acc = TriBool::Yes;
        for c in &self.conjuncts {
            acc = acc.and(eval_to_truth(&subst(c, var, v), fuel));
            if acc == TriBool::No {
                break;
            }
        }
        acc
    }

    /// Renders the conjunction as a single expression when one exists in
    /// the calculus: empty conjunctions are `true`, singletons are
    /// themselves, and anything containing `false` is `false`. There is no
    /// boolean connective, so other combinations have no one-expression
    /// form.
    pub fn as_expr(&self) -> Option<Expr> {
        if self
            .conjuncts
            .iter()
            .any(|c| matches!(c, Expr::Const(ConstKind::False)))
        {
            return Some(Expr::truth(false));
        }
        let nontrivial: Vec<&Expr> = self
            .conjuncts
            .iter()
            .filter(|c| !matches!(c, Expr::Const(ConstKind::True)))
            .collect();
        match nontrivial.len() {
            0 => Some(Expr::truth(true)),
            1 => Some(nontrivial[0].clone()),
            _ => None,
        }
    }

    /// Truth-table equivalence with `other` over the carrier of `base`.
    pub fn equivalent_to(&self, other: &Expr, pred: &PredVar, fuel: usize) -> bool {
        carrier(pred.base).iter().all(|v| {
            let mine = self.eval_at(&pred.var, v, fuel);
            let theirs = eval_to_truth(&subst(other, &pred.var, v), fuel);
            mine == theirs && mine != TriBool::Unknown
        })
    }
}

impl fmt::Display for Solution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.conjuncts.is_empty() {
            return write!(f, "true");
        }
        for (i, c) in self.conjuncts.iter().enumerate() {
            if i > 0 {
                write!(f, " /\\ ")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// Greatest-fixpoint candidate pruning: start from all candidates, drop
/// any that a head occurrence of the unknown cannot justify, repeat until
/// stable. Drops are conservative: an unknown verdict drops the
/// candidate too.
pub fn houdini_solve(
    candidates: &[Candidate],
    constraints: &[Constraint],
    fuel: usize,
) -> Solution {
    let mut kept: Vec<Expr> = candidates.iter().map(|c| c.expr.clone()).collect();
    loop {
        let snapshot = kept.clone();
        let mut next = Vec::new();
        'cand: for cand in &snapshot {
            for c in constraints {
                if c.head != Atom::Kappa {
                    continue;
                }
                let probe = Constraint {
                    env: c.env.clone(),
                    hyps: c.hyps.clone(),
                    head: Atom::Pred(cand.clone()),
                    label: c.label.clone(),
                };
                if check_implication(&probe, &snapshot, fuel) != TriBool::Yes {
                    continue 'cand;
                }
            }
            next.push(cand.clone());
        }
        let stable = next.len() == kept.len();
        kept = next;
        if stable {
            break;
        }
    }
    Solution { conjuncts: kept }
}

/// Constraints for typing a pointwise equality proof of `f` and `g` whose
/// equality type's domain is pinned to `target_dom` by its use site. The
/// unknown is the inferred domain refinement.
pub fn gen_xeq_constraints(
    pred: &PredVar,
    f: &Expr,
    g: &Expr,
    target_dom: &Expr,
) -> Vec<Constraint> {
    let env = vec![(pred.var.clone(), pred.base)];
    let v = || Expr::var(pred.var.clone());
    let agree = Expr::eq_at(
        pred.base,
        Expr::app(f.clone(), v()),
        Expr::app(g.clone(), v()),
    );
    vec![
        Constraint {
            env: env.clone(),
            hyps: vec![Atom::Kappa],
            head: Atom::Pred(Expr::truth(true)),
            label: "left endpoint in scope".into(),
        },
        Constraint {
            env: env.clone(),
            hyps: vec![Atom::Kappa],
            head: Atom::Pred(Expr::truth(true)),
            label: "right endpoint in scope".into(),
        },
        Constraint {
            env: env.clone(),
            hyps: vec![Atom::Kappa],
            head: Atom::Pred(agree.clone()),
            label: "pointwise proof obligation".into(),
        },
        Constraint {
            env: env.clone(),
            hyps: vec![Atom::Kappa, Atom::Pred(agree.clone())],
            head: Atom::Pred(agree),
            label: "hypothesis reuse".into(),
        },
        Constraint {
            env: env.clone(),
            hyps: vec![Atom::Kappa],
            head: Atom::Pred(target_dom.clone()),
            label: "index upper bound".into(),
        },
        Constraint {
            env,
            hyps: vec![Atom::Pred(target_dom.clone())],
            head: Atom::Kappa,
            label: "index lower bound".into(),
        },
    ]
}

/// Constraints for the extensionality shortcut: the same pointwise proof,
/// but no use site ever pins the equality's domain, so the unknown never
/// appears on the right of an implication.
pub fn gen_funext_constraints(pred: &PredVar, f: &Expr, g: &Expr) -> Vec<Constraint> {
    let env = vec![(pred.var.clone(), pred.base)];
    let v = || Expr::var(pred.var.clone());
    let agree = Expr::eq_at(
        pred.base,
        Expr::app(f.clone(), v()),
        Expr::app(g.clone(), v()),
    );
    vec![
        Constraint {
            env: env.clone(),
            hyps: vec![Atom::Kappa],
            head: Atom::Pred(Expr::truth(true)),
            label: "left endpoint in scope".into(),
        },
        Constraint {
            env: env.clone(),
            hyps: vec![Atom::Kappa],
            head: Atom::Pred(Expr::truth(true)),
            label: "right endpoint in scope".into(),
        },
        Constraint {
            env: env.clone(),
            hyps: vec![Atom::Kappa],
            head: Atom::Pred(agree.clone()),
            label: "pointwise proof obligation".into(),
        },
        Constraint {
            env,
            hyps: vec![Atom::Kappa, Atom::Pred(agree.clone())],
            head: Atom::Pred(agree),
            label: "hypothesis reuse".into(),
        },
    ]
}

/// Everything the demonstration establishes, in one report.
#[derive(Debug, Clone)]
pub struct DemoReport {
    /// Inferred domain for the use-site-pinned equality.
    pub pinned_solution: Solution,
    /// That solution matches the agreement domain `v = true`.
    pub pinned_matches_agreement: bool,
    /// Inferred domain for the extensionality shortcut.
    pub shortcut_solution: Solution,
    /// That solution is the empty refinement `false`.
    pub shortcut_is_false: bool,
    /// Whether the shortcut's constraints tolerate the full domain.
    pub shortcut_full_domain: TriBool,
    /// The checker accepts the proof at the agreement domain.
    pub narrow_check: TriBool,
    /// The checker rejects the same proof at the full domain.
    pub wide_check: TriBool,
    /// The narrow equality type is not a subtype of the wide one; the
    /// witness names the separating argument.
    pub index_gap: Subtyped,
}

impl DemoReport {
    /// True when every finding comes out the way the construction says it
    /// must.
    pub fn conclusive(&self) -> bool {
        self.pinned_matches_agreement
            && self.shortcut_is_false
            && self.shortcut_full_domain == TriBool::No
            && self.narrow_check == TriBool::Yes
            && self.wide_check == TriBool::No
            && self.index_gap.verdict == TriBool::No
    }
}

impl fmt::Display for DemoReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "functions: f = identity, g = constantly true, compared at Bool"
        )?;
        writeln!(f, "candidates: true, false, v = true, v = false")?;
        writeln!(f)?;
        writeln!(f, "use-site-pinned equality (domain flows from the type):")?;
        writeln!(f, "  inferred domain: {}", self.pinned_solution)?;
        writeln!(
            f,
            "  matches the agreement domain (v = true): {}",
            self.pinned_matches_agreement
        )?;
        writeln!(f)?;
        writeln!(f, "extensionality shortcut (domain unconstrained):")?;
        writeln!(f, "  inferred domain: {}", self.shortcut_solution)?;
        writeln!(f, "  collapses to false: {}", self.shortcut_is_false)?;
        writeln!(
            f,
            "  full domain consistent: {}",
            self.shortcut_full_domain
        )?;
        writeln!(f)?;
        writeln!(f, "checker cross-examination:")?;
        writeln!(
            f,
            "  proof accepted at domain v = true: {}",
            self.narrow_check
        )?;
        writeln!(f, "  proof accepted at domain Bool: {}", self.wide_check)?;
        write!(
            f,
            "  narrow equality <= wide equality: {}",
            self.index_gap.verdict
        )?;
        if let Some((theta, v)) = &self.index_gap.witness {
            write!(f, " (separated by {v} under {theta})")?;
        }
        writeln!(f)?;
        write!(
            f,
            "verdict: {}",
            if self.conclusive() {
                "extensionality without a domain bound is unsound here"
            } else {
                "inconclusive"
            }
        )
    }
}

/// Runs the whole demonstration with the stock functions and candidates.
pub fn run_demo(b: &Bounds) -> DemoReport {
    let bool_ty = Type::trivial(BaseType::Bool);
    let f = Expr::lam("x", bool_ty.clone(), Expr::var("x"));
    let g = Expr::lam("x", bool_ty.clone(), Expr::truth(true));
    let pred = PredVar::new("k", "v", BaseType::Bool);
    let agreement = Expr::eq_at(BaseType::Bool, Expr::var("v"), Expr::truth(true));
    let candidates = default_candidates(&pred);

    let pinned = gen_xeq_constraints(&pred, &f, &g, &agreement);
    let pinned_solution = houdini_solve(&candidates, &pinned, b.fuel);
    let pinned_matches_agreement =
        pinned_solution.equivalent_to(&agreement, &pred, b.fuel)
            && pinned
                .iter()
                .all(|c| check_implication(c, &pinned_solution.conjuncts, b.fuel) == TriBool::Yes);

    let shortcut = gen_funext_constraints(&pred, &f, &g);
    let shortcut_solution = houdini_solve(&candidates, &shortcut, b.fuel);
    let shortcut_is_false =
        shortcut_solution.equivalent_to(&Expr::truth(false), &pred, b.fuel);
    let full = [Expr::truth(true)];
    let shortcut_full_domain = shortcut
        .iter()
        .map(|c| check_implication(c, &full, b.fuel))
        .fold(TriBool::Yes, TriBool::and);

    let tru_ty = Type::refined("v", BaseType::Bool, agreement);
    let narrow_proof = Expr::lam(
        "x",
        tru_ty.clone(),
        Expr::beq(
            BaseType::Bool,
            Expr::app(f.clone(), Expr::var("x")),
            Expr::app(g.clone(), Expr::var("x")),
            Expr::unit(),
        ),
    );
    let narrow_eq = Expr::xeq(
        "x",
        tru_ty.clone(),
        bool_ty.clone(),
        f.clone(),
        g.clone(),
        narrow_proof,
    );
    let narrow_ty = Type::eqrt(
        Type::fun("x", tru_ty.clone(), bool_ty.clone()),
        f.clone(),
        g.clone(),
    );
    let narrow_check = check(&Env::empty(), &narrow_eq, &narrow_ty, b).tri();

    let wide_proof = Expr::lam(
        "x",
        bool_ty.clone(),
        Expr::beq(
            BaseType::Bool,
            Expr::app(f.clone(), Expr::var("x")),
            Expr::app(g.clone(), Expr::var("x")),
            Expr::unit(),
        ),
    );
    let wide_eq = Expr::xeq(
        "x",
        bool_ty.clone(),
        bool_ty.clone(),
        f.clone(),
        g.clone(),
        wide_proof,
    );
    let wide_fun = Type::fun("x", bool_ty.clone(), bool_ty.clone());
    let wide_ty = Type::eqrt(wide_fun, f.clone(), g.clone());
    let wide_check = check(&Env::empty(), &wide_eq, &wide_ty, b).tri();

    let index_gap = subtype_witness(&Env::empty(), &narrow_ty, &wide_ty, b);

    DemoReport {
        pinned_solution,
        pinned_matches_agreement,
        shortcut_solution,
        shortcut_is_false,
        shortcut_full_domain,
        narrow_check,
        wide_check,
        index_gap,
    }
}
