//! Seeded, type-directed generation of closed terms for testing.
//!
//! Terms are generated against an erased type, so every output is well
//! scoped and erasure-typeable by construction: whatever the evaluator
//! does to it, it must not get stuck. Generation can give up on a branch
//! (returning None) when the budget runs out against an ungeneratable
//! target; the closed-term driver falls back to minimal witnesses, which
//! exist for every type the type generator produces.

use crate::btype::UType;
use crate::denote::{canonical_value, trivial_type};
use crate::proofs::prove_refl;
use crate::syntax::{BaseType, ConstKind, Expr, Name, Type};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenConfig {
    pub seed: u64,
    pub max_size: usize,
    pub max_type_depth: usize,
    pub allow_eqrt: bool,
}

impl Default for GenConfig {
    fn default() -> GenConfig {
        GenConfig {
            seed: 0,
            max_size: 12,
            max_type_depth: 2,
            allow_eqrt: true,
        }
    }
}

pub struct Generator {
    rng: ChaCha8Rng,
    cfg: GenConfig,
    fresh: u64,
}

impl Generator {
    pub fn new(cfg: GenConfig) -> Generator {
        let rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        Generator { rng, cfg, fresh: 0 }
    }

    pub fn config(&self) -> &GenConfig {
        &self.cfg
    }

    fn fresh_binder(&mut self) -> Name {
        let n = self.fresh;
        self.fresh += 1;
        format!("x{n}")
    }

    pub fn gen_base(&mut self) -> BaseType {
        if self.rng.gen_bool(0.75) {
            BaseType::Bool
        } else {
            BaseType::Unit
        }
    }

    /// A random erased type. Equality indices stay equality-free, since
    /// nothing inhabits an equality over an equality.
    pub fn gen_utype(&mut self, depth: usize) -> UType {
        self.gen_utype_inner(depth, self.cfg.allow_eqrt)
    }

    fn gen_utype_inner(&mut self, depth: usize, allow_eq: bool) -> UType {
        if depth == 0 {
            return UType::base(self.gen_base());
        }
        let roll = self.rng.gen_range(0..100);
        if roll < 40 {
            UType::base(self.gen_base())
        } else if roll < 75 || !allow_eq {
            let dom = self.gen_utype_inner(depth - 1, allow_eq);
            let cod = self.gen_utype_inner(depth - 1, allow_eq);
            UType::fun(dom, cod)
        } else {
            UType::eq(self.gen_utype_inner(depth - 1, false))
        }
    }

    fn bool_refinement(&mut self) -> Expr {
        match self.rng.gen_range(0..4) {
            0 => Expr::truth(true),
            1 => Expr::eq_at(BaseType::Bool, Expr::var("v"), Expr::truth(true)),
            2 => Expr::eq_at(BaseType::Bool, Expr::var("v"), Expr::truth(false)),
            _ => Expr::var("v"),
        }
    }

    /// A random refined type. Refinements come from a small closed pool,
    /// and equality types sit over unrefined indices with canonical
    /// endpoints so the result is always well-formed.
    pub fn gen_type(&mut self, depth: usize) -> Type {
        if depth == 0 {
            return self.gen_refined_base();
        }
        let roll = self.rng.gen_range(0..100);
        if roll < 40 {
            self.gen_refined_base()
        } else if roll < 80 || !self.cfg.allow_eqrt {
            let x = self.fresh_binder();
            let dom = self.gen_type(depth - 1);
            let cod = self.gen_type(depth - 1);
            Type::fun(x, dom, cod)
        } else {
            let skeleton = self.gen_utype_inner(depth - 1, false);
            let index = trivial_type(&skeleton)
                .expect("equality-free skeletons always have a trivial type");
            let e = canonical_value(&skeleton)
                .expect("equality-free skeletons are always inhabited");
            Type::eqrt(index, e.clone(), e)
        }
    }

    fn gen_refined_base(&mut self) -> Type {
        match self.gen_base() {
            BaseType::Bool => Type::refined("v", BaseType::Bool, self.bool_refinement()),
            BaseType::Unit => {
                if self.rng.gen_bool(0.5) {
                    Type::trivial(BaseType::Unit)
                } else {
                    Type::refined(
                        "v",
                        BaseType::Unit,
                        Expr::eq_at(BaseType::Unit, Expr::var("v"), Expr::unit()),
                    )
                }
            }
        }
    }

    /// A closed term of erased type `target`, or None when the target is
    /// ungeneratable (an equality over an equality).
    pub fn gen_expr(&mut self, target: &UType, size: usize) -> Option<Expr> {
        let mut scope = Vec::new();
        self.gen_at(target, size, &mut scope)
    }

    /// A closed term at a freshly drawn type and size.
    pub fn gen_closed_expr(&mut self) -> Expr {
        loop {
            let depth = self.rng.gen_range(0..=self.cfg.max_type_depth);
            let target = self.gen_utype(depth);
            let size = self.rng.gen_range(0..=self.cfg.max_size);
            if let Some(e) = self.gen_expr(&target, size) {
                return e;
            }
        }
    }

    fn scope_pick(&mut self, target: &UType, scope: &[(Name, UType)]) -> Option<Expr> {
        let hits: Vec<&Name> = scope
            .iter()
            .filter(|(_, u)| u == target)
            .map(|(n, _)| n)
            .collect();
        if hits.is_empty() {
            return None;
        }
        let i = self.rng.gen_range(0..hits.len());
        Some(Expr::var(hits[i].clone()))
    }

    fn minimal_scoped(
        &mut self,
        target: &UType,
        scope: &mut Vec<(Name, UType)>,
    ) -> Option<Expr> {
        if self.rng.gen_bool(0.5) {
            if let Some(v) = self.scope_pick(target, scope) {
                return Some(v);
            }
        }
        match target {
            UType::Bool => Some(Expr::truth(self.rng.gen_bool(0.5))),
            UType::Unit => Some(Expr::unit()),
            UType::Fun(d, c) => {
                // A matching tester constant now and then.
                if let (UType::Bool, UType::Fun(d2, c2)) = (&**d, &**c) {
                    if **d2 == UType::Bool && **c2 == UType::Bool && self.rng.gen_bool(0.3) {
                        return Some(Expr::Const(ConstKind::EqOp(BaseType::Bool)));
                    }
                }
                let ann = trivial_type(d)?;
                let x = self.fresh_binder();
                scope.push((x.clone(), (**d).clone()));
                let body = self.minimal_scoped(c, scope);
                scope.pop();
                Some(Expr::lam(x, ann, body?))
            }
            UType::Eq(inner) => self.refl_at(inner),
        }
    }

    fn refl_at(&mut self, index: &UType) -> Option<Expr> {
        match index {
            UType::Bool | UType::Unit => {
                let lit = canonical_value(index)?;
                let base = match index {
                    UType::Bool => BaseType::Bool,
                    _ => BaseType::Unit,
                };
                Some(Expr::beq(base, lit.clone(), lit, Expr::unit()))
            }
            UType::Fun(..) => {
                let ty = trivial_type(index)?;
                let e = canonical_value(index)?;
                prove_refl(&e, &ty).ok()
            }
            UType::Eq(_) => None,
        }
    }

    fn gen_at(
        &mut self,
        target: &UType,
        size: usize,
        scope: &mut Vec<(Name, UType)>,
    ) -> Option<Expr> {
        if size == 0 {
            return self.minimal_scoped(target, scope);
        }
        let attempt = match target {
            UType::Bool | UType::Unit => match self.rng.gen_range(0..10) {
                0..=3 => self.gen_app(target, size, scope),
                4..=7 if *target == UType::Bool => self.gen_eq_test(size, scope),
                _ => None,
            },
            UType::Fun(d, c) => match self.rng.gen_range(0..10) {
                0..=6 => self.gen_lam(d, c, size, scope),
                7..=8 => self.gen_app(target, size, scope),
                _ => None,
            },
            UType::Eq(inner) => match &**inner {
                UType::Bool | UType::Unit => self.gen_beq(inner, size, scope),
                UType::Fun(..) => self.gen_xeq(inner, size, scope),
                UType::Eq(_) => return None,
            },
        };
        match attempt {
            Some(e) => Some(e),
            None => self.minimal_scoped(target, scope),
        }
    }

    fn gen_app(
        &mut self,
        target: &UType,
        size: usize,
        scope: &mut Vec<(Name, UType)>,
    ) -> Option<Expr> {
        let arg_ty = if self.rng.gen_bool(0.8) {
            UType::base(self.gen_base())
        } else {
            UType::fun(UType::base(self.gen_base()), UType::base(self.gen_base()))
        };
        let half = size / 2;
        let f = self.gen_at(
            &UType::fun(arg_ty.clone(), target.clone()),
            half,
            scope,
        )?;
        let a = self.gen_at(&arg_ty, size - half - 1, scope)?;
        Some(Expr::app(f, a))
    }

    fn gen_eq_test(&mut self, size: usize, scope: &mut Vec<(Name, UType)>) -> Option<Expr> {
        let base = self.gen_base();
        let half = size / 2;
        let l = self.gen_at(&UType::base(base), half, scope)?;
        let r = self.gen_at(&UType::base(base), size - half - 1, scope)?;
        Some(Expr::eq_at(base, l, r))
    }

    fn gen_lam(
        &mut self,
        dom: &UType,
        cod: &UType,
        size: usize,
        scope: &mut Vec<(Name, UType)>,
    ) -> Option<Expr> {
        let ann = trivial_type(dom)?;
        let x = self.fresh_binder();
        scope.push((x.clone(), dom.clone()));
        let body = self.gen_at(cod, size - 1, scope);
        scope.pop();
        Some(Expr::lam(x, ann, body?))
    }

    fn gen_beq(
        &mut self,
        base_ty: &UType,
        size: usize,
        scope: &mut Vec<(Name, UType)>,
    ) -> Option<Expr> {
        let base = match base_ty {
            UType::Bool => BaseType::Bool,
            UType::Unit => BaseType::Unit,
            _ => return None,
        };
        let third = size / 3;
        let l = self.gen_at(base_ty, third, scope)?;
        let r = self.gen_at(base_ty, third, scope)?;
        let p = self.gen_at(&UType::Unit, size - 2 * third, scope)?;
        Some(Expr::beq(base, l, r, p))
    }

    fn gen_xeq(
        &mut self,
        fun_ty: &UType,
        size: usize,
        scope: &mut Vec<(Name, UType)>,
    ) -> Option<Expr> {
        let (d, c) = match fun_ty {
            UType::Fun(d, c) => (&**d, &**c),
            _ => return None,
        };
        if self.rng.gen_bool(0.5) {
            // Reflexivity over a generated endpoint.
            let e = self.gen_at(fun_ty, size - 1, scope)?;
            let ty = trivial_type(fun_ty)?;
            return prove_refl(&e, &ty).ok();
        }
        let dom_ty = trivial_type(d)?;
        let cod_ty = trivial_type(c)?;
        let third = size / 3;
        let l = self.gen_at(fun_ty, third, scope)?;
        let r = self.gen_at(fun_ty, third, scope)?;
        let p = self.gen_at(
            &UType::fun(d.clone(), UType::eq(c.clone())),
            size - 2 * third,
            scope,
        )?;
        let x = self.fresh_binder();
        Some(Expr::xeq(x, dom_ty, cod_ty, l, r, p))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::btype::{btype, UEnv};
    use crate::eval::{eval, EvalOutcome};

    #[test]
    fn generated_terms_erase_to_their_target() {
        let mut g = Generator::new(GenConfig {
            seed: 7,
            ..GenConfig::default()
        });
        for _ in 0..300 {
            let depth = 2;
            let target = g.gen_utype(depth);
            if let Some(e) = g.gen_expr(&target, 10) {
                let got = btype(&UEnv::empty(), &e)
                    .unwrap_or_else(|err| panic!("{e} failed erasure typing: {err}"));
                assert_eq!(got, target, "term {e}");
            }
        }
    }

    #[test]
    fn generated_terms_normalize_without_sticking() {
        let mut g = Generator::new(GenConfig {
            seed: 11,
            ..GenConfig::default()
        });
        for _ in 0..300 {
            let e = g.gen_closed_expr();
            match eval(&e, 100_000) {
                EvalOutcome::Value(_) => {}
                EvalOutcome::FuelExhausted(rest) => {
                    panic!("generated term {e} ran out of fuel at {rest}")
                }
                EvalOutcome::Stuck(nf) => panic!("generated term {e} got stuck at {nf}"),
            }
        }
    }

    #[test]
    fn generation_is_deterministic_per_seed() {
        let cfg = GenConfig {
            seed: 99,
            ..GenConfig::default()
        };
        let mut a = Generator::new(cfg.clone());
        let mut b = Generator::new(cfg);
        for _ in 0..100 {
            assert_eq!(a.gen_closed_expr(), b.gen_closed_expr());
        }
    }

    #[test]
    fn every_constructor_appears() {
        let mut g = Generator::new(GenConfig {
            seed: 3,
            ..GenConfig::default()
        });
        let mut counts = [0usize; 6];
        let total = 2_000;
        for _ in 0..total {
            let e = g.gen_closed_expr();
            tally(&e, &mut counts);
        }
        let names = ["const", "var", "app", "lam", "beq", "xeq"];
        for (i, &c) in counts.iter().enumerate() {
            assert!(
                c >= total / 100,
                "constructor {} appeared only {c} times in {total} terms",
                names[i]
            );
        }
    }

    fn tally(e: &Expr, counts: &mut [usize; 6]) {
        match e {
            Expr::Const(_) => counts[0] += 1,
            Expr::Var(_) => counts[1] += 1,
            Expr::App(f, a) => {
                counts[2] += 1;
                tally(f, counts);
                tally(a, counts);
            }
            Expr::Lam(_, _, b) => {
                counts[3] += 1;
                tally(b, counts);
            }
            Expr::BEq {
                left, right, proof, ..
            } => {
                counts[4] += 1;
                tally(left, counts);
                tally(right, counts);
                tally(proof, counts);
            }
            Expr::XEq {
                left, right, proof, ..
            } => {
                counts[5] += 1;
                tally(left, counts);
                tally(right, counts);
                tally(proof, counts);
            }
        }
    }

    #[test]
    fn generated_types_are_wellformed() {
        use crate::denote::Bounds;
        use crate::syntax::Env;
        use crate::typing::wf;
        let mut g = Generator::new(GenConfig {
            seed: 21,
            ..GenConfig::default()
        });
        for _ in 0..100 {
            let t = g.gen_type(2);
            assert_eq!(
                wf(&Env::empty(), &t, &Bounds::default()),
                crate::tri::TriBool::Yes,
                "type {t} is not well-formed"
            );
        }
    }
}
