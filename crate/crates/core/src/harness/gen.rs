//! Typed term generation: exhaustive enumeration by size and
//! rule-directed random sampling.

use std::collections::HashMap;
use std::rc::Rc;

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use super::GenConfig;
use crate::syntax::{ETerm, Seq, Term, Type};
use crate::typing::{judge, Contexts, Judgement};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenError {
    #[error("generation stuck: no term of type {goal} within size {budget} after {attempts} attempts")]
    GenerationStuck { goal: Type, budget: usize, attempts: usize },
}

/// The fixed context scheme used for enumeration: the empty context, one
/// hypothesis per pool type, and rotations `x:Tᵢ, y:Tᵢ₊₁ ; a:Tᵢ₊₂`.
pub fn context_scheme(pool: &[Type]) -> Vec<Contexts> {
    let mut out = vec![Contexts::new()];
    for t in pool {
        out.push(Contexts::new().with_var("x", t.clone()));
    }
    let k = pool.len();
    for i in 0..k {
        out.push(
            Contexts::new()
                .with_var("x", pool[i].clone())
                .with_var("y", pool[(i + 1) % k].clone())
                .with_mu("a", pool[(i + 2) % k].clone()),
        );
    }
    out
}

/// Context as ordered declaration lists; binder names are derived from
/// the list lengths so every generated term is its own alpha
/// representative.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct Scope {
    gamma: Vec<(String, Type)>,
    delta: Vec<(String, Type)>,
}

impl Scope {
    fn of(ctx: &Contexts) -> Scope {
        Scope {
            gamma: ctx.gamma.iter().map(|(k, v)| (k.clone(), v.clone())).collect(),
            delta: ctx.delta.iter().map(|(k, v)| (k.clone(), v.clone())).collect(),
        }
    }

    fn lambda_name(&self) -> String {
        format!("v{}", self.gamma.len())
    }

    fn mu_name(&self) -> String {
        format!("b{}", self.delta.len())
    }

    fn bind(&self, ty: &Type) -> Scope {
        let mut s = self.clone();
        s.gamma.push((self.lambda_name(), ty.clone()));
        s
    }

    fn bind_mu(&self, ty: &Type) -> Scope {
        let mut s = self.clone();
        s.delta.push((self.mu_name(), ty.clone()));
        s
    }
}

type Bucket = Rc<Vec<Term>>;

/// Enumerates typed terms by size and goal type. Every subterm's type is
/// drawn from the subformula closure of a type pool, which also fixes
/// every annotation.
pub struct Enumerator {
    universe: Vec<Type>,
    memo: HashMap<(Scope, usize, Type), Bucket>,
}

impl Enumerator {
    pub fn new(pool: &[Type]) -> Enumerator {
        let mut universe: Vec<Type> = Vec::new();
        for t in pool {
            for s in t.subformulas() {
                if !universe.contains(&s) {
                    universe.push(s);
                }
            }
        }
        universe.sort();
        Enumerator { universe, memo: HashMap::new() }
    }

    pub fn universe(&self) -> &[Type] {
        &self.universe
    }

    /// All `(t, A)` with `ctx ⊢ t : A`, `A` in the universe and
    /// `size(t) ≤ max_size`; ordered by size, then type.
    pub fn up_to(&mut self, ctx: &Contexts, max_size: usize) -> Vec<(Term, Type)> {
        let scope = Scope::of(ctx);
        let mut out = Vec::new();
        for n in 1..=max_size {
            for g in self.universe.clone() {
                out.extend(self.exact(&scope, n, &g).iter().map(|t| (t.clone(), g.clone())));
            }
        }
        out
    }

    /// Terms of type `goal` with at most `max_size` nodes.
    pub fn of_type(&mut self, ctx: &Contexts, goal: &Type, max_size: usize) -> Vec<Term> {
        let scope = Scope::of(ctx);
        (1..=max_size).flat_map(|n| self.exact(&scope, n, goal).as_ref().clone()).collect()
    }

    fn has(&self, t: &Type) -> bool {
        self.universe.binary_search(t).is_ok()
    }

    fn exact(&mut self, scope: &Scope, n: usize, goal: &Type) -> Bucket {
        let key = (scope.clone(), n, goal.clone());
        if let Some(b) = self.memo.get(&key) {
            return b.clone();
        }
        let out = Rc::new(self.build(scope, n, goal));
        self.memo.insert(key, out.clone());
        out
    }

    fn build(&mut self, scope: &Scope, n: usize, goal: &Type) -> Vec<Term> {
        let mut out = Vec::new();
        if n == 0 || !self.has(goal) {
            return out;
        }
        if n == 1 {
            for (x, t) in &scope.gamma {
                if t == goal {
                    out.push(Term::var(x.clone()));
                }
            }
            return out;
        }
        let universe = self.universe.clone();
        // introductions
        match goal {
            Type::Arrow(a, b) => {
                for body in self.exact(&scope.bind(a), n - 1, b).iter() {
                    out.push(Term::lam(scope.lambda_name(), (**a).clone(), body.clone()));
                }
            }
            Type::And(a, b) => {
                for k in 1..n - 1 {
                    let rights = self.exact(scope, n - 1 - k, b);
                    for u in self.exact(scope, k, a).iter() {
                        for v in rights.iter() {
                            out.push(Term::pair(u.clone(), v.clone()));
                        }
                    }
                }
            }
            Type::Or(a, b) => {
                for t in self.exact(scope, n - 1, a).iter() {
                    out.push(Term::inl((**b).clone(), t.clone()));
                }
                for t in self.exact(scope, n - 1, b).iter() {
                    out.push(Term::inr((**a).clone(), t.clone()));
                }
            }
            Type::Bottom => {
                for (c, ct) in &scope.delta {
                    for t in self.exact(scope, n - 1, ct).iter() {
                        out.push(Term::named(c.clone(), t.clone()));
                    }
                }
            }
            Type::Var(_) => {}
        }
        // ->e
        for a in &universe {
            let fun = Type::arrow(a.clone(), goal.clone());
            if !self.has(&fun) {
                continue;
            }
            for k in 1..n - 1 {
                let args = self.exact(scope, n - 1 - k, a);
                if args.is_empty() {
                    continue;
                }
                for h in self.exact(scope, k, &fun).iter() {
                    for v in args.iter() {
                        out.push(Term::apply(h.clone(), v.clone()));
                    }
                }
            }
        }
        // /\e
        if n >= 3 {
            for other in &universe {
                let left = Type::and(goal.clone(), other.clone());
                for h in self.exact(scope, n - 2, &left).iter() {
                    out.push(Term::app(h.clone(), ETerm::Proj1));
                }
                let right = Type::and(other.clone(), goal.clone());
                for h in self.exact(scope, n - 2, &right).iter() {
                    out.push(Term::app(h.clone(), ETerm::Proj2));
                }
            }
        }
        // \/e: 1 + head + left + right = n
        for sum in &universe {
            let Type::Or(a, b) = sum else { continue };
            for k in 1..n {
                let heads = self.exact(scope, k, sum);
                if heads.is_empty() {
                    continue;
                }
                for l in 1..n - k {
                    let r = n - 1 - k - l;
                    if r == 0 {
                        continue;
                    }
                    let lefts = self.exact(&scope.bind(a), l, goal);
                    let rights = self.exact(&scope.bind(b), r, goal);
                    for h in heads.iter() {
                        for u in lefts.iter() {
                            for v in rights.iter() {
                                let case = ETerm::Case {
                                    ann: goal.clone(),
                                    left_var: scope.lambda_name(),
                                    left: u.clone(),
                                    right_var: scope.lambda_name(),
                                    right: v.clone(),
                                };
                                out.push(Term::app(h.clone(), case));
                            }
                        }
                    }
                }
            }
        }
        // abs_e
        for body in self.exact(&scope.bind_mu(goal), n - 1, &Type::Bottom).iter() {
            out.push(Term::mu(scope.mu_name(), goal.clone(), body.clone()));
        }
        out
    }
}

/// Every well-typed term up to `cfg.max_size` over the context scheme,
/// each re-validated by `infer`. Deterministic.
pub fn enumerate_typed(cfg: &GenConfig) -> Vec<Judgement> {
    let mut en = Enumerator::new(&cfg.type_pool);
    let mut out = Vec::new();
    for ctx in context_scheme(&cfg.type_pool) {
        for (t, ty) in en.up_to(&ctx, cfg.max_size) {
            let j = judge(&ctx, &t).expect("enumerated terms are well-typed");
            debug_assert_eq!(j.ty(), &ty);
            out.push(j);
        }
    }
    out
}

/// Rule-directed random generation of typed terms.
pub struct Sampler {
    rng: ChaCha8Rng,
    /// Types available as intermediate formulas of eliminations.
    cut_types: Vec<Type>,
    /// Whether a missing hypothesis may be added to the context.
    open: bool,
    fresh: usize,
    extra: Vec<(String, Type)>,
    /// Remaining generator calls for the current attempt.
    work: usize,
}

const ATTEMPTS: usize = 200;
const WORK_PER_ATTEMPT: usize = 400;

impl Sampler {
    pub fn new(seed: u64, pool: &[Type]) -> Sampler {
        let mut cut_types: Vec<Type> = Vec::new();
        for t in pool {
            for s in t.subformulas() {
                if !cut_types.contains(&s) {
                    cut_types.push(s);
                }
            }
        }
        Sampler { rng: ChaCha8Rng::seed_from_u64(seed), cut_types, open: false, fresh: 0, extra: Vec::new(), work: 0 }
    }

    /// In open mode a goal that cannot be met may be closed off with a
    /// fresh hypothesis `h0`, `h1`, … which is reported by `term_in`.
    pub fn open(mut self) -> Sampler {
        self.open = true;
        self
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    /// A term of type `goal` in `ctx` with at most `budget` nodes,
    /// together with the context actually used (in open mode it may
    /// contain extra hypotheses).
    pub fn term_in(&mut self, ctx: &Contexts, goal: &Type, budget: usize) -> Result<(Term, Contexts), GenError> {
        self.term_with_attempts(ctx, goal, budget, ATTEMPTS)
    }

    fn term_with_attempts(
        &mut self,
        ctx: &Contexts,
        goal: &Type,
        budget: usize,
        attempts: usize,
    ) -> Result<(Term, Contexts), GenError> {
        let mut scope = Scope::of(ctx);
        for t in ctx.gamma.values().chain(ctx.delta.values()) {
            for s in t.subformulas() {
                if !self.cut_types.contains(&s) {
                    self.cut_types.push(s);
                }
            }
        }
        for _ in 0..attempts {
            self.extra.clear();
            self.work = WORK_PER_ATTEMPT;
            let budget = budget.max(1);
            let target = self.rng.gen_range(budget.div_ceil(2)..=budget);
            if let Some(t) = self.gen(&mut scope, goal, target) {
                let mut full = ctx.clone();
                for (x, ty) in self.extra.drain(..) {
                    full.gamma.insert(x, ty);
                }
                return Ok((t, full));
            }
        }
        Err(GenError::GenerationStuck { goal: goal.clone(), budget, attempts })
    }

    /// A random typed judgement with a goal from the pool and a context
    /// from the scheme.
    pub fn judgement(&mut self, cfg: &GenConfig, contexts: &[Contexts]) -> Result<Judgement, GenError> {
        let mut last = None;
        for _ in 0..ATTEMPTS {
            let ctx = contexts.choose(&mut self.rng).expect("nonempty scheme").clone();
            let goal = cfg.type_pool.choose(&mut self.rng).expect("nonempty pool").clone();
            // an unprovable goal is cheaper to redraw than to retry
            match self.term_with_attempts(&ctx, &goal, cfg.sample_max_size, 4) {
                Ok((t, ctx)) => {
                    return Ok(judge(&ctx, &t).expect("sampled terms are well-typed"));
                }
                Err(e) => last = Some(e),
            }
        }
        Err(last.expect("at least one attempt"))
    }

    fn hypothesis(&mut self, scope: &mut Scope, goal: &Type) -> Term {
        let name = format!("h{}", self.fresh);
        self.fresh += 1;
        scope.gamma.push((name.clone(), goal.clone()));
        self.extra.push((name.clone(), goal.clone()));
        Term::var(name)
    }

    fn gen(&mut self, scope: &mut Scope, goal: &Type, budget: usize) -> Option<Term> {
        if budget == 0 || self.work == 0 {
            return None;
        }
        self.work -= 1;
        let vars: Vec<String> = scope.gamma.iter().filter(|(_, t)| t == goal).map(|(x, _)| x.clone()).collect();
        let shortcut = if budget <= 2 { 0.7 } else { 0.05 };
        if budget == 1 || (!vars.is_empty() && self.rng.gen_bool(shortcut)) {
            if let Some(x) = vars.choose(&mut self.rng) {
                return Some(Term::var(x.clone()));
            }
            if self.open && budget == 1 {
                return Some(self.hypothesis(scope, goal));
            }
            if budget == 1 {
                return None;
            }
        }
        let mut rules: Vec<u8> = Vec::new();
        // 0 intro, 1 ->e, 2 /\e, 3 \/e, 4 mu, 5 named
        if !goal.is_atomic() {
            rules.extend([0, 0, 0]);
        }
        if budget >= 3 {
            rules.extend([1, 1, 2]);
            rules.push(4);
        }
        if budget >= 4 {
            rules.push(3);
        }
        if *goal == Type::Bottom && !scope.delta.is_empty() {
            rules.extend([5, 5]);
        }
        rules.shuffle(&mut self.rng);
        rules.dedup();
        for rule in rules {
            if self.work == 0 {
                return None;
            }
            if let Some(t) = self.apply_rule(rule, scope, goal, budget) {
                return Some(t);
            }
        }
        // every rule failed: fall back to a hypothesis of the right type
        vars.choose(&mut self.rng).map(|x| Term::var(x.clone()))
    }

    fn apply_rule(&mut self, rule: u8, scope: &mut Scope, goal: &Type, budget: usize) -> Option<Term> {
        match rule {
            0 => self.intro(scope, goal, budget),
            1 => {
                let a = self.cut_types.choose(&mut self.rng)?.clone();
                let (hb, ab) = self.split(budget - 1);
                let h = self.gen(scope, &Type::arrow(a.clone(), goal.clone()), hb)?;
                let v = self.gen(scope, &a, ab)?;
                Some(Term::apply(h, v))
            }
            2 => {
                let other = self.cut_types.choose(&mut self.rng)?.clone();
                let left = self.rng.gen_bool(0.5);
                let pair_ty = if left { Type::and(goal.clone(), other) } else { Type::and(other, goal.clone()) };
                let h = self.gen(scope, &pair_ty, budget - 2)?;
                Some(Term::app(h, if left { ETerm::Proj1 } else { ETerm::Proj2 }))
            }
            3 => {
                let a = self.cut_types.choose(&mut self.rng)?.clone();
                let b = self.cut_types.choose(&mut self.rng)?.clone();
                let rest = budget - 1;
                let hb = self.rng.gen_range(1..=rest - 2);
                let lb = self.rng.gen_range(1..=rest - hb - 1);
                let rb = rest - hb - lb;
                let h = self.gen(scope, &Type::or(a.clone(), b.clone()), hb)?;
                let name = scope.lambda_name();
                let u = self.gen(&mut scope.bind(&a), goal, lb)?;
                let v = self.gen(&mut scope.bind(&b), goal, rb)?;
                Some(Term::app(
                    h,
                    ETerm::Case { ann: goal.clone(), left_var: name.clone(), left: u, right_var: name, right: v },
                ))
            }
            4 => {
                let mut inner = scope.bind_mu(goal);
                let name = scope.mu_name();
                let body = self.gen(&mut inner, &Type::Bottom, budget - 1)?;
                Some(Term::mu(name, goal.clone(), body))
            }
            _ => {
                let (c, ct) = scope.delta.choose(&mut self.rng)?.clone();
                let body = self.gen(scope, &ct, budget - 1)?;
                Some(Term::named(c, body))
            }
        }
    }

    fn intro(&mut self, scope: &mut Scope, goal: &Type, budget: usize) -> Option<Term> {
        match goal {
            Type::Arrow(a, b) => {
                let name = scope.lambda_name();
                let body = self.gen(&mut scope.bind(a), b, budget - 1)?;
                Some(Term::lam(name, (**a).clone(), body))
            }
            Type::And(a, b) => {
                if budget < 3 {
                    return None;
                }
                let (ab, bb) = self.split(budget - 1);
                let u = self.gen(scope, a, ab)?;
                let v = self.gen(scope, b, bb)?;
                Some(Term::pair(u, v))
            }
            Type::Or(a, b) => {
                if self.rng.gen_bool(0.5) {
                    Some(Term::inl((**b).clone(), self.gen(scope, a, budget - 1)?))
                } else {
                    Some(Term::inr((**a).clone(), self.gen(scope, b, budget - 1)?))
                }
            }
            Type::Var(_) | Type::Bottom => None,
        }
    }

    fn split(&mut self, total: usize) -> (usize, usize) {
        if total < 2 {
            return (total, 0);
        }
        let k = self.rng.gen_range(1..total);
        (k, total - k)
    }

    /// A well-typed sequence of eliminations for `ty` with at most `len`
    /// elements, and the type it produces. Only the last element may be a
    /// case, so the sequence is nice; with `allow_case` false it is good.
    pub fn elim_seq(
        &mut self,
        ctx: &Contexts,
        ty: &Type,
        len: usize,
        budget: usize,
        allow_case: bool,
    ) -> Result<(Seq, Type, Contexts), GenError> {
        let mut ctx = ctx.clone();
        let mut cur = ty.clone();
        let mut items = Vec::new();
        for i in 0..len {
            let last = i + 1 == len;
            let e = match &cur {
                Type::Arrow(a, _) => {
                    let (v, c) = self.term_in(&ctx, a, budget)?;
                    ctx = c;
                    ETerm::Arg(v)
                }
                Type::And(..) => {
                    if self.rng.gen_bool(0.5) {
                        ETerm::Proj1
                    } else {
                        ETerm::Proj2
                    }
                }
                Type::Or(a, b) if allow_case && last => {
                    let res = self.cut_types.choose(&mut self.rng).expect("nonempty").clone();
                    let name = fresh_binder(&ctx);
                    let (u, c) = self.term_in(&ctx.clone().with_var(name.clone(), (**a).clone()), &res, budget)?;
                    let (v, c2) = self.term_in(&c.clone().with_var(name.clone(), (**b).clone()), &res, budget)?;
                    ctx = strip(c2, &name, &ctx);
                    ETerm::Case { ann: res, left_var: name.clone(), left: u, right_var: name, right: v }
                }
                _ => break,
            };
            cur = crate::typing::elim_type(&cur, &e).expect("built to match");
            items.push(e);
        }
        Ok((Seq(items), cur, ctx))
    }
}

fn fresh_binder(ctx: &Contexts) -> String {
    (0..).map(|i| format!("w{i}")).find(|n| !ctx.gamma.contains_key(n)).expect("infinite supply")
}

/// Drops the branch binder again, keeping any hypotheses added meanwhile.
fn strip(mut ctx: Contexts, binder: &str, before: &Contexts) -> Contexts {
    match before.gamma.get(binder) {
        Some(t) => {
            ctx.gamma.insert(binder.to_string(), t.clone());
        }
        None => {
            ctx.gamma.remove(binder);
        }
    }
    ctx
}

/// Samples `cfg.sample_count` judgements, reproducibly from `cfg.seed`.
pub fn sample_typed(cfg: &GenConfig) -> Result<Vec<Judgement>, GenError> {
    let contexts = context_scheme(&cfg.type_pool);
    let mut sampler = Sampler::new(cfg.seed, &cfg.type_pool);
    (0..cfg.sample_count).map(|_| sampler.judgement(cfg, &contexts)).collect()
}
