mod support;

use std::collections::HashSet;

use proptest::prelude::*;

use lambdamu_core::harness::{context_scheme, default_type_pool, GenConfig, Sampler};
use lambdamu_core::reduction::reducts;
use lambdamu_core::syntax::{
    alpha_eq, canonical, parse_term, parse_type, struct_subst_seq, subst, ETerm, FreeNames, Seq, Term, Type,
};
use lambdamu_core::typing::{check, infer, Contexts, Judgement};

use support::naive::naive_type;

fn arb_type() -> impl Strategy<Value = Type> + Clone {
    let leaf = prop_oneof![Just(Type::var("P")), Just(Type::var("Q")), Just(Type::var("R")), Just(Type::Bottom)];
    leaf.prop_recursive(3, 12, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Type::arrow(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Type::and(a, b)),
            (inner.clone(), inner).prop_map(|(a, b)| Type::or(a, b)),
        ]
    })
}

fn lam_name() -> impl Strategy<Value = String> + Clone {
    prop_oneof![Just("x"), Just("y"), Just("z")].prop_map(String::from)
}

fn mu_name() -> impl Strategy<Value = String> + Clone {
    prop_oneof![Just("a"), Just("b")].prop_map(String::from)
}

/// Untyped, possibly ill-typed terms.
fn arb_term() -> impl Strategy<Value = Term> {
    lam_name().prop_map(Term::var).prop_recursive(4, 24, 3, |inner| {
        prop_oneof![
            (lam_name(), arb_type(), inner.clone()).prop_map(|(x, a, t)| Term::lam(x, a, t)),
            (inner.clone(), arb_eterm(inner.clone())).prop_map(|(t, e)| Term::app(t, e)),
            (inner.clone(), inner.clone()).prop_map(|(t, u)| Term::pair(t, u)),
            (arb_type(), inner.clone()).prop_map(|(b, t)| Term::inl(b, t)),
            (arb_type(), inner.clone()).prop_map(|(a, t)| Term::inr(a, t)),
            (mu_name(), arb_type(), inner.clone()).prop_map(|(a, ty, t)| Term::mu(a, ty, t)),
            (mu_name(), inner).prop_map(|(a, t)| Term::named(a, t)),
        ]
    })
}

fn arb_eterm(term: impl Strategy<Value = Term> + Clone) -> impl Strategy<Value = ETerm> {
    prop_oneof![
        3 => term.clone().prop_map(ETerm::Arg),
        1 => Just(ETerm::Proj1),
        1 => Just(ETerm::Proj2),
        1 => (arb_type(), lam_name(), term.clone(), lam_name(), term).prop_map(|(ann, lv, l, rv, r)| ETerm::Case {
            ann,
            left_var: lv,
            left: l,
            right_var: rv,
            right: r,
        }),
    ]
}

fn arb_seq(good: bool) -> impl Strategy<Value = Seq> {
    let leaf = lam_name().prop_map(Term::var);
    let e = arb_eterm(leaf);
    prop::collection::vec(e, 0..4).prop_map(move |v| {
        let v = if good { v.into_iter().filter(|w| !w.is_case()).collect() } else { v };
        Seq(v)
    })
}

fn sampled(seed: u64) -> Judgement {
    let cfg = GenConfig { sample_max_size: 12, ..GenConfig::default() };
    let scheme = context_scheme(&cfg.type_pool);
    Sampler::new(seed, &cfg.type_pool).judgement(&cfg, &scheme).expect("pool goals are inhabited somewhere")
}

fn as_list(m: &std::collections::BTreeMap<String, Type>) -> Vec<(String, Type)> {
    m.iter().map(|(k, v)| (k.clone(), v.clone())).collect()
}

fn arb_ctx() -> impl Strategy<Value = Contexts> {
    (
        prop::collection::btree_map(lam_name(), arb_type(), 0..3),
        prop::collection::btree_map(mu_name(), arb_type(), 0..2),
    )
        .prop_map(|(gamma, delta)| Contexts { gamma, delta })
}

proptest! {
    #[test]
    fn printed_types_parse_back(a in arb_type()) {
        prop_assert_eq!(parse_type(&a.to_string()).unwrap(), a);
    }

    #[test]
    fn printed_terms_parse_back(t in arb_term()) {
        prop_assert_eq!(parse_term(&t.to_string()).unwrap(), t);
    }

    #[test]
    fn canonical_form_is_alpha_equal_and_idempotent(t in arb_term()) {
        let c = canonical(&t);
        prop_assert!(alpha_eq(&t, &c));
        prop_assert_eq!(canonical(&c), c);
    }

    #[test]
    fn substitution_adds_only_free_names_of_the_argument(t in arb_term(), x in lam_name(), v in arb_term()) {
        let out = FreeNames::of_term(&subst(&t, &x, &v));
        let before = FreeNames::of_term(&t);
        let arg = FreeNames::of_term(&v);
        let mut allowed: HashSet<String> = before.lambda.iter().filter(|y| **y != x).cloned().collect();
        if before.lambda.contains(&x) {
            allowed.extend(arg.lambda.iter().cloned());
        }
        prop_assert!(out.lambda.is_subset(&allowed), "{:?} not within {:?}", out.lambda, allowed);
        let mut allowed_mu = before.mu.clone();
        allowed_mu.extend(arg.mu.iter().cloned());
        prop_assert!(out.mu.is_subset(&allowed_mu));
    }

    #[test]
    fn substituting_an_absent_name_changes_nothing(t in arb_term(), v in arb_term()) {
        prop_assert!(alpha_eq(&subst(&t, "w", &v), &t));
    }

    #[test]
    fn structural_substitution_composes(t in arb_term(), a in mu_name(), w1 in arb_seq(true), w2 in arb_seq(false)) {
        prop_assume!(!FreeNames::of_seq(&w1).mu.contains(&a));
        let mut both = w1.0.clone();
        both.extend(w2.0.iter().cloned());
        let stepwise = struct_subst_seq(&struct_subst_seq(&t, &a, &w1), &a, &w2);
        let at_once = struct_subst_seq(&t, &a, &Seq(both));
        prop_assert!(alpha_eq(&stepwise, &at_once), "{} vs {}", stepwise, at_once);
    }

    #[test]
    fn good_sequences_are_nice(w in arb_seq(false)) {
        if w.is_good() {
            prop_assert!(w.is_nice());
        }
    }

    #[test]
    fn checker_agrees_with_naive_oracle(ctx in arb_ctx(), t in arb_term()) {
        let fast = infer(&ctx, &t).ok();
        let slow = naive_type(&as_list(&ctx.gamma), &as_list(&ctx.delta), &t);
        prop_assert_eq!(fast, slow);
    }

    #[test]
    fn checker_agrees_with_naive_oracle_on_typed_terms(seed in any::<u64>()) {
        let j = sampled(seed);
        let slow = naive_type(&as_list(&j.ctx().gamma), &as_list(&j.ctx().delta), j.term());
        prop_assert_eq!(slow.as_ref(), Some(j.ty()));
    }

    #[test]
    fn weakening_preserves_typing(seed in any::<u64>(), extra in arb_type()) {
        let j = sampled(seed);
        let fv = FreeNames::of_term(j.term());
        let ctx = j.ctx().clone().with_var("fresh", extra.clone()).with_mu("cont", extra);
        prop_assume!(!fv.lambda.contains("fresh") && !fv.mu.contains("cont"));
        prop_assert!(check(&ctx, j.term(), j.ty()).is_ok());
    }

    #[test]
    fn substitution_preserves_typing(seed in any::<u64>(), pick in any::<prop::sample::Index>()) {
        let j = sampled(seed);
        let vars: Vec<(String, Type)> = as_list(&j.ctx().gamma);
        prop_assume!(!vars.is_empty());
        let (x, b) = vars[pick.index(vars.len())].clone();
        let mut rest = j.ctx().clone();
        rest.gamma.remove(&x);
        let mut s = Sampler::new(seed ^ 1, &default_type_pool()).open();
        let (v, vctx) = s.term_in(&rest, &b, 6).unwrap();
        let mut ctx = j.ctx().clone();
        ctx.gamma.extend(vctx.gamma.into_iter().filter(|(k, _)| *k != x));
        let out = subst(j.term(), &x, &v);
        prop_assert!(check(&ctx, &out, j.ty()).is_ok(), "{} |- {} : {}", ctx, out, j.ty());
    }

    #[test]
    fn reducts_keep_their_type(seed in any::<u64>()) {
        let j = sampled(seed);
        for r in reducts(j.term()) {
            prop_assert!(check(j.ctx(), &r, j.ty()).is_ok(), "{} reduced to {}", j.term(), r);
        }
    }
}
