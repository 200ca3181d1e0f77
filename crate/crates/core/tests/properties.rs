use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use proptest::prelude::*;

use hypdiv::curves_genus0::{pair, rigid_reduce, BCurve};
use hypdiv::exact::{MPoly, Rat};
use hypdiv::pic_genus0::{
    canonical_symmetrized, effective_decomposition, k_plus_half_branch, keel_trivial_class, substitute_delta20, Variant,
};
use hypdiv::reidtai::{classify, cover_total_age, enumerate_actions, qr_clause, CoverAutGraph};

fn rat() -> impl Strategy<Value = Rat> {
    (-30i64..30, 1i64..12).prop_map(|(a, b)| Rat::new(a, b))
}

fn mpoly() -> impl Strategy<Value = MPoly> {
    let term = (rat(), 0u32..3, 0u32..3, 0u32..2);
    prop::collection::vec(term, 0..5).prop_map(|ts| {
        MPoly::from_terms(ts.into_iter().map(|(c, a, b, e)| (c, vec![("x", a), ("y", b), ("z", e)])))
    })
}

fn point(x: &Rat, y: &Rat, z: &Rat) -> BTreeMap<String, Rat> {
    [("x", x), ("y", y), ("z", z)].into_iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
}

proptest! {
    #[test]
    fn rat_is_normalized(a in -1000i64..1000, b in -1000i64..1000) {
        prop_assume!(b != 0);
        let r = Rat::new(a, b);
        prop_assert!(r.denom() > &BigInt::from(0));
        prop_assert_eq!(r.numer().gcd(r.denom()), if a == 0 { r.denom().clone() } else { BigInt::from(1) });
    }

    #[test]
    fn rat_field_axioms(a in rat(), b in rat(), c in rat()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a - &a, Rat::zero());
        if let Some(inv) = a.recip() {
            prop_assert_eq!(&a * &inv, Rat::one());
        } else {
            prop_assert!(a.is_zero());
        }
    }

    #[test]
    fn mpoly_ring_laws(p in mpoly(), q in mpoly(), r in mpoly()) {
        prop_assert_eq!(&p + &q, &q + &p);
        prop_assert_eq!(&p * &q, &q * &p);
        prop_assert_eq!(&(&p * &q) * &r, &p * &(&q * &r));
        prop_assert_eq!(&p * &(&q + &r), &(&p * &q) + &(&p * &r));
        prop_assert!((&p - &p).is_zero());
    }

    #[test]
    fn mpoly_eval_is_multiplicative(p in mpoly(), q in mpoly(), x in rat(), y in rat(), z in rat()) {
        let pt = point(&x, &y, &z);
        let lhs = (&p * &q).eval(&pt).unwrap();
        prop_assert_eq!(lhs, p.eval(&pt).unwrap() * q.eval(&pt).unwrap());
    }

    #[test]
    fn substitute_then_eval(p in mpoly(), sx in mpoly(), sy in mpoly(), x in rat(), y in rat(), z in rat()) {
        let pt = point(&x, &y, &z);
        let assignments: BTreeMap<String, MPoly> = [("x".to_string(), sx.clone()), ("y".to_string(), sy.clone())].into();
        let lhs = p.substitute(&assignments).eval(&pt).unwrap();
        let inner = point(&sx.eval(&pt).unwrap(), &sy.eval(&pt).unwrap(), &z);
        prop_assert_eq!(lhs, p.eval(&inner).unwrap());
    }

    #[test]
    fn keel_substitution_preserves_pairings(g in 2u32..4, n in 2u32..7, t in rat()) {
        let c = k_plus_half_branch(g, n, Variant::Unordered).unwrap();
        let s = substitute_delta20(&c, &t).unwrap();
        for b in BCurve::representatives(g, n).unwrap() {
            prop_assert_eq!(pair(&b, &c).unwrap(), pair(&b, &s).unwrap(), "{}", b);
        }
    }

    #[test]
    fn pairing_is_linear(g in 2u32..4, n in 2u32..6, a in rat(), b in rat()) {
        let d1 = canonical_symmetrized(g, n).unwrap();
        let d2 = k_plus_half_branch(g, n, Variant::OrderedComposed).unwrap();
        let combo = d1.scaled(&a).plus(&d2.scaled(&b)).unwrap();
        for curve in BCurve::representatives(g, n).unwrap() {
            let lhs = pair(&curve, &combo).unwrap();
            let rhs = &a * &pair(&curve, &d1).unwrap() + &b * &pair(&curve, &d2).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn keel_class_is_numerically_trivial(g in 2u32..5, n in 2u32..8, a in rat()) {
        let k = keel_trivial_class(g, n).unwrap().scaled(&a);
        for curve in BCurve::representatives(g, n).unwrap() {
            prop_assert!(pair(&curve, &k).unwrap().is_zero());
        }
    }
}

#[test]
fn rigid_reduce_is_idempotent() {
    for g in 2..=4u32 {
        for n in [4 * g + 6, 4 * g + 7] {
            let dec = effective_decomposition(g, n, Variant::Unordered, None).unwrap();
            let (once, _) = rigid_reduce(&dec.class).unwrap();
            let (twice, log) = rigid_reduce(&once).unwrap();
            assert_eq!(once, twice);
            assert!(log.is_empty());
            for b in BCurve::representatives(g, n).unwrap() {
                assert!(!pair(&b, &once).unwrap().is_negative(), "{b} at ({g},{n})");
            }
        }
    }
}

#[test]
fn quasi_reflection_iff_clause() {
    for a in enumerate_actions(6, 12) {
        let c = classify(&a);
        assert_eq!(c.is_quasi_reflection, qr_clause(&a).is_some(), "{a:?}");
    }
}

fn fixture(name: &str) -> serde_json::Value {
    let p = format!("{}/tests/fixtures/graphs/{name}.json", env!("CARGO_MANIFEST_DIR"));
    serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap()
}

/// Disjoint union of two graphs; node ids of the second one get a prefix.
fn union(a: &serde_json::Value, b: &serde_json::Value) -> serde_json::Value {
    let mut b = b.clone();
    for c in b["components"].as_array_mut().unwrap() {
        if let Some(ns) = c.get_mut("nodes").and_then(|v| v.as_array_mut()) {
            for n in ns {
                *n = serde_json::Value::String(format!("b_{}", n.as_str().unwrap()));
            }
        }
        if let Some(w) = c.get("swapped_with").and_then(|v| v.as_str()).map(|s| format!("b_{s}")) {
            c["swapped_with"] = serde_json::Value::String(w);
        }
        if let Some(name) = c.get("name").and_then(|v| v.as_str()).map(|s| format!("b_{s}")) {
            c["name"] = serde_json::Value::String(name);
        }
    }
    if let Some(nodes) = b.get_mut("nodes").and_then(|v| v.as_array_mut()) {
        for n in nodes {
            n["id"] = serde_json::Value::String(format!("b_{}", n["id"].as_str().unwrap()));
            if let Some(p) = n.get("partner").and_then(|v| v.as_str()).map(|s| format!("b_{s}")) {
                n["partner"] = serde_json::Value::String(p);
            }
        }
    }
    let mut out = a.clone();
    out["components"].as_array_mut().unwrap().extend(b["components"].as_array().unwrap().iter().cloned());
    let mut nodes = a.get("nodes").and_then(|v| v.as_array()).cloned().unwrap_or_default();
    nodes.extend(b.get("nodes").and_then(|v| v.as_array()).cloned().unwrap_or_default());
    out["nodes"] = serde_json::Value::Array(nodes);
    out
}

#[test]
fn cover_age_is_additive_over_disjoint_parts() {
    let names = ["elliptic_tail_j0", "smooth_order3", "smooth_order6", "swapped_tails", "fixed_nodes_rotation", "identity"];
    let age = |v: &serde_json::Value| cover_total_age(&CoverAutGraph::from_json(&v.to_string()).unwrap()).unwrap();
    for a in names {
        for b in names {
            let (va, vb) = (fixture(a), fixture(b));
            if va.get("rest_marks").is_some() || vb.get("rest_marks").is_some() {
                continue;
            }
            assert_eq!(age(&union(&va, &vb)), age(&va) + age(&vb), "{a} + {b}");
        }
    }
}

#[test]
fn cone_sign_thresholds() {
    use hypdiv::hyp_pic::{dk_class, ek_class, ft_pair};
    for g in 2..=6u32 {
        let kmax = 10 * g as i64;
        let d_neg = (2..=kmax).any(|k| ft_pair(&dk_class(g, k).unwrap(), &Rat::one()).unwrap().is_negative());
        let e_neg = (2..=kmax).any(|k| ft_pair(&ek_class(g, k).unwrap(), &Rat::int(-1)).unwrap().is_negative());
        assert!(d_neg && e_neg, "g={g}");
    }
}
