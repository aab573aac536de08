
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use proptest::prelude::*;

use super::*;
use crate::diagram::Signature;
use crate::parser::{parse_raw_term, parse_type, resolve_in_scope};
use crate::syntax::{LabelContext, Name, Term, Type, VarContext};
use crate::typeck::{check, TypingDerivation};
use categorical::Cat;

fn ty(s: &str) -> Type {
    parse_type(s).unwrap()
}

fn term_in(src: &str, gamma: &[(&str, &str)]) -> Term {
    let names: Vec<Name> = gamma.iter().map(|(x, _)| Name::new(x)).collect();
    let raw = parse_raw_term(src).unwrap();
    resolve_in_scope(&raw, &Signature::empty(), src, &names).unwrap()
}

fn derive(src: &str, gamma: &[(&str, &str)], a: &str) -> TypingDerivation {
    let g = VarContext::from_pairs(gamma.iter().map(|(x, t)| (Name::new(x), ty(t)))).unwrap();
    check(&Signature::empty(), &g, &LabelContext::new(), &term_in(src, gamma), &ty(a)).unwrap()
}

fn point(o: &Oracle, src: &str, a: &str) -> String {
    let d = derive(src, &[], a);
    o.denote_type(&d.ty).unwrap().describe(o.denote_closed(&d).unwrap())
}

#[test]
fn carrier_sizes() {
    let o = Oracle::new();
    let size = |s: &str| o.denote_type(&ty(s)).unwrap().size();
    assert_eq!(size("0"), 1);
    assert_eq!(size("I"), 2);
    assert_eq!(size("I + I"), 3);
    assert_eq!(size("I + I -o I + I"), 9);
    assert_eq!(size("I * I"), 2);
    assert_eq!(size("(I + I) * (I + I)"), 5);
    assert_eq!(size("!I"), 3);
    assert_eq!(size("!0"), 2);
    assert_eq!(size("I -o I"), 2);
    assert_eq!(size("!I -o I"), 3);
}

/// Brute force over all functions, not just the enumerated ones.
fn count_strict_monotone(a: &Domain, b: &Domain) -> usize {
    let n = a.size();
    let m = b.size() as u32;
    let mut count = 0;
    let total = (m as usize).pow(n as u32);
    for code in 0..total {
        let mut c = code;
        let table: Vec<Elem> = (0..n)
            .map(|_| {
                let v = (c % m as usize) as Elem;
                c /= m as usize;
                v
            })
            .collect();
        let ok = table[0] == BOTTOM
            && a.elements().all(|x| a.elements().all(|y| !a.leq(x, y) || b.leq(table[x as usize], table[y as usize])));
        if ok {
            count += 1;
        }
    }
    count
}

/// Types over `0` and `I` of depth at most 3 whose carriers have at most
/// `max` elements, up to the order on their encodings. Sizes are computed before anything is materialized.
fn small_types(max: usize) -> Vec<Type> {
    let o = Oracle::new();
    let mut out: Vec<(Type, usize)> = vec![(Type::Zero, 1), (Type::Unit, 2)];
    for _ in 0..3 {
        let cur = out.clone();
        for (a, na) in &cur {
            out.push((Type::bang(a.clone()), na + 1));
            for (b, nb) in &cur {
                out.push((Type::sum(a.clone(), b.clone()), na + nb - 1));
                out.push((Type::tensor(a.clone(), b.clone()), 1 + (na - 1) * (nb - 1)));
                if (*nb as u64).saturating_pow(*na as u32 - 1) <= 64 * max as u64 {
                    let f = Type::lolli(a.clone(), b.clone());
                    let n = o.denote_type(&f).unwrap().size();
                    out.push((f, n));
                }
            }
        }
        out.retain(|(t, n)| *n <= max && t.depth() <= 3);
        out.sort();
        out.dedup();
    }
    // Tables of structure maps only depend on the encoded order, so one
    // representative per order matrix suffices; the shallowest is kept.
    out.sort_by_key(|(t, _)| (t.depth(), alloc::format!("{t}").len()));
    let mut seen = Vec::new();
    let mut reps = Vec::new();
    for (t, _) in out {
        let p = o.denote_type(&t).unwrap().poset();
        if !seen.contains(&p) {
            seen.push(p);
            reps.push(t);
        }
    }
    reps
}

#[test]
fn domains_are_pointed_posets_in_linear_extension_order() {
    let o = Oracle::new();
    for t in small_types(9) {
        let d = o.denote_type(&t).unwrap();
        d.poset().validate().unwrap_or_else(|e| panic!("{t}: {e}"));
        for x in d.elements() {
            for y in d.elements() {
                if d.leq(x, y) {
                    assert!(x <= y, "{t}: index order is not a linear extension");
                }
            }
        }
    }
}

#[test]
fn function_spaces_match_brute_force() {
    let o = Oracle::new();
    let ts = small_types(4);
    for a in &ts {
        for b in &ts {
            let (da, db) = (o.denote_type(a).unwrap(), o.denote_type(b).unwrap());
            let f = o.fun_domain(&da, &db).unwrap();
            assert_eq!(f.size(), count_strict_monotone(&da, &db), "{a} -o {b}");
        }
    }
}

#[test]
fn bang_keeps_the_order_of_its_argument() {
    let o = Oracle::new();
    let d = o.denote_type(&ty("!I")).unwrap();
    assert!(d.leq(d.up(0), d.up(1)));
    assert!(!d.leq(d.up(1), d.up(0)));
    let b = o.denote_type(&ty("!(I + I)")).unwrap();
    assert!(!b.leq(b.up(1), b.up(2)));
}

#[test]
fn carrier_guard() {
    let o = Oracle::new();
    let big = ty("(I + I + I + I) -o (I + I + I + I) -o (I + I + I + I)");
    assert!(matches!(o.denote_type(&big), Err(OracleError::CarrierTooLarge(_))));
    assert!(matches!(o.denote_type(&ty("Diag(qubit, qubit)")), Err(OracleError::Unsupported(_))));
}

#[test]
fn strict_map_validation() {
    let o = Oracle::new();
    let b = o.denote_type(&Type::bool()).unwrap();
    let i = o.unit_domain();
    assert!(StrictMap::new(b.clone(), i.clone(), vec![1, 1, 1]).is_err());
    assert!(StrictMap::new(b.clone(), i.clone(), vec![0, 1]).is_err());
    assert!(StrictMap::new(b.clone(), i.clone(), vec![0, 1, 0]).is_ok());
    let bang = o.denote_type(&ty("!I")).unwrap();
    assert!(StrictMap::new(bang, i, vec![0, 1, 0]).is_err());
}

#[test]
fn spec_examples() {
    let o = Oracle::new();
    assert_eq!(point(&o, "*", "I"), "*");
    assert_eq!(point(&o, "rec x:!I. force x", "I"), "bot");
    assert_eq!(point(&o, "force (lift *)", "I"), "*");
    assert_eq!(point(&o, "lift (rec x:!I. force x)", "!I"), "up bot");
    assert_eq!(point(&o, "(\\x:I. x) *", "I"), "*");
    assert_eq!(point(&o, "case left[I, I] * of { left x -> x | right y -> y }", "I"), "*");
    assert_eq!(point(&o, "\\b:I + I. b", "I + I -o I + I"), "{inl * => inl *, inr * => inr *}");
}

#[test]
fn open_terms_denote_maps_from_the_smash_of_the_context() {
    let o = Oracle::new();
    let d = derive("<y, x>", &[("x", "I + I"), ("y", "!I")], "!I * (I + I)");
    let m = o.denote_term(&d).unwrap();
    assert_eq!(m.dom().size(), 1 + 2 * 2);
    assert_eq!(m.at(0), 0);
    assert!(m.table()[1..].iter().all(|&v| v != 0));
}

const RECURSIVE: [(&str, &str); 6] = [
    ("rec x:!I. force x", "I"),
    ("rec x:!(I + I). right[I, I] *", "I + I"),
    ("rec f:!(I + I -o I). \\b:I + I. case b of { left u -> u | right v -> v; force f (left[I, I] *) }", "I + I -o I"),
    ("rec f:!(I -o I). \\a:I. force f a", "I -o I"),
    ("rec p:!(I * I). let <a, b> = force p in <b, a>", "I * I"),
    ("rec q:!(!I). lift (force (force q))", "!I"),
];

#[test]
fn recursion_examples() {
    let o = Oracle::new();
    let got: Vec<String> = RECURSIVE.iter().map(|(m, a)| point(&o, m, a)).collect();
    assert_eq!(got, ["bot", "inr *", "{inl * => *, inr * => *}", "bot", "bot", "up bot"]);
}

#[test]
fn linear_fixpoint_on_examples() {
    let o = Oracle::new();
    for (m, a) in RECURSIVE {
        assert!(check_linear_fixpoint(&o, &derive(m, &[], a)).unwrap(), "{m}");
    }
    let open = derive("rec f:!(I + I). case w of { left u -> force f | right v -> left[I, I] v }", &[("w", "I + I")], "I + I");
    assert!(check_linear_fixpoint(&o, &open).unwrap());
}

#[test]
fn soundness_examples() {
    let o = Oracle::new();
    let cases = [
        ("(\\x:I. x) *", "I"),
        ("case left[I, I] * of { left x -> x | right y -> y }", "I"),
        ("(rec f:!(I + I -o I). \\b:I + I. case b of { left u -> u | right v -> v; force f (left[I, I] *) }) (right[I, I] *)", "I"),
        ("let <a, b> = <lift *, right[I, I] *> in <b, a>", "(I + I) * !I"),
    ];
    for (m, a) in cases {
        let v = check_soundness(&o, &term_in(m, &[]), &ty(a), 10_000).unwrap();
        assert!(v.passed(), "{m}: {v:?}");
    }
    let v = check_soundness(&o, &term_in("rec x:!I. force x", &[]), &Type::Unit, 1_000).unwrap();
    assert_eq!(v, Soundness::Inconclusive);
}

#[test]
fn adequacy_examples() {
    let o = Oracle::new();
    let v = check_adequacy(&o, &term_in("lift (rec x:!I. force x)", &[]), &ty("!I"), 1_000).unwrap();
    assert!(matches!(v, Adequacy::Pass { .. }));
    let v = check_adequacy(&o, &term_in("force (lift (rec x:!(I + I). force x))", &[]), &ty("I + I"), 1_000).unwrap();
    assert_eq!(v, Adequacy::PassPresumedDivergent);
    let lin = check_adequacy(&o, &term_in("\\x:I. x", &[]), &ty("I -o I"), 1_000);
    assert!(matches!(lin, Err(OracleError::NotIntuitionistic(_))));
}

fn is_intuitionistic_morphism(f: &StrictMap) -> bool {
    f.table().iter().enumerate().all(|(x, &y)| x == 0 || y != BOTTOM)
}

#[test]
fn weak_pointedness() {
    let o = Oracle::new();
    let ts = small_types(4);
    let doms: Vec<Arc<Domain>> = ts.iter().map(|t| o.denote_type(t).unwrap()).collect();
    for a in &doms {
        for b in &doms {
            for f in o.all_maps(a, b).unwrap() {
                for c in &doms {
                    let bot_ca = StrictMap::bottom(c, a);
                    assert_eq!(StrictMap::compose(&f, &bot_ca).unwrap(), StrictMap::bottom(c, b));
                    let bot_bc = StrictMap::bottom(b, c);
                    assert_eq!(StrictMap::compose(&bot_bc, &f).unwrap(), StrictMap::bottom(a, c));
                    let z = StrictMap::bottom(c, c);
                    let ca = o.tensor_domain(a, c).unwrap();
                    let cb = o.tensor_domain(b, c).unwrap();
                    assert_eq!(o.tensor_map(&f, &z).unwrap(), StrictMap::bottom(&ca, &cb));
                    let ac = o.tensor_domain(c, a).unwrap();
                    let bc = o.tensor_domain(c, b).unwrap();
                    assert_eq!(o.tensor_map(&z, &f).unwrap(), StrictMap::bottom(&ac, &bc));
                }
            }
        }
    }
}

#[test]
fn structure_maps_are_natural_for_intuitionistic_morphisms() {
    let o = Oracle::new();
    let ts: Vec<Type> = small_types(4).into_iter().filter(Type::is_intuitionistic).collect();
    let mut checked = 0;
    let mut unnatural = 0;
    for p in &ts {
        for r in &ts {
            let (dp, dr) = (o.denote_type(p).unwrap(), o.denote_type(r).unwrap());
            for f in o.all_maps(&dp, &dr).unwrap() {
                let laws = f.then(&o.discard(&dr).unwrap()).unwrap() == o.discard(&dp).unwrap()
                    && f.then(&o.copy(&dr).unwrap()).unwrap()
                        == o.copy(&dp).unwrap().then(&o.tensor_map(&f, &f).unwrap()).unwrap()
                    && f.then(&o.lift(&dr).unwrap()).unwrap()
                        == o.lift(&dp).unwrap().then(&o.bang_map(&f).unwrap()).unwrap();
                if is_intuitionistic_morphism(&f) {
                    assert!(laws, "{p} -> {r}: {:?}", f.table());
                    checked += 1;
                } else if !laws {
                    unnatural += 1;
                }
            }
        }
    }
    assert!(checked > 50);
    // Maps that send a defined point to bottom are not natural.
    assert!(unnatural > 0);
}

#[test]
fn counit_splits_lift() {
    let o = Oracle::new();
    for t in small_types(4).into_iter().filter(Type::is_intuitionistic) {
        let d = o.denote_type(&t).unwrap();
        let round = o.lift(&d).unwrap().then(&o.counit(&d).unwrap()).unwrap();
        assert_eq!(round, StrictMap::identity(&d), "{t}");
    }
}

/// Context used for generated open terms; all intuitionistic.
const GAMMA: [(&str, &str); 3] = [("z", "I"), ("w", "I + I"), ("u", "!I")];

fn generated(tape: Vec<u8>, a: &str, depth: usize) -> Option<TypingDerivation> {
    let mut t = gen::Tape::new(tape);
    let mut ctx: Vec<(String, String)> = GAMMA.iter().map(|(x, a)| (String::from(*x), String::from(*a))).collect();
    let src = gen::term(&mut t, a, depth, &mut ctx);
    let raw = parse_raw_term(&src).unwrap_or_else(|e| panic!("{src}: {e}"));
    let names: Vec<Name> = GAMMA.iter().map(|(x, _)| Name::new(x)).collect();
    let m = resolve_in_scope(&raw, &Signature::empty(), &src, &names).unwrap();
    let g = VarContext::from_pairs(GAMMA.iter().map(|(x, t)| (Name::new(x), ty(t)))).unwrap();
    check(&Signature::empty(), &g, &LabelContext::new(), &m, &ty(a)).ok()
}

fn cat_ctx(d: &TypingDerivation) -> categorical::Ctx {
    d.gamma.iter().cloned().collect()
}

#[test]
fn generator_mostly_produces_well_typed_terms() {
    let mut ok = 0;
    for seed in 0..200u32 {
        let tape: Vec<u8> = (0..64).map(|i| (seed.wrapping_mul(2654435761).rotate_left(i) & 0xff) as u8).collect();
        if generated(tape, gen::TYPES[(seed % 5) as usize], 3).is_some() {
            ok += 1;
        }
    }
    assert!(ok > 150, "{ok}");
}

#[test]
fn derivation_irrelevance_on_handpicked_judgements() {
    let o = Oracle::new();
    let cases = [
        ("<z, z>", "I * I"),
        ("z; <lift z, z>", "!I * I"),
        ("case w of { left a -> <a, z> | right b -> <z, b> }", "I * I"),
        ("(\\a:I. <a, force u>) z", "I * I"),
        ("let v = force u in v; z; w", "I + I"),
    ];
    let gamma: Vec<(&str, &str)> = GAMMA.to_vec();
    for (m, a) in cases {
        let d = derive(m, &gamma, a);
        let mut cat = Cat::new(&o);
        let all = cat.interp(&cat_ctx(&d), &d.term, &d.tree).unwrap();
        assert_eq!(all.len(), 1, "{m}");
        assert!(cat.choice_points > 0, "{m} has a single derivation");
        assert_eq!(all[0], o.denote_term(&d).unwrap(), "{m}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    /// Every split of every judgement gives the same table, which is also
    /// what the elementwise denotation computes.
    #[test]
    fn derivation_irrelevance(tape in proptest::collection::vec(any::<u8>(), 48), k in 0usize..5) {
        let o = Oracle::new();
        if let Some(d) = generated(tape, gen::TYPES[k], 4) {
            let mut cat = Cat::new(&o);
            let all = cat.interp(&cat_ctx(&d), &d.term, &d.tree).unwrap();
            prop_assert_eq!(all.len(), 1, "{}", crate::parser::print_term(&d.term));
            prop_assert_eq!(&all[0], &o.denote_term(&d).unwrap());
        }
    }

    /// Closed generated terms: evaluation preserves the denotation and a
    /// defined denotation at an intuitionistic type means termination.
    #[test]
    fn soundness_and_adequacy_on_generated_terms(tape in proptest::collection::vec(any::<u8>(), 48), k in 0usize..5) {
        let o = Oracle::new();
        let mut t = gen::Tape::new(tape);
        let src = gen::term(&mut t, gen::TYPES[k], 4, &mut Vec::new());
        let m = term_in(&src, &[]);
        let a = ty(gen::TYPES[k]);
        if crate::typeck::infer(&Signature::empty(), &VarContext::new(), &LabelContext::new(), &m).is_ok()
            || check(&Signature::empty(), &VarContext::new(), &LabelContext::new(), &m, &a).is_ok()
        {
            let s = check_soundness(&o, &m, &a, 20_000).unwrap();
            prop_assert!(matches!(s, Soundness::Pass { .. } | Soundness::Inconclusive), "{}: {:?}", src, s);
            if a.is_intuitionistic() {
                let v = check_adequacy(&o, &m, &a, 20_000).unwrap();
                prop_assert!(v.passed(), "{}: {:?}", src, v);
            }
        }
    }

    #[test]
    fn linear_fixpoint_on_generated_rec_terms(tape in proptest::collection::vec(any::<u8>(), 48), k in 0usize..5) {
        let o = Oracle::new();
        let ty_s = gen::TYPES[k];
        let mut t = gen::Tape::new(tape);
        let body = gen::term(&mut t, ty_s, 3, &mut vec![(String::from("f"), alloc::format!("!({ty_s})"))]);
        let src = alloc::format!("rec f:!({ty_s}). {body}");
        let m = term_in(&src, &[]);
        if let Ok(d) = check(&Signature::empty(), &VarContext::new(), &LabelContext::new(), &m, &ty(ty_s)) {
            prop_assert!(check_linear_fixpoint(&o, &d).unwrap(), "{}", src);
        }
    }
}
