//! Acceptance criteria 1–8. Runs without the libtest harness so that every
//! criterion prints exactly one PASS/FAIL line; exits nonzero on any failure.

use std::collections::{BTreeSet, HashSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use pmoderate::census::{prop31_certificate, randomized_witness_from_z, sylow_cover_bound};
use pmoderate::classify::{classify_moderation, is_p_concealed, SearchOptions, Status, Strategy};
use pmoderate::sylow::{find_sylow, p_part, sylow_count};
use pmoderate::verify::{first_factor_lift, run_criterion, spot_suite};
use pmoderate::zoo::named_group;
use pmoderate::{Error, PermGroup, Permutation, PointSet};

fn group(name: &str) -> PermGroup {
    named_group(name).unwrap().group
}

/// Orbits by direct closure under the generators.
fn orbit_count(gens: &[Permutation], n: usize) -> usize {
    let mut seen = vec![false; n];
    let mut count = 0;
    for start in 0..n {
        if seen[start] {
            continue;
        }
        count += 1;
        let mut stack = vec![start];
        seen[start] = true;
        while let Some(x) = stack.pop() {
            for g in gens {
                let y = g.apply(x);
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
    }
    count
}

fn stabilizer_order(g: &PermGroup, delta: &PointSet) -> u128 {
    g.elements().unwrap().iter().filter(|x| delta.image(x) == *delta).count() as u128
}

/// For groups whose Sylow p-subgroups have order p, each is generated by any
/// of its elements of order p; a subset is covered iff one of them fixes it.
fn uncovered_subsets_prime_sylow(g: &PermGroup, p: u64) -> Vec<u64> {
    let n = g.degree();
    let gens: Vec<&Permutation> = g.elements().unwrap().iter().filter(|x| x.order() == p).collect();
    (0u64..1 << n)
        .filter(|&m| {
            let s = PointSet::from_mask(n, m);
            !gens.iter().any(|x| s.is_stabilized_by(x))
        })
        .collect()
}

fn criterion_1() -> String {
    let start = Instant::now();
    let mut measured = Vec::new();
    for (name, p, n) in [("D6", 2, 3), ("D10", 2, 5), ("J", 3, 8)] {
        let g = group(name);
        assert_eq!(g.degree(), n);
        assert_eq!(p_part(g.order().unwrap(), p).unwrap(), p as u128);
        assert!(is_p_concealed(&g, p).unwrap().concealed, "{name}");
        assert!(uncovered_subsets_prime_sylow(&g, p).is_empty(), "{name} oracle");
        measured.push(format!("{name}@{p}"));
    }
    assert_eq!(group("J").order().unwrap(), 168);
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(10), "{elapsed:?}");
    format!("{} concealed, {elapsed:.2?}", measured.join(", "))
}

fn criterion_2() -> String {
    let g = group("AGL(1,5)");
    let r = is_p_concealed(&g, 2).unwrap();
    assert!(!r.concealed);
    let uncovered = r.uncovered.unwrap();
    // Sylow 2-subgroups of AGL(1,5) are cyclic of order 4; a subset is covered
    // iff an element of order 4 fixes it.
    let n = 5;
    let order4: Vec<&Permutation> = g.elements().unwrap().iter().filter(|x| x.order() == 4).collect();
    assert_eq!(order4.len(), 10);
    let least = (0u64..1 << n)
        .find(|&m| !order4.iter().any(|x| PointSet::from_mask(n, m).is_stabilized_by(x)))
        .unwrap();
    assert_eq!(uncovered.to_mask(), Some(least));
    format!("uncovered subset {:?}", uncovered.points())
}

fn criterion_3() -> String {
    let inst = named_group("Product(D6,D6)").unwrap();
    let delta = PointSet::from_points(9, [0, 4]).unwrap();
    assert_eq!(stabilizer_order(&inst.group, &delta), 2);
    let r = classify_moderation(&inst, 2, Strategy::Constructive, SearchOptions::default()).unwrap();
    assert_eq!(r.group_p_part, 4);
    match r.status {
        Status::Moderate { witness, stab_p_part } => {
            assert_eq!(stab_p_part, 2);
            assert_eq!(p_part(stabilizer_order(&inst.group, &witness), 2).unwrap(), 2);
            format!("|Stab({{0,4}})| = 2, witness {:?}, |G|_2 = 4", witness.points())
        }
        other => panic!("expected MODERATE, got {other:?}"),
    }
}

/// All subgroups of order 9 of a group of exponent-3 Sylow subgroups, by pairing
/// commuting elements of order 3.
fn order_nine_subgroups(g: &PermGroup) -> usize {
    let threes: Vec<&Permutation> = g.elements().unwrap().iter().filter(|x| x.order() == 3).collect();
    let mut found: HashSet<Vec<Permutation>> = HashSet::new();
    for (i, x) in threes.iter().enumerate() {
        let x2 = x.pow(2);
        for y in &threes[i + 1..] {
            if **y == x2 || !x.commutes_with(y) {
                continue;
            }
            let mut elems: BTreeSet<Permutation> = BTreeSet::new();
            for a in 0..3 {
                for b in 0..3 {
                    elems.insert(&x.pow(a) * &y.pow(b));
                }
            }
            found.insert(elems.into_iter().collect());
        }
    }
    found.len()
}

fn criterion_4() -> String {
    let start = Instant::now();
    let j = group("J");
    let threes = j.elements().unwrap().iter().filter(|x| x.order() == 3).count();
    assert_eq!(threes / 2, 28);
    assert_eq!(sylow_count(&j, 3).unwrap().count, 28);
    for x in j.elements().unwrap().iter().filter(|x| x.order() == 3) {
        let mut sizes: Vec<usize> = x.cycles().iter().map(Vec::len).collect();
        sizes.resize(4, 1);
        sizes.sort_unstable();
        assert_eq!(sizes, vec![1, 1, 3, 3]);
    }

    let jj = group("Product(J,J)");
    assert_eq!(jj.order().unwrap(), 28224);
    assert_eq!(sylow_count(&jj, 3).unwrap().count, 784);
    assert_eq!(order_nine_subgroups(&jj), 784);
    let sylow = find_sylow(&jj, 3).unwrap();
    assert_eq!(orbit_count(sylow.generators(), 64), 16);

    let s = j.elements().unwrap().iter().find(|x| x.order() == 3).unwrap().clone();
    let t = first_factor_lift(&s, 8);
    assert!(jj.contains(&t).unwrap());
    assert_eq!(orbit_count(std::slice::from_ref(&t), 64), 32);

    let bound = BigUint::from(784u32) << 16;
    assert!(bound < BigUint::from(1u8) << 32);
    assert_eq!(sylow_cover_bound(&jj, 3).unwrap().exact_bound, bound);

    let w = randomized_witness_from_z(&jj, 3, &t, 1000, 0).unwrap().expect("witness within 1000 trials");
    assert_eq!(w.stab_p_part, 3);
    let order = stabilizer_order(&jj, &w.witness);
    assert_eq!(p_part(order, 3).unwrap(), 3);
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(300), "{elapsed:?}");
    format!(
        "n_3 = 28 and 784, orbits 16 and 32, 784*2^16 < 2^32, witness of size {} at trial {} with |Stab| = {order}, {elapsed:.2?}",
        w.witness.len(),
        w.trial
    )
}

/// Whether some subset has stabilizer p-part strictly inside `(1, |G|_p)`, by brute force.
fn brute_moderate(g: &PermGroup, p: u64) -> bool {
    let n = g.degree();
    let full = p_part(g.order().unwrap(), p).unwrap();
    (0u64..1 << n).any(|m| {
        let part = p_part(stabilizer_order(g, &PointSet::from_mask(n, m)), p).unwrap();
        1 < part && part < full
    })
}

fn criterion_5() -> String {
    let c4 = prop31_certificate(&group("C4"), 2).unwrap();
    assert!(c4.verdict);
    assert_eq!((c4.lhs_power.clone(), c4.rhs_power.clone()), (BigUint::from(1u8), BigUint::from(16u8)));
    assert!(brute_moderate(&group("C4"), 2));

    let s4 = prop31_certificate(&group("Sym(4)"), 2).unwrap();
    assert!(!s4.verdict);
    assert_eq!((s4.lhs_power.clone(), s4.rhs_power.clone()), (BigUint::from(81u8), BigUint::from(16u8)));
    assert!(brute_moderate(&group("Sym(4)"), 2));

    let jj = group("Product(J,J)");
    assert_eq!(prop31_certificate(&jj, 3).unwrap_err(), Error::ElementaryAbelian(3));
    let sylow = find_sylow(&jj, 3).unwrap();
    let elems = sylow.elements().unwrap();
    assert!(elems.iter().all(|x| x.pow(3).is_identity()));
    assert!(elems.iter().all(|x| elems.iter().all(|y| x.commutes_with(y))));
    "C4 true (1 < 16), Sym(4) false (81 >= 16) yet moderate, J x J inapplicable".into()
}

fn criterion_6() -> String {
    let suite = spot_suite().unwrap();
    let labels: Vec<String> = suite.iter().map(|(i, p)| format!("{}@{p}", i.label)).collect();
    for required in ["Sym(4)@2", "AGL(2,3)@2", "AGL(2,3)@3", "AGammaL(1,9)@2"] {
        assert!(labels.iter().any(|l| l == required), "{required}");
    }
    for (inst, p) in &suite {
        assert!(inst.group.degree() <= 16);
        let full = p_part(inst.group.order().unwrap(), *p).unwrap();
        for strategy in [Strategy::Exhaustive, Strategy::Constructive] {
            let r = classify_moderation(inst, *p, strategy, SearchOptions::default()).unwrap();
            let Status::Moderate { witness, .. } = r.status else {
                panic!("{}@{p} not moderate under {strategy:?}", inst.label)
            };
            let part = p_part(stabilizer_order(&inst.group, &witness), *p).unwrap();
            assert!(1 < part && part < full, "{}@{p}", inst.label);
        }
    }
    format!("{} cases moderate under both strategies", suite.len())
}

fn criterion_7() -> String {
    let r = run_criterion(7, 0);
    let failed: Vec<&str> = r.checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
    assert!(r.passed, "failed checks: {failed:?}");
    format!("{} property checks", r.checks.len())
}

fn verify_paper_payload() -> (serde_json::Value, Duration) {
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_pmoderate")).args(["verify-paper", "--seed", "0"]).output().unwrap();
    let elapsed = start.elapsed();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let mut v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let mut data = v["payload"]["data"].take();
    for c in data["criteria"].as_array_mut().unwrap() {
        c.as_object_mut().unwrap().remove("elapsed_micros");
    }
    (data, elapsed)
}

fn criterion_8() -> String {
    let (first, elapsed) = verify_paper_payload();
    assert_eq!(first["passed"], true);
    assert_eq!(first["criteria"].as_array().unwrap().len(), 7);
    assert!(elapsed < Duration::from_secs(600), "{elapsed:?}");
    let (second, _) = verify_paper_payload();
    assert_eq!(first, second, "verify-paper is not deterministic");
    format!("7 of 7 criteria, deterministic, {elapsed:.2?}")
}

type Criterion = (u8, &'static str, fn() -> String);

fn main() {
    let criteria: [Criterion; 8] = [
        (1, "concealed groups D6, D10, AGammaL(1,8)", criterion_1),
        (2, "AGL(1,5) is not 2-concealed", criterion_2),
        (3, "D6 x D6 witness", criterion_3),
        (4, "J x J counting argument", criterion_4),
        (5, "counting certificates", criterion_5),
        (6, "primitive zoo spot suite", criterion_6),
        (7, "property suites", criterion_7),
        (8, "verify-paper end to end", criterion_8),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failures = 0;
    for (id, title, check) in criteria {
        let name = format!("criterion_{id}");
        if !filter.is_empty() && !filter.iter().any(|f| name.contains(f.as_str())) {
            continue;
        }
        match catch_unwind(AssertUnwindSafe(check)) {
            Ok(measured) => println!("acceptance criterion {id} PASS: {title}: {measured}"),
            Err(panic) => {
                failures += 1;
                let message = panic
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_default();
                println!("acceptance criterion {id} FAIL: {title}: {message}");
            }
        }
    }
    if failures > 0 {
        std::process::exit(1);
    }
}
