//! Acceptance suite: one PASS/FAIL line per criterion, each with a pinned
//! time limit. Exits nonzero if any criterion fails or runs over its limit.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use plucking_core::enumerate::{
    classify_by_polynomial, generate_trees, verify_prop25, verify_theorem12,
};
use plucking_core::fixtures;
use plucking_core::moves::{
    exchange_orbit, find_permutation_move, validate_permutation_move, DEFAULT_ORBIT_CAP,
};
use plucking_core::plucking::{
    count_pluck_sequences, q_quotient, q_recursive, q_state_product, quotient_fraction,
    wedge_formula_check, wedge_formula_check_many,
};
use plucking_core::qcalc::{q_number, QPoly};
use plucking_core::realize::{
    necessary_conditions, realize_binomial_product, realize_multiset, theorem52_decide,
    CandidateMultiset, NecessaryCondition, RealizeError,
};
use plucking_core::tree::{ChildProfile, PlaneTree};

type Check = Result<String, String>;
type Criterion = (&'static str, Duration, fn() -> Check);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

const HEADLINE: &str = "[8][11][12][13][14][15][16][17][18][19]/[2]^3[3][5][6]";
const U_T1: &str = r"{(9, 10), (3, 6), (1, 7), (2, 2), (6), (5)\times2, (4), (3), (2)\times2, (1)\times4, (0)\times5}";
const U_T2: &str = r"{(9, 10), (2, 7), (2, 6), (1, 3), (6), (5)\times2, (4), (3), (2)\times2, (1)\times4, (0)\times5}";
const U_EXCEPTIONAL: &str = r"{(3, 6, 10), (9), (1, 7), (2, 2), (6), (5)\times2, (4), (3), (2)\times2, (1)\times4, (0)\times5}";

/// Reads the printed profile notation; `(0)` is the empty tuple.
fn parse_profile(text: &str) -> ChildProfile {
    let body = text.trim().trim_start_matches('{').trim_end_matches('}');
    let mut tuples = Vec::new();
    let mut rest = body;
    while let Some(open) = rest.find('(') {
        let close = rest[open..].find(')').unwrap() + open;
        let inner = &rest[open + 1..close];
        let tuple: Vec<usize> = inner
            .split(',')
            .map(|s| s.trim().parse::<usize>().unwrap())
            .filter(|&v| v != 0)
            .collect();
        rest = &rest[close + 1..];
        let mult = match rest.trim_start().strip_prefix(r"\times") {
            Some(after) => {
                let digits: String = after.chars().take_while(char::is_ascii_digit).collect();
                rest = &after[digits.len()..];
                digits.parse().unwrap()
            }
            None => 1,
        };
        tuples.extend(std::iter::repeat_n(tuple, mult));
    }
    ChildProfile::new(tuples)
}

fn trees_up_to(edges: usize) -> Vec<PlaneTree> {
    (0..=edges)
        .flat_map(|e| generate_trees(e).unwrap())
        .collect()
}

fn random_tree(rng: &mut impl Rng, edges: usize) -> PlaneTree {
    let parents: Vec<usize> = (0..edges).map(|i| rng.gen_range(0..=i)).collect();
    PlaneTree::from_parents(&parents).unwrap()
}

fn shuffle(t: &PlaneTree, rng: &mut impl Rng) -> PlaneTree {
    let mut kids: Vec<PlaneTree> = t.children().iter().map(|c| shuffle(c, rng)).collect();
    for i in (1..kids.len()).rev() {
        kids.swap(i, rng.gen_range(0..=i));
    }
    PlaneTree::node(kids)
}

/// The leaf recursion on the plane tree itself, memoized by plane text so
/// embedding invariance is not assumed.
fn plane_recursion(t: &PlaneTree, memo: &mut HashMap<String, QPoly>) -> QPoly {
    if t.is_leaf() {
        return QPoly::one();
    }
    let key = t.to_string();
    if let Some(q) = memo.get(&key) {
        return q.clone();
    }
    let mut total = QPoly::zero();
    for leaf in t.leaves() {
        let r = t.r_value(&leaf).unwrap();
        let sub = plane_recursion(&t.pluck(&leaf).unwrap(), memo);
        total = &total + &sub.shift(r);
    }
    memo.insert(key, total.clone());
    total
}

fn criterion_1() -> Check {
    for (name, tree, text) in [("T1", fixtures::t1(), U_T1), ("T2", fixtures::t2(), U_T2)] {
        let got = tree.child_profile();
        let want = parse_profile(text);
        ensure!(got == want, "U({name}) = {got}, expected {want}");
        ensure!(
            tree.edge_count() == 19,
            "{name} has {} edges",
            tree.edge_count()
        );
    }
    Ok("U(T1), U(T2) match verbatim".into())
}

fn criterion_2() -> Check {
    let mut polys = Vec::new();
    for (name, t) in [("T1", fixtures::t1()), ("T2", fixtures::t2())] {
        let (fraction, quotient) = q_quotient(&t);
        let recursive = q_recursive(&t);
        let product = q_state_product(&t);
        ensure!(
            recursive == product && product == quotient,
            "methods disagree on {name}"
        );
        ensure!(
            fraction.to_string() == HEADLINE,
            "{name} factored form {fraction}"
        );
        polys.push(quotient);
    }
    ensure!(polys[0] == polys[1], "T1 and T2 polynomials differ");
    Ok(format!(
        "factored {HEADLINE}, degree {}",
        polys[0].degree().unwrap()
    ))
}

fn criterion_3() -> Check {
    let orbit = exchange_orbit(&fixtures::t1(), DEFAULT_ORBIT_CAP).map_err(|e| e.to_string())?;
    let size = orbit.len();
    ensure!(
        size == 4,
        "orbit has {size} members including T1 ({} excluding it), expected 4",
        size - 1
    );
    ensure!(
        !orbit.contains(&fixtures::t2().canonical_code()),
        "T2 is in the orbit"
    );
    let profiles: BTreeSet<String> = orbit
        .iter()
        .map(|c| c.parse::<PlaneTree>().unwrap().child_profile().to_string())
        .collect();
    let want: BTreeSet<String> = [U_T1, U_EXCEPTIONAL]
        .iter()
        .map(|t| parse_profile(t).to_string())
        .collect();
    ensure!(profiles == want, "orbit profiles {profiles:?}");
    Ok("orbit size 4 (T1 included), T2 absent, profiles {U(T1), exceptional}".into())
}

fn criterion_4() -> Check {
    let (t1, t2) = (fixtures::t1(), fixtures::t2());
    let cert = find_permutation_move(&t1, &t2).map_err(|e| e.to_string())?;
    let m = cert
        .permutation_move()
        .ok_or("certificate is not a permutation move")?;
    let violations = validate_permutation_move(&t1.reduce().0, m);
    ensure!(violations.is_empty(), "certificate invalid: {violations:?}");
    let out = cert.apply(&t1).map_err(|e| e.to_string())?;
    ensure!(
        out.canonical_code() == t2.canonical_code(),
        "move yields {out}"
    );
    Ok(format!(
        "n={}, alpha={:?}, beta={:?}, P=({})",
        m.vertices.len(),
        m.alpha(),
        m.beta,
        m.permutation_one_line()
    ))
}

fn criterion_5() -> Check {
    for edges in 1..=4 {
        let r = classify_by_polynomial(edges).map_err(|e| e.to_string())?;
        ensure!(r.all_singletons(), "collision at {edges} edges");
    }
    let r = classify_by_polynomial(5).map_err(|e| e.to_string())?;
    let sizes: Vec<usize> = r.collisions().map(|c| c.members.len()).collect();
    ensure!(sizes == [2], "collision sizes at 5 edges: {sizes:?}");
    ensure!(
        verify_theorem12(5).map_err(|e| e.to_string())?,
        "theorem12(5) failed"
    );
    let pair = &r.collisions().next().unwrap().members;
    Ok(format!(
        "1-4 edges injective; 5 edges: one pair {}",
        pair.join(" ")
    ))
}

fn criterion_6() -> Check {
    let mut counts = Vec::new();
    for edges in 5..=9 {
        counts.push(generate_trees(edges).map_err(|e| e.to_string())?.len());
        ensure!(
            verify_prop25(edges).map_err(|e| e.to_string())?,
            "prop25 fails at {edges}"
        );
        ensure!(
            verify_theorem12(edges).map_err(|e| e.to_string())?,
            "theorem12 fails at {edges}"
        );
    }
    ensure!(counts == [20, 48, 115, 286, 719], "tree counts {counts:?}");
    Ok(format!("edges 5..9, trees {counts:?}"))
}

fn criterion_7() -> Check {
    let trees = trees_up_to(8);
    for t in &trees {
        let recursive = q_recursive(t);
        ensure!(recursive == q_state_product(t), "product differs on {t}");
        ensure!(recursive == q_quotient(t).1, "quotient differs on {t}");
        ensure!(
            q_quotient(&t.stabilize()).1 == recursive,
            "stabilization changes {t}"
        );
        ensure!(recursive.is_palindromic(), "{t} not palindromic");
        ensure!(recursive.is_unimodal(), "{t} not unimodal");
        let planted: Vec<PlaneTree> = t
            .children()
            .iter()
            .map(|c| PlaneTree::node(vec![c.clone()]))
            .collect();
        if !planted.is_empty() {
            ensure!(
                wedge_formula_check_many(&planted),
                "root wedge identity fails on {t}"
            );
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut memo = HashMap::new();
    for _ in 0..500 {
        let n = rng.gen_range(1..=8);
        let t = random_tree(&mut rng, n);
        let s = shuffle(&t, &mut rng);
        ensure!(
            plane_recursion(&t, &mut memo) == plane_recursion(&s, &mut memo),
            "shuffle changes {t} -> {s}"
        );
    }
    for _ in 0..100 {
        let (a, b) = (rng.gen_range(0..=6), rng.gen_range(0..=6));
        let (a, b) = (random_tree(&mut rng, a), random_tree(&mut rng, b));
        ensure!(wedge_formula_check(&a, &b), "wedge of {a} and {b}");
    }
    Ok(format!(
        "{} trees, 500 shuffles, 100 wedge pairs",
        trees.len()
    ))
}

fn criterion_8() -> Check {
    let trees = trees_up_to(7);
    for t in &trees {
        let at_one = q_quotient(t).1.eval_one();
        let count = count_pluck_sequences(t).map_err(|e| e.to_string())?;
        ensure!(
            at_one == BigInt::from(count),
            "{t}: Q(1)={at_one}, sequences={count}"
        );
        let d = t.descendant_multiset();
        let (root, rest) = d.values().split_first().unwrap();
        let hook = (1..=*root as u64).product::<u64>()
            / rest.iter().map(|&v| v as u64 + 1).product::<u64>();
        ensure!(count == hook, "{t}: hook formula {hook} vs {count}");
    }
    Ok(format!("{} trees", trees.len()))
}

fn criterion_9() -> Check {
    use NecessaryCondition::*;
    let cases: [(&[usize], &[NecessaryCondition]); 4] = [
        (&[0, 0, 1, 1, 2], &[RootCountsAll]),
        (&[0, 0, 1, 2, 2], &[RootCountsAll, UniqueMaximum]),
        (&[0, 1, 1, 3, 4], &[LeavesCoverOnes]),
        (&[0, 1, 2, 2, 4], &[]),
    ];
    for (values, want) in cases {
        let c = CandidateMultiset::new(values.to_vec());
        let got = necessary_conditions(&c);
        ensure!(got == want, "{c}: violations {got:?}, expected {want:?}");
        ensure!(realize_multiset(&c).is_err(), "{c} realized");
        ensure!(
            !theorem52_decide(&c).map_err(|e| e.to_string())?.realizable,
            "{c} decided realizable"
        );
    }
    ensure!(
        realize_multiset(&CandidateMultiset::new(vec![0, 1, 2, 2, 4]))
            == Err(RealizeError::Unrealizable("search exhausted".into())),
        "{{0,1,2,2,4}} not rejected by search"
    );

    let mut truth: Vec<HashSet<Vec<usize>>> = Vec::new();
    let mut checked = 0;
    for edges in 0..=9 {
        let mut set = HashSet::new();
        for t in generate_trees(edges).unwrap() {
            let c = CandidateMultiset::from(&t.descendant_multiset());
            if edges <= 8 {
                let d = theorem52_decide(&c).map_err(|e| e.to_string())?;
                ensure!(d.realizable, "D({t}) = {c} not realizable");
                let w = d.tree.unwrap();
                ensure!(
                    w.descendant_multiset() == t.descendant_multiset(),
                    "witness for {c} is {w}"
                );
                checked += 1;
            }
            set.insert(c.values().to_vec());
        }
        truth.push(set);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(1000);
    let mut positives = 0;
    for _ in 0..1000 {
        let n = rng.gen_range(1..=10);
        let mut v: Vec<usize> = (0..n).map(|_| rng.gen_range(0..n)).collect();
        if rng.gen_bool(0.7) {
            v[0] = n - 1;
            v[1 % n] = 0;
        }
        let c = CandidateMultiset::new(v);
        let expected = truth[n - 1].contains(c.values());
        let d = theorem52_decide(&c).map_err(|e| e.to_string())?;
        ensure!(
            d.realizable == expected,
            "{c}: decided {}, oracle {expected}",
            d.realizable
        );
        positives += expected as usize;
    }
    Ok(format!(
        "4 named rejections; {checked} tree multisets; 1000 random tuples ({positives} realizable)"
    ))
}

fn criterion_10() -> Check {
    let factors = [(1, 1), (4, 2), (1, 1), (1, 2)];
    let t = realize_binomial_product(&factors).map_err(|e| e.to_string())?;
    let want: QPoly = [2, 3, 5, 6].iter().map(|&k| q_number(k).unwrap()).product();
    ensure!(
        q_quotient(&t).1 == want,
        "tree {t} has the wrong polynomial"
    );
    Ok(format!("tree {t}, factored {}", quotient_fraction(&t)))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("fixture profiles", Duration::from_secs(1), criterion_1),
        ("headline polynomial", Duration::from_secs(5), criterion_2),
        ("exchange orbit of T1", Duration::from_secs(60), criterion_3),
        (
            "permutation move T1 -> T2",
            Duration::from_secs(30),
            criterion_4,
        ),
        (
            "small-case injectivity",
            Duration::from_secs(10),
            criterion_5,
        ),
        (
            "exhaustive verification 5..9",
            Duration::from_secs(600),
            criterion_6,
        ),
        (
            "method agreement and invariances",
            Duration::from_secs(600),
            criterion_7,
        ),
        ("evaluation at q = 1", Duration::from_secs(300), criterion_8),
        (
            "realization decisions",
            Duration::from_secs(600),
            criterion_9,
        ),
        (
            "realization of [2][3][5][6]",
            Duration::from_secs(1),
            criterion_10,
        ),
    ];
    let mut failures = 0;
    for (i, (name, limit, check)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let result = check();
        let elapsed = start.elapsed();
        let verdict = match result {
            Ok(detail) if elapsed <= limit => ("PASS", detail),
            Ok(detail) => ("FAIL", format!("over time limit; {detail}")),
            Err(reason) => ("FAIL", reason),
        };
        if verdict.0 == "FAIL" {
            failures += 1;
        }
        println!(
            "{} criterion {:>2} {name} ({:.2}s / limit {}s): {}",
            verdict.0,
            i + 1,
            elapsed.as_secs_f64(),
            limit.as_secs(),
            verdict.1
        );
    }
    println!("acceptance: {} passed, {failures} failed", 10 - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
