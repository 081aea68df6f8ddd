//! The acceptance gate: one test per deliverable criterion, each with its
//! stated time budget. Every test prints a single PASS line on success;
//! failures carry the offending case in the panic message.

use std::collections::HashSet;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use garside::verify::{
    check_counts_and_bound, check_cut_head_unique, check_oracle_equivalence,
    check_reduced_cycle_structure, check_row_products_and_reduction, check_switching_exactness,
    check_tail_path, check_worked_example, enumerate_m0, CheckResult, Status,
};
use garside::{
    alpha_row, family_rigid_graph, minimal_conjugators_of_kind, parse_family_braid,
    predicted_size, Braid, ConjugatorKind, SearchBudget, SimpleBraid,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 0x5EED_ACCE;

fn assert_pass(r: &CheckResult, limit: Duration, elapsed: Duration) {
    assert_eq!(r.status, Status::Pass, "{} ({}): {}", r.name, r.parameters, r.details);
    assert!(elapsed < limit, "{} took {elapsed:?}, budget {limit:?}", r.name);
}

fn report(criterion: &str, what: &str, elapsed: Duration) {
    println!("criterion {criterion} PASS — {what} ({elapsed:.2?})");
}

/// All permutation braids on `n` strands, grown letter by letter.
fn all_simples(n: usize) -> Vec<SimpleBraid> {
    let mut out = vec![SimpleBraid::identity(n)];
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    seen.insert(out[0].canonical_word());
    let mut i = 0;
    while i < out.len() {
        let x = out[i].clone();
        i += 1;
        let finishing = x.finishing_set();
        for s in 1..n {
            if finishing.contains(&s) {
                continue;
            }
            let y = x.compose(&SimpleBraid::sigma(n, s));
            if seen.insert(y.canonical_word()) {
                out.push(y);
            }
        }
    }
    out
}

#[test]
fn criterion_01_simple_lattice_oracle() {
    let t0 = Instant::now();
    for n in [3usize, 4, 5] {
        let simples = all_simples(n);
        let expected: usize = (1..=n).product();
        assert_eq!(simples.len(), expected, "n={n}: wrong simple count");
        for a in &simples {
            for b in &simples {
                let m = a.meet(b);
                let j = a.join(b);
                // Oracle: the meet is the greatest common prefix, the join
                // the least common right multiple, over the whole lattice.
                assert!(m.is_prefix_of(a) && m.is_prefix_of(b), "meet not a bound");
                assert!(a.is_prefix_of(&j) && b.is_prefix_of(&j), "join not a bound");
                for c in &simples {
                    if c.is_prefix_of(a) && c.is_prefix_of(b) {
                        assert!(c.is_prefix_of(&m), "n={n}: meet not greatest");
                    }
                    if a.is_prefix_of(c) && b.is_prefix_of(c) {
                        assert!(j.is_prefix_of(c), "n={n}: join not least");
                    }
                }
                // Lattice laws on the pair.
                assert_eq!(m, b.meet(a), "meet not commutative");
                assert_eq!(j, b.join(a), "join not commutative");
                assert_eq!(a.meet(&j), *a, "absorption (meet over join)");
                assert_eq!(a.join(&m), *a, "absorption (join over meet)");
                let prefix = a.is_prefix_of(b);
                assert_eq!(prefix, m == *a, "order vs meet");
                assert_eq!(prefix, j == *b, "order vs join");
            }
        }
    }
    let elapsed = t0.elapsed();
    assert!(elapsed < Duration::from_secs(10), "lattice oracle took {elapsed:?}");
    report("01", "meet/join/prefix agree with exhaustive oracle, n in {3,4,5}", elapsed);
}

fn random_word(rng: &mut ChaCha8Rng, n: usize, max_len: usize) -> Vec<i64> {
    let len = rng.random_range(0..=max_len);
    (0..len)
        .map(|_| {
            let mag = rng.random_range(1..n) as i64;
            if rng.random_bool(0.5) {
                mag
            } else {
                -mag
            }
        })
        .collect()
}

/// Apply one relation rewrite at position `i` if a pattern matches:
/// far generators commute regardless of sign, and equal-sign braid-relation
/// triples flip.
fn rewrite_at(word: &mut [i64], i: usize) -> bool {
    if i + 1 < word.len() {
        let (a, b) = (word[i], word[i + 1]);
        if a.unsigned_abs().abs_diff(b.unsigned_abs()) > 1 {
            word[i] = b;
            word[i + 1] = a;
            return true;
        }
    }
    if i + 2 < word.len() {
        let (a, b, c) = (word[i], word[i + 1], word[i + 2]);
        if a == c && a.signum() == b.signum() && a.unsigned_abs().abs_diff(b.unsigned_abs()) == 1 {
            word[i] = b;
            word[i + 1] = a;
            word[i + 2] = b;
            return true;
        }
    }
    false
}

#[test]
fn criterion_02_normal_form_congruence() {
    let t0 = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 2);
    for round in 0..10_000 {
        let n = rng.random_range(2..=7);
        let word = random_word(&mut rng, n, 30);
        let x = Braid::normal_form(n, &word).unwrap();

        let split = rng.random_range(0..=word.len());
        let left = Braid::normal_form(n, &word[..split]).unwrap();
        let right = Braid::normal_form(n, &word[split..]).unwrap();
        assert_eq!(left.multiply(&right), x, "round {round}: multiplicativity at {split}");

        let mut rewritten = word.clone();
        let mut applied = 0;
        for _ in 0..40 {
            if rewritten.len() < 2 {
                break;
            }
            let i = rng.random_range(0..rewritten.len() - 1);
            applied += rewrite_at(&mut rewritten, i) as usize;
        }
        let y = Braid::normal_form(n, &rewritten).unwrap();
        assert_eq!(y, x, "round {round}: {applied} rewrites changed the normal form");
    }
    let elapsed = t0.elapsed();
    assert!(elapsed < Duration::from_secs(30), "congruence suite took {elapsed:?}");
    report("02", "10000 random words, n <= 7: rewrite invariance and multiplicativity", elapsed);
}

/// Criteria 03 and 04 share one 500-element sample.
fn sampled_products() -> &'static (CheckResult, CheckResult, Duration) {
    static SAMPLE: OnceLock<(CheckResult, CheckResult, Duration)> = OnceLock::new();
    SAMPLE.get_or_init(|| {
        let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 3);
        let ns: Vec<usize> = (6..=16).collect();
        let ks = [1usize, 2, 3, 4, 5];
        let t0 = Instant::now();
        let (products, reduction) = check_row_products_and_reduction(&mut rng, &ns, &ks, 500);
        (products, reduction, t0.elapsed())
    })
}

#[test]
fn criterion_03_row_products_left_weighted_rigid_injective() {
    let (products, _, elapsed) = sampled_products();
    assert_pass(products, Duration::from_secs(60), *elapsed);
    report("03", "500 sampled matrices, n in 6..=16, k <= 5: left-weighted, rigid, injective", *elapsed);
}

#[test]
fn criterion_04_no_standard_reduction() {
    let (_, reduction, elapsed) = sampled_products();
    assert_pass(reduction, Duration::from_secs(60), *elapsed);
    report("04", "no braid of the 500-element sample preserves a standard curve family", *elapsed);
}

#[test]
fn criterion_05_cut_head_unique() {
    let t0 = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 5);
    let pairs = [(6usize, 2usize), (6, 3), (8, 2), (8, 3), (10, 2), (10, 3), (11, 2), (11, 3)];
    let r = check_cut_head_unique(&mut rng, &pairs, 50);
    let elapsed = t0.elapsed();
    assert_pass(&r, Duration::from_secs(300), elapsed);
    report("05", "exhaustive interval search finds only the first factor, 50 samples per size", elapsed);
}

#[test]
fn criterion_06_terminal_initializer_exhaustive() {
    let t0 = Instant::now();
    let budget = SearchBudget::default();
    let mut total = 0;
    for (n, k) in [(10usize, 2usize), (10, 3), (11, 2), (11, 3)] {
        for e in enumerate_m0(n, k) {
            total += 1;
            let tag = format!("n={n} k={k} {:?}", e.rows());
            let x = e.alpha();
            let last = alpha_row(&e.rows()[k - 1], e.slot());
            let expected = last.right_complement();
            // The complement really is the braid quotient by the half twist.
            let as_braid = Braid::normal_form(
                n,
                &expected.canonical_word().iter().map(|&l| l as i64).collect::<Vec<_>>(),
            )
            .unwrap();
            let lift = |s: &SimpleBraid| {
                Braid::normal_form(n, &s.canonical_word().iter().map(|&l| l as i64).collect::<Vec<_>>()).unwrap()
            };
            assert_eq!(as_braid, lift(&last).inverse().multiply(&Braid::delta_power(n, 1)), "{tag}: complement identity");

            let found = minimal_conjugators_of_kind(&x, ConjugatorKind::AddTail, &budget, None)
                .unwrap_or_else(|e| panic!("{tag}: {e}"));
            assert!(found.exhaustive, "{tag}: budget exceeded");
            let words: Vec<Vec<usize>> =
                found.items.iter().map(|(c, _)| c.canonical_word()).collect();
            assert_eq!(words, vec![expected.canonical_word()], "{tag}: add-tail set");

            let (conj, target) = e.initializer().unwrap_or_else(|e| panic!("{tag}: {e}"));
            assert_eq!(conj, expected, "{tag}: initializer conjugator");
            let predicted = e
                .hat()
                .map(|h| h.cycled_inv().tau())
                .unwrap_or_else(|e| panic!("{tag}: {e}"));
            assert_eq!(target.alpha(), predicted.alpha(), "{tag}: initializer target");
            assert_eq!(x.conjugate_by_simple(&conj), predicted.alpha(), "{tag}: conjugation identity");
        }
    }
    let elapsed = t0.elapsed();
    assert!(elapsed < Duration::from_secs(600), "initializer sweep took {elapsed:?}");
    report(
        "06",
        &format!("all {total} width-4 constrained matrices: unique add-tail conjugator and target"),
        elapsed,
    );
}

#[test]
fn criterion_07_switching_exactness() {
    let t0 = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 7);
    let direct = [(14usize, 2usize), (14, 3), (15, 2), (15, 3)];
    let r = check_switching_exactness(&mut rng, &direct, &[], 6);
    let elapsed = t0.elapsed();
    assert_pass(&r, Duration::from_secs(60), elapsed);
    report("07", "switchings conjugate to predicted targets; no proper prefix works, n in {14,15}", elapsed);
}

#[test]
fn criterion_08_tail_path_closed_form() {
    let t0 = Instant::now();
    let r = check_tail_path(&[14, 15, 16, 17, 18, 19]);
    let elapsed = t0.elapsed();
    assert_pass(&r, Duration::from_secs(10), elapsed);
    report("08", "closed form equals the switching-path product, widths 6..=8", elapsed);
}

#[test]
fn criterion_09_worked_example_b17() {
    let t0 = Instant::now();
    let r = check_worked_example();
    let elapsed = t0.elapsed();
    assert_pass(&r, Duration::from_secs(10), elapsed);
    report("09", "frozen 17-strand example: accumulated path and both endpoints reproduced", elapsed);
}

#[test]
fn criterion_10_rigid_set_counts_and_bound() {
    let t0 = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 10);
    let cases = [(14usize, 2usize, 16usize), (14, 3, 24), (15, 2, 16), (16, 2, 32), (17, 2, 32)];
    for (n, k, expected) in cases {
        let e = garside::verify::sample_m0_element(&mut rng, n, k);
        let p = e.p();
        assert_eq!(predicted_size(k, p) as usize, expected, "n={n} k={k}: closed-form size");
        let graph = family_rigid_graph(&e).unwrap();
        assert_eq!(graph.nodes().len(), expected, "n={n} k={k}: node count");
        assert!(graph.verify_edges(), "n={n} k={k}: edge conjugation identities");
        for node in graph.nodes() {
            assert!(node.is_rigid(), "n={n} k={k}: node not rigid");
            let back = parse_family_braid(node)
                .unwrap_or_else(|| panic!("n={n} k={k}: node does not parse back"));
            assert!(back.is_m0(), "n={n} k={k}: parsed node outside the constrained class");
        }
    }
    for n in 14usize..=20 {
        let p = (n - 2 - n % 2) / 2;
        for k in [2u64, 3, 4] {
            let lhs = (k * (1u64 << (p - 3))) as f64;
            let rhs = k as f64 * (2f64).powi(n as i32).sqrt() / 23.0;
            assert!(lhs >= rhs, "n={n} k={k}: {lhs} < {rhs}");
        }
    }
    // The same facts as reported by the suite entry.
    let r = check_counts_and_bound(
        &mut rng,
        &[(14, 2), (14, 3), (15, 2), (16, 2), (17, 2)],
        (14..=20).collect(),
    );
    let elapsed = t0.elapsed();
    assert_pass(&r, Duration::from_secs(300), elapsed);
    report("10", "rigid-set sizes 16/24/16/32/32 and the sqrt(2^n)/23 bound, n in 14..=20", elapsed);
}

#[test]
fn criterion_11_oracle_equivalence() {
    let t0 = Instant::now();
    let pairs = [(10usize, 2usize), (10, 3), (11, 2), (11, 3)];
    for round in 0..3u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 11 ^ round);
        let r = check_oracle_equivalence(&mut rng, &pairs);
        assert_pass(&r, Duration::from_secs(900), t0.elapsed());
    }
    let elapsed = t0.elapsed();
    report("11", "brute-force enumeration matches the closed-form graph, n in {10,11}", elapsed);
}

#[test]
fn criterion_12_reduced_cycle_exhaustive() {
    let t0 = Instant::now();
    let r = check_reduced_cycle_structure(8);
    let elapsed = t0.elapsed();
    assert_pass(&r, Duration::from_secs(10), elapsed);
    report("12", "through-strand relabeling is a full cycle with the next-zero rule, p <= 8", elapsed);
}
