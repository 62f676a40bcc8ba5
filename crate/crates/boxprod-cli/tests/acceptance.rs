//! Acceptance suite. Each test covers one numbered criterion and prints a
//! single PASS line (visible with `--nocapture`); any failure fails the
//! corresponding test. Tests serialize on a global gate so the timing
//! criterion is not disturbed by concurrent work.
//!
//! 1. Oracle equivalence of the two factorization algorithms and the
//!    brute-force oracle on exhaustive small loopy graphs plus random ones.
//! 2. Round-trip at scale on random products.
//! 3. Adjacency matrix of a product equals the Kronecker sum after clamping.
//! 4. Factor-count, base-factor and inspection-counter bounds.
//! 5. Near-linear scaling of the loop-merging stage on hypercubes.
//! 6. Layer dichotomy and entirely-looped product laws.
//! 7. CLI contract: bytes, exit codes, determinism.

use std::process::Command;
use std::sync::Mutex;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use boxprod::{
    adjacency_matrix, brute_force_factor, cartesian_product, factor_loops_from_base,
    factor_loops_linear, factor_loops_linear_with_stats, factor_loops_subset_scan, factor_simple,
    find_isomorphism_capped, kronecker_sum, layer_subgraph, random_instance, verify_factorization,
    with_random_loops, Graph, InstanceSpec,
};

static GATE: Mutex<()> = Mutex::new(());

fn serial() -> std::sync::MutexGuard<'static, ()> {
    GATE.lock().unwrap_or_else(|poisoned| poisoned.into_inner())
}

// --- shared helpers ---

fn all_vertex_pairs(n: usize) -> Vec<(usize, usize)> {
    let mut pairs = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            pairs.push((u, v));
        }
    }
    pairs
}

/// Every graph on `n` labeled vertices: all 2-edge subsets times all loop sets.
fn all_loopy_graphs(n: usize) -> impl Iterator<Item = Graph> {
    let pairs = all_vertex_pairs(n);
    let edge_masks = 1u32 << pairs.len();
    let loop_masks = 1u32 << n;
    (0..edge_masks).flat_map(move |em| {
        let edges: Vec<(usize, usize)> = pairs
            .iter()
            .enumerate()
            .filter(|&(i, _)| em & (1 << i) != 0)
            .map(|(_, &p)| p)
            .collect();
        (0..loop_masks).map(move |lm| {
            let loops: Vec<usize> = (0..n).filter(|&v| lm & (1 << v) != 0).collect();
            Graph::new(n, &edges, &loops).unwrap()
        })
    })
}

fn random_graph(rng: &mut ChaCha8Rng, n: usize, edge_prob: f64, loop_prob: f64) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.random_bool(edge_prob) {
                edges.push((u, v));
            }
        }
    }
    let loops: Vec<usize> = (0..n).filter(|_| rng.random_bool(loop_prob)).collect();
    Graph::new(n, &edges, &loops).unwrap()
}

fn same_prime_multiset(a: &[Graph], b: &[Graph]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let mut used = vec![false; b.len()];
    'outer: for p in a {
        for (i, q) in b.iter().enumerate() {
            if !used[i]
                && find_isomorphism_capped(p, q, 16)
                    .map(|m| m.is_some())
                    .unwrap_or(false)
            {
                used[i] = true;
                continue 'outer;
            }
        }
        return false;
    }
    true
}

fn check_three_way(g: &Graph) {
    let lin = factor_loops_linear(g).unwrap();
    let sub = factor_loops_subset_scan(g).unwrap();
    let oracle = brute_force_factor(g).unwrap();
    assert!(
        same_prime_multiset(&lin.primes, &sub.primes),
        "linear vs subset disagree on {g:?}"
    );
    assert!(
        same_prime_multiset(&lin.primes, &oracle.primes),
        "linear vs oracle disagree on {g:?}"
    );
    assert!(verify_factorization(g, &lin), "round trip fails on {g:?}");
    assert!(verify_factorization(g, &sub));
}

// --- criterion 1 ---

#[test]
fn criterion_1_oracle_equivalence() {
    let _g = serial();
    let mut exhaustive = 0usize;
    for n in 1..=5 {
        for g in all_loopy_graphs(n) {
            if !g.is_connected() || g.is_entirely_looped() {
                continue;
            }
            check_three_way(&g);
            exhaustive += 1;
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(0xACCE5501);
    let mut sampled = 0usize;
    while sampled < 500 {
        let g = random_graph(&mut rng, 6, 0.45, 0.35);
        if !g.is_connected() || g.is_entirely_looped() {
            continue;
        }
        check_three_way(&g);
        sampled += 1;
    }
    println!(
        "criterion 1 PASS: linear, subset and oracle agree on {exhaustive} exhaustive (n<=5) and {sampled} random n=6 instances"
    );
}

// --- criterion 2 ---

#[test]
fn criterion_2_roundtrip_at_scale() {
    let _g = serial();
    let mut max_n = 0usize;
    for seed in 0..1000u64 {
        let spec = InstanceSpec {
            factor_count: 2 + (seed % 3) as usize,
            min_size: 2,
            max_size: 4,
            loop_probability: 0.3,
            seed,
        };
        let (g, generators, _) = random_instance(&spec);
        assert!(g.vertex_count() <= 256);
        max_n = max_n.max(g.vertex_count());

        let f = factor_loops_linear(&g).unwrap();
        assert!(verify_factorization(&g, &f), "round trip fails for seed {seed}");

        let mut expected = Vec::new();
        for generator in &generators {
            expected.extend(brute_force_factor(generator).unwrap().primes);
        }
        assert!(
            same_prime_multiset(&f.primes, &expected),
            "prime multiset does not match generators for seed {seed}"
        );
    }
    println!("criterion 2 PASS: 1000 random products up to n={max_n} round-trip with matching prime multisets");
}

// --- criterion 3 ---

#[test]
fn criterion_3_kronecker_sum_identity() {
    let _g = serial();
    let mut rng = ChaCha8Rng::seed_from_u64(0xACCE5503);
    for case in 0..200 {
        let n1 = rng.random_range(1..=20);
        let n2 = rng.random_range(1..=20);
        let g = random_graph(&mut rng, n1, 0.3, 0.4);
        let h = random_graph(&mut rng, n2, 0.3, 0.4);
        let (p, _) = cartesian_product(&[g.clone(), h.clone()]).unwrap();
        let ks = kronecker_sum(&adjacency_matrix(&g), &adjacency_matrix(&h)).unwrap();
        assert_eq!(
            adjacency_matrix(&p),
            ks.clamp_diagonal(),
            "Kronecker sum mismatch in case {case}"
        );
    }
    println!("criterion 3 PASS: 200 random pairs match the clamped Kronecker sum exactly");
}

// --- criterion 4 ---

#[test]
fn criterion_4_bounds_suite() {
    let _g = serial();
    let mut checked = 0usize;

    let mut check_bounds = |g: &Graph| {
        let n = g.vertex_count();
        let (f, stats) = factor_loops_linear_with_stats(g).unwrap();
        let k = f.primes.len();
        assert!(
            k <= (n as f64).log2().floor() as usize || n == 1,
            "k > log2(n) on {g:?}"
        );
        if n > 1 {
            let skeleton = g.strip_loops();
            let r = factor_simple(&skeleton).unwrap().primes.len();
            assert!(r <= skeleton.min_degree(), "r > min degree on {g:?}");
            assert!(k <= r, "more loopy primes than base primes on {g:?}");
            assert!(
                stats.inspections <= n * r,
                "inspection counter {} exceeds n*r = {} on {g:?}",
                stats.inspections,
                n * r
            );
        }
        checked += 1;
    };

    for n in 1..=5 {
        for g in all_loopy_graphs(n) {
            if g.is_connected() && !g.is_entirely_looped() {
                check_bounds(&g);
            }
        }
    }
    for seed in 5000..5300u64 {
        let spec = InstanceSpec {
            factor_count: 2 + (seed % 3) as usize,
            min_size: 2,
            max_size: 4,
            loop_probability: 0.3,
            seed,
        };
        let (g, _, _) = random_instance(&spec);
        check_bounds(&g);
    }
    println!("criterion 4 PASS: factor-count, base-count and inspection bounds hold on {checked} instances");
}

// --- criterion 5 ---

/// Median per-iteration time in milliseconds over `rounds` adaptive runs.
fn measure_ms(rounds: usize, mut f: impl FnMut()) -> f64 {
    let mut samples = Vec::with_capacity(rounds);
    for _ in 0..rounds {
        let start = Instant::now();
        f();
        let once = start.elapsed().as_secs_f64();
        let reps = (0.08 / once.max(1e-9)).ceil().clamp(1.0, 400.0) as usize;
        let sample = if reps <= 1 {
            once
        } else {
            let start = Instant::now();
            for _ in 0..reps {
                f();
            }
            start.elapsed().as_secs_f64() / reps as f64
        };
        samples.push(sample * 1e3);
    }
    samples.sort_by(|a, b| a.partial_cmp(b).unwrap());
    samples[samples.len() / 2]
}

#[test]
fn criterion_5_linear_scaling_of_loop_stage() {
    let _g = serial();
    let dims: Vec<u32> = (8..=14).collect();
    let mut loop_ms = Vec::new();
    let mut report = String::new();
    for &d in &dims {
        let skeleton = Graph::hypercube(d);
        let g = with_random_loops(&skeleton, 0.3, 0x5CA1E + d as u64);
        assert!(!g.is_entirely_looped());

        let start = Instant::now();
        let base = factor_simple(&g.strip_loops()).unwrap();
        let simple_ms = start.elapsed().as_secs_f64() * 1e3;

        let stage_ms = measure_ms(3, || {
            let (f, _) = factor_loops_from_base(&g, &base).unwrap();
            std::hint::black_box(f);
        });
        loop_ms.push(stage_ms);
        report.push_str(&format!(
            "  d={d}: n={} m={} loop-merge {stage_ms:.3} ms, pipeline {:.3} ms\n",
            g.vertex_count(),
            g.two_edge_count(),
            simple_ms + stage_ms
        ));
    }

    let mut ratios = Vec::new();
    for i in 1..dims.len() {
        let ratio = loop_ms[i] / loop_ms[i - 1];
        if dims[i] >= 10 {
            ratios.push((dims[i], ratio));
        }
    }
    print!("{report}");
    for &(d, ratio) in &ratios {
        assert!(
            (1.5..=3.0).contains(&ratio),
            "loop-merge growth ratio at d={d} is {ratio:.2}, outside [1.5, 3.0]\n{report}"
        );
    }
    println!(
        "criterion 5 PASS: loop-merge stage ratios {:?} all within [1.5, 3.0] for d >= 10",
        ratios
            .iter()
            .map(|&(d, r)| format!("d{d}:{r:.2}"))
            .collect::<Vec<_>>()
    );
}

// --- criterion 6 ---

#[test]
fn criterion_6_lemma_suites() {
    let _g = serial();
    let mut rng = ChaCha8Rng::seed_from_u64(0xACCE5506);

    // layer dichotomy on all layers of 100 random products
    for _ in 0..100 {
        let count = rng.random_range(2..=3);
        let factors: Vec<Graph> = (0..count)
            .map(|_| {
                let n = rng.random_range(1..=3);
                random_graph(&mut rng, n, 0.6, 0.4)
            })
            .collect();
        let (p, coord) = cartesian_product(&factors).unwrap();
        for a in 0..p.vertex_count() {
            for i in 0..factors.len() {
                let (layer, _) = layer_subgraph(&p, &coord, a, i).unwrap();
                let other_looped = (0..factors.len())
                    .filter(|&j| j != i)
                    .any(|j| factors[j].has_loop(coord.coords(a)[j]));
                if other_looped {
                    assert_eq!(layer.strip_loops(), factors[i].strip_loops());
                    assert!(layer.is_entirely_looped());
                } else {
                    assert_eq!(layer, factors[i]);
                }
            }
        }
    }

    // entirely-looped absorption and skeleton-equivalence implication
    for case in 0..100 {
        let ng = rng.random_range(1..=4);
        let nh = rng.random_range(1..=4);
        let g = {
            let skeleton = random_graph(&mut rng, ng, 0.5, 0.0);
            Graph::new(ng, &skeleton.two_edges(), &(0..ng).collect::<Vec<_>>()).unwrap()
        };
        let h1 = random_graph(&mut rng, nh, 0.5, 0.4);
        let h2 = {
            // same skeleton up to relabeling, fresh loops
            let mut perm: Vec<usize> = (0..nh).collect();
            for i in (1..nh).rev() {
                perm.swap(i, rng.random_range(0..=i));
            }
            let relabeled = h1.strip_loops().relabel(&perm);
            let loops: Vec<usize> = (0..nh).filter(|_| rng.random_bool(0.4)).collect();
            Graph::new(nh, &relabeled.two_edges(), &loops).unwrap()
        };
        let (p1, _) = cartesian_product(&[g.clone(), h1]).unwrap();
        let (p2, _) = cartesian_product(&[g, h2]).unwrap();
        assert!(p1.is_entirely_looped(), "absorption fails in case {case}");
        assert!(
            find_isomorphism_capped(&p1, &p2, 16).unwrap().is_some(),
            "skeleton-equivalent cofactors gave non-isomorphic products in case {case}"
        );
    }
    println!("criterion 6 PASS: layer dichotomy on 100 products, looped-product laws on 100 triples");
}

// --- criterion 7 ---

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_boxprod"))
}

#[test]
fn criterion_7_cli_contract() {
    let _g = serial();
    let dir = tempfile::tempdir().unwrap();
    let path = |name: &str| dir.path().join(name).to_str().unwrap().to_string();

    // parse/serialize round trip, exact bytes: strip is the identity on a
    // canonical loop-free document
    let canonical = "n 4\ne 0 1\ne 0 3\ne 1 2\ne 2 3\n";
    std::fs::write(path("c4.lgr"), canonical).unwrap();
    let out = bin().args(["strip", &path("c4.lgr")]).output().unwrap();
    assert!(out.status.success());
    assert_eq!(out.stdout, canonical.as_bytes(), "strip must echo canonical bytes");

    // exit 2: usage errors
    let out = bin().args(["factor"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = bin().args(["no-such-command"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));

    // exit 3: parse errors, with the error name on stderr
    std::fs::write(path("selfedge.lgr"), "n 2\ne 1 1\n").unwrap();
    let out = bin().args(["factor", &path("selfedge.lgr")]).output().unwrap();
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("SelfEdgeViaE"));

    // exit 4: domain errors, with the error name on stderr
    std::fs::write(path("alllooped.lgr"), "n 2\ne 0 1\nl 0\nl 1\n").unwrap();
    let out = bin().args(["factor", &path("alllooped.lgr")]).output().unwrap();
    assert_eq!(out.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&out.stderr).contains("NoUnloopedVertex"));
    std::fs::write(path("disconnected.lgr"), "n 3\ne 0 1\n").unwrap();
    let out = bin().args(["factor", &path("disconnected.lgr")]).output().unwrap();
    assert_eq!(out.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&out.stderr).contains("Disconnected"));

    // golden factorization output, exact bytes, and determinism across runs
    let product = "n 6\ne 0 1\ne 0 2\ne 1 3\ne 2 3\ne 2 4\ne 3 5\ne 4 5\nl 2\nl 3\n";
    std::fs::write(path("prod.lgr"), product).unwrap();
    let expected = "\
# prime 1/2
n 2
e 0 1
# prime 2/2
n 3
e 0 1
e 1 2
l 1
# coordinates
0\t0\t0
1\t1\t0
2\t0\t1
3\t1\t1
4\t0\t2
5\t1\t2
";
    let first = bin().args(["factor", &path("prod.lgr")]).output().unwrap();
    assert!(first.status.success());
    assert_eq!(
        String::from_utf8_lossy(&first.stdout),
        expected,
        "factor output does not match the golden bytes"
    );
    let second = bin().args(["factor", &path("prod.lgr")]).output().unwrap();
    assert_eq!(first.stdout, second.stdout, "factor output is not deterministic");

    // the subset algorithm recovers the same primes through the CLI
    let sub = bin()
        .args(["factor", &path("prod.lgr"), "--algorithm", "subset"])
        .output()
        .unwrap();
    assert!(sub.status.success());
    assert_eq!(first.stdout, sub.stdout);

    // product piped into factor recovers the primes of both inputs
    std::fs::write(path("p3l.lgr"), "n 3\ne 0 1\ne 1 2\nl 1\n").unwrap();
    std::fs::write(path("k2.lgr"), "n 2\ne 0 1\n").unwrap();
    let prod = bin()
        .args(["product", &path("p3l.lgr"), &path("k2.lgr")])
        .output()
        .unwrap();
    assert!(prod.status.success());
    assert_eq!(prod.stdout, product.as_bytes());

    println!("criterion 7 PASS: byte-exact round trips, exit codes 2/3/4, deterministic factor output");
}
