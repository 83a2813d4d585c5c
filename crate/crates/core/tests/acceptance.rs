//! Acceptance run: one line per criterion, nonzero exit if any fails.

use std::collections::HashSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use setseq::constructors::{
    build_w_sequence, four_copies, k_one_three, label_large_caterpillar, label_small_diameter_with,
    solve_w_prefixes, Fixtures,
};
use setseq::gf2::BitVec;
use setseq::pairing::sweep::sweep_shard;
use setseq::pairing::{check_partition, solve_pairing, solve_with_route, RouteTag, SolveOptions};
use setseq::search::{search_labeling, SearchConfig, SearchError, Strategy};
use setseq::trees::{build_caterpillar, CaterpillarSpec, LabeledTree, Labeling, Tree};

mod common;
use common::{
    bitvec_rank, dim6_even, even_degree_xor, few_values, half_dim_even, instance, low_dimension,
    min_dim, odd_caterpillar, oracle_set_sequential,
};

/// Seed for every randomized criterion, including the base-case search.
const SEED: u64 = 0;

type Verdict = Result<String, String>;
type Generator<'a> = &'a dyn Fn(&mut ChaCha8Rng) -> (u32, Vec<u32>);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Oracle check plus the even-degree property, used on every labeling the
/// run produces.
fn sound(what: &str, lt: &LabeledTree) -> Result<(), String> {
    ensure(oracle_set_sequential(lt), || {
        format!("{what}: not set-sequential")
    })?;
    ensure(lt.verify().valid, || format!("{what}: verifier disagrees"))?;
    ensure(even_degree_xor(lt) == 0, || {
        format!("{what}: even-degree XOR nonzero")
    })
}

fn criterion_1(_: &mut Vec<LabeledTree>) -> Verdict {
    let fig = Fixtures::bundled().figure1().map_err(|e| e.to_string())?;
    ensure(fig.tree.vertex_count() == 8 && fig.n() == 4, || {
        "figure is not 8 vertices over F_2^4".into()
    })?;
    let mut times: Vec<Duration> = (0..101)
        .map(|_| {
            let start = Instant::now();
            std::hint::black_box(fig.verify());
            start.elapsed()
        })
        .collect();
    times.sort();
    let took = times[times.len() / 2];
    ensure(fig.verify().valid && oracle_set_sequential(&fig), || {
        "figure labeling rejected".into()
    })?;
    ensure(took < Duration::from_millis(1), || {
        format!("verification took {took:?}")
    })?;
    // Relabeling a vertex can land on another valid labeling (a leaf taking
    // its edge's value, for one), so the verifier is held to the oracle's
    // verdict on every mutant rather than to blanket rejection.
    let (mut rejected, mut survivors) = (0, Vec::new());
    for v in 0..8 {
        for x in 0..16u32 {
            if x == fig.label(v).bits() {
                continue;
            }
            let mut labels = fig.labeling.labels().to_vec();
            labels[v] = BitVec::new(x, 4);
            let m = LabeledTree::new(fig.tree.clone(), Labeling::new(4, labels).unwrap()).unwrap();
            let valid = m.verify().valid;
            ensure(valid == oracle_set_sequential(&m), || {
                format!("verifier and oracle disagree on vertex {v} -> {x:04b}")
            })?;
            if valid {
                survivors.push(format!("{v}->{x:04b}"));
            } else {
                rejected += 1;
            }
        }
    }
    Ok(format!(
        "verify_median={took:?} mutants_rejected={rejected}/120 still_set_sequential=[{}]",
        survivors.join(" ")
    ))
}

fn criterion_2(_: &mut Vec<LabeledTree>) -> Verdict {
    let start = Instant::now();
    let mut detail = Vec::new();
    for n in [3, 4] {
        let r = sweep_shard(n, 1, 0, Duration::from_secs(60));
        ensure(r.failures.is_empty(), || {
            format!("n={n}: {} failures", r.failures.len())
        })?;
        detail.push(format!("n={n} instances={}", r.instances));
    }
    let took = start.elapsed();
    ensure(took < Duration::from_secs(300), || {
        format!("sweep took {took:?}")
    })?;
    Ok(format!(
        "{} failures=0 elapsed={took:.2?}",
        detail.join(" ")
    ))
}

fn criterion_3(_: &mut Vec<LabeledTree>) -> Verdict {
    const PER_CASE: usize = 10_000;
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let cases: [(&str, Generator); 4] = [
        ("dim<=5", &|rng| {
            let n = rng.gen_range(6..=10);
            let d = rng.gen_range(1..=5);
            (n, low_dimension(n, d, rng))
        }),
        ("dim6-even", &|rng| {
            let n = rng.gen_range(6..=10);
            (n, dim6_even(n, rng))
        }),
        ("<=n-values", &|rng| {
            let n = rng.gen_range(3..=10);
            (n, few_values(n, rng))
        }),
        ("dim<=n/2-even", &|rng| {
            let n = rng.gen_range(4..=12);
            (n, half_dim_even(n, rng))
        }),
    ];
    let mut detail = Vec::new();
    for (name, gen) in cases {
        let mut direct = 0;
        for i in 0..PER_CASE {
            let (n, vals) = gen(&mut rng);
            let inst = instance(n, &vals);
            let (part, _) = solve_pairing(&inst).map_err(|e| format!("{name} #{i}: {e}"))?;
            check_partition(&inst, &part).map_err(|e| format!("{name} #{i}: {e}"))?;
            // the half-dimension route sits behind the others in dispatch order
            if name == "dim<=n/2-even" {
                let (part, _) =
                    solve_with_route(&inst, RouteTag::DimHalfEven, &SolveOptions::default())
                        .map_err(|e| format!("{name} #{i} direct: {e}"))?;
                check_partition(&inst, &part).map_err(|e| format!("{name} #{i} direct: {e}"))?;
                direct += 1;
            }
        }
        detail.push(format!("{name}={PER_CASE}"));
        if direct > 0 {
            detail.push(format!("dim-half-direct={direct}"));
        }
    }
    let took = start.elapsed();
    ensure(took < Duration::from_secs(600), || format!("took {took:?}"))?;
    Ok(format!(
        "{} failures=0 elapsed={took:.2?}",
        detail.join(" ")
    ))
}

fn criterion_4(out: &mut Vec<LabeledTree>) -> Verdict {
    let mut slowest = Duration::ZERO;
    for name in Fixtures::BASE_SPECS {
        let spec: CaterpillarSpec = name.parse().unwrap();
        let tree = build_caterpillar(&spec);
        let cfg = SearchConfig {
            seed: SEED,
            budget: Duration::from_secs(60),
            strategy: Strategy::GreedyRestart,
            ..SearchConfig::default()
        };
        let start = Instant::now();
        let lab = search_labeling(&tree, &cfg).map_err(|e| format!("{name}: {e}"))?;
        let took = start.elapsed();
        slowest = slowest.max(took);
        ensure(took < Duration::from_secs(60), || {
            format!("{name} took {took:?}")
        })?;
        let lt = LabeledTree::new(tree, lab).unwrap();
        sound(name, &lt)?;
        out.push(lt);
    }
    Ok(format!(
        "bases={} seed={SEED} slowest={slowest:.2?}",
        Fixtures::BASE_SPECS.len()
    ))
}

fn criterion_5(out: &mut Vec<LabeledTree>) -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let fixtures = Fixtures::bundled();
    let mut count = 0;
    for diameter in 2..=18 {
        for _ in 0..20 {
            let n = rng.gen_range(min_dim(diameter)..=10);
            let spec = odd_caterpillar(diameter, n, &mut rng);
            let run =
                label_small_diameter_with(&spec, &fixtures).map_err(|e| format!("{spec}: {e}"))?;
            let lt = run.labeled;
            ensure(lt.tree.diameter() == diameter, || {
                format!("{spec}: wrong diameter")
            })?;
            sound(&spec.to_string(), &lt)?;
            let bound = run.spans[0];
            ensure(run.spans.iter().all(|&s| s <= bound), || {
                format!("{spec}: spans {:?} exceed {bound}", run.spans)
            })?;
            let center: Vec<BitVec> = (0..lt.tree.vertex_count())
                .filter(|&v| lt.tree.degree(v) > 1)
                .map(|v| lt.label(v))
                .collect();
            ensure(bitvec_rank(&center) <= bound, || {
                format!("{spec}: final center span")
            })?;
            out.push(lt);
            count += 1;
        }
    }
    Ok(format!("caterpillars={count} diameters=2..18"))
}

fn criterion_6(out: &mut Vec<LabeledTree>) -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 6);
    let mut largest = 0;
    for i in 0..20 {
        let n = rng.gen_range(3..=12u32);
        let diameter = rng.gen_range(2..=(n as usize + 1).min(1 << (n - 1)));
        let spec = odd_caterpillar(diameter, n, &mut rng);
        ensure(spec.vertex_count() >= 1 << (spec.diameter() - 1), || {
            format!("#{i} {spec}: generator broke the size condition")
        })?;
        let lt = label_large_caterpillar(&spec).map_err(|e| format!("{spec}: {e}"))?;
        sound(&spec.to_string(), &lt)?;
        largest = largest.max(lt.tree.vertex_count());
        out.push(lt);
    }
    Ok(format!("caterpillars=20 largest={largest}"))
}

fn criterion_7(out: &mut Vec<LabeledTree>) -> Verdict {
    let star = k_one_three();
    let (u, v) = star.tree.diametral_pair();
    let once = four_copies(&star, u, v).map_err(|e| e.to_string())?;
    let (u, v) = once.tree.diametral_pair();
    let twice = four_copies(&once, u, v).map_err(|e| e.to_string())?;
    for (c, lt, size) in [(1u32, &once, 16), (2, &twice, 64)] {
        let k = 3 * 4usize.pow(c) - 1;
        ensure(lt.tree.vertex_count() == size, || {
            format!("step {c}: {} vertices", lt.tree.vertex_count())
        })?;
        ensure(lt.tree.diameter() == k, || {
            format!("step {c}: diameter {} != {k}", lt.tree.diameter())
        })?;
        sound(&format!("four-copies step {c}"), lt)?;
    }
    out.extend([once, twice]);
    Ok("vertices=16,64 diameters=11,47".into())
}

#[allow(clippy::ptr_arg)]
fn criterion_8(produced: &mut Vec<LabeledTree>) -> Verdict {
    for (i, lt) in produced.iter().enumerate() {
        ensure(even_degree_xor(lt) == 0, || {
            format!("labeling #{i} has nonzero even-degree XOR")
        })?;
    }
    let cfg = SearchConfig {
        strategy: Strategy::Backtracking,
        ..SearchConfig::default()
    };
    match search_labeling(&Tree::path(4).unwrap(), &cfg) {
        Err(SearchError::Infeasible) => {}
        other => return Err(format!("P4 search returned {other:?}")),
    }
    Ok(format!(
        "labelings_checked={} p4=infeasible",
        produced.len()
    ))
}

fn criterion_9(_: &mut Vec<LabeledTree>) -> Verdict {
    let mut detail = Vec::new();
    for k in [5usize, 7, 9, 11] {
        let start = Instant::now();
        // path labels x_1, x_1+x_2, x_2, ... with unit vertex labels
        let n = (k as u32).div_ceil(2);
        let z: Vec<BitVec> = (0..k as u32)
            .map(|i| {
                let bits = if i % 2 == 0 {
                    1 << (i / 2)
                } else {
                    3 << (i / 2)
                };
                BitVec::new(bits, n)
            })
            .collect();
        let prefixes = solve_w_prefixes(k).map_err(|e| format!("k={k}: {e}"))?;
        let seq = build_w_sequence(&z, &prefixes).map_err(|e| format!("k={k}: {e}"))?;
        let took = start.elapsed();
        let w: Vec<u32> = seq.w.iter().map(|x| x.bits()).collect();
        ensure(w.len() == 4 * k + 3, || {
            format!("k={k}: {} entries", w.len())
        })?;
        ensure(w.iter().collect::<HashSet<_>>().len() == w.len(), || {
            format!("k={k}: repeats")
        })?;
        // w_{2i-1} + w_{2i+1} = w_{2i}, 1-based
        for i in 1..=2 * k + 1 {
            ensure(w[2 * i - 2] ^ w[2 * i] == w[2 * i - 1], || {
                format!("k={k}: chain at {i}")
            })?;
        }
        let mask = (1u32 << n) - 1;
        for (i, zi) in z.iter().enumerate() {
            let tops: HashSet<u32> = w
                .iter()
                .filter(|&&x| x & mask == zi.bits())
                .map(|&x| x >> n)
                .collect();
            ensure(tops.len() == 4, || {
                format!("k={k}: z_{} has {} prefixes", i + 1, tops.len())
            })?;
        }
        ensure(w.iter().filter(|&&x| x & mask == 0).count() == 3, || {
            format!("k={k}: zero suffixes")
        })?;
        ensure(took < Duration::from_secs(1), || {
            format!("k={k} took {took:?}")
        })?;
        detail.push(format!("k={k}:{took:.1?}"));
    }
    Ok(detail.join(" "))
}

fn main() {
    let criteria: [fn(&mut Vec<LabeledTree>) -> Verdict; 9] = [
        criterion_1,
        criterion_2,
        criterion_3,
        criterion_4,
        criterion_5,
        criterion_6,
        criterion_7,
        criterion_8,
        criterion_9,
    ];
    let mut produced = Vec::new();
    let mut failed = 0;
    for (i, run) in criteria.iter().enumerate() {
        let verdict = catch_unwind(AssertUnwindSafe(|| run(&mut produced)))
            .unwrap_or_else(|_| Err("panicked".into()));
        match verdict {
            Ok(detail) => println!("criterion {}: pass {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL {why}", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
