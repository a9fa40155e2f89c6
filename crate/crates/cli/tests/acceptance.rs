//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use survroute::engine::{
    local_search, random_immigrants, Evaluator, ImmigrationOp, LocalSearchOp, Normalization,
};
use survroute::measures::{hypervolume, ReferencePoint};
use survroute::scheduler::{OperatorPool, PoolKind};
use survroute::{
    run, CandidateSolution, NetworkInstance, NondominatedArchive, ObjectiveVector,
    ReductionPolicy, RunParams,
};

fn fixture_path(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../core/fixtures")
        .join(name)
}

fn fixture(name: &str) -> NetworkInstance {
    NetworkInstance::parse(&fs::read_to_string(fixture_path(name)).unwrap()).unwrap()
}

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

type Check = Box<dyn FnOnce(&mut Traces) -> Outcome>;

/// Every hypervolume trace produced by engine runs in this suite.
#[derive(Default)]
struct Traces(Vec<(String, Vec<f64>)>);

fn ov(v: &[f64]) -> ObjectiveVector {
    ObjectiveVector::new(v.to_vec()).unwrap()
}

// 1. Oracle equivalence on the standard fixture.
fn oracle_equivalence(traces: &mut Traces) -> Outcome {
    let inst = fixture("standard_3mr.net");
    let front = inst.brute_force_pareto().unwrap();
    let mut exact = 0;
    let mut slowest = Duration::ZERO;
    for seed in 0..20 {
        let params = RunParams {
            seed,
            budget: 10_000,
            ..RunParams::default()
        };
        let started = Instant::now();
        let result = run(&inst, &params).unwrap();
        slowest = slowest.max(started.elapsed());
        let got = result.archive.objectives();
        let equal = got.len() == front.len()
            && got.iter().zip(&front).all(|(g, p)| {
                g.values()
                    .iter()
                    .zip(p.objectives.values())
                    .all(|(a, b)| (a - b).abs() <= 1e-12)
            });
        exact += usize::from(equal);
        traces.0.push((format!("oracle seed {seed}"), result.hv_trace));
    }
    let pass = exact >= 19 && slowest < Duration::from_secs(5);
    outcome(
        pass,
        format!(
            "{exact}/20 runs hit the exact {}-point front (need 19), slowest run {:.3} s (limit 5 s)",
            front.len(),
            slowest.as_secs_f64()
        ),
    )
}

// 2. Archive invariants under random insert/reduce traffic.
fn archive_invariants() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let operations = 100_000;
    let mut violations = Vec::new();
    let mut reductions = 0u64;
    let mut archive = NondominatedArchive::new(Some(8)).unwrap();
    let mut next_id = 0u64;
    let mut fresh = |rng: &mut ChaCha8Rng| {
        next_id += 1;
        // a coarse grid forces equal coordinates and equal vectors
        let x = rng.gen_range(0..40) as f64;
        let y = rng.gen_range(0..40) as f64;
        CandidateSolution {
            genotype: next_id,
            objectives: ov(&[x, y]),
        }
    };
    for op in 0..operations {
        if op % 5000 == 0 {
            let cap = rng.gen_range(1..=12);
            archive = NondominatedArchive::new(Some(cap)).unwrap();
        }
        let cap = archive.capacity().unwrap();
        let policy = ReductionPolicy::ALL[rng.gen_range(0..2)];
        let batch: Vec<_> = if rng.gen_bool(0.5) {
            vec![fresh(&mut rng)]
        } else {
            (0..rng.gen_range(1..10)).map(|_| fresh(&mut rng)).collect()
        };

        // the set before truncation, computed independently
        let union: Vec<_> = archive.members().iter().chain(&batch).cloned().collect();
        let untruncated: Vec<_> = union
            .iter()
            .filter(|s| !union.iter().any(|t| t.objectives.dominates(&s.objectives)))
            .collect();
        let extremes: Vec<f64> = (0..2)
            .map(|k| {
                untruncated
                    .iter()
                    .map(|s| s.objectives.get(k))
                    .fold(f64::INFINITY, f64::min)
            })
            .collect();

        if batch.len() == 1 {
            archive.insert_with(batch[0].clone(), policy);
        } else {
            archive.merge(&batch, policy);
        }
        if untruncated.len() > cap {
            reductions += 1;
        }

        let z = archive.objectives();
        if z.iter().any(|a| z.iter().any(|b| a.dominates(b))) {
            violations.push(format!("op {op}: dominated pair"));
        }
        if z.len() > cap {
            violations.push(format!("op {op}: {} members over capacity {cap}", z.len()));
        }
        if cap >= 2 {
            for (k, &e) in extremes.iter().enumerate() {
                if !z.iter().any(|p| p.get(k) == e) {
                    violations.push(format!("op {op}: lost extreme of objective {k}"));
                }
            }
        }
        if violations.len() > 5 {
            break;
        }
    }
    outcome(
        violations.is_empty(),
        if violations.is_empty() {
            format!("{operations} operations ({reductions} truncating), no violations")
        } else {
            violations.join("; ")
        },
    )
}

// 3. Exact 2-D hypervolume against Monte Carlo.
fn hypervolume_monte_carlo() -> Outcome {
    let worked = hypervolume(&[ov(&[1.0, 2.0]), ov(&[2.0, 1.0])], &ReferencePoint::new(ov(&[3.0, 3.0])))
        .unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let samples = 1_000_000u64;
    let mut worst_z = 0.0f64;
    let mut failures = 0;
    for _ in 0..100 {
        let n = rng.gen_range(1..=12);
        let raw: Vec<[f64; 2]> = (0..n).map(|_| [rng.gen::<f64>(), rng.gen::<f64>()]).collect();
        let front: Vec<[f64; 2]> = raw
            .iter()
            .copied()
            .filter(|p| !raw.iter().any(|q| q[0] <= p[0] && q[1] <= p[1] && q != p))
            .collect();
        let r = [1.0 + rng.gen::<f64>() * 0.2, 1.0 + rng.gen::<f64>() * 0.2];
        let exact = hypervolume(
            &front.iter().map(|p| ov(p)).collect::<Vec<_>>(),
            &ReferencePoint::new(ov(&r)),
        )
        .unwrap();
        let lo = [
            front.iter().map(|p| p[0]).fold(f64::INFINITY, f64::min),
            front.iter().map(|p| p[1]).fold(f64::INFINITY, f64::min),
        ];
        let area = (r[0] - lo[0]) * (r[1] - lo[1]);
        let mut hits = 0u64;
        for _ in 0..samples {
            let x = lo[0] + rng.gen::<f64>() * (r[0] - lo[0]);
            let y = lo[1] + rng.gen::<f64>() * (r[1] - lo[1]);
            if front.iter().any(|p| p[0] <= x && p[1] <= y) {
                hits += 1;
            }
        }
        let p = hits as f64 / samples as f64;
        let estimate = area * p;
        let sigma = area * (p * (1.0 - p) / samples as f64).sqrt();
        let z = if sigma > 0.0 {
            (exact - estimate).abs() / sigma
        } else if exact == estimate {
            0.0
        } else {
            f64::INFINITY
        };
        worst_z = worst_z.max(z);
        if z > 3.0 {
            failures += 1;
        }
    }
    outcome(
        failures == 0 && worked == 3.0,
        format!(
            "HV({{(1,2),(2,1)}}, (3,3)) = {worked}; {} of 100 fronts outside 3 sigma, largest deviation {worst_z:.2} sigma",
            failures
        ),
    )
}

// 4. Monotone hypervolume traces.
fn monotone_traces(traces: &Traces) -> Outcome {
    let bad: Vec<&str> = traces
        .0
        .iter()
        .filter(|(_, t)| t.windows(2).any(|w| w[1] < w[0]))
        .map(|(name, _)| name.as_str())
        .collect();
    let points: usize = traces.0.iter().map(|(_, t)| t.len()).sum();
    outcome(
        bad.is_empty() && !traces.0.is_empty(),
        if bad.is_empty() {
            format!("{} runs, {points} trace points, no decrease", traces.0.len())
        } else {
            format!("decreasing trace in {}", bad.join(", "))
        },
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Op(usize);

const OP_NAMES: [&str; 6] = ["o0", "o1", "o2", "o3", "o4", "o5"];

impl survroute::scheduler::Operator for Op {
    fn name(&self) -> &'static str {
        OP_NAMES[self.0]
    }
}

// 5. Scheduler sanity.
fn scheduler_sanity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut bad = 0;
    for _ in 0..10_000 {
        let k = rng.gen_range(1..=6);
        let floor = rng.gen::<f64>() / k as f64;
        let window = rng.gen_range(1..=50);
        let mut pool =
            OperatorPool::new(PoolKind::Selection, (0..k).map(Op).collect(), window, floor).unwrap();
        let bias: f64 = rng.gen();
        for _ in 0..rng.gen_range(0..200) {
            let op = Op(rng.gen_range(0..k));
            let success = rng.gen_bool(bias);
            pool.report(op, success).unwrap();
        }
        let p = pool.probabilities();
        let sum: f64 = p.iter().sum();
        if (sum - 1.0).abs() > 1e-12 || p.iter().any(|&x| x < floor) {
            bad += 1;
        }
    }

    let mut pool = OperatorPool::new(PoolKind::Selection, vec![Op(0), Op(1)], 50, 0.1).unwrap();
    for s in [true, true] {
        pool.report(Op(0), s).unwrap();
    }
    for s in [false, false] {
        pool.report(Op(1), s).unwrap();
    }
    let p = pool.probabilities();
    let draws = 100_000;
    let first = (0..draws).filter(|_| pool.choose(&mut rng) == Op(0)).count();
    let freq = first as f64 / draws as f64;
    let target_ok = (p[0] - 0.7).abs() < 1e-12 && (p[1] - 0.3).abs() < 1e-12;
    outcome(
        bad == 0 && target_ok && (freq - 0.7).abs() <= 0.01,
        format!(
            "{bad} of 10000 random windows violate sum/floor; probabilities ({:.4}, {:.4}), first operator drawn {freq:.4} of {draws}",
            p[0], p[1]
        ),
    )
}

// 6. CLI determinism.
fn cli_determinism() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let run_once = |name: &str| -> Result<(Vec<u8>, serde_json::Value), String> {
        let out = dir.path().join(name);
        let status = Command::new(env!("CARGO_BIN_EXE_survroute"))
            .args(["run", "--seed", "11", "--budget", "10000"])
            .arg("--instance")
            .arg(fixture_path("stress_5mr.net"))
            .arg("--out")
            .arg(&out)
            .output()
            .map_err(|e| e.to_string())?;
        if !status.status.success() {
            return Err(String::from_utf8_lossy(&status.stderr).into_owned());
        }
        let front = fs::read(out.join("front.csv")).map_err(|e| e.to_string())?;
        let mut summary: serde_json::Value =
            serde_json::from_slice(&fs::read(out.join("summary.json")).map_err(|e| e.to_string())?)
                .map_err(|e| e.to_string())?;
        summary
            .as_object_mut()
            .ok_or("summary is not an object")?
            .remove("wall_clock_seconds");
        Ok((front, summary))
    };
    match (run_once("a"), run_once("b")) {
        (Ok(a), Ok(b)) => {
            let front_same = a.0 == b.0;
            let summary_same = a.1 == b.1;
            outcome(
                front_same && summary_same,
                format!(
                    "front.csv {} ({} bytes), summary.json without wall clock {}",
                    if front_same { "byte-identical" } else { "differs" },
                    a.0.len(),
                    if summary_same { "identical" } else { "differs" }
                ),
            )
        }
        (Err(e), _) | (_, Err(e)) => outcome(false, format!("run failed: {e}")),
    }
}

// 7. Operator closure on the stress fixture.
fn operator_closure() -> Outcome {
    let inst = fixture("stress_5mr.net");
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let trials = 10_000;
    let mut invalid = [0usize; 4];
    let mut evaluator = Evaluator::new(&inst, u64::MAX);
    let solution = |a| CandidateSolution {
        objectives: survroute::moo::evaluate(&inst, &a).unwrap(),
        genotype: a,
    };
    let archive: Vec<_> = (0..10)
        .map(|_| solution(inst.random_assignment(&mut rng).unwrap()))
        .collect();
    let norm = Normalization::from_points(archive.iter().map(|s| &s.objectives)).unwrap();

    for i in 0..trials {
        let a = inst.random_assignment(&mut rng).unwrap();
        let b = inst.random_assignment(&mut rng).unwrap();
        if !inst.is_valid(&inst.mutate_reattach(&a, &mut rng)) {
            invalid[0] += 1;
        }
        if !inst.is_valid(&inst.crossover_parentmix(&a, &b, &mut rng)) {
            invalid[1] += 1;
        }
        let op = LocalSearchOp::ALL[i % 2];
        let (improved, _) =
            local_search(vec![solution(a)], op, 20, &norm, &mut evaluator, &mut rng).unwrap();
        if !inst.is_valid(&improved[0].genotype) {
            invalid[2] += 1;
        }
        let population: Vec<_> = (0..10)
            .map(|_| solution(inst.random_assignment(&mut rng).unwrap()))
            .collect();
        let imm = ImmigrationOp::ALL[i % 2];
        let (next, _) =
            random_immigrants(&population, &archive, imm, 0.5, &mut evaluator, &mut rng).unwrap();
        if next.iter().any(|m| !inst.is_valid(&m.genotype)) {
            invalid[3] += 1;
        }
    }
    outcome(
        invalid == [0; 4],
        format!(
            "invalid results out of {trials} each: mutate_reattach {}, crossover_parentmix {}, local search {}, random_immigrants {}",
            invalid[0], invalid[1], invalid[2], invalid[3]
        ),
    )
}

// 8. Immigration under deliberately stagnating settings.
fn immigration_effect(traces: &mut Traces) -> Outcome {
    let inst = fixture("stress_5mr.net");
    let mut wins = 0;
    let mut ties = 0;
    for seed in 0..20 {
        let base = RunParams {
            seed,
            stagnation_window: 2,
            ..RunParams::default()
        };
        let with = run(&inst, &RunParams { immigrant_fraction: 0.3, ..base.clone() }).unwrap();
        let without = run(&inst, &RunParams { immigrant_fraction: 0.0, ..base }).unwrap();
        // same seed, same initial population, same reference point
        assert_eq!(with.reference, without.reference);
        let (a, b) = (with.final_hypervolume(), without.final_hypervolume());
        wins += usize::from(a >= b);
        ties += usize::from(a == b);
        traces.0.push((format!("immigration seed {seed} rho 0.3"), with.hv_trace));
        traces.0.push((format!("immigration seed {seed} rho 0"), without.hv_trace));
    }
    outcome(
        wins >= 15,
        format!("rho=0.3 at least as good in {wins}/20 paired seeds (need 15), {ties} exact ties"),
    )
}

fn main() -> ExitCode {
    let mut traces = Traces::default();
    let criteria: Vec<(&str, Check)> = vec![
        ("1 oracle equivalence", Box::new(oracle_equivalence)),
        ("2 archive invariants", Box::new(|_| archive_invariants())),
        ("3 hypervolume vs Monte Carlo", Box::new(|_| hypervolume_monte_carlo())),
        ("5 scheduler sanity", Box::new(|_| scheduler_sanity())),
        ("6 CLI determinism", Box::new(|_| cli_determinism())),
        ("7 operator closure", Box::new(|_| operator_closure())),
        ("8 immigration effect", Box::new(immigration_effect)),
    ];
    let mut results = Vec::new();
    for (name, check) in criteria {
        let started = Instant::now();
        let o = check(&mut traces);
        results.push((name, o, started.elapsed()));
    }
    // the trace criterion covers every engine run above
    let started = Instant::now();
    results.insert(3, ("4 monotone hypervolume trace", monotone_traces(&traces), started.elapsed()));

    let mut failed = 0;
    for (name, o, elapsed) in &results {
        println!(
            "criterion {name}: {} ({:.1} s) {}",
            if o.pass { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            o.detail
        );
        failed += usize::from(!o.pass);
    }
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
