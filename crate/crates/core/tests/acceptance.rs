//! Acceptance suite: one line per criterion, nonzero exit on any failure.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use num::traits::{One, Zero};
use rand::Rng;

use shiftlike::criteria::{
    cofinite_quotient_witness, conditionmix_lhs, hypercyclicity_report, menet_unilateral, shift_product_criterion,
    telescoping_bound_check, CoefficientFunctional, Verdict,
};
use shiftlike::factor::semiconjugacy_defect_with;
use shiftlike::lab::{construct_hc_approx, orbit_density_report};
use shiftlike::rational::{int, powi, rat};
use shiftlike::sampling::{random_step_function, random_system, rng_from_seed, SystemShape, TailChoice};
use shiftlike::step::{gs_decay_check, StepFunction};
use shiftlike::{derive_weights, Exponent, MeasureSystem, Rational, SeqVector, Side, Tails, WeightSequence};

const SEMICONJUGACY_BUDGET: Duration = Duration::from_secs(10);
const CONSTRUCTION_BUDGET: Duration = Duration::from_secs(1);
const HC_EPS: f64 = 0.01;

type Outcome = Result<String, String>;
type Check = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn dyadic(p: u32) -> MeasureSystem {
    MeasureSystem::single_cell(
        Exponent::integer(p),
        -20,
        20,
        |k| powi(&rat(1, 2), k.abs()),
        Some(Tails::symmetric(rat(1, 2))),
    )
    .unwrap()
}

/// Random table on a fixed window, kept for independent recomputation.
struct RawSystem {
    k_min: i64,
    mu: Vec<Vec<Rational>>,
    tails: Option<(Rational, Rational)>,
    sys: MeasureSystem,
}

impl RawSystem {
    fn sample<R: Rng>(rng: &mut R, k_min: i64, k_max: i64, max_cells: usize, p: Exponent) -> Self {
        let cells = rng.gen_range(1..=max_cells);
        let mu: Vec<Vec<Rational>> = (k_min..=k_max)
            .map(|_| (0..cells).map(|_| rat(rng.gen_range(1..=50), rng.gen_range(1..=50))).collect())
            .collect();
        const RATIOS: [(i64, i64); 6] = [(1, 3), (1, 2), (3, 4), (1, 1), (3, 2), (2, 1)];
        let tails = rng.gen_bool(0.8).then(|| {
            let (a, b) = RATIOS[rng.gen_range(0..RATIOS.len())];
            let (c, d) = RATIOS[rng.gen_range(0..RATIOS.len())];
            (rat(a, b), rat(c, d))
        });
        let names = (0..cells).map(|i| format!("B{i}")).collect();
        let sys = MeasureSystem::new(
            p,
            k_min,
            k_max,
            names,
            mu.clone(),
            tails.clone().map(|(l, r)| Tails::new(l, r)),
        )
        .unwrap();
        RawSystem { k_min, mu, tails, sys }
    }

    /// Level mass from the raw table and the tail rule.
    fn level(&self, k: i64) -> Rational {
        let k_max = self.k_min + self.mu.len() as i64 - 1;
        let sum = |row: &Vec<Rational>| row.iter().fold(Rational::zero(), |a, b| a + b);
        if k < self.k_min {
            let (l, _) = self.tails.as_ref().unwrap();
            sum(&self.mu[0]) * powi(l, self.k_min - k)
        } else if k > k_max {
            let (_, r) = self.tails.as_ref().unwrap();
            sum(self.mu.last().unwrap()) * powi(r, k - k_max)
        } else {
            sum(&self.mu[(k - self.k_min) as usize])
        }
    }
}

fn c1_semiconjugacy() -> Outcome {
    let mut rng = rng_from_seed(101);
    let start = Instant::now();
    let mut checked = 0;
    for s in 0..50 {
        let p = Exponent::integer(1 + s % 3);
        let raw = RawSystem::sample(&mut rng, -20, 20, 4, p);
        let w = derive_weights(&raw.sys).map_err(|e| e.to_string())?;
        for _ in 0..100 {
            let phi = random_step_function(&mut rng, &raw.sys, 6);
            let d = semiconjugacy_defect_with(&raw.sys, &w, &phi).map_err(|e| e.to_string())?;
            ensure(d.exact_zero, || format!("system {s}: defect {} on {phi:?}", d.value))?;
            checked += 1;
        }
    }
    let elapsed = start.elapsed();
    ensure(elapsed < SEMICONJUGACY_BUDGET, || format!("took {elapsed:?}"))?;
    Ok(format!("{checked} exact zero defects in {elapsed:.2?}"))
}

fn c2_weights() -> Outcome {
    let w = derive_weights(&dyadic(1)).map_err(|e| e.to_string())?;
    for k in -60..=60 {
        let expect = if k >= 1 { int(2) } else { rat(1, 2) };
        let got = w.wp(k).map_err(|e| e.to_string())?;
        ensure(*got == expect, || format!("dyadic wp({k}) = {got}"))?;
    }
    let mut rng = rng_from_seed(202);
    for s in 0..10 {
        let (lo, hi) = (-rng.gen_range(0..6), rng.gen_range(0..6));
        let raw = RawSystem::sample(&mut rng, lo, hi, 3, Exponent::integer(2));
        let w = derive_weights(&raw.sys).map_err(|e| e.to_string())?;
        let k_max = raw.k_min + raw.mu.len() as i64 - 1;
        let range = if raw.tails.is_some() { raw.k_min - 5..=k_max + 5 } else { raw.k_min + 1..=k_max };
        for k in range {
            let expect = raw.level(k - 1) / raw.level(k);
            let got = w.wp(k).map_err(|e| e.to_string())?;
            ensure(*got == expect, || format!("system {s}: wp({k}) = {got}, ratio {expect}"))?;
        }
    }
    Ok("dyadic weights exact on [-60, 60]; 10 random systems agree with level ratios".into())
}

fn tail_systems() -> Vec<MeasureSystem> {
    let mut rng = rng_from_seed(303);
    let shape = SystemShape {
        p: Exponent::one(),
        max_side: 5,
        max_cells: 3,
        tails: TailChoice::Arbitrary,
    };
    (0..200)
        .map(|i| {
            let shape = SystemShape {
                p: Exponent::integer(1 + (i % 2) as u32),
                ..shape.clone()
            };
            random_system(&mut rng, &shape)
        })
        .collect()
}

fn c3_equivalence() -> Outcome {
    let mut sat = 0;
    for (i, sys) in tail_systems().iter().enumerate() {
        let a = hypercyclicity_report(sys, 32).map_err(|e| e.to_string())?.verdict;
        let w = derive_weights(sys).map_err(|e| e.to_string())?;
        let b = shift_product_criterion(&w, 32).map_err(|e| e.to_string())?.verdict;
        ensure(a == b, || format!("system {i}: {a:?} vs {b:?}"))?;
        ensure(a != Verdict::InconclusiveWindow, || format!("system {i} is not tail-decidable"))?;
        sat += (a == Verdict::Satisfied) as usize;
    }
    ensure(sat > 0 && sat < 200, || format!("degenerate sample: {sat} satisfied"))?;
    Ok(format!("200 systems, 0 disagreements ({sat} satisfied)"))
}

fn c4_coherence() -> Outcome {
    let mut sat = 0;
    for (i, sys) in tail_systems().iter().enumerate() {
        if hypercyclicity_report(sys, 32).map_err(|e| e.to_string())?.verdict != Verdict::Satisfied {
            continue;
        }
        sat += 1;
        let mix = conditionmix_lhs(sys, 256).map_err(|e| e.to_string())?;
        let v = mix.value.clone().ok_or_else(|| format!("system {i}: unbounded value"))?;
        ensure(v <= Rational::one(), || format!("system {i}: value {v}"))?;
        ensure(mix.exact, || format!("system {i}: value not exact"))?;
    }
    Ok(format!("{sat} satisfied systems, all with value ≤ 1"))
}

fn c5_decay() -> Outcome {
    let sys = dyadic(1);
    let chi = StepFunction::level_indicator(&sys, 0, Rational::one());
    let schedule: Vec<u64> = (1..=30).collect();
    let rep = gs_decay_check(&sys, &chi, &schedule).map_err(|e| e.to_string())?;
    for (i, n) in schedule.iter().enumerate() {
        let expect = powi(&rat(1, 2), *n as i64);
        for (name, norm) in [("forward", &rep.forward[i]), ("backward", &rep.backward[i])] {
            ensure(norm.pth_power.as_ref() == Some(&expect), || format!("{name} n = {n}: {:?}", norm.pth_power))?;
        }
    }
    Ok("‖T^n χ_W‖ = ‖T^{-n} χ_W‖ = 2^{-n} exactly for n ≤ 30".into())
}

fn c6_telescoping() -> Outcome {
    let c_ps = [rat(3, 2), int(2), int(4)];
    let bumps = [rat(1, 7), rat(1, 3), int(1), int(2)];
    let mut rng = rng_from_seed(606);
    let mut calls = 0;
    for s in 0..50 {
        let c_p = c_ps[s % 3].clone();
        let n = 1 + (s / 3 % 3) as u64;
        let pick = |rng: &mut rand_chacha::ChaCha8Rng| &c_p + &bumps[rng.gen_range(0..bumps.len())];
        // Every one-step ratio μ(f^k W)/μ(f^{k+1} W) exceeds C_p.
        let (k_min, k_max) = (-rng.gen_range(0..4), rng.gen_range(0..4));
        let mut levels = vec![Rational::one()];
        for _ in k_min..k_max {
            let next = levels.last().unwrap() / pick(&mut rng);
            levels.push(next);
        }
        let (left, right_inv) = (pick(&mut rng), pick(&mut rng));
        let sys = MeasureSystem::new(
            Exponent::one(),
            k_min,
            k_max,
            vec!["W".into()],
            levels.into_iter().map(|m| vec![m]).collect(),
            Some(Tails::new(left, right_inv.recip())),
        )
        .map_err(|e| e.to_string())?;
        for j in k_min - 2..=k_max + 2 {
            for n_k in 1..=64u64 {
                let out = telescoping_bound_check(&sys, n, &c_p, j, n_k).map_err(|e| format!("system {s}: {e}"))?;
                ensure(out.holds, || format!("system {s}, j = {j}, n_k = {n_k}: {} < {}", out.left, out.right))?;
                calls += 1;
            }
        }
    }
    Ok(format!("{calls} checks over 50 systems, 0 false"))
}

fn c7_menet() -> Outcome {
    let p = Exponent::one();
    let two = WeightSequence::constant(p.clone(), Side::Unilateral, int(2)).unwrap();
    let one = WeightSequence::constant(p.clone(), Side::Unilateral, int(1)).unwrap();
    let alt = WeightSequence::periodic_unilateral(p, vec![int(2), rat(1, 2)]).unwrap();
    let r2 = menet_unilateral(&two, 64, 64).map_err(|e| e.to_string())?;
    ensure(r2.report.verdict == Verdict::Violated, || format!("w ≡ 2: {:?}", r2.report.verdict))?;
    let r1 = menet_unilateral(&one, 64, 64).map_err(|e| e.to_string())?;
    ensure(r1.report.verdict == Verdict::Satisfied && r1.bound == Some(int(1)), || format!("w ≡ 1: {r1:?}"))?;
    let ra = menet_unilateral(&alt, 64, 64).map_err(|e| e.to_string())?;
    ensure(ra.report.verdict == Verdict::Satisfied && ra.bound == Some(int(2)), || format!("alternating: {ra:?}"))?;
    Ok("w ≡ 2 violated; w ≡ 1 bound 1; alternating bound 2".into())
}

fn c8_construction() -> Outcome {
    let w = derive_weights(&dyadic(1)).map_err(|e| e.to_string())?;
    let e = |n| SeqVector::basis(Side::Bilateral, n).unwrap();
    let targets = vec![e(0), e(0).add(&e(1)).unwrap(), e(-1)];
    let start = Instant::now();
    let approx = construct_hc_approx(&w, &targets, HC_EPS, 64).map_err(|e| e.to_string())?;
    let n_max = *approx.schedule.iter().max().unwrap();
    let density = orbit_density_report(&w, &approx.x, &targets, HC_EPS, n_max).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    ensure(approx.defects.iter().all(|&d| d <= HC_EPS), || format!("defects {:?}", approx.defects))?;
    ensure(density.fraction == 1.0, || format!("density {}", density.fraction))?;
    ensure(elapsed < CONSTRUCTION_BUDGET, || format!("took {elapsed:?}"))?;
    Ok(format!(
        "schedule {:?}, max defect {:.2e}, density 1.0, {elapsed:.2?}",
        approx.schedule,
        approx.defects.iter().cloned().fold(0.0, f64::max)
    ))
}

fn c9_witness() -> Outcome {
    let sys = dyadic(1);
    let mut rng = rng_from_seed(909);
    let mut cases = 0;
    for m in 0..=2usize {
        for n in 1..=3u64 {
            let functionals: Vec<CoefficientFunctional> = (0..m)
                .map(|_| {
                    CoefficientFunctional::new(
                        (-26..=-15).map(|k| ((k, 0), rat(rng.gen_range(-9..=9), rng.gen_range(1..=9)))),
                    )
                })
                .collect();
            let wit = cofinite_quotient_witness(&sys, n, &functionals).map_err(|e| e.to_string())?;
            ensure(!wit.phi.is_zero(), || format!("m = {m}: φ = 0"))?;
            for f in &functionals {
                ensure(f.eval(&wit.phi).is_zero(), || format!("m = {m}: functional {}", f.eval(&wit.phi)))?;
            }
            // Independent quotient: Σ|a|·2^{-|k-n|} / Σ|a|·2^{-|k|}.
            let (mut top, mut bottom) = (Rational::zero(), Rational::zero());
            for ((k, _), a) in wit.phi.iter() {
                let a = if *a < Rational::zero() { -a.clone() } else { a.clone() };
                top += &a * powi(&rat(1, 2), (k - n as i64).abs());
                bottom += &a * powi(&rat(1, 2), k.abs());
            }
            let q = top / bottom;
            ensure(wit.quotient_pow.as_ref() == Some(&q), || format!("m = {m}: quotient {:?} vs {q}", wit.quotient_pow))?;
            ensure(q <= Rational::one(), || format!("m = {m}: quotient {q}"))?;
            cases += 1;
        }
    }
    Ok(format!("{cases} witnesses in E \\ {{0}} with quotient ≤ 1"))
}

fn c10_cli_determinism() -> Outcome {
    let config = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/dyadic.json");
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_shiftlike"))
            .args(["report", "--seed", "7", "--samples", "20", "--config"])
            .arg(&config)
            .output()
            .map_err(|e| e.to_string())
    };
    let (a, b) = (run()?, run()?);
    ensure(a.status.success(), || String::from_utf8_lossy(&a.stderr).into_owned())?;
    ensure(a.stdout == b.stdout, || "reports differ".into())?;
    ensure(!a.stdout.is_empty(), || "empty report".into())?;
    Ok(format!("two runs, {} identical bytes", a.stdout.len()))
}

fn main() {
    let criteria: [Check; 10] = [
        ("semiconjugacy certificate", c1_semiconjugacy),
        ("weight formula", c2_weights),
        ("criterion equivalence", c3_equivalence),
        ("coherence", c4_coherence),
        ("decay", c5_decay),
        ("telescoping inequality", c6_telescoping),
        ("unilateral products", c7_menet),
        ("constructive hypercyclicity", c8_construction),
        ("witness subspace", c9_witness),
        ("cli determinism", c10_cli_determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL {name}: {detail}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
