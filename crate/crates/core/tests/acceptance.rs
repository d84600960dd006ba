//! Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any
//! failure.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qamin::automaton::{
    finiteness_period, is_finite_automaton, sober_reduce, FinitenessVerdict, Observable,
};
use qamin::io::{gen_instance, haar_unitary, load, save, InstanceKind};
use qamin::linalg::{hs_inner, partial_trace, ComplexMatrix};
use qamin::minimizer::{minimize, reduce_at, word_offdiag, MinimizationOptions, Outcome};
use qamin::opbasis::{build_split, comp_op_basis, image_basis};
use qamin::oracle::{behavior_table, superop_elementwise, OracleConfig};
use qamin::superop::{compose, conj_superop};
use qamin::{QuantumAutomaton, Tolerance, Word, C64};

type Verdict = Result<String, String>;
type Criterion = (&'static str, fn() -> Verdict);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    let took = start.elapsed();
    ensure(took < limit, || format!("took {took:.2?}, limit {limit:?}"))
}

fn table_deviation(
    a: &QuantumAutomaton,
    b: &QuantumAutomaton,
    depth: usize,
) -> Result<f64, String> {
    let cfg = OracleConfig::default();
    let ta = behavior_table(a, depth, &cfg).map_err(|e| e.to_string())?;
    let tb = behavior_table(b, depth, &cfg).map_err(|e| e.to_string())?;
    ta.max_deviation(&tb).map_err(|e| e.to_string())
}

fn basis_suite() -> Verdict {
    let start = Instant::now();
    let mut cuts = 0;
    for n in 2..=4usize {
        for n_a in 1..n {
            let split = build_split(n, n_a).map_err(|e| e.to_string())?;
            let defect = split.union_basis().orthonormality_defect();
            ensure(defect <= 1e-10, || {
                format!("n={n} n_A={n_a}: orthonormality defect {defect:e}")
            })?;
            let s0 = (1usize << n) * ((1 << n) - (1 << n_a));
            ensure(split.s0_size() == s0, || {
                format!("n={n} n_A={n_a}: |S0| = {}", split.s0_size())
            })?;
            ensure(
                split.class_sets.iter().all(|s| s.len() == 1 << (n - n_a)),
                || format!("n={n} n_A={n_a}: class set size"),
            )?;
            for (i, v) in split.k_basis.vectors.iter().enumerate() {
                let img = partial_trace(v, n, n_a)
                    .map_err(|e| e.to_string())?
                    .max_abs();
                ensure(img <= 1e-12, || {
                    format!("n={n} n_A={n_a}: K vector {i} has image {img:e}")
                })?;
            }
            let scale = ((1usize << (n - n_a)) as f64).sqrt();
            for (j, (q, e)) in split
                .q_basis
                .vectors
                .iter()
                .zip(&image_basis(n_a).vectors)
                .enumerate()
            {
                let img = partial_trace(q, n, n_a).map_err(|e| e.to_string())?;
                let d = img.max_abs_diff(&e.scale_real(scale));
                ensure(d <= 1e-12, || {
                    format!("n={n} n_A={n_a}: Q vector {j} image off by {d:e}")
                })?;
            }
            cuts += 1;
        }
    }
    within(start, Duration::from_secs(10))?;
    Ok(format!("{cuts} cuts in {:.2?}", start.elapsed()))
}

fn superop_suite() -> Verdict {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let (mut worst_fast, mut worst_hom, mut worst_ip) = (0f64, 0f64, 0f64);
    for n in 1..=3usize {
        let d = 1 << n;
        let basis = comp_op_basis(n);
        for _ in 0..20 {
            let u = haar_unitary(d, &mut rng);
            let v = haar_unitary(d, &mut rng);
            let su = conj_superop(&u, &basis).map_err(|e| e.to_string())?;
            let sv = conj_superop(&v, &basis).map_err(|e| e.to_string())?;
            worst_fast = worst_fast.max(su.matrix.max_abs_diff(&superop_elementwise(&u, &basis)));
            let suv = conj_superop(&u.matmul(&v), &basis).map_err(|e| e.to_string())?;
            let composed = compose(&su, &sv).map_err(|e| e.to_string())?;
            worst_hom = worst_hom.max(suv.matrix.max_abs_diff(&composed.matrix));
            let a = ComplexMatrix::from_fn(d, d, |_, _| {
                C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
            });
            let b = ComplexMatrix::from_fn(d, d, |_, _| {
                C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
            });
            let lhs =
                hs_inner(&a.conjugate_by(&u), &b.conjugate_by(&u)).map_err(|e| e.to_string())?;
            let rhs = hs_inner(&a, &b).map_err(|e| e.to_string())?;
            worst_ip = worst_ip.max((lhs - rhs).norm());
        }
    }
    ensure(worst_fast <= 1e-12, || {
        format!("fast vs oracle {worst_fast:e}")
    })?;
    ensure(worst_hom <= 1e-10, || format!("homomorphism {worst_hom:e}"))?;
    ensure(worst_ip <= 1e-10, || format!("inner product {worst_ip:e}"))?;
    within(start, Duration::from_secs(30))?;
    Ok(format!(
        "oracle {worst_fast:.1e}, homomorphism {worst_hom:.1e}, inner product {worst_ip:.1e}"
    ))
}

fn positive_minimization() -> Verdict {
    let start = Instant::now();
    let mut worst = 0f64;
    for k in 0..50u64 {
        let n = 2 + (k % 2) as usize;
        let letters = 1 + (k % 3) as usize;
        let m = gen_instance(InstanceKind::Product, n, 1, letters, 1000 + k)
            .map_err(|e| e.to_string())?;
        let report = minimize(&m, &MinimizationOptions::default()).map_err(|e| e.to_string())?;
        let reduced = report
            .reduced()
            .ok_or_else(|| format!("seed {}: not reduced", 1000 + k))?;
        ensure(report.n_bar() == Some(1), || {
            format!("seed {}: n_bar {:?}", 1000 + k, report.n_bar())
        })?;
        worst = worst.max(table_deviation(&m, reduced, 4)?);
    }
    ensure(worst <= 1e-9, || format!("behavior deviation {worst:e}"))?;
    within(start, Duration::from_secs(120))?;
    Ok(format!("50 instances, max deviation {worst:.1e}"))
}

fn negative_control() -> Verdict {
    let start = Instant::now();
    let mut weakest = f64::INFINITY;
    for k in 0..20u64 {
        let n = 2 + (k % 2) as usize;
        let m =
            gen_instance(InstanceKind::Entangling, n, 1, 2, 2000 + k).map_err(|e| e.to_string())?;
        let report = minimize(&m, &MinimizationOptions::default()).map_err(|e| e.to_string())?;
        ensure(report.outcome == Outcome::AlreadyMinimal, || {
            format!("seed {}: reduced", 2000 + k)
        })?;
        ensure(report.tried.len() == n - 1, || {
            format!("seed {}: tried {} cuts", 2000 + k, report.tried.len())
        })?;
        for attempt in &report.tried {
            let off = attempt
                .letters
                .iter()
                .map(|l| l.max_offdiag())
                .fold(0.0, f64::max);
            ensure(off > 1e-3, || {
                format!("seed {} n_A={}: max_offdiag {off:e}", 2000 + k, attempt.n_a)
            })?;
            weakest = weakest.min(off);
        }
    }
    within(start, Duration::from_secs(60))?;
    Ok(format!("20 instances, smallest max_offdiag {weakest:.3e}"))
}

fn sober_agreement() -> Verdict {
    let tol = Tolerance::default();
    let mut worst = 0f64;
    for k in 0..20u64 {
        let n = 2 + (k % 2) as usize;
        let m = gen_instance(InstanceKind::Product, n, 1, 1 + (k % 3) as usize, 3000 + k)
            .map_err(|e| e.to_string())?;
        let a = sober_reduce(&m, 1, tol)
            .map_err(|e| e.to_string())?
            .ok_or("sober failed")?;
        let b = reduce_at(&m, 1, tol)
            .map_err(|e| e.to_string())?
            .ok_or("subspace failed")?;
        worst = worst.max(table_deviation(&a, &b, 4)?);
    }
    ensure(worst <= 1e-9, || format!("deviation {worst:e}"))?;
    Ok(format!("20 instances, max deviation {worst:.1e}"))
}

fn one_qubit(letters: Vec<(&str, ComplexMatrix)>) -> QuantumAutomaton {
    QuantumAutomaton::new(
        1,
        1,
        ComplexMatrix::unit(2, 2, 0, 0),
        letters
            .into_iter()
            .map(|(s, u)| (s.to_string(), u))
            .collect(),
        Observable::z_on_first(1),
    )
    .expect("valid one-qubit automaton")
}

fn phase(theta: f64) -> ComplexMatrix {
    ComplexMatrix::diag(&[C64::new(1.0, 0.0), C64::from_polar(1.0, theta)])
}

fn finiteness() -> Verdict {
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4};
    let start = Instant::now();
    let tol = Tolerance::default();
    let period =
        |u: &ComplexMatrix, max_p| finiteness_period(u, max_p, tol).map_err(|e| e.to_string());
    ensure(period(&phase(FRAC_PI_2), 16)? == Some(4), || {
        "S gate".into()
    })?;
    ensure(period(&phase(FRAC_PI_4), 16)? == Some(8), || {
        "T gate".into()
    })?;
    ensure(period(&phase(1.0), 1024)?.is_none(), || {
        "diag(1, e^i) has a period".into()
    })?;

    let diag = one_qubit(vec![
        ("s", phase(FRAC_PI_2)),
        ("t", phase(FRAC_PI_4)),
        ("z", phase(std::f64::consts::PI)),
    ]);
    let v = is_finite_automaton(&diag, Some(64), false, tol).map_err(|e| e.to_string())?;
    ensure(v.verdict == FinitenessVerdict::Finite, || {
        format!("diagonal alphabet: {:?}", v.verdict)
    })?;

    let x = ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0]);
    let h = ComplexMatrix::from_real(2, 2, &[1.0, 1.0, 1.0, -1.0]).scale_real(FRAC_1_SQRT_2);
    let v = is_finite_automaton(&one_qubit(vec![("x", x), ("h", h)]), Some(64), false, tol)
        .map_err(|e| e.to_string())?;
    ensure(v.verdict == FinitenessVerdict::Unknown, || {
        format!("{{X, H}}: {:?}", v.verdict)
    })?;
    within(start, Duration::from_secs(5))?;
    Ok("S=4, T=8, diag(1,e^i) none to 1024, diagonal finite, {X,H} unknown".into())
}

fn word_extension() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst = 0f64;
    let mut words = 0;
    for k in 0..4u64 {
        let n = 2 + (k % 2) as usize;
        let m =
            gen_instance(InstanceKind::Product, n, 1, 3, 4000 + k).map_err(|e| e.to_string())?;
        let opts = MinimizationOptions {
            try_sober_first: false,
            ..Default::default()
        };
        let n_bar = minimize(&m, &opts)
            .map_err(|e| e.to_string())?
            .n_bar()
            .ok_or("not reduced")?;
        for _ in 0..25 {
            let len = rng.random_range(0..=5);
            let symbols = (0..len)
                .map(|_| m.alphabet()[rng.random_range(0..m.alphabet().len())].clone())
                .collect();
            let off =
                word_offdiag(&m, &Word::from_symbols(symbols), n_bar).map_err(|e| e.to_string())?;
            worst = worst.max(off);
            words += 1;
        }
    }
    ensure(worst <= 1e-8, || format!("max off-diagonal {worst:e}"))?;
    Ok(format!("{words} words, max off-diagonal {worst:.1e}"))
}

fn cost_growth() -> Verdict {
    let opts = MinimizationOptions {
        try_sober_first: false,
        ..Default::default()
    };
    let mut points = Vec::new();
    let mut n4_time = Duration::ZERO;
    for n in 2..=4usize {
        let m = gen_instance(InstanceKind::Product, n, 1, 1, 5000 + n as u64)
            .map_err(|e| e.to_string())?;
        let start = Instant::now();
        let report = minimize(&m, &opts).map_err(|e| e.to_string())?;
        if n == 4 {
            n4_time = start.elapsed();
        }
        ensure(report.n_bar() == Some(1), || format!("n={n} not reduced"))?;
        let big_n = (1u64 << (2 * n)) as f64;
        points.push((big_n.ln(), (report.op_count.total() as f64).ln()));
    }
    let mean_x = points.iter().map(|p| p.0).sum::<f64>() / points.len() as f64;
    let mean_y = points.iter().map(|p| p.1).sum::<f64>() / points.len() as f64;
    let slope = points
        .iter()
        .map(|(x, y)| (x - mean_x) * (y - mean_y))
        .sum::<f64>()
        / points
            .iter()
            .map(|(x, _)| (x - mean_x).powi(2))
            .sum::<f64>();
    ensure(slope <= 7.0, || format!("slope {slope:.3}"))?;
    ensure(n4_time < Duration::from_secs(60), || {
        format!("n=4 took {n4_time:.2?}")
    })?;
    Ok(format!("slope {slope:.3}, n=4 in {n4_time:.2?}"))
}

fn serialization() -> Verdict {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let kinds = [
        InstanceKind::Product,
        InstanceKind::Entangling,
        InstanceKind::Random,
    ];
    for k in 0..100u64 {
        let kind = kinds[(k % 3) as usize];
        let n = 2 + (k % 2) as usize;
        let m =
            gen_instance(kind, n, 1, 1 + (k % 3) as usize, 6000 + k).map_err(|e| e.to_string())?;
        let report = m.validate(Tolerance::default());
        ensure(report.is_empty(), || format!("seed {}: {report}", 6000 + k))?;
        let path = dir.path().join(format!("{k}.json"));
        save(&m, &path).map_err(|e| e.to_string())?;
        let back = load(&path).map_err(|e| e.to_string())?;
        let exact = back
            .rho0()
            .data()
            .iter()
            .zip(m.rho0().data())
            .all(|(a, b)| a.re.to_bits() == b.re.to_bits() && a.im.to_bits() == b.im.to_bits());
        ensure(exact && back == m, || {
            format!("seed {}: round trip differs", 6000 + k)
        })?;
    }
    Ok("100 instances bit-exact and valid".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("1 basis suite", basis_suite),
        ("2 superoperator suite", superop_suite),
        ("3 positive minimization", positive_minimization),
        ("4 negative control", negative_control),
        ("5 sober vs subspace agreement", sober_agreement),
        ("6 finiteness", finiteness),
        ("7 letter-to-word extension", word_extension),
        ("8 cost growth", cost_growth),
        ("9 serialization", serialization),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        match run() {
            Ok(detail) => println!("PASS  {name}: {detail}"),
            Err(reason) => {
                failed += 1;
                println!("FAIL  {name}: {reason}");
            }
        }
    }
    println!("{} of 9 criteria passed", 9 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
