use std::time::{Duration, Instant};

use nalgebra::DMatrix;
use ortho_moments::closed_forms::{
    integral_n2, integral_two_row, joint_moments, one_row_integral, phi_triangular, phi_two_row,
};
use ortho_moments::monte_carlo::{haar_sample, mc_integral};
use ortho_moments::pairings::enumerate_pairings;
use ortho_moments::two_by_two::{conjecture_odd_sum, f_value_with, Quad};
use ortho_moments::verify::{verify, Budget, PropertyId, VerificationReport};
use ortho_moments::weingarten::{
    elementary_matrix_of, gram_is_singular, integral_oracle, integral_oracle_with,
    weingarten_entry, weingarten_matrix, SingularPolicy,
};
use ortho_moments::{ExactRational, ExponentMatrix};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Check = std::result::Result<String, String>;

fn q(a: i64, b: i64) -> ExactRational {
    ExactRational::new(a, b)
}

fn m(rows: &[&[u32]]) -> ExponentMatrix {
    ExponentMatrix::from_rows(rows).unwrap()
}

fn expect(label: &str, got: ExactRational, want: &ExactRational) -> std::result::Result<(), String> {
    if &got == want {
        Ok(())
    } else {
        Err(format!("{label}: got {got}, expected {want}"))
    }
}

fn run_property(p: PropertyId, budget: Budget) -> std::result::Result<VerificationReport, String> {
    let r = verify(p, &budget, 1).map_err(|e| format!("{p}: {e}"))?;
    if !r.passed() {
        let why = match (r.first_counterexample(), r.errors.first()) {
            (Some(f), _) => format!("{} at n={}: {} vs {}", f.input, f.n, f.lhs, f.rhs),
            (None, Some(e)) => format!("{} at n={}: {}", e.input, e.n, e.message),
            _ => "unsound on extra points".into(),
        };
        return Err(format!("{p} FAIL ({} cases): {why}", r.cases));
    }
    Ok(r)
}

fn c1() -> Check {
    let (pairs, w) = weingarten_matrix(2, 3).map_err(|e| e.to_string())?;
    for i in 0..pairs.len() {
        for j in 0..pairs.len() {
            let want = if i == j { q(2, 15) } else { q(-1, 30) };
            expect(&format!("W[{i}][{j}]"), w[i][j].clone(), &want)?;
        }
    }
    Ok(format!("{}x{} table at n=3", pairs.len(), pairs.len()))
}

fn c2() -> Check {
    for n in 3..=10u32 {
        let ni = n as i64;
        let cases = [
            (m(&[&[4]]), q(3, ni * (ni + 2))),
            (m(&[&[2, 2]]), q(1, ni * (ni + 2))),
            (m(&[&[2, 0], &[0, 2]]), q(ni + 1, ni * (ni - 1) * (ni + 2))),
        ];
        let closed = [
            one_row_integral(&[4], n),
            one_row_integral(&[2, 2], n),
            integral_two_row(&[1, 0], &[0, 1], n),
        ];
        for ((a, want), c) in cases.iter().zip(closed) {
            let o = integral_oracle(a, n).map_err(|e| e.to_string())?;
            expect(&format!("oracle {a} n={n}"), o, want)?;
            expect(&format!("closed {a} n={n}"), c.map_err(|e| e.to_string())?, want)?;
        }
    }
    Ok("3 matrices, n=3..10, oracle and closed".into())
}

/// Two-row exponent matrices with even entries, no zero column, total degree at most `max_total`.
fn even_two_row(max_total: u32) -> Vec<(Vec<u32>, Vec<u32>)> {
    fn grow(budget: u32, top: &mut Vec<u32>, bot: &mut Vec<u32>, out: &mut Vec<(Vec<u32>, Vec<u32>)>) {
        if !top.is_empty() {
            out.push((top.clone(), bot.clone()));
        }
        for t in (0..=budget).step_by(2) {
            for b in (0..=budget - t).step_by(2) {
                if t + b == 0 {
                    continue;
                }
                top.push(t);
                bot.push(b);
                grow(budget - t - b, top, bot, out);
                top.pop();
                bot.pop();
            }
        }
    }
    let mut out = Vec::new();
    grow(max_total, &mut Vec::new(), &mut Vec::new(), &mut out);
    out
}

fn c3() -> Check {
    let mut checked = 0usize;
    for (top, bot) in even_two_row(10) {
        let kappa = (top.iter().sum::<u32>() + bot.iter().sum::<u32>()) / 2;
        let a = ExponentMatrix::two_row(&top, &bot).unwrap();
        let halves = |v: &[u32]| v.iter().map(|x| x / 2).collect::<Vec<_>>();
        for n in kappa + 1..=kappa + 4 {
            let o = integral_oracle(&a, n).map_err(|e| format!("{a} n={n}: {e}"))?;
            let c = integral_two_row(&halves(&top), &halves(&bot), n)
                .map_err(|e| format!("{a} n={n}: {e}"))?;
            expect(&format!("{a} n={n}"), c, &o)?;
            checked += 1;
        }
    }
    let r = run_property(PropertyId::TwoRowVsOracle, Budget::for_property(PropertyId::TwoRowVsOracle))?;
    Ok(format!("{checked} direct evaluations; verifier {} cases", r.cases))
}

fn c4() -> Check {
    let mut singular = 0;
    for alpha in [0u32, 2, 4] {
        for beta in [0u32, 2, 4] {
            for n in 3..=5u32 {
                let a = m(&[&[0, alpha], &[beta, 0]]);
                let k = ((alpha + beta) / 2) as usize;
                let policy = if gram_is_singular(k, n).map_err(|e| e.to_string())? {
                    singular += 1;
                    SingularPolicy::ConsistentSolve
                } else {
                    SingularPolicy::Refuse
                };
                let o = integral_oracle_with(&a, n, 5, policy).map_err(|e| e.to_string())?;
                let c = joint_moments(alpha, beta, n).map_err(|e| e.to_string())?;
                expect(&format!("({alpha},{beta},{n})"), c, &o)?;
            }
        }
    }
    expect("anchor (2,2,3)", joint_moments(2, 2, 3).map_err(|e| e.to_string())?, &q(2, 15))?;
    Ok(format!("27 points, {singular} via consistent singular solve"))
}

fn c5() -> Check {
    let mut cases = 0;
    for p in [PropertyId::Flipping, PropertyId::Compression, PropertyId::Transmutation] {
        cases += run_property(p, Budget::for_property(p))?.cases;
    }
    let lhs = phi_two_row(&[1, 1], &[1, 0], 3).map_err(|e| e.to_string())?;
    let rhs = phi_two_row(&[1], &[1], 5).map_err(|e| e.to_string())?;
    expect("Phi_3(2,2;2,0)", lhs.clone(), &q(32, 105))?;
    expect("Phi_5(2;2)", rhs.clone(), &q(16, 35))?;
    expect("ratio", lhs, &(q(2, 3) * rhs))?;
    Ok(format!("{cases} cases"))
}

fn c6() -> Check {
    let mut cases = 0;
    for p in [PropertyId::BasicExtension, PropertyId::RecursiveExtension] {
        cases += run_property(p, Budget::for_property(p))?.cases;
    }
    let mut tri = 0;
    for a in [0u32, 2, 4] {
        for b in [0u32, 2, 4] {
            for c in [0u32, 2, 4] {
                for n in 3..=9u32 {
                    let t = phi_triangular(a, b, c, n).map_err(|e| e.to_string())?;
                    let g = phi_two_row(&[a / 2, c / 2], &[b / 2, 0], n).map_err(|e| e.to_string())?;
                    expect(&format!("triangular ({a},{b},{c}) n={n}"), t, &g)?;
                    tri += 1;
                }
            }
        }
    }
    expect("(2,2,2) n=3", phi_triangular(2, 2, 2, 3).map_err(|e| e.to_string())?, &q(32, 105))?;
    expect("(2,2,2) n=4", phi_triangular(2, 2, 2, 4).map_err(|e| e.to_string())?, &q(25, 64))?;
    Ok(format!("{cases} extension cases, {tri} triangular points"))
}

fn c7() -> Check {
    let budget = Budget {
        n_values: Some(vec![4, 5, 6]),
        ..Budget::for_property(PropertyId::WeingartenElementary)
    };
    let r = run_property(PropertyId::WeingartenElementary, budget)?;
    let target = m(&[&[1, 1, 0], &[1, 1, 0], &[0, 0, 2]]);
    let pairs = enumerate_pairings(3).map_err(|e| e.to_string())?;
    let mut found = 0;
    for p in &pairs {
        for s in &pairs {
            if elementary_matrix_of(p, s).map_err(|e| e.to_string())? != target {
                continue;
            }
            found += 1;
            for n in 4..=6u32 {
                let w = weingarten_entry(3, n, p, s).map_err(|e| e.to_string())?;
                let i = integral_oracle(&target, n).map_err(|e| e.to_string())?;
                expect(&format!("{target} n={n}"), w, &i)?;
            }
        }
    }
    if found == 0 {
        return Err(format!("no pairing pair produces {target}"));
    }
    Ok(format!("{} cases; {target} from {found} pairs", r.cases))
}

fn c8() -> Check {
    let r = run_property(PropertyId::N2VsOracle, Budget::for_property(PropertyId::N2VsOracle))?;
    expect("(2,0,0,2)", integral_n2(2, 0, 0, 2), &q(3, 8))?;
    expect("(1,1,1,1)", integral_n2(1, 1, 1, 1), &q(-1, 8))?;
    let o = integral_oracle(&m(&[&[2, 0], &[0, 2]]), 2).map_err(|e| e.to_string())?;
    expect("oracle (2,0,0,2)", o, &q(3, 8))?;
    let o = integral_oracle(&m(&[&[1, 1], &[1, 1]]), 2).map_err(|e| e.to_string())?;
    expect("oracle (1,1,1,1)", o, &q(-1, 8))?;
    Ok(format!("{} cases", r.cases))
}

fn conjecture(p: PropertyId) -> std::result::Result<VerificationReport, String> {
    run_property(p, Budget { n_values: Some((4..=8).collect()), ..Budget::for_property(p) })
}

fn c9() -> Check {
    let r = conjecture(PropertyId::ConjectureEven)?;
    Ok(format!("{} quads, n=4..8", r.cases))
}

fn c10() -> Check {
    let r = conjecture(PropertyId::ConjectureOdd)?;
    let quad = Quad::new(1, 1, 1, 1);
    let s = conjecture_odd_sum(quad, 4).map_err(|e| e.to_string())?;
    let f = f_value_with(quad, 4, SingularPolicy::Refuse).map_err(|e| e.to_string())?;
    expect("sum (1,1,1,1) n=4", s, &q(-1, 648))?;
    expect("f (1,1,1,1) n=4", f, &q(-1, 648))?;
    Ok(format!("{} quads, n=4..8, {} singular evaluations", r.cases, r.singular_evaluations))
}

fn c11() -> Check {
    let budget = Budget {
        n_values: Some(vec![10, 20, 40]),
        ..Budget::for_property(PropertyId::Asymptotic)
    };
    let r = run_property(PropertyId::Asymptotic, budget)?;
    Ok(format!("{} matrices, n=10..80", r.cases))
}

fn c12() -> Check {
    let est = mc_integral(&m(&[&[4]]), 3, 1_000_000, 2024).map_err(|e| e.to_string())?;
    let dev = (est.mean - 0.2).abs();
    if dev > 5.0 * est.standard_error {
        return Err(format!("mean {} is {:.1} SE from 1/5", est.mean, dev / est.standard_error));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut worst = 0.0f64;
    for n in 1..=8usize {
        for _ in 0..500 {
            let u = haar_sample(n, &mut rng);
            worst = worst.max((u.transpose() * &u - DMatrix::<f64>::identity(n, n)).abs().max());
        }
    }
    if worst > 1e-12 {
        return Err(format!("orthogonality defect {worst:e}"));
    }
    Ok(format!(
        "mean {:.5} +- {:.1e} ({:.2} SE), max defect {worst:.1e}",
        est.mean,
        est.standard_error,
        dev / est.standard_error
    ))
}

fn main() {
    let criteria: [(&str, Option<Duration>, fn() -> Check); 12] = [
        ("weingarten table k=2", Some(Duration::from_secs(1)), c1),
        ("low-degree moments", Some(Duration::from_secs(5)), c2),
        ("two-row formula vs oracle", Some(Duration::from_secs(600)), c3),
        ("joint moments vs oracle", None, c4),
        ("invariance principles", None, c5),
        ("extension and triangular", None, c6),
        ("weingarten elementary", None, c7),
        ("n=2 closed form", None, c8),
        ("even quad identity", None, c9),
        ("odd quad identity", None, c10),
        ("asymptotic ratio", None, c11),
        ("monte carlo", Some(Duration::from_secs(60)), c12),
    ];
    let mut failed = 0;
    for (i, (name, limit, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let mut outcome = check();
        let took = start.elapsed();
        if let (Ok(_), Some(limit)) = (&outcome, limit) {
            if took > *limit {
                outcome = Err(format!("took {took:.2?}, limit {limit:?}"));
            }
        }
        let (status, detail) = match outcome {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!("criterion {:>2} {status} {name} [{took:.2?}] {detail}", i + 1);
    }
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
