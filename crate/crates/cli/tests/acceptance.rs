//! Acceptance suite: one line per criterion, nonzero exit if any fails.
//!
//! Run with `cargo test --test acceptance`.

use std::process::{Command, ExitCode};
use std::time::Instant;

use serde_json::Value;
use so8_triality::exact::{q, rref, Rational, SquareMatrix};
use so8_triality::invariants::{
    block_model, c3_from_invariants, invariant_vector, newton_coefficients,
    pfaffian_fixed_zero_sum, pfaffian_matchings, pfaffian_permutation_sum, spectral_coefficients,
    t_matrix, EtaModel, InvariantVector,
};
use so8_triality::octonion::{structure_constants, Octonion, SignedBasis};
use so8_triality::so8::{bracket, quadruples, Sampler, So8Element, DIM};
use so8_triality::triality::{
    identify_fixed_algebra, sigma, so7_fixed_subalgebra, standard_block,
    verify_bracket_preservation, FixedSubalgebra, SubalgebraTag, TrialityMap,
};
use so8_triality_cli::run;
use tempfile::TempDir;

type Outcome = Result<(), String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

fn ensure(cond: bool, msg: impl Into<String>) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn sampler(seed: u64) -> Sampler {
    Sampler::new(seed, 9).expect("positive bound")
}

fn default_report() -> Value {
    let out = run(["triality", "verify", "--json"]);
    serde_json::from_str(&out.stdout).expect("verify emits JSON")
}

fn check<'a>(report: &'a Value, id: &str) -> Result<&'a Value, String> {
    report["checks"]
        .as_array()
        .and_then(|cs| cs.iter().find(|c| c["check_id"] == id))
        .ok_or_else(|| format!("report has no check {id}"))
}

fn discrepancy_confirmed(report: &Value, id: &str) -> Outcome {
    let c = check(report, id)?;
    ensure(
        c["status"] == "discrepancy-confirmed",
        format!("{id}: status {}", c["status"]),
    )?;
    ensure(c["witness"].is_object(), format!("{id}: no witness"))?;
    ensure(
        c["witness"]["printed"] != c["witness"]["actual"],
        format!("{id}: witness does not disagree"),
    )
}

fn criterion_1() -> Outcome {
    let t = structure_constants();
    for i in 1..8 {
        ensure(
            t.product(i, i)
                == SignedBasis {
                    negative: true,
                    index: 0,
                },
            format!("e{i}^2 != -1"),
        )?;
        for j in 1..8 {
            if i != j {
                let (a, b) = (t.product(i, j), t.product(j, i));
                ensure(
                    a.index == b.index && a.negative != b.negative,
                    format!("e{i}e{j} != -e{j}e{i}"),
                )?;
            }
        }
    }
    ensure(
        t.product(5, 2)
            == SignedBasis {
                negative: false,
                index: 3,
            },
        "e5 e2 != e3",
    )?;
    for mu in 0..8 {
        for nu in 0..8 {
            let (x, y) = (Octonion::basis(mu), Octonion::basis(nu));
            ensure(
                (&x * &y).rotate() == &x.rotate() * &y.rotate(),
                format!("rotation fails on e{mu} e{nu}"),
            )?;
        }
    }
    Ok(())
}

fn criterion_2() -> Outcome {
    let mut count = [0usize; DIM];
    for quad in quadruples() {
        for s in quad.slots {
            count[s.generator.index()] += 1;
        }
    }
    ensure(
        quadruples().len() == 7 && count.iter().all(|&c| c == 1),
        format!("generator multiplicities {count:?}"),
    )
}

fn criterion_3() -> Outcome {
    let m = standard_block();
    ensure(&m * &m == m.transpose(), "M^2 != M^T")?;
    ensure(m.pow(3) == SquareMatrix::identity(4), "M^3 != I")
}

fn criterion_4() -> Outcome {
    for n in 0..DIM {
        let x = So8Element::basis(n);
        ensure(
            sigma(&sigma(&sigma(&x))) == x,
            format!("sigma^3 moves basis element {n}"),
        )?;
    }
    let r = verify_bracket_preservation(TrialityMap::standard(), 100, 42, 9)
        .map_err(|e| e.to_string())?;
    ensure(
        r.basis_pairs == 784 && r.random_pairs == 100,
        "wrong pair counts",
    )?;
    ensure(
        r.passed(),
        format!("{} bracket violations", r.violations.len()),
    )
}

fn closed(s: &FixedSubalgebra) -> bool {
    s.basis()
        .iter()
        .all(|x| s.basis().iter().all(|y| s.contains(&bracket(x, y))))
}

fn criterion_5() -> Outcome {
    let g2 = FixedSubalgebra::fixed_locus(TrialityMap::standard().full(), SubalgebraTag::G2)
        .map_err(|e| e.to_string())?;
    ensure(g2.basis().iter().all(|x| sigma(x) == *x), "basis not fixed")?;
    ensure(closed(&g2), "g2 locus not closed")?;
    let r = identify_fixed_algebra(&g2);
    ensure(
        (r.dim, r.killing_nondegenerate, r.rank) == (14, true, 2),
        format!("g2 structure {r:?}"),
    )?;
    let so7 = so7_fixed_subalgebra().map_err(|e| e.to_string())?;
    ensure(closed(&so7), "so7 locus not closed")?;
    let r = identify_fixed_algebra(&so7);
    ensure(
        (r.dim, r.killing_nondegenerate, r.rank) == (21, true, 3),
        format!("so7 structure {r:?}"),
    )
}

/// The four closed-form expressions, written out independently of the library.
fn transformed(v: &InvariantVector) -> InvariantVector {
    let (p1, p2, p3, pf) = (&v.p1, &v.p2, &v.p3, &v.pf);
    let p1sq = p1 * p1;
    InvariantVector {
        p1: p1.clone(),
        p2: &(&(&q(3, 8) * &p1sq) - &(&q(1, 2) * p2)) - &(&q(12, 1) * pf),
        pf: &(&(&q(-1, 64) * &p1sq) + &(&q(1, 16) * p2)) - &(&q(1, 2) * pf),
        p3: &(&(&(&q(15, 64) * &(&p1sq * p1)) - &(&(&q(15, 16) * p1) * p2))
            - &(&(&q(15, 2) * p1) * pf))
            + p3,
    }
}

fn criterion_6(report: &Value) -> Outcome {
    let mut s = sampler(6);
    for k in 0..100 {
        let m = s.next_element();
        ensure(
            m.coeffs()
                .iter()
                .all(|c| c.is_integer() && c.abs() <= q(9, 1)),
            "sample out of range",
        )?;
        let want = transformed(&invariant_vector(&m));
        ensure(
            invariant_vector(&sigma(&m)) == want,
            format!("sample {k}: {m:?}"),
        )?;
    }
    let c = check(report, "invariant_transform_law")?;
    ensure(
        c["status"] == "pass" && c["samples"] == 100,
        format!("report entry {c}"),
    )
}

fn criterion_7() -> Outcome {
    ensure(t_matrix(3) == SquareMatrix::identity(4), "T^3 != I")?;
    let rows: [[(i64, i64); 4]; 4] = [
        [(1, 1), (0, 1), (0, 1), (0, 1)],
        [(3, 8), (-1, 2), (12, 1), (0, 1)],
        [(1, 64), (-1, 16), (-1, 2), (0, 1)],
        [(15, 64), (-15, 16), (15, 2), (1, 1)],
    ];
    let displayed = SquareMatrix::from_rows(
        rows.iter()
            .map(|r| r.iter().map(|&(n, d)| q(n, d)).collect())
            .collect(),
    )
    .unwrap();
    ensure(
        t_matrix(2) == displayed,
        "T^2 differs from the tabulated matrix",
    )?;
    let kernel = t_matrix(1)
        .transpose()
        .checked_sub(&SquareMatrix::identity(4))
        .unwrap()
        .kernel_basis();
    ensure(
        kernel.len() == 2,
        format!("ker(T^t - I) has dim {}", kernel.len()),
    )?;
    for v in [[1, 0, 0, 0], [0, 5, 0, -8]] {
        let mut rows = kernel.clone();
        rows.push(v.map(Rational::from).to_vec());
        ensure(
            rref(&rows, 4).pivots.len() == 2,
            format!("{v:?} not in the kernel"),
        )?;
    }
    Ok(())
}

fn criterion_8() -> Outcome {
    let mut s = sampler(8);
    for k in 0..50 {
        let m = s.next_element();
        let pf = pfaffian_matchings(&m);
        ensure(
            pfaffian_fixed_zero_sum(&m) == pf,
            format!("S7 sum differs on sample {k}"),
        )?;
        ensure(
            pfaffian_permutation_sum(&m) == pf,
            format!("S8 sum differs on sample {k}"),
        )?;
        ensure(
            &pf * &pf == m.matrix().determinant(),
            format!("Pf^2 != det on sample {k}"),
        )?;
    }
    for _ in 0..10 {
        let l: [Rational; 4] = std::array::from_fn(|_| s.next_nonzero_rational());
        let product = &(&l[0] * &l[1]) * &(&l[2] * &l[3]);
        ensure(
            pfaffian_matchings(&block_model(&l)) == product,
            format!("block model {l:?}"),
        )?;
    }
    Ok(())
}

fn criterion_9(report: &Value) -> Outcome {
    let mut s = sampler(9);
    for k in 0..100 {
        let m = s.next_element();
        let e = spectral_coefficients(&m);
        ensure(
            newton_coefficients(&invariant_vector(&m)) == e,
            format!("sample {k}"),
        )?;
        if k < 5 {
            // det(M - rI) = r^8 + e1 r^6 + e2 r^4 + e3 r^2 + e4 by Bareiss at r = 1, 2, 3.
            for r in 1..=3i64 {
                let r = Rational::from(r);
                let shifted = m
                    .matrix()
                    .checked_sub(&SquareMatrix::identity(8).scale(&r))
                    .unwrap();
                let r2 = &r * &r;
                let poly = [&e.e4, &e.e3, &e.e2, &e.e1, &Rational::one()]
                    .iter()
                    .rev()
                    .fold(Rational::zero(), |acc, c| &(&acc * &r2) + *c);
                ensure(
                    shifted.determinant() == poly,
                    format!("det oracle at sample {k}"),
                )?;
            }
        }
    }
    discrepancy_confirmed(report, "printed_eta4_coefficient")?;
    discrepancy_confirmed(report, "printed_eta2_coefficient")
}

fn criterion_10(report: &Value) -> Outcome {
    let g2 = FixedSubalgebra::fixed_locus(TrialityMap::standard().full(), SubalgebraTag::G2)
        .map_err(|e| e.to_string())?;
    let quarter = q(1, 4);
    let mut s = sampler(10);
    for k in 0..50 {
        let m = s.next_combination(g2.basis());
        let v = invariant_vector(&m);
        let e = spectral_coefficients(&m);
        ensure(v.pf.is_zero(), format!("g2 sample {k}: pf != 0"))?;
        ensure(
            v.p2 == &quarter * &(&v.p1 * &v.p1),
            format!("g2 sample {k}: p2 != p1^2/4"),
        )?;
        ensure(
            e.e2 == &quarter * &(&e.e1 * &e.e1),
            format!("g2 sample {k}: e2 != e1^2/4"),
        )?;
        ensure(
            -&e.e1 == &v.p1 * &q(1, 2),
            format!("g2 sample {k}: c1 != p1/2"),
        )?;
    }
    let mut points = vec![EtaModel::new(q(1, 1), q(1, 1))];
    points.extend(
        (1..20).map(|_| EtaModel::new(s.next_nonzero_rational(), s.next_nonzero_rational())),
    );
    for pt in &points {
        let product = &(&pt.eta[0] * &pt.eta[1]) * &pt.eta[2];
        ensure(
            c3_from_invariants(&pt.invariants()) == &product * &product,
            format!("eta point {:?}", pt.eta),
        )?;
    }
    ensure(
        c3_from_invariants(&points[0].invariants()) == q(4, 1),
        "(1,1,-2) does not give 4",
    )?;
    discrepancy_confirmed(report, "printed_g2_c3")?;
    let so7 = so7_fixed_subalgebra().map_err(|e| e.to_string())?;
    for k in 0..50 {
        let m = s.next_combination(so7.basis());
        ensure(
            invariant_vector(&m).pf.is_zero(),
            format!("so7 sample {k}: pf != 0"),
        )?;
        ensure(
            spectral_coefficients(&m).e4.is_zero(),
            format!("so7 sample {k}: e4 != 0"),
        )?;
    }
    Ok(())
}

fn binary(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_triality"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn criterion_11() -> Outcome {
    let a = binary(&["verify", "--seed", "42", "--json"]);
    let b = binary(&["verify", "--seed", "42", "--json"]);
    ensure(
        a.status.code() == Some(0),
        format!("default verify exit {:?}", a.status.code()),
    )?;
    ensure(
        !a.stdout.is_empty() && a.stdout == b.stdout,
        "reports differ between runs",
    )?;

    let dir = TempDir::new().unwrap();
    let mut block = standard_block();
    let v = -block.get(1, 2);
    block.set(1, 2, v);
    let block_path = dir.path().join("block.json");
    std::fs::write(&block_path, serde_json::to_string(&block).unwrap()).unwrap();
    let bad = binary(&[
        "verify",
        "--samples",
        "5",
        "--json",
        "--block",
        block_path.to_str().unwrap(),
    ]);
    ensure(
        bad.status.code() == Some(1),
        format!("corrupted block exit {:?}", bad.status.code()),
    )?;
    let report: Value = serde_json::from_slice(&bad.stdout).map_err(|e| e.to_string())?;
    let c = check(&report, "triality_bracket_preservation")?;
    ensure(
        c["status"] == "fail" && c["counterexample"].is_object(),
        "no counterexample for corrupted block",
    )?;

    let mut rows = vec![vec![0i64; 8]; 8];
    rows[0][1] = 1;
    let asym = dir.path().join("asym.json");
    std::fs::write(&asym, serde_json::json!({ "matrix": rows }).to_string()).unwrap();
    let out = binary(&["eval", "--input", asym.to_str().unwrap()]);
    ensure(
        out.status.code() == Some(1),
        format!("non-antisymmetric exit {:?}", out.status.code()),
    )?;

    let junk = dir.path().join("junk.json");
    std::fs::write(&junk, "[1, 2").unwrap();
    for args in [
        vec!["eval", "--input", junk.to_str().unwrap()],
        vec!["verify", "--samples", "zero"],
    ] {
        let out = binary(&args);
        ensure(
            out.status.code() == Some(2),
            format!("{args:?} exit {:?}", out.status.code()),
        )?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let start = Instant::now();
    let report = default_report();
    let criteria: Vec<Criterion> = vec![
        (
            "octonion table, anchor and rotation automorphism",
            Box::new(criterion_1),
        ),
        (
            "quadruples partition the 28 generators",
            Box::new(criterion_2),
        ),
        ("block identities M^2 = M^T, M^3 = I", Box::new(criterion_3)),
        (
            "sigma has order 3 and preserves the bracket",
            Box::new(criterion_4),
        ),
        (
            "fixed subalgebras: g2 (14, rank 2) and so(7) (21, rank 3)",
            Box::new(criterion_5),
        ),
        (
            "invariant transformation law on 100 samples",
            Box::new(|| criterion_6(&report)),
        ),
        (
            "T^3 = I, tabulated T^2, 2-dimensional invariant space",
            Box::new(criterion_7),
        ),
        (
            "Pfaffian algorithms, Pf^2 = det, block model",
            Box::new(criterion_8),
        ),
        (
            "Newton identities and printed char-poly coefficients",
            Box::new(|| criterion_9(&report)),
        ),
        (
            "restriction to g2 and so(7)",
            Box::new(|| criterion_10(&report)),
        ),
        ("determinism and exit codes", Box::new(criterion_11)),
    ];
    let mut failures = 0;
    for (n, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        match f() {
            Ok(()) => println!("criterion {:>2}: PASS  {name} ({:.2?})", n + 1, t.elapsed()),
            Err(e) => {
                failures += 1;
                println!("criterion {:>2}: FAIL  {name}: {e}", n + 1);
            }
        }
    }
    println!(
        "acceptance: {} of {} criteria passed in {:.2?}",
        criteria.len() - failures,
        criteria.len(),
        start.elapsed()
    );
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
