//! End-to-end acceptance criteria. Runs without the libtest harness so that
//! every criterion prints exactly one PASS/FAIL line; exits non-zero if any
//! criterion fails.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4};
use std::time::{Duration, Instant};

use qangle::alphasets::{
    counterexample_witness, dim3_case, double_alpha_set_classify, AlphaConfig, Component, Dim3Case,
};
use qangle::error::Error;
use qangle::linalg::{self, UnitVector, C64, I};
use qangle::projspace::{canonical_line, quantum_angle, Line, TripleCanonicalForm};
use qangle::suites::{run_suite, Suite, SuiteParams};
use qangle::wigner::{
    exotic_pi4_map, find_angle_violation, fit_from_probes, preservation_report, probe_images, random_wigner,
    same_induced_map, Selector,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn suite(s: Suite, dim: Option<usize>, draws: usize, seed: u64) -> (bool, String, Duration) {
    let t0 = Instant::now();
    let p = SuiteParams { dim, draws: Some(draws), seed, ..Default::default() };
    match run_suite(s, &p) {
        Ok(rep) => {
            let mut detail = format!("{s}: max residual {:e}", rep.max_residual);
            if !rep.verdict {
                detail.push_str(&format!("; failures: {:?}", rep.notes));
            }
            (rep.verdict, detail, t0.elapsed())
        }
        Err(e) => (false, format!("{s}: error {e}"), t0.elapsed()),
    }
}

fn ac1() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for dim in [3, 4] {
        let (ok, detail, took) = suite(Suite::Shape, Some(dim), 50, 1);
        let in_time = took <= Duration::from_secs(120);
        pass &= ok && in_time;
        parts.push(format!("dim {dim}: {detail}, {:.1}s", took.as_secs_f64()));
    }
    outcome(pass, parts.join(" | "))
}

fn exceptional_components() -> Result<(f64, f64), Error> {
    let s3 = 1.0 / 3f64.sqrt();
    let cfg = AlphaConfig::from_cos(s3)?;
    let lambdas = [C64::new(1.0, 0.0), I, C64::new(-1.0, 0.0)];
    let (e1, e2) = (UnitVector::basis(3, 0), UnitVector::basis(3, 1));

    let t = TripleCanonicalForm::new(e1.clone(), e2.clone(), (2.0f64 / 3.0).sqrt(), s3, lambdas)?;
    let desc = double_alpha_set_classify(&t, &cfg, 3)?;
    let circle_err = match desc.components.as_slice() {
        [_, Component::Circle { c, d, .. }] => (c - (1.0f64 / 3.0).sqrt()).abs().max((d - (2.0f64 / 3.0).sqrt()).abs()),
        _ => f64::INFINITY,
    };

    let t = TripleCanonicalForm::new(e1, e2, FRAC_1_SQRT_2, FRAC_1_SQRT_2, lambdas)?;
    let desc = double_alpha_set_classify(&t, &cfg, 3)?;
    let point_err = match desc.components.as_slice() {
        [_, Component::Point { line }] => quantum_angle(line, &Line::basis(3, 2))?.radians(),
        _ => f64::INFINITY,
    };
    Ok((circle_err, point_err))
}

fn ac2() -> Outcome {
    let (ok1, d1, _) = suite(Suite::CollinAlpha, Some(4), 50, 2);
    let (ok2, d2, _) = suite(Suite::Circle4, Some(4), 50, 2);
    let (ok3, d3) = match exceptional_components() {
        Ok((c, p)) => (c <= 1e-12 && p <= 1e-12, format!("second circle error {c:e}, point error {p:e}")),
        Err(e) => (false, format!("error {e}")),
    };
    outcome(ok1 && ok2 && ok3, format!("{d1} | {d2} | {d3}"))
}

fn ac3() -> Outcome {
    let (ok, detail, _) = suite(Suite::InfiniteElement, None, 1000, 3);
    outcome(ok, detail)
}

fn ac4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut verified = 0;
    let mut worst = (0.0_f64, f64::INFINITY);
    let mut failures = Vec::new();
    let mut draws = 0;
    while draws < 20 {
        let a: f64 = rng.random_range(0.3..0.7);
        let d: f64 = rng.random_range(0.05..a);
        let c = (1.0 - d * d).sqrt();
        if dim3_case(a, c, d).0 != Dim3Case::Bounded {
            continue;
        }
        draws += 1;
        let cfg = AlphaConfig::from_cos(a).expect("a in range");
        let mut t = 0.05;
        let w = loop {
            match counterexample_witness(&cfg, c, d, t) {
                Err(Error::WitnessRange(_)) if t > 1e-8 => t *= 0.5,
                other => break other,
            }
        };
        match w {
            Ok(w) if w.checks.verified() => {
                verified += 1;
                worst.0 = worst.0.max(w.checks.max_membership_distance.max(w.checks.max_angle_residual));
                worst.1 = worst.1.min(w.checks.separation);
            }
            Ok(w) => failures.push(format!("({a}, {c}, {d}) t = {t}: {:?}", w.checks)),
            Err(e) => failures.push(format!("({a}, {c}, {d}): {e}")),
        }
    }
    outcome(
        verified == 20,
        format!("{verified}/20 verified, worst residual {:e}, min separation {:e} {failures:?}", worst.0, worst.1),
    )
}

fn ac5() -> Outcome {
    let (ok, detail, _) = suite(Suite::CircleChar, None, 100, 5);
    outcome(ok, detail)
}

fn ac6() -> Outcome {
    let (ok, detail, _) = suite(Suite::Section5, Some(3), 100, 6);
    outcome(ok, detail)
}

/// A line at angle `delta` from `x`.
fn tilt(x: &Line, delta: f64, rng: &mut ChaCha8Rng) -> Line {
    let h = linalg::random_unit_orthogonal(rng, x.dim(), &[x.amplitudes()]).expect("dim >= 2");
    let v = linalg::combine(&[C64::new(delta.cos(), 0.0), C64::new(delta.sin(), 0.0)], &[x.amplitudes(), &h]);
    canonical_line(&v).expect("unit")
}

fn ac7() -> Outcome {
    let t0 = Instant::now();
    let mut recovered = 0;
    let mut rejected = 0;
    let mut perturbed = 0;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for dim in 2..=5 {
        for seed in 0..100u64 {
            let w = random_wigner(dim, seed, seed % 2 == 1).expect("valid dimension");
            let images = probe_images(&w);
            if fit_from_probes(dim, &images).and_then(|f| same_induced_map(&f, &w)).unwrap_or(false) {
                recovered += 1;
            }
            let mut bad = images.clone();
            let j = rng.random_range(0..bad.len());
            bad[j] = tilt(&bad[j], 0.1, &mut rng);
            perturbed += 1;
            if matches!(fit_from_probes(dim, &bad), Err(Error::NotAWignerMap { .. })) {
                rejected += 1;
            }
        }
    }
    let took = t0.elapsed();
    outcome(
        recovered == 400 && rejected == perturbed && took <= Duration::from_secs(30),
        format!("{recovered}/400 recovered, {rejected}/{perturbed} perturbed rejected, {:.2}s", took.as_secs_f64()),
    )
}

fn ac8() -> Outcome {
    let run = || -> Result<Outcome, Error> {
        let psi = random_wigner(2, 8, false)?;
        let map = exotic_pi4_map(psi, Selector::MiddleBand(0.2))?;
        let cfg = AlphaConfig::new(FRAC_PI_4)?;
        let rep = preservation_report(&map, &cfg, 2, 1000, 8, 1e-10)?;
        let violation = find_angle_violation(&map, 1.0, 1000, 8, 1e-3)?;
        let pass = rep.forward_violations == 0
            && rep.backward_violations == 0
            && rep.backward_tested == rep.pairs_tested
            && violation.is_some();
        Ok(outcome(
            pass,
            format!(
                "pi/4: {} forward, {} backward violations on {} pairs (max deviation {:e}); angle 1.0: deviation {}",
                rep.forward_violations,
                rep.backward_violations,
                rep.pairs_tested,
                rep.max_deviation,
                violation.map_or("none".to_string(), |v| format!("{:e}", v.deviation))
            ),
        ))
    };
    run().unwrap_or_else(|e| outcome(false, format!("error {e}")))
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("AC1 pair alpha-set equivalence", ac1),
        ("AC2 triple and double alpha-sets", ac2),
        ("AC3 trichotomy", ac3),
        ("AC4 witness", ac4),
        ("AC5 classification consistency", ac5),
        ("AC6 circle intersections and bridges", ac6),
        ("AC7 Wigner round trip", ac7),
        ("AC8 exotic pi/4 map", ac8),
    ];
    let mut failed = 0;
    for (name, f) in criteria {
        let t0 = Instant::now();
        let o = f();
        println!(
            "[{}] {name} ({:.1}s): {}",
            if o.pass { "PASS" } else { "FAIL" },
            t0.elapsed().as_secs_f64(),
            o.detail
        );
        failed += (!o.pass) as usize;
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
    println!("all acceptance criteria passed");
}
