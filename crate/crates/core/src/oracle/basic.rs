use super::{discover_and_refine, OracleReport, RefineOptions, RefinedMember, SampleCloud};
use crate::alphasets::AlphaConfig;
use crate::error::{Error, Result};
use crate::projspace::{lines_equal, vector_angle, Line};

/// Angular tolerance for the set inclusions checked at sampled resolution.
const INCLUSION_TOL: f64 = 1e-5;
/// Number of first-level members used as generators for the next level.
const GENERATORS: usize = 16;

/// Up to `k` well-separated members, spread evenly over `members`.
fn spread_sample(members: &[RefinedMember], k: usize) -> Vec<Line> {
    let mut distinct: Vec<Line> = Vec::new();
    for m in members {
        if distinct.iter().all(|d| vector_angle(d.amplitudes(), m.line.amplitudes()) > 1e-6) {
            distinct.push(m.line.clone());
        }
    }
    if distinct.len() <= k {
        return distinct;
    }
    (0..k).map(|i| distinct[i * distinct.len() / k].clone()).collect()
}

/// Largest `|angle(x, y) - alpha|` over all pairs.
fn cross_residual(xs: &[Line], ys: &[Line], alpha: f64) -> f64 {
    let mut worst = 0.0_f64;
    for x in xs {
        for y in ys {
            worst = worst.max((vector_angle(x.amplitudes(), y.amplitudes()) - alpha).abs());
        }
    }
    worst
}

fn lines(ms: &[RefinedMember]) -> Vec<Line> {
    ms.iter().map(|m| m.line.clone()).collect()
}

/// Checks, on refined samples drawn from `cloud`:
/// (i) `S ⊂ S^<<a>>` for both sets, (ii-a) `S2^<a> ⊆ S1^<a>`,
/// (ii-b) `S1^<<a>> ⊆ S2^<<a>>` and (iii) `(S1^<a>)^<<a>> = S1^<a>`.
pub fn verify_basic_relations(s1: &[Line], s2: &[Line], cfg: &AlphaConfig, cloud: &SampleCloud) -> Result<OracleReport> {
    for x in s1 {
        let mut found = false;
        for y in s2 {
            if lines_equal(x, y)? {
                found = true;
                break;
            }
        }
        if !found {
            return Err(Error::Parameter("first set is not contained in the second".into()));
        }
    }
    let alpha = cfg.alpha();
    let opts = RefineOptions::default();
    let mut report = OracleReport::new();

    let m1 = discover_and_refine(s1, cfg, cloud, &opts)?;
    let m2 = discover_and_refine(s2, cfg, cloud, &opts)?;
    report.count("alpha_members_s1", m1.len() as u64);
    report.count("alpha_members_s2", m2.len() as u64);
    if m1.is_empty() {
        report.note("first alpha-set has no sampled members; remaining clauses are vacuous");
    }

    // (i)
    let r = cross_residual(&lines(&m1), s1, alpha).max(cross_residual(&lines(&m2), s2, alpha));
    report.residual(r);
    report.check("clause (i)", r <= INCLUSION_TOL, format!("residual {r:e}"));

    // (ii-a)
    let r = cross_residual(&lines(&m2), s1, alpha);
    report.residual(r);
    report.check("clause (ii-a)", r <= INCLUSION_TOL, format!("residual {r:e}"));

    if m1.is_empty() {
        return Ok(report);
    }

    // (ii-b): members of S1^<<a>> must be at angle alpha from sampled S2^<a>.
    let t1 = spread_sample(&m1, GENERATORS);
    let d1 = discover_and_refine(&t1, cfg, cloud, &opts)?;
    report.count("double_members_s1", d1.len() as u64);
    let t2 = spread_sample(&m2, GENERATORS);
    let r = cross_residual(&lines(&d1), &t2, alpha);
    report.residual(r);
    report.check("clause (ii-b)", r <= INCLUSION_TOL, format!("residual {r:e}"));

    // (iii): U = S1^<<a>>; U^<a> should equal S1^<a>.
    let u = spread_sample(&d1, GENERATORS);
    if u.is_empty() {
        report.note("no sampled members of the double alpha-set; clause (iii) skipped");
        return Ok(report);
    }
    let e = discover_and_refine(&u, cfg, cloud, &opts)?;
    report.count("triple_level_members", e.len() as u64);
    let sub = cross_residual(&lines(&e), s1, alpha);
    let sup = cross_residual(&lines(&m1), &u, alpha);
    report.residual(sub.max(sup));
    report.check(
        "clause (iii)",
        sub <= INCLUSION_TOL && sup <= INCLUSION_TOL,
        format!("inclusion residuals {sub:e} and {sup:e}"),
    );
    Ok(report)
}
