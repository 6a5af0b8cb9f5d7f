//! Acceptance run: one PASS/FAIL line per criterion, full trial counts.

use std::process::ExitCode;
use std::time::Instant;

use nilsep::canon::JordanTag;
use nilsep::cli::{CANON_TRIALS, CONJUGATE_TRIALS, DEFAULT_SEED, FAMILY_TRIALS};
use nilsep::fuzz::{fuzz_canon, fuzz_theorem, PairFamily};
use nilsep::indecomposable::{
    generation_sanity, indecomposability_report, replay_pinning_triples, IndecomposabilityReport,
};
use nilsep::sampling::DEFAULT_RANGE;
use nilsep::witnesses::{degree_bound_check, verify_all_witnesses};
use nilsep::Result;

type Check = fn() -> Result<(bool, String)>;

const SEEDS: [u64; 3] = [DEFAULT_SEED, 7, 1_000_003];

fn witnesses() -> Result<(bool, String)> {
    let s = verify_all_witnesses()?;
    Ok((s.passed(), s.line()))
}

fn verdicts(r: &IndecomposabilityReport) -> Vec<bool> {
    let mut v = vec![
        r.pair.independent(),
        r.item_b.decision.member,
        r.item_c.decision.member,
    ];
    v.extend(r.extra.iter().map(|x| x.decision.member));
    v.extend(r.extra_groups.iter().map(|g| g.independent()));
    v
}

fn indecomposable() -> Result<(bool, String)> {
    let reports = SEEDS
        .iter()
        .map(|&s| indecomposability_report(s))
        .collect::<Result<Vec<_>>>()?;
    let all_pass = reports.iter().all(IndecomposabilityReport::passed);
    let same = reports
        .windows(2)
        .all(|w| verdicts(&w[0]) == verdicts(&w[1]));
    let replay = replay_pinning_triples();
    let held = replay.steps.iter().filter(|s| s.holds).count();
    let contradictions = replay.steps.iter().filter(|s| s.gap.is_some()).count();
    let r = &reports[0];
    Ok((
        all_pass && same && replay.passed(),
        format!(
            "pair rank {} -> {}, items b/c outside span, verdicts identical over {} seeds: {same}, replay {held}/{} ({contradictions} contradictions)",
            r.pair.rank_candidates,
            r.pair.rank_stacked,
            SEEDS.len(),
            replay.steps.len()
        ),
    ))
}

fn minimal_generation() -> Result<(bool, String)> {
    let r = indecomposability_report(DEFAULT_SEED)?;
    let outside = r.extra.iter().filter(|v| !v.decision.member).count();
    Ok((
        outside == 13 && r.extra.len() == 13 && r.extra_groups.iter().all(|g| g.independent()),
        format!(
            "{outside}/{} words outside the decomposable span, {} shared-degree groups independent",
            r.extra.len(),
            r.extra_groups.len()
        ),
    ))
}

fn degree_bound() -> Result<(bool, String)> {
    let r = degree_bound_check()?;
    Ok((
        r.passed(),
        format!(
            "agree through length 5: {}, first difference at length 6: {}",
            r.below.is_none(),
            r.at.as_ref().map_or("none".into(), |w| w.to_string())
        ),
    ))
}

fn canonical_forms() -> Result<(bool, String)> {
    let mut ok = true;
    let mut parts = Vec::new();
    for tag in [JordanTag::J1, JordanTag::J2] {
        let r = fuzz_canon(CANON_TRIALS, DEFAULT_SEED, tag, DEFAULT_RANGE)?;
        ok &= r.passed() && r.all_tags_hit() && r.passed_trials == CANON_TRIALS;
        let tags: Vec<String> = r.tags.iter().map(|(k, v)| format!("{k}={v}")).collect();
        parts.push(format!(
            "{} {}/{} [{}]",
            r.stabilizer,
            r.passed_trials,
            r.trials,
            tags.join(" ")
        ));
    }
    Ok((ok, parts.join("; ")))
}

fn theorem() -> Result<(bool, String)> {
    let mut ok = true;
    let mut parts = Vec::new();
    for family in PairFamily::all() {
        let n = if family == PairFamily::Conjugate {
            CONJUGATE_TRIALS
        } else {
            FAMILY_TRIALS
        };
        let r = fuzz_theorem(n, DEFAULT_SEED, family, DEFAULT_RANGE);
        if family == PairFamily::Independent {
            let separated = r.separated_by_s33();
            ok &= separated * 10 > r.checked * 9;
            parts.push(format!("independent {separated}/{} separated", r.checked));
        } else {
            ok &= r.passed() && r.template_rejects == 0 && r.s33_agreeing == r.checked;
            parts.push(format!(
                "{} {}/{} agreeing, {} violations",
                r.family,
                r.s33_agreeing,
                r.checked,
                r.violations.len()
            ));
        }
    }
    Ok((ok, parts.join("; ")))
}

fn generation() -> Result<(bool, String)> {
    let checks = generation_sanity(2, 4, DEFAULT_SEED)?;
    let good = checks.iter().filter(|c| c.passed()).count();
    Ok((
        !checks.is_empty() && good == checks.len(),
        format!(
            "{good}/{} words in span, coefficients confirmed on fresh samples",
            checks.len()
        ),
    ))
}

fn main() -> ExitCode {
    let criteria: [(&str, Check); 7] = [
        ("witness minimality", witnesses),
        ("indecomposability", indecomposable),
        ("minimal generation", minimal_generation),
        ("degree bound", degree_bound),
        ("canonical forms", canonical_forms),
        ("separation fuzz", theorem),
        ("generation sanity", generation),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (ok, summary) = match check() {
            Ok(r) => r,
            Err(e) => (false, format!("error: {e}")),
        };
        failed += usize::from(!ok);
        println!(
            "{} criterion {} {name}: {summary} ({:.1}s)",
            if ok { "PASS" } else { "FAIL" },
            i + 1,
            start.elapsed().as_secs_f64()
        );
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
