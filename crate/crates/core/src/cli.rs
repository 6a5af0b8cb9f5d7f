//! Command-line front end.
//!
//! Exit codes: 0 success / property holds / not separated, 1 separated /
//! violation / verdict contrary to `--expect`, 2 input or usage error.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::canon::{classify_pair, nilpotent_jordan, stab_canon_j1, stab_canon_j2, JordanTag};
use crate::document::{parse_tuple, Entry};
use crate::error::{Error, Result};
use crate::eval::{check_compatible, evaluate_set, separate};
use crate::fuzz::{fuzz_canon, fuzz_theorem, CanonReport, PairFamily, TheoremReport};
use crate::indecomposable::{generation_sanity, indecomposability_report, replay_pinning_triples};
use crate::matrix::SmallMatrix;
use crate::sampling::DEFAULT_RANGE;
use crate::scalar;
use crate::sets::{builtin, builtin_set, SetName};
use crate::span::{
    generators_of_degree, in_span, min_samples, product_basis, ProductExpression, WordCombination,
};
use crate::tuple::NilTuple;
use crate::witnesses::{degree_bound_check, verify_all_witnesses};
use crate::word::TraceWord;

/// Seed used when `--seed` is not given.
pub const DEFAULT_SEED: u64 = 20_240_917;

const CLOSED_OUTPUT: &str = "output closed";

pub const CANON_TRIALS: u64 = 10_000;
pub const CONJUGATE_TRIALS: u64 = 10_000;
pub const FAMILY_TRIALS: u64 = 1_000;

#[derive(Parser, Debug)]
#[command(
    name = "nilsep",
    version,
    about = "Exact trace invariants of nilpotent matrix tuples"
)]
struct Cli {
    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Machine,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate every word of a set on a tuple.
    Eval {
        #[arg(long)]
        set: String,
        #[arg(long)]
        input: PathBuf,
    },
    /// First word of a set separating two tuples.
    Separate {
        #[arg(long)]
        set: String,
        a: PathBuf,
        b: PathBuf,
    },
    /// Jordan and stabilizer reduction of a tuple, or the case of a pair.
    Canon {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        pair: Option<PathBuf>,
    },
    /// Run a verification suite.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Trials for the fuzzing parts (defaults: 10000 canon per
        /// stabilizer, 10000 conjugate pairs, 1000 per other family).
        #[arg(long)]
        trials: Option<u64>,
    },
    /// Run the fuzz harness.
    Fuzz {
        #[arg(value_enum)]
        target: FuzzTarget,
        #[arg(long, default_value_t = FAMILY_TRIALS)]
        trials: u64,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// conjugate, strict-upper, independent or a template id; all when omitted.
        #[arg(long)]
        family: Option<String>,
        /// J1 or J2 for `fuzz canon`; both when omitted.
        #[arg(long, ignore_case = true)]
        stabilizer: Option<Stabilizer>,
        #[arg(long, default_value_t = DEFAULT_RANGE)]
        range: i64,
        /// Where violations are written.
        #[arg(long)]
        repro: Option<PathBuf>,
    },
    /// Span membership of a word among products of lower-degree generators.
    Decomp {
        #[arg(long)]
        target: String,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long, value_enum)]
        expect: Option<Expect>,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Suite {
    Witnesses,
    Degree,
    Canon,
    Indecomposable,
    Theorem,
    All,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum FuzzTarget {
    Theorem,
    Canon,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Stabilizer {
    J1,
    J2,
}

impl Stabilizer {
    fn tag(self) -> JordanTag {
        match self {
            Stabilizer::J1 => JordanTag::J1,
            Stabilizer::J2 => JordanTag::J2,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Expect {
    Member,
    NonMember,
}

/// Runs with process arguments, printing to stdout/stderr.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

pub fn run_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                write!(out, "{text}")
            } else {
                write!(err, "{text}")
            };
            return code;
        }
    };
    let mut ctx = Ctx {
        format: cli.format,
        out,
    };
    match ctx.dispatch(cli.command) {
        Ok(code) => code,
        // reader went away (`nilsep eval ... | head`)
        Err(Error::Io(m)) if m == CLOSED_OUTPUT => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

struct Ctx<'a> {
    format: Format,
    out: &'a mut dyn Write,
}

fn read_tuple(path: &Path) -> Result<NilTuple> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_tuple(&text).map_err(|e| match e {
        Error::Parse(m) => Error::Parse(format!("{}: {m}", path.display())),
        other => other,
    })
}

fn mat_json(m: &SmallMatrix) -> Value {
    json!(m
        .rows()
        .iter()
        .map(|r| r.iter().map(Entry::from_scalar).collect::<Vec<_>>())
        .collect::<Vec<_>>())
}

fn tuple_json(t: &NilTuple) -> Value {
    json!(t.mats().iter().map(mat_json).collect::<Vec<_>>())
}

fn status(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

impl Ctx<'_> {
    fn line(&mut self, s: impl AsRef<str>) -> Result<()> {
        writeln!(self.out, "{}", s.as_ref()).map_err(|e| {
            if e.kind() == std::io::ErrorKind::BrokenPipe {
                Error::Io(CLOSED_OUTPUT.into())
            } else {
                Error::Io(e.to_string())
            }
        })
    }

    fn machine(&mut self, v: &Value) -> Result<()> {
        self.line(serde_json::to_string(v).expect("plain data"))
    }

    fn text(&self) -> bool {
        self.format == Format::Text
    }

    fn dispatch(&mut self, cmd: Command) -> Result<i32> {
        match cmd {
            Command::Eval { set, input } => self.eval(&set, &input),
            Command::Separate { set, a, b } => self.separate(&set, &a, &b),
            Command::Canon { input, pair } => match pair {
                None => self.canon_single(&input),
                Some(p) => self.canon_pair(&input, &p),
            },
            Command::Verify {
                suite,
                seed,
                trials,
            } => self.verify(suite, seed, trials),
            Command::Fuzz {
                target,
                trials,
                seed,
                family,
                stabilizer,
                range,
                repro,
            } => {
                if trials == 0 {
                    return Err(Error::Usage("--trials must be at least 1".into()));
                }
                let repro =
                    repro.unwrap_or_else(|| PathBuf::from(format!("nilsep-repro-{seed}.json")));
                match target {
                    FuzzTarget::Theorem => {
                        let families = match family {
                            Some(f) => vec![f.parse::<PairFamily>()?],
                            None => PairFamily::all(),
                        };
                        let reports: Vec<_> = families
                            .into_iter()
                            .map(|f| fuzz_theorem(trials, seed, f, range))
                            .collect();
                        self.theorem_reports(&reports, Some(&repro))
                    }
                    FuzzTarget::Canon => {
                        let tags = match stabilizer {
                            Some(s) => vec![s.tag()],
                            None => vec![JordanTag::J1, JordanTag::J2],
                        };
                        let reports = tags
                            .into_iter()
                            .map(|t| fuzz_canon(trials, seed, t, range))
                            .collect::<Result<Vec<_>>>()?;
                        self.canon_reports(&reports, Some(&repro))
                    }
                }
            }
            Command::Decomp {
                target,
                seed,
                samples,
                expect,
            } => self.decomp(&target, seed, samples, expect),
        }
    }

    fn set_for(&self, name: &str, t: &NilTuple) -> Result<crate::sets::InvariantSet> {
        let name: SetName = name.parse()?;
        let set = match name.fixed_d() {
            None => builtin_set(name, t.d())?,
            Some(_) => builtin(name),
        };
        check_compatible(t, &set)?;
        Ok(set)
    }

    fn eval(&mut self, set: &str, input: &Path) -> Result<i32> {
        let t = read_tuple(input)?;
        let set = self.set_for(set, &t)?;
        let values = evaluate_set(&t, &set)?;
        if self.text() {
            let width = set
                .words
                .iter()
                .map(|w| w.degree())
                .max()
                .unwrap_or(4)
                .max(4);
            self.line(format!("{:<width$}  value", "word"))?;
            for (w, v) in set.words.iter().zip(&values) {
                self.line(format!("{:<width$}  {}", w.to_string(), scalar::format(v)))?;
            }
        } else {
            let rows: Vec<Value> = set
                .words
                .iter()
                .zip(&values)
                .map(|(w, v)| json!({"word": w.to_string(), "value": scalar::format(v)}))
                .collect();
            self.machine(&json!({"set": set.name.as_str(), "d": set.d, "values": rows}))?;
        }
        Ok(0)
    }

    fn separate(&mut self, set: &str, a: &Path, b: &Path) -> Result<i32> {
        let (ta, tb) = (read_tuple(a)?, read_tuple(b)?);
        let set = self.set_for(set, &ta)?;
        let hit = separate(&ta, &tb, &set)?;
        if self.text() {
            match &hit {
                Some(w) => self.line(w.to_string())?,
                None => self.line("not separated")?,
            }
        } else {
            self.machine(&json!({"set": set.name.as_str(), "separated": hit.is_some(), "word": hit.as_ref().map(ToString::to_string)}))?;
        }
        Ok(i32::from(hit.is_some()))
    }

    fn canon_single(&mut self, input: &Path) -> Result<i32> {
        let t = read_tuple(input)?;
        if t.size() != 3 {
            return Err(Error::WrongSize {
                expected: 3,
                got: t.size(),
            });
        }
        let (g0, tag) = nilpotent_jordan(t.mat(1))?;
        let reduced = g0.apply_tuple(&t);
        let stab = match (tag, t.d()) {
            (JordanTag::J1, 2..) => Some(stab_canon_j1(reduced.mat(2))?),
            (JordanTag::J2, 2..) => Some(stab_canon_j2(reduced.mat(2))?),
            _ => None,
        };
        let (g, kind) = match &stab {
            Some(r) => (r.g.after(&g0), Some(r.kind)),
            None => (g0, None),
        };
        let result = g.apply_tuple(&t);
        if self.text() {
            self.line(format!("jordan: {tag}"))?;
            if let Some(k) = kind {
                self.line(format!("second matrix: {k}"))?;
            }
            self.line(format!("g = {}", g.g()))?;
            self.line(format!("g^-1 = {}", g.g_inv()))?;
            for (i, m) in result.mats().iter().enumerate() {
                self.line(format!("A{} = {m}", i + 1))?;
            }
        } else {
            self.machine(&json!({
                "jordan": tag.to_string(),
                "template": kind.map(|k| k.as_str()),
                "g": mat_json(g.g()),
                "g_inv": mat_json(g.g_inv()),
                "matrices": tuple_json(&result),
            }))?;
        }
        Ok(0)
    }

    fn canon_pair(&mut self, a: &Path, b: &Path) -> Result<i32> {
        let (ta, tb) = (read_tuple(a)?, read_tuple(b)?);
        let c = classify_pair(&ta, &tb)?;
        let tr = &c.transforms;
        if self.text() {
            self.line(format!("case: {}", c.case))?;
            self.line(format!("kept positions: {:?}", tr.kept))?;
            self.line(format!("swapped: {}", tr.swapped))?;
            self.line(format!("g_a = {}", tr.g_a.g()))?;
            self.line(format!("g_b = {}", tr.g_b.g()))?;
            self.line(format!("A = {}", c.a))?;
            self.line(format!("B = {}", c.b))?;
        } else {
            self.machine(&json!({
                "case": c.case.to_string(),
                "kept": tr.kept,
                "swapped": tr.swapped,
                "g_a": mat_json(tr.g_a.g()),
                "g_b": mat_json(tr.g_b.g()),
                "a": tuple_json(&c.a),
                "b": tuple_json(&c.b),
            }))?;
        }
        Ok(0)
    }

    fn report(&mut self, name: &str, ok: bool, summary: String, detail: Value) -> Result<bool> {
        if self.text() {
            self.line(format!("{} {name}: {summary}", status(ok)))?;
        } else {
            self.machine(
                &json!({"suite": name, "passed": ok, "summary": summary, "detail": detail}),
            )?;
        }
        Ok(ok)
    }

    fn verify(&mut self, suite: Suite, seed: u64, trials: Option<u64>) -> Result<i32> {
        let all = suite == Suite::All;
        let mut ok = true;
        if all || suite == Suite::Witnesses {
            let s = verify_all_witnesses()?;
            ok &= self.report(
                "witnesses",
                s.passed(),
                s.line(),
                serde_json::to_value(&s).expect("plain data"),
            )?;
        }
        if all || suite == Suite::Degree {
            let r = degree_bound_check()?;
            let summary = format!(
                "agree up to length 5: {}, first difference at length 6: {}",
                r.below.is_none(),
                r.at.as_ref()
                    .map_or("none".to_string(), ToString::to_string)
            );
            ok &= self.report(
                "degree",
                r.passed(),
                summary,
                serde_json::to_value(&r).expect("plain data"),
            )?;
        }
        if all || suite == Suite::Indecomposable {
            let r = indecomposability_report(seed)?;
            let summary = format!(
                "pair rank {}+{} -> {}, {} extra words outside the decomposable span",
                r.pair.rank_candidates,
                r.pair.words.len(),
                r.pair.rank_stacked,
                r.extra.iter().filter(|v| !v.decision.member).count()
            );
            ok &= self.report(
                "indecomposable",
                r.passed(),
                summary,
                serde_json::to_value(&r).expect("plain data"),
            )?;
            let rp = replay_pinning_triples();
            let held = rp.steps.iter().filter(|s| s.holds).count();
            let summary = format!("{held}/{} conclusions reproduced", rp.steps.len());
            ok &= self.report(
                "replay",
                rp.passed(),
                summary,
                serde_json::to_value(&rp).expect("plain data"),
            )?;
            let gen = generation_sanity(2, 4, seed)?;
            let good = gen.iter().filter(|g| g.passed()).count();
            let summary = format!("{good}/{} words in span", gen.len());
            ok &= self.report(
                "generation",
                good == gen.len(),
                summary,
                serde_json::to_value(&gen).expect("plain data"),
            )?;
        }
        if all || suite == Suite::Canon {
            let n = trials.unwrap_or(CANON_TRIALS);
            let reports = [JordanTag::J1, JordanTag::J2]
                .into_iter()
                .map(|t| fuzz_canon(n, seed, t, DEFAULT_RANGE))
                .collect::<Result<Vec<_>>>()?;
            ok &= self.canon_reports(&reports, None)? == 0;
        }
        if all || suite == Suite::Theorem {
            let reports: Vec<_> = PairFamily::all()
                .into_iter()
                .map(|f| {
                    let n = trials.unwrap_or(if f == PairFamily::Conjugate {
                        CONJUGATE_TRIALS
                    } else {
                        FAMILY_TRIALS
                    });
                    fuzz_theorem(n, seed, f, DEFAULT_RANGE)
                })
                .collect();
            ok &= self.theorem_reports(&reports, None)? == 0;
        }
        Ok(i32::from(!ok))
    }

    fn write_repro(&mut self, path: &Path, payload: &Value) -> Result<()> {
        let text = serde_json::to_string_pretty(payload).expect("plain data");
        std::fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        if self.text() {
            self.line(format!("reproduction data written to {}", path.display()))?;
        }
        Ok(())
    }

    fn theorem_reports(&mut self, reports: &[TheoremReport], repro: Option<&Path>) -> Result<i32> {
        let mut ok = true;
        for r in reports {
            let pass = if r.family == PairFamily::Independent.to_string() {
                r.passed() && r.s33_agreeing < r.checked
            } else {
                r.passed()
            };
            let summary = format!(
                "{} pairs, {} agree on S33, {} separated by S33, {} violations, {} template rejects",
                r.checked,
                r.s33_agreeing,
                r.separated_by_s33(),
                r.violations.len(),
                r.template_rejects
            );
            ok &= self.report(
                &format!("theorem {}", r.family),
                pass,
                summary,
                serde_json::to_value(r).expect("plain data"),
            )?;
        }
        let violations: Vec<_> = reports.iter().flat_map(|r| r.violations.iter()).collect();
        if !violations.is_empty() {
            let path = repro
                .map(Path::to_path_buf)
                .unwrap_or_else(|| PathBuf::from("nilsep-repro.json"));
            self.write_repro(&path, &json!({"violations": violations}))?;
        }
        Ok(i32::from(!ok))
    }

    fn canon_reports(&mut self, reports: &[CanonReport], repro: Option<&Path>) -> Result<i32> {
        let mut ok = true;
        for r in reports {
            let tags: Vec<String> = r.tags.iter().map(|(k, v)| format!("{k}={v}")).collect();
            let summary = format!(
                "{}/{} trials, tags {}",
                r.passed_trials,
                r.trials,
                tags.join(" ")
            );
            ok &= self.report(
                &format!("canon {}", r.stabilizer),
                r.passed(),
                summary,
                serde_json::to_value(r).expect("plain data"),
            )?;
        }
        let failures: Vec<_> = reports.iter().flat_map(|r| r.failures.iter()).collect();
        if !failures.is_empty() {
            let path = repro
                .map(Path::to_path_buf)
                .unwrap_or_else(|| PathBuf::from("nilsep-repro.json"));
            self.write_repro(&path, &json!({"failures": failures}))?;
        }
        Ok(i32::from(!ok))
    }

    fn decomp(
        &mut self,
        target: &str,
        seed: u64,
        samples: Option<usize>,
        expect: Option<Expect>,
    ) -> Result<i32> {
        let word: TraceWord = target.parse()?;
        if word.max_letter() > 3 {
            return Err(Error::LetterOutOfRange {
                letter: word.max_letter(),
                d: 3,
            });
        }
        let p33 = builtin(SetName::P33);
        let md = word.multidegree(3);
        let mut cands = product_basis(&md, &p33);
        cands.extend(
            generators_of_degree(&md, &p33)
                .into_iter()
                .filter(|g| !g.cyclically_equal(&word))
                .map(|g| ProductExpression::generator(g, 3)),
        );
        let n = samples.unwrap_or_else(|| min_samples(cands.len()));
        let dec = in_span(&WordCombination::word(word.clone()), &cands, n, seed)?;
        if self.text() {
            self.line(format!("target: tr({word})"))?;
            self.line(format!("candidates: {}", cands.len()))?;
            self.line(format!(
                "member: {} (samples {}, validation {}, seed {})",
                if dec.member { "yes" } else { "no" },
                dec.samples_used,
                dec.validation_samples,
                dec.seed
            ))?;
            if let Some(cs) = &dec.coefficients {
                for (c, p) in cs.iter().zip(&cands) {
                    self.line(format!("  {:>8}  {p}", scalar::format(c)))?;
                }
            }
        } else {
            let cand_names: Vec<String> = cands.iter().map(ToString::to_string).collect();
            self.machine(&json!({
                "target": word.to_string(),
                "candidates": cand_names,
                "decision": serde_json::to_value(&dec).expect("plain data"),
            }))?;
        }
        let contrary = match expect {
            Some(Expect::Member) => !dec.member,
            Some(Expect::NonMember) => dec.member,
            None => false,
        };
        Ok(i32::from(contrary))
    }
}
