//! Command-line front end for `cfmonoid`.
//!
//! [`run`] takes an argument vector and returns the exit code together
//! with everything destined for standard output and standard error, so
//! the binary is a two-line wrapper and tests need no subprocess.

use std::fmt::Write as _;

use cfmonoid::congruence::{sweep, SweepConfig, SweepReport};
use cfmonoid::family::{
    abelianization_check, build_presentation, decompose, enumerate_normal_forms, group_collapse_check, render, word,
    EnumerationBound, FamilyIndex, GroupImage, NormalFormDecomposition,
};
use cfmonoid::greens::{d_witness, h_trivial_scan, related_bounded, DChain, GreensWitness, Relatedness, Relation};
use cfmonoid::{
    complete, is_trivial_monoid, CompletionConfig, CompletionStatus, Confluence, RewriteSystem, ShortlexOrder, Strategy, Symbol,
    Word,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

pub const SCHEMA: u32 = 1;

#[derive(Debug, PartialEq, Eq)]
pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Parser, Debug)]
#[command(
    name = "cfmonoid",
    version,
    about = "Explore the monoids M_n: rewriting, normal forms, Green's relations, collapse tests"
)]
struct Cli {
    /// Report format
    #[arg(long, value_enum, global = true, default_value_t = Format::Text)]
    format: Format,
    /// Seed for pseudorandom word samples
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Side {
    #[value(name = "R", alias = "r")]
    R,
    #[value(name = "L", alias = "l")]
    L,
}

#[derive(Args, Debug)]
struct FamilyArg {
    /// Family index n >= 1
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    n: u32,
}

#[derive(Args, Debug, Clone, Copy)]
struct Budget {
    #[arg(long, default_value_t = CompletionConfig::default().max_steps)]
    max_steps: usize,
    #[arg(long, default_value_t = CompletionConfig::default().max_rules)]
    max_rules: usize,
    #[arg(long, default_value_t = CompletionConfig::default().max_word_length)]
    max_word_length: usize,
}

impl Budget {
    fn config(self) -> CompletionConfig {
        CompletionConfig { max_steps: self.max_steps, max_rules: self.max_rules, max_word_length: self.max_word_length }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the presentation of M_n
    Gen {
        #[command(flatten)]
        family: FamilyArg,
    },
    /// Normalize a word
    Reduce {
        #[command(flatten)]
        family: FamilyArg,
        #[arg(long)]
        word: String,
    },
    /// Normal form, its decomposition and its norm
    Nf {
        #[command(flatten)]
        family: FamilyArg,
        #[arg(long)]
        word: String,
    },
    /// List normal forms in shortlex order
    Enum {
        #[command(flatten)]
        family: FamilyArg,
        #[arg(long, conflicts_with = "max_norm", required_unless_present = "max_norm")]
        max_len: Option<usize>,
        #[arg(long)]
        max_norm: Option<u64>,
    },
    /// Critical pairs, confluence verdict and a strategy-independence sample
    Confluence {
        #[command(flatten)]
        family: FamilyArg,
        /// Random words (length <= 30) normalized under both strategies
        #[arg(long, default_value_t = 1000)]
        samples: usize,
    },
    /// Knuth-Bendix completion of a presentation file or of M_n
    Complete {
        #[arg(long, conflicts_with = "n", required_unless_present = "n")]
        file: Option<std::path::PathBuf>,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        n: Option<u32>,
        /// Additional equation u=v; repeatable
        #[arg(long)]
        extra: Vec<String>,
        #[command(flatten)]
        budget: Budget,
    },
    /// Bounded search for an R or L witness between two elements
    Greens {
        #[command(flatten)]
        family: FamilyArg,
        #[arg(long)]
        u: String,
        #[arg(long)]
        v: String,
        #[arg(long, value_enum)]
        side: Side,
        #[arg(long, default_value_t = 15)]
        witness_bound: usize,
    },
    /// Closed-form chain w L m R 1
    DChain {
        #[command(flatten)]
        family: FamilyArg,
        #[arg(long)]
        word: String,
    },
    /// Search for distinct H-related normal forms
    HScan {
        #[command(flatten)]
        family: FamilyArg,
        #[arg(long)]
        max_len: usize,
        #[arg(long, default_value_t = 25)]
        witness_bound: usize,
    },
    /// Collapse test over all pairs within a norm budget
    Sweep {
        #[command(flatten)]
        family: FamilyArg,
        #[arg(long)]
        budget: u64,
        #[command(flatten)]
        completion: Budget,
        /// Run the closure oracle on every k-th pair (0 disables it)
        #[arg(long)]
        oracle_every: Option<usize>,
        #[arg(long)]
        oracle_len_bound: Option<usize>,
    },
    /// Smith normal form of the abelianized relations
    Abelian {
        #[command(flatten)]
        family: FamilyArg,
        /// Also complete the group presentation with formal inverses
        #[arg(long)]
        group: bool,
    },
}

struct Report {
    code: i32,
    text: String,
    json: Value,
}

impl Report {
    fn ok(text: String, json: Value) -> Self {
        Report { code: 0, text, json }
    }
}

fn fail(message: impl std::fmt::Display) -> Output {
    Output { code: 2, stdout: String::new(), stderr: format!("error: {message}\n") }
}

/// Parse `argv` (program name first) and execute the command.
pub fn run<I, T>(argv: I) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return if e.use_stderr() {
                Output { code: 2, stdout: String::new(), stderr: rendered }
            } else {
                Output { code: 0, stdout: rendered, stderr: String::new() }
            };
        }
    };
    match execute(&cli) {
        Ok(r) => {
            let stdout = match cli.format {
                Format::Text => r.text,
                Format::Json => {
                    let mut v = r.json;
                    v["schema"] = json!(SCHEMA);
                    format!("{}\n", serde_json::to_string_pretty(&v).expect("serializable"))
                }
            };
            Output { code: r.code, stdout, stderr: String::new() }
        }
        Err(msg) => fail(msg),
    }
}

fn fi(n: u32) -> Result<FamilyIndex, String> {
    FamilyIndex::new(n).map_err(|e| e.to_string())
}

fn parse_word(text: &str, what: &str) -> Result<Word, String> {
    word(text).map_err(|e| format!("malformed word for {what}: {e}"))
}

fn normalized(sys: &RewriteSystem, text: &str, what: &str) -> Result<Word, String> {
    sys.normalize(&parse_word(text, what)?).map_err(|e| e.to_string())
}

fn rules_json(sys: &RewriteSystem) -> Value {
    let a = sys.alphabet();
    Value::Array(sys.rules().iter().map(|r| json!({"lhs": a.render(&r.lhs), "rhs": a.render(&r.rhs)})).collect())
}

fn witness_json(w: &GreensWitness) -> Value {
    json!({
        "relation": w.relation().name(),
        "u": render(w.u()),
        "v": render(w.v()),
        "forward": render(w.forward()),
        "backward": render(w.backward()),
    })
}

fn chain_json(c: &DChain) -> Value {
    json!({
        "w": render(c.w()),
        "middle": render(c.middle()),
        "left_part": render(c.left_part()),
        "right_part": render(c.right_part()),
        "left_inverse": render(c.left_inverse()),
        "right_inverse": render(c.right_inverse()),
    })
}

fn power(letter: char, k: u32) -> String {
    if k == 1 {
        letter.to_string()
    } else {
        format!("{letter}^{k}")
    }
}

fn describe(d: &NormalFormDecomposition) -> String {
    let mut parts = Vec::new();
    if d.leading_b > 0 {
        parts.push(power('b', d.leading_b));
    }
    parts.extend(d.blocks.iter().map(|b| format!("({} {})", power('a', b.a), power('b', b.b))));
    parts.extend(d.tails.iter().map(|&m| format!("({} b)", power('a', m))));
    if d.trailing_a > 0 {
        parts.push(power('a', d.trailing_a));
    }
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join(" ")
    }
}

fn execute(cli: &Cli) -> Result<Report, String> {
    match &cli.command {
        Command::Gen { family } => {
            let n = fi(family.n)?;
            let sys = build_presentation(n);
            Ok(Report::ok(sys.to_presentation(), json!({"n": n.get(), "generators": ["a", "b"], "rules": rules_json(&sys)})))
        }
        Command::Reduce { family, word } => {
            let sys = build_presentation(fi(family.n)?);
            let w = parse_word(word, "--word")?;
            let (nf, steps) = sys.normalize_with_budget(&w, w.len() + 1).map_err(|e| e.to_string())?;
            Ok(Report::ok(
                format!("{}\n", render(&nf)),
                json!({"n": family.n, "input": render(&w), "normal_form": render(&nf), "steps": steps}),
            ))
        }
        Command::Nf { family, word } => {
            let n = fi(family.n)?;
            let nf = normalized(&build_presentation(n), word, "--word")?;
            let d = decompose(&nf, n).map_err(|e| e.to_string())?;
            let norm = d.norm().0;
            Ok(Report::ok(
                format!("normal form: {}\ndecomposition: {}\nnorm: {norm}\n", render(&nf), describe(&d)),
                json!({
                    "n": n.get(),
                    "normal_form": render(&nf),
                    "leading_b": d.leading_b,
                    "blocks": d.blocks.iter().map(|b| json!({"a": b.a, "b": b.b})).collect::<Vec<_>>(),
                    "tails": d.tails,
                    "trailing_a": d.trailing_a,
                    "prefix": render(&d.prefix()),
                    "suffix": render(&d.suffix()),
                    "norm": norm,
                }),
            ))
        }
        Command::Enum { family, max_len, max_norm } => {
            let n = fi(family.n)?;
            let bound = match (max_len, max_norm) {
                (Some(l), _) => EnumerationBound::MaxLength(*l),
                (None, Some(k)) => EnumerationBound::MaxNorm(*k),
                (None, None) => return Err("one of --max-len or --max-norm is required".into()),
            };
            let words: Vec<String> = enumerate_normal_forms(n, bound).iter().map(render).collect();
            let text = words.iter().fold(String::new(), |mut s, w| {
                s.push_str(w);
                s.push('\n');
                s
            });
            Ok(Report::ok(text, json!({"n": n.get(), "count": words.len(), "words": words})))
        }
        Command::Confluence { family, samples } => {
            let sys = build_presentation(fi(family.n)?);
            let pairs = sys.critical_pairs();
            let verdict = sys.is_confluent(1 << 16);
            let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
            let mut disagreement = None;
            for _ in 0..*samples {
                let len = rng.gen_range(0..=30);
                let w = Word::from_symbols((0..len).map(|_| Symbol(rng.gen_range(0..2))).collect());
                let x = sys.normalize_by(&w, Strategy::LeftmostInnermost).map_err(|e| e.to_string())?;
                let y = sys.normalize_by(&w, Strategy::Rightmost).map_err(|e| e.to_string())?;
                if x != y {
                    disagreement = Some((w, x, y));
                    break;
                }
            }
            let (verdict_name, witness) = match &verdict {
                Confluence::Confluent => ("confluent", Value::Null),
                Confluence::NotConfluent(cp) => (
                    "not-confluent",
                    json!({"source": render(&cp.source), "left": render(&cp.left_result), "right": render(&cp.right_result)}),
                ),
                Confluence::Unknown => ("unknown", Value::Null),
            };
            let ok = verdict == Confluence::Confluent && disagreement.is_none();
            let mut text = format!("critical pairs: {}\nverdict: {verdict_name}\n", pairs.len());
            match &disagreement {
                None => writeln!(text, "strategy check: {samples} words agree").unwrap(),
                Some((w, x, y)) => writeln!(text, "strategy check: {} gives {} and {}", render(w), render(x), render(y)).unwrap(),
            }
            Ok(Report {
                code: if ok { 0 } else { 1 },
                text,
                json: json!({
                    "n": family.n,
                    "critical_pairs": pairs.len(),
                    "verdict": verdict_name,
                    "witness": witness,
                    "samples": samples,
                    "seed": cli.seed,
                    "strategy_independent": disagreement.is_none(),
                }),
            })
        }
        Command::Complete { file, n, extra, budget } => {
            let sys = match (file, n) {
                (Some(path), _) => {
                    let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
                    RewriteSystem::parse_presentation(&text).map_err(|e| format!("malformed presentation file: {e}"))?
                }
                (None, Some(n)) => build_presentation(fi(*n)?),
                (None, None) => return Err("one of --file or --n is required".into()),
            };
            let mut equations = Vec::new();
            for eq in extra {
                let (u, v) = eq.split_once('=').ok_or_else(|| format!("--extra {eq:?} is not of the form u=v"))?;
                let parse = |t: &str| sys.alphabet().parse(t).map_err(|e| format!("malformed word in --extra: {e}"));
                equations.push((parse(u)?, parse(v)?));
            }
            let cfg = budget.config();
            cfg.validate().map_err(|e| e.to_string())?;
            let ord = ShortlexOrder::natural(sys.alphabet());
            let out = complete(&sys, &equations, &ord, &cfg).map_err(|e| e.to_string())?;
            let completed = out.status == CompletionStatus::Completed;
            let trivial = if completed { Some(is_trivial_monoid(&out).map_err(|e| e.to_string())?) } else { None };
            let status = if completed { "completed" } else { "exhausted" };
            let mut text = format!("status: {status}\nsteps: {}\n", out.steps_used);
            if let Some(t) = trivial {
                writeln!(text, "trivial: {t}").unwrap();
            }
            if let Some(d) = &out.diagnostic {
                writeln!(text, "diagnostic: {d}").unwrap();
            }
            text.push_str(&out.system.to_presentation());
            Ok(Report {
                code: if completed { 0 } else { 1 },
                text,
                json: json!({
                    "status": status,
                    "steps": out.steps_used,
                    "dropped_pairs": out.dropped_pairs,
                    "diagnostic": out.diagnostic,
                    "trivial": trivial,
                    "generators": out.system.alphabet().names().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                    "rules": rules_json(&out.system),
                }),
            })
        }
        Command::Greens { family, u, v, side, witness_bound } => {
            let sys = build_presentation(fi(family.n)?);
            let (u, v) = (normalized(&sys, u, "--u")?, normalized(&sys, v, "--v")?);
            let relation = match side {
                Side::R => Relation::R,
                Side::L => Relation::L,
            };
            let found = related_bounded(&u, &v, relation, &sys, *witness_bound);
            let (text, witness) = match &found {
                Relatedness::Witnessed(w) => (
                    format!(
                        "{} {} {}: forward {}, backward {}\n",
                        render(&u),
                        relation.name(),
                        render(&v),
                        render(w.forward()),
                        render(w.backward())
                    ),
                    witness_json(w),
                ),
                Relatedness::Unknown => {
                    (format!("unknown: no {} witness within {witness_bound} letters\n", relation.name()), Value::Null)
                }
            };
            Ok(Report::ok(
                text,
                json!({
                    "n": family.n,
                    "relation": relation.name(),
                    "status": if witness.is_null() { "unknown" } else { "witnessed" },
                    "witness": witness,
                }),
            ))
        }
        Command::DChain { family, word } => {
            let n = fi(family.n)?;
            let w = normalized(&build_presentation(n), word, "--word")?;
            let c = d_witness(&w, n).map_err(|e| e.to_string())?;
            let text = format!(
                "w: {}\nmiddle: {}\nleft_part: {}\nright_part: {}\nleft_inverse: {}\nright_inverse: {}\n",
                render(c.w()),
                render(c.middle()),
                render(c.left_part()),
                render(c.right_part()),
                render(c.left_inverse()),
                render(c.right_inverse())
            );
            let mut j = chain_json(&c);
            j["n"] = json!(n.get());
            Ok(Report::ok(text, j))
        }
        Command::HScan { family, max_len, witness_bound } => {
            let n = fi(family.n)?;
            let found = h_trivial_scan(n, *max_len, *witness_bound);
            let mut text = format!("violations: {}\n", found.len());
            for h in &found {
                writeln!(text, "{} H {}", render(&h.u), render(&h.v)).unwrap();
            }
            Ok(Report {
                code: if found.is_empty() { 0 } else { 1 },
                text,
                json: json!({
                    "n": n.get(),
                    "max_len": max_len,
                    "witness_bound": witness_bound,
                    "violations": found
                        .iter()
                        .map(|h| json!({"u": render(&h.u), "v": render(&h.v), "r": witness_json(&h.r), "l": witness_json(&h.l)}))
                        .collect::<Vec<_>>(),
                }),
            })
        }
        Command::Sweep { family, budget, completion, oracle_every, oracle_len_bound } => {
            let n = fi(family.n)?;
            let mut cfg = SweepConfig::for_family(n);
            cfg.completion = completion.config();
            if let Some(k) = oracle_every {
                cfg.oracle_every = *k;
            }
            if let Some(l) = oracle_len_bound {
                cfg.oracle_len_bound = *l;
            }
            let r = sweep(n, *budget, &cfg).map_err(|e| e.to_string())?;
            Ok(sweep_report(&r))
        }
        Command::Abelian { family, group } => {
            let n = fi(family.n)?;
            let ab = abelianization_check(n).map_err(|e| e.to_string())?;
            let divisors = ab.divisors.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(" ");
            let mut text = format!("divisors: {divisors}\ntrivial: {}\n", ab.trivial);
            let mut j = json!({"n": n.get(), "divisors": ab.divisors, "trivial": ab.trivial});
            let mut ok = ab.trivial;
            if *group {
                let g = group_collapse_check(n, &CompletionConfig::default()).map_err(|e| e.to_string())?;
                let name = match g.verdict {
                    GroupImage::Trivial => "trivial",
                    GroupImage::Inconclusive => "inconclusive",
                };
                writeln!(text, "group image: {name} ({} steps)", g.steps_used).unwrap();
                j["group_image"] = json!({"verdict": name, "steps": g.steps_used, "diagnostic": g.diagnostic});
                ok &= g.verdict == GroupImage::Trivial;
            }
            Ok(Report { code: if ok { 0 } else { 1 }, text, json: j })
        }
    }
}

fn sweep_report(r: &SweepReport) -> Report {
    let pair = |p: &cfmonoid::congruence::InconclusivePair| json!({"u": render(&p.u), "v": render(&p.v), "method": p.method.name(), "steps": p.steps});
    let mut text = format!(
        "n: {}\nnorm budget: {}\npairs tested: {}\ncollapsed: {}\ninconclusive: {}\noracle: {}/{} collapsed\ncontradictions: {}\n",
        r.n,
        r.norm_budget,
        r.pairs_tested,
        r.collapsed,
        r.inconclusive.len(),
        r.oracle_collapsed,
        r.oracle_checked,
        r.contradictions.len()
    );
    for p in &r.inconclusive {
        writeln!(text, "inconclusive: {} = {} after {} steps", render(&p.u), render(&p.v), p.steps).unwrap();
    }
    for (u, v) in &r.contradictions {
        writeln!(text, "contradiction: {} = {}", render(u), render(v)).unwrap();
    }
    Report {
        code: if r.is_clean() { 0 } else { 1 },
        text,
        json: json!({
            "n": r.n.get(),
            "norm_budget": r.norm_budget,
            "pairs_tested": r.pairs_tested,
            "collapsed": r.collapsed,
            "inconclusive": r.inconclusive.iter().map(pair).collect::<Vec<_>>(),
            "oracle": {
                "checked": r.oracle_checked,
                "collapsed": r.oracle_collapsed,
                "inconclusive": r.oracle_inconclusive.iter().map(pair).collect::<Vec<_>>(),
            },
            "contradictions": r.contradictions.iter().map(|(u, v)| json!({"u": render(u), "v": render(v)})).collect::<Vec<_>>(),
            "completion_steps": r.completion_steps,
            "elapsed_ms": r.elapsed.as_millis() as u64,
        }),
    }
}
