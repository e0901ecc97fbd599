use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use serde::{Deserialize, Serialize};
use serde_json::json;

use qhash_core::bounds::{
    beats_probabilistic, make_table1, make_table2, mc_friendly_check, rate_asymptotic,
    rate_from_inner, rate_probabilistic, ExperimentConfig, Provenance, RateBound, SubsetFamily,
    Variant,
};
use qhash_core::codes::{export_code, Code, CodeSpec, Construction};
use qhash_core::mappings::{asymptotic_cm_estimate, complete_mapping_count, LONG_RUNTIME_ORDER};
use qhash_core::real::{Rounding, DEFAULT_PRECISION_BITS};
use qhash_core::repro::{self, Repro};
use qhash_core::separation::{
    count_separated_bruteforce, count_separated_closed, count_separated_ix, is_separated,
    SeparationReport,
};
use qhash_core::{Error, GroupSpec, Limits};

/// Significant digits printed for rates outside the tables.
const RATE_DIGITS: usize = 12;

#[derive(Debug, Parser)]
#[command(
    name = "qhash",
    version,
    about = "Rate bounds for perfect hash codes from explicit inner codes"
)]
pub struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Global {
    /// JSON file supplying defaults for the global options below.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Emit a single JSON document on standard output.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads: a positive number or `auto` [default: auto].
    #[arg(long, global = true)]
    threads: Option<String>,
    /// Most q-subsets the brute-force engine may visit [default: 1000000000].
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    max_subsets: Option<u64>,
    /// Longest code accepted by inclusion-exclusion [default: 8].
    #[arg(long, global = true, value_parser = positive_usize)]
    max_ix_coords: Option<usize>,
    /// Largest group order for complete-mapping counts [default: 15].
    #[arg(long, global = true, value_parser = positive_usize)]
    max_cm_order: Option<usize>,
    /// Fractional bits used for logarithms [default: 128].
    #[arg(long, global = true, value_parser = clap::value_parser!(u32).range(16..=8192))]
    precision_bits: Option<u32>,
    /// Seed for randomized checks [default: 1].
    #[arg(long, global = true)]
    seed: Option<u64>,
}

/// Contents of a `--config` file. Every key is optional; command-line flags win.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    json: Option<bool>,
    threads: Option<serde_json::Value>,
    max_subsets: Option<u64>,
    max_ix_coords: Option<usize>,
    max_cm_order: Option<usize>,
    precision_bits: Option<u32>,
    seed: Option<u64>,
}

fn load_config(path: &Path) -> Result<FileConfig, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read config {}: {e}", path.display())))?;
    let cfg: FileConfig = serde_json::from_str(&text)
        .map_err(|e| Failure::Usage(format!("invalid config {}: {e}", path.display())))?;
    let zero =
        cfg.max_subsets == Some(0) || cfg.max_ix_coords == Some(0) || cfg.max_cm_order == Some(0);
    if zero {
        return Err(Failure::Usage(format!(
            "config {}: limits must be positive",
            path.display()
        )));
    }
    if let Some(b) = cfg.precision_bits {
        if !(16..=8192).contains(&b) {
            return Err(Failure::Usage(format!(
                "config {}: precision_bits must be in 16..=8192",
                path.display()
            )));
        }
    }
    Ok(cfg)
}

fn positive_usize(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be positive".into()),
        Ok(v) => Ok(v),
        Err(e) => Err(e.to_string()),
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Count complete mappings of a group.
    Cm {
        #[arg(long)]
        group: GroupSpec,
        /// Also print the asymptotic estimate and its ratio to the count.
        #[arg(long)]
        estimate: bool,
    },
    /// Count separated q-subsets of a code.
    Count {
        #[arg(long)]
        code: CodeSpec,
        #[arg(long, value_enum, default_value = "auto")]
        method: MethodArg,
    },
    /// Rate bound from an inner code, the probabilistic bound, or an asymptotic formula.
    Rate {
        #[arg(long, conflicts_with_all = ["probabilistic", "asymptotic"])]
        code: Option<CodeSpec>,
        /// Use this separated-subset count instead of computing it.
        #[arg(long = "s", requires = "code")]
        s: Option<BigUint>,
        #[arg(long, value_enum, default_value = "auto")]
        method: MethodArg,
        #[arg(long, requires = "q", conflicts_with = "asymptotic")]
        probabilistic: bool,
        /// Heuristic plug-in evaluation of an asymptotic bound.
        #[arg(long, value_enum, requires = "q")]
        asymptotic: Option<VariantArg>,
        #[arg(short, long, value_parser = clap::value_parser!(u64).range(2..))]
        q: Option<u64>,
    },
    /// Decide exactly whether a code beats the probabilistic bound.
    Beats {
        #[arg(long)]
        code: CodeSpec,
        #[arg(long, value_enum, default_value = "auto")]
        method: MethodArg,
    },
    /// Complete mappings of odd cyclic groups against their threshold.
    Table1 {
        #[arg(long, default_value_t = 15)]
        max_q: usize,
    },
    /// Best bound per alphabet size against the probabilistic bound.
    Table2 {
        /// Significant digits for every row instead of the per-q defaults.
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..=60))]
        digits: Option<u64>,
    },
    /// Monte Carlo check of the random friendly-code expectation.
    Mc {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        q: usize,
        #[arg(long = "N")]
        n: usize,
        #[arg(long = "M")]
        big_m: usize,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        /// `all`, or `code:<spec>` for the separated subsets of a code with m words.
        #[arg(long, default_value = "all")]
        family: String,
    },
    /// Run the reproduction checks and print a pass/fail manifest.
    Repro {
        /// Run only these checks.
        #[arg(long)]
        only: Vec<String>,
        #[arg(long, default_value_t = 400)]
        mc_trials: usize,
    },
    /// Write a code in the plain-text code format.
    Export {
        #[arg(long)]
        code: CodeSpec,
        /// Output file; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum MethodArg {
    Auto,
    Brute,
    Ix,
    Closed,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum VariantArg {
    ThreeCol,
    FourCol,
}

pub enum Failure {
    Usage(String),
    Core(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

type Outcome = Result<(), Failure>;

struct Ctx {
    json: bool,
    limits: Limits,
    bits: u32,
    seed: u64,
}

impl Ctx {
    fn emit<T: Serialize>(&self, doc: &T, human: impl FnOnce() -> String) {
        if self.json {
            println!(
                "{}",
                serde_json::to_string_pretty(doc).expect("reports serialize")
            );
        } else {
            print!("{}", human());
        }
    }
}

pub fn run(cli: Cli) -> Outcome {
    let g = cli.global;
    let file = match &g.config {
        Some(path) => load_config(path)?,
        None => FileConfig::default(),
    };
    let threads = match (g.threads, file.threads) {
        (Some(t), _) => t,
        (None, Some(serde_json::Value::String(t))) => t,
        (None, Some(serde_json::Value::Number(n))) => n.to_string(),
        (None, Some(other)) => {
            return Err(Failure::Usage(format!(
                "config: invalid threads value {other}"
            )))
        }
        (None, None) => "auto".to_string(),
    };
    configure_threads(&threads)?;
    let defaults = Limits::default();
    let ctx = Ctx {
        json: g.json || file.json.unwrap_or(false),
        limits: Limits {
            max_subsets: g
                .max_subsets
                .or(file.max_subsets)
                .unwrap_or(defaults.max_subsets),
            max_ix_coords: g
                .max_ix_coords
                .or(file.max_ix_coords)
                .unwrap_or(defaults.max_ix_coords),
            max_cm_order: g
                .max_cm_order
                .or(file.max_cm_order)
                .unwrap_or(defaults.max_cm_order),
            ..defaults
        },
        bits: g
            .precision_bits
            .or(file.precision_bits)
            .unwrap_or(DEFAULT_PRECISION_BITS),
        seed: g.seed.or(file.seed).unwrap_or(1),
    };
    match cli.command {
        Command::Cm { group, estimate } => cm(&ctx, &group, estimate),
        Command::Count { code, method } => count(&ctx, &code, method),
        Command::Rate {
            code,
            s,
            method,
            probabilistic,
            asymptotic,
            q,
        } => rate(
            &ctx,
            code,
            s,
            method,
            probabilistic,
            asymptotic,
            q.map(|q| q as usize),
        ),
        Command::Beats { code, method } => beats(&ctx, &code, method),
        Command::Table1 { max_q } => table1(&ctx, max_q),
        Command::Table2 { digits } => table2(&ctx, digits.map(|d| d as usize)),
        Command::Mc {
            m,
            q,
            n,
            big_m,
            trials,
            family,
        } => {
            let config = ExperimentConfig {
                m,
                q,
                n,
                big_m,
                trials,
                seed: ctx.seed,
            };
            mc(&ctx, &config, &family)
        }
        Command::Repro { only, mc_trials } => run_repro(&ctx, &only, mc_trials),
        Command::Export { code, out } => export(&ctx, &code, out),
    }
}

fn configure_threads(spec: &str) -> Outcome {
    let threads = match spec {
        "auto" => return Ok(()),
        s => match s.parse::<usize>() {
            Ok(n) if n > 0 => n,
            _ => {
                return Err(Failure::Usage(format!(
                    "--threads expects a positive number or `auto`, got `{s}`"
                )))
            }
        },
    };
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Failure::Usage(format!("cannot configure threads: {e}")))
}

fn cm(ctx: &Ctx, group: &GroupSpec, estimate: bool) -> Outcome {
    if group.order() > LONG_RUNTIME_ORDER && group.order() <= ctx.limits.max_cm_order {
        eprintln!(
            "warning: complete-mapping search over order {} may take a long time",
            group.order()
        );
    }
    let count = complete_mapping_count(group, &ctx.limits)?;
    let est = if estimate {
        Some(asymptotic_cm_estimate(group.order())?)
    } else {
        None
    };
    let cm_f64: f64 = count.cm.to_string().parse().unwrap_or(f64::NAN);
    let ratio = est.map(|e| cm_f64 / e);
    let doc = json!({
        "group": group.to_string(),
        "cm": count.cm.to_string(),
        "s_value": count.s_value.to_string(),
        "estimate": est,
        "ratio": ratio,
        "heuristic_estimate": estimate,
    });
    ctx.emit(&doc, || {
        let mut s = format!(
            "group    {group}\ncm       {}\ns_value  {}\n",
            count.cm, count.s_value
        );
        if let (Some(e), Some(r)) = (est, ratio) {
            s.push_str(&format!("estimate {e:.6e} (heuristic)\nratio    {r:.6}\n"));
        }
        s
    });
    Ok(())
}

fn separated(ctx: &Ctx, code: &Code, method: MethodArg) -> Result<SeparationReport, Error> {
    match method {
        MethodArg::Brute => count_separated_bruteforce(code, &ctx.limits),
        MethodArg::Ix => count_separated_ix(code, &ctx.limits),
        MethodArg::Closed => count_separated_closed(code),
        MethodArg::Auto => match code.construction() {
            Construction::Parity { .. }
            | Construction::Sum { .. }
            | Construction::ShiftUnion { .. } => count_separated_closed(code),
            _ if code.n() <= ctx.limits.max_ix_coords => count_separated_ix(code, &ctx.limits),
            _ => count_separated_bruteforce(code, &ctx.limits),
        },
    }
}

fn count(ctx: &Ctx, spec: &CodeSpec, method: MethodArg) -> Outcome {
    let code = spec.build()?;
    let report = separated(ctx, &code, method)?;
    ctx.emit(&report, || {
        let mut s = format!(
            "code      {} (q = {}, n = {}, m = {})\nmethod    {}\nexact     {}\n|S(C)|    {}\n",
            report.code_summary.construction,
            report.code_summary.q,
            report.code_summary.n,
            report.code_summary.m,
            serde_json::to_value(report.method)
                .expect("method serializes")
                .as_str()
                .unwrap_or("?"),
            report.exact,
            report.s_count
        );
        for (t, a) in &report.a_by_t {
            let t: Vec<String> = t.iter().map(|i| (i + 1).to_string()).collect();
            s.push_str(&format!("|A_{{{}}}|  {a}\n", t.join(",")));
        }
        s
    });
    Ok(())
}

fn rate_line(r: &RateBound) -> Result<String, Error> {
    let d = r.stable_decimal(RATE_DIGITS, Rounding::Truncate)?;
    let mut s = format!(
        "q {}  n {}  m {}\ndefect {}\nrate   {}  ({} digits, truncated)\nsource {} / {}\n",
        r.q,
        r.n,
        r.m,
        r.defect,
        d.scientific(),
        RATE_DIGITS,
        r.provenance.construction,
        r.provenance.method
    );
    if r.heuristic {
        s.push_str("note   heuristic: lower-order term dropped\n");
    }
    Ok(s)
}

fn rate(
    ctx: &Ctx,
    code: Option<CodeSpec>,
    s: Option<BigUint>,
    method: MethodArg,
    probabilistic: bool,
    asymptotic: Option<VariantArg>,
    q: Option<usize>,
) -> Outcome {
    let bound = if let Some(spec) = code {
        let code = spec.build()?;
        let (s_count, how) = match s {
            Some(s) => (s, "given".to_string()),
            None => {
                let report = separated(ctx, &code, method)?;
                if !report.exact {
                    eprintln!("note: |S| is a lower bound, so the rate is a lower bound on the inner-code bound");
                }
                let how = serde_json::to_value(report.method).expect("method serializes");
                (report.s_count, how.as_str().unwrap_or("?").to_string())
            }
        };
        let prov = Provenance::new(code.construction().to_string(), how);
        rate_from_inner(
            code.q(),
            code.n(),
            &BigUint::from(code.len()),
            &s_count,
            prov,
            ctx.bits,
        )?
    } else if let Some(v) = asymptotic {
        let variant = match v {
            VariantArg::ThreeCol => Variant::ThreeCol,
            VariantArg::FourCol => Variant::FourCol,
        };
        rate_asymptotic(q.expect("clap requires -q"), variant, ctx.bits)?
    } else if probabilistic {
        rate_probabilistic(q.expect("clap requires -q"), ctx.bits)?
    } else {
        return Err(Failure::Usage(
            "rate needs --code, --probabilistic or --asymptotic".into(),
        ));
    };
    let human = rate_line(&bound)?;
    ctx.emit(&bound, || human);
    Ok(())
}

fn beats(ctx: &Ctx, spec: &CodeSpec, method: MethodArg) -> Outcome {
    let code = spec.build()?;
    let report = separated(ctx, &code, method)?;
    let cert = beats_probabilistic(
        code.q(),
        code.n(),
        &BigUint::from(code.len()),
        &report.s_count,
    )?;
    let doc = json!({
        "code": code.construction().to_string(),
        "s_count": report.s_count.to_string(),
        "exact_count": report.exact,
        "certificate": cert,
    });
    ctx.emit(&doc, || {
        format!(
            "code        {}\n|S(C)|      {}{}\ncode defect {}\n(1-q!/q^q)^n {}\nbeats       {}\n",
            code.construction(),
            report.s_count,
            if report.exact { "" } else { " (lower bound)" },
            cert.code_defect,
            cert.probabilistic_defect_pow_n,
            cert.beats
        )
    });
    Ok(())
}

fn table1(ctx: &Ctx, max_q: usize) -> Outcome {
    let rows = make_table1(max_q, &ctx.limits)?;
    ctx.emit(&rows, || {
        let mut s = format!(
            "{:>4} {:>12} {:>16} {:>8}\n",
            "q", "cm", "(q!)^2/q^q", "ratio"
        );
        for r in &rows {
            s.push_str(&format!(
                "{:>4} {:>12} {:>16} {:>8}\n",
                r.q, r.cm, r.threshold_display, r.ratio_display
            ));
        }
        s
    });
    Ok(())
}

fn table2(ctx: &Ctx, digits: Option<usize>) -> Outcome {
    let rows = make_table2(digits, &ctx.limits, ctx.bits)?;
    ctx.emit(&rows, || {
        let mut s = format!(
            "{:>4} {:>16} {:>16}  {}\n",
            "q", "R_new", "R_ran", "best construction"
        );
        for r in &rows {
            s.push_str(&format!(
                "{:>4} {:>16} {:>16}  {}\n",
                r.q, r.r_new, r.r_ran, r.winner
            ));
        }
        s
    });
    Ok(())
}

fn q_subsets(m: usize, q: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, m: usize, q: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == q {
            out.push(cur.clone());
            return;
        }
        for x in start..m {
            cur.push(x);
            go(x + 1, m, q, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, m, q, &mut Vec::new(), &mut out);
    out
}

fn family(ctx: &Ctx, config: &ExperimentConfig, spec: &str) -> Result<SubsetFamily, Failure> {
    if spec == "all" {
        return Ok(SubsetFamily::all(config.m, config.q)?);
    }
    let Some(code_spec) = spec.strip_prefix("code:") else {
        return Err(Failure::Usage(format!(
            "--family expects `all` or `code:<spec>`, got `{spec}`"
        )));
    };
    let code = code_spec.parse::<CodeSpec>()?.build()?;
    if code.len() != config.m || code.q() != config.q {
        return Err(Failure::Usage(format!(
            "code has {} words over {} symbols; the experiment needs m = {}, q = {}",
            code.len(),
            code.q(),
            config.m,
            config.q
        )));
    }
    let work = qhash_core::separation::binomial(config.m as u64, config.q as u64);
    if work > BigUint::from(ctx.limits.max_mc_subsets) {
        return Err(Error::Infeasible {
            what: "listing the separated subsets of the family code".into(),
            work: work.to_string(),
            cap: ctx.limits.max_mc_subsets.to_string(),
        }
        .into());
    }
    let mut sets = Vec::new();
    for s in q_subsets(config.m, config.q) {
        if is_separated(&code, &s)? {
            sets.push(s);
        }
    }
    Ok(SubsetFamily::new(config.m, config.q, &sets)?)
}

fn mc(ctx: &Ctx, config: &ExperimentConfig, family_spec: &str) -> Outcome {
    config.validate()?;
    let fam = family(ctx, config, family_spec)?;
    let report = mc_friendly_check(config, &fam, &ctx.limits)?;
    ctx.emit(&report, || {
        format!(
            "config        m={} q={} N={} M={} trials={} seed={} ({})\n|A|           {}\nexpectation   {:.6e}\nmean          {:.6e}\nstd error     {:.3e}\nwithin 3 SE   {}\ncondition     {}\nsurvivors     {:.2} (target {}, reached in {}/{} trials)\n",
            config.m,
            config.q,
            config.n,
            config.big_m,
            config.trials,
            config.seed,
            report.rng,
            report.family_size,
            report.expected,
            report.empirical_mean,
            report.standard_error,
            report.within_three_se,
            report.condition_holds,
            report.mean_surviving_words,
            report.target_size,
            report.trials_reaching_target,
            config.trials
        )
    });
    Ok(())
}

fn run_repro(ctx: &Ctx, only: &[String], mc_trials: usize) -> Outcome {
    for id in only {
        if !repro::CHECK_IDS.contains(&id.as_str()) {
            return Err(Failure::Usage(format!(
                "unknown check `{id}`; known: {}",
                repro::CHECK_IDS.join(", ")
            )));
        }
    }
    let r = Repro::new(ctx.limits.clone(), ctx.bits, ctx.seed, mc_trials);
    let ids: Vec<&str> = if only.is_empty() {
        repro::CHECK_IDS.to_vec()
    } else {
        only.iter().map(String::as_str).collect()
    };
    let results: Vec<_> = ids.iter().map(|id| repro::run(id, &r)).collect();
    let all_pass = results.iter().all(|c| c.pass);
    let doc = json!({ "all_pass": all_pass, "checks": results });
    ctx.emit(&doc, || {
        let mut s = String::new();
        for c in &results {
            s.push_str(&c.line());
            s.push('\n');
            for d in &c.details {
                s.push_str(&format!("    {d}\n"));
            }
        }
        let passed = results.iter().filter(|c| c.pass).count();
        s.push_str(&format!("{passed}/{} checks passed\n", results.len()));
        s
    });
    Ok(())
}

fn export(ctx: &Ctx, spec: &CodeSpec, out: Option<PathBuf>) -> Outcome {
    let code = spec.build()?;
    match out {
        Some(path) => {
            export_code(&code, &path)?;
            let doc = json!({ "code": code.construction().to_string(), "words": code.len(), "path": path.display().to_string() });
            ctx.emit(&doc, || {
                format!("wrote {} words to {}\n", code.len(), path.display())
            });
        }
        None => {
            let rows: Vec<Vec<u8>> = code.codewords().map(<[u8]>::to_vec).collect();
            let doc = json!({ "summary": code.summary(), "codewords": rows });
            ctx.emit(&doc, || code.to_text());
        }
    }
    Ok(())
}
