//! Command-line front end: identity verification, wedge images, commutator
//! classification, level computation, congruence reduction, and weight
//! diagrams.

use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Mutex;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use extpow::congruence::{
    congruence_predicates, in_wedge_image, reduce_matrix, MembershipVerdict,
};
use extpow::diagram::{emit_diagram, DiagramFormat, DiagramSpec};
use extpow::index::WeightPair;
use extpow::level::{level_of, net_init, saturate, LevelVerdict, Rule, RuleSet};
use extpow::ring::{FiniteIdeal, Ring, RingElement};
use extpow::serialize::{
    elem_to_json, matrix_from_json, matrix_to_json, parse_index, ring_from_text,
};
use extpow::suite;
use extpow::transvect::{classify_commutator, commutator_eval, CommutatorClass, TransvectionTerm};
use extpow::wedge::{wedge_matrix, wedge_transvection_formula, WedgeSpec};
use extpow::Error;

#[derive(Parser)]
#[command(name = "extpow", about = "Exact exterior-power calculus for elementary groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the registered identity checks.
    Verify {
        /// Only run checks whose id starts with this prefix.
        #[arg(long)]
        filter: Option<String>,
        /// Emit the full report as JSON.
        #[arg(long)]
        json: bool,
        /// Number of worker threads.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Apply the exterior power to a matrix or print a transvection's factors.
    Wedge {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        m: u32,
        /// JSON matrix file to map through the exterior power.
        #[arg(long, conflicts_with = "transvection")]
        matrix: Option<PathBuf>,
        /// "i,j,arg": print the closed-form factor list of wedge t_{i,j}(arg).
        #[arg(long)]
        transvection: Option<String>,
        /// Base ring: int, z/9, poly:xi (default inferred).
        #[arg(long)]
        ring: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Classify and evaluate [t_{I,J}(xi), wedge t_{j,i}(zeta)].
    Commute {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        m: u32,
        /// "I,J,arg" with indices in digit or bracket form.
        #[arg(long)]
        t: String,
        /// "j,i,arg": the wedge of an elementary transvection.
        #[arg(long)]
        wedge: String,
        /// Verify the closed form against the direct matrix commutator.
        #[arg(long)]
        checked: bool,
        #[arg(long)]
        json: bool,
    },
    /// Saturate a net of ideals from transvection generators and report the level.
    Level {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        m: u32,
        /// Base ring, e.g. z/9.
        #[arg(long)]
        ring: String,
        /// Generator "I,J:r" (repeatable).
        #[arg(long = "gen")]
        gens: Vec<String>,
        /// Comma-separated rule names (default: all rules).
        #[arg(long)]
        rules: Option<String>,
        /// Write the saturation trace to this file.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Reduce a matrix modulo a principal ideal; optionally recognize a wedge image.
    Reduce {
        /// Source modulus.
        #[arg(long)]
        q: u64,
        /// Generator of the principal ideal.
        #[arg(long)]
        ideal: u64,
        /// JSON matrix file over Z/q.
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        n: Option<u32>,
        #[arg(long)]
        m: Option<u32>,
        /// Test membership of the reduction in the exterior-power image.
        #[arg(long)]
        recognize: bool,
    },
    /// Emit the weight diagram of the m-th exterior power.
    Diagram {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        m: u32,
        /// Highlight the paths of simple root k (edges k+1 -> k).
        #[arg(long)]
        root: Option<u32>,
        /// dot, tikz, or json.
        #[arg(long, default_value = "dot")]
        format: String,
        /// Annotate commutator classes for the pair "I,J" (JSON only).
        #[arg(long)]
        classify: Option<String>,
        /// Output file (default: standard output).
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(cmd: Command) -> Result<ExitCode, Error> {
    match cmd {
        Command::Verify { filter, json, jobs } => cmd_verify(filter.as_deref(), json, jobs),
        Command::Wedge { n, m, matrix, transvection, ring, json } => {
            cmd_wedge(n, m, matrix, transvection, ring, json)
        }
        Command::Commute { n, m, t, wedge, checked, json } => {
            cmd_commute(n, m, &t, &wedge, checked, json)
        }
        Command::Level { n, m, ring, gens, rules, trace } => {
            cmd_level(n, m, &ring, &gens, rules.as_deref(), trace)
        }
        Command::Reduce { q, ideal, matrix, n, m, recognize } => {
            cmd_reduce(q, ideal, &matrix, n, m, recognize)
        }
        Command::Diagram { n, m, root, format, classify, out } => {
            cmd_diagram(n, m, root, &format, classify.as_deref(), out)
        }
    }
}

fn cmd_verify(filter: Option<&str>, json: bool, jobs: usize) -> Result<ExitCode, Error> {
    let report = if jobs <= 1 {
        suite::run_all(filter)
    } else {
        // Parallel run; reports are re-sorted into registry order so output
        // does not depend on scheduling.
        let ids: Vec<&'static str> = suite::check_ids()
            .into_iter()
            .filter(|id| filter.map_or(true, |f| id.starts_with(f)))
            .collect();
        let results = Mutex::new(Vec::with_capacity(ids.len()));
        std::thread::scope(|s| {
            for chunk in ids.chunks(ids.len().div_ceil(jobs).max(1)) {
                let results = &results;
                s.spawn(move || {
                    for id in chunk {
                        let r = suite::run_check(id).expect("registered id");
                        results.lock().unwrap().push(r);
                    }
                });
            }
        });
        let mut checks = results.into_inner().unwrap();
        checks.sort_by_key(|r| ids.iter().position(|id| *id == r.id).unwrap());
        let passed = checks.iter().filter(|c| c.pass).count();
        let total = checks.len();
        suite::SuiteReport { checks, passed, total }
    };
    if json {
        println!("{}", serde_json::to_string_pretty(&report).expect("serializable"));
    } else {
        for c in &report.checks {
            let status = if c.pass { "PASS" } else { "FAIL" };
            println!("{status} {:<10} {:>5} ms  {}", c.id, c.ms, c.anchor);
            if let Some(diff) = &c.diff {
                println!("     {diff}");
            }
        }
        println!("{}/{} checks passed", report.passed, report.total);
    }
    Ok(if report.all_pass() { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

/// Split "a,b,rest" into the two leading fields and the remainder.
fn split3(s: &str) -> Result<(&str, &str, &str), Error> {
    let mut it = s.splitn(3, ',');
    match (it.next(), it.next(), it.next()) {
        (Some(a), Some(b), Some(c)) => Ok((a.trim(), b.trim(), c.trim())),
        _ => Err(Error::Parse(format!("expected three comma-separated fields in {s}"))),
    }
}

/// An argument token: an integer constant or a variable name.
enum ArgToken {
    Const(i64),
    Var(String),
}

fn arg_token(s: &str) -> ArgToken {
    match s.parse::<i64>() {
        Ok(v) => ArgToken::Const(v),
        Err(_) => ArgToken::Var(s.to_string()),
    }
}

fn cmd_wedge(
    n: u32,
    m: u32,
    matrix: Option<PathBuf>,
    transvection: Option<String>,
    ring: Option<String>,
    json: bool,
) -> Result<ExitCode, Error> {
    let spec = WedgeSpec::new(n, m)?;
    if let Some(path) = matrix {
        let ring = ring_from_text(ring.as_deref().unwrap_or("int"))?;
        let text = std::fs::read_to_string(&path)
            .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        let v: Value = serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))?;
        let g = matrix_from_json(&ring, &v)?;
        if g.dim() != n as usize {
            return Err(Error::ShapeMismatch);
        }
        let img = wedge_matrix(&spec, &g)?;
        println!("{}", serde_json::to_string_pretty(&matrix_to_json(&img)).expect("serializable"));
        return Ok(ExitCode::SUCCESS);
    }
    let tspec = transvection
        .ok_or_else(|| Error::Parse("wedge needs --matrix or --transvection".into()))?;
    let (i, j, arg) = split3(&tspec)?;
    let i: u32 = i.parse().map_err(|_| Error::Parse(format!("bad row index: {i}")))?;
    let j: u32 = j.parse().map_err(|_| Error::Parse(format!("bad column index: {j}")))?;
    let (_ring, xi) = match (ring.as_deref(), arg_token(arg)) {
        (Some(r), ArgToken::Const(v)) => {
            let r = ring_from_text(r)?;
            let x = RingElement::from_i64(&r, v);
            (r, x)
        }
        (None, ArgToken::Const(v)) => {
            let r = Ring::integers();
            let x = RingElement::from_i64(&r, v);
            (r, x)
        }
        (_, ArgToken::Var(name)) => {
            let r = Ring::poly(&[name.as_str()])?;
            let x = r.var(0);
            (r, x)
        }
    };
    let factors = wedge_transvection_formula(&spec, i, j, &xi)?;
    if json {
        let fs: Vec<Value> = factors
            .iter()
            .map(|f| {
                json!({"row": f.row.elems(), "col": f.col.elems(), "arg": elem_to_json(&f.arg)})
            })
            .collect();
        println!(
            "{}",
            serde_json::to_string_pretty(&json!({"count": fs.len(), "factors": fs}))
                .expect("serializable")
        );
    } else {
        for f in &factors {
            println!("t_{{{},{}}}({})", f.row.label(), f.col.label(), f.arg);
        }
        println!("{} factors", factors.len());
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_commute(
    n: u32,
    m: u32,
    t: &str,
    wedge: &str,
    checked: bool,
    json: bool,
) -> Result<ExitCode, Error> {
    let spec = WedgeSpec::new(n, m)?;
    let (is, js, targ) = split3(t)?;
    let (jw, iw, warg) = split3(wedge)?;
    let row = parse_index(n, is)?;
    let col = parse_index(n, js)?;
    let jw: u32 = jw.parse().map_err(|_| Error::Parse(format!("bad root index: {jw}")))?;
    let iw: u32 = iw.parse().map_err(|_| Error::Parse(format!("bad root index: {iw}")))?;

    // Variables in the order they appear; integer tokens become constants.
    let (t_tok, w_tok) = (arg_token(targ), arg_token(warg));
    let mut vars: Vec<&str> = Vec::new();
    for tok in [&t_tok, &w_tok] {
        if let ArgToken::Var(v) = tok {
            if !vars.contains(&v.as_str()) {
                vars.push(v);
            }
        }
    }
    let ring = if vars.is_empty() { Ring::integers() } else { Ring::poly(&vars)? };
    let resolve = |tok: &ArgToken| match tok {
        ArgToken::Const(v) => RingElement::from_i64(&ring, *v),
        ArgToken::Var(name) => ring.var(vars.iter().position(|v| v == name).unwrap()),
    };
    let (xi, zeta) = (resolve(&t_tok), resolve(&w_tok));

    let pair = WeightPair::new(row, col)?;
    let class = classify_commutator(&pair, jw, iw)?;
    let class_name = match &class {
        CommutatorClass::Vanishes => "vanishes",
        CommutatorClass::SingleShift { .. } => "single-shift",
        CommutatorClass::TripleProduct { .. } => "triple-product",
        CommutatorClass::Degenerate => "degenerate",
    };
    let term = TransvectionTerm::new(pair, xi)?;
    // The closed form self-verifies against the direct matrix commutator; the
    // degenerate case has no closed form.
    let factors: Option<Vec<(WeightPair, RingElement)>> = if matches!(class, CommutatorClass::Degenerate) {
        None
    } else {
        let product = commutator_eval(&term, jw, iw, &zeta, &spec)?;
        Some(
            product
                .factors
                .iter()
                .map(|f| match f {
                    extpow::transvect::Factor::Term(t) => (t.pair.clone(), t.arg.clone()),
                    _ => unreachable!("commutator templates expand to plain terms"),
                })
                .collect(),
        )
    };
    if json {
        let fs = factors.as_ref().map(|fs| {
            fs.iter()
                .map(|(p, a)| {
                    json!({
                        "row": p.row.elems(),
                        "col": p.col.elems(),
                        "arg": elem_to_json(a),
                    })
                })
                .collect::<Vec<_>>()
        });
        let mut doc = json!({"class": class_name});
        if let Some(fs) = fs {
            doc["factors"] = json!(fs);
        }
        if checked {
            doc["oracle"] = json!("match");
        }
        println!("{}", serde_json::to_string_pretty(&doc).expect("serializable"));
    } else {
        println!("class: {class_name}");
        match &factors {
            Some(fs) if fs.is_empty() => println!("commutator is the identity"),
            Some(fs) => {
                for (p, a) in fs {
                    println!("t_{{{},{}}}({})", p.row.label(), p.col.label(), a);
                }
            }
            None => println!("no closed form; use the direct matrix commutator"),
        }
        if checked {
            println!("oracle: closed form matches the direct matrix commutator");
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn ideal_residues(ideal: &FiniteIdeal) -> Vec<u64> {
    let mut e = ideal.elements();
    e.sort_unstable();
    e
}

fn cmd_level(
    n: u32,
    m: u32,
    ring: &str,
    gens: &[String],
    rules: Option<&str>,
    trace_out: Option<PathBuf>,
) -> Result<ExitCode, Error> {
    let spec = WedgeSpec::new(n, m)?;
    let ring = ring_from_text(ring)?;
    let mut parsed = Vec::with_capacity(gens.len());
    for g in gens {
        let (pair_part, res_part) = g
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("generator must look like I,J:r, got {g}")))?;
        let (is, js) = pair_part
            .split_once(',')
            .ok_or_else(|| Error::Parse(format!("generator pair must look like I,J, got {g}")))?;
        let pair = WeightPair::new(parse_index(n, is)?, parse_index(n, js)?)?;
        let r: i64 = res_part
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad generator residue: {res_part}")))?;
        parsed.push((pair, RingElement::from_i64(&ring, r)));
    }
    let rules = match rules {
        None => RuleSet::full(),
        Some(list) => RuleSet::of(
            &list
                .split(',')
                .map(|s| Rule::from_name(s.trim()))
                .collect::<Result<Vec<_>, _>>()?,
        ),
    };
    let net = net_init(&spec, &ring, &parsed)?;
    let sat = saturate(&net, &rules);
    let verdict = level_of(&sat.net, &rules)?;
    let mut doc = match &verdict {
        LevelVerdict::SingleLevel { ideal, audit } => json!({
            "mode": "single-level",
            "ideal": ideal_residues(ideal),
            "audit": audit,
        }),
        LevelVerdict::GradedChain { chain, audit } => json!({
            "mode": "graded-chain",
            "chain": chain.iter().map(ideal_residues).collect::<Vec<_>>(),
            "audit": audit,
        }),
        LevelVerdict::Inconsistent { reason } => json!({
            "mode": "inconsistent",
            "reason": reason,
        }),
    };
    let trace: Vec<Value> = sat.trace.iter().map(|t| t.describe()).collect();
    if let Some(path) = trace_out {
        let mut f = std::fs::File::create(&path)
            .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        writeln!(f, "{}", serde_json::to_string_pretty(&trace).expect("serializable"))
            .map_err(|e| Error::Parse(e.to_string()))?;
        doc["trace_len"] = json!(trace.len());
    } else {
        doc["trace"] = json!(trace);
    }
    println!("{}", serde_json::to_string_pretty(&doc).expect("serializable"));
    Ok(if matches!(verdict, LevelVerdict::Inconsistent { .. }) {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    })
}

fn cmd_reduce(
    q: u64,
    ideal: u64,
    matrix: &PathBuf,
    n: Option<u32>,
    m: Option<u32>,
    recognize: bool,
) -> Result<ExitCode, Error> {
    let ring = Ring::modular(q)?;
    let ideal = FiniteIdeal::principal(&ring, ideal as i64)?;
    let text = std::fs::read_to_string(matrix)
        .map_err(|e| Error::Parse(format!("{}: {e}", matrix.display())))?;
    let v: Value = serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))?;
    let h = matrix_from_json(&ring, &v)?;
    let red = reduce_matrix(&h, &ideal)?;
    if !recognize {
        let flags = congruence_predicates(&h, &ideal)?;
        let doc = json!({
            "tag": "reduced",
            "matrix": matrix_to_json(&red),
            "principal_congruence": flags.principal,
            "full_congruence": flags.full,
        });
        println!("{}", serde_json::to_string_pretty(&doc).expect("serializable"));
        return Ok(ExitCode::SUCCESS);
    }
    let (n, m) = match (n, m) {
        (Some(n), Some(m)) => (n, m),
        _ => return Err(Error::Parse("--recognize needs --n and --m".into())),
    };
    let spec = WedgeSpec::new(n, m)?;
    let (doc, code) = match in_wedge_image(&red, &spec)? {
        MembershipVerdict::InSetImage { witness } => (
            json!({"tag": "in-set-image", "witness": matrix_to_json(&witness)}),
            ExitCode::SUCCESS,
        ),
        MembershipVerdict::ScalarTwist { lambda, witness } => (
            json!({
                "tag": "scalar-twist",
                "lambda": elem_to_json(&lambda),
                "witness": matrix_to_json(&witness),
            }),
            ExitCode::SUCCESS,
        ),
        MembershipVerdict::NotFound { notes } => {
            (json!({"tag": "not-found", "notes": notes}), ExitCode::from(1))
        }
    };
    println!("{}", serde_json::to_string_pretty(&doc).expect("serializable"));
    Ok(code)
}

fn cmd_diagram(
    n: u32,
    m: u32,
    root: Option<u32>,
    format: &str,
    classify: Option<&str>,
    out: Option<PathBuf>,
) -> Result<ExitCode, Error> {
    let classify = match classify {
        None => None,
        Some(s) => {
            let (is, js) = s
                .split_once(',')
                .ok_or_else(|| Error::Parse(format!("classify pair must look like I,J, got {s}")))?;
            Some(WeightPair::new(parse_index(n, is)?, parse_index(n, js)?)?)
        }
    };
    let spec = DiagramSpec {
        n,
        m,
        highlight_root: root.map(|k| (k, k + 1)),
        format: DiagramFormat::from_name(format)?,
        classify,
    };
    let doc = emit_diagram(&spec)?;
    match out {
        Some(path) => std::fs::write(&path, doc)
            .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?,
        None => print!("{doc}"),
    }
    Ok(ExitCode::SUCCESS)
}
