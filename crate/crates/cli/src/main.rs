mod report;

use std::io::Write;
use std::path::Path;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use ramiforge::arith::{format_rat, parse_rat, primes_up_to, Rat};
use ramiforge::cover::file::{cover_to_json, parse_cover};
use ramiforge::cover::{classify_prime, datasets, CoverData, PrimeStatus};
use ramiforge::oracle::{verify_recipe, MatchStatus, Observed};
use ramiforge::parametricity::{
    check_branch_point_hypothesis, check_four_branch_corollary, check_h2, check_inertia_hypothesis,
    divisor_orbits, inertia_witness_recipe,
};
use ramiforge::places::PointP1;
use ramiforge::prescriber::{
    build_recipe, certify_group, predict_inertia, Certification, FrobeniusEntry, Prediction,
    PrescriptionRequest, RamifiedEntry, Recipe,
};

use report::{InputDigest, Report, Table, SCHEMA};

#[derive(Parser)]
#[command(name = "ramiforge", version, about = "Specializations of Galois covers of P^1 over Q with prescribed ramification")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Tsv,
}

#[derive(Subcommand)]
enum Command {
    /// Good/bad classification of the primes up to a bound
    ClassifyPrimes {
        cover: String,
        #[arg(long, default_value_t = 100)]
        up_to: u64,
    },
    /// Prime divisors of m_t * m_(1/t) up to a bound
    Divisors {
        cover: String,
        #[arg(long, default_value_t = 100)]
        up_to: u64,
    },
    /// Arithmetic progression of points with prescribed inertia and Frobenius
    Prescribe(PrescribeArgs),
    /// Predicted inertia at a prime for one specialization point
    Predict {
        cover: String,
        #[arg(long)]
        prime: u64,
        /// Rational "n/d" or "inf"
        #[arg(long, allow_hyphen_values = true)]
        point: String,
    },
    /// Checks a recipe against the ramification oracles
    Verify {
        cover: String,
        #[arg(long)]
        recipe: String,
        #[arg(long, default_value_t = 25)]
        samples: usize,
    },
    /// Branch point and inertia hypotheses for a pair of covers of one group
    Parametricity {
        cover1: String,
        cover2: String,
        #[arg(long, default_value_t = 500)]
        window: u64,
    },
    /// Frobenius sampling certificate that a specialization has the full group
    GroupCertify {
        cover: String,
        #[arg(long, allow_hyphen_values = true)]
        point: String,
        #[arg(long, default_value_t = 200)]
        budget: u64,
    },
}

#[derive(Args)]
struct PrescribeArgs {
    cover: String,
    /// p:orbit:a
    #[arg(long)]
    ramified: Vec<String>,
    /// p:class, e.g. 11:[3^1]
    #[arg(long)]
    frobenius: Vec<String>,
    #[arg(long, env = "RAMIFORGE_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 10_000)]
    search_bound: u64,
}

enum Failure {
    Input(String),
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Input(e.to_string())
    }
}

struct Outcome {
    report: Report,
    table: Table,
    mismatch: bool,
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = Cli::parse();
    let name = command_name(&cli.command);
    match run(&cli.command, name, argv[1..].to_vec()) {
        Ok(out) => {
            let text = match cli.format {
                Format::Json => {
                    serde_json::to_string_pretty(&out.report).expect("serializable report") + "\n"
                }
                Format::Tsv => out.table.render(&out.report.caveats),
            };
            // a closed pipe downstream is not an error
            let _ = std::io::stdout().write_all(text.as_bytes());
            if out.mismatch {
                ExitCode::from(3)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(Failure::Input(msg)) => {
            let diag = json!({
                "schema": SCHEMA,
                "command": name,
                "error": { "kind": "input", "message": msg },
            });
            eprintln!("{}", serde_json::to_string_pretty(&diag).expect("json"));
            ExitCode::from(2)
        }
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::ClassifyPrimes { .. } => "classify-primes",
        Command::Divisors { .. } => "divisors",
        Command::Prescribe(_) => "prescribe",
        Command::Predict { .. } => "predict",
        Command::Verify { .. } => "verify",
        Command::Parametricity { .. } => "parametricity",
        Command::GroupCertify { .. } => "group-certify",
    }
}

/// A cover file path, or the name of a bundled dataset.
fn load(arg: &str, role: &str) -> Result<(CoverData, InputDigest), Failure> {
    let path = Path::new(arg);
    if path.exists() {
        let bytes = std::fs::read(path)?;
        let text = String::from_utf8(bytes.clone())?;
        let cover = parse_cover(&text).map_err(|e| format!("{arg}: {e}"))?;
        return Ok((cover, InputDigest::new(role, arg, &bytes)));
    }
    let cover = datasets::all()
        .into_iter()
        .find(|c| c.name == arg)
        .ok_or_else(|| format!("{arg}: no such cover file or bundled dataset"))?;
    let digest = InputDigest::new(role, &format!("dataset:{arg}"), cover_to_json(&cover).as_bytes());
    Ok((cover, digest))
}

fn parse_point(s: &str) -> Result<PointP1, Failure> {
    if s.trim().eq_ignore_ascii_case("inf") {
        Ok(PointP1::Infinity)
    } else {
        Ok(PointP1::Finite(parse_rat(s)?))
    }
}

fn parse_ramified(s: &str) -> Result<RamifiedEntry, Failure> {
    let parts: Vec<&str> = s.split(':').collect();
    let [p, orbit, a] = parts[..] else {
        return Err(Failure::Input(format!("--ramified {s}: expected p:orbit:a")));
    };
    let bad = |_| Failure::Input(format!("--ramified {s}: expected p:orbit:a"));
    Ok(RamifiedEntry {
        p: p.trim().parse().map_err(bad)?,
        orbit: orbit.trim().parse().map_err(bad)?,
        a: a.trim().parse().map_err(bad)?,
    })
}

fn parse_frobenius(s: &str) -> Result<FrobeniusEntry, Failure> {
    let (p, class) = s
        .split_once(':')
        .ok_or_else(|| Failure::Input(format!("--frobenius {s}: expected p:class")))?;
    Ok(FrobeniusEntry {
        p: p.trim()
            .parse()
            .map_err(|_| Failure::Input(format!("--frobenius {s}: bad prime")))?,
        class: class.trim().to_string(),
    })
}

fn report(command: &str, argv: Vec<String>, inputs: Vec<InputDigest>, result: Value) -> Report {
    Report {
        schema: SCHEMA,
        command: command.into(),
        argv,
        inputs,
        result,
        caveats: vec![],
    }
}

fn run(cmd: &Command, name: &str, argv: Vec<String>) -> Result<Outcome, Failure> {
    match cmd {
        Command::ClassifyPrimes { cover, up_to } => {
            let (c, d) = load(cover, "cover")?;
            let rows: Vec<(u64, PrimeStatus)> =
                primes_up_to(*up_to).into_iter().map(|p| (p, classify_prime(&c, p))).collect();
            let bad: Vec<u64> = rows.iter().filter(|(_, s)| !s.is_good()).map(|r| r.0).collect();
            let result = json!({
                "cover": c.name,
                "up_to": up_to,
                "bad": bad,
                "primes": rows.iter().map(|(p, s)| json!({"p": p, "classification": s})).collect::<Vec<_>>(),
            });
            let table = Table {
                columns: &["p", "status", "reasons"],
                rows: rows
                    .iter()
                    .map(|(p, s)| match s {
                        PrimeStatus::Good => vec![p.to_string(), "good".into(), String::new()],
                        PrimeStatus::Bad(r) => vec![
                            p.to_string(),
                            "bad".into(),
                            r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; "),
                        ],
                    })
                    .collect(),
            };
            let mut rep = report(name, argv, vec![d], result);
            rep.add_caveats(c.caveats());
            Ok(Outcome { report: rep, table, mismatch: false })
        }
        Command::Divisors { cover, up_to } => {
            let (c, d) = load(cover, "cover")?;
            let mut divisors = Vec::new();
            let mut flagged = Vec::new();
            let mut rows = Vec::new();
            for p in primes_up_to(*up_to) {
                match divisor_orbits(&c, p) {
                    None => flagged.push(p),
                    Some(o) if !o.is_empty() => {
                        rows.push(vec![
                            p.to_string(),
                            o.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(","),
                        ]);
                        divisors.push(json!({"p": p, "orbits": o}));
                    }
                    Some(_) => {}
                }
            }
            let primes: Vec<u64> = divisors.iter().map(|v| v["p"].as_u64().unwrap_or(0)).collect();
            let result = json!({
                "cover": c.name,
                "up_to": up_to,
                "primes": primes,
                "divisors": divisors,
                "flagged": flagged,
            });
            let mut rep = report(name, argv, vec![d], result);
            rep.add_caveats(c.caveats());
            if !flagged.is_empty() {
                rep.caveats.push(format!(
                    "primes where no branch orbit minimal polynomial is integral were skipped: {flagged:?}"
                ));
            }
            Ok(Outcome {
                report: rep,
                table: Table { columns: &["p", "orbits"], rows },
                mismatch: false,
            })
        }
        Command::Prescribe(args) => {
            let (c, d) = load(&args.cover, "cover")?;
            let req = PrescriptionRequest {
                ramified: args.ramified.iter().map(|s| parse_ramified(s)).collect::<Result<_, _>>()?,
                frobenius: args.frobenius.iter().map(|s| parse_frobenius(s)).collect::<Result<_, _>>()?,
            };
            let recipe = build_recipe(&c, &req, args.search_bound, args.seed)?;
            let mut rows = vec![
                vec!["theta".into(), format_rat(&recipe.theta)],
                vec!["modulus".into(), recipe.modulus.to_string()],
            ];
            for l in &recipe.locals {
                rows.push(vec![
                    format!("local:{}", l.p),
                    format!("{:?} target={} precision={}", l.kind, format_rat(&l.target), l.precision),
                ]);
            }
            for p in &recipe.predictions {
                rows.push(vec![
                    format!("predict:{}", p.p),
                    format!("{:?} e={} class={}", p.verdict, p.e, p.class_label),
                ]);
            }
            let mut rep = report(name, argv, vec![d], serde_json::to_value(&recipe)?);
            rep.add_caveats(c.caveats());
            rep.add_caveats(&recipe.notes);
            Ok(Outcome {
                report: rep,
                table: Table { columns: &["field", "value"], rows },
                mismatch: false,
            })
        }
        Command::Predict { cover, prime, point } => {
            let (c, d) = load(cover, "cover")?;
            let pt = parse_point(point)?;
            let pred = predict_inertia(&c, *prime, &pt)?;
            let row = match &pred {
                Prediction::Inertia(i) | Prediction::NoMeeting(i) => vec![
                    prime.to_string(),
                    pt.to_string(),
                    format!("{:?}", i.verdict),
                    i.e.to_string(),
                    i.class_label.clone(),
                    i.orbit.map(|o| o.to_string()).unwrap_or_default(),
                ],
                Prediction::Undecidable { reason } => vec![
                    prime.to_string(),
                    pt.to_string(),
                    "Undecidable".into(),
                    String::new(),
                    reason.clone(),
                    String::new(),
                ],
            };
            let result = json!({"cover": c.name, "p": prime, "point": pt.to_string(), "prediction": pred});
            let mut rep = report(name, argv, vec![d], result);
            rep.add_caveats(c.caveats());
            Ok(Outcome {
                report: rep,
                table: Table {
                    columns: &["p", "point", "verdict", "e", "class", "orbit"],
                    rows: vec![row],
                },
                mismatch: false,
            })
        }
        Command::Verify { cover, recipe, samples } => {
            let (c, d) = load(cover, "cover")?;
            let bytes = std::fs::read(recipe).map_err(|e| format!("{recipe}: {e}"))?;
            let parsed: Value = serde_json::from_slice(&bytes).map_err(|e| format!("{recipe}: {e}"))?;
            // accept a bare recipe or a prescribe report
            let body = match parsed.get("schema") {
                Some(_) => parsed["result"].clone(),
                None => parsed,
            };
            let r: Recipe = serde_json::from_value(body).map_err(|e| format!("{recipe}: {e}"))?;
            let table = verify_recipe(&c, &r, *samples)?;
            let rows = table
                .rows
                .iter()
                .map(|row| {
                    let (ov, oe, oc) = match &row.observed {
                        Observed::Exact { verdict, e, cycle_type, .. } => {
                            (format!("{verdict:?}"), e.to_string(), cycle_type.clone())
                        }
                        Observed::Inconclusive { reason } => {
                            ("Inconclusive".into(), String::new(), reason.clone())
                        }
                    };
                    vec![
                        row.u.clone(),
                        row.t0.clone(),
                        row.p.to_string(),
                        format!("{:?}", row.predicted.verdict),
                        row.predicted.e.to_string(),
                        ov,
                        oe,
                        oc,
                        format!("{:?}", row.status),
                    ]
                })
                .collect();
            let mismatch = table.mismatched > 0;
            let inconclusive = table.inconclusive;
            let mut rep = report(
                name,
                argv,
                vec![d, InputDigest::new("recipe", recipe, &bytes)],
                serde_json::to_value(&table)?,
            );
            rep.add_caveats(c.caveats());
            rep.add_caveats(&r.notes);
            if inconclusive > 0 {
                rep.caveats.push(format!("{inconclusive} rows inconclusive"));
            }
            debug_assert!(table.rows.iter().all(|r| r.status != MatchStatus::Mismatch) || mismatch);
            Ok(Outcome {
                report: rep,
                table: Table {
                    columns: &["u", "t0", "p", "predicted", "e", "observed", "observed_e", "cycle_type", "status"],
                    rows,
                },
                mismatch,
            })
        }
        Command::Parametricity { cover1, cover2, window } => {
            let (c1, d1) = load(cover1, "cover1")?;
            let (c2, d2) = load(cover2, "cover2")?;
            let ih = check_inertia_hypothesis(&c1, &c2);
            let bph = check_branch_point_hypothesis(&c1, &c2, *window);
            let ih_recipe = match &ih {
                Ok(v) if v.holds => inertia_witness_recipe(&c1, &c2, *window)?,
                _ => None,
            };
            let four = check_four_branch_corollary(&c2);
            let h2 = check_h2(&c2).ok();
            let mut rows = Vec::new();
            for v in std::iter::once(&bph).chain(ih.as_ref().ok()) {
                let witnesses = match &v.witness_congruences {
                    Some(c) => c.to_string(),
                    None if !v.witness_classes.is_empty() => v.witness_classes.join(" "),
                    None => format!("{} primes in window", v.witness_primes.len()),
                };
                rows.push(vec![
                    serde_json::to_value(v.hypothesis)?.as_str().unwrap_or_default().to_string(),
                    v.holds.to_string(),
                    if v.exact { "exact" } else { "empirical" }.to_string(),
                    witnesses,
                    v.consequence.clone(),
                ]);
            }
            rows.push(vec![
                "four_branch_points".into(),
                four.holds.to_string(),
                "exact".into(),
                String::new(),
                four.detail.clone(),
            ]);
            if let Some(h) = &h2 {
                rows.push(vec![
                    "H2".into(),
                    h.holds.to_string(),
                    "exact".into(),
                    h.witness.clone().unwrap_or_default(),
                    h.detail.clone(),
                ]);
            }
            let result = json!({
                "cover1": c1.name,
                "cover2": c2.name,
                "window": window,
                "bph": bph,
                "ih": ih.as_ref().ok(),
                "ih_witness_recipe": ih_recipe,
                "four_branch_points": four,
                "h2": h2,
            });
            let mut rep = report(name, argv, vec![d1, d2], result);
            rep.add_caveats(c1.caveats());
            rep.add_caveats(c2.caveats());
            if let Err(e) = &ih {
                rep.caveats.push(format!("inertia hypothesis not checked: {e}; both hypotheses need covers of the same group"));
            }
            if !bph.exact {
                rep.caveats.push(format!(
                    "branch point hypothesis decided empirically on primes up to {window}"
                ));
                rep.add_caveats(&bph.notes);
            }
            Ok(Outcome {
                report: rep,
                table: Table {
                    columns: &["hypothesis", "holds", "mode", "witnesses", "consequence"],
                    rows,
                },
                mismatch: false,
            })
        }
        Command::GroupCertify { cover, point, budget } => {
            let (c, d) = load(cover, "cover")?;
            let t0: Rat = parse_rat(point)?;
            let cert = certify_group(&c, &t0, *budget)?;
            let (status, detail) = match &cert {
                Certification::Certified { cycle_types, .. } => ("certified", cycle_types.join(" ")),
                Certification::Inconclusive { reason, .. } => ("inconclusive", reason.clone()),
            };
            let result = json!({"cover": c.name, "point": format_rat(&t0), "budget": budget, "certification": cert});
            let mut rep = report(name, argv, vec![d], result);
            rep.add_caveats(c.caveats());
            Ok(Outcome {
                report: rep,
                table: Table {
                    columns: &["point", "status", "detail"],
                    rows: vec![vec![format_rat(&t0), status.into(), detail]],
                },
                mismatch: false,
            })
        }
    }
}
