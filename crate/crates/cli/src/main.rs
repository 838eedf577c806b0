use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gradedring::decide::{self, Certificate, Decider};
use gradedring::dsl::{self, RingFile, Stmt};
use gradedring::gallery::{self, GalleryId};
use gradedring::oracle::{FiniteRingTable, DEFAULT_ENUMERATION_CAP};
use gradedring::spectra::{self, ProjOutcome};
use gradedring::{Error, Result, Ring};
use num_bigint::BigInt;
use serde_json::{json, Value};

const DEFAULT_PROJ_CAP: u32 = 10;

#[derive(Parser)]
#[command(name = "gradedring", version, about = "Decision procedures for commutative graded rings")]
struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,

    /// Search bound: nilpotency exponent for `decide`, element count for
    /// `oracle` and `spectra --pi0`, power bound for `spectra proj`.
    #[arg(long, global = true, value_name = "N")]
    cap: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a ring file, build every ring and print the canonical text.
    Parse { file: PathBuf },
    /// Reduce an expression to normal form.
    Eval {
        file: PathBuf,
        expr: String,
        #[command(flatten)]
        select: RingSelect,
    },
    /// Decide a property of an element and print its certificate.
    Decide {
        property: Property,
        file: PathBuf,
        expr: String,
        /// Known annihilator to homogenize (zerodivisor only).
        #[arg(long)]
        seed: Option<String>,
        #[command(flatten)]
        select: RingSelect,
    },
    /// Enumerate a finite ring and summarize it.
    Oracle {
        file: PathBuf,
        /// Print the full summary (the default).
        #[arg(long)]
        report: bool,
        #[command(flatten)]
        select: RingSelect,
    },
    /// Spectra: `<file> --pi0`, `laurent --n N` or `proj <file> --gens "x,y"`.
    Spectra {
        /// A ring file, or `laurent` or `proj`.
        target: String,
        /// The ring file for `proj`.
        file: Option<PathBuf>,
        #[arg(long)]
        pi0: bool,
        #[arg(long, value_name = "N")]
        n: Option<BigInt>,
        /// Comma separated homogeneous generators for `proj`.
        #[arg(long)]
        gens: Option<String>,
        #[command(flatten)]
        select: RingSelect,
    },
    /// Run a gallery item, e.g. `deligne` or `torsion_nilradical(3)`, or `all`.
    Gallery { id: String },
}

#[derive(Args)]
struct RingSelect {
    /// Ring block to use when the file has several (default: the first).
    #[arg(long)]
    ring: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Property {
    Unit,
    Nilpotent,
    Zerodivisor,
    Idempotent,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(out) => {
            // A closed pipe (e.g. `| head`) is not an error worth reporting.
            let _ = writeln!(std::io::stdout(), "{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            if cli.json {
                let v = json!({"schema": 1, "error": e.to_string(), "exit_code": e.exit_code()});
                let _ = writeln!(std::io::stdout(), "{}", pretty(&v));
            }
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("JSON values always serialize")
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports always serialize")
}

fn read_file(path: &Path) -> Result<RingFile> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Precondition(format!("cannot read {}: {e}", path.display())))?;
    dsl::parse_ring_file(&text)
}

fn load_ring(path: &Path, select: &RingSelect) -> Result<Ring> {
    let file = read_file(path)?;
    let block = match &select.ring {
        None => &file.rings[0],
        Some(name) => file
            .rings
            .iter()
            .find(|b| &b.node.name == name)
            .ok_or_else(|| Error::Precondition(format!("no ring named {name}")))?,
    };
    dsl::build_ring(block)
}

fn cap_u32(cap: Option<u64>, default: u32) -> Result<u32> {
    match cap {
        None => Ok(default),
        Some(c) => u32::try_from(c).map_err(|_| Error::Precondition(format!("cap {c} too large"))),
    }
}

fn enumerate(ring: &Ring, cap: Option<u64>) -> Result<FiniteRingTable> {
    let cap = cap.unwrap_or(DEFAULT_ENUMERATION_CAP);
    FiniteRingTable::enumerate(ring, cap)
}

fn run(cli: &Cli) -> Result<String> {
    let (text, value) = match &cli.command {
        Command::Parse { file } => parse(file)?,
        Command::Eval { file, expr, select } => {
            let ring = load_ring(file, select)?;
            let f = dsl::element(&ring, expr)?;
            let comps: Vec<Value> = f
                .homogeneous_components()
                .iter()
                .map(|(g, e)| json!({"grade": g, "component": e}))
                .collect();
            let v = json!({
                "schema": 1,
                "ring": ring.name(),
                "input": expr,
                "normal_form": f,
                "components": comps,
            });
            (f.pretty(), v)
        }
        Command::Decide {
            property,
            file,
            expr,
            seed,
            select,
        } => decide_cmd(cli, *property, file, expr, seed.as_deref(), select)?,
        Command::Oracle { file, select, .. } => {
            let ring = load_ring(file, select)?;
            let t = enumerate(&ring, cli.cap)?;
            let r = t.report();
            let mut text = format!(
                "{}: {} elements, {} units, {} nilpotents, {} idempotents, {} zero-divisors, {} primes",
                r.ring,
                r.cardinality,
                r.units,
                r.nilpotents,
                r.idempotents,
                r.zero_divisors,
                r.primes.len()
            );
            for (name, g) in [("nilradical", &r.nilradical), ("jacobson", &r.jacobson)] {
                text.push_str(&format!("\n{name} graded: {}", g.graded));
                if let (Some(w), Some(c)) = (&g.witness, &g.component) {
                    text.push_str(&format!(" (witness {w}, component {c})"));
                }
            }
            (text, to_value(&r))
        }
        Command::Spectra {
            target,
            file,
            pi0,
            n,
            gens,
            select,
        } => spectra_cmd(cli, target, file.as_deref(), *pi0, n.as_ref(), gens.as_deref(), select)?,
        Command::Gallery { id } => gallery_cmd(id)?,
    };
    Ok(if cli.json { pretty(&value) } else { text })
}

fn parse(path: &Path) -> Result<(String, Value)> {
    let file = read_file(path)?;
    let rings = dsl::build_rings(&file)?;
    let summaries: Vec<Value> = file
        .rings
        .iter()
        .zip(&rings)
        .map(|(block, ring)| {
            let gens: Vec<Value> = ring
                .generators()
                .iter()
                .map(|g| json!({"name": g.name, "grade": g.grade, "invertible": g.invertible}))
                .collect();
            let rels: Vec<String> = block
                .node
                .stmts
                .iter()
                .filter_map(|s| match &s.node {
                    Stmt::Rel(e) => Some(dsl::print_expr(e)),
                    _ => None,
                })
                .collect();
            json!({
                "name": ring.name(),
                "base": ring.base().to_string(),
                "grading": ring.grading().to_string(),
                "generators": gens,
                "relations": rels,
                "engine": ring.engine_kind(),
            })
        })
        .collect();
    let text = file.to_string();
    let v = json!({"schema": 1, "rings": summaries, "canonical": text});
    Ok((text.trim_end().to_string(), v))
}

fn decide_cmd(
    cli: &Cli,
    property: Property,
    path: &Path,
    expr: &str,
    seed: Option<&str>,
    select: &RingSelect,
) -> Result<(String, Value)> {
    let ring = load_ring(path, select)?;
    let f = dsl::element(&ring, expr)?;
    let cap = cap_u32(cli.cap, decide::DEFAULT_NILPOTENCY_CAP)?;
    // Finite rings get the oracle so that zero-divisor and unit questions
    // outside the symbolic families stay decidable.
    let table = match ring.finite_basis() {
        Ok(_) => match FiniteRingTable::enumerate(&ring, DEFAULT_ENUMERATION_CAP) {
            Ok(t) => Some(t),
            Err(Error::CapExceeded(_)) => None,
            Err(e) => return Err(e),
        },
        Err(_) => None,
    };
    let mut decider = Decider::new(cap);
    if let Some(t) = &table {
        decider = decider.with_oracle(t);
    }
    let cert: Certificate = match property {
        Property::Unit => decider.is_unit(&f)?,
        Property::Nilpotent => decider.is_nilpotent(&f)?,
        Property::Zerodivisor => {
            let seed = seed.map(|s| dsl::element(&ring, s)).transpose()?;
            decider.is_zero_divisor(&f, seed.as_ref())?
        }
        Property::Idempotent => Certificate::Idempotent(decide::check_idempotent_homogeneity(&f)?),
    };
    let verified = decide::verify(&f, &cert)?;
    if !verified {
        return Err(Error::TheoremViolation(format!(
            "certificate for {f} failed re-verification"
        )));
    }
    let v = json!({
        "schema": 1,
        "ring": ring.name(),
        "element": f,
        "verdict": cert.verdict(),
        "certificate": to_value(&cert),
        "verified": verified,
    });
    let detail = serde_json::to_string(&v["certificate"]).expect("serializable");
    Ok((format!("{}: {}\n{detail}", f.pretty(), cert.verdict()), v))
}

fn spectra_cmd(
    cli: &Cli,
    target: &str,
    file: Option<&Path>,
    pi0: bool,
    n: Option<&BigInt>,
    gens: Option<&str>,
    select: &RingSelect,
) -> Result<(String, Value)> {
    match target {
        "laurent" => {
            let n = n.ok_or_else(|| Error::Precondition("spectra laurent needs --n".into()))?;
            let r = spectra::laurent_spec_star(n)?;
            let text = r
                .primes
                .iter()
                .zip(&r.graded_primes)
                .map(|(p, q)| format!("{p} <-> {q}"))
                .collect::<Vec<_>>()
                .join("\n");
            Ok((text, to_value(&r)))
        }
        "proj" => {
            let file = file.ok_or_else(|| Error::Precondition("spectra proj needs a ring file".into()))?;
            let gens = gens.ok_or_else(|| Error::Precondition("spectra proj needs --gens".into()))?;
            let ring = load_ring(file, select)?;
            let elems = gens
                .split(',')
                .map(|g| dsl::element(&ring, g.trim()))
                .collect::<Result<Vec<_>>>()?;
            let cap = cap_u32(cli.cap, DEFAULT_PROJ_CAP)?;
            let out = spectra::proj_quasicompact(&ring, &elems, cap)?;
            let text = match &out {
                ProjOutcome::QuasiCompact { witnesses } => {
                    let mut lines = vec!["quasi-compact".to_string()];
                    for w in witnesses {
                        let sum = w
                            .multipliers
                            .iter()
                            .zip(&elems)
                            .filter(|(m, _)| !m.is_zero())
                            .map(|(m, g)| format!("({})*({})", m.pretty(), g.pretty()))
                            .collect::<Vec<_>>()
                            .join(" + ");
                        lines.push(format!("{}^{} = {sum}", w.generator, w.exponent));
                    }
                    lines.join("\n")
                }
                ProjOutcome::Unknown {
                    generator,
                    cap,
                    obstruction,
                } => {
                    let mut s = format!("unknown: no power of {generator} up to {cap} lies in the ideal");
                    if let Some(o) = obstruction {
                        s.push_str(&format!("\n{o}"));
                    }
                    s
                }
            };
            let mut v = to_value(&out);
            v["schema"] = json!(1);
            v["ring"] = json!(ring.name());
            Ok((text, v))
        }
        path => {
            if !pi0 {
                return Err(Error::Precondition(
                    "spectra on a ring file needs --pi0".into(),
                ));
            }
            let ring = load_ring(Path::new(path), select)?;
            let t = enumerate(&ring, cli.cap)?;
            let r = spectra::pi0_equivalences(&t)?;
            let text = format!(
                "{}: components Spec {} / Spec R0 {} / Spec* {}; bijections verified: {}",
                r.ring, r.counts[0], r.counts[1], r.counts[2], r.bijections_verified
            );
            Ok((text, to_value(&r)))
        }
    }
}

fn gallery_cmd(id: &str) -> Result<(String, Value)> {
    let ids = if id == "all" {
        GalleryId::all()
    } else {
        vec![id.parse::<GalleryId>()?]
    };
    let mut reports = Vec::new();
    let mut text = Vec::new();
    for id in ids {
        let r = gallery::gallery(id)?;
        text.push(format!("== {} ==", r.id));
        text.extend(r.transcript.iter().cloned());
        text.push(format!("{}: {}", r.id, if r.passed { "pass" } else { "FAIL" }));
        reports.push(r);
    }
    let v = if reports.len() == 1 {
        to_value(&reports[0])
    } else {
        json!({"schema": 1, "items": reports})
    };
    Ok((text.join("\n"), v))
}
