#![allow(clippy::result_large_err)]

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use eclnl::json::{diagram_from_json, diagram_to_json, DiagramFile};
use eclnl::{dot::diagram_to_dot, load_program, read, Diagnostic, Error, Loaded};
use eclnl_core::{
    check_adequacy, check_soundness, infer, run_program, Adequacy, LabelContext, LabelledDiagram,
    Oracle, OracleError, Outcome, Signature, Soundness, VarContext, DEFAULT_FUEL,
};
use serde_json::json;

const OK: u8 = 0;
const TYPE_ERROR: u8 = 1;
const RUNTIME_ERROR: u8 = 2;
const FUEL_EXHAUSTED: u8 = 3;
const USAGE: u8 = 4;

/// Typecheck, run and inspect programs that build string diagrams.
#[derive(Debug, Parser)]
#[command(name = "eclnl", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Evaluation steps before giving up.
    #[arg(long, global = true, env = "ECLNL_FUEL", default_value_t = DEFAULT_FUEL,
          value_parser = clap::value_parser!(u64).range(1..))]
    fuel: u64,

    /// Output format; `dot` only applies to diagrams.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Signature file, overriding the program's `signature` line.
    #[arg(long, global = true)]
    signature: Option<PathBuf>,

    /// Write diagrams here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Typecheck a program and print its type.
    Check { file: PathBuf },
    /// Typecheck and evaluate a program from the empty diagram.
    Run { file: PathBuf },
    /// Compare evaluation of a diagram-free program with its denotation.
    Oracle { file: PathBuf },
    /// Convert a diagram JSON file to DOT (or canonical JSON).
    Emit { file: PathBuf },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Dot,
}

struct Session {
    format: Format,
    fuel: u64,
    signature: Option<PathBuf>,
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { USAGE } else { OK };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let (file, default, allowed): (&Path, Format, &[Format]) = match &cli.command {
        Command::Check { file } => (file, Format::Text, &[Format::Text, Format::Json]),
        Command::Run { file } => (file, Format::Text, &[Format::Text, Format::Json, Format::Dot]),
        Command::Oracle { file } => (file, Format::Text, &[Format::Text, Format::Json]),
        Command::Emit { file } => (file, Format::Dot, &[Format::Dot, Format::Json]),
    };
    let format = cli.format.unwrap_or(default);
    if !allowed.contains(&format) {
        eprintln!("error: --format {} does not apply to this command", format.to_possible_value().unwrap().get_name());
        return ExitCode::from(USAGE);
    }
    let s = Session { format, fuel: cli.fuel, signature: cli.signature, out: cli.out };
    let code = match &cli.command {
        Command::Check { .. } => s.check(file),
        Command::Run { .. } => s.run(file),
        Command::Oracle { .. } => s.oracle(file),
        Command::Emit { .. } => s.emit(file),
    };
    ExitCode::from(code)
}

impl Session {
    /// Reports an error on stderr, as JSON in JSON mode.
    fn report(&self, e: &Error, src: &str, file: &Path) -> u8 {
        let d = Diagnostic::new(e, src);
        if self.format == Format::Json {
            eprintln!("{}", serde_json::to_string(&d).expect("diagnostics serialize"));
        } else {
            eprintln!("error: {}", d.render(&file.display().to_string()));
        }
        match e {
            Error::Parse(_) | Error::Type(_) => TYPE_ERROR,
            _ => USAGE,
        }
    }

    fn load(&self, file: &Path) -> Result<Loaded, u8> {
        load_program(file, self.signature.as_deref()).map_err(|(e, src)| self.report(&e, &src, file))
    }

    /// Writes to `--out` or standard output.
    fn emit_output(&self, text: &str) -> u8 {
        match &self.out {
            Some(p) => match std::fs::write(p, text) {
                Ok(()) => OK,
                Err(e) => {
                    eprintln!("error: {}: {e}", p.display());
                    USAGE
                }
            },
            None => {
                print!("{text}");
                OK
            }
        }
    }

    fn check(&self, file: &Path) -> u8 {
        let l = match self.load(file) {
            Ok(l) => l,
            Err(code) => return code,
        };
        match infer(&l.signature, &VarContext::new(), &LabelContext::new(), &l.term) {
            Ok(d) => {
                match self.format {
                    Format::Json => println!("{}", json!({ "type": d.ty.to_string() })),
                    _ => println!("{}", d.ty),
                }
                OK
            }
            Err(e) => self.report(&Error::Type(e), &l.src, file),
        }
    }

    fn run(&self, file: &Path) -> u8 {
        let l = match self.load(file) {
            Ok(l) => l,
            Err(code) => return code,
        };
        let report = match run_program(&l.term, &l.signature, self.fuel) {
            Ok(r) => r,
            Err(e) => return self.report(&Error::Type(e), &l.src, file),
        };
        let code = match &report.outcome {
            Outcome::Value(_) => OK,
            Outcome::Error(_) => RUNTIME_ERROR,
            Outcome::FuelExhausted => FUEL_EXHAUSTED,
        };
        let diagrams: Vec<(String, &LabelledDiagram)> = report
            .diagram()
            .map(|d| ("diagram".to_string(), d))
            .into_iter()
            .chain(report.boxed.iter().enumerate().map(|(i, b)| (format!("boxed{i}"), &b.diagram)))
            .collect();
        match self.format {
            Format::Json => {
                let mut out = json!({ "type": report.ty.to_string(), "outcome": report.outcome.kind() });
                match &report.outcome {
                    Outcome::Value(_) => {
                        out["value"] = json!(report.printed);
                        out["diagram"] = json!(report.diagram().map(DiagramFile::from_diagram));
                        out["boxed"] =
                            json!(report.boxed.iter().map(|b| DiagramFile::from_diagram(&b.diagram)).collect::<Vec<_>>());
                    }
                    Outcome::Error(e) => {
                        out["rule"] = json!(e.rule);
                        out["detail"] = json!(e.detail);
                    }
                    Outcome::FuelExhausted => out["fuel"] = json!(self.fuel),
                }
                let text = serde_json::to_string_pretty(&out).expect("reports serialize") + "\n";
                let written = self.emit_output(&text);
                if written != OK {
                    return written;
                }
            }
            Format::Dot => {
                let text: String = diagrams.iter().map(|(n, d)| diagram_to_dot(d, n)).collect();
                let written = self.emit_output(&text);
                if written != OK {
                    return written;
                }
                if let Outcome::Error(e) = &report.outcome {
                    eprintln!("error: {e}");
                }
            }
            Format::Text => {
                println!("type: {}", report.ty);
                match &report.outcome {
                    Outcome::Value(_) => {
                        println!("value: {}", report.printed.as_deref().unwrap_or(""));
                        for (name, d) in &diagrams {
                            println!("{name}: {} node(s), {} -> {}", d.node_count(), d.dom(), d.cod());
                        }
                        if let Some(p) = &self.out {
                            let files: Vec<DiagramFile> = diagrams.iter().map(|(_, d)| DiagramFile::from_diagram(d)).collect();
                            let text = serde_json::to_string_pretty(&files).expect("diagram files serialize") + "\n";
                            if let Err(e) = std::fs::write(p, text) {
                                eprintln!("error: {}: {e}", p.display());
                                return USAGE;
                            }
                        }
                    }
                    Outcome::Error(e) => eprintln!("error: runtime error in {e}"),
                    Outcome::FuelExhausted => eprintln!("error: no value after {} steps", self.fuel),
                }
            }
        }
        code
    }

    fn oracle(&self, file: &Path) -> u8 {
        let l = match self.load(file) {
            Ok(l) => l,
            Err(code) => return code,
        };
        if let Err(e) = infer(&l.signature, &VarContext::new(), &LabelContext::new(), &l.term) {
            return self.report(&Error::Type(e), &l.src, file);
        }
        // The denotational model only covers programs without diagram constants.
        let d = match infer(&Signature::empty(), &VarContext::new(), &LabelContext::new(), &l.term) {
            Ok(d) => d,
            Err(_) => return self.unsupported("the program uses diagram constructs"),
        };
        let o = Oracle::new();
        let result = (|| -> Result<_, OracleError> {
            let point = o.denote_closed(&d)?;
            let described = o.denote_type(&d.ty)?.describe(point);
            let sound = check_soundness(&o, &l.term, &d.ty, self.fuel)?;
            let adequate =
                if d.ty.is_intuitionistic() { Some(check_adequacy(&o, &l.term, &d.ty, self.fuel)?) } else { None };
            Ok((described, sound, adequate))
        })();
        let (denotation, sound, adequate) = match result {
            Ok(r) => r,
            Err(e) => return self.unsupported(&e.to_string()),
        };
        let sound_s = match &sound {
            Soundness::Pass { .. } => "pass".to_string(),
            Soundness::Fail { source, value } => format!("fail: source denotes {source}, value denotes {value}"),
            Soundness::Inconclusive => "inconclusive: fuel exhausted".to_string(),
            Soundness::RuntimeError(e) => format!("fail: runtime error {e}"),
        };
        let adequate_s = match &adequate {
            None => "not applicable at a linear type".to_string(),
            Some(Adequacy::Pass { .. }) => "pass".to_string(),
            Some(Adequacy::PassPresumedDivergent) => "pass (presumed divergent)".to_string(),
            Some(Adequacy::Fail(why)) => format!("fail: {why}"),
        };
        match self.format {
            Format::Json => println!(
                "{}",
                serde_json::to_string_pretty(&json!({
                    "type": d.ty.to_string(),
                    "denotation": denotation,
                    "soundness": sound_s,
                    "adequacy": adequate_s,
                }))
                .expect("reports serialize")
            ),
            _ => {
                println!("type: {}", d.ty);
                println!("denotation: {denotation}");
                println!("soundness: {sound_s}");
                println!("adequacy: {adequate_s}");
            }
        }
        let failed = !matches!(sound, Soundness::Pass { .. } | Soundness::Inconclusive)
            || adequate.as_ref().is_some_and(|a| !a.passed());
        if failed {
            RUNTIME_ERROR
        } else if sound == Soundness::Inconclusive {
            FUEL_EXHAUSTED
        } else {
            OK
        }
    }

    fn unsupported(&self, why: &str) -> u8 {
        if self.format == Format::Json {
            eprintln!("{}", json!({ "kind": "Unsupported", "span": null, "detail": why }));
        } else {
            eprintln!("error: {why}");
        }
        USAGE
    }

    fn emit(&self, file: &Path) -> u8 {
        let sig = match &self.signature {
            Some(p) => read(p).and_then(|t| eclnl::json::parse_signature(&t)),
            None => Ok(Signature::demo()),
        };
        let d = sig.and_then(|sig| read(file).and_then(|t| diagram_from_json(&t, &sig)));
        match d {
            Ok(d) => {
                let text = match self.format {
                    Format::Json => diagram_to_json(&d) + "\n",
                    _ => diagram_to_dot(&d, "diagram"),
                };
                self.emit_output(&text)
            }
            Err(e) => {
                self.report(&e, "", file);
                USAGE
            }
        }
    }
}
