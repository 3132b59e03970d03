//! Command-line front end.
//!
//! Exit codes: 0 success (or `equivalent`), 1 a well-formed negative answer
//! (`distinct`, or a failing `selftest`), 2 bad input or usage.

use std::fs;
use std::io::{Read, Write};
use std::time::Instant;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use thiserror::Error;

use crate::alpha::{alpha_eq_with, db_named};
use crate::debruijn::{chain_rename, db_named_generalized, derive, translate};
use crate::freevars::{fv_dbterm, fv_term};
use crate::kernel::{apply_renaming, VarName};
use crate::selftest::{run_all, SelftestConfig};
use crate::syntax::{
    parse_context, parse_dbterm, parse_renaming, parse_term, print_dbterm, print_derivation,
    print_fvseq, print_term, ParseError,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "lambda-up",
    version,
    about = "Alpha-equivalence and de Bruijn forms for lambda terms with explicit weakening",
    after_help = "Any TERM, DBTERM, CTX or RENAMING argument may be `-` (read stdin) or `@FILE`.\n\
                  Input read this way may contain `#` comments and must hold exactly one item."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decide alpha-equivalence; prints `equivalent` (exit 0) or `distinct` (exit 1)
    Alpha {
        left: String,
        right: String,
        /// Canonicalization variable
        #[arg(long = "var", default_value = "z")]
        var: String,
    },
    /// Print db_z(TERM), the form with every binder renamed to the variable
    Db {
        #[arg(long = "var", default_value = "z")]
        var: String,
        term: String,
    },
    /// Print the generalized de Bruijn term ‖CTX ⊢ TERM‖
    Translate {
        #[arg(long, default_value = "nil")]
        ctx: String,
        term: String,
    },
    /// Read a generalized de Bruijn term back with every binder named VAR
    Undb {
        #[arg(long = "var", default_value = "z")]
        var: String,
        dbterm: String,
    },
    /// Print the unique derivation of CTX ⊢ TERM
    Derive {
        #[arg(long, default_value = "nil")]
        ctx: String,
        term: String,
    },
    /// Apply a renaming such as `{y x}` or `{y x}_a,b`
    Rename { renaming: String, term: String },
    /// Print {VAR/CTX}TERM
    Chain { var: String, ctx: String, term: String },
    /// Free variables of a term, per weakening level
    Fv { term: String },
    /// Free variables of a generalized de Bruijn term, per weakening level
    Fvdb { dbterm: String },
    /// Run the property suites and print a summary
    Selftest {
        /// Size bound for random terms
        #[arg(long, default_value_t = 30)]
        max_size: usize,
        /// Random cases per suite
        #[arg(long, default_value_t = 10_000)]
        cases: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Size bound for the exhaustive sweeps
        #[arg(long, default_value_t = 7)]
        exhaustive_size: usize,
    },
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{what}: {source}")]
    Parse {
        what: &'static str,
        #[source]
        source: ParseError,
    },
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Io(String),
}

/// Resolves `-` and `@file` arguments. Stdin can be consumed only once.
struct Inputs<R> {
    stdin: Option<R>,
}

impl<R: Read> Inputs<R> {
    fn get(&mut self, arg: &str) -> Result<String, CliError> {
        let raw = if arg == "-" {
            let mut stdin = self
                .stdin
                .take()
                .ok_or_else(|| CliError::Usage("stdin (`-`) can be used for one argument only".into()))?;
            let mut buf = String::new();
            stdin
                .read_to_string(&mut buf)
                .map_err(|e| CliError::Io(format!("reading stdin: {e}")))?;
            buf
        } else if let Some(path) = arg.strip_prefix('@') {
            fs::read_to_string(path).map_err(|e| CliError::Io(format!("reading {path}: {e}")))?
        } else {
            return Ok(arg.to_owned());
        };
        single_item(&raw)
    }
}

/// Strips `#` comments and blank lines; exactly one line must remain.
fn single_item(raw: &str) -> Result<String, CliError> {
    let lines: Vec<&str> = raw
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty())
        .collect();
    match lines.as_slice() {
        [one] => Ok((*one).to_owned()),
        [] => Ok(String::new()),
        more => Err(CliError::Usage(format!(
            "expected exactly one item, found {} lines",
            more.len()
        ))),
    }
}

fn parsed<T>(what: &'static str, r: Result<T, ParseError>) -> Result<T, CliError> {
    r.map_err(|source| CliError::Parse { what, source })
}

fn var_name(text: &str) -> Result<VarName, CliError> {
    VarName::new(text.trim()).map_err(|e| CliError::Usage(format!("variable: {e}")))
}

/// Runs the CLI on `args` (including the program name) and returns the
/// exit code.
pub fn run<I, T, R, O, E>(args: I, stdin: R, stdout: &mut O, stderr: &mut E) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
    R: Read,
    O: Write,
    E: Write,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(err) => {
            return match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{err}");
                    EXIT_OK
                }
                ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => {
                    let _ = write!(stderr, "{err}");
                    EXIT_INPUT
                }
                _ => {
                    let text = err.to_string();
                    let line = text.lines().next().unwrap_or("usage error");
                    let _ = writeln!(stderr, "{line}");
                    EXIT_INPUT
                }
            };
        }
    };
    let mut inputs = Inputs { stdin: Some(stdin) };
    match execute(cli.command, &mut inputs, stdout, stderr) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_INPUT
        }
    }
}

fn execute<R: Read, O: Write, E: Write>(
    command: Command,
    inputs: &mut Inputs<R>,
    out: &mut O,
    err: &mut E,
) -> Result<i32, CliError> {
    let term = |inputs: &mut Inputs<R>, what, arg: &str| {
        let text = inputs.get(arg)?;
        parsed(what, parse_term(&text))
    };
    let emit = |out: &mut O, line: String| -> Result<i32, CliError> {
        writeln!(out, "{line}").map_err(|e| CliError::Io(e.to_string()))?;
        Ok(EXIT_OK)
    };
    match command {
        Command::Alpha { left, right, var } => {
            let z = var_name(&var)?;
            let m = term(inputs, "left term", &left)?;
            let n = term(inputs, "right term", &right)?;
            if alpha_eq_with(&m, &n, &z) {
                emit(out, "equivalent".into())
            } else {
                emit(out, "distinct".into())?;
                Ok(EXIT_NEGATIVE)
            }
        }
        Command::Db { var, term: t } => {
            let z = var_name(&var)?;
            let m = term(inputs, "term", &t)?;
            emit(out, print_term(&db_named(&z, &m)))
        }
        Command::Translate { ctx, term: t } => {
            let g = parsed("context", parse_context(&inputs.get(&ctx)?))?;
            let m = term(inputs, "term", &t)?;
            emit(out, print_dbterm(&translate(&g, &m)))
        }
        Command::Undb { var, dbterm } => {
            let z = var_name(&var)?;
            let a = parsed("de Bruijn term", parse_dbterm(&inputs.get(&dbterm)?))?;
            emit(out, print_term(&db_named_generalized(&z, &a)))
        }
        Command::Derive { ctx, term: t } => {
            let g = parsed("context", parse_context(&inputs.get(&ctx)?))?;
            let m = term(inputs, "term", &t)?;
            let text = print_derivation(&derive(&g, &m));
            write!(out, "{text}").map_err(|e| CliError::Io(e.to_string()))?;
            Ok(EXIT_OK)
        }
        Command::Rename { renaming, term: t } => {
            let f = parsed("renaming", parse_renaming(&inputs.get(&renaming)?))?;
            let m = term(inputs, "term", &t)?;
            emit(out, print_term(&apply_renaming(&f, &m)))
        }
        Command::Chain { var, ctx, term: t } => {
            let z = var_name(&inputs.get(&var)?)?;
            let g = parsed("context", parse_context(&inputs.get(&ctx)?))?;
            let m = term(inputs, "term", &t)?;
            emit(out, print_term(&chain_rename(&z, &g, &m)))
        }
        Command::Fv { term: t } => {
            let m = term(inputs, "term", &t)?;
            emit(out, print_fvseq(&fv_term(&m)))
        }
        Command::Fvdb { dbterm } => {
            let a = parsed("de Bruijn term", parse_dbterm(&inputs.get(&dbterm)?))?;
            emit(out, print_fvseq(&fv_dbterm(&a)))
        }
        Command::Selftest {
            max_size,
            cases,
            seed,
            exhaustive_size,
        } => {
            if max_size == 0 || cases == 0 {
                return Err(CliError::Usage("--max-size and --cases must be positive".into()));
            }
            let cfg = SelftestConfig {
                max_size,
                seed,
                exhaustive_size,
                ..SelftestConfig::with_cases(cases)
            };
            let started = Instant::now();
            let reports = run_all(&cfg);
            let io = |e: std::io::Error| CliError::Io(e.to_string());
            for r in &reports {
                writeln!(out, "{r}").map_err(io)?;
            }
            let passed = reports.iter().filter(|r| r.passed()).count();
            writeln!(
                out,
                "{passed}/{} suites passed in {:.2}s (seed {seed}, {cases} cases, max size {max_size})",
                reports.len(),
                started.elapsed().as_secs_f64()
            )
            .map_err(io)?;
            if passed == reports.len() {
                Ok(EXIT_OK)
            } else {
                writeln!(err, "selftest: {} suite(s) failed", reports.len() - passed).map_err(io)?;
                Ok(EXIT_NEGATIVE)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str], stdin: &str) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("lambda-up").chain(args.iter().copied());
        let code = run(argv, stdin.as_bytes(), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn alpha_answers() {
        assert_eq!(call(&["alpha", r"\x. z", r"\y. ^z"], ""), (0, "equivalent\n".into(), String::new()));
        assert_eq!(call(&["alpha", r"\x. x", r"\x. ^x"], ""), (1, "distinct\n".into(), String::new()));
        assert_eq!(call(&["alpha", "--var", "x", r"\x. z", r"\y. ^z"], "").0, 0);
    }

    #[test]
    fn printing_commands() {
        assert_eq!(call(&["db", "--var", "z", r"\x.\y. y"], "").1, "\\z.\\z. z\n");
        assert_eq!(call(&["translate", "--ctx", "nil", r"\x.\y. x y z"], "").1, "\\.\\. (^1) 1 ^^z\n");
        assert_eq!(call(&["translate", "--ctx", "x,y", "x"], "").1, "^1\n");
        assert_eq!(call(&["undb", "--var", "x", r"\.\. (^1) 1 ^^z"], "").1, "\\x.\\x. (^x) x ^^z\n");
        assert_eq!(call(&["rename", "{y x}", r"\z. x"], "").1, "\\z. ^y\n");
        assert_eq!(call(&["chain", "z", "x,y", "x"], "").1, "^z\n");
        assert_eq!(call(&["fv", "^x"], "").1, "1:{x}\n");
        assert_eq!(call(&["fvdb", "1"], "").1, "{}\n");
        let (code, out, _) = call(&["derive", "--ctx", "x", "x"], "");
        assert_eq!((code, out.as_str()), (0, "AxHere: x ⊢ x\n"));
    }

    #[test]
    fn stdin_and_files() {
        assert_eq!(call(&["db", "-"], "# comment\n\\x. x  # trailing\n\n").1, "\\z. z\n");
        let (code, _, err) = call(&["alpha", "-", "-"], "x");
        assert_eq!(code, 2);
        assert!(err.contains("stdin"));
        let (code, _, err) = call(&["db", "-"], "x\ny\n");
        assert_eq!(code, 2);
        assert!(err.contains("exactly one"));

        let dir = std::env::temp_dir().join(format!("lambda-up-cli-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        let file = dir.join("t.txt");
        fs::write(&file, "# a term\n\\x.\\y. x\n").unwrap();
        let arg = format!("@{}", file.display());
        assert_eq!(call(&["db", &arg], "").1, "\\z.\\z. ^z\n");
        let (code, _, err) = call(&["db", "@/nonexistent/file"], "");
        assert_eq!(code, 2);
        assert!(err.starts_with("error: reading"));
        fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn input_errors_exit_two_with_span() {
        let (code, out, err) = call(&["alpha", "(x", "x"], "");
        assert_eq!(code, 2);
        assert!(out.is_empty());
        assert_eq!(err.lines().count(), 1);
        assert!(err.contains("0..2"), "{err}");
        let (code, _, err) = call(&["bogus"], "");
        assert_eq!(code, 2);
        assert_eq!(err.lines().count(), 1);
        assert_eq!(call(&["db", "--var", "1", "x"], "").0, 2);
        assert_eq!(call(&["rename", "{y x", "x"], "").0, 2);
        assert_eq!(call(&[], "").0, 2);
    }

    #[test]
    fn help_is_success() {
        let (code, out, _) = call(&["--help"], "");
        assert_eq!(code, 0);
        assert!(out.contains("selftest"));
    }

    #[test]
    fn small_selftest() {
        let (code, out, _) = call(&["selftest", "--cases", "50", "--max-size", "12", "--exhaustive-size", "4"], "");
        assert_eq!(code, 0, "{out}");
        let names: Vec<&str> = out
            .lines()
            .filter(|l| l.starts_with("PASS") || l.starts_with("FAIL"))
            .map(|l| l.split_whitespace().nth(1).unwrap())
            .collect();
        let mut sorted = names.clone();
        sorted.sort_unstable();
        assert_eq!(names, sorted);
        assert!(out.lines().last().unwrap().starts_with("16/16 suites passed"));
    }
}
