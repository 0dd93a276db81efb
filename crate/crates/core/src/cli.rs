//! The `sidekick-opt` driver: parse, verify, transform, print.
//!
//! Exit codes: 0 on success, 1 for command-line, I/O and parse errors, 2 for
//! verification failures, 3 for pass failures and non-convergence.

use std::collections::HashMap;
use std::io::{Read, Write};

use clap::Parser;

use crate::ir::{verify, Context, Diagnostic, Ir, Location, OpId};
use crate::irdl::{export_dialect_to_irdl, load_dialects_from_irdl, LoadError};
use crate::rewrite::{run_pass_pipeline, PipelineError, PASS_NAMES};
use crate::textual::{parse_module, print_module, Module, ParseOptions};

pub const EXIT_OK: u8 = 0;
pub const EXIT_ERROR: u8 = 1;
pub const EXIT_VERIFY: u8 = 2;
pub const EXIT_PASS: u8 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "sidekick-opt",
    version,
    about = "Parse, verify, transform and print IR in the MLIR generic format"
)]
pub struct CliConfig {
    /// Input file, `-` for standard input.
    #[arg(default_value = "-")]
    pub input: String,
    /// Output file, `-` for standard output.
    #[arg(short = 'o', default_value = "-")]
    pub output: String,
    /// IRDL file defining extra dialects; may be repeated.
    #[arg(long = "irdl", value_name = "PATH")]
    pub irdl_files: Vec<String>,
    /// Comma-separated passes to run, from: constant-fold, dce.
    #[arg(short = 'p', long = "passes", value_delimiter = ',', value_name = "PASSES")]
    pub passes: Vec<String>,
    /// Accept operations that no registered dialect defines.
    #[arg(long = "allow-unregistered-dialect")]
    pub allow_unregistered: bool,
    /// Skip verification.
    #[arg(long = "no-verify")]
    pub no_verify: bool,
    /// Print the named dialect as an IRDL program and exit.
    #[arg(long = "export-irdl", value_name = "DIALECT", conflicts_with = "passes")]
    pub export_irdl: Option<String>,
}

struct Failure(u8);

struct Driver<'a> {
    stdin: &'a mut dyn Read,
    stdout: &'a mut dyn Write,
    stderr: &'a mut dyn Write,
}

/// Runs the tool with `args` (including the program name) and returns the
/// exit code.
pub fn run(
    args: &[String],
    stdin: &mut dyn Read,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> u8 {
    let config = match CliConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
            let out: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = write!(out, "{}", e.render());
            return code;
        }
    };
    let mut driver = Driver {
        stdin,
        stdout,
        stderr,
    };
    match driver.run(&config) {
        Ok(()) => EXIT_OK,
        Err(Failure(code)) => code,
    }
}

fn display_name(path: &str) -> &str {
    if path == "-" {
        "<stdin>"
    } else {
        path
    }
}

/// Source position for a diagnostic: its own, or that of the nearest
/// enclosing operation that came from the input.
fn position(d: &Diagnostic, ir: Option<&Ir>, locations: &HashMap<OpId, (u32, u32)>) -> Option<(u32, u32)> {
    match &d.location {
        Location::Source { line, column } => Some((*line, *column)),
        Location::Op { op, .. } => {
            let ir = ir?;
            let mut cur = Some(*op);
            while let Some(o) = cur {
                if let Some(&p) = locations.get(&o) {
                    return Some(p);
                }
                cur = ir.parent_op(o);
            }
            None
        }
    }
}

impl Driver<'_> {
    fn error(&mut self, file: &str, at: Option<(u32, u32)>, message: &str) {
        let _ = match at {
            Some((line, col)) => writeln!(self.stderr, "{file}:{line}:{col}: error: {message}"),
            None => writeln!(self.stderr, "{file}: error: {message}"),
        };
    }

    fn report(&mut self, file: &str, diags: &[Diagnostic], module: Option<&Module>) {
        let empty = HashMap::new();
        let locations = module.map_or(&empty, |m| &m.locations);
        for d in diags {
            let at = position(d, module.map(|m| &m.ir), locations);
            let message = match &d.location {
                Location::Op { path, .. } if at.is_none() => format!("{path}: {}", d.message),
                _ => d.message.clone(),
            };
            self.error(file, at, &message);
        }
    }

    fn read(&mut self, path: &str) -> Result<String, Failure> {
        let mut text = String::new();
        let result = if path == "-" {
            self.stdin.read_to_string(&mut text).map(|_| ())
        } else {
            std::fs::read_to_string(path).map(|t| text = t)
        };
        result.map(|()| text).map_err(|e| {
            self.error(display_name(path), None, &format!("cannot read input: {e}"));
            Failure(EXIT_ERROR)
        })
    }

    fn parse(&mut self, path: &str, text: &str, ctx: &Context, opts: ParseOptions) -> Result<Module, Failure> {
        parse_module(text, ctx, &opts).map_err(|d| {
            self.report(display_name(path), &[d], None);
            Failure(EXIT_ERROR)
        })
    }

    fn load_irdl(&mut self, path: &str, ctx: &mut Context) -> Result<(), Failure> {
        let text = self.read(path)?;
        let module = self.parse(path, &text, ctx, ParseOptions::default())?;
        let diags = verify(&module.ir, module.top, ctx);
        if !diags.is_empty() {
            self.report(display_name(path), &diags, Some(&module));
            return Err(Failure(EXIT_VERIFY));
        }
        load_dialects_from_irdl(&module.ir, module.top, ctx).map_err(|e| {
            let at = match &e {
                LoadError::Malformed { op, .. } => module.locations.get(op).copied(),
                LoadError::Context(_) => None,
            };
            self.error(display_name(path), at, &e.to_string());
            Failure(EXIT_ERROR)
        })?;
        Ok(())
    }

    fn write_output(&mut self, path: &str, text: &str) -> Result<(), Failure> {
        let result = if path == "-" {
            self.stdout.write_all(text.as_bytes())
        } else {
            std::fs::write(path, text)
        };
        result.map_err(|e| {
            self.error(display_name(path), None, &format!("cannot write output: {e}"));
            Failure(EXIT_ERROR)
        })
    }

    fn run(&mut self, config: &CliConfig) -> Result<(), Failure> {
        if let Some(bad) = config.passes.iter().find(|p| !PASS_NAMES.contains(&p.as_str())) {
            let _ = writeln!(
                self.stderr,
                "error: unknown pass '{bad}' (available: {})",
                PASS_NAMES.join(", ")
            );
            return Err(Failure(EXIT_ERROR));
        }

        let mut ctx = Context::with_builtins();
        for path in &config.irdl_files {
            self.load_irdl(path, &mut ctx)?;
        }
        ctx.allow_unregistered = config.allow_unregistered;

        if let Some(name) = &config.export_irdl {
            let Some(dialect) = ctx.dialect(name) else {
                let _ = writeln!(self.stderr, "error: unknown dialect '{name}'");
                return Err(Failure(EXIT_ERROR));
            };
            let module = export_dialect_to_irdl(dialect);
            let text = print_module(&module.ir, module.top, &ctx);
            return self.write_output(&config.output, &text);
        }

        let verify_enabled = !config.no_verify;
        let file = display_name(&config.input).to_string();
        let text = self.read(&config.input)?;
        // With verification on, unregistered operations are reported by the
        // verifier rather than rejected while parsing.
        let opts = ParseOptions {
            allow_unregistered: config.allow_unregistered || verify_enabled,
        };
        let mut module = self.parse(&config.input, &text, &ctx, opts)?;

        if verify_enabled {
            let diags = verify(&module.ir, module.top, &ctx);
            if !diags.is_empty() {
                self.report(&file, &diags, Some(&module));
                return Err(Failure(EXIT_VERIFY));
            }
        }

        if !config.passes.is_empty() {
            let names: Vec<&str> = config.passes.iter().map(String::as_str).collect();
            let top = module.top;
            match run_pass_pipeline(&mut module.ir, top, &names, &ctx, verify_enabled) {
                Ok(r) if r.converged => {}
                Ok(_) => {
                    self.error(&file, None, "pass pipeline did not converge");
                    return Err(Failure(EXIT_PASS));
                }
                Err(PipelineError::Verification { pass, diagnostics }) => {
                    self.error(&file, None, &format!("verification failed after pass '{pass}'"));
                    self.report(&file, &diagnostics, Some(&module));
                    return Err(Failure(EXIT_VERIFY));
                }
                Err(e @ PipelineError::UnknownPass(_)) => {
                    let _ = writeln!(self.stderr, "error: {e}");
                    return Err(Failure(EXIT_ERROR));
                }
                Err(e) => {
                    self.error(&file, None, &e.to_string());
                    return Err(Failure(EXIT_PASS));
                }
            }
        }

        let out = print_module(&module.ir, module.top, &ctx);
        self.write_output(&config.output, &out)
    }
}
