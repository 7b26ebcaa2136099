//! The `orbi` command line.

use std::ffi::OsString;
use std::fs;
use std::io::{IsTerminal, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::check::{check_source, Checked};
use crate::diag::{Diagnostic, Record, Severity};
use crate::lint::lint;
use crate::parser::parse_spec_recovering;
use crate::syntax::{Pretty, SystemId};
use crate::translate::translate_spec;

#[derive(Debug, Parser)]
#[command(name = "orbi", version, about = "Check, lint, format and translate ORBI specifications")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Parse and check specifications.
    Check(Common),
    /// Check, then write `<basename>.<target>.out` for each input.
    Translate {
        #[arg(long, short, value_enum)]
        target: Target,
        #[command(flatten)]
        common: Common,
    },
    /// Check, then report guideline violations.
    Lint(Common),
    /// Print specifications in canonical form.
    Fmt {
        /// Rewrite the inputs instead of printing them.
        #[arg(long)]
        in_place: bool,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Debug, Args)]
struct Common {
    /// Directory for generated files (default: current directory).
    #[arg(long, short)]
    out_dir: Option<PathBuf>,
    /// Fail on warnings too.
    #[arg(long, short = 'W')]
    warnings_as_errors: bool,
    /// Emit diagnostics as JSON lines on stdout.
    #[arg(long)]
    json: bool,
    #[arg(required = true)]
    files: Vec<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Target {
    Ab,
    Hy,
    Bel,
    Tw,
}

impl From<Target> for SystemId {
    fn from(t: Target) -> SystemId {
        match t {
            Target::Ab => SystemId::Ab,
            Target::Hy => SystemId::Hy,
            Target::Bel => SystemId::Bel,
            Target::Tw => SystemId::Tw,
        }
    }
}

#[derive(Debug, Default)]
struct Outcome {
    diagnostics: Vec<Diagnostic>,
    stdout: String,
    usage: Option<String>,
}

impl Outcome {
    fn usage(msg: String) -> Self {
        Outcome { usage: Some(msg), ..Default::default() }
    }
}

/// Writes `contents` to `path` through a temporary file in the same directory.
pub fn write_atomic(path: &Path, contents: &str) -> std::io::Result<()> {
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let tmp = dir.join(format!(".{name}.{}.tmp", std::process::id()));
    let res = (|| {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(contents.as_bytes())?;
        f.sync_all()?;
        fs::rename(&tmp, path)
    })();
    if res.is_err() {
        let _ = fs::remove_file(&tmp);
    }
    res
}

/// `<basename>.<target>.out`
pub fn output_name(input: &Path, target: SystemId) -> String {
    let stem = input.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "out".into());
    format!("{stem}.{target}.out")
}

fn checked(src: &str, o: &mut Outcome) -> Option<Checked> {
    match check_source(src) {
        Ok(c) => Some(c),
        Err(es) => {
            o.diagnostics.extend(es);
            None
        }
    }
}

fn process(cmd: &Command, path: &Path) -> Outcome {
    let src = match fs::read_to_string(path) {
        Ok(s) => s,
        Err(e) => return Outcome::usage(format!("cannot read {}: {e}", path.display())),
    };
    let mut o = Outcome::default();
    match cmd {
        Command::Check(_) => {
            checked(&src, &mut o);
        }
        Command::Lint(_) => {
            if let Some(c) = checked(&src, &mut o) {
                o.diagnostics.extend(lint(&c));
            }
        }
        Command::Translate { target, common } => {
            let Some(c) = checked(&src, &mut o) else { return o };
            let target = SystemId::from(*target);
            match translate_spec(&c, target) {
                Ok(doc) => {
                    o.diagnostics.extend(doc.warnings.iter().cloned());
                    let dir = common.out_dir.clone().unwrap_or_else(|| PathBuf::from("."));
                    let out = dir.join(output_name(path, target));
                    if let Err(e) = write_atomic(&out, &doc.render()) {
                        return Outcome::usage(format!("cannot write {}: {e}", out.display()));
                    }
                }
                Err(es) => o.diagnostics.extend(es),
            }
        }
        Command::Fmt { in_place, .. } => {
            let (spec, errors) = parse_spec_recovering(&src);
            if !errors.is_empty() {
                o.diagnostics = errors;
                return o;
            }
            let text = spec.pretty();
            if *in_place {
                if text != src {
                    if let Err(e) = write_atomic(path, &text) {
                        return Outcome::usage(format!("cannot write {}: {e}", path.display()));
                    }
                }
            } else {
                o.stdout = text;
            }
        }
    }
    o
}

fn common(cmd: &Command) -> &Common {
    match cmd {
        Command::Check(c) | Command::Lint(c) => c,
        Command::Translate { common, .. } | Command::Fmt { common, .. } => common,
    }
}

fn use_color() -> bool {
    match std::env::var("ORBI_COLOR").as_deref() {
        Ok("always") => true,
        Ok("never") => false,
        _ => std::io::stderr().is_terminal(),
    }
}

fn text_line(d: &Diagnostic, file: &str, color: bool) -> String {
    let line = d.render_line(file);
    if !color {
        return line;
    }
    let tag = format!("[{}]", d.code);
    let paint = match d.severity {
        Severity::Error => "\x1b[31m",
        Severity::Warning => "\x1b[33m",
    };
    line.replacen(&tag, &format!("{paint}{tag}\x1b[0m"), 1)
}

/// Runs the command line in `args`; returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { stdout.write_all(text.as_bytes()) } else { stderr.write_all(text.as_bytes()) };
            return code;
        }
    };
    let cmd = &cli.command;
    let opts = common(cmd);
    if let Some(dir) = &opts.out_dir {
        if !dir.is_dir() {
            let _ = writeln!(stderr, "orbi: output directory {} does not exist", dir.display());
            return 2;
        }
    }
    let outcomes: Vec<Outcome> = std::thread::scope(|s| {
        let handles: Vec<_> = opts.files.iter().map(|f| s.spawn(move || process(cmd, f))).collect();
        handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
    });
    let color = !opts.json && use_color();
    let mut code = 0;
    for (path, o) in opts.files.iter().zip(&outcomes) {
        let file = path.display().to_string();
        if let Some(msg) = &o.usage {
            let _ = writeln!(stderr, "orbi: {msg}");
            code = 2;
            continue;
        }
        for d in &o.diagnostics {
            if opts.json {
                let rec = serde_json::to_string(&Record { file: &file, diagnostic: d }).expect("serializable");
                let _ = writeln!(stdout, "{rec}");
            } else {
                let _ = writeln!(stderr, "{}", text_line(d, &file, color));
            }
            if (d.is_error() || opts.warnings_as_errors) && code == 0 {
                code = 1;
            }
        }
        let _ = stdout.write_all(o.stdout.as_bytes());
    }
    code
}
