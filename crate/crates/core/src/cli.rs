//! The command-line surface.  [`run`] parses arguments and returns the
//! exit code with everything that would be printed, so the binary is a
//! thin wrapper and tests can drive commands without a subprocess.
//!
//! Exit codes: 0 success or equivalent, 1 inequivalent or a failed self
//! test, 2 usage or input error.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{clifford_t_gates, GenMatrix};
use crate::rewrite::{CertStats, Certificate, Engine};
use crate::ring::{enumerate_residue_classes, residue_representatives};
use crate::synth::synthesize_traced;
use crate::words::{derived_rule_derivation, random_word, rule, RuleSchema, Word};

#[derive(Parser, Debug)]
#[command(name = "domega", version, about = "Exact synthesis and word normalization over D[ω]")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print a generator word for the unitary in a matrix file.
    Synth { file: PathBuf },
    /// Print the normal form of a word.
    Normalize {
        word: String,
        /// Write the derivation `word ≈ normal form` to this file.
        #[arg(long)]
        derivation: Option<PathBuf>,
        /// Only compute the normal form; build no derivation.
        #[arg(long, conflicts_with = "derivation")]
        no_cert: bool,
        #[arg(long, default_value_t = 4)]
        dim: usize,
        /// Print certificate statistics to stderr.
        #[arg(long)]
        stats: bool,
    },
    /// Decide whether two words denote the same matrix (exit 0 or 1).
    Equiv {
        word1: String,
        word2: String,
        /// Write the derivation `word1 ≈ word2` to this file.
        #[arg(long)]
        derivation: Option<PathBuf>,
        #[arg(long, conflicts_with = "derivation")]
        no_cert: bool,
        #[arg(long, default_value_t = 4)]
        dim: usize,
        #[arg(long)]
        stats: bool,
    },
    /// Print the matrix a word denotes.
    Eval {
        word: String,
        #[arg(long, default_value_t = 4)]
        dim: usize,
    },
    /// Print a seeded random word.
    Random {
        #[arg(long, default_value_t = 10)]
        length: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 4)]
        dim: usize,
    },
    /// Print the two-qubit gate library as matrix files.
    Gates {
        /// Also print a generator word for each gate.
        #[arg(long)]
        synthesize: bool,
    },
    /// Check every relation, the residue rings and the derived rules.
    Selftest {
        /// Sweep relations in this dimension only.
        #[arg(long)]
        dim: Option<usize>,
        /// Break the right side of this rule first (for mutation checks).
        #[arg(long, hide = true)]
        corrupt: Option<u8>,
    },
}

/// What a command printed and how it exited.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome { code: 0, stdout, stderr: String::new() }
    }

    fn input_error(e: &Error) -> Self {
        Outcome { code: 2, stdout: String::new(), stderr: format!("error: {e}\n") }
    }
}

/// Runs one command.  `args` includes the program name.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome { code: 2, stdout: String::new(), stderr: text }
            } else {
                Outcome::ok(text)
            };
        }
    };
    let result = match cli.command {
        Command::Synth { file } => synth(&file),
        Command::Normalize { word, derivation, no_cert, dim, stats } => {
            normalize(&word, derivation, no_cert, dim, stats)
        }
        Command::Equiv { word1, word2, derivation, no_cert, dim, stats } => {
            equiv(&word1, &word2, derivation, no_cert, dim, stats)
        }
        Command::Eval { word, dim } => eval(&word, dim),
        Command::Random { length, seed, dim } => random(length, seed, dim),
        Command::Gates { synthesize } => gates(synthesize),
        Command::Selftest { dim, corrupt } => Ok(selftest(dim, corrupt)),
    };
    result.unwrap_or_else(|e| Outcome::input_error(&e))
}

fn read_file(path: &PathBuf) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::parse(0, format!("cannot read {}: {e}", path.display())))
}

fn write_cert(path: &PathBuf, cert: &Certificate) -> Result<()> {
    let io = |e: std::io::Error| Error::internal(format!("cannot write {}: {e}", path.display()));
    let mut out = std::io::BufWriter::new(std::fs::File::create(path).map_err(io)?);
    cert.write_text(&mut out)?;
    std::io::Write::flush(&mut out).map_err(io)
}

fn stats_line(stats: &CertStats, depth: usize) -> String {
    let hist: Vec<String> = stats.histogram.iter().map(|(r, c)| format!("{r}:{c}")).collect();
    format!("# steps {} max-word-length {} depth {} rules {}\n", stats.steps, stats.max_word_len, depth, hist.join(","))
}

fn synth(file: &PathBuf) -> Result<Outcome> {
    let m: GenMatrix = read_file(file)?.parse()?;
    let word = synthesize_traced(&m)?.word();
    Ok(Outcome::ok(format!("{word}\n")))
}

fn normalize(text: &str, derivation: Option<PathBuf>, no_cert: bool, dim: usize, stats: bool) -> Result<Outcome> {
    let w: Word = text.parse()?;
    let mut engine = Engine::new(dim)?;
    let norm = engine.normalize(&w, !no_cert)?;
    let mut out = Outcome::ok(format!("{}\n", norm.normal_form));
    if let Some(cert) = &norm.cert {
        if let Some(path) = &derivation {
            write_cert(path, cert)?;
        }
        if stats {
            out.stderr = stats_line(&cert.check()?, engine.max_depth());
        }
    }
    Ok(out)
}

fn equiv(t1: &str, t2: &str, derivation: Option<PathBuf>, no_cert: bool, dim: usize, stats: bool) -> Result<Outcome> {
    let (w1, w2): (Word, Word) = (t1.parse()?, t2.parse()?);
    let mut engine = Engine::new(dim)?;
    let (same, cert) = engine.decide_equiv(&w1, &w2, !no_cert)?;
    if !same {
        return Ok(Outcome { code: 1, stdout: "inequivalent\n".into(), stderr: String::new() });
    }
    let mut out = Outcome::ok("equivalent\n".into());
    if let Some(cert) = &cert {
        if let Some(path) = &derivation {
            write_cert(path, cert)?;
        }
        if stats {
            out.stderr = stats_line(&cert.check()?, engine.max_depth());
        }
    }
    Ok(out)
}

fn eval(text: &str, dim: usize) -> Result<Outcome> {
    let w: Word = text.parse()?;
    Ok(Outcome::ok(w.evaluate(dim)?.to_string()))
}

fn random(length: usize, seed: u64, dim: usize) -> Result<Outcome> {
    if dim < 2 {
        return Err(Error::Dimension(format!("random words need --dim >= 2, got {dim}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(Outcome::ok(format!("{}\n", random_word(&mut rng, dim, length))))
}

fn gates(synthesize: bool) -> Result<Outcome> {
    let mut out = String::new();
    for (name, m) in clifford_t_gates() {
        writeln!(out, "# {name}").expect("write to string");
        if synthesize {
            let word = synthesize_traced(&m)?.word();
            writeln!(out, "# word: {word}").expect("write to string");
        }
        write!(out, "{m}").expect("write to string");
    }
    Ok(Outcome::ok(out))
}

/// One line of the self-test report.
fn report(out: &mut String, ok: bool, group: &str, detail: &str) {
    let tag = if ok { "pass" } else { "FAIL" };
    writeln!(out, "{tag} {group}: {detail}").expect("write to string");
}

fn sweep(out: &mut String, n: usize, corrupt: Option<u8>) -> bool {
    let mut checked = 0;
    for id in 1..=32u8 {
        let base = rule(id).expect("rules 1-32 exist");
        let broken;
        let schema: &RuleSchema = if corrupt == Some(id) {
            broken = base.corrupted();
            &broken
        } else {
            base
        };
        match schema.check_sound(n) {
            Ok(c) => checked += c,
            Err(s) => {
                report(out, false, &format!("relations n={n}"), &format!("rule {id} fails at {s}"));
                return false;
            }
        }
    }
    report(out, true, &format!("relations n={n}"), &format!("rules 1-32, {checked} instances"));
    true
}

fn residue_check(out: &mut String) -> bool {
    let mut ok = true;
    let mut sizes = Vec::new();
    for p in 1..=3u32 {
        let classes = enumerate_residue_classes(p);
        let reps = residue_representatives(p);
        let each_once = classes.iter().all(|c| reps.iter().filter(|r| (c - *r).divisible_by_delta_pow(p)).count() == 1);
        ok &= classes.len() == 1 << p && reps.len() == classes.len() && each_once;
        sizes.push(classes.len().to_string());
    }
    report(out, ok, "residue rings", &format!("class counts {} for delta^1..3", sizes.join("/")));
    ok
}

fn derived_check(out: &mut String) -> bool {
    let mut replayed = 0;
    for id in 21..=32u8 {
        let schema = rule(id).expect("rules 21-32 exist");
        for s in schema.instantiations(4) {
            let good = derived_rule_derivation(id, s).and_then(|d| d.check().map(|_| d.max_rule() <= 20));
            if !matches!(good, Ok(true)) {
                report(out, false, "derived rules", &format!("rule {id} at {s} does not replay over rules 1-20"));
                return false;
            }
            replayed += 1;
        }
    }
    report(out, true, "derived rules", &format!("{replayed} instances replay over rules 1-20"));
    true
}

/// The self-test report and its exit code.  `dim` restricts the relation
/// sweep to one dimension; `corrupt` breaks one rule first.
pub fn selftest(dim: Option<usize>, corrupt: Option<u8>) -> Outcome {
    let dims = match dim {
        Some(n) => vec![n],
        None => vec![4, 5, 6],
    };
    let mut out = String::new();
    let mut ok = true;
    for n in dims {
        ok &= sweep(&mut out, n, corrupt);
    }
    ok &= residue_check(&mut out);
    ok &= derived_check(&mut out);
    Outcome { code: if ok { 0 } else { 1 }, stdout: out, stderr: String::new() }
}
