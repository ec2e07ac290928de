//! Command-line front end. [`run`] parses arguments, dispatches to the core
//! library and returns the process exit code: 0 on success, 1 when the
//! computation fails, 2 for invalid input.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use bsqh::cohomology::{deg_q, first_chern, first_chern_coeffs, multiplication_matrix, CohClass};
use bsqh::conjo::{analyze, DEFAULT_TOLERANCE};
use bsqh::effcone::{curve_neighborhood, EffectiveCone};
use bsqh::momentgraph::{CurveClass, MomentGraph};
use bsqh::quantum::ring::run_pipeline;
use bsqh::quantum::QhContext;
use bsqh::rootsys::{CartanMatrix, SubwordIndex, Word};
use bsqh::Error;

/// Directory searched for `<NAME>.cartan` files before the built-in presets.
pub const CARTAN_DIR_VAR: &str = "BSQH_CARTAN_DIR";

#[derive(Parser, Debug)]
#[command(name = "bsqh", version, about = "Moment graphs and quantum cohomology of Bott-Samelson varieties")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Moment graph of the Bott-Samelson variety of a word.
    MomentGraph {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum, default_value_t = GraphFormat::Text)]
        format: GraphFormat,
        /// Write to this file instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Cohomology ring data: c₁, degrees and divisor multiplication matrices.
    Cohomology {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Generators of the effective cone of curves.
    EffCone {
        #[command(flatten)]
        input: Input,
        /// Decompose this class into generators, e.g. `1,0,0`.
        #[arg(long, allow_hyphen_values = true)]
        class: Option<String>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Fixed points of a curve neighborhood.
    CurveNbhd {
        #[command(flatten)]
        input: Input,
        /// Curve class, e.g. `1,0,-1`.
        #[arg(long, allow_hyphen_values = true)]
        class: String,
        /// Starting fixed points, e.g. `000` or `000,101`.
        #[arg(long)]
        from: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Solve for the small quantum cohomology ring.
    Qh {
        #[command(flatten)]
        input: Input,
        /// Accepted for compatibility; the system is always solved.
        #[arg(long)]
        solve: bool,
        /// Value of the free invariant y3.
        #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
        y3: i64,
        #[arg(long, alias = "report", value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Eigenvalue check of ĉ₁.
    ConjectureO {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
        tolerance: f64,
        #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
        y3: i64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

#[derive(Args, Debug)]
struct Input {
    /// Cartan type preset such as A2, B3, D4, G2.
    #[arg(long = "type", conflicts_with = "cartan_file", required_unless_present = "cartan_file")]
    cartan_type: Option<String>,
    /// File holding a Cartan matrix.
    #[arg(long)]
    cartan_file: Option<PathBuf>,
    /// Comma-separated letters, e.g. `1,2,1`.
    #[arg(long)]
    word: String,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum GraphFormat {
    Json,
    Text,
    Dot,
}

enum Failure {
    Usage(String),
    Domain(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

/// Runs the command line `args` (including the program name).
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(()) => 0,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
        Err(Failure::Domain(e)) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}

fn load_word(input: &Input) -> Result<Word, Failure> {
    let cartan = match (&input.cartan_type, &input.cartan_file) {
        (_, Some(path)) => read_cartan(path)?,
        (Some(name), None) => preset_or_file(name)?,
        (None, None) => return Err(Failure::Usage("one of --type or --cartan-file is required".into())),
    };
    let letters = Word::parse_letters(&input.word).map_err(|e| Failure::Usage(e.to_string()))?;
    Word::new(cartan, letters).map_err(|e| Failure::Usage(e.to_string()))
}

fn read_cartan(path: &Path) -> Result<CartanMatrix, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
    CartanMatrix::parse(&text).map_err(|e| Failure::Usage(e.to_string()))
}

fn preset_or_file(name: &str) -> Result<CartanMatrix, Failure> {
    if let Some(dir) = std::env::var_os(CARTAN_DIR_VAR) {
        let path = Path::new(&dir).join(format!("{name}.cartan"));
        if path.is_file() {
            return read_cartan(&path);
        }
    }
    CartanMatrix::preset(name).map_err(|e| Failure::Usage(e.to_string()))
}

fn parse_class(text: &str, n: usize) -> Result<CurveClass, Failure> {
    let cls: CurveClass = text.parse().map_err(|e: Error| Failure::Usage(e.to_string()))?;
    if cls.len() != n {
        return Err(Failure::Usage(format!("class {cls} needs {n} coordinates")));
    }
    Ok(cls)
}

fn emit(out: &mut dyn Write, text: &str) -> Result<(), Failure> {
    let res = if text.ends_with('\n') {
        out.write_all(text.as_bytes())
    } else {
        writeln!(out, "{text}")
    };
    res.map_err(|e| Failure::Usage(format!("cannot write output: {e}")))
}

fn pretty(v: &impl serde::Serialize) -> String {
    serde_json::to_string_pretty(v).expect("serializable")
}

fn matrix_text(m: &[Vec<String>]) -> String {
    let width = m.iter().flatten().map(|s| s.chars().count()).max().unwrap_or(1);
    m.iter()
        .map(|row| {
            row.iter()
                .map(|s| format!("{s:>width$}"))
                .collect::<Vec<_>>()
                .join(" ")
        })
        .collect::<Vec<_>>()
        .join("\n")
}

fn dispatch(cmd: Command, out: &mut dyn Write) -> Result<(), Failure> {
    match cmd {
        Command::MomentGraph { input, format, out: path } => {
            let word = load_word(&input)?;
            let graph = MomentGraph::build(&word)?;
            let text = match format {
                GraphFormat::Json => graph.to_json(),
                GraphFormat::Text => graph.to_text(),
                GraphFormat::Dot => graph.to_dot(),
            };
            match path {
                Some(p) => std::fs::write(&p, text)
                    .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", p.display()))),
                None => emit(out, &text),
            }
        }
        Command::Cohomology { input, format } => {
            let word = load_word(&input)?;
            let n = word.len();
            let basis = SubwordIndex::basis_order(n);
            let mut mats = Vec::new();
            for j in 1..=n {
                mats.push(multiplication_matrix(&word, &CohClass::divisor(n, j))?);
            }
            let cone = EffectiveCone::build(&word)?;
            let degrees: Vec<i64> = cone.generators().iter().map(|g| deg_q(&word, g)).collect();
            let text = match format {
                Format::Json => pretty(&json!({
                    "word": word.to_string(),
                    "basis": basis.iter().map(ToString::to_string).collect::<Vec<_>>(),
                    "first_chern": first_chern(&word).to_string(),
                    "first_chern_coeffs": first_chern_coeffs(&word),
                    "cone_generators": cone.generators(),
                    "deg_q": degrees,
                    "divisor_matrices": mats,
                })),
                Format::Text => {
                    let mut s = format!(
                        "word {}\nbasis {}\nc1 = {}\ndeg q on cone generators {:?}\n",
                        word,
                        basis.iter().map(|e| format!("σ{e}")).collect::<Vec<_>>().join(" "),
                        first_chern(&word),
                        degrees
                    );
                    for (j, m) in mats.iter().enumerate() {
                        let cells: Vec<Vec<String>> =
                            m.iter().map(|r| r.iter().map(ToString::to_string).collect()).collect();
                        s.push_str(&format!("σ{} ·\n{}\n", SubwordIndex::unit(n, j + 1), matrix_text(&cells)));
                    }
                    s
                }
            };
            emit(out, &text)
        }
        Command::EffCone { input, class, format } => {
            let word = load_word(&input)?;
            let cone = EffectiveCone::build(&word)?;
            let decomposition = match &class {
                Some(c) => {
                    let cls = parse_class(c, word.len())?;
                    let coeffs = cone.is_effective(&cls).ok_or_else(|| Error::NotEffective(cls.to_string()))?;
                    Some((cls, coeffs))
                }
                None => None,
            };
            let text = match format {
                Format::Json => pretty(&json!({
                    "word": word.to_string(),
                    "generators": cone.generators(),
                    "indecomposables": cone.indecomposables(),
                    "decomposition": decomposition.as_ref().map(|(c, k)| json!({"class": c, "coefficients": k})),
                })),
                Format::Text => {
                    let mut s = format!("word {word}\n");
                    for (k, g) in cone.generators().iter().enumerate() {
                        s.push_str(&format!("β{} = {g}\n", k + 1));
                    }
                    if let Some((c, k)) = &decomposition {
                        let terms: Vec<String> = k
                            .iter()
                            .enumerate()
                            .filter(|(_, &x)| x > 0)
                            .map(|(i, &x)| if x == 1 { format!("β{}", i + 1) } else { format!("{x}β{}", i + 1) })
                            .collect();
                        let rhs = if terms.is_empty() { "0".to_string() } else { terms.join(" + ") };
                        s.push_str(&format!("{c} = {rhs}\n"));
                    }
                    s
                }
            };
            emit(out, &text)
        }
        Command::CurveNbhd { input, class, from, format } => {
            let word = load_word(&input)?;
            let cls = parse_class(&class, word.len())?;
            let start: Vec<SubwordIndex> = from
                .split(',')
                .map(|s| s.trim().parse::<SubwordIndex>())
                .collect::<Result<_, _>>()
                .map_err(|e| Failure::Usage(e.to_string()))?;
            if start.iter().any(|e| e.len() != word.len()) {
                return Err(Failure::Usage(format!("fixed points need {} bits", word.len())));
            }
            let graph = MomentGraph::build(&word)?;
            let res = curve_neighborhood(&graph, &start, &cls)?;
            let text = match format {
                Format::Json => pretty(&res),
                Format::Text => {
                    let pts: Vec<String> = res.fixed_points.iter().map(ToString::to_string).collect();
                    let mut s = format!("fixed points {{{}}}\n", pts.join(", "));
                    if let Some(e) = res.matched_subvariety {
                        s.push_str(&format!("equals the fixed points of Z_{e}\n"));
                    }
                    s
                }
            };
            emit(out, &text)
        }
        Command::Qh { input, solve: _, y3, format } => {
            let word = load_word(&input)?;
            let ctx = QhContext::new(&word)?;
            let values = BTreeMap::from([("y3".to_string(), y3)]);
            let (report, _) = run_pipeline(&ctx, &values)?;
            let text = match format {
                Format::Json => pretty(&report),
                Format::Text => report.to_text(),
            };
            emit(out, &text)
        }
        Command::ConjectureO { input, tolerance, y3, format } => {
            if !(tolerance > 0.0) {
                return Err(Failure::Usage("tolerance must be positive".into()));
            }
            let word = load_word(&input)?;
            let values = BTreeMap::from([("y3".to_string(), y3)]);
            let rep = analyze(&word, &values, tolerance)?;
            let text = match format {
                Format::Json => pretty(&rep),
                Format::Text => conjecture_text(&rep),
            };
            emit(out, &text)
        }
    }
}

fn conjecture_text(rep: &bsqh::conjo::ConjectureReport) -> String {
    let mut s = format!("word {}\nfano index {}\n", rep.word, rep.fano_index);
    let cells: Vec<Vec<String>> = rep
        .c1_hat
        .iter()
        .map(|r| r.iter().map(ToString::to_string).collect())
        .collect();
    s.push_str(&format!("c1 hat\n{}\n", matrix_text(&cells)));
    if let Some(m) = rep.published_match {
        s.push_str(&format!("matches published matrix: {m}\n"));
        for d in &rep.mismatches {
            s.push_str(&format!("  {d}\n"));
        }
    }
    let mut spectrum = |label: &str, sp: &bsqh::conjo::SpectralReport| {
        s.push_str(&format!("{label}\n  characteristic polynomial {}\n", sp.char_poly.join(" ")));
        s.push_str(&format!("  square-free {}\n", sp.squarefree));
        for (k, e) in sp.eigenvalues.iter().enumerate() {
            let mark = if k == sp.dominant { " *" } else { "" };
            let im = e.im.strip_prefix('-').map_or(format!("+ {}", e.im), |v| format!("- {v}"));
            s.push_str(&format!("  {} {im}i  |{}|  radius {:.1e}{mark}\n", e.re, e.modulus, e.radius));
        }
        s.push_str(&format!(
            "  dominant real {}, strictly dominant {}, clause 1 {}, clause 2 {}, verdict {}\n",
            sp.dominant_real, sp.strictly_dominant, sp.clause_one, sp.clause_two, sp.verdict
        ));
    };
    spectrum("spectrum", &rep.spectrum);
    if let Some(p) = &rep.published_spectrum {
        spectrum("published matrix spectrum", p);
    }
    s
}
