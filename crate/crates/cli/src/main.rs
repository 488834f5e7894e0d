mod float_import;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use loopbraid::{
    alpha_to_dense, canonical_labelling, count_series, enum_labelled, enum_multisets, enum_signed,
    gauge_pair, interrogate, make_recipe, random_point, restrict, shift_embed, verify_pair_with,
    AlphaForm, DenseMatrix, Error, Execution, Gauge, LabelledShape, Method, Pair, ParamPoint,
    SignedShape,
};
use serde::{Deserialize, Serialize};

/// Exact construction, verification and classification of loop braid
/// representations.
#[derive(Parser)]
#[command(name = "loopbraid", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
    Tsv,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Dense,
    Subsets,
    Both,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Dense => Method::Dense,
            MethodArg::Subsets => Method::Subsets,
            MethodArg::Both => Method::Both,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// List the shapes of rank N.
    Enumerate {
        #[arg(long)]
        n: usize,
        /// Signed shapes.
        #[arg(long, conflicts_with = "labelled")]
        signed: bool,
        /// Labelled shapes.
        #[arg(long)]
        labelled: bool,
        /// Allow labelled enumeration above N = 8.
        #[arg(long)]
        force: bool,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Print the number of shapes for each rank up to MAX.
    Count {
        #[arg(long)]
        max: usize,
        #[arg(long)]
        signed: bool,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Build the recipe pair for a labelled shape.
    Construct {
        /// Shape file (JSON or text form such as `(<1 2/3>,)`), or the text form itself.
        #[arg(long)]
        shape: String,
        /// Parameter point file.
        #[arg(long, conflicts_with = "random", required_unless_present = "random")]
        params: Option<PathBuf>,
        /// Sample a parameter point.
        #[arg(long)]
        random: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Check the relations; exit 0 iff all hold.
    Verify {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "subsets")]
        method: MethodArg,
        /// Read floating-point scalars and round them to fractions.
        #[arg(long, requires = "eps")]
        float_import: bool,
        /// Largest accepted rounding error for --float-import.
        #[arg(long, requires = "float_import")]
        eps: Option<f64>,
    },
    /// Recover shape, parameters and gauge of a representation.
    Classify { file: PathBuf },
    /// Apply a diagonal gauge to both forms.
    Gauge {
        file: PathBuf,
        /// Gauge file: `[{"i":1,"j":2,"m":{"re":"3","im":"0"}}, ...]`.
        #[arg(long)]
        m: PathBuf,
    },
    /// Restrict along an injective map, e.g. `--map 3,1`.
    Restrict {
        file: PathBuf,
        #[arg(long, value_delimiter = ',')]
        map: Vec<usize>,
    },
    /// Write the dense matrices at width 2, or their two embeddings at width 3.
    ExportDense {
        file: PathBuf,
        #[arg(long, value_parser = clap::value_parser!(u8).range(2..=3))]
        width: u8,
    },
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Metadata {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    shape: Option<LabelledShape>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    params: Option<ParamPoint>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PairFile {
    #[serde(rename = "S")]
    s: AlphaForm,
    #[serde(rename = "R")]
    r: AlphaForm,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    metadata: Option<Metadata>,
}

impl PairFile {
    fn bare(pair: Pair) -> Self {
        PairFile { s: pair.s, r: pair.r, metadata: None }
    }

    fn pair(&self) -> Result<Pair, Failure> {
        Ok(Pair::new(self.s.clone(), self.r.clone())?)
    }
}

/// A command failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure { code: 2, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::NotARepresentation | Error::FTypeDetected { .. } | Error::Unclassifiable { .. } => 1,
            Error::InconsistentParameters(_) | Error::OracleDisagreement => 3,
            _ => 2,
        };
        Failure { code, message: e.to_string() }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn parse_json<T: serde::de::DeserializeOwned>(text: &str, what: &str) -> Result<T, Failure> {
    serde_json::from_str(text).map_err(|e| Failure::input(format!("malformed {what}: {e}")))
}

fn read_pair_file(path: &Path) -> Result<PairFile, Failure> {
    parse_json(&read(path)?, "pair file")
}

fn json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("serializable")
}

/// A shape from JSON (labelled or signed) or the text form, read from a file
/// when the argument names one.
fn load_shape(arg: &str) -> Result<LabelledShape, Failure> {
    let text = if Path::new(arg).is_file() { read(Path::new(arg))? } else { arg.to_string() };
    let text = text.trim();
    if text.starts_with('{') {
        if let Ok(l) = serde_json::from_str::<LabelledShape>(text) {
            return Ok(l);
        }
        let signed: SignedShape = parse_json(text, "shape")?;
        return Ok(canonical_labelling(&signed));
    }
    text.parse().map_err(|e: Error| Failure::input(format!("malformed shape: {e}")))
}

fn table(rows: Vec<(String, String)>, format: Format, values: Vec<serde_json::Value>) -> String {
    match format {
        Format::Text => rows.into_iter().map(|(_, v)| v).collect::<Vec<_>>().join("\n"),
        Format::Tsv => rows.into_iter().map(|(k, v)| format!("{k}\t{v}")).collect::<Vec<_>>().join("\n"),
        Format::Json => json(&values),
    }
}

fn run(command: Command) -> Result<(String, u8), Failure> {
    match command {
        Command::Enumerate { n, signed, labelled, force, format } => {
            let (rows, values): (Vec<_>, Vec<_>) = if labelled {
                if n > 8 && !force {
                    return Err(Failure::input("labelled enumeration above N = 8 needs --force"));
                }
                enum_labelled(n)?
                    .into_iter()
                    .enumerate()
                    .map(|(k, l)| ((k.to_string(), l.to_string()), serde_json::to_value(&l).unwrap()))
                    .unzip()
            } else if signed {
                enum_signed(n)
                    .into_iter()
                    .enumerate()
                    .map(|(k, s)| ((k.to_string(), s.to_string()), serde_json::to_value(&s).unwrap()))
                    .unzip()
            } else {
                enum_multisets(n)
                    .into_iter()
                    .enumerate()
                    .map(|(k, m)| {
                        let pairs: Vec<[usize; 2]> = m.expanded().iter().map(|c| [c.top, c.bottom]).collect();
                        ((k.to_string(), m.to_string()), serde_json::to_value(pairs).unwrap())
                    })
                    .unzip()
            };
            Ok((table(rows, format, values), 0))
        }
        Command::Count { max, signed, format } => {
            let (unsigned, signed_counts) = count_series(max);
            let series = if signed { signed_counts } else { unsigned };
            let out = match format {
                Format::Text => series.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" "),
                _ => {
                    let rows = series.iter().enumerate().map(|(k, x)| (k.to_string(), x.to_string())).collect();
                    let values = series
                        .iter()
                        .enumerate()
                        .map(|(k, x)| serde_json::json!({"n": k, "count": x.to_string()}))
                        .collect();
                    table(rows, format, values)
                }
            };
            Ok((out, 0))
        }
        Command::Construct { shape, params, random: _, seed } => {
            let lambda = load_shape(&shape)?;
            let (x, seed) = match params {
                Some(path) => (parse_json::<ParamPoint>(&read(&path)?, "parameter file")?, None),
                None => (random_point(&lambda, seed), Some(seed)),
            };
            let pair = make_recipe(&lambda, &x)?;
            let file = PairFile {
                s: pair.s,
                r: pair.r,
                metadata: Some(Metadata { shape: Some(lambda), params: Some(x), seed }),
            };
            Ok((json(&file), 0))
        }
        Command::Verify { file, method, float_import, eps } => {
            let text = read(&file)?;
            let pair_file: PairFile = if float_import {
                let mut doc: serde_json::Value = parse_json(&text, "pair file")?;
                float_import::round_pair_file(&mut doc, eps.expect("required with --float-import"))
                    .map_err(Failure::input)?;
                serde_json::from_value(doc).map_err(|e| Failure::input(format!("malformed pair file: {e}")))?
            } else {
                parse_json(&text, "pair file")?
            };
            let report = verify_pair_with(&pair_file.pair()?, method.into(), Execution::default())?;
            Ok((json(&report), if report.all_hold() { 0 } else { 1 }))
        }
        Command::Classify { file } => {
            let classification = interrogate(&read_pair_file(&file)?.pair()?)?;
            Ok((json(&classification), 0))
        }
        Command::Gauge { file, m } => {
            let pair = read_pair_file(&file)?.pair()?;
            let gauge: Gauge = parse_json(&read(&m)?, "gauge file")?;
            Ok((json(&PairFile::bare(gauge_pair(&pair, &gauge)?)), 0))
        }
        Command::Restrict { file, map } => {
            let pair = read_pair_file(&file)?.pair()?;
            Ok((json(&PairFile::bare(restrict(&pair, &map)?)), 0))
        }
        Command::ExportDense { file, width } => {
            let pair = read_pair_file(&file)?.pair()?;
            let n = pair.rank();
            let (s, r) = (alpha_to_dense(&pair.s), alpha_to_dense(&pair.r));
            let out: Vec<(&str, DenseMatrix)> = if width == 2 {
                vec![("S", s), ("R", r)]
            } else {
                vec![
                    ("S1", shift_embed(&s, 1, n)?),
                    ("S2", shift_embed(&s, 2, n)?),
                    ("R1", shift_embed(&r, 1, n)?),
                    ("R2", shift_embed(&r, 2, n)?),
                ]
            };
            let mut doc = serde_json::Map::new();
            doc.insert("N".into(), n.into());
            doc.insert("width".into(), width.into());
            for (k, m) in out {
                doc.insert(k.into(), serde_json::to_value(&m).unwrap());
            }
            Ok((json(&doc), 0))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok((out, code)) => {
            // A closed downstream pipe is not an error of ours.
            let _ = writeln!(std::io::stdout().lock(), "{out}");
            ExitCode::from(code)
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
