use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use centeredkit::categories::{coreflect, initial_structure, reflect, COREFLECTIONS, REFLECTIONS};
use centeredkit::coincidence::{
    centered_functions_at, germ_partition, FiniteFunction, FunctionCap,
};
use centeredkit::document::{
    CollectionDocument, ConeDocument, Document, DocumentError, SequenceDocument, SpaceDocument,
};
use centeredkit::setalgebra::{
    cap_closure, classify_collection, generated_filter, is_ultrafilter, up_closure,
    CollectionClass, SubsetCollection, Universe,
};
use centeredkit::spaces::{
    classify_space, converges, point_classes, validate_space, CenteredSpace, SpaceClass,
};
use centeredkit::suites::{germ_experiment, run_suite, FunctionSet, SuiteId, SuiteOptions};
use centeredkit::Error;

/// Finite rasters, filterbases, filters and centered spaces.
#[derive(Parser)]
#[command(name = "centeredkit", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Op {
    Up,
    Cap,
    Filter,
    Reflect,
    Coreflect,
    Initial,
}

#[derive(Subcommand)]
enum Command {
    /// Print a collection, space, sequence or cone document in canonical form.
    Canonical { file: PathBuf },
    /// Class flags of a collection, or per-point flags and the class of a space.
    Classify {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Run an exhaustive verification suite.
    Verify {
        #[arg(long)]
        suite: String,
        #[arg(long)]
        max_points: Option<usize>,
        #[arg(long)]
        max_colors: Option<usize>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Apply a closure or categorical construction; output is a document.
    Transform {
        #[arg(value_enum)]
        op: Op,
        /// Collection or space file; a cone file for `initial`.
        file: PathBuf,
        /// Target category for reflect, coreflect and initial.
        #[arg(long)]
        category: Option<SpaceClass>,
        /// Source category for reflect and coreflect; inferred when absent.
        #[arg(long)]
        from: Option<SpaceClass>,
    },
    /// Whether an eventually periodic sequence converges to a point.
    Converges {
        space: PathBuf,
        sequence: PathBuf,
        #[arg(long)]
        point: usize,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Germ classes of functions centered at a point.
    Germs {
        space: PathBuf,
        #[arg(long)]
        point: usize,
        /// Size of the target; the target is discrete unless --target is given.
        #[arg(long, default_value_t = 2)]
        codomain: usize,
        /// Target space file, overriding --codomain.
        #[arg(long)]
        target: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Compare "ν(x) is a filterbase" with the weak relation on a chosen
    /// function set, over every space of a given size.
    Experiment {
        #[arg(long, default_value_t = 2)]
        points: usize,
        #[arg(long, default_value_t = 2)]
        codomain: usize,
        /// all, centered-at or everywhere.
        #[arg(long, default_value = "centered-at")]
        functions: FunctionSet,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
}

/// A command failure, carrying its exit code.
enum Failure {
    Verification(String),
    Input(String),
    Cap(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Verification(_) => 1,
            Failure::Input(_) => 2,
            Failure::Cap(_) => 3,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::CapExceeded { .. } => Failure::Cap(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

type CmdResult = Result<String, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(failure) => {
            let code = failure.code();
            match failure {
                // the report itself is the diagnostic
                Failure::Verification(out) => print!("{out}"),
                Failure::Input(msg) => eprintln!("error: {msg}"),
                Failure::Cap(msg) => eprintln!("refused: {msg}"),
            }
            ExitCode::from(code)
        }
    }
}

fn run(command: Command) -> CmdResult {
    match command {
        Command::Canonical { file } => canonical(&file),
        Command::Classify { file, format } => classify(&file, format),
        Command::Verify {
            suite,
            max_points,
            max_colors,
            format,
        } => verify(
            &suite,
            SuiteOptions {
                max_points,
                max_colors,
            },
            format,
        ),
        Command::Transform {
            op,
            file,
            category,
            from,
        } => transform(op, &file, category, from),
        Command::Converges {
            space,
            sequence,
            point,
            format,
        } => converges_cmd(&space, &sequence, point, format),
        Command::Germs {
            space,
            point,
            codomain,
            target,
            format,
        } => germs(&space, point, codomain, target.as_deref(), format),
        Command::Experiment {
            points,
            codomain,
            functions,
            format,
        } => {
            let report = germ_experiment(points, codomain, functions)?;
            Ok(match format {
                Format::Json => to_json(&report),
                Format::Text => format!(
                    "points: {}\ncodomain: {}\nfunctions: {}\ncases: {}\n\
                     filterbase but not a nontrivial equivalence: {}\n\
                     nontrivial equivalence but not a filterbase: {}\n{}",
                    report.points,
                    report.colors,
                    report.function_set,
                    report.cases,
                    report.filterbase_but_not_equivalence,
                    report.equivalence_but_not_filterbase,
                    report
                        .first_mismatch
                        .as_ref()
                        .map(|m| format!("first mismatch: {m}\n"))
                        .unwrap_or_default()
                ),
            })
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn doc_error(path: &Path, e: DocumentError) -> Failure {
    Failure::Input(format!("{}: {e}", path.display()))
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn yes(flag: bool) -> &'static str {
    if flag {
        "yes"
    } else {
        "no"
    }
}

fn flags(c: &CollectionClass) -> String {
    format!(
        "raster: {}, filterbase: {}, filter: {}",
        yes(c.is_raster),
        yes(c.is_filterbase),
        yes(c.is_filter)
    )
}

fn load_space(path: &Path) -> Result<CenteredSpace, Failure> {
    let doc = SpaceDocument::parse(&read(path)?).map_err(|e| doc_error(path, e))?;
    let space = doc.to_space().map_err(|e| doc_error(path, e))?;
    validate_space(&space).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    Ok(space)
}

fn canonical(path: &Path) -> CmdResult {
    let text = read(path)?;
    let value: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| doc_error(path, DocumentError::from(e)))?;
    let has = |key: &str| value.get(key).is_some();
    let out = if has("legs") {
        ConeDocument::parse(&text).map(|d| d.to_text())
    } else if has("prefix") || has("cycle") {
        SequenceDocument::parse(&text).map(|d| d.to_text())
    } else {
        Document::parse(&text).map(|d| d.to_text())
    };
    out.map_err(|e| doc_error(path, e))
}

fn classify(path: &Path, format: Format) -> CmdResult {
    let doc = Document::parse(&read(path)?).map_err(|e| doc_error(path, e))?;
    match doc {
        Document::Collection(doc) => {
            let p = doc.to_collection().map_err(|e| doc_error(path, e))?;
            let class = classify_collection(&p).unwrap_or_default();
            let ultra = is_ultrafilter(&p);
            Ok(match format {
                Format::Json => to_json(&json!({
                    "raster": class.is_raster,
                    "filterbase": class.is_filterbase,
                    "filter": class.is_filter,
                    "ultrafilter": ultra,
                })),
                Format::Text => format!("{}\nultrafilter: {}\n", flags(&class), yes(ultra)),
            })
        }
        Document::Space(doc) => {
            let s = doc.to_space().map_err(|e| doc_error(path, e))?;
            let class = classify_space(&s)
                .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
            let points = point_classes(&s);
            Ok(match format {
                Format::Json => to_json(&json!({
                    "points": points.iter().enumerate().map(|(x, c)| json!({
                        "point": x,
                        "raster": c.is_raster,
                        "filterbase": c.is_filterbase,
                        "filter": c.is_filter,
                    })).collect::<Vec<_>>(),
                    "class": class,
                })),
                Format::Text => {
                    let mut out = String::new();
                    for (x, c) in points.iter().enumerate() {
                        out.push_str(&format!("point {x}: {}\n", flags(c)));
                    }
                    out.push_str(&format!("class: {class}\n"));
                    out
                }
            })
        }
    }
}

fn verify(suite: &str, options: SuiteOptions, format: Format) -> CmdResult {
    let id: SuiteId = suite.parse().map_err(Failure::Input)?;
    let start = Instant::now();
    let report = run_suite(id, options)?;
    eprintln!("wall time: {:.3} s", start.elapsed().as_secs_f64());
    let out = match format {
        Format::Json => to_json(&report),
        Format::Text => report.to_text(),
    };
    if report.passed() {
        Ok(out)
    } else {
        Err(Failure::Verification(out))
    }
}

fn pointwise(
    doc: Document,
    path: &Path,
    op: impl Fn(&SubsetCollection) -> Result<SubsetCollection, Error>,
) -> CmdResult {
    match doc {
        Document::Collection(doc) => {
            let p = doc.to_collection().map_err(|e| doc_error(path, e))?;
            Ok(CollectionDocument::from_collection(&op(&p)?).to_text())
        }
        Document::Space(doc) => {
            let s = doc.to_space().map_err(|e| doc_error(path, e))?;
            let nu = s
                .structure()
                .iter()
                .map(&op)
                .collect::<Result<Vec<_>, _>>()?;
            let out = CenteredSpace::from_raw(s.universe(), nu)?;
            Ok(SpaceDocument::from_space(&out).to_text())
        }
    }
}

/// Picks the source category of a supported arrow into `into`.
fn infer_from(
    s: &CenteredSpace,
    into: SpaceClass,
    arrows: &[(SpaceClass, SpaceClass)],
) -> Option<SpaceClass> {
    let candidates: Vec<SpaceClass> = arrows
        .iter()
        .filter(|(_, to)| *to == into)
        .map(|(from, _)| *from)
        .collect();
    candidates
        .iter()
        .copied()
        .find(|from| from.contains(s))
        .or_else(|| candidates.first().copied())
}

fn transform(
    op: Op,
    path: &Path,
    category: Option<SpaceClass>,
    from: Option<SpaceClass>,
) -> CmdResult {
    let text = read(path)?;
    let need_category = || {
        category.ok_or_else(|| Failure::Input("--category is required for this operation".into()))
    };
    match op {
        Op::Up => pointwise(
            Document::parse(&text).map_err(|e| doc_error(path, e))?,
            path,
            |p| Ok(up_closure(p)),
        ),
        Op::Cap => pointwise(
            Document::parse(&text).map_err(|e| doc_error(path, e))?,
            path,
            |p| Ok(cap_closure(p)),
        ),
        Op::Filter => pointwise(
            Document::parse(&text).map_err(|e| doc_error(path, e))?,
            path,
            generated_filter,
        ),
        Op::Reflect | Op::Coreflect => {
            let into = need_category()?;
            let s = load_space(path)?;
            let arrows: &[(SpaceClass, SpaceClass)] = if op == Op::Reflect {
                &REFLECTIONS
            } else {
                &COREFLECTIONS
            };
            let from = match from.or_else(|| infer_from(&s, into, arrows)) {
                Some(f) => f,
                None => {
                    return Err(Failure::Input(format!(
                        "no supported arrow into {into}; supported: {}",
                        arrows
                            .iter()
                            .map(|(a, b)| format!("{a}->{b}"))
                            .collect::<Vec<_>>()
                            .join(", ")
                    )))
                }
            };
            let out = if op == Op::Reflect {
                reflect(&s, from, into)?
            } else {
                coreflect(&s, from, into)?
            };
            Ok(SpaceDocument::from_space(&out).to_text())
        }
        Op::Initial => {
            let class = need_category()?;
            let doc = ConeDocument::parse(&text).map_err(|e| doc_error(path, e))?;
            let cone = doc.to_cone().map_err(|e| doc_error(path, e))?;
            Ok(SpaceDocument::from_space(&initial_structure(&cone, class)?).to_text())
        }
    }
}

fn converges_cmd(space: &Path, sequence: &Path, point: usize, format: Format) -> CmdResult {
    let s = load_space(space)?;
    let doc = SequenceDocument::parse(&read(sequence)?).map_err(|e| doc_error(sequence, e))?;
    let seq = doc
        .to_sequence(s.universe())
        .map_err(|e| doc_error(sequence, e))?;
    let verdict = converges(&s, &seq, point)?;
    Ok(match format {
        Format::Json => to_json(&json!({ "point": point, "converges": verdict })),
        Format::Text => format!("converges: {}\n", yes(verdict)),
    })
}

fn germs(
    space: &Path,
    point: usize,
    codomain: usize,
    target: Option<&Path>,
    format: Format,
) -> CmdResult {
    let s = load_space(space)?;
    let target = match target {
        Some(path) => load_space(path)?,
        None => CenteredSpace::discrete(Universe::new(codomain)?),
    };
    let cap = FunctionCap::default();
    let classes = germ_partition(&s, point, &target, cap)?;
    let total = centered_functions_at(&s, point, &target, cap)?.len();
    let values = |f: &FiniteFunction| f.values().to_vec();
    Ok(match format {
        Format::Json => to_json(&json!({
            "point": point,
            "functions": total,
            "classes": classes
                .iter()
                .map(|c| c.iter().map(values).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
        })),
        Format::Text => {
            let mut out = format!(
                "point: {point}\nfunctions: {total}\nclasses: {}\n",
                classes.len()
            );
            for (i, class) in classes.iter().enumerate() {
                let members: Vec<String> =
                    class.iter().map(|f| format!("{:?}", f.values())).collect();
                out.push_str(&format!(
                    "  class {} ({}): {}\n",
                    i + 1,
                    class.len(),
                    members.join(" ")
                ));
            }
            out
        }
    })
}
