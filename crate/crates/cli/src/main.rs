//! `infoframe`: check, convert, compose and query finite information structures.
//!
//! Exit codes: 0 pass, 1 verification failure or not derivable, 2 usage or input error,
//! 3 search bound exceeded.

mod io;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use infoframe::axioms::{check_family_with, check_frame_with, check_mapping_with, check_system_with, SystemLevel};
use infoframe::bases::{check_abstract_basis, check_abstract_basis_with, complete, export_dot, extract_basis, AbstractBasis};
use infoframe::category::{compose, rel_equal};
use infoframe::doc::{serialize, Document};
use infoframe::functors::{
    apply_f_morphism_with, apply_f_with, apply_s, apply_s_morphism, apply_t_morphism_with, apply_t_with, apply_w, apply_w_morphism,
    verify_equivalence_with, PairId,
};
use infoframe::logic::{
    apply_c, apply_c_morphism, apply_e_morphism, apply_e_with, check_csl_table_with, derives, parse_formula, parse_formulas,
    verify_logic_metatheorems_with, Csl, Gamma, Sequent,
};
use infoframe::{Error, Frame, Limits, MorphismKind, Report, Structure};

use io::{as_structure, emit, emit_morphism, identity_for, load_morphism, load_valid_structure, read_doc, CliError, CliResult};

#[derive(Parser)]
#[command(name = "infoframe", version, about = "Finite information systems, information frames and conjunctive logics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Candidates one search may visit; for `convert`, sets one consistency family may hold.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    bound: Option<u64>,
    /// Report output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Keep every witness instead of one per axiom.
    #[arg(long, global = true)]
    all_witnesses: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Doc,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Level {
    Scis,
    Cis,
    Cif,
    Sif,
    #[value(name = "sif_t")]
    SifT,
    Csl,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "UPPER")]
enum FunctorArg {
    F,
    S,
    T,
    W,
    C,
    E,
}

#[derive(Clone, Copy, ValueEnum)]
#[value(rename_all = "UPPER")]
enum PairArg {
    PQ,
    ST,
    MN,
    JL,
}

impl From<PairArg> for PairId {
    fn from(p: PairArg) -> PairId {
        match p {
            PairArg::PQ => PairId::PQ,
            PairArg::ST => PairId::ST,
            PairArg::MN => PairId::MN,
            PairArg::JL => PairId::JL,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Check a document against the axioms of its class.
    Check {
        file: PathBuf,
        #[arg(long, value_enum)]
        level: Option<Level>,
    },
    /// Apply a functor to an object or, with endpoint outputs, to a morphism.
    Convert {
        #[arg(long, value_enum, ignore_case = true)]
        functor: FunctorArg,
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Name of the fresh truth token added by W.
        #[arg(long)]
        truth_name: Option<String>,
        /// Where to write the image of a morphism's source.
        #[arg(long)]
        source_out: Option<PathBuf>,
        /// Where to write the image of a morphism's target.
        #[arg(long)]
        target_out: Option<PathBuf>,
    },
    /// Compose two morphisms, the first applied first.
    Compose {
        g: PathBuf,
        h: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// The identity morphism on an object.
    Identity {
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Whether two morphisms between the same objects are the same relation.
    Releq { g: PathBuf, h: PathBuf },
    /// Check a witness pair on an object and, with a morphism, its naturality square.
    Roundtrip {
        #[arg(long, value_enum, ignore_case = true)]
        pair: PairArg,
        file: PathBuf,
        #[arg(long = "with")]
        with: Option<PathBuf>,
    },
    /// Decide a sequent at a stage of the logic a frame presents.
    Prove {
        file: PathBuf,
        #[arg(long)]
        stage: String,
        /// Comma-separated antecedent formulas; `self` for the stage's own antecedent.
        #[arg(long, default_value = "")]
        gamma: String,
        #[arg(long)]
        phi: String,
        #[arg(long)]
        trace: bool,
    },
    /// The rounded-ideal completion of a basis as a DOT order diagram.
    Complete {
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Also draw the way-below relation.
        #[arg(long)]
        way_below: bool,
    },
    /// The abstract basis of a system or frame.
    Basis {
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn limits(cli: &Cli) -> Limits {
    let mut l = Limits { all_witnesses: cli.all_witnesses, ..Limits::default() };
    match (&cli.command, cli.bound) {
        (Command::Convert { .. }, Some(n)) => l.family_bound = usize::try_from(n).unwrap_or(usize::MAX),
        (_, Some(n)) => l.bound = n,
        _ => {}
    }
    l
}

fn run(cli: &Cli) -> CliResult<bool> {
    let lim = limits(cli);
    match &cli.command {
        Command::Check { file, level } => check(cli, file, *level, &lim),
        Command::Convert { functor, file, output, truth_name, source_out, target_out } => {
            convert(*functor, file, output.as_deref(), truth_name.as_deref(), source_out.as_deref(), target_out.as_deref(), &lim)?;
            Ok(true)
        }
        Command::Compose { g, h, output } => {
            let (g, h) = (load_morphism(g, &lim)?, load_morphism(h, &lim)?);
            let gh = compose(&g.morphism, &h.morphism)?;
            emit_morphism(&gh, &g.source, &h.target, output.as_deref())?;
            Ok(true)
        }
        Command::Identity { file, output } => {
            let is_logic = matches!(read_doc(file)?, Document::Logic(_));
            let s = load_valid_structure(file, &lim)?;
            let path = std::fs::canonicalize(file).map_err(|e| CliError::Io(file.clone(), e))?;
            emit_morphism(&identity_for(is_logic, &s)?, &path, &path, output.as_deref())?;
            Ok(true)
        }
        Command::Releq { g, h } => {
            let (g, h) = (load_morphism(g, &lim)?, load_morphism(h, &lim)?);
            let equal = rel_equal(&g.morphism, &h.morphism)?;
            println!("{}", if equal { "equal" } else { "unequal" });
            Ok(equal)
        }
        Command::Roundtrip { pair, file, with } => {
            let object = load_valid_structure(file, &lim)?;
            let morphisms = match with {
                Some(m) => vec![load_morphism(m, &lim)?.morphism],
                None => Vec::new(),
            };
            let report = verify_equivalence_with((*pair).into(), &[object], &morphisms, &lim)?;
            Ok(print_report(cli, &report))
        }
        Command::Prove { file, stage, gamma, phi, trace } => prove(file, stage, gamma, phi, *trace, &lim),
        Command::Complete { file, output, way_below } => {
            let b = basis_of(read_doc(file)?, &lim)?;
            let report = check_abstract_basis(&b);
            if !report.passed() {
                eprint!("{} is not an abstract basis:\n{}", file.display(), report.to_text());
                return Ok(false);
            }
            emit(output.as_deref(), &export_dot(&complete(&b)?, *way_below))?;
            Ok(true)
        }
        Command::Basis { file, output } => {
            let b = basis_of(read_doc(file)?, &lim)?;
            emit(output.as_deref(), &serialize(&Document::Basis(b)))?;
            Ok(true)
        }
    }
}

fn print_report(cli: &Cli, r: &Report) -> bool {
    match cli.format {
        Format::Text => print!("{}", r.to_text()),
        Format::Doc => print!("{}", r.to_document()),
    }
    r.passed()
}

fn check(cli: &Cli, file: &Path, level: Option<Level>, lim: &Limits) -> CliResult<bool> {
    let doc = read_doc(file)?;
    let mismatch = |kind: &str| CliError::Core(Error::Type(format!("a {kind} document cannot be checked at this level")));
    let report = match doc {
        Document::System(s) => match level.unwrap_or(Level::Cis) {
            Level::Scis => check_system_with(&s, SystemLevel::Scis, lim)?,
            Level::Cis => check_system_with(&s, SystemLevel::Cis, lim)?,
            _ => return Err(mismatch("system")),
        },
        Document::Frame(f) => match level.unwrap_or(Level::Cif) {
            Level::Cif => check_frame_with(&f, false, false, lim)?,
            Level::Sif => check_frame_with(&f, true, false, lim)?,
            Level::SifT => check_frame_with(&f, true, true, lim)?,
            Level::Csl => {
                let mut r = check_frame_with(&f, true, true, lim)?;
                if r.passed() {
                    r = verify_logic_metatheorems_with(&Csl::new(f)?, lim)?;
                }
                r
            }
            _ => return Err(mismatch("frame")),
        },
        Document::Logic(t) => match level.unwrap_or(Level::Csl) {
            Level::Csl => check_csl_table_with(&t, lim)?,
            _ => return Err(mismatch("logic")),
        },
        Document::Basis(b) => match level {
            None => check_abstract_basis_with(&b, lim),
            Some(_) => return Err(mismatch("basis")),
        },
        Document::Morphism(_) => {
            let m = load_morphism(file, lim)?.morphism;
            match m.kind() {
                MorphismKind::Mapping => check_mapping_with(&m, lim)?,
                _ => check_family_with(&m, m.kind() == MorphismKind::Global || matches!(level, Some(Level::SifT | Level::Csl)), lim)?,
            }
        }
    };
    Ok(print_report(cli, &report))
}

fn convert(
    functor: FunctorArg,
    file: &Path,
    output: Option<&Path>,
    truth_name: Option<&str>,
    source_out: Option<&Path>,
    target_out: Option<&Path>,
    lim: &Limits,
) -> CliResult<()> {
    let doc = read_doc(file)?;
    if !matches!(doc, Document::Morphism(_)) {
        let image = convert_object(functor, doc, truth_name, lim)?;
        return emit(output, &serialize(&image));
    }
    let (Some(so), Some(to)) = (source_out, target_out) else {
        return Err(CliError::Input("converting a morphism needs --source-out and --target-out".into()));
    };
    let h = load_morphism(file, lim)?.morphism;
    let image = match functor {
        FunctorArg::F => apply_f_morphism_with(&h, lim)?,
        FunctorArg::S => apply_s_morphism(&h)?,
        FunctorArg::T => apply_t_morphism_with(&h, lim)?,
        FunctorArg::W => apply_w_morphism(&h, truth_name)?,
        FunctorArg::C => apply_c_morphism(&h)?,
        FunctorArg::E => apply_e_morphism(&h)?,
    };
    let as_logic = functor == FunctorArg::C;
    emit(Some(so), &serialize(&object_doc(image.source(), as_logic)?))?;
    emit(Some(to), &serialize(&object_doc(image.target(), as_logic)?))?;
    let (so, to) = (canonical(so)?, canonical(to)?);
    emit_morphism(&image, &so, &to, output)
}

fn canonical(p: &Path) -> CliResult<PathBuf> {
    std::fs::canonicalize(p).map_err(|e| CliError::Io(p.to_path_buf(), e))
}

fn object_doc(s: &Arc<Structure>, as_logic: bool) -> CliResult<Document> {
    Ok(match &**s {
        Structure::Frame(f) if as_logic => Document::Logic(apply_c(f.clone())?.table()),
        Structure::Frame(f) => Document::Frame(f.clone()),
        Structure::System(sys) => Document::System(sys.clone()),
    })
}

fn convert_object(functor: FunctorArg, doc: Document, truth_name: Option<&str>, lim: &Limits) -> CliResult<Document> {
    if truth_name.is_some() && functor != FunctorArg::W {
        return Err(CliError::Input("--truth-name only applies to W".into()));
    }
    Ok(match functor {
        FunctorArg::F => Document::Frame(apply_f_with(&doc.into_system()?, lim)?),
        FunctorArg::S => Document::System(apply_s(&doc.into_frame()?)?),
        FunctorArg::T => Document::Frame(apply_t_with(&doc.into_frame()?, lim)?),
        FunctorArg::W => Document::Frame(apply_w(&doc.into_frame()?, truth_name)?),
        FunctorArg::C => Document::Logic(apply_c(doc.into_frame()?)?.table()),
        FunctorArg::E => match doc {
            Document::Logic(t) => Document::Frame(apply_e_with(&t, lim)?),
            other => return Err(CliError::Core(Error::Type(format!("expected a logic document, found {}", other.kind())))),
        },
    })
}

fn frame_of(doc: Document, lim: &Limits) -> CliResult<Frame> {
    match as_structure(doc, lim)? {
        Structure::Frame(f) => Ok(f),
        Structure::System(_) => Err(CliError::Core(Error::Type("expected a frame or logic document, found system".into()))),
    }
}

fn prove(file: &Path, stage: &str, gamma: &str, phi: &str, trace: bool, lim: &Limits) -> CliResult<bool> {
    let frame = frame_of(read_doc(file)?, lim)?;
    let p = frame
        .tokens()
        .iter()
        .find(|t| t.to_string() == stage)
        .cloned()
        .ok_or_else(|| CliError::Core(Error::UnknownToken(format!("no stage {stage}"))))?;
    let antecedent = match parse_formulas(gamma, &frame)? {
        None => Gamma::Own,
        Some(fs) => Gamma::formulas(fs),
    };
    let consequent = parse_formula(phi, &frame)?;
    let l = Csl::new(frame)?;
    let sequent = Sequent::new(p, antecedent, consequent);
    let d = derives(&l, &sequent, trace)?;
    println!("{}: {sequent}", if d.holds { "derivable" } else { "not derivable" });
    if let Some(t) = d.trace {
        print!("{t}");
    }
    Ok(d.holds)
}

fn basis_of(doc: Document, lim: &Limits) -> CliResult<AbstractBasis> {
    Ok(match doc {
        Document::Basis(b) => b,
        Document::System(s) => extract_basis(&s)?,
        Document::Frame(f) => extract_basis(&apply_s(&f)?)?,
        Document::Logic(t) => extract_basis(&apply_s(&apply_e_with(&t, lim)?)?)?,
        Document::Morphism(_) => return Err(CliError::Core(Error::Type("expected a basis, system or frame document, found morphism".into()))),
    })
}
