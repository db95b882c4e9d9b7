//! Document loading, endpoint resolution and artifact output.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use infoframe::axioms::{check_frame_with, check_system_with, SystemLevel};
use infoframe::doc::{parse_document, serialize, Document, MorphismDoc};
use infoframe::logic::{apply_c_morphism, apply_e_with};
use infoframe::{Error, Limits, Morphism, MorphismKind, Structure};

#[derive(Debug)]
pub enum CliError {
    Core(Error),
    Io(PathBuf, std::io::Error),
    Input(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(p, e) => write!(f, "{}: {e}", p.display()),
            CliError::Input(m) => f.write_str(m),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(Error::Bound(_)) => 3,
            CliError::Core(Error::InterpFail { .. }) => 1,
            _ => 2,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

pub fn read_doc(path: &Path) -> CliResult<Document> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Io(path.to_path_buf(), e))?;
    parse_document(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

/// Frames and systems load as themselves; a logic document loads as the frame it presents.
pub fn as_structure(doc: Document, limits: &Limits) -> CliResult<Structure> {
    match doc {
        Document::Logic(t) => Ok(Structure::Frame(apply_e_with(&t, limits)?)),
        other => Ok(other.into_structure()?),
    }
}

/// Loads an object and refuses it unless it satisfies the axioms of its base category.
pub fn load_valid_structure(path: &Path, limits: &Limits) -> CliResult<Arc<Structure>> {
    let s = as_structure(read_doc(path)?, limits)?;
    let report = match &s {
        Structure::System(sys) => check_system_with(sys, SystemLevel::Scis, limits)?,
        Structure::Frame(f) => check_frame_with(f, false, false, limits)?,
    };
    if !report.passed() {
        return Err(CliError::Input(format!("{} is not a valid {}:\n{}", path.display(), kind_name(&s), report.to_text())));
    }
    Ok(Arc::new(s))
}

fn kind_name(s: &Structure) -> &'static str {
    match s {
        Structure::System(_) => "information system",
        Structure::Frame(_) => "information frame",
    }
}

/// A morphism together with the files its endpoints were read from.
pub struct Loaded {
    pub morphism: Morphism,
    pub source: PathBuf,
    pub target: PathBuf,
}

/// Endpoint paths resolve against the morphism document's own directory.
pub fn load_morphism(path: &Path, limits: &Limits) -> CliResult<Loaded> {
    let md = match read_doc(path)? {
        Document::Morphism(m) => m,
        other => return Err(CliError::Core(Error::Type(format!("{}: expected a morphism document, found {}", path.display(), other.kind())))),
    };
    let base = path.parent().unwrap_or(Path::new("."));
    let source = absolute(&base.join(&md.source))?;
    let target = absolute(&base.join(&md.target))?;
    let (s, t) = (load_valid_structure(&source, limits)?, load_valid_structure(&target, limits)?);
    let morphism = md.resolve(s, t)?;
    Ok(Loaded { morphism, source, target })
}

fn absolute(p: &Path) -> CliResult<PathBuf> {
    fs::canonicalize(p).map_err(|e| CliError::Io(p.to_path_buf(), e))
}

/// How `p` should be referenced from a document written to `out`: relative when it sits
/// below the output's directory, absolute otherwise and on standard output.
pub fn reference(p: &Path, out: Option<&Path>) -> CliResult<String> {
    let Some(out) = out else { return Ok(p.to_string_lossy().into_owned()) };
    let dir = match out.parent() {
        Some(d) if !d.as_os_str().is_empty() => absolute(d)?,
        _ => absolute(Path::new("."))?,
    };
    Ok(match p.strip_prefix(&dir) {
        Ok(rel) => rel.to_string_lossy().into_owned(),
        Err(_) => p.to_string_lossy().into_owned(),
    })
}

pub fn emit(out: Option<&Path>, text: &str) -> CliResult<()> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| CliError::Io(p.to_path_buf(), e)),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Writes a morphism document whose endpoints are the given files.
pub fn emit_morphism(m: &Morphism, source: &Path, target: &Path, out: Option<&Path>) -> CliResult<()> {
    let md = MorphismDoc::of(m, &reference(source, out)?, &reference(target, out)?);
    emit(out, &serialize(&Document::Morphism(md)))
}

/// Identities on logics are global morphisms.
pub fn identity_for(doc_is_logic: bool, s: &Arc<Structure>) -> CliResult<Morphism> {
    let id = infoframe::category::identity_of(s)?;
    Ok(if doc_is_logic && id.kind() == MorphismKind::Family { apply_c_morphism(&id)? } else { id })
}
