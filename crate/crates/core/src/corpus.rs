//! The bundled fixture documents, parsed on demand.

use std::sync::Arc;

use crate::bases::AbstractBasis;
use crate::doc::{parse_document, Document};
use crate::logic::CslTable;
use crate::model::{Frame, InfoSystem, Morphism, Structure};

/// Every bundled document as `(file name, text)`.
pub const DOCUMENTS: &[(&str, &str)] = &[
    ("fix1.doc", include_str!("../fixtures/fix1.doc")),
    ("fix3.doc", include_str!("../fixtures/fix3.doc")),
    ("fix4.doc", include_str!("../fixtures/fix4.doc")),
    ("fixbad_w.doc", include_str!("../fixtures/fixbad_w.doc")),
    ("fixbad_s.doc", include_str!("../fixtures/fixbad_s.doc")),
    ("fork.doc", include_str!("../fixtures/fork.doc")),
    ("two_point.doc", include_str!("../fixtures/two_point.doc")),
    ("single.doc", include_str!("../fixtures/single.doc")),
    ("loop.doc", include_str!("../fixtures/loop.doc")),
    ("sys1.doc", include_str!("../fixtures/sys1.doc")),
    ("sys2.doc", include_str!("../fixtures/sys2.doc")),
    ("sys3.doc", include_str!("../fixtures/sys3.doc")),
    ("fix1_to_fix3.doc", include_str!("../fixtures/fix1_to_fix3.doc")),
    ("fix3_to_fix1.doc", include_str!("../fixtures/fix3_to_fix1.doc")),
    ("fix3_to_fork.doc", include_str!("../fixtures/fix3_to_fork.doc")),
    ("fix3_logic.doc", include_str!("../fixtures/fix3_logic.doc")),
    ("chain_basis.doc", include_str!("../fixtures/chain_basis.doc")),
];

/// The parsed document with the given file name.
pub fn document(name: &str) -> Document {
    let (_, text) = DOCUMENTS.iter().find(|(n, _)| *n == name).unwrap_or_else(|| panic!("no bundled document {name}"));
    parse_document(text).unwrap_or_else(|e| panic!("bundled {name}: {e}"))
}

fn frame(name: &str) -> Frame {
    document(name).into_frame().expect("bundled frame")
}

fn system(name: &str) -> InfoSystem {
    document(name).into_system().expect("bundled system")
}

fn morphism(name: &str) -> Morphism {
    let Document::Morphism(m) = document(name) else { panic!("{name} is not a morphism") };
    let load = |n: &str| Arc::new(document(n).into_structure().expect("bundled structure"));
    m.resolve(load(&m.source), load(&m.target)).expect("bundled morphism")
}

pub fn fix1() -> Frame {
    frame("fix1.doc")
}

pub fn fix3() -> Frame {
    frame("fix3.doc")
}

pub fn fix4() -> Frame {
    frame("fix4.doc")
}

pub fn fixbad_w() -> Frame {
    frame("fixbad_w.doc")
}

pub fn fixbad_s() -> Frame {
    frame("fixbad_s.doc")
}

pub fn fork() -> Frame {
    frame("fork.doc")
}

pub fn two_point() -> Frame {
    frame("two_point.doc")
}

pub fn single() -> Frame {
    frame("single.doc")
}

pub fn loop_frame() -> Frame {
    frame("loop.doc")
}

pub fn sys1() -> InfoSystem {
    system("sys1.doc")
}

pub fn sys2() -> InfoSystem {
    system("sys2.doc")
}

pub fn sys3() -> InfoSystem {
    system("sys3.doc")
}

pub fn fix1_structure() -> Arc<Structure> {
    Arc::new(Structure::Frame(fix1()))
}

pub fn fix3_structure() -> Arc<Structure> {
    Arc::new(Structure::Frame(fix3()))
}

pub fn fix1_to_fix3() -> Morphism {
    morphism("fix1_to_fix3.doc")
}

pub fn fix3_to_fix1() -> Morphism {
    morphism("fix3_to_fix1.doc")
}

pub fn fix3_to_fork() -> Morphism {
    morphism("fix3_to_fork.doc")
}

pub fn fix3_logic() -> CslTable {
    let Document::Logic(t) = document("fix3_logic.doc") else { panic!("not a logic table") };
    t
}

pub fn chain_basis() -> AbstractBasis {
    let Document::Basis(b) = document("chain_basis.doc") else { panic!("not a basis") };
    b
}

/// The valid frames of the corpus, by name.
pub fn frames() -> Vec<(&'static str, Frame)> {
    vec![
        ("fix1", fix1()),
        ("fix3", fix3()),
        ("fix4", fix4()),
        ("fork", fork()),
        ("two-point", two_point()),
        ("single", single()),
        ("loop", loop_frame()),
    ]
}

/// The frames that are strong and have a truth element.
pub fn sif_t_frames() -> Vec<(&'static str, Frame)> {
    vec![("fix1", fix1()), ("fix3", fix3()), ("fork", fork()), ("two-point", two_point())]
}

pub fn systems() -> Vec<(&'static str, InfoSystem)> {
    vec![("sys1", sys1()), ("sys2", sys2()), ("sys3", sys3())]
}

pub fn morphisms() -> Vec<(&'static str, Morphism)> {
    vec![("fix1->fix3", fix1_to_fix3()), ("fix3->fix1", fix3_to_fix1()), ("fix3->fork", fix3_to_fork())]
}
