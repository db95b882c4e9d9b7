//! Inputs shared by the `checks` benchmarks.

use infoframe::functors::{apply_t, apply_w};
use infoframe::{corpus, Frame};

/// Corpus frames plus the larger functor images that stay within the default bounds, smallest first.
pub fn frames() -> Vec<(String, Frame)> {
    let mut out: Vec<(String, Frame)> = corpus::frames().into_iter().map(|(n, f)| (n.to_string(), f)).collect();
    for (n, f) in corpus::frames() {
        out.push((format!("T({n})"), apply_t(&f).expect("corpus frames are within bounds")));
        if let Ok(tw) = apply_t(&apply_w(&f, None).expect("corpus frames are within bounds")) {
            out.push((format!("T(W({n}))"), tw));
        }
    }
    out.sort_by_key(|(_, f)| f.tokens().len());
    out
}
