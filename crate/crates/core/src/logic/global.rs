use crate::category::compose;
use crate::error::{Error, Result};
use crate::logic::csl::Gamma;
use crate::logic::formula::{flatten, Formula};
use crate::model::{Morphism, MorphismKind};
use crate::token::Token;

/// `C(H)`: the same table read as a global consequence relation.
pub fn apply_c_morphism(h: &Morphism) -> Result<Morphism> {
    if h.kind() != MorphismKind::Family {
        return Err(Error::Type(format!("expected a family, found a {}", h.kind().as_str())));
    }
    h.retagged(MorphismKind::Global)
}

/// `E(|∼)`: the atom table of a global consequence relation as a family.
pub fn apply_e_morphism(g: &Morphism) -> Result<Morphism> {
    expect_global(g)?;
    g.retagged(MorphismKind::Family)
}

fn expect_global(g: &Morphism) -> Result<()> {
    if g.kind() != MorphismKind::Global {
        return Err(Error::Type(format!("expected a global consequence relation, found a {}", g.kind().as_str())));
    }
    Ok(())
}

/// `Γ |∼^p φ ⟺ Γ̄ ∈ Con_p ∧ Γ̄ H_p φ̄`, answered from the table alone.
pub fn global_derives(g: &Morphism, p: &Token, gamma: &Gamma, phi: &Formula) -> Result<bool> {
    expect_global(g)?;
    let (s, t) = (g.source().as_frame()?, g.target().as_frame()?);
    let top = s.truth().ok_or_else(|| Error::NoTruth("source logic has no truth atom".into()))?;
    if !s.tokens().contains(p) {
        return Err(Error::UnknownToken(format!("stage {p}")));
    }
    let stage = s.entailed(p, &crate::token::TokenSet::singleton(p.clone()));
    if let Gamma::Formulas(fs) = gamma {
        if let Some(x) = fs.iter().flat_map(|f| flatten(f).iter().cloned().collect::<Vec<_>>()).find(|x| !stage.contains(x)) {
            return Err(Error::Stage(format!("{x} is not in the stage set of {p}")));
        }
    }
    let phibar = flatten(phi);
    if let Some(x) = phibar.iter().find(|x| !t.tokens().contains(x)) {
        return Err(Error::UnknownToken(format!("{x} is not a target atom")));
    }
    let gbar = gamma.flattened(p, top);
    Ok(s.con(p).contains(&gbar) && phibar.is_subset(&g.component(Some(p)).targets(&gbar)))
}

/// Diagrammatic composition: `g1` first, then `g2`.
pub fn compose_global(g1: &Morphism, g2: &Morphism) -> Result<Morphism> {
    expect_global(g1)?;
    expect_global(g2)?;
    compose(g1, g2)
}
