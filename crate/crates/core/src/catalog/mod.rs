//! Built-in structures: finite fields, the Krasner and sign hyperfields,
//! and layered hyperfields over infinite ordered groups.

mod fields;
mod symbolic;

pub use fields::{finite_field, finite_field_of_order, krasner, sign};
pub use symbolic::{Action, SetDescription, SymElem, SymbolicHyperfield, WindowTable};

use crate::error::{Error, Result};
use crate::kernel::FiniteHyperStructure;
use crate::ordered::OrderedIndex;

/// A catalog entry.
#[derive(Debug, Clone)]
pub enum Builtin {
    Finite(FiniteHyperStructure),
    Symbolic(SymbolicHyperfield),
}

/// Look up a built-in by name: `K`, `S`, `GF(q)` for prime powers `q ≤ 64`,
/// `Zminusinf` (`GF(2) ⋊ ℤ`), `trop(G)` (`K ⋊ G`) and `layer(M,G)` for a
/// finite built-in `M` and a group `G` written `Z`, `Z^k` or `Q`.
pub fn builtin(name: &str) -> Result<Builtin> {
    let name = name.trim();
    let not_found = || Error::NotFound(format!("no built-in structure named {name:?}"));
    match name {
        "K" => return Ok(Builtin::Finite(krasner())),
        "S" => return Ok(Builtin::Finite(sign())),
        "Zminusinf" => {
            let f = SymbolicHyperfield::new(
                name,
                finite_field(2, 1)?,
                OrderedIndex::Integers,
                Action::Trivial,
            )?;
            return Ok(Builtin::Symbolic(f));
        }
        _ => {}
    }
    if let Some(q) = name.strip_prefix("GF(").and_then(|r| r.strip_suffix(')')) {
        let q: usize = q.trim().parse().map_err(|_| not_found())?;
        return Ok(Builtin::Finite(finite_field_of_order(q)?));
    }
    if let Some(g) = name.strip_prefix("trop(").and_then(|r| r.strip_suffix(')')) {
        let g: OrderedIndex = g.parse()?;
        let f = SymbolicHyperfield::new(name, krasner(), g, Action::Trivial)?;
        return Ok(Builtin::Symbolic(f));
    }
    if let Some(args) = name
        .strip_prefix("layer(")
        .and_then(|r| r.strip_suffix(')'))
    {
        // The base may itself contain parentheses, so split at the last comma.
        let (m, g) = args.rsplit_once(',').ok_or_else(not_found)?;
        let base = builtin_finite(m)?;
        let g: OrderedIndex = g.parse()?;
        let f = SymbolicHyperfield::new(name, base, g, Action::Trivial)?;
        return Ok(Builtin::Symbolic(f));
    }
    Err(not_found())
}

/// A finite built-in; symbolic names are rejected.
pub fn builtin_finite(name: &str) -> Result<FiniteHyperStructure> {
    match builtin(name)? {
        Builtin::Finite(t) => Ok(t),
        Builtin::Symbolic(_) => Err(Error::InvalidArgument(format!("{name} is not finite"))),
    }
}

/// A symbolic built-in; finite names are rejected.
pub fn builtin_symbolic(name: &str) -> Result<SymbolicHyperfield> {
    match builtin(name)? {
        Builtin::Symbolic(f) => Ok(f),
        Builtin::Finite(_) => Err(Error::InvalidArgument(format!("{name} is finite"))),
    }
}
