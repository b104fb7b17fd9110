//! Categorial grammar toolkit: Lambek-calculus proof search, compositional
//! semantics through simply-typed λ-terms, and a System F layer for
//! polymorphic quantification and lexical coercions.

pub mod category;
pub mod lambda;
pub mod montague;
pub mod prover;
mod syntax;
pub mod system_f;

pub use syntax::SyntaxError;

/// Example lexicons shipped with the crate.
pub mod bundled {
    /// Italian fragment, categories only.
    pub const ITALIAN: &str = include_str!("../lexicons/italian.lex");
    /// English fragment with semantic terms.
    pub const SOSTA: &str = include_str!("../lexicons/sosta.lex");
    /// French System F fragment: fictive motion and book facets.
    pub const FICTIVE: &str = include_str!("../lexicons/fictive.lex");

    /// Looks a bundled lexicon up by name.
    pub fn get(name: &str) -> Option<&'static str> {
        match name {
            "italian" => Some(ITALIAN),
            "sosta" => Some(SOSTA),
            "fictive" => Some(FICTIVE),
            _ => None,
        }
    }
}
