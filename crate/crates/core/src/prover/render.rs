use std::fmt::Write;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{check_derivation, Derivation, SearchConfig};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Text,
    Latex,
    Json,
}

impl FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "text" => Ok(OutputFormat::Text),
            "latex" => Ok(OutputFormat::Latex),
            "json" => Ok(OutputFormat::Json),
            other => Err(format!("unknown output format `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RenderError {
    #[error("refusing to render an invalid derivation")]
    InvalidDerivation,
}

/// Renders a checked derivation. `cfg` supplies the side conditions the
/// derivation is checked against.
pub fn render(d: &Derivation, format: OutputFormat, cfg: &SearchConfig) -> Result<String, RenderError> {
    if !check_derivation(d, cfg) {
        return Err(RenderError::InvalidDerivation);
    }
    Ok(match format {
        OutputFormat::Text => {
            let mut out = String::new();
            text(d, 0, &mut out);
            out.pop();
            out
        }
        OutputFormat::Latex => latex(d),
        OutputFormat::Json => serde_json::to_string_pretty(d).expect("derivations always serialize"),
    })
}

fn text(d: &Derivation, indent: usize, out: &mut String) {
    let _ = writeln!(out, "{:indent$}{}   [{}]", "", d.conclusion, d.rule.label());
    for p in &d.premises {
        text(p, indent + 2, out);
    }
}

fn latex(d: &Derivation) -> String {
    let premises: Vec<String> = d.premises.iter().map(latex).collect();
    let rule = d.rule.label().replace('\\', "\\backslash ");
    format!("\\infer[{}]{{{}}}{{{}}}", rule.trim_end(), d.conclusion.to_latex(), premises.join(" & "))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::category::parse_category;
    use crate::prover::{parse_sequent, prove};

    #[test]
    fn axiom_text() {
        let d = Derivation::axiom(parse_category("np").unwrap());
        let cfg = SearchConfig::default();
        assert_eq!(render(&d, OutputFormat::Text, &cfg).unwrap(), "np ⊢ np   [ax]");
    }

    #[test]
    fn json_nesting_of_the_italian_parse() {
        let s = parse_sequent("S/inf, inf/np, np/n, n => S").unwrap();
        let cfg = SearchConfig::default();
        let d = &prove(&s, &cfg).unwrap()[0];
        let json = render(d, OutputFormat::Json, &cfg).unwrap();
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(v["rule"], "/e");
        assert_eq!(v["conclusion"], "S/inf, inf/np, np/n, n => S");
        fn depth(v: &serde_json::Value) -> usize {
            1 + v["premises"].as_array().unwrap().iter().map(depth).max().unwrap_or(0)
        }
        assert_eq!(depth(&v), 4);
        let back: Derivation = serde_json::from_str(&json).unwrap();
        assert_eq!(&back, d);
    }

    #[test]
    fn latex_of_transitivity() {
        let s = parse_sequent("a/b, b/c => a/c").unwrap();
        let cfg = SearchConfig::default();
        let d = &prove(&s, &cfg).unwrap()[0];
        let tex = render(d, OutputFormat::Latex, &cfg).unwrap();
        assert_eq!(tex.matches("\\infer[/i]").count(), 1);
        assert_eq!(tex.matches("\\infer[/e]").count(), 2);
        assert!(tex.starts_with("\\infer[/i]{a/b, b/c \\vdash a/c}"));
    }

    #[test]
    fn text_tree_is_indented() {
        let s = parse_sequent("np/n, n => np").unwrap();
        let cfg = SearchConfig::default();
        let d = &prove(&s, &cfg).unwrap()[0];
        let txt = render(d, OutputFormat::Text, &cfg).unwrap();
        assert_eq!(txt, "np/n, n ⊢ np   [/e]\n  np/n ⊢ np/n   [ax]\n  n ⊢ n   [ax]");
    }

    #[test]
    fn invalid_derivations_are_refused() {
        let mut d = Derivation::axiom(parse_category("np").unwrap());
        d.conclusion.goal = parse_category("n").unwrap();
        assert_eq!(render(&d, OutputFormat::Text, &SearchConfig::default()), Err(RenderError::InvalidDerivation));
    }
}
