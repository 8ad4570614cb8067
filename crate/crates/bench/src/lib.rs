//! Inputs shared by the benchmarks.

use idlp::fixtures::{AGREEMENT, LATE_VIOLATION};
use idlp::{load_grammar, Grammar};

/// A named grammar with the sentences to time on it.
pub struct Case {
    pub name: &'static str,
    pub grammar: Grammar,
    pub sentences: Vec<Vec<&'static str>>,
}

pub fn cases() -> Vec<Case> {
    vec![
        Case {
            name: "agreement",
            grammar: load_grammar(AGREEMENT).expect("bundled grammar loads"),
            sentences: vec![vec!["she", "walks"], vec!["walks", "she"]],
        },
        Case {
            name: "deferred-lp",
            grammar: load_grammar(LATE_VIOLATION).expect("bundled grammar loads"),
            sentences: vec![vec!["h", "i", "j", "k"], vec!["i", "h", "j", "k"]],
        },
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cases_parse() {
        for c in cases() {
            for s in &c.sentences {
                idlp::parse(&c.grammar, s, &idlp::ParseOptions::default()).unwrap();
            }
        }
    }
}
