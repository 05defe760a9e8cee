//! Tokenization shared by utterances, training phrases and vocabularies.

/// A word of the input, lowercased for matching with its original casing
/// kept for free-text slot values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Token {
    pub norm: String,
    pub raw: String,
}

fn is_word_char(c: char) -> bool {
    c.is_alphanumeric() || matches!(c, '#' | '-' | '_')
}

pub(crate) fn tokenize(text: &str) -> Vec<Token> {
    text.split(|c: char| !is_word_char(c))
        .filter(|w| w.chars().any(char::is_alphanumeric))
        .map(|w| Token {
            norm: w.to_lowercase(),
            raw: w.to_string(),
        })
        .collect()
}

/// Lowercased, punctuation-free word sequence of `utterance`.
pub fn normalize(utterance: &str) -> Vec<String> {
    tokenize(utterance).into_iter().map(|t| t.norm).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalizes_command() {
        assert_eq!(
            normalize("Add a Yaskawa MA2010 in front on the right"),
            ["add", "a", "yaskawa", "ma2010", "in", "front", "on", "the", "right"]
        );
    }

    #[test]
    fn empty_and_punctuation() {
        assert!(normalize("").is_empty());
        assert!(normalize("  ?! ... ").is_empty());
        assert_eq!(normalize("Hello!!!"), ["hello"]);
        assert_eq!(normalize("front,right."), ["front", "right"]);
    }

    #[test]
    fn keeps_ref_suffixes() {
        assert_eq!(normalize("Remove Pallet#2!"), ["remove", "pallet#2"]);
        let raw: Vec<String> = tokenize("Hi I am Bob").into_iter().map(|t| t.raw).collect();
        assert_eq!(raw, ["Hi", "I", "am", "Bob"]);
    }
}
