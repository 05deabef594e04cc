/// Splits a caption into surface tokens.
///
/// A token is a maximal run of letters, digits and apostrophes; any other
/// non-whitespace character is a token on its own. Whitespace only separates.
pub fn tokenize(text: &str) -> Vec<String> {
    let mut tokens = Vec::new();
    let mut word = String::new();
    for ch in text.chars() {
        if ch.is_alphanumeric() || ch == '\'' {
            word.push(ch);
            continue;
        }
        if !word.is_empty() {
            tokens.push(std::mem::take(&mut word));
        }
        if !ch.is_whitespace() {
            tokens.push(ch.to_string());
        }
    }
    if !word.is_empty() {
        tokens.push(word);
    }
    tokens
}

/// Canonical text form: tokens joined by single spaces.
pub fn normalize(text: &str) -> String {
    tokenize(text).join(" ")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn worked_example_has_eleven_tokens() {
        let toks = tokenize("a guy wearing a red shirt drives a car while talking");
        assert_eq!(toks.len(), 11);
    }

    #[test]
    fn empty_input() {
        assert!(tokenize("").is_empty());
        assert!(tokenize("   \t\n").is_empty());
    }

    #[test]
    fn punctuation_is_split() {
        assert_eq!(tokenize("man, running!"), vec!["man", ",", "running", "!"]);
        assert_eq!(tokenize("a man's hat..."), vec!["a", "man's", "hat", ".", ".", "."]);
    }

    #[test]
    fn surface_case_is_preserved() {
        assert_eq!(tokenize("A Guy"), vec!["A", "Guy"]);
    }

    proptest! {
        #[test]
        fn join_then_retokenize_is_fixed_point(text in "\\PC{0,60}") {
            let once = tokenize(&text);
            let again = tokenize(&once.join(" "));
            prop_assert_eq!(once, again);
        }
    }
}
