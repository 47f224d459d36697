//! Splitting a model response into its reasoning and answer blocks.

use serde::Serialize;

pub const THINK_START: &str = "<|think_start|>";
pub const THINK_END: &str = "<|think_end|>";
pub const ANSWER_START: &str = "<|answer_start|>";
pub const ANSWER_END: &str = "<|answer_end|>";

const TOKENS: [&str; 4] = [THINK_START, THINK_END, ANSWER_START, ANSWER_END];

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ParsedResponse {
    pub thought: String,
    pub answer: String,
    pub well_formed: bool,
    /// Why the response is malformed; `None` when well formed.
    pub defect: Option<String>,
}

impl ParsedResponse {
    fn malformed(defect: String) -> ParsedResponse {
        ParsedResponse { thought: String::new(), answer: String::new(), well_formed: false, defect: Some(defect) }
    }
}

/// Accepts exactly `THINK_START t THINK_END ANSWER_START a ANSWER_END`, with
/// only whitespace allowed outside and between the two blocks. The answer is
/// trimmed; the thought is kept verbatim.
pub fn parse_response(raw: &str) -> ParsedResponse {
    let mut positions = [0usize; 4];
    for (slot, token) in TOKENS.iter().enumerate() {
        let found: Vec<usize> = raw.match_indices(token).map(|(i, _)| i).collect();
        match found.len() {
            0 => return ParsedResponse::malformed(format!("missing {token}")),
            1 => positions[slot] = found[0],
            n => return ParsedResponse::malformed(format!("{token} appears {n} times")),
        }
    }
    if positions.windows(2).any(|w| w[0] >= w[1]) {
        return ParsedResponse::malformed("delimiters out of order".into());
    }
    let [ts, te, as_, ae] = positions;
    let gaps = [
        &raw[..ts],
        &raw[te + THINK_END.len()..as_],
        &raw[ae + ANSWER_END.len()..],
    ];
    if gaps.iter().any(|g| !g.trim().is_empty()) {
        return ParsedResponse::malformed("text outside the think and answer blocks".into());
    }
    ParsedResponse {
        thought: raw[ts + THINK_START.len()..te].to_string(),
        answer: raw[as_ + ANSWER_START.len()..ae].trim().to_string(),
        well_formed: true,
        defect: None,
    }
}

/// Wraps `thought` and `answer` in the delimiter tokens.
pub fn format_response(thought: &str, answer: &str) -> String {
    format!("{THINK_START}{thought}{THINK_END}{ANSWER_START}{answer}{ANSWER_END}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn well_formed_listing() {
        let r = parse_response("<|think_start|>t<|think_end|><|answer_start|>CCO<|answer_end|>");
        assert!(r.well_formed);
        assert_eq!(r.thought, "t");
        assert_eq!(r.answer, "CCO");
        assert_eq!(parse_response(&format_response("a b", " C ")).answer, "C");
    }

    #[test]
    fn defects() {
        for raw in [
            "<|think_start|>t<|think_end|><|answer_start|>CCO",
            "<|think_start|>t<|think_end|><|answer_start|>C<|answer_end|><|answer_start|>C<|answer_end|>",
            "<|answer_start|>C<|answer_end|><|think_start|>t<|think_end|>",
            "hi <|think_start|>t<|think_end|><|answer_start|>C<|answer_end|>",
            "<|think_start|>t<|think_end|>x<|answer_start|>C<|answer_end|>",
            "<|think_start|>t<|think_end|><|answer_start|>C<|answer_end|> tail",
            "CCO",
        ] {
            let r = parse_response(raw);
            assert!(!r.well_formed, "{raw}");
            assert!(r.defect.is_some());
        }
        assert!(parse_response("\n<|think_start|>t<|think_end|>\n<|answer_start|>C<|answer_end|>\n").well_formed);
    }
}
