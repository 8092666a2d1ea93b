//! Brace and paren matching over comment-stripped Solidity, skipping string
//! literals. Deliberately not a parser.

use std::ops::Range;
use std::sync::OnceLock;

use regex::Regex;

fn function_keyword() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r"\b(function|constructor|fallback|receive)\b").unwrap())
}

fn modifier_keyword() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r"\bmodifier\b").unwrap())
}

/// Byte ranges of function-like bodies and modifier bodies, braces included.
#[derive(Debug, Clone, Default)]
pub struct CodeRegions {
    pub functions: Vec<Range<usize>>,
    /// Subset of `functions` introduced by the `function` keyword itself.
    pub plain_functions: Vec<Range<usize>>,
    pub modifiers: Vec<Range<usize>>,
}

impl CodeRegions {
    pub fn of(src: &str) -> Self {
        let mut regions = CodeRegions::default();
        for m in function_keyword().find_iter(src) {
            if let Some(body) = body_after(src, m.end()) {
                if m.as_str() == "function" {
                    regions.plain_functions.push(body.clone());
                }
                regions.functions.push(body);
            }
        }
        for m in modifier_keyword().find_iter(src) {
            if let Some(body) = body_after(src, m.end()) {
                regions.modifiers.push(body);
            }
        }
        regions
    }

    /// True when `pos` lies in a function-like body and in no modifier body.
    pub fn in_function_body(&self, pos: usize) -> bool {
        contains(&self.functions, pos) && !contains(&self.modifiers, pos)
    }

    pub fn in_plain_function_body(&self, pos: usize) -> bool {
        contains(&self.plain_functions, pos) && !contains(&self.modifiers, pos)
    }
}

fn contains(ranges: &[Range<usize>], pos: usize) -> bool {
    ranges.iter().any(|r| r.contains(&pos))
}

/// Finds the `{ ... }` block that follows a declaration header starting at
/// `from`. Returns `None` when a `;` ends the declaration first. An unbalanced
/// block runs to the end of input.
pub fn body_after(src: &str, from: usize) -> Option<Range<usize>> {
    let bytes = src.as_bytes();
    let mut i = from;
    while i < bytes.len() {
        match bytes[i] {
            b'"' | b'\'' => i = skip_string(bytes, i),
            b';' => return None,
            b'{' => {
                let end = matching_close(bytes, i, b'{', b'}');
                return Some(i..end);
            }
            _ => i += 1,
        }
    }
    None
}

/// Given the index of an opening delimiter, returns the index one past its
/// matching close (or the input length if unbalanced).
pub fn matching_close(bytes: &[u8], open_at: usize, open: u8, close: u8) -> usize {
    let mut depth = 0usize;
    let mut i = open_at;
    while i < bytes.len() {
        let b = bytes[i];
        if b == b'"' || b == b'\'' {
            i = skip_string(bytes, i);
            continue;
        }
        if b == open {
            depth += 1;
        } else if b == close {
            depth -= 1;
            if depth == 0 {
                return i + 1;
            }
        }
        i += 1;
    }
    bytes.len()
}

pub fn skip_string(bytes: &[u8], start: usize) -> usize {
    let quote = bytes[start];
    let mut j = start + 1;
    while j < bytes.len() {
        match bytes[j] {
            b'\\' => j += 2,
            b if b == quote => return j + 1,
            _ => j += 1,
        }
    }
    bytes.len()
}

/// Copy of `text` with the contents of string literals blanked out.
pub fn blank_strings(text: &str) -> String {
    let bytes = text.as_bytes();
    let mut out = bytes.to_vec();
    let mut i = 0;
    while i < bytes.len() {
        if bytes[i] == b'"' || bytes[i] == b'\'' {
            let end = skip_string(bytes, i);
            for b in &mut out[i..end] {
                *b = b' ';
            }
            i = end;
        } else {
            i += 1;
        }
    }
    String::from_utf8(out).expect("blanking whole literals keeps UTF-8 valid")
}
