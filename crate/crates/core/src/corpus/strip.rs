/// Result of comment stripping, with the one recoverable defect we track.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stripped {
    pub text: String,
    /// The input ended inside a `/*` block; everything after the opener was dropped.
    pub unterminated_block: bool,
}

/// Removes `//` and `/* */` comments outside of string literals.
///
/// A line comment is removed up to (not including) its newline. A block comment
/// becomes a single space so that tokens on either side stay separated.
pub fn strip_comments(source: &str) -> String {
    strip_comments_report(source).text
}

pub fn strip_comments_report(source: &str) -> Stripped {
    let bytes = source.as_bytes();
    let mut out = String::with_capacity(source.len());
    let mut unterminated_block = false;
    // start of the code span not yet copied to `out`
    let mut pending = 0;
    let mut i = 0;

    while i < bytes.len() {
        match bytes[i] {
            b'"' | b'\'' => i = skip_string(bytes, i),
            b'/' if bytes.get(i + 1) == Some(&b'/') => {
                out.push_str(&source[pending..i]);
                i = source[i..].find('\n').map_or(bytes.len(), |off| i + off);
                pending = i;
            }
            b'/' if bytes.get(i + 1) == Some(&b'*') => {
                out.push_str(&source[pending..i]);
                match source[i + 2..].find("*/") {
                    Some(off) => {
                        out.push(' ');
                        i += 2 + off + 2;
                    }
                    None => {
                        unterminated_block = true;
                        i = bytes.len();
                    }
                }
                pending = i;
            }
            _ => i += 1,
        }
    }
    out.push_str(&source[pending..]);

    Stripped {
        text: out,
        unterminated_block,
    }
}

/// Returns the index just past the literal opened at `start`.
/// Unterminated literals run to the end of input.
fn skip_string(bytes: &[u8], start: usize) -> usize {
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
