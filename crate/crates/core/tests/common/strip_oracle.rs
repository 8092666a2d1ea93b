//! Character-level reference stripper, written independently of the library.

#[derive(Clone, Copy, PartialEq)]
enum State {
    Code,
    LineComment,
    BlockComment,
    Str(char),
    Escape(char),
}

pub fn oracle_strip(input: &str) -> String {
    let chars: Vec<char> = input.chars().collect();
    let mut out = String::new();
    let mut state = State::Code;
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let next = chars.get(i + 1).copied();
        match state {
            State::Code => {
                if c == '/' && next == Some('/') {
                    state = State::LineComment;
                    i += 2;
                    continue;
                }
                if c == '/' && next == Some('*') {
                    state = State::BlockComment;
                    i += 2;
                    continue;
                }
                if c == '"' || c == '\'' {
                    state = State::Str(c);
                }
                out.push(c);
            }
            State::LineComment => {
                if c == '\n' {
                    out.push(c);
                    state = State::Code;
                }
            }
            State::BlockComment => {
                if c == '*' && next == Some('/') {
                    out.push(' ');
                    state = State::Code;
                    i += 2;
                    continue;
                }
            }
            State::Str(q) => {
                out.push(c);
                if c == '\\' {
                    state = State::Escape(q);
                } else if c == q {
                    state = State::Code;
                }
            }
            State::Escape(q) => {
                out.push(c);
                state = State::Str(q);
            }
        }
        i += 1;
    }
    out
}

/// Fragments that exercise every oracle transition.
pub const FRAGMENTS: &[&str] = &[
    "/", "*", "//", "/*", "*/", "\"", "'", "\\", "\n", " ", "a", "x = 1;", "é", "€", "\\\"", "\\'", "http://", "**", "/**/",
];

pub fn assemble(picks: &[usize]) -> String {
    picks.iter().map(|&i| FRAGMENTS[i % FRAGMENTS.len()]).collect()
}
