//! Line-oriented text formats: word files and the quick-entry grammar for
//! piecewise maps,
//!
//! ```text
//! (-inf, 0) [1 0; 0 1]; (0, 1) [2 0; 0 1/2]; ...; (1, inf) [1 3/2; 0 1]
//! ```
//!
//! Clauses cover the line left to right, each closing where the next
//! opens. Endpoints are `ℚ(√2)` literals such as `1/2-3*sqrt2`.

use std::fmt::Write as _;

use pwproj_core::algebraic::RealAlgebraic;
use pwproj_core::number::QSqrt2;
use pwproj_core::piecewise::PiecewiseMap;
use pwproj_core::projective::Mat2;
use pwproj_core::word::Word;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {message}")]
pub struct TextError {
    /// 1-based.
    pub line: usize,
    pub message: String,
}

fn err(line: usize, message: impl Into<String>) -> TextError {
    TextError {
        line,
        message: message.into(),
    }
}

/// Non-blank lines that are not `#` comments, with their line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

pub fn parse_words(text: &str) -> Result<Vec<Word>, TextError> {
    let mut out = Vec::new();
    for (n, l) in content_lines(text) {
        if let Some((col, c)) = l.chars().enumerate().find(|(_, c)| !matches!(c, 'a' | 'A' | 'b' | 'B')) {
            return Err(err(n, format!("column {}: {c:?} is not one of a, A, b, B", col + 1)));
        }
        let w: Word = l.parse().map_err(|e| err(n, format!("{e}")))?;
        if w.len() != l.len() {
            return Err(err(n, format!("{l} is not reduced (reduces to {w})")));
        }
        out.push(w);
    }
    Ok(out)
}

pub fn format_words(words: &[Word]) -> String {
    let mut s = String::new();
    for w in words {
        let _ = writeln!(s, "{w}");
    }
    s
}

/// Splits at `;` outside square brackets.
fn clauses(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '[' => depth += 1,
            ']' => depth -= 1,
            ';' if depth == 0 => {
                out.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum End {
    NegInf,
    At(QSqrt2),
    PosInf,
}

fn parse_end(s: &str) -> Result<End, String> {
    match s.trim() {
        "-inf" => Ok(End::NegInf),
        "inf" | "+inf" => Ok(End::PosInf),
        t => t.parse::<QSqrt2>().map(End::At).map_err(|e| e.to_string()),
    }
}

/// One map in the clause grammar; the message says which clause failed.
pub fn parse_map(s: &str) -> Result<PiecewiseMap, String> {
    let mut breakpoints = Vec::new();
    let mut pieces = Vec::new();
    let parts = clauses(s);
    let mut expect = End::NegInf;
    for (k, raw) in parts.iter().enumerate() {
        let c = raw.trim();
        let where_ = |m: String| format!("clause {}: {m}", k + 1);
        let rest = c.strip_prefix('(').ok_or_else(|| where_("expected '(' to open the interval".into()))?;
        let close = rest.find(')').ok_or_else(|| where_("missing ')'".into()))?;
        let (lo, hi) = rest[..close]
            .split_once(',')
            .ok_or_else(|| where_("interval needs two endpoints".into()))?;
        let lo = parse_end(lo).map_err(where_)?;
        let hi = parse_end(hi).map_err(where_)?;
        if lo != expect {
            return Err(where_("does not start where the previous clause ended".into()));
        }
        let m: Mat2 = rest[close + 1..].trim().parse().map_err(|e| where_(format!("{e}")))?;
        pieces.push(m);
        match &hi {
            End::PosInf if k + 1 == parts.len() => {}
            End::PosInf => return Err(where_("only the last clause may reach inf".into())),
            End::NegInf => return Err(where_("right endpoint cannot be -inf".into())),
            End::At(x) => {
                if k + 1 == parts.len() {
                    return Err(where_("the last clause must end at inf".into()));
                }
                breakpoints.push(RealAlgebraic::from_qsqrt2(x.clone()));
            }
        }
        expect = hi;
    }
    PiecewiseMap::new(breakpoints, pieces).map_err(|e| e.to_string())
}

/// `None` when some breakpoint is outside ℚ(√2) and has no literal.
pub fn format_map(f: &PiecewiseMap) -> Option<String> {
    let mut ends = vec!["-inf".to_string()];
    for b in f.breakpoints() {
        ends.push(b.exact()?.to_string());
    }
    ends.push("inf".into());
    let clauses: Vec<String> = f
        .pieces()
        .iter()
        .enumerate()
        .map(|(k, m)| format!("({}, {}) {m}", ends[k], ends[k + 1]))
        .collect();
    Some(clauses.join("; "))
}

/// One map per line.
pub fn parse_maps(text: &str) -> Result<Vec<PiecewiseMap>, TextError> {
    content_lines(text)
        .map(|(n, l)| parse_map(l).map_err(|m| err(n, m)))
        .collect()
}
