//! Rule-based sentence splitting.

/// Tokens that end in a period without ending a sentence. Compared
/// lowercase, without the final period.
const ABBREVIATIONS: &[&str] = &[
    "adm", "apr", "aug", "ave", "blvd", "bros", "capt", "cmdr", "co", "col", "corp", "dec", "dept", "dr",
    "e.g", "feb", "fig", "ft", "gen", "gov", "i.e", "inc", "jan", "jr", "jul", "jun", "lt", "ltd", "mar",
    "mr", "mrs", "ms", "mt", "nov", "oct", "prof", "rep", "rev", "sen", "sep", "sept", "sgt", "sr", "st",
    "u.k", "u.n", "u.s", "vs",
];

fn is_terminal(c: char) -> bool {
    matches!(c, '.' | '!' | '?')
}

fn is_closer(c: char) -> bool {
    matches!(c, '"' | '\'' | ')' | ']' | '\u{201d}' | '\u{2019}')
}

fn is_opener(c: char) -> bool {
    matches!(c, '"' | '\'' | '(' | '[' | '\u{201c}' | '\u{2018}')
}

/// Splits raw text into sentences.
///
/// A boundary is a run of `.`, `!` or `?` (plus any closing quotes or
/// brackets) followed by whitespace and then an uppercase letter or an
/// opening quote. A period after a known abbreviation or a single-letter
/// initial is not a boundary. Blank lines always separate sentences.
/// Whitespace inside a sentence is collapsed to single spaces.
pub fn split_sentences(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    for paragraph in paragraphs(text) {
        split_paragraph(&paragraph, &mut out);
    }
    out
}

fn paragraphs(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut current = String::new();
    for line in text.lines() {
        if line.trim().is_empty() {
            if !current.is_empty() {
                out.push(std::mem::take(&mut current));
            }
            continue;
        }
        for word in line.split_whitespace() {
            if !current.is_empty() {
                current.push(' ');
            }
            current.push_str(word);
        }
    }
    if !current.is_empty() {
        out.push(current);
    }
    out
}

fn split_paragraph(p: &str, out: &mut Vec<String>) {
    let chars: Vec<char> = p.chars().collect();
    let mut start = 0;
    let mut i = 0;
    while i < chars.len() {
        if !is_terminal(chars[i]) {
            i += 1;
            continue;
        }
        let first_terminal = i;
        let mut end = i;
        while end < chars.len() && (is_terminal(chars[end]) || is_closer(chars[end])) {
            end += 1;
        }
        // paragraphs are whitespace-collapsed, so a boundary is exactly one space
        let boundary = end == chars.len()
            || (chars[end] == ' '
                && chars
                    .get(end + 1)
                    .is_some_and(|&c| c.is_uppercase() || is_opener(c)));
        if boundary && !protected_period(&chars[start..first_terminal], chars[first_terminal]) {
            push_trimmed(&chars[start..end], out);
            start = end;
        }
        i = end;
    }
    if start < chars.len() {
        push_trimmed(&chars[start..], out);
    }
}

fn protected_period(before: &[char], terminal: char) -> bool {
    if terminal != '.' {
        return false;
    }
    let word_start = before
        .iter()
        .rposition(|c| c.is_whitespace())
        .map_or(0, |p| p + 1);
    let word: String = before[word_start..]
        .iter()
        .skip_while(|&&c| is_opener(c))
        .collect();
    let mut letters = word.chars();
    let single_initial = matches!((letters.next(), letters.next()), (Some(c), None) if c.is_uppercase());
    single_initial || ABBREVIATIONS.contains(&word.to_lowercase().as_str())
}

fn push_trimmed(chars: &[char], out: &mut Vec<String>) {
    let s: String = chars.iter().collect();
    let s = s.trim();
    if !s.is_empty() {
        out.push(s.to_string());
    }
}
