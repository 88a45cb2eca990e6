//! Rule-based sentence tokenizer.
//!
//! Splits plain text into sentences at `.`, `?`, or `!` followed by
//! whitespace and an uppercase letter or digit. A fixed abbreviation list
//! suppresses splits after common abbreviated words, so "Mr. Powell spoke."
//! stays one sentence. The rules are deliberately small and deterministic:
//! the same input always yields the same segmentation, on every platform.

/// Words whose trailing period never ends a sentence. Matching is
/// case-sensitive after stripping leading punctuation, so "no." at the end
/// of a sentence still splits while the numbering abbreviation "No." does
/// not.
pub const ABBREVIATIONS: &[&str] = &[
    "Mr.", "Mrs.", "Dr.", "U.S.", "etc.", "e.g.", "i.e.", "vs.", "No.", "Jan.", "Feb.", "Mar.",
    "Apr.", "May.", "Jun.", "Jul.", "Aug.", "Sep.", "Oct.", "Nov.", "Dec.",
];

/// Split raw text into an ordered list of trimmed, non-empty sentences.
///
/// The concatenation of the returned segments equals the input modulo
/// whitespace, and re-tokenizing any returned segment yields exactly that
/// segment.
pub fn tokenize_sentences(raw_text: &str) -> Vec<String> {
    let chars: Vec<(usize, char)> = raw_text.char_indices().collect();
    let mut sentences = Vec::new();
    let mut seg_start = 0usize; // byte offset

    let mut i = 0usize;
    while i < chars.len() {
        let (byte_pos, c) = chars[i];
        if matches!(c, '.' | '?' | '!') && splits_here(raw_text, &chars, i, seg_start) {
            let end = byte_pos + c.len_utf8();
            push_trimmed(&mut sentences, &raw_text[seg_start..end]);
            // Skip the whitespace run; the next sentence starts after it.
            let mut j = i + 1;
            while j < chars.len() && chars[j].1.is_whitespace() {
                j += 1;
            }
            seg_start = if j < chars.len() {
                chars[j].0
            } else {
                raw_text.len()
            };
            i = j;
            continue;
        }
        i += 1;
    }
    push_trimmed(&mut sentences, &raw_text[seg_start..]);
    sentences
}

fn push_trimmed(out: &mut Vec<String>, segment: &str) {
    let trimmed = segment.trim();
    if !trimmed.is_empty() {
        out.push(trimmed.to_string());
    }
}

/// A terminal mark splits iff it is followed by whitespace and then an
/// uppercase letter or digit, and (for periods) the word it ends is not a
/// known abbreviation.
fn splits_here(text: &str, chars: &[(usize, char)], idx: usize, seg_start: usize) -> bool {
    let mut j = idx + 1;
    let mut saw_ws = false;
    while j < chars.len() && chars[j].1.is_whitespace() {
        saw_ws = true;
        j += 1;
    }
    if !saw_ws || j >= chars.len() {
        return false;
    }
    let next = chars[j].1;
    if !(next.is_uppercase() || next.is_ascii_digit()) {
        return false;
    }
    if chars[idx].1 == '.' && is_abbreviation(text, chars, idx, seg_start) {
        return false;
    }
    true
}

fn is_abbreviation(text: &str, chars: &[(usize, char)], idx: usize, seg_start: usize) -> bool {
    // Walk back to the start of the whitespace-delimited word ending at idx.
    let mut k = idx;
    while k > 0 {
        let (pos, c) = chars[k - 1];
        if c.is_whitespace() || pos < seg_start {
            break;
        }
        k -= 1;
    }
    let word_start = chars[k].0.max(seg_start);
    let end = chars[idx].0 + 1; // '.' is one byte
    let word = &text[word_start..end];
    // Strip leading punctuation so "(e.g." still matches "e.g.".
    let word = word.trim_start_matches(|c: char| !c.is_ascii_alphanumeric());
    ABBREVIATIONS.contains(&word)
}
