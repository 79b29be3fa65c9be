//! Text normalization, tokenization and morphological lookup.
//!
//! The lexicon is a flat TSV file, one reading per row. A surface form may
//! have several rows; all of them come back from [`analyze`] so that the
//! grammar, not the lexicon, decides which reading survives.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use unicode_normalization::UnicodeNormalization;

use crate::error::{Error, Result};

#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
pub enum Pos {
    Noun,
    Verb,
    Adj,
    Adv,
    Pron,
    Det,
    Prep,
    Conj,
    Interrog,
    Punct,
    Proper,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Pos::Noun => "Noun",
            Pos::Verb => "Verb",
            Pos::Adj => "Adj",
            Pos::Adv => "Adv",
            Pos::Pron => "Pron",
            Pos::Det => "Det",
            Pos::Prep => "Prep",
            Pos::Conj => "Conj",
            Pos::Interrog => "Interrog",
            Pos::Punct => "Punct",
            Pos::Proper => "Proper",
        })
    }
}

impl FromStr for Pos {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Ok(match s {
            "Noun" => Pos::Noun,
            "Verb" => Pos::Verb,
            "Adj" => Pos::Adj,
            "Adv" => Pos::Adv,
            "Pron" => Pos::Pron,
            "Det" => Pos::Det,
            "Prep" => Pos::Prep,
            "Conj" => Pos::Conj,
            "Interrog" => Pos::Interrog,
            "Punct" => Pos::Punct,
            "Proper" => Pos::Proper,
            other => return Err(format!("unknown part of speech {other:?}")),
        })
    }
}

/// One surface token. `char_offset` counts chars (not bytes) from the start
/// of the normalized document, so `text[offset..offset+len]` is the surface.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub surface: String,
    pub char_offset: usize,
    pub sentence_index: usize,
}

/// One reading of a surface form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MorphAnalysis {
    pub lemma: String,
    pub pos: Pos,
    pub morph_features: BTreeSet<String>,
    pub semantic_traits: BTreeSet<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnalyzedToken {
    pub token: Token,
    pub analyses: Vec<MorphAnalysis>,
}

#[derive(Debug, Clone, Default)]
pub struct Lexicon {
    entries: BTreeMap<String, Vec<MorphAnalysis>>,
    // lowercased surface -> readings, for case-insensitive lookup
    lower: BTreeMap<String, Vec<MorphAnalysis>>,
    trait_inventory: BTreeSet<String>,
    // space-joined lowercased surfaces -> the single merged reading
    multiword: BTreeMap<String, MorphAnalysis>,
    multiword_max_words: usize,
    // derived lookups used by sense-rule compilation and derivation filtering
    lemma_pos: BTreeMap<String, BTreeSet<Pos>>,
    lemma_traits: BTreeMap<String, BTreeSet<String>>,
}

impl Lexicon {
    pub fn trait_inventory(&self) -> &BTreeSet<String> {
        &self.trait_inventory
    }

    pub fn has_surface(&self, surface: &str) -> bool {
        self.entries.contains_key(surface) || self.lower.contains_key(&lower(surface))
    }

    fn readings(&self, surface: &str) -> Option<&[MorphAnalysis]> {
        if let Some(rs) = self.entries.get(surface) {
            return Some(rs);
        }
        self.lower.get(&lower(surface)).map(|rs| rs.as_slice())
    }

    pub fn is_multiword(&self, joined_lower: &str) -> bool {
        self.multiword.contains_key(joined_lower)
    }

    pub fn multiword_max_words(&self) -> usize {
        self.multiword_max_words
    }

    /// All lemmas attested with the given part of speech.
    pub fn lemma_has_pos(&self, lemma: &str, pos: Pos) -> bool {
        self.lemma_pos.get(lemma).is_some_and(|ps| ps.contains(&pos))
    }

    pub fn poses_of_lemma(&self, lemma: &str) -> BTreeSet<Pos> {
        self.lemma_pos.get(lemma).cloned().unwrap_or_default()
    }

    /// Union of the semantic traits of every reading of `lemma`.
    pub fn traits_of_lemma(&self, lemma: &str) -> BTreeSet<String> {
        self.lemma_traits.get(lemma).cloned().unwrap_or_default()
    }

    pub fn lemmas(&self) -> impl Iterator<Item = &str> {
        self.lemma_pos.keys().map(String::as_str)
    }
}

fn lower(s: &str) -> String {
    s.to_lowercase()
}

/// NFC, typographic apostrophes to ASCII, whitespace runs to single spaces.
/// Case is preserved: it is the only cue for proper nouns downstream.
pub fn normalize(raw: &str) -> String {
    let mut out = String::with_capacity(raw.len());
    let mut in_space = false;
    for c in raw.nfc() {
        let c = match c {
            '\u{2019}' | '\u{02BC}' => '\'',
            c => c,
        };
        if c.is_whitespace() {
            in_space = true;
            continue;
        }
        if in_space && !out.is_empty() {
            out.push(' ');
        }
        in_space = false;
        out.push(c);
    }
    out
}

const ELISION_PREFIXES: [&str; 12] = [
    "l'", "d'", "j'", "n'", "m'", "s'", "t'", "c'", "qu'", "jusqu'", "lorsqu'", "puisqu'",
];

const HYPHEN_CLITICS: [&str; 10] = [
    "il", "elle", "on", "ils", "elles", "je", "tu", "nous", "vous", "ce",
];

fn is_word_char(c: char) -> bool {
    c.is_alphanumeric() || c == '\'' || c == '-'
}

fn is_punct_surface(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| !c.is_alphanumeric() && !c.is_whitespace())
}

// Elided clitics and inverted subject clitics are detached unless the whole
// word is itself a lexicon entry (aujourd'hui, beau-père).
fn split_word(word: &str, offset: usize, lex: &Lexicon, out: &mut Vec<(String, usize)>) {
    if word.is_empty() {
        return;
    }
    if lex.has_surface(word) {
        out.push((word.to_string(), offset));
        return;
    }
    if let Some(apos) = word.find('\'') {
        let prefix = &word[..=apos];
        if ELISION_PREFIXES.contains(&lower(prefix).as_str()) {
            out.push((prefix.to_string(), offset));
            let prefix_chars = prefix.chars().count();
            split_word(&word[apos + 1..], offset + prefix_chars, lex, out);
            return;
        }
    }
    if let Some(dash) = word.rfind('-') {
        let suffix = &word[dash + 1..];
        if HYPHEN_CLITICS.contains(&lower(suffix).as_str()) {
            let mut left = &word[..dash];
            // euphonic t, as in "a-t-il": not a token, just a separator
            if let Some(stripped) = left.strip_suffix("-t") {
                left = stripped;
            }
            split_word(left, offset, lex, out);
            let suffix_offset = offset + word[..=dash].chars().count();
            out.push((suffix.to_string(), suffix_offset));
            return;
        }
    }
    out.push((word.to_string(), offset));
}

/// Tokenize normalized text into sentences of [`Token`]s. Sentence boundary:
/// one of `. ! ?` followed by a space and a capital, or by end of input.
pub fn tokenize(text: &str, lexicon: &Lexicon) -> Vec<Vec<Token>> {
    let chars: Vec<char> = text.chars().collect();
    let mut raw: Vec<(String, usize)> = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if is_word_char(c) {
            let start = i;
            while i < chars.len() && is_word_char(chars[i]) {
                i += 1;
            }
            let word: String = chars[start..i].iter().collect();
            split_word(&word, start, lexicon, &mut raw);
        } else {
            raw.push((c.to_string(), i));
            i += 1;
        }
    }

    let merged = merge_multiwords(raw, &chars, lexicon);

    let mut sentences: Vec<Vec<Token>> = vec![Vec::new()];
    for (j, (surface, offset)) in merged.iter().enumerate() {
        let sentence_index = sentences.len() - 1;
        sentences.last_mut().unwrap().push(Token {
            surface: surface.clone(),
            char_offset: *offset,
            sentence_index,
        });
        if matches!(surface.as_str(), "." | "!" | "?") {
            let splits = match merged.get(j + 1) {
                None => false,
                Some((next, next_off)) => {
                    *next_off > offset + 1
                        && next.chars().next().is_some_and(char::is_uppercase)
                }
            };
            if splits {
                sentences.push(Vec::new());
            }
        }
    }
    sentences.retain(|s| !s.is_empty());
    sentences
}

fn merge_multiwords(
    raw: Vec<(String, usize)>,
    chars: &[char],
    lex: &Lexicon,
) -> Vec<(String, usize)> {
    let max = lex.multiword_max_words();
    if max < 2 {
        return raw;
    }
    let mut out = Vec::with_capacity(raw.len());
    let mut i = 0;
    while i < raw.len() {
        let mut took = 1;
        let upper = max.min(raw.len() - i);
        for k in (2..=upper).rev() {
            let joined = lower(
                &raw[i..i + k]
                    .iter()
                    .map(|(s, _)| s.as_str())
                    .collect::<Vec<_>>()
                    .join(" "),
            );
            if lex.is_multiword(&joined) {
                let start = raw[i].1;
                let (last_surface, last_off) = &raw[i + k - 1];
                let end = last_off + last_surface.chars().count();
                let surface: String = chars[start..end].iter().collect();
                out.push((surface, start));
                took = k;
                break;
            }
        }
        if took == 1 {
            out.push(raw[i].clone());
        }
        i += took;
    }
    out
}

/// Every reading the lexicon has for this token. Out-of-lexicon forms fall
/// back to a single Proper reading when capitalized, Noun otherwise; an
/// in-lexicon capitalized form that is not sentence-initial gains one extra
/// Proper reading so names that double as common words stay reachable.
pub fn analyze(token: &Token, first_in_sentence: bool, lexicon: &Lexicon) -> AnalyzedToken {
    let surface = token.surface.as_str();
    let mut analyses: Vec<MorphAnalysis>;

    if is_punct_surface(surface) {
        analyses = vec![MorphAnalysis {
            lemma: surface.to_string(),
            pos: Pos::Punct,
            morph_features: BTreeSet::new(),
            semantic_traits: BTreeSet::new(),
        }];
        return AnalyzedToken { token: token.clone(), analyses };
    }

    if surface.contains(' ') {
        if let Some(m) = lexicon.multiword.get(&lower(surface)) {
            return AnalyzedToken { token: token.clone(), analyses: vec![m.clone()] };
        }
    }

    let capitalized = surface.chars().next().is_some_and(char::is_uppercase);
    match lexicon.readings(surface) {
        Some(rs) => {
            analyses = rs.to_vec();
            let has_proper = analyses.iter().any(|a| a.pos == Pos::Proper);
            if capitalized && !first_in_sentence && !has_proper {
                analyses.push(proper_reading(surface));
            }
        }
        None => {
            analyses = vec![if capitalized {
                proper_reading(surface)
            } else {
                MorphAnalysis {
                    lemma: surface.to_string(),
                    pos: Pos::Noun,
                    morph_features: BTreeSet::new(),
                    semantic_traits: BTreeSet::new(),
                }
            }];
        }
    }

    AnalyzedToken { token: token.clone(), analyses }
}

fn proper_reading(surface: &str) -> MorphAnalysis {
    MorphAnalysis {
        lemma: surface.to_string(),
        pos: Pos::Proper,
        morph_features: BTreeSet::new(),
        semantic_traits: BTreeSet::from(["proper".to_string()]),
    }
}

pub fn analyze_sentence(sentence: &[Token], lexicon: &Lexicon) -> Vec<AnalyzedToken> {
    sentence
        .iter()
        .enumerate()
        .map(|(i, t)| analyze(t, i == 0, lexicon))
        .collect()
}

/// Load a TSV lexicon. Header `#traits: T1 T2 ...` declares the closed trait
/// inventory; rows are `surface TAB lemma TAB pos TAB f1+f2 TAB t1,t2` with
/// the last two columns optional. `_` in the surface column joins the words
/// of a multiword entry.
pub fn load_lexicon(path: &Path) -> Result<Lexicon> {
    let data = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut lex = Lexicon::default();
    let mut seen: BTreeSet<(String, String, Pos, String)> = BTreeSet::new();

    for (lineno, line) in data.lines().enumerate() {
        let lineno = lineno + 1;
        let line = line.trim_end_matches(['\r']);
        if line.trim().is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("#traits:") {
            lex.trait_inventory = rest.split_whitespace().map(String::from).collect();
            continue;
        }
        if line.starts_with('#') {
            continue;
        }

        let cols: Vec<&str> = line.split('\t').collect();
        if cols.len() < 3 || cols.len() > 5 {
            return Err(Error::parse(
                path,
                lineno,
                format!("expected 3 to 5 tab-separated columns, got {}", cols.len()),
            ));
        }
        let surface = cols[0].trim();
        let lemma = cols[1].trim();
        if surface.is_empty() || lemma.is_empty() {
            return Err(Error::parse(path, lineno, "empty surface or lemma"));
        }
        let pos = Pos::from_str(cols[2].trim()).map_err(|e| Error::parse(path, lineno, e))?;
        let features: BTreeSet<String> = cols
            .get(3)
            .map(|c| c.split('+').filter(|f| !f.is_empty()).map(str::trim).map(String::from).collect())
            .unwrap_or_default();
        let traits: BTreeSet<String> = cols
            .get(4)
            .map(|c| c.split(',').filter(|t| !t.is_empty()).map(str::trim).map(String::from).collect())
            .unwrap_or_default();

        for t in &traits {
            if !lex.trait_inventory.contains(t) {
                return Err(Error::parse(
                    path,
                    lineno,
                    format!("trait {t:?} is not declared in the #traits: header"),
                ));
            }
        }

        let key = (
            surface.to_string(),
            lemma.to_string(),
            pos,
            features.iter().cloned().collect::<Vec<_>>().join("+"),
        );
        if !seen.insert(key) {
            continue;
        }

        let analysis = MorphAnalysis {
            lemma: lemma.to_string(),
            pos,
            morph_features: features,
            semantic_traits: traits,
        };

        lex.lemma_pos.entry(lemma.to_string()).or_default().insert(pos);
        lex.lemma_traits
            .entry(lemma.to_string())
            .or_default()
            .extend(analysis.semantic_traits.iter().cloned());

        if surface.contains('_') {
            let joined = lower(&surface.replace('_', " "));
            let words = joined.split(' ').count();
            lex.multiword_max_words = lex.multiword_max_words.max(words);
            lex.multiword.insert(joined, analysis);
        } else {
            lex.entries
                .entry(surface.to_string())
                .or_default()
                .push(analysis.clone());
            lex.lower.entry(lower(surface)).or_default().push(analysis);
        }
    }
    Ok(lex)
}
