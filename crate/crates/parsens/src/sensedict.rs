//! Sense-distributed dictionary. Everything the pipeline knows about a word
//! beyond morphology hangs off (lemma, pos, sense number): class tags,
//! subcategorization, example sentences, synonyms, derivation codes.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lexicon::Pos;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Subcat {
    Intransitive,
    /// `T` / `T:trait`: direct object, optionally constrained to a trait.
    TransitiveDirect { object_trait: Option<String> },
    /// `Ti:prep` / `Ti:prep:trait`: object introduced by a preposition.
    TransitiveIndirect { preposition: String, object_trait: Option<String> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DerivationCode {
    /// Keeps its leading `-`; the derived lemma must end with the rest.
    pub suffix: String,
    pub target_pos: Pos,
    pub root_hint: Option<String>,
}

impl fmt::Display for DerivationCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}>{}", self.suffix, self.target_pos)?;
        if let Some(hint) = &self.root_hint {
            write!(f, ":{hint}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SenseEntry {
    pub lemma: String,
    pub pos: Pos,
    pub sense_no: usize,
    pub gloss: String,
    pub class_tags: BTreeSet<String>,
    pub subcat: Option<Subcat>,
    pub examples: Vec<String>,
    pub synonyms: Vec<String>,
    pub derivation_codes: Vec<DerivationCode>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SenseDictionary {
    entries: BTreeMap<(String, Pos), Vec<SenseEntry>>,
}

impl SenseDictionary {
    /// All senses, in sense_no order; empty for unknown words.
    pub fn senses_of(&self, lemma: &str, pos: Pos) -> &[SenseEntry] {
        self.entries
            .get(&(lemma.to_string(), pos))
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    pub fn get(&self, lemma: &str, pos: Pos, sense_no: usize) -> Option<&SenseEntry> {
        self.senses_of(lemma, pos).iter().find(|s| s.sense_no == sense_no)
    }

    /// Senses under any part of speech, for sources that do not mark POS.
    pub fn senses_of_any_pos(&self, lemma: &str) -> Vec<&SenseEntry> {
        self.entries
            .iter()
            .filter(|((l, _), _)| l == lemma)
            .flat_map(|(_, senses)| senses.iter())
            .collect()
    }

    pub fn contains_lemma(&self, lemma: &str) -> bool {
        !self.senses_of_any_pos(lemma).is_empty()
    }

    /// Every sense of every headword, headwords in lemma order.
    pub fn iter(&self) -> impl Iterator<Item = &SenseEntry> {
        self.entries.values().flatten()
    }

    pub fn headword_count(&self) -> usize {
        self.entries.len()
    }

    pub(crate) fn senses_mut(&mut self) -> impl Iterator<Item = &mut SenseEntry> {
        self.entries.values_mut().flatten()
    }

    fn insert(&mut self, entry: SenseEntry) -> bool {
        let senses = self
            .entries
            .entry((entry.lemma.clone(), entry.pos))
            .or_default();
        if senses.iter().any(|s| s.sense_no == entry.sense_no) {
            return false;
        }
        senses.push(entry);
        true
    }

    /// Rows in the loadable CSV format, iteration order.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for s in self.iter() {
            let subcat = match &s.subcat {
                None => String::new(),
                Some(Subcat::Intransitive) => "I".into(),
                Some(Subcat::TransitiveDirect { object_trait: None }) => "T".into(),
                Some(Subcat::TransitiveDirect { object_trait: Some(t) }) => format!("T:{t}"),
                Some(Subcat::TransitiveIndirect { preposition, object_trait: None }) => {
                    format!("Ti:{preposition}")
                }
                Some(Subcat::TransitiveIndirect { preposition, object_trait: Some(t) }) => {
                    format!("Ti:{preposition}:{t}")
                }
            };
            let tags: Vec<&str> = s.class_tags.iter().map(String::as_str).collect();
            let codes: Vec<String> = s.derivation_codes.iter().map(|c| c.to_string()).collect();
            out.push_str(&format!(
                "{};{};{};{};{};{};{};{};{}\n",
                s.lemma,
                s.pos,
                s.sense_no,
                s.gloss,
                tags.join(","),
                subcat,
                s.examples.join("|"),
                s.synonyms.join(","),
                codes.join(",")
            ));
        }
        out
    }
}

pub fn load_sensedict(path: &Path) -> Result<SenseDictionary> {
    let data = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_sensedict(&data, path)
}

/// Parse dictionary rows held in memory; diagnostics name the source `<str>`.
pub fn load_sensedict_str(data: &str) -> Result<SenseDictionary> {
    parse_sensedict(data, Path::new("<str>"))
}

fn parse_sensedict(data: &str, path: &Path) -> Result<SenseDictionary> {
    let mut dict = SenseDictionary::default();

    for (lineno, line) in data.lines().enumerate() {
        let lineno = lineno + 1;
        let err = |msg: String| Error::parse(path, lineno, msg);
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }

        let cols: Vec<&str> = line.split(';').map(str::trim).collect();
        if cols.len() != 9 {
            return Err(err(format!("expected 9 ';'-separated fields, got {}", cols.len())));
        }
        let lemma = cols[0].to_string();
        if lemma.is_empty() {
            return Err(err("empty lemma".into()));
        }
        let pos = Pos::from_str(cols[1]).map_err(err)?;
        let sense_no: usize = cols[2]
            .parse()
            .map_err(|_| err(format!("sense number {:?} is not a positive integer", cols[2])))?;
        if sense_no == 0 {
            return Err(err("sense numbers start at 1".into()));
        }
        let class_tags: BTreeSet<String> = cols[4]
            .split(',')
            .map(str::trim)
            .filter(|t| !t.is_empty())
            .map(String::from)
            .collect();
        if class_tags.is_empty() {
            return Err(err(format!("sense {lemma}/{sense_no} has no class tags")));
        }
        let subcat = parse_subcat(cols[5]).map_err(err)?;
        let examples: Vec<String> = cols[6]
            .split('|')
            .map(str::trim)
            .filter(|e| !e.is_empty())
            .map(String::from)
            .collect();
        let synonyms: Vec<String> = cols[7]
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(String::from)
            .collect();
        let derivation_codes = cols[8]
            .split(',')
            .map(str::trim)
            .filter(|c| !c.is_empty())
            .map(parse_derivation_code)
            .collect::<std::result::Result<Vec<_>, String>>()
            .map_err(err)?;

        let entry = SenseEntry {
            lemma: lemma.clone(),
            pos,
            sense_no,
            gloss: cols[3].to_string(),
            class_tags,
            subcat,
            examples,
            synonyms,
            derivation_codes,
        };
        if !dict.insert(entry) {
            return Err(err(format!("duplicate sense ({lemma}, {pos}, {sense_no})")));
        }
    }

    // senses may arrive in any order but must number 1..n once sorted
    for ((lemma, pos), senses) in &mut dict.entries {
        senses.sort_by_key(|s| s.sense_no);
        for (i, s) in senses.iter().enumerate() {
            if s.sense_no != i + 1 {
                return Err(Error::parse(
                    path,
                    0,
                    format!(
                        "senses of ({lemma}, {pos}) are not contiguous from 1: found sense {} at position {}",
                        s.sense_no,
                        i + 1
                    ),
                ));
            }
        }
    }
    Ok(dict)
}

fn parse_subcat(src: &str) -> std::result::Result<Option<Subcat>, String> {
    if src.is_empty() {
        return Ok(None);
    }
    let parts: Vec<&str> = src.split(':').collect();
    Ok(Some(match (parts[0], parts.len()) {
        ("I", 1) => Subcat::Intransitive,
        ("T", 1) => Subcat::TransitiveDirect { object_trait: None },
        ("T", 2) => Subcat::TransitiveDirect { object_trait: Some(parts[1].to_string()) },
        ("Ti", 2) => Subcat::TransitiveIndirect {
            preposition: parts[1].to_string(),
            object_trait: None,
        },
        ("Ti", 3) => Subcat::TransitiveIndirect {
            preposition: parts[1].to_string(),
            object_trait: Some(parts[2].to_string()),
        },
        _ => return Err(format!("unknown subcat {src:?}")),
    }))
}

fn parse_derivation_code(src: &str) -> std::result::Result<DerivationCode, String> {
    let (suffix, rest) = src
        .split_once('>')
        .ok_or_else(|| format!("derivation code {src:?} must look like -eur>Noun"))?;
    if !suffix.starts_with('-') || suffix.len() < 2 {
        return Err(format!("derivation suffix {suffix:?} must start with '-'"));
    }
    let (pos_src, root_hint) = match rest.split_once(':') {
        Some((p, h)) => (p, Some(h.to_string())),
        None => (rest, None),
    };
    Ok(DerivationCode {
        suffix: suffix.to_string(),
        target_pos: Pos::from_str(pos_src)?,
        root_hint,
    })
}
