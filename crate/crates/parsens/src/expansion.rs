//! Sense-filtered enrichment of parsed sentences. Three mechanisms, all
//! keyed by the `sn=k` trait WSD wrote, so an unresolved word never expands:
//!
//! * synonym substitution: the selected sense's synonyms become in-place
//!   alternatives for the node;
//! * valency remapping: a synonym whose own subcat frame disagrees with the
//!   dependency it would land in gets its own rewritten dependency instead;
//! * derivation: morphologically related words attested in the lexicon
//!   (succéder > successeur) rewrite the verbal structure into its nominal
//!   counterpart through a small pattern language.
//!
//! Nothing here mutates the sentence graph. The result is a side table the
//! index multiplies postings from and the matcher consults.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lexicon::{Lexicon, Pos};
use crate::parser::{label_of, Dependency, SentenceGraph, Tag, DEP_NAMES};
use crate::sensedict::{DerivationCode, SenseDictionary, Subcat};
use crate::wsd::sense_of_traits;

#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Original,
    Synonym,
    Derived,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Provenance::Original => "original",
            Provenance::Synonym => "synonym",
            Provenance::Derived => "derived",
        })
    }
}

/// One end of an expanded dependency: a node of the sentence, or a word the
/// expansion introduced that has no position in the text.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EndRef {
    Node(usize),
    Virtual(String),
}

impl EndRef {
    pub fn lemma<'a>(&'a self, graph: &'a SentenceGraph) -> &'a str {
        match self {
            EndRef::Node(id) => &graph.node(*id).lemma,
            EndRef::Virtual(lemma) => lemma,
        }
    }

    pub fn node_id(&self) -> Option<usize> {
        match self {
            EndRef::Node(id) => Some(*id),
            EndRef::Virtual(_) => None,
        }
    }
}

/// Where an extra dependency came from, for trace output and debugging.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExtraOrigin {
    ValencyRemap { base_dep: usize },
    Derivation { pattern: usize, template: usize, base_dep: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ExtraDep {
    pub name: String,
    pub tags: BTreeSet<Tag>,
    pub head: EndRef,
    pub dependent: EndRef,
    /// Mediators of rewritten dependencies are plain lemmas; they never bind
    /// a node even when the sentence happens to contain the word.
    pub mediator: Option<String>,
    pub provenance: Provenance,
    pub origin: ExtraOrigin,
}

impl ExtraDep {
    pub fn label(&self) -> String {
        label_of(&self.name, &self.tags)
    }

    pub fn signature(&self, graph: &SentenceGraph) -> String {
        match &self.mediator {
            Some(m) => format!(
                "{}({}, {}, {})",
                self.label(),
                self.head.lemma(graph),
                m,
                self.dependent.lemma(graph)
            ),
            None => format!(
                "{}({}, {})",
                self.label(),
                self.head.lemma(graph),
                self.dependent.lemma(graph)
            ),
        }
    }
}

/// Everything expansion adds to one sentence.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Expansion {
    /// node id -> alternative lemma -> how it got there.
    pub alternatives: BTreeMap<usize, BTreeMap<String, Provenance>>,
    pub extra_deps: Vec<ExtraDep>,
    /// (base dependency index, node id, lemma): this alternative was moved
    /// to a rewritten dependency and must not multiply into the base one.
    pub suppressions: BTreeSet<(usize, usize, String)>,
}

impl Expansion {
    pub fn is_empty(&self) -> bool {
        self.alternatives.is_empty() && self.extra_deps.is_empty() && self.suppressions.is_empty()
    }

    /// Alternatives of `node_id` admitted on base dependency `dep_idx`.
    pub fn alternatives_on(
        &self,
        dep_idx: usize,
        node_id: usize,
    ) -> impl Iterator<Item = (&str, Provenance)> {
        self.alternatives
            .get(&node_id)
            .into_iter()
            .flatten()
            .filter(move |(lemma, _)| {
                !self.suppressions.contains(&(dep_idx, node_id, (*lemma).clone()))
            })
            .map(|(lemma, prov)| (lemma.as_str(), *prov))
    }

    fn push_extra(&mut self, extra: ExtraDep) {
        if !self.extra_deps.contains(&extra) {
            self.extra_deps.push(extra);
        }
    }
}

// ---------------------------------------------------------------------------
// external synonym sources

/// One flat synonym list: no senses, no part of speech, just
/// `lemma<TAB>candidate,candidate`. Redistribution decides which dictionary
/// senses each candidate may join.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SynonymLexicon {
    pub label: String,
    entries: BTreeMap<String, BTreeSet<String>>,
}

impl SynonymLexicon {
    pub fn iter(&self) -> impl Iterator<Item = (&str, &BTreeSet<String>)> {
        self.entries.iter().map(|(l, c)| (l.as_str(), c))
    }

    pub fn candidates_of(&self, lemma: &str) -> impl Iterator<Item = &str> {
        self.entries
            .get(lemma)
            .into_iter()
            .flatten()
            .map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

pub fn load_synonym_lexicon(path: &Path) -> Result<SynonymLexicon> {
    let data = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let label = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string());
    parse_synonym_lexicon(&data, label, path)
}

fn parse_synonym_lexicon(data: &str, label: String, path: &Path) -> Result<SynonymLexicon> {
    let mut entries: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
    for (lineno, line) in data.lines().enumerate() {
        let lineno = lineno + 1;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (lemma, rest) = line
            .split_once('\t')
            .ok_or_else(|| Error::parse(path, lineno, "expected lemma<TAB>synonyms"))?;
        let lemma = lemma.trim();
        if lemma.is_empty() {
            return Err(Error::parse(path, lineno, "empty lemma"));
        }
        let candidates = entries.entry(lemma.to_string()).or_default();
        for cand in rest.split(',').map(str::trim).filter(|c| !c.is_empty()) {
            if cand == lemma {
                return Err(Error::parse(
                    path,
                    lineno,
                    format!("{lemma:?} lists itself as a synonym"),
                ));
            }
            candidates.insert(cand.to_string());
        }
    }
    Ok(SynonymLexicon { label, entries })
}

/// An external candidate that could not be sense-filtered because the
/// dictionary does not know the word at all.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct SkipReport {
    pub source: String,
    pub lemma: String,
    pub candidate: String,
}

impl fmt::Display for SkipReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {} -> {} skipped (not a dictionary headword)",
            self.source, self.lemma, self.candidate
        )
    }
}

/// Merge external synonym lists into the dictionary, sense by sense.
///
/// A sense's own synonym column is trusted as written. An external candidate
/// joins a sense only when the candidate's class tags, unioned over every
/// dictionary sense it has under any part of speech, intersect that sense's
/// tags. Candidates the dictionary has never heard of are reported, not
/// guessed at.
pub fn redistribute_synonyms(
    dict: &SenseDictionary,
    external: &[SynonymLexicon],
) -> (SenseDictionary, Vec<SkipReport>) {
    let mut out = dict.clone();
    let mut skipped = BTreeSet::new();

    for lex in external {
        for (lemma, candidates) in lex.iter() {
            if !dict.contains_lemma(lemma) {
                continue;
            }
            for cand in candidates {
                if !dict.contains_lemma(cand) {
                    skipped.insert(SkipReport {
                        source: lex.label.clone(),
                        lemma: lemma.to_string(),
                        candidate: cand.clone(),
                    });
                    continue;
                }
                let cand_tags: BTreeSet<&str> = dict
                    .senses_of_any_pos(cand)
                    .iter()
                    .flat_map(|s| s.class_tags.iter().map(String::as_str))
                    .collect();
                for sense in out.senses_mut() {
                    if sense.lemma == lemma
                        && sense.class_tags.iter().any(|t| cand_tags.contains(t.as_str()))
                    {
                        sense.synonyms.push(cand.clone());
                    }
                }
            }
        }
    }

    for sense in out.senses_mut() {
        sense.synonyms.sort();
        sense.synonyms.dedup();
    }
    (out, skipped.into_iter().collect())
}

// ---------------------------------------------------------------------------
// derivation morphology

/// Inflectional endings worth peeling off before trying nominal suffixes.
/// Every ending that matches is tried; over-generation is deliberate, since
/// only lexicon-attested results survive.
const STRIP_ENDINGS: [&str; 6] = ["attre", "éder", "er", "re", "ir", "e"];

const SUFFIXES: [&str; 8] = ["esseur", "isseur", "eur", "e", "at", "ation", "ement", "age"];

pub fn derivation_candidates(lemma: &str) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    for ending in STRIP_ENDINGS {
        if let Some(stem) = lemma.strip_suffix(ending) {
            if stem.is_empty() {
                continue;
            }
            for suffix in SUFFIXES {
                out.insert(format!("{stem}{suffix}"));
            }
        }
    }
    out
}

/// Candidates that satisfy one derivation code and exist in the lexicon as
/// lemmas of the code's target part of speech.
pub fn attested_derivations(
    lemma: &str,
    code: &DerivationCode,
    lexicon: &Lexicon,
) -> Vec<String> {
    let bare_suffix = &code.suffix[1..];
    derivation_candidates(lemma)
        .into_iter()
        .filter(|c| {
            c != lemma
                && c.ends_with(bare_suffix)
                && lexicon.poses_of_lemma(c).contains(&code.target_pos)
                && code.root_hint.as_deref().is_none_or(|h| c.starts_with(h))
        })
        .collect()
}

// ---------------------------------------------------------------------------
// derivation patterns

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Term {
    SelfWord,
    Co,
    Subj,
    Derived,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Arg {
    Var(Term),
    Literal(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct DepShape {
    name: String,
    tags: BTreeSet<Tag>,
    head: Arg,
    mediator: Option<Arg>,
    dependent: Arg,
}

/// `source>target : MATCH => TEMPLATE ; TEMPLATE`. The match side is tested
/// against base dependencies with `$self` fixed to the word being derived;
/// each template emits one rewritten dependency per match.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivationPattern {
    pub source_pos: Pos,
    pub target_pos: Pos,
    matcher: DepShape,
    templates: Vec<DepShape>,
}

pub fn load_derivation_patterns(path: &Path) -> Result<Vec<DerivationPattern>> {
    let data = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_derivation_patterns(&data, path)
}

pub fn parse_derivation_patterns(data: &str, path: &Path) -> Result<Vec<DerivationPattern>> {
    let mut patterns = Vec::new();
    for (lineno, line) in data.lines().enumerate() {
        let lineno = lineno + 1;
        let err = |msg: String| Error::parse(path, lineno, msg);
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }

        let (header, rest) = line
            .split_once(':')
            .ok_or_else(|| err("expected 'source>target : match => templates'".into()))?;
        let (source, target) = header
            .trim()
            .split_once('>')
            .ok_or_else(|| err(format!("bad header {:?}, expected Pos>Pos", header.trim())))?;
        let source_pos = Pos::from_str(source.trim()).map_err(err)?;
        let target_pos = Pos::from_str(target.trim()).map_err(err)?;

        let (match_src, templates_src) = rest
            .split_once("=>")
            .ok_or_else(|| err("missing '=>' between match and templates".into()))?;
        let matcher = parse_dep_shape(match_src.trim(), &err)?;
        for arg in shape_args(&matcher) {
            match arg {
                Arg::Var(Term::Subj) => {
                    return Err(err("$subj can only be bound by templates".into()))
                }
                Arg::Var(Term::Derived) => {
                    return Err(err("$derived does not exist on the match side".into()))
                }
                _ => {}
            }
        }
        if !shape_args(&matcher).iter().any(|a| **a == Arg::Var(Term::SelfWord)) {
            return Err(err("match side must mention $self".into()));
        }
        let matcher_binds_co =
            shape_args(&matcher).iter().any(|a| **a == Arg::Var(Term::Co));

        let mut templates = Vec::new();
        for tpl_src in templates_src.split(';') {
            let tpl = parse_dep_shape(tpl_src.trim(), &err)?;
            if !matcher_binds_co && shape_args(&tpl).iter().any(|a| **a == Arg::Var(Term::Co)) {
                return Err(err("template uses $co but the match side never binds it".into()));
            }
            if let Some(Arg::Var(_)) = tpl.mediator {
                return Err(err("template mediators must be literal words".into()));
            }
            templates.push(tpl);
        }
        if templates.is_empty() {
            return Err(err("pattern has no templates".into()));
        }
        patterns.push(DerivationPattern { source_pos, target_pos, matcher, templates });
    }
    Ok(patterns)
}

fn shape_args(shape: &DepShape) -> Vec<&Arg> {
    let mut args = vec![&shape.head, &shape.dependent];
    if let Some(m) = &shape.mediator {
        args.push(m);
    }
    args
}

fn parse_dep_shape(src: &str, err: &impl Fn(String) -> Error) -> Result<DepShape> {
    let open = src
        .find('(')
        .ok_or_else(|| err(format!("bad dependency {src:?}")))?;
    let close = src
        .rfind(')')
        .filter(|c| *c > open && src[c + 1..].trim().is_empty())
        .ok_or_else(|| err(format!("bad dependency {src:?}")))?;

    let label = src[..open].trim();
    let (name, tags) = match label.split_once('[') {
        None => (label, BTreeSet::new()),
        Some((name, rest)) => {
            let inner = rest
                .strip_suffix(']')
                .ok_or_else(|| err(format!("unclosed tag list in {label:?}")))?;
            let tags = inner
                .split(',')
                .map(str::trim)
                .filter(|t| !t.is_empty())
                .map(|t| Tag::from_str(t).map_err(err))
                .collect::<Result<BTreeSet<Tag>>>()?;
            (name, tags)
        }
    };
    if !DEP_NAMES.contains(&name) || name == "FOCUS" {
        return Err(err(format!("unknown dependency name {name:?}")));
    }

    let args: Vec<Arg> = src[open + 1..close]
        .split(',')
        .map(str::trim)
        .map(|a| parse_arg(a, err))
        .collect::<Result<Vec<_>>>()?;
    let indir = tags.contains(&Tag::Indir);
    let (head, mediator, dependent) = match (args.len(), indir) {
        (2, false) => (args[0].clone(), None, args[1].clone()),
        (3, true) => (args[0].clone(), Some(args[1].clone()), args[2].clone()),
        (n, true) => return Err(err(format!("INDIR dependencies take 3 arguments, got {n}"))),
        (n, false) => return Err(err(format!("expected 2 arguments, got {n}"))),
    };
    Ok(DepShape { name: name.to_string(), tags, head, mediator, dependent })
}

fn parse_arg(src: &str, err: &impl Fn(String) -> Error) -> Result<Arg> {
    if let Some(var) = src.strip_prefix('$') {
        let term = match var {
            "self" => Term::SelfWord,
            "co" => Term::Co,
            "subj" => Term::Subj,
            "derived" => Term::Derived,
            _ => return Err(err(format!("unknown variable ${var}"))),
        };
        Ok(Arg::Var(term))
    } else if src.is_empty() {
        Err(err("empty argument".into()))
    } else {
        Ok(Arg::Literal(src.to_string()))
    }
}

// ---------------------------------------------------------------------------
// the expansion pass

/// Expand one sense-annotated sentence. Nodes without an `sn=k` trait (or
/// whose recorded sense the dictionary no longer has) contribute nothing.
pub fn expand_graph(
    graph: &SentenceGraph,
    dict: &SenseDictionary,
    patterns: &[DerivationPattern],
    lexicon: &Lexicon,
) -> Expansion {
    let mut exp = Expansion::default();

    for node in &graph.nodes {
        let Some(k) = sense_of_traits(&node.traits) else { continue };
        let Some(sense) = dict.get(&node.lemma, node.pos, k) else { continue };

        for syn in &sense.synonyms {
            exp.alternatives
                .entry(node.node_id)
                .or_default()
                .insert(syn.clone(), Provenance::Synonym);
        }

        for syn in &sense.synonyms {
            let Some(frame) = synonym_frame(dict, syn, node.pos, &sense.class_tags) else {
                continue;
            };
            for (idx, dep) in graph.dependencies.iter().enumerate() {
                if dep.name != "VARG" || dep.head != node.node_id {
                    continue;
                }
                if dep_frame(dep, graph).as_ref() == Some(&frame) {
                    continue;
                }
                exp.suppressions.insert((idx, node.node_id, syn.clone()));
                let (tags, mediator) = match &frame {
                    Frame::Direct => ([Tag::Dir].into(), None),
                    Frame::Indirect(prep) => ([Tag::Indir].into(), Some(prep.clone())),
                };
                exp.push_extra(ExtraDep {
                    name: "VARG".into(),
                    tags,
                    head: EndRef::Virtual(syn.clone()),
                    dependent: EndRef::Node(dep.dependent),
                    mediator,
                    provenance: Provenance::Synonym,
                    origin: ExtraOrigin::ValencyRemap { base_dep: idx },
                });
            }
        }

        let subj = graph
            .dependencies
            .iter()
            .find(|d| d.name == "SUBJ" && d.head == node.node_id)
            .map(|d| d.dependent);
        for code in &sense.derivation_codes {
            for derived in attested_derivations(&node.lemma, code, lexicon) {
                for (p_idx, pattern) in patterns.iter().enumerate() {
                    if pattern.source_pos != node.pos || pattern.target_pos != code.target_pos {
                        continue;
                    }
                    for (dep_idx, co) in match_pattern(&pattern.matcher, graph, node.node_id) {
                        for (t_idx, tpl) in pattern.templates.iter().enumerate() {
                            let Some((head, mediator, dependent)) =
                                instantiate(tpl, &derived, node.node_id, co, subj)
                            else {
                                continue;
                            };
                            exp.push_extra(ExtraDep {
                                name: tpl.name.clone(),
                                tags: tpl.tags.clone(),
                                head,
                                dependent,
                                mediator,
                                provenance: Provenance::Derived,
                                origin: ExtraOrigin::Derivation {
                                    pattern: p_idx,
                                    template: t_idx,
                                    base_dep: dep_idx,
                                },
                            });
                        }
                    }
                }
            }
        }
    }
    exp
}

#[derive(PartialEq, Eq)]
enum Frame {
    Direct,
    Indirect(String),
}

/// The frame a synonym expects, read off its own dictionary entry: lowest
/// sense under the same part of speech whose class tags meet the current
/// sense's. Unknown words and frameless senses yield nothing, which leaves
/// the synonym substituting in place.
fn synonym_frame(
    dict: &SenseDictionary,
    synonym: &str,
    pos: Pos,
    sense_tags: &BTreeSet<String>,
) -> Option<Frame> {
    let sense = dict
        .senses_of(synonym, pos)
        .iter()
        .find(|s| !s.class_tags.is_disjoint(sense_tags))?;
    match sense.subcat.as_ref()? {
        Subcat::Intransitive => None,
        Subcat::TransitiveDirect { .. } => Some(Frame::Direct),
        Subcat::TransitiveIndirect { preposition, .. } => {
            Some(Frame::Indirect(preposition.clone()))
        }
    }
}

fn dep_frame(dep: &Dependency, graph: &SentenceGraph) -> Option<Frame> {
    if dep.tags.contains(&Tag::Dir) {
        Some(Frame::Direct)
    } else if dep.tags.contains(&Tag::Indir) {
        dep.mediator.map(|m| Frame::Indirect(graph.node(m).lemma.clone()))
    } else {
        None
    }
}

/// Base dependencies the match side accepts with `$self` pinned to
/// `node_id`; each hit reports the dependency index and the `$co` binding.
fn match_pattern(
    matcher: &DepShape,
    graph: &SentenceGraph,
    node_id: usize,
) -> Vec<(usize, Option<usize>)> {
    let mut hits = Vec::new();
    'deps: for (idx, dep) in graph.dependencies.iter().enumerate() {
        if dep.name != matcher.name || dep.tags != matcher.tags {
            continue;
        }
        match (&matcher.mediator, dep.mediator) {
            (None, None) => {}
            (Some(Arg::Literal(want)), Some(m)) if graph.node(m).lemma == *want => {}
            _ => continue,
        }
        let mut co = None;
        for (arg, end) in [(&matcher.head, dep.head), (&matcher.dependent, dep.dependent)] {
            match arg {
                Arg::Var(Term::SelfWord) => {
                    if end != node_id {
                        continue 'deps;
                    }
                }
                Arg::Var(Term::Co) => co = Some(end),
                Arg::Literal(want) => {
                    if graph.node(end).lemma != *want {
                        continue 'deps;
                    }
                }
                Arg::Var(_) => unreachable!("rejected at load"),
            }
        }
        hits.push((idx, co));
    }
    hits
}

/// Fill one template. `None` when it needs a binding the sentence lacks
/// (a subjectless clause asked for `$subj`).
fn instantiate(
    tpl: &DepShape,
    derived: &str,
    node_id: usize,
    co: Option<usize>,
    subj: Option<usize>,
) -> Option<(EndRef, Option<String>, EndRef)> {
    let end = |arg: &Arg| -> Option<EndRef> {
        Some(match arg {
            Arg::Var(Term::SelfWord) => EndRef::Node(node_id),
            Arg::Var(Term::Derived) => EndRef::Virtual(derived.to_string()),
            Arg::Var(Term::Co) => EndRef::Node(co?),
            Arg::Var(Term::Subj) => EndRef::Node(subj?),
            Arg::Literal(lemma) => EndRef::Virtual(lemma.clone()),
        })
    };
    let head = end(&tpl.head)?;
    let dependent = end(&tpl.dependent)?;
    let mediator = match &tpl.mediator {
        None => None,
        Some(Arg::Literal(lemma)) => Some(lemma.clone()),
        Some(Arg::Var(_)) => unreachable!("rejected at load"),
    };
    Some((head, mediator, dependent))
}
