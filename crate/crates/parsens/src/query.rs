//! Question answering over an index by light-structure matching.
//!
//! A parsed question is reduced to a light structure: its FOCUS mark is
//! pulled out as the answer slot, functional dependencies on the grammar's
//! drop list disappear, and each remaining dependency keeps only what
//! matching needs per end: a lemma (absent for interrogative words) and the
//! node's semantic traits.
//!
//! Matching is per sentence and authoritative: candidate records are found
//! through the lemma postings, then every light dependency is re-verified
//! against the record's own base and expanded dependencies. Each light
//! dependency takes the best-weighted match it can find; the sentence score
//! is coverage times the weakest accepted weight, so one far-fetched
//! rewrite caps the whole answer.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::expansion::{EndRef, Expansion, ExtraDep, Provenance};
use crate::index::Index;
use crate::lexicon::Pos;
use crate::parser::{label_of, Dependency, DropSpec, SentenceGraph, Tag};

/// Scoring knobs. Only weight ratios matter for ranking: scaling all three
/// weights by the same factor scales every score and changes no order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Weights {
    pub original: f64,
    pub synonym: f64,
    pub derived: f64,
    /// Minimum fraction of light dependencies a sentence must match.
    pub partial_match_threshold: f64,
}

impl Default for Weights {
    fn default() -> Self {
        Weights { original: 1.0, synonym: 0.7, derived: 0.5, partial_match_threshold: 0.5 }
    }
}

/// Weight of one matched dependency given the provenances involved.
/// Original is the baseline; every other provenance present multiplies in
/// once, as its ratio to the baseline.
pub fn provenance_weight(provs: &BTreeSet<Provenance>, w: &Weights) -> f64 {
    let mut weight = w.original;
    for p in provs {
        weight *= match p {
            Provenance::Original => continue,
            Provenance::Synonym => w.synonym / w.original,
            Provenance::Derived => w.derived / w.original,
        };
    }
    weight
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LightSlot {
    /// None for interrogative words, which match through traits instead.
    pub lemma: Option<String>,
    pub traits: BTreeSet<String>,
    pub focus: bool,
}

impl LightSlot {
    fn display(&self) -> String {
        match &self.lemma {
            Some(l) => l.clone(),
            None => {
                let traits: Vec<&str> = self.traits.iter().map(String::as_str).collect();
                format!("?[{}]", traits.join(","))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LightDependency {
    pub name: String,
    pub tags: BTreeSet<Tag>,
    pub head: LightSlot,
    pub mediator: Option<String>,
    pub dependent: LightSlot,
}

impl LightDependency {
    pub fn signature(&self) -> String {
        let label = label_of(&self.name, &self.tags);
        match &self.mediator {
            Some(m) => format!("{label}({}, {m}, {})", self.head.display(), self.dependent.display()),
            None => format!("{label}({}, {})", self.head.display(), self.dependent.display()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FocusInfo {
    pub node_id: usize,
    pub lemma: Option<String>,
    pub traits: BTreeSet<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LightStructure {
    pub question: String,
    pub deps: Vec<LightDependency>,
    pub focus: Option<FocusInfo>,
}

/// Reduce a parsed question. FOCUS becomes the answer slot, dropped
/// dependencies vanish (lemma wildcards only; tags are ignored on purpose),
/// everything else carries over.
pub fn light_structure(graph: &SentenceGraph, drops: &[DropSpec]) -> LightStructure {
    let focus_node = graph
        .dependencies
        .iter()
        .find(|d| d.name == "FOCUS")
        .map(|d| d.head);

    let slot = |id: usize| -> LightSlot {
        let node = graph.node(id);
        LightSlot {
            lemma: (node.pos != Pos::Interrog).then(|| node.lemma.clone()),
            traits: node.traits.clone(),
            focus: focus_node == Some(id),
        }
    };

    let dropped = |dep: &Dependency| {
        drops.iter().any(|spec| {
            dep.name == spec.name
                && spec
                    .head_lemma
                    .as_deref()
                    .is_none_or(|l| graph.node(dep.head).lemma == l)
                && spec
                    .dep_lemma
                    .as_deref()
                    .is_none_or(|l| graph.node(dep.dependent).lemma == l)
        })
    };

    let deps = graph
        .dependencies
        .iter()
        .filter(|d| d.name != "FOCUS" && !dropped(d))
        .map(|d| LightDependency {
            name: d.name.clone(),
            tags: d.tags.clone(),
            head: slot(d.head),
            mediator: d.mediator.map(|m| graph.node(m).lemma.clone()),
            dependent: slot(d.dependent),
        })
        .collect();

    let focus = focus_node.map(|id| {
        let node = graph.node(id);
        FocusInfo {
            node_id: id,
            lemma: (node.pos != Pos::Interrog).then(|| node.lemma.clone()),
            traits: node.traits.clone(),
        }
    });

    LightStructure { question: graph.text.clone(), deps, focus }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatchedDep {
    pub signature: String,
    pub provenance: BTreeSet<Provenance>,
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DepTrace {
    pub light: String,
    pub matched: Option<MatchedDep>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Filler {
    pub node_id: usize,
    pub surface: String,
    pub lemma: String,
    /// Lemmas NN-linked to the filler node ("l'empereur Titus" names Titus).
    pub linked: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Answer {
    pub record: usize,
    pub doc_id: String,
    pub sentence_index: usize,
    pub text: String,
    pub score: f64,
    pub matched: usize,
    pub total: usize,
    pub filler: Option<Filler>,
    pub trace: Vec<DepTrace>,
}

/// All sentences clearing the partial-match threshold, best first. Ties
/// fall back to document id, then sentence position.
pub fn answer_question(light: &LightStructure, index: &Index, weights: &Weights) -> Vec<Answer> {
    if light.deps.is_empty() {
        return Vec::new();
    }

    let mut candidates: BTreeSet<usize> = BTreeSet::new();
    for dep in &light.deps {
        for slot in [&dep.head, &dep.dependent] {
            if let Some(lemma) = &slot.lemma {
                candidates.extend(index.lemma_postings(lemma).iter().map(|p| p.record));
            }
        }
    }

    let mut answers: Vec<Answer> = candidates
        .into_iter()
        .filter_map(|r| score_record(light, index, r, weights))
        .collect();
    answers.sort_by(|a, b| {
        b.score
            .partial_cmp(&a.score)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then_with(|| a.doc_id.cmp(&b.doc_id))
            .then_with(|| a.sentence_index.cmp(&b.sentence_index))
    });
    answers
}

/// One light dependency matched against one record dependency: the
/// provenances involved and the real node bound at each end.
struct DepMatch {
    provenance: BTreeSet<Provenance>,
    head_node: Option<usize>,
    dep_node: Option<usize>,
    signature: String,
}

fn score_record(
    light: &LightStructure,
    index: &Index,
    r: usize,
    weights: &Weights,
) -> Option<Answer> {
    let record = index.record(r);
    let graph = &record.graph;
    let exp = &record.expansion;

    let mut matched = 0usize;
    let mut min_weight = f64::INFINITY;
    let mut trace = Vec::with_capacity(light.deps.len());
    // (weight, bound node) backing the focus slot, best match wins
    let mut focus_binding: Option<(f64, usize)> = None;

    for ldep in &light.deps {
        let mut best: Option<(f64, DepMatch)> = None;
        let consider = |best: &mut Option<(f64, DepMatch)>, m: DepMatch, w: f64| {
            if best.as_ref().is_none_or(|(bw, _)| w > *bw) {
                *best = Some((w, m));
            }
        };
        for (idx, dep) in graph.dependencies.iter().enumerate() {
            if let Some(m) = match_base(ldep, dep, idx, graph, exp) {
                let w = provenance_weight(&m.provenance, weights);
                consider(&mut best, m, w);
            }
        }
        for extra in &exp.extra_deps {
            if let Some(m) = match_extra(ldep, extra, graph, exp) {
                let w = provenance_weight(&m.provenance, weights);
                consider(&mut best, m, w);
            }
        }

        match best {
            Some((w, m)) => {
                matched += 1;
                min_weight = min_weight.min(w);
                let bound = if ldep.head.focus {
                    m.head_node
                } else if ldep.dependent.focus {
                    m.dep_node
                } else {
                    None
                };
                if let Some(node) = bound {
                    if focus_binding.is_none_or(|(bw, _)| w > bw) {
                        focus_binding = Some((w, node));
                    }
                }
                trace.push(DepTrace {
                    light: ldep.signature(),
                    matched: Some(MatchedDep {
                        signature: m.signature,
                        provenance: m.provenance,
                        weight: w,
                    }),
                });
            }
            None => trace.push(DepTrace { light: ldep.signature(), matched: None }),
        }
    }

    if matched == 0 {
        return None;
    }
    let total = light.deps.len();
    let coverage = matched as f64 / total as f64;
    if coverage < weights.partial_match_threshold {
        return None;
    }

    let filler = focus_binding.and_then(|(_, node_id)| {
        let focus = light.focus.as_ref()?;
        let node = graph.node(node_id);
        focus.traits.is_subset(&node.traits).then(|| {
            let mut linked = Vec::new();
            for dep in &graph.dependencies {
                if dep.name != "NN" {
                    continue;
                }
                if dep.head == node_id {
                    linked.push(graph.node(dep.dependent).lemma.clone());
                } else if dep.dependent == node_id {
                    linked.push(graph.node(dep.head).lemma.clone());
                }
            }
            Filler {
                node_id,
                surface: node.surface.clone(),
                lemma: node.lemma.clone(),
                linked,
            }
        })
    });

    Some(Answer {
        record: r,
        doc_id: graph.doc_id.clone(),
        sentence_index: graph.sentence_index,
        text: graph.text.clone(),
        score: coverage * min_weight,
        matched,
        total,
        filler,
        trace,
    })
}

/// A slot against a real node on base dependency `idx`. Lemma slots accept
/// the node's own lemma or any alternative still admitted there; trait
/// slots need the node's traits to cover theirs.
fn base_end(
    slot: &LightSlot,
    node_id: usize,
    idx: usize,
    graph: &SentenceGraph,
    exp: &Expansion,
) -> Option<Option<Provenance>> {
    let node = graph.node(node_id);
    match &slot.lemma {
        Some(l) => {
            if node.lemma == *l {
                return Some(None);
            }
            exp.alternatives_on(idx, node_id)
                .find(|(alt, _)| alt == l)
                .map(|(_, prov)| Some(prov))
        }
        None => slot.traits.is_subset(&node.traits).then_some(None),
    }
}

fn match_base(
    ldep: &LightDependency,
    dep: &Dependency,
    idx: usize,
    graph: &SentenceGraph,
    exp: &Expansion,
) -> Option<DepMatch> {
    if dep.name != ldep.name || dep.tags != ldep.tags {
        return None;
    }
    if let (Some(want), Some(m)) = (&ldep.mediator, dep.mediator) {
        if graph.node(m).lemma != *want {
            return None;
        }
    }
    let head = base_end(&ldep.head, dep.head, idx, graph, exp)?;
    let dependent = base_end(&ldep.dependent, dep.dependent, idx, graph, exp)?;
    let mut provenance = BTreeSet::from([Provenance::Original]);
    provenance.extend(head.into_iter().chain(dependent));
    Some(DepMatch {
        provenance,
        head_node: Some(dep.head),
        dep_node: Some(dep.dependent),
        signature: graph.dep_signature(dep),
    })
}

/// A slot against an expanded dependency end. Virtual ends carry no node,
/// so only lemma slots can accept them; suppressions do not apply off the
/// base dependencies.
fn extra_end(
    slot: &LightSlot,
    end: &EndRef,
    graph: &SentenceGraph,
    exp: &Expansion,
) -> Option<(Option<Provenance>, Option<usize>)> {
    match end {
        EndRef::Virtual(lemma) => match &slot.lemma {
            Some(l) if l == lemma => Some((None, None)),
            _ => None,
        },
        EndRef::Node(id) => {
            let node = graph.node(*id);
            match &slot.lemma {
                Some(l) => {
                    if node.lemma == *l {
                        return Some((None, Some(*id)));
                    }
                    exp.alternatives
                        .get(id)
                        .and_then(|alts| alts.get(l))
                        .map(|prov| (Some(*prov), Some(*id)))
                }
                None => slot.traits.is_subset(&node.traits).then_some((None, Some(*id))),
            }
        }
    }
}

fn match_extra(
    ldep: &LightDependency,
    extra: &ExtraDep,
    graph: &SentenceGraph,
    exp: &Expansion,
) -> Option<DepMatch> {
    if extra.name != ldep.name || extra.tags != ldep.tags {
        return None;
    }
    if let (Some(want), Some(have)) = (&ldep.mediator, &extra.mediator) {
        if want != have {
            return None;
        }
    }
    let (head_prov, head_node) = extra_end(&ldep.head, &extra.head, graph, exp)?;
    let (dep_prov, dep_node) = extra_end(&ldep.dependent, &extra.dependent, graph, exp)?;
    let mut provenance = BTreeSet::from([extra.provenance]);
    provenance.extend(head_prov.into_iter().chain(dep_prov));
    Some(DepMatch {
        provenance,
        head_node,
        dep_node,
        signature: extra.signature(graph),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expansion::{
        expand_graph, load_derivation_patterns, load_synonym_lexicon, redistribute_synonyms,
        DerivationPattern,
    };
    use crate::index::{IndexBuilder, SentenceRecord};
    use crate::lexicon::{analyze_sentence, load_lexicon, normalize, tokenize, Lexicon};
    use crate::parser::{
        disambiguate_pos, load_grammar, parse, parse_with_interrogative, Grammar,
    };
    use crate::sensedict::{load_sensedict, SenseDictionary};
    use crate::wsd::{apply_rules, compile_rules, WsdRuleSet};
    use std::path::PathBuf;

    fn fx(name: &str) -> PathBuf {
        PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
    }

    struct Stack {
        lexicon: Lexicon,
        grammar: Grammar,
        dict: SenseDictionary,
        rules: WsdRuleSet,
        patterns: Vec<DerivationPattern>,
    }

    fn stack() -> Stack {
        let lexicon = load_lexicon(&fx("lexicon.tsv")).unwrap();
        let grammar = load_grammar(&fx("grammar.rules")).unwrap();
        let base = load_sensedict(&fx("sensedict.csv")).unwrap();
        let external = vec![
            load_synonym_lexicon(&fx("synonyms/general.tsv")).unwrap(),
            load_synonym_lexicon(&fx("synonyms/classical.tsv")).unwrap(),
        ];
        let (dict, _) = redistribute_synonyms(&base, &external);
        let (rules, _) = compile_rules(&dict, &grammar, &lexicon);
        let patterns = load_derivation_patterns(&fx("derivation_patterns.txt")).unwrap();
        Stack { lexicon, grammar, dict, rules, patterns }
    }

    fn graph_of(doc: &str, i: usize, text: &str, s: &Stack, question: bool) -> SentenceGraph {
        let norm = normalize(text);
        let tokens = tokenize(&norm, &s.lexicon).into_iter().next().unwrap_or_default();
        let analyzed = analyze_sentence(&tokens, &s.lexicon);
        let nodes = disambiguate_pos(&analyzed, &s.grammar);
        let graph = if question {
            parse_with_interrogative(doc, i, &norm, nodes, &s.grammar)
        } else {
            parse(doc, i, &norm, nodes, &s.grammar)
        };
        apply_rules(&graph, &s.rules, &s.dict)
    }

    fn record(doc: &str, i: usize, text: &str, s: &Stack) -> SentenceRecord {
        let graph = graph_of(doc, i, text, s, false);
        let expansion = expand_graph(&graph, &s.dict, &s.patterns, &s.lexicon);
        SentenceRecord { graph, expansion }
    }

    fn light(text: &str, s: &Stack) -> LightStructure {
        let graph = graph_of("question", 0, text, s, true);
        light_structure(&graph, s.grammar.drops())
    }

    const ROME_FULL: &str = "Second fils de Vespasien, Domitien succéda à l'empereur Titus \
                             et poursuivit la remise en ordre de l'État.";

    fn corpus_index(s: &Stack) -> Index {
        let mut b = IndexBuilder::new(Default::default());
        b.add_record(record("rome", 0, ROME_FULL, s));
        b.add_record(record("rome", 1, "Le général remporte la victoire.", s));
        b.add_record(record("empire", 0, "Trajan combattit les Parthes.", s));
        b.add_record(record("empire", 1, "Dioclétien est le beau-père de Galère.", s));
        b.finish().unwrap()
    }

    #[test]
    fn question_strips_to_light_structure() {
        let s = stack();
        let l = light("De quel chef Domitien est-il le successeur ?", &s);
        let sigs: BTreeSet<String> = l.deps.iter().map(|d| d.signature()).collect();
        assert_eq!(
            sigs,
            ["NMOD[INDIR](successeur, de, chef)", "NMOD(Domitien, successeur)"]
                .map(String::from)
                .into(),
            "subject of the inverted copula must be dropped"
        );
        let focus = l.focus.as_ref().unwrap();
        assert_eq!(focus.lemma.as_deref(), Some("chef"));
        assert_eq!(focus.traits, ["humain".to_string()].into());
        let nmod_indir = l.deps.iter().find(|d| d.tags.contains(&Tag::Indir)).unwrap();
        assert!(nmod_indir.dependent.focus);
        assert!(!nmod_indir.head.focus);
    }

    #[test]
    fn focus_lands_on_the_asked_constituent() {
        let s = stack();

        let graph = graph_of("q", 0, "Qui est le beau-père de Galère ?", &s, true);
        let focus = graph.dependencies.iter().find(|d| d.name == "FOCUS").unwrap();
        assert_eq!(graph.node(focus.head).lemma, "beau-père");
        let l = light("Qui est le beau-père de Galère ?", &s);
        let f = l.focus.as_ref().unwrap();
        assert_eq!(f.lemma.as_deref(), Some("beau-père"));
        assert_eq!(f.traits, ["PAR".to_string()].into());

        let graph = graph_of("q", 0, "Qui combattit les Parthes ?", &s, true);
        let focus = graph.dependencies.iter().find(|d| d.name == "FOCUS").unwrap();
        assert_eq!(graph.node(focus.head).lemma, "qui");
        let l = light("Qui combattit les Parthes ?", &s);
        let f = l.focus.as_ref().unwrap();
        assert_eq!(f.lemma, None, "interrogatives match by trait, not lemma");
        assert_eq!(f.traits, ["humain".to_string()].into());
    }

    #[test]
    fn succession_question_is_answered_through_expansion() {
        let s = stack();
        let idx = corpus_index(&s);
        let l = light("De quel chef Domitien est-il le successeur ?", &s);
        let answers = answer_question(&l, &idx, &Weights::default());

        assert!(!answers.is_empty());
        let top = &answers[0];
        assert_eq!((top.doc_id.as_str(), top.sentence_index), ("rome", 0));
        assert_eq!((top.matched, top.total), (2, 2));
        let expected = 1.0 * (0.5 / 1.0) * (0.7 / 1.0);
        assert!((top.score - expected).abs() < 1e-9, "score {}", top.score);

        let filler = top.filler.as_ref().expect("focus must be filled");
        assert_eq!(filler.lemma, "empereur");
        assert_eq!(filler.linked, vec!["Titus"]);

        // the weakest link is the derived+synonym rewrite
        let weakest = top
            .trace
            .iter()
            .filter_map(|t| t.matched.as_ref())
            .map(|m| m.weight)
            .fold(f64::INFINITY, f64::min);
        assert!((weakest - expected).abs() < 1e-9);
        assert!(top.trace.iter().any(|t| t
            .matched
            .as_ref()
            .is_some_and(|m| m.provenance
                == [Provenance::Derived, Provenance::Synonym].into())));

        // nothing else clears the bar
        assert_eq!(answers.len(), 1, "{answers:#?}");
    }

    #[test]
    fn verbatim_phrasing_outranks_expanded() {
        let s = stack();
        let mut b = IndexBuilder::new(Default::default());
        b.add_record(record("rome", 0, ROME_FULL, &s));
        b.add_record(record("chronique", 0, "Domitien est le successeur du chef.", &s));
        let idx = b.finish().unwrap();

        let l = light("De quel chef Domitien est-il le successeur ?", &s);
        let answers = answer_question(&l, &idx, &Weights::default());
        assert_eq!(answers.len(), 2);
        assert_eq!(answers[0].doc_id, "chronique");
        assert!((answers[0].score - 1.0).abs() < 1e-12);
        assert_eq!(answers[1].doc_id, "rome");
        assert!(answers[1].score < answers[0].score);
        // direct wording binds the focus directly
        assert_eq!(answers[0].filler.as_ref().unwrap().lemma, "chef");
    }

    #[test]
    fn exact_original_match_scores_one() {
        let s = stack();
        let idx = corpus_index(&s);
        let l = light("Qui combattit les Parthes ?", &s);
        let answers = answer_question(&l, &idx, &Weights::default());
        assert_eq!(answers.len(), 1);
        let top = &answers[0];
        assert_eq!(top.doc_id, "empire");
        assert!((top.score - 1.0).abs() < 1e-12, "{}", top.score);
        // the interrogative slot bound the subject through its traits
        assert_eq!(top.filler.as_ref().unwrap().lemma, "Trajan");
    }

    #[test]
    fn threshold_gates_partial_answers() {
        let s = stack();
        let mut b = IndexBuilder::new(Default::default());
        b.add_record(record("chronique", 0, "Dioclétien est le successeur du chef.", &s));
        let idx = b.finish().unwrap();
        let l = light("De quel chef Domitien est-il le successeur ?", &s);

        // one of two dependencies matches: right at the default threshold
        let answers = answer_question(&l, &idx, &Weights::default());
        assert_eq!(answers.len(), 1);
        assert_eq!((answers[0].matched, answers[0].total), (1, 2));
        assert!((answers[0].score - 0.5).abs() < 1e-12);

        let strict = Weights { partial_match_threshold: 0.6, ..Weights::default() };
        assert!(answer_question(&l, &idx, &strict).is_empty());
    }

    #[test]
    fn trait_slots_require_real_nodes() {
        let s = stack();
        let idx = corpus_index(&s);
        let humans: BTreeSet<String> = ["humain".to_string()].into();

        // successeur exists in rome#0 only virtually: a lemma slot sees it
        let by_lemma = LightStructure {
            question: String::new(),
            deps: vec![LightDependency {
                name: "NMOD".into(),
                tags: BTreeSet::new(),
                head: LightSlot { lemma: Some("Domitien".into()), traits: BTreeSet::new(), focus: false },
                mediator: None,
                dependent: LightSlot { lemma: Some("successeur".into()), traits: humans.clone(), focus: false },
            }],
            focus: None,
        };
        assert_eq!(answer_question(&by_lemma, &idx, &Weights::default()).len(), 1);

        // but an interrogative slot cannot bind a virtual word
        let by_trait = LightStructure {
            question: String::new(),
            deps: vec![LightDependency {
                name: "NMOD".into(),
                tags: BTreeSet::new(),
                head: LightSlot { lemma: Some("Domitien".into()), traits: BTreeSet::new(), focus: false },
                mediator: None,
                dependent: LightSlot { lemma: None, traits: humans, focus: true },
            }],
            focus: None,
        };
        assert!(answer_question(&by_trait, &idx, &Weights::default()).is_empty());
    }

    #[test]
    fn focus_filler_is_withheld_on_trait_mismatch() {
        let s = stack();
        let idx = corpus_index(&s);
        let mut l = light("De quel chef Domitien est-il le successeur ?", &s);
        // pretend the question asked for a time expression
        l.focus.as_mut().unwrap().traits = ["TPS".to_string()].into();
        let answers = answer_question(&l, &idx, &Weights::default());
        assert_eq!(answers.len(), 1, "the match itself is unaffected");
        assert!(answers[0].filler.is_none());
    }

    #[test]
    fn answers_order_by_score_then_position() {
        let s = stack();
        let mut b = IndexBuilder::new(Default::default());
        b.add_record(record("b", 0, "Trajan combattit les Parthes.", &s));
        b.add_record(record("a", 0, "Trajan combattit les Parthes.", &s));
        let idx = b.finish().unwrap();
        let l = light("Qui combattit les Parthes ?", &s);
        let answers = answer_question(&l, &idx, &Weights::default());
        assert_eq!(answers.len(), 2);
        assert_eq!(answers[0].doc_id, "a");
        assert_eq!(answers[1].doc_id, "b");
        assert!((answers[0].score - answers[1].score).abs() < 1e-12);
    }

    #[test]
    fn weight_is_a_product_of_ratios() {
        let w = Weights::default();
        let set = |provs: &[Provenance]| provs.iter().copied().collect::<BTreeSet<_>>();
        assert_eq!(provenance_weight(&set(&[Provenance::Original]), &w), 1.0);
        assert_eq!(provenance_weight(&set(&[Provenance::Synonym]), &w), 0.7);
        assert_eq!(
            provenance_weight(&set(&[Provenance::Original, Provenance::Synonym]), &w),
            0.7
        );
        let dual = provenance_weight(&set(&[Provenance::Derived, Provenance::Synonym]), &w);
        assert!((dual - 0.35).abs() < 1e-12);

        // uniform scaling leaves ratios (and thus ranking) alone
        let scaled = Weights { original: 3.0, synonym: 2.1, derived: 1.5, ..w };
        let a = provenance_weight(&set(&[Provenance::Derived]), &scaled);
        assert!((a - 3.0 * 0.5).abs() < 1e-12);
    }

    #[test]
    fn empty_light_structure_finds_nothing() {
        let s = stack();
        let idx = corpus_index(&s);
        let l = LightStructure { question: "?".into(), deps: vec![], focus: None };
        assert!(answer_question(&l, &idx, &Weights::default()).is_empty());
    }
}
