//! Sense selection by conditional rules compiled out of the dictionary
//! itself: each sense's example sentences are parsed with the main grammar,
//! and every dependency touching the headword becomes a rule; subcat frames
//! add coarser presence/absence rules. Applying the rules writes an `sn=k`
//! trait (plus the sense's class tags) onto resolved nodes.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::lexicon::{analyze_sentence, normalize, tokenize, Lexicon, Pos};
use crate::parser::{disambiguate_pos, parse, Grammar, SentenceGraph, Tag};
use crate::sensedict::{SenseDictionary, Subcat};

pub const SENSE_TRAIT_PREFIX: &str = "sn=";

/// Read the sense number a previous application wrote onto a node, if any.
pub fn sense_of_traits(traits: &BTreeSet<String>) -> Option<usize> {
    traits
        .iter()
        .find_map(|t| t.strip_prefix(SENSE_TRAIT_PREFIX))
        .and_then(|n| n.parse().ok())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum RuleKind {
    LexicoSyntactic,
    SemanticoSyntactic,
    Subcat,
}

impl fmt::Display for RuleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RuleKind::LexicoSyntactic => "lexico_syntactic",
            RuleKind::SemanticoSyntactic => "semantico_syntactic",
            RuleKind::Subcat => "subcat",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum TargetSlot {
    Head,
    Dependent,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum CoConstraint {
    /// The co-argument is this exact lemma.
    Lexical(String),
    /// The co-argument carries this trait.
    Trait(String),
    /// The mediator preposition is this lemma.
    Preposition(String),
    /// Shape alone decides (bare subcat presence).
    Unconstrained,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct WsdRule {
    pub target_lemma: String,
    pub target_pos: Pos,
    pub dep_name: String,
    pub tags: BTreeSet<Tag>,
    pub target_slot: TargetSlot,
    pub constraint: CoConstraint,
    /// Intransitive frames invert the test: the dependency must be absent.
    pub require_absent: bool,
    pub result_sense: usize,
    pub kind: RuleKind,
}

impl WsdRule {
    pub fn specificity(&self) -> u8 {
        match self.kind {
            RuleKind::LexicoSyntactic => 3,
            RuleKind::SemanticoSyntactic => 2,
            RuleKind::Subcat => 1,
        }
    }

    /// `lemma;pos;kind;dep;tags;slot;constraint;sense`, the inspection format.
    pub fn explain_line(&self) -> String {
        let tags: Vec<String> = self.tags.iter().map(Tag::to_string).collect();
        let slot = match self.target_slot {
            TargetSlot::Head => "head",
            TargetSlot::Dependent => "dependent",
        };
        let constraint = match &self.constraint {
            CoConstraint::Lexical(l) => format!("lemma:{l}"),
            CoConstraint::Trait(t) => format!("trait:{t}"),
            CoConstraint::Preposition(p) => format!("prep:{p}"),
            CoConstraint::Unconstrained => {
                if self.require_absent { "absent".into() } else { "present".into() }
            }
        };
        format!(
            "{};{};{};{};{};{};{};{}",
            self.target_lemma,
            self.target_pos,
            self.kind,
            self.dep_name,
            tags.join(","),
            slot,
            constraint,
            self.result_sense
        )
    }
}

#[derive(Debug, Clone, Default)]
pub struct WsdRuleSet {
    rules: BTreeMap<(String, Pos), Vec<WsdRule>>,
}

impl WsdRuleSet {
    pub fn rules_for(&self, lemma: &str, pos: Pos) -> &[WsdRule] {
        self.rules
            .get(&(lemma.to_string(), pos))
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    pub fn iter(&self) -> impl Iterator<Item = &WsdRule> {
        self.rules.values().flatten()
    }

    pub fn len(&self) -> usize {
        self.rules.values().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    fn push(&mut self, rule: WsdRule) {
        let key = (rule.target_lemma.clone(), rule.target_pos);
        let rules = self.rules.entry(key).or_default();
        if !rules.contains(&rule) {
            rules.push(rule);
        }
    }
}

/// An example sentence that produced no dependency containing its headword.
/// Compilation records it and moves on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompileWarning {
    pub lemma: String,
    pub pos: Pos,
    pub sense_no: usize,
    pub example: String,
    pub reason: String,
}

impl fmt::Display for CompileWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} ({}, sense {}): example {:?} skipped: {}",
            self.lemma, self.pos, self.sense_no, self.example, self.reason
        )
    }
}

/// Compile the rule set for every sense of every headword.
///
/// Per example dependency on the headword: one lexico-syntactic rule binding
/// the co-argument lemma, plus one semantico-syntactic rule per lexicon trait
/// of that lemma. Per subcat frame: shape rules over VARG.
pub fn compile_rules(
    dict: &SenseDictionary,
    grammar: &Grammar,
    lexicon: &Lexicon,
) -> (WsdRuleSet, Vec<CompileWarning>) {
    let mut set = WsdRuleSet::default();
    let mut warnings = Vec::new();

    for sense in dict.iter() {
        for example in &sense.examples {
            let graph = parse_example(example, lexicon, grammar);
            let mut touched = false;
            for dep in &graph.dependencies {
                for (slot, self_id, co_id) in [
                    (TargetSlot::Head, dep.head, dep.dependent),
                    (TargetSlot::Dependent, dep.dependent, dep.head),
                ] {
                    let node = graph.node(self_id);
                    if node.lemma != sense.lemma || node.pos != sense.pos {
                        continue;
                    }
                    touched = true;
                    let co = graph.node(co_id);
                    set.push(WsdRule {
                        target_lemma: sense.lemma.clone(),
                        target_pos: sense.pos,
                        dep_name: dep.name.clone(),
                        tags: dep.tags.clone(),
                        target_slot: slot,
                        constraint: CoConstraint::Lexical(co.lemma.clone()),
                        require_absent: false,
                        result_sense: sense.sense_no,
                        kind: RuleKind::LexicoSyntactic,
                    });
                    for t in lexicon.traits_of_lemma(&co.lemma) {
                        set.push(WsdRule {
                            target_lemma: sense.lemma.clone(),
                            target_pos: sense.pos,
                            dep_name: dep.name.clone(),
                            tags: dep.tags.clone(),
                            target_slot: slot,
                            constraint: CoConstraint::Trait(t),
                            require_absent: false,
                            result_sense: sense.sense_no,
                            kind: RuleKind::SemanticoSyntactic,
                        });
                    }
                }
            }
            if !touched {
                warnings.push(CompileWarning {
                    lemma: sense.lemma.clone(),
                    pos: sense.pos,
                    sense_no: sense.sense_no,
                    example: example.clone(),
                    reason: "no dependency contains the headword".into(),
                });
            }
        }

        for rule in subcat_rules(sense.lemma.clone(), sense.pos, sense.sense_no, &sense.subcat) {
            set.push(rule);
        }
    }
    (set, warnings)
}

fn parse_example(example: &str, lexicon: &Lexicon, grammar: &Grammar) -> SentenceGraph {
    let norm = normalize(example);
    let sentences = tokenize(&norm, lexicon);
    let tokens = sentences.into_iter().next().unwrap_or_default();
    let analyzed = analyze_sentence(&tokens, lexicon);
    let nodes = disambiguate_pos(&analyzed, grammar);
    parse("example", 0, &norm, nodes, grammar)
}

fn subcat_rules(
    lemma: String,
    pos: Pos,
    sense_no: usize,
    subcat: &Option<Subcat>,
) -> Vec<WsdRule> {
    let varg = |tags: &[Tag], constraint: CoConstraint, require_absent: bool| WsdRule {
        target_lemma: lemma.clone(),
        target_pos: pos,
        dep_name: "VARG".into(),
        tags: tags.iter().copied().collect(),
        target_slot: TargetSlot::Head,
        constraint,
        require_absent,
        result_sense: sense_no,
        kind: RuleKind::Subcat,
    };
    match subcat {
        None => vec![],
        Some(Subcat::Intransitive) => {
            vec![varg(&[Tag::Dir], CoConstraint::Unconstrained, true)]
        }
        Some(Subcat::TransitiveDirect { object_trait }) => match object_trait {
            None => vec![varg(&[Tag::Dir], CoConstraint::Unconstrained, false)],
            Some(t) => vec![varg(&[Tag::Dir], CoConstraint::Trait(t.clone()), false)],
        },
        Some(Subcat::TransitiveIndirect { preposition, object_trait }) => {
            let mut rules = vec![varg(&[Tag::Indir], CoConstraint::Preposition(preposition.clone()), false)];
            if let Some(t) = object_trait {
                rules.push(varg(&[Tag::Indir], CoConstraint::Trait(t.clone()), false));
            }
            rules
        }
    }
}

fn rule_matches(rule: &WsdRule, node_id: usize, graph: &SentenceGraph) -> bool {
    let found = graph.dependencies.iter().any(|dep| {
        if dep.name != rule.dep_name || dep.tags != rule.tags {
            return false;
        }
        let (self_id, co_id) = match rule.target_slot {
            TargetSlot::Head => (dep.head, dep.dependent),
            TargetSlot::Dependent => (dep.dependent, dep.head),
        };
        if self_id != node_id {
            return false;
        }
        let co = graph.node(co_id);
        match &rule.constraint {
            CoConstraint::Lexical(l) => &co.lemma == l,
            CoConstraint::Trait(t) => co.traits.contains(t),
            CoConstraint::Preposition(p) => {
                dep.mediator.is_some_and(|m| &graph.node(m).lemma == p)
            }
            CoConstraint::Unconstrained => true,
        }
    });
    if rule.require_absent {
        !found
    } else {
        found
    }
}

/// Write `sn=k` and the selected sense's class tags onto every node the
/// rules can decide. Matching happens against the incoming graph only, so
/// one node's resolution never feeds another's in the same pass.
///
/// Monosemous dictionary words resolve to sense 1 with no rules consulted.
/// A polysemous word no rule matches stays unresolved: downstream expansion
/// skips it rather than guess.
pub fn apply_rules(
    graph: &SentenceGraph,
    rules: &WsdRuleSet,
    dict: &SenseDictionary,
) -> SentenceGraph {
    let mut writes: Vec<(usize, usize, BTreeSet<String>)> = Vec::new();

    for node in &graph.nodes {
        let senses = dict.senses_of(&node.lemma, node.pos);
        if senses.is_empty() {
            continue;
        }
        let chosen = if senses.len() == 1 {
            Some(1)
        } else {
            rules
                .rules_for(&node.lemma, node.pos)
                .iter()
                .filter(|r| rule_matches(r, node.node_id, graph))
                .max_by_key(|r| (r.specificity(), std::cmp::Reverse(r.result_sense)))
                .map(|r| r.result_sense)
        };
        if let Some(k) = chosen {
            let tags = senses[k - 1].class_tags.clone();
            writes.push((node.node_id, k, tags));
        }
    }

    let mut out = graph.clone();
    for (node_id, k, tags) in writes {
        let node = &mut out.nodes[node_id];
        node.traits.insert(format!("{SENSE_TRAIT_PREFIX}{k}"));
        node.traits.extend(tags);
    }
    out
}

/// Full per-sentence WSD trace, used by the match explainer and tests:
/// which rule won on which node.
pub fn winning_rules<'a>(
    graph: &SentenceGraph,
    rules: &'a WsdRuleSet,
) -> BTreeMap<usize, &'a WsdRule> {
    let mut out = BTreeMap::new();
    for node in &graph.nodes {
        let best = rules
            .rules_for(&node.lemma, node.pos)
            .iter()
            .filter(|r| rule_matches(r, node.node_id, graph))
            .max_by_key(|r| (r.specificity(), std::cmp::Reverse(r.result_sense)));
        if let Some(rule) = best {
            out.insert(node.node_id, rule);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lexicon::load_lexicon;
    use crate::parser::load_grammar;
    use crate::sensedict::load_sensedict;
    use std::path::PathBuf;

    fn fx(name: &str) -> PathBuf {
        PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
    }

    struct Fixtures {
        lexicon: Lexicon,
        grammar: Grammar,
        dict: SenseDictionary,
    }

    fn fixtures() -> Fixtures {
        Fixtures {
            lexicon: load_lexicon(&fx("lexicon.tsv")).unwrap(),
            grammar: load_grammar(&fx("grammar.rules")).unwrap(),
            dict: load_sensedict(&fx("sensedict.csv")).unwrap(),
        }
    }

    fn graph_of(text: &str, f: &Fixtures) -> SentenceGraph {
        parse_example(text, &f.lexicon, &f.grammar)
    }

    #[test]
    fn remporter_examples_compile_both_rule_kinds() {
        let f = fixtures();
        let (rules, _) = compile_rules(&f.dict, &f.grammar, &f.lexicon);
        let remporter = rules.rules_for("remporter", Pos::Verb);
        let dir: BTreeSet<Tag> = [Tag::Dir].into();
        assert!(
            remporter.iter().any(|r| r.kind == RuleKind::LexicoSyntactic
                && r.dep_name == "VARG"
                && r.tags == dir
                && r.target_slot == TargetSlot::Head
                && r.constraint == CoConstraint::Lexical("victoire".into())
                && r.result_sense == 3),
            "missing lexico-syntactic rule: {remporter:#?}"
        );
        assert!(
            remporter.iter().any(|r| r.kind == RuleKind::SemanticoSyntactic
                && r.dep_name == "VARG"
                && r.tags == dir
                && r.constraint == CoConstraint::Trait("MIL".into())
                && r.result_sense == 3),
            "missing semantico-syntactic rule"
        );
    }

    #[test]
    fn every_headword_dependency_yields_a_lexico_rule() {
        let f = fixtures();
        let (rules, warnings) = compile_rules(&f.dict, &f.grammar, &f.lexicon);
        for sense in f.dict.iter() {
            for example in &sense.examples {
                let graph = graph_of(example, &f);
                for dep in &graph.dependencies {
                    for (slot, self_id, co_id) in [
                        (TargetSlot::Head, dep.head, dep.dependent),
                        (TargetSlot::Dependent, dep.dependent, dep.head),
                    ] {
                        let node = graph.node(self_id);
                        if node.lemma != sense.lemma || node.pos != sense.pos {
                            continue;
                        }
                        let co = graph.node(co_id).lemma.clone();
                        assert!(
                            rules.rules_for(&sense.lemma, sense.pos).iter().any(|r| {
                                r.kind == RuleKind::LexicoSyntactic
                                    && r.dep_name == dep.name
                                    && r.target_slot == slot
                                    && r.constraint == CoConstraint::Lexical(co.clone())
                            }),
                            "no rule for {} in {:?}",
                            graph.dep_signature(dep),
                            example
                        );
                    }
                }
            }
        }
        assert!(warnings.is_empty(), "shipped examples should all parse: {warnings:?}");
    }

    #[test]
    fn intransitive_and_transitive_frames_compile_to_shape_rules() {
        let f = fixtures();
        let (rules, _) = compile_rules(&f.dict, &f.grammar, &f.lexicon);
        let boire = rules.rules_for("boire", Pos::Verb);
        assert!(boire
            .iter()
            .any(|r| r.kind == RuleKind::Subcat && !r.require_absent && r.result_sense == 1));
        assert!(boire
            .iter()
            .any(|r| r.kind == RuleKind::Subcat && r.require_absent && r.result_sense == 2));
    }

    #[test]
    fn succeda_resolves_to_sense_one() {
        let f = fixtures();
        let (rules, _) = compile_rules(&f.dict, &f.grammar, &f.lexicon);
        let graph = graph_of("Domitien succéda à l'empereur Titus.", &f);
        let tagged = apply_rules(&graph, &rules, &f.dict);
        let succeda = tagged.nodes.iter().find(|n| n.lemma == "succéder").unwrap();
        assert!(succeda.traits.contains("sn=1"), "{:?}", succeda.traits);
        assert!(succeda.traits.contains("SOC"));
        let empereur = tagged.nodes.iter().find(|n| n.lemma == "empereur").unwrap();
        assert!(empereur.traits.contains("humain"));
        assert!(empereur.traits.contains("sn=1"));
    }

    #[test]
    fn lexical_evidence_beats_trait_evidence() {
        let f = fixtures();
        let (rules, _) = compile_rules(&f.dict, &f.grammar, &f.lexicon);
        for (text, lemma, expected) in [
            ("Ce chant ravit le public.", "ravir", 1),
            ("Le bandit ravit la bourse.", "ravir", 2),
            ("Le général remporte la victoire.", "remporter", 3),
        ] {
            let graph = graph_of(text, &f);
            let tagged = apply_rules(&graph, &rules, &f.dict);
            let node = tagged.nodes.iter().find(|n| n.lemma == lemma).unwrap();
            assert!(
                node.traits.contains(&format!("sn={expected}")),
                "{text}: {:?}",
                node.traits
            );
            // whenever lexical and trait rules both match, the lexical
            // rule's sense must be the one written
            let node_id = tagged.nodes.iter().position(|n| n.lemma == lemma).unwrap();
            let matching: Vec<&WsdRule> = rules
                .rules_for(lemma, Pos::Verb)
                .iter()
                .filter(|r| rule_matches(r, node_id, &graph))
                .collect();
            let lexical: Vec<&&WsdRule> = matching
                .iter()
                .filter(|r| r.kind == RuleKind::LexicoSyntactic)
                .collect();
            assert!(!lexical.is_empty());
            assert!(lexical.iter().any(|r| r.result_sense == expected));
        }
    }

    #[test]
    fn unmatched_polysemous_word_stays_unresolved() {
        let f = fixtures();
        let (rules, _) = compile_rules(&f.dict, &f.grammar, &f.lexicon);
        let graph = graph_of("Il ravit.", &f);
        let tagged = apply_rules(&graph, &rules, &f.dict);
        let ravit = tagged.nodes.iter().find(|n| n.lemma == "ravir").unwrap();
        assert!(sense_of_traits(&ravit.traits).is_none(), "{:?}", ravit.traits);
    }

    #[test]
    fn monosemous_word_resolves_without_rules() {
        let f = fixtures();
        let graph = graph_of("Trajan combattit les Parthes.", &f);
        let tagged = apply_rules(&graph, &WsdRuleSet::default(), &f.dict);
        let combat = tagged.nodes.iter().find(|n| n.lemma == "combattre").unwrap();
        assert!(combat.traits.contains("sn=1"));
        assert!(combat.traits.contains("MIL"));
    }

    #[test]
    fn every_resolution_names_an_existing_sense() {
        let f = fixtures();
        let (rules, _) = compile_rules(&f.dict, &f.grammar, &f.lexicon);
        for text in [
            "Domitien succéda à l'empereur Titus.",
            "Le général remporte la victoire.",
            "Le roi boit le vin.",
            "Je bois.",
        ] {
            let tagged = apply_rules(&graph_of(text, &f), &rules, &f.dict);
            for node in &tagged.nodes {
                if let Some(k) = sense_of_traits(&node.traits) {
                    assert!(
                        f.dict.get(&node.lemma, node.pos, k).is_some(),
                        "{}: sn={k} on {} has no dictionary sense",
                        text,
                        node.lemma
                    );
                }
            }
        }
    }

    #[test]
    fn subcat_distinguishes_drinking_senses() {
        let f = fixtures();
        let (rules, _) = compile_rules(&f.dict, &f.grammar, &f.lexicon);
        let with_object = apply_rules(&graph_of("Le roi boit le vin.", &f), &rules, &f.dict);
        let node = with_object.nodes.iter().find(|n| n.lemma == "boire").unwrap();
        assert!(node.traits.contains("sn=1"), "{:?}", node.traits);

        let bare = apply_rules(&graph_of("Je bois.", &f), &rules, &f.dict);
        let node = bare.nodes.iter().find(|n| n.lemma == "boire").unwrap();
        assert!(node.traits.contains("sn=2"), "{:?}", node.traits);
    }

    #[test]
    fn unparseable_example_warns_and_compilation_finishes() {
        let f = fixtures();
        let data = "zzz;Verb;1;rien;MIL;;xxx yyy www;;\nzzz;Verb;2;rien;SOC;T;;;\n";
        let dict = crate::sensedict::load_sensedict_str(data).unwrap();
        let (rules, warnings) = compile_rules(&dict, &f.grammar, &f.lexicon);
        assert_eq!(warnings.len(), 1);
        assert_eq!(warnings[0].lemma, "zzz");
        assert_eq!(warnings[0].sense_no, 1);
        // the other sense's subcat rule still compiled
        assert!(rules.rules_for("zzz", Pos::Verb).iter().any(|r| r.kind == RuleKind::Subcat));
    }
}
