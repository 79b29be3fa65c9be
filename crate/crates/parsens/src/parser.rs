//! Incremental rule grammar over analyzed tokens.
//!
//! Two document stages share one rule format: `pos_disamb` rules pick one
//! reading per token from its analysis list, `dependency` rules slide a slot
//! pattern over the disambiguated nodes and emit named dependencies. A third
//! stage, `question`, holds interrogative patterns (FOCUS marking, inversion)
//! and runs only when a question is parsed.
//!
//! Rules fire lowest priority first, file order breaking ties. A dependency
//! rule that matches restarts scanning after its window, so one rule never
//! fires twice on overlapping anchors.

use std::collections::BTreeSet;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lexicon::{AnalyzedToken, Pos};

#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
pub enum Tag {
    Dir,
    Indir,
    Adj,
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Tag::Dir => "DIR",
            Tag::Indir => "INDIR",
            Tag::Adj => "ADJ",
        })
    }
}

impl FromStr for Tag {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Ok(match s {
            "DIR" => Tag::Dir,
            "INDIR" => Tag::Indir,
            "ADJ" => Tag::Adj,
            other => return Err(format!("unknown dependency tag {other:?}")),
        })
    }
}

pub const DEP_NAMES: [&str; 6] = ["SUBJ", "VARG", "VMOD", "NMOD", "NN", "FOCUS"];

/// A token after disambiguation: one reading, plus the trait set that later
/// stages (sense tagging) extend. `features` holds morphology; `traits` holds
/// semantic codes only, so question stripping can keep the right half.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Node {
    pub node_id: usize,
    pub surface: String,
    pub lemma: String,
    pub pos: Pos,
    pub char_offset: usize,
    pub features: BTreeSet<String>,
    pub traits: BTreeSet<String>,
}

/// `head` and `dependent` are node ids of the owning sentence. INDIR
/// dependencies carry the preposition node as `mediator`; nothing else does.
/// FOCUS is the one name allowed to have head == dependent: it marks a single
/// node rather than relating two.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Dependency {
    pub name: String,
    pub tags: BTreeSet<Tag>,
    pub head: usize,
    pub dependent: usize,
    pub mediator: Option<usize>,
}

impl Dependency {
    /// `NAME` or `NAME[TAG,TAG]`, the form used in rule files and output.
    pub fn label(&self) -> String {
        label_of(&self.name, &self.tags)
    }
}

pub fn label_of(name: &str, tags: &BTreeSet<Tag>) -> String {
    if tags.is_empty() {
        name.to_string()
    } else {
        let tags: Vec<String> = tags.iter().map(Tag::to_string).collect();
        format!("{}[{}]", name, tags.join(","))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SentenceGraph {
    pub doc_id: String,
    pub sentence_index: usize,
    pub text: String,
    pub nodes: Vec<Node>,
    pub dependencies: Vec<Dependency>,
}

impl SentenceGraph {
    pub fn node(&self, id: usize) -> &Node {
        &self.nodes[id]
    }

    /// `SUBJ(reconstruire,il)` / `VMOD[INDIR](ruiner,par,incendie)`, by lemma.
    pub fn dep_signature(&self, dep: &Dependency) -> String {
        match dep.mediator {
            Some(m) => format!(
                "{}({},{},{})",
                dep.label(),
                self.node(dep.head).lemma,
                self.node(m).lemma,
                self.node(dep.dependent).lemma
            ),
            None => format!(
                "{}({},{})",
                dep.label(),
                self.node(dep.head).lemma,
                self.node(dep.dependent).lemma
            ),
        }
    }

    pub fn signatures(&self) -> BTreeSet<String> {
        self.dependencies.iter().map(|d| self.dep_signature(d)).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    PosDisamb,
    Dependency,
    Question,
}

/// One slot of a rule pattern. `lemmas` and `poses` are any-of sets; `traits`
/// and `feats` must all be present. Empty means unconstrained.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SlotPattern {
    pub lemmas: BTreeSet<String>,
    pub poses: BTreeSet<Pos>,
    pub traits: BTreeSet<String>,
    pub feats: BTreeSet<String>,
}

impl SlotPattern {
    fn admits_node(&self, node: &Node) -> bool {
        (self.lemmas.is_empty() || self.lemmas.contains(&node.lemma))
            && (self.poses.is_empty() || self.poses.contains(&node.pos))
            && self.traits.is_subset(&node.traits)
            && self.feats.is_subset(&node.features)
    }

    // a token matches if at least one of its readings satisfies every
    // constraint jointly
    fn admits_token(&self, token: &AnalyzedToken) -> bool {
        token.analyses.iter().any(|a| {
            (self.lemmas.is_empty() || self.lemmas.contains(&a.lemma))
                && (self.poses.is_empty() || self.poses.contains(&a.pos))
                && self.traits.is_subset(&a.semantic_traits)
                && self.feats.is_subset(&a.morph_features)
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Action {
    Pick { slot: usize, analysis: usize },
    Dep { name: String, tags: BTreeSet<Tag>, head: usize, mediator: Option<usize>, dependent: usize },
}

#[derive(Debug, Clone)]
pub struct GrammarRule {
    pub stage: Stage,
    pub priority: i32,
    pub pattern: Vec<SlotPattern>,
    pub actions: Vec<Action>,
}

/// Functional-dependency shape removed during question stripping.
/// `None` lemma means `*`. Tags are ignored: `drop VARG(être, *)` covers
/// every tagged variant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DropSpec {
    pub name: String,
    pub head_lemma: Option<String>,
    pub dep_lemma: Option<String>,
}

#[derive(Debug, Clone, Default)]
pub struct Grammar {
    rules: Vec<GrammarRule>,
    drops: Vec<DropSpec>,
}

impl Grammar {
    pub fn rules(&self) -> &[GrammarRule] {
        &self.rules
    }

    pub fn drops(&self) -> &[DropSpec] {
        &self.drops
    }

    fn stage_rules(&self, stage: Stage) -> impl Iterator<Item = &GrammarRule> {
        self.rules.iter().filter(move |r| r.stage == stage)
    }
}

/// Choose one reading per token. Disambiguation rules pick in priority
/// order, first pick per token wins; untouched tokens keep their first
/// listed analysis.
pub fn disambiguate_pos(sentence: &[AnalyzedToken], grammar: &Grammar) -> Vec<Node> {
    let mut chosen: Vec<Option<usize>> = vec![None; sentence.len()];
    for rule in grammar.stage_rules(Stage::PosDisamb) {
        let len = rule.pattern.len();
        if len > sentence.len() {
            continue;
        }
        for anchor in 0..=sentence.len() - len {
            let hit = rule
                .pattern
                .iter()
                .enumerate()
                .all(|(i, slot)| slot.admits_token(&sentence[anchor + i]));
            if !hit {
                continue;
            }
            for action in &rule.actions {
                if let Action::Pick { slot, analysis } = action {
                    let t = anchor + slot;
                    if chosen[t].is_none() && *analysis < sentence[t].analyses.len() {
                        chosen[t] = Some(*analysis);
                    }
                }
            }
        }
    }

    sentence
        .iter()
        .zip(&chosen)
        .enumerate()
        .map(|(i, (tok, pick))| {
            let a = &tok.analyses[pick.unwrap_or(0)];
            Node {
                node_id: i,
                surface: tok.token.surface.clone(),
                lemma: a.lemma.clone(),
                pos: a.pos,
                char_offset: tok.token.char_offset,
                features: a.morph_features.clone(),
                traits: a.semantic_traits.clone(),
            }
        })
        .collect()
}

/// Run the document dependency stage. Robust by construction: with no
/// matching rule the graph simply has no dependencies.
pub fn parse(
    doc_id: &str,
    sentence_index: usize,
    text: &str,
    nodes: Vec<Node>,
    grammar: &Grammar,
) -> SentenceGraph {
    run_stages(doc_id, sentence_index, text, nodes, grammar, &[Stage::Dependency])
}

/// Document stage plus the interrogative layer; used on questions only.
pub fn parse_with_interrogative(
    doc_id: &str,
    sentence_index: usize,
    text: &str,
    nodes: Vec<Node>,
    grammar: &Grammar,
) -> SentenceGraph {
    run_stages(
        doc_id,
        sentence_index,
        text,
        nodes,
        grammar,
        &[Stage::Dependency, Stage::Question],
    )
}

fn run_stages(
    doc_id: &str,
    sentence_index: usize,
    text: &str,
    nodes: Vec<Node>,
    grammar: &Grammar,
    stages: &[Stage],
) -> SentenceGraph {
    let mut deps: Vec<Dependency> = Vec::new();
    for &stage in stages {
        for rule in grammar.stage_rules(stage) {
            let len = rule.pattern.len();
            if len > nodes.len() {
                continue;
            }
            let mut anchor = 0;
            while anchor + len <= nodes.len() {
                let hit = rule
                    .pattern
                    .iter()
                    .enumerate()
                    .all(|(i, slot)| slot.admits_node(&nodes[anchor + i]));
                if !hit {
                    anchor += 1;
                    continue;
                }
                for action in &rule.actions {
                    let Action::Dep { name, tags, head, mediator, dependent } = action else {
                        continue;
                    };
                    // FOCUS marks the question target; the first emission
                    // stands and later rules must not move it
                    if name == "FOCUS" && deps.iter().any(|d| d.name == "FOCUS") {
                        continue;
                    }
                    let dep = Dependency {
                        name: name.clone(),
                        tags: tags.clone(),
                        head: nodes[anchor + head].node_id,
                        dependent: nodes[anchor + dependent].node_id,
                        mediator: mediator.map(|m| nodes[anchor + m].node_id),
                    };
                    if !deps.contains(&dep) {
                        deps.push(dep);
                    }
                }
                anchor += len;
            }
        }
    }
    SentenceGraph {
        doc_id: doc_id.to_string(),
        sentence_index,
        text: text.to_string(),
        nodes,
        dependencies: deps,
    }
}

/// Parse the rule DSL. One rule per line:
/// `STAGE PRIORITY : [k=v|k=v] [*] ... => ACTION ; ACTION`
/// plus `drop NAME(head, dep)` lines listing functional dependencies.
pub fn load_grammar(path: &Path) -> Result<Grammar> {
    let data = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut grammar = Grammar::default();

    for (lineno, line) in data.lines().enumerate() {
        let lineno = lineno + 1;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(rest) = line.strip_prefix("drop ") {
            grammar.drops.push(parse_drop(rest, path, lineno)?);
            continue;
        }
        grammar.rules.push(parse_rule(line, path, lineno)?);
    }

    // stable: priority first, then file order, which sort_by preserves
    grammar.rules.sort_by_key(|r| r.priority);
    Ok(grammar)
}

fn parse_drop(rest: &str, path: &Path, lineno: usize) -> Result<DropSpec> {
    let err = |msg: &str| Error::parse(path, lineno, msg);
    let rest = rest.trim();
    let open = rest.find('(').ok_or_else(|| err("drop needs NAME(head, dep)"))?;
    let close = rest.rfind(')').ok_or_else(|| err("unclosed drop argument list"))?;
    let name = rest[..open].trim().to_string();
    if !DEP_NAMES.contains(&name.as_str()) {
        return Err(err(&format!("unknown dependency name {name:?}")));
    }
    let args: Vec<&str> = rest[open + 1..close].split(',').map(str::trim).collect();
    if args.len() != 2 {
        return Err(err("drop takes exactly two arguments"));
    }
    let wild = |s: &str| if s == "*" { None } else { Some(s.to_string()) };
    Ok(DropSpec { name, head_lemma: wild(args[0]), dep_lemma: wild(args[1]) })
}

fn parse_rule(line: &str, path: &Path, lineno: usize) -> Result<GrammarRule> {
    let err = |msg: String| Error::parse(path, lineno, msg);

    let (lhs, rhs) = line
        .split_once("=>")
        .ok_or_else(|| err("rule is missing '=>'".into()))?;
    let (head, slots_src) = lhs
        .split_once(':')
        .ok_or_else(|| err("rule is missing ':' between header and pattern".into()))?;

    let mut head_parts = head.split_whitespace();
    let stage = match head_parts.next() {
        Some("pos_disamb") => Stage::PosDisamb,
        Some("dependency") => Stage::Dependency,
        Some("question") => Stage::Question,
        other => return Err(err(format!("unknown stage {other:?}"))),
    };
    let priority: i32 = head_parts
        .next()
        .ok_or_else(|| err("missing priority".into()))?
        .parse()
        .map_err(|_| err("priority must be an integer".into()))?;
    if head_parts.next().is_some() {
        return Err(err("unexpected tokens before ':'".into()));
    }

    let mut pattern = Vec::new();
    for part in slots_src.split_whitespace() {
        let inner = part
            .strip_prefix('[')
            .and_then(|p| p.strip_suffix(']'))
            .ok_or_else(|| err(format!("slot {part:?} must be bracketed")))?;
        pattern.push(parse_slot(inner).map_err(err)?);
    }
    if pattern.is_empty() {
        return Err(err("pattern needs at least one slot".into()));
    }

    let mut actions = Vec::new();
    for part in rhs.split(';') {
        let action = parse_action(part.trim(), stage, pattern.len()).map_err(err)?;
        actions.push(action);
    }
    if actions.is_empty() {
        return Err(err("rule needs at least one action".into()));
    }

    Ok(GrammarRule { stage, priority, pattern, actions })
}

fn parse_slot(inner: &str) -> std::result::Result<SlotPattern, String> {
    let mut slot = SlotPattern::default();
    if inner == "*" {
        return Ok(slot);
    }
    for kv in inner.split('|') {
        let (key, value) = kv
            .split_once('=')
            .ok_or_else(|| format!("slot constraint {kv:?} must be key=value"))?;
        let values = value.split(',').map(str::trim).filter(|v| !v.is_empty());
        match key.trim() {
            "lemma" => slot.lemmas.extend(values.map(String::from)),
            "pos" => {
                for v in values {
                    slot.poses.insert(Pos::from_str(v)?);
                }
            }
            "trait" => slot.traits.extend(values.map(String::from)),
            "feat" => slot.feats.extend(values.map(String::from)),
            other => return Err(format!("unknown slot key {other:?}")),
        }
    }
    Ok(slot)
}

fn parse_action(
    src: &str,
    stage: Stage,
    pattern_len: usize,
) -> std::result::Result<Action, String> {
    let check_slot = |i: usize| {
        if i < pattern_len {
            Ok(i)
        } else {
            Err(format!("slot {i} is out of range for a {pattern_len}-slot pattern"))
        }
    };

    if let Some(rest) = src.strip_prefix("pick(") {
        if stage != Stage::PosDisamb {
            return Err("pick is only valid in pos_disamb rules".into());
        }
        let rest = rest.strip_suffix(')').ok_or("unclosed pick(...)")?;
        let nums: Vec<&str> = rest.split(',').map(str::trim).collect();
        if nums.len() != 2 {
            return Err("pick takes (slot, analysis_index)".into());
        }
        let slot = nums[0].parse().map_err(|_| "pick slot must be an integer")?;
        let analysis = nums[1].parse().map_err(|_| "pick index must be an integer")?;
        return Ok(Action::Pick { slot: check_slot(slot)?, analysis });
    }

    let Some(rest) = src.strip_prefix("dep ") else {
        return Err(format!("unknown action {src:?}"));
    };
    if stage == Stage::PosDisamb {
        return Err("dep is not valid in pos_disamb rules".into());
    }
    let open = rest.find('(').ok_or("dep needs an argument list")?;
    let close = rest.rfind(')').ok_or("unclosed dep argument list")?;
    let mut name = rest[..open].trim().to_string();
    let mut tags: BTreeSet<Tag> = BTreeSet::new();
    if let Some(bracket) = name.find('[') {
        let tag_src = name[bracket + 1..]
            .strip_suffix(']')
            .ok_or("unclosed tag bracket in dependency name")?
            .to_string();
        name.truncate(bracket);
        for t in tag_src.split(',') {
            tags.insert(Tag::from_str(t.trim())?);
        }
    }
    if !DEP_NAMES.contains(&name.as_str()) {
        return Err(format!("unknown dependency name {name:?}"));
    }
    if name == "FOCUS" && stage != Stage::Question {
        return Err("FOCUS may only be emitted by question rules".into());
    }

    let args: Vec<usize> = rest[open + 1..close]
        .split(',')
        .map(|a| a.trim().parse::<usize>().map_err(|_| "dep arguments must be slot indexes"))
        .collect::<std::result::Result<_, _>>()?;
    let indirect = tags.contains(&Tag::Indir);
    let (head, mediator, dependent) = match (indirect, args.len()) {
        (true, 3) => (args[0], Some(args[1]), args[2]),
        (false, 2) => (args[0], None, args[1]),
        (true, n) => return Err(format!("INDIR dependency takes (head, mediator, dep), got {n} args")),
        (false, n) => return Err(format!("dependency takes (head, dep), got {n} args")),
    };
    for &i in args.iter() {
        check_slot(i)?;
    }
    if name == "FOCUS" {
        if head != dependent {
            return Err("FOCUS marks one slot: head and dependent must be the same".into());
        }
    } else if head == dependent {
        return Err("head and dependent must be different slots".into());
    }
    Ok(Action::Dep { name, tags, head, mediator, dependent })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lexicon::{analyze_sentence, load_lexicon, normalize, tokenize, Lexicon};
    use std::path::PathBuf;

    fn fx(name: &str) -> PathBuf {
        PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
    }

    fn fixtures() -> (Lexicon, Grammar) {
        (
            load_lexicon(&fx("lexicon.tsv")).unwrap(),
            load_grammar(&fx("grammar.rules")).unwrap(),
        )
    }

    fn graph_of(text: &str, lex: &Lexicon, grammar: &Grammar, question: bool) -> SentenceGraph {
        let norm = normalize(text);
        let sentences = tokenize(&norm, lex);
        assert_eq!(sentences.len(), 1, "helper expects a single sentence");
        let analyzed = analyze_sentence(&sentences[0], lex);
        let nodes = disambiguate_pos(&analyzed, grammar);
        if question {
            parse_with_interrogative("q", 0, &norm, nodes, grammar)
        } else {
            parse("doc", 0, &norm, nodes, grammar)
        }
    }

    #[test]
    fn fixture_grammar_counts() {
        let (_, grammar) = fixtures();
        assert_eq!(grammar.rules().len(), 26);
        assert_eq!(grammar.drops().len(), 3);
    }

    #[test]
    fn passive_sentence_yields_exactly_five_dependencies() {
        let (lex, grammar) = fixtures();
        let g = graph_of("Il reconstruisit Rome ruinée par les incendies.", &lex, &grammar, false);
        let expected: BTreeSet<String> = [
            "SUBJ(reconstruire,il)",
            "SUBJ(ruiner,incendie)",
            "VMOD[INDIR](ruiner,par,incendie)",
            "VARG[DIR](reconstruire,Rome)",
            "NMOD[ADJ](Rome,ruiner)",
        ]
        .into_iter()
        .map(String::from)
        .collect();
        assert_eq!(g.signatures(), expected);
    }

    #[test]
    fn indirect_object_and_apposition() {
        let (lex, grammar) = fixtures();
        let g = graph_of("Domitien succéda à l'empereur Titus", &lex, &grammar, false);
        let expected: BTreeSet<String> = [
            "SUBJ(succéder,Domitien)",
            "VARG[INDIR](succéder,à,empereur)",
            "NN(empereur,Titus)",
        ]
        .into_iter()
        .map(String::from)
        .collect();
        assert_eq!(g.signatures(), expected);
    }

    #[test]
    fn unmatched_sentence_degrades_to_nodes_only() {
        let (lex, grammar) = fixtures();
        let g = graph_of("Rome.", &lex, &grammar, false);
        assert_eq!(g.nodes.len(), 2);
        assert!(g.dependencies.is_empty());
    }

    #[test]
    fn empty_grammar_still_parses() {
        let (lex, _) = fixtures();
        let g = graph_of("Il reconstruisit Rome.", &lex, &Grammar::default(), false);
        assert_eq!(g.nodes.len(), 4);
        assert!(g.dependencies.is_empty());
    }

    #[test]
    fn contextual_picks_resolve_noun_verb_homographs() {
        let (lex, grammar) = fixtures();
        let g = graph_of("Le combat commence.", &lex, &grammar, false);
        assert_eq!(g.node(1).pos, Pos::Noun);
        assert_eq!(g.node(1).lemma, "combat");
        let g = graph_of("Il combat.", &lex, &grammar, false);
        assert_eq!(g.node(1).pos, Pos::Verb);
        assert_eq!(g.node(1).lemma, "combattre");
    }

    #[test]
    fn possessive_son_before_noun() {
        let (lex, grammar) = fixtures();
        let g = graph_of("Son fils combat.", &lex, &grammar, false);
        assert_eq!(g.node(0).pos, Pos::Pron);
        let g = graph_of("Le son est grand.", &lex, &grammar, false);
        assert_eq!(g.node(1).pos, Pos::Noun);
    }

    #[test]
    fn mediator_present_exactly_on_indir() {
        let (lex, grammar) = fixtures();
        for text in [
            "Il reconstruisit Rome ruinée par les incendies.",
            "Domitien succéda à l'empereur Titus.",
            "Le général remporte la victoire.",
        ] {
            let g = graph_of(text, &lex, &grammar, false);
            assert!(!g.dependencies.is_empty());
            for dep in &g.dependencies {
                assert_eq!(dep.tags.contains(&Tag::Indir), dep.mediator.is_some());
                assert!(dep.head != dep.dependent);
                assert!(dep.head < g.nodes.len() && dep.dependent < g.nodes.len());
            }
        }
    }

    #[test]
    fn interrogative_stage_marks_focus_once() {
        let (lex, grammar) = fixtures();
        let g = graph_of("De quel chef Domitien est-il le successeur ?", &lex, &grammar, true);
        let focus: Vec<&Dependency> =
            g.dependencies.iter().filter(|d| d.name == "FOCUS").collect();
        assert_eq!(focus.len(), 1);
        assert_eq!(g.node(focus[0].head).lemma, "chef");
        assert_eq!(focus[0].head, focus[0].dependent);
        let sigs = g.signatures();
        assert!(sigs.contains("NMOD[INDIR](successeur,de,chef)"), "{sigs:?}");
        assert!(sigs.contains("NMOD(Domitien,successeur)"), "{sigs:?}");
        assert!(sigs.contains("SUBJ(être,Domitien)"), "{sigs:?}");
    }

    #[test]
    fn document_parse_never_emits_focus() {
        let (lex, grammar) = fixtures();
        let g = graph_of("De quel chef Domitien est-il le successeur ?", &lex, &grammar, false);
        assert!(g.dependencies.iter().all(|d| d.name != "FOCUS"));
    }

    #[test]
    fn slot_reference_out_of_range_is_a_load_error() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("bad.rules");
        std::fs::write(&p, "dependency 10 : [pos=Verb] [pos=Noun] => dep VARG[DIR](0,5)\n").unwrap();
        let err = load_grammar(&p).unwrap_err().to_string();
        assert!(err.contains("out of range"), "{err}");
        assert!(err.contains("bad.rules:1"), "{err}");
    }

    #[test]
    fn malformed_lines_are_load_errors() {
        let dir = tempfile::tempdir().unwrap();
        for (name, content, needle) in [
            ("a.rules", "dependency 10 : [pos=Verb]\n", "missing '=>'"),
            ("b.rules", "dependency x : [pos=Verb] => dep NN(0,0)\n", "priority"),
            ("c.rules", "dependency 1 : [pos=Verb] [pos=Noun] => dep XX(0,1)\n", "unknown dependency name"),
            ("d.rules", "dependency 1 : [pos=Verb] [pos=Noun] => dep FOCUS(0,0)\n", "question"),
            ("e.rules", "pos_disamb 1 : [pos=Verb] => dep NN(0,0)\n", "not valid"),
            ("f.rules", "dependency 1 : [pos=Verb] [pos=Prep] [pos=Noun] => dep VARG[INDIR](0,2)\n", "INDIR"),
        ] {
            let p = dir.path().join(name);
            std::fs::write(&p, content).unwrap();
            let err = load_grammar(&p).unwrap_err().to_string();
            assert!(err.contains(needle), "{name}: {err}");
        }
    }

    #[test]
    fn priorities_run_low_to_high_with_file_order_ties() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("prio.rules");
        std::fs::write(
            &p,
            "dependency 20 : [pos=Noun] [pos=Verb] => dep SUBJ(1,0)\n\
             dependency 10 : [pos=Noun] [pos=Verb] => dep NMOD(0,1)\n",
        )
        .unwrap();
        let grammar = load_grammar(&p).unwrap();
        assert_eq!(grammar.rules()[0].priority, 10);
        assert_eq!(grammar.rules()[1].priority, 20);
    }
}
