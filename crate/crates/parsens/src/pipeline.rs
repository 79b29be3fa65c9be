//! The assembled engine: fixtures loaded, synonym layers merged, sense
//! rules compiled. From here a document becomes index records and a
//! question becomes a light structure, through the same analysis chain.

use std::collections::BTreeMap;
use std::fs;
use std::path::PathBuf;

use crate::config::Config;
use crate::expansion::{
    expand_graph, load_derivation_patterns, load_synonym_lexicon, redistribute_synonyms,
    DerivationPattern, SkipReport,
};
use crate::index::{sha256_hex, SentenceRecord};
use crate::lexicon::{analyze_sentence, load_lexicon, normalize, tokenize, Lexicon, Token};
use crate::parser::{
    disambiguate_pos, load_grammar, parse, parse_with_interrogative, Grammar, SentenceGraph,
};
use crate::query::{light_structure, LightStructure, Weights};
use crate::sensedict::{load_sensedict, SenseDictionary};
use crate::wsd::{apply_rules, compile_rules, CompileWarning, WsdRuleSet};
use crate::Result;

pub struct Pipeline {
    pub lexicon: Lexicon,
    pub grammar: Grammar,
    /// Sense dictionary after synonym redistribution.
    pub dict: SenseDictionary,
    pub rules: WsdRuleSet,
    /// Dictionary examples that did not compile into rules.
    pub warnings: Vec<CompileWarning>,
    /// Synonym candidates dropped because they are not dictionary words.
    pub skips: Vec<SkipReport>,
    pub patterns: Vec<DerivationPattern>,
    pub weights: Weights,
    pub index_path: PathBuf,
    pub workers: usize,
    sources: BTreeMap<String, String>,
}

impl Pipeline {
    pub fn from_config(config: &Config) -> Result<Pipeline> {
        let lexicon = load_lexicon(&config.paths.lexicon)?;
        let grammar = load_grammar(&config.paths.grammar)?;
        let base_dict = load_sensedict(&config.paths.sense_dictionary)?;
        let external = config
            .paths
            .synonym_lexicons
            .iter()
            .map(|p| load_synonym_lexicon(p))
            .collect::<Result<Vec<_>>>()?;
        let (dict, skips) = redistribute_synonyms(&base_dict, &external);
        let (rules, warnings) = compile_rules(&dict, &grammar, &lexicon);
        let patterns = load_derivation_patterns(&config.paths.derivation_patterns)?;

        // content hashes travel into the index header so a stale index is
        // caught before it answers anything
        let mut sources = BTreeMap::new();
        let mut hash = |label: &str, path: &PathBuf| -> Result<()> {
            let bytes = fs::read(path).map_err(|e| crate::Error::io(path, e))?;
            sources.insert(label.to_string(), sha256_hex(bytes));
            Ok(())
        };
        hash("lexicon", &config.paths.lexicon)?;
        hash("grammar", &config.paths.grammar)?;
        hash("sense_dictionary", &config.paths.sense_dictionary)?;
        hash("derivation_patterns", &config.paths.derivation_patterns)?;
        for (lex, path) in external.iter().zip(&config.paths.synonym_lexicons) {
            hash(&format!("synonyms:{}", lex.label), path)?;
        }

        Ok(Pipeline {
            lexicon,
            grammar,
            dict,
            rules,
            warnings,
            skips,
            patterns,
            weights: config.scoring.clone(),
            index_path: config.paths.index.clone(),
            workers: config.build.workers,
            sources,
        })
    }

    pub fn sources(&self) -> &BTreeMap<String, String> {
        &self.sources
    }

    fn sentence_text(&self, text: &str, tokens: &[Token]) -> String {
        let (Some(first), Some(last)) = (tokens.first(), tokens.last()) else {
            return String::new();
        };
        let end = last.char_offset + last.surface.chars().count();
        text.chars()
            .skip(first.char_offset)
            .take(end.saturating_sub(first.char_offset))
            .collect()
    }

    /// Sense-annotated graphs for every sentence of a document.
    pub fn sentence_graphs(&self, doc_id: &str, text: &str) -> Vec<SentenceGraph> {
        let norm = normalize(text);
        tokenize(&norm, &self.lexicon)
            .iter()
            .enumerate()
            .map(|(i, sentence)| {
                let own_text = self.sentence_text(&norm, sentence);
                let analyzed = analyze_sentence(sentence, &self.lexicon);
                let nodes = disambiguate_pos(&analyzed, &self.grammar);
                let graph = parse(doc_id, i, &own_text, nodes, &self.grammar);
                apply_rules(&graph, &self.rules, &self.dict)
            })
            .collect()
    }

    /// Full document treatment: graphs plus their expansions.
    pub fn process_document(&self, doc_id: &str, text: &str) -> Vec<SentenceRecord> {
        self.sentence_graphs(doc_id, text)
            .into_iter()
            .map(|graph| {
                let expansion = expand_graph(&graph, &self.dict, &self.patterns, &self.lexicon);
                SentenceRecord { graph, expansion }
            })
            .collect()
    }

    /// Question analysis: the interrogative grammar stage runs, then the
    /// graph is stripped to its light structure. Only the first sentence
    /// of the input is considered.
    pub fn parse_question(&self, text: &str) -> (SentenceGraph, LightStructure) {
        let norm = normalize(text);
        let sentences = tokenize(&norm, &self.lexicon);
        let tokens = sentences.into_iter().next().unwrap_or_default();
        let own_text = self.sentence_text(&norm, &tokens);
        let analyzed = analyze_sentence(&tokens, &self.lexicon);
        let nodes = disambiguate_pos(&analyzed, &self.grammar);
        let graph = parse_with_interrogative("question", 0, &own_text, nodes, &self.grammar);
        let graph = apply_rules(&graph, &self.rules, &self.dict);
        let light = light_structure(&graph, self.grammar.drops());
        (graph, light)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::load_config;
    use std::path::PathBuf;

    fn pipeline() -> Pipeline {
        let config =
            load_config(&PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures/config.toml"))
                .unwrap();
        Pipeline::from_config(&config).unwrap()
    }

    #[test]
    fn fixture_pipeline_assembles_cleanly() {
        let p = pipeline();
        assert!(p.warnings.is_empty(), "{:?}", p.warnings);
        assert!(!p.rules.is_empty());
        assert!(!p.patterns.is_empty());
        assert_eq!(p.sources().len(), 6);
        assert!(p.sources().keys().any(|k| k == "synonyms:general"));
    }

    #[test]
    fn documents_split_into_per_sentence_records() {
        let p = pipeline();
        let text = std::fs::read_to_string(
            PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures/corpus/rome.txt"),
        )
        .unwrap();
        let records = p.process_document("rome", &text);
        assert_eq!(records.len(), 3);
        for (i, r) in records.iter().enumerate() {
            assert_eq!(r.graph.doc_id, "rome");
            assert_eq!(r.graph.sentence_index, i);
        }
        assert!(records[0].graph.text.starts_with("Second fils"));
        assert!(records[0].graph.text.ends_with("l'État."));
        assert_eq!(records[1].graph.text, "Il reconstruisit Rome ruinée par les incendies.");
        // the succession sentence got its senses and rewrites
        let succ = records[0]
            .graph
            .nodes
            .iter()
            .find(|n| n.lemma == "succéder")
            .unwrap();
        assert!(succ.traits.contains("sn=1"));
        assert!(!records[0].expansion.extra_deps.is_empty());
    }

    #[test]
    fn blank_input_yields_no_records() {
        let p = pipeline();
        assert!(p.process_document("empty", "   \n\t  ").is_empty());
    }

    #[test]
    fn questions_come_back_with_focus_and_light_deps() {
        let p = pipeline();
        let (graph, light) = p.parse_question("De quel chef Domitien est-il le successeur ?");
        assert!(graph.dependencies.iter().any(|d| d.name == "FOCUS"));
        assert_eq!(light.deps.len(), 2);
        assert_eq!(light.focus.as_ref().unwrap().lemma.as_deref(), Some("chef"));

        // no interrogative: a statement strips to a plain corpus query
        let (graph, light) = p.parse_question("Domitien succéda à Titus ?");
        assert!(!graph.dependencies.iter().any(|d| d.name == "FOCUS"));
        assert!(light.focus.is_none());
        assert!(!light.deps.is_empty());
    }
}
