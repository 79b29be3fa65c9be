//! Document-side expansion: sense-filtered synonym alternatives, valency
//! remapping when a synonym takes a different frame, and derivation
//! rewrites ("Domitien succéda à X" also indexes "successeur de X").
//!
//!     cargo run --example derive_rephrasings

use std::path::PathBuf;

use parsens::expansion::{
    attested_derivations, derivation_candidates, expand_graph, load_derivation_patterns,
    load_synonym_lexicon, redistribute_synonyms,
};
use parsens::lexicon::{analyze_sentence, load_lexicon, normalize, tokenize};
use parsens::parser::{disambiguate_pos, load_grammar, parse};
use parsens::sensedict::load_sensedict;
use parsens::wsd::{apply_rules, compile_rules};

fn main() -> parsens::Result<()> {
    let fixtures = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let lexicon = load_lexicon(&fixtures.join("lexicon.tsv"))?;
    let grammar = load_grammar(&fixtures.join("grammar.rules"))?;
    let base = load_sensedict(&fixtures.join("sensedict.csv"))?;
    let external = vec![
        load_synonym_lexicon(&fixtures.join("synonyms/general.tsv"))?,
        load_synonym_lexicon(&fixtures.join("synonyms/classical.tsv"))?,
    ];
    let (dict, _) = redistribute_synonyms(&base, &external);
    let (rules, _) = compile_rules(&dict, &grammar, &lexicon);
    let patterns = load_derivation_patterns(&fixtures.join("derivation_patterns.txt"))?;

    // suffix generation overshoots on purpose; the lexicon then attests
    for sense in dict.iter() {
        for code in &sense.derivation_codes {
            let candidates = derivation_candidates(&sense.lemma);
            let attested = attested_derivations(&sense.lemma, code, &lexicon);
            println!(
                "{} {code}: {} candidates, attested {:?}",
                sense.lemma,
                candidates.len(),
                attested
            );
        }
    }

    let text = "Domitien succéda à l'empereur Titus.";
    let norm = normalize(text);
    let tokens = tokenize(&norm, &lexicon).into_iter().next().unwrap_or_default();
    let analyzed = analyze_sentence(&tokens, &lexicon);
    let nodes = disambiguate_pos(&analyzed, &grammar);
    let graph = apply_rules(&parse("demo", 0, &norm, nodes, &grammar), &rules, &dict);

    println!("\n{text}");
    let expansion = expand_graph(&graph, &dict, &patterns, &lexicon);
    for (node_id, alts) in &expansion.alternatives {
        let node = graph.node(*node_id);
        for (lemma, prov) in alts {
            println!("  alternative on {}: {lemma} ({prov})", node.lemma);
        }
    }
    for (dep_idx, node_id, lemma) in &expansion.suppressions {
        let dep = &graph.dependencies[*dep_idx];
        println!(
            "  suppressed: {lemma} may not replace {} inside {}",
            graph.node(*node_id).lemma,
            graph.dep_signature(dep)
        );
    }
    for extra in &expansion.extra_deps {
        println!("  extra: {} ({})", extra.signature(&graph), extra.provenance);
    }
    Ok(())
}
