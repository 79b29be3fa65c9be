//! Word sense disambiguation: rules are compiled from the sense
//! dictionary's own examples and frames, then applied to new sentences.
//!
//!     cargo run --example disambiguate_senses

use std::path::PathBuf;

use parsens::lexicon::{analyze_sentence, load_lexicon, normalize, tokenize};
use parsens::parser::{disambiguate_pos, load_grammar, parse};
use parsens::sensedict::load_sensedict;
use parsens::wsd::{apply_rules, compile_rules, sense_of_traits, winning_rules};

fn main() -> parsens::Result<()> {
    let fixtures = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let lexicon = load_lexicon(&fixtures.join("lexicon.tsv"))?;
    let grammar = load_grammar(&fixtures.join("grammar.rules"))?;
    let dict = load_sensedict(&fixtures.join("sensedict.csv"))?;

    let (rules, warnings) = compile_rules(&dict, &grammar, &lexicon);
    println!("compiled {} rules from the dictionary", rules.len());
    for w in &warnings {
        println!("  warning: {w}");
    }
    println!("\nrules for remporter:");
    for rule in rules.rules_for("remporter", parsens::lexicon::Pos::Verb) {
        println!("  {}", rule.explain_line());
    }

    // same verb, three different senses picked by context
    for text in [
        "Le général remporte la victoire.",
        "Domitien succéda à l'empereur Titus.",
        "Les jours se succèdent.",
        "Le roi boit le vin.",
        "Je bois.",
    ] {
        let norm = normalize(text);
        let tokens = tokenize(&norm, &lexicon).into_iter().next().unwrap_or_default();
        let analyzed = analyze_sentence(&tokens, &lexicon);
        let nodes = disambiguate_pos(&analyzed, &grammar);
        let graph = parse("demo", 0, &norm, nodes, &grammar);
        let winners = winning_rules(&graph, &rules);
        let resolved = apply_rules(&graph, &rules, &dict);

        println!("\n{text}");
        for node in &resolved.nodes {
            let Some(sense) = sense_of_traits(&node.traits) else { continue };
            let gloss = dict
                .get(&node.lemma, node.pos, sense)
                .map(|s| s.gloss.as_str())
                .unwrap_or("?");
            print!("  {} -> sense {sense} ({gloss})", node.lemma);
            match winners.get(&node.node_id) {
                Some(rule) => println!("  via {}", rule.explain_line()),
                None => println!("  (only sense)"),
            }
        }
    }
    Ok(())
}
