//! From readings to a dependency graph: category disambiguation, then the
//! incremental dependency rules.
//!
//!     cargo run --example parse_dependencies

use std::path::PathBuf;

use parsens::lexicon::{analyze_sentence, load_lexicon, normalize, tokenize};
use parsens::parser::{disambiguate_pos, load_grammar, parse};

fn main() -> parsens::Result<()> {
    let fixtures = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let lexicon = load_lexicon(&fixtures.join("lexicon.tsv"))?;
    let grammar = load_grammar(&fixtures.join("grammar.rules"))?;

    for text in [
        "Il reconstruisit Rome ruinée par les incendies.",
        "Domitien succéda à l'empereur Titus.",
        "Le général remporte la victoire.",
    ] {
        let norm = normalize(text);
        let tokens = tokenize(&norm, &lexicon).into_iter().next().unwrap_or_default();
        let analyzed = analyze_sentence(&tokens, &lexicon);
        let nodes = disambiguate_pos(&analyzed, &grammar);
        let graph = parse("demo", 0, &norm, nodes, &grammar);

        println!("{text}");
        for node in &graph.nodes {
            println!("  node {}: {} ({:?})", node.node_id, node.lemma, node.pos);
        }
        for dep in &graph.dependencies {
            println!("  {}", graph.dep_signature(dep));
        }
        println!();
    }
    Ok(())
}
