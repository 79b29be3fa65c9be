//! Tokenization and morphological lookup: the first analysis layer.
//!
//!     cargo run --example analyze_text

use std::path::PathBuf;

use parsens::lexicon::{analyze_sentence, load_lexicon, normalize, tokenize};

fn main() -> parsens::Result<()> {
    let fixtures = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let lexicon = load_lexicon(&fixtures.join("lexicon.tsv"))?;

    // "son" is ambiguous: possessive determiner or noun ("sound")
    let text = "Le son du canon couvre son ordre. L'armée de l'empereur combat.";
    println!("text: {text}\n");

    let norm = normalize(text);
    for (i, sentence) in tokenize(&norm, &lexicon).iter().enumerate() {
        println!("sentence {i}:");
        for analyzed in analyze_sentence(sentence, &lexicon) {
            println!("  {:12} offset {}", analyzed.token.surface, analyzed.token.char_offset);
            for a in &analyzed.analyses {
                let feats: Vec<&str> = a.morph_features.iter().map(String::as_str).collect();
                let traits: Vec<&str> = a.semantic_traits.iter().map(String::as_str).collect();
                println!(
                    "      {} / {:?}  features [{}]  traits [{}]",
                    a.lemma,
                    a.pos,
                    feats.join("+"),
                    traits.join(",")
                );
            }
        }
        println!();
    }
    Ok(())
}
