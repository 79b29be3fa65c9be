//! Synonym redistribution: flat external synonym lists are merged into the
//! sense dictionary, each candidate landing only on senses it shares a
//! class tag with.
//!
//!     cargo run --example merge_synonyms

use std::path::PathBuf;

use parsens::expansion::{load_synonym_lexicon, redistribute_synonyms};
use parsens::lexicon::Pos;
use parsens::sensedict::load_sensedict;

fn main() -> parsens::Result<()> {
    let fixtures = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let dict = load_sensedict(&fixtures.join("sensedict.csv"))?;
    let external = vec![
        load_synonym_lexicon(&fixtures.join("synonyms/general.tsv"))?,
        load_synonym_lexicon(&fixtures.join("synonyms/classical.tsv"))?,
    ];

    for lex in &external {
        println!("external lexicon {:?}:", lex.label);
        for (lemma, candidates) in lex.iter() {
            let c: Vec<&str> = candidates.iter().map(String::as_str).collect();
            println!("  {lemma} -> {}", c.join(", "));
        }
    }

    let (merged, skips) = redistribute_synonyms(&dict, &external);

    println!("\nper-sense synonym lists before -> after:");
    for word in ["ravir", "empereur", "succéder"] {
        for pos in [Pos::Verb, Pos::Noun] {
            for (before, after) in dict.senses_of(word, pos).iter().zip(merged.senses_of(word, pos)) {
                println!(
                    "  {word}@{} [{}]: {:?} -> {:?}",
                    before.sense_no,
                    before.class_tags.iter().cloned().collect::<Vec<_>>().join(","),
                    before.synonyms,
                    after.synonyms
                );
            }
        }
    }

    println!("\ncandidates skipped (not dictionary words themselves):");
    for skip in &skips {
        println!("  {skip}");
    }
    Ok(())
}
