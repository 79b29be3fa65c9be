//! Index the bundled corpus and query it at every level: by lemma, by
//! dependency (with wildcards and trait arguments), and across the
//! expansion layers.
//!
//!     cargo run --example build_and_search

use std::collections::BTreeSet;
use std::path::PathBuf;

use parsens::config::load_config;
use parsens::index::{ArgPattern, IndexBuilder};
use parsens::pipeline::Pipeline;

fn main() -> parsens::Result<()> {
    let fixtures = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let config = load_config(&fixtures.join("config.toml"))?;
    let pipeline = Pipeline::from_config(&config)?;

    let mut builder = IndexBuilder::new(pipeline.sources().clone());
    for doc in ["rome", "empire"] {
        let text = std::fs::read_to_string(fixtures.join("corpus").join(format!("{doc}.txt")))
            .map_err(|e| parsens::Error::io(fixtures.join("corpus"), e))?;
        for record in pipeline.process_document(doc, &text) {
            builder.add_record(record);
        }
    }
    let index = builder.finish()?;
    println!(
        "indexed {} sentences from {} documents (build id {})",
        index.sentence_count(),
        index.document_count(),
        &index.build_id()[..12]
    );

    // round-trip through the on-disk format
    let dir = std::env::temp_dir().join("parsens-example");
    std::fs::create_dir_all(&dir).map_err(|e| parsens::Error::io(&dir, e))?;
    let path = dir.join("index.jsonl");
    index.save(&path)?;
    let index = parsens::index::Index::load(&path)?;
    println!("round-tripped through {}\n", path.display());

    println!("lemma postings for \"successeur\" (a word no sentence contains):");
    for p in index.lemma_postings("successeur") {
        let g = &index.record(p.record).graph;
        println!("  {}#{} ({}), node {:?}", g.doc_id, g.sentence_index, p.provenance, p.node);
    }

    println!("\nwho governs whom through VARG[INDIR]:");
    let tags = BTreeSet::from([parsens::parser::Tag::Indir]);
    for (key, posting) in
        index.lookup_dependency("VARG", Some(&tags), &ArgPattern::Any, &ArgPattern::Any)
    {
        let g = &index.record(posting.record).graph;
        let provs: Vec<String> = posting.provenance.iter().map(|p| p.to_string()).collect();
        println!(
            "  {}({}, {})  in {}#{}  [{}]",
            key.name,
            key.head_lemma,
            key.dep_lemma,
            g.doc_id,
            g.sentence_index,
            provs.join("+")
        );
    }

    println!("\nsubjects that are human:");
    for (key, posting) in index.lookup_dependency(
        "SUBJ",
        None,
        &ArgPattern::Any,
        &ArgPattern::Trait("humain".to_string()),
    ) {
        let g = &index.record(posting.record).graph;
        println!("  SUBJ({}, {})  in {}#{}", key.head_lemma, key.dep_lemma, g.doc_id, g.sentence_index);
    }
    Ok(())
}
