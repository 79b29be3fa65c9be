//! End to end question answering: parse the question with the
//! interrogative grammar, strip it to a light structure, match it against
//! the indexed corpus, and extract the focus filler.
//!
//!     cargo run --example ask_question

use std::path::PathBuf;

use parsens::config::load_config;
use parsens::index::IndexBuilder;
use parsens::pipeline::Pipeline;
use parsens::query::answer_question;

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

    for question in [
        "De quel chef Domitien est-il le successeur ?",
        "Qui combattit les Parthes ?",
        "Qui est le beau-père de Galère ?",
    ] {
        let (_, light) = pipeline.parse_question(question);
        println!("{question}");
        if let Some(f) = &light.focus {
            let traits: Vec<&str> = f.traits.iter().map(String::as_str).collect();
            println!("  focus: {} [{}]", f.lemma.as_deref().unwrap_or("?"), traits.join(","));
        }
        for dep in &light.deps {
            println!("  light: {}", dep.signature());
        }

        for (i, a) in answer_question(&light, &index, &pipeline.weights).iter().enumerate() {
            println!("  {}. score {:.3}  {}#{}  {}", i + 1, a.score, a.doc_id, a.sentence_index, a.text);
            if let Some(f) = &a.filler {
                if f.linked.is_empty() {
                    println!("     answer: {}", f.lemma);
                } else {
                    println!("     answer: {} ({})", f.lemma, f.linked.join(", "));
                }
            }
            for t in &a.trace {
                if let Some(m) = &t.matched {
                    let provs: Vec<String> = m.provenance.iter().map(|p| p.to_string()).collect();
                    println!("     {} <= {} [{}]", t.light, m.signature, provs.join("+"));
                }
            }
        }
        println!();
    }
    Ok(())
}
