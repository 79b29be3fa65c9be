//! Command-line wiring. Heavy analysis happens once, at `build`; `ask` and
//! `search` only load the index and match against it.
//!
//! Exit codes: 0 success, 1 no results (or failed checks), 2 usage or
//! configuration errors.

use std::collections::BTreeSet;
use std::fmt::Display;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use rayon::prelude::*;

use crate::config::{load_config, Config};
use crate::expansion::Provenance;
use crate::index::{ArgPattern, Index, IndexBuilder, SentenceRecord};
use crate::parser::Tag;
use crate::pipeline::Pipeline;
use crate::query::{answer_question, Answer};
use crate::sensedict::load_sensedict;
use crate::wsd::sense_of_traits;
use crate::{Error, Result};

#[derive(Debug, Parser)]
#[command(
    name = "parsens",
    version,
    about = "Sense-annotated dependency indexing and question answering for French text"
)]
pub struct Cli {
    /// Configuration file; paths inside are relative to it
    #[arg(long, global = true, default_value = "config.toml")]
    pub config: PathBuf,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Analyze, expand and index corpus files (document id = file stem)
    Build {
        /// UTF-8 text files, one document each
        corpus: Vec<PathBuf>,
    },
    /// Answer a natural-language question from the index
    Ask {
        question: String,
        /// Show how each question dependency matched
        #[arg(long)]
        explain: bool,
        /// Maximum answers to print
        #[arg(long, default_value_t = 5)]
        top: usize,
    },
    /// Find sentences by lexical, semantic and structural constraints.
    ///
    /// EXPR is `&`-joined constraints: lemma=X, trait=T, sense=LEMMA@N,
    /// cooc(X,Y), dep=NAME(HEAD,DEP) or dep=NAME[TAGS](HEAD,DEP) where an
    /// argument is a lemma, `*`, or trait:T.
    Search {
        expr: String,
        /// Match synonym and derivation layers too, not just original text
        #[arg(long)]
        expanded: bool,
    },
    /// Validate the configured fixture files and their cross-references
    Check,
    /// Print the compiled sense-disambiguation rules
    ExplainRules,
    /// Print the lexicon's semantic trait inventory with usage counts
    Traits,
}

pub fn run(cli: &Cli) -> i32 {
    match try_run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

fn try_run(cli: &Cli) -> Result<i32> {
    let config = load_config(&cli.config)?;
    match &cli.command {
        Command::Check => cmd_check(&config),
        Command::Build { corpus } => cmd_build(&config, corpus),
        Command::Ask { question, explain, top } => cmd_ask(&config, question, *explain, *top),
        Command::Search { expr, expanded } => cmd_search(&config, expr, *expanded),
        Command::ExplainRules => cmd_explain_rules(&config),
        Command::Traits => cmd_traits(&config),
    }
}

fn cmd_build(config: &Config, corpus: &[PathBuf]) -> Result<i32> {
    let pipeline = Pipeline::from_config(config)?;
    for w in &pipeline.warnings {
        eprintln!("warning: {w}");
    }

    let mut documents: Vec<(String, String)> = Vec::new();
    for path in corpus {
        match std::fs::read_to_string(path) {
            Ok(text) => {
                let doc_id = path
                    .file_stem()
                    .and_then(|s| s.to_str())
                    .unwrap_or("doc")
                    .to_string();
                documents.push((doc_id, text));
            }
            // one bad file must not sink the batch
            Err(e) => eprintln!("warning: skipping {}: {e}", path.display()),
        }
    }

    let mut pool = rayon::ThreadPoolBuilder::new();
    if pipeline.workers > 0 {
        pool = pool.num_threads(pipeline.workers);
    }
    let pool = pool
        .build()
        .map_err(|e| Error::Config(format!("cannot start {} workers: {e}", pipeline.workers)))?;
    let processed: Vec<Vec<SentenceRecord>> = pool.install(|| {
        documents
            .par_iter()
            .map(|(doc_id, text)| pipeline.process_document(doc_id, text))
            .collect()
    });

    let mut builder = IndexBuilder::new(pipeline.sources().clone());
    let mut base_deps = 0usize;
    let mut resolved = 0usize;
    let mut alternatives = 0usize;
    let mut extra_deps = 0usize;
    let mut suppressed = 0usize;
    for record in processed.into_iter().flatten() {
        base_deps += record.graph.dependencies.len();
        resolved += record
            .graph
            .nodes
            .iter()
            .filter(|n| sense_of_traits(&n.traits).is_some())
            .count();
        alternatives += record.expansion.alternatives.values().map(|a| a.len()).sum::<usize>();
        extra_deps += record.expansion.extra_deps.len();
        suppressed += record.expansion.suppressions.len();
        builder.add_record(record);
    }
    let index = builder.finish()?;
    index.save(&pipeline.index_path)?;

    println!("documents:             {}", index.document_count());
    println!("sentences:             {}", index.sentence_count());
    println!("base dependencies:     {base_deps}");
    println!("sense-resolved nodes:  {resolved}");
    println!("synonym alternatives:  {alternatives}");
    println!("extra dependencies:    {extra_deps}");
    println!("suppressed ends:       {suppressed}");
    println!("skipped examples:      {}", pipeline.warnings.len());
    println!(
        "wrote {} (build id {})",
        pipeline.index_path.display(),
        index.build_id()
    );
    Ok(0)
}

fn load_index(pipeline: &Pipeline) -> Result<Index> {
    if !pipeline.index_path.is_file() {
        return Err(Error::Usage(format!(
            "no index at {}; run `parsens build CORPUS...` first",
            pipeline.index_path.display()
        )));
    }
    let index = Index::load(&pipeline.index_path)?;
    if index.sources() != pipeline.sources() {
        return Err(Error::Usage(
            "index is stale: fixture files changed since it was built; rerun `parsens build`"
                .to_string(),
        ));
    }
    Ok(index)
}

fn provenance_label(provs: &BTreeSet<Provenance>) -> String {
    provs.iter().map(Provenance::to_string).collect::<Vec<_>>().join("+")
}

fn print_answer(rank: usize, a: &Answer, explain: bool) {
    println!("{rank}. score {:.3}  {}#{}  ({}/{} deps)", a.score, a.doc_id, a.sentence_index, a.matched, a.total);
    println!("   {}", a.text);
    match &a.filler {
        Some(f) if f.linked.is_empty() => println!("   filler: {}", f.lemma),
        Some(f) => println!("   filler: {} ({})", f.lemma, f.linked.join(", ")),
        None => {}
    }
    if explain {
        for t in &a.trace {
            match &t.matched {
                Some(m) => println!(
                    "   {}  <=  {}  [{}] weight {:.3}",
                    t.light,
                    m.signature,
                    provenance_label(&m.provenance),
                    m.weight
                ),
                None => println!("   {}  <=  no match", t.light),
            }
        }
    }
}

fn cmd_ask(config: &Config, question: &str, explain: bool, top: usize) -> Result<i32> {
    let pipeline = Pipeline::from_config(config)?;
    let index = load_index(&pipeline)?;
    let (graph, light) = pipeline.parse_question(question);

    if explain {
        println!("question: {}", graph.text);
        match &light.focus {
            Some(f) => {
                let traits: Vec<&str> = f.traits.iter().map(String::as_str).collect();
                println!(
                    "focus: {} [{}]",
                    f.lemma.as_deref().unwrap_or("?"),
                    traits.join(",")
                );
            }
            None => println!("focus: none (treated as a yes/no or corpus query)"),
        }
        for d in &light.deps {
            println!("light: {}", d.signature());
        }
        println!();
    }

    let answers = answer_question(&light, &index, &pipeline.weights);
    if answers.is_empty() {
        println!("no answers");
        return Ok(1);
    }
    for (i, a) in answers.iter().take(top).enumerate() {
        print_answer(i + 1, a, explain);
    }
    Ok(0)
}

/// One clause of a search expression.
enum Constraint {
    Lemma(String),
    Trait(String),
    Sense { lemma: String, sense: usize },
    Cooc(String, String),
    Dep {
        name: String,
        tags: Option<BTreeSet<Tag>>,
        head: ArgPattern,
        dependent: ArgPattern,
    },
}

fn parse_arg(s: &str) -> ArgPattern {
    if s == "*" {
        ArgPattern::Any
    } else if let Some(t) = s.strip_prefix("trait:") {
        ArgPattern::Trait(t.to_string())
    } else {
        ArgPattern::Lemma(s.to_string())
    }
}

fn parse_constraint(clause: &str) -> Result<Constraint> {
    let bad = |msg: String| Error::Usage(format!("bad constraint {clause:?}: {msg}"));
    let clause = clause.trim();
    if let Some(rest) = clause.strip_prefix("lemma=") {
        if rest.is_empty() {
            return Err(bad("empty lemma".to_string()));
        }
        return Ok(Constraint::Lemma(rest.to_string()));
    }
    if let Some(rest) = clause.strip_prefix("trait=") {
        if rest.is_empty() {
            return Err(bad("empty trait".to_string()));
        }
        return Ok(Constraint::Trait(rest.to_string()));
    }
    if let Some(rest) = clause.strip_prefix("sense=") {
        let (lemma, sense) = rest
            .split_once('@')
            .ok_or_else(|| bad("expected sense=LEMMA@N".to_string()))?;
        let sense: usize = sense
            .parse()
            .map_err(|_| bad(format!("{sense:?} is not a sense number")))?;
        if lemma.is_empty() || sense == 0 {
            return Err(bad("expected sense=LEMMA@N with N >= 1".to_string()));
        }
        return Ok(Constraint::Sense { lemma: lemma.to_string(), sense });
    }
    if let Some(rest) = clause.strip_prefix("cooc(") {
        let inner = rest
            .strip_suffix(')')
            .ok_or_else(|| bad("expected cooc(X,Y)".to_string()))?;
        let (x, y) = inner
            .split_once(',')
            .ok_or_else(|| bad("expected cooc(X,Y)".to_string()))?;
        let (x, y) = (x.trim(), y.trim());
        if x.is_empty() || y.is_empty() {
            return Err(bad("expected cooc(X,Y)".to_string()));
        }
        return Ok(Constraint::Cooc(x.to_string(), y.to_string()));
    }
    if let Some(rest) = clause.strip_prefix("dep=") {
        let (spec, args) = rest
            .split_once('(')
            .ok_or_else(|| bad("expected dep=NAME(HEAD,DEP)".to_string()))?;
        let args = args
            .strip_suffix(')')
            .ok_or_else(|| bad("missing closing parenthesis".to_string()))?;
        let (name, tags) = match spec.split_once('[') {
            Some((name, tagpart)) => {
                let tagpart = tagpart
                    .strip_suffix(']')
                    .ok_or_else(|| bad("missing closing bracket".to_string()))?;
                let tags = tagpart
                    .split(',')
                    .filter(|t| !t.trim().is_empty())
                    .map(|t| t.trim().parse::<Tag>().map_err(&bad))
                    .collect::<Result<BTreeSet<Tag>>>()?;
                (name, Some(tags))
            }
            None => (spec, None),
        };
        if name.is_empty() {
            return Err(bad("missing dependency name".to_string()));
        }
        let (head, dependent) = args
            .split_once(',')
            .ok_or_else(|| bad("expected two arguments".to_string()))?;
        return Ok(Constraint::Dep {
            name: name.to_string(),
            tags,
            head: parse_arg(head.trim()),
            dependent: parse_arg(dependent.trim()),
        });
    }
    Err(bad(
        "expected lemma=X, trait=T, sense=LEMMA@N, cooc(X,Y) or dep=NAME(HEAD,DEP)".to_string(),
    ))
}

/// Records where a lemma occurs. Original layer means a real node; the
/// expanded layer adds synonym alternatives and derived virtual words.
fn lemma_records(index: &Index, lemma: &str, expanded: bool) -> BTreeSet<usize> {
    index
        .lemma_postings(lemma)
        .iter()
        .filter(|p| expanded || p.provenance == Provenance::Original)
        .map(|p| p.record)
        .collect()
}

fn constraint_records(index: &Index, c: &Constraint, expanded: bool) -> BTreeSet<usize> {
    match c {
        Constraint::Lemma(l) => lemma_records(index, l, expanded),
        Constraint::Trait(t) => (0..index.sentence_count())
            .filter(|&r| {
                index.record(r).graph.nodes.iter().any(|n| n.traits.contains(t))
            })
            .collect(),
        Constraint::Sense { lemma, sense } => {
            let want = format!("sn={sense}");
            lemma_records(index, lemma, false)
                .into_iter()
                .filter(|&r| {
                    index.record(r).graph.nodes.iter().any(|n| {
                        n.lemma == *lemma && n.traits.contains(&want)
                    })
                })
                .collect()
        }
        Constraint::Cooc(x, y) => {
            let xs = lemma_records(index, x, expanded);
            let ys = lemma_records(index, y, expanded);
            xs.intersection(&ys).copied().collect()
        }
        Constraint::Dep { name, tags, head, dependent } => index
            .lookup_dependency(name, tags.as_ref(), head, dependent)
            .into_iter()
            .filter(|(_, p)| expanded || p.provenance == BTreeSet::from([Provenance::Original]))
            .map(|(_, p)| p.record)
            .collect(),
    }
}

fn cmd_search(config: &Config, expr: &str, expanded: bool) -> Result<i32> {
    let pipeline = Pipeline::from_config(config)?;
    let index = load_index(&pipeline)?;

    if expr.trim().is_empty() {
        return Err(Error::Usage(
            "empty search expression; try `lemma=victoire & trait=MIL`".to_string(),
        ));
    }
    let constraints = expr
        .split('&')
        .map(parse_constraint)
        .collect::<Result<Vec<_>>>()?;

    let mut hits: Option<BTreeSet<usize>> = None;
    for c in &constraints {
        let records = constraint_records(&index, c, expanded);
        hits = Some(match hits {
            None => records,
            Some(prev) => prev.intersection(&records).copied().collect(),
        });
    }

    let hits = hits.unwrap_or_default();
    if hits.is_empty() {
        println!("no matches");
        return Ok(1);
    }
    for r in &hits {
        let g = &index.record(*r).graph;
        println!("{}#{}  {}", g.doc_id, g.sentence_index, g.text);
    }
    println!("({} sentences)", hits.len());
    Ok(0)
}

/// Collects per-file results so one broken fixture does not hide problems
/// in the others.
struct Report {
    failures: usize,
}

impl Report {
    fn ok(&self, what: impl Display) {
        println!("ok    {what}");
    }
    fn fail(&mut self, what: impl Display) {
        self.failures += 1;
        println!("fail  {what}");
    }
    fn note(&self, what: impl Display) {
        println!("note  {what}");
    }
}

fn cmd_check(config: &Config) -> Result<i32> {
    let mut report = Report { failures: 0 };

    let lexicon = match crate::lexicon::load_lexicon(&config.paths.lexicon) {
        Ok(l) => {
            report.ok(format_args!("lexicon {}", config.paths.lexicon.display()));
            Some(l)
        }
        Err(e) => {
            report.fail(e);
            None
        }
    };
    let grammar = match crate::parser::load_grammar(&config.paths.grammar) {
        Ok(g) => {
            report.ok(format_args!("grammar {}", config.paths.grammar.display()));
            Some(g)
        }
        Err(e) => {
            report.fail(e);
            None
        }
    };
    let dict = match load_sensedict(&config.paths.sense_dictionary) {
        Ok(d) => {
            report.ok(format_args!(
                "sense dictionary {}",
                config.paths.sense_dictionary.display()
            ));
            Some(d)
        }
        Err(e) => {
            report.fail(e);
            None
        }
    };
    for path in &config.paths.synonym_lexicons {
        match crate::expansion::load_synonym_lexicon(path) {
            Ok(_) => report.ok(format_args!("synonym lexicon {}", path.display())),
            Err(e) => report.fail(e),
        }
    }
    // pattern loading enforces variable binding: $self anchored, $co bound
    // before use, no unbound $subj/$derived
    match crate::expansion::load_derivation_patterns(&config.paths.derivation_patterns) {
        Ok(_) => report.ok(format_args!(
            "derivation patterns {}",
            config.paths.derivation_patterns.display()
        )),
        Err(e) => report.fail(e),
    }

    if let (Some(lexicon), Some(dict)) = (&lexicon, &dict) {
        let inventory = lexicon.trait_inventory();
        let mut foreign = BTreeSet::new();
        for sense in dict.iter() {
            for tag in &sense.class_tags {
                if !inventory.contains(tag) {
                    foreign.insert(format!(
                        "{tag} ({}/{} sense {})",
                        sense.lemma, sense.pos, sense.sense_no
                    ));
                }
            }
        }
        if foreign.is_empty() {
            report.ok("sense-dictionary class tags all declared in the lexicon inventory");
        } else {
            for f in foreign {
                report.fail(format_args!("class tag not in lexicon trait inventory: {f}"));
            }
        }

        if let Some(grammar) = &grammar {
            let (_, warnings) = crate::wsd::compile_rules(dict, grammar, lexicon);
            if warnings.is_empty() {
                report.ok("every dictionary example compiles into rules");
            }
            for w in &warnings {
                report.note(format_args!("{w}"));
            }
        }
    }

    if config.paths.index.is_file() {
        match (Index::load(&config.paths.index), Pipeline::from_config(config)) {
            (Ok(index), Ok(pipeline)) => {
                if index.sources() == pipeline.sources() {
                    report.ok(format_args!(
                        "index {} matches current fixtures",
                        config.paths.index.display()
                    ));
                } else {
                    report.fail(format_args!(
                        "index {} is stale: fixtures changed since build",
                        config.paths.index.display()
                    ));
                }
            }
            (Err(e), _) => report.fail(e),
            (_, Err(e)) => report.fail(e),
        }
    } else {
        report.note(format_args!(
            "no index at {} (run `parsens build`)",
            config.paths.index.display()
        ));
    }

    if report.failures == 0 {
        println!("all checks passed");
        Ok(0)
    } else {
        println!("{} check(s) failed", report.failures);
        Ok(1)
    }
}

fn cmd_explain_rules(config: &Config) -> Result<i32> {
    let pipeline = Pipeline::from_config(config)?;
    for w in &pipeline.warnings {
        eprintln!("warning: {w}");
    }
    for rule in pipeline.rules.iter() {
        println!("{}", rule.explain_line());
    }
    Ok(0)
}

fn cmd_traits(config: &Config) -> Result<i32> {
    let pipeline = Pipeline::from_config(config)?;
    let lexicon = &pipeline.lexicon;
    for t in lexicon.trait_inventory() {
        let lemmas = lexicon
            .lemmas()
            .filter(|l| lexicon.traits_of_lemma(l).contains(t))
            .count();
        println!("{t}\t{lemmas} lemma(s)");
    }
    Ok(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constraint_parsing_accepts_the_documented_forms() {
        assert!(matches!(parse_constraint("lemma=victoire"), Ok(Constraint::Lemma(l)) if l == "victoire"));
        assert!(matches!(parse_constraint(" trait=MIL "), Ok(Constraint::Trait(t)) if t == "MIL"));
        assert!(matches!(
            parse_constraint("sense=succéder@1"),
            Ok(Constraint::Sense { sense: 1, .. })
        ));
        assert!(matches!(parse_constraint("cooc(Domitien, Titus)"), Ok(Constraint::Cooc(..))));

        let Ok(Constraint::Dep { name, tags, head, dependent }) =
            parse_constraint("dep=VARG[DIR](remporter,*)")
        else {
            panic!("dep constraint did not parse");
        };
        assert_eq!(name, "VARG");
        assert_eq!(tags, Some(BTreeSet::from([Tag::Dir])));
        assert!(matches!(head, ArgPattern::Lemma(l) if l == "remporter"));
        assert!(matches!(dependent, ArgPattern::Any));

        let Ok(Constraint::Dep { tags, dependent, .. }) =
            parse_constraint("dep=SUBJ(*,trait:humain)")
        else {
            panic!("untagged dep did not parse");
        };
        assert_eq!(tags, None, "no bracket means any tags");
        assert!(matches!(dependent, ArgPattern::Trait(t) if t == "humain"));

        let Ok(Constraint::Dep { tags, .. }) = parse_constraint("dep=NMOD[](x,y)") else {
            panic!("empty bracket did not parse");
        };
        assert_eq!(tags, Some(BTreeSet::new()), "[] means exactly no tags");
    }

    #[test]
    fn constraint_parsing_rejects_junk() {
        for bad in [
            "",
            "lemma=",
            "trait=",
            "sense=succéder",
            "sense=succéder@0",
            "sense=x@one",
            "cooc(Domitien)",
            "cooc(,y)",
            "dep=VARG[DIR]",
            "dep=VARG(remporter",
            "dep=VARG[DIR(remporter,*)",
            "dep=[DIR](a,b)",
            "dep=VARG[WRONG](a,b)",
            "dep=VARG(single)",
            "frequency=high",
        ] {
            assert!(parse_constraint(bad).is_err(), "{bad:?} should be rejected");
        }
    }
}
