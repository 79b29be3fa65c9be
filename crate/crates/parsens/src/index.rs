//! Inverted index over expanded sentences.
//!
//! The stored unit is the self-contained `SentenceRecord` (graph plus
//! expansion). Postings are a pure function of the records and are rebuilt
//! on load rather than persisted, so the on-disk format stays small and a
//! saved index can never disagree with its own posting lists.
//!
//! A dependency posting exists for every lemma combination an expanded
//! dependency can surface as: base lemmas, in-place synonym alternatives
//! (minus valency suppressions), and the virtual words of rewritten
//! dependencies. The provenance set on each posting is what scoring later
//! turns into a weight.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expansion::{EndRef, Expansion, Provenance};
use crate::parser::{SentenceGraph, Tag};

pub const FORMAT_NAME: &str = "parsens-index";
pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SentenceRecord {
    pub graph: SentenceGraph,
    pub expansion: Expansion,
}

impl SentenceRecord {
    pub fn doc_id(&self) -> &str {
        &self.graph.doc_id
    }

    pub fn sentence_index(&self) -> usize {
        self.graph.sentence_index
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct LemmaPosting {
    pub record: usize,
    /// None for words that exist only virtually (derived nouns, remapped
    /// synonym heads).
    pub node: Option<usize>,
    pub provenance: Provenance,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct DepKey {
    pub name: String,
    pub tags: BTreeSet<Tag>,
    pub head_lemma: String,
    pub dep_lemma: String,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct DepPosting {
    pub record: usize,
    pub provenance: BTreeSet<Provenance>,
    pub head_node: Option<usize>,
    pub dep_node: Option<usize>,
    pub mediator: Option<String>,
}

/// Lemma argument in a dependency lookup.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ArgPattern {
    Any,
    Lemma(String),
    /// Matches only real nodes carrying the trait; virtual ends never do.
    Trait(String),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct IndexHeader {
    format: String,
    version: u32,
    store_postings: bool,
    sources: BTreeMap<String, String>,
    build_id: String,
    documents: usize,
    sentences: usize,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Index {
    sources: BTreeMap<String, String>,
    build_id: String,
    records: Vec<SentenceRecord>,
    lemma_postings: BTreeMap<String, Vec<LemmaPosting>>,
    dep_postings: BTreeMap<DepKey, Vec<DepPosting>>,
}

#[derive(Debug, Clone, Default)]
pub struct IndexBuilder {
    sources: BTreeMap<String, String>,
    records: Vec<SentenceRecord>,
}

impl IndexBuilder {
    /// `sources` maps a fixture label to the sha256 of the file it was
    /// built from, recorded in the header for staleness checks.
    pub fn new(sources: BTreeMap<String, String>) -> Self {
        IndexBuilder { sources, records: Vec::new() }
    }

    pub fn add_sentence(&mut self, graph: SentenceGraph, expansion: Expansion) {
        self.records.push(SentenceRecord { graph, expansion });
    }

    pub fn add_record(&mut self, record: SentenceRecord) {
        self.records.push(record);
    }

    pub fn finish(mut self) -> Result<Index> {
        self.records.sort_by(|a, b| {
            (a.doc_id(), a.sentence_index()).cmp(&(b.doc_id(), b.sentence_index()))
        });
        for pair in self.records.windows(2) {
            if pair[0].doc_id() == pair[1].doc_id()
                && pair[0].sentence_index() == pair[1].sentence_index()
            {
                return Err(Error::Index(format!(
                    "duplicate record for {} sentence {}",
                    pair[0].doc_id(),
                    pair[0].sentence_index()
                )));
            }
        }
        Ok(Index::assemble(self.sources, self.records))
    }
}

impl Index {
    fn assemble(sources: BTreeMap<String, String>, records: Vec<SentenceRecord>) -> Index {
        let build_id = build_id_of(&records);
        let (lemma_postings, dep_postings) = build_postings(&records);
        Index { sources, build_id, records, lemma_postings, dep_postings }
    }

    pub fn records(&self) -> &[SentenceRecord] {
        &self.records
    }

    pub fn record(&self, i: usize) -> &SentenceRecord {
        &self.records[i]
    }

    pub fn sources(&self) -> &BTreeMap<String, String> {
        &self.sources
    }

    /// Deterministic digest of the record content; two indexes over the
    /// same sentences share it regardless of where or when they were built.
    pub fn build_id(&self) -> &str {
        &self.build_id
    }

    pub fn sentence_count(&self) -> usize {
        self.records.len()
    }

    pub fn document_count(&self) -> usize {
        self.records
            .iter()
            .map(|r| r.doc_id())
            .collect::<BTreeSet<_>>()
            .len()
    }

    pub fn lemma_postings(&self, lemma: &str) -> &[LemmaPosting] {
        self.lemma_postings
            .get(lemma)
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    pub fn lemmas(&self) -> impl Iterator<Item = &str> {
        self.lemma_postings.keys().map(String::as_str)
    }

    pub fn dep_postings(&self, key: &DepKey) -> &[DepPosting] {
        self.dep_postings
            .get(key)
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    pub fn deps(&self) -> impl Iterator<Item = (&DepKey, &[DepPosting])> {
        self.dep_postings.iter().map(|(k, v)| (k, v.as_slice()))
    }

    /// Dependency lookup with wildcards. `tags: None` accepts any tag set;
    /// trait patterns are checked against the bound node of each posting.
    pub fn lookup_dependency(
        &self,
        name: &str,
        tags: Option<&BTreeSet<Tag>>,
        head: &ArgPattern,
        dep: &ArgPattern,
    ) -> Vec<(&DepKey, &DepPosting)> {
        let mut out = Vec::new();
        for (key, postings) in &self.dep_postings {
            if key.name != name {
                continue;
            }
            if let Some(want) = tags {
                if &key.tags != want {
                    continue;
                }
            }
            if let ArgPattern::Lemma(l) = head {
                if &key.head_lemma != l {
                    continue;
                }
            }
            if let ArgPattern::Lemma(l) = dep {
                if &key.dep_lemma != l {
                    continue;
                }
            }
            for p in postings {
                if self.arg_admits(head, p.head_node, p.record)
                    && self.arg_admits(dep, p.dep_node, p.record)
                {
                    out.push((key, p));
                }
            }
        }
        out
    }

    fn arg_admits(&self, pattern: &ArgPattern, node: Option<usize>, record: usize) -> bool {
        match pattern {
            ArgPattern::Any | ArgPattern::Lemma(_) => true,
            ArgPattern::Trait(t) => node
                .is_some_and(|id| self.records[record].graph.node(id).traits.contains(t)),
        }
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let mut out = String::new();
        let header = IndexHeader {
            format: FORMAT_NAME.to_string(),
            version: FORMAT_VERSION,
            store_postings: false,
            sources: self.sources.clone(),
            build_id: self.build_id.clone(),
            documents: self.document_count(),
            sentences: self.records.len(),
        };
        out.push_str(&serde_json::to_string(&header)?);
        out.push('\n');
        for record in &self.records {
            out.push_str(&serde_json::to_string(record)?);
            out.push('\n');
        }
        std::fs::write(path, out).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: &Path) -> Result<Index> {
        let data = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut lines = data.lines();
        let header_line = lines
            .next()
            .ok_or_else(|| Error::Index(format!("{}: empty index file", path.display())))?;
        let header: IndexHeader = serde_json::from_str(header_line)
            .map_err(|e| Error::Index(format!("{}: bad header: {e}", path.display())))?;
        if header.format != FORMAT_NAME {
            return Err(Error::Index(format!(
                "{}: not a {FORMAT_NAME} file (format {:?})",
                path.display(),
                header.format
            )));
        }
        if header.version != FORMAT_VERSION {
            return Err(Error::Index(format!(
                "{}: unsupported index version {} (this build reads {FORMAT_VERSION})",
                path.display(),
                header.version
            )));
        }
        if header.store_postings {
            return Err(Error::Index(format!(
                "{}: stored postings are not supported",
                path.display()
            )));
        }

        let mut records = Vec::with_capacity(header.sentences);
        for (i, line) in lines.enumerate() {
            let record: SentenceRecord = serde_json::from_str(line)
                .map_err(|e| Error::Index(format!("{}: record {}: {e}", path.display(), i + 1)))?;
            records.push(record);
        }
        if records.len() != header.sentences {
            return Err(Error::Index(format!(
                "{}: truncated or padded: header says {} records, file has {}",
                path.display(),
                header.sentences,
                records.len()
            )));
        }
        let index = Index::assemble(header.sources, records);
        if index.build_id != header.build_id {
            return Err(Error::Index(format!(
                "{}: content does not match its build id (edited by hand?)",
                path.display()
            )));
        }
        Ok(index)
    }
}

pub fn sha256_hex(bytes: impl AsRef<[u8]>) -> String {
    use sha2::{Digest, Sha256};
    let mut hasher = Sha256::new();
    hasher.update(bytes.as_ref());
    hex::encode(hasher.finalize())
}

fn build_id_of(records: &[SentenceRecord]) -> String {
    use sha2::{Digest, Sha256};
    let mut hasher = Sha256::new();
    for record in records {
        hasher.update(serde_json::to_string(record).expect("record serializes"));
        hasher.update(b"\n");
    }
    hex::encode(hasher.finalize())
}

type Postings = (
    BTreeMap<String, Vec<LemmaPosting>>,
    BTreeMap<DepKey, Vec<DepPosting>>,
);

fn build_postings(records: &[SentenceRecord]) -> Postings {
    let mut lemmas: BTreeMap<String, BTreeSet<LemmaPosting>> = BTreeMap::new();
    let mut deps: BTreeMap<DepKey, BTreeSet<DepPosting>> = BTreeMap::new();

    for (r, record) in records.iter().enumerate() {
        let graph = &record.graph;
        let exp = &record.expansion;

        for node in &graph.nodes {
            lemmas.entry(node.lemma.clone()).or_default().insert(LemmaPosting {
                record: r,
                node: Some(node.node_id),
                provenance: Provenance::Original,
            });
        }
        for (node_id, alts) in &exp.alternatives {
            for (lemma, prov) in alts {
                lemmas.entry(lemma.clone()).or_default().insert(LemmaPosting {
                    record: r,
                    node: Some(*node_id),
                    provenance: *prov,
                });
            }
        }
        for extra in &exp.extra_deps {
            for end in [&extra.head, &extra.dependent] {
                if let EndRef::Virtual(lemma) = end {
                    lemmas.entry(lemma.clone()).or_default().insert(LemmaPosting {
                        record: r,
                        node: None,
                        provenance: extra.provenance,
                    });
                }
            }
        }

        for (idx, dep) in graph.dependencies.iter().enumerate() {
            let heads = base_end_variants(graph, exp, idx, dep.head);
            let dependents = base_end_variants(graph, exp, idx, dep.dependent);
            let mediator = dep.mediator.map(|m| graph.node(m).lemma.clone());
            for (head_lemma, head_prov) in &heads {
                for (dep_lemma, dep_prov) in &dependents {
                    let mut provenance = BTreeSet::from([Provenance::Original]);
                    provenance.extend(head_prov.iter().chain(dep_prov.iter()).copied());
                    deps.entry(DepKey {
                        name: dep.name.clone(),
                        tags: dep.tags.clone(),
                        head_lemma: head_lemma.clone(),
                        dep_lemma: dep_lemma.clone(),
                    })
                    .or_default()
                    .insert(DepPosting {
                        record: r,
                        provenance,
                        head_node: Some(dep.head),
                        dep_node: Some(dep.dependent),
                        mediator: mediator.clone(),
                    });
                }
            }
        }

        for extra in &exp.extra_deps {
            let heads = extra_end_variants(graph, exp, &extra.head);
            let dependents = extra_end_variants(graph, exp, &extra.dependent);
            for (head_lemma, head_prov, head_node) in &heads {
                for (dep_lemma, dep_prov, dep_node) in &dependents {
                    let mut provenance = BTreeSet::from([extra.provenance]);
                    provenance.extend(head_prov.iter().chain(dep_prov.iter()).copied());
                    deps.entry(DepKey {
                        name: extra.name.clone(),
                        tags: extra.tags.clone(),
                        head_lemma: head_lemma.clone(),
                        dep_lemma: dep_lemma.clone(),
                    })
                    .or_default()
                    .insert(DepPosting {
                        record: r,
                        provenance,
                        head_node: *head_node,
                        dep_node: *dep_node,
                        mediator: extra.mediator.clone(),
                    });
                }
            }
        }
    }

    (
        lemmas.into_iter().map(|(k, v)| (k, v.into_iter().collect())).collect(),
        deps.into_iter().map(|(k, v)| (k, v.into_iter().collect())).collect(),
    )
}

/// Lemmas one end of a base dependency can surface as: the node's own lemma
/// plus every alternative not suppressed on this dependency.
fn base_end_variants(
    graph: &SentenceGraph,
    exp: &Expansion,
    dep_idx: usize,
    node_id: usize,
) -> Vec<(String, Option<Provenance>)> {
    let mut out = vec![(graph.node(node_id).lemma.clone(), None)];
    out.extend(
        exp.alternatives_on(dep_idx, node_id)
            .map(|(lemma, prov)| (lemma.to_string(), Some(prov))),
    );
    out
}

/// Same for an extra dependency end. Suppressions never apply here: they
/// exist to keep an alternative off a base dependency it was remapped away
/// from. Virtual ends are their own single variant.
fn extra_end_variants(
    graph: &SentenceGraph,
    exp: &Expansion,
    end: &EndRef,
) -> Vec<(String, Option<Provenance>, Option<usize>)> {
    match end {
        EndRef::Virtual(lemma) => vec![(lemma.clone(), None, None)],
        EndRef::Node(id) => {
            let mut out = vec![(graph.node(*id).lemma.clone(), None, Some(*id))];
            out.extend(
                exp.alternatives
                    .get(id)
                    .into_iter()
                    .flatten()
                    .map(|(lemma, prov)| (lemma.clone(), Some(*prov), Some(*id))),
            );
            out
        }
    }
}
