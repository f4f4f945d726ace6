//! Corpus construction: title matching, metadata/reference merging, file
//! formats, bibliography resolution and synthetic corpora.

mod bib;
mod build;
mod citeseer;
mod dblp;
mod synth;
mod title;
mod tsv;

pub use bib::{parse_bibliography, parse_bibtex, BibEntry, Resolution};
pub use build::{build_graph, BuildReport, MetaRecord, RefEntry, RefRecord};
pub use citeseer::read_citeseer;
pub use dblp::{decode_entities, read_dblp};
pub use synth::{synth_corpus, SynthParams};
pub use title::{normalize_title, MatchConfig, TitleHit, TitleIndex};
pub use tsv::{
    load_dir, load_edgelist, read_edgelist, save_dir, save_edgelist, write_edgelist, EDGES_FILE, META_FILE,
};
