//! Tab-separated corpus files.
//!
//! * meta: `key \t title \t year \t venue \t author1|author2|...`
//! * edges: `citer_key \t cited_key`
//!
//! Year and venue may be empty. Paper ids follow meta line order.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::graph::{CitationGraph, GraphBuilder};

pub const META_FILE: &str = "meta.tsv";
pub const EDGES_FILE: &str = "edges.tsv";

pub fn load_edgelist(meta_path: &Path, edges_path: &Path) -> Result<CitationGraph> {
    read_edgelist(
        BufReader::new(File::open(meta_path)?),
        BufReader::new(File::open(edges_path)?),
    )
}

/// Loads `meta.tsv` and `edges.tsv` from a corpus directory.
pub fn load_dir(dir: &Path) -> Result<CitationGraph> {
    load_edgelist(&dir.join(META_FILE), &dir.join(EDGES_FILE))
}

pub fn save_dir(g: &CitationGraph, dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    save_edgelist(g, &dir.join(META_FILE), &dir.join(EDGES_FILE))
}

pub fn read_edgelist<M: BufRead, E: BufRead>(meta: M, edges: E) -> Result<CitationGraph> {
    let mut b = GraphBuilder::new();
    for (i, line) in meta.lines().enumerate() {
        let line = line?;
        let lineno = i + 1;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 5 {
            return Err(Error::Parse {
                line: lineno,
                msg: format!("expected 5 tab-separated fields, found {}", fields.len()),
            });
        }
        let [key, title, year, venue, authors] = [fields[0], fields[1], fields[2], fields[3], fields[4]];
        if key.is_empty() {
            return Err(Error::Parse { line: lineno, msg: "empty paper key".into() });
        }
        let year: i64 = if year.trim().is_empty() {
            0
        } else {
            year.trim().parse().map_err(|_| Error::Parse {
                line: lineno,
                msg: format!("invalid year `{year}`"),
            })?
        };
        let authors: Vec<&str> = authors.split('|').filter(|a| !a.is_empty()).collect();
        let venue = (!venue.is_empty()).then_some(venue);
        b.add_paper(key, title, year, venue, &authors).map_err(|e| match e {
            Error::InvalidYear { .. } | Error::DuplicateKey(_) => Error::Parse { line: lineno, msg: e.to_string() },
            other => other,
        })?;
    }
    for (i, line) in edges.lines().enumerate() {
        let line = line?;
        let lineno = i + 1;
        if line.trim().is_empty() {
            continue;
        }
        let mut parts = line.split('\t');
        let (Some(u), Some(v), None) = (parts.next(), parts.next(), parts.next()) else {
            return Err(Error::Parse { line: lineno, msg: "expected 2 tab-separated fields".into() });
        };
        b.add_edge_by_key(u, v)?;
    }
    Ok(b.build())
}

pub fn save_edgelist(g: &CitationGraph, meta_path: &Path, edges_path: &Path) -> Result<()> {
    let mut meta = BufWriter::new(File::create(meta_path)?);
    let mut edges = BufWriter::new(File::create(edges_path)?);
    write_edgelist(g, &mut meta, &mut edges)?;
    meta.flush()?;
    edges.flush()?;
    Ok(())
}

pub fn write_edgelist<M: Write, E: Write>(g: &CitationGraph, meta: &mut M, edges: &mut E) -> Result<()> {
    for v in g.papers() {
        let m = g.meta(v);
        let year = if m.year == 0 { String::new() } else { m.year.to_string() };
        let venue = m.venue.map(|id| clean(g.venue_name(id))).unwrap_or_default();
        let authors: Vec<String> = m
            .authors
            .iter()
            .map(|&a| clean(g.author_name(a)).replace('|', "/"))
            .collect();
        writeln!(
            meta,
            "{}\t{}\t{}\t{}\t{}",
            clean(&m.key),
            clean(&m.title),
            year,
            venue,
            authors.join("|")
        )?;
    }
    for (u, v) in g.edges() {
        writeln!(edges, "{}\t{}", g.meta(u).key, g.meta(v).key)?;
    }
    Ok(())
}

fn clean(s: &str) -> String {
    s.replace(['\t', '\n', '\r'], " ")
}
