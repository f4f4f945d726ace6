//! Shallow BibTeX reader used to turn a bibliography into seed papers.
//! Only `title` and `year` are interpreted.

use std::collections::HashSet;

use super::title::TitleIndex;
use crate::error::{Error, Result};
use crate::graph::{CitationGraph, PaperId};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BibEntry {
    pub key: String,
    pub title: Option<String>,
    pub year: Option<i64>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Resolution {
    /// Resolved papers, deduplicated, in first-seen order.
    pub seeds: Vec<PaperId>,
    /// Titles (or entry keys when untitled) that matched nothing.
    pub unmatched: Vec<String>,
}

/// Parses `text` and resolves each entry against the graph's titles.
pub fn parse_bibliography(text: &str, g: &CitationGraph, index: &TitleIndex) -> Result<Resolution> {
    debug_assert_eq!(index.len(), g.paper_count());
    let mut res = Resolution::default();
    let mut seen = HashSet::new();
    for e in parse_bibtex(text)? {
        let Some(title) = e.title else {
            res.unmatched.push(e.key);
            continue;
        };
        let year = e.year.filter(|y| (1900..=2100).contains(y)).unwrap_or(0) as u16;
        match index.match_record(&title, year) {
            Some(r) => {
                let id = PaperId(r);
                if seen.insert(id) {
                    res.seeds.push(id);
                }
            }
            None => res.unmatched.push(title),
        }
    }
    Ok(res)
}

pub fn parse_bibtex(text: &str) -> Result<Vec<BibEntry>> {
    let mut p = Parser { chars: text.chars().collect(), pos: 0 };
    let mut entries = Vec::new();
    while p.skip_to('@') {
        p.pos += 1;
        let kind = p.take_while(|c| c.is_ascii_alphanumeric() || c == '_').to_ascii_lowercase();
        p.skip_ws();
        let close = match p.peek() {
            Some('{') => '}',
            Some('(') => ')',
            _ => continue,
        };
        p.pos += 1;
        if matches!(kind.as_str(), "comment" | "preamble" | "string") {
            p.skip_balanced(close)?;
            continue;
        }
        entries.push(p.entry(close)?);
    }
    Ok(entries)
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn skip_to(&mut self, c: char) -> bool {
        while let Some(x) = self.peek() {
            if x == c {
                return true;
            }
            self.pos += 1;
        }
        false
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn take_while(&mut self, f: impl Fn(char) -> bool) -> String {
        let start = self.pos;
        while self.peek().is_some_and(&f) {
            self.pos += 1;
        }
        self.chars[start..self.pos].iter().collect()
    }

    fn unbalanced(&self, what: &str) -> Error {
        Error::Bibliography(format!("unbalanced braces in {what}"))
    }

    /// Skips to the matching `close` at brace depth zero.
    fn skip_balanced(&mut self, close: char) -> Result<()> {
        let mut depth = 0usize;
        while let Some(c) = self.peek() {
            self.pos += 1;
            match c {
                '{' => depth += 1,
                '}' if depth > 0 => depth -= 1,
                c if c == close && depth == 0 => return Ok(()),
                '}' => return Err(self.unbalanced("entry")),
                _ => {}
            }
        }
        Err(self.unbalanced("entry"))
    }

    fn entry(&mut self, close: char) -> Result<BibEntry> {
        self.skip_ws();
        let key = self.take_while(|c| c != ',' && c != close && !c.is_whitespace());
        let mut entry = BibEntry { key, title: None, year: None };
        loop {
            self.skip_ws();
            match self.peek() {
                None => return Err(self.unbalanced(&format!("entry `{}`", entry.key))),
                Some(c) if c == close => {
                    self.pos += 1;
                    return Ok(entry);
                }
                Some(',') => {
                    self.pos += 1;
                    continue;
                }
                Some(_) => {}
            }
            let name = self
                .take_while(|c| c != '=' && c != ',' && c != close && c != '{' && c != '}')
                .trim()
                .to_ascii_lowercase();
            if self.peek() != Some('=') {
                if self.peek() == Some('{') || self.peek() == Some('}') {
                    return Err(self.unbalanced(&format!("entry `{}`", entry.key)));
                }
                continue;
            }
            self.pos += 1;
            let value = self.value(close, &entry.key)?;
            match name.as_str() {
                "title" => entry.title = Some(value).filter(|t| !t.is_empty()),
                "year" => {
                    let digits: String = value.chars().take_while(char::is_ascii_digit).collect();
                    entry.year = digits.parse().ok();
                }
                _ => {}
            }
        }
    }

    /// Reads `part (# part)*`; braces are dropped and whitespace collapsed.
    fn value(&mut self, close: char, key: &str) -> Result<String> {
        let mut raw = String::new();
        loop {
            self.skip_ws();
            match self.peek() {
                Some('{') => {
                    self.pos += 1;
                    let mut depth = 1usize;
                    loop {
                        let Some(c) = self.peek() else {
                            return Err(self.unbalanced(&format!("entry `{key}`")));
                        };
                        self.pos += 1;
                        match c {
                            '{' => depth += 1,
                            '}' => {
                                depth -= 1;
                                if depth == 0 {
                                    break;
                                }
                            }
                            _ => raw.push(c),
                        }
                    }
                }
                Some('"') => {
                    self.pos += 1;
                    let mut depth = 0usize;
                    loop {
                        let Some(c) = self.peek() else {
                            return Err(self.unbalanced(&format!("entry `{key}`")));
                        };
                        self.pos += 1;
                        match c {
                            '"' if depth == 0 => break,
                            '{' => depth += 1,
                            '}' if depth == 0 => return Err(self.unbalanced(&format!("entry `{key}`"))),
                            '}' => depth -= 1,
                            _ => raw.push(c),
                        }
                    }
                }
                _ => {
                    let token = self.take_while(|c| c != ',' && c != close && c != '#' && c != '}' && !c.is_whitespace());
                    raw.push_str(&token);
                }
            }
            self.skip_ws();
            if self.peek() == Some('#') {
                self.pos += 1;
                continue;
            }
            break;
        }
        Ok(raw.split_whitespace().collect::<Vec<_>>().join(" "))
    }
}
