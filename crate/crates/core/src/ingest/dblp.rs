//! Streaming reader for the dblp.xml dump.
//!
//! Only `article` and `inproceedings` records are kept. The dump encodes
//! non-ASCII letters as HTML entities declared in its DTD; those are
//! resolved here from a built-in table since the DTD is not loaded.

use std::io::BufRead;

use quick_xml::events::Event;
use quick_xml::Reader;

use super::build::MetaRecord;
use crate::error::{Error, Result};

const RECORDS: [&[u8]; 2] = [b"article", b"inproceedings"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Field {
    Title,
    Year,
    Venue,
    Author,
}

fn field_of(name: &[u8]) -> Option<Field> {
    match name {
        b"title" => Some(Field::Title),
        b"year" => Some(Field::Year),
        b"journal" | b"booktitle" => Some(Field::Venue),
        b"author" => Some(Field::Author),
        _ => None,
    }
}

#[derive(Default)]
struct Partial {
    key: String,
    title: String,
    year: String,
    venue: String,
    authors: Vec<String>,
}

impl Partial {
    fn finish(self) -> Option<MetaRecord> {
        let title = collapse(&self.title);
        let title = title.strip_suffix('.').unwrap_or(&title).to_owned();
        if title.is_empty() {
            return None;
        }
        Some(MetaRecord {
            key: self.key,
            title,
            year: self.year.trim().parse().unwrap_or(0),
            venue: Some(collapse(&self.venue)).filter(|v| !v.is_empty()),
            authors: self.authors.iter().map(|a| collapse(a)).filter(|a| !a.is_empty()).collect(),
        })
    }
}

fn collapse(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// Reads all `article`/`inproceedings` records. Records without a title are
/// skipped; a missing or malformed year becomes 0.
pub fn read_dblp<R: BufRead>(input: R) -> Result<Vec<MetaRecord>> {
    let mut reader = Reader::from_reader(input);
    reader.config_mut().check_end_names = false;
    let mut buf = Vec::new();
    let mut out = Vec::new();
    let mut record: Option<Partial> = None;
    let mut field: Option<(Field, usize)> = None;
    let mut depth = 0usize;

    loop {
        let event = reader
            .read_event_into(&mut buf)
            .map_err(|e| Error::Xml(format!("at byte {}: {e}", reader.buffer_position())))?;
        match event {
            Event::Start(e) => {
                depth += 1;
                let name = e.local_name();
                if record.is_none() && RECORDS.contains(&name.as_ref()) {
                    let key = e
                        .try_get_attribute("key")
                        .ok()
                        .flatten()
                        .map(|a| String::from_utf8_lossy(&a.value).into_owned())
                        .unwrap_or_default();
                    record = Some(Partial { key, ..Partial::default() });
                } else if let (Some(_), None) = (&record, field) {
                    if let Some(f) = field_of(name.as_ref()) {
                        field = Some((f, depth));
                        if f == Field::Author {
                            record.as_mut().unwrap().authors.push(String::new());
                        }
                    }
                }
            }
            Event::End(e) => {
                if let Some((_, d)) = field {
                    if d == depth {
                        field = None;
                    }
                }
                if record.is_some() && field.is_none() && RECORDS.contains(&e.local_name().as_ref()) {
                    if let Some(m) = record.take().and_then(Partial::finish) {
                        out.push(m);
                    }
                }
                depth = depth.saturating_sub(1);
            }
            Event::Text(t) => {
                if let (Some(rec), Some((f, _))) = (record.as_mut(), field) {
                    let text = decode_entities(&String::from_utf8_lossy(&t.into_inner()));
                    append(rec, f, &text);
                }
            }
            Event::CData(t) => {
                if let (Some(rec), Some((f, _))) = (record.as_mut(), field) {
                    append(rec, f, &String::from_utf8_lossy(&t.into_inner()));
                }
            }
            Event::Eof => break,
            _ => {}
        }
        buf.clear();
    }
    Ok(out)
}

fn append(rec: &mut Partial, f: Field, text: &str) {
    let slot = match f {
        Field::Title => &mut rec.title,
        Field::Year => &mut rec.year,
        Field::Venue => &mut rec.venue,
        Field::Author => rec.authors.last_mut().expect("author slot pushed on start"),
    };
    slot.push_str(text);
}

/// Replaces XML/HTML entity references; unknown names are dropped.
pub fn decode_entities(raw: &str) -> String {
    let mut out = String::with_capacity(raw.len());
    let mut rest = raw;
    while let Some(amp) = rest.find('&') {
        out.push_str(&rest[..amp]);
        let tail = &rest[amp + 1..];
        match tail.find(';').filter(|&semi| semi <= 10) {
            Some(semi) => {
                let name = &tail[..semi];
                if let Some(c) = resolve_entity(name) {
                    out.push(c);
                } else if !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '#') {
                    out.push('&');
                    out.push_str(&tail[..=semi]);
                }
                rest = &tail[semi + 1..];
            }
            None => {
                out.push('&');
                rest = tail;
            }
        }
    }
    out.push_str(rest);
    out
}

fn resolve_entity(name: &str) -> Option<char> {
    if let Some(num) = name.strip_prefix('#') {
        let code = match num.strip_prefix(['x', 'X']) {
            Some(hex) => u32::from_str_radix(hex, 16).ok()?,
            None => num.parse().ok()?,
        };
        return char::from_u32(code);
    }
    Some(match name {
        "amp" => '&',
        "lt" => '<',
        "gt" => '>',
        "quot" => '"',
        "apos" => '\'',
        "nbsp" => ' ',
        "reg" => '®',
        "micro" => 'µ',
        "times" => '×',
        "szlig" => 'ß',
        _ => return latin1_letter(name),
    })
}

/// `Auml`, `eacute`, `ccedil`, ... for the Latin-1 letter range.
fn latin1_letter(name: &str) -> Option<char> {
    const TABLE: &[(&str, char)] = &[
        ("Agrave", 'À'), ("Aacute", 'Á'), ("Acirc", 'Â'), ("Atilde", 'Ã'), ("Auml", 'Ä'),
        ("Aring", 'Å'), ("AElig", 'Æ'), ("Ccedil", 'Ç'), ("Egrave", 'È'), ("Eacute", 'É'),
        ("Ecirc", 'Ê'), ("Euml", 'Ë'), ("Igrave", 'Ì'), ("Iacute", 'Í'), ("Icirc", 'Î'),
        ("Iuml", 'Ï'), ("ETH", 'Ð'), ("Ntilde", 'Ñ'), ("Ograve", 'Ò'), ("Oacute", 'Ó'),
        ("Ocirc", 'Ô'), ("Otilde", 'Õ'), ("Ouml", 'Ö'), ("Oslash", 'Ø'), ("Ugrave", 'Ù'),
        ("Uacute", 'Ú'), ("Ucirc", 'Û'), ("Uuml", 'Ü'), ("Yacute", 'Ý'), ("THORN", 'Þ'),
        ("agrave", 'à'), ("aacute", 'á'), ("acirc", 'â'), ("atilde", 'ã'), ("auml", 'ä'),
        ("aring", 'å'), ("aelig", 'æ'), ("ccedil", 'ç'), ("egrave", 'è'), ("eacute", 'é'),
        ("ecirc", 'ê'), ("euml", 'ë'), ("igrave", 'ì'), ("iacute", 'í'), ("icirc", 'î'),
        ("iuml", 'ï'), ("eth", 'ð'), ("ntilde", 'ñ'), ("ograve", 'ò'), ("oacute", 'ó'),
        ("ocirc", 'ô'), ("otilde", 'õ'), ("ouml", 'ö'), ("oslash", 'ø'), ("ugrave", 'ù'),
        ("uacute", 'ú'), ("ucirc", 'û'), ("uuml", 'ü'), ("yacute", 'ý'), ("thorn", 'þ'),
        ("yuml", 'ÿ'),
    ];
    TABLE.iter().find(|(n, _)| *n == name).map(|&(_, c)| c)
}
