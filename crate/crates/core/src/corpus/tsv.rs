//! Canonical corpus format: `label<TAB>source<TAB>text`, one record per
//! line, no header.

use std::fs::File;
use std::io::{self, BufRead, BufReader, Write};
use std::path::Path;

use super::{CorpusError, Emotion, LabeledDoc, ParseMode};

#[derive(Debug, Default)]
pub struct DocLoad {
    pub docs: Vec<LabeledDoc>,
    pub rejected: Vec<CorpusError>,
}

pub fn load_canonical_tsv(path: impl AsRef<Path>, mode: ParseMode) -> Result<DocLoad, CorpusError> {
    read_canonical_tsv(BufReader::new(File::open(path)?), mode)
}

pub fn read_canonical_tsv<R: BufRead>(reader: R, mode: ParseMode) -> Result<DocLoad, CorpusError> {
    let mut out = DocLoad::default();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let line = line.strip_suffix('\r').unwrap_or(&line);
        if line.trim().is_empty() {
            continue;
        }
        match parse_line(line) {
            Ok(doc) => out.docs.push(doc),
            Err(reason) => {
                let err = CorpusError::Line { line: i + 1, reason };
                match mode {
                    ParseMode::Strict => return Err(err),
                    ParseMode::Tolerant => {
                        log::warn!("skipping corpus {err}");
                        out.rejected.push(err);
                    }
                }
            }
        }
    }
    Ok(out)
}

fn parse_line(line: &str) -> Result<LabeledDoc, String> {
    let mut fields = line.splitn(3, '\t');
    let (Some(label), Some(source), Some(text)) = (fields.next(), fields.next(), fields.next())
    else {
        return Err("expected 3 tab-separated fields".into());
    };
    let label: Emotion = label
        .parse()
        .map_err(|_| format!("unknown canonical label {label:?}"))?;
    LabeledDoc::new(text, label, source).map_err(|e| e.to_string())
}

/// Writes documents with LF endings. Tabs and line breaks inside fields are
/// replaced by spaces so every record stays on one line.
pub fn write_canonical_tsv<W: Write>(docs: &[LabeledDoc], mut writer: W) -> io::Result<()> {
    for doc in docs {
        writeln!(
            writer,
            "{}\t{}\t{}",
            doc.label(),
            flatten(doc.source()),
            flatten(doc.text())
        )?;
    }
    writer.flush()
}

fn flatten(field: &str) -> String {
    field.replace(['\t', '\r', '\n'], " ")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn read(s: &str, mode: ParseMode) -> Result<DocLoad, CorpusError> {
        read_canonical_tsv(s.as_bytes(), mode)
    }

    #[test]
    fn direct_field_mapping() {
        let load = read("joy\tisear\tI passed my exam\n", ParseMode::Strict).unwrap();
        assert_eq!(
            load.docs,
            vec![LabeledDoc::new("I passed my exam", Emotion::Joy, "isear").unwrap()]
        );
    }

    #[test]
    fn empty_file() {
        assert!(read("", ParseMode::Strict).unwrap().docs.is_empty());
    }

    #[test]
    fn dropped_label_is_unknown() {
        let err = read("fear\tisear\tdark alley\n", ParseMode::Strict).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("unknown canonical label"), "{msg}");
        assert!(matches!(err, CorpusError::Line { line: 1, .. }));
    }

    #[test]
    fn tolerant_mode_reports_line_numbers() {
        let text = "anger\ta\tgrr\nsadness\tonly two\nsurprise\tb\toh\n";
        let load = read(text, ParseMode::Tolerant).unwrap();
        assert_eq!(load.docs.len(), 2);
        assert!(matches!(load.rejected[0], CorpusError::Line { line: 2, .. }));
    }

    #[test]
    fn text_may_contain_tabs_after_the_second() {
        let load = read("joy\ts\ta\tb\n", ParseMode::Strict).unwrap();
        assert_eq!(load.docs[0].text(), "a\tb");
        let mut out = Vec::new();
        write_canonical_tsv(&load.docs, &mut out).unwrap();
        assert_eq!(out, b"joy\ts\ta b\n");
    }
}
