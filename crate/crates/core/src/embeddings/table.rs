use std::collections::HashMap;
use std::fs::File;
use std::io::{self, BufRead, BufReader, Write};
use std::path::Path;

use super::EmbeddingError;

/// Word vectors of a fixed dimension, in insertion order.
#[derive(Clone, Debug, PartialEq)]
pub struct EmbeddingTable {
    dim: usize,
    words: Vec<String>,
    index: HashMap<String, usize>,
    data: Vec<f64>,
}

impl EmbeddingTable {
    pub fn new(dim: usize) -> Result<Self, EmbeddingError> {
        if dim == 0 {
            return Err(EmbeddingError::ZeroDimension);
        }
        Ok(EmbeddingTable {
            dim,
            words: Vec::new(),
            index: HashMap::new(),
            data: Vec::new(),
        })
    }

    /// Inserts or replaces a vector. Returns `true` when a previous vector
    /// for the word was replaced (its position is kept).
    pub fn insert(&mut self, word: impl Into<String>, vector: &[f64]) -> Result<bool, EmbeddingError> {
        if vector.len() != self.dim {
            return Err(EmbeddingError::DimensionMismatch {
                expected: self.dim,
                found: vector.len(),
            });
        }
        let word = word.into();
        match self.index.get(&word) {
            Some(&row) => {
                self.data[row * self.dim..(row + 1) * self.dim].copy_from_slice(vector);
                Ok(true)
            }
            None => {
                self.index.insert(word.clone(), self.words.len());
                self.words.push(word);
                self.data.extend_from_slice(vector);
                Ok(false)
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn contains(&self, word: &str) -> bool {
        self.index.contains_key(word)
    }

    pub fn row_of(&self, word: &str) -> Option<usize> {
        self.index.get(word).copied()
    }

    pub fn get(&self, word: &str) -> Option<&[f64]> {
        self.row_of(word).map(|row| self.row(row))
    }

    pub fn row(&self, row: usize) -> &[f64] {
        &self.data[row * self.dim..(row + 1) * self.dim]
    }

    pub(crate) fn row_mut(&mut self, row: usize) -> &mut [f64] {
        &mut self.data[row * self.dim..(row + 1) * self.dim]
    }

    pub fn words(&self) -> &[String] {
        &self.words
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &[f64])> {
        self.words
            .iter()
            .zip(self.data.chunks_exact(self.dim))
            .map(|(w, v)| (w.as_str(), v))
    }

    pub fn cosine(&self, a: &str, b: &str) -> Option<f64> {
        Some(cosine(self.get(a)?, self.get(b)?))
    }
}

pub fn cosine(a: &[f64], b: &[f64]) -> f64 {
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    let na = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nb = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    if na == 0.0 || nb == 0.0 {
        0.0
    } else {
        dot / (na * nb)
    }
}

/// A loaded table plus the non-fatal problems found while reading it.
#[derive(Debug)]
pub struct LoadedVectors {
    pub table: EmbeddingTable,
    pub warnings: Vec<String>,
}

pub fn load_vectors(path: impl AsRef<Path>) -> Result<LoadedVectors, EmbeddingError> {
    read_vectors(BufReader::new(File::open(path)?))
}

/// Reads the word2vec text format: a `count dim` header, then one
/// `word v1 .. vd` row per word.
///
/// A row with the wrong number of values or an unparseable number is an
/// error. Duplicate words (last one wins) and a header count that disagrees
/// with the rows are reported as warnings.
pub fn read_vectors<R: BufRead>(reader: R) -> Result<LoadedVectors, EmbeddingError> {
    let mut lines = reader.lines().enumerate();
    let header = loop {
        match lines.next() {
            Some((_, line)) => {
                let line = line?;
                if !line.trim().is_empty() {
                    break line;
                }
            }
            None => return Err(EmbeddingError::Format { line: 1, reason: "missing header".into() }),
        }
    };
    let header_err = |reason: &str| EmbeddingError::Format { line: 1, reason: reason.into() };
    let mut fields = header.split_whitespace();
    let (Some(count), Some(dim), None) = (fields.next(), fields.next(), fields.next()) else {
        return Err(header_err("header must be `count dim`"));
    };
    let count: usize = count.parse().map_err(|_| header_err("invalid word count"))?;
    let dim: usize = dim.parse().map_err(|_| header_err("invalid dimension"))?;

    let mut table = EmbeddingTable::new(dim)?;
    let mut warnings = Vec::new();
    let mut values = Vec::with_capacity(dim);
    for (i, line) in lines {
        let line = line?;
        let line_no = i + 1;
        let mut fields = line.split_whitespace();
        let Some(word) = fields.next() else { continue };
        values.clear();
        for field in fields {
            let v: f64 = field.parse().map_err(|_| EmbeddingError::Format {
                line: line_no,
                reason: format!("unparseable number {field:?}"),
            })?;
            values.push(v);
        }
        if values.len() != dim {
            return Err(EmbeddingError::Format {
                line: line_no,
                reason: format!("expected {dim} values, found {}", values.len()),
            });
        }
        if table.insert(word, &values)? {
            let msg = format!("line {line_no}: duplicate word {word:?}, keeping the last vector");
            log::warn!("{msg}");
            warnings.push(msg);
        }
    }
    if table.len() != count {
        let msg = format!("header declares {count} words, found {}", table.len());
        log::warn!("{msg}");
        warnings.push(msg);
    }
    Ok(LoadedVectors { table, warnings })
}

/// Writes the same text format `read_vectors` accepts.
pub fn write_vectors<W: Write>(table: &EmbeddingTable, mut writer: W) -> io::Result<()> {
    writeln!(writer, "{} {}", table.len(), table.dim())?;
    for (word, vector) in table.iter() {
        write!(writer, "{word}")?;
        for v in vector {
            write!(writer, " {v}")?;
        }
        writeln!(writer)?;
    }
    writer.flush()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn read(s: &str) -> Result<LoadedVectors, EmbeddingError> {
        read_vectors(s.as_bytes())
    }

    #[test]
    fn reads_valid_file() {
        let loaded = read("2 3\ncat 1 2 3\ndog 0.5 -1 2e-3\n").unwrap();
        assert_eq!(loaded.table.len(), 2);
        assert_eq!(loaded.table.dim(), 3);
        assert_eq!(loaded.table.get("dog"), Some(&[0.5, -1.0, 0.002][..]));
        assert!(loaded.warnings.is_empty());
    }

    #[test]
    fn short_row_is_error_at_its_line() {
        let err = read("2 3\ncat 1 2 3\ndog 1 2\n").unwrap_err();
        assert!(matches!(err, EmbeddingError::Format { line: 3, .. }), "{err}");
        let err = read("1 2\ncat 1 x\n").unwrap_err();
        assert!(matches!(err, EmbeddingError::Format { line: 2, .. }), "{err}");
    }

    #[test]
    fn count_mismatch_warns() {
        let loaded = read("5 1\na 1\nb 2\nc 3\nd 4\n").unwrap();
        assert_eq!(loaded.table.len(), 4);
        assert_eq!(loaded.warnings.len(), 1);
    }

    #[test]
    fn duplicate_last_wins() {
        let loaded = read("2 1\na 1\na 2\n").unwrap();
        assert_eq!(loaded.table.len(), 1);
        assert_eq!(loaded.table.get("a"), Some(&[2.0][..]));
        // one warning for the duplicate, one for the count
        assert_eq!(loaded.warnings.len(), 2);
    }

    #[test]
    fn bad_header() {
        assert!(read("").is_err());
        assert!(read("3\n").is_err());
        assert!(read("2 0\n").is_err());
    }

    #[test]
    fn write_read_write_is_stable() {
        let mut table = EmbeddingTable::new(2).unwrap();
        table.insert("x", &[0.1, -1.0 / 3.0]).unwrap();
        table.insert("y", &[1e-20, 12345.678]).unwrap();
        let mut first = Vec::new();
        write_vectors(&table, &mut first).unwrap();
        let again = read_vectors(&first[..]).unwrap().table;
        assert_eq!(again, table);
        let mut second = Vec::new();
        write_vectors(&again, &mut second).unwrap();
        assert_eq!(first, second);
    }
}
