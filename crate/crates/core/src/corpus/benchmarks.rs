//! Label conversion for the benchmark datasets. Archival file formats are
//! handled by the converter scripts; these functions take already-split
//! records.

use super::{CorpusError, DocLoad, Emotion, LabeledDoc, Mapped, ParseMode, SourceScheme};

pub const AFFECTIVE_DEFAULT_THRESHOLD: i64 = 50;

/// Converts a headline's six 0..=100 scores (anger, disgust, fear, joy,
/// sadness, surprise) into a single coarse label.
///
/// Disgust folds into anger by taking the larger of the two, fear is
/// dropped, and the best remaining emotion wins if it reaches `threshold`.
pub fn map_affective_scores(scores: [i64; 6], threshold: i64) -> Result<Option<Emotion>, CorpusError> {
    for value in scores.iter().copied().chain([threshold]) {
        if !(0..=100).contains(&value) {
            return Err(CorpusError::ScoreOutOfRange { value });
        }
    }
    let [anger, disgust, _fear, joy, sadness, surprise] = scores;
    let mapped = [anger.max(disgust), joy, sadness, surprise];

    let (idx, best) = mapped
        .iter()
        .copied()
        .enumerate()
        .fold((0, mapped[0]), |acc, (i, s)| if s > acc.1 { (i, s) } else { acc });
    Ok((best >= threshold && best > 0).then(|| Emotion::ALL[idx]))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FairyTaleRecord {
    pub sentence: String,
    pub annotations: Vec<String>,
}

impl FairyTaleRecord {
    pub fn new(sentence: impl Into<String>, annotations: &[&str]) -> Self {
        FairyTaleRecord {
            sentence: sentence.into(),
            annotations: annotations.iter().map(|s| s.to_string()).collect(),
        }
    }
}

/// Keeps sentences on which every annotator agrees once angry and disgusted
/// are merged; fearful sentences are excluded.
pub fn load_fairy_tales(records: &[FairyTaleRecord], mode: ParseMode) -> Result<DocLoad, CorpusError> {
    let mut out = DocLoad::default();
    for (index, record) in records.iter().enumerate() {
        match agreed_label(record) {
            Ok(Some(label)) => match LabeledDoc::new(record.sentence.clone(), label, "fairy_tales") {
                Ok(doc) => out.docs.push(doc),
                Err(e) => reject(&mut out, mode, index, e.to_string())?,
            },
            Ok(None) => {}
            Err(reason) => reject(&mut out, mode, index, reason)?,
        }
    }
    Ok(out)
}

fn agreed_label(record: &FairyTaleRecord) -> Result<Option<Emotion>, String> {
    let mut mapped = record
        .annotations
        .iter()
        .map(|raw| SourceScheme::FairyTales.map(raw).map_err(|e| e.to_string()));
    let first = match mapped.next() {
        Some(m) => m?,
        None => return Err("record has no annotations".into()),
    };
    let mut agree = true;
    for m in mapped {
        agree &= m? == first;
    }
    Ok(match (agree, first) {
        (true, Mapped::Emotion(e)) => Some(e),
        _ => None,
    })
}

fn reject(out: &mut DocLoad, mode: ParseMode, index: usize, reason: String) -> Result<(), CorpusError> {
    let err = CorpusError::Record { index, reason };
    match mode {
        ParseMode::Strict => Err(err),
        ParseMode::Tolerant => {
            out.rejected.push(err);
            Ok(())
        }
    }
}
