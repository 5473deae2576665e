use std::fmt;

use serde::{Deserialize, Serialize};

use super::{CorpusError, Emotion};

/// Outcome of mapping a raw source label.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mapped {
    Emotion(Emotion),
    Dropped,
}

impl Mapped {
    pub fn emotion(self) -> Option<Emotion> {
        match self {
            Mapped::Emotion(e) => Some(e),
            Mapped::Dropped => None,
        }
    }
}

/// Label vocabularies of the training feed and the three benchmarks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SourceScheme {
    Facebook,
    Affective,
    FairyTales,
    Isear,
}

impl SourceScheme {
    pub const ALL: [SourceScheme; 4] = [
        SourceScheme::Facebook,
        SourceScheme::Affective,
        SourceScheme::FairyTales,
        SourceScheme::Isear,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SourceScheme::Facebook => "facebook",
            SourceScheme::Affective => "affective",
            SourceScheme::FairyTales => "fairy_tales",
            SourceScheme::Isear => "isear",
        }
    }

    /// Every raw label the scheme knows, in the scheme's own order.
    pub fn raw_labels(self) -> &'static [&'static str] {
        match self {
            SourceScheme::Facebook => &["like", "love", "haha", "wow", "sad", "angry", "thankful"],
            SourceScheme::Affective => &["anger", "disgust", "fear", "joy", "sadness", "surprise"],
            SourceScheme::FairyTales => &[
                "angry-disgusted",
                "angry",
                "disgusted",
                "fearful",
                "happy",
                "sad",
                "surprised",
            ],
            SourceScheme::Isear => &[
                "anger", "disgust", "fear", "joy", "sadness", "shame", "guilt",
            ],
        }
    }

    /// Maps a raw label (case-insensitive) onto a canonical emotion or `Dropped`.
    pub fn map(self, raw: &str) -> Result<Mapped, CorpusError> {
        use Emotion::*;
        use Mapped::Dropped;
        let e = Mapped::Emotion;
        let label = raw.trim().to_ascii_lowercase();
        let mapped = match (self, label.as_str()) {
            (SourceScheme::Facebook, "love" | "haha") => e(Joy),
            (SourceScheme::Facebook, "wow") => e(Surprise),
            (SourceScheme::Facebook, "sad") => e(Sadness),
            (SourceScheme::Facebook, "angry") => e(Anger),
            (SourceScheme::Facebook, "like" | "thankful") => Dropped,

            (SourceScheme::Affective, "anger" | "disgust") => e(Anger),
            (SourceScheme::Affective, "joy") => e(Joy),
            (SourceScheme::Affective, "sadness") => e(Sadness),
            (SourceScheme::Affective, "surprise") => e(Surprise),
            (SourceScheme::Affective, "fear") => Dropped,

            (SourceScheme::FairyTales, "angry-disgusted" | "angry" | "disgusted") => e(Anger),
            (SourceScheme::FairyTales, "happy") => e(Joy),
            (SourceScheme::FairyTales, "sad") => e(Sadness),
            (SourceScheme::FairyTales, "surprised") => e(Surprise),
            (SourceScheme::FairyTales, "fearful") => Dropped,

            (SourceScheme::Isear, "anger" | "disgust") => e(Anger),
            (SourceScheme::Isear, "joy") => e(Joy),
            (SourceScheme::Isear, "sadness") => e(Sadness),
            (SourceScheme::Isear, "fear" | "shame" | "guilt") => Dropped,

            _ => {
                return Err(CorpusError::UnknownRawLabel {
                    scheme: self,
                    label: raw.to_string(),
                })
            }
        };
        Ok(mapped)
    }
}

impl fmt::Display for SourceScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use Emotion::*;

    fn m(scheme: SourceScheme, raw: &str) -> Option<Emotion> {
        scheme.map(raw).unwrap().emotion()
    }

    #[test]
    fn every_raw_label_maps_totally() {
        for scheme in SourceScheme::ALL {
            for raw in scheme.raw_labels() {
                assert!(scheme.map(raw).is_ok(), "{scheme}: {raw}");
                assert!(scheme.map(&raw.to_uppercase()).is_ok());
            }
            assert!(scheme.map("contempt").is_err());
        }
    }

    #[test]
    fn facebook_mapping() {
        let fb = SourceScheme::Facebook;
        assert_eq!(m(fb, "love"), Some(Joy));
        assert_eq!(m(fb, "haha"), Some(Joy));
        assert_eq!(m(fb, "wow"), Some(Surprise));
        assert_eq!(m(fb, "sad"), Some(Sadness));
        assert_eq!(m(fb, "angry"), Some(Anger));
        assert_eq!(m(fb, "like"), None);
        assert_eq!(m(fb, "thankful"), None);
    }

    #[test]
    fn benchmark_mappings() {
        assert_eq!(m(SourceScheme::Affective, "disgust"), Some(Anger));
        assert_eq!(m(SourceScheme::Affective, "fear"), None);
        assert_eq!(m(SourceScheme::FairyTales, "disgusted"), Some(Anger));
        assert_eq!(m(SourceScheme::FairyTales, "happy"), Some(Joy));
        assert_eq!(m(SourceScheme::FairyTales, "fearful"), None);
        assert_eq!(m(SourceScheme::Isear, "disgust"), Some(Anger));
        assert_eq!(m(SourceScheme::Isear, "guilt"), None);
        assert_eq!(m(SourceScheme::Isear, "shame"), None);
        assert!(SourceScheme::Isear.map("surprise").is_err());
    }
}
