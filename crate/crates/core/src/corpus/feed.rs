use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::{CorpusError, ParseMode};

/// Reaction counts in feed order:
/// total, like, love, haha, wow, sad, angry, thankful.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Reactions(pub [u64; 8]);

impl Reactions {
    pub const SLOTS: [&'static str; 8] = [
        "total", "like", "love", "haha", "wow", "sad", "angry", "thankful",
    ];

    /// Feed positions of the slots that carry an emotion, in tie-break order.
    pub const MEANINGFUL: [usize; 5] = [2, 3, 4, 5, 6];

    pub fn total(&self) -> u64 {
        self.0[0]
    }
    pub fn like(&self) -> u64 {
        self.0[1]
    }
    pub fn love(&self) -> u64 {
        self.0[2]
    }
    pub fn haha(&self) -> u64 {
        self.0[3]
    }
    pub fn wow(&self) -> u64 {
        self.0[4]
    }
    pub fn sad(&self) -> u64 {
        self.0[5]
    }
    pub fn angry(&self) -> u64 {
        self.0[6]
    }
    pub fn thankful(&self) -> u64 {
        self.0[7]
    }

    /// Counts for love, haha, wow, sad, angry.
    pub fn meaningful(&self) -> [u64; 5] {
        Self::MEANINGFUL.map(|slot| self.0[slot])
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReactionPost {
    pub created_time: String,
    pub message: String,
    pub reactions: Reactions,
}

/// Result of a feed parse: accepted posts plus the records that were skipped.
#[derive(Debug, Default)]
pub struct FeedParse {
    pub posts: Vec<ReactionPost>,
    pub rejected: Vec<CorpusError>,
}

/// Parses a reaction feed.
///
/// The top level is a JSON array whose elements are either one-element
/// arrays wrapping a post object (the scraper's native shape) or bare post
/// objects. In [`ParseMode::Strict`] the first invalid record is returned as
/// an error; in tolerant mode it is skipped and listed in
/// [`FeedParse::rejected`].
pub fn parse_reaction_feed(bytes: &[u8], mode: ParseMode) -> Result<FeedParse, CorpusError> {
    let root: Value = serde_json::from_slice(bytes).map_err(|e| CorpusError::Json {
        offset: byte_offset(bytes, e.line(), e.column()),
        message: e.to_string(),
    })?;
    let Value::Array(items) = root else {
        return Err(CorpusError::Json {
            offset: 0,
            message: "top level must be an array".into(),
        });
    };

    let mut out = FeedParse::default();
    for (index, item) in items.iter().enumerate() {
        match parse_record(item) {
            Ok(post) => out.posts.push(post),
            Err(reason) => {
                let err = CorpusError::Record { index, reason };
                match mode {
                    ParseMode::Strict => return Err(err),
                    ParseMode::Tolerant => {
                        log::warn!("skipping feed {err}");
                        out.rejected.push(err);
                    }
                }
            }
        }
    }
    Ok(out)
}

fn parse_record(item: &Value) -> Result<ReactionPost, String> {
    let object = match item {
        Value::Object(map) => map,
        Value::Array(inner) => match inner.as_slice() {
            [Value::Object(map)] => map,
            _ => return Err("expected a one-element array holding a post object".into()),
        },
        _ => return Err("expected a post object".into()),
    };

    let string_field = |key: &str| -> Result<String, String> {
        match object.get(key) {
            Some(Value::String(s)) => Ok(s.clone()),
            Some(_) => Err(format!("field {key:?} must be a string")),
            None => Err(format!("missing field {key:?}")),
        }
    };
    let created_time = string_field("created_time")?;
    let message = string_field("message")?;

    let counts = match object.get("reactions") {
        Some(Value::Array(values)) => values,
        Some(_) => return Err("field \"reactions\" must be an array".into()),
        None => return Err("missing field \"reactions\"".into()),
    };
    if counts.len() != 8 {
        return Err(format!(
            "reactions must have 8 counts, found {}",
            counts.len()
        ));
    }
    let mut reactions = [0u64; 8];
    for (slot, value) in counts.iter().enumerate() {
        reactions[slot] = match value.as_u64() {
            Some(n) => n,
            None if value.as_i64().is_some() => {
                return Err(format!("negative {} count", Reactions::SLOTS[slot]))
            }
            None => {
                return Err(format!(
                    "{} count is not a non-negative integer",
                    Reactions::SLOTS[slot]
                ))
            }
        };
    }

    Ok(ReactionPost {
        created_time,
        message,
        reactions: Reactions(reactions),
    })
}

/// Converts serde_json's 1-based line/column into a byte offset.
fn byte_offset(bytes: &[u8], line: usize, column: usize) -> usize {
    let mut offset = 0;
    for _ in 1..line {
        match bytes[offset..].iter().position(|&b| b == b'\n') {
            Some(nl) => offset += nl + 1,
            None => break,
        }
    }
    (offset + column.saturating_sub(1)).min(bytes.len())
}

/// Writes posts in the native wrapped shape, pretty-printed with a trailing newline.
pub fn write_reaction_feed(posts: &[ReactionPost]) -> Vec<u8> {
    let wrapped: Vec<[&ReactionPost; 1]> = posts.iter().map(|p| [p]).collect();
    let mut bytes = serde_json::to_vec_pretty(&wrapped).expect("posts always serialize");
    bytes.push(b'\n');
    bytes
}
