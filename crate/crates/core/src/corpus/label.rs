use serde::{Deserialize, Serialize};

use super::{Emotion, ReactionPost, Reactions};

/// Emotion of each meaningful slot (love, haha, wow, sad, angry).
const SLOT_EMOTION: [Emotion; 5] = [
    Emotion::Joy,
    Emotion::Joy,
    Emotion::Surprise,
    Emotion::Sadness,
    Emotion::Anger,
];

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TiePolicy {
    /// Earliest slot (or emotion ordinal) wins.
    #[default]
    FirstSlot,
    /// Posts whose maximum is shared by two different emotions stay unlabeled.
    Discard,
}

/// Turns a reaction vector into a distant label.
///
/// The default rule takes the argmax over the raw love/haha/wow/sad/angry
/// counts and maps the winning slot to its emotion. `like`, `thankful` and
/// `total` never participate.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LabelRule {
    pub ties: TiePolicy,
    /// Sum love and haha into joy before taking the argmax.
    pub sum_before_argmax: bool,
}

impl LabelRule {
    pub fn apply(&self, reactions: &Reactions) -> Option<Emotion> {
        let (winner, best, tied) = if self.sum_before_argmax {
            let mut totals = [0u64; Emotion::COUNT];
            for (count, emotion) in reactions.meaningful().iter().zip(SLOT_EMOTION) {
                totals[emotion.index()] += count;
            }
            let (idx, best) = first_max(&totals);
            let tied = totals.iter().filter(|&&c| c == best).count() > 1;
            (Emotion::ALL[idx], best, tied)
        } else {
            let counts = reactions.meaningful();
            let (slot, best) = first_max(&counts);
            let winner = SLOT_EMOTION[slot];
            let tied = counts
                .iter()
                .zip(SLOT_EMOTION)
                .any(|(&c, e)| c == best && e != winner);
            (winner, best, tied)
        };

        if best == 0 || (tied && self.ties == TiePolicy::Discard) {
            None
        } else {
            Some(winner)
        }
    }
}

fn first_max(counts: &[u64]) -> (usize, u64) {
    counts
        .iter()
        .copied()
        .enumerate()
        .fold((0, counts[0]), |acc, (i, c)| if c > acc.1 { (i, c) } else { acc })
}

/// Labels a post with the default rule; `None` means unlabeled.
pub fn assign_label(post: &ReactionPost) -> Option<Emotion> {
    LabelRule::default().apply(&post.reactions)
}

/// Shannon entropy in nats of the normalized love/haha/wow/sad/angry counts.
/// `None` when all five are zero.
pub fn reaction_entropy(reactions: &Reactions) -> Option<f64> {
    let counts = reactions.meaningful();
    let total: u64 = counts.iter().sum();
    if total == 0 {
        return None;
    }
    let total = total as f64;
    let h = counts
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = c as f64 / total;
            -p * p.ln()
        })
        .sum::<f64>();
    Some(h.max(0.0))
}

/// Keeps posts whose reaction entropy is at most `max_entropy` nats.
/// Posts with no meaningful reactions are always removed.
pub fn entropy_filter(posts: &[ReactionPost], max_entropy: f64) -> Vec<ReactionPost> {
    posts
        .iter()
        .filter(|post| matches!(reaction_entropy(&post.reactions), Some(h) if h <= max_entropy))
        .cloned()
        .collect()
}
