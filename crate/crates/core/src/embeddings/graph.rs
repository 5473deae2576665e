use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::EmbeddingTable;
use crate::features::{Category, Lexicon};

pub const DEFAULT_MAX_DEGREE: usize = 50;

/// How neighbor weights are derived from the adjacency.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeWeighting {
    /// Each neighbor of `i` weighs `1 / degree(i)`.
    #[default]
    InverseDegree,
    /// Every edge weighs the same in both directions.
    Uniform(f64),
}

/// Undirected word graph with per-word anchor weights (α, default 1).
#[derive(Clone, Debug, Default, PartialEq)]
pub struct EmotionGraph {
    neighbors: BTreeMap<String, BTreeSet<String>>,
    anchors: BTreeMap<String, f64>,
    weighting: EdgeWeighting,
}

impl EmotionGraph {
    pub fn new(weighting: EdgeWeighting) -> Self {
        EmotionGraph {
            weighting,
            ..Default::default()
        }
    }

    /// Adds an undirected edge. Self-loops are ignored; returns whether a
    /// new edge was created.
    pub fn add_edge(&mut self, a: &str, b: &str) -> bool {
        if a == b {
            return false;
        }
        let fresh = self.neighbors.entry(a.to_string()).or_default().insert(b.to_string());
        self.neighbors.entry(b.to_string()).or_default().insert(a.to_string());
        fresh
    }

    pub fn set_anchor(&mut self, word: &str, alpha: f64) {
        assert!(alpha > 0.0, "anchor weight must be positive");
        self.anchors.insert(word.to_string(), alpha);
    }

    pub fn anchor(&self, word: &str) -> f64 {
        self.anchors.get(word).copied().unwrap_or(1.0)
    }

    pub fn weighting(&self) -> EdgeWeighting {
        self.weighting
    }

    pub fn neighbors(&self, word: &str) -> impl Iterator<Item = &str> {
        self.neighbors.get(word).into_iter().flatten().map(String::as_str)
    }

    pub fn degree(&self, word: &str) -> usize {
        self.neighbors.get(word).map_or(0, BTreeSet::len)
    }

    /// Words with at least one neighbor, in lexicographic order.
    pub fn words(&self) -> impl Iterator<Item = &str> {
        self.neighbors.keys().map(String::as_str)
    }

    pub fn edge_count(&self) -> usize {
        self.neighbors.values().map(BTreeSet::len).sum::<usize>() / 2
    }

    pub fn is_empty(&self) -> bool {
        self.neighbors.is_empty()
    }

    pub fn has_edge(&self, a: &str, b: &str) -> bool {
        self.neighbors.get(a).is_some_and(|n| n.contains(b))
    }

    /// Copy restricted to words present in `table`.
    pub fn restrict_to(&self, table: &EmbeddingTable) -> EmotionGraph {
        let mut out = EmotionGraph::new(self.weighting);
        for (a, ns) in &self.neighbors {
            if !table.contains(a) {
                continue;
            }
            for b in ns.iter().filter(|b| table.contains(b)) {
                out.add_edge(a, b);
            }
        }
        out.anchors = self.anchors.clone();
        out
    }
}

/// Connects lexicon words that share at least one emotion category (valence
/// flags do not count). Only words present in `table` take part.
///
/// Each word proposes its first `max_degree` eligible partners in
/// lexicographic order, and the proposals are then symmetrized, so a word
/// chosen by many others may end up with more than `max_degree` neighbors.
pub fn build_emotion_graph(lex: &Lexicon, table: &EmbeddingTable, max_degree: usize) -> EmotionGraph {
    let words: Vec<(&str, _)> = lex.iter().filter(|(w, _)| table.contains(w)).collect();

    // Sorted member lists per emotion category.
    let mut members: BTreeMap<Category, Vec<usize>> = BTreeMap::new();
    for (i, (_, flags)) in words.iter().enumerate() {
        for category in flags.iter().filter(|c| c.is_emotion()) {
            members.entry(category).or_default().push(i);
        }
    }

    let mut graph = EmotionGraph::new(EdgeWeighting::InverseDegree);
    for (i, (word, flags)) in words.iter().enumerate() {
        let candidates: BTreeSet<usize> = flags
            .iter()
            .filter(|c| c.is_emotion())
            .flat_map(|c| members[&c].iter().copied().filter(|&j| j != i).take(max_degree))
            .collect();
        for j in candidates.into_iter().take(max_degree) {
            graph.add_edge(word, words[j].0);
        }
    }
    graph
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(words: &[&str]) -> EmbeddingTable {
        let mut t = EmbeddingTable::new(1).unwrap();
        for w in words {
            t.insert(*w, &[0.0]).unwrap();
        }
        t
    }

    #[test]
    fn two_joy_words_one_edge() {
        let lex = Lexicon::from_entries([("glad", vec![Category::Joy]), ("merry", vec![Category::Joy])]);
        let g = build_emotion_graph(&lex, &table(&["glad", "merry"]), 50);
        assert_eq!(g.edge_count(), 1);
        assert!(g.has_edge("glad", "merry") && g.has_edge("merry", "glad"));
    }

    #[test]
    fn isolated_and_missing_words() {
        let lex = Lexicon::from_entries([
            ("glad", vec![Category::Joy]),
            ("merry", vec![Category::Joy]),
            ("gloomy", vec![Category::Sadness]),
            ("absent", vec![Category::Joy]),
        ]);
        let g = build_emotion_graph(&lex, &table(&["glad", "merry", "gloomy"]), 50);
        assert_eq!(g.degree("gloomy"), 0);
        assert_eq!(g.degree("absent"), 0);
        assert_eq!(g.words().collect::<Vec<_>>(), ["glad", "merry"]);
    }

    #[test]
    fn degree_cap_then_symmetrize() {
        let lex = Lexicon::from_entries([
            ("a", vec![Category::Joy]),
            ("b", vec![Category::Joy]),
            ("c", vec![Category::Joy]),
        ]);
        let g = build_emotion_graph(&lex, &table(&["a", "b", "c"]), 1);
        // a picks b, b picks a, c picks a.
        assert!(g.has_edge("a", "b"));
        assert!(g.has_edge("a", "c"));
        assert!(!g.has_edge("b", "c"));
        assert_eq!(g.edge_count(), 2);
    }

    #[test]
    fn valence_alone_does_not_connect() {
        let lex = Lexicon::from_entries([
            ("x", vec![Category::Positive]),
            ("y", vec![Category::Positive]),
        ]);
        assert!(build_emotion_graph(&lex, &table(&["x", "y"]), 5).is_empty());
    }

    #[test]
    fn adjacency_is_symmetric_without_self_loops() {
        let lex = Lexicon::toy();
        let words: Vec<&str> = lex.iter().map(|(w, _)| w).collect();
        let g = build_emotion_graph(&lex, &table(&words), 3);
        for a in g.words() {
            assert!(!g.has_edge(a, a));
            for b in g.neighbors(a) {
                assert!(g.has_edge(b, a));
            }
        }
        let mut manual = EmotionGraph::default();
        assert!(!manual.add_edge("q", "q"));
        assert!(manual.is_empty());
    }
}
