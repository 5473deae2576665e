//! Emotion classification trained on reaction-labeled social media posts.
//!
//! Posts are labeled by their dominant emotional reaction, turned into
//! sparse feature vectors, and used to train a one-vs-rest linear SVM that
//! is scored against benchmark datasets mapped onto four emotions.

pub mod classifier;
pub mod corpus;
pub mod embeddings;
pub mod eval;
pub mod experiments;
pub mod features;
