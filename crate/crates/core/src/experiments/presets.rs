use super::{ExperimentConfig, ExperimentError};

/// A named training-set composition of social media pages.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Preset {
    pub name: &'static str,
    pub pages: &'static [&'static str],
}

pub const PRESETS: [Preset; 3] = [
    Preset { name: "b-m", pages: &["Time", "The Guardian", "Disney"] },
    Preset { name: "ft-m", pages: &["HuffPostWeirdNews", "ESPN", "CNN"] },
    Preset { name: "ise-m", pages: &["Time", "The Guardian", "CookingLight"] },
];

pub fn preset(name: &str) -> Option<&'static Preset> {
    PRESETS.iter().find(|p| p.name.eq_ignore_ascii_case(name.trim()))
}

/// Matching key for page names: lowercase alphanumerics without a leading
/// "the", so "The Guardian", "theguardian" and "Guardian" agree.
pub fn page_key(name: &str) -> String {
    let key: String = name.chars().filter(|c| c.is_alphanumeric()).flat_map(char::to_lowercase).collect();
    match key.strip_prefix("the") {
        Some(rest) if !rest.is_empty() => rest.to_string(),
        _ => key,
    }
}

/// Keeps only the training sources named in `pages`, in the order given.
pub fn select_sources(config: &mut ExperimentConfig, pages: &[&str]) -> Result<(), ExperimentError> {
    let mut chosen = Vec::with_capacity(pages.len());
    let mut missing = Vec::new();
    for page in pages {
        match config.sources.iter().find(|s| page_key(&s.name) == page_key(page)) {
            Some(s) => chosen.push(s.clone()),
            None => missing.push(*page),
        }
    }
    if !missing.is_empty() {
        let available: Vec<&str> = config.sources.iter().map(|s| s.name.as_str()).collect();
        return Err(ExperimentError::Config(format!(
            "no training source for page(s) {} (available: {})",
            missing.join(", "),
            available.join(", ")
        )));
    }
    config.sources = chosen;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::SourceSpec;

    #[test]
    fn preset_lookup() {
        assert_eq!(preset("B-M").unwrap().pages, ["Time", "The Guardian", "Disney"]);
        assert_eq!(preset("ft-m").unwrap().pages, ["HuffPostWeirdNews", "ESPN", "CNN"]);
        assert_eq!(preset("ise-m").unwrap().pages, ["Time", "The Guardian", "CookingLight"]);
        assert!(preset("x-m").is_none());
    }

    #[test]
    fn keys() {
        assert_eq!(page_key("The Guardian"), "guardian");
        assert_eq!(page_key("TheGuardian"), "guardian");
        assert_eq!(page_key("Cooking Light"), page_key("CookingLight"));
        assert_eq!(page_key("The"), "the");
    }

    #[test]
    fn selection_by_loose_names() {
        let feeds = ["time.json", "guardian.json", "disney.json", "cnn.json"];
        let names = ["TIME", "Guardian", "Disney", "CNN"];
        let sources = names.iter().zip(feeds).map(|(n, f)| SourceSpec::feed(*n, f)).collect();
        let mut c = ExperimentConfig::new(sources, vec![], "out");
        select_sources(&mut c, &"Time,Guardian,Disney".split(',').collect::<Vec<_>>()).unwrap();
        let kept: Vec<&str> = c.sources.iter().map(|s| s.name.as_str()).collect();
        assert_eq!(kept, ["TIME", "Guardian", "Disney"]);
        let err = select_sources(&mut c, preset("ft-m").unwrap().pages).unwrap_err();
        assert!(err.to_string().contains("HuffPostWeirdNews"));
    }
}
