use std::sync::OnceLock;

/// Bundled English stopword list, one lowercase word per line, sorted.
pub const STOPWORDS: &str = include_str!("stopwords.txt");

fn list() -> &'static [&'static str] {
    static WORDS: OnceLock<Vec<&'static str>> = OnceLock::new();
    WORDS.get_or_init(|| STOPWORDS.lines().filter(|l| !l.is_empty()).collect())
}

pub fn is_stopword(token: &str) -> bool {
    list().binary_search(&token).is_ok()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn list_is_sorted_and_sized() {
        let words = list();
        assert!(words.windows(2).all(|w| w[0] < w[1]));
        assert!(words.len() >= 300);
        assert!(is_stopword("the") && is_stopword("whereupon"));
        assert!(!is_stopword("network"));
    }
}
