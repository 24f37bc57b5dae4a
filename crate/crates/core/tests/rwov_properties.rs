//! Property suite for the word-order vectorizer: the value law, the
//! absence-zero equivalence, the sign rule, and agreement with an
//! independent occurrence-pair enumeration oracle.

use proptest::prelude::*;
use rwov_core::rwov::{fit_transform, select_top_words, vectorize_doc, TopWords};
use rwov_core::textprep::PreparedDoc;

const TOI: &str = "t";
const ALPHABET: [&str; 4] = [TOI, "a", "b", "c"];

fn prepared(id: &str, tokens: Vec<String>) -> PreparedDoc {
    let toi_positions = tokens
        .iter()
        .enumerate()
        .filter(|(_, t)| t.as_str() == TOI)
        .map(|(i, _)| i)
        .collect();
    PreparedDoc {
        doc_id: id.into(),
        tokens,
        toi_positions,
        source_sentence_index: 0,
    }
}

fn top_of(words: &[&str]) -> TopWords {
    let docs = vec![prepared(
        "vocab",
        words
            .iter()
            .flat_map(|w| [w.to_string()])
            .chain([TOI.to_string()])
            .collect(),
    )];
    select_top_words(&docs, words.len()).unwrap()
}

/// Independent oracle: enumerate every (word occurrence, TOI occurrence)
/// pair, count top tokens strictly between by scanning, keep the minimal
/// count with before/after ties resolving to after.
fn oracle_value(tokens: &[String], toi_positions: &[usize], top: &[String], word: &str) -> f64 {
    let is_top = |t: &str| top.iter().any(|w| w == t);
    let mut best: Option<(usize, bool)> = None;
    for (pw, token) in tokens.iter().enumerate() {
        if token != word {
            continue;
        }
        for &pt in toi_positions {
            let (lo, hi) = if pw < pt { (pw, pt) } else { (pt, pw) };
            let k = tokens[lo + 1..hi].iter().filter(|t| is_top(t)).count();
            let after = pw > pt;
            let replace = match best {
                None => true,
                Some((bk, bafter)) => k < bk || (k == bk && after && !bafter),
            };
            if replace {
                best = Some((k, after));
            }
        }
    }
    match best {
        None => 0.0,
        Some((k, after)) => {
            let magnitude = 1.0 / (k + 1) as f64;
            if after {
                magnitude
            } else {
                -magnitude
            }
        }
    }
}

fn token_list() -> impl Strategy<Value = Vec<String>> {
    (
        prop::collection::vec(0..ALPHABET.len(), 1..12),
        any::<prop::sample::Index>(),
    )
        .prop_map(|(indices, at)| {
            let mut tokens: Vec<String> =
                indices.iter().map(|&i| ALPHABET[i].to_string()).collect();
            let slot = at.index(tokens.len());
            tokens[slot] = TOI.to_string();
            tokens
        })
}

proptest! {
    #[test]
    fn value_law_and_absence_zero(tokens in token_list()) {
        let top = top_of(&["a", "b", "c"]);
        let doc = prepared("d", tokens.clone());
        let row: Vec<f64> = vectorize_doc(&doc, &top);
        for (word, &v) in top.words().iter().zip(&row) {
            prop_assert!((-1.0..=1.0).contains(&v));
            let present = tokens.iter().any(|t| t == word);
            if present {
                let k = (1.0 / v.abs()).round() as usize;
                prop_assert!(k >= 1);
                prop_assert_eq!(v.abs(), 1.0 / k as f64);
            } else {
                prop_assert_eq!(v, 0.0);
            }
        }
    }

    #[test]
    fn matches_pair_enumeration_oracle(tokens in token_list()) {
        let top = top_of(&["a", "b", "c"]);
        let doc = prepared("d", tokens.clone());
        let row: Vec<f64> = vectorize_doc(&doc, &top);
        for (word, &v) in top.words().iter().zip(&row) {
            let expected = oracle_value(&tokens, &doc.toi_positions, top.words(), word);
            prop_assert_eq!(v, expected, "word {} in {:?}", word, tokens);
        }
    }

    #[test]
    fn sign_follows_side_of_nearest_occurrence(tokens in token_list()) {
        let top = top_of(&["a", "b", "c"]);
        let doc = prepared("d", tokens.clone());
        let first_toi = doc.toi_positions[0];
        let last_toi = *doc.toi_positions.last().unwrap();
        let row: Vec<f64> = vectorize_doc(&doc, &top);
        for (word, &v) in top.words().iter().zip(&row) {
            let positions: Vec<usize> = tokens
                .iter()
                .enumerate()
                .filter(|(_, t)| t.as_str() == word)
                .map(|(i, _)| i)
                .collect();
            if positions.is_empty() {
                continue;
            }
            if positions.iter().all(|&p| p < first_toi) {
                prop_assert!(v < 0.0, "all-before word {} in {:?}", word, tokens);
            }
            if positions.iter().all(|&p| p > last_toi) {
                prop_assert!(v > 0.0, "all-after word {} in {:?}", word, tokens);
            }
        }
    }

    #[test]
    fn permuting_documents_permutes_rows(lists in prop::collection::vec(token_list(), 2..6)) {
        let docs: Vec<PreparedDoc> = lists
            .iter()
            .enumerate()
            .map(|(i, tokens)| prepared(&format!("d{i}"), tokens.clone()))
            .collect();
        let reversed: Vec<PreparedDoc> = docs.iter().rev().cloned().collect();
        let (top, matrix) = fit_transform::<f64>(&docs, 3).unwrap();
        let (top_rev, matrix_rev) = fit_transform::<f64>(&reversed, 3).unwrap();
        prop_assert_eq!(top.words(), top_rev.words());
        let m = matrix.n_rows();
        for r in 0..m {
            prop_assert_eq!(matrix.row(r), matrix_rev.row(m - 1 - r));
        }
    }
}

#[test]
fn inserting_a_top_word_between_strictly_shrinks_magnitude() {
    // tokens: w, pad^k, t -- every pad is a top word.
    for pads in 0..6usize {
        let mut with = vec!["w".to_string()];
        with.extend(std::iter::repeat("p".to_string()).take(pads));
        with.push(TOI.to_string());
        let doc = prepared("d", with);
        let top = top_of(&["w", "p"]);
        let row: Vec<f64> = vectorize_doc(&doc, &top);
        let col = top.words().iter().position(|w| w == "w").unwrap();
        assert_eq!(row[col], -1.0 / (pads + 1) as f64);
        if pads > 0 {
            let mut fewer = vec!["w".to_string()];
            fewer.extend(std::iter::repeat("p".to_string()).take(pads - 1));
            fewer.push(TOI.to_string());
            let fewer_doc = prepared("d", fewer);
            let fewer_row: Vec<f64> = vectorize_doc(&fewer_doc, &top);
            assert!(row[col].abs() < fewer_row[col].abs());
        }
    }
}

#[test]
fn exhaustive_short_lists_match_oracle() {
    // Every token list of length <= 5 over {t, a, b, c} with at least one t.
    let top = top_of(&["a", "b", "c"]);
    let mut checked = 0usize;
    for len in 1..=5usize {
        let mut indices = vec![0usize; len];
        loop {
            let tokens: Vec<String> = indices.iter().map(|&i| ALPHABET[i].to_string()).collect();
            if tokens.iter().any(|t| t == TOI) {
                let doc = prepared("d", tokens.clone());
                let row: Vec<f64> = vectorize_doc(&doc, &top);
                for (word, &v) in top.words().iter().zip(&row) {
                    let expected = oracle_value(&tokens, &doc.toi_positions, top.words(), word);
                    assert_eq!(v, expected, "word {word} in {tokens:?}");
                }
                checked += 1;
            }
            // odometer increment
            let mut pos = 0;
            loop {
                if pos == len {
                    break;
                }
                indices[pos] += 1;
                if indices[pos] < ALPHABET.len() {
                    break;
                }
                indices[pos] = 0;
                pos += 1;
            }
            if pos == len {
                break;
            }
        }
    }
    assert!(checked > 500);
}
