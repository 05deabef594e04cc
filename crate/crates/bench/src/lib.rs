//! Synthetic inputs for the benchmarks in `benches/`.

use captionprobe::{SeededRng, TaggedCaption, Upos};

const SLOTS: &[(Upos, &[&str])] = &[
    (Upos::Det, &["a", "the"]),
    (Upos::Adj, &["red", "young", "big", "old", "tall"]),
    (Upos::Noun, &["man", "woman", "dog", "car", "ball", "girl", "chef", "horse"]),
    (Upos::Aux, &["is"]),
    (Upos::Verb, &["driving", "pushing", "kicking", "holding", "painting", "chasing"]),
    (Upos::Det, &["a", "the"]),
    (Upos::Noun, &["road", "kitchen", "street", "park", "stage", "beach"]),
    (Upos::Sconj, &["while"]),
    (Upos::Verb, &["talking", "singing", "laughing", "smiling"]),
];

/// `n` tagged captions of nine tokens, two per video.
pub fn synthetic_corpus(n: usize, seed: u64) -> Vec<TaggedCaption> {
    let mut rng = SeededRng::from_state(seed);
    (0..n)
        .map(|i| {
            let words: Vec<String> = SLOTS
                .iter()
                .map(|(_, pool)| pool[rng.index(pool.len())].to_string())
                .collect();
            let tags: Vec<Upos> = SLOTS.iter().map(|(t, _)| *t).collect();
            TaggedCaption::new(format!("c{i:06}"), format!("v{:06}", i / 2), &words, &tags)
        })
        .collect()
}
