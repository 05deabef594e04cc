//! Greedy averaged-perceptron tagger over the universal tag set.

use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::upos::Upos;
use crate::error::{Error, Result};
use crate::rng::SeededRng;

const START: [&str; 2] = ["-START-", "-START2-"];
const END: &str = "-END-";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TaggedSentence {
    pub words: Vec<String>,
    pub tags: Vec<Upos>,
}

impl TaggedSentence {
    /// Reads a training corpus in either the two-column tag sidecar layout
    /// (`surface<TAB>UPOS`) or CoNLL-U (FORM in column 2, UPOS in column 4).
    /// Comment lines start with `#`; sentences are separated by blank lines.
    pub fn parse_corpus(text: &str) -> Result<Vec<TaggedSentence>> {
        let mut out = Vec::new();
        let mut current = TaggedSentence {
            words: Vec::new(),
            tags: Vec::new(),
        };
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim_end_matches('\r');
            if line.trim().is_empty() {
                if !current.words.is_empty() {
                    out.push(std::mem::replace(
                        &mut current,
                        TaggedSentence {
                            words: Vec::new(),
                            tags: Vec::new(),
                        },
                    ));
                }
                continue;
            }
            if line.starts_with('#') {
                continue;
            }
            let cols: Vec<&str> = line.split('\t').collect();
            let (word, tag) = match cols.len() {
                2 => (cols[0], cols[1]),
                n if n >= 10 => {
                    // multiword ranges and empty nodes carry no tag of their own
                    if cols[0].contains('-') || cols[0].contains('.') {
                        continue;
                    }
                    (cols[1], cols[3])
                }
                _ => {
                    return Err(Error::Malformed {
                        line: lineno + 1,
                        message: format!("expected 2 or 10 tab-separated columns, got {}", cols.len()),
                    })
                }
            };
            let tag = tag.parse::<Upos>().map_err(|_| Error::Malformed {
                line: lineno + 1,
                message: format!("unknown UPOS tag {tag:?}"),
            })?;
            current.words.push(word.to_string());
            current.tags.push(tag);
        }
        if !current.words.is_empty() {
            out.push(current);
        }
        Ok(out)
    }
}

fn corpus_digest(corpus: &[TaggedSentence]) -> String {
    let mut hasher = Sha256::new();
    for s in corpus {
        for (w, t) in s.words.iter().zip(&s.tags) {
            hasher.update(w.as_bytes());
            hasher.update(b"\t");
            hasher.update(t.as_str().as_bytes());
            hasher.update(b"\n");
        }
        hasher.update(b"\n");
    }
    hex::encode(hasher.finalize())
}

fn affix(word: &str, n: usize, suffix: bool) -> String {
    let chars: Vec<char> = word.chars().collect();
    let take = n.min(chars.len());
    if suffix {
        chars[chars.len() - take..].iter().collect()
    } else {
        chars[..take].iter().collect()
    }
}

fn features(words: &[String], lowered: &[String], i: usize, prev: &str, prev2: &str) -> Vec<String> {
    let word = &words[i];
    let lower = &lowered[i];
    let prev_word = if i == 0 { START[0] } else { lowered[i - 1].as_str() };
    let next_word = lowered.get(i + 1).map(String::as_str).unwrap_or(END);
    let mut feats = Vec::with_capacity(14);
    feats.push("bias".to_string());
    feats.push(format!("w={word}"));
    feats.push(format!("lw={lower}"));
    for n in 1..=3 {
        feats.push(format!("s{n}={}", affix(lower, n, true)));
        feats.push(format!("p{n}={}", affix(lower, n, false)));
    }
    feats.push(format!("t-1={prev}"));
    feats.push(format!("t-2t-1={prev2}|{prev}"));
    feats.push(format!("w-1={prev_word}"));
    feats.push(format!("w+1={next_word}"));
    feats
}

fn argmax(scores: &[f64]) -> usize {
    let mut best = 0;
    for (i, &s) in scores.iter().enumerate().skip(1) {
        if s > scores[best] {
            best = i;
        }
    }
    best
}

/// Trained tagger. Immutable after training.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TaggerModel {
    tags: Vec<Upos>,
    weights: BTreeMap<String, Vec<f64>>,
    iterations: usize,
    seed: u64,
    corpus_digest: String,
}

#[derive(Default)]
struct FeatureState {
    weights: Vec<f64>,
    totals: Vec<f64>,
    stamps: Vec<u64>,
}

struct Trainer {
    n_tags: usize,
    features: HashMap<String, FeatureState>,
    instances: u64,
}

impl Trainer {
    fn scores(&self, feats: &[String]) -> Vec<f64> {
        let mut scores = vec![0.0; self.n_tags];
        for f in feats {
            if let Some(state) = self.features.get(f) {
                for (s, w) in scores.iter_mut().zip(&state.weights) {
                    *s += w;
                }
            }
        }
        scores
    }

    fn bump(&mut self, feat: &str, tag: usize, delta: f64) {
        let n = self.n_tags;
        let now = self.instances;
        let state = self
            .features
            .entry(feat.to_string())
            .or_insert_with(|| FeatureState {
                weights: vec![0.0; n],
                totals: vec![0.0; n],
                stamps: vec![0; n],
            });
        state.totals[tag] += (now - state.stamps[tag]) as f64 * state.weights[tag];
        state.stamps[tag] = now;
        state.weights[tag] += delta;
    }

    fn update(&mut self, truth: usize, guess: usize, feats: &[String]) {
        self.instances += 1;
        if truth == guess {
            return;
        }
        for f in feats {
            self.bump(f, truth, 1.0);
            self.bump(f, guess, -1.0);
        }
    }

    fn averaged(self) -> BTreeMap<String, Vec<f64>> {
        let instances = self.instances.max(1);
        let mut out = BTreeMap::new();
        for (feat, state) in self.features {
            let avg: Vec<f64> = (0..self.n_tags)
                .map(|t| {
                    let total = state.totals[t]
                        + (instances - state.stamps[t]) as f64 * state.weights[t];
                    total / instances as f64
                })
                .collect();
            if avg.iter().any(|&w| w != 0.0) {
                out.insert(feat, avg);
            }
        }
        out
    }
}

/// Trains an averaged perceptron for `iterations` epochs. Sentence order is
/// reshuffled each epoch from `seed`.
pub fn train_tagger(corpus: &[TaggedSentence], iterations: usize, seed: u64) -> Result<TaggerModel> {
    if corpus.iter().all(|s| s.words.is_empty()) {
        return Err(Error::EmptyTrainingCorpus);
    }
    for (i, s) in corpus.iter().enumerate() {
        if s.words.len() != s.tags.len() {
            return Err(Error::Malformed {
                line: i + 1,
                message: "sentence has a different number of words and tags".into(),
            });
        }
    }
    let mut tags: Vec<Upos> = corpus.iter().flat_map(|s| s.tags.iter().copied()).collect();
    tags.sort_unstable();
    tags.dedup();
    let tag_index: HashMap<Upos, usize> = tags.iter().enumerate().map(|(i, &t)| (t, i)).collect();

    let lowered: Vec<Vec<String>> = corpus
        .iter()
        .map(|s| s.words.iter().map(|w| w.to_lowercase()).collect())
        .collect();
    let mut trainer = Trainer {
        n_tags: tags.len(),
        features: HashMap::new(),
        instances: 0,
    };
    let mut order: Vec<usize> = (0..corpus.len()).collect();
    for epoch in 0..iterations {
        let mut rng = SeededRng::for_stream(seed, "tagger", &format!("epoch-{epoch}"));
        rng.shuffle(&mut order);
        for &si in &order {
            let sentence = &corpus[si];
            let mut prev = START[0].to_string();
            let mut prev2 = START[1].to_string();
            for i in 0..sentence.words.len() {
                let feats = features(&sentence.words, &lowered[si], i, &prev, &prev2);
                let guess = argmax(&trainer.scores(&feats));
                trainer.update(tag_index[&sentence.tags[i]], guess, &feats);
                prev2 = std::mem::replace(&mut prev, tags[guess].as_str().to_string());
            }
        }
    }
    Ok(TaggerModel {
        weights: trainer.averaged(),
        tags,
        iterations,
        seed,
        corpus_digest: corpus_digest(corpus),
    })
}

impl TaggerModel {
    pub fn tags(&self) -> &[Upos] {
        &self.tags
    }

    pub fn iterations(&self) -> usize {
        self.iterations
    }

    pub fn corpus_digest(&self) -> &str {
        &self.corpus_digest
    }

    fn scores(&self, feats: &[String]) -> Vec<f64> {
        let mut scores = vec![0.0; self.tags.len()];
        for f in feats {
            if let Some(ws) = self.weights.get(f) {
                for (s, w) in scores.iter_mut().zip(ws) {
                    *s += w;
                }
            }
        }
        scores
    }

    /// Greedy left-to-right decoding, one tag per token.
    pub fn tag(&self, words: &[String]) -> Result<Vec<Upos>> {
        if self.tags.is_empty() {
            return Err(Error::UntrainedModel);
        }
        let lowered: Vec<String> = words.iter().map(|w| w.to_lowercase()).collect();
        let mut out = Vec::with_capacity(words.len());
        let mut prev = START[0];
        let mut prev2 = START[1];
        for i in 0..words.len() {
            let feats = features(words, &lowered, i, prev, prev2);
            let tag = self.tags[argmax(&self.scores(&feats))];
            out.push(tag);
            prev2 = prev;
            prev = tag.as_str();
        }
        Ok(out)
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string(self).map_err(|e| Error::json("serialize tagger", e))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let model: TaggerModel =
            serde_json::from_str(text).map_err(|e| Error::json("parse tagger model", e))?;
        if model.weights.values().any(|w| w.len() != model.tags.len()) {
            return Err(Error::UntrainedModel);
        }
        Ok(model)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_json()?)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&fs::read_to_string(path)?)
    }
}

/// Token-level accuracy of `model` on gold-tagged sentences.
pub fn accuracy(model: &TaggerModel, gold: &[TaggedSentence]) -> Result<f64> {
    let mut total = 0usize;
    let mut correct = 0usize;
    for s in gold {
        let predicted = model.tag(&s.words)?;
        total += s.tags.len();
        correct += predicted.iter().zip(&s.tags).filter(|(p, g)| p == g).count();
    }
    Ok(if total == 0 { 0.0 } else { correct as f64 / total as f64 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use Upos::*;

    fn sent(words: &str, tags: &[Upos]) -> TaggedSentence {
        TaggedSentence {
            words: words.split(' ').map(String::from).collect(),
            tags: tags.to_vec(),
        }
    }

    fn toy_corpus() -> Vec<TaggedSentence> {
        let dets = ["the", "a"];
        let nouns = ["dog", "cat", "man", "woman", "car"];
        let verbs = ["barks", "runs", "sleeps", "drives", "jumps"];
        let mut out = Vec::new();
        for (i, n) in nouns.iter().enumerate() {
            for (j, v) in verbs.iter().enumerate() {
                let d = dets[(i + j) % 2];
                out.push(sent(&format!("{d} {n} {v}"), &[Det, Noun, Verb]));
                if j < 4 {
                    out.push(sent(&format!("{d} {n} {v} quickly"), &[Det, Noun, Verb, Adv]));
                }
            }
            out.push(sent(n, &[Noun]));
        }
        out
    }

    #[test]
    fn empty_corpus_is_rejected() {
        let err = train_tagger(&[], 5, 0).unwrap_err();
        assert_eq!(err.to_string(), "empty training corpus");
    }

    #[test]
    fn toy_treebank_fits() {
        let corpus = toy_corpus();
        assert_eq!(corpus.len(), 50);
        let model = train_tagger(&corpus, 5, 7).unwrap();
        assert!(accuracy(&model, &corpus).unwrap() >= 0.95);
        let words: Vec<String> = ["the", "dog", "barks"].iter().map(|s| s.to_string()).collect();
        assert_eq!(model.tag(&words).unwrap(), vec![Det, Noun, Verb]);
        assert_eq!(model.tag(&["dog".to_string()]).unwrap(), vec![Noun]);
    }

    #[test]
    fn repeated_sentence_is_memorized() {
        let s = sent("a guy wearing a red shirt", &[Det, Noun, Verb, Det, Adj, Noun]);
        let corpus = vec![s.clone(); 20];
        let model = train_tagger(&corpus, 1, 0).unwrap();
        assert_eq!(model.tag(&s.words).unwrap(), s.tags);
    }

    #[test]
    fn single_tag_inventory() {
        let corpus = vec![sent("x y z", &[X, X, X])];
        let model = train_tagger(&corpus, 2, 0).unwrap();
        let words: Vec<String> = ["anything", "at", "all"].iter().map(|s| s.to_string()).collect();
        assert_eq!(model.tag(&words).unwrap(), vec![X, X, X]);
    }

    #[test]
    fn empty_model_errors() {
        let model = TaggerModel {
            tags: vec![],
            weights: BTreeMap::new(),
            iterations: 0,
            seed: 0,
            corpus_digest: String::new(),
        };
        assert!(matches!(model.tag(&["a".into()]), Err(Error::UntrainedModel)));
    }

    #[test]
    fn training_is_seed_deterministic() {
        let corpus = toy_corpus();
        let a = train_tagger(&corpus, 3, 11).unwrap();
        let b = train_tagger(&corpus, 3, 11).unwrap();
        assert_eq!(a.to_json().unwrap(), b.to_json().unwrap());
    }

    #[test]
    fn serialized_model_tags_identically() {
        let model = train_tagger(&toy_corpus(), 3, 1).unwrap();
        let reloaded = TaggerModel::from_json(&model.to_json().unwrap()).unwrap();
        assert_eq!(model, reloaded);
        let words: Vec<String> = "a woman jumps the car quickly".split(' ').map(String::from).collect();
        assert_eq!(model.tag(&words).unwrap(), reloaded.tag(&words).unwrap());
    }

    #[test]
    fn parses_sidecar_and_conllu_layouts() {
        let two_col = "# id = 1\nthe\tDET\ndog\tNOUN\n\n# id = 2\nruns\tVERB\n";
        let parsed = TaggedSentence::parse_corpus(two_col).unwrap();
        assert_eq!(parsed.len(), 2);
        assert_eq!(parsed[0].tags, vec![Det, Noun]);

        let conllu = "# text = Dogs don't\n1\tDogs\tdog\tNOUN\tNNS\t_\t2\tnsubj\t_\t_\n\
                      2-3\tdon't\t_\t_\t_\t_\t_\t_\t_\t_\n\
                      2\tdo\tdo\tAUX\tVBP\t_\t0\troot\t_\t_\n\
                      3\tn't\tnot\tPART\tRB\t_\t2\tadvmod\t_\t_\n";
        let parsed = TaggedSentence::parse_corpus(conllu).unwrap();
        assert_eq!(parsed[0].words, vec!["Dogs", "do", "n't"]);
        assert_eq!(parsed[0].tags, vec![Noun, Aux, Part]);

        let bad = "the\tDT\n";
        assert!(matches!(
            TaggedSentence::parse_corpus(bad),
            Err(Error::Malformed { line: 1, .. })
        ));
    }
}
