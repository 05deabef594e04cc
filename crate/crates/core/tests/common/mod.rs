//! Shared fixtures and independent checkers for the integration suites.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use captionprobe::perturb::{
    action_negation, action_removal, action_replacement, object_attribute_removal, object_partial,
    object_replacement, object_shift, reverse, shuffle, syntax_removal, PartialMode,
    PerturbedCaption, Provenance,
};
use captionprobe::textproc::tokenize;
use captionprobe::{
    Category, GroundTruth, Lexicon, ReplacementVocab, SeededRng, SimilarityMatrix, TaggedCaption, Upos,
};

pub const GUY_CAPTION: &str = "a guy wearing a red shirt drives a car while talking";

pub fn guy_caption_tags() -> Vec<Upos> {
    use Upos::*;
    vec![Det, Noun, Verb, Det, Adj, Noun, Verb, Det, Noun, Sconj, Verb]
}

pub fn guy_caption() -> TaggedCaption {
    TaggedCaption::new("q", "video-q", &tokenize(GUY_CAPTION), &guy_caption_tags())
}

const POOLS: &[(Upos, &[&str])] = &[
    (Upos::Noun, &["dog", "cat", "man", "woman", "car", "guy", "shirt", "ball", "park", "kitchen"]),
    (Upos::Propn, &["John", "Mary"]),
    (Upos::Adj, &["red", "big", "small", "happy"]),
    (Upos::Adv, &["quickly", "slowly"]),
    (Upos::Verb, &["runs", "drives", "wearing", "talking", "jumps", "cooking"]),
    (Upos::Aux, &["is", "are"]),
    (Upos::Det, &["a", "the"]),
    (Upos::Adp, &["in", "on", "with"]),
    (Upos::Sconj, &["while", "because"]),
    (Upos::Pron, &["he", "she"]),
    (Upos::Punct, &[".", ","]),
    (Upos::Num, &["two"]),
    (Upos::Cconj, &["and"]),
];

/// Random caption of 0..=20 tokens drawn from small per-tag pools.
pub fn random_caption(rng: &mut SeededRng, id: &str) -> TaggedCaption {
    let len = rng.index(21);
    let mut surfaces = Vec::with_capacity(len);
    let mut tags = Vec::with_capacity(len);
    for _ in 0..len {
        let (tag, words) = POOLS[rng.index(POOLS.len())];
        surfaces.push(words[rng.index(words.len())].to_string());
        tags.push(tag);
    }
    TaggedCaption::new(id, format!("v-{id}"), &surfaces, &tags)
}

pub fn pool_vocab() -> ReplacementVocab {
    let mut v = ReplacementVocab::default();
    for (tag, words) in POOLS {
        for w in *words {
            match tag {
                Upos::Noun | Upos::Propn => {
                    v.nouns.insert(w.to_lowercase(), 1);
                }
                Upos::Verb => {
                    v.verbs.insert(w.to_lowercase(), 1);
                }
                _ => {}
            }
        }
    }
    v
}

pub fn pool_lexicon() -> Lexicon {
    Lexicon::parse("dog\tsyn:cat\tant:\nruns\tsyn:jumps\tant:talking\nman\tsyn:guy\tant:woman\n").unwrap()
}

fn sorted_surfaces<'a>(it: impl Iterator<Item = &'a str>) -> Vec<String> {
    let mut v: Vec<String> = it.map(String::from).collect();
    v.sort();
    v
}

/// Rebuilds a tagged caption from a perturbation output, carrying tags
/// through provenance (inserted tokens become PART).
pub fn rebuild(src: &TaggedCaption, out: &PerturbedCaption) -> TaggedCaption {
    let tags: Vec<Upos> = out
        .provenance
        .iter()
        .map(|p| match p {
            Provenance::Source(i) | Provenance::Replaced(i) => src.tokens[*i].pos,
            Provenance::Inserted => Upos::Part,
        })
        .collect();
    TaggedCaption::new(src.caption_id.clone(), src.video_id.clone(), &out.tokens, &tags)
}

fn check_subsequence(name: &str, cap: &TaggedCaption, out: &PerturbedCaption, v: &mut Vec<String>) {
    let mut last: Option<usize> = None;
    for (tok, p) in out.tokens.iter().zip(&out.provenance) {
        match p {
            Provenance::Source(i) => {
                if last.is_some_and(|l| *i <= l) {
                    v.push(format!("{name}: provenance not increasing on {}", cap.caption_id));
                }
                if cap.tokens[*i].surface != *tok {
                    v.push(format!("{name}: token differs from source on {}", cap.caption_id));
                }
                last = Some(*i);
            }
            _ => v.push(format!("{name}: non-source token on {}", cap.caption_id)),
        }
    }
}

/// Every per-caption invariant of the perturbation suite. Returns violations.
pub fn check_caption(cap: &TaggedCaption, vocab: &ReplacementVocab, lex: &Lexicon, seed: u64) -> Vec<String> {
    let mut v = Vec::new();
    let id = &cap.caption_id;
    let n = cap.tokens.len();
    let original = sorted_surfaces(cap.tokens.iter().map(|t| t.surface.as_str()));
    let rng = |task: &str| SeededRng::for_stream(seed, id, task);

    for (t, i) in cap.tokens.iter().zip(0..) {
        if t.index != i {
            v.push(format!("index gap on {id}"));
        }
    }
    let cats = [Category::ObjectAttribute, Category::Action, Category::Syntax];
    if cats.iter().map(|&c| cap.count(c)).sum::<usize>() != n {
        v.push(format!("categories do not partition {id}"));
    }

    // multiset preservation
    let sh = shuffle(cap, &mut rng("shuffle"));
    if sorted_surfaces(sh.tokens.iter().map(String::as_str)) != original {
        v.push(format!("shuffle multiset on {id}"));
    }
    let perm: BTreeSet<usize> = sh
        .provenance
        .iter()
        .filter_map(|p| match p {
            Provenance::Source(i) => Some(*i),
            _ => None,
        })
        .collect();
    if perm.len() != n {
        v.push(format!("shuffle is not a permutation on {id}"));
    }
    let rev = reverse(cap);
    if sorted_surfaces(rev.tokens.iter().map(String::as_str)) != original {
        v.push(format!("reverse multiset on {id}"));
    }
    let back = reverse(&rebuild(cap, &rev));
    if back.tokens != cap.surfaces() || rebuild(&rebuild(cap, &rev), &back) != *cap {
        v.push(format!("reverse is not an involution on {id}"));
    }
    let shift = object_shift(cap);
    if sorted_surfaces(shift.tokens.iter().map(String::as_str)) != original || shift.tokens.len() != n {
        v.push(format!("obj_shift multiset on {id}"));
    }
    for (i, t) in cap.tokens.iter().enumerate() {
        let moved_from = match shift.provenance[i] {
            Provenance::Source(s) => s,
            _ => usize::MAX,
        };
        if !t.is_noun() && (shift.tokens[i] != t.surface || moved_from != i) {
            v.push(format!("obj_shift moved a non-noun on {id}"));
        }
        if t.is_noun() && !cap.tokens.get(moved_from).is_some_and(|s| s.is_noun()) {
            v.push(format!("obj_shift placed a non-noun in a noun slot on {id}"));
        }
    }

    // removal ops are subsequences and idempotent
    type Removal = fn(&TaggedCaption) -> PerturbedCaption;
    let removals: [(&str, PerturbedCaption, Removal); 3] = [
        ("obj_attr_removal", object_attribute_removal(cap), object_attribute_removal),
        ("act_removal", action_removal(cap), action_removal),
        ("syn_removal", syntax_removal(cap), syntax_removal),
    ];
    for (name, out, op) in &removals {
        check_subsequence(name, cap, out, &mut v);
        let again = op(&rebuild(cap, out));
        if again.tokens != out.tokens {
            v.push(format!("{name} is not idempotent on {id}"));
        }
    }
    let partial = object_partial(cap, PartialMode::Random, &mut rng("obj_partial"));
    check_subsequence("obj_partial", cap, &partial, &mut v);
    let nouns = cap.tokens.iter().filter(|t| t.is_noun()).count();
    let kept = partial
        .provenance
        .iter()
        .filter(|p| matches!(p, Provenance::Source(i) if cap.tokens[*i].is_noun()))
        .count();
    if kept != nouns / 2 || partial.tokens.len() != n - (nouns - nouns / 2) {
        v.push(format!("obj_partial kept {kept} of {nouns} nouns on {id}"));
    }

    // syntax removal plus the syntax tokens is the original multiset
    let mut union: Vec<String> = removals[2].1.tokens.clone();
    union.extend(
        cap.tokens
            .iter()
            .filter(|t| t.category == Category::Syntax)
            .map(|t| t.surface.clone()),
    );
    union.sort();
    if union != original {
        v.push(format!("syn_removal union on {id}"));
    }

    // negation
    let neg = action_negation(cap);
    if neg.tokens.len() != n + cap.count(Category::Action) {
        v.push(format!("act_negation length on {id}"));
    }
    let restored: Vec<String> = neg
        .tokens
        .iter()
        .zip(&neg.provenance)
        .filter(|(_, p)| !matches!(p, Provenance::Inserted))
        .map(|(t, _)| t.clone())
        .collect();
    if restored != cap.surfaces() {
        v.push(format!("act_negation inversion on {id}"));
    }
    for (k, p) in neg.provenance.iter().enumerate() {
        if matches!(p, Provenance::Inserted) {
            let next_is_action = matches!(neg.provenance.get(k + 1), Some(Provenance::Source(i)) if cap.tokens[*i].category == Category::Action);
            if neg.tokens[k] != "not" || !next_is_action {
                v.push(format!("act_negation misplaced `not` on {id}"));
            }
        }
    }

    // replacements
    type Replace = fn(&TaggedCaption, &ReplacementVocab, &Lexicon, &mut SeededRng) -> captionprobe::Result<PerturbedCaption>;
    type Target = fn(&captionprobe::Token) -> bool;
    let replacers: [(&str, Replace, Target); 2] = [
        ("obj_replacement", object_replacement, |t| t.is_noun()),
        ("act_replacement", action_replacement, |t| t.category == Category::Action),
    ];
    for (name, op, target) in replacers {
        match op(cap, vocab, lex, &mut rng(name)) {
            Ok(out) => {
                if out.tokens.len() != n {
                    v.push(format!("{name} length on {id}"));
                }
                for (i, t) in cap.tokens.iter().enumerate() {
                    if target(t) {
                        if out.provenance[i] != Provenance::Replaced(i)
                            || out.tokens[i] == t.lower
                            || lex.excludes(&t.lower, &out.tokens[i])
                        {
                            v.push(format!("{name} bad replacement at {i} on {id}"));
                        }
                    } else if out.tokens[i] != t.surface || out.provenance[i] != Provenance::Source(i) {
                        v.push(format!("{name} touched a non-target at {i} on {id}"));
                    }
                }
            }
            Err(e) => v.push(format!("{name} failed on {id}: {e}")),
        }
    }
    v
}

/// Brute-force oracle rank: sort all candidates by descending score,
/// placing non-truth candidates first among equals, and return the 1-based
/// position of the first truth.
pub fn oracle_rank(row: &[f32], truth: &BTreeSet<usize>) -> usize {
    let mut order: Vec<usize> = (0..row.len()).collect();
    order.sort_by(|&a, &b| {
        row[b]
            .partial_cmp(&row[a])
            .unwrap()
            .then_with(|| truth.contains(&a).cmp(&truth.contains(&b)))
    });
    order.iter().position(|j| truth.contains(j)).unwrap() + 1
}

pub fn gt(truth: &BTreeMap<String, BTreeSet<String>>) -> GroundTruth {
    GroundTruth { truth: truth.clone() }
}

/// Random matrix with scores drawn from a small grid so that ties are common.
pub fn random_case(rng: &mut SeededRng) -> (SimilarityMatrix, BTreeMap<String, BTreeSet<String>>) {
    let q = 1 + rng.index(16);
    let c = 1 + rng.index(16);
    let levels = 1 + rng.index(6) as u64;
    let values: Vec<f32> = (0..q * c)
        .map(|_| rng.below(levels + 1) as f32 / levels as f32 * 2.0 - 1.0)
        .collect();
    let qids: Vec<String> = (0..q).map(|i| format!("q{i:02}")).collect();
    let cids: Vec<String> = (0..c).map(|j| format!("c{j:02}")).collect();
    let mut truth = BTreeMap::new();
    for id in &qids {
        let k = 1 + rng.index(c.min(3));
        let picks = rng.sample_indices(c, k);
        truth.insert(id.clone(), picks.iter().map(|&j| cids[j].clone()).collect());
    }
    (SimilarityMatrix::new(qids, cids, values).unwrap(), truth)
}

pub fn oracle_ranks(sim: &SimilarityMatrix, truth: &BTreeMap<String, BTreeSet<String>>) -> Vec<usize> {
    let cids = sim.candidate_ids();
    sim.query_ids()
        .iter()
        .enumerate()
        .map(|(i, q)| {
            let t: BTreeSet<usize> = cids
                .iter()
                .enumerate()
                .filter(|(_, c)| truth[q].contains(*c))
                .map(|(j, _)| j)
                .collect();
            oracle_rank(sim.row(i), &t)
        })
        .collect()
}

pub struct OracleMetrics {
    pub r1: f64,
    pub r5: f64,
    pub r10: f64,
    pub median: f64,
    pub mean: f64,
}

pub fn oracle_metrics(ranks: &[usize]) -> OracleMetrics {
    let n = ranks.len() as f64;
    let within = |k: usize| ranks.iter().filter(|&&r| r <= k).count() as f64 * 100.0 / n;
    let mut sorted = ranks.to_vec();
    sorted.sort();
    let median = if sorted.len() % 2 == 1 {
        sorted[sorted.len() / 2]
    } else {
        sorted[sorted.len() / 2 - 1]
    } as f64;
    OracleMetrics {
        r1: within(1),
        r5: within(5),
        r10: within(10),
        median,
        mean: ranks.iter().sum::<usize>() as f64 / n,
    }
}

/// A seeded templated corpus:
/// `<det> <adj> <noun> <verb> <prep> <det> <noun>`, with gold tags and no
/// two captions sharing the same bag of words. The word lists avoid
/// collisions in the mock encoder's 256 hash buckets.
pub fn templated_corpus(n: usize, seed: u64) -> Vec<TaggedCaption> {
    use Upos::*;
    const DETS: [&str; 2] = ["a", "the"];
    const ADJS: [&str; 3] = ["red", "young", "big"];
    const NOUNS: [&str; 6] = ["man", "woman", "dog", "car", "ball", "girl"];
    const VERBS: [&str; 10] = [
        "drives", "pushes", "kicks", "follows", "holds", "paints", "chases", "carries", "cleans", "throws",
    ];
    const PREPS: [&str; 2] = ["behind", "beside"];
    let mut rng = SeededRng::from_state(seed);
    let mut seen = BTreeSet::new();
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let words = [
            DETS[rng.index(2)],
            ADJS[rng.index(ADJS.len())],
            NOUNS[rng.index(NOUNS.len())],
            VERBS[rng.index(VERBS.len())],
            PREPS[rng.index(PREPS.len())],
            DETS[rng.index(2)],
            NOUNS[rng.index(NOUNS.len())],
        ];
        let mut bag: Vec<&str> = words.to_vec();
        bag.sort();
        if !seen.insert(bag) {
            continue;
        }
        let id = format!("cap{:04}", out.len());
        let surfaces: Vec<String> = words.iter().map(|w| w.to_string()).collect();
        out.push(TaggedCaption::new(
            id.clone(),
            format!("vid{:04}", out.len()),
            &surfaces,
            &[Det, Adj, Noun, Verb, Adp, Det, Noun],
        ));
    }
    out
}
