use captionprobe::textproc::{accuracy, tokenize, train_tagger, TaggedSentence};
use captionprobe::Upos;

const TRAIN: &str = include_str!("data/upos_train.tsv");
const HELDOUT: &str = include_str!("data/upos_heldout.tsv");

#[test]
fn heldout_accuracy_after_five_epochs() {
    let train = TaggedSentence::parse_corpus(TRAIN).unwrap();
    let heldout = TaggedSentence::parse_corpus(HELDOUT).unwrap();
    let model = train_tagger(&train, 5, 0).unwrap();
    let acc = accuracy(&model, &heldout).unwrap();
    assert!(acc >= 0.90, "held-out accuracy {acc}");
}

#[test]
fn training_is_deterministic() {
    let train = TaggedSentence::parse_corpus(TRAIN).unwrap();
    let a = train_tagger(&train, 5, 3).unwrap().to_json().unwrap();
    let b = train_tagger(&train, 5, 3).unwrap().to_json().unwrap();
    assert_eq!(a, b);
}

#[test]
fn ambiguous_words_follow_context() {
    let train = TaggedSentence::parse_corpus(TRAIN).unwrap();
    let model = train_tagger(&train, 5, 0).unwrap();
    let noun = model.tag(&tokenize("the dance is shown on a stage")).unwrap();
    assert_eq!(noun[1], Upos::Noun);
    let verb = model.tag(&tokenize("people dance together in the kitchen")).unwrap();
    assert_eq!(verb[1], Upos::Verb);
}
