use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::{Path, PathBuf};

use captionprobe::corpus::{manifest_path, read_corpus, write_corpus, AdapterConfig};
use captionprobe::mock::{mock_text_matrix, mock_video_matrix};
use captionprobe::perturb::{read_manifest, Granularity, PartialMode};
use captionprobe::report::{emit_deltas, task_order};
use captionprobe::retrieval::{cosine_similarity, evaluate_similarity, load_embeddings};
use captionprobe::textproc::{accuracy, load_external_tags, train_tagger, write_sidecar, TaggedSentence};
use captionprobe::{
    apply_suite, build_vocab, emit, CaptionRecord, Direction, EmbeddingMatrix, Lexicon, ManifestRecord,
    MetricsReport, PerturbContext, PerturbationKind, PerturbedCorpus, ReplacementVocab, ReportFormat,
    RunComparison, SimilarityMatrix, TaggedCaption, TaggerModel, ORIGINAL_TASK_ID,
};

use crate::args::{
    CorpusArgs, EvalArgs, IngestArgs, PerturbArgs, ReportArgs, TagArgs, TagTrainArgs, VocabArgs,
};
use crate::error::{CliError, CliResult, WithPath};
use crate::provenance::Run;

pub const CORPUS_FILE: &str = "corpus.jsonl";
pub const MANIFEST_DIR: &str = "manifests";
pub const REPORT_DIR: &str = "reports";

fn load_corpus(run: &mut Run, args: &CorpusArgs) -> CliResult<Vec<CaptionRecord>> {
    match (&args.dataset, &args.corpus) {
        (Some(cfg_path), None) => {
            run.note_input(cfg_path)?;
            let cfg = AdapterConfig::load(cfg_path).at(cfg_path)?;
            Ok(cfg.load_split(&args.split).at(cfg_path)?)
        }
        (None, Some(path)) => {
            run.note_input(path)?;
            run.note_input(&manifest_path(path))?;
            Ok(read_corpus(path).at(path)?)
        }
        _ => Err(CliError::usage("give exactly one of --dataset or --corpus")),
    }
}

fn tag_corpus(run: &mut Run, corpus: &[CaptionRecord], args: &TagArgs) -> CliResult<Vec<TaggedCaption>> {
    match (&args.tags, &args.tagger) {
        (Some(path), None) => {
            let text = run.read_string(path)?;
            Ok(load_external_tags(&text, corpus).at(path)?)
        }
        (None, Some(path)) => {
            let model = TaggerModel::from_json(&run.read_string(path)?).at(path)?;
            corpus
                .iter()
                .map(|r| TaggedCaption::from_model(&model, &r.caption_id, &r.video_id, &r.text).map_err(Into::into))
                .collect()
        }
        _ => Err(CliError::usage("give exactly one of --tags or --tagger")),
    }
}

pub fn ingest(args: &IngestArgs) -> CliResult<()> {
    let mut run = Run::new("ingest", args, None, &args.out)?;
    run.note_input(&args.dataset)?;
    let cfg = AdapterConfig::load(&args.dataset).at(&args.dataset)?;
    let records = cfg.load_split(&args.split).at(&args.dataset)?;
    let path = args.out.join(CORPUS_FILE);
    let manifest = write_corpus(&records, &path).at(&path)?;
    run.note_output(CORPUS_FILE)?;
    run.note_output(&manifest_path(Path::new(CORPUS_FILE)).display().to_string())?;
    run.result("records", manifest.record_count);
    run.result("videos", manifest.video_count);
    run.finish()
}

pub fn tag_train(args: &TagTrainArgs) -> CliResult<()> {
    let mut run = Run::new("tag-train", args, Some(args.seed), &args.out)?;
    if args.epochs == 0 {
        return Err(CliError::usage("--epochs must be at least 1"));
    }
    let train = TaggedSentence::parse_corpus(&run.read_string(&args.train)?).at(&args.train)?;
    let model = train_tagger(&train, args.epochs, args.seed).at(&args.train)?;
    run.write("tagger.json", model.to_json()?.as_bytes())?;
    run.result("training_sentences", train.len());
    run.result("training_tokens", train.iter().map(|s| s.words.len()).sum::<usize>());
    if let Some(path) = &args.heldout {
        let gold = TaggedSentence::parse_corpus(&run.read_string(path)?).at(path)?;
        run.result("heldout_accuracy", accuracy(&model, &gold)?);
    }
    run.finish()
}

pub fn vocab(args: &VocabArgs) -> CliResult<()> {
    let mut run = Run::new("vocab", args, None, &args.out)?;
    let corpus = load_corpus(&mut run, &args.corpus)?;
    let tagged = tag_corpus(&mut run, &corpus, &args.tags)?;
    let vocab = build_vocab(&tagged);
    run.write("vocab.json", vocab.to_json()?.as_bytes())?;
    run.result("nouns", vocab.nouns.len());
    run.result("verbs", vocab.verbs.len());
    run.finish()
}

pub fn perturb(args: &PerturbArgs) -> CliResult<()> {
    let mut run = Run::new("perturb", args, Some(args.seed), &args.out)?;
    let tasks = PerturbationKind::parse_list(&args.tasks)?;
    let partial_mode: PartialMode = args.partial_mode.parse().map_err(|e: captionprobe::Error| CliError::usage(e.to_string()))?;
    let corpus = load_corpus(&mut run, &args.corpus)?;
    let tagged = tag_corpus(&mut run, &corpus, &args.tags)?;
    let replacing = tasks.iter().any(|k| k.needs_vocab());

    let vocab = match &args.vocab {
        Some(path) => {
            run.note_input(path)?;
            Some(ReplacementVocab::load(path).at(path)?)
        }
        None if replacing => {
            run.warn("no --vocab given; replacement pools built from the input corpus");
            Some(build_vocab(&tagged))
        }
        None => None,
    };
    let lexicon = match &args.lexicon {
        Some(path) => Lexicon::parse(&run.read_string(path)?).at(path)?,
        None => {
            if replacing {
                run.warn("no --lexicon given; replacements exclude only the original word");
            }
            Lexicon::default()
        }
    };
    let ctx = PerturbContext {
        vocab: vocab.as_ref(),
        lexicon: &lexicon,
        partial_mode,
        granularity: if args.per_sentence {
            Granularity::PerSentence
        } else {
            Granularity::Whole
        },
    };
    let result = apply_suite(&tagged, &tasks, args.seed, &ctx)?;
    for (task, n) in result.failures() {
        run.warn(format!("{task}: {n} caption(s) could not be perturbed; see their `error` fields"));
    }
    for (task, records) in &result.manifests {
        run.write(&format!("{MANIFEST_DIR}/{task}.jsonl"), PerturbedCorpus::encode(records)?.as_bytes())?;
    }
    run.write("tags.tsv", write_sidecar(&tagged).as_bytes())?;
    run.result("captions", tagged.len());
    run.finish()
}

/// Task ids selected for evaluation, in report column order.
fn select_tasks(dir: &Path, spec: &str) -> CliResult<Vec<String>> {
    let mut present = BTreeSet::new();
    for entry in fs::read_dir(dir).at(dir)? {
        let path = entry.at(dir)?.path();
        if path.extension().is_some_and(|e| e == "jsonl") {
            if let Some(stem) = path.file_stem().and_then(|s| s.to_str()) {
                present.insert(stem.to_string());
            }
        }
    }
    let mut wanted: Vec<String> = if spec.trim() == "all" {
        present.iter().cloned().collect()
    } else {
        let mut out = Vec::new();
        for part in spec.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            if part != ORIGINAL_TASK_ID {
                part.parse::<PerturbationKind>()?;
            }
            if !present.contains(part) {
                return Err(CliError::data(format!("no manifest for task `{part}` in {}", dir.display())));
            }
            out.push(part.to_string());
        }
        out
    };
    if wanted.is_empty() {
        return Err(CliError::data(format!("no manifests in {}", dir.display())));
    }
    wanted.sort_by_key(|t| task_order(t));
    wanted.dedup();
    Ok(wanted)
}

fn parse_directions(spec: &str) -> CliResult<Vec<Direction>> {
    if spec == "both" {
        return Ok(Direction::BOTH.to_vec());
    }
    Ok(vec![spec.parse()?])
}

/// Text rows must be exactly the manifest's evaluated captions.
fn check_text_ids(ids: &[String], records: &[ManifestRecord], what: &Path) -> CliResult<()> {
    let have: BTreeSet<&str> = ids.iter().map(String::as_str).collect();
    let want: BTreeSet<&str> = records.iter().map(|r| r.caption_id.as_str()).collect();
    let missing: Vec<&str> = want.difference(&have).copied().collect();
    let extra: Vec<&str> = have.difference(&want).copied().collect();
    let list = |v: &[&str]| {
        let shown: Vec<&str> = v.iter().take(10).copied().collect();
        let more = v.len().saturating_sub(shown.len());
        if more > 0 {
            format!("{} (+{more} more)", shown.join(", "))
        } else {
            shown.join(", ")
        }
    };
    if !missing.is_empty() {
        return Err(CliError::data(format!("{}: missing caption ids: {}", what.display(), list(&missing))));
    }
    if !extra.is_empty() {
        return Err(CliError::data(format!("{}: ids not in the manifest: {}", what.display(), list(&extra))));
    }
    Ok(())
}

pub fn eval(args: &EvalArgs) -> CliResult<()> {
    let mut run = Run::new("eval", args, None, &args.out)?;
    let tasks = select_tasks(&args.manifests, &args.tasks)?;
    let directions = parse_directions(&args.direction)?;
    let manifest_file = |task: &str| args.manifests.join(format!("{task}.jsonl"));

    let videos: Option<EmbeddingMatrix> = if args.mock {
        let path = manifest_file(ORIGINAL_TASK_ID);
        if !path.exists() {
            return Err(CliError::data(format!(
                "mock evaluation builds video vectors from {}, which is missing",
                path.display()
            )));
        }
        run.note_input(&path)?;
        let originals = read_manifest(&path).at(&path)?;
        Some(mock_video_matrix(originals.iter().map(|r| (r.video_id.as_str(), r.text.as_str())))?)
    } else if let Some(path) = &args.video_emb {
        run.note_input(path)?;
        Some(load_embeddings(path).at(path)?)
    } else {
        None
    };

    let mut summary = Vec::new();
    for task in &tasks {
        let path = manifest_file(task);
        run.note_input(&path)?;
        let all = read_manifest(&path).at(&path)?;
        let failed = all.iter().filter(|r| r.error.is_some()).count();
        if failed > 0 {
            run.warn(format!("{task}: skipping {failed} caption(s) that failed to perturb"));
        }
        let records: Vec<ManifestRecord> = all.into_iter().filter(|r| r.error.is_none()).collect();
        if records.is_empty() {
            return Err(CliError::data(format!("{}: no evaluable records", path.display())));
        }
        let pairs: Vec<(String, String)> = records
            .iter()
            .map(|r| (r.caption_id.clone(), r.video_id.clone()))
            .collect();

        let sim: SimilarityMatrix = if let Some(dir) = &args.sim_csv {
            let csv_path = dir.join(format!("{task}.csv"));
            let bytes = run.read(&csv_path)?;
            let sim = SimilarityMatrix::read_csv(bytes.as_slice()).at(&csv_path)?;
            check_text_ids(sim.query_ids(), &records, &csv_path)?;
            sim
        } else {
            let videos = videos.as_ref().expect("video matrix loaded for embedding and mock runs");
            let texts = match &args.text_emb {
                Some(dir) => {
                    let emb_path: PathBuf = dir.join(format!("{task}.cevb"));
                    run.note_input(&emb_path)?;
                    let texts = load_embeddings(&emb_path).at(&emb_path)?;
                    check_text_ids(texts.ids(), &records, &emb_path)?;
                    texts
                }
                None => mock_text_matrix(records.iter().map(|r| (r.caption_id.as_str(), r.text.as_str())))?,
            };
            cosine_similarity(&texts, videos)?
        };

        for &direction in &directions {
            let report = evaluate_similarity(&sim, &pairs, direction, task).at(&path)?;
            let mut body = serde_json::to_string_pretty(&report).expect("report serializes");
            body.push('\n');
            run.write(&format!("{REPORT_DIR}/{task}.{direction}.json"), body.as_bytes())?;
            summary.push(report);
        }
    }
    let table = emit(&[RunComparison::new("run", summary)], ReportFormat::Markdown)?;
    print!("{table}");
    run.finish()
}

fn load_reports(run: &mut Run, dir: &Path) -> CliResult<Vec<MetricsReport>> {
    let reports_dir = dir.join(REPORT_DIR);
    let mut paths: Vec<PathBuf> = fs::read_dir(&reports_dir)
        .at(&reports_dir)?
        .map(|e| e.map(|e| e.path()))
        .collect::<Result<_, _>>()
        .at(&reports_dir)?;
    paths.retain(|p| p.extension().is_some_and(|e| e == "json"));
    paths.sort();
    if paths.is_empty() {
        return Err(CliError::data(format!("no reports in {}", reports_dir.display())));
    }
    paths
        .iter()
        .map(|p| {
            let bytes = run.read(p)?;
            serde_json::from_slice(&bytes).map_err(|e| CliError::data(format!("{}: {e}", p.display())))
        })
        .collect()
}

pub fn report(args: &ReportArgs) -> CliResult<()> {
    let mut run = Run::new("report", args, None, &args.out)?;
    let format: ReportFormat = args.format.parse()?;
    let mut comparisons = Vec::new();
    let mut labels = BTreeMap::new();
    for spec in &args.runs {
        let (label, dir) = spec
            .split_once('=')
            .filter(|(l, d)| !l.is_empty() && !d.is_empty())
            .ok_or_else(|| CliError::usage(format!("--run expects LABEL=DIR, got `{spec}`")))?;
        if labels.insert(label.to_string(), ()).is_some() {
            return Err(CliError::usage(format!("duplicate run label `{label}`")));
        }
        let dir = Path::new(dir);
        comparisons.push(RunComparison::new(label, load_reports(&mut run, dir)?));
    }
    let ext = match format {
        ReportFormat::Markdown => "md",
        ReportFormat::Csv => "csv",
        ReportFormat::Json => "json",
    };
    let table = emit(&comparisons, format)?;
    run.write(&format!("report.{ext}"), table.as_bytes())?;
    run.write(&format!("deltas.{ext}"), emit_deltas(&comparisons, format)?.as_bytes())?;
    print!("{table}");
    run.finish()
}
