use std::fs::File;
use std::io::{BufReader, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use dqi_core::analysis::{bin_samples, compare_splits, Decision};
use dqi_core::config::BIN_KEYS;
use dqi_core::corpus::{infer_labels, read_records, Partition, Side};
use dqi_core::linguistic::TagLexicon;
use dqi_core::metrics::{aggregate, reports_to_csv};
use dqi_core::similarity::{EmbeddingTable, SentenceSimilarity, WordSimilarity};
use dqi_core::{compute_all, CorpusIndex, DqiConfig, Granularity, Providers, Sample, Tagger};
use dqi_service::{AppState, Snapshot};
use log::info;

use crate::args::{Command, Common, SimArgs};
use crate::error::CliError;
use crate::manifest::{FileDigest, OutputDir, ProviderSelection, RunManifest};

pub fn dispatch(command: Command) -> Result<(), CliError> {
    match command {
        Command::Compute {
            input,
            common,
            sim,
            out,
        } => compute(&input, &common, &sim, &out),
        Command::Compare {
            input,
            input_good,
            input_bad,
            common,
            out,
        } => match (input, input_good, input_bad) {
            (Some(input), None, None) => compare_partitioned(&input, &common, &out),
            (None, Some(good), Some(bad)) => compare_files(&good, &bad, &common, &out),
            _ => Err(CliError::validation(
                "compare needs --input, or both --input-good and --input-bad",
            )),
        },
        Command::Bin {
            input,
            common,
            sim,
            out,
        } => bin(&input, &common, &sim, &out),
        Command::Serve {
            input,
            common,
            bind,
            journal,
            refit_interval,
        } => serve(&input, &common, &bind, journal, refit_interval),
        Command::ExportSim {
            input,
            common,
            sim,
            out,
        } => export_sim(&input, &common, &sim, &out),
    }
}

fn open(path: &Path, what: &str) -> Result<BufReader<File>, CliError> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| CliError::validation(format!("cannot open {what} {}: {e}", path.display())))
}

/// Everything derived from the shared flags.
struct Setup {
    cfg: DqiConfig,
    tagger: Tagger,
    word: WordSimilarity,
    /// Config, lexicon and embeddings files, for the manifest.
    inputs: Vec<PathBuf>,
    config_path: Option<PathBuf>,
}

impl Setup {
    fn new(common: &Common) -> Result<Self, CliError> {
        let mut inputs = Vec::new();
        let mut cfg = match &common.config {
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| {
                    CliError::validation(format!("cannot open config {}: {e}", path.display()))
                })?;
                inputs.push(path.clone());
                DqiConfig::from_toml_str(&text)
                    .map_err(|e| CliError::validation(format!("{}: {e}", path.display())))?
            }
            None => DqiConfig::default(),
        };
        if let Some(names) = &common.granularities {
            cfg.corpus.granularities = names
                .iter()
                .map(|n| parse_granularity(n))
                .collect::<Result<_, _>>()?;
            cfg.validate()?;
        }
        let tagger = if common.pretagged {
            Tagger::PreTagged
        } else if let Some(path) = &common.tag_lexicon {
            inputs.push(path.clone());
            Tagger::Lexicon(TagLexicon::from_reader(open(path, "tag lexicon")?)?)
        } else {
            Tagger::default()
        };
        let word = match &common.embeddings {
            Some(path) => {
                inputs.push(path.clone());
                WordSimilarity::Embedding(EmbeddingTable::load(open(path, "embeddings")?)?)
            }
            None => WordSimilarity::ExactMatch,
        };
        Ok(Setup {
            cfg,
            tagger,
            word,
            inputs,
            config_path: common.config.clone(),
        })
    }

    fn labels(&self, samples: &[Sample]) -> Vec<String> {
        self.cfg
            .corpus
            .labels
            .clone()
            .unwrap_or_else(|| infer_labels(samples))
    }

    fn tagger_name(&self) -> &'static str {
        match self.tagger {
            Tagger::PreTagged => "pretagged",
            Tagger::Lexicon(ref lex) if lex.is_empty() => "untagged",
            Tagger::Lexicon(_) => "lexicon",
        }
    }

    fn manifest(
        &self,
        command: &str,
        corpora: &[&Path],
        sentence: &str,
    ) -> Result<RunManifest, CliError> {
        let inputs = corpora
            .iter()
            .copied()
            .chain(self.inputs.iter().map(PathBuf::as_path))
            .map(FileDigest::of_file)
            .collect::<Result<_, _>>()?;
        Ok(RunManifest {
            tool: env!("CARGO_PKG_NAME").into(),
            version: env!("CARGO_PKG_VERSION").into(),
            command: command.into(),
            inputs,
            config_path: self.config_path.as_ref().map(|p| p.display().to_string()),
            providers: ProviderSelection {
                sentence: sentence.into(),
                word: self.word.method().into(),
                tagger: self.tagger_name().into(),
            },
            out_dir: String::new(),
            timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
            config: self.cfg.clone(),
            artifacts: Vec::new(),
        })
    }
}

fn parse_granularity(name: &str) -> Result<Granularity, CliError> {
    let name = name.trim();
    Granularity::ALL
        .into_iter()
        .find(|g| g.name() == name)
        .ok_or_else(|| {
            let known: Vec<&str> = Granularity::ALL.iter().map(|g| g.name()).collect();
            CliError::validation(format!(
                "unknown granularity `{name}`; expected one of {}",
                known.join(", ")
            ))
        })
}

fn load_samples(path: &Path) -> Result<Vec<Sample>, CliError> {
    let samples = read_records(open(path, "input")?).map_err(|e| match e {
        dqi_core::Error::Io(e) => CliError::runtime(format!("{}: {e}", path.display())),
        e => CliError::validation(format!("{}: {e}", path.display())),
    })?;
    if samples.is_empty() {
        return Err(CliError::validation(format!(
            "{}: input contains no records",
            path.display()
        )));
    }
    Ok(samples)
}

fn build_index(
    path: &Path,
    samples: Vec<Sample>,
    labels: &[String],
    tagger: &Tagger,
) -> Result<CorpusIndex, CliError> {
    CorpusIndex::from_samples(samples, labels, tagger)
        .map_err(|e| CliError::validation(format!("{}: {e}", path.display())))
}

fn load_index(path: &Path, setup: &Setup) -> Result<CorpusIndex, CliError> {
    let samples = load_samples(path)?;
    let labels = setup.labels(&samples);
    let index = build_index(path, samples, &labels, &setup.tagger)?;
    info!(
        "{}: {} samples, {} sentences",
        path.display(),
        index.size(),
        index.sentence_count()
    );
    Ok(index)
}

fn providers(
    index: &CorpusIndex,
    setup: &Setup,
    sim: &SimArgs,
) -> Result<(Providers, Option<PathBuf>), CliError> {
    let sentence = match &sim.sim_matrix {
        Some(path) => SentenceSimilarity::matrix(open(path, "similarity matrix")?, index)
            .map_err(|e| CliError::validation(format!("{}: {e}", path.display())))?,
        None => SentenceSimilarity::tfidf(index),
    };
    Ok((
        Providers {
            sentence,
            word: setup.word.clone(),
        },
        sim.sim_matrix.clone(),
    ))
}

fn with_matrix(
    mut manifest: RunManifest,
    matrix: Option<PathBuf>,
) -> Result<RunManifest, CliError> {
    if let Some(path) = matrix {
        manifest.inputs.push(FileDigest::of_file(&path)?);
    }
    Ok(manifest)
}

fn compute(input: &Path, common: &Common, sim: &SimArgs, out: &Path) -> Result<(), CliError> {
    let setup = Setup::new(common)?;
    let index = load_index(input, &setup)?;
    let (providers, matrix) = providers(&index, &setup, sim)?;
    let reports = compute_all(&index, &setup.cfg, &providers)?;
    let agg = aggregate(&reports, &setup.cfg)?;

    let manifest = with_matrix(
        setup.manifest("compute", &[input], providers.sentence.method())?,
        matrix,
    )?;
    let mut dir = OutputDir::create(out)?;
    for r in &reports {
        dir.write_json(&format!("{}.json", r.component.id()), "report", r)?;
    }
    dir.write("components.csv", reports_to_csv(&reports).as_bytes())?;
    dir.write_json("aggregate.json", "aggregate", &agg)?;
    dir.finish(manifest)?;
    println!(
        "DQI = {} ({} reports written to {})",
        agg.value,
        reports.len(),
        out.display()
    );
    Ok(())
}

fn write_comparison(
    setup: &Setup,
    corpora: &[&Path],
    good: &CorpusIndex,
    bad: &CorpusIndex,
    out: &Path,
) -> Result<(), CliError> {
    let gp = Providers {
        sentence: SentenceSimilarity::tfidf(good),
        word: setup.word.clone(),
    };
    let bp = Providers {
        sentence: SentenceSimilarity::tfidf(bad),
        word: setup.word.clone(),
    };
    let cmp = compare_splits(good, &gp, bad, &bp, &setup.cfg)?;
    let manifest = setup.manifest("compare", corpora, gp.sentence.method())?;
    let mut dir = OutputDir::create(out)?;
    dir.write("comparison.csv", cmp.to_csv().as_bytes())?;
    dir.write_json("comparison.json", "comparison", &cmp)?;
    dir.finish(manifest)?;
    for f in &cmp.flags {
        info!("{f}");
    }
    println!(
        "{} rows compared, written to {}",
        cmp.rows.len(),
        out.display()
    );
    Ok(())
}

/// Both sides share one label set so that per-label terms line up.
fn compare_files(good: &Path, bad: &Path, common: &Common, out: &Path) -> Result<(), CliError> {
    let setup = Setup::new(common)?;
    let gs = load_samples(good)?;
    let bs = load_samples(bad)?;
    let labels = setup.cfg.corpus.labels.clone().unwrap_or_else(|| {
        let all: Vec<Sample> = gs.iter().chain(&bs).cloned().collect();
        infer_labels(&all)
    });
    let gi = build_index(good, gs, &labels, &setup.tagger)?;
    let bi = build_index(bad, bs, &labels, &setup.tagger)?;
    write_comparison(&setup, &[good, bad], &gi, &bi, out)
}

fn compare_partitioned(input: &Path, common: &Common, out: &Path) -> Result<(), CliError> {
    let setup = Setup::new(common)?;
    let samples = load_samples(input)?;
    let labels = setup.labels(&samples);
    let (good, rest): (Vec<Sample>, Vec<Sample>) = samples
        .into_iter()
        .partition(|s| s.partition == Partition::Good);
    let bad: Vec<Sample> = rest
        .into_iter()
        .filter(|s| s.partition == Partition::Bad)
        .collect();
    if good.is_empty() || bad.is_empty() {
        return Err(CliError::validation(format!(
            "{}: --input needs records tagged with both partition \"good\" and \"bad\" ({} good, {} bad)",
            input.display(),
            good.len(),
            bad.len()
        )));
    }
    let gi = build_index(input, good, &labels, &setup.tagger)?;
    let bi = build_index(input, bad, &labels, &setup.tagger)?;
    write_comparison(&setup, &[input], &gi, &bi, out)
}

fn bin(input: &Path, common: &Common, sim: &SimArgs, out: &Path) -> Result<(), CliError> {
    let setup = Setup::new(common)?;
    let index = load_index(input, &setup)?;
    let (providers, matrix) = providers(&index, &setup, sim)?;
    let report = bin_samples(&index, &setup.cfg, &providers);

    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["id", "decision", "failed"];
    header.extend_from_slice(BIN_KEYS);
    w.write_record(&header).map_err(CliError::runtime)?;
    for v in &report.verdicts {
        let mut row = vec![
            v.id.clone(),
            match v.decision {
                Decision::Retain => "retain".into(),
                Decision::Remove => "remove".into(),
            },
            v.failed.join(";"),
        ];
        row.extend(BIN_KEYS.iter().map(|k| {
            v.scores
                .get(*k)
                .copied()
                .flatten()
                .map(|x| x.to_string())
                .unwrap_or_default()
        }));
        w.write_record(&row).map_err(CliError::runtime)?;
    }
    let csv = w.into_inner().map_err(CliError::runtime)?;

    let manifest = with_matrix(
        setup.manifest("bin", &[input], providers.sentence.method())?,
        matrix,
    )?;
    let mut dir = OutputDir::create(out)?;
    dir.write("verdicts.csv", &csv)?;
    dir.write_json("bin.json", "bin", &report)?;
    dir.finish(manifest)?;
    println!(
        "{} of {} samples removed, written to {}",
        report.removed().count(),
        report.verdicts.len(),
        out.display()
    );
    Ok(())
}

fn export_sim(input: &Path, common: &Common, sim: &SimArgs, out: &Path) -> Result<(), CliError> {
    let setup = Setup::new(common)?;
    let index = load_index(input, &setup)?;
    let (providers, matrix) = providers(&index, &setup, sim)?;
    let n = index.sentence_count();

    // Upper triangle only; the reader mirrors each pair and fills the diagonal.
    let mut pairs = String::new();
    for i in 0..n {
        for (j, v) in providers
            .sentence
            .row(i, n)
            .into_iter()
            .enumerate()
            .skip(i + 1)
        {
            pairs.push_str(&format!("{i} {j} {v}\n"));
        }
    }
    let mut tsv = String::from("ordinal\tsample\tside\ttext\n");
    for (k, e) in index.sentences().iter().enumerate() {
        let side = match e.side {
            Side::Premise => "p",
            Side::Hypothesis => "h",
        };
        tsv.push_str(&format!(
            "{k}\t{}\t{side}\t{}\n",
            index.samples()[e.sample].id,
            e.sentence.text()
        ));
    }

    let manifest = with_matrix(
        setup.manifest("export-sim", &[input], providers.sentence.method())?,
        matrix,
    )?;
    let mut dir = OutputDir::create(out)?;
    dir.write("similarity.txt", pairs.as_bytes())?;
    dir.write("sentences.tsv", tsv.as_bytes())?;
    dir.finish(manifest)?;
    println!(
        "{n} sentences, {} pairs written to {}",
        n * n.saturating_sub(1) / 2,
        out.display()
    );
    Ok(())
}

fn serve(
    input: &Path,
    common: &Common,
    bind: &str,
    journal: Option<PathBuf>,
    refit_interval: Option<usize>,
) -> Result<(), CliError> {
    let setup = Setup::new(common)?;
    let samples = load_samples(input)?;
    let corpus_id = input
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "corpus".into());
    let snapshot = Snapshot::build(1, &corpus_id, samples, setup.cfg, setup.tagger, setup.word)
        .map_err(|e| CliError::validation(format!("{}: {e}", input.display())))?;
    let state = Arc::new(AppState::new(snapshot, journal, refit_interval));

    let runtime = tokio::runtime::Runtime::new().map_err(CliError::runtime)?;
    runtime.block_on(async move {
        let listener = tokio::net::TcpListener::bind(bind)
            .await
            .map_err(|e| CliError::runtime(format!("cannot bind {bind}: {e}")))?;
        let addr = listener.local_addr().map_err(CliError::runtime)?;
        println!("listening on http://{addr}");
        std::io::stdout().flush().map_err(CliError::runtime)?;
        dqi_service::serve(listener, state)
            .await
            .map_err(CliError::runtime)
    })
}
