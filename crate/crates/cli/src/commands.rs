use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use serde::Serialize;

use depsig::corpus::{self, ClassDistribution, ColumnMap, CorpusFormat, LabelAliases, LengthBucket};
use depsig::evaluation::{self, EvalReport};
use depsig::features::{person_number, FeatureTemplate};
use depsig::interpret::{self, BootstrapConfig, BootstrapEntry, CoefficientEntry};
use depsig::model::{self, LinearModel, NUM_CLASSES};
use depsig::text_analysis::{Number, Person};
use depsig::{pipeline, Analyzer, Label, LabeledCorpus};

use crate::args::{ClassArg, Cli, Command, CorpusArgs, InputFormat, OutputFormat, TemplateArg};
use crate::config::{FileConfig, RunConfig};
use crate::CliError;

pub fn dispatch(cli: &Cli) -> Result<(), CliError> {
    let file = match &cli.config {
        Some(p) => FileConfig::read(p)?,
        None => FileConfig::default(),
    };
    match &cli.command {
        Command::Ingest {
            corpus,
            stats,
            histogram_width,
            histogram_out,
        } => {
            let rc = RunConfig::resolve(cli, &file, "ingest", None)
                .input(&corpus.data)
                .maybe_output(histogram_out.as_ref());
            start(&rc)?;
            if *histogram_width == 0 {
                return Err(CliError::Usage("--histogram-width must be at least 1".into()));
            }
            ingest(&rc, corpus, *stats, *histogram_width, histogram_out.as_deref())
        }
        Command::Split {
            corpus,
            fraction,
            train_out,
            test_out,
        } => {
            let rc = RunConfig::resolve(cli, &file, "split", None)
                .input(&corpus.data)
                .output_path(train_out)
                .output_path(test_out);
            start(&rc)?;
            split(&rc, corpus, *fraction, train_out, test_out)
        }
        Command::Train { corpus, train, out } => {
            let rc = RunConfig::resolve(cli, &file, "train", Some(train))
                .input(&corpus.data)
                .output_path(out);
            start(&rc)?;
            train_cmd(&rc, corpus, out)
        }
        Command::Evaluate {
            model,
            corpus,
            report_out,
            confusion_out,
        } => {
            let rc = RunConfig::resolve(cli, &file, "evaluate", None)
                .input(model)
                .input(&corpus.data)
                .maybe_output(report_out.as_ref())
                .maybe_output(confusion_out.as_ref());
            start(&rc)?;
            evaluate(&rc, model, corpus, report_out.as_deref(), confusion_out.as_deref())
        }
        Command::Predict {
            model,
            text,
            data,
            input_format,
            id_col,
            text_col,
        } => {
            let mut rc = RunConfig::resolve(cli, &file, "predict", None).input(model);
            if let Some(d) = data {
                rc = rc.input(d);
            }
            start(&rc)?;
            let model = load_model(model)?;
            let analyzer = analyzer()?;
            match (text, data) {
                (Some(t), _) => predict_one(&rc, &model, &analyzer, t),
                (None, Some(d)) => {
                    let source = Source::new(d, *input_format, id_col.as_deref(), text_col.as_deref(), None);
                    let corpus = source.load(LabelNeed::Ignored)?;
                    predict_many(&rc, &model, &analyzer, &corpus)
                }
                (None, None) => Err(CliError::Usage("either --text or --data is required".into())),
            }
        }
        Command::Featurize {
            model,
            data,
            input_format,
            id_col,
            text_col,
            out,
        } => {
            let rc = RunConfig::resolve(cli, &file, "featurize", None)
                .input(model)
                .input(data)
                .maybe_output(out.as_ref());
            start(&rc)?;
            let source = Source::new(data, *input_format, id_col.as_deref(), text_col.as_deref(), None);
            featurize(model, &source, out.as_deref())
        }
        Command::Analyze { file: path } => {
            let rc = RunConfig::resolve(cli, &file, "analyze", None).input(path);
            start(&rc)?;
            analyze(path)
        }
        Command::Inspect {
            model,
            top,
            template,
            class,
            csv_out,
        } => {
            let rc = RunConfig::resolve(cli, &file, "inspect", None)
                .input(model)
                .maybe_output(csv_out.as_ref());
            start(&rc)?;
            if *top == 0 {
                return Err(CliError::Usage("--top must be at least 1".into()));
            }
            inspect(&rc, model, *top, *template, *class, csv_out.as_deref())
        }
        Command::Bootstrap {
            corpus,
            train,
            runs,
            fraction,
            top,
            template,
            class,
            out,
        } => {
            let rc = RunConfig::resolve(cli, &file, "bootstrap", Some(train))
                .input(&corpus.data)
                .maybe_output(out.as_ref());
            start(&rc)?;
            if *top == 0 {
                return Err(CliError::Usage("--top must be at least 1".into()));
            }
            let config = BootstrapConfig {
                feature_set: rc.features,
                pos_input: rc.pos_softmax_input,
                train: rc.train.clone(),
                n_runs: *runs,
                subsample_fraction: *fraction,
                seed: rc.seed,
                threads: rc.threads,
            };
            bootstrap(&rc, corpus, &config, *top, *template, *class, out.as_deref())
        }
    }
}

fn start(rc: &RunConfig) -> Result<(), CliError> {
    rc.validate()?;
    rc.log();
    Ok(())
}

fn analyzer() -> Result<Analyzer, CliError> {
    Ok(Analyzer::from_env()?)
}

fn load_model(path: &Path) -> Result<LinearModel, CliError> {
    model::load(path).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))
}

fn create(path: &Path) -> Result<BufWriter<File>, CliError> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| CliError::Data(format!("cannot create {}: {e}", path.display())))
}

fn write_json_file<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let mut w = create(path)?;
    serde_json::to_writer_pretty(&mut w, value).map_err(io::Error::from)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

fn print_json<T: Serialize>(value: &T) -> Result<(), CliError> {
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, value).map_err(io::Error::from)?;
    writeln!(out)?;
    Ok(())
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum LabelNeed {
    Required,
    /// Read labels when the label column exists.
    Optional,
    Ignored,
}

/// A corpus file plus how to read it.
struct Source<'a> {
    path: &'a Path,
    format: CorpusFormat,
    id_col: Option<&'a str>,
    text_col: Option<&'a str>,
    label_col: Option<&'a str>,
}

impl<'a> Source<'a> {
    fn new(
        path: &'a Path,
        format: Option<InputFormat>,
        id_col: Option<&'a str>,
        text_col: Option<&'a str>,
        label_col: Option<&'a str>,
    ) -> Self {
        let format = match format {
            Some(InputFormat::Tsv) => CorpusFormat::Tsv,
            Some(InputFormat::Csv) => CorpusFormat::Csv,
            None => CorpusFormat::from_path(path),
        };
        Self {
            path,
            format,
            id_col,
            text_col,
            label_col,
        }
    }

    fn from_args(args: &'a CorpusArgs) -> Self {
        Self::new(
            &args.data,
            args.input_format,
            args.id_col.as_deref(),
            args.text_col.as_deref(),
            args.label_col.as_deref(),
        )
    }

    fn header(&self) -> Result<Vec<String>, CliError> {
        let mut line = String::new();
        BufReader::new(File::open(self.path)?).read_line(&mut line)?;
        let delimiter = match self.format {
            CorpusFormat::Tsv => '\t',
            CorpusFormat::Csv => ',',
        };
        Ok(line
            .trim_start_matches('\u{feff}')
            .trim_end_matches(['\r', '\n'])
            .split(delimiter)
            .map(|h| h.trim_matches('"').to_string())
            .collect())
    }

    fn columns(&self, need: LabelNeed) -> Result<ColumnMap, CliError> {
        let header = self.header()?;
        let has = |name: &str| header.iter().any(|h| h == name);
        let defaults = if has("PID") && has("Text_data") {
            ColumnMap::shared_task()
        } else {
            ColumnMap::default()
        };
        let label_default = defaults.label.clone().unwrap_or_default();
        let label = self.label_col.map(str::to_string).unwrap_or(label_default);
        let label = match need {
            LabelNeed::Required => Some(label),
            LabelNeed::Optional => has(&label).then_some(label),
            LabelNeed::Ignored => None,
        };
        Ok(ColumnMap {
            id: self.id_col.map_or(defaults.id, str::to_string),
            text: self.text_col.map_or(defaults.text, str::to_string),
            label,
        })
    }

    fn load(&self, need: LabelNeed) -> Result<LabeledCorpus, CliError> {
        let columns = self.columns(need)?;
        let file = File::open(self.path)?;
        corpus::read_corpus(file, self.format, &columns, &LabelAliases::default())
            .map_err(|e| CliError::Data(format!("{}: {e}", self.path.display())))
    }
}

#[derive(Serialize)]
struct ClassCount {
    label: &'static str,
    count: usize,
}

fn class_counts(d: &ClassDistribution) -> Vec<ClassCount> {
    Label::ALL
        .iter()
        .map(|&l| ClassCount {
            label: l.as_str(),
            count: d.counts[l.index()],
        })
        .collect()
}

#[derive(Serialize)]
struct ClassStats {
    label: &'static str,
    documents: usize,
    mean_words: f64,
    /// Mean share of person/number-marked tokens that are first person.
    first_person_ratio: f64,
}

#[derive(Serialize)]
struct CorpusStats {
    mean_words: f64,
    classes: Vec<ClassStats>,
    histogram: Vec<LengthBucket>,
}

#[derive(Serialize)]
struct IngestReport {
    documents: usize,
    total: Option<usize>,
    classes: Option<Vec<ClassCount>>,
    stats: Option<CorpusStats>,
}

fn mean(xs: impl Iterator<Item = f64>) -> f64 {
    let (sum, n) = xs.fold((0.0, 0usize), |(s, n), x| (s + x, n + 1));
    if n == 0 {
        0.0
    } else {
        sum / n as f64
    }
}

fn corpus_stats(corpus: &LabeledCorpus, analyzer: &Analyzer, width: usize) -> CorpusStats {
    let docs = pipeline::analyze_corpus(corpus, analyzer);
    let words: Vec<f64> = docs.iter().map(|d| d.word_count() as f64).collect();
    let p1: Vec<f64> = docs.iter().map(|d| person_number(d)[0]).collect();
    let classes = match corpus.labels() {
        Some(labels) => Label::ALL
            .iter()
            .map(|&c| {
                let rows = || (0..labels.len()).filter(move |&i| labels[i] == c);
                ClassStats {
                    label: c.as_str(),
                    documents: rows().count(),
                    mean_words: mean(rows().map(|i| words[i])),
                    first_person_ratio: mean(rows().map(|i| p1[i])),
                }
            })
            .collect(),
        None => Vec::new(),
    };
    CorpusStats {
        mean_words: mean(words.iter().copied()),
        classes,
        histogram: corpus::length_histogram(corpus, width),
    }
}

fn ingest(
    rc: &RunConfig,
    args: &CorpusArgs,
    stats: bool,
    width: usize,
    histogram_out: Option<&Path>,
) -> Result<(), CliError> {
    let corpus = Source::from_args(args).load(LabelNeed::Optional)?;
    let dist = corpus.labels().map(corpus::class_distribution);
    let stats = if stats {
        Some(corpus_stats(&corpus, &analyzer()?, width))
    } else {
        None
    };
    if let Some(path) = histogram_out {
        let buckets = match &stats {
            Some(s) => s.histogram.clone(),
            None => corpus::length_histogram(&corpus, width),
        };
        corpus::write_histogram_csv(&buckets, create(path)?)?;
    }
    let report = IngestReport {
        documents: corpus.len(),
        total: dist.map(|d| d.total),
        classes: dist.as_ref().map(class_counts),
        stats,
    };
    let mut out = io::stdout().lock();
    match rc.output {
        OutputFormat::Json => print_json(&report)?,
        OutputFormat::Text => {
            writeln!(out, "documents {}", report.documents)?;
            for c in report.classes.iter().flatten() {
                writeln!(out, "{:<16}{:>8}", c.label, c.count)?;
            }
            if let Some(s) = &report.stats {
                writeln!(out, "mean words per post {:.2}", s.mean_words)?;
                for c in &s.classes {
                    writeln!(
                        out,
                        "{:<16} mean words {:>8.2}  first-person ratio {:.4}",
                        c.label, c.mean_words, c.first_person_ratio
                    )?;
                }
            }
        }
        OutputFormat::Csv => {
            writeln!(out, "label,count")?;
            for c in report.classes.iter().flatten() {
                writeln!(out, "{},{}", c.label, c.count)?;
            }
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct SplitReport {
    seed: u64,
    test_fraction: f64,
    train: Vec<ClassCount>,
    test: Vec<ClassCount>,
}

fn split(rc: &RunConfig, args: &CorpusArgs, fraction: f64, train_out: &Path, test_out: &Path) -> Result<(), CliError> {
    let corpus = Source::from_args(args).load(LabelNeed::Required)?;
    let (train, test) = corpus::stratified_split(&corpus, fraction, rc.seed)?;
    for (part, path) in [(&train, train_out), (&test, test_out)] {
        let mut w = create(path)?;
        part.write_tsv(&mut w)?;
        w.flush()?;
    }
    let report = SplitReport {
        seed: rc.seed,
        test_fraction: fraction,
        train: class_counts(&train.class_distribution()?),
        test: class_counts(&test.class_distribution()?),
    };
    match rc.output {
        OutputFormat::Json => print_json(&report)?,
        _ => {
            let mut out = io::stdout().lock();
            writeln!(out, "part,label,count")?;
            for (name, rows) in [("train", &report.train), ("test", &report.test)] {
                for c in rows {
                    writeln!(out, "{name},{},{}", c.label, c.count)?;
                }
            }
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct TrainReport<'a> {
    model: &'a Path,
    features: &'static str,
    dimension: usize,
    vocabulary: usize,
    train_meta: &'a model::TrainMeta,
}

fn train_cmd(rc: &RunConfig, args: &CorpusArgs, out: &Path) -> Result<(), CliError> {
    let corpus = Source::from_args(args).load(LabelNeed::Required)?;
    let analyzer = analyzer()?;
    let model = pipeline::train_model(&corpus, rc.features, rc.pos_softmax_input, &rc.train, &analyzer)?;
    let meta = model.meta();
    if !meta.converged {
        eprintln!(
            "depsig: warning: stopped after {} iterations with gradient norm {:.3e}",
            meta.iterations_run, meta.final_grad_norm
        );
    }
    model::save(&model, out).map_err(|e| CliError::Data(format!("{}: {e}", out.display())))?;
    let report = TrainReport {
        model: out,
        features: rc.features.as_str(),
        dimension: model.dimension(),
        vocabulary: model.vocab().len(),
        train_meta: meta,
    };
    match rc.output {
        OutputFormat::Json => print_json(&report)?,
        _ => println!(
            "wrote {} ({} features, {} iterations, loss {:.6})",
            out.display(),
            report.dimension,
            meta.iterations_run,
            meta.final_loss
        ),
    }
    Ok(())
}

#[derive(Serialize)]
struct ClassScore {
    label: &'static str,
    precision: f64,
    recall: f64,
    f1: f64,
    support: u64,
}

#[derive(Serialize)]
struct EvalOutput {
    macro_f1: f64,
    accuracy: f64,
    documents: usize,
    per_class: Vec<ClassScore>,
    /// Rows are gold labels, columns predictions, both in label order.
    confusion: [[u64; NUM_CLASSES]; NUM_CLASSES],
}

impl From<&EvalReport> for EvalOutput {
    fn from(r: &EvalReport) -> Self {
        EvalOutput {
            macro_f1: r.macro_f1,
            accuracy: r.accuracy,
            documents: r.distribution.total,
            per_class: r
                .per_class
                .iter()
                .map(|c| ClassScore {
                    label: c.label.as_str(),
                    precision: c.precision,
                    recall: c.recall,
                    f1: c.f1,
                    support: c.support,
                })
                .collect(),
            confusion: r.confusion.counts,
        }
    }
}

fn evaluate(
    rc: &RunConfig,
    model_path: &Path,
    args: &CorpusArgs,
    report_out: Option<&Path>,
    confusion_out: Option<&Path>,
) -> Result<(), CliError> {
    let model = load_model(model_path)?;
    let corpus = Source::from_args(args).load(LabelNeed::Required)?;
    let report = evaluation::evaluate(&model, &corpus, &analyzer()?)?;
    let output = EvalOutput::from(&report);
    if let Some(path) = report_out {
        write_json_file(path, &output)?;
    }
    if let Some(path) = confusion_out {
        let mut w = create(path)?;
        report.confusion.write_csv(&mut w)?;
        w.flush()?;
    }
    match rc.output {
        OutputFormat::Json => print_json(&output)?,
        OutputFormat::Text => print!("{}", report.to_text()),
        OutputFormat::Csv => report.confusion.write_csv(io::stdout().lock())?,
    }
    Ok(())
}

#[derive(Serialize)]
struct Probabilities {
    #[serde(rename = "not depression")]
    not_depression: f64,
    moderate: f64,
    severe: f64,
}

#[derive(Serialize)]
struct Prediction<'a> {
    #[serde(skip_serializing_if = "Option::is_none")]
    id: Option<&'a str>,
    label: &'static str,
    probabilities: Probabilities,
}

impl<'a> Prediction<'a> {
    fn new(id: Option<&'a str>, label: Label, p: [f64; NUM_CLASSES]) -> Self {
        Prediction {
            id,
            label: label.as_str(),
            probabilities: Probabilities {
                not_depression: p[Label::NotDepression.index()],
                moderate: p[Label::Moderate.index()],
                severe: p[Label::Severe.index()],
            },
        }
    }

    fn row(&self) -> [String; 4] {
        let p = &self.probabilities;
        [
            self.label.to_string(),
            p.not_depression.to_string(),
            p.moderate.to_string(),
            p.severe.to_string(),
        ]
    }
}

const PREDICTION_HEADER: &str = "label,p_not_depression,p_moderate,p_severe";

fn predict_one(rc: &RunConfig, model: &LinearModel, analyzer: &Analyzer, text: &str) -> Result<(), CliError> {
    let (label, p) = pipeline::predict_text(model, text, analyzer)?;
    let pred = Prediction::new(None, label, p);
    match rc.output {
        OutputFormat::Json => print_json(&pred)?,
        OutputFormat::Text => println!("{}", pred.row().join("\t")),
        OutputFormat::Csv => println!("{PREDICTION_HEADER}\n{}", pred.row().join(",")),
    }
    Ok(())
}

fn predict_many(
    rc: &RunConfig,
    model: &LinearModel,
    analyzer: &Analyzer,
    corpus: &LabeledCorpus,
) -> Result<(), CliError> {
    let preds = pipeline::predict_corpus(model, corpus, analyzer)?;
    let mut out = io::stdout().lock();
    let mut table = csv::Writer::from_writer(io::stdout());
    if rc.output == OutputFormat::Csv {
        table.write_record(["id", "label", "p_not_depression", "p_moderate", "p_severe"])?;
    }
    for (doc, (label, p)) in corpus.documents().iter().zip(preds) {
        let pred = Prediction::new(Some(&doc.id), label, p);
        match rc.output {
            OutputFormat::Json => {
                serde_json::to_writer(&mut out, &pred).map_err(io::Error::from)?;
                writeln!(out)?;
            }
            OutputFormat::Text => writeln!(out, "{}\t{}", doc.id, pred.row().join("\t"))?,
            OutputFormat::Csv => {
                let [l, a, b, c] = pred.row();
                table.write_record([doc.id.as_str(), &l, &a, &b, &c])?;
            }
        }
    }
    drop(out);
    table.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct DenseEntry<'a> {
    template: &'static str,
    name: &'a str,
    value: f64,
}

#[derive(Serialize)]
struct FeatureLine<'a> {
    id: &'a str,
    /// `(term, count)` for every vocabulary word present.
    words: Vec<(&'a str, u32)>,
    dense: Vec<DenseEntry<'a>>,
}

fn featurize(model_path: &Path, source: &Source, out: Option<&Path>) -> Result<(), CliError> {
    let model = load_model(model_path)?;
    let corpus = source.load(LabelNeed::Ignored)?;
    let analyzer = analyzer()?;
    let columns = model.schema().columns(Some(model.vocab()));
    let word_dim = model.schema().vocab_size();
    let mut sink: Box<dyn Write> = match out {
        Some(p) => Box::new(create(p)?),
        None => Box::new(io::stdout().lock()),
    };
    for doc in corpus.documents() {
        let x = pipeline::featurize_text(&model, &doc.text, &analyzer)?;
        let line = FeatureLine {
            id: &doc.id,
            words: x
                .word_counts()
                .iter()
                .map(|&(j, c)| (columns[j].1.as_str(), c))
                .collect(),
            dense: x
                .dense_tail()
                .iter()
                .enumerate()
                .map(|(i, &value)| {
                    let (template, name) = &columns[word_dim + i];
                    DenseEntry {
                        template: template.as_str(),
                        name,
                        value,
                    }
                })
                .collect(),
        };
        serde_json::to_writer(&mut sink, &line).map_err(io::Error::from)?;
        writeln!(sink)?;
    }
    sink.flush()?;
    Ok(())
}

fn person_str(p: Option<Person>) -> &'static str {
    match p {
        Some(Person::First) => "1",
        Some(Person::Second) => "2",
        Some(Person::Third) => "3",
        None => "-",
    }
}

fn number_str(n: Option<Number>) -> &'static str {
    match n {
        Some(Number::Singular) => "Sg",
        Some(Number::Plural) => "Pl",
        None => "-",
    }
}

fn analyze(path: &Path) -> Result<(), CliError> {
    let mut text = String::new();
    if path.as_os_str() == "-" {
        io::stdin().read_to_string(&mut text)?;
    } else {
        text = std::fs::read_to_string(path).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
    }
    let doc = analyzer()?.analyze(&text);
    let mut out = BufWriter::new(io::stdout().lock());
    writeln!(
        out,
        "sentence\ttoken\tstart\tend\tsurface\ttag\tperson\tnumber\tsyllables"
    )?;
    for (s, range) in doc.sentences.iter().enumerate() {
        for i in range.clone() {
            let t = &doc.tokens[i];
            let m = doc.morph[i];
            writeln!(
                out,
                "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
                s + 1,
                i + 1,
                t.start,
                t.end,
                t.surface,
                doc.tags[i].as_str(),
                person_str(m.person),
                number_str(m.number),
                doc.syllables[i]
            )?;
        }
    }
    out.flush()?;
    Ok(())
}

fn template_of(t: TemplateArg) -> FeatureTemplate {
    match t {
        TemplateArg::Words => FeatureTemplate::Words,
        TemplateArg::Pos => FeatureTemplate::PosDist,
        TemplateArg::Read => FeatureTemplate::ReadabilityStyle,
        TemplateArg::Pnum => FeatureTemplate::PersonNumber,
    }
}

fn label_of(c: ClassArg) -> Label {
    match c {
        ClassArg::NotDepression => Label::NotDepression,
        ClassArg::Moderate => Label::Moderate,
        ClassArg::Severe => Label::Severe,
    }
}

/// Requested `(class, template)` cells, each restricted to what the model has.
fn cells(
    templates: &[FeatureTemplate],
    template: Option<TemplateArg>,
    class: Option<ClassArg>,
) -> Result<Vec<(Label, FeatureTemplate)>, CliError> {
    let chosen: Vec<FeatureTemplate> = match template.map(template_of) {
        Some(t) if templates.contains(&t) => vec![t],
        Some(t) => return Err(CliError::Usage(format!("the model has no {} features", t.as_str()))),
        None => templates.to_vec(),
    };
    let classes: Vec<Label> = class.map_or(Label::ALL.to_vec(), |c| vec![label_of(c)]);
    Ok(classes
        .into_iter()
        .flat_map(|c| chosen.iter().map(move |&t| (c, t)))
        .collect())
}

#[derive(Serialize)]
struct RankRow<'a> {
    class: &'static str,
    template: &'static str,
    feature_name: &'a str,
    weight: f64,
    abs_weight: f64,
    rank: usize,
}

impl<'a> From<&'a CoefficientEntry> for RankRow<'a> {
    fn from(e: &'a CoefficientEntry) -> Self {
        RankRow {
            class: e.class.as_str(),
            template: e.template.as_str(),
            feature_name: &e.feature_name,
            weight: e.weight,
            abs_weight: e.abs_weight,
            rank: e.rank,
        }
    }
}

fn inspect(
    rc: &RunConfig,
    model_path: &Path,
    top: usize,
    template: Option<TemplateArg>,
    class: Option<ClassArg>,
    csv_out: Option<&Path>,
) -> Result<(), CliError> {
    let model = load_model(model_path)?;
    let ranking = interpret::rank_coefficients(&model);
    if let Some(path) = csv_out {
        let mut w = create(path)?;
        interpret::write_ranking_csv(&ranking, &mut w)?;
        w.flush()?;
    }
    let mut picked = Vec::new();
    for (c, t) in cells(model.schema().templates(), template, class)? {
        picked.extend(interpret::top_k_by_template(&ranking, t, c, top)?);
    }
    let rows: Vec<RankRow> = picked.iter().map(RankRow::from).collect();
    let mut out = io::stdout().lock();
    match rc.output {
        OutputFormat::Json => print_json(&rows)?,
        OutputFormat::Text => {
            for r in &rows {
                writeln!(
                    out,
                    "{:<16}{:<6}{:>6}  {:<28}{:>12.6}",
                    r.class, r.template, r.rank, r.feature_name, r.weight
                )?;
            }
        }
        OutputFormat::Csv => {
            let mut w = csv::Writer::from_writer(&mut out);
            for r in &rows {
                w.serialize(r)?;
            }
            w.flush()?;
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct StabilityRow<'a> {
    class: &'static str,
    template: &'static str,
    feature_name: &'a str,
    mean: f64,
    std: f64,
    sign_consistency: f64,
    rank: usize,
}

#[derive(Serialize)]
struct BootstrapOutput<'a> {
    n_runs: usize,
    subsample_fraction: f64,
    seed: u64,
    top: Vec<StabilityRow<'a>>,
}

fn bootstrap(
    rc: &RunConfig,
    args: &CorpusArgs,
    config: &BootstrapConfig,
    top: usize,
    template: Option<TemplateArg>,
    class: Option<ClassArg>,
    out: Option<&Path>,
) -> Result<(), CliError> {
    let corpus = Source::from_args(args).load(LabelNeed::Required)?;
    let report = interpret::bootstrap_importance(&corpus, config, &analyzer()?)?;
    if let Some(path) = out {
        let mut w = create(path)?;
        interpret::write_bootstrap_csv(&report, &mut w)?;
        w.flush()?;
    }
    let mut picked: Vec<&BootstrapEntry> = Vec::new();
    for (c, t) in cells(config.feature_set.templates(), template, class)? {
        let mut hits: Vec<&BootstrapEntry> = report
            .entries
            .iter()
            .filter(|e| e.class == c && e.template == t)
            .collect();
        hits.sort_by_key(|e| e.rank);
        hits.truncate(top);
        picked.extend(hits);
    }
    let rows: Vec<StabilityRow> = picked
        .into_iter()
        .map(|e| StabilityRow {
            class: e.class.as_str(),
            template: e.template.as_str(),
            feature_name: &e.feature_name,
            mean: e.mean,
            std: e.std,
            sign_consistency: e.sign_consistency,
            rank: e.rank,
        })
        .collect();
    let mut stdout = io::stdout().lock();
    match rc.output {
        OutputFormat::Json => print_json(&BootstrapOutput {
            n_runs: report.n_runs,
            subsample_fraction: report.subsample_fraction,
            seed: report.seed,
            top: rows,
        })?,
        OutputFormat::Text => {
            for r in &rows {
                writeln!(
                    stdout,
                    "{:<16}{:<6}{:>6}  {:<28}{:>12.6} ± {:<10.6} sign {:.2}",
                    r.class, r.template, r.rank, r.feature_name, r.mean, r.std, r.sign_consistency
                )?;
            }
        }
        OutputFormat::Csv => {
            let mut w = csv::Writer::from_writer(&mut stdout);
            for r in &rows {
                w.serialize(r)?;
            }
            w.flush()?;
        }
    }
    Ok(())
}
