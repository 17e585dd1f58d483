use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use genmetrics::analysis::{
    rank_models, real_to_real_curve, relative_fd_curve, AnalysisError, EfficiencyCurve, MetricEntry, MetricKind,
    MetricReport, Protocol, RankingTable, Resizers, Sampling,
};
use genmetrics::features::{read_features_file, summarize, BackboneSpec, FeatureSet, PosteriorSet};
use genmetrics::metrics::{
    classifier_score, frechet_distance, intra_class_fd, prdc, top_k_accuracy, ManifoldParams, MetricError,
};
use genmetrics::pixel::FilterKind;
use serde::Serialize;

use crate::config::RefSplit;
use crate::error::{data, CliError, CliResult};

pub struct EvalSettings {
    pub spec: BackboneSpec,
    pub params: ManifoldParams,
    pub splits: usize,
    /// Filter used to feed the backbone.
    pub backbone_filter: FilterKind,
    pub allow_count_mismatch: bool,
}

impl EvalSettings {
    fn resizers(&self) -> Resizers {
        Resizers {
            preprocess: None,
            backbone: self.backbone_filter,
            friendly: self.spec.friendly_filter,
            override_acknowledged: self.backbone_filter != self.spec.friendly_filter,
        }
    }
}

pub struct Loaded {
    pub features: FeatureSet,
    pub posteriors: Option<PosteriorSet>,
}

pub fn load(path: &Path) -> CliResult<Loaded> {
    let (features, posteriors) = read_features_file(path).map_err(data(path.display()))?;
    Ok(Loaded { features, posteriors })
}

fn metric_err(what: &str) -> impl FnOnce(MetricError) -> CliError + '_ {
    move |e| CliError::Data(format!("{what}: {e}"))
}

/// Full metric report of `fake` against the reference `real`.
pub fn build_report(
    model_name: &str,
    real: &Loaded,
    fake: &Loaded,
    reference: &RefSplit,
    s: &EvalSettings,
) -> CliResult<MetricReport> {
    let (rf, ff) = (&real.features, &fake.features);
    if rf.dim() != ff.dim() {
        return Err(CliError::Data(format!("dimension mismatch: reference {} vs generated {}", rf.dim(), ff.dim())));
    }
    if reference.count != rf.count() {
        return Err(CliError::Usage(format!(
            "--ref-split declares {} samples but the reference file has {}",
            reference.count,
            rf.count()
        )));
    }

    let mut protocol = Protocol::new(&reference.name, rf.count(), ff.count(), s.resizers());
    protocol.k_pr = s.params.k_pr;
    protocol.k_dc = s.params.k_dc;
    protocol.splits = s.splits;
    let mut report = MetricReport::new(model_name, &s.spec.name, protocol);

    if rf.dim() != s.spec.feature_dim {
        report.note(format!(
            "feature dimension {} differs from the {} dimension registered for {}",
            rf.dim(),
            s.spec.feature_dim,
            s.spec.name
        ));
    }
    if rf.count() != ff.count() {
        let msg = format!("generated count {} differs from reference count {}", ff.count(), rf.count());
        if !s.allow_count_mismatch {
            log::warn!("{msg}; pass --allow-count-mismatch to acknowledge");
        }
        report.note(msg);
    }
    if s.backbone_filter != s.spec.friendly_filter {
        report.note(format!(
            "nonstandard evaluation: backbone resizer {} overrides friendly {}",
            s.backbone_filter, s.spec.friendly_filter
        ));
    }

    match &fake.posteriors {
        Some(post) => {
            let score = classifier_score(post, s.splits).map_err(metric_err(&s.spec.score_name))?;
            report.push(MetricEntry::new(&s.spec.score_name, MetricKind::Score, score.mean));
            report.note(format!("{} std over {} splits: {}", s.spec.score_name, s.splits, score.std));
        }
        None => {
            report.note(format!("{} and accuracy omitted: generated features carry no posteriors", s.spec.score_name))
        }
    }

    let fd = frechet_distance(&summarize(rf).map_err(data("reference"))?, &summarize(ff).map_err(data("generated"))?)
        .map_err(metric_err(&s.spec.fd_name))?;
    report.push(MetricEntry::new(&s.spec.fd_name, MetricKind::Fd, fd));

    let pr = prdc(rf, ff, s.params).map_err(metric_err("precision/recall/density/coverage"))?;
    report.push(MetricEntry::new(s.spec.precision_name(), MetricKind::Precision, pr.precision));
    report.push(MetricEntry::new(s.spec.recall_name(), MetricKind::Recall, pr.recall));
    report.push(MetricEntry::new(s.spec.density_name(), MetricKind::Density, pr.density));
    report.push(MetricEntry::new(s.spec.coverage_name(), MetricKind::Coverage, pr.coverage));

    if rf.labels().is_some() && ff.labels().is_some() {
        let ifd = intra_class_fd(rf, ff).map_err(metric_err(&s.spec.intra_fd_name()))?;
        report.push(MetricEntry::new(s.spec.intra_fd_name(), MetricKind::IntraFd, ifd.mean));
    } else {
        report.note(format!("{} omitted: both feature files need labels", s.spec.intra_fd_name()));
    }

    if let (Some(labels), Some(post)) = (ff.labels(), &fake.posteriors) {
        let top1 = top_k_accuracy(post, labels.ids(), 1).map_err(metric_err("Top-1 accuracy"))?;
        report.push(MetricEntry::new("Top-1 Acc", MetricKind::Top1Accuracy, top1));
        if post.classes() >= 5 {
            let top5 = top_k_accuracy(post, labels.ids(), 5).map_err(metric_err("Top-5 accuracy"))?;
            report.push(MetricEntry::new("Top-5 Acc", MetricKind::Top5Accuracy, top5));
        } else {
            report.note("Top-5 Acc omitted: fewer than 5 classes");
        }
    } else if fake.posteriors.is_some() {
        report.note("accuracy omitted: generated features carry no labels");
    }

    report.validate().map_err(|e| CliError::Data(e.to_string()))?;
    Ok(report)
}

pub fn file_stem(path: &Path) -> String {
    path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "model".into())
}

pub fn write_text(path: &Path, text: &str) -> CliResult<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent).map_err(data(format!("cannot create {}", parent.display())))?;
    }
    std::fs::write(path, text).map_err(data(format!("cannot write {}", path.display())))
}

pub struct CompareSettings {
    pub eval: EvalSettings,
    pub fractions: Vec<f64>,
    pub seed: u64,
    pub sampling: Sampling,
}

#[derive(Serialize)]
struct TargetCurve {
    model_name: String,
    curve: Option<EfficiencyCurve>,
    skipped: Option<String>,
}

#[derive(Serialize)]
struct CompareOutput<'a> {
    source: String,
    seed: u64,
    sampling: Sampling,
    fractions: &'a [f64],
    real_to_real: &'a EfficiencyCurve,
    relative: &'a [TargetCurve],
    reports: &'a [MetricReport],
    ranking: &'a RankingTable,
}

fn analysis_err(what: String) -> impl FnOnce(AnalysisError) -> CliError {
    move |e| CliError::Data(format!("{what}: {e}"))
}

/// Curves and a ranking of every target against `source`. Writes all outputs
/// under `out` and returns the ranking table.
pub fn compare(
    source_path: &Path,
    targets: &[PathBuf],
    reference: Option<RefSplit>,
    s: &CompareSettings,
    out: &Path,
) -> CliResult<RankingTable> {
    if targets.is_empty() {
        return Err(CliError::Usage("compare needs at least one target".into()));
    }
    let names: Vec<String> = targets.iter().map(|t| file_stem(t)).collect();
    let unique: BTreeSet<&String> = names.iter().collect();
    if unique.len() != names.len() {
        return Err(CliError::Usage("target file stems must be distinct".into()));
    }

    let source = load(source_path)?;
    let source_name = file_stem(source_path);
    let reference = reference.unwrap_or_else(|| RefSplit { name: source_name.clone(), count: source.features.count() });
    let source_summary = summarize(&source.features).map_err(data("source"))?;
    let backbone = &s.eval.spec.name;

    let real_to_real = real_to_real_curve(&source.features, &s.fractions, s.seed, s.sampling)
        .map_err(analysis_err(format!("real-to-real curve of {source_name}")))?
        .with_backbone(backbone);

    let mut reports = Vec::with_capacity(targets.len());
    let mut relative = Vec::with_capacity(targets.len());
    for (path, name) in targets.iter().zip(&names) {
        let target = load(path)?;
        reports.push(build_report(name, &source, &target, &reference, &s.eval)?);
        let entry = match relative_fd_curve(&source_summary, &target.features, &s.fractions, s.seed, s.sampling) {
            Ok(c) => TargetCurve { model_name: name.clone(), curve: Some(c.with_backbone(backbone)), skipped: None },
            Err(AnalysisError::ZeroReferenceFd) => {
                log::warn!("{name}: FD to the source is zero; relative curve skipped");
                TargetCurve { model_name: name.clone(), curve: None, skipped: Some("FD to the source is zero".into()) }
            }
            Err(e) => return Err(CliError::Data(format!("relative curve of {name}: {e}"))),
        };
        relative.push(entry);
    }
    let ranking = rank_models(&reports).map_err(analysis_err("ranking".into()))?;

    write_text(&out.join("curves/real_to_real.csv"), &real_to_real.to_csv())?;
    write_text(&out.join("curves/real_to_real.json"), &real_to_real.to_json())?;
    for tc in &relative {
        if let Some(c) = &tc.curve {
            write_text(&out.join(format!("curves/{}.relative.csv", tc.model_name)), &c.to_csv())?;
            write_text(&out.join(format!("curves/{}.relative.json", tc.model_name)), &c.to_json())?;
        }
    }
    for r in &reports {
        write_text(&out.join(format!("reports/{}.json", r.model_name)), &r.to_json())?;
    }
    write_text(&out.join("ranking.csv"), &ranking.to_csv())?;
    write_text(&out.join("ranking.txt"), &ranking.to_text())?;
    let envelope = CompareOutput {
        source: source_name,
        seed: s.seed,
        sampling: s.sampling,
        fractions: &s.fractions,
        real_to_real: &real_to_real,
        relative: &relative,
        reports: &reports,
        ranking: &ranking,
    };
    let mut json = serde_json::to_string_pretty(&envelope).expect("compare output serializes");
    json.push('\n');
    write_text(&out.join("compare.json"), &json)?;
    Ok(ranking)
}
