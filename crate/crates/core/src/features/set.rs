use super::FeatureError;

/// Per-sample class ids with an explicit class count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Labels {
    ids: Vec<u32>,
    class_count: u32,
}

impl Labels {
    /// `class_count` defaults to `max(ids) + 1`.
    pub fn new(ids: Vec<u32>, class_count: Option<u32>) -> Result<Self, FeatureError> {
        let inferred = ids.iter().max().map_or(0, |&m| m + 1);
        let class_count = class_count.unwrap_or(inferred);
        if class_count == 0 {
            return Err(FeatureError::NoClasses);
        }
        if let Some(&bad) = ids.iter().find(|&&c| c >= class_count) {
            return Err(FeatureError::LabelOutOfRange { label: bad, class_count });
        }
        Ok(Self { ids, class_count })
    }

    pub fn ids(&self) -> &[u32] {
        &self.ids
    }

    pub fn class_count(&self) -> u32 {
        self.class_count
    }

    /// True when `class_count` differs from what [`Labels::new`] would infer.
    pub(crate) fn class_count_is_explicit(&self) -> bool {
        self.ids.iter().max().map_or(0, |&m| m + 1) != self.class_count
    }

    /// Distinct class ids present, ascending.
    pub fn present_classes(&self) -> Vec<u32> {
        let mut seen = vec![false; self.class_count as usize];
        self.ids.iter().for_each(|&c| seen[c as usize] = true);
        seen.iter().enumerate().filter(|(_, &s)| s).map(|(c, _)| c as u32).collect()
    }
}

/// `N × D` feature matrix (row per sample) with optional labels.
///
/// Values are kept at extraction precision (`f32`); metric code widens to
/// `f64` as it reads them.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureSet {
    dim: usize,
    values: Vec<f32>,
    labels: Option<Labels>,
    source_tag: String,
}

impl FeatureSet {
    pub fn new(dim: usize, values: Vec<f32>) -> Result<Self, FeatureError> {
        if dim == 0 {
            return Err(FeatureError::Empty);
        }
        if values.is_empty() {
            return Err(FeatureError::Empty);
        }
        if values.len() % dim != 0 {
            return Err(FeatureError::RaggedMatrix { len: values.len(), dim });
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(FeatureError::NonFiniteValue { row: i / dim, col: i % dim });
        }
        Ok(Self { dim, values, labels: None, source_tag: String::new() })
    }

    /// Convenience constructor from `f64` rows (narrowed to `f32`).
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self, FeatureError> {
        let dim = rows.first().map_or(0, |r| r.as_ref().len());
        let mut values = Vec::with_capacity(rows.len() * dim);
        for r in rows {
            let r = r.as_ref();
            if r.len() != dim {
                return Err(FeatureError::RaggedMatrix { len: r.len(), dim });
            }
            values.extend(r.iter().map(|&v| v as f32));
        }
        Self::new(dim, values)
    }

    pub fn with_labels(mut self, labels: Labels) -> Result<Self, FeatureError> {
        if labels.ids.len() != self.count() {
            return Err(FeatureError::CountMismatch { expected: self.count(), actual: labels.ids.len() });
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn with_source_tag(mut self, tag: impl Into<String>) -> Self {
        self.source_tag = tag.into();
        self
    }

    pub fn count(&self) -> usize {
        self.values.len() / self.dim
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn values(&self) -> &[f32] {
        &self.values
    }

    pub fn row(&self, i: usize) -> &[f32] {
        &self.values[i * self.dim..(i + 1) * self.dim]
    }

    pub fn labels(&self) -> Option<&Labels> {
        self.labels.as_ref()
    }

    pub fn source_tag(&self) -> &str {
        &self.source_tag
    }

    /// Rows at `indices`, in that order, with matching labels.
    pub fn select_rows(&self, indices: &[usize]) -> FeatureSet {
        let mut values = Vec::with_capacity(indices.len() * self.dim);
        for &i in indices {
            values.extend_from_slice(self.row(i));
        }
        let labels = self
            .labels
            .as_ref()
            .map(|l| Labels { ids: indices.iter().map(|&i| l.ids[i]).collect(), class_count: l.class_count });
        FeatureSet { dim: self.dim, values, labels, source_tag: self.source_tag.clone() }
    }

    /// Rows labelled `class`; `None` when the set is unlabelled.
    pub fn class_subset(&self, class: u32) -> Option<FeatureSet> {
        let labels = self.labels.as_ref()?;
        let idx: Vec<usize> = labels.ids.iter().enumerate().filter(|(_, &c)| c == class).map(|(i, _)| i).collect();
        Some(self.select_rows(&idx))
    }
}

/// Row-stochastic `N × K` matrix of class posteriors.
#[derive(Debug, Clone, PartialEq)]
pub struct PosteriorSet {
    classes: usize,
    values: Vec<f64>,
}

/// Allowed deviation of a posterior row sum from one.
pub const POSTERIOR_ROW_TOLERANCE: f64 = 1e-5;

impl PosteriorSet {
    pub fn new(classes: usize, values: Vec<f64>) -> Result<Self, FeatureError> {
        if classes == 0 || values.is_empty() {
            return Err(FeatureError::Empty);
        }
        if values.len() % classes != 0 {
            return Err(FeatureError::RaggedMatrix { len: values.len(), dim: classes });
        }
        for (r, row) in values.chunks_exact(classes).enumerate() {
            if let Some(c) = row.iter().position(|v| !v.is_finite()) {
                return Err(FeatureError::NonFiniteValue { row: r, col: c });
            }
            if row.iter().any(|&v| v < 0.0) {
                return Err(FeatureError::InvalidPosterior { row: r, sum: row.iter().sum() });
            }
            let sum: f64 = row.iter().sum();
            if (sum - 1.0).abs() > POSTERIOR_ROW_TOLERANCE {
                return Err(FeatureError::InvalidPosterior { row: r, sum });
            }
        }
        Ok(Self { classes, values })
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self, FeatureError> {
        let k = rows.first().map_or(0, |r| r.as_ref().len());
        let mut values = Vec::with_capacity(rows.len() * k);
        for r in rows {
            if r.as_ref().len() != k {
                return Err(FeatureError::RaggedMatrix { len: r.as_ref().len(), dim: k });
            }
            values.extend_from_slice(r.as_ref());
        }
        Self::new(k, values)
    }

    pub fn count(&self) -> usize {
        self.values.len() / self.classes
    }

    pub fn classes(&self) -> usize {
        self.classes
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.classes..(i + 1) * self.classes]
    }

    pub fn rows(&self) -> std::slice::ChunksExact<'_, f64> {
        self.values.chunks_exact(self.classes)
    }

    pub fn select_rows(&self, indices: &[usize]) -> PosteriorSet {
        let mut values = Vec::with_capacity(indices.len() * self.classes);
        for &i in indices {
            values.extend_from_slice(self.row(i));
        }
        PosteriorSet { classes: self.classes, values }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_finite() {
        assert!(matches!(
            FeatureSet::new(2, vec![1.0, 2.0, f32::NAN, 0.0]),
            Err(FeatureError::NonFiniteValue { row: 1, col: 0 })
        ));
    }

    #[test]
    fn rejects_ragged_and_empty() {
        assert!(FeatureSet::new(3, vec![1.0; 4]).is_err());
        assert!(FeatureSet::new(0, vec![]).is_err());
        assert!(FeatureSet::new(2, vec![]).is_err());
    }

    #[test]
    fn labels_infer_class_count() {
        let l = Labels::new(vec![0, 3, 1], None).unwrap();
        assert_eq!(l.class_count(), 4);
        assert_eq!(l.present_classes(), vec![0, 1, 3]);
        assert!(!l.class_count_is_explicit());
        assert!(Labels::new(vec![0, 5], Some(5)).is_err());
        assert!(Labels::new(vec![0, 1], Some(10)).unwrap().class_count_is_explicit());
    }

    #[test]
    fn label_count_must_match_rows() {
        let fs = FeatureSet::new(1, vec![0.0, 1.0]).unwrap();
        assert!(fs.clone().with_labels(Labels::new(vec![0], None).unwrap()).is_err());
        let fs = fs.with_labels(Labels::new(vec![1, 0], None).unwrap()).unwrap();
        assert_eq!(fs.class_subset(1).unwrap().values(), &[0.0]);
    }

    #[test]
    fn posterior_rows_must_be_stochastic() {
        assert!(PosteriorSet::from_rows(&[[0.5, 0.5], [0.2, 0.8]]).is_ok());
        assert!(matches!(PosteriorSet::from_rows(&[[0.5, 0.6]]), Err(FeatureError::InvalidPosterior { row: 0, .. })));
        assert!(PosteriorSet::from_rows(&[[1.2, -0.2]]).is_err());
        assert!(PosteriorSet::from_rows(&[[0.5, 0.5 + 5e-6]]).is_ok());
    }
}
