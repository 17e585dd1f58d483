use serde::{Deserialize, Serialize};

use super::FeatureError;
use crate::pixel::FilterKind;

/// Evaluation backbone description: input geometry, friendly resizer,
/// normalization constants and the display names of its metrics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BackboneSpec {
    pub name: String,
    /// Square input side length in pixels.
    pub input_resolution: usize,
    pub friendly_filter: FilterKind,
    pub feature_dim: usize,
    /// Classifier head size, if the backbone has one.
    pub class_count: Option<usize>,
    pub channel_scale: [f64; 3],
    pub channel_offset: [f64; 3],
    pub score_name: String,
    pub fd_name: String,
    /// Prefix for Precision/Recall/Density/Coverage, e.g. `"S-"`.
    pub prdc_prefix: String,
}

// ImageNet channel statistics used by the PyTorch backbones.
const IMAGENET_MEAN: [f64; 3] = [0.485, 0.456, 0.406];
const IMAGENET_STD: [f64; 3] = [0.229, 0.224, 0.225];

fn imagenet_affine() -> ([f64; 3], [f64; 3]) {
    let scale = [0, 1, 2].map(|c| 1.0 / (255.0 * IMAGENET_STD[c]));
    let offset = [0, 1, 2].map(|c| -IMAGENET_MEAN[c] / IMAGENET_STD[c]);
    (scale, offset)
}

impl BackboneSpec {
    pub fn precision_name(&self) -> String {
        format!("{}Precision", self.prdc_prefix)
    }

    pub fn recall_name(&self) -> String {
        format!("{}Recall", self.prdc_prefix)
    }

    pub fn density_name(&self) -> String {
        format!("{}Density", self.prdc_prefix)
    }

    pub fn coverage_name(&self) -> String {
        format!("{}Coverage", self.prdc_prefix)
    }

    /// Intra-class FD name: `IFID`, `IFSD`, `IFTD` for the built-ins.
    pub fn intra_fd_name(&self) -> String {
        format!("I{}", self.fd_name)
    }

    /// Score, FD, Precision, Recall, Density, Coverage display names in table order.
    pub fn metric_names(&self) -> [String; 6] {
        [
            self.score_name.clone(),
            self.fd_name.clone(),
            self.precision_name(),
            self.recall_name(),
            self.density_name(),
            self.coverage_name(),
        ]
    }

    pub fn inception_v3() -> Self {
        BackboneSpec {
            name: "InceptionV3".into(),
            input_resolution: 299,
            friendly_filter: FilterKind::Bilinear,
            feature_dim: 2048,
            class_count: Some(1000),
            // [0, 255] -> [-1, 1]
            channel_scale: [2.0 / 255.0; 3],
            channel_offset: [-1.0; 3],
            score_name: "IS".into(),
            fd_name: "FID".into(),
            prdc_prefix: String::new(),
        }
    }

    pub fn swav() -> Self {
        let (channel_scale, channel_offset) = imagenet_affine();
        BackboneSpec {
            name: "SwAV".into(),
            input_resolution: 224,
            friendly_filter: FilterKind::Bilinear,
            feature_dim: 2048,
            class_count: None,
            channel_scale,
            channel_offset,
            score_name: "SS".into(),
            fd_name: "FSD".into(),
            prdc_prefix: "S-".into(),
        }
    }

    pub fn swin_t() -> Self {
        let (channel_scale, channel_offset) = imagenet_affine();
        BackboneSpec {
            name: "Swin-T".into(),
            input_resolution: 224,
            friendly_filter: FilterKind::Bicubic,
            feature_dim: 768,
            class_count: Some(1000),
            channel_scale,
            channel_offset,
            score_name: "TS".into(),
            fd_name: "FTD".into(),
            prdc_prefix: "T-".into(),
        }
    }
}

/// Backbone specs unique by (case-insensitive) name.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Registry {
    backbones: Vec<BackboneSpec>,
}

impl Registry {
    /// InceptionV3, SwAV and Swin-T.
    pub fn builtin() -> Self {
        Registry { backbones: vec![BackboneSpec::inception_v3(), BackboneSpec::swav(), BackboneSpec::swin_t()] }
    }

    pub fn specs(&self) -> &[BackboneSpec] {
        &self.backbones
    }

    pub fn get(&self, name: &str) -> Result<&BackboneSpec, FeatureError> {
        self.backbones
            .iter()
            .find(|b| b.name.eq_ignore_ascii_case(name))
            .ok_or_else(|| FeatureError::UnknownBackbone(name.to_string()))
    }

    /// Adds a custom backbone; replacing a built-in must go through
    /// [`Registry::replace`].
    pub fn register(&mut self, spec: BackboneSpec) -> Result<(), FeatureError> {
        if self.get(&spec.name).is_ok() {
            return Err(FeatureError::DuplicateBackbone(spec.name));
        }
        if spec.input_resolution == 0 || spec.feature_dim == 0 {
            return Err(FeatureError::Empty);
        }
        self.backbones.push(spec);
        Ok(())
    }

    /// Overrides an existing entry (e.g. normalization constants from config).
    pub fn replace(&mut self, spec: BackboneSpec) -> Result<(), FeatureError> {
        let slot = self
            .backbones
            .iter_mut()
            .find(|b| b.name.eq_ignore_ascii_case(&spec.name))
            .ok_or_else(|| FeatureError::UnknownBackbone(spec.name.clone()))?;
        *slot = spec;
        Ok(())
    }

    /// JSON manifest consumed by external feature extractors.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("registry serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, FeatureError> {
        let reg: Registry = serde_json::from_str(text).map_err(|e| FeatureError::InvalidManifest(e.to_string()))?;
        let mut checked = Registry { backbones: Vec::new() };
        for b in reg.backbones {
            checked.register(b)?;
        }
        Ok(checked)
    }
}

impl Default for Registry {
    fn default() -> Self {
        Self::builtin()
    }
}
