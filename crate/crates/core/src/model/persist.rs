//! Model persistence: a versioned, self-describing text format.
//!
//! Layout:
//!
//! ```text
//! tabmed-model 1
//! sha256 <hex of everything below this line>
//! kind <family>
//! ...parameters, one keyword line each...
//! end
//! ```
//!
//! Floats are written in Rust's shortest round-trip form, so a reloaded
//! model scores bit-identically. Load failures distinguish version
//! mismatches, truncation, and checksum corruption.

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::model::tree::TreeNode;
use crate::model::{
    BayesParams, FeatureModel, ForestParams, GbtParams, LogisticParams, MlpParams, ScoreModel,
    TreeParams,
};

const MODEL_TAG: &str = "tabmed-model";
const FORMAT_VERSION: u32 = 1;

/// Wrap a body in the versioned, checksummed container.
pub(crate) fn frame(tag: &str, body: &str) -> Vec<u8> {
    let mut hasher = Sha256::new();
    hasher.update(body.as_bytes());
    let digest = hasher.finalize();
    let mut out = format!("{tag} {FORMAT_VERSION}\nsha256 {digest:x}\n");
    out.push_str(body);
    out.into_bytes()
}

/// Verify the container framing and return the body.
pub(crate) fn unframe<'a>(tag: &str, bytes: &'a [u8]) -> Result<&'a str> {
    let text = std::str::from_utf8(bytes)
        .map_err(|_| Error::ArtifactTruncated("artifact is not utf-8".into()))?;
    let (header, rest) = text
        .split_once('\n')
        .ok_or_else(|| Error::ArtifactTruncated("missing header line".into()))?;
    match header.strip_prefix(tag).map(str::trim) {
        Some(version) if version == FORMAT_VERSION.to_string() => {}
        Some(version) => return Err(Error::ArtifactVersion(version.to_string())),
        None => {
            return Err(Error::ArtifactTruncated(format!(
                "expected a `{tag}` header, found `{header}`"
            )))
        }
    }
    let (sha_line, body) = rest
        .split_once('\n')
        .ok_or_else(|| Error::ArtifactTruncated("missing checksum line".into()))?;
    let expected = sha_line
        .strip_prefix("sha256 ")
        .ok_or_else(|| Error::ArtifactTruncated("missing checksum line".into()))?;
    let mut hasher = Sha256::new();
    hasher.update(body.as_bytes());
    let actual = format!("{:x}", hasher.finalize());
    if actual != expected {
        return Err(Error::ArtifactChecksum);
    }
    if body.lines().last() != Some("end") {
        return Err(Error::ArtifactTruncated("missing `end` sentinel".into()));
    }
    Ok(body)
}

/// Line cursor over an artifact body.
pub(crate) struct Cursor<'a> {
    lines: std::str::Lines<'a>,
}

impl<'a> Cursor<'a> {
    pub fn new(body: &'a str) -> Self {
        Cursor {
            lines: body.lines(),
        }
    }

    pub fn next_line(&mut self) -> Result<&'a str> {
        self.lines
            .next()
            .ok_or_else(|| Error::ArtifactTruncated("unexpected end of artifact".into()))
    }

    /// Next line, which must start with `keyword `; returns the remainder.
    pub fn expect(&mut self, keyword: &str) -> Result<&'a str> {
        let line = self.next_line()?;
        if line == keyword {
            return Ok("");
        }
        line.strip_prefix(keyword)
            .and_then(|rest| rest.strip_prefix(' '))
            .ok_or_else(|| {
                Error::ArtifactTruncated(format!("expected `{keyword} ...`, found `{line}`"))
            })
    }
}

pub(crate) fn parse_f64(token: &str) -> Result<f64> {
    token
        .parse::<f64>()
        .map_err(|_| Error::ArtifactTruncated(format!("bad float `{token}`")))
}

pub(crate) fn parse_usize(token: &str) -> Result<usize> {
    token
        .parse::<usize>()
        .map_err(|_| Error::ArtifactTruncated(format!("bad integer `{token}`")))
}

fn parse_f64_list(rest: &str, expected: usize) -> Result<Vec<f64>> {
    let values: Result<Vec<f64>> = rest.split_whitespace().map(parse_f64).collect();
    let values = values?;
    if values.len() != expected {
        return Err(Error::ArtifactTruncated(format!(
            "expected {expected} values, found {}",
            values.len()
        )));
    }
    Ok(values)
}

fn write_f64_list(out: &mut String, keyword: &str, values: &[f64]) {
    out.push_str(keyword);
    for v in values {
        out.push(' ');
        out.push_str(&format!("{v}"));
    }
    out.push('\n');
}

fn write_tree(out: &mut String, node: &TreeNode) {
    match node {
        TreeNode::Leaf { value } => out.push_str(&format!("node leaf {value}\n")),
        TreeNode::Internal {
            feature,
            threshold,
            left,
            right,
        } => {
            out.push_str(&format!("node internal {feature} {threshold}\n"));
            write_tree(out, left);
            write_tree(out, right);
        }
    }
}

fn read_tree(cursor: &mut Cursor) -> Result<TreeNode> {
    let rest = cursor.expect("node")?;
    let mut parts = rest.split_whitespace();
    match parts.next() {
        Some("leaf") => {
            let value = parse_f64(parts.next().ok_or_else(|| {
                Error::ArtifactTruncated("leaf node missing value".into())
            })?)?;
            Ok(TreeNode::Leaf { value })
        }
        Some("internal") => {
            let feature = parse_usize(
                parts
                    .next()
                    .ok_or_else(|| Error::ArtifactTruncated("internal node missing feature".into()))?,
            )?;
            let threshold = parse_f64(
                parts
                    .next()
                    .ok_or_else(|| Error::ArtifactTruncated("internal node missing threshold".into()))?,
            )?;
            let left = read_tree(cursor)?;
            let right = read_tree(cursor)?;
            Ok(TreeNode::Internal {
                feature,
                threshold,
                left: Box::new(left),
                right: Box::new(right),
            })
        }
        other => Err(Error::ArtifactTruncated(format!(
            "unknown node variant {other:?}"
        ))),
    }
}

/// Serialize the model body (between the checksum line and `end`).
pub(crate) fn write_model_body(model: &ScoreModel, out: &mut String) {
    match model {
        ScoreModel::Logistic(p) => {
            out.push_str("kind lr\n");
            out.push_str(&format!("dims {}\n", p.weights.len()));
            write_f64_list(out, "weights", &p.weights);
            out.push_str(&format!("bias {}\n", p.bias));
            out.push_str(&format!("loss {}\n", p.final_loss));
            out.push_str(&format!("iterations {}\n", p.iterations));
        }
        ScoreModel::Tree(p) => {
            out.push_str("kind dt\n");
            out.push_str(&format!("dims {}\n", p.n_features));
            out.push_str(&format!("hyper {} {}\n", p.max_depth, p.min_samples_leaf));
            write_tree(out, &p.root);
        }
        ScoreModel::Forest(p) => {
            out.push_str("kind rf\n");
            out.push_str(&format!("dims {}\n", p.n_features));
            out.push_str(&format!("m_try {}\n", p.m_try));
            out.push_str("tree_seeds");
            for s in &p.tree_seeds {
                out.push_str(&format!(" {s}"));
            }
            out.push('\n');
            write_f64_list(out, "importances", &p.feature_importances);
            out.push_str(&format!("n_trees {}\n", p.trees.len()));
            for tree in &p.trees {
                out.push_str("tree\n");
                write_tree(out, tree);
            }
        }
        ScoreModel::Boosted(p) => {
            out.push_str("kind gbt\n");
            out.push_str(&format!("dims {}\n", p.n_features));
            out.push_str(&format!("base_score {}\n", p.base_score));
            out.push_str(&format!("learning_rate {}\n", p.learning_rate));
            out.push_str(&format!("raw_margin {}\n", u8::from(p.raw_margin)));
            out.push_str(&format!("n_trees {}\n", p.trees.len()));
            for tree in &p.trees {
                out.push_str("tree\n");
                write_tree(out, tree);
            }
        }
        ScoreModel::Bayes(p) => {
            out.push_str("kind nb\n");
            out.push_str(&format!("dims {}\n", p.features.len()));
            write_f64_list(out, "log_prior", &p.log_prior);
            for fm in &p.features {
                match fm {
                    FeatureModel::Gaussian { mean, var } => {
                        out.push_str(&format!(
                            "feature gaussian {} {} {} {}\n",
                            mean[0], var[0], mean[1], var[1]
                        ));
                    }
                    FeatureModel::Table {
                        keys,
                        log_prob,
                        unseen_log_prob,
                    } => {
                        out.push_str(&format!("feature table {}\n", keys.len()));
                        out.push_str("keys");
                        for k in keys {
                            out.push_str(&format!(" {k}"));
                        }
                        out.push('\n');
                        write_f64_list(out, "logp0", &log_prob[0]);
                        write_f64_list(out, "logp1", &log_prob[1]);
                        out.push_str(&format!(
                            "unseen {} {}\n",
                            unseen_log_prob[0], unseen_log_prob[1]
                        ));
                    }
                }
            }
        }
        ScoreModel::Mlp(p) => {
            out.push_str("kind nn\n");
            out.push_str(&format!("dims {}\n", p.n_features));
            out.push_str(&format!("hidden {}\n", p.hidden));
            for unit in 0..p.hidden {
                let row = &p.w1[unit * p.n_features..(unit + 1) * p.n_features];
                write_f64_list(out, "w1", row);
            }
            write_f64_list(out, "b1", &p.b1);
            write_f64_list(out, "w2", &p.w2);
            out.push_str(&format!("b2 {}\n", p.b2));
        }
    }
}

/// Parse a model body starting at its `kind` line.
pub(crate) fn read_model_body(cursor: &mut Cursor) -> Result<ScoreModel> {
    let kind = cursor.expect("kind")?;
    match kind {
        "lr" => {
            let dims = parse_usize(cursor.expect("dims")?)?;
            let weights = parse_f64_list(cursor.expect("weights")?, dims)?;
            let bias = parse_f64(cursor.expect("bias")?)?;
            let final_loss = parse_f64(cursor.expect("loss")?)?;
            let iterations = parse_usize(cursor.expect("iterations")?)?;
            Ok(ScoreModel::Logistic(LogisticParams {
                weights,
                bias,
                final_loss,
                iterations,
            }))
        }
        "dt" => {
            let dims = parse_usize(cursor.expect("dims")?)?;
            let hyper = cursor.expect("hyper")?;
            let mut parts = hyper.split_whitespace();
            let max_depth = parse_usize(parts.next().unwrap_or_default())?;
            let min_samples_leaf = parse_usize(parts.next().unwrap_or_default())?;
            let root = read_tree(cursor)?;
            Ok(ScoreModel::Tree(TreeParams {
                root,
                n_features: dims,
                max_depth,
                min_samples_leaf,
            }))
        }
        "rf" => {
            let dims = parse_usize(cursor.expect("dims")?)?;
            let m_try = parse_usize(cursor.expect("m_try")?)?;
            let tree_seeds: Result<Vec<u64>> = cursor
                .expect("tree_seeds")?
                .split_whitespace()
                .map(|t| {
                    t.parse::<u64>()
                        .map_err(|_| Error::ArtifactTruncated(format!("bad seed `{t}`")))
                })
                .collect();
            let tree_seeds = tree_seeds?;
            let feature_importances = parse_f64_list(cursor.expect("importances")?, dims)?;
            let n_trees = parse_usize(cursor.expect("n_trees")?)?;
            let mut trees = Vec::with_capacity(n_trees);
            for _ in 0..n_trees {
                cursor.expect("tree")?;
                trees.push(read_tree(cursor)?);
            }
            Ok(ScoreModel::Forest(ForestParams {
                trees,
                tree_seeds,
                m_try,
                n_features: dims,
                feature_importances,
            }))
        }
        "gbt" => {
            let dims = parse_usize(cursor.expect("dims")?)?;
            let base_score = parse_f64(cursor.expect("base_score")?)?;
            let learning_rate = parse_f64(cursor.expect("learning_rate")?)?;
            let raw_margin = cursor.expect("raw_margin")? == "1";
            let n_trees = parse_usize(cursor.expect("n_trees")?)?;
            let mut trees = Vec::with_capacity(n_trees);
            for _ in 0..n_trees {
                cursor.expect("tree")?;
                trees.push(read_tree(cursor)?);
            }
            Ok(ScoreModel::Boosted(GbtParams {
                base_score,
                trees,
                learning_rate,
                n_features: dims,
                raw_margin,
            }))
        }
        "nb" => {
            let dims = parse_usize(cursor.expect("dims")?)?;
            let prior = parse_f64_list(cursor.expect("log_prior")?, 2)?;
            let mut features = Vec::with_capacity(dims);
            for _ in 0..dims {
                let rest = cursor.expect("feature")?;
                let mut parts = rest.split_whitespace();
                match parts.next() {
                    Some("gaussian") => {
                        let vals: Result<Vec<f64>> = parts.map(parse_f64).collect();
                        let vals = vals?;
                        if vals.len() != 4 {
                            return Err(Error::ArtifactTruncated(
                                "gaussian feature needs 4 values".into(),
                            ));
                        }
                        features.push(FeatureModel::Gaussian {
                            mean: [vals[0], vals[2]],
                            var: [vals[1], vals[3]],
                        });
                    }
                    Some("table") => {
                        let k = parse_usize(parts.next().unwrap_or_default())?;
                        let keys: Result<Vec<i64>> = cursor
                            .expect("keys")?
                            .split_whitespace()
                            .map(|t| {
                                t.parse::<i64>().map_err(|_| {
                                    Error::ArtifactTruncated(format!("bad key `{t}`"))
                                })
                            })
                            .collect();
                        let keys = keys?;
                        if keys.len() != k {
                            return Err(Error::ArtifactTruncated("key count mismatch".into()));
                        }
                        let logp0 = parse_f64_list(cursor.expect("logp0")?, k)?;
                        let logp1 = parse_f64_list(cursor.expect("logp1")?, k)?;
                        let unseen = parse_f64_list(cursor.expect("unseen")?, 2)?;
                        features.push(FeatureModel::Table {
                            keys,
                            log_prob: [logp0, logp1],
                            unseen_log_prob: [unseen[0], unseen[1]],
                        });
                    }
                    other => {
                        return Err(Error::ArtifactTruncated(format!(
                            "unknown feature model {other:?}"
                        )))
                    }
                }
            }
            Ok(ScoreModel::Bayes(BayesParams {
                log_prior: [prior[0], prior[1]],
                features,
            }))
        }
        "nn" => {
            let dims = parse_usize(cursor.expect("dims")?)?;
            let hidden = parse_usize(cursor.expect("hidden")?)?;
            let mut w1 = Vec::with_capacity(hidden * dims);
            for _ in 0..hidden {
                w1.extend(parse_f64_list(cursor.expect("w1")?, dims)?);
            }
            let b1 = parse_f64_list(cursor.expect("b1")?, hidden)?;
            let w2 = parse_f64_list(cursor.expect("w2")?, hidden)?;
            let b2 = parse_f64(cursor.expect("b2")?)?;
            Ok(ScoreModel::Mlp(MlpParams {
                w1,
                b1,
                w2,
                b2,
                n_features: dims,
                hidden,
            }))
        }
        other => Err(Error::ArtifactTruncated(format!(
            "unknown model kind `{other}`"
        ))),
    }
}

/// Serialize a fitted model to the versioned text artifact.
pub fn save_model(model: &ScoreModel) -> Vec<u8> {
    let mut body = String::new();
    write_model_body(model, &mut body);
    body.push_str("end\n");
    frame(MODEL_TAG, &body)
}

/// Load a model artifact produced by [`save_model`].
pub fn load_model(bytes: &[u8]) -> Result<ScoreModel> {
    let body = unframe(MODEL_TAG, bytes)?;
    let mut cursor = Cursor::new(body);
    let model = read_model_body(&mut cursor)?;
    cursor.expect("end")?;
    Ok(model)
}
