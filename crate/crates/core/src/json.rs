//! Wire formats: JSON schemas for distributions, cumulant sequences, series
//! and joint tables, with strict validation and field-level diagnostics.
//!
//! Rationals travel as reduced strings (`"p/q"` or `"p"`). Emission is
//! deterministic, always re-parses to the identical value, and model
//! components are expanded to explicit moments on the way in.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dalg::DiagonalScalar;
use crate::rational::Rat;
use crate::series::TruncatedSeries;
use crate::stardist::{JointDistribution, StarWord};
use crate::transforms::{CumulantSequence, Distribution};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum JsonError {
    #[error("json syntax: {0}")]
    Syntax(String),
    #[error("{path}: {message}")]
    Invalid { path: String, message: String },
}

fn invalid(path: impl Into<String>, message: impl ToString) -> JsonError {
    JsonError::Invalid {
        path: path.into(),
        message: message.to_string(),
    }
}

fn typed_from_str<'a, T: Deserialize<'a>>(text: &'a str) -> Result<T, JsonError> {
    let mut deserializer = serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(&mut deserializer).map_err(|err| {
        let path = err.path().to_string();
        if path == "." || path == "?" {
            JsonError::Syntax(err.into_inner().to_string())
        } else {
            invalid(path, err.into_inner())
        }
    })
}

fn parse_rat(path: &str, text: &str) -> Result<Rat, JsonError> {
    Rat::parse_strict(text).map_err(|err| invalid(path, err))
}

fn parse_scalar_list(path: &str, n: usize, values: &[String]) -> Result<DiagonalScalar, JsonError> {
    if values.len() != n {
        return Err(invalid(
            path,
            format!("expected {} components, got {}", n, values.len()),
        ));
    }
    let mut entries = Vec::with_capacity(n);
    for (i, value) in values.iter().enumerate() {
        entries.push(parse_rat(&format!("{}[{}]", path, i), value)?);
    }
    DiagonalScalar::new(entries).map_err(|err| invalid(path, err))
}

fn render_scalar(value: &DiagonalScalar) -> Vec<String> {
    value.entries().iter().map(|r| r.to_string()).collect()
}

// ---------------------------------------------------------------------------
// distributions

#[derive(Serialize, Deserialize, Debug, Clone)]
#[serde(deny_unknown_fields)]
pub struct DistributionDoc {
    #[serde(rename = "N")]
    pub n: usize,
    pub order: usize,
    pub components: Vec<ComponentDoc>,
}

#[derive(Serialize, Deserialize, Debug, Clone)]
#[serde(deny_unknown_fields)]
pub struct ComponentDoc {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub moments: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub model: Option<ModelDoc>,
}

/// Named per-component models, expanded through the cumulant-to-moment
/// formula on parse.
#[derive(Serialize, Deserialize, Debug, Clone)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum ModelDoc {
    Semicircular { variance: String },
    PointMass { value: String },
    FreePoisson { rate: String },
}

pub fn parse_distribution(text: &str) -> Result<Distribution, JsonError> {
    let doc: DistributionDoc = typed_from_str(text)?;
    distribution_from_doc(&doc)
}

pub fn distribution_from_doc(doc: &DistributionDoc) -> Result<Distribution, JsonError> {
    if doc.n == 0 {
        return Err(invalid("N", "must be at least 1"));
    }
    if doc.order == 0 {
        return Err(invalid("order", "must be at least 1"));
    }
    if doc.components.len() != doc.n {
        return Err(invalid(
            "components",
            format!("{} components listed for N={}", doc.components.len(), doc.n),
        ));
    }
    let mut parts = Vec::with_capacity(doc.n);
    for (i, component) in doc.components.iter().enumerate() {
        let path = format!("components[{}]", i);
        let part = match (&component.moments, &component.model) {
            (Some(_), Some(_)) => {
                return Err(invalid(path, "give either moments or a model, not both"))
            }
            (None, None) => return Err(invalid(path, "needs moments or a model")),
            (Some(moments), None) => {
                if moments.len() != doc.order {
                    return Err(invalid(
                        format!("{}.moments", path),
                        format!(
                            "expected {} moments (degrees 1..={}), got {}",
                            doc.order, doc.order, moments.len()
                        ),
                    ));
                }
                let mut values = Vec::with_capacity(doc.order);
                for (j, text) in moments.iter().enumerate() {
                    let rat = parse_rat(&format!("{}.moments[{}]", path, j), text)?;
                    values.push(DiagonalScalar::new(vec![rat]).expect("one component"));
                }
                Distribution::new(1, doc.order, values)
                    .map_err(|err| invalid(&path, err))?
            }
            (None, Some(model)) => expand_model(&path, model, doc.order)?,
        };
        parts.push(part);
    }
    Distribution::zip(&parts).map_err(|err| invalid("components", err))
}

fn expand_model(path: &str, model: &ModelDoc, order: usize) -> Result<Distribution, JsonError> {
    match model {
        ModelDoc::Semicircular { variance } => {
            let v = parse_rat(&format!("{}.model.semicircular.variance", path), variance)?;
            Distribution::semicircular(&DiagonalScalar::new(vec![v]).expect("one component"), order)
                .map_err(|err| invalid(path, err))
        }
        ModelDoc::PointMass { value } => {
            let v = parse_rat(&format!("{}.model.point_mass.value", path), value)?;
            Distribution::point_mass(&DiagonalScalar::new(vec![v]).expect("one component"), order)
                .map_err(|err| invalid(path, err))
        }
        ModelDoc::FreePoisson { rate } => {
            let v = parse_rat(&format!("{}.model.free_poisson.rate", path), rate)?;
            Distribution::free_poisson(&DiagonalScalar::new(vec![v]).expect("one component"), order)
                .map_err(|err| invalid(path, err))
        }
    }
}

/// Emits explicit moments; model components do not survive a round trip,
/// their expansions do.
pub fn distribution_to_doc(d: &Distribution) -> DistributionDoc {
    let components = d
        .split()
        .iter()
        .map(|part| ComponentDoc {
            moments: Some(
                part.moments()
                    .iter()
                    .map(|m| m.entry(0).to_string())
                    .collect(),
            ),
            model: None,
        })
        .collect();
    DistributionDoc {
        n: d.n_components(),
        order: d.order(),
        components,
    }
}

// ---------------------------------------------------------------------------
// cumulant sequences

#[derive(Serialize, Deserialize, Debug, Clone)]
#[serde(deny_unknown_fields)]
pub struct CumulantSequenceDoc {
    #[serde(rename = "N")]
    pub n: usize,
    pub order: usize,
    pub components: Vec<CumulantComponentDoc>,
}

#[derive(Serialize, Deserialize, Debug, Clone)]
#[serde(deny_unknown_fields)]
pub struct CumulantComponentDoc {
    pub cumulants: Vec<String>,
}

pub fn parse_cumulant_sequence(text: &str) -> Result<CumulantSequence, JsonError> {
    let doc: CumulantSequenceDoc = typed_from_str(text)?;
    if doc.n == 0 {
        return Err(invalid("N", "must be at least 1"));
    }
    if doc.order == 0 {
        return Err(invalid("order", "must be at least 1"));
    }
    if doc.components.len() != doc.n {
        return Err(invalid(
            "components",
            format!("{} components listed for N={}", doc.components.len(), doc.n),
        ));
    }
    let mut parts = Vec::with_capacity(doc.n);
    for (i, component) in doc.components.iter().enumerate() {
        let path = format!("components[{}].cumulants", i);
        if component.cumulants.len() != doc.order {
            return Err(invalid(
                &path,
                format!(
                    "expected {} cumulants (degrees 1..={}), got {}",
                    doc.order,
                    doc.order,
                    component.cumulants.len()
                ),
            ));
        }
        let mut values = Vec::with_capacity(doc.order);
        for (j, text) in component.cumulants.iter().enumerate() {
            let rat = parse_rat(&format!("{}[{}]", path, j), text)?;
            values.push(DiagonalScalar::new(vec![rat]).expect("one component"));
        }
        parts.push(CumulantSequence::new(1, doc.order, values).map_err(|err| invalid(&path, err))?);
    }
    CumulantSequence::zip(&parts).map_err(|err| invalid("components", err))
}

pub fn cumulant_sequence_to_doc(k: &CumulantSequence) -> CumulantSequenceDoc {
    let components = k
        .split()
        .iter()
        .map(|part| CumulantComponentDoc {
            cumulants: part
                .cumulants()
                .iter()
                .map(|c| c.entry(0).to_string())
                .collect(),
        })
        .collect();
    CumulantSequenceDoc {
        n: k.n_components(),
        order: k.order(),
        components,
    }
}

// ---------------------------------------------------------------------------
// series

#[derive(Serialize, Deserialize, Debug, Clone)]
#[serde(deny_unknown_fields)]
pub struct SeriesDoc {
    #[serde(rename = "N")]
    pub n: usize,
    pub order: usize,
    /// Degree (as a base-10 string) to component list; zero coefficients
    /// are omitted.
    pub coeffs: BTreeMap<String, Vec<String>>,
}

pub fn parse_series(text: &str) -> Result<TruncatedSeries, JsonError> {
    let doc: SeriesDoc = typed_from_str(text)?;
    if doc.n == 0 {
        return Err(invalid("N", "must be at least 1"));
    }
    if doc.order == 0 {
        return Err(invalid("order", "must be at least 1"));
    }
    let mut series =
        TruncatedSeries::zero(doc.n, doc.order).map_err(|err| invalid("order", err))?;
    for (key, values) in &doc.coeffs {
        let path = format!("coeffs.{}", key);
        let degree: usize = key
            .parse()
            .map_err(|_| invalid(&path, "degree key must be a base-10 integer"))?;
        if degree > doc.order {
            return Err(invalid(
                &path,
                format!("degree {} exceeds order {}", degree, doc.order),
            ));
        }
        let scalar = parse_scalar_list(&path, doc.n, values)?;
        series
            .set_coeff(degree, scalar)
            .map_err(|err| invalid(&path, err))?;
    }
    Ok(series)
}

pub fn series_to_doc(series: &TruncatedSeries) -> SeriesDoc {
    let coeffs = series
        .nonzero_coeffs()
        .map(|(degree, value)| (degree.to_string(), render_scalar(value)))
        .collect();
    SeriesDoc {
        n: series.n_components(),
        order: series.order(),
        coeffs,
    }
}

// ---------------------------------------------------------------------------
// joint tables

#[derive(Serialize, Deserialize, Debug, Clone)]
#[serde(deny_unknown_fields)]
pub struct JointDoc {
    #[serde(rename = "N")]
    pub n: usize,
    pub order: usize,
    pub vars: Vec<String>,
    #[serde(default)]
    pub star: bool,
    /// Word text (e.g. `"x x*"`) to component list. The table must be
    /// complete: every word of length `1..=order` over the alphabet.
    pub moments: BTreeMap<String, Vec<String>>,
}

/// A parsed joint table together with its variable names.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JointInput {
    pub joint: JointDistribution,
    pub var_names: Vec<String>,
}

pub fn parse_joint(text: &str) -> Result<JointInput, JsonError> {
    let doc: JointDoc = typed_from_str(text)?;
    if doc.n == 0 {
        return Err(invalid("N", "must be at least 1"));
    }
    if doc.order == 0 {
        return Err(invalid("order", "must be at least 1"));
    }
    if doc.vars.is_empty() {
        return Err(invalid("vars", "needs at least one variable"));
    }
    for (i, name) in doc.vars.iter().enumerate() {
        if name.is_empty() || name.contains(' ') || name.contains('*') {
            return Err(invalid(
                format!("vars[{}]", i),
                format!("bad variable name {:?}", name),
            ));
        }
        if doc.vars[..i].contains(name) {
            return Err(invalid(
                format!("vars[{}]", i),
                format!("duplicate variable name {:?}", name),
            ));
        }
    }
    let mut moments = BTreeMap::new();
    for (key, values) in &doc.moments {
        let path = format!("moments[{:?}]", key);
        let word = StarWord::parse(key, &doc.vars).map_err(|err| invalid(&path, err))?;
        if word.letters().iter().any(|l| l.star) && !doc.star {
            return Err(invalid(&path, "starred letter in an unstarred table"));
        }
        if word.len() > doc.order {
            return Err(invalid(
                &path,
                format!("word length {} exceeds order {}", word.len(), doc.order),
            ));
        }
        let scalar = parse_scalar_list(&path, doc.n, values)?;
        moments.insert(word, scalar);
    }
    let joint = JointDistribution::new(doc.n, doc.order, doc.vars.len(), doc.star, moments)
        .map_err(|err| invalid("moments", err))?;
    Ok(JointInput {
        joint,
        var_names: doc.vars.clone(),
    })
}

pub fn joint_to_doc(joint: &JointDistribution, var_names: &[String]) -> JointDoc {
    let moments = joint
        .words()
        .map(|(word, value)| (word.render(var_names), render_scalar(value)))
        .collect();
    JointDoc {
        n: joint.n_components(),
        order: joint.order(),
        vars: var_names.to_vec(),
        star: joint.is_starred(),
        moments,
    }
}

// ---------------------------------------------------------------------------
// input sniffing

/// Either input kind the CLI accepts.
#[derive(Debug, Clone)]
pub enum ParsedInput {
    Distribution(Distribution),
    Joint(JointInput),
}

/// Distinguishes joint tables from plain distributions by the `vars` key.
pub fn parse_input(text: &str) -> Result<ParsedInput, JsonError> {
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|err| JsonError::Syntax(err.to_string()))?;
    let is_joint = value
        .as_object()
        .map(|obj| obj.contains_key("vars"))
        .unwrap_or(false);
    if is_joint {
        Ok(ParsedInput::Joint(parse_joint(text)?))
    } else {
        Ok(ParsedInput::Distribution(parse_distribution(text)?))
    }
}

/// Deterministic pretty emission with a trailing newline.
pub fn to_json_string<T: Serialize>(doc: &T) -> String {
    let mut out = serde_json::to_string_pretty(doc).expect("documents serialize");
    out.push('\n');
    out
}
