//! Comparison of engine output against stored golden expansions.
//!
//! Each golden object stores a kind, the orders in `a` and `μ` it is
//! displayed to, and its terms. Golden keys may list trig and derivative
//! factors in composition order (`d2 cos1` is `∂_z² ∘ cos z`), so operators
//! keep their written composition order; they are canonicalised on load.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::algebra::{Series, Trig, Truncation};
use super::operators::{apply_to, bch_assemble, build_t0a, OPERATOR_TRUNCATION};
use super::projection::{critical_basis_series, det_and_discriminant, projected_matrix_series};
use super::stokes::stokes_series;
use super::SeriesModel;
use crate::error::{Error, Result};

const MODEL_A: &str = include_str!("../../golden/model_a.json");
const MODEL_B: &str = include_str!("../../golden/model_b.json");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ObjectKind {
    Operator,
    Function,
    Scalar,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GoldenObject {
    pub kind: ObjectKind,
    pub max_a: Option<u32>,
    pub max_mu: Option<u32>,
    pub terms: BTreeMap<String, String>,
}

impl GoldenObject {
    pub fn truncation(&self) -> Truncation {
        Truncation { max_a: self.max_a, max_mu: self.max_mu }
    }

    pub fn series(&self) -> Result<Series> {
        Series::from_map(self.terms.iter().map(|(k, v)| (k.as_str(), v.as_str())))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GoldenFile {
    pub model: String,
    pub objects: BTreeMap<String, GoldenObject>,
}

/// The embedded golden file for a model.
pub fn golden_file(model: SeriesModel) -> Result<GoldenFile> {
    let text = match model {
        SeriesModel::A => MODEL_A,
        SeriesModel::B => MODEL_B,
    };
    serde_json::from_str(text).map_err(|e| Error::Parse(format!("golden file: {e}")))
}

const BASIS_TAGS: [(&str, Trig); 5] = [
    ("1", Trig::One),
    ("cos1", Trig::Cos(1)),
    ("sin1", Trig::Sin(1)),
    ("cos2", Trig::Cos(2)),
    ("sin2", Trig::Sin(2)),
];

/// Every named object the engine can produce for a model, untruncated.
pub fn engine_objects(model: SeriesModel) -> Result<BTreeMap<String, Series>> {
    let mut out = BTreeMap::new();
    let stokes = stokes_series(model, 3)?;
    out.insert("stokes_eta".into(), stokes.eta.clone());
    out.insert("stokes_c".into(), stokes.c.clone());

    let t0a = build_t0a(model)?;
    let t1a = t0a.commutator_z();
    let t2a = t1a.commutator_z();
    let t0 = t0a.a_part(0);
    out.insert("T1".into(), t0.commutator_z());
    out.insert("T2".into(), t0.commutator_z().commutator_z());
    out.insert("T0".into(), t0);
    let bch = bch_assemble(&t0a);
    for (tag, f) in BASIS_TAGS {
        out.insert(format!("T0a_apply_{tag}"), apply_to(&t0a, f));
        out.insert(format!("T1a_apply_{tag}"), apply_to(&t1a, f));
        out.insert(format!("T2a_apply_{tag}"), apply_to(&t2a, f));
        out.insert(format!("T_apply_{tag}"), apply_to(&bch, f));
    }
    out.insert("T0a".into(), t0a);
    out.insert("T1a".into(), t1a);
    out.insert("T2a".into(), t2a);

    let (phi1, phi2) = critical_basis_series(model)?;
    let tr = OPERATOR_TRUNCATION;
    let basis = [&phi1, &phi2];
    for (i, pi) in basis.iter().enumerate() {
        for (j, pj) in basis.iter().enumerate() {
            out.insert(format!("inner_{}{}", i + 1, j + 1), bch.apply(pi, tr).inner(pj, tr));
        }
        out.insert(format!("norm_{}", i + 1), pi.inner(pi, tr));
    }
    out.insert("phi1".into(), phi1);
    out.insert("phi2".into(), phi2);

    let b = projected_matrix_series(model)?;
    for (i, row) in b.iter().enumerate() {
        for (j, e) in row.iter().enumerate() {
            out.insert(format!("B_{}{}", i + 1, j + 1), e.clone());
        }
    }
    let det = det_and_discriminant(model)?;
    out.insert("b0".into(), det.b0);
    out.insert("b1".into(), det.b1);
    out.insert("b2".into(), det.b2);
    out.insert("disc".into(), det.disc);
    out.insert("disc_leading".into(), det.disc_leading);
    Ok(out)
}

/// One mismatching coefficient; `None` marks a term absent on that side.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GoldenDiff {
    pub object: String,
    pub key: String,
    pub expected: Option<String>,
    pub found: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GoldenReport {
    pub model: String,
    pub objects_checked: usize,
    pub terms_checked: usize,
    pub diffs: Vec<GoldenDiff>,
}

impl GoldenReport {
    pub fn passed(&self) -> bool {
        self.diffs.is_empty()
    }
}

fn kind_matches(kind: ObjectKind, s: &Series) -> bool {
    match kind {
        ObjectKind::Operator => true,
        ObjectKind::Function => s.is_function(),
        ObjectKind::Scalar => s.is_scalar(),
    }
}

/// Diffs every golden object against the engine, truncated to the orders the
/// golden object is displayed to.
pub fn check_golden(model: SeriesModel) -> Result<GoldenReport> {
    let golden = golden_file(model)?;
    let engine = engine_objects(model)?;
    let mut diffs = Vec::new();
    let mut terms_checked = 0;
    for (name, obj) in &golden.objects {
        let want = obj.series()?;
        let Some(found) = engine.get(name) else {
            diffs.push(GoldenDiff { object: name.clone(), key: "*".into(), expected: Some("object".into()), found: None });
            continue;
        };
        let found = found.truncate(obj.truncation());
        if !kind_matches(obj.kind, &found) {
            diffs.push(GoldenDiff {
                object: name.clone(),
                key: "kind".into(),
                expected: Some(format!("{:?}", obj.kind).to_lowercase()),
                found: None,
            });
        }
        let (want_map, found_map) = (want.to_map(), found.to_map());
        let keys: std::collections::BTreeSet<&String> = want_map.keys().chain(found_map.keys()).collect();
        terms_checked += keys.len();
        for key in keys {
            let (e, f) = (want_map.get(key), found_map.get(key));
            if e != f {
                diffs.push(GoldenDiff {
                    object: name.clone(),
                    key: key.clone(),
                    expected: e.cloned(),
                    found: f.cloned(),
                });
            }
        }
    }
    Ok(GoldenReport {
        model: model.label().into(),
        objects_checked: golden.objects.len(),
        terms_checked,
        diffs,
    })
}
