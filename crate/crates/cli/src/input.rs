//! Reading shifts and interactions from registry names or JSON config
//! files, and reading/writing patterns as text.
//!
//! A config file either names a registry model,
//!
//! ```json
//! { "model": { "name": "hard_core", "params": { "lambda": 1.0, "d": 2 } } }
//! ```
//!
//! or spells the shift out. Axis keys are `axis_0`, `axis_1`, … (bare
//! indices also work) and pairs are label tuples; `edges` entries are keyed
//! `"a,b"` and take a number or `"inf"`:
//!
//! ```json
//! { "alphabet": ["0", "1"], "axes": 2,
//!   "forbidden": { "axis_0": [["1", "1"]], "axis_1": [["1", "1"]] },
//!   "vertex": { "1": -0.5 } }
//! ```

use std::collections::BTreeMap;
use std::path::Path;

use nnsft_core::{Alphabet, Letter, Nnsft, Pattern, Site};
use nnsft_gibbs::{Energy, Interaction, Model};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::args::InputArgs;
use crate::error::CliError;

/// A loaded input: the interaction (uniform for bare SFTs) and a
/// normalized description for the report.
#[derive(Clone, Debug)]
pub struct Loaded {
    pub phi: Interaction,
    pub description: Value,
}

impl Loaded {
    pub fn sft(&self) -> &Nnsft {
        self.phi.underlying_sft()
    }

    pub fn alphabet(&self) -> &Alphabet {
        self.phi.alphabet()
    }

    pub fn dim(&self) -> usize {
        self.phi.dim()
    }
}

#[derive(Deserialize, Serialize, Debug, Clone)]
#[serde(deny_unknown_fields)]
struct ModelSpec {
    name: String,
    #[serde(default)]
    params: BTreeMap<String, f64>,
}

#[derive(Deserialize, Debug, Clone, PartialEq)]
#[serde(untagged)]
enum Label {
    Text(String),
    Number(i64),
}

impl Label {
    fn text(&self) -> String {
        match self {
            Label::Text(s) => s.clone(),
            Label::Number(n) => n.to_string(),
        }
    }
}

#[derive(Deserialize, Debug, Clone)]
#[serde(untagged)]
enum Weight {
    Number(f64),
    Text(String),
}

#[derive(Deserialize, Debug, Default)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    model: Option<ModelSpec>,
    alphabet: Option<Vec<Label>>,
    axes: Option<usize>,
    allowed: Option<BTreeMap<String, Vec<(Label, Label)>>>,
    forbidden: Option<BTreeMap<String, Vec<(Label, Label)>>>,
    vertex: Option<BTreeMap<String, f64>>,
    edges: Option<BTreeMap<String, BTreeMap<String, Weight>>>,
}

fn model_params(args: &InputArgs) -> BTreeMap<String, f64> {
    let mut p = BTreeMap::new();
    let mut put = |k: &str, v: Option<f64>| {
        if let Some(v) = v {
            p.insert(k.to_string(), v);
        }
    };
    put("lambda", args.lambda);
    put("d", args.d.map(|v| v as f64));
    put("k", args.k.map(|v| v as f64));
    put("q", args.q.map(|v| v as f64));
    put("M", args.m.map(|v| v as f64));
    put("g", args.g.map(|v| v as f64));
    put("E", args.field);
    put("J", args.coupling);
    p
}

/// Loads the input named by the arguments; exactly one source is allowed.
pub fn load(args: &InputArgs) -> Result<Loaded, CliError> {
    let params = model_params(args);
    match (&args.model, &args.config) {
        (Some(name), None) => from_model(&ModelSpec { name: name.clone(), params }),
        (None, Some(path)) => {
            if !params.is_empty() {
                return Err(CliError::input("model parameters on the command line only apply with --model"));
            }
            load_config(path)
        }
        (Some(_), Some(_)) => Err(CliError::input("give either --model or --config, not both")),
        (None, None) => Err(CliError::input("no input: give --model NAME or --config FILE")),
    }
}

fn from_model(spec: &ModelSpec) -> Result<Loaded, CliError> {
    let model = Model::from_params(&spec.name, &spec.params)?;
    let phi = model.build()?;
    let description = serde_json::json!({ "model": { "name": model.name(), "params": spec.params } });
    Ok(Loaded { phi, description })
}

pub fn load_config(path: &Path) -> Result<Loaded, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::input(format!("cannot read {}: {e}", path.display())))?;
    parse_config(&text)
}

/// Parses a config document (see the module docs for the schema).
pub fn parse_config(text: &str) -> Result<Loaded, CliError> {
    let cfg: ConfigFile = serde_json::from_str(text).map_err(|e| CliError::input(format!("malformed config: {e}")))?;
    let explicit = cfg.alphabet.is_some()
        || cfg.axes.is_some()
        || cfg.allowed.is_some()
        || cfg.forbidden.is_some()
        || cfg.vertex.is_some()
        || cfg.edges.is_some();
    if let Some(spec) = &cfg.model {
        if explicit {
            return Err(CliError::input("a config names a model or spells out a shift, not both"));
        }
        return from_model(spec);
    }
    let labels: Vec<String> = cfg.alphabet.as_ref().ok_or_else(|| CliError::input("config needs `alphabet` or `model`"))?.iter().map(Label::text).collect();
    let alphabet = Alphabet::new(labels.clone())?;
    let d = cfg.axes.ok_or_else(|| CliError::input("config needs `axes`"))?;
    if d == 0 {
        return Err(CliError::input("`axes` must be at least 1"));
    }
    if cfg.allowed.is_some() && cfg.forbidden.is_some() {
        return Err(CliError::input("give `allowed` or `forbidden`, not both"));
    }
    let k = alphabet.size();
    let letter = |l: &str| alphabet.index_of(l).map_err(CliError::from);
    let cell = |a: Letter, b: Letter| a as usize * k + b as usize;
    let mut edges = vec![vec![Energy::Finite(0.0); k * k]; d];
    if let Some(allowed) = &cfg.allowed {
        let by_axis = by_axis(allowed, d)?;
        for (axis, table) in edges.iter_mut().enumerate() {
            let pairs = by_axis[axis].ok_or_else(|| CliError::input(format!("`allowed` has no entry for axis_{axis}")))?;
            table.fill(Energy::Infinite);
            for (a, b) in pairs {
                table[cell(letter(&a.text())?, letter(&b.text())?)] = Energy::Finite(0.0);
            }
        }
    }
    if let Some(forbidden) = &cfg.forbidden {
        let by_axis = by_axis(forbidden, d)?;
        for (axis, table) in edges.iter_mut().enumerate() {
            for (a, b) in by_axis[axis].into_iter().flatten() {
                table[cell(letter(&a.text())?, letter(&b.text())?)] = Energy::Infinite;
            }
        }
    }
    if let Some(weights) = &cfg.edges {
        for (key, entries) in weights {
            let axis = axis_index(key, d)?;
            for (pair, w) in entries {
                let (a, b) = split_pair(pair)?;
                let (a, b) = (letter(a)?, letter(b)?);
                let e = match w {
                    Weight::Number(v) if v.is_finite() => Energy::Finite(*v),
                    Weight::Text(t) if matches!(t.as_str(), "inf" | "+inf" | "infinity" | "Infinity") => Energy::Infinite,
                    _ => return Err(CliError::input(format!("edge weight for {pair:?} must be a number or \"inf\""))),
                };
                // a forbidden pair stays forbidden whatever weight is given
                if edges[axis][cell(a, b)].is_finite() {
                    edges[axis][cell(a, b)] = e;
                }
            }
        }
    }
    let mut vertex = vec![0.0; k];
    for (l, w) in cfg.vertex.iter().flatten() {
        vertex[letter(l)? as usize] = *w;
    }
    let phi = Interaction::new(alphabet, d, vertex, edges)?;
    let description = serde_json::from_str(text).map_err(|e| CliError::input(e.to_string()))?;
    Ok(Loaded { phi, description })
}

fn axis_index(key: &str, d: usize) -> Result<usize, CliError> {
    let digits = key.strip_prefix("axis_").or_else(|| key.strip_prefix("axis")).unwrap_or(key);
    match digits.parse::<usize>() {
        Ok(i) if i < d => Ok(i),
        _ => Err(CliError::input(format!("bad axis key {key:?} for {d} axes"))),
    }
}

fn by_axis<T>(map: &BTreeMap<String, T>, d: usize) -> Result<Vec<Option<&T>>, CliError> {
    let mut out = vec![None; d];
    for (key, v) in map {
        out[axis_index(key, d)?] = Some(v);
    }
    Ok(out)
}

fn split_pair(pair: &str) -> Result<(&str, &str), CliError> {
    let parts: Vec<&str> = pair.split(|c: char| c == ',' || c.is_whitespace()).filter(|s| !s.is_empty()).collect();
    match parts.as_slice() {
        [a, b] => Ok((a, b)),
        _ => Err(CliError::input(format!("edge key {pair:?} must be two labels like \"a,b\""))),
    }
}

/// Reads `x,y=label` entries separated by `;` or whitespace.
pub fn parse_pattern(text: &str, alphabet: &Alphabet, d: usize) -> Result<Pattern, CliError> {
    let mut pairs = Vec::new();
    for entry in text.split(|c: char| c == ';' || c.is_whitespace()).filter(|s| !s.is_empty()) {
        let (coords, label) =
            entry.split_once('=').ok_or_else(|| CliError::input(format!("pattern entry {entry:?} is not `coords=label`")))?;
        let c: Vec<i64> = coords
            .split(',')
            .map(|t| t.trim().parse::<i64>())
            .collect::<Result<_, _>>()
            .map_err(|_| CliError::input(format!("bad coordinates in {entry:?}")))?;
        if c.len() != d {
            return Err(CliError::input(format!("site {coords:?} has {} coordinates, expected {d}", c.len())));
        }
        pairs.push((Site::new(&c)?, alphabet.index_of(label.trim())?));
    }
    Ok(Pattern::from_pairs(d, pairs)?)
}

/// The inverse of [`parse_pattern`].
pub fn format_pattern(p: &Pattern, alphabet: &Alphabet) -> String {
    p.iter()
        .map(|(s, a)| {
            let coords: Vec<String> = s.coords().iter().map(|c| c.to_string()).collect();
            format!("{}={}", coords.join(","), alphabet.label(a))
        })
        .collect::<Vec<_>>()
        .join(";")
}
