//! Multi-task datasets and their JSON document form.

use std::collections::BTreeSet;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::warp::{online_map, warp_output, OutputWarping};
use crate::error::{Error, Result};
use crate::gp::ObservationSet;
use crate::space::SearchSpace;

/// One stored trial in native units.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RawTrial {
    pub x: Vec<f64>,
    #[serde(default)]
    pub y: Option<f64>,
    pub feasible: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TaskDocument {
    pub name: String,
    pub points: Vec<RawTrial>,
}

/// On-disk dataset layout.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetDocument {
    pub search_space: SearchSpace,
    #[serde(default, skip_serializing_if = "is_default_warping")]
    pub output_warping: OutputWarping,
    pub tasks: Vec<TaskDocument>,
}

fn is_default_warping(w: &OutputWarping) -> bool {
    *w == OutputWarping::None
}

/// A task's warped observations plus the raw trials they came from.
#[derive(Debug, Clone, PartialEq)]
pub struct Task {
    pub name: String,
    pub observations: ObservationSet,
    pub raw: Vec<RawTrial>,
}

/// `N` related tasks over one search space.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiTaskDataset {
    pub search_space: SearchSpace,
    pub output_warping: OutputWarping,
    pub tasks: Vec<Task>,
}

impl MultiTaskDataset {
    /// Validates a document and applies input and output warping.
    pub fn from_document(doc: DatasetDocument) -> Result<Self> {
        doc.search_space.validate()?;
        if doc.tasks.is_empty() {
            return Err(Error::validation("dataset has no tasks"));
        }
        let mut names = BTreeSet::new();
        let mut tasks = Vec::with_capacity(doc.tasks.len());
        for t in doc.tasks {
            if !names.insert(t.name.clone()) {
                return Err(Error::validation(format!("duplicate task name `{}`", t.name)));
            }
            let observations = warp_task(&doc.search_space, doc.output_warping, &t.points)
                .map_err(|e| e.in_task(&t.name))?;
            tasks.push(Task { name: t.name, observations, raw: t.points });
        }
        Ok(Self { search_space: doc.search_space, output_warping: doc.output_warping, tasks })
    }

    /// Builds a dataset from already-warped observations (no output warping).
    pub fn from_observations(search_space: SearchSpace, tasks: Vec<(String, ObservationSet)>) -> Result<Self> {
        let doc_tasks = tasks
            .iter()
            .map(|(name, obs)| {
                let points = obs
                    .xs
                    .iter()
                    .zip(&obs.ys)
                    .map(|(x, &y)| Ok(RawTrial { x: search_space.unwarp(x)?, y: Some(y), feasible: true }))
                    .collect::<Result<Vec<_>>>()?;
                Ok(TaskDocument { name: name.clone(), points })
            })
            .collect::<Result<Vec<_>>>()?;
        let mut ds = Self::from_document(DatasetDocument {
            search_space,
            output_warping: OutputWarping::None,
            tasks: doc_tasks,
        })?;
        // Keep the exact warped inputs rather than warp(unwarp(x)).
        for (task, (_, obs)) in ds.tasks.iter_mut().zip(tasks) {
            task.observations = obs;
        }
        Ok(ds)
    }

    pub fn to_document(&self) -> DatasetDocument {
        DatasetDocument {
            search_space: self.search_space.clone(),
            output_warping: self.output_warping,
            tasks: self.tasks.iter().map(|t| TaskDocument { name: t.name.clone(), points: t.raw.clone() }).collect(),
        }
    }

    pub fn n_tasks(&self) -> usize {
        self.tasks.len()
    }

    pub fn dim(&self) -> usize {
        self.search_space.d()
    }

    pub fn task(&self, name: &str) -> Option<&Task> {
        self.tasks.iter().find(|t| t.name == name)
    }

    /// All tasks except those for which `exclude` returns true.
    pub fn without(&self, exclude: impl Fn(&str) -> bool) -> Self {
        Self {
            search_space: self.search_space.clone(),
            output_warping: self.output_warping,
            tasks: self.tasks.iter().filter(|t| !exclude(&t.name)).cloned().collect(),
        }
    }

    pub fn all_ys(&self) -> impl Iterator<Item = f64> + '_ {
        self.tasks.iter().flat_map(|t| t.observations.ys.iter().cloned())
    }
}

fn warp_task(space: &SearchSpace, warping: OutputWarping, points: &[RawTrial]) -> Result<ObservationSet> {
    for p in points {
        if p.feasible && !p.y.is_some_and(f64::is_finite) {
            return Err(Error::validation("feasible trial needs a finite y"));
        }
    }
    let ys: Vec<Option<f64>> = points.iter().map(|p| if p.feasible { p.y } else { None }).collect();
    let mapped: Vec<Option<f64>> = match warping {
        OutputWarping::None => ys,
        OutputWarping::NegLog => ys.iter().map(|y| y.map(warp_output).transpose()).collect::<Result<_>>()?,
        OutputWarping::Softplus => {
            if ys.iter().all(Option::is_none) {
                return Err(Error::validation("task has no feasible trial"));
            }
            online_map(&ys)?.into_iter().map(Some).collect()
        }
    };
    let mut obs = ObservationSet::default();
    for (p, y) in points.iter().zip(mapped) {
        let x = space.warp(&p.x)?;
        if let Some(y) = y {
            obs.push(x, y);
        }
    }
    Ok(obs)
}

pub fn load_dataset(path: impl AsRef<Path>) -> Result<MultiTaskDataset> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Io { path: path.display().to_string(), message: e.to_string() })?;
    parse_dataset(&text, &path.display().to_string())
}

pub fn parse_dataset(text: &str, path: &str) -> Result<MultiTaskDataset> {
    let doc: DatasetDocument = serde_json::from_str(text).map_err(|e| Error::Parse {
        path: path.to_string(),
        field: format!("line {} column {}", e.line(), e.column()),
        message: e.to_string(),
    })?;
    MultiTaskDataset::from_document(doc)
}

pub fn dataset_to_string(dataset: &MultiTaskDataset) -> String {
    let mut s = serde_json::to_string_pretty(&dataset.to_document()).expect("dataset documents serialize");
    s.push('\n');
    s
}

pub fn save_dataset(dataset: &MultiTaskDataset, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, dataset_to_string(dataset))
        .map_err(|e| Error::Io { path: path.display().to_string(), message: e.to_string() })
}
