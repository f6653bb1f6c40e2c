//! Loading inputs and deriving the reduction stages every report works from.

use std::path::Path;

use triad_core::io::{load_profiles_file, load_snapshot_file};
use triad_core::profile::ProfileLoad;
use triad_core::sampler::{filter_by_location, reuse_seeds, SamplePlan, SequenceSample};
use triad_core::{NodeDictionary, Profiles, Snapshot, TypeMappingTable};

use crate::error::CliError;
use crate::manifest::Manifest;
use crate::Options;

pub struct Inputs {
    pub manifest: Manifest,
    pub dictionary: NodeDictionary,
    pub full: Vec<Snapshot>,
    pub profiles: Option<ProfileLoad>,
    pub mapping: TypeMappingTable,
    pub mapping_source: String,
}

impl Inputs {
    pub fn load(options: &Options) -> Result<Self, CliError> {
        let manifest = Manifest::load(&options.manifest)?;
        let (mapping, mapping_source) = match &options.mapping {
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| {
                    CliError::config(format!("cannot read mapping {}: {e}", path.display()))
                })?;
                let source = path.display().to_string();
                (TypeMappingTable::parse(&text, source.clone())?, source)
            }
            None => (TypeMappingTable::default(), "built-in".to_owned()),
        };

        let mut dictionary = NodeDictionary::new();
        let mut full = Vec::with_capacity(manifest.snapshots.len());
        for entry in &manifest.snapshots {
            let path = manifest.resolve(&entry.path);
            log::info!("loading snapshot {} from {}", entry.label, path.display());
            let snapshot = load_snapshot_file(&path, &mut dictionary, entry.label.clone())
                .map_err(|e| with_context(e, &path))?;
            full.push(snapshot);
        }
        triad_core::graph::validate_sequence(&full)?;

        let profiles = match &manifest.profiles {
            Some(p) => {
                let path = manifest.resolve(p);
                log::info!("loading profiles from {}", path.display());
                Some(load_profiles_file(&path, &dictionary).map_err(|e| with_context(e, &path))?)
            }
            None => None,
        };

        Ok(Inputs {
            manifest,
            dictionary,
            full,
            profiles,
            mapping,
            mapping_source,
        })
    }

    pub fn profiles(&self) -> Option<&Profiles> {
        self.profiles.as_ref().map(|p| &p.profiles)
    }

    pub fn node_name(&self, id: triad_core::NodeId) -> &str {
        self.dictionary.name(id).unwrap_or("?")
    }
}

fn with_context(e: triad_core::Error, path: &Path) -> CliError {
    let mut err = CliError::from(e);
    err.message = format!("{}: {}", path.display(), err.message);
    err
}

/// Full graphs, their location-filtered versions and the sampled triangle-graphs.
pub struct Stages {
    pub located: Option<Vec<Snapshot>>,
    pub sample: Option<SequenceSample>,
    pub locations_only: bool,
}

impl Stages {
    pub fn build(
        inputs: &Inputs,
        options: &Options,
        seeds: Option<usize>,
    ) -> Result<Self, CliError> {
        if options.locations_only && inputs.profiles().is_none() {
            return Err(CliError::config(
                "--locations-only needs a profiles entry in the manifest",
            ));
        }
        let located = inputs.profiles().map(|p| {
            inputs
                .full
                .iter()
                .map(|s| filter_by_location(s, p))
                .collect::<Vec<_>>()
        });
        let sample = match seeds {
            Some(seed_count) => {
                let plan = SamplePlan {
                    seed_count,
                    rng_seed: options.rng_seed,
                    location_filter: options.locations_only,
                };
                Some(reuse_seeds(&inputs.full, &plan, inputs.profiles())?)
            }
            None => None,
        };
        Ok(Stages {
            located,
            sample,
            locations_only: options.locations_only,
        })
    }

    /// The snapshots the census, transition and context reports analyse.
    pub fn analysed<'a>(&'a self, inputs: &'a Inputs) -> &'a [Snapshot] {
        if let Some(sample) = &self.sample {
            &sample.triangle_graphs
        } else if self.locations_only {
            self.located.as_deref().unwrap_or(&inputs.full)
        } else {
            &inputs.full
        }
    }

    /// (stage name, snapshot) pairs for snapshot `k`, full graph first.
    pub fn stages_at<'a>(
        &'a self,
        inputs: &'a Inputs,
        k: usize,
    ) -> Vec<(&'static str, &'a Snapshot)> {
        let mut out = vec![("full", &inputs.full[k])];
        if let Some(located) = &self.located {
            out.push(("locations only", &located[k]));
        }
        if let Some(sample) = &self.sample {
            out.push(("triangle-graph", &sample.triangle_graphs[k]));
        }
        out
    }
}
