//! File helpers: transparent gzip input for edge lists and profile tables.

use std::fs::File;
use std::io::{BufRead, BufReader, Read};
use std::path::Path;

use flate2::read::MultiGzDecoder;

use crate::error::Result;
use crate::graph::{load_snapshot, NodeDictionary, Snapshot};
use crate::profile::{load_profiles, ProfileLoad};

/// Opens `path` for reading, decompressing when it ends in `.gz`.
pub fn open_input(path: &Path) -> Result<Box<dyn BufRead + Send>> {
    let file = File::open(path)?;
    let reader: Box<dyn Read + Send> = if path.extension().is_some_and(|e| e == "gz") {
        Box::new(MultiGzDecoder::new(file))
    } else {
        Box::new(file)
    };
    Ok(Box::new(BufReader::with_capacity(1 << 20, reader)))
}

pub fn load_snapshot_file(
    path: &Path,
    dictionary: &mut NodeDictionary,
    label: impl Into<String>,
) -> Result<Snapshot> {
    load_snapshot(open_input(path)?, dictionary, label)
}

pub fn load_profiles_file(path: &Path, dictionary: &NodeDictionary) -> Result<ProfileLoad> {
    load_profiles(open_input(path)?, dictionary)
}
