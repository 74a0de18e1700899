//! On-disk stage artifacts: atomic writes stamped with the config hash.
//!
//! Every artifact begins with a `# config_hash=<hex>` comment line.
//! Downstream stages refuse artifacts whose hash differs from the current
//! config unless forced. Writes go to a temp file in the same directory
//! followed by a rename.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};

pub const VOCAB: &str = "vocab.tsv";
pub const SENTENCES: &str = "sentences.txt";
pub const DOCS: &str = "docs.csv";
pub const WINE_META: &str = "wine_meta.csv";
pub const EMBEDDINGS: &str = "embeddings.txt";
pub const TFIDF: &str = "tfidf.csv";
pub const PROFILES: &str = "profiles.csv";
pub const PROFILES_AROMA: &str = "profiles_aroma.vec";
pub const PAIRINGS: &str = "pairings.csv";
pub const GRAPH_NODES: &str = "winegraph_nodes.csv";
pub const GRAPH_EDGES: &str = "winegraph_edges.csv";
pub const WALKS: &str = "walks.txt";
pub const NODE_EMBEDDINGS: &str = "node_embeddings.txt";
pub const NMI_REPORT: &str = "nmi_report.txt";
pub const PROJECTION: &str = "projection.csv";

/// Write an artifact atomically: temp file, hash header, body, rename.
pub fn write_artifact(
    path: &Path,
    config_hash: &str,
    body: impl FnOnce(&mut BufWriter<File>) -> Result<()>,
) -> Result<()> {
    if let Some(parent) = path.parent()
        && !parent.as_os_str().is_empty()
    {
        std::fs::create_dir_all(parent)?;
    }
    let tmp = tmp_path(path);
    let write = || -> Result<()> {
        let mut writer = BufWriter::new(File::create(&tmp)?);
        writeln!(writer, "# config_hash={config_hash}")?;
        body(&mut writer)?;
        writer.flush()?;
        Ok(())
    };
    if let Err(e) = write() {
        let _ = std::fs::remove_file(&tmp);
        return Err(e);
    }
    std::fs::rename(&tmp, path)?;
    Ok(())
}

fn tmp_path(path: &Path) -> PathBuf {
    let name = path
        .file_name()
        .map(|n| n.to_string_lossy().to_string())
        .unwrap_or_else(|| "artifact".to_string());
    path.with_file_name(format!(".{name}.tmp"))
}

/// Open an artifact, verifying its config hash. A missing file reports
/// the stage that produces it. The returned reader is positioned after
/// the hash header.
pub fn open_artifact(
    path: &Path,
    expected_hash: &str,
    force: bool,
    producing_stage: &'static str,
) -> Result<BufReader<File>> {
    if !path.exists() {
        return Err(Error::MissingPrerequisite {
            path: path.to_path_buf(),
            stage: producing_stage,
        });
    }
    let mut reader = BufReader::new(File::open(path)?);
    let mut first = String::new();
    reader.read_line(&mut first)?;
    match first.trim().strip_prefix("# config_hash=") {
        Some(found) if found != expected_hash && !force => Err(Error::data(format!(
            "{}: produced with config hash {found}, current is {expected_hash}; \
             re-run upstream stages or pass --force",
            path.display()
        ))),
        Some(_) => Ok(reader),
        // Hand-made file without a header: reopen from the start.
        None => Ok(BufReader::new(File::open(path)?)),
    }
}

/// Hash-check an artifact and hand back its path for readers that open
/// files themselves.
pub fn check_artifact(
    path: &Path,
    expected_hash: &str,
    force: bool,
    producing_stage: &'static str,
) -> Result<PathBuf> {
    open_artifact(path, expected_hash, force, producing_stage)?;
    Ok(path.to_path_buf())
}
