use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::orchestrator::Trainer;
use crate::{Error, Result};

pub const CHECKPOINT_VERSION: u32 = 1;
const MAGIC: [u8; 8] = *b"AUTOTCKP";

#[derive(Serialize, Deserialize)]
struct Header {
    magic: [u8; 8],
    version: u32,
    config_hash: String,
}

/// Writes the full trainer state: a header with format version and config
/// hash, then the bincode-encoded trainer. The file is replaced atomically.
pub fn save(trainer: &Trainer, path: &Path) -> Result<()> {
    let tmp = path.with_extension("tmp");
    {
        let mut out = BufWriter::new(File::create(&tmp)?);
        let header = Header { magic: MAGIC, version: CHECKPOINT_VERSION, config_hash: trainer.cfg.hash() };
        bincode::serialize_into(&mut out, &header).map_err(|e| Error::Checkpoint(e.to_string()))?;
        bincode::serialize_into(&mut out, trainer).map_err(|e| Error::Checkpoint(e.to_string()))?;
        out.flush()?;
    }
    std::fs::rename(&tmp, path)?;
    Ok(())
}

/// Reads the version and config hash without decoding the trainer.
pub fn peek(path: &Path) -> Result<(u32, String)> {
    let mut input = BufReader::new(File::open(path)?);
    let header = read_header(&mut input)?;
    Ok((header.version, header.config_hash))
}

fn read_header(input: &mut impl std::io::Read) -> Result<Header> {
    let header: Header = bincode::deserialize_from(input).map_err(|e| Error::Checkpoint(format!("unreadable header: {e}")))?;
    if header.magic != MAGIC {
        return Err(Error::Checkpoint("not a checkpoint file".into()));
    }
    if header.version != CHECKPOINT_VERSION {
        return Err(Error::Checkpoint(format!("unsupported checkpoint version {}", header.version)));
    }
    Ok(header)
}

/// Loads a trainer. With `expected_hash`, a differing config hash is an
/// error unless `force` is set.
pub fn load(path: &Path, expected_hash: Option<&str>, force: bool) -> Result<Trainer> {
    let mut input = BufReader::new(File::open(path).map_err(|e| Error::Checkpoint(format!("{}: {e}", path.display())))?);
    let header = read_header(&mut input)?;
    if let Some(h) = expected_hash {
        if h != header.config_hash && !force {
            return Err(Error::Checkpoint(format!("config hash {} does not match checkpoint {}", h, header.config_hash)));
        }
    }
    let mut trainer: Trainer = bincode::deserialize_from(&mut input).map_err(|e| Error::Checkpoint(e.to_string()))?;
    trainer.reindex();
    Ok(trainer)
}
