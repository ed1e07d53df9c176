use std::fs::{self, File};
use std::io::{self, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::RepoClient;
use crate::error::ClientError;
use crate::model::{BitstreamRef, Handle, ItemRecord};

/// Written next to the downloaded files.
pub const MANIFEST_FILE_NAME: &str = "odrk-manifest.txt";
const MANIFEST_MAGIC: &str = "# odrk download manifest v1";
/// The only checksum function used in manifests.
pub const MANIFEST_HASH: &str = "sha256";

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FileSelector {
    One(String),
    All,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DownloadEntry {
    pub name: String,
    pub path: PathBuf,
    pub size_bytes: u64,
    /// Lowercase hex SHA-256 of the file contents.
    pub checksum: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DownloadManifest {
    pub item_handle: Handle,
    pub entries: Vec<DownloadEntry>,
}

impl DownloadManifest {
    /// Text form:
    ///
    /// ```text
    /// # odrk download manifest v1
    /// # item <handle>
    /// # hash sha256
    /// <hex>  <size>  <name>
    /// ```
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "{MANIFEST_MAGIC}\n# item {}\n# hash {MANIFEST_HASH}\n",
            self.item_handle
        );
        for e in &self.entries {
            out.push_str(&format!("{}  {}  {}\n", e.checksum, e.size_bytes, e.name));
        }
        out
    }

    /// Parse a manifest written by [`DownloadManifest::to_text`]; entry paths
    /// are resolved against `dir`.
    pub fn parse(text: &str, dir: &Path) -> Result<DownloadManifest, String> {
        let mut lines = text.lines();
        if lines.next() != Some(MANIFEST_MAGIC) {
            return Err("missing manifest header".into());
        }
        let handle = lines
            .next()
            .and_then(|l| l.strip_prefix("# item "))
            .ok_or("missing item line")?;
        let item_handle = Handle::parse(handle).map_err(|e| e.to_string())?;
        match lines.next().and_then(|l| l.strip_prefix("# hash ")) {
            Some(MANIFEST_HASH) => {}
            Some(other) => return Err(format!("unsupported hash {other:?}")),
            None => return Err("missing hash line".into()),
        }
        let mut entries = Vec::new();
        for (n, line) in lines.enumerate() {
            let bad = || format!("entry line {}: {line:?}", n + 1);
            let mut parts = line.splitn(3, "  ");
            let checksum = parts.next().ok_or_else(bad)?;
            let size = parts.next().ok_or_else(bad)?;
            let name = parts.next().ok_or_else(bad)?;
            if checksum.len() != 64 || !checksum.bytes().all(|b| matches!(b, b'0'..=b'9' | b'a'..=b'f')) {
                return Err(bad());
            }
            let size_bytes = size.parse().map_err(|_| bad())?;
            check_file_name(name).map_err(|_| bad())?;
            entries.push(DownloadEntry {
                name: name.to_string(),
                path: dir.join(name),
                size_bytes,
                checksum: checksum.to_string(),
            });
        }
        Ok(DownloadManifest { item_handle, entries })
    }

    /// Re-hash every saved file; returns the names whose size or checksum
    /// no longer match.
    pub fn verify(&self) -> io::Result<Vec<String>> {
        let mut bad = Vec::new();
        for e in &self.entries {
            let (sum, len) = sha256_file(&e.path)?;
            if sum != e.checksum || len != e.size_bytes {
                bad.push(e.name.clone());
            }
        }
        Ok(bad)
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Checksum and length of a file on disk.
pub fn sha256_file(path: &Path) -> io::Result<(String, u64)> {
    let mut hasher = Sha256::new();
    let mut file = File::open(path)?;
    let len = io::copy(&mut file, &mut hasher)?;
    Ok((hex::encode(hasher.finalize()), len))
}

/// Bitstream names come from the server; refuse anything that could escape
/// the target directory.
fn check_file_name(name: &str) -> Result<(), ClientError> {
    let unsafe_name = name.is_empty()
        || name == "."
        || name == ".."
        || name.contains(['/', '\\'])
        || name.chars().any(char::is_control);
    if unsafe_name {
        return Err(ClientError::Protocol(format!("unsafe bitstream name {name:?}")));
    }
    Ok(())
}

struct HashingWriter<W> {
    inner: W,
    hasher: Sha256,
    written: u64,
}

impl<W: Write> Write for HashingWriter<W> {
    fn write(&mut self, buf: &[u8]) -> io::Result<usize> {
        let n = self.inner.write(buf)?;
        self.hasher.update(&buf[..n]);
        self.written += n as u64;
        Ok(n)
    }

    fn flush(&mut self) -> io::Result<()> {
        self.inner.flush()
    }
}

impl RepoClient {
    /// Save the selected bitstreams under `dest_dir/<handle with / as _>/`
    /// and write a checksum manifest alongside them.
    pub fn download(
        &self,
        item: &ItemRecord,
        selector: &FileSelector,
        dest_dir: &Path,
        overwrite: bool,
    ) -> Result<DownloadManifest, ClientError> {
        let selected: Vec<&BitstreamRef> = match selector {
            FileSelector::One(name) => vec![item
                .bitstream(name)
                .ok_or_else(|| ClientError::NoSuchFile(name.clone()))?],
            FileSelector::All => item.bitstreams.iter().collect(),
        };
        for bs in &selected {
            check_file_name(&bs.name)?;
        }
        if !dest_dir.is_dir() {
            return Err(ClientError::io(
                dest_dir,
                io::Error::new(io::ErrorKind::NotFound, "destination directory does not exist"),
            ));
        }
        let item_dir = dest_dir.join(item.handle.dir_name());
        if !overwrite {
            if let Some(existing) = selected.iter().map(|bs| item_dir.join(&bs.name)).find(|p| p.exists()) {
                return Err(ClientError::FileExists(existing));
            }
        }
        fs::create_dir_all(&item_dir).map_err(|e| ClientError::io(&item_dir, e))?;

        let mut entries = Vec::with_capacity(selected.len());
        for bs in selected {
            entries.push(self.save_bitstream(bs, &item_dir)?);
        }
        let manifest = DownloadManifest {
            item_handle: item.handle.clone(),
            entries,
        };
        let manifest_path = item_dir.join(MANIFEST_FILE_NAME);
        fs::write(&manifest_path, manifest.to_text()).map_err(|e| ClientError::io(&manifest_path, e))?;
        Ok(manifest)
    }

    fn save_bitstream(&self, bs: &BitstreamRef, dir: &Path) -> Result<DownloadEntry, ClientError> {
        let target = dir.join(&bs.name);
        let partial = dir.join(format!(".{}.part", bs.name));
        let mut reader = self.open_bitstream(bs)?;
        let file = File::create(&partial).map_err(|e| ClientError::io(&partial, e))?;
        let mut writer = HashingWriter {
            inner: BufWriter::new(file),
            hasher: Sha256::new(),
            written: 0,
        };
        let copied = copy_body(&mut reader, &mut writer);
        let flushed = copied.and_then(|_| Write::flush(&mut writer).map_err(CopyError::Write));
        if let Err(e) = flushed {
            let _ = fs::remove_file(&partial);
            return Err(match e {
                CopyError::Read(e) => ClientError::Unreachable {
                    repository: self.endpoint().name().to_string(),
                    reason: e.to_string(),
                },
                CopyError::Write(e) => ClientError::io(&partial, e),
            });
        }
        if writer.written != bs.size_bytes {
            let _ = fs::remove_file(&partial);
            return Err(ClientError::Protocol(format!(
                "{}: declared {} bytes, received {}",
                bs.name, bs.size_bytes, writer.written
            )));
        }
        let checksum = hex::encode(writer.hasher.finalize());
        fs::rename(&partial, &target).map_err(|e| ClientError::io(&target, e))?;
        Ok(DownloadEntry {
            name: bs.name.clone(),
            path: target,
            size_bytes: bs.size_bytes,
            checksum,
        })
    }
}

enum CopyError {
    Read(io::Error),
    Write(io::Error),
}

impl From<io::Error> for CopyError {
    fn from(e: io::Error) -> Self {
        CopyError::Write(e)
    }
}

fn copy_body(reader: &mut dyn Read, writer: &mut dyn Write) -> Result<(), CopyError> {
    let mut buf = [0u8; 64 * 1024];
    loop {
        let n = match reader.read(&mut buf) {
            Ok(0) => return Ok(()),
            Ok(n) => n,
            Err(e) if e.kind() == io::ErrorKind::Interrupted => continue,
            Err(e) => return Err(CopyError::Read(e)),
        };
        writer.write_all(&buf[..n])?;
    }
}
