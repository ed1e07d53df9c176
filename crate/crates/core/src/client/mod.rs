//! Blocking HTTP client for a single repository.
//!
//! Every request is a `GET`; nothing here mutates repository state.

mod download;
mod range;

use std::io::Read;

use url::form_urlencoded;

pub use download::{sha256_file, sha256_hex, DownloadEntry, DownloadManifest, FileSelector, MANIFEST_FILE_NAME};
pub use range::{parse_content_range, ByteWindow, ContentRange};

use crate::error::ClientError;
use crate::model::{BitstreamRef, Handle, ItemRecord, RepositoryEndpoint};
use crate::query;
use crate::wire;

/// Client bound to one endpoint. Cheap to clone and safe to share across
/// threads.
#[derive(Debug, Clone)]
pub struct RepoClient {
    endpoint: RepositoryEndpoint,
    agent: ureq::Agent,
}

impl RepoClient {
    pub fn new(endpoint: RepositoryEndpoint) -> Self {
        let agent = ureq::AgentBuilder::new()
            .timeout(endpoint.timeout())
            .redirects(5)
            .build();
        RepoClient { endpoint, agent }
    }

    pub fn endpoint(&self) -> &RepositoryEndpoint {
        &self.endpoint
    }

    fn unreachable(&self, reason: impl ToString) -> ClientError {
        ClientError::Unreachable {
            repository: self.endpoint.name().to_string(),
            reason: reason.to_string(),
        }
    }

    fn get(&self, url: &url::Url, range: Option<&str>) -> Result<ureq::Response, ClientError> {
        let mut req = self.agent.get(url.as_str());
        if let Some(token) = self.endpoint.auth_token() {
            req = req.set("Authorization", &format!("Bearer {token}"));
        }
        if let Some(range) = range {
            req = req.set("Range", range);
        }
        match req.call() {
            Ok(resp) => Ok(resp),
            Err(ureq::Error::Status(_, resp)) => Ok(resp),
            Err(ureq::Error::Transport(t)) => Err(self.unreachable(t)),
        }
    }

    fn read_body(&self, resp: ureq::Response) -> Result<Vec<u8>, ClientError> {
        let mut body = Vec::new();
        resp.into_reader()
            .read_to_end(&mut body)
            .map_err(|e| self.unreachable(e))?;
        Ok(body)
    }

    /// Keyword search. Results are re-filtered client-side with the shared
    /// match semantics and returned in ascending id order.
    pub fn search(&self, query: &str) -> Result<Vec<ItemRecord>, ClientError> {
        let tokens = query::query_tokens(query);
        if tokens.is_empty() {
            return Err(ClientError::EmptyQuery);
        }
        let encoded: String = form_urlencoded::byte_serialize(query.trim().as_bytes()).collect();
        let path = self.endpoint.search_path().replace("{query}", &encoded);
        let url = self.endpoint.resolve(&path)?;
        let resp = self.get(&url, None)?;
        let status = resp.status();
        if status != 200 {
            return Err(ClientError::Protocol(format!("search returned HTTP {status}")));
        }
        let body = self.read_body(resp)?;
        let mut items = wire::decode_search(&body, self.endpoint.name())?;
        items.retain(|i| query::matches(&tokens, &i.metadata));
        items.sort_by(|a, b| a.id.cmp(&b.id));
        Ok(items)
    }

    pub fn get_item(&self, handle: &str) -> Result<ItemRecord, ClientError> {
        let handle = Handle::parse(handle)?;
        let path = self
            .endpoint
            .item_path()
            .replace("{handle}", &format!("{}/{}", handle.prefix(), handle.suffix()));
        let url = self.endpoint.resolve(&path)?;
        let resp = self.get(&url, None)?;
        match resp.status() {
            200 => {}
            404 => return Err(ClientError::NotFound(handle.to_string())),
            other => return Err(ClientError::Protocol(format!("item lookup returned HTTP {other}"))),
        }
        let body = self.read_body(resp)?;
        let item = wire::decode_item(&body, self.endpoint.name())?;
        if item.handle != handle {
            return Err(ClientError::Protocol(format!(
                "asked for {handle}, server answered with {}",
                item.handle
            )));
        }
        Ok(item)
    }

    /// Bytes `[offset, min(offset + length, total))` of a bitstream.
    ///
    /// Sends `Range: bytes=<start>-<end>`. A `206` is taken as is; a `200`
    /// is sliced client-side when the endpoint allows range fallback and
    /// rejected with [`ClientError::RangeUnsupported`] otherwise.
    pub fn fetch_range(&self, bitstream: &BitstreamRef, offset: u64, length: u64) -> Result<ByteWindow, ClientError> {
        if length == 0 {
            return Err(ClientError::InvalidRange("length must be positive".into()));
        }
        let end = offset
            .checked_add(length - 1)
            .ok_or_else(|| ClientError::InvalidRange("range overflows".into()))?;
        let url = self.endpoint.resolve(&bitstream.retrieve_url)?;
        let resp = self.get(&url, Some(&format!("bytes={offset}-{end}")))?;
        match resp.status() {
            206 => {
                let cr = resp
                    .header("Content-Range")
                    .ok_or_else(|| ClientError::Protocol("206 without Content-Range".into()))
                    .and_then(|v| parse_content_range(v).map_err(ClientError::Protocol))?;
                let (start, last) = match cr {
                    ContentRange::Satisfied { start, end, .. } => (start, end),
                    ContentRange::Unsatisfied { .. } => {
                        return Err(ClientError::Protocol("206 with unsatisfied Content-Range".into()))
                    }
                };
                if start != offset || last > end {
                    return Err(ClientError::Protocol(format!(
                        "asked for bytes {offset}-{end}, got {start}-{last}"
                    )));
                }
                let total = cr.total();
                let body = self.read_body(resp)?;
                if body.len() as u64 != last - start + 1 {
                    return Err(ClientError::Protocol(
                        "partial body length disagrees with Content-Range".into(),
                    ));
                }
                ByteWindow::new(offset, total, body).map_err(ClientError::Protocol)
            }
            200 => {
                if !self.endpoint.range_fallback() {
                    return Err(ClientError::RangeUnsupported);
                }
                self.slice_full_body(resp, offset, length)
            }
            416 => {
                let total = resp
                    .header("Content-Range")
                    .and_then(|v| parse_content_range(v).ok())
                    .map(|cr| cr.total())
                    .unwrap_or(bitstream.size_bytes);
                if offset == total {
                    ByteWindow::new(offset, total, Vec::new()).map_err(ClientError::Protocol)
                } else {
                    Err(ClientError::InvalidRange(format!(
                        "offset {offset} beyond end of {total}-byte file"
                    )))
                }
            }
            404 => Err(ClientError::NoSuchFile(bitstream.name.clone())),
            other => Err(ClientError::Protocol(format!("range fetch returned HTTP {other}"))),
        }
    }

    fn slice_full_body(&self, resp: ureq::Response, offset: u64, length: u64) -> Result<ByteWindow, ClientError> {
        let declared: Option<u64> = resp.header("Content-Length").and_then(|v| v.trim().parse().ok());
        let mut reader = resp.into_reader();
        match declared {
            Some(total) => {
                if offset > total {
                    return Err(ClientError::InvalidRange(format!(
                        "offset {offset} beyond end of {total}-byte file"
                    )));
                }
                // Only read as far as needed; the rest of the body is dropped.
                std::io::copy(&mut (&mut reader).take(offset), &mut std::io::sink())
                    .map_err(|e| self.unreachable(e))?;
                let want = length.min(total - offset);
                let mut buf = Vec::with_capacity(want as usize);
                (&mut reader)
                    .take(want)
                    .read_to_end(&mut buf)
                    .map_err(|e| self.unreachable(e))?;
                if buf.len() as u64 != want {
                    return Err(self.unreachable("connection closed before end of body"));
                }
                ByteWindow::new(offset, total, buf).map_err(ClientError::Protocol)
            }
            None => {
                let mut body = Vec::new();
                reader.read_to_end(&mut body).map_err(|e| self.unreachable(e))?;
                let total = body.len() as u64;
                if offset > total {
                    return Err(ClientError::InvalidRange(format!(
                        "offset {offset} beyond end of {total}-byte file"
                    )));
                }
                let stop = offset.saturating_add(length).min(total);
                ByteWindow::new(offset, total, body[offset as usize..stop as usize].to_vec())
                    .map_err(ClientError::Protocol)
            }
        }
    }

    /// Whole bitstream as a streaming reader.
    pub fn open_bitstream(&self, bitstream: &BitstreamRef) -> Result<Box<dyn Read + Send>, ClientError> {
        let url = self.endpoint.resolve(&bitstream.retrieve_url)?;
        let resp = self.get(&url, None)?;
        match resp.status() {
            200 => Ok(Box::new(resp.into_reader())),
            404 => Err(ClientError::NoSuchFile(bitstream.name.clone())),
            other => Err(ClientError::Protocol(format!("retrieve returned HTTP {other}"))),
        }
    }

    /// Whole bitstream in memory.
    pub fn fetch_all(&self, bitstream: &BitstreamRef) -> Result<Vec<u8>, ClientError> {
        let mut body = Vec::new();
        self.open_bitstream(bitstream)?
            .read_to_end(&mut body)
            .map_err(|e| self.unreachable(e))?;
        Ok(body)
    }
}

/// Free-function form of [`RepoClient::search`].
pub fn search_repository(endpoint: &RepositoryEndpoint, query: &str) -> Result<Vec<ItemRecord>, ClientError> {
    RepoClient::new(endpoint.clone()).search(query)
}

/// Free-function form of [`RepoClient::get_item`].
pub fn get_item(endpoint: &RepositoryEndpoint, handle: &str) -> Result<ItemRecord, ClientError> {
    RepoClient::new(endpoint.clone()).get_item(handle)
}

/// Free-function form of [`RepoClient::fetch_range`].
pub fn fetch_range(
    endpoint: &RepositoryEndpoint,
    bitstream: &BitstreamRef,
    offset: u64,
    length: u64,
) -> Result<ByteWindow, ClientError> {
    RepoClient::new(endpoint.clone()).fetch_range(bitstream, offset, length)
}
