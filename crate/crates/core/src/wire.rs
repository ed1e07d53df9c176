//! JSON response shapes of the repository wire contract.
//!
//! ```text
//! GET /api/search?query=<urlencoded>   -> {"items":[<item>, ...]}
//! GET /api/items/<prefix>/<suffix>     -> <item>   (404 {"error":"not_found"})
//! GET /api/bitstreams/<id>/retrieve    -> raw bytes, Range honored
//! ```
//!
//! An item is
//! `{"id":..,"handle":..,"metadata":[{"key":..,"value":..,"language":..}],
//! "bitstreams":[{"name":..,"sizeBytes":..,"mediaType":..,"retrieveLink":..}]}`
//! with `language` omitted when unknown.

use serde::{Deserialize, Serialize};

use crate::error::ClientError;
use crate::model::{BitstreamRef, Handle, ItemRecord, MetadataField};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchResponse {
    pub items: Vec<WireItem>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WireItem {
    pub id: String,
    pub handle: String,
    pub metadata: Vec<WireMetadata>,
    pub bitstreams: Vec<WireBitstream>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WireMetadata {
    pub key: String,
    pub value: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub language: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct WireBitstream {
    pub name: String,
    pub size_bytes: u64,
    pub media_type: String,
    pub retrieve_link: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorBody {
    pub error: String,
}

impl WireItem {
    /// Validate and attach the originating repository name.
    pub fn into_record(self, server: &str) -> Result<ItemRecord, ClientError> {
        if self.id.trim().is_empty() {
            return Err(ClientError::Protocol("item with empty id".into()));
        }
        let handle = Handle::parse(&self.handle)
            .map_err(|_| ClientError::Protocol(format!("item {} has invalid handle {:?}", self.id, self.handle)))?;
        let mut metadata = Vec::with_capacity(self.metadata.len());
        for m in self.metadata {
            if m.key.is_empty() {
                return Err(ClientError::Protocol(format!(
                    "item {} has a metadata field without key",
                    self.id
                )));
            }
            metadata.push(MetadataField {
                key: m.key,
                value: m.value,
                language: m.language.filter(|l| !l.is_empty()),
                translated_from: None,
            });
        }
        let mut bitstreams = Vec::with_capacity(self.bitstreams.len());
        for b in self.bitstreams {
            if b.name.is_empty() {
                return Err(ClientError::Protocol(format!(
                    "item {} has a bitstream without name",
                    self.id
                )));
            }
            bitstreams.push(BitstreamRef {
                name: b.name,
                size_bytes: b.size_bytes,
                media_type: b.media_type,
                retrieve_url: b.retrieve_link,
            });
        }
        Ok(ItemRecord {
            id: self.id,
            handle,
            server: server.to_string(),
            metadata,
            bitstreams,
        })
    }
}

impl From<&ItemRecord> for WireItem {
    fn from(item: &ItemRecord) -> Self {
        WireItem {
            id: item.id.clone(),
            handle: item.handle.to_string(),
            metadata: item
                .metadata
                .iter()
                .map(|m| WireMetadata {
                    key: m.key.clone(),
                    value: m.value.clone(),
                    language: m.language.clone(),
                })
                .collect(),
            bitstreams: item
                .bitstreams
                .iter()
                .map(|b| WireBitstream {
                    name: b.name.clone(),
                    size_bytes: b.size_bytes,
                    media_type: b.media_type.clone(),
                    retrieve_link: b.retrieve_url.clone(),
                })
                .collect(),
        }
    }
}

/// Decode a search response body into records owned by `server`.
pub fn decode_search(body: &[u8], server: &str) -> Result<Vec<ItemRecord>, ClientError> {
    let resp: SearchResponse =
        serde_json::from_slice(body).map_err(|e| ClientError::Protocol(format!("search response: {e}")))?;
    resp.items.into_iter().map(|i| i.into_record(server)).collect()
}

/// Decode a single-item response body.
pub fn decode_item(body: &[u8], server: &str) -> Result<ItemRecord, ClientError> {
    let item: WireItem =
        serde_json::from_slice(body).map_err(|e| ClientError::Protocol(format!("item response: {e}")))?;
    item.into_record(server)
}

#[cfg(test)]
mod tests {
    use super::*;

    const ITEM: &str = r#"{"id":"1","handle":"11303/1","metadata":[{"key":"dc.title","value":"T","language":"en"},{"key":"dc.date.issued","value":"2020"}],"bitstreams":[{"name":"f.csv","sizeBytes":123,"mediaType":"text/csv","retrieveLink":"/api/bitstreams/x/retrieve"}]}"#;

    #[test]
    fn wire_shape_is_bit_exact() {
        let rec = decode_item(ITEM.as_bytes(), "s").unwrap();
        assert_eq!(rec.server, "s");
        assert_eq!(rec.bitstreams[0].size_bytes, 123);
        let back = serde_json::to_string(&WireItem::from(&rec)).unwrap();
        assert_eq!(back, ITEM);
    }

    #[test]
    fn rejects_invalid_records() {
        let bad_handle = ITEM.replace("11303/1", "nope");
        assert!(matches!(
            decode_item(bad_handle.as_bytes(), "s"),
            Err(ClientError::Protocol(_))
        ));
        let empty_id = ITEM.replace(r#""id":"1""#, r#""id":" ""#);
        assert!(decode_item(empty_id.as_bytes(), "s").is_err());
        assert!(decode_search(b"{\"items\":3}", "s").is_err());
        assert!(decode_search(b"not json", "s").is_err());
        assert_eq!(decode_search(b"{\"items\":[]}", "s").unwrap(), vec![]);
    }
}
