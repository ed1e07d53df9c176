use std::io::{self, Read, Write};
use std::net::{Shutdown, SocketAddr, TcpListener, TcpStream, ToSocketAddrs};
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::sync::Arc;
use std::thread::{self, JoinHandle};
use std::time::Duration;

use rand::Rng;
use url::form_urlencoded;

use crate::range::parse_range_header;
use crate::{bitstream_id, FixtureSet};

const MAX_HEAD: usize = 64 * 1024;

/// Behaviour switches. All can be changed while the server runs.
#[derive(Debug, Clone)]
pub struct MockOptions {
    pub range_supported: bool,
    /// Drop every connection without answering.
    pub fail_all: bool,
    pub latency_ms: u64,
    /// Extra random delay, uniform in `0..=jitter_ms`.
    pub jitter_ms: u64,
}

impl Default for MockOptions {
    fn default() -> Self {
        MockOptions {
            range_supported: true,
            fail_all: false,
            latency_ms: 0,
            jitter_ms: 0,
        }
    }
}

#[derive(Debug)]
struct Flags {
    range_supported: AtomicBool,
    fail_all: AtomicBool,
    latency_ms: AtomicU64,
    jitter_ms: AtomicU64,
    stop: AtomicBool,
    requests: AtomicU64,
}

struct Shared {
    fixture: FixtureSet,
    flags: Flags,
}

/// A running mock repository. Stops when dropped.
pub struct MockServer {
    addr: SocketAddr,
    shared: Arc<Shared>,
    accept: Option<JoinHandle<()>>,
}

impl MockServer {
    /// Serve on an ephemeral localhost port.
    pub fn start(fixture: FixtureSet, options: MockOptions) -> io::Result<MockServer> {
        MockServer::bind(fixture, options, "127.0.0.1:0")
    }

    pub fn bind(fixture: FixtureSet, options: MockOptions, addr: impl ToSocketAddrs) -> io::Result<MockServer> {
        let listener = TcpListener::bind(addr)?;
        let addr = listener.local_addr()?;
        let shared = Arc::new(Shared {
            fixture,
            flags: Flags {
                range_supported: AtomicBool::new(options.range_supported),
                fail_all: AtomicBool::new(options.fail_all),
                latency_ms: AtomicU64::new(options.latency_ms),
                jitter_ms: AtomicU64::new(options.jitter_ms),
                stop: AtomicBool::new(false),
                requests: AtomicU64::new(0),
            },
        });
        let s = Arc::clone(&shared);
        let accept = thread::Builder::new()
            .name(format!("mock-{}", addr.port()))
            .spawn(move || accept_loop(listener, s))?;
        Ok(MockServer {
            addr,
            shared,
            accept: Some(accept),
        })
    }

    pub fn addr(&self) -> SocketAddr {
        self.addr
    }

    pub fn base_url(&self) -> String {
        format!("http://{}", self.addr)
    }

    pub fn fixture(&self) -> &FixtureSet {
        &self.shared.fixture
    }

    pub fn set_range_supported(&self, on: bool) {
        self.shared.flags.range_supported.store(on, Ordering::SeqCst);
    }

    pub fn set_fail_all(&self, on: bool) {
        self.shared.flags.fail_all.store(on, Ordering::SeqCst);
    }

    pub fn set_latency(&self, latency_ms: u64, jitter_ms: u64) {
        self.shared.flags.latency_ms.store(latency_ms, Ordering::SeqCst);
        self.shared.flags.jitter_ms.store(jitter_ms, Ordering::SeqCst);
    }

    /// Requests received so far, including dropped ones.
    pub fn request_count(&self) -> u64 {
        self.shared.flags.requests.load(Ordering::SeqCst)
    }

    /// Block until the server is stopped from elsewhere (used by the binary).
    pub fn wait(mut self) {
        if let Some(h) = self.accept.take() {
            let _ = h.join();
        }
    }

    pub fn stop(mut self) {
        self.shutdown();
    }

    fn shutdown(&mut self) {
        self.shared.flags.stop.store(true, Ordering::SeqCst);
        // wake the blocking accept
        let _ = TcpStream::connect(self.addr);
        if let Some(h) = self.accept.take() {
            let _ = h.join();
        }
    }
}

impl Drop for MockServer {
    fn drop(&mut self) {
        self.shutdown();
    }
}

fn accept_loop(listener: TcpListener, shared: Arc<Shared>) {
    for conn in listener.incoming() {
        if shared.flags.stop.load(Ordering::SeqCst) {
            break;
        }
        let Ok(stream) = conn else { continue };
        let s = Arc::clone(&shared);
        thread::spawn(move || {
            let _ = handle(stream, &s);
        });
    }
}

struct Response {
    status: u16,
    reason: &'static str,
    headers: Vec<(&'static str, String)>,
    body: Vec<u8>,
}

impl Response {
    fn json(status: u16, reason: &'static str, body: Vec<u8>) -> Response {
        Response {
            status,
            reason,
            headers: vec![("Content-Type", "application/json".into())],
            body,
        }
    }

    fn error(status: u16, reason: &'static str, code: &str) -> Response {
        Response::json(status, reason, format!("{{\"error\":\"{code}\"}}").into_bytes())
    }
}

fn read_head(stream: &mut TcpStream) -> io::Result<Vec<u8>> {
    let mut buf = Vec::new();
    let mut chunk = [0u8; 4096];
    loop {
        let n = stream.read(&mut chunk)?;
        if n == 0 {
            return Ok(buf);
        }
        buf.extend_from_slice(&chunk[..n]);
        if buf.windows(4).any(|w| w == b"\r\n\r\n") || buf.len() > MAX_HEAD {
            return Ok(buf);
        }
    }
}

fn handle(mut stream: TcpStream, shared: &Shared) -> io::Result<()> {
    stream.set_read_timeout(Some(Duration::from_secs(10)))?;
    let head = read_head(&mut stream)?;
    let flags = &shared.flags;
    flags.requests.fetch_add(1, Ordering::SeqCst);
    if flags.fail_all.load(Ordering::SeqCst) {
        return stream.shutdown(Shutdown::Both);
    }
    let delay = flags.latency_ms.load(Ordering::SeqCst);
    let jitter = flags.jitter_ms.load(Ordering::SeqCst);
    let wait = delay
        + if jitter > 0 {
            rand::thread_rng().gen_range(0..=jitter)
        } else {
            0
        };
    if wait > 0 {
        thread::sleep(Duration::from_millis(wait));
    }

    let mut headers = [httparse::EMPTY_HEADER; 32];
    let mut req = httparse::Request::new(&mut headers);
    let resp = match req.parse(&head) {
        Ok(httparse::Status::Complete(_)) => {
            let range = req
                .headers
                .iter()
                .find(|h| h.name.eq_ignore_ascii_case("range"))
                .and_then(|h| std::str::from_utf8(h.value).ok());
            match (req.method, req.path) {
                (Some("GET"), Some(path)) => route(shared, path, range),
                _ => Response::error(405, "Method Not Allowed", "method_not_allowed"),
            }
        }
        _ => Response::error(400, "Bad Request", "bad_request"),
    };
    write_response(&mut stream, resp)
}

fn write_response(stream: &mut TcpStream, resp: Response) -> io::Result<()> {
    let mut out = format!("HTTP/1.1 {} {}\r\n", resp.status, resp.reason).into_bytes();
    for (k, v) in &resp.headers {
        out.extend_from_slice(format!("{k}: {v}\r\n").as_bytes());
    }
    out.extend_from_slice(format!("Content-Length: {}\r\nConnection: close\r\n\r\n", resp.body.len()).as_bytes());
    stream.write_all(&out)?;
    stream.write_all(&resp.body)?;
    stream.flush()?;
    let _ = stream.shutdown(Shutdown::Write);
    Ok(())
}

fn route(shared: &Shared, target: &str, range: Option<&str>) -> Response {
    let (path, query) = target.split_once('?').unwrap_or((target, ""));
    let segments: Vec<&str> = path.trim_start_matches('/').split('/').collect();
    let fixture = &shared.fixture;
    match segments.as_slice() {
        ["api", "search"] => {
            let q = form_urlencoded::parse(query.as_bytes())
                .find(|(k, _)| k == "query")
                .map(|(_, v)| v.into_owned());
            match q {
                Some(q) if !q.trim().is_empty() => Response::json(200, "OK", fixture.search_body(&q)),
                _ => Response::error(400, "Bad Request", "empty_query"),
            }
        }
        ["api", "items", prefix, suffix] => match fixture.find(prefix, suffix) {
            Some(item) => Response::json(200, "OK", fixture.item_body(item)),
            None => Response::error(404, "Not Found", "not_found"),
        },
        ["api", "bitstreams", _, "retrieve"] => match bitstream_id(path).and_then(|id| fixture.file(id)) {
            Some(bytes) => retrieve(bytes, range, shared.flags.range_supported.load(Ordering::SeqCst)),
            None => Response::error(404, "Not Found", "not_found"),
        },
        _ => Response::error(404, "Not Found", "not_found"),
    }
}

fn retrieve(bytes: &[u8], range: Option<&str>, range_supported: bool) -> Response {
    let total = bytes.len() as u64;
    let mut headers = vec![("Content-Type", "application/octet-stream".to_string())];
    if range_supported {
        headers.push(("Accept-Ranges", "bytes".into()));
        if let Some(spec) = range.and_then(parse_range_header) {
            return match spec.resolve(total) {
                Some((start, end)) => {
                    headers.push(("Content-Range", format!("bytes {start}-{end}/{total}")));
                    Response {
                        status: 206,
                        reason: "Partial Content",
                        headers,
                        body: bytes[start as usize..=end as usize].to_vec(),
                    }
                }
                None => {
                    headers.push(("Content-Range", format!("bytes */{total}")));
                    Response {
                        status: 416,
                        reason: "Range Not Satisfiable",
                        headers,
                        body: Vec::new(),
                    }
                }
            };
        }
    }
    Response {
        status: 200,
        reason: "OK",
        headers,
        body: bytes.to_vec(),
    }
}
