//! Acceptance check for the service: ingest the known series in two
//! batches over real HTTP, read the clustering back, hard-kill and restart
//! the server, and require a byte-identical response from the replayed log.

use std::io::{BufRead, BufReader, Read, Write};
use std::net::TcpStream;
use std::process::{Child, Command, Stdio};
use std::time::Duration;

struct Server {
    child: Child,
    addr: String,
}

impl Server {
    fn spawn(data_dir: &std::path::Path) -> Server {
        let mut child = Command::new(env!("CARGO_BIN_EXE_evclust-serve"))
            .args([
                "--listen",
                "127.0.0.1:0",
                "--data-dir",
                data_dir.to_str().unwrap(),
            ])
            .stdout(Stdio::null())
            .stderr(Stdio::piped())
            .spawn()
            .expect("server starts");

        // The first stderr line reports the bound address.
        let stderr = child.stderr.take().expect("piped");
        let mut line = String::new();
        BufReader::new(stderr).read_line(&mut line).expect("startup line");
        let addr = line
            .strip_prefix("listening on ")
            .and_then(|rest| rest.split_whitespace().next())
            .unwrap_or_else(|| panic!("unexpected startup line: {line:?}"))
            .to_string();
        Server { child, addr }
    }

    fn request(&self, method: &str, path: &str, body: Option<&str>) -> (u16, String) {
        let mut stream = TcpStream::connect(&self.addr).expect("connect");
        stream
            .set_read_timeout(Some(Duration::from_secs(10)))
            .expect("timeout");
        let body = body.unwrap_or("");
        let request = format!(
            "{method} {path} HTTP/1.1\r\nhost: {}\r\ncontent-type: application/json\r\n\
             content-length: {}\r\nconnection: close\r\n\r\n{body}",
            self.addr,
            body.len()
        );
        stream.write_all(request.as_bytes()).expect("send");
        let mut response = String::new();
        stream.read_to_string(&mut response).expect("receive");

        let status: u16 = response
            .split_whitespace()
            .nth(1)
            .and_then(|s| s.parse().ok())
            .unwrap_or_else(|| panic!("bad response: {response:?}"));
        let payload = response
            .split_once("\r\n\r\n")
            .map(|(_, b)| b.to_string())
            .unwrap_or_default();
        (status, payload)
    }

    fn kill(mut self) {
        let _ = self.child.kill();
        let _ = self.child.wait();
    }
}

impl Drop for Server {
    fn drop(&mut self) {
        let _ = self.child.kill();
        let _ = self.child.wait();
    }
}

#[test]
fn a08_service_round_trip() {
    let dir = tempfile::tempdir().unwrap();

    let server = Server::spawn(dir.path());
    let (status, body) = server.request(
        "POST",
        "/streams/s1/events",
        Some("{\"events\":[-20,-18,1,2,2.9,10,11]}"),
    );
    assert_eq!(status, 200, "{body}");
    assert_eq!(body, "{\"accepted\":7}");

    let (status, body) = server.request(
        "POST",
        "/streams/s1/events",
        Some("{\"events\":[100,200,202,202,203]}"),
    );
    assert_eq!(status, 200, "{body}");
    assert_eq!(body, "{\"accepted\":5}");

    let (status, first_read) = server.request("GET", "/streams/s1/clusters?delta_t=10", None);
    assert_eq!(status, 200, "{first_read}");
    let document: serde_json::Value = serde_json::from_str(&first_read).unwrap();
    assert_eq!(document["delta_t"], 10.0);
    assert_eq!(
        document["clusters"],
        serde_json::json!([[-20.0, -18.0], [1.0, 11.0], [200.0, 203.0]])
    );
    assert_eq!(document["isolated"], serde_json::json!([100.0]));
    assert_eq!(
        document["gaps"],
        serde_json::json!([[-18.0, 1.0], [11.0, 200.0]])
    );

    // Hard restart: the acknowledged state must replay from the log and the
    // response must not change by a single byte.
    server.kill();
    let server = Server::spawn(dir.path());
    let (status, second_read) = server.request("GET", "/streams/s1/clusters?delta_t=10", None);
    assert_eq!(status, 200, "{second_read}");
    assert_eq!(second_read, first_read);

    // An out-of-order batch is rejected whole with no state change.
    let (status, body) = server.request(
        "POST",
        "/streams/s1/events",
        Some("{\"events\":[5,300]}"),
    );
    assert_eq!(status, 409, "{body}");
    let error: serde_json::Value = serde_json::from_str(&body).unwrap();
    assert_eq!(error["error"], "out_of_order_append");

    let (status, third_read) = server.request("GET", "/streams/s1/clusters?delta_t=10", None);
    assert_eq!(status, 200);
    assert_eq!(third_read, first_read);

    println!("acceptance a08 service round trip: PASS");
}
