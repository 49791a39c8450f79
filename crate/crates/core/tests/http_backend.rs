use std::io::{BufRead, BufReader, Read, Write};
use std::net::{TcpListener, TcpStream};
use std::sync::mpsc;
use std::thread;
use std::time::Duration;

use aise::corpus::{Occupation, Startup};
use aise::gateway::{
    Answer, Backend, BackendError, ChatRequest, Classifier, ClassifierConfig, HttpBackend,
    HttpConfig, PromptVariant, VerdictCache,
};

struct Captured {
    request_line: String,
    headers: Vec<String>,
    body: serde_json::Value,
}

fn read_request(stream: &mut TcpStream) -> Captured {
    let mut reader = BufReader::new(stream.try_clone().unwrap());
    let mut request_line = String::new();
    reader.read_line(&mut request_line).unwrap();
    let mut headers = Vec::new();
    let mut length = 0;
    loop {
        let mut line = String::new();
        reader.read_line(&mut line).unwrap();
        let line = line.trim_end().to_string();
        if line.is_empty() {
            break;
        }
        if let Some(v) = line.to_ascii_lowercase().strip_prefix("content-length:") {
            length = v.trim().parse().unwrap();
        }
        headers.push(line);
    }
    let mut body = vec![0; length];
    reader.read_exact(&mut body).unwrap();
    Captured {
        request_line: request_line.trim_end().to_string(),
        headers,
        body: serde_json::from_slice(&body).unwrap(),
    }
}

fn respond(stream: &mut TcpStream, status: u16, body: &str) {
    let reason = if status == 200 { "OK" } else { "Error" };
    write!(
        stream,
        "HTTP/1.1 {status} {reason}\r\nContent-Type: application/json\r\nContent-Length: {}\r\nConnection: close\r\n\r\n{body}",
        body.len()
    )
    .unwrap();
    stream.flush().unwrap();
}

/// Serves one scripted response per connection and forwards what it saw.
fn serve(script: Vec<(u16, String)>) -> (String, mpsc::Receiver<Captured>) {
    let listener = TcpListener::bind("127.0.0.1:0").unwrap();
    let url = format!("http://{}/v1", listener.local_addr().unwrap());
    let (tx, rx) = mpsc::channel();
    thread::spawn(move || {
        for (status, body) in script {
            let (mut stream, _) = listener.accept().unwrap();
            let captured = read_request(&mut stream);
            respond(&mut stream, status, &body);
            tx.send(captured).unwrap();
        }
    });
    (url, rx)
}

fn completion(text: &str) -> String {
    serde_json::json!({ "choices": [{ "index": 0, "message": { "role": "assistant", "content": text } }] })
        .to_string()
}

fn backend(url: &str, key_env: Option<&str>) -> HttpBackend {
    HttpBackend::new(&HttpConfig {
        base_url: url.to_string(),
        api_key_env: key_env.map(str::to_string),
        timeout: Duration::from_secs(5),
    })
}

#[test]
fn request_wire_format() {
    std::env::set_var("AISE_TEST_WIRE_KEY", "sekrit");
    let (url, rx) = serve(vec![(200, completion("Yes."))]);
    let b = backend(&url, Some("AISE_TEST_WIRE_KEY"));
    assert!(b.endpoint().ends_with("/v1/chat/completions"));
    let reply = b
        .complete(&ChatRequest::new("llama3-8b", "You are an AI specialist.", "question", 4))
        .unwrap();
    assert_eq!(reply, "Yes.");

    let seen = rx.recv().unwrap();
    assert_eq!(seen.request_line, "POST /v1/chat/completions HTTP/1.1");
    assert!(seen.headers.iter().any(|h| h == "authorization: Bearer sekrit" || h == "Authorization: Bearer sekrit"));
    assert_eq!(seen.body["model"], "llama3-8b");
    assert_eq!(seen.body["temperature"], 0.0);
    assert_eq!(seen.body["max_tokens"], 4);
    assert_eq!(seen.body["messages"][0]["role"], "system");
    assert_eq!(seen.body["messages"][0]["content"], "You are an AI specialist.");
    assert_eq!(seen.body["messages"][1]["role"], "user");
    assert_eq!(seen.body["messages"][1]["content"], "question");
}

#[test]
fn no_key_no_authorization_header() {
    let (url, rx) = serve(vec![(200, completion("no"))]);
    let b = backend(&url, Some("AISE_TEST_UNSET_KEY_VARIABLE"));
    assert_eq!(b.complete(&ChatRequest::new("m", "s", "u", 4)).unwrap(), "no");
    let seen = rx.recv().unwrap();
    assert!(!seen.headers.iter().any(|h| h.to_ascii_lowercase().starts_with("authorization")));
}

#[test]
fn status_and_protocol_errors() {
    let (url, _rx) = serve(vec![
        (429, "{\"error\": \"slow down\"}".into()),
        (401, "{}".into()),
        (200, "{\"choices\": []}".into()),
    ]);
    let b = backend(&url, None);
    let req = ChatRequest::new("m", "s", "u", 4);
    match b.complete(&req) {
        Err(e @ BackendError::Status { status: 429, .. }) => assert!(e.is_retryable()),
        other => panic!("{other:?}"),
    }
    match b.complete(&req) {
        Err(e @ BackendError::Status { status: 401, .. }) => assert!(!e.is_retryable()),
        other => panic!("{other:?}"),
    }
    assert!(matches!(b.complete(&req), Err(BackendError::Protocol(_))));
}

#[test]
fn classifier_retries_server_errors_then_caches() {
    let (url, rx) = serve(vec![
        (503, "{}".into()),
        (500, "{}".into()),
        (200, completion("YES")),
    ]);
    let b = backend(&url, None);
    let cache = VerdictCache::in_memory();
    let config = ClassifierConfig {
        backoff_base: Duration::from_millis(1),
        ..ClassifierConfig::default()
    };
    let classifier = Classifier::new(&b, &cache, config);
    let startup = Startup {
        startup_id: "s".into(),
        name: "S".into(),
        short_desc: "short".into(),
        long_desc: "Automates filing.".into(),
        year: None,
        tags: Default::default(),
    };
    let occupation = Occupation {
        soc_code: "43-9061.00".into(),
        title: "Office Clerks".into(),
        description: "File records.".into(),
        job_zone: None,
    };
    let v = classifier
        .classify_pair(PromptVariant::ReplaceDetailed, &startup, &occupation)
        .unwrap();
    assert_eq!(v.answer, Answer::Yes);
    assert_eq!(classifier.stats().backend_requests, 3);
    let bodies: Vec<Captured> = rx.iter().take(3).collect();
    assert!(bodies[2].body["messages"][1]["content"]
        .as_str()
        .unwrap()
        .starts_with("Given the following startup description: Automates filing. and given the following job description: File records. can the product"));

    // served from the cache without touching the (now closed) server
    let again = classifier
        .classify_pair(PromptVariant::ReplaceDetailed, &startup, &occupation)
        .unwrap();
    assert!(again.retrieved_from_cache);
    assert_eq!(classifier.stats().backend_requests, 3);
}
