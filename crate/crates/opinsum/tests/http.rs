mod common;

use axum::body::Body;
use axum::http::{Request, StatusCode};
use http_body_util::BodyExt;
use opinsum_cli::http::{router, Service};
use opinsum_cli::store::DataDir;
use serde_json::Value;
use tower::ServiceExt;

use common::{desk_data_dir, opinsum, stdout, seven_places_data_dir};

async fn call(service: &Service, method: &str, uri: &str, body: &str) -> (StatusCode, String) {
    let request = Request::builder()
        .method(method)
        .uri(uri)
        .header("content-type", "application/json")
        .body(Body::from(body.to_string()))
        .unwrap();
    let response = router(service.clone()).oneshot(request).await.unwrap();
    let status = response.status();
    let bytes = response.into_body().collect().await.unwrap().to_bytes();
    (status, String::from_utf8(bytes.to_vec()).unwrap())
}

fn json(s: &str) -> Value {
    serde_json::from_str(s).unwrap()
}

fn desk_service() -> (tempfile::TempDir, Service) {
    let dir = desk_data_dir();
    let engine = DataDir::new(dir.path()).load_engine().unwrap();
    (dir, Service::ready(engine))
}

#[tokio::test]
async fn uninitialized_service_is_unavailable() {
    let service = Service::new();
    for (method, uri) in [("GET", "/api/v1/places"), ("GET", "/api/v1/aspects"), ("POST", "/api/v1/summarize")] {
        let (status, _) = call(&service, method, uri, "{\"place\":\"petra\"}").await;
        assert_eq!(status, StatusCode::SERVICE_UNAVAILABLE);
    }
}

#[tokio::test]
async fn places_report_fixture_statistics() {
    let dir = seven_places_data_dir();
    let service = Service::ready(DataDir::new(dir.path()).load_engine().unwrap());
    let (status, body) = call(&service, "GET", "/api/v1/places", "").await;
    assert_eq!(status, StatusCode::OK);
    let places = json(&body);
    let places = places.as_array().unwrap();
    assert_eq!(places.len(), 7);
    let taj = places.iter().find(|p| p["place"] == "taj-mahal").unwrap();
    assert_eq!((taj["female_count"].as_u64(), taj["male_count"].as_u64()), (Some(398), Some(602)));
}

#[tokio::test]
async fn aspects_lists_the_catalog() {
    let (_dir, service) = desk_service();
    let (status, body) = call(&service, "GET", "/api/v1/aspects", "").await;
    assert_eq!(status, StatusCode::OK);
    let aspects = json(&body);
    let labels: Vec<&str> = aspects.as_array().unwrap().iter().map(|a| a["label"].as_str().unwrap()).collect();
    assert_eq!(
        labels,
        ["Attractions", "Access", "Activities", "Amenities", "Culture", "Cost", "Negatives", "Miscellaneous"]
    );
    assert!(aspects[0]["terms"].as_array().unwrap().len() >= 10);
}

#[tokio::test]
async fn summarize_defaults_and_errors() {
    let (_dir, service) = desk_service();
    let (status, body) = call(&service, "POST", "/api/v1/summarize", r#"{"place":"petra","aspects":"all"}"#).await;
    assert_eq!(status, StatusCode::OK);
    let s = json(&body);
    assert!(s["total_words"].as_u64().unwrap() <= 100);
    assert!(!s["entries"].as_array().unwrap().is_empty());
    assert_eq!(s["controls_echo"]["length_words"], 100);

    let (status, _) = call(&service, "POST", "/api/v1/summarize", r#"{"place":"atlantis"}"#).await;
    assert_eq!(status, StatusCode::NOT_FOUND);

    let (status, body) = call(
        &service,
        "POST",
        "/api/v1/summarize",
        r#"{"place":"petra","female_ratio":1.5,"candidate_pool":0}"#,
    )
    .await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    let fields: Vec<String> = json(&body)["fields"]
        .as_array()
        .unwrap()
        .iter()
        .map(|f| f["field"].as_str().unwrap().to_string())
        .collect();
    assert_eq!(fields, ["female_ratio", "candidate_pool"]);

    let (status, body) = call(&service, "POST", "/api/v1/summarize", r#"{"place":"petra","length_words":"many"}"#).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert_eq!(json(&body)["fields"][0]["field"], "length_words");

    let (status, body) = call(&service, "POST", "/api/v1/summarize", r#"{"place":"petra","aspects":["Cots"]}"#).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert_eq!(json(&body)["fields"][0]["field"], "aspects");

    let (status, _) = call(&service, "POST", "/api/v1/summarize", "not json").await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
}

#[tokio::test]
async fn zero_female_ratio_penalizes_female_entries() {
    let (_dir, service) = desk_service();
    for place in ["petra", "taj-mahal"] {
        let request = format!(r#"{{"place":"{place}","female_ratio":0.0}}"#);
        let (status, body) = call(&service, "POST", "/api/v1/summarize", &request).await;
        assert_eq!(status, StatusCode::OK);
        let s = json(&body);
        let females = s["entries"].as_array().unwrap().iter().filter(|e| e["gender"] == "F").count();
        // at fp = 0 the term is |0·males − 1·females|
        let c = s["fairness_term"].as_f64().unwrap();
        assert!((c - females as f64).abs() < 1e-9);
        assert_eq!(s["female_count"].as_u64().unwrap() as usize, females);
    }
}

#[tokio::test]
async fn cli_and_http_serialize_identically() {
    let (dir, service) = desk_service();
    let request = r#"{"place":"taj-mahal","aspects":["Access","Cost"],"length_words":60,"female_ratio":0.3}"#;
    let (status, body) = call(&service, "POST", "/api/v1/summarize", request).await;
    assert_eq!(status, StatusCode::OK);
    let out = opinsum(
        dir.path(),
        &[
            "summarize", "--place", "taj-mahal", "--aspects", "Access,Cost", "--length", "60", "--female-ratio", "0.3",
            "--json",
        ],
    );
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim_end(), body);
}

#[tokio::test]
async fn concurrent_requests_agree() {
    let (_dir, service) = desk_service();
    let mut handles = Vec::new();
    for _ in 0..8 {
        let service = service.clone();
        handles.push(tokio::spawn(async move {
            call(&service, "POST", "/api/v1/summarize", r#"{"place":"petra"}"#).await.1
        }));
    }
    let mut bodies = Vec::new();
    for h in handles {
        bodies.push(h.await.unwrap());
    }
    assert!(bodies.windows(2).all(|w| w[0] == w[1]));
}
