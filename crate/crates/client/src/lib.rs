//! Thin async client for the clearance query service.

use clearance_core::io::{ErrorBody, NearestRequest, QueryRequest, SceneFile};
use clearance_core::{ClearanceReport, Point, SegmentProximity};
use serde::de::DeserializeOwned;
use serde::Serialize;

#[derive(Debug, thiserror::Error)]
pub enum ClientError {
    #[error("request failed: {0}")]
    Http(#[from] reqwest::Error),
    #[error("service answered {status}: {}: {}", body.error, body.reason)]
    Api { status: u16, body: ErrorBody },
}

#[derive(Clone, Debug)]
pub struct Client {
    base: String,
    http: reqwest::Client,
}

impl Client {
    /// `base` is the service root, e.g. `http://127.0.0.1:8080`.
    pub fn new(base: impl Into<String>) -> Self {
        Client {
            base: base.into().trim_end_matches('/').to_string(),
            http: reqwest::Client::new(),
        }
    }

    fn url(&self, path: &str) -> String {
        format!("{}{path}", self.base)
    }

    pub async fn health(&self) -> Result<String, ClientError> {
        let resp = check(self.http.get(self.url("/health")).send().await?).await?;
        Ok(resp.text().await?)
    }

    pub async fn scene(&self) -> Result<SceneFile, ClientError> {
        self.get("/scene").await
    }

    /// Build statistics as served; `build_ms` is whatever the server measured.
    pub async fn stats(&self) -> Result<serde_json::Value, ClientError> {
        self.get("/stats").await
    }

    pub async fn query(&self, path: &[Point], c: f64) -> Result<ClearanceReport, ClientError> {
        let body = QueryRequest {
            path: path.to_vec(),
            c,
        };
        self.post("/query", &body).await
    }

    /// Raw `/query` response text, byte for byte.
    pub async fn query_text(&self, path: &[Point], c: f64) -> Result<String, ClientError> {
        let body = QueryRequest {
            path: path.to_vec(),
            c,
        };
        let resp = check(
            self.http
                .post(self.url("/query"))
                .json(&body)
                .send()
                .await?,
        )
        .await?;
        Ok(resp.text().await?)
    }

    pub async fn nearest(&self, a: Point, b: Point) -> Result<SegmentProximity, ClientError> {
        self.post("/nearest", &NearestRequest { segment: [a, b] })
            .await
    }

    async fn get<T: DeserializeOwned>(&self, path: &str) -> Result<T, ClientError> {
        let resp = check(self.http.get(self.url(path)).send().await?).await?;
        Ok(resp.json().await?)
    }

    async fn post<B: Serialize, T: DeserializeOwned>(
        &self,
        path: &str,
        body: &B,
    ) -> Result<T, ClientError> {
        let resp = check(self.http.post(self.url(path)).json(body).send().await?).await?;
        Ok(resp.json().await?)
    }
}

async fn check(resp: reqwest::Response) -> Result<reqwest::Response, ClientError> {
    let status = resp.status();
    if status.is_success() {
        return Ok(resp);
    }
    let text = resp.text().await?;
    let body = serde_json::from_str(&text).unwrap_or(ErrorBody {
        error: "unexpected".into(),
        reason: text,
    });
    Err(ClientError::Api {
        status: status.as_u16(),
        body,
    })
}
