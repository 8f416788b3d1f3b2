//! Thin blocking client for the solver service. The `types` module holds
//! the wire contract and is shared with the server.

pub mod types;

#[cfg(feature = "client")]
pub use blocking::{Client, ClientError};

#[cfg(feature = "client")]
mod blocking {
    use std::time::Duration;

    use serde::de::DeserializeOwned;
    use serde::Serialize;
    use thiserror::Error;

    use crate::types::*;

    #[derive(Debug, Error)]
    pub enum ClientError {
        #[error("transport: {0}")]
        Transport(#[from] reqwest::Error),
        #[error("api {kind}: {error}")]
        Api { kind: String, error: String },
        #[error("job {0} failed: {1}")]
        JobFailed(String, String),
        #[error("timed out waiting for job {0}")]
        JobTimeout(String),
    }

    pub struct Client {
        base: String,
        http: reqwest::blocking::Client,
    }

    impl Client {
        pub fn new(base_url: &str) -> Client {
            Client {
                base: base_url.trim_end_matches('/').to_string(),
                http: reqwest::blocking::Client::new(),
            }
        }

        fn post<Req: Serialize, Resp: DeserializeOwned>(
            &self,
            path: &str,
            body: &Req,
        ) -> Result<Resp, ClientError> {
            let response = self.http.post(format!("{}{path}", self.base)).json(body).send()?;
            Self::decode(response)
        }

        fn decode<Resp: DeserializeOwned>(
            response: reqwest::blocking::Response,
        ) -> Result<Resp, ClientError> {
            if response.status().is_success() {
                Ok(response.json()?)
            } else {
                let err: ApiError = response.json().unwrap_or(ApiError {
                    kind: "internal".into(),
                    error: "unparseable error body".into(),
                });
                Err(ClientError::Api { kind: err.kind, error: err.error })
            }
        }

        pub fn health(&self) -> Result<(), ClientError> {
            self.http
                .get(format!("{}/healthz", self.base))
                .send()?
                .error_for_status()?;
            Ok(())
        }

        pub fn validate(&self, req: &ValidateRequest) -> Result<ValidateResponse, ClientError> {
            self.post("/api/v1/validate", req)
        }

        pub fn check(&self, req: &CheckRequest) -> Result<CheckResponse, ClientError> {
            self.post("/api/v1/check", req)
        }

        pub fn kpi(&self, req: &KpiRequest) -> Result<KpiResponse, ClientError> {
            self.post("/api/v1/kpi", req)
        }

        /// Returns the LP text.
        pub fn export_lp(&self, req: &ExportLpRequest) -> Result<String, ClientError> {
            let response =
                self.http.post(format!("{}/api/v1/export-lp", self.base)).json(req).send()?;
            if response.status().is_success() {
                Ok(response.text()?)
            } else {
                let err: ApiError = response.json().unwrap_or(ApiError {
                    kind: "internal".into(),
                    error: "unparseable error body".into(),
                });
                Err(ClientError::Api { kind: err.kind, error: err.error })
            }
        }

        pub fn oracle(
            &self,
            req: &OracleRequest,
        ) -> Result<darp_core::exact::ExactResult, ClientError> {
            self.post("/api/v1/oracle", req)
        }

        pub fn generate(&self, req: &GenerateRequest) -> Result<GenerateResponse, ClientError> {
            self.post("/api/v1/generate", req)
        }

        pub fn submit_solve(&self, req: &SolveRequest) -> Result<SolveSubmitted, ClientError> {
            self.post("/api/v1/solve", req)
        }

        pub fn job_status(&self, job_id: &str) -> Result<JobStatus, ClientError> {
            let response =
                self.http.get(format!("{}/api/v1/jobs/{job_id}", self.base)).send()?;
            Self::decode(response)
        }

        /// Submits a solve job and polls until it finishes.
        pub fn solve(
            &self,
            req: &SolveRequest,
            timeout: Duration,
        ) -> Result<SolveResult, ClientError> {
            let submitted = self.submit_solve(req)?;
            let deadline = std::time::Instant::now() + timeout;
            loop {
                match self.job_status(&submitted.job_id)? {
                    JobStatus::Done { result } => return Ok(*result),
                    JobStatus::Failed { error } => {
                        return Err(ClientError::JobFailed(submitted.job_id, error))
                    }
                    JobStatus::Running => {
                        if std::time::Instant::now() >= deadline {
                            return Err(ClientError::JobTimeout(submitted.job_id));
                        }
                        std::thread::sleep(Duration::from_millis(50));
                    }
                }
            }
        }
    }
}
