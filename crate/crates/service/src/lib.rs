//! Stateless HTTP JSON API over `barn-core`, versioned under `/api/v1`.
//!
//! Every response body is produced by [`barn_core::export::to_json`], the
//! same serializer the CLI uses for `--format json`.

mod error;

use std::net::{IpAddr, Ipv4Addr, SocketAddr};
use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::Query;
use axum::http::{header, HeaderValue, Method, Uri};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::Router;
use barn_core::fields::{
    compactness_contours, compactness_field, AxisRange, DEFAULT_FIELD_RESOLUTION,
    DEFAULT_RATIO_RANGE,
};
use barn_core::{assess, optimize_fixed_floor, optimize_fixed_volume, HouseParams};
use serde::{Deserialize, Serialize};
use tower_http::cors::{AllowOrigin, CorsLayer};

pub use error::{ApiError, ErrorCode};

pub const DEFAULT_PORT: u16 = 8787;
/// Per-axis field resolution cap over HTTP.
pub const MAX_HTTP_RESOLUTION: usize = 1024;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ServiceConfig {
    pub bind: IpAddr,
    pub port: u16,
    /// Origins allowed in addition to localhost.
    pub cors_allow: Vec<String>,
}

impl Default for ServiceConfig {
    fn default() -> Self {
        Self {
            bind: IpAddr::V4(Ipv4Addr::LOCALHOST),
            port: DEFAULT_PORT,
            cors_allow: Vec::new(),
        }
    }
}

impl ServiceConfig {
    pub fn from_toml(text: &str) -> Result<Self, toml::de::Error> {
        toml::from_str(text)
    }

    pub fn addr(&self) -> SocketAddr {
        SocketAddr::new(self.bind, self.port)
    }
}

fn is_local_origin(origin: &str) -> bool {
    let Some((_, rest)) = origin.split_once("://") else {
        return false;
    };
    let host = if let Some(v6) = rest.strip_prefix('[') {
        v6.split(']').next().unwrap_or("")
    } else {
        rest.split(':').next().unwrap_or("")
    };
    matches!(host, "localhost" | "127.0.0.1" | "::1")
}

fn cors_layer(allow: Arc<Vec<String>>) -> CorsLayer {
    CorsLayer::new()
        .allow_methods([Method::GET, Method::POST])
        .allow_headers([header::CONTENT_TYPE])
        .allow_origin(AllowOrigin::predicate(move |origin: &HeaderValue, _| {
            origin
                .to_str()
                .map(|o| is_local_origin(o) || allow.iter().any(|a| a == o))
                .unwrap_or(false)
        }))
}

pub fn router(config: &ServiceConfig) -> Router {
    let allow = Arc::new(config.cors_allow.clone());
    Router::new()
        .route("/api/v1/optimize/volume", get(optimize_volume))
        .route("/api/v1/optimize/floor", get(optimize_floor))
        .route("/api/v1/assess", post(assess_design))
        .route("/api/v1/fields/compactness", get(field_compactness))
        .route("/api/v1/fields/contours", get(field_contours))
        .fallback(|uri: Uri| async move { ApiError::not_found(uri.path()) })
        .layer(cors_layer(allow))
}

pub async fn serve(config: ServiceConfig) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(config.addr()).await?;
    tracing::info!("listening on {}", listener.local_addr()?);
    axum::serve(listener, router(&config)).await
}

fn json_response<T: Serialize>(value: &T) -> Response {
    match barn_core::export::to_json(value) {
        Ok(body) => ([(header::CONTENT_TYPE, "application/json")], body).into_response(),
        Err(e) => ApiError {
            code: ErrorCode::SolverFailure,
            message: format!("serialization failed: {e}"),
            field: None,
        }
        .into_response(),
    }
}

/// Query parameters with strict validation: unknown and repeated names are
/// rejected.
struct Params(Vec<(String, String)>);

impl Params {
    fn new(pairs: Vec<(String, String)>, allowed: &[&str]) -> Result<Self, ApiError> {
        for (n, (key, _)) in pairs.iter().enumerate() {
            if !allowed.contains(&key.as_str()) {
                return Err(ApiError::bad_input(key, format!("unknown parameter {key}")));
            }
            if pairs[..n].iter().any(|(k, _)| k == key) {
                return Err(ApiError::bad_input(key, format!("parameter {key} given twice")));
            }
        }
        Ok(Self(pairs))
    }

    fn raw(&self, name: &str) -> Option<&str> {
        self.0.iter().find(|(k, _)| k == name).map(|(_, v)| v.as_str())
    }

    fn number(&self, name: &str) -> Result<Option<f64>, ApiError> {
        self.raw(name)
            .map(|raw| parse_number(name, raw))
            .transpose()
    }

    fn required(&self, name: &str) -> Result<f64, ApiError> {
        self.number(name)?
            .ok_or_else(|| ApiError::bad_input(name, format!("missing required parameter {name}")))
    }

    fn or(&self, name: &str, default: f64) -> Result<f64, ApiError> {
        Ok(self.number(name)?.unwrap_or(default))
    }

    fn resolution(&self) -> Result<usize, ApiError> {
        let Some(raw) = self.raw("res") else {
            return Ok(DEFAULT_FIELD_RESOLUTION);
        };
        let res: usize = raw
            .trim()
            .parse()
            .map_err(|_| ApiError::bad_input("res", format!("res must be an integer, got {raw:?}")))?;
        if res > MAX_HTTP_RESOLUTION {
            return Err(ApiError::out_of_domain(
                "res",
                format!("res = {res} exceeds the HTTP limit of {MAX_HTTP_RESOLUTION}"),
            ));
        }
        Ok(res)
    }
}

fn parse_number(name: &str, raw: &str) -> Result<f64, ApiError> {
    match raw.trim().parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(ApiError::bad_input(name, format!("{name} must be a finite number, got {raw:?}"))),
    }
}

type Pairs = Query<Vec<(String, String)>>;

async fn optimize_volume(Query(pairs): Pairs) -> Result<Response, ApiError> {
    let p = Params::new(pairs, &["V", "alpha_deg"])?;
    let v = p.required("V")?;
    let alpha = p.required("alpha_deg")?.to_radians();
    Ok(json_response(&optimize_fixed_volume(v, alpha)?))
}

async fn optimize_floor(Query(pairs): Pairs) -> Result<Response, ApiError> {
    let p = Params::new(pairs, &["F", "H", "alpha_deg"])?;
    let f = p.required("F")?;
    let h = p.required("H")?;
    let alpha = p.required("alpha_deg")?.to_radians();
    Ok(json_response(&optimize_fixed_floor(f, h, alpha)?))
}

async fn assess_design(body: Bytes) -> Result<Response, ApiError> {
    let value: serde_json::Value = serde_json::from_slice(&body)
        .map_err(|e| ApiError::bad_input("body", format!("body is not valid JSON: {e}")))?;
    let obj = value
        .as_object()
        .ok_or_else(|| ApiError::bad_input("body", "body must be a JSON object"))?;
    const KEYS: [&str; 4] = ["W", "L", "H", "alpha_deg"];
    if let Some(extra) = obj.keys().find(|k| !KEYS.contains(&k.as_str())) {
        return Err(ApiError::bad_input(extra, format!("unknown field {extra}")));
    }
    let field = |name: &str| -> Result<f64, ApiError> {
        match obj.get(name) {
            None => Err(ApiError::bad_input(name, format!("missing field {name}"))),
            Some(v) => v
                .as_f64()
                .filter(|x| x.is_finite())
                .ok_or_else(|| ApiError::bad_input(name, format!("{name} must be a number"))),
        }
    };
    let p = HouseParams::from_degrees(field("W")?, field("L")?, field("H")?, field("alpha_deg")?)?;
    Ok(json_response(&assess(&p)?))
}

const RANGE_KEYS: [&str; 4] = ["rmin", "rmax", "kmin", "kmax"];

fn ranges(p: &Params) -> Result<(AxisRange, AxisRange), ApiError> {
    let d = DEFAULT_RATIO_RANGE;
    Ok((
        AxisRange::new(p.or("rmin", d.min)?, p.or("rmax", d.max)?),
        AxisRange::new(p.or("kmin", d.min)?, p.or("kmax", d.max)?),
    ))
}

async fn field_compactness(Query(pairs): Pairs) -> Result<Response, ApiError> {
    let allowed: Vec<&str> = ["alpha_deg", "res"].into_iter().chain(RANGE_KEYS).collect();
    let p = Params::new(pairs, &allowed)?;
    let alpha = p.required("alpha_deg")?.to_radians();
    let (r, k) = ranges(&p)?;
    let res = p.resolution()?;
    Ok(json_response(&compactness_field(alpha, r, k, res)?))
}

async fn field_contours(Query(pairs): Pairs) -> Result<Response, ApiError> {
    let allowed: Vec<&str> = ["alpha_deg", "res", "levels"].into_iter().chain(RANGE_KEYS).collect();
    let p = Params::new(pairs, &allowed)?;
    let alpha = p.required("alpha_deg")?.to_radians();
    let levels = p
        .raw("levels")
        .ok_or_else(|| ApiError::bad_input("levels", "missing required parameter levels"))?
        .split(',')
        .map(|s| parse_number("levels", s))
        .collect::<Result<Vec<_>, _>>()?;
    let (r, k) = ranges(&p)?;
    let res = p.resolution()?;
    Ok(json_response(&compactness_contours(alpha, &levels, r, k, res)?))
}
