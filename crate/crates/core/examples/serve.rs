//! Serves the bundled case study on 127.0.0.1:8080 (or `SERVICE_PORT`).
//!
//! ```sh
//! cargo run --example serve
//! curl -s localhost:8080/query -d '{"term": "mitochondria"}'
//! ```

use learning_path::service::{serve, ServiceConfig};

#[tokio::main]
async fn main() -> anyhow::Result<()> {
    let mut config = ServiceConfig::load(None)?;
    if config.graph_path.is_none() {
        config.graph_path = Some(
            concat!(
                env!("CARGO_MANIFEST_DIR"),
                "/fixtures/case_study/snapshot.json"
            )
            .into(),
        );
    }
    serve(config).await?;
    Ok(())
}
