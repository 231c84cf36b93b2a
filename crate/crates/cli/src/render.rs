//! Deterministic rendering of a search outcome: text blocks for people, one
//! JSON object for machines. Identical inputs produce identical bytes.

use serde::{Deserialize, Serialize};

use orbas_core::pipeline::SearchParams;
use orbas_core::rational::{format_decimal, format_exact};
use orbas_core::recommender::Recommendation;

use crate::args::OutputFormat;

pub fn render(
    query: &str,
    params: &SearchParams,
    recommendations: &[Recommendation],
    format: OutputFormat,
) -> String {
    match format {
        OutputFormat::Text => render_text(recommendations),
        OutputFormat::Json => {
            let report = JsonReport::build(query, params, recommendations);
            let mut out = serde_json::to_string_pretty(&report).expect("report serializes");
            out.push('\n');
            out
        }
    }
}

fn render_text(recommendations: &[Recommendation]) -> String {
    if recommendations.is_empty() {
        return "no patterns found\n".to_string();
    }
    let mut out = String::new();
    for rec in recommendations {
        out.push_str(&format!(
            "#{} coverage={} support={} merged={}\n",
            rec.rank,
            rec.coverage_count,
            format_decimal(rec.group.representative.support, 2),
            rec.group.members.len(),
        ));
        for call in &rec.group.representative.calls {
            out.push_str(&format!("    {}\n", call.qualified()));
        }
        for origin in &rec.example_origins {
            out.push_str(&format!(
                "    example: {} {}.{}\n",
                origin.file, origin.owner, origin.method
            ));
        }
    }
    out
}

/// The machine-readable report. Field order is part of the format.
#[derive(Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JsonReport {
    pub query: String,
    pub config: JsonConfig,
    pub recommendations: Vec<JsonRecommendation>,
}

#[derive(Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JsonConfig {
    /// Exact fractions, e.g. "1/2", so reruns can reproduce comparisons.
    pub min_sup: String,
    pub tau1: String,
    pub tau2_sim: String,
    pub top_k: usize,
    pub min_pattern_length: usize,
}

#[derive(Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JsonRecommendation {
    pub rank: usize,
    pub coverage: usize,
    /// The representative's in-cluster support as an exact fraction.
    pub support: String,
    pub calls: Vec<String>,
    pub merged_count: usize,
    pub examples: Vec<JsonExample>,
}

#[derive(Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JsonExample {
    pub file: String,
    pub owner: String,
    pub method: String,
}

impl JsonReport {
    pub fn build(
        query: &str,
        params: &SearchParams,
        recommendations: &[Recommendation],
    ) -> JsonReport {
        JsonReport {
            query: query.to_string(),
            config: JsonConfig {
                min_sup: format_exact(params.min_sup),
                tau1: format_exact(params.tau1),
                tau2_sim: format_exact(params.tau2_sim),
                top_k: params.top_k,
                min_pattern_length: params.min_pattern_length,
            },
            recommendations: recommendations
                .iter()
                .map(|rec| JsonRecommendation {
                    rank: rec.rank,
                    coverage: rec.coverage_count,
                    support: format_exact(rec.group.representative.support),
                    calls: rec
                        .group
                        .representative
                        .calls
                        .iter()
                        .map(|c| c.qualified())
                        .collect(),
                    merged_count: rec.group.members.len(),
                    examples: rec
                        .example_origins
                        .iter()
                        .map(|o| JsonExample {
                            file: o.file.clone(),
                            owner: o.owner.clone(),
                            method: o.method.clone(),
                        })
                        .collect(),
                })
                .collect(),
        }
    }
}
