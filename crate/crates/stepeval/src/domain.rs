//! Domain types shared by the whole pipeline. No I/O here.
//!
//! Symbols follow the usual step-wise evaluation framing: a question Q, a
//! reasoning trace R decomposed into steps s_1..s_t, a gold answer A*, per-step
//! perplexities PPL_0..PPL_t, the information gain ΔI, and the knowledge
//! index KI.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Medical vs math changes which prompt templates and graders apply.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Domain {
    Medical,
    Math,
}

impl std::fmt::Display for Domain {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Domain::Medical => write!(f, "medical"),
            Domain::Math => write!(f, "math"),
        }
    }
}

/// One answer option of a multiple-choice item.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnswerOption {
    /// Single uppercase letter A..J.
    pub label: char,
    pub text: String,
}

/// One evaluation question.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkItem {
    pub id: String,
    pub question: String,
    /// Empty for free-response items.
    #[serde(default)]
    pub options: Vec<AnswerOption>,
    /// Full answer text; for MCQ this is the text of the gold option, so that
    /// perplexity is computed over a meaningful string rather than one letter.
    pub gold_answer: String,
    /// Present iff `options` is nonempty.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gold_label: Option<char>,
    pub domain: Domain,
    /// Benchmark name tag, e.g. "medmcqa".
    pub benchmark: String,
}

/// Validates all item invariants, returning the item unchanged on success.
pub fn validate_item(item: BenchmarkItem) -> Result<BenchmarkItem> {
    let mut problems = Vec::new();
    if item.id.trim().is_empty() {
        problems.push("id is empty".to_string());
    }
    if item.question.trim().is_empty() {
        problems.push("question is empty".to_string());
    }
    if item.gold_answer.trim().is_empty() {
        problems.push("gold_answer is empty".to_string());
    }
    if !item.options.is_empty() {
        match item.gold_label {
            None => problems.push("options present but gold_label missing".to_string()),
            Some(label) => {
                let hits = item.options.iter().filter(|o| o.label == label).count();
                if hits != 1 {
                    problems.push(format!(
                        "gold_label `{label}` matches {hits} options, expected exactly 1"
                    ));
                }
            }
        }
        let mut labels: Vec<char> = item.options.iter().map(|o| o.label).collect();
        labels.sort_unstable();
        labels.dedup();
        if labels.len() != item.options.len() {
            problems.push("duplicate option labels".to_string());
        }
        for o in &item.options {
            if !o.label.is_ascii_uppercase() || o.label > 'J' {
                problems.push(format!("option label `{}` outside A..J", o.label));
            }
        }
    } else if item.gold_label.is_some() {
        problems.push("gold_label present but item has no options".to_string());
    }
    if problems.is_empty() {
        Ok(item)
    } else {
        Err(Error::InvalidItem {
            id: item.id,
            problems,
        })
    }
}

/// One logical step of a decomposed reasoning trace.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Step {
    /// 1-based index i.
    pub index: usize,
    pub text: String,
}

/// A subject model's raw reasoning plus its decomposition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReasoningTrace {
    pub item_id: String,
    pub model_id: String,
    /// Raw reasoning text R.
    pub reasoning: String,
    /// Final answer A as emitted by the subject.
    pub final_answer: String,
    /// Steps s_1..s_t, indices exactly 1..t.
    pub steps: Vec<Step>,
}

/// Per-step knowledge verification state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepKnowledge {
    pub step_index: usize,
    /// Extracted factual claim k_i; empty when the step carries no knowledge.
    pub statement: String,
    /// Interrogative reformulation of k_i used as the retrieval query.
    pub query: String,
    /// Ids of retrieved passages k*_i, ranked.
    pub retrieved: Vec<String>,
    /// Verdict; absent for knowledge-free steps.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub consistent: Option<bool>,
    pub rationale: String,
    /// Step flagged by the extractor as containing no factual claim; excluded
    /// from the KI denominator.
    #[serde(default)]
    pub no_knowledge: bool,
    /// Judge ran with zero retrieved passages; verdict is low-confidence.
    #[serde(default)]
    pub empty_evidence: bool,
}

/// Per-trace perplexity series and the averaged information gain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InfoGainResult {
    /// ppl[0] is the question-only baseline PPL_0, ppl[i] is PPL_i. Length t+1.
    pub ppl: Vec<f64>,
    /// delta_ppl[i-1] = PPL_{i-1} - PPL_i. Length t.
    pub delta_ppl: Vec<f64>,
    /// ΔI = mean of delta_ppl.
    pub info_gain: f64,
    /// Token count N of the gold answer under the scorer; constant across
    /// the trace's prefixes.
    pub token_count: usize,
}

/// Record of one backend interaction made on behalf of an item.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CallLogEntry {
    pub backend: String,
    pub cache_key: String,
    pub cached: bool,
}

/// Joined evaluation result for one item.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalRecord {
    pub item_id: String,
    pub benchmark: String,
    pub trace: ReasoningTrace,
    pub correct: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub info_gain: Option<InfoGainResult>,
    /// KI over judged steps; absent when every step was knowledge-free or KI
    /// was not computed for this run.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ki: Option<f64>,
    #[serde(default)]
    pub step_knowledge: Vec<StepKnowledge>,
    #[serde(default)]
    pub call_log: Vec<CallLogEntry>,
}

/// Complete, hashable description of a run's configuration.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunManifest {
    /// Digest of the canonicalized run configuration.
    pub config_digest: String,
    /// Template name -> version id.
    pub template_versions: std::collections::BTreeMap<String, String>,
    /// Role name -> backend identity.
    pub backend_identities: std::collections::BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub corpus_digest: Option<String>,
    pub timestamp: String,
    pub seed: u64,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mcq_item() -> BenchmarkItem {
        BenchmarkItem {
            id: "q1".into(),
            question: "Which electrolyte disturbance accompanies prolonged vomiting?".into(),
            options: vec![
                AnswerOption { label: 'A', text: "Hyperkalemia".into() },
                AnswerOption { label: 'B', text: "Metabolic acidosis".into() },
                AnswerOption { label: 'C', text: "Hypochloremic alkalosis".into() },
                AnswerOption { label: 'D', text: "Hypernatremia".into() },
            ],
            gold_answer: "Hypochloremic alkalosis".into(),
            gold_label: Some('C'),
            domain: Domain::Medical,
            benchmark: "fixture".into(),
        }
    }

    #[test]
    fn valid_mcq_passes() {
        assert!(validate_item(mcq_item()).is_ok());
    }

    #[test]
    fn missing_gold_label_rejected() {
        let mut item = mcq_item();
        item.gold_label = None;
        let err = validate_item(item).unwrap_err();
        assert!(matches!(err, Error::InvalidItem { .. }));
    }

    #[test]
    fn empty_question_rejected() {
        let mut item = mcq_item();
        item.question = "  ".into();
        assert!(validate_item(item).is_err());
    }

    #[test]
    fn label_outside_range_rejected() {
        let mut item = mcq_item();
        item.options[0].label = 'K';
        assert!(validate_item(item).is_err());
    }

    #[test]
    fn serde_round_trip_is_identity() {
        let item = mcq_item();
        let line = serde_json::to_string(&item).unwrap();
        let back: BenchmarkItem = serde_json::from_str(&line).unwrap();
        assert_eq!(item, back);

        let record = EvalRecord {
            item_id: "q1".into(),
            benchmark: "fixture".into(),
            trace: ReasoningTrace {
                item_id: "q1".into(),
                model_id: "mock".into(),
                reasoning: "think".into(),
                final_answer: "C".into(),
                steps: vec![Step { index: 1, text: "think".into() }],
            },
            correct: true,
            info_gain: Some(InfoGainResult {
                ppl: vec![4.0, 2.0],
                delta_ppl: vec![2.0],
                info_gain: 2.0,
                token_count: 3,
            }),
            ki: Some(1.0),
            step_knowledge: vec![],
            call_log: vec![CallLogEntry {
                backend: "mock".into(),
                cache_key: "abc".into(),
                cached: false,
            }],
        };
        let line = serde_json::to_string(&record).unwrap();
        let back: EvalRecord = serde_json::from_str(&line).unwrap();
        assert_eq!(record, back);
    }
}
