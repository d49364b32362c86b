#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ontorag/embedding.hpp"
#include "ontorag/metrics.hpp"
#include "ontorag/rag.hpp"

namespace ontorag {

struct EvalRecord {
    std::string prompt;
    std::optional<std::string> augmented_prompt;
    std::string response;
    std::string ground_truth;
};

struct RecordScores {
    SimilarityReport contextual;  // response vs original prompt
    SimilarityReport factual;     // response vs ground truth
    SimilarityReport index;
    std::optional<SimilarityReport> contextual_augmented;  // response vs augmented prompt
};

struct ConditionSummary {
    SimilarityReport contextual;
    SimilarityReport factual;
    SimilarityReport index;
    std::optional<SimilarityReport> contextual_augmented;  // only when every record has one
    std::size_t records = 0;
};

struct EvaluationTables {
    ConditionSummary with_subsumptions;
    ConditionSummary without_subsumptions;
};

// Throws DataError for an empty prompt or ground truth; embedding failures
// become ProviderError.
RecordScores score_record(const EvalRecord& record, const EmbeddingProvider& embedder);

// Arithmetic mean of every per-record field; the index is the index of the
// means. Errors name the failing record.
ConditionSummary summarize_condition(const std::vector<EvalRecord>& records, const EmbeddingProvider& embedder);

EvaluationTables evaluate_batch(const std::vector<EvalRecord>& with_records,
                                const std::vector<EvalRecord>& without_records, const EmbeddingProvider& embedder);

// Three blocks (Contextual Similarity, Factual Accuracy, Hallucination Index)
// plus the augmented-prompt diagnostic; rows Cosine Similarity, Dot Product,
// Euclidean Distance; columns with, without, relative change (%).
std::string tables_to_tsv(const EvaluationTables& tables);

struct DatasetItem {
    std::string prompt;
    std::string ground_truth;
};

// One {"prompt": str, "ground_truth": str} object per non-blank line.
std::vector<DatasetItem> parse_dataset_jsonl(std::string_view content);

EvalRecord record_from_turn(const ChatTurn& turn, const std::string& ground_truth);

struct EvaluationRun {
    std::vector<ChatTurn> with_turns;
    std::vector<ChatTurn> without_turns;
    EvaluationTables tables;
};

// Answers every dataset prompt with and without subsumptions and scores both.
EvaluationRun run_evaluation(const std::vector<DatasetItem>& dataset, const SubsumptionDictionary& dict,
                             const VectorStore& store, const EmbeddingProvider& embedder, const LlmProvider& llm,
                             AnswerOptions options);

}  // namespace ontorag
