#include "ontorag/evaluation.hpp"

#include <cstdio>

#include <nlohmann/json.hpp>

#include "ontorag/error.hpp"
#include "ontorag/io.hpp"
#include "ontorag/parallel.hpp"

namespace ontorag {

namespace {

SimilarityReport& operator+=(SimilarityReport& a, const SimilarityReport& b) {
    a.cosine_pct += b.cosine_pct;
    a.dot += b.dot;
    a.euclidean += b.euclidean;
    return a;
}

SimilarityReport scaled(SimilarityReport r, double factor) {
    r.cosine_pct *= factor;
    r.dot *= factor;
    r.euclidean *= factor;
    return r;
}

std::string format_value(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::string format_change(double with_value, double without_value) {
    if (without_value == 0.0) return "n/a";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%+.4f", relative_change(with_value, without_value));
    return buf;
}

void append_block(std::string& out, const std::string& title, const SimilarityReport* with,
                  const SimilarityReport* without) {
    out += title + "\twith subsumptions (s)\twithout subsumptions\trelative change (%)\n";
    const struct {
        const char* label;
        double SimilarityReport::*field;
    } rows[] = {{"Cosine Similarity", &SimilarityReport::cosine_pct},
                {"Dot Product", &SimilarityReport::dot},
                {"Euclidean Distance", &SimilarityReport::euclidean}};
    for (const auto& row : rows) {
        out += row.label;
        out += "\t" + (with ? format_value(with->*row.field) : std::string("n/a"));
        out += "\t" + (without ? format_value(without->*row.field) : std::string("n/a"));
        out += "\t" + (with && without ? format_change(with->*row.field, without->*row.field) : std::string("n/a"));
        out += "\n";
    }
}

}  // namespace

RecordScores score_record(const EvalRecord& record, const EmbeddingProvider& embedder) {
    if (record.prompt.empty()) throw DataError("record has an empty prompt");
    if (record.ground_truth.empty()) throw DataError("record has an empty ground truth");
    std::vector<std::string> texts{record.response, record.prompt, record.ground_truth};
    if (record.augmented_prompt) texts.push_back(*record.augmented_prompt);
    std::vector<EmbeddingVector> vectors;
    try {
        vectors = embedder.embed(texts);
    } catch (const ProviderError&) {
        throw;
    } catch (const std::exception& e) {
        throw ProviderError("embed", e.what());
    }
    if (vectors.size() != texts.size()) throw ProviderError("embed", "provider returned the wrong number of vectors");
    RecordScores scores;
    scores.contextual = similarity_report(vectors[0], vectors[1]);
    scores.factual = similarity_report(vectors[0], vectors[2]);
    scores.index = hallucination_index(scores.contextual, scores.factual);
    if (record.augmented_prompt) scores.contextual_augmented = similarity_report(vectors[0], vectors[3]);
    return scores;
}

ConditionSummary summarize_condition(const std::vector<EvalRecord>& records, const EmbeddingProvider& embedder) {
    if (records.empty()) throw DataError("no records to evaluate");
    std::vector<RecordScores> scores(records.size());
    detail::parallel_for(records.size(), embedder.max_in_flight(), [&](std::size_t i) {
        try {
            scores[i] = score_record(records[i], embedder);
        } catch (const ProviderError& e) {
            throw ProviderError(e.stage(), "record " + std::to_string(i + 1) + ": " + e.what());
        } catch (const Error& e) {
            throw DataError("record " + std::to_string(i + 1) + ": " + e.what());
        }
    });

    ConditionSummary summary;
    summary.records = records.size();
    SimilarityReport augmented_sum;
    bool all_augmented = true;
    for (const auto& s : scores) {
        summary.contextual += s.contextual;
        summary.factual += s.factual;
        if (s.contextual_augmented) augmented_sum += *s.contextual_augmented;
        else all_augmented = false;
    }
    const double inv = 1.0 / static_cast<double>(records.size());
    summary.contextual = scaled(summary.contextual, inv);
    summary.factual = scaled(summary.factual, inv);
    summary.index = hallucination_index(summary.contextual, summary.factual);
    if (all_augmented) summary.contextual_augmented = scaled(augmented_sum, inv);
    return summary;
}

EvaluationTables evaluate_batch(const std::vector<EvalRecord>& with_records,
                                const std::vector<EvalRecord>& without_records, const EmbeddingProvider& embedder) {
    return {summarize_condition(with_records, embedder), summarize_condition(without_records, embedder)};
}

std::string tables_to_tsv(const EvaluationTables& t) {
    const auto& w = t.with_subsumptions;
    const auto& wo = t.without_subsumptions;
    std::string out;
    append_block(out, "Contextual Similarity", &w.contextual, &wo.contextual);
    out += "\n";
    append_block(out, "Factual Accuracy", &w.factual, &wo.factual);
    out += "\n";
    append_block(out, "Hallucination Index", &w.index, &wo.index);
    out += "\n";
    append_block(out, "Contextual Similarity (augmented prompt)",
                 w.contextual_augmented ? &*w.contextual_augmented : nullptr,
                 wo.contextual_augmented ? &*wo.contextual_augmented : nullptr);
    return out;
}

std::vector<DatasetItem> parse_dataset_jsonl(std::string_view content) {
    std::vector<DatasetItem> items;
    const auto rows = io::lines(content);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].find_first_not_of(" \t") == std::string::npos) continue;
        try {
            const auto doc = nlohmann::json::parse(rows[i]);
            DatasetItem item{doc.at("prompt").get<std::string>(), doc.at("ground_truth").get<std::string>()};
            if (item.prompt.empty() || item.ground_truth.empty())
                throw DataError("line " + std::to_string(i + 1) + ": prompt and ground_truth must be non-empty");
            items.push_back(std::move(item));
        } catch (const nlohmann::json::exception& e) {
            throw ParseError("line " + std::to_string(i + 1) + ": " + e.what());
        }
    }
    if (items.empty()) throw DataError("dataset has no records");
    return items;
}

EvalRecord record_from_turn(const ChatTurn& turn, const std::string& ground_truth) {
    return {turn.raw_prompt, turn.augmented_prompt.text, turn.response, ground_truth};
}

EvaluationRun run_evaluation(const std::vector<DatasetItem>& dataset, const SubsumptionDictionary& dict,
                             const VectorStore& store, const EmbeddingProvider& embedder, const LlmProvider& llm,
                             AnswerOptions options) {
    EvaluationRun run;
    std::vector<EvalRecord> with_records;
    std::vector<EvalRecord> without_records;
    for (const auto& item : dataset) {
        options.use_subsumptions = true;
        run.with_turns.push_back(answer(item.prompt, dict, store, embedder, llm, options));
        with_records.push_back(record_from_turn(run.with_turns.back(), item.ground_truth));
        options.use_subsumptions = false;
        run.without_turns.push_back(answer(item.prompt, dict, store, embedder, llm, options));
        without_records.push_back(record_from_turn(run.without_turns.back(), item.ground_truth));
    }
    run.tables = evaluate_batch(with_records, without_records, embedder);
    return run;
}

}  // namespace ontorag
