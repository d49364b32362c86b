#include "ontorag/rag.hpp"

#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>

#include <nlohmann/json.hpp>

#include "http_client.hpp"
#include "ontorag/error.hpp"
#include "ontorag/text.hpp"

namespace ontorag {

namespace {

constexpr std::string_view kInstruction = "Answer using only the context below.";

template <class Fn>
auto run_stage(const char* stage, Fn&& fn) -> decltype(fn()) {
    try {
        return fn();
    } catch (const ProviderError& e) {
        if (e.stage() == stage) throw;
        throw ProviderError(stage, e.what());
    } catch (const std::exception& e) {
        throw ProviderError(stage, e.what());
    }
}

std::string trace_line(const ChatTurn& turn) {
    std::string out = "appended: [" + text::join(turn.augmented_prompt.appended_terms, ", ") + "] retrieved:";
    for (const auto& r : turn.retrieved) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.4f", r.score);
        out += " " + r.chunk_id + "(" + buf + ")";
    }
    return out;
}

}  // namespace

HttpLlmProvider::HttpLlmProvider(Options options) : options_(std::move(options)) {
    if (options_.url.empty()) throw DataError("LLM provider URL is empty");
}

std::string HttpLlmProvider::complete(const std::string& system, const std::string& user) const {
    const nlohmann::json body = {
        {"model", options_.model},
        {"messages", nlohmann::json::array({{{"role", "system"}, {"content", system}},
                                            {{"role", "user"}, {"content", user}}})}};
    const auto reply = detail::post_json(options_.url, body, options_.api_key, options_.timeout_seconds, "complete");
    try {
        const auto& content = reply.at("choices").at(0).at("message").at("content");
        if (content.is_null()) return std::string(kRefusalMarker);
        auto text = content.get<std::string>();
        return text.empty() ? std::string(kRefusalMarker) : text;
    } catch (const nlohmann::json::exception& e) {
        throw ProviderError("complete", std::string("unexpected chat response shape: ") + e.what());
    }
}

std::unique_ptr<LlmProvider> make_llm_provider(std::string_view spec, std::string model) {
    if (spec == "echo") return std::make_unique<EchoLlm>();
    if (spec.starts_with("http:")) {
        HttpLlmProvider::Options opts;
        opts.url = std::string(spec.substr(5));
        opts.model = std::move(model);
        if (const char* key = std::getenv("LLM_API_KEY")) opts.api_key = key;
        return std::make_unique<HttpLlmProvider>(std::move(opts));
    }
    throw DataError("unknown LLM provider '" + std::string(spec) + "' (expected echo|http:<url>)");
}

LlmRequest build_request(std::string_view prompt, const std::vector<RetrievedContext>& context) {
    std::vector<std::string> texts;
    texts.reserve(context.size());
    for (const auto& c : context) texts.push_back(c.text);
    return {std::string(kInstruction) + "\nContext:\n" + text::join(texts, "\n\n"),
            "Question: " + std::string(prompt)};
}

LlmRequest build_request(const ChatTurn& turn) { return build_request(turn.augmented_prompt.text, turn.retrieved); }

ChatTurn answer(const std::string& raw_prompt, const SubsumptionDictionary& dict, const VectorStore& store,
                const EmbeddingProvider& embedder, const LlmProvider& llm, const AnswerOptions& options) {
    if (store.empty()) throw DataError("vector store is empty");
    ChatTurn turn;
    turn.raw_prompt = raw_prompt;
    if (options.use_subsumptions) {
        turn.augmented_prompt = infiltrate(raw_prompt, dict, options.infiltrate);
    } else {
        turn.augmented_prompt.text = normalize_prompt(raw_prompt);
    }

    const auto query = run_stage("embed", [&] { return embedder.embed_one(turn.augmented_prompt.text); });
    const auto hits = run_stage("retrieve", [&] { return store.retrieve(query, options.k); });
    for (const auto& h : hits) turn.retrieved.push_back({h.chunk->id, h.score, h.chunk->text});

    const auto request = build_request(turn);
    turn.response = run_stage("complete", [&] { return llm.complete(request.system, request.user); });
    return turn;
}

std::string turn_to_json(const ChatTurn& turn) {
    nlohmann::ordered_json retrieved = nlohmann::ordered_json::array();
    for (const auto& r : turn.retrieved) retrieved.push_back({{"id", r.chunk_id}, {"score", r.score}, {"text", r.text}});
    nlohmann::ordered_json doc;
    doc["raw_prompt"] = turn.raw_prompt;
    doc["augmented_prompt"] = {{"text", turn.augmented_prompt.text},
                               {"appended_terms", turn.augmented_prompt.appended_terms},
                               {"matched_keys", turn.augmented_prompt.matched_keys},
                               {"term_sources", turn.augmented_prompt.term_sources}};
    doc["retrieved"] = std::move(retrieved);
    doc["response"] = turn.response;
    doc["timestamp"] = turn.timestamp;
    return doc.dump();
}

ChatTurn turn_from_json(std::string_view line) {
    try {
        const auto doc = nlohmann::json::parse(line);
        ChatTurn turn;
        turn.raw_prompt = doc.at("raw_prompt").get<std::string>();
        const auto& aug = doc.at("augmented_prompt");
        turn.augmented_prompt.text = aug.at("text").get<std::string>();
        turn.augmented_prompt.appended_terms = aug.at("appended_terms").get<std::vector<std::string>>();
        turn.augmented_prompt.matched_keys = aug.at("matched_keys").get<std::vector<std::string>>();
        turn.augmented_prompt.term_sources = aug.value("term_sources", std::vector<std::string>{});
        for (const auto& r : doc.at("retrieved"))
            turn.retrieved.push_back({r.at("id").get<std::string>(), r.at("score").get<double>(),
                                      r.at("text").get<std::string>()});
        turn.response = doc.at("response").get<std::string>();
        turn.timestamp = doc.value("timestamp", "");
        return turn;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("malformed chat turn: ") + e.what());
    }
}

int chat_repl(const ChatSession& session, std::istream& in, std::ostream& out, std::ostream& err) {
    std::ofstream log;
    if (!session.log_path.empty()) {
        log.open(session.log_path, std::ios::app);
        if (!log) {
            err << "error: cannot open session log " << session.log_path.string() << "\n";
            return 2;
        }
    }
    std::string line;
    while (std::getline(in, line)) {
        const auto prompt = std::string(text::trim(line));
        if (prompt.empty()) continue;
        if (prompt == "/quit") break;
        ChatTurn turn;
        try {
            turn = answer(prompt, session.dict, session.store, session.embedder, session.llm, session.options);
        } catch (const Error& e) {
            err << "error: " << e.what() << "\n";
            continue;
        }
        turn.timestamp = current_timestamp();
        out << turn.response << "\n";
        if (session.trace) out << trace_line(turn) << "\n";
        out.flush();
        if (log.is_open()) {
            log << turn_to_json(turn) << "\n";
            log.flush();
            if (!log) {
                err << "error: failed writing session log " << session.log_path.string() << "\n";
                return 2;
            }
        }
    }
    if (in.bad()) {
        err << "error: failed reading input\n";
        return 2;
    }
    return 0;
}

}  // namespace ontorag
