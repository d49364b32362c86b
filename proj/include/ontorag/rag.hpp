#pragma once

#include <filesystem>
#include <iosfwd>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "ontorag/embedding.hpp"
#include "ontorag/infiltrate.hpp"
#include "ontorag/subsume.hpp"
#include "ontorag/vector_store.hpp"

namespace ontorag {

// Returned by providers in place of an empty completion.
inline constexpr std::string_view kRefusalMarker = "[no answer]";

struct LlmRequest {
    std::string system;  // instruction + retrieved context
    std::string user;    // "Question: <prompt>"

    std::string rendered() const { return system + "\n" + user; }
};

class LlmProvider {
public:
    virtual ~LlmProvider() = default;

    virtual std::string complete(const std::string& system, const std::string& user) const = 0;
    virtual std::string name() const = 0;
};

// Replies with the rendered request; used for offline runs and tests.
class EchoLlm final : public LlmProvider {
public:
    std::string complete(const std::string& system, const std::string& user) const override {
        return LlmRequest{system, user}.rendered();
    }
    std::string name() const override { return "echo"; }
};

// Chat-completions client:
//   POST {"model", "messages": [{"role", "content"}, ...]}
//   -> choices[0].message.content
class HttpLlmProvider final : public LlmProvider {
public:
    struct Options {
        std::string url;
        std::string model = "gpt-3.5-turbo";
        std::string api_key;
        int timeout_seconds = 120;
    };

    explicit HttpLlmProvider(Options options);

    std::string complete(const std::string& system, const std::string& user) const override;
    std::string name() const override { return "http:" + options_.url; }

private:
    Options options_;
};

// "echo" or "http:<url>" (bearer token from LLM_API_KEY).
std::unique_ptr<LlmProvider> make_llm_provider(std::string_view spec, std::string model = "gpt-3.5-turbo");

struct RetrievedContext {
    std::string chunk_id;
    double score = 0.0;
    std::string text;

    friend bool operator==(const RetrievedContext&, const RetrievedContext&) = default;
};

struct ChatTurn {
    std::string raw_prompt;
    AugmentedPrompt augmented_prompt;
    std::vector<RetrievedContext> retrieved;  // descending score
    std::string response;
    std::string timestamp;  // set by the session, empty from answer()

    friend bool operator==(const ChatTurn&, const ChatTurn&) = default;
};

LlmRequest build_request(std::string_view prompt, const std::vector<RetrievedContext>& context);

// Re-renders the request a logged turn was answered from.
LlmRequest build_request(const ChatTurn& turn);

struct AnswerOptions {
    std::size_t k = kDefaultTopK;
    bool use_subsumptions = true;
    InfiltrateOptions infiltrate;
};

// Augments (optionally), embeds the augmented prompt, retrieves k chunks and
// asks the LLM. Failures surface as ProviderError with stage
// embed|retrieve|complete. Throws DataError for an empty store.
ChatTurn answer(const std::string& raw_prompt, const SubsumptionDictionary& dict, const VectorStore& store,
                const EmbeddingProvider& embedder, const LlmProvider& llm, const AnswerOptions& options = {});

// One-line JSON record.
std::string turn_to_json(const ChatTurn& turn);
ChatTurn turn_from_json(std::string_view line);

struct ChatSession {
    const SubsumptionDictionary& dict;
    const VectorStore& store;
    const EmbeddingProvider& embedder;
    const LlmProvider& llm;
    AnswerOptions options;
    bool trace = false;
    std::filesystem::path log_path;  // empty disables logging
};

// Line-oriented loop: one prompt per line, "/quit" or EOF ends it. Returns 0
// on a clean exit and 2 when the session log cannot be written.
int chat_repl(const ChatSession& session, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace ontorag
