#include "ontorag/embedding.hpp"

#include <cmath>
#include <cstdlib>

#include "http_client.hpp"
#include "ontorag/error.hpp"
#include "ontorag/parallel.hpp"
#include "ontorag/text.hpp"

namespace ontorag {

EmbeddingVector::EmbeddingVector(std::vector<double> values) : values_(std::move(values)) {
    if (values_.empty()) throw DataError("embedding vector must have positive dimension");
    for (double v : values_) {
        if (!std::isfinite(v)) throw DataError("embedding vector has a non-finite entry");
    }
}

bool EmbeddingVector::is_zero() const noexcept {
    for (double v : values_) {
        if (v != 0.0) return false;
    }
    return true;
}

EmbeddingVector EmbeddingProvider::embed_one(const std::string& text) const {
    auto out = embed(std::span<const std::string>(&text, 1));
    if (out.size() != 1) throw ProviderError("embed", name() + " returned " + std::to_string(out.size()) + " vectors for 1 input");
    return std::move(out.front());
}

EmbeddingVector deterministic_embed(std::string_view input, std::size_t dim) {
    if (dim < kMinDeterministicDim)
        throw DataError("deterministic embedding needs dim >= " + std::to_string(kMinDeterministicDim));
    std::vector<double> counts(dim, 0.0);
    const auto tokens = text::word_tokens(input);
    if (tokens.empty()) {
        counts[0] = 1.0;
        return EmbeddingVector(std::move(counts));
    }
    for (const auto& t : tokens) counts[text::fnv1a64(t, kEmbedHashSeed) % dim] += 1.0;
    double sq = 0.0;
    for (double c : counts) sq += c * c;
    const double norm = std::sqrt(sq);
    for (double& c : counts) c /= norm;
    return EmbeddingVector(std::move(counts));
}

DeterministicEmbedder::DeterministicEmbedder(std::size_t dim) : dim_(dim) {
    if (dim < kMinDeterministicDim)
        throw DataError("deterministic embedding needs dim >= " + std::to_string(kMinDeterministicDim));
}

std::vector<EmbeddingVector> DeterministicEmbedder::embed(std::span<const std::string> texts) const {
    std::vector<EmbeddingVector> out;
    out.reserve(texts.size());
    for (const auto& t : texts) out.push_back(deterministic_embed(t, dim_));
    return out;
}

std::size_t DeterministicEmbedder::max_in_flight() const { return detail::hardware_workers(); }

HttpEmbeddingProvider::HttpEmbeddingProvider(Options options) : options_(std::move(options)) {
    if (options_.url.empty()) throw DataError("embedding provider URL is empty");
    if (options_.dim == 0) throw DataError("embedding provider dim must be positive");
    if (options_.batch_size == 0) options_.batch_size = 1;
    if (options_.max_in_flight == 0) options_.max_in_flight = 1;
}

std::vector<EmbeddingVector> HttpEmbeddingProvider::embed_batch(std::span<const std::string> texts) const {
    const nlohmann::json body = {{"model", options_.model},
                                 {"input", std::vector<std::string>(texts.begin(), texts.end())}};
    const auto reply = detail::post_json(options_.url, body, options_.api_key, options_.timeout_seconds, "embed");
    const auto data = reply.find("data");
    if (data == reply.end() || !data->is_array())
        throw ProviderError("embed", "response has no 'data' array");
    if (data->size() != texts.size())
        throw ProviderError("embed", "expected " + std::to_string(texts.size()) + " embeddings, got " +
                                         std::to_string(data->size()));
    std::vector<EmbeddingVector> out;
    out.reserve(texts.size());
    for (const auto& item : *data) {
        const auto emb = item.find("embedding");
        if (emb == item.end() || !emb->is_array()) throw ProviderError("embed", "data item without 'embedding'");
        std::vector<double> values;
        values.reserve(emb->size());
        for (const auto& v : *emb) {
            if (!v.is_number()) throw ProviderError("embed", "non-numeric embedding entry");
            values.push_back(v.get<double>());
        }
        if (values.size() != options_.dim)
            throw ProviderError("embed", "expected dim " + std::to_string(options_.dim) + ", got " +
                                             std::to_string(values.size()));
        try {
            out.emplace_back(std::move(values));
        } catch (const DataError& e) {
            throw ProviderError("embed", e.what());
        }
    }
    return out;
}

std::vector<EmbeddingVector> HttpEmbeddingProvider::embed(std::span<const std::string> texts) const {
    const std::size_t batches = (texts.size() + options_.batch_size - 1) / options_.batch_size;
    std::vector<std::vector<EmbeddingVector>> parts(batches);
    detail::parallel_for(batches, options_.max_in_flight, [&](std::size_t b) {
        const std::size_t begin = b * options_.batch_size;
        const std::size_t len = std::min(options_.batch_size, texts.size() - begin);
        parts[b] = embed_batch(texts.subspan(begin, len));
    });
    std::vector<EmbeddingVector> out;
    out.reserve(texts.size());
    for (auto& p : parts) {
        for (auto& v : p) out.push_back(std::move(v));
    }
    return out;
}

std::unique_ptr<EmbeddingProvider> make_embedding_provider(std::string_view spec, std::size_t dim,
                                                           std::string model) {
    if (spec == "deterministic") return std::make_unique<DeterministicEmbedder>(dim);
    if (spec.starts_with("http:")) {
        HttpEmbeddingProvider::Options opts;
        opts.url = std::string(spec.substr(5));
        opts.model = std::move(model);
        opts.dim = dim;
        if (const char* key = std::getenv("EMBED_API_KEY")) opts.api_key = key;
        return std::make_unique<HttpEmbeddingProvider>(std::move(opts));
    }
    throw DataError("unknown embedding provider '" + std::string(spec) + "' (expected deterministic|http:<url>)");
}

}  // namespace ontorag
