#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ontorag {

// Fixed-length vector of finite reals.
class EmbeddingVector {
public:
    // Throws DataError when empty or when any entry is not finite.
    explicit EmbeddingVector(std::vector<double> values);

    std::span<const double> values() const noexcept { return values_; }
    std::size_t dim() const noexcept { return values_.size(); }
    double operator[](std::size_t i) const { return values_[i]; }
    bool is_zero() const noexcept;

    friend bool operator==(const EmbeddingVector&, const EmbeddingVector&) = default;

private:
    std::vector<double> values_;
};

class EmbeddingProvider {
public:
    virtual ~EmbeddingProvider() = default;

    // One vector of dim() per input text, in input order.
    virtual std::vector<EmbeddingVector> embed(std::span<const std::string> texts) const = 0;
    virtual std::size_t dim() const = 0;
    virtual std::string name() const = 0;
    // Concurrent embed() calls the provider tolerates; 1 means serial only.
    virtual std::size_t max_in_flight() const { return 1; }

    EmbeddingVector embed_one(const std::string& text) const;
};

inline constexpr std::uint64_t kEmbedHashSeed = 0x9E3779B97F4A7C15ULL;
inline constexpr std::size_t kMinDeterministicDim = 8;

// Feature-hashed bag of word tokens scaled to unit norm. Token-free text maps
// to e0. Throws DataError for dim < 8.
EmbeddingVector deterministic_embed(std::string_view text, std::size_t dim);

class DeterministicEmbedder final : public EmbeddingProvider {
public:
    explicit DeterministicEmbedder(std::size_t dim);

    std::vector<EmbeddingVector> embed(std::span<const std::string> texts) const override;
    std::size_t dim() const override { return dim_; }
    std::string name() const override { return "deterministic"; }
    std::size_t max_in_flight() const override;

private:
    std::size_t dim_;
};

// Client for the common embeddings API shape:
//   POST {"model": m, "input": [texts]} -> {"data": [{"embedding": [...]}, ...]}
class HttpEmbeddingProvider final : public EmbeddingProvider {
public:
    struct Options {
        std::string url;
        std::string model = "text-embedding";
        std::string api_key;  // bearer token; empty sends no Authorization header
        std::size_t dim = 384;
        std::size_t batch_size = 64;
        std::size_t max_in_flight = 4;
        int timeout_seconds = 60;
    };

    explicit HttpEmbeddingProvider(Options options);

    std::vector<EmbeddingVector> embed(std::span<const std::string> texts) const override;
    std::size_t dim() const override { return options_.dim; }
    std::string name() const override { return "http:" + options_.url; }
    std::size_t max_in_flight() const override { return options_.max_in_flight; }

private:
    std::vector<EmbeddingVector> embed_batch(std::span<const std::string> texts) const;

    Options options_;
};

// "deterministic" or "http:<url>". HTTP providers read their bearer token
// from EMBED_API_KEY.
std::unique_ptr<EmbeddingProvider> make_embedding_provider(std::string_view spec, std::size_t dim,
                                                           std::string model = "text-embedding");

}  // namespace ontorag
