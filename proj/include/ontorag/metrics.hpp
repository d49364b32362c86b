#pragma once

#include <span>

#include "ontorag/embedding.hpp"

namespace ontorag {

// Throw DataError on dimension mismatch; cosine also on a zero vector.
double dot_product(std::span<const double> u, std::span<const double> v);
double euclidean_distance(std::span<const double> u, std::span<const double> v);
double cosine_similarity(std::span<const double> u, std::span<const double> v);

inline double dot_product(const EmbeddingVector& u, const EmbeddingVector& v) {
    return dot_product(u.values(), v.values());
}
inline double euclidean_distance(const EmbeddingVector& u, const EmbeddingVector& v) {
    return euclidean_distance(u.values(), v.values());
}
inline double cosine_similarity(const EmbeddingVector& u, const EmbeddingVector& v) {
    return cosine_similarity(u.values(), v.values());
}

// The three measures for one vector pair; cosine is reported as a percentage.
struct SimilarityReport {
    double cosine_pct = 0.0;
    double dot = 0.0;
    double euclidean = 0.0;

    friend bool operator==(const SimilarityReport&, const SimilarityReport&) = default;
};

SimilarityReport similarity_report(std::span<const double> u, std::span<const double> v);

inline SimilarityReport similarity_report(const EmbeddingVector& u, const EmbeddingVector& v) {
    return similarity_report(u.values(), v.values());
}

// Component-wise mean of contextual similarity and factual accuracy.
SimilarityReport hallucination_index(const SimilarityReport& contextual, const SimilarityReport& factual);

// 100 * (with - without) / without. Throws DataError when without == 0.
double relative_change(double with_value, double without_value);

}  // namespace ontorag
