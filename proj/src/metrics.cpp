#include "ontorag/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ontorag/error.hpp"

namespace ontorag {

namespace {

void require_same_dim(std::span<const double> u, std::span<const double> v) {
    if (u.size() != v.size())
        throw DataError("dimension mismatch: " + std::to_string(u.size()) + " vs " + std::to_string(v.size()));
}

}  // namespace

double dot_product(std::span<const double> u, std::span<const double> v) {
    require_same_dim(u, v);
    double sum = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) sum += u[i] * v[i];
    return sum;
}

double euclidean_distance(std::span<const double> u, std::span<const double> v) {
    require_same_dim(u, v);
    double sum = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        const double d = u[i] - v[i];
        sum += d * d;
    }
    return std::sqrt(sum);
}

double cosine_similarity(std::span<const double> u, std::span<const double> v) {
    require_same_dim(u, v);
    const double nu = std::sqrt(dot_product(u, u));
    const double nv = std::sqrt(dot_product(v, v));
    if (nu == 0.0 || nv == 0.0) throw DataError("cosine similarity of a zero vector");
    return std::clamp(dot_product(u, v) / (nu * nv), -1.0, 1.0);
}

SimilarityReport similarity_report(std::span<const double> u, std::span<const double> v) {
    return {cosine_similarity(u, v) * 100.0, dot_product(u, v), euclidean_distance(u, v)};
}

SimilarityReport hallucination_index(const SimilarityReport& contextual, const SimilarityReport& factual) {
    return {(contextual.cosine_pct + factual.cosine_pct) / 2.0, (contextual.dot + factual.dot) / 2.0,
            (contextual.euclidean + factual.euclidean) / 2.0};
}

double relative_change(double with_value, double without_value) {
    if (without_value == 0.0) throw DataError("relative change against a zero baseline");
    return 100.0 * (with_value - without_value) / without_value;
}

}  // namespace ontorag
