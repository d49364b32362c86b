#pragma once

#include <compare>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "ontorag/embedding.hpp"
#include "ontorag/ontology.hpp"

namespace ontorag {

struct ClassPair {
    ClassIri source;
    ClassIri target;

    friend auto operator<=>(const ClassPair&, const ClassPair&) = default;
    friend bool operator==(const ClassPair&, const ClassPair&) = default;
};

struct EquivalenceMapping {
    ClassPair pair;
    double score = 0.0;
    bool accepted = false;

    friend bool operator==(const EquivalenceMapping&, const EquivalenceMapping&) = default;
};

// Scores how likely two class names denote the same concept. Implementations
// must return values in [0, 1].
class SynonymyScorer {
public:
    virtual ~SynonymyScorer() = default;

    virtual double score(std::string_view a, std::string_view b) const = 0;
    virtual std::string name() const = 0;
    // Concurrent score() calls allowed; 1 means serial only.
    virtual std::size_t max_in_flight() const { return 1; }
};

// 1.0 on equal normalized strings, else max(token Jaccard, 1 - normalized
// edit distance).
double lexical_text_score(std::string_view a, std::string_view b);

// lexical_text_score maximized over (label + synonyms) of both classes.
double lexical_score(const OntologyClass& a, const OntologyClass& b);

class LexicalScorer final : public SynonymyScorer {
public:
    double score(std::string_view a, std::string_view b) const override { return lexical_text_score(a, b); }
    std::string name() const override { return "lexical"; }
    std::size_t max_in_flight() const override;
};

// Always returns the same value; useful to accept every candidate.
class ConstantScorer final : public SynonymyScorer {
public:
    explicit ConstantScorer(double value);

    double score(std::string_view, std::string_view) const override { return value_; }
    std::string name() const override;
    std::size_t max_in_flight() const override;

private:
    double value_;
};

// Cosine similarity of the two texts' embeddings, clamped to [0, 1].
class EmbeddingScorer final : public SynonymyScorer {
public:
    explicit EmbeddingScorer(const EmbeddingProvider& provider) : provider_(provider) {}

    double score(std::string_view a, std::string_view b) const override;
    std::string name() const override { return "embedding:" + provider_.name(); }
    std::size_t max_in_flight() const override { return provider_.max_in_flight(); }

private:
    EmbeddingVector embedding(std::string_view text) const;

    const EmbeddingProvider& provider_;
    mutable std::mutex mu_;
    mutable std::unordered_map<std::string, EmbeddingVector> cache_;
};

// "lexical", "embedding" (needs `provider`), or "constant:<value>".
std::unique_ptr<SynonymyScorer> make_scorer(std::string_view spec, const EmbeddingProvider* provider);

// scorer.score maximized over (label + synonyms) of both classes. Throws
// ProviderError if the scorer leaves [0, 1].
double score_classes(const SynonymyScorer& scorer, const OntologyClass& a, const OntologyClass& b);

// Pairs whose labels or synonyms share a normalized token of length >= 3,
// sorted by (source, target).
std::vector<ClassPair> candidate_pairs(const Ontology& source, const Ontology& target);

// Full cross product, sorted.
std::vector<ClassPair> all_pairs(const Ontology& source, const Ontology& target);

inline constexpr double kDefaultEquivalenceThreshold = 0.9;

struct AlignOptions {
    double threshold = kDefaultEquivalenceThreshold;
    bool blocking = true;
};

// Scores every candidate pair. Every scored pair is returned, flagged
// accepted iff score >= threshold. Throws ProviderError naming the pair when
// the scorer fails.
std::vector<EquivalenceMapping> align(const Ontology& source, const Ontology& target, const SynonymyScorer& scorer,
                                      const AlignOptions& options = {});

std::vector<EquivalenceMapping> accepted_mappings(const std::vector<EquivalenceMapping>& mappings);

// Header plus `source_iri\ttarget_iri\tscore\tEQUIV`, sorted by pair.
std::string mappings_to_tsv(const std::vector<EquivalenceMapping>& mappings);

// Inverse of mappings_to_tsv; every row is taken as accepted.
std::vector<EquivalenceMapping> parse_mappings_tsv(std::string_view tsv);

}  // namespace ontorag
