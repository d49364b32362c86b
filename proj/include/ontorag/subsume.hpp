#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "ontorag/align.hpp"
#include "ontorag/ontology.hpp"

namespace ontorag {

enum class Polarity { positive, negative };

std::string_view to_string(Polarity p);
Polarity parse_polarity(std::string_view s);

// (anchor in the source ontology, candidate in the target ontology). A
// positive pair means the candidate sits below a target class the anchor is
// equivalent to.
struct SubsumptionPair {
    ClassIri anchor;
    ClassIri candidate;
    Polarity polarity = Polarity::positive;
    std::optional<double> score;

    friend bool operator==(const SubsumptionPair&, const SubsumptionPair&) = default;
};

// Normalized source label -> display labels of accepted candidates, each list
// ordered by descending score then label, without duplicates.
struct SubsumptionDictionary {
    std::map<std::string, std::vector<std::string>> entries;

    bool empty() const { return entries.empty(); }
    friend bool operator==(const SubsumptionDictionary&, const SubsumptionDictionary&) = default;
};

inline constexpr double kDefaultSubsumptionThreshold = 0.5;
inline constexpr std::size_t kDefaultMaxPerAnchor = 3;
inline constexpr std::size_t kDefaultNegativesPerPositive = 1;

// Uniform index in [0, n) from a 64-bit Mersenne Twister by rejection
// sampling, so the draw sequence is identical on every standard library.
std::size_t uniform_index(std::mt19937_64& rng, std::size_t n);

// Positives: every (c1, d) with c1 == c2 accepted and d in the subclass
// closure of c2, sorted and unique. Then, for each positive in order,
// `negatives_per_positive` pairs (c1, r) with r drawn from the target's
// classes (sorted by IRI) via uniform_index, redrawn while (c1, r) is a
// positive. Throws DataError when negatives are requested but the target has
// fewer than 2 classes, or when an anchor covers the whole target.
std::vector<SubsumptionPair> build_subsumption_corpus(const Ontology& source, const Ontology& target,
                                                      const std::vector<EquivalenceMapping>& equivalences,
                                                      std::size_t negatives_per_positive, std::uint64_t seed);

// Scores each pair on (anchor names, candidate names) and returns every pair
// with its score filled in.
std::vector<SubsumptionPair> score_subsumptions(const std::vector<SubsumptionPair>& pairs, const Ontology& source,
                                                const Ontology& target, const SynonymyScorer& scorer);

// Pairs scoring >= threshold, with their scores.
std::vector<SubsumptionPair> predict_subsumptions(const std::vector<SubsumptionPair>& pairs, const Ontology& source,
                                                  const Ontology& target, const SynonymyScorer& scorer,
                                                  double threshold = kDefaultSubsumptionThreshold);

// Throws NotFoundError when a pair references a missing class.
SubsumptionDictionary build_dictionary(const std::vector<SubsumptionPair>& accepted, const Ontology& source,
                                       const Ontology& target, std::size_t max_per_anchor = kDefaultMaxPerAnchor);

// Header plus `anchor_iri\tcandidate_iri\tpolarity\tscore` (score may be empty).
std::string corpus_to_tsv(const std::vector<SubsumptionPair>& pairs);
std::vector<SubsumptionPair> parse_corpus_tsv(std::string_view tsv);

// Accepted subsumptions: header plus `anchor_iri\tcandidate_iri\tscore\tSUBSUMED_BY`.
std::string subsumptions_to_tsv(const std::vector<SubsumptionPair>& accepted);
std::vector<SubsumptionPair> parse_subsumptions_tsv(std::string_view tsv);

// {"<normalized label>": ["label", ...]} with sorted keys.
std::string dictionary_to_json(const SubsumptionDictionary& dict);
SubsumptionDictionary parse_dictionary_json(std::string_view json);

}  // namespace ontorag
