#include "ontorag/subsume.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <limits>
#include <set>

#include <nlohmann/json.hpp>

#include "ontorag/error.hpp"
#include "ontorag/io.hpp"
#include "ontorag/parallel.hpp"
#include "ontorag/text.hpp"

namespace ontorag {

namespace {

std::string format_score(double score) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", score);
    return buf;
}

double parse_score(std::string_view s, std::size_t line) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || !(v >= 0.0 && v <= 1.0))
        throw ParseError("line " + std::to_string(line) + ": bad score '" + std::string(s) + "'");
    return v;
}

std::vector<std::vector<std::string>> tsv_rows(std::string_view tsv, std::string_view header_start,
                                               std::size_t columns) {
    const auto rows = io::lines(tsv);
    if (rows.empty() || !rows.front().starts_with(header_start))
        throw ParseError("TSV must start with a header beginning '" + std::string(header_start) + "'");
    std::vector<std::vector<std::string>> out;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (rows[i].empty()) continue;
        auto cols = text::split(rows[i], '\t');
        if (cols.size() != columns)
            throw ParseError("line " + std::to_string(i + 1) + ": expected " + std::to_string(columns) + " columns");
        out.push_back(std::move(cols));
    }
    return out;
}

}  // namespace

std::string_view to_string(Polarity p) { return p == Polarity::positive ? "positive" : "negative"; }

Polarity parse_polarity(std::string_view s) {
    if (s == "positive") return Polarity::positive;
    if (s == "negative") return Polarity::negative;
    throw ParseError("unknown polarity '" + std::string(s) + "'");
}

std::size_t uniform_index(std::mt19937_64& rng, std::size_t n) {
    const std::uint64_t bound = n;
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t x = 0;
    do {
        x = rng();
    } while (x >= limit);
    return static_cast<std::size_t>(x % bound);
}

std::vector<SubsumptionPair> build_subsumption_corpus(const Ontology& source, const Ontology& target,
                                                      const std::vector<EquivalenceMapping>& equivalences,
                                                      std::size_t negatives_per_positive, std::uint64_t seed) {
    if (negatives_per_positive > 0 && target.size() < 2)
        throw DataError("negative sampling needs a target ontology with at least 2 classes");

    std::set<std::pair<ClassIri, ClassIri>> positives;
    for (const auto& m : equivalences) {
        if (!m.accepted) throw DataError("equivalence not accepted: " + m.pair.source.str());
        source.at(m.pair.source);
        for (const auto& d : subclass_closure(target, m.pair.target)) positives.emplace(m.pair.source, d);
    }

    std::vector<SubsumptionPair> corpus;
    corpus.reserve(positives.size() * (1 + negatives_per_positive));
    for (const auto& [anchor, candidate] : positives)
        corpus.push_back({anchor, candidate, Polarity::positive, std::nullopt});
    if (negatives_per_positive == 0) return corpus;

    std::map<ClassIri, std::size_t> positives_per_anchor;
    for (const auto& p : positives) ++positives_per_anchor[p.first];
    for (const auto& [anchor, count] : positives_per_anchor) {
        if (count >= target.size())
            throw DataError("no negative candidate left for " + anchor.str() + ": every target class is positive");
    }

    std::vector<ClassIri> pool;
    pool.reserve(target.size());
    for (const auto& [iri, c] : target.classes()) pool.push_back(iri);

    std::mt19937_64 rng(seed);
    for (const auto& [anchor, candidate] : positives) {
        for (std::size_t k = 0; k < negatives_per_positive; ++k) {
            const ClassIri* drawn = nullptr;
            do {
                drawn = &pool[uniform_index(rng, pool.size())];
            } while (positives.contains({anchor, *drawn}));
            corpus.push_back({anchor, *drawn, Polarity::negative, std::nullopt});
        }
    }
    return corpus;
}

std::vector<SubsumptionPair> score_subsumptions(const std::vector<SubsumptionPair>& pairs, const Ontology& source,
                                                const Ontology& target, const SynonymyScorer& scorer) {
    std::vector<SubsumptionPair> out = pairs;
    detail::parallel_for(out.size(), scorer.max_in_flight(), [&](std::size_t i) {
        auto& p = out[i];
        try {
            p.score = score_classes(scorer, source.at(p.anchor), target.at(p.candidate));
        } catch (const NotFoundError&) {
            throw;
        } catch (const std::exception& e) {
            throw ProviderError("subsume", "scoring (" + p.anchor.str() + ", " + p.candidate.str() +
                                               ") failed: " + e.what());
        }
    });
    return out;
}

std::vector<SubsumptionPair> predict_subsumptions(const std::vector<SubsumptionPair>& pairs, const Ontology& source,
                                                  const Ontology& target, const SynonymyScorer& scorer,
                                                  double threshold) {
    auto scored = score_subsumptions(pairs, source, target, scorer);
    std::erase_if(scored, [&](const SubsumptionPair& p) { return !(*p.score >= threshold); });
    return scored;
}

SubsumptionDictionary build_dictionary(const std::vector<SubsumptionPair>& accepted, const Ontology& source,
                                       const Ontology& target, std::size_t max_per_anchor) {
    // best score per (key, candidate label)
    std::map<std::string, std::map<std::string, double>> best;
    for (const auto& p : accepted) {
        const std::string key = normalize_label(source.at(p.anchor).display_label());
        const std::string label = target.at(p.candidate).display_label();
        const double score = p.score.value_or(1.0);
        auto [it, inserted] = best[key].try_emplace(label, score);
        if (!inserted) it->second = std::max(it->second, score);
    }
    SubsumptionDictionary dict;
    for (auto& [key, labels] : best) {
        if (key.empty()) continue;
        std::vector<std::pair<std::string, double>> ranked(labels.begin(), labels.end());
        std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
            if (a.second != b.second) return a.second > b.second;
            return a.first < b.first;
        });
        if (ranked.size() > max_per_anchor) ranked.resize(max_per_anchor);
        if (ranked.empty()) continue;
        auto& list = dict.entries[key];
        for (auto& [label, score] : ranked) list.push_back(std::move(label));
    }
    return dict;
}

std::string corpus_to_tsv(const std::vector<SubsumptionPair>& pairs) {
    std::string out = "anchor_iri\tcandidate_iri\tpolarity\tscore\n";
    for (const auto& p : pairs) {
        out += p.anchor.str() + "\t" + p.candidate.str() + "\t" + std::string(to_string(p.polarity)) + "\t" +
               (p.score ? format_score(*p.score) : std::string()) + "\n";
    }
    return out;
}

std::vector<SubsumptionPair> parse_corpus_tsv(std::string_view tsv) {
    std::vector<SubsumptionPair> out;
    std::size_t line = 1;
    for (auto& cols : tsv_rows(tsv, "anchor_iri\t", 4)) {
        ++line;
        std::optional<double> score;
        if (!cols[3].empty()) score = parse_score(cols[3], line);
        out.push_back({ClassIri(cols[0]), ClassIri(cols[1]), parse_polarity(cols[2]), score});
    }
    return out;
}

std::string subsumptions_to_tsv(const std::vector<SubsumptionPair>& accepted) {
    std::string out = "anchor_iri\tcandidate_iri\tscore\trelation\n";
    for (const auto& p : accepted) {
        out += p.anchor.str() + "\t" + p.candidate.str() + "\t" + format_score(p.score.value_or(1.0)) +
               "\tSUBSUMED_BY\n";
    }
    return out;
}

std::vector<SubsumptionPair> parse_subsumptions_tsv(std::string_view tsv) {
    std::vector<SubsumptionPair> out;
    std::size_t line = 1;
    for (auto& cols : tsv_rows(tsv, "anchor_iri\t", 4)) {
        ++line;
        if (cols[3] != "SUBSUMED_BY") throw ParseError("line " + std::to_string(line) + ": expected SUBSUMED_BY");
        out.push_back({ClassIri(cols[0]), ClassIri(cols[1]), Polarity::positive, parse_score(cols[2], line)});
    }
    return out;
}

std::string dictionary_to_json(const SubsumptionDictionary& dict) {
    nlohmann::json doc = nlohmann::json::object();
    for (const auto& [key, labels] : dict.entries) doc[key] = labels;
    return doc.dump(2) + "\n";
}

SubsumptionDictionary parse_dictionary_json(std::string_view json) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("malformed dictionary JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ParseError("dictionary JSON must be an object");
    SubsumptionDictionary dict;
    for (const auto& [key, value] : doc.items()) {
        if (!value.is_array()) throw ParseError("dictionary entry '" + key + "' must be an array");
        std::vector<std::string> labels;
        for (const auto& v : value) {
            if (!v.is_string()) throw ParseError("dictionary entry '" + key + "' must hold strings");
            auto label = v.get<std::string>();
            if (std::find(labels.begin(), labels.end(), label) == labels.end()) labels.push_back(std::move(label));
        }
        dict.entries[key] = std::move(labels);
    }
    return dict;
}

}  // namespace ontorag
