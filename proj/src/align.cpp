#include "ontorag/align.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>

#include "ontorag/error.hpp"
#include "ontorag/io.hpp"
#include "ontorag/metrics.hpp"
#include "ontorag/parallel.hpp"
#include "ontorag/text.hpp"

namespace ontorag {

namespace {

constexpr std::size_t kMinBlockingTokenLength = 3;

double token_jaccard(const std::string& a, const std::string& b) {
    const auto ta = text::word_tokens(a);
    const auto tb = text::word_tokens(b);
    const std::set<std::string> sa(ta.begin(), ta.end());
    const std::set<std::string> sb(tb.begin(), tb.end());
    if (sa.empty() && sb.empty()) return 0.0;
    std::size_t common = 0;
    for (const auto& t : sa) common += sb.count(t);
    return static_cast<double>(common) / static_cast<double>(sa.size() + sb.size() - common);
}

std::set<std::string> blocking_tokens(const OntologyClass& c) {
    std::set<std::string> out;
    for (const auto& name : c.names()) {
        for (auto& t : text::word_tokens(normalize_label(name))) {
            if (t.size() >= kMinBlockingTokenLength) out.insert(std::move(t));
        }
    }
    return out;
}

std::string format_score(double score) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", score);
    return buf;
}

double parse_double(std::string_view s, std::size_t line) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw ParseError("line " + std::to_string(line) + ": bad score '" + std::string(s) + "'");
    return v;
}

}  // namespace

double lexical_text_score(std::string_view a, std::string_view b) {
    const std::string na = normalize_label(a);
    const std::string nb = normalize_label(b);
    if (na == nb) return 1.0;
    const std::size_t longest = std::max(na.size(), nb.size());
    const double edit_sim =
        1.0 - static_cast<double>(text::edit_distance(na, nb)) / static_cast<double>(longest);
    return std::clamp(std::max(token_jaccard(na, nb), edit_sim), 0.0, 1.0);
}

double lexical_score(const OntologyClass& a, const OntologyClass& b) {
    static const LexicalScorer scorer;
    return score_classes(scorer, a, b);
}

std::size_t LexicalScorer::max_in_flight() const { return detail::hardware_workers(); }

ConstantScorer::ConstantScorer(double value) : value_(value) {
    if (!(value >= 0.0 && value <= 1.0)) throw DataError("constant scorer value must be within [0, 1]");
}

std::string ConstantScorer::name() const { return "constant:" + format_score(value_); }

std::size_t ConstantScorer::max_in_flight() const { return detail::hardware_workers(); }

EmbeddingVector EmbeddingScorer::embedding(std::string_view text) const {
    const std::string key(text);
    {
        std::lock_guard lock(mu_);
        if (const auto it = cache_.find(key); it != cache_.end()) return it->second;
    }
    EmbeddingVector v = provider_.embed_one(key);
    std::lock_guard lock(mu_);
    return cache_.try_emplace(key, std::move(v)).first->second;
}

double EmbeddingScorer::score(std::string_view a, std::string_view b) const {
    const auto va = embedding(a);
    const auto vb = embedding(b);
    if (va.is_zero() || vb.is_zero()) return 0.0;
    return std::clamp(cosine_similarity(va, vb), 0.0, 1.0);
}

std::unique_ptr<SynonymyScorer> make_scorer(std::string_view spec, const EmbeddingProvider* provider) {
    if (spec == "lexical") return std::make_unique<LexicalScorer>();
    if (spec == "embedding") {
        if (!provider) throw DataError("embedding scorer needs an embedding provider");
        return std::make_unique<EmbeddingScorer>(*provider);
    }
    if (spec.starts_with("constant:")) {
        const auto value = spec.substr(9);
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
        if (ec != std::errc() || ptr != value.data() + value.size())
            throw DataError("bad constant scorer value: " + std::string(value));
        return std::make_unique<ConstantScorer>(v);
    }
    throw DataError("unknown scorer '" + std::string(spec) + "' (expected lexical|embedding|constant:<v>)");
}

double score_classes(const SynonymyScorer& scorer, const OntologyClass& a, const OntologyClass& b) {
    double best = 0.0;
    for (const auto& na : a.names()) {
        for (const auto& nb : b.names()) {
            const double s = scorer.score(na, nb);
            if (!(s >= 0.0 && s <= 1.0))
                throw ProviderError("score", scorer.name() + " returned out-of-range score " + std::to_string(s));
            best = std::max(best, s);
            if (best >= 1.0) return best;
        }
    }
    return best;
}

std::vector<ClassPair> candidate_pairs(const Ontology& source, const Ontology& target) {
    std::map<std::string, std::vector<ClassIri>> index;
    for (const auto& [iri, c] : target.classes()) {
        for (const auto& t : blocking_tokens(c)) index[t].push_back(iri);
    }
    std::vector<ClassPair> pairs;
    for (const auto& [iri, c] : source.classes()) {
        std::set<ClassIri> hits;
        for (const auto& t : blocking_tokens(c)) {
            if (const auto it = index.find(t); it != index.end()) hits.insert(it->second.begin(), it->second.end());
        }
        for (const auto& h : hits) pairs.push_back({iri, h});
    }
    return pairs;
}

std::vector<ClassPair> all_pairs(const Ontology& source, const Ontology& target) {
    std::vector<ClassPair> pairs;
    pairs.reserve(source.size() * target.size());
    for (const auto& s : source.classes()) {
        for (const auto& t : target.classes()) pairs.push_back({s.first, t.first});
    }
    return pairs;
}

std::vector<EquivalenceMapping> align(const Ontology& source, const Ontology& target, const SynonymyScorer& scorer,
                                      const AlignOptions& options) {
    if (!std::isfinite(options.threshold)) throw DataError("threshold must be finite");
    const auto pairs = options.blocking ? candidate_pairs(source, target) : all_pairs(source, target);
    std::vector<double> scores(pairs.size());
    detail::parallel_for(pairs.size(), scorer.max_in_flight(), [&](std::size_t i) {
        try {
            scores[i] = score_classes(scorer, source.at(pairs[i].source), target.at(pairs[i].target));
        } catch (const std::exception& e) {
            throw ProviderError("align", "scoring (" + pairs[i].source.str() + ", " + pairs[i].target.str() +
                                             ") failed: " + e.what());
        }
    });
    std::vector<EquivalenceMapping> out;
    out.reserve(pairs.size());
    for (std::size_t i = 0; i < pairs.size(); ++i)
        out.push_back({pairs[i], scores[i], scores[i] >= options.threshold});
    return out;
}

std::vector<EquivalenceMapping> accepted_mappings(const std::vector<EquivalenceMapping>& mappings) {
    std::vector<EquivalenceMapping> out;
    std::copy_if(mappings.begin(), mappings.end(), std::back_inserter(out),
                 [](const EquivalenceMapping& m) { return m.accepted; });
    return out;
}

std::string mappings_to_tsv(const std::vector<EquivalenceMapping>& mappings) {
    auto sorted = mappings;
    std::sort(sorted.begin(), sorted.end(),
              [](const EquivalenceMapping& a, const EquivalenceMapping& b) { return a.pair < b.pair; });
    std::string out = "source_iri\ttarget_iri\tscore\trelation\n";
    for (const auto& m : sorted)
        out += m.pair.source.str() + "\t" + m.pair.target.str() + "\t" + format_score(m.score) + "\tEQUIV\n";
    return out;
}

std::vector<EquivalenceMapping> parse_mappings_tsv(std::string_view tsv) {
    const auto rows = io::lines(tsv);
    if (rows.empty() || !rows.front().starts_with("source_iri\t"))
        throw ParseError("mapping TSV must start with a source_iri header");
    std::vector<EquivalenceMapping> out;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (rows[i].empty()) continue;
        const auto cols = text::split(rows[i], '\t');
        if (cols.size() != 4 || cols[3] != "EQUIV")
            throw ParseError("line " + std::to_string(i + 1) + ": expected source\\ttarget\\tscore\\tEQUIV");
        out.push_back({{ClassIri(cols[0]), ClassIri(cols[1])}, parse_double(cols[2], i + 1), true});
    }
    return out;
}

}  // namespace ontorag
