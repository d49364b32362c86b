// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// non-zero when any criterion fails.

#include "support/fixtures.hpp"
#include "support/oracles.hpp"

#include <ontorag/align.hpp>
#include <ontorag/cli.hpp>
#include <ontorag/embedding.hpp>
#include <ontorag/infiltrate.hpp>
#include <ontorag/io.hpp>
#include <ontorag/metrics.hpp>
#include <ontorag/ontology_io.hpp>
#include <ontorag/subsume.hpp>
#include <ontorag/text.hpp>
#include <ontorag/vector_store.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <limits>
#include <iostream>
#include <random>
#include <sstream>

using namespace ontorag;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

class Check {
public:
    void expect(bool ok, const std::string& what) {
        if (!ok && out_.pass) out_.detail = what;
        out_.pass = out_.pass && ok;
    }
    void note(const std::string& s) {
        if (out_.pass) out_.detail = s;
    }
    Outcome result() const { return out_; }
private:
    Outcome out_;
};

std::string fmt(const char* f, double a, double b = 0.0) {
    char buf[160];
    std::snprintf(buf, sizeof buf, f, a, b);
    return buf;
}

int failures = 0;

void criterion(int n, const std::string& name, double budget_s, const std::function<void(Check&)>& body) {
    Check check;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        body(check);
    } catch (const std::exception& e) {
        check.expect(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (budget_s > 0) check.expect(secs < budget_s, fmt("runtime %.2fs over budget %.0fs", secs, budget_s));
    const auto r = check.result();
    if (!r.pass) ++failures;
    std::cout << (r.pass ? "PASS" : "FAIL") << " [" << n << "] " << name << " (" << fmt("%.3fs", secs)
              << (r.detail.empty() ? "" : "; " + r.detail) << ")" << std::endl;
}

bool close(double a, double b, double tol) { return std::fabs(a - b) <= tol; }

// Decimal tolerance check. Table values such as 69.55525 vs 69.5553 differ
// by exactly the tolerance in decimal; allow for the binary rounding of the
// operands so the boundary case is judged on its decimal value.
bool within_decimal(double a, double b, double tol) {
    const double slack = 4.0 * std::numeric_limits<double>::epsilon() * std::max(std::fabs(a), std::fabs(b));
    return std::fabs(a - b) <= tol + slack;
}

int run_cli(std::vector<std::string> args) {
    std::istringstream in;
    std::ostringstream out, err;
    const int code = cli::run(args, in, out, err);
    if (code != 0) std::cerr << err.str();
    return code;
}

// Contextual cosine row of the summary: label, with, without, change.
std::pair<double, double> contextual_cosine(const std::string& summary) {
    const auto rows = io::lines(summary);
    const auto cells = text::split(rows.at(1), '\t');
    if (cells.at(0) != "Cosine Similarity") throw std::runtime_error("unexpected summary layout");
    return {std::stod(cells.at(1)), std::stod(cells.at(2))};
}

SubsumptionDictionary fixture_dictionary() {
    const auto s = parse_obo(testing_support::fixture("symptoms.obo")).ontology;
    const auto t = parse_obo(testing_support::fixture("clinical_signs.obo")).ontology;
    const auto maps = accepted_mappings(align(s, t, LexicalScorer{}));
    auto corpus = build_subsumption_corpus(s, t, maps, 0, 42);
    return build_dictionary(predict_subsumptions(corpus, s, t, LexicalScorer{}), s, t);
}

}  // namespace

int main() {
    criterion(1, "hallucination index reproduces published table", 1.0, [](Check& c) {
        const auto with = hallucination_index({74.8498, 67.376, 6.79553}, {90.7507, 71.7345, 3.81129});
        const auto without = hallucination_index({68.4832, 59.4732, 7.43475}, {89.4618, 71.2838, 4.00964});
        const double tol = 5e-5;
        c.expect(within_decimal(with.cosine_pct, 82.8003, tol), fmt("with cosine %.6f", with.cosine_pct));
        c.expect(within_decimal(with.dot, 69.5553, tol), fmt("with dot %.6f", with.dot));
        c.expect(within_decimal(with.euclidean, 5.30341, tol), fmt("with euclidean %.6f", with.euclidean));
        c.expect(within_decimal(without.cosine_pct, 78.9725, tol), fmt("without cosine %.6f", without.cosine_pct));
        c.expect(within_decimal(without.dot, 65.3785, tol), fmt("without dot %.6f", without.dot));
        c.expect(within_decimal(without.euclidean, 5.72219, tol), fmt("without euclidean %.6f", without.euclidean));
        c.note(fmt("H cosine %.5f vs %.5f", with.cosine_pct, without.cosine_pct));
    });

    criterion(2, "relative change of H and factual accuracy", 1.0, [](Check& c) {
        const double h = relative_change(82.8003, 78.9725);
        const double f = relative_change(90.7507, 89.4618);
        c.expect(close(h, 4.847, 1e-3), fmt("H change %.5f%%", h));
        c.expect(close(f, 1.4407, 1e-3), fmt("factual change %.5f%%", f));
        c.note(fmt("H %+.4f%%, factual %+.4f%%", h, f));
    });

    criterion(3, "fixture pipeline: with-subsumptions contextual cosine above without, byte-identical reruns", 10.0,
              [](Check& c) {
                  const auto dir = fs::temp_directory_path() / "ontorag_acceptance_3";
                  fs::remove_all(dir);
                  std::string summaries[2];
                  for (int run = 0; run < 2; ++run) {
                      const auto d = dir / std::to_string(run);
                      fs::create_directories(d);
                      const auto fx = [](const char* n) { return (testing_support::fixtures_dir() / n).string(); };
                      const auto p = [&](const char* n) { return (d / n).string(); };
                      c.expect(run_cli({"align", "--source", fx("symptoms.obo"), "--target", fx("clinical_signs.obo"),
                                    "--out", p("maps.tsv")}) == 0, "align failed");
                      c.expect(run_cli({"subsume", "--source", fx("symptoms.obo"), "--target", fx("clinical_signs.obo"),
                                    "--mappings", p("maps.tsv"), "--out", p("subs.tsv")}) == 0, "subsume failed");
                      c.expect(run_cli({"dict", "--source", fx("symptoms.obo"), "--target", fx("clinical_signs.obo"),
                                    "--subsumptions", p("subs.tsv"), "--out", p("dict.json")}) == 0, "dict failed");
                      c.expect(run_cli({"ingest", "--store", p("store.jsonl"), "--doc", fx("medical_document.txt")}) == 0,
                               "ingest failed");
                      c.expect(run_cli({"eval", "--dataset", fx("questions.jsonl"), "--store", p("store.jsonl"), "--dict",
                                    p("dict.json"), "--out-dir", p("eval")}) == 0, "eval failed");
                      summaries[run] = io::read_file(d / "eval" / "summary.tsv") +
                                       io::read_file(d / "eval" / "responses_with.jsonl") +
                                       io::read_file(d / "eval" / "responses_without.jsonl");
                  }
                  fs::remove_all(dir);
                  c.expect(summaries[0] == summaries[1], "runs differ");
                  const auto [with, without] = contextual_cosine(summaries[0]);
                  c.expect(with > without, fmt("contextual cosine with %.4f <= without %.4f", with, without));
                  c.note(fmt("contextual cosine %.4f vs %.4f", with, without));
              });

    criterion(4, "subsumption corpus equals brute-force oracle on 3 random ontology pairs", 5.0, [](Check& c) {
        std::size_t positives = 0;
        for (std::uint64_t seed = 1; seed <= 3; ++seed) {
            std::mt19937_64 rng(seed);
            const auto s = testing_support::random_ontology("http://s.example/#C", 20 + rng() % 31, rng);
            const auto t = testing_support::random_ontology("http://t.example/#C", 20 + rng() % 31, rng);
            const auto maps = accepted_mappings(align(s, t, LexicalScorer{}));
            std::vector<oracle::Edge> eqs;
            for (const auto& m : maps) eqs.emplace_back(m.pair.source.str(), m.pair.target.str());
            const auto corpus = build_subsumption_corpus(s, t, maps, 1, seed);
            const auto expected = oracle::corpus(t, eqs, 1, seed);

            std::set<oracle::Edge> pos, neg, oracle_pos;
            for (const auto& p : corpus)
                (p.polarity == Polarity::positive ? pos : neg).emplace(p.anchor.str(), p.candidate.str());
            oracle_pos = oracle::positive_pairs(t, eqs);
            positives += pos.size();
            c.expect(pos == oracle_pos, "positive set differs for seed " + std::to_string(seed));
            for (const auto& n : neg) c.expect(!pos.contains(n), "negative overlaps positives");
            c.expect(corpus.size() == expected.size(), "corpus length differs for seed " + std::to_string(seed));
            for (std::size_t i = 0; i < std::min(corpus.size(), expected.size()); ++i) {
                const bool same = corpus[i].anchor.str() == std::get<0>(expected[i]) &&
                                  corpus[i].candidate.str() == std::get<1>(expected[i]) &&
                                  (corpus[i].polarity == Polarity::positive) == std::get<2>(expected[i]);
                c.expect(same, "pair " + std::to_string(i) + " differs for seed " + std::to_string(seed));
            }
        }
        c.expect(positives > 0, "degenerate fixtures: no positives");
        c.note(std::to_string(positives) + " positives checked");
    });

    criterion(5, "retrieve(k) equals full-scan prefix, 100 queries x 500 chunks", 5.0, [](Check& c) {
        std::mt19937_64 rng(5);
        std::normal_distribution<double> nd;
        const std::size_t dim = 64;
        std::vector<Chunk> chunks;
        for (int i = 0; i < 500; ++i) {
            std::vector<double> v(dim);
            for (auto& x : v) x = nd(rng);
            // a few exact duplicates exercise the id tie-break
            if (i % 50 == 49) v = std::vector<double>(chunks[i - 1].vector.values().begin(), chunks[i - 1].vector.values().end());
            chunks.push_back({"doc" + std::to_string(i % 7) + ":" + std::to_string(i), "t", EmbeddingVector(v)});
        }
        VectorStore store;
        store.add_chunks(chunks, "random");
        for (int q = 0; q < 100; ++q) {
            std::vector<double> v(dim);
            for (auto& x : v) x = nd(rng);
            const EmbeddingVector query(v);
            std::vector<std::pair<double, std::string>> scan;
            for (const auto& ch : store.chunks()) {
                double dot = 0, nq = 0, nc = 0;
                for (std::size_t i = 0; i < dim; ++i) {
                    dot += query[i] * ch.vector[i];
                    nq += query[i] * query[i];
                    nc += ch.vector[i] * ch.vector[i];
                }
                scan.emplace_back(std::clamp(dot / (std::sqrt(nq) * std::sqrt(nc)), -1.0, 1.0), ch.id);
            }
            std::sort(scan.begin(), scan.end(), [](const auto& a, const auto& b) {
                return a.first != b.first ? a.first > b.first : a.second < b.second;
            });
            for (std::size_t k : {1u, 4u, 16u}) {
                const auto hits = store.retrieve(query, k);
                c.expect(hits.size() == k, "wrong result size");
                for (std::size_t i = 0; i < hits.size(); ++i)
                    c.expect(hits[i].chunk->id == scan[i].second && hits[i].score == scan[i].first,
                             "query " + std::to_string(q) + " k=" + std::to_string(k) + " rank " + std::to_string(i));
            }
        }
        c.note("300 rankings compared");
    });

    criterion(6, "metric properties over 1000 random pairs", 5.0, [](Check& c) {
        const double tol = 1e-9;
        const std::vector<double> a{1, 2, 3}, b{4, 5, 6};
        c.expect(close(cosine_similarity(a, b), 32.0 / (std::sqrt(14.0) * std::sqrt(77.0)), tol), "cosine example");
        c.expect(close(dot_product(a, b), 32.0, tol), "dot example");
        const auto r = similarity_report(a, b);
        c.expect(close(r.cosine_pct, 97.46318461970762, tol) && close(r.dot, 32.0, tol) && close(r.euclidean, std::sqrt(27.0), tol),
                 "report example");
        std::mt19937_64 rng(6);
        std::normal_distribution<double> nd;
        std::uniform_real_distribution<double> scale(0.01, 100.0);
        for (int i = 0; i < 1000; ++i) {
            const std::size_t dim = 2 + rng() % 30;
            std::vector<double> u(dim), v(dim), w(dim), mix(dim), su(dim);
            for (std::size_t j = 0; j < dim; ++j) {
                u[j] = nd(rng);
                v[j] = nd(rng);
                w[j] = nd(rng);
            }
            const double s = scale(rng), alpha = nd(rng), beta = nd(rng);
            for (std::size_t j = 0; j < dim; ++j) {
                su[j] = s * u[j];
                mix[j] = alpha * u[j] + beta * w[j];
            }
            c.expect(close(cosine_similarity(su, v), cosine_similarity(u, v), tol), "scale invariance");
            c.expect(close(dot_product(mix, v), alpha * dot_product(u, v) + beta * dot_product(w, v), tol), "dot linearity");
            c.expect(euclidean_distance(u, w) <= euclidean_distance(u, v) + euclidean_distance(v, w) + tol, "triangle inequality");
        }
        c.note("3000 property checks");
    });

    criterion(7, "parse/serialize/parse fixed point on fixtures and a 200-class ontology", 2.0, [](Check& c) {
        const auto fixed_point = [&](const Ontology& o, const std::string& name) {
            const auto s1 = serialize_ontology(o);
            const auto o2 = parse_json_ontology(s1);
            c.expect(o2.warnings.empty(), name + ": warnings on reparse");
            c.expect(o2.ontology == o, name + ": reparse differs");
            c.expect(serialize_ontology(o2.ontology) == s1, name + ": serialization not a fixed point");
        };
        for (const char* f : {"symptoms.obo", "clinical_signs.obo"}) fixed_point(parse_obo(testing_support::fixture(f)).ontology, f);

        std::mt19937_64 rng(7);
        std::string obo = "format-version: 1.2\nontology: generated\n";
        std::size_t expected = 0;
        for (int i = 0; i < 200; ++i) {
            obo += "\n[Term]\nid: GEN:" + std::to_string(i) + "\nname: generated term " + std::to_string(i) + "\n";
            if (i % 5 == 1) obo += "synonym: \"alias " + std::to_string(i) + "\" EXACT []\n";
            if (i > 0) obo += "is_a: GEN:" + std::to_string(rng() % i) + " ! parent\n";
            if (i % 40 == 39) {
                obo += "is_obsolete: true\n";
            } else {
                ++expected;
            }
        }
        obo += "\n[Term]\nname: stanza without id\n";
        const auto report = parse_obo(obo);
        c.expect(report.ontology.size() == expected, "obsolete terms not skipped");
        c.expect(report.warnings.size() == 1, "missing-id stanza should warn once");
        c.expect(!report.ontology.contains(ClassIri("http://purl.obolibrary.org/obo/GEN_39")), "obsolete term kept");
        fixed_point(report.ontology, "generated");
        c.note(std::to_string(report.ontology.size()) + " generated classes");
    });

    criterion(8, "infiltration bounds, traceability, identity and idempotence on 500 prompts", 2.0, [](Check& c) {
        const auto dict = fixture_dictionary();
        c.expect(!dict.empty(), "fixture dictionary is empty");
        std::vector<std::string> vocab = {"i", "have", "what", "can", "take", "for", "my", "and", "severe", "the", "?", ","};
        for (const auto& [key, labels] : dict.entries) {
            for (const auto& w : text::word_tokens(key)) vocab.push_back(w);
            for (const auto& l : labels)
                for (const auto& w : text::word_tokens(l)) vocab.push_back(w);
        }
        std::mt19937_64 rng(8);
        const InfiltrateOptions options{};
        std::size_t appended = 0;
        for (int i = 0; i < 500; ++i) {
            std::string prompt;
            for (std::size_t n = 1 + rng() % 14; n > 0; --n) prompt += vocab[rng() % vocab.size()] + (rng() % 3 ? " " : "  ");
            const auto r = infiltrate(prompt, dict, options);
            appended += r.appended_terms.size();
            c.expect(r.appended_terms.size() <= options.max_append_total, "budget exceeded");
            c.expect(r.term_sources.size() == r.appended_terms.size(), "untraced term");
            for (std::size_t j = 0; j < r.appended_terms.size(); ++j) {
                const auto& key = r.term_sources[j];
                const bool matched = std::find(r.matched_keys.begin(), r.matched_keys.end(), key) != r.matched_keys.end();
                const auto it = dict.entries.find(key);
                const bool listed = it != dict.entries.end() &&
                                    std::find(it->second.begin(), it->second.end(), r.appended_terms[j]) != it->second.end();
                c.expect(matched && listed, "term does not trace to a matched key");
            }
            c.expect(r.text.rfind(normalize_prompt(prompt), 0) == 0, "text does not start with the prompt");
            const auto identity = infiltrate(prompt, SubsumptionDictionary{}, options);
            c.expect(identity.text == normalize_prompt(prompt) && identity.appended_terms.empty(), "empty dict not identity");
            const auto again = infiltrate(r.text, dict, options);
            c.expect(again.appended_terms.empty() && again.text == r.text, "re-infiltration appended terms");
        }
        c.expect(appended > 0, "no prompt triggered an append");
        c.note(std::to_string(appended) + " terms appended");
    });

    std::cout << (failures == 0 ? "ALL CRITERIA PASS" : std::to_string(failures) + " CRITERIA FAILED") << std::endl;
    return failures == 0 ? 0 : 1;
}
