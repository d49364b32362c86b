#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ontorag/align.hpp"
#include "ontorag/error.hpp"
#include "ontorag/infiltrate.hpp"
#include "ontorag/metrics.hpp"
#include "ontorag/ontology.hpp"
#include "ontorag/ontology_io.hpp"
#include "ontorag/subsume.hpp"
#include "ontorag/vector_store.hpp"

namespace py = pybind11;
using namespace ontorag;

namespace {

py::tuple report_tuple(ParseReport report) {
    std::vector<std::pair<std::size_t, std::string>> warnings;
    for (auto& w : report.warnings) warnings.emplace_back(w.line, std::move(w.message));
    return py::make_tuple(std::move(report.ontology), warnings);
}

std::vector<EquivalenceMapping> to_mappings(const std::vector<std::pair<std::string, std::string>>& pairs) {
    std::vector<EquivalenceMapping> out;
    for (const auto& [s, t] : pairs) out.push_back({{ClassIri(s), ClassIri(t)}, 1.0, true});
    return out;
}

std::unique_ptr<SynonymyScorer> scorer_from(const std::string& spec) { return make_scorer(spec, nullptr); }

py::dict similarity_dict(const SimilarityReport& r) {
    py::dict d;
    d["cosine_pct"] = r.cosine_pct;
    d["dot"] = r.dot;
    d["euclidean"] = r.euclidean;
    return d;
}

SimilarityReport report_from(const py::dict& d) {
    return {d["cosine_pct"].cast<double>(), d["dot"].cast<double>(), d["euclidean"].cast<double>()};
}

}  // namespace

PYBIND11_MODULE(ontorag, m) {
    m.doc() = "Ontology alignment, subsumption-based prompt infiltration and hallucination metrics";

    static py::exception<Error> base(m, "Error");
    py::register_exception<ParseError>(m, "ParseError", base);
    py::register_exception<NotFoundError>(m, "NotFoundError", base);
    py::register_exception<DataError>(m, "DataError", base);
    py::register_exception<ProviderError>(m, "ProviderError", base);

    m.def("local_name", [](const std::string& iri) { return local_name(ClassIri(iri)); });
    m.def("normalize_label", &normalize_label);

    py::class_<Ontology>(m, "Ontology")
        .def_property_readonly("id", &Ontology::id)
        .def("__len__", &Ontology::size)
        .def("iris", [](const Ontology& o) {
            std::vector<std::string> out;
            for (const auto& [iri, c] : o.classes()) out.push_back(iri.str());
            return out;
        })
        .def("label", [](const Ontology& o, const std::string& iri) { return o.at(ClassIri(iri)).display_label(); })
        .def("parents", [](const Ontology& o, const std::string& iri) {
            std::vector<std::string> out;
            for (const auto& p : o.at(ClassIri(iri)).parents) out.push_back(p.str());
            return out;
        })
        .def("__eq__", [](const Ontology& a, const Ontology& b) { return a == b; });

    m.def("parse_obo", [](const std::string& text) { return report_tuple(parse_obo(text)); },
          "Returns (ontology, [(line, message), ...])");
    m.def("parse_json_ontology", [](const std::string& text) { return report_tuple(parse_json_ontology(text)); });
    m.def("serialize_ontology", &serialize_ontology);
    m.def("subclass_closure", [](const Ontology& o, const std::string& iri) {
        std::vector<std::string> out;
        for (const auto& c : subclass_closure(o, ClassIri(iri))) out.push_back(c.str());
        return out;
    });

    m.def("lexical_text_score", &lexical_text_score);
    m.def(
        "align",
        [](const Ontology& s, const Ontology& t, double threshold, bool blocking, const std::string& scorer) {
            const auto sc = scorer_from(scorer);
            std::vector<std::tuple<std::string, std::string, double, bool>> out;
            for (const auto& mp : align(s, t, *sc, {threshold, blocking}))
                out.emplace_back(mp.pair.source.str(), mp.pair.target.str(), mp.score, mp.accepted);
            return out;
        },
        py::arg("source"), py::arg("target"), py::arg("threshold") = kDefaultEquivalenceThreshold,
        py::arg("blocking") = true, py::arg("scorer") = "lexical",
        "Returns [(source_iri, target_iri, score, accepted), ...]");

    m.def(
        "build_subsumption_corpus",
        [](const Ontology& s, const Ontology& t, const std::vector<std::pair<std::string, std::string>>& equivalences,
           std::size_t negatives, std::uint64_t seed) {
            std::vector<std::tuple<std::string, std::string, std::string>> out;
            for (const auto& p : build_subsumption_corpus(s, t, to_mappings(equivalences), negatives, seed))
                out.emplace_back(p.anchor.str(), p.candidate.str(), std::string(to_string(p.polarity)));
            return out;
        },
        py::arg("source"), py::arg("target"), py::arg("equivalences"),
        py::arg("negatives_per_positive") = kDefaultNegativesPerPositive, py::arg("seed") = 42);

    m.def(
        "predict_subsumptions",
        [](const std::vector<std::pair<std::string, std::string>>& pairs, const Ontology& s, const Ontology& t,
           const std::string& scorer, double threshold) {
            std::vector<SubsumptionPair> in;
            for (const auto& [a, c] : pairs) in.push_back({ClassIri(a), ClassIri(c), Polarity::positive, {}});
            const auto sc = scorer_from(scorer);
            std::vector<std::tuple<std::string, std::string, double>> out;
            for (const auto& p : predict_subsumptions(in, s, t, *sc, threshold))
                out.emplace_back(p.anchor.str(), p.candidate.str(), *p.score);
            return out;
        },
        py::arg("pairs"), py::arg("source"), py::arg("target"), py::arg("scorer") = "lexical",
        py::arg("threshold") = kDefaultSubsumptionThreshold);

    m.def(
        "build_dictionary",
        [](const std::vector<std::tuple<std::string, std::string, double>>& accepted, const Ontology& s,
           const Ontology& t, std::size_t max_per_anchor) {
            std::vector<SubsumptionPair> in;
            for (const auto& [a, c, score] : accepted)
                in.push_back({ClassIri(a), ClassIri(c), Polarity::positive, score});
            return build_dictionary(in, s, t, max_per_anchor).entries;
        },
        py::arg("accepted"), py::arg("source"), py::arg("target"), py::arg("max_per_anchor") = kDefaultMaxPerAnchor);

    m.def("tokenize", [](const std::string& prompt) { return tokenize(prompt).tokens; });
    m.def("detokenize", &detokenize);
    m.def(
        "infiltrate",
        [](const std::string& prompt, const std::map<std::string, std::vector<std::string>>& entries,
           std::size_t max_append_total, bool bare, bool fuzzy) {
            const auto r = infiltrate(prompt, SubsumptionDictionary{entries}, {max_append_total, bare, fuzzy});
            py::dict d;
            d["text"] = r.text;
            d["appended_terms"] = r.appended_terms;
            d["matched_keys"] = r.matched_keys;
            d["term_sources"] = r.term_sources;
            return d;
        },
        py::arg("prompt"), py::arg("dictionary"), py::arg("max_append_total") = kDefaultMaxAppendTotal,
        py::arg("bare") = false, py::arg("fuzzy") = false);

    m.def(
        "chunk_document",
        [](const std::string& text, std::size_t size, std::size_t overlap) {
            std::vector<std::pair<std::size_t, std::string>> out;
            for (auto& w : chunk_document(text, size, overlap)) out.emplace_back(w.offset, std::move(w.text));
            return out;
        },
        py::arg("text"), py::arg("size") = kDefaultChunkSize, py::arg("overlap") = kDefaultChunkOverlap);
    m.def("deterministic_embed", [](const std::string& text, std::size_t dim) {
        const auto v = deterministic_embed(text, dim);
        return std::vector<double>(v.values().begin(), v.values().end());
    });

    py::class_<VectorStore>(m, "VectorStore")
        .def(py::init<>())
        .def_property_readonly("dim", &VectorStore::dim)
        .def("__len__", &VectorStore::size)
        .def(
            "ingest_deterministic",
            [](VectorStore& store, const std::string& doc_id, const std::string& text, std::size_t dim,
               std::size_t size, std::size_t overlap) {
                store.ingest(doc_id, text, DeterministicEmbedder(dim), size, overlap);
            },
            py::arg("doc_id"), py::arg("text"), py::arg("dim") = 384, py::arg("size") = kDefaultChunkSize,
            py::arg("overlap") = kDefaultChunkOverlap)
        .def(
            "retrieve",
            [](const VectorStore& store, const std::vector<double>& query, std::size_t k) {
                std::vector<std::pair<std::string, double>> out;
                for (const auto& h : store.retrieve(EmbeddingVector(query), k)) out.emplace_back(h.chunk->id, h.score);
                return out;
            },
            py::arg("query"), py::arg("k") = kDefaultTopK)
        .def("save", [](const VectorStore& s, const std::string& path) { s.save(path); })
        .def_static("load", [](const std::string& path) { return VectorStore::load(path); });

    m.def("cosine_similarity",
          [](const std::vector<double>& u, const std::vector<double>& v) { return cosine_similarity(u, v); });
    m.def("dot_product", [](const std::vector<double>& u, const std::vector<double>& v) { return dot_product(u, v); });
    m.def("euclidean_distance",
          [](const std::vector<double>& u, const std::vector<double>& v) { return euclidean_distance(u, v); });
    m.def("similarity_report", [](const std::vector<double>& u, const std::vector<double>& v) {
        return similarity_dict(similarity_report(u, v));
    });
    m.def("hallucination_index", [](const py::dict& contextual, const py::dict& factual) {
        return similarity_dict(hallucination_index(report_from(contextual), report_from(factual)));
    });
    m.def("relative_change", &relative_change);
}
