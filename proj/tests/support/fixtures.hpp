#pragma once

#include <ontorag/io.hpp>
#include <ontorag/ontology.hpp>

#include <filesystem>
#include <random>
#include <string>
#include <vector>

namespace testing_support {

inline std::filesystem::path fixtures_dir() { return ONTORAG_FIXTURES_DIR; }

inline std::string fixture(const std::string& name) { return ontorag::io::read_file(fixtures_dir() / name); }

inline ontorag::OntologyClass make_class(const std::string& iri, const std::string& label,
                                         std::vector<std::string> parents = {},
                                         std::vector<std::string> synonyms = {}) {
    ontorag::OntologyClass c{ontorag::ClassIri(iri), label, {}, {}};
    for (auto& p : parents) c.parents.insert(ontorag::ClassIri(p));
    for (auto& s : synonyms) c.synonyms.insert(s);
    return c;
}

// Random is-a DAG: class i may only have parents with a smaller index.
inline ontorag::Ontology random_ontology(const std::string& prefix, std::size_t n, std::mt19937_64& rng) {
    static const std::vector<std::string> vocab = {"pain",   "fever", "cough",  "rash",   "chronic", "acute",
                                                   "upper",  "lower", "dry",    "severe", "nausea",  "itch",
                                                   "cramp",  "sore",  "throat", "chest",  "back",    "joint"};
    std::vector<ontorag::OntologyClass> classes;
    for (std::size_t i = 0; i < n; ++i) {
        const std::string iri = prefix + std::to_string(1000 + i);
        std::string label = vocab[rng() % vocab.size()] + " " + vocab[rng() % vocab.size()];
        std::vector<std::string> parents;
        if (i > 0) {
            const std::size_t np = rng() % 3;
            for (std::size_t k = 0; k < np; ++k) parents.push_back(prefix + std::to_string(1000 + rng() % i));
        }
        classes.push_back(make_class(iri, label, parents));
    }
    return ontorag::Ontology(prefix, std::move(classes));
}

}  // namespace testing_support
