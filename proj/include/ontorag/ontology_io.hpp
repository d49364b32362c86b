#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "ontorag/ontology.hpp"

namespace ontorag {

struct ParseWarning {
    std::size_t line;  // 1-based
    std::string message;

    friend bool operator==(const ParseWarning&, const ParseWarning&) = default;
};

struct ParseReport {
    Ontology ontology;
    std::vector<ParseWarning> warnings;
};

// OBO 1.4 subset: [Term] stanzas with id, name, is_a, synonym and
// is_obsolete. Ids map to IRIs by the OBO PURL convention. Throws ParseError
// when no term survives.
ParseReport parse_obo(std::string_view text);

// {"id": str, "classes": [{"iri", "label", "synonyms": [...], "parents": [...]}]}
ParseReport parse_json_ontology(std::string_view text);

// JSON interchange form, classes sorted by IRI, trailing newline.
std::string serialize_ontology(const Ontology& o);

// "GO:0001" -> "http://purl.obolibrary.org/obo/GO_0001"; absolute IRIs pass through.
std::string obo_id_to_iri(std::string_view id);

enum class OntologyFormat { automatic, obo, json };

OntologyFormat parse_ontology_format(std::string_view name);

// Reads a file and dispatches on format (.json extension -> JSON, else OBO
// under `automatic`). Throws NotFoundError for a missing file.
ParseReport load_ontology_file(const std::filesystem::path& path,
                               OntologyFormat format = OntologyFormat::automatic);

}  // namespace ontorag
