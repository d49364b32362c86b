#include "ontorag/ontology_io.hpp"

#include <map>
#include <optional>

#include <nlohmann/json.hpp>

#include "ontorag/error.hpp"
#include "ontorag/io.hpp"
#include "ontorag/text.hpp"

namespace ontorag {

namespace {

constexpr std::string_view kOboPurl = "http://purl.obolibrary.org/obo/";

struct Stanza {
    std::size_t header_line = 0;
    std::optional<std::string> id;
    std::size_t id_line = 0;
    std::string name;
    std::vector<std::pair<std::string, std::size_t>> is_a;
    std::vector<std::pair<std::string, std::size_t>> synonyms;
    bool obsolete = false;
};

// Value with any trailing "! comment" and "{qualifiers}" removed.
std::string strip_comment(std::string_view value) {
    if (const auto bang = value.find('!'); bang != std::string_view::npos) value = value.substr(0, bang);
    if (const auto brace = value.find('{'); brace != std::string_view::npos) value = value.substr(0, brace);
    return std::string(text::trim(value));
}

std::optional<std::string> quoted_text(std::string_view value) {
    const auto open = value.find('"');
    if (open == std::string_view::npos) return std::nullopt;
    std::string out;
    for (std::size_t i = open + 1; i < value.size(); ++i) {
        const char c = value[i];
        if (c == '\\' && i + 1 < value.size()) {
            out.push_back(value[++i]);
        } else if (c == '"') {
            return out;
        } else {
            out.push_back(c);
        }
    }
    return std::nullopt;
}

class OboBuilder {
public:
    void finish(Stanza& s) {
        if (s.obsolete) return;
        if (!s.id || s.id->empty()) {
            warn(s.header_line, "[Term] stanza without id: skipped");
            return;
        }
        std::optional<ClassIri> iri;
        try {
            iri.emplace(obo_id_to_iri(*s.id));
        } catch (const ParseError& e) {
            warn(s.id_line, std::string("invalid id, stanza skipped: ") + e.what());
            return;
        }
        OntologyClass cls{*iri, s.name, {}, {}};
        for (const auto& [target, line] : s.is_a) {
            try {
                ClassIri parent(obo_id_to_iri(target));
                if (parent == *iri) {
                    warn(line, "is_a self-reference dropped");
                    continue;
                }
                cls.parents.insert(std::move(parent));
            } catch (const ParseError& e) {
                warn(line, std::string("invalid is_a target ignored: ") + e.what());
            }
        }
        for (const auto& [syn, line] : s.synonyms) {
            if (syn.empty()) {
                warn(line, "empty synonym ignored");
                continue;
            }
            cls.synonyms.insert(syn);
        }
        if (classes_.contains(*iri)) warn(s.id_line, "duplicate id " + *s.id + ": last stanza wins");
        classes_.insert_or_assign(*iri, std::move(cls));
    }

    void warn(std::size_t line, std::string message) { warnings_.push_back({line, std::move(message)}); }

    ParseReport build(std::string id) && {
        if (classes_.empty()) throw ParseError("no [Term] stanzas parsed");
        std::vector<OntologyClass> classes;
        classes.reserve(classes_.size());
        for (auto& [iri, c] : classes_) classes.push_back(std::move(c));
        return ParseReport{Ontology(std::move(id), std::move(classes)), std::move(warnings_)};
    }

private:
    std::map<ClassIri, OntologyClass> classes_;
    std::vector<ParseWarning> warnings_;
};

// Lines of the 1-based occurrences of `"iri"` keys, used to point duplicate
// warnings at the offending object.
std::vector<std::size_t> iri_key_lines(std::string_view text) {
    std::vector<std::size_t> lines;
    std::size_t line = 1;
    bool in_string = false;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (c == '\n') ++line;
        if (in_string) {
            if (c == '\\') ++i;
            else if (c == '"') in_string = false;
            continue;
        }
        if (c != '"') continue;
        if (text.substr(i, 5) == "\"iri\"") {
            std::size_t j = i + 5;
            while (j < text.size() && (text[j] == ' ' || text[j] == '\t' || text[j] == '\r' || text[j] == '\n')) ++j;
            if (j < text.size() && text[j] == ':') {
                lines.push_back(line);
                i += 4;
                continue;
            }
        }
        in_string = true;
    }
    return lines;
}

const nlohmann::json* member(const nlohmann::json& obj, const char* key) {
    const auto it = obj.find(key);
    return it == obj.end() || it->is_null() ? nullptr : &*it;
}

std::vector<std::string> string_array(const nlohmann::json& obj, const char* key, std::size_t index) {
    std::vector<std::string> out;
    const auto* arr = member(obj, key);
    if (!arr) return out;
    if (!arr->is_array())
        throw ParseError("classes[" + std::to_string(index) + "]." + key + " must be an array of strings");
    for (const auto& v : *arr) {
        if (!v.is_string())
            throw ParseError("classes[" + std::to_string(index) + "]." + key + " must be an array of strings");
        out.push_back(v.get<std::string>());
    }
    return out;
}

}  // namespace

std::string obo_id_to_iri(std::string_view id) {
    id = text::trim(id);
    if (id.starts_with("http://") || id.starts_with("https://")) return std::string(id);
    std::string local(id);
    if (const auto colon = local.find(':'); colon != std::string::npos) local[colon] = '_';
    const std::string iri = std::string(kOboPurl) + local;
    ClassIri check(iri);  // rejects whitespace
    return iri;
}

ParseReport parse_obo(std::string_view input) {
    OboBuilder builder;
    std::string ontology_id;
    std::optional<Stanza> term;
    bool in_other_stanza = false;

    const auto lines = text::split(input, '\n');
    for (std::size_t n = 0; n < lines.size(); ++n) {
        const std::size_t line_no = n + 1;
        std::string_view line = lines[n];
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        line = text::trim(line);
        if (line.empty() || line.front() == '!') continue;

        if (line.front() == '[') {
            if (term) builder.finish(*term);
            term.reset();
            in_other_stanza = line != "[Term]";
            if (!in_other_stanza) term.emplace().header_line = line_no;
            continue;
        }
        const auto colon = line.find(':');
        if (colon == std::string_view::npos) continue;
        const std::string_view tag = text::trim(line.substr(0, colon));
        const std::string_view value = text::trim(line.substr(colon + 1));

        if (!term) {
            if (!in_other_stanza && tag == "ontology") ontology_id = std::string(value);
            continue;
        }
        if (tag == "id") {
            term->id = strip_comment(value);
            term->id_line = line_no;
        } else if (tag == "name") {
            term->name = std::string(value);
        } else if (tag == "is_a") {
            term->is_a.emplace_back(strip_comment(value), line_no);
        } else if (tag == "synonym") {
            if (auto syn = quoted_text(value)) {
                term->synonyms.emplace_back(std::move(*syn), line_no);
            } else {
                builder.warn(line_no, "synonym without quoted text ignored");
            }
        } else if (tag == "is_obsolete") {
            term->obsolete = value == "true";
        }
    }
    if (term) builder.finish(*term);
    return std::move(builder).build(std::move(ontology_id));
}

ParseReport parse_json_ontology(std::string_view input) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(input);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("malformed ontology JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ParseError("ontology JSON must be an object");
    std::string id;
    if (const auto* v = member(doc, "id")) {
        if (!v->is_string()) throw ParseError("ontology 'id' must be a string");
        id = v->get<std::string>();
    }
    const auto* classes = member(doc, "classes");
    if (!classes || !classes->is_array()) throw ParseError("ontology JSON needs a 'classes' array");
    if (classes->empty()) throw ParseError("ontology JSON has zero classes");

    const auto key_lines = iri_key_lines(input);
    const bool lines_usable = key_lines.size() == classes->size();

    std::vector<ParseWarning> warnings;
    std::map<ClassIri, OntologyClass> by_iri;
    for (std::size_t i = 0; i < classes->size(); ++i) {
        const auto& obj = (*classes)[i];
        const std::size_t line = lines_usable ? key_lines[i] : 1;
        if (!obj.is_object()) throw ParseError("classes[" + std::to_string(i) + "] must be an object");
        const auto* iri_v = member(obj, "iri");
        if (!iri_v || !iri_v->is_string())
            throw ParseError("classes[" + std::to_string(i) + "] is missing string field 'iri'");
        ClassIri iri(iri_v->get<std::string>());
        OntologyClass cls{iri, {}, {}, {}};
        if (const auto* label = member(obj, "label")) {
            if (!label->is_string()) throw ParseError("classes[" + std::to_string(i) + "].label must be a string");
            cls.label = label->get<std::string>();
        }
        for (auto& s : string_array(obj, "synonyms", i)) {
            if (s.empty()) {
                warnings.push_back({line, "empty synonym ignored on " + iri.str()});
                continue;
            }
            cls.synonyms.insert(std::move(s));
        }
        for (auto& p : string_array(obj, "parents", i)) {
            ClassIri parent(std::move(p));
            if (parent == iri) {
                warnings.push_back({line, "self parent dropped on " + iri.str()});
                continue;
            }
            cls.parents.insert(std::move(parent));
        }
        if (by_iri.contains(iri)) warnings.push_back({line, "duplicate IRI " + iri.str() + ": last entry wins"});
        by_iri.insert_or_assign(iri, std::move(cls));
    }
    std::vector<OntologyClass> list;
    for (auto& [iri, c] : by_iri) list.push_back(std::move(c));
    return ParseReport{Ontology(std::move(id), std::move(list)), std::move(warnings)};
}

std::string serialize_ontology(const Ontology& o) {
    nlohmann::ordered_json classes = nlohmann::ordered_json::array();
    for (const auto& [iri, c] : o.classes()) {
        nlohmann::ordered_json parents = nlohmann::ordered_json::array();
        for (const auto& p : c.parents) parents.push_back(p.str());
        classes.push_back({{"iri", iri.str()},
                           {"label", c.label},
                           {"synonyms", std::vector<std::string>(c.synonyms.begin(), c.synonyms.end())},
                           {"parents", std::move(parents)}});
    }
    nlohmann::ordered_json doc;
    doc["id"] = o.id();
    doc["classes"] = std::move(classes);
    return doc.dump(2) + "\n";
}

OntologyFormat parse_ontology_format(std::string_view name) {
    if (name == "auto") return OntologyFormat::automatic;
    if (name == "obo") return OntologyFormat::obo;
    if (name == "json") return OntologyFormat::json;
    throw ParseError("unknown ontology format: " + std::string(name));
}

ParseReport load_ontology_file(const std::filesystem::path& path, OntologyFormat format) {
    const std::string content = io::read_file(path);
    if (format == OntologyFormat::automatic)
        format = path.extension() == ".json" ? OntologyFormat::json : OntologyFormat::obo;
    try {
        return format == OntologyFormat::json ? parse_json_ontology(content) : parse_obo(content);
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

}  // namespace ontorag
