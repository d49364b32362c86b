#include "ontorag/ontology.hpp"

#include <algorithm>
#include <deque>

#include "ontorag/error.hpp"
#include "ontorag/text.hpp"

namespace ontorag {

ClassIri::ClassIri(std::string value) : value_(std::move(value)) {
    if (value_.empty()) throw ParseError("empty IRI");
    const bool has_space = std::any_of(value_.begin(), value_.end(), [](char c) {
        return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
    });
    if (has_space) throw ParseError("IRI contains whitespace: '" + value_ + "'");
}

std::string OntologyClass::display_label() const {
    if (!label.empty()) return label;
    return normalize_label(local_name(iri));
}

std::vector<std::string> OntologyClass::names() const {
    std::vector<std::string> out{display_label()};
    out.insert(out.end(), synonyms.begin(), synonyms.end());
    return out;
}

Ontology::Ontology(std::string id, std::vector<OntologyClass> classes) : id_(std::move(id)) {
    if (classes.empty()) throw DataError("ontology '" + id_ + "' has no classes");
    for (auto& c : classes) {
        if (c.parents.contains(c.iri)) throw DataError("class lists itself as parent: " + c.iri.str());
        if (c.synonyms.contains("")) throw DataError("empty synonym on " + c.iri.str());
        const ClassIri key = c.iri;
        if (!classes_.emplace(key, std::move(c)).second) throw DataError("duplicate IRI: " + key.str());
    }
    for (const auto& [iri, c] : classes_) {
        for (const auto& p : c.parents) children_[p].insert(iri);
    }
}

const OntologyClass* Ontology::find(const ClassIri& iri) const {
    const auto it = classes_.find(iri);
    return it == classes_.end() ? nullptr : &it->second;
}

const OntologyClass& Ontology::at(const ClassIri& iri) const {
    if (const auto* c = find(iri)) return *c;
    throw NotFoundError("class not found in ontology '" + id_ + "': " + iri.str());
}

const std::set<ClassIri>& Ontology::children(const ClassIri& iri) const {
    static const std::set<ClassIri> kNone;
    const auto it = children_.find(iri);
    return it == children_.end() ? kNone : it->second;
}

std::vector<std::string> ValidationReport::messages() const {
    std::vector<std::string> out;
    for (const auto& [child, parent] : dangling_parents)
        out.push_back("dangling parent " + parent.str() + " on " + child.str());
    for (const auto& c : cyclic_classes) out.push_back("is-a cycle through " + c.str());
    return out;
}

namespace {

bool reaches_itself(const Ontology& o, const ClassIri& start) {
    std::set<ClassIri> visited;
    std::deque<ClassIri> frontier{start};
    while (!frontier.empty()) {
        const ClassIri current = frontier.front();
        frontier.pop_front();
        for (const auto& child : o.children(current)) {
            if (child == start) return true;
            if (visited.insert(child).second) frontier.push_back(child);
        }
    }
    return false;
}

}  // namespace

ValidationReport validate(const Ontology& o) {
    ValidationReport report;
    for (const auto& [iri, c] : o.classes()) {
        for (const auto& p : c.parents) {
            if (!o.contains(p)) report.dangling_parents.emplace_back(iri, p);
        }
    }
    for (const auto& [iri, c] : o.classes()) {
        if (reaches_itself(o, iri)) report.cyclic_classes.push_back(iri);
    }
    return report;
}

std::string local_name(const ClassIri& iri) {
    const std::string& s = iri.str();
    std::string_view tail;
    if (const auto hash = s.find('#'); hash != std::string::npos) {
        tail = std::string_view(s).substr(hash + 1);
    } else {
        const auto slash = s.rfind('/');
        tail = slash == std::string::npos ? std::string_view(s) : std::string_view(s).substr(slash + 1);
    }
    if (tail.empty()) throw ParseError("IRI has no local name: " + s);
    return std::string(tail);
}

std::string normalize_label(std::string_view raw) {
    std::string spaced;
    spaced.reserve(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) {
        const char c = raw[i];
        if (c == '_' || c == '-') {
            spaced.push_back(' ');
            continue;
        }
        // U+2010..U+2015 (hyphen, non-breaking hyphen, figure/en/em dash, bar)
        if (static_cast<unsigned char>(c) == 0xE2 && i + 2 < raw.size() &&
            static_cast<unsigned char>(raw[i + 1]) == 0x80) {
            const auto third = static_cast<unsigned char>(raw[i + 2]);
            if (third >= 0x90 && third <= 0x95) {
                spaced.push_back(' ');
                i += 2;
                continue;
            }
        }
        spaced.push_back(c);
    }
    return text::collapse_whitespace(text::to_lower(spaced));
}

std::set<ClassIri> subclass_closure(const Ontology& o, const ClassIri& c) {
    if (!o.contains(c)) throw NotFoundError("class not found in ontology '" + o.id() + "': " + c.str());
    std::set<ClassIri> visited;
    std::deque<ClassIri> frontier{c};
    while (!frontier.empty()) {
        const ClassIri current = frontier.front();
        frontier.pop_front();
        for (const auto& child : o.children(current)) {
            if (visited.insert(child).second) frontier.push_back(child);
        }
    }
    // On a cycle c itself becomes reachable; it is never part of its own closure.
    visited.erase(c);
    return visited;
}

}  // namespace ontorag
