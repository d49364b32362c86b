#pragma once

#include <compare>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace ontorag {

// Absolute IRI naming one class. Non-empty, no whitespace.
class ClassIri {
public:
    explicit ClassIri(std::string value);

    const std::string& str() const noexcept { return value_; }

    friend auto operator<=>(const ClassIri&, const ClassIri&) = default;
    friend bool operator==(const ClassIri&, const ClassIri&) = default;

private:
    std::string value_;
};

struct OntologyClass {
    ClassIri iri;
    std::string label;                // may be empty; see display_label()
    std::set<std::string> synonyms;   // never contains ""
    std::set<ClassIri> parents;       // asserted direct is-a

    // The label, or normalize_label(local_name(iri)) when none was supplied.
    std::string display_label() const;

    // display_label() followed by the synonyms, in that order.
    std::vector<std::string> names() const;

    friend bool operator==(const OntologyClass&, const OntologyClass&) = default;
};

// Immutable set of classes keyed by IRI. Parent IRIs may dangle (they are
// kept and reported by validate()); is-a cycles are tolerated.
class Ontology {
public:
    // Throws DataError when `classes` is empty, holds a duplicate IRI, a
    // class lists itself as parent, or a synonym is empty.
    Ontology(std::string id, std::vector<OntologyClass> classes);

    const std::string& id() const noexcept { return id_; }
    std::size_t size() const noexcept { return classes_.size(); }
    const std::map<ClassIri, OntologyClass>& classes() const noexcept { return classes_; }

    bool contains(const ClassIri& iri) const { return classes_.contains(iri); }
    const OntologyClass* find(const ClassIri& iri) const;
    // Throws NotFoundError.
    const OntologyClass& at(const ClassIri& iri) const;

    // Direct subclasses (classes asserting `iri` as a parent).
    const std::set<ClassIri>& children(const ClassIri& iri) const;

    friend bool operator==(const Ontology& a, const Ontology& b) {
        return a.id_ == b.id_ && a.classes_ == b.classes_;
    }

private:
    std::string id_;
    std::map<ClassIri, OntologyClass> classes_;
    std::map<ClassIri, std::set<ClassIri>> children_;
};

struct ValidationReport {
    // (child, missing parent)
    std::vector<std::pair<ClassIri, ClassIri>> dangling_parents;
    // Classes that can reach themselves through parent edges.
    std::vector<ClassIri> cyclic_classes;

    bool clean() const { return dangling_parents.empty() && cyclic_classes.empty(); }
    std::vector<std::string> messages() const;
};

ValidationReport validate(const Ontology& o);

// Fragment after '#' when present, else the last '/' segment. Throws
// ParseError when that part is empty.
std::string local_name(const ClassIri& iri);

// Lowercase, '_' and dashes become spaces, whitespace collapsed and trimmed.
std::string normalize_label(std::string_view raw);

// All transitive descendants of `c`, excluding `c`. Throws NotFoundError for
// an unknown IRI.
std::set<ClassIri> subclass_closure(const Ontology& o, const ClassIri& c);

}  // namespace ontorag
