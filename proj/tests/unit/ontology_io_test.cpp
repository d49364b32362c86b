#include "support/fixtures.hpp"

#include <ontorag/error.hpp>
#include <ontorag/ontology_io.hpp>

#include <gtest/gtest.h>

#include <filesystem>

using namespace ontorag;
using testing_support::fixture;

namespace {
const ClassIri T1("http://purl.obolibrary.org/obo/T_1");
const ClassIri T0("http://purl.obolibrary.org/obo/T_0");
}  // namespace

TEST(ParseObo, SingleStanza) {
    const auto r = parse_obo("[Term]\nid: T:1\nname: fever\nis_a: T:0 ! sign\n");
    ASSERT_EQ(r.ontology.size(), 1u);
    const auto& c = r.ontology.at(T1);
    EXPECT_EQ(c.label, "fever");
    EXPECT_EQ(c.parents, std::set<ClassIri>{T0});
    EXPECT_TRUE(r.warnings.empty());
}

TEST(ParseObo, ObsoleteSkippedSilently) {
    const auto r = parse_obo("[Term]\nid: T:1\nname: fever\n\n[Term]\nid: T:2\nname: old\nis_obsolete: true\n");
    EXPECT_EQ(r.ontology.size(), 1u);
    EXPECT_FALSE(r.ontology.contains(ClassIri("http://purl.obolibrary.org/obo/T_2")));
    EXPECT_TRUE(r.warnings.empty());
}

TEST(ParseObo, HeaderOnlyIsError) {
    EXPECT_THROW(parse_obo("format-version: 1.2\nontology: x\n"), ParseError);
}

TEST(ParseObo, MissingIdWarnsAndSkips) {
    const auto r = parse_obo("[Term]\nid: T:1\nname: a\n\n[Term]\nname: no id\n");
    EXPECT_EQ(r.ontology.size(), 1u);
    ASSERT_EQ(r.warnings.size(), 1u);
    EXPECT_EQ(r.warnings[0].line, 5u);
}

TEST(ParseObo, SynonymsQualifiersAndUnknownTags) {
    const auto r = parse_obo(
        "ontology: toy\n\n[Term]\nid: T:1\nname: fever\nsynonym: \"pyrexia\" EXACT []\n"
        "synonym: \"say \\\"hot\\\"\" RELATED []\nis_a: T:0 {source=\"x\"} ! sign\ndef: \"ignored\" []\n"
        "\n[Typedef]\nid: part_of\nname: part of\n");
    EXPECT_EQ(r.ontology.id(), "toy");
    const auto& c = r.ontology.at(T1);
    EXPECT_EQ(c.synonyms, (std::set<std::string>{"pyrexia", "say \"hot\""}));
    EXPECT_EQ(c.parents, std::set<ClassIri>{T0});
    EXPECT_TRUE(r.warnings.empty());
}

TEST(ParseObo, IdToIri) {
    EXPECT_EQ(obo_id_to_iri("GO:0001"), "http://purl.obolibrary.org/obo/GO_0001");
    EXPECT_EQ(obo_id_to_iri("http://example.org/x#A"), "http://example.org/x#A");
}

TEST(ParseJson, MinimalDocument) {
    const auto r = parse_json_ontology(R"({"id":"t","classes":[{"iri":"http://x/#A","label":"a"}]})");
    EXPECT_EQ(r.ontology.id(), "t");
    EXPECT_EQ(r.ontology.size(), 1u);
    EXPECT_TRUE(r.ontology.at(ClassIri("http://x/#A")).synonyms.empty());
}

TEST(ParseJson, DuplicateIriLastWins) {
    const auto r = parse_json_ontology(
        "{\"id\":\"t\",\"classes\":[\n{\"iri\":\"http://x/#A\",\"label\":\"a\"},\n{\"iri\":\"http://x/#A\",\"label\":\"b\"}]}");
    EXPECT_EQ(r.ontology.size(), 1u);
    EXPECT_EQ(r.ontology.at(ClassIri("http://x/#A")).label, "b");
    ASSERT_EQ(r.warnings.size(), 1u);
    EXPECT_EQ(r.warnings[0].line, 3u);
}

TEST(ParseJson, Errors) {
    EXPECT_THROW(parse_json_ontology(R"({"id":"t","classes":[]})"), ParseError);
    EXPECT_THROW(parse_json_ontology(R"({"id":"t","classes":[{"label":"a"}]})"), ParseError);
    EXPECT_THROW(parse_json_ontology("{not json"), ParseError);
}

TEST(Serialize, SortedAndRoundTrips) {
    const Ontology o("t", {testing_support::make_class("http://x/#B", "b", {"http://x/#A"}, {"bee"}),
                           testing_support::make_class("http://x/#A", "a")});
    const std::string s = serialize_ontology(o);
    EXPECT_LT(s.find("http://x/#A"), s.find("http://x/#B"));
    EXPECT_EQ(parse_json_ontology(s).ontology, o);
    EXPECT_EQ(s.back(), '\n');
}

TEST(Fixtures, BothParseCleanly) {
    const auto s = parse_obo(fixture("symptoms.obo"));
    const auto t = parse_obo(fixture("clinical_signs.obo"));
    EXPECT_TRUE(s.warnings.empty());
    EXPECT_TRUE(t.warnings.empty());
    EXPECT_EQ(s.ontology.size(), 20u);
    EXPECT_EQ(t.ontology.size(), 22u);
    EXPECT_TRUE(validate(s.ontology).clean());
    EXPECT_TRUE(validate(t.ontology).clean());
}

TEST(LoadFile, MissingPathNamed) {
    try {
        load_ontology_file("/nonexistent/x.obo");
        FAIL();
    } catch (const NotFoundError& e) {
        EXPECT_NE(std::string(e.what()).find("/nonexistent/x.obo"), std::string::npos);
    }
}
