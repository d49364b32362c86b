#include "support/fixtures.hpp"

#include <ontorag/cli.hpp>
#include <ontorag/io.hpp>

#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

namespace fs = std::filesystem;
using testing_support::fixtures_dir;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args, const std::string& input = "") {
    std::istringstream in(input);
    std::ostringstream out, err;
    const int code = ontorag::cli::run(args, in, out, err);
    return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("ontorag_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }
    std::string path(const std::string& name) const { return (dir_ / name).string(); }
    static std::string fx(const std::string& name) { return (fixtures_dir() / name).string(); }

    // align -> subsume -> dict -> ingest -> eval into `prefix`
    void pipeline(const std::string& prefix) {
        const auto p = [&](const std::string& n) { return path(prefix + n); };
        ASSERT_EQ(run({"align", "--source", fx("symptoms.obo"), "--target", fx("clinical_signs.obo"), "--out", p("maps.tsv")}).code, 0);
        ASSERT_EQ(run({"subsume", "--source", fx("symptoms.obo"), "--target", fx("clinical_signs.obo"), "--mappings",
                       p("maps.tsv"), "--out", p("subs.tsv"), "--corpus-out", p("corpus.tsv")})
                      .code,
                  0);
        ASSERT_EQ(run({"dict", "--source", fx("symptoms.obo"), "--target", fx("clinical_signs.obo"), "--subsumptions",
                       p("subs.tsv"), "--out", p("dict.json")})
                      .code,
                  0);
        ASSERT_EQ(run({"ingest", "--store", p("store.jsonl"), "--doc", fx("medical_document.txt")}).code, 0);
        const auto r = run({"eval", "--dataset", fx("questions.jsonl"), "--store", p("store.jsonl"), "--dict", p("dict.json"),
                            "--out-dir", p("eval")});
        ASSERT_EQ(r.code, 0) << r.err;
    }

    fs::path dir_;
};

}  // namespace

TEST_F(CliTest, AlignWritesHeaderAndAcceptedRows) {
    const auto r = run({"align", "--source", fx("symptoms.obo"), "--target", fx("clinical_signs.obo"), "--out", path("m.tsv")});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto tsv = ontorag::io::read_file(path("m.tsv"));
    EXPECT_EQ(tsv.rfind("source_iri\ttarget_iri\tscore\trelation\n", 0), 0u);
    const auto lines = ontorag::io::lines(tsv);
    EXPECT_GT(lines.size(), 2u);
    EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 1);
}

TEST_F(CliTest, PipelineIsByteIdenticalAcrossRuns) {
    const auto before = ontorag::io::read_file(fx("symptoms.obo"));
    pipeline("a_");
    pipeline("b_");
    for (const char* f : {"maps.tsv", "subs.tsv", "corpus.tsv", "dict.json", "eval/summary.tsv",
                          "eval/responses_with.jsonl", "eval/responses_without.jsonl"}) {
        EXPECT_EQ(ontorag::io::read_file(path(std::string("a_") + f)), ontorag::io::read_file(path(std::string("b_") + f))) << f;
    }
    EXPECT_EQ(ontorag::io::read_file(fx("symptoms.obo")), before);
    const auto summary = ontorag::io::read_file(path("a_eval/summary.tsv"));
    EXPECT_EQ(summary.rfind("Contextual Similarity\t", 0), 0u);
    EXPECT_NE(summary.find("Hallucination Index\t"), std::string::npos);
}

TEST_F(CliTest, EvalMissingDatasetNamesPath) {
    const auto missing = path("nope.jsonl");
    ASSERT_EQ(run({"ingest", "--store", path("s.jsonl"), "--doc", fx("medical_document.txt")}).code, 0);
    const auto r = run({"eval", "--dataset", missing, "--store", path("s.jsonl"), "--out-dir", path("ev")});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find(missing), std::string::npos);
}

TEST_F(CliTest, UsageErrors) {
    EXPECT_EQ(run({"align", "--bogus"}).code, 1);
    EXPECT_EQ(run({"frobnicate"}).code, 1);
    EXPECT_EQ(run({}).code, 1);
    const auto r = run({"align", "--source", fx("symptoms.obo"), "--target", fx("clinical_signs.obo"), "--out",
                        path("m.tsv"), "--threshold", "1.5"});
    EXPECT_EQ(r.code, 1);
    EXPECT_FALSE(r.err.empty());
}

TEST_F(CliTest, ProviderFailureExitsThree) {
    const auto r = run({"ingest", "--store", path("s.jsonl"), "--doc", fx("medical_document.txt"), "--provider",
                        "http:http://127.0.0.1:1/v1/embeddings"});
    EXPECT_EQ(r.code, 3) << r.err;
    EXPECT_FALSE(fs::exists(path("s.jsonl")));
}

TEST_F(CliTest, InfiltrateReadsStdin) {
    ontorag::io::write_file_atomic(path("d.json"), R"({"constipation": ["fecal impaction"]})");
    const auto r = run({"infiltrate", "--dict", path("d.json")}, "I have constipation issues\nnothing here\n");
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out, "I have constipation issues (related: fecal impaction)\nnothing here\n");
}

TEST_F(CliTest, AskAndChatWithEcho) {
    ontorag::io::write_file_atomic(path("d.json"), R"({"constipation": ["chronic constipation"]})");
    ASSERT_EQ(run({"ingest", "--store", path("s.jsonl"), "--doc", fx("medical_document.txt")}).code, 0);
    const auto ask = run({"ask", "--store", path("s.jsonl"), "--dict", path("d.json"), "--prompt", "constipation help"});
    ASSERT_EQ(ask.code, 0) << ask.err;
    EXPECT_NE(ask.out.find("Question: constipation help (related: chronic constipation)"), std::string::npos);
    const auto chat = run({"chat", "--store", path("s.jsonl"), "--dict", path("d.json"), "--log", path("log.jsonl")},
                          "constipation help\n/quit\n");
    ASSERT_EQ(chat.code, 0) << chat.err;
    EXPECT_EQ(ontorag::io::lines(ontorag::io::read_file(path("log.jsonl"))).size(), 1u);
}

TEST_F(CliTest, IngestRejectsDuplicateDocument) {
    ASSERT_EQ(run({"ingest", "--store", path("s.jsonl"), "--doc", fx("medical_document.txt")}).code, 0);
    const auto before = ontorag::io::read_file(path("s.jsonl"));
    EXPECT_EQ(run({"ingest", "--store", path("s.jsonl"), "--doc", fx("medical_document.txt")}).code, 2);
    EXPECT_EQ(ontorag::io::read_file(path("s.jsonl")), before);
}
