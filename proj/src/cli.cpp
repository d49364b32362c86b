#include "ontorag/cli.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>

#include "ontorag/align.hpp"
#include "ontorag/error.hpp"
#include "ontorag/evaluation.hpp"
#include "ontorag/infiltrate.hpp"
#include "ontorag/io.hpp"
#include "ontorag/ontology_io.hpp"
#include "ontorag/rag.hpp"
#include "ontorag/subsume.hpp"
#include "ontorag/text.hpp"
#include "ontorag/vector_store.hpp"

namespace ontorag::cli {

namespace fs = std::filesystem;

namespace {

// Raised by config validation; maps to exit status 1.
class UsageError : public Error {
public:
    using Error::Error;
};

struct RunConfig {
    // ontologies and alignment
    std::string source;
    std::string target;
    std::string format = "auto";
    std::string scorer = "lexical";
    double threshold = kDefaultEquivalenceThreshold;
    bool no_blocking = false;

    // subsumption and dictionary
    std::string mappings;
    std::string subsumptions;
    std::string corpus_out;
    double subsumption_threshold = kDefaultSubsumptionThreshold;
    std::size_t negatives = kDefaultNegativesPerPositive;
    std::uint64_t seed = 42;
    std::size_t max_per_anchor = kDefaultMaxPerAnchor;

    // infiltration
    std::string dict;
    std::optional<std::string> prompt;
    std::size_t max_append = kDefaultMaxAppendTotal;
    bool bare = false;
    bool fuzzy = false;
    bool trace = false;

    // retrieval and generation
    std::string store;
    std::vector<std::string> docs;
    std::string doc_id;
    std::size_t chunk_size = kDefaultChunkSize;
    std::size_t overlap = kDefaultChunkOverlap;
    std::string provider = "deterministic";
    std::size_t dim = 384;
    std::string embed_model = "text-embedding";
    std::string llm = "echo";
    std::string llm_model = "gpt-3.5-turbo";
    std::size_t k = kDefaultTopK;
    bool with_subsumptions = true;
    std::string log;

    // evaluation
    std::string dataset;
    std::string out_dir;

    std::string out;
};

void require_unit_interval(double v, const char* flag) {
    if (!(v >= 0.0 && v <= 1.0)) throw UsageError(std::string(flag) + " must be within [0, 1]");
}

void check_provider_specs(const RunConfig& c) {
    if (c.provider != "deterministic" && !c.provider.starts_with("http:"))
        throw UsageError("--provider must be deterministic or http:<url>");
    if (c.llm != "echo" && !c.llm.starts_with("http:")) throw UsageError("--llm must be echo or http:<url>");
}

void validate_retrieval(const RunConfig& c) {
    check_provider_specs(c);
    if (c.k == 0) throw UsageError("--k must be at least 1");
    if (c.dim == 0) throw UsageError("--dim must be positive");
    if (c.provider == "deterministic" && c.dim < kMinDeterministicDim)
        throw UsageError("--dim must be at least 8 for the deterministic provider");
}

Ontology load_ontology(const std::string& path, const RunConfig& c, std::ostream& err) {
    auto report = load_ontology_file(path, parse_ontology_format(c.format));
    for (const auto& w : report.warnings) err << path << ":" << w.line << ": warning: " << w.message << "\n";
    for (const auto& m : validate(report.ontology).messages()) err << path << ": warning: " << m << "\n";
    return std::move(report.ontology);
}

SubsumptionDictionary load_dictionary(const RunConfig& c) {
    if (c.dict.empty()) return {};
    return parse_dictionary_json(io::read_file(c.dict));
}

InfiltrateOptions infiltrate_options(const RunConfig& c) { return {c.max_append, c.bare, c.fuzzy}; }

AnswerOptions answer_options(const RunConfig& c) { return {c.k, c.with_subsumptions, infiltrate_options(c)}; }

void add_ontology_flags(CLI::App* cmd, RunConfig& c) {
    cmd->add_option("--source", c.source, "Source ontology (OBO or JSON)")->required();
    cmd->add_option("--target", c.target, "Target ontology (OBO or JSON)")->required();
    cmd->add_option("--format", c.format, "Ontology format")->check(CLI::IsMember({"auto", "obo", "json"}));
}

void add_embedding_flags(CLI::App* cmd, RunConfig& c) {
    cmd->add_option("--provider", c.provider, "Embedding provider: deterministic|http:<url>")
        ->envname("ONTORAG_EMBED_PROVIDER");
    cmd->add_option("--dim", c.dim, "Embedding dimension");
    cmd->add_option("--embed-model", c.embed_model, "Model name sent to the embedding API");
}

void add_infiltrate_flags(CLI::App* cmd, RunConfig& c) {
    cmd->add_option("--max-append", c.max_append, "Maximum related terms appended per prompt");
    cmd->add_flag("--bare", c.bare, "Append bare terms instead of a (related: ...) block");
    cmd->add_flag("--fuzzy", c.fuzzy, "Allow edit distance 1 when matching prompt tokens");
}

void add_answer_flags(CLI::App* cmd, RunConfig& c) {
    cmd->add_option("--store", c.store, "Vector store file")->required();
    cmd->add_option("--dict", c.dict, "Subsumption dictionary JSON");
    cmd->add_option("--k", c.k, "Chunks to retrieve");
    cmd->add_option("--llm", c.llm, "LLM provider: echo|http:<url>")->envname("ONTORAG_LLM");
    cmd->add_option("--llm-model", c.llm_model, "Model name sent to the chat API");
    cmd->add_flag("--with-subsumptions,!--without-subsumptions", c.with_subsumptions,
                  "Infiltrate prompts with dictionary terms (default on)");
    add_embedding_flags(cmd, c);
    add_infiltrate_flags(cmd, c);
}

int cmd_align(const RunConfig& c, std::ostream& out, std::ostream& err) {
    require_unit_interval(c.threshold, "--threshold");
    check_provider_specs(c);
    const auto source = load_ontology(c.source, c, err);
    const auto target = load_ontology(c.target, c, err);
    std::unique_ptr<EmbeddingProvider> provider;
    if (c.scorer == "embedding") provider = make_embedding_provider(c.provider, c.dim, c.embed_model);
    const auto scorer = make_scorer(c.scorer, provider.get());
    const auto mappings = align(source, target, *scorer, {c.threshold, !c.no_blocking});
    const auto accepted = accepted_mappings(mappings);
    io::write_file_atomic(c.out, mappings_to_tsv(accepted));
    out << "align: " << mappings.size() << " pairs scored, " << accepted.size() << " accepted -> " << c.out << "\n";
    return kOk;
}

int cmd_subsume(const RunConfig& c, std::ostream& out, std::ostream& err) {
    require_unit_interval(c.subsumption_threshold, "--threshold");
    check_provider_specs(c);
    const auto source = load_ontology(c.source, c, err);
    const auto target = load_ontology(c.target, c, err);
    const auto equivalences = parse_mappings_tsv(io::read_file(c.mappings));
    std::unique_ptr<EmbeddingProvider> provider;
    if (c.scorer == "embedding") provider = make_embedding_provider(c.provider, c.dim, c.embed_model);
    const auto scorer = make_scorer(c.scorer, provider.get());

    const auto corpus = build_subsumption_corpus(source, target, equivalences, c.negatives, c.seed);
    const auto scored = score_subsumptions(corpus, source, target, *scorer);
    std::vector<SubsumptionPair> accepted;
    std::size_t positives = 0;
    for (const auto& p : scored) {
        if (p.polarity != Polarity::positive) continue;
        ++positives;
        if (*p.score >= c.subsumption_threshold) accepted.push_back(p);
    }
    if (!c.corpus_out.empty()) io::write_file_atomic(c.corpus_out, corpus_to_tsv(scored));
    io::write_file_atomic(c.out, subsumptions_to_tsv(accepted));
    out << "subsume: " << positives << " positive, " << scored.size() - positives << " negative candidates, "
        << accepted.size() << " accepted -> " << c.out << "\n";
    return kOk;
}

int cmd_dict(const RunConfig& c, std::ostream& out, std::ostream& err) {
    if (c.max_per_anchor == 0) throw UsageError("--max-per-anchor must be at least 1");
    const auto source = load_ontology(c.source, c, err);
    const auto target = load_ontology(c.target, c, err);
    const auto accepted = parse_subsumptions_tsv(io::read_file(c.subsumptions));
    const auto dict = build_dictionary(accepted, source, target, c.max_per_anchor);
    io::write_file_atomic(c.out, dictionary_to_json(dict));
    out << "dict: " << dict.entries.size() << " keys -> " << c.out << "\n";
    return kOk;
}

int cmd_infiltrate(const RunConfig& c, std::istream& in, std::ostream& out, std::ostream& err) {
    const auto dict = load_dictionary(c);
    std::vector<std::string> prompts;
    if (c.prompt) {
        prompts.push_back(*c.prompt);
    } else {
        std::string line;
        while (std::getline(in, line)) {
            if (!text::trim(line).empty()) prompts.push_back(line);
        }
    }
    std::size_t augmented = 0;
    for (const auto& p : prompts) {
        const auto result = infiltrate(p, dict, infiltrate_options(c));
        out << result.text << "\n";
        if (c.trace) out << trace_json(result) << "\n";
        if (!result.appended_terms.empty()) ++augmented;
    }
    err << "infiltrate: " << prompts.size() << " prompts, " << augmented << " augmented\n";
    return kOk;
}

int cmd_ingest(const RunConfig& c, std::ostream& out, std::ostream&) {
    if (c.chunk_size == 0) throw UsageError("--chunk-size must be positive");
    if (c.overlap >= c.chunk_size) throw UsageError("--overlap must be smaller than --chunk-size");
    validate_retrieval(c);
    if (!c.doc_id.empty() && c.docs.size() > 1) throw UsageError("--doc-id needs exactly one --doc");
    VectorStore store = fs::exists(c.store) ? VectorStore::load(c.store) : VectorStore{};
    const auto provider = make_embedding_provider(c.provider, c.dim, c.embed_model);
    const std::size_t before = store.size();
    for (const auto& doc : c.docs) {
        const std::string id = c.doc_id.empty() ? fs::path(doc).stem().string() : c.doc_id;
        store.ingest(id, io::read_file(doc), *provider, c.chunk_size, c.overlap);
    }
    store.save(c.store);
    out << "ingest: " << store.size() - before << " chunks added, " << store.size() << " total -> " << c.store
        << "\n";
    return kOk;
}

int cmd_ask(const RunConfig& c, std::ostream& out, std::ostream& err) {
    validate_retrieval(c);
    const auto dict = load_dictionary(c);
    const auto store = VectorStore::load(c.store);
    const auto embedder = make_embedding_provider(c.provider, c.dim, c.embed_model);
    const auto llm = make_llm_provider(c.llm, c.llm_model);
    auto turn = answer(*c.prompt, dict, store, *embedder, *llm, answer_options(c));
    turn.timestamp = current_timestamp();
    out << turn.response << "\n";
    if (c.trace) out << trace_json(turn.augmented_prompt) << "\n";
    if (!c.log.empty()) {
        std::ofstream log(c.log, std::ios::app);
        log << turn_to_json(turn) << "\n";
        if (!log) throw DataError("cannot write session log: " + c.log);
    }
    err << "ask: " << turn.augmented_prompt.appended_terms.size() << " terms appended, " << turn.retrieved.size()
        << " chunks retrieved\n";
    return kOk;
}

int cmd_chat(const RunConfig& c, std::istream& in, std::ostream& out, std::ostream& err) {
    validate_retrieval(c);
    const auto dict = load_dictionary(c);
    const auto store = VectorStore::load(c.store);
    const auto embedder = make_embedding_provider(c.provider, c.dim, c.embed_model);
    const auto llm = make_llm_provider(c.llm, c.llm_model);
    ChatSession session{dict, store, *embedder, *llm, answer_options(c), c.trace, c.log};
    return chat_repl(session, in, out, err);
}

int cmd_eval(const RunConfig& c, std::ostream& out, std::ostream&) {
    validate_retrieval(c);
    const auto dataset = parse_dataset_jsonl(io::read_file(c.dataset));
    const auto dict = load_dictionary(c);
    const auto store = VectorStore::load(c.store);
    const auto embedder = make_embedding_provider(c.provider, c.dim, c.embed_model);
    const auto llm = make_llm_provider(c.llm, c.llm_model);
    const auto run = run_evaluation(dataset, dict, store, *embedder, *llm, answer_options(c));

    const fs::path dir(c.out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw DataError("cannot create output directory: " + c.out_dir);
    const auto dump_turns = [](const std::vector<ChatTurn>& turns) {
        std::string s;
        for (const auto& t : turns) s += turn_to_json(t) + "\n";
        return s;
    };
    io::write_file_atomic(dir / "responses_with.jsonl", dump_turns(run.with_turns));
    io::write_file_atomic(dir / "responses_without.jsonl", dump_turns(run.without_turns));
    io::write_file_atomic(dir / "summary.tsv", tables_to_tsv(run.tables));

    const auto& w = run.tables.with_subsumptions.index;
    const auto& wo = run.tables.without_subsumptions.index;
    char line[160];
    std::snprintf(line, sizeof line, "eval: %zu records, H cosine %.6g with vs %.6g without", dataset.size(),
                  w.cosine_pct, wo.cosine_pct);
    out << line << " -> " << (dir / "summary.tsv").string() << "\n";
    return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
    RunConfig c;
    CLI::App app{"Ontology-guided prompt infiltration for retrieval-augmented generation", "ontorag"};
    app.require_subcommand(1);

    auto* align_cmd = app.add_subcommand("align", "Extract equivalence mappings between two ontologies");
    add_ontology_flags(align_cmd, c);
    align_cmd->add_option("--out", c.out, "Mapping TSV")->required();
    align_cmd->add_option("--threshold", c.threshold, "Acceptance threshold");
    align_cmd->add_option("--scorer", c.scorer, "lexical|embedding|constant:<v>");
    align_cmd->add_flag("--no-blocking", c.no_blocking, "Score the full cross product");
    add_embedding_flags(align_cmd, c);

    auto* subsume_cmd = app.add_subcommand("subsume", "Build and score subsumption candidates");
    add_ontology_flags(subsume_cmd, c);
    subsume_cmd->add_option("--mappings", c.mappings, "Equivalence mapping TSV")->required();
    subsume_cmd->add_option("--out", c.out, "Accepted subsumption TSV")->required();
    subsume_cmd->add_option("--corpus-out", c.corpus_out, "Scored positive/negative corpus TSV");
    subsume_cmd->add_option("--threshold", c.subsumption_threshold, "Acceptance threshold");
    subsume_cmd->add_option("--negatives", c.negatives, "Negative samples per positive");
    subsume_cmd->add_option("--seed", c.seed, "Negative sampling seed");
    subsume_cmd->add_option("--scorer", c.scorer, "lexical|embedding|constant:<v>");
    add_embedding_flags(subsume_cmd, c);

    auto* dict_cmd = app.add_subcommand("dict", "Compile the infiltration dictionary");
    add_ontology_flags(dict_cmd, c);
    dict_cmd->add_option("--subsumptions", c.subsumptions, "Accepted subsumption TSV")->required();
    dict_cmd->add_option("--out", c.out, "Dictionary JSON")->required();
    dict_cmd->add_option("--max-per-anchor", c.max_per_anchor, "Labels kept per key");

    auto* infiltrate_cmd = app.add_subcommand("infiltrate", "Augment prompts with related concepts");
    infiltrate_cmd->add_option("--dict", c.dict, "Dictionary JSON")->required();
    infiltrate_cmd->add_option("--prompt", c.prompt, "Prompt (default: one per stdin line)");
    infiltrate_cmd->add_flag("--trace", c.trace, "Print a JSON trace after each prompt");
    add_infiltrate_flags(infiltrate_cmd, c);

    auto* ingest_cmd = app.add_subcommand("ingest", "Chunk, embed and store documents");
    ingest_cmd->add_option("--store", c.store, "Vector store file (created when missing)")->required();
    ingest_cmd->add_option("--doc", c.docs, "Document text file")->required();
    ingest_cmd->add_option("--doc-id", c.doc_id, "Document id (default: file stem)");
    ingest_cmd->add_option("--chunk-size", c.chunk_size, "Chunk size in bytes");
    ingest_cmd->add_option("--overlap", c.overlap, "Chunk overlap in bytes");
    add_embedding_flags(ingest_cmd, c);

    auto* ask_cmd = app.add_subcommand("ask", "Answer a single prompt");
    add_answer_flags(ask_cmd, c);
    ask_cmd->add_option("--prompt", c.prompt, "Prompt")->required();
    ask_cmd->add_flag("--trace", c.trace, "Print appended terms");
    ask_cmd->add_option("--log", c.log, "Append the turn to this JSONL log");

    auto* chat_cmd = app.add_subcommand("chat", "Interactive session; /quit exits");
    add_answer_flags(chat_cmd, c);
    chat_cmd->add_flag("--trace", c.trace, "Print appended terms and retrieved chunk ids");
    c.log = "session.jsonl";
    chat_cmd->add_option("--log", c.log, "Session JSONL log")->capture_default_str();

    auto* eval_cmd = app.add_subcommand("eval", "A/B evaluation with and without subsumptions");
    add_answer_flags(eval_cmd, c);
    eval_cmd->add_option("--dataset", c.dataset, "JSONL of {prompt, ground_truth}")->required();
    eval_cmd->add_option("--out-dir", c.out_dir, "Directory for responses and summary.tsv")->required();

    std::vector<const char*> argv{"ontorag"};
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        const auto* sub = app.get_subcommands().empty() ? &app : app.get_subcommands().front();
        err << sub->help();
        return kUsage;
    }

    try {
        if (align_cmd->parsed()) return cmd_align(c, out, err);
        if (subsume_cmd->parsed()) return cmd_subsume(c, out, err);
        if (dict_cmd->parsed()) return cmd_dict(c, out, err);
        if (infiltrate_cmd->parsed()) return cmd_infiltrate(c, in, out, err);
        if (ingest_cmd->parsed()) return cmd_ingest(c, out, err);
        if (ask_cmd->parsed()) return cmd_ask(c, out, err);
        if (chat_cmd->parsed()) return cmd_chat(c, in, out, err);
        if (eval_cmd->parsed()) return cmd_eval(c, out, err);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const ProviderError& e) {
        err << "error: " << e.what() << "\n";
        return kProviderError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kDataError;
    }
    return kUsage;
}

}  // namespace ontorag::cli
