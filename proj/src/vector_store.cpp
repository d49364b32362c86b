#include "ontorag/vector_store.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>

#include <nlohmann/json.hpp>

#include "ontorag/error.hpp"
#include "ontorag/io.hpp"
#include "ontorag/text.hpp"

namespace ontorag {

namespace {

constexpr std::string_view kStoreFormat = "ontorag-vector-store/1";

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }

bool ranks_before(const ScoredChunk& a, const ScoredChunk& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.chunk->id < b.chunk->id;
}

}  // namespace

std::vector<TextWindow> chunk_document(std::string_view text, std::size_t size, std::size_t overlap) {
    if (size == 0) throw DataError("chunk size must be positive");
    if (overlap >= size) throw DataError("chunk overlap must be smaller than chunk size");
    std::vector<TextWindow> out;
    std::size_t start = 0;
    while (start < text.size()) {
        std::size_t end = std::min(start + size, text.size());
        if (end < text.size() && !is_space(text[end]) && !is_space(text[end - 1])) {
            const std::size_t floor = end > kChunkAlignWindow ? end - kChunkAlignWindow : 0;
            for (std::size_t p = end - 1; p >= floor && p > start; --p) {
                if (is_space(text[p])) {
                    if (p > overlap && p - overlap > start) end = p;
                    break;
                }
            }
        }
        out.push_back({start, std::string(text.substr(start, end - start))});
        if (end == text.size()) break;
        start = end - overlap;
    }
    return out;
}

std::string chunk_document_id(std::string_view chunk_id) {
    const auto colon = chunk_id.rfind(':');
    return std::string(colon == std::string_view::npos ? chunk_id : chunk_id.substr(0, colon));
}

std::string current_timestamp() {
    std::time_t t = 0;
    if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH"); epoch && *epoch) {
        t = static_cast<std::time_t>(std::strtoll(epoch, nullptr, 10));
    } else {
        t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    }
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void VectorStore::ingest(const std::string& document_id, std::string_view document, const EmbeddingProvider& provider,
                         std::size_t size, std::size_t overlap) {
    if (document_id.empty()) throw DataError("document id must not be empty");
    if (has_document(document_id)) throw DataError("document already ingested: " + document_id);
    if (!empty() && provider.dim() != dim_)
        throw DataError("provider dim " + std::to_string(provider.dim()) + " does not match store dim " +
                        std::to_string(dim_));

    std::vector<std::string> ids;
    std::vector<std::string> texts;
    for (auto& w : chunk_document(document, size, overlap)) {
        if (text::trim(w.text).empty()) continue;
        ids.push_back(document_id + ":" + std::to_string(w.offset));
        texts.push_back(std::move(w.text));
    }
    if (texts.empty()) throw DataError("document has no text: " + document_id);
    auto vectors = provider.embed(texts);
    if (vectors.size() != texts.size())
        throw ProviderError("embed", provider.name() + " returned " + std::to_string(vectors.size()) +
                                         " vectors for " + std::to_string(texts.size()) + " chunks");
    std::vector<Chunk> chunks;
    chunks.reserve(texts.size());
    for (std::size_t i = 0; i < texts.size(); ++i)
        chunks.push_back({std::move(ids[i]), std::move(texts[i]), std::move(vectors[i])});
    add_chunks(std::move(chunks), provider.name());
}

void VectorStore::add_chunks(std::vector<Chunk> chunks, const std::string& provider_name) {
    std::size_t dim = chunks_.empty() ? 0 : dim_;
    std::set<std::string> new_ids;
    for (const auto& c : chunks) {
        if (c.text.empty()) throw DataError("chunk text must not be empty: " + c.id);
        if (dim == 0) dim = c.vector.dim();
        if (c.vector.dim() != dim)
            throw DataError("chunk " + c.id + " has dim " + std::to_string(c.vector.dim()) + ", store dim is " +
                            std::to_string(dim));
        if (ids_.contains(c.id) || !new_ids.insert(c.id).second) throw DataError("duplicate chunk id: " + c.id);
    }
    if (chunks.empty()) return;
    dim_ = dim;
    if (provider_.empty()) provider_ = provider_name;
    if (created_.empty()) created_ = current_timestamp();
    for (auto& c : chunks) {
        ids_.insert(c.id);
        documents_.insert(chunk_document_id(c.id));
        chunks_.push_back(std::move(c));
    }
}

std::vector<ScoredChunk> VectorStore::retrieve(const EmbeddingVector& query, std::size_t k) const {
    if (k == 0) throw DataError("k must be at least 1");
    if (empty()) return {};
    if (query.dim() != dim_)
        throw DataError("query dim " + std::to_string(query.dim()) + " does not match store dim " +
                        std::to_string(dim_));
    if (query.is_zero()) throw DataError("zero query vector");

    const auto q = query.values();
    double qn = 0.0;
    for (double v : q) qn += v * v;
    qn = std::sqrt(qn);

    std::vector<ScoredChunk> scored;
    scored.reserve(chunks_.size());
    for (const auto& c : chunks_) {
        const auto v = c.vector.values();
        double dot = 0.0;
        double vn = 0.0;
        for (std::size_t i = 0; i < v.size(); ++i) {
            dot += q[i] * v[i];
            vn += v[i] * v[i];
        }
        const double score = vn == 0.0 ? 0.0 : dot / (qn * std::sqrt(vn));
        scored.push_back({&c, score});
    }
    const std::size_t take = std::min(k, scored.size());
    std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(take), scored.end(), ranks_before);
    scored.resize(take);
    return scored;
}

std::string VectorStore::to_jsonl() const {
    nlohmann::ordered_json header;
    header["format"] = kStoreFormat;
    header["dim"] = dim_;
    header["provider"] = provider_;
    header["created"] = created_;
    std::string out = header.dump() + "\n";
    for (const auto& c : chunks_) {
        nlohmann::ordered_json line;
        line["id"] = c.id;
        line["text"] = c.text;
        line["vector"] = std::vector<double>(c.vector.values().begin(), c.vector.values().end());
        out += line.dump() + "\n";
    }
    return out;
}

VectorStore VectorStore::from_jsonl(std::string_view content) {
    const auto rows = io::lines(content);
    if (rows.empty()) throw ParseError("vector store file is empty");
    VectorStore store;
    try {
        const auto header = nlohmann::json::parse(rows.front());
        if (header.value("format", "") != kStoreFormat) throw ParseError("not a vector store file");
        const auto dim = header.at("dim").get<std::size_t>();
        const auto provider = header.at("provider").get<std::string>();
        std::vector<Chunk> chunks;
        for (std::size_t i = 1; i < rows.size(); ++i) {
            if (rows[i].empty()) continue;
            const auto line = nlohmann::json::parse(rows[i]);
            chunks.push_back({line.at("id").get<std::string>(), line.at("text").get<std::string>(),
                              EmbeddingVector(line.at("vector").get<std::vector<double>>())});
        }
        if (!chunks.empty() && chunks.front().vector.dim() != dim)
            throw DataError("chunk dim does not match header dim " + std::to_string(dim));
        store.add_chunks(std::move(chunks), provider);
        store.dim_ = dim;
        store.provider_ = provider;
        store.created_ = header.at("created").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("malformed vector store: ") + e.what());
    }
    return store;
}

void VectorStore::save(const std::filesystem::path& path) const { io::write_file_atomic(path, to_jsonl()); }

VectorStore VectorStore::load(const std::filesystem::path& path) {
    try {
        return from_jsonl(io::read_file(path));
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

}  // namespace ontorag
