#pragma once

#include <filesystem>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "ontorag/embedding.hpp"

namespace ontorag {

struct Chunk {
    std::string id;  // "<document id>:<byte offset>"
    std::string text;
    EmbeddingVector vector;

    friend bool operator==(const Chunk&, const Chunk&) = default;
};

struct TextWindow {
    std::size_t offset;
    std::string text;
};

inline constexpr std::size_t kDefaultChunkSize = 512;
inline constexpr std::size_t kDefaultChunkOverlap = 64;
inline constexpr std::size_t kChunkAlignWindow = 20;
inline constexpr std::size_t kDefaultTopK = 4;

// Windows of `size` bytes, each starting `overlap` bytes before the previous
// window's end. A window end that would split a word moves back to the
// nearest whitespace within 20 bytes, as long as the next window still
// advances. Throws DataError unless 0 <= overlap < size.
std::vector<TextWindow> chunk_document(std::string_view text, std::size_t size, std::size_t overlap);

struct ScoredChunk {
    const Chunk* chunk;
    double score;
};

// Exact full-scan cosine store. Reads may run concurrently; ingest needs
// exclusive access.
class VectorStore {
public:
    VectorStore() = default;

    std::size_t dim() const noexcept { return dim_; }
    const std::string& provider_name() const noexcept { return provider_; }
    const std::string& created() const noexcept { return created_; }
    const std::vector<Chunk>& chunks() const noexcept { return chunks_; }
    std::size_t size() const noexcept { return chunks_.size(); }
    bool empty() const noexcept { return chunks_.empty(); }
    bool has_document(const std::string& document_id) const { return documents_.contains(document_id); }

    // Chunks, embeds and appends a document. Whitespace-only windows are
    // skipped. Throws DataError on dimension mismatch or a repeated document
    // id; the store is unchanged on any failure.
    void ingest(const std::string& document_id, std::string_view document, const EmbeddingProvider& provider,
                std::size_t size = kDefaultChunkSize, std::size_t overlap = kDefaultChunkOverlap);

    // Appends pre-embedded chunks (same guarantees as ingest).
    void add_chunks(std::vector<Chunk> chunks, const std::string& provider_name);

    // Top-k by cosine, descending, ties by ascending id. Empty store gives an
    // empty result. Throws DataError for k == 0, a dim mismatch or a zero query.
    std::vector<ScoredChunk> retrieve(const EmbeddingVector& query, std::size_t k = kDefaultTopK) const;

    // JSON lines: a header {"format","dim","provider","created"} then one
    // {"id","text","vector"} per chunk.
    std::string to_jsonl() const;
    static VectorStore from_jsonl(std::string_view content);

    void save(const std::filesystem::path& path) const;
    static VectorStore load(const std::filesystem::path& path);

private:
    std::size_t dim_ = 0;
    std::string provider_;
    std::string created_;
    std::vector<Chunk> chunks_;
    std::set<std::string> ids_;
    std::set<std::string> documents_;
};

// Document id part of a chunk id.
std::string chunk_document_id(std::string_view chunk_id);

// UTC ISO-8601 timestamp; honors SOURCE_DATE_EPOCH for reproducible output.
std::string current_timestamp();

}  // namespace ontorag
