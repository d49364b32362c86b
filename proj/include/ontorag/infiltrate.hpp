#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "ontorag/subsume.hpp"

namespace ontorag {

struct TokenizedPrompt {
    std::vector<std::string> tokens;
    std::string original;
};

struct AugmentedPrompt {
    std::string text;
    std::vector<std::string> appended_terms;
    std::vector<std::string> matched_keys;
    // term_sources[i] is the matched key appended_terms[i] came from.
    std::vector<std::string> term_sources;

    friend bool operator==(const AugmentedPrompt&, const AugmentedPrompt&) = default;
};

TokenizedPrompt tokenize(std::string_view prompt);

std::string detokenize(const std::vector<std::string>& tokens);

// Whitespace-collapsed, trimmed prompt; case and punctuation are kept.
std::string normalize_prompt(std::string_view prompt);

// The prompt with any trailing "(related: ...)" blocks removed.
std::string_view strip_related_suffix(std::string_view prompt);

inline constexpr std::size_t kDefaultMaxAppendTotal = 6;

struct InfiltrateOptions {
    std::size_t max_append_total = kDefaultMaxAppendTotal;
    // Append terms separated by spaces instead of a "(related: ...)" block.
    bool bare_append = false;
    // Let a prompt token of length >= 4 match a key token within edit distance 1.
    bool fuzzy = false;
};

// Matches dictionary keys against prompt n-grams, longest n first, each
// token used by at most one match, then appends the mapped labels in
// dictionary order up to max_append_total. Labels already present in the
// prompt are skipped.
AugmentedPrompt infiltrate(std::string_view prompt, const SubsumptionDictionary& dict,
                           const InfiltrateOptions& options = {});

// {"matched_keys": [...], "appended_terms": [...], "term_sources": [...]}
std::string trace_json(const AugmentedPrompt& augmented);

}  // namespace ontorag
