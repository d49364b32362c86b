#include "ontorag/infiltrate.hpp"

#include <algorithm>
#include <map>
#include <set>

#include <nlohmann/json.hpp>

#include "ontorag/text.hpp"

namespace ontorag {

namespace {

constexpr std::string_view kRelatedOpen = "(related:";
constexpr std::size_t kMinFuzzyTokenLength = 4;

bool contains_sequence(const std::vector<std::string>& haystack, const std::vector<std::string>& needle) {
    if (needle.empty()) return true;
    return std::search(haystack.begin(), haystack.end(), needle.begin(), needle.end()) != haystack.end();
}

bool token_matches(const std::string& prompt_token, const std::string& key_token, bool fuzzy) {
    if (prompt_token == key_token) return true;
    if (!fuzzy || prompt_token.size() < kMinFuzzyTokenLength || key_token.size() < kMinFuzzyTokenLength) return false;
    return text::edit_distance(prompt_token, key_token) <= 1;
}

struct Match {
    std::size_t position;
    std::string key;
};

}  // namespace

TokenizedPrompt tokenize(std::string_view prompt) { return {text::word_tokens(prompt), std::string(prompt)}; }

std::string detokenize(const std::vector<std::string>& tokens) { return text::join(tokens, " "); }

std::string normalize_prompt(std::string_view prompt) { return text::collapse_whitespace(prompt); }

std::string_view strip_related_suffix(std::string_view prompt) {
    while (true) {
        const auto trimmed = text::trim(prompt);
        if (trimmed.empty() || trimmed.back() != ')') return trimmed;
        const auto open = trimmed.rfind(kRelatedOpen);
        if (open == std::string_view::npos) return trimmed;
        const auto inner = trimmed.substr(open + 1, trimmed.size() - open - 2);
        if (inner.find_first_of("()") != std::string_view::npos) return trimmed;
        prompt = trimmed.substr(0, open);
    }
}

AugmentedPrompt infiltrate(std::string_view prompt, const SubsumptionDictionary& dict,
                           const InfiltrateOptions& options) {
    AugmentedPrompt out;
    const std::string normalized = normalize_prompt(prompt);
    out.text = normalized;

    // key token sequences grouped by length
    std::map<std::size_t, std::vector<std::pair<std::vector<std::string>, const std::string*>>> keys_by_length;
    for (const auto& [key, labels] : dict.entries) {
        auto tokens = text::word_tokens(key);
        if (!tokens.empty()) keys_by_length[tokens.size()].emplace_back(std::move(tokens), &key);
    }
    if (keys_by_length.empty()) return out;

    const auto body = text::word_tokens(strip_related_suffix(normalized));
    const auto all_tokens = text::word_tokens(normalized);
    std::vector<bool> consumed(body.size(), false);
    std::vector<Match> matches;

    for (auto it = keys_by_length.rbegin(); it != keys_by_length.rend(); ++it) {
        const std::size_t n = it->first;
        if (n > body.size()) continue;
        for (std::size_t start = 0; start + n <= body.size(); ++start) {
            if (std::any_of(consumed.begin() + start, consumed.begin() + start + n, [](bool c) { return c; }))
                continue;
            for (const auto& [key_tokens, key] : it->second) {
                bool hit = true;
                for (std::size_t j = 0; j < n && hit; ++j) hit = token_matches(body[start + j], key_tokens[j], options.fuzzy);
                if (!hit) continue;
                std::fill(consumed.begin() + start, consumed.begin() + start + n, true);
                matches.push_back({start, *key});
                break;
            }
        }
    }
    std::stable_sort(matches.begin(), matches.end(),
                     [](const Match& a, const Match& b) { return a.position < b.position; });

    // Labels already in the prompt use up budget too, so re-infiltrating an
    // augmented prompt walks the same labels and appends nothing.
    std::set<std::string> seen_terms;
    std::size_t budget_used = 0;
    for (const auto& m : matches) {
        if (std::find(out.matched_keys.begin(), out.matched_keys.end(), m.key) != out.matched_keys.end()) continue;
        out.matched_keys.push_back(m.key);
        for (const auto& label : dict.entries.at(m.key)) {
            const auto label_tokens = text::word_tokens(label);
            if (label_tokens.empty() || seen_terms.contains(label)) continue;
            if (budget_used >= options.max_append_total) break;
            seen_terms.insert(label);
            ++budget_used;
            if (contains_sequence(all_tokens, label_tokens)) continue;
            out.appended_terms.push_back(label);
            out.term_sources.push_back(m.key);
        }
    }
    if (out.appended_terms.empty()) return out;

    if (options.bare_append) {
        out.text += " " + text::join(out.appended_terms, " ");
    } else {
        out.text += std::string(normalized.empty() ? "" : " ") + "(related: " + text::join(out.appended_terms, ", ") + ")";
    }
    return out;
}

std::string trace_json(const AugmentedPrompt& augmented) {
    nlohmann::ordered_json doc;
    doc["matched_keys"] = augmented.matched_keys;
    doc["appended_terms"] = augmented.appended_terms;
    doc["term_sources"] = augmented.term_sources;
    return doc.dump();
}

}  // namespace ontorag
