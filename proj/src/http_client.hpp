#pragma once

#include <string>

#include <nlohmann/json.hpp>

namespace ontorag::detail {

// POSTs a JSON body and parses the JSON reply. Any transport failure,
// non-2xx status or unparsable body becomes a ProviderError tagged `stage`.
nlohmann::json post_json(const std::string& url, const nlohmann::json& body, const std::string& bearer_token,
                         int timeout_seconds, const std::string& stage);

}  // namespace ontorag::detail
