#include "http_client.hpp"

#include <httplib.h>

#include "ontorag/error.hpp"

namespace ontorag::detail {

namespace {

struct SplitUrl {
    std::string origin;  // scheme://host[:port]
    std::string path;
};

SplitUrl split_url(const std::string& url, const std::string& stage) {
    const auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) throw ProviderError(stage, "URL needs a scheme: " + url);
    const auto path_start = url.find('/', scheme_end + 3);
    if (path_start == std::string::npos) return {url, "/"};
    return {url.substr(0, path_start), url.substr(path_start)};
}

}  // namespace

nlohmann::json post_json(const std::string& url, const nlohmann::json& body, const std::string& bearer_token,
                         int timeout_seconds, const std::string& stage) {
    const auto [origin, path] = split_url(url, stage);
    httplib::Client client(origin);
    if (!client.is_valid()) throw ProviderError(stage, "unsupported URL: " + url);
    client.set_connection_timeout(timeout_seconds, 0);
    client.set_read_timeout(timeout_seconds, 0);
    client.set_write_timeout(timeout_seconds, 0);

    httplib::Headers headers;
    if (!bearer_token.empty()) headers.emplace("Authorization", "Bearer " + bearer_token);

    const auto res = client.Post(path, headers, body.dump(), "application/json");
    if (!res) throw ProviderError(stage, "request to " + url + " failed: " + httplib::to_string(res.error()));
    if (res->status < 200 || res->status >= 300)
        throw ProviderError(stage, url + " returned HTTP " + std::to_string(res->status));
    try {
        return nlohmann::json::parse(res->body);
    } catch (const nlohmann::json::parse_error& e) {
        throw ProviderError(stage, "unparsable response from " + url + ": " + e.what());
    }
}

}  // namespace ontorag::detail
