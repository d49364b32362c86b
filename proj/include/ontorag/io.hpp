#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace ontorag::io {

// Throws NotFoundError naming the path when it cannot be opened.
std::string read_file(const std::filesystem::path& path);

// Writes to a sibling temp file, then renames over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

// Lines without their terminators; a trailing '\r' is stripped and blank
// lines are kept.
std::vector<std::string> lines(std::string_view content);

}  // namespace ontorag::io
