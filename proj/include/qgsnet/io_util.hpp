#pragma once

#include <filesystem>
#include <string>

namespace qgsnet {

/// Writes content to a temp file in the target directory and renames it into
/// place, so readers never observe a partially written file.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

std::string read_file(const std::filesystem::path& path);

}  // namespace qgsnet
