#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>

namespace acal {

/// Writes via a sibling temp file and renames it into place, so readers never
/// observe a partially written file.
void write_file_atomic(const std::filesystem::path& path, const std::function<void(std::ostream&)>& writer,
                       bool binary = false);

void write_text_atomic(const std::filesystem::path& path, const std::string& text);

std::string read_text_file(const std::filesystem::path& path);

} // namespace acal
