#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace esnc {

/// Writes to "<path>.tmp" in the same directory, then renames over path.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

/// Whole file as a string; MissingFile when it cannot be opened.
std::string read_file(const std::filesystem::path& path);

}  // namespace esnc
