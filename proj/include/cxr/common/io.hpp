#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cxr {

std::vector<std::uint8_t> read_file(const std::filesystem::path& path);
std::string read_text_file(const std::filesystem::path& path);

/// Writes to a sibling temporary file, then renames over `path`. Readers
/// never observe a partially written file.
void write_file_atomic(const std::filesystem::path& path,
                       std::span<const std::uint8_t> bytes);
void write_file_atomic(const std::filesystem::path& path, std::string_view text);

/// Shortest round-trip decimal form of a double ("%.17g" trimmed).
std::string format_double(double v);

/// Fixed-point rendering, e.g. format_fixed(0.9, 4) == "0.9000".
std::string format_fixed(double v, int decimals);

}  // namespace cxr
