#pragma once

#include <filesystem>
#include <optional>
#include <string>

namespace mcpforge::util {

// Whole-file read; empty optional when the file cannot be opened.
std::optional<std::string> read_file(const std::filesystem::path& path);

// Writes to a sibling temp file, then renames into place (atomic on POSIX).
void write_file_atomic(const std::filesystem::path& path,
                       std::string_view content);

void ensure_dir(const std::filesystem::path& dir);

// Creates a fresh unique directory under the system temp root.
std::filesystem::path make_temp_dir(std::string_view prefix);

// Absolute path of the running executable (/proc/self/exe).
std::filesystem::path self_exe_path();

}  // namespace mcpforge::util
