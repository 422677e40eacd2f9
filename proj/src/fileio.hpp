#pragma once

#include <string>
#include <string_view>

namespace chargeaudit {

/// Whole-file read; IoError names `what` and the path on failure.
std::string read_text_file(const std::string& path, std::string_view what);
void write_text_file(const std::string& path, std::string_view content);

}  // namespace chargeaudit
