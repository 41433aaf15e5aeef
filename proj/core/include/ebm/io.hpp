#pragma once

#include <string>

namespace ebm {

// 17 significant digits; every emitted numeral reads back to the same double.
std::string format_number(double v);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

} // namespace ebm
