#include "ebm/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "ebm/errors.hpp"

namespace ebm {

std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(errc::bad_input, "cannot open file for reading: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(errc::bad_input, "cannot open file for writing: " + path);
    out << content;
    if (!out) fail(errc::bad_input, "write failed: " + path);
}

} // namespace ebm
