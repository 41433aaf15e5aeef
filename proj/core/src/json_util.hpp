#pragma once

// Private helpers shared by the JSON-emitting translation units. Not
// installed; the public headers never expose the JSON library.

#include <string>

#include <json.hpp>

#include "ebm/errors.hpp"
#include "ebm/io.hpp"

namespace ebm::detail {

// Serialize with every number printed at 17 significant digits, so emitted
// files are byte-stable and read back without loss.
inline void dump_17g(const nlohmann::json& j, std::string& out, int indent, int depth) {
    const std::string pad(static_cast<size_t>(indent) * depth, ' ');
    const std::string pad_in(static_cast<size_t>(indent) * (depth + 1), ' ');
    switch (j.type()) {
        case nlohmann::json::value_t::object: {
            if (j.empty()) {
                out += "{}";
                return;
            }
            out += "{\n";
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) out += ",\n";
                first = false;
                out += pad_in;
                out += nlohmann::json(it.key()).dump();
                out += ": ";
                dump_17g(it.value(), out, indent, depth + 1);
            }
            out += "\n" + pad + "}";
            return;
        }
        case nlohmann::json::value_t::array: {
            if (j.empty()) {
                out += "[]";
                return;
            }
            out += "[\n";
            bool first = true;
            for (const auto& v : j) {
                if (!first) out += ",\n";
                first = false;
                out += pad_in;
                dump_17g(v, out, indent, depth + 1);
            }
            out += "\n" + pad + "]";
            return;
        }
        case nlohmann::json::value_t::number_float:
            out += format_number(j.get<double>());
            return;
        default:
            out += j.dump();
            return;
    }
}

inline std::string dump_17g(const nlohmann::json& j) {
    std::string out;
    dump_17g(j, out, 2, 0);
    out += "\n";
    return out;
}

inline nlohmann::json parse_or_fail(const std::string& text, const char* what) {
    nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
    if (j.is_discarded()) fail(errc::bad_input, std::string("malformed JSON for ") + what);
    return j;
}

} // namespace ebm::detail
