#include "heightlab/json_out.hpp"

#include <cmath>
#include <cstdio>

namespace heightlab {

namespace {

void emit(const nlohmann::json& j, int indent, int depth, std::string& out) {
    const std::string pad = indent > 0 ? std::string(static_cast<std::size_t>(indent * (depth + 1)), ' ') : "";
    const std::string close_pad = indent > 0 ? std::string(static_cast<std::size_t>(indent * depth), ' ') : "";
    const char* nl = indent > 0 ? "\n" : "";
    switch (j.type()) {
    case nlohmann::json::value_t::object: {
        if (j.empty()) {
            out += "{}";
            return;
        }
        out += "{";
        out += nl;
        bool first = true;
        // nlohmann::json objects are std::map-backed, so iteration is sorted.
        for (auto it = j.begin(); it != j.end(); ++it) {
            if (!first) {
                out += ",";
                out += nl;
            }
            first = false;
            out += pad;
            out += nlohmann::json(it.key()).dump();
            out += indent > 0 ? ": " : ":";
            emit(it.value(), indent, depth + 1, out);
        }
        out += nl;
        out += close_pad + "}";
        return;
    }
    case nlohmann::json::value_t::array: {
        if (j.empty()) {
            out += "[]";
            return;
        }
        out += "[";
        out += nl;
        for (std::size_t i = 0; i < j.size(); ++i) {
            if (i) {
                out += ",";
                out += nl;
            }
            out += pad;
            emit(j[i], indent, depth + 1, out);
        }
        out += nl;
        out += close_pad + "]";
        return;
    }
    case nlohmann::json::value_t::number_float: {
        const double v = j.get<double>();
        if (std::isnan(v)) {
            out += "\"nan\"";
        } else if (std::isinf(v)) {
            out += v > 0 ? "\"inf\"" : "\"-inf\"";
        } else {
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.17g", v);
            std::string s(buf);
            // Keep the value recognisably floating point.
            if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
            out += s;
        }
        return;
    }
    default:
        out += j.dump();
    }
}

} // namespace

std::string canonical_dump(const nlohmann::json& j, int indent) {
    std::string out;
    emit(j, indent, 0, out);
    return out;
}

} // namespace heightlab
