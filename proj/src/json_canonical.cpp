#include "pfrac/json_canonical.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace pfrac {
namespace {

void format_double(std::string& out, double v) {
    if (!std::isfinite(v)) {
        // JSON has no spelling for these; nlohmann does the same.
        out += "null";
        return;
    }
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    std::string s(buf);
    if (s.find_first_of(".eEn") == std::string::npos) {
        s += ".0";  // keep the float type on re-parse
    }
    out += s;
}

void newline(std::string& out, int indent, int depth) {
    if (indent < 0) {
        return;
    }
    out += '\n';
    out.append(static_cast<std::size_t>(indent * depth), ' ');
}

void write(std::string& out, const Json& v, int indent, int depth) {
    switch (v.type()) {
    case Json::value_t::object: {
        if (v.empty()) {
            out += "{}";
            return;
        }
        out += '{';
        bool first = true;
        for (auto it = v.begin(); it != v.end(); ++it) {
            if (!first) {
                out += ',';
            }
            first = false;
            newline(out, indent, depth + 1);
            out += Json(it.key()).dump();
            out += indent < 0 ? ":" : ": ";
            write(out, it.value(), indent, depth + 1);
        }
        newline(out, indent, depth);
        out += '}';
        return;
    }
    case Json::value_t::array: {
        if (v.empty()) {
            out += "[]";
            return;
        }
        // Numeric arrays stay on one line; they are the bulk of a manifest.
        bool scalars = true;
        for (const auto& item : v) {
            scalars = scalars && item.is_primitive();
        }
        out += '[';
        bool first = true;
        for (const auto& item : v) {
            if (!first) {
                out += scalars ? ", " : ",";
            }
            first = false;
            if (!scalars) {
                newline(out, indent, depth + 1);
            }
            write(out, item, indent, depth + 1);
        }
        if (!scalars) {
            newline(out, indent, depth);
        }
        out += ']';
        return;
    }
    case Json::value_t::number_float:
        format_double(out, v.get<double>());
        return;
    default:
        out += v.dump();
        return;
    }
}

}  // namespace

std::string dump_canonical(const Json& doc, int indent) {
    std::string out;
    write(out, doc, indent, 0);
    if (indent >= 0) {
        out += '\n';
    }
    return out;
}

double json_number(const Json& value) {
    if (!value.is_number()) {
        throw std::invalid_argument("expected a number");
    }
    return value.get<double>();
}

}  // namespace pfrac
