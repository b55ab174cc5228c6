#include "cli/output.hpp"

#include <cmath>
#include <cstdio>

namespace bcspec::cli {

namespace {

void indent(std::string& out, int depth) { out.append(static_cast<std::size_t>(2 * depth), ' '); }

bool is_scalar_array(const Json& j) {
    for (const Json& e : j) {
        if (e.is_structured()) return false;
    }
    return true;
}

void write(const Json& j, std::string& out, int depth) {
    switch (j.type()) {
    case Json::value_t::object: {
        if (j.empty()) {
            out += "{}";
            return;
        }
        out += "{\n";
        bool first = true;
        for (auto it = j.begin(); it != j.end(); ++it) {
            if (!first) out += ",\n";
            first = false;
            indent(out, depth + 1);
            out += Json(it.key()).dump();
            out += ": ";
            write(it.value(), out, depth + 1);
        }
        out += "\n";
        indent(out, depth);
        out += "}";
        return;
    }
    case Json::value_t::array: {
        if (j.empty()) {
            out += "[]";
            return;
        }
        // short numeric tuples stay on one line
        if (is_scalar_array(j)) {
            out += "[";
            for (std::size_t i = 0; i < j.size(); ++i) {
                if (i) out += ", ";
                write(j[i], out, depth);
            }
            out += "]";
            return;
        }
        out += "[\n";
        for (std::size_t i = 0; i < j.size(); ++i) {
            if (i) out += ",\n";
            indent(out, depth + 1);
            write(j[i], out, depth + 1);
        }
        out += "\n";
        indent(out, depth);
        out += "]";
        return;
    }
    case Json::value_t::number_float: {
        const double v = j.get<double>();
        out += std::isfinite(v) ? format_double(v) : "null";
        return;
    }
    default:
        out += j.dump();
        return;
    }
}

} // namespace

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string dump_json(const Json& j) {
    std::string out;
    write(j, out, 0);
    out += "\n";
    return out;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
        if (c == '"') q += '"';
        q += c;
    }
    q += '"';
    return q;
}

std::string csv_row(const std::vector<std::string>& fields) {
    std::string row;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) row += ',';
        row += csv_field(fields[i]);
    }
    row += "\r\n";
    return row;
}

Json matrix_json(const Mat2& m) {
    const auto c = [](Complex z) { return Json::array({z.real(), z.imag()}); };
    return Json::array({Json::array({c(m.e11), c(m.e12)}), Json::array({c(m.e21), c(m.e22)})});
}

Json params_json(const BoundaryParams& p) {
    Json j;
    j["eta"] = p.eta;
    j["m0"] = p.m0;
    j["m1"] = p.m1;
    j["m2"] = p.m2;
    j["m3"] = p.m3;
    return j;
}

} // namespace bcspec::cli
