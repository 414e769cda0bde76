#include "imq/textio.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "imq/error.hpp"

namespace imq {

std::string format_real(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string format_pair_csv(std::string_view first_name, std::string_view second_name,
                            std::span<const double> first, std::span<const double> second) {
    if (first.size() != second.size())
        throw ValidationError("textio", "CSV columns differ in length");
    std::string out;
    out.reserve(40 * (first.size() + 1));
    out.append(first_name).append(",").append(second_name).append("\n");
    for (std::size_t i = 0; i < first.size(); ++i)
        out.append(format_real(first[i])).append(",").append(format_real(second[i])).append("\n");
    return out;
}

void write_pair_csv(const std::filesystem::path& path, std::string_view first_name,
                    std::string_view second_name, std::span<const double> first,
                    std::span<const double> second) {
    write_text_file(path, format_pair_csv(first_name, second_name, first, second));
}

namespace {

void emit(const nlohmann::ordered_json& v, int depth, std::string& out) {
    using value_t = nlohmann::ordered_json::value_t;
    const std::string pad(2 * (depth + 1), ' ');
    const std::string close_pad(2 * depth, ' ');
    switch (v.type()) {
        case value_t::object: {
            if (v.empty()) {
                out += "{}";
                return;
            }
            out += "{\n";
            bool first = true;
            for (const auto& [key, item] : v.items()) {
                if (!first) out += ",\n";
                first = false;
                out += pad + nlohmann::ordered_json(key).dump() + ": ";
                emit(item, depth + 1, out);
            }
            out += "\n" + close_pad + "}";
            return;
        }
        case value_t::array: {
            if (v.empty()) {
                out += "[]";
                return;
            }
            out += "[\n";
            for (std::size_t i = 0; i < v.size(); ++i) {
                if (i) out += ",\n";
                out += pad;
                emit(v[i], depth + 1, out);
            }
            out += "\n" + close_pad + "]";
            return;
        }
        case value_t::number_float: {
            const double x = v.get<double>();
            out += std::isfinite(x) ? format_real(x) : "null";
            return;
        }
        default:
            out += v.dump();
    }
}

}  // namespace

std::string dump_json(const nlohmann::ordered_json& value) {
    std::string out;
    emit(value, 0, out);
    out += "\n";
    return out;
}

void write_text_file(const std::filesystem::path& path, std::string_view content) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("textio", "cannot open " + path.string() + " for writing");
    f.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!f) throw IoError("textio", "write failed for " + path.string());
}

}  // namespace imq
