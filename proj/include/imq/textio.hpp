#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>

#include "json.hpp"

namespace imq {

/// 17 significant digits ("%.17g"); non-finite values print as inf/-inf/nan.
[[nodiscard]] std::string format_real(double x);

/// Two-column CSV with a header line, reals at 17 significant digits.
[[nodiscard]] std::string format_pair_csv(std::string_view first_name,
                                          std::string_view second_name,
                                          std::span<const double> first,
                                          std::span<const double> second);

void write_pair_csv(const std::filesystem::path& path, std::string_view first_name,
                    std::string_view second_name, std::span<const double> first,
                    std::span<const double> second);

/// Pretty JSON (2-space indent) that keeps insertion order and prints every
/// floating-point number at 17 significant digits. Non-finite reals become
/// null.
[[nodiscard]] std::string dump_json(const nlohmann::ordered_json& value);

void write_text_file(const std::filesystem::path& path, std::string_view content);

}  // namespace imq
