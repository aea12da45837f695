// Machine-readable command reports. One top-level object with fields
// {command, seed, params, results, meta}; serializable to JSON (round-trips
// losslessly), CSV (fixed per-command headers) and human-readable text.

#pragma once

#include <nlohmann/json.hpp>

#include <cstdint>
#include <string>
#include <string_view>

namespace qkd3 {

inline constexpr const char* kVersion = "0.1.0";

struct Report {
    std::string command;
    std::uint64_t seed = 0;
    nlohmann::json params = nlohmann::json::object();
    nlohmann::json results = nlohmann::json::object();
    nlohmann::json meta = nlohmann::json::object();

    bool operator==(const Report&) const = default;
};

/// Rounds to the given number of significant digits; report values carry 12.
double round_sig(double x, int digits = 12);

std::string to_json_string(const Report& r);
Report report_from_json(const std::string& text);

enum class ReportFormat { Json, Csv, Text };

/// Accepts "json", "csv" or "text".
ReportFormat parse_format(std::string_view name);

std::string render(const Report& r, ReportFormat format);

}  // namespace qkd3
