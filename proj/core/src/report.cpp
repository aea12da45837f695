#include "qkd3/report.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <stdexcept>

namespace qkd3 {

namespace {

using nlohmann::json;

std::string num(const json& v) {
    if (v.is_number_float()) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.12g", v.get<double>());
        return buf;
    }
    if (v.is_string()) return v.get<std::string>();
    return v.dump();
}

void csv_exact(const Report& r, std::ostringstream& out) {
    out << "inequality,state,gamma,noise,value,classical_bound,violation_factor,"
           "noise_threshold\n";
    out << num(r.params.value("inequality", json(""))) << ','
        << num(r.params.value("state", json(""))) << ','
        << num(r.params.value("gamma", json(""))) << ','
        << num(r.params.value("noise", json(0.0))) << ',' << num(r.results.at("value")) << ','
        << num(r.results.at("classical_bound")) << ',' << num(r.results.at("violation_factor"))
        << ',' << num(r.results.at("noise_threshold")) << '\n';
}

void csv_simulate(const Report& r, std::ostringstream& out) {
    out << "variant,noise,seed,total_rounds,key_length,aborted,check_class,value,"
           "classical_bound,violation_factor,noise_threshold,check_rounds\n";
    for (const auto& chk : r.results.at("checks")) {
        out << num(r.params.at("variant")) << ',' << num(r.params.at("noise")) << ','
            << r.seed << ',' << num(r.results.at("total_rounds")) << ','
            << num(r.results.at("key_length")) << ','
            << (r.results.at("aborted").get<bool>() ? 1 : 0) << ','
            << num(chk.at("class")) << ',' << num(chk.at("value")) << ','
            << num(chk.at("classical_bound")) << ',' << num(chk.at("violation_factor")) << ','
            << num(chk.at("noise_threshold")) << ',' << num(chk.at("rounds_used")) << '\n';
    }
}

void csv_sweep(const Report& r, std::ostringstream& out) {
    const bool estimated = !r.results.at("rows").empty() &&
                           r.results.at("rows").front().contains("estimated_factor_check1");
    out << "F,factor,threshold_crossed";
    if (estimated) out << ",estimated_factor_check1,estimated_factor_check2";
    out << '\n';
    for (const auto& row : r.results.at("rows")) {
        out << num(row.at("F")) << ',' << num(row.at("factor")) << ','
            << (row.at("threshold_crossed").get<bool>() ? 1 : 0);
        if (estimated)
            out << ',' << num(row.at("estimated_factor_check1")) << ','
                << num(row.at("estimated_factor_check2"));
        out << '\n';
    }
}

void csv_tables(const Report& r, std::ostringstream& out) {
    out << "alice_setting,bob_setting,sift_class\n";
    const auto& alice = r.results.at("alice_labels");
    const auto& bob = r.results.at("bob_labels");
    const auto& cells = r.results.at("cells");
    for (std::size_t i = 0; i < alice.size(); ++i)
        for (std::size_t j = 0; j < bob.size(); ++j)
            out << alice[i].get<std::string>() << ',' << bob[j].get<std::string>() << ','
                << cells[i][j].get<std::string>() << '\n';
}

void text_value(const json& v, int indent, std::ostringstream& out) {
    if (v.is_object()) {
        out << '\n';
        for (const auto& [k, val] : v.items()) {
            out << std::string(static_cast<std::size_t>(indent), ' ') << k << ": ";
            text_value(val, indent + 2, out);
        }
    } else if (v.is_array()) {
        out << '\n';
        for (const auto& val : v) {
            out << std::string(static_cast<std::size_t>(indent), ' ') << "- ";
            text_value(val, indent + 2, out);
        }
    } else {
        out << num(v) << '\n';
    }
}

}  // namespace

double round_sig(double x, int digits) {
    if (x == 0.0 || !std::isfinite(x)) return x;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, x);
    return std::strtod(buf, nullptr);
}

std::string to_json_string(const Report& r) {
    const json j = {{"command", r.command},
                    {"seed", r.seed},
                    {"params", r.params},
                    {"results", r.results},
                    {"meta", r.meta}};
    return j.dump(2);
}

Report report_from_json(const std::string& text) {
    const json j = json::parse(text);
    Report r;
    r.command = j.at("command").get<std::string>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.params = j.at("params");
    r.results = j.at("results");
    r.meta = j.at("meta");
    return r;
}

ReportFormat parse_format(std::string_view name) {
    if (name == "json") return ReportFormat::Json;
    if (name == "csv") return ReportFormat::Csv;
    if (name == "text") return ReportFormat::Text;
    throw std::invalid_argument("unknown format '" + std::string(name) +
                                "' (expected json, csv or text)");
}

std::string render(const Report& r, ReportFormat format) {
    if (format == ReportFormat::Json) return to_json_string(r);
    std::ostringstream out;
    if (format == ReportFormat::Csv) {
        if (r.command == "exact") csv_exact(r, out);
        else if (r.command == "simulate") csv_simulate(r, out);
        else if (r.command == "sweep") csv_sweep(r, out);
        else if (r.command == "tables") csv_tables(r, out);
        else throw std::invalid_argument("no CSV schema for command '" + r.command + "'");
        return out.str();
    }
    out << "command: " << r.command << " (qkd3 " << r.meta.value("version", "?")
        << ", seed " << r.seed << ")\n";
    for (const auto& [k, v] : r.params.items()) out << "  " << k << ": " << num(v) << '\n';
    out << "results:";
    std::ostringstream body;
    text_value(r.results, 2, body);
    out << body.str();
    return out.str();
}

}  // namespace qkd3
