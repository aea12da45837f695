#include "qkd3/commands.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

namespace qkd3 {

namespace {

using nlohmann::json;

const char* to_cstr(Inequality i) { return i == Inequality::CHSH3 ? "chsh3" : "hchsh3"; }
const char* to_cstr(StateChoice s) { return s == StateChoice::Ghz ? "ghz" : "nme"; }
const char* to_cstr(CheckClass c) { return c == CheckClass::Check1 ? "check1" : "check2"; }

json report_json(const InequalityReport& rep) {
    return {{"inequality", to_cstr(rep.name)},
            {"value", round_sig(rep.value)},
            {"classical_bound", rep.classical_bound},
            {"violation_factor", round_sig(rep.violation_factor)},
            {"noise_threshold", round_sig(rep.noise_threshold)}};
}

InequalityReport exact_report(Inequality inequality, const TwoQutritDensity& rho) {
    if (inequality == Inequality::CHSH3)
        return evaluate_chsh3(rho, chsh3_optimal_configuration());
    return evaluate_hchsh3(rho, hchsh3_optimal_configuration());
}

CommandOutcome run_exact(const ExactCommand& cmd) {
    const double gamma = cmd.gamma.value_or(kNmeGamma);
    const TwoQutritPure pure = cmd.state == StateChoice::Ghz ? ghz() : nme(gamma);
    const TwoQutritDensity rho = mix_noise(pure, cmd.noise);
    const InequalityReport rep = exact_report(cmd.inequality, rho);

    Report r;
    r.command = "exact";
    r.params = {{"inequality", to_cstr(cmd.inequality)},
                {"state", to_cstr(cmd.state)},
                {"noise", cmd.noise}};
    if (cmd.state == StateChoice::Nme) r.params["gamma"] = round_sig(gamma);
    r.results = report_json(rep);
    r.results["violated"] = rep.value > rep.classical_bound;
    r.meta = {{"version", kVersion}};
    return {r, 0};
}

CommandOutcome run_simulate(const SimulateCommand& cmd) {
    const ProtocolOutcome outcome = run_protocol(cmd.config);

    std::size_t key = 0, c1 = 0, c2 = 0, discard = 0;
    for (const RoundRecord& rec : outcome.rounds) {
        switch (rec.sift) {
            case SiftClass::Key: ++key; break;
            case SiftClass::Check1: ++c1; break;
            case SiftClass::Check2: ++c2; break;
            case SiftClass::Discard: ++discard; break;
        }
    }

    Report r;
    r.command = "simulate";
    r.seed = cmd.config.rng_seed;
    r.params = {{"variant", std::string(to_string(cmd.config.variant))},
                {"noise", cmd.config.noise_fraction},
                {"key_length_target", cmd.config.target_key_length},
                {"min_check_rounds", cmd.config.min_check_rounds},
                {"abort_margin", cmd.config.abort_margin}};
    r.results = {{"total_rounds", outcome.rounds.size()},
                 {"sift_counts",
                  {{"key", key}, {"check1", c1}, {"check2", c2}, {"discard", discard}}},
                 {"key_length", outcome.key_trits.size()},
                 {"aborted", outcome.aborted}};
    json checks = json::array();
    for (const CheckResult& chk : outcome.check_reports) {
        json j = report_json(chk.report);
        j["class"] = to_cstr(chk.which);
        j["rounds_used"] = chk.rounds_used;
        j["abort"] = chk.abort;
        checks.push_back(std::move(j));
    }
    r.results["checks"] = std::move(checks);
    if (cmd.emit_key && !outcome.aborted) {
        std::string key_string;
        key_string.reserve(outcome.key_trits.size());
        for (int t : outcome.key_trits) key_string.push_back(static_cast<char>('0' + t));
        r.results["key"] = std::move(key_string);
    }
    r.meta = {{"version", kVersion}};

    if (cmd.transcript_path) {
        std::ofstream out(*cmd.transcript_path);
        if (!out)
            throw std::runtime_error("cannot open transcript file '" + *cmd.transcript_path +
                                     "'");
        write_transcript(out, outcome, cmd.config.variant);
        r.results["transcript"] = *cmd.transcript_path;
    }
    return {r, outcome.aborted ? 2 : 0};
}

CommandOutcome run_tables(const TablesCommand& cmd) {
    const auto& alice = protocol_settings(cmd.variant, Party::Alice);
    const auto& bob = protocol_settings(cmd.variant, Party::Bob);

    json alice_labels = json::array(), bob_labels = json::array();
    for (const auto& s : alice) alice_labels.push_back(s.label);
    for (const auto& s : bob) bob_labels.push_back(s.label);

    json cells = json::array();
    std::size_t key = 0, check = 0;
    for (std::size_t i = 0; i < alice.size(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < bob.size(); ++j) {
            SiftClass c;
            if (cmd.variant == ProtocolVariant::ThreeDEB)
                c = sift_3deb(static_cast<int>(i), static_cast<int>(j));
            else
                c = sift_h3deb(h3deb_pairs()[i], h3deb_pairs()[j]);
            if (c == SiftClass::Key) ++key;
            if (c == SiftClass::Check1 || c == SiftClass::Check2) ++check;
            row.push_back(std::string(to_string(c)));
        }
        cells.push_back(std::move(row));
    }
    const double total = static_cast<double>(alice.size() * bob.size());

    Report r;
    r.command = "tables";
    r.params = {{"variant", std::string(to_string(cmd.variant))}};
    r.results = {{"alice_labels", std::move(alice_labels)},
                 {"bob_labels", std::move(bob_labels)},
                 {"cells", std::move(cells)},
                 {"fractions",
                  {{"key", round_sig(static_cast<double>(key) / total)},
                   {"check", round_sig(static_cast<double>(check) / total)},
                   {"discard",
                    round_sig(1.0 - static_cast<double>(key + check) / total)}}}};
    r.meta = {{"version", kVersion}};
    return {r, 0};
}

}  // namespace

Report sweep_noise(const SweepCommand& cmd) {
    if (!(cmd.f_min >= 0.0 && cmd.f_min <= cmd.f_max && cmd.f_max <= 1.0))
        throw std::invalid_argument("sweep_noise: need 0 <= f_min <= f_max <= 1");
    if (!(cmd.f_step > 0.0)) throw std::invalid_argument("sweep_noise: step must be positive");

    std::vector<double> grid;
    for (double f = cmd.f_min; f <= cmd.f_max + 1e-12; f += cmd.f_step)
        grid.push_back(std::min(f, 1.0));
    if (grid.empty()) throw std::invalid_argument("sweep_noise: empty grid");

    const Inequality inequality =
        cmd.variant == ProtocolVariant::ThreeDEB ? Inequality::CHSH3 : Inequality::HCHSH3;
    const TwoQutritPure resource = ghz();

    json rows = json::array();
    std::vector<double> factors(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const TwoQutritDensity rho = mix_noise(resource, grid[i]);
        const InequalityReport rep = exact_report(inequality, rho);
        factors[i] = rep.violation_factor;
        json row = {{"F", round_sig(grid[i])},
                    {"factor", round_sig(rep.violation_factor)},
                    {"threshold_crossed", rep.violation_factor <= 1.0}};
        if (cmd.estimate_rounds > 0) {
            ProtocolConfig pc;
            pc.variant = cmd.variant;
            pc.noise_fraction = grid[i];
            pc.target_key_length = 0;
            pc.min_check_rounds = cmd.estimate_rounds;
            std::uint64_t s = cmd.seed;
            splitmix64(s);
            pc.rng_seed = s + i;
            const ProtocolOutcome po = run_protocol(pc);
            row["estimated_factor_check1"] =
                round_sig(po.check_reports[0].report.violation_factor);
            row["estimated_factor_check2"] =
                round_sig(po.check_reports[1].report.violation_factor);
        }
        rows.push_back(std::move(row));
    }

    // Interpolated noise fraction at which the exact factor reaches 1.
    json crossing;
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
        if (factors[i] > 1.0 && factors[i + 1] <= 1.0) {
            const double t = (factors[i] - 1.0) / (factors[i] - factors[i + 1]);
            crossing = round_sig(grid[i] + t * (grid[i + 1] - grid[i]));
            break;
        }
    }

    Report r;
    r.command = "sweep";
    r.seed = cmd.seed;
    r.params = {{"variant", std::string(to_string(cmd.variant))},
                {"inequality", to_cstr(inequality)},
                {"f_min", cmd.f_min},
                {"f_max", cmd.f_max},
                {"f_step", cmd.f_step},
                {"rounds", cmd.estimate_rounds}};
    r.results = {{"rows", std::move(rows)}, {"crossing_F", crossing}};
    r.meta = {{"version", kVersion}};
    return r;
}

CommandOutcome run_command(const Command& cmd) {
    if (const auto* c = std::get_if<ExactCommand>(&cmd)) return run_exact(*c);
    if (const auto* c = std::get_if<SimulateCommand>(&cmd)) return run_simulate(*c);
    if (const auto* c = std::get_if<SweepCommand>(&cmd)) return {sweep_noise(*c), 0};
    return run_tables(std::get<TablesCommand>(cmd));
}

}  // namespace qkd3
