// Command layer behind the CLI: exact inequality evaluation, seeded protocol
// simulation, noise-threshold sweeps, and sift-table emission. Every command
// is a pure function of its arguments (and seed, where sampling is involved).

#pragma once

#include <optional>
#include <string>
#include <variant>

#include "qkd3/protocol.hpp"
#include "qkd3/report.hpp"

namespace qkd3 {

enum class StateChoice { Ghz, Nme };

struct ExactCommand {
    Inequality inequality = Inequality::CHSH3;
    StateChoice state = StateChoice::Ghz;
    std::optional<double> gamma;  // NME weight; defaults to kNmeGamma
    double noise = 0.0;
};

struct SimulateCommand {
    ProtocolConfig config;
    bool emit_key = false;
    std::optional<std::string> transcript_path;
};

struct SweepCommand {
    ProtocolVariant variant = ProtocolVariant::HThreeDEB;
    double f_min = 0.0;
    double f_max = 1.0;
    double f_step = 0.001;
    std::size_t estimate_rounds = 0;  // >0 adds a simulated estimate per grid point
    std::uint64_t seed = 1;
};

struct TablesCommand {
    ProtocolVariant variant = ProtocolVariant::HThreeDEB;
};

using Command = std::variant<ExactCommand, SimulateCommand, SweepCommand, TablesCommand>;

struct CommandOutcome {
    Report report;
    int exit_code = 0;  // 0 success, 2 protocol abort
};

/// Exact violation factor (1-F)*v over a noise grid, plus the interpolated
/// crossing point where the factor reaches 1; optionally a seeded simulated
/// estimate per grid point.
Report sweep_noise(const SweepCommand& cmd);

CommandOutcome run_command(const Command& cmd);

}  // namespace qkd3
