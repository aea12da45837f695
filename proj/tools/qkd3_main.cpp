// qkd3 command-line tool.
//
//   qkd3 exact     --inequality chsh3|hchsh3 --state ghz|nme [--gamma G] [--noise F]
//   qkd3 simulate  --variant 3deb|h3deb [--noise F] [--key-length N]
//                  [--check-rounds N] [--margin M] [--seed S] [--emit-key]
//                  [--transcript FILE]
//   qkd3 sweep     --variant 3deb|h3deb [--f-min A] [--f-max B] [--f-step S]
//                  [--rounds N] [--seed S]
//   qkd3 tables    --variant 3deb|h3deb
//
// All subcommands accept --format json|csv|text. The default seed comes from
// QKD3_SEED when set; an explicit --seed always wins. Exit codes: 0 success,
// 1 usage or validation error, 2 simulation aborted (eavesdropping suspected).

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <string>

#include "qkd3/commands.hpp"

namespace {

std::uint64_t default_seed() {
    if (const char* env = std::getenv("QKD3_SEED")) {
        char* end = nullptr;
        const unsigned long long v = std::strtoull(env, &end, 10);
        if (end && *end == '\0') return v;
        std::cerr << "warning: ignoring non-numeric QKD3_SEED\n";
    }
    return 1;
}

qkd3::ProtocolVariant parse_variant(const std::string& name) {
    return name == "3deb" ? qkd3::ProtocolVariant::ThreeDEB : qkd3::ProtocolVariant::HThreeDEB;
}

int emit(const qkd3::CommandOutcome& outcome, const std::string& format) {
    std::cout << qkd3::render(outcome.report, qkd3::parse_format(format));
    return outcome.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"qkd3 - simulator for entangled-qutrit key distribution (3DEB / h3DEB)"};
    app.require_subcommand(1);

    const std::uint64_t seed_default = default_seed();

    // exact
    auto* exact = app.add_subcommand("exact", "Exact inequality value on a chosen state");
    std::string ex_inequality = "chsh3", ex_state = "ghz", ex_format = "text";
    double ex_gamma = -1.0, ex_noise = 0.0;
    bool ex_gamma_set = false;
    exact->add_option("--inequality", ex_inequality, "Inequality to evaluate")
        ->check(CLI::IsMember({"chsh3", "hchsh3"}))
        ->required();
    exact->add_option("--state", ex_state, "Resource state")
        ->check(CLI::IsMember({"ghz", "nme"}));
    exact->add_option("--gamma", ex_gamma, "NME state weight (default (sqrt11-sqrt3)/2)")
        ->each([&](const std::string&) { ex_gamma_set = true; });
    exact->add_option("--noise", ex_noise, "Depolarizing noise fraction F in [0,1]");
    exact->add_option("--format", ex_format)->check(CLI::IsMember({"json", "csv", "text"}));

    // simulate
    auto* simulate = app.add_subcommand("simulate", "Run a seeded protocol simulation");
    std::string sim_variant, sim_format = "text", sim_transcript;
    qkd3::SimulateCommand sim;
    sim.config.rng_seed = seed_default;
    simulate->add_option("--variant", sim_variant, "Protocol variant")
        ->check(CLI::IsMember({"3deb", "h3deb"}))
        ->required();
    simulate->add_option("--noise", sim.config.noise_fraction, "Noise fraction F in [0,1]");
    simulate->add_option("--key-length", sim.config.target_key_length,
                         "Number of key trits to collect");
    simulate->add_option("--check-rounds,--rounds", sim.config.min_check_rounds,
                         "Minimum rounds per check class (default 10000)");
    simulate->add_option("--margin", sim.config.abort_margin,
                         "Abort unless the violation factor exceeds 1 + margin");
    simulate->add_option("--seed", sim.config.rng_seed, "RNG seed (default from QKD3_SEED)");
    simulate->add_flag("--emit-key", sim.emit_key, "Include the key trit string in the report");
    simulate->add_option("--transcript", sim_transcript, "Write a per-round CSV transcript");
    simulate->add_option("--format", sim_format)->check(CLI::IsMember({"json", "csv", "text"}));

    // sweep
    auto* sweep = app.add_subcommand("sweep", "Exact violation factor over a noise grid");
    std::string sw_variant, sw_format = "text";
    qkd3::SweepCommand sw;
    sw.seed = seed_default;
    sweep->add_option("--variant", sw_variant, "Protocol variant")
        ->check(CLI::IsMember({"3deb", "h3deb"}))
        ->required();
    sweep->add_option("--f-min", sw.f_min, "Grid start (default 0)");
    sweep->add_option("--f-max", sw.f_max, "Grid end (default 1)");
    sweep->add_option("--f-step", sw.f_step, "Grid step (default 0.001)");
    sweep->add_option("--rounds", sw.estimate_rounds,
                      "Check rounds for a simulated estimate per grid point (0 = exact only)");
    sweep->add_option("--seed", sw.seed, "RNG seed for the simulated estimates");
    sweep->add_option("--format", sw_format)->check(CLI::IsMember({"json", "csv", "text"}));

    // tables
    auto* tables = app.add_subcommand("tables", "Emit the variant's sifting table");
    std::string tb_variant, tb_format = "text";
    tables->add_option("--variant", tb_variant, "Protocol variant")
        ->check(CLI::IsMember({"3deb", "h3deb"}))
        ->required();
    tables->add_option("--format", tb_format)->check(CLI::IsMember({"json", "csv", "text"}));

    CLI11_PARSE(app, argc, argv);

    try {
        if (exact->parsed()) {
            qkd3::ExactCommand cmd;
            cmd.inequality =
                ex_inequality == "chsh3" ? qkd3::Inequality::CHSH3 : qkd3::Inequality::HCHSH3;
            cmd.state = ex_state == "ghz" ? qkd3::StateChoice::Ghz : qkd3::StateChoice::Nme;
            if (ex_gamma_set) cmd.gamma = ex_gamma;
            cmd.noise = ex_noise;
            return emit(qkd3::run_command(cmd), ex_format);
        }
        if (simulate->parsed()) {
            sim.config.variant = parse_variant(sim_variant);
            if (!sim_transcript.empty()) sim.transcript_path = sim_transcript;
            return emit(qkd3::run_command(sim), sim_format);
        }
        if (sweep->parsed()) {
            sw.variant = parse_variant(sw_variant);
            return emit(qkd3::run_command(sw), sw_format);
        }
        qkd3::TablesCommand cmd;
        cmd.variant = parse_variant(tb_variant);
        return emit(qkd3::run_command(cmd), tb_format);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
