#include <iostream>

#include <CLI11.hpp>

#include "dwol/errors.hpp"
#include "dwol/harness/commands.hpp"
#include "dwol/harness/units.hpp"
#include "dwol/version.hpp"

using namespace dwol::harness;

int main(int argc, char** argv) {
    CLI::App app{"Moving double-well optical lattice transport: STA/eSTA design and split-operator simulation"};
    app.set_version_flag("--version", dwol::version_string());
    app.require_subcommand(1);

    CliOptions opt;
    std::string fractions;
    std::string selector = "all";
    std::uint64_t seed = 0;
    auto common = [&](CLI::App* sub, bool needs_config) {
        auto* c = sub->add_option("--config", opt.config, "JSON configuration file");
        if (needs_config) c->required()->check(CLI::ExistingFile);
        sub->add_option("--out", opt.out, "output directory")->capture_default_str();
        sub->add_option("--threads", opt.threads, "worker threads for sweeps")->check(CLI::PositiveNumber);
        sub->add_option("--seed", seed, "seed for randomized verification suites");
        sub->add_option("--snapshot-fractions", fractions, "comma-separated fractions of t_f for wave-field dumps");
    };
    auto* design = app.add_subcommand("design", "write the STA or eSTA trajectory and coefficients");
    auto* ground = app.add_subcommand("groundstate", "imaginary-time ground state of the static lattice");
    auto* transport = app.add_subcommand("transport", "one transport run and its fidelity");
    auto* sweep = app.add_subcommand("sweep", "fidelity sweep over one configuration value");
    auto* verify = app.add_subcommand("verify", "run the oracle suites");
    for (auto* s : {design, ground, transport, sweep}) common(s, true);
    common(verify, false);
    verify->add_option("suite", selector, "hermite, gk, order, harmonic, ite, trajectory or all")
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        for (auto* s : {design, ground, transport, sweep, verify})
            if (s->parsed() && s->count("--seed")) opt.seed = seed;
        if (!fractions.empty()) {
            std::vector<double> f;
            std::size_t start = 0;
            while (start <= fractions.size()) {
                const std::size_t comma = fractions.find(',', start);
                const std::string item = fractions.substr(start, comma == std::string::npos ? comma : comma - start);
                std::size_t used = 0;
                double v = 0;
                try {
                    v = std::stod(item, &used);
                } catch (const std::exception&) {
                    used = 0;
                }
                if (used == 0 || used != item.size()) throw ConfigError("--snapshot-fractions: cannot read '" + item + "'");
                f.push_back(v);
                if (comma == std::string::npos) break;
                start = comma + 1;
            }
            opt.snapshot_fractions = f;
        }
        if (design->parsed()) return cmd_design(opt, std::cout);
        if (ground->parsed()) return cmd_groundstate(opt, std::cout);
        if (transport->parsed()) return cmd_transport(opt, std::cout);
        if (sweep->parsed()) return cmd_sweep(opt, std::cout);
        if (verify->parsed()) return cmd_verify(selector, opt, std::cout);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const dwol::InvalidParameters& e) {
        std::cerr << "invalid parameters: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}
