#include <cstdio>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "birkhoff/harness.hpp"

using namespace birkhoff;

namespace {

int run_config_path(const std::string& path, const std::string& out_dir) {
    auto cfg = harness::load_config(path);
    auto res = harness::run(cfg, out_dir);
    for (const auto& f : res.files) std::cout << "wrote " << f << "\n";
    if (res.violations)
        std::cout << res.violations << " bound violation(s); see summary\n";
    else
        std::cout << "all asserted bounds hold\n";
    return res.exit_code;
}

int run_kind(const std::string& kind, std::size_t n, unsigned depth, std::uint64_t seed,
             const std::string& out_dir) {
    harness::json j;
    j["kind"] = kind;
    j["seed"] = seed;
    j["depth"] = depth;
    if (n) j["n"] = n;
    auto cfg = harness::parse_config(j);
    auto res = harness::run(cfg, out_dir);
    for (const auto& f : res.files) std::cout << "wrote " << f << "\n";
    std::cout << (res.violations ? "FAIL" : "PASS") << " (" << res.violations
              << " violation(s))\n";
    return res.exit_code;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"birkhoff-lab: exact experiments on convergence rates of Birkhoff averages"};
    app.require_subcommand(1);

    // run <config.json>
    std::string config_path, out_dir;
    auto* run_cmd = app.add_subcommand("run", "run an experiment from a JSON config");
    run_cmd->add_option("config", config_path, "config file")->required();
    run_cmd->add_option("--out", out_dir, "output directory override");

    // schedule gen|check
    auto* sched_cmd = app.add_subcommand("schedule", "generate or check parameter schedules");
    std::string sched_mode = "divergent", sched_out, sched_in;
    std::size_t sched_n = 5;
    auto* gen = sched_cmd->add_subcommand("gen", "emit a default schedule as JSON");
    gen->add_option("--n", sched_n, "number of entries");
    gen->add_option("--mode", sched_mode, "divergent | convergent");
    gen->add_option("--out", sched_out, "output file (stdout if omitted)");
    auto* check = sched_cmd->add_subcommand("check", "validate a schedule file");
    check->add_option("file", sched_in, "schedule JSON")->required();
    check->add_option("--mode", sched_mode, "divergent | convergent");

    // verify thm1|thm2|thm3|thm4
    std::string thm;
    std::size_t verify_n = 0;
    unsigned verify_depth = 20;
    std::uint64_t verify_seed = 1;
    std::string verify_out = "out";
    auto* verify = app.add_subcommand("verify", "run a theorem verification experiment");
    verify->add_option("theorem", thm, "thm1 | thm2 | thm3 | thm4")->required();
    verify->add_option("--n", verify_n, "stages / terms");
    verify->add_option("--depth", verify_depth, "dyadic grid depth");
    verify->add_option("--seed", verify_seed, "sampling seed");
    verify->add_option("--out", verify_out, "output directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run_cmd->parsed()) return run_config_path(config_path, out_dir);
        if (sched_cmd->parsed()) {
            auto mode = sched_mode == "convergent" ? constructions::FamilyMode::Convergent
                                                   : constructions::FamilyMode::Divergent;
            if (gen->parsed()) {
                auto s = constructions::schedule_default(sched_n, mode);
                std::string text = harness::thm2_schedule_to_json(s).dump(2) + "\n";
                if (sched_out.empty()) {
                    std::cout << text;
                } else {
                    std::ofstream os(sched_out, std::ios::binary);
                    os << text;
                    std::cout << "wrote " << sched_out << "\n";
                }
                return 0;
            }
            std::ifstream is(sched_in);
            if (!is) throw ConfigInvalid("cannot open " + sched_in);
            harness::json j;
            is >> j;
            auto s = harness::thm2_schedule_from_json(j);
            auto cert = constructions::schedule_validate(s, mode);
            for (const auto& row : cert.trend)
                std::cout << "n=" << row.n << " eta=" << rat_to_string(row.eta)
                          << " alpha=" << rat_to_string(row.alpha)
                          << " a_n d_n 2^p_n=" << rat_to_string(row.divergence_term) << "\n";
            if (cert.ok) {
                std::cout << "certificate: all prefix conditions hold\n";
                return 0;
            }
            for (const auto& v : cert.violations) std::cout << "violation: " << v << "\n";
            return 1;
        }
        if (verify->parsed()) {
            if (thm == "thm1" || thm == "thm2" || thm == "thm3")
                return run_kind(thm, verify_n, verify_depth, verify_seed, verify_out);
            if (thm == "thm4") {
                int a = run_kind("thm4-stage", verify_n, verify_depth, verify_seed, verify_out);
                int b = run_kind("thm4-ratio", verify_n, verify_depth, verify_seed, verify_out);
                return a ? a : b;
            }
            throw ConfigInvalid("theorem must be thm1 | thm2 | thm3 | thm4");
        }
    } catch (const ConfigInvalid& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
