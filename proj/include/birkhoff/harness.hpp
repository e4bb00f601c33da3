#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "birkhoff/constructions.hpp"
#include "birkhoff/phi.hpp"
#include "birkhoff/rudolph.hpp"

namespace birkhoff {
namespace harness {

using nlohmann::json;

struct ExperimentConfig {
    std::string kind; // rotation-bound | thm1 | thm2 | thm4-stage | thm4-ratio | thm3 | oracle-compare
    std::uint64_t seed = 1;
    unsigned depth = 20;     // dyadic grid depth for sampled points
    std::size_t points = 0;  // 0 = kind default
    std::size_t pairs = 0;   // rotation-bound
    std::size_t n_count = 0; // stages / terms, 0 = kind default
    std::size_t trunc = 0;   // 0 = all stored terms
    Phi phi = Phi::power(Rat(-1, 4));
    Rat growth = Rat(0); // 0 = kind default (10 for thm4-ratio, 5 for thm3)
    std::optional<constructions::Thm2Schedule> schedule; // inline override
    std::vector<Rat> t_grid;                             // inline override
    std::string out_dir = "out";
};

ExperimentConfig parse_config(const json& j);
ExperimentConfig load_config(const std::string& path);

struct RunResult {
    int exit_code = 0;
    std::size_t violations = 0;
    std::vector<std::string> files;
    json summary;
};

RunResult run(const ExperimentConfig& cfg, const std::string& out_dir_override = "");

// JSON codecs for the file formats
json pwconst_to_json(const PiecewiseConst& f);
PiecewiseConst pwconst_from_json(const json& j);

json thm2_schedule_to_json(const constructions::Thm2Schedule& s);
constructions::Thm2Schedule thm2_schedule_from_json(const json& j);

json rudolph_schedule_to_json(const rudolph::StageSchedule& s);
rudolph::StageSchedule rudolph_schedule_from_json(const json& j);

json phi_to_json(const Phi& p);
Phi phi_from_json(const json& j);

// default t grid for thm1 sweeps: `count` log-spaced dyadics with odd
// numerators between 2^lo_exp and 2^hi_exp (powers of two would make every
// term vanish exactly)
std::vector<Rat> default_t_grid(unsigned lo_exp, unsigned hi_exp, std::size_t count);

std::string write_text_file(const std::string& dir, const std::string& name,
                            const std::string& content);

} // namespace harness
} // namespace birkhoff
