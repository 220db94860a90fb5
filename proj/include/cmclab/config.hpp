#pragma once

// Run configuration: a small TOML subset (tables, scalars, flat arrays)
// plus command-line overrides.

#include "cmclab/errors.hpp"
#include "cmclab/io.hpp"
#include "cmclab/solver.hpp"

#include <filesystem>
#include <map>
#include <string>
#include <variant>
#include <vector>

namespace cmclab {

enum class ConfigIssue {
    syntax,
    unknown_key,
    bad_type,
    bad_value,
    h_range,
    lambda_order,
    lambda_below_cH,
    radii_not_monotone,
};

const char* to_string(ConfigIssue issue);

class ConfigError : public Error {
public:
    ConfigError(ConfigIssue issue, const std::string& what);
    ConfigIssue issue() const noexcept { return issue_; }

private:
    ConfigIssue issue_;
};

using TomlValue = std::variant<bool, double, std::string, std::vector<double>>;
// Keys are flattened to "table.key".
using TomlTable = std::map<std::string, TomlValue>;

TomlTable parse_toml(const std::string& text);

enum class SlabMode { offsets, explicit_lambdas };

struct RunConfig {
    double H = 0.3;
    SlabMode slab_mode = SlabMode::offsets;
    double lambda1 = 0.0; // explicit mode
    double lambda2 = 0.0;
    double offset1 = 0.05; // offsets mode: lambda_i = c_H + offset_i
    double offset2 = 0.08;
    double epsilon = -0.05;
    std::string spiral = "arctan";

    int n_max = 3;
    std::vector<double> radii; // R_n; default_radius(n) when empty
    int n_lambda = 48;
    int n_z = 96;
    SolveOptions solve;
    int barriers = 8;
    int barrier_samples = 1024;

    std::vector<double> dh_H = {0.0, 0.3, 0.6, 0.9};
    int dh_samples = 200;
    double dh_lambda_min = 1e-2;
    double dh_lambda_max = 20.0;

    double catenoid_lambda_factor = 1.5; // lambda = factor * c_H
    int catenoid_mesh = 128;
    double catenoid_z_cap = 4.0;

    std::string out_dir = "out";
};

RunConfig config_from_toml(const TomlTable& t);
RunConfig load_config(const std::filesystem::path& path);

struct ResolvedSlab {
    double c_H = 0.0;
    double d_max = 0.0;
    double lambda1 = 0.0;
    double lambda2 = 0.0;
};

// Range checks that need no catenoid computations.
void validate_basic(const RunConfig& c);
// Full validation; finds c_H and the slab walls.
ResolvedSlab validate(const RunConfig& c);

std::vector<double> radius_sequence(const RunConfig& c);

Json to_json(const RunConfig& c);

} // namespace cmclab
