#include "cmclab/pipeline.hpp"

#include <CLI11.hpp>
#include <fmt/core.h>

#include <cstdio>
#include <regex>

using namespace cmclab;

namespace {

struct Overrides {
    std::string config;
    std::string out;
    std::vector<double> h;
    std::string grid;
    double tol = 0.0;
    int n_max = 0;
};

RunConfig make_config(const Overrides& o)
{
    RunConfig c = o.config.empty() ? RunConfig{} : load_config(o.config);
    if (!o.out.empty()) c.out_dir = o.out;
    if (!o.h.empty()) {
        c.dh_H = o.h;
        c.H = o.h.front();
    }
    if (!o.grid.empty()) {
        std::smatch m;
        if (!std::regex_match(o.grid, m, std::regex(R"((\d+)[xX](\d+))")))
            throw ConfigError(ConfigIssue::bad_value, fmt::format("--grid expects <n_lambda>x<n_z>, got '{}'", o.grid));
        c.n_lambda = std::stoi(m[1]);
        c.n_z = std::stoi(m[2]);
    }
    if (o.tol > 0.0) c.solve.tol = o.tol;
    if (o.n_max > 0) c.n_max = o.n_max;
    validate_basic(c);
    return c;
}

void report(const CommandResult& r)
{
    for (const auto& c : r.checks)
        std::printf("%s %s%s%s\n", c.pass ? "PASS" : "FAIL", c.name.c_str(), c.detail.empty() ? "" : "  ", c.detail.c_str());
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Constant mean curvature surfaces in hyperbolic space"};
    app.require_subcommand(1);
    app.set_help_flag("--help", "print help and exit");
    Overrides o;
    auto common = [&](CLI::App* sub) {
        sub->set_help_flag("--help", "print help and exit");
        sub->add_option("--config", o.config, "TOML run configuration")->check(CLI::ExistingFile);
        sub->add_option("--out", o.out, "output directory");
        sub->add_option("--h", o.h, "mean curvature H (repeatable)");
        sub->add_option("--grid", o.grid, "graph grid <n_lambda>x<n_z>");
        sub->add_option("--tol", o.tol, "solver tolerance");
        sub->add_option("--n-max", o.n_max, "largest domain index");
    };
    struct Sub {
        const char* name;
        const char* help;
        CommandResult (*run)(const RunConfig&);
    };
    const Sub subs[] = {
        {"dh-curve", "asymptotic distance curves d_H and their maxima", cmd_dh_curve},
        {"catenoid", "generating curve, mesh and curvature check", cmd_catenoid},
        {"strips", "angular extent table of the translated wall", cmd_strips},
        {"gamma", "boundary curves Gamma_n", cmd_gamma},
        {"solve", "solve the graph problem for n = n-max", cmd_solve},
        {"pipeline", "every stage, the sequence n = 1..n-max and diagnostics", cmd_pipeline},
    };
    std::vector<std::pair<CLI::App*, const Sub*>> registered;
    for (const Sub& s : subs) {
        CLI::App* a = app.add_subcommand(s.name, s.help);
        common(a);
        registered.emplace_back(a, &s);
    }
    CLI::App* check = app.add_subcommand("check", "verify the manifest and checks of an output directory");
    common(check);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        CommandResult r;
        if (check->parsed()) {
            r = cmd_check(o.out.empty() ? make_config(o).out_dir : o.out);
        } else {
            for (auto [a, s] : registered)
                if (a->parsed()) r = s->run(make_config(o));
        }
        report(r);
        return exit_status(r);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "cmclab: %s\n", e.what());
        return exit_status(e);
    }
}
