#include "cmclab/pipeline.hpp"

#include "cmclab/catenoid.hpp"
#include "cmclab/numerics.hpp"

#include <Eigen/Core>
#include <boost/version.hpp>
#include <fmt/core.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

namespace cmclab {

namespace fs = std::filesystem;

namespace {

constexpr const char* kVersion = "0.3.0";

// Collects files and checks for one command and writes the manifest.
class Run {
public:
    Run(std::string command, const RunConfig& config) : config_(config), out_(config.out_dir)
    {
        result_.command = std::move(command);
        fs::create_directories(out_);
    }

    const RunConfig& config() const { return config_; }
    CommandResult& result() { return result_; }

    void stage(const std::string& name) { result_.stages.push_back({name, {}}); }

    fs::path file(const std::string& rel)
    {
        result_.stages.back().files.push_back(rel);
        return out_ / rel;
    }

    void check(const std::string& name, bool pass, const std::string& detail)
    {
        result_.checks.push_back({name, pass, detail});
    }

    void set_slab(const ResolvedSlab& s) { slab_ = s; }

    template <class F>
    void guarded(const std::string& stage_name, F&& body)
    {
        stage(stage_name);
        try {
            body();
        } catch (const ConfigError&) {
            throw;
        } catch (const Error& e) {
            failed_stage_ = stage_name;
            error_ = e.what();
            write_manifest();
            throw Error(e.code(), fmt::format("stage {}: {}", stage_name, e.detail()));
        } catch (const std::exception& e) {
            failed_stage_ = stage_name;
            error_ = e.what();
            write_manifest();
            throw;
        }
    }

    CommandResult finish()
    {
        write_manifest();
        return result_;
    }

private:
    void write_manifest()
    {
        Json m;
        m["command"] = result_.command;
        m["config"] = to_json(config_);
        if (slab_)
            m["slab"] = {{"c_H", slab_->c_H}, {"d_max", slab_->d_max}, {"lambda1", slab_->lambda1}, {"lambda2", slab_->lambda2}};
        m["versions"] = versions();
        Json stages = Json::array();
        std::string all;
        for (const auto& s : result_.stages) {
            Json files = Json::array();
            std::string cat;
            for (const auto& f : s.files) {
                if (!fs::exists(out_ / f)) continue;
                const std::string h = sha256_file(out_ / f);
                files.push_back({{"path", f}, {"sha256", h}, {"bytes", fs::file_size(out_ / f)}});
                cat += f + ":" + h + "\n";
            }
            const std::string sh = sha256_string(cat);
            stages.push_back({{"name", s.name}, {"files", files}, {"hash", sh}});
            all += s.name + ":" + sh + "\n";
        }
        m["stages"] = stages;
        Json checks = Json::array();
        for (const auto& c : result_.checks) checks.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
        m["checks"] = checks;
        m["summary"] = result_.summary;
        m["status"] = failed_stage_.empty() ? (result_.all_pass() ? "ok" : "checks-failed") : "failed";
        if (!failed_stage_.empty()) {
            m["failed_stage"] = failed_stage_;
            m["error"] = error_;
        }
        m["run_hash"] = sha256_string(all);
        write_json(out_ / "manifest.json", m);
    }

    RunConfig config_;
    fs::path out_;
    CommandResult result_;
    std::optional<ResolvedSlab> slab_;
    std::string failed_stage_;
    std::string error_;
};

std::string tag(double H) { return fmt::format("H{:.4f}", H); }

void dh_stage(Run& run)
{
    const RunConfig& c = run.config();
    run.guarded("dh-curve", [&] {
        Json per_H = Json::array();
        std::vector<std::pair<double, double>> maxima;
        for (double H : c.dh_H) {
            const DhCurve curve = dh_curve(H, c.dh_samples, c.dh_lambda_min, c.dh_lambda_max);
            std::vector<std::vector<double>> rows;
            for (size_t i = 0; i < curve.lambda.size(); ++i) rows.push_back({curve.lambda[i], curve.d[i]});
            write_csv(run.file(fmt::format("dh_{}.csv", tag(H))), {"lambda", "d_H"}, rows);
            const int changes = slope_sign_changes(curve.d);
            run.check(fmt::format("dh-unimodal-{}", tag(H)), changes == 1, fmt::format("slope sign changes {}", changes));
            per_H.push_back({{"H", H}, {"c_H", curve.c_H}, {"d_max", curve.d_max}, {"samples", curve.lambda.size()}});
            maxima.emplace_back(H, curve.d_max);
        }
        std::sort(maxima.begin(), maxima.end());
        bool increasing = true;
        for (size_t i = 1; i < maxima.size(); ++i)
            if (maxima[i].first > maxima[i - 1].first && !(maxima[i].second > maxima[i - 1].second)) increasing = false;
        run.check("dh-max-increasing", increasing, fmt::format("{} values of H", maxima.size()));
        write_json(run.file("dh_summary.json"), per_H);
        run.result().summary["dh"] = per_H;
    });
}

void catenoid_stage(Run& run, const ResolvedSlab& slab)
{
    const RunConfig& c = run.config();
    run.guarded("catenoid", [&] {
        const double lambda = c.catenoid_lambda_factor * slab.c_H;
        const CatenoidProfile prof = generating_curve(c.H, lambda);
        std::vector<std::vector<double>> rows;
        const int n = static_cast<int>(std::floor(prof.sigma_max() / 0.05));
        for (int i = -n; i <= n; ++i) {
            const double s = 0.05 * i;
            const MeridianSample m = prof.at(s);
            rows.push_back({s, m.x, m.r, m.dx, m.dr});
        }
        write_csv(run.file("catenoid_meridian.csv"), {"sigma", "x", "r", "dx", "dr"}, rows);
        write_ply(run.file("catenoid.ply"), catenoid_mesh(prof, c.catenoid_mesh, c.catenoid_mesh, c.catenoid_z_cap));
        const CurvatureError err = catenoid_curvature_error(prof, c.catenoid_mesh, c.catenoid_z_cap);
        const double drift = prof.first_integral_drift();
        run.check("catenoid-mean-curvature", err.max_rel <= 0.02, fmt::format("max error {:.3e}", err.max_rel));
        run.check("catenoid-first-integral", drift < 1e-8, fmt::format("drift {:.3e}", drift));
        Json j = {{"H", c.H},
                  {"lambda", lambda},
                  {"E", prof.E()},
                  {"d_half", prof.d_half()},
                  {"curvature_max_abs", err.max_abs},
                  {"curvature_max_rel", err.max_rel},
                  {"first_integral_drift", drift}};
        write_json(run.file("catenoid.json"), j);
        run.result().summary["catenoid"] = j;
    });
}

struct Geometry {
    SlabChart chart;
    StripField field;
    SpiralProfile spiral;

    Geometry(const RunConfig& c, const ResolvedSlab& s)
        : chart(SlabSpec{c.H, s.lambda1, s.lambda2}), field(chart, c.epsilon), spiral{s.lambda1, s.lambda2}
    {
    }
};

void strips_stage(Run& run, const Geometry& g)
{
    const RunConfig& c = run.config();
    run.guarded("strips", [&] {
        const auto radii = radius_sequence(c);
        const double z_extent = exit_arc(g.chart, g.chart.spec().lambda1, radii.back()).Z;
        const StripTable t = build_strips(g.field, z_extent, c.n_lambda, c.n_z);
        std::vector<std::vector<double>> rows;
        double gmin = std::numeric_limits<double>::infinity(), gmax = -gmin;
        for (size_t i = 0; i < t.lambda.size(); ++i)
            for (size_t j = 0; j < t.z.size(); ++j) {
                const double G = t.G[i * t.z.size() + j];
                rows.push_back({t.lambda[i], t.z[j], G});
                gmin = std::min(gmin, G);
                gmax = std::max(gmax, G);
            }
        write_csv(run.file("strips.csv"), {"lambda", "z", "G"}, rows);
        const double pi = std::acos(-1.0);
        run.check("strips-angle-range", gmin > 0.0 && gmax < pi, fmt::format("G in [{:.6f}, {:.6f}]", gmin, gmax));
        run.result().summary["strips"] = {{"z_extent", z_extent}, {"G_min", gmin}, {"G_max", gmax}};
    });
}

void gamma_stage(Run& run, const Geometry& g)
{
    const RunConfig& c = run.config();
    run.guarded("gamma", [&] {
        const auto radii = radius_sequence(c);
        Json members = Json::array();
        for (int n = 1; n <= c.n_max; ++n) {
            const Omega omega(g.field, n, radii[n - 1]);
            const BoundaryCurve gamma = build_gamma(omega, g.spiral, c.n_lambda, c.n_z);
            std::vector<std::vector<double>> rows;
            for (const SlabPoint& p : gamma.loop()) {
                const BallPoint b = g.chart.to_ball(p);
                rows.push_back({p.lambda, p.theta, p.z, b.x, b.y, b.z});
            }
            write_csv(run.file(fmt::format("gamma_n{}.csv", n)), {"lambda", "theta", "z", "x", "y", "z_ball"}, rows);
            const bool simple = loop_is_simple(gamma);
            run.check(fmt::format("gamma-simple-n{}", n), simple, "");
            const ConvexityReport hc = h_convexity(omega);
            run.check(fmt::format("domain-mean-convex-n{}", n), hc.cap_min >= c.H && hc.strip_min >= c.H - 1e-6,
                      fmt::format("cap {:.6f} strip {:.9f}", hc.cap_min, hc.strip_min));
            members.push_back({{"n", n},
                               {"R", radii[n - 1]},
                               {"lambda_minus", gamma.walls.minus},
                               {"lambda_plus", gamma.walls.plus},
                               {"trace_distance", spiral_trace_distance(gamma, g.chart)}});
        }
        run.result().summary["gamma"] = members;
    });
}

double lambda_cell(const GraphProblem& p)
{
    double h = 0.0;
    for (int i = 1; i < p.nx(); ++i) h = std::max(h, p.xi(i) - p.xi(i - 1));
    return h;
}

void surface_checks(Run& run, int n, const SolveReport& r, const GraphSurface& s)
{
    const double cell = lambda_cell(*s.problem);
    run.check(fmt::format("solve-converged-n{}", n), r.converged, fmt::format("gradient {:.3e}", r.grad_norm));
    run.check(fmt::format("jacobi-positive-n{}", n), r.jacobi_min > 0.0, fmt::format("min {:.3e}", r.jacobi_min));
    run.check(fmt::format("lambda-range-n{}", n),
              r.interior_lambda.min >= r.boundary_lambda.min - cell && r.interior_lambda.max <= r.boundary_lambda.max + cell,
              fmt::format("interior [{:.9f}, {:.9f}] boundary [{:.9f}, {:.9f}]", r.interior_lambda.min,
                          r.interior_lambda.max, r.boundary_lambda.min, r.boundary_lambda.max));
    run.check(fmt::format("barrier-clearance-n{}", n), r.barrier_clearance > 0.0,
              fmt::format("min distance {:.6f}", r.barrier_clearance));
}

void write_member(Run& run, int n, const GraphSurface& s, const SolveReport& r)
{
    write_ply(run.file(fmt::format("surface_n{}.ply", n)), surface_mesh(s));
    write_json(run.file(fmt::format("solve_n{}.json", n)), to_json(r));
    std::vector<std::vector<double>> rows;
    for (size_t i = 0; i < r.energy_history.size(); ++i) rows.push_back({static_cast<double>(i), r.energy_history[i]});
    write_csv(run.file(fmt::format("energy_n{}.csv", n)), {"iteration", "I"}, rows);
}

SequenceOptions sequence_options(const RunConfig& c)
{
    SequenceOptions o;
    o.n_max = c.n_max;
    o.n_lambda = c.n_lambda;
    o.n_z = c.n_z;
    o.radii = radius_sequence(c);
    o.solve = c.solve;
    o.barriers = c.barriers;
    o.barrier.samples_per_turn = c.barrier_samples;
    return o;
}

ResolvedSlab resolve(Run& run)
{
    const ResolvedSlab s = validate(run.config());
    run.set_slab(s);
    run.result().summary["slab"] = {{"c_H", s.c_H}, {"d_max", s.d_max}, {"lambda1", s.lambda1}, {"lambda2", s.lambda2}};
    return s;
}

} // namespace

bool CommandResult::all_pass() const
{
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

Json versions()
{
    return {{"cmclab", kVersion},
            {"compiler", __VERSION__},
            {"eigen", fmt::format("{}.{}.{}", EIGEN_WORLD_VERSION, EIGEN_MAJOR_VERSION, EIGEN_MINOR_VERSION)},
            {"boost", BOOST_LIB_VERSION},
            {"fmt", FMT_VERSION},
            {"nlohmann_json", fmt::format("{}.{}.{}", NLOHMANN_JSON_VERSION_MAJOR, NLOHMANN_JSON_VERSION_MINOR,
                                          NLOHMANN_JSON_VERSION_PATCH)}};
}

Json to_json(const SolveReport& r)
{
    return {{"method", r.method},
            {"iterations", r.iterations},
            {"converged", r.converged},
            {"grad_norm", r.grad_norm},
            {"energy_initial", r.energy_history.front()},
            {"energy_final", r.energy_history.back()},
            {"residual_max", r.residual_max},
            {"jacobi_min", r.jacobi_min},
            {"interior_lambda", {r.interior_lambda.min, r.interior_lambda.max}},
            {"boundary_lambda", {r.boundary_lambda.min, r.boundary_lambda.max}},
            {"wall_distance_inner", r.wall_distance_inner},
            {"wall_distance_outer", r.wall_distance_outer},
            {"barrier_clearance", r.barrier_clearance}};
}

CommandResult cmd_dh_curve(const RunConfig& config)
{
    validate_basic(config);
    Run run("dh-curve", config);
    dh_stage(run);
    return run.finish();
}

CommandResult cmd_catenoid(const RunConfig& config)
{
    Run run("catenoid", config);
    const ResolvedSlab s = resolve(run);
    catenoid_stage(run, s);
    return run.finish();
}

CommandResult cmd_strips(const RunConfig& config)
{
    Run run("strips", config);
    const ResolvedSlab s = resolve(run);
    const Geometry g(config, s);
    strips_stage(run, g);
    return run.finish();
}

CommandResult cmd_gamma(const RunConfig& config)
{
    Run run("gamma", config);
    const ResolvedSlab s = resolve(run);
    const Geometry g(config, s);
    gamma_stage(run, g);
    return run.finish();
}

CommandResult cmd_solve(const RunConfig& config)
{
    Run run("solve", config);
    const ResolvedSlab s = resolve(run);
    const Geometry g(config, s);
    const int n = config.n_max;
    run.guarded("solve", [&] {
        const Omega omega(g.field, n, radius_sequence(config)[n - 1]);
        const BoundaryCurve gamma = build_gamma(omega, g.spiral, config.n_lambda, config.n_z);
        auto problem = std::make_shared<const GraphProblem>(GraphProblem::theta_graph(omega, gamma));
        auto [surface, report] = minimize(initial_surface(problem), config.solve);
        const auto disks =
            sample_barriers(g.chart, g.spiral, config.barriers, BarrierOptions{3, config.barrier_samples});
        report.barrier_clearance = barrier_clearance(surface, disks);
        write_member(run, n, surface, report);
        surface_checks(run, n, report, surface);
        run.result().summary["solve"] = to_json(report);
    });
    return run.finish();
}

CommandResult cmd_pipeline(const RunConfig& config)
{
    Run run("pipeline", config);
    const ResolvedSlab s = resolve(run);
    dh_stage(run);
    catenoid_stage(run, s);
    std::optional<Geometry> g;
    run.guarded("slab", [&] {
        g.emplace(config, s);
        Json j = {{"H", config.H},
                  {"lambda1", s.lambda1},
                  {"lambda2", s.lambda2},
                  {"c_H", s.c_H},
                  {"epsilon", config.epsilon},
                  {"z_max", g->chart.z_max()},
                  {"leaves", g->chart.leaf_count()}};
        write_json(run.file("slab.json"), j);
    });
    strips_stage(run, *g);
    gamma_stage(run, *g);
    SequenceResult seq;
    run.guarded("solve", [&] {
        seq = converge_sequence(g->field, g->spiral, sequence_options(config));
        for (const auto& m : seq.members) {
            write_member(run, m.n, m.surface, m.report);
            surface_checks(run, m.n, m.report, m.surface);
        }
    });
    run.guarded("diagnostics", [&] {
        const SequenceReport& r = seq.report;
        Json members = Json::array();
        for (const auto& m : seq.members)
            members.push_back({{"n", m.n},
                               {"R", m.R},
                               {"lambda_minus", m.gamma.walls.minus},
                               {"lambda_plus", m.gamma.walls.plus},
                               {"trace_distance", m.trace_distance},
                               {"converged", m.report.converged},
                               {"energy_A", m.surface.energy.A},
                               {"energy_I", m.surface.energy.I},
                               {"jacobi_min", m.report.jacobi_min},
                               {"barrier_clearance", m.report.barrier_clearance}});
        Json j = {{"members", members},
                  {"probe_window",
                   {{"lambda", {r.probe.lambda_lo, r.probe.lambda_hi}}, {"z", {r.probe.z_lo, r.probe.z_hi}}}},
                  {"probe_differences", r.probe_differences},
                  {"differences_decrease", r.differences_decrease},
                  {"extents_monotone", r.extents_monotone},
                  {"trace_shrinks", r.trace_shrinks},
                  {"barrier_clearance", r.barrier_clearance},
                  {"valid_members", r.valid_members}};
        write_json(run.file("sequence.json"), j);
        if (config.n_max >= 2) {
            run.check("sequence-extents-monotone", r.extents_monotone, "");
            run.check("sequence-trace-shrinks", r.trace_shrinks, "");
        }
        if (config.n_max >= 3)
            run.check("sequence-differences-decrease", r.differences_decrease,
                      fmt::format("{} differences", r.probe_differences.size()));
        run.check("sequence-tail-valid", r.valid_members == config.n_max,
                  fmt::format("{} of {} converged", r.valid_members, config.n_max));
        run.result().summary["sequence"] = j;
    });
    return run.finish();
}

CommandResult cmd_check(const fs::path& out_dir)
{
    const Json m = read_json(out_dir / "manifest.json");
    CommandResult r;
    r.command = "check";
    std::string all;
    bool files_ok = true;
    for (const auto& st : m.at("stages")) {
        std::string cat;
        for (const auto& f : st.at("files")) {
            const std::string path = f.at("path");
            const bool present = fs::exists(out_dir / path);
            const std::string h = present ? sha256_file(out_dir / path) : std::string();
            const bool same = present && h == f.at("sha256").get<std::string>();
            files_ok = files_ok && same;
            if (!same) r.checks.push_back({"hash-" + path, false, present ? "content changed" : "missing"});
            cat += path + ":" + f.at("sha256").get<std::string>() + "\n";
        }
        all += st.at("name").get<std::string>() + ":" + sha256_string(cat) + "\n";
    }
    r.checks.push_back({"manifest-files", files_ok, ""});
    r.checks.push_back({"manifest-run-hash", sha256_string(all) == m.at("run_hash").get<std::string>(), ""});
    for (const auto& c : m.at("checks"))
        r.checks.push_back({c.at("name"), c.at("pass").get<bool>(), c.at("detail")});
    r.checks.push_back({"manifest-status", m.at("status") == "ok", m.at("status")});
    r.summary = {{"run_hash", m.at("run_hash")}};
    return r;
}

int exit_status(const CommandResult& r) { return r.all_pass() ? 0 : 4; }

int exit_status(const std::exception& e)
{
    if (const auto* err = dynamic_cast<const Error*>(&e)) return err->code() == ErrorCode::config ? 2 : 3;
    return 3;
}

} // namespace cmclab
