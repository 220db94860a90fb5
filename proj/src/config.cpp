#include "cmclab/config.hpp"

#include "cmclab/catenoid.hpp"
#include "cmclab/domain.hpp"

#include <fmt/core.h>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace cmclab {

const char* to_string(ConfigIssue issue)
{
    switch (issue) {
    case ConfigIssue::syntax: return "syntax";
    case ConfigIssue::unknown_key: return "unknown-key";
    case ConfigIssue::bad_type: return "bad-type";
    case ConfigIssue::bad_value: return "bad-value";
    case ConfigIssue::h_range: return "h-range";
    case ConfigIssue::lambda_order: return "lambda-order";
    case ConfigIssue::lambda_below_cH: return "lambda-below-cH";
    case ConfigIssue::radii_not_monotone: return "radii-not-monotone";
    }
    return "unknown";
}

ConfigError::ConfigError(ConfigIssue issue, const std::string& what)
    : Error(ErrorCode::config, std::string(to_string(issue)) + ": " + what), issue_(issue)
{
}

namespace {

[[noreturn]] void bad(ConfigIssue issue, const std::string& what) { throw ConfigError(issue, what); }

struct Cursor {
    const std::string& s;
    size_t i = 0;
    int line = 0;

    void skip_ws()
    {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    }
    bool at_end_of_line()
    {
        skip_ws();
        return i >= s.size() || s[i] == '#';
    }
    [[noreturn]] void error(const std::string& what) const
    {
        bad(ConfigIssue::syntax, fmt::format("line {}: {}", line, what));
    }
};

bool bare_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-'; }

std::string parse_key(Cursor& c)
{
    c.skip_ws();
    const size_t b = c.i;
    while (c.i < c.s.size() && (bare_char(c.s[c.i]) || c.s[c.i] == '.')) ++c.i;
    if (c.i == b) c.error("expected a key");
    return c.s.substr(b, c.i - b);
}

double parse_number(Cursor& c)
{
    c.skip_ws();
    size_t b = c.i;
    if (c.i < c.s.size() && c.s[c.i] == '+') b = ++c.i;
    std::string tok;
    while (c.i < c.s.size() && (std::isalnum(static_cast<unsigned char>(c.s[c.i])) || std::string("+-._").find(c.s[c.i]) != std::string::npos))
        ++c.i;
    tok = c.s.substr(b, c.i - b);
    std::erase(tok, '_');
    if (tok == "inf" || tok == "nan" || tok == "-inf") c.error("non-finite numbers are not accepted");
    double v = 0.0;
    auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || p != tok.data() + tok.size()) c.error(fmt::format("bad number '{}'", tok));
    return v;
}

TomlValue parse_value(Cursor& c)
{
    c.skip_ws();
    if (c.i >= c.s.size()) c.error("missing value");
    const char ch = c.s[c.i];
    if (ch == '"') {
        std::string out;
        ++c.i;
        while (c.i < c.s.size() && c.s[c.i] != '"') {
            if (c.s[c.i] == '\n') c.error("unterminated string");
            if (c.s[c.i] == '\\' && c.i + 1 < c.s.size()) {
                const char e = c.s[++c.i];
                if (e == 'n') out += '\n';
                else if (e == 't') out += '\t';
                else if (e == '"' || e == '\\') out += e;
                else c.error("unsupported escape");
            } else {
                out += c.s[c.i];
            }
            ++c.i;
        }
        if (c.i >= c.s.size()) c.error("unterminated string");
        ++c.i;
        return out;
    }
    if (ch == '[') {
        ++c.i;
        std::vector<double> arr;
        for (;;) {
            c.skip_ws();
            if (c.i < c.s.size() && c.s[c.i] == ']') {
                ++c.i;
                break;
            }
            arr.push_back(parse_number(c));
            c.skip_ws();
            if (c.i < c.s.size() && c.s[c.i] == ',') {
                ++c.i;
                continue;
            }
            if (c.i < c.s.size() && c.s[c.i] == ']') {
                ++c.i;
                break;
            }
            c.error("expected ',' or ']' in array");
        }
        return arr;
    }
    if (c.s.compare(c.i, 4, "true") == 0) {
        c.i += 4;
        return true;
    }
    if (c.s.compare(c.i, 5, "false") == 0) {
        c.i += 5;
        return false;
    }
    return parse_number(c);
}

template <class T>
const T& get(const TomlTable& t, const std::string& key, const T& fallback)
{
    auto it = t.find(key);
    if (it == t.end()) return fallback;
    const T* v = std::get_if<T>(&it->second);
    if (!v) bad(ConfigIssue::bad_type, fmt::format("'{}' has the wrong type", key));
    return *v;
}

int get_int(const TomlTable& t, const std::string& key, int fallback)
{
    const double v = get<double>(t, key, fallback);
    if (v != std::floor(v) || std::abs(v) > 1e9) bad(ConfigIssue::bad_type, fmt::format("'{}' must be an integer", key));
    return static_cast<int>(v);
}

} // namespace

TomlTable parse_toml(const std::string& text)
{
    TomlTable out;
    std::string prefix;
    std::istringstream in(text);
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        Cursor c{raw, 0, line};
        if (c.at_end_of_line()) continue;
        if (raw[c.i] == '[') {
            ++c.i;
            prefix = parse_key(c);
            c.skip_ws();
            if (c.i >= raw.size() || raw[c.i] != ']') c.error("expected ']'");
            ++c.i;
            if (!c.at_end_of_line()) c.error("trailing characters after table header");
            continue;
        }
        const std::string key = parse_key(c);
        c.skip_ws();
        if (c.i >= raw.size() || raw[c.i] != '=') c.error("expected '='");
        ++c.i;
        TomlValue v = parse_value(c);
        if (!c.at_end_of_line()) c.error("trailing characters after value");
        const std::string full = prefix.empty() ? key : prefix + "." + key;
        if (!out.emplace(full, std::move(v)).second) c.error(fmt::format("duplicate key '{}'", full));
    }
    return out;
}

RunConfig config_from_toml(const TomlTable& t)
{
    static const std::set<std::string> known = {
        "H",
        "slab.mode", "slab.lambda1", "slab.lambda2", "slab.offset1", "slab.offset2", "slab.epsilon",
        "spiral.profile",
        "domain.n_max", "domain.radii",
        "grid.n_lambda", "grid.n_z",
        "solver.method", "solver.tol", "solver.max_iter", "solver.kernel",
        "barrier.count", "barrier.samples_per_turn",
        "dh.H", "dh.samples", "dh.lambda_min", "dh.lambda_max",
        "catenoid.lambda_factor", "catenoid.mesh", "catenoid.z_cap",
        "output.dir",
    };
    for (const auto& [k, v] : t)
        if (!known.contains(k)) bad(ConfigIssue::unknown_key, fmt::format("unknown key '{}'", k));

    RunConfig c;
    c.H = get<double>(t, "H", c.H);
    const std::string mode = get<std::string>(t, "slab.mode", t.contains("slab.lambda1") ? "explicit" : "offsets");
    if (mode == "explicit") c.slab_mode = SlabMode::explicit_lambdas;
    else if (mode == "offsets") c.slab_mode = SlabMode::offsets;
    else bad(ConfigIssue::bad_value, fmt::format("slab.mode must be 'explicit' or 'offsets', got '{}'", mode));
    c.lambda1 = get<double>(t, "slab.lambda1", c.lambda1);
    c.lambda2 = get<double>(t, "slab.lambda2", c.lambda2);
    c.offset1 = get<double>(t, "slab.offset1", c.offset1);
    c.offset2 = get<double>(t, "slab.offset2", c.offset2);
    c.epsilon = get<double>(t, "slab.epsilon", c.epsilon);
    c.spiral = get<std::string>(t, "spiral.profile", c.spiral);

    c.n_max = get_int(t, "domain.n_max", c.n_max);
    c.radii = get<std::vector<double>>(t, "domain.radii", c.radii);
    c.n_lambda = get_int(t, "grid.n_lambda", c.n_lambda);
    c.n_z = get_int(t, "grid.n_z", c.n_z);

    const std::string method = get<std::string>(t, "solver.method", to_string(c.solve.method));
    if (method == "newton") c.solve.method = Optimizer::newton;
    else if (method == "bb") c.solve.method = Optimizer::bb;
    else bad(ConfigIssue::bad_value, fmt::format("solver.method must be 'newton' or 'bb', got '{}'", method));
    c.solve.tol = get<double>(t, "solver.tol", c.solve.tol);
    c.solve.max_iter = get_int(t, "solver.max_iter", c.solve.max_iter);
    const std::string kernel = get<std::string>(t, "solver.kernel", "openmp");
    if (kernel == "openmp") c.solve.kernel = Kernel::openmp;
    else if (kernel == "serial") c.solve.kernel = Kernel::serial;
    else bad(ConfigIssue::bad_value, fmt::format("solver.kernel must be 'openmp' or 'serial', got '{}'", kernel));

    c.barriers = get_int(t, "barrier.count", c.barriers);
    c.barrier_samples = get_int(t, "barrier.samples_per_turn", c.barrier_samples);

    c.dh_H = get<std::vector<double>>(t, "dh.H", c.dh_H);
    c.dh_samples = get_int(t, "dh.samples", c.dh_samples);
    c.dh_lambda_min = get<double>(t, "dh.lambda_min", c.dh_lambda_min);
    c.dh_lambda_max = get<double>(t, "dh.lambda_max", c.dh_lambda_max);

    c.catenoid_lambda_factor = get<double>(t, "catenoid.lambda_factor", c.catenoid_lambda_factor);
    c.catenoid_mesh = get_int(t, "catenoid.mesh", c.catenoid_mesh);
    c.catenoid_z_cap = get<double>(t, "catenoid.z_cap", c.catenoid_z_cap);

    c.out_dir = get<std::string>(t, "output.dir", c.out_dir);
    return c;
}

RunConfig load_config(const std::filesystem::path& path)
{
    std::ifstream f(path);
    if (!f.good()) bad(ConfigIssue::syntax, fmt::format("cannot read config {}", path.string()));
    std::stringstream ss;
    ss << f.rdbuf();
    return config_from_toml(parse_toml(ss.str()));
}

void validate_basic(const RunConfig& c)
{
    auto check_H = [](double H, const char* what) {
        if (!(H >= 0.0 && H < 1.0)) bad(ConfigIssue::h_range, fmt::format("{} = {} is outside [0, 1)", what, H));
    };
    check_H(c.H, "H");
    for (double h : c.dh_H) check_H(h, "dh.H entry");
    if (c.slab_mode == SlabMode::explicit_lambdas && !(c.lambda2 > c.lambda1))
        bad(ConfigIssue::lambda_order, fmt::format("lambda2 = {} must exceed lambda1 = {}", c.lambda2, c.lambda1));
    if (c.slab_mode == SlabMode::offsets && !(c.offset2 > c.offset1))
        bad(ConfigIssue::lambda_order, fmt::format("offset2 = {} must exceed offset1 = {}", c.offset2, c.offset1));
    if (c.slab_mode == SlabMode::offsets && c.offset1 < 0.0)
        bad(ConfigIssue::lambda_below_cH, fmt::format("offset1 = {} puts lambda1 below c_H", c.offset1));
    if (!(c.epsilon < 0.0 && c.epsilon > -1.0))
        bad(ConfigIssue::bad_value, fmt::format("epsilon = {} must lie in (-1, 0)", c.epsilon));
    if (c.spiral != "arctan") bad(ConfigIssue::bad_value, fmt::format("unknown spiral profile '{}'", c.spiral));
    if (c.n_max < 1) bad(ConfigIssue::bad_value, "domain.n_max must be at least 1");
    if (!c.radii.empty()) {
        if (static_cast<int>(c.radii.size()) < c.n_max)
            bad(ConfigIssue::bad_value, fmt::format("domain.radii lists {} radii for n_max = {}", c.radii.size(), c.n_max));
        if (!(c.radii.front() > 0.0)) bad(ConfigIssue::bad_value, "domain.radii must be positive");
        for (size_t i = 1; i < c.radii.size(); ++i)
            if (!(c.radii[i] > c.radii[i - 1]))
                bad(ConfigIssue::radii_not_monotone, fmt::format("domain.radii not increasing at entry {}", i));
    }
    if (c.n_lambda < 8 || c.n_z < 8) bad(ConfigIssue::bad_value, "grid must be at least 8x8");
    if (!(c.solve.tol > 0.0) || c.solve.max_iter < 1) bad(ConfigIssue::bad_value, "solver.tol and solver.max_iter must be positive");
    if (c.barriers < 0 || c.barrier_samples < 16) bad(ConfigIssue::bad_value, "barrier settings out of range");
    if (c.dh_samples < 3 || !(c.dh_lambda_min > 0.0 && c.dh_lambda_max > c.dh_lambda_min))
        bad(ConfigIssue::bad_value, "dh sampling range invalid");
    if (!(c.catenoid_lambda_factor > 0.0) || c.catenoid_mesh < 8 || !(c.catenoid_z_cap > 0.0))
        bad(ConfigIssue::bad_value, "catenoid settings out of range");
}

ResolvedSlab validate(const RunConfig& c)
{
    validate_basic(c);
    const CatenoidMax m = find_cH(c.H);
    ResolvedSlab r{m.c_H, m.d_max, 0.0, 0.0};
    if (c.slab_mode == SlabMode::explicit_lambdas) {
        r.lambda1 = c.lambda1;
        r.lambda2 = c.lambda2;
    } else {
        r.lambda1 = m.c_H + c.offset1;
        r.lambda2 = m.c_H + c.offset2;
    }
    if (r.lambda1 < m.c_H)
        bad(ConfigIssue::lambda_below_cH, fmt::format("lambda1 = {} is below c_H = {}", r.lambda1, m.c_H));
    return r;
}

std::vector<double> radius_sequence(const RunConfig& c)
{
    if (!c.radii.empty())
        return {c.radii.begin(), c.radii.begin() + std::min<std::ptrdiff_t>(c.n_max, std::ssize(c.radii))};
    std::vector<double> r;
    for (int n = 1; n <= c.n_max; ++n) r.push_back(default_radius(n));
    return r;
}

Json to_json(const RunConfig& c)
{
    Json j;
    j["H"] = c.H;
    j["slab"] = {{"mode", c.slab_mode == SlabMode::offsets ? "offsets" : "explicit"},
                 {"lambda1", c.lambda1},
                 {"lambda2", c.lambda2},
                 {"offset1", c.offset1},
                 {"offset2", c.offset2},
                 {"epsilon", c.epsilon}};
    j["spiral"] = {{"profile", c.spiral}};
    j["domain"] = {{"n_max", c.n_max}, {"radii", radius_sequence(c)}};
    j["grid"] = {{"n_lambda", c.n_lambda}, {"n_z", c.n_z}};
    j["solver"] = {{"method", to_string(c.solve.method)},
                   {"tol", c.solve.tol},
                   {"max_iter", c.solve.max_iter},
                   {"kernel", c.solve.kernel == Kernel::openmp ? "openmp" : "serial"}};
    j["barrier"] = {{"count", c.barriers}, {"samples_per_turn", c.barrier_samples}};
    j["dh"] = {{"H", c.dh_H}, {"samples", c.dh_samples}, {"lambda_min", c.dh_lambda_min}, {"lambda_max", c.dh_lambda_max}};
    j["catenoid"] = {{"lambda_factor", c.catenoid_lambda_factor}, {"mesh", c.catenoid_mesh}, {"z_cap", c.catenoid_z_cap}};
    j["output"] = {{"dir", c.out_dir}};
    return j;
}

} // namespace cmclab
