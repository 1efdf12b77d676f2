#include "pinnfem/cli/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <functional>
#include <istream>
#include <set>
#include <sstream>

#include "pinnfem/cli/registry.hpp"
#include "pinnfem/common/errors.hpp"

namespace pinnfem::cli {

namespace {

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::string lower(std::string s)
{
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char ch) { return std::tolower(ch); });
    return s;
}

/// Splits on whitespace and commas, dropping braces and brackets.
std::vector<std::string> tokens(const std::string& v)
{
    std::string s = v;
    for (char& ch : s) {
        if (ch == ',' || ch == '{' || ch == '}' || ch == '[' || ch == ']') ch = ' ';
    }
    std::istringstream in(s);
    std::vector<std::string> out;
    for (std::string t; in >> t;) out.push_back(t);
    return out;
}

class Reader {
public:
    explicit Reader(const IniFile& ini) : ini_(ini) {}

    [[noreturn]] void fail(const std::string& key, const std::string& what) const
    {
        const auto it = ini_.entries().find(key);
        const int line = it == ini_.entries().end() ? 0 : it->second.line;
        throw ConfigError(ini_.source() + ":" + std::to_string(line) + ": " + key + ": " + what);
    }

    const std::string* get(const std::string& key)
    {
        used_.insert(key);
        const auto it = ini_.entries().find(key);
        return it == ini_.entries().end() ? nullptr : &it->second.value;
    }

    template <class T>
    T number(const std::string& key, const std::string& text) const
    {
        T v{};
        const char* b = text.data();
        const char* e = b + text.size();
        const auto r = std::from_chars(b, e, v);
        if (r.ec != std::errc() || r.ptr != e) fail(key, "'" + text + "' is not a valid number");
        return v;
    }

    bool boolean(const std::string& key, const std::string& text) const
    {
        const std::string t = lower(text);
        if (t == "true" || t == "yes" || t == "on" || t == "1") return true;
        if (t == "false" || t == "no" || t == "off" || t == "0") return false;
        fail(key, "'" + text + "' is not a boolean");
    }

    void reject_unused() const
    {
        for (const auto& [key, entry] : ini_.entries()) {
            if (!used_.count(key)) fail(key, "unknown key");
        }
    }

private:
    const IniFile& ini_;
    std::set<std::string> used_;
};

analysis::SpaceKind parse_space(Reader& r, const std::string& key, const std::string& t)
{
    const std::string s = lower(t);
    if (s == "classical") return analysis::SpaceKind::classical;
    if (s == "additive") return analysis::SpaceKind::additive;
    if (s == "multiplicative") return analysis::SpaceKind::multiplicative;
    r.fail(key, "unknown space '" + t + "' (classical, additive, multiplicative, all)");
}

std::vector<int> sizes(int first, int count)
{
    std::vector<int> v;
    for (int i = 0, s = first; i < count; ++i, s *= 2) v.push_back(s);
    return v;
}

TableLayout default_layout(fem::Family family)
{
    if (family == fem::Family::hermite) return {{Metric::l2, Metric::h1_semi, Metric::h2}, true};
    return {{Metric::l2, Metric::h1_semi}, false};
}

} // namespace

IniFile IniFile::parse(std::istream& in, const std::string& source)
{
    IniFile ini;
    ini.source_ = source;
    std::string section;
    std::string raw;
    int line = 0;
    const auto fail = [&](const std::string& what) {
        throw ConfigError(source + ":" + std::to_string(line) + ": " + what);
    };
    while (std::getline(in, raw)) {
        ++line;
        std::string s = raw;
        const auto hash = s.find_first_of("#;");
        if (hash != std::string::npos) s.erase(hash);
        s = trim(s);
        if (s.empty()) continue;
        if (s.front() == '[') {
            if (s.back() != ']') fail("unterminated section header");
            section = lower(trim(s.substr(1, s.size() - 2)));
            if (section.empty()) fail("empty section name");
            continue;
        }
        const auto eq = s.find('=');
        if (eq == std::string::npos) fail("expected 'key = value'");
        if (section.empty()) fail("key outside of a section");
        const std::string key = lower(trim(s.substr(0, eq)));
        const std::string value = trim(s.substr(eq + 1));
        if (key.empty()) fail("empty key");
        const std::string full = section + "." + key;
        if (ini.entries_.count(full)) fail("duplicate key " + full);
        ini.entries_[full] = Entry{value, line};
    }
    if (in.bad()) throw IoError("cannot read " + source);
    return ini;
}

pinn::TrainingConfig default_training(const ProblemSpec& problem)
{
    pinn::TrainingConfig t;
    t.boundary_mode = pinn::BoundaryHandling::boundary_operator;
    t.penalty_lambda = 1000.0;
    switch (problem.dim) {
    case 1:
        t.layer_sizes = {1, 20, 1};
        t.learning_rate = 2e-3;
        t.epochs_ritz = 0;
        t.epochs_residual = 10000;
        t.collocation_count = 1000;
        break;
    case 2:
        t.layer_sizes = {2, 20, 40, 20, 1};
        t.learning_rate = 1e-3;
        t.collocation_count = 400;
        // the near-eigenvalue case trains on the energy instead of the residual
        if (problem.id == "p2d_eig") {
            t.epochs_ritz = 10000;
            t.epochs_residual = 0;
        } else {
            t.epochs_ritz = 0;
            t.epochs_residual = 10000;
        }
        break;
    default:
        t.layer_sizes = {3, 20, 40, 20, 1};
        t.learning_rate = 3e-3;
        t.epochs_ritz = 15000;
        t.epochs_residual = 10000;
        t.collocation_count = 1000;
        break;
    }
    return t;
}

const std::vector<std::string>& preset_names()
{
    static const std::vector<std::string> names = [] {
        std::vector<std::string> v;
        for (int i = 2; i <= 15; ++i) v.push_back("table" + std::to_string(i));
        return v;
    }();
    return names;
}

RunConfig preset(const std::string& name)
{
    const auto& names = preset_names();
    if (std::find(names.begin(), names.end(), name) == names.end()) {
        throw ConfigError("unknown preset '" + name + "'");
    }
    const int t = std::stoi(name.substr(5));
    using analysis::SpaceKind;
    RunConfig c;
    c.name = name;
    c.train_implied = true;
    c.seeds = {1, 2, 3, 4, 5};
    if (t <= 7) {
        c.problem_id = "p1d_poisson";
        c.degree = (t - 2) / 2 + 1;
        c.spaces = {SpaceKind::classical, SpaceKind::additive, SpaceKind::multiplicative};
        c.mesh_sizes = sizes(10, 6);
        c.table = {{t % 2 == 0 ? Metric::l2 : Metric::h1_semi}, false};
    } else if (t == 8) {
        c.problem_id = "p1d_biharmonic";
        c.family = fem::Family::hermite;
        c.degree = 3;
        c.spaces = {SpaceKind::classical, SpaceKind::additive, SpaceKind::multiplicative};
        c.mesh_sizes = sizes(5, 5);
        c.table = default_layout(fem::Family::hermite);
    } else if (t <= 14) {
        static const char* ids[] = {"p2d_c0", "p2d_cm5", "p2d_eig"};
        c.problem_id = ids[(t - 9) / 2];
        c.degree = (t - 9) % 2 + 1;
        c.spaces = {SpaceKind::classical, SpaceKind::multiplicative};
        if (t == 13) {
            c.mesh_sizes = sizes(8, 6);
        } else if (t == 14) {
            c.mesh_sizes = sizes(4, 7);
        } else {
            c.mesh_sizes = sizes(4, 5);
        }
        c.table = default_layout(fem::Family::lagrange);
    } else {
        c.problem_id = "p3d_poisson";
        c.spaces = {SpaceKind::classical, SpaceKind::multiplicative};
        c.mesh_sizes = sizes(2, 5);
        c.table = default_layout(fem::Family::lagrange);
    }
    c.training = default_training(make_problem(c.problem_id));
    c.training.seed = c.seeds.front();
    return c;
}

RunConfig apply_config(const IniFile& ini, RunConfig c)
{
    Reader r(ini);
    if (const auto* v = r.get("problem.id")) {
        try {
            const ProblemSpec p = make_problem(*v);
            if (p.id != c.problem_id) {
                const std::uint64_t seed = c.training.seed;
                c.training = default_training(p);
                c.training.seed = seed;
            }
        } catch (const ConfigError& e) {
            r.fail("problem.id", e.what());
        }
        c.problem_id = *v;
    }

    if (const auto* v = r.get("pinn.layers")) {
        c.training.layer_sizes.clear();
        for (const auto& t : tokens(*v)) c.training.layer_sizes.push_back(r.number<int>("pinn.layers", t));
    }
    if (const auto* v = r.get("pinn.lr")) c.training.learning_rate = r.number<double>("pinn.lr", *v);
    if (const auto* v = r.get("pinn.epochs_ritz")) c.training.epochs_ritz = r.number<long>("pinn.epochs_ritz", *v);
    if (const auto* v = r.get("pinn.epochs_residual")) {
        c.training.epochs_residual = r.number<long>("pinn.epochs_residual", *v);
    }
    if (const auto* v = r.get("pinn.collocation")) {
        c.training.collocation_count = r.number<int>("pinn.collocation", *v);
    }
    if (const auto* v = r.get("pinn.boundary_mode")) {
        const std::string m = lower(*v);
        if (m == "operator") {
            c.training.boundary_mode = pinn::BoundaryHandling::boundary_operator;
        } else if (m == "penalty") {
            c.training.boundary_mode = pinn::BoundaryHandling::penalty;
        } else {
            r.fail("pinn.boundary_mode", "expected 'operator' or 'penalty'");
        }
    }
    if (const auto* v = r.get("pinn.penalty_lambda")) {
        c.training.penalty_lambda = r.number<double>("pinn.penalty_lambda", *v);
    }
    if (const auto* v = r.get("pinn.log_every")) c.training.log_every = r.number<long>("pinn.log_every", *v);
    if (const auto* v = r.get("pinn.seed")) c.seeds = {r.number<std::uint64_t>("pinn.seed", *v)};
    if (const auto* v = r.get("pinn.seeds")) {
        c.seeds.clear();
        for (const auto& t : tokens(*v)) c.seeds.push_back(r.number<std::uint64_t>("pinn.seeds", t));
        if (c.seeds.empty()) r.fail("pinn.seeds", "no seeds given");
    }
    if (const auto* v = r.get("pinn.checkpoint")) c.checkpoint = std::filesystem::path(*v);

    bool family_set = false;
    if (const auto* v = r.get("fem.element")) {
        const std::string e = lower(*v);
        if (e == "lagrange") {
            c.family = fem::Family::lagrange;
        } else if (e == "hermite") {
            c.family = fem::Family::hermite;
            c.degree = 3;
        } else {
            r.fail("fem.element", "expected 'lagrange' or 'hermite'");
        }
        family_set = true;
    }
    if (const auto* v = r.get("fem.degree")) c.degree = r.number<int>("fem.degree", *v);
    if (const auto* v = r.get("fem.space")) {
        c.spaces.clear();
        for (const auto& t : tokens(*v)) {
            if (lower(t) == "all") {
                c.spaces = {analysis::SpaceKind::classical, analysis::SpaceKind::additive,
                            analysis::SpaceKind::multiplicative};
                break;
            }
            const auto s = parse_space(r, "fem.space", t);
            if (std::find(c.spaces.begin(), c.spaces.end(), s) == c.spaces.end()) c.spaces.push_back(s);
        }
        if (c.spaces.empty()) r.fail("fem.space", "no space given");
    }
    if (const auto* v = r.get("fem.mesh_sizes")) {
        c.mesh_sizes.clear();
        for (const auto& t : tokens(*v)) c.mesh_sizes.push_back(r.number<int>("fem.mesh_sizes", t));
        if (c.mesh_sizes.empty()) r.fail("fem.mesh_sizes", "mesh size list is empty");
        for (std::size_t i = 0; i < c.mesh_sizes.size(); ++i) {
            if (c.mesh_sizes[i] < 1) r.fail("fem.mesh_sizes", "mesh sizes must be positive");
            if (i > 0 && c.mesh_sizes[i] != 2 * c.mesh_sizes[i - 1]) {
                r.fail("fem.mesh_sizes", "each mesh size must double the previous one");
            }
        }
    }

    if (const auto* v = r.get("fem.solver_tolerance")) {
        c.solver_tolerance = r.number<double>("fem.solver_tolerance", *v);
        if (!(c.solver_tolerance > 0.0)) r.fail("fem.solver_tolerance", "must be positive");
    }

    if (const auto* v = r.get("output.dir")) c.out_dir = std::filesystem::path(*v);
    if (const auto* v = r.get("output.dump_fields")) c.dump_fields = r.boolean("output.dump_fields", *v);
    if (const auto* v = r.get("output.dump_mesh")) c.dump_mesh = r.boolean("output.dump_mesh", *v);
    if (const auto* v = r.get("output.resolution")) c.dump_resolution = r.number<int>("output.resolution", *v);
    r.reject_unused();

    if (c.problem_id.empty()) throw ConfigError(ini.source() + ": [problem] id is required");
    if (c.table.metrics.empty() || family_set) c.table = default_layout(c.family);
    if (c.name.empty()) c.name = c.problem_id;
    c.training.seed = c.seeds.front();
    return c;
}

RunConfig load_config(const std::filesystem::path& path, RunConfig base)
{
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config " + path.string());
    return apply_config(IniFile::parse(in, path.string()), std::move(base));
}

void validate(const RunConfig& c)
{
    if (c.problem_id.empty()) throw ConfigError("no problem selected");
    const ProblemSpec p = make_problem(c.problem_id);
    if (c.mesh_sizes.empty()) throw ConfigError("fem.mesh_sizes is empty");
    if (c.seeds.empty()) throw ConfigError("no seeds given");
    const auto& layers = c.training.layer_sizes;
    if (layers.size() < 2 || layers.front() != p.dim || layers.back() != 1) {
        throw ConfigError("pinn.layers must start with " + std::to_string(p.dim) + " and end with 1");
    }
    if (c.family == fem::Family::hermite && (p.dim != 1 || c.degree != 3)) {
        throw ConfigError("the Hermite element is the 1D cubic");
    }
    if (c.family == fem::Family::lagrange && (c.degree < 1 || c.degree > 3)) {
        throw ConfigError("fem.degree must be 1, 2 or 3");
    }
    if (p.op == Operator::biharmonic_1d && c.family != fem::Family::hermite) {
        throw ConfigError("biharmonic problems need fem.element = hermite");
    }
    if (c.training.epochs_ritz > 0 && p.op == Operator::biharmonic_1d) {
        throw ConfigError("pinn.epochs_ritz must be 0 for biharmonic problems");
    }
    if (c.training.epochs_ritz < 0 || c.training.epochs_residual < 0 ||
        c.training.epochs_ritz + c.training.epochs_residual <= 0) {
        throw ConfigError("pinn epochs must be non-negative with at least one epoch");
    }
    if (!(c.training.learning_rate > 0.0)) throw ConfigError("pinn.lr must be positive");
    if (c.training.collocation_count < (1 << p.dim)) throw ConfigError("pinn.collocation is too small");
    if (c.training.log_every < 1) throw ConfigError("pinn.log_every must be positive");
    if (c.dump_resolution == 1) throw ConfigError("output.resolution must be at least 2");
}

} // namespace pinnfem::cli
