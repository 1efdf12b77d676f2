#include "pinnfem/cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <vector>

#include "pinnfem/cli/registry.hpp"
#include "pinnfem/common/errors.hpp"
#include "pinnfem/enrichment/enrichment.hpp"
#include "pinnfem/fem/assembly.hpp"
#include "pinnfem/mesh/mesh.hpp"
#include "pinnfem/pinn/checkpoint.hpp"
#include "pinnfem/pinn/loss.hpp"

namespace pinnfem::cli {

namespace {

using analysis::SpaceKind;

struct Trained {
    std::string label;
    ad::DenseNetwork net;
    std::optional<analysis::PinnMetadata> meta;
};

std::filesystem::path output_dir(const RunConfig& c, const CommandOptions& o)
{
    std::filesystem::path dir = o.out_dir ? *o.out_dir : c.out_dir;
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec || !std::filesystem::is_directory(dir)) {
        throw IoError("cannot create output directory " + dir.string() + (ec ? ": " + ec.message() : ""));
    }
    return dir;
}

std::vector<std::uint64_t> seeds_of(const RunConfig& c, const CommandOptions& o)
{
    if (o.seed) return {*o.seed};
    return c.seeds;
}

template <class F>
void write_file(const std::filesystem::path& path, F&& body)
{
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    body(out);
    out.flush();
    if (!out) throw IoError("failed writing " + path.string());
}

std::string g6(double v)
{
    if (std::isnan(v)) return "nan";
    return analysis::format6(v);
}

int default_pinn_resolution(int dim) { return dim == 1 ? 64 : dim == 2 ? 32 : 8; }

Trained train_seed(const ProblemSpec& p, const RunConfig& c, std::uint64_t seed, const std::filesystem::path& dir,
                   std::ostream& out)
{
    pinn::TrainingConfig tc = c.training;
    tc.seed = seed;
    const pinn::TrainingResult r = pinn::train(p, tc);
    const std::string stem = p.id + "_seed" + std::to_string(seed);
    pinn::save_checkpoint(r.net, dir / (stem + ".ckpt"));
    write_file(dir / (stem + "_log.csv"), [&](std::ostream& f) { pinn::write_log(r.log, f); });
    const double l2 = p.exact_u ? pinn::pinn_l2_error(r.net, p, default_pinn_resolution(p.dim))
                                : std::numeric_limits<double>::quiet_NaN();
    out << "train " << p.id << " seed " << seed << ": J_r=" << g6(r.final_residual) << " J_b=" << g6(r.final_boundary)
        << " pinn_l2=" << g6(l2);
    if (tc.epochs_ritz > 0 && tc.epochs_residual > 0) out << " J_r_at_switch=" << g6(r.residual_at_switch);
    out << '\n';
    analysis::PinnMetadata meta{seed, tc.epochs_ritz, tc.epochs_residual, r.final_residual, r.final_boundary,
                                r.final_shifted_ritz};
    return {"seed" + std::to_string(seed), r.net, meta};
}

bool enriched(const std::vector<SpaceKind>& spaces)
{
    return std::any_of(spaces.begin(), spaces.end(), [](SpaceKind s) { return s != SpaceKind::classical; });
}

void require_network_source(const RunConfig& c, const CommandOptions& o)
{
    if (enriched(c.spaces) && !c.checkpoint && !o.train_first && !c.train_implied) {
        throw ConfigError("enriched spaces need pinn.checkpoint or --train-first");
    }
}

std::vector<Trained> networks(const ProblemSpec& p, const RunConfig& c, const CommandOptions& o,
                              const std::filesystem::path& dir, std::ostream& out)
{
    std::vector<Trained> nets;
    if (!enriched(c.spaces)) return nets;
    if (c.checkpoint) {
        ad::DenseNetwork net = pinn::load_checkpoint(*c.checkpoint);
        if (net.input_dim() != p.dim) throw ConfigError("checkpoint input dimension does not match " + p.id);
        nets.push_back({"ckpt", std::move(net), std::nullopt});
        return nets;
    }
    require_network_source(c, o);
    for (std::uint64_t s : seeds_of(c, o)) nets.push_back(train_seed(p, c, s, dir, out));
    return nets;
}

double metric_value(const analysis::StudyRow& r, Metric m)
{
    switch (m) {
    case Metric::l2: return r.errors.l2;
    case Metric::h1_semi: return r.errors.h1_semi;
    case Metric::h2: return r.errors.h2.value_or(std::numeric_limits<double>::quiet_NaN());
    }
    return 0.0;
}

double metric_order(const analysis::StudyRow& r, Metric m)
{
    switch (m) {
    case Metric::l2: return r.l2_order;
    case Metric::h1_semi: return r.h1_semi_order;
    case Metric::h2: return r.h2_order;
    }
    return 0.0;
}

const char* metric_name(Metric m)
{
    switch (m) {
    case Metric::l2: return "l2";
    case Metric::h1_semi: return "h1";
    case Metric::h2: return "h2";
    }
    return "";
}

std::string size_cell(const analysis::ConvergenceReport& rep, const analysis::StudyRow& r)
{
    return rep.dim == 1 ? std::to_string(r.size) : analysis::format6(r.h);
}

/// Table over the given reports, one (metric, order) pair per
/// metric and space.
void write_table(const std::vector<const analysis::ConvergenceReport*>& reps, const TableLayout& layout,
                 std::ostream& out)
{
    const auto& first = *reps.front();
    out << (first.dim == 1 ? "n" : "h");
    for (const auto* rep : reps) {
        for (Metric m : layout.metrics) {
            const std::string col = (reps.size() > 1 ? analysis::space_name(rep->space) + "_" : "") + metric_name(m);
            out << ',' << col << ',' << col << "_order";
        }
    }
    out << '\n';
    for (std::size_t i = 0; i < first.rows.size(); ++i) {
        out << size_cell(first, first.rows[i]);
        for (const auto* rep : reps) {
            for (Metric m : layout.metrics) {
                out << ',' << analysis::format6(metric_value(rep->rows[i], m)) << ','
                    << analysis::format6(metric_order(rep->rows[i], m));
            }
        }
        out << '\n';
    }
}

double median(std::vector<double> v)
{
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

analysis::StudyConfig study_config(const RunConfig& c, SpaceKind space)
{
    analysis::StudyConfig s;
    s.family = c.family;
    s.degree = c.family == fem::Family::hermite ? 3 : c.degree;
    s.space = space;
    s.mesh_sizes = c.mesh_sizes;
    s.enrichment.solver.tolerance = c.solver_tolerance;
    return s;
}

bool write_study(const analysis::ConvergenceReport& rep, const std::filesystem::path& dir, const std::string& stem)
{
    write_file(dir / (stem + ".csv"), [&](std::ostream& f) { analysis::write_report_csv(rep, f); });
    write_file(dir / (stem + ".meta"), [&](std::ostream& f) { analysis::write_metadata(rep, f); });
    return std::all_of(rep.rows.begin(), rep.rows.end(), [](const analysis::StudyRow& r) { return r.ok(); });
}

} // namespace

std::string element_tag(fem::Family family, int degree)
{
    return family == fem::Family::hermite ? "hermite" : "p" + std::to_string(degree);
}

void cmd_train(const RunConfig& c, const CommandOptions& o, std::ostream& out)
{
    validate(c);
    const ProblemSpec p = make_problem(c.problem_id);
    const auto dir = output_dir(c, o);
    for (std::uint64_t s : seeds_of(c, o)) (void)train_seed(p, c, s, dir, out);
}

bool cmd_study(const RunConfig& c, const CommandOptions& o, std::ostream& out)
{
    validate(c);
    require_network_source(c, o);
    const ProblemSpec p = make_problem(c.problem_id);
    const auto dir = output_dir(c, o);
    const std::string el = element_tag(c.family, c.degree);
    bool all_ok = true;

    std::optional<analysis::ConvergenceReport> classical;
    if (std::find(c.spaces.begin(), c.spaces.end(), SpaceKind::classical) != c.spaces.end()) {
        classical = analysis::convergence_study(p, study_config(c, SpaceKind::classical));
        all_ok &= write_study(*classical, dir, p.id + "_classical_" + el);
    }

    const std::vector<Trained> nets = networks(p, c, o, dir, out);
    // per-space enriched reports in seed order
    std::map<SpaceKind, std::vector<analysis::ConvergenceReport>> per_space;
    const auto write_tables = [&](const std::vector<const analysis::ConvergenceReport*>& reps,
                                  const std::string& suffix) {
        if (c.table.split_by_space) {
            for (const auto* rep : reps) {
                write_file(dir / (c.name + "_" + analysis::space_name(rep->space) + suffix + ".csv"),
                           [&](std::ostream& f) { write_table({rep}, c.table, f); });
            }
        } else {
            write_file(dir / (c.name + suffix + ".csv"), [&](std::ostream& f) { write_table(reps, c.table, f); });
        }
    };

    if (nets.empty()) {
        if (classical) write_tables({&*classical}, "");
    }
    for (const Trained& t : nets) {
        std::vector<const analysis::ConvergenceReport*> reps;
        if (classical) reps.push_back(&*classical);
        for (SpaceKind s : c.spaces) {
            if (s == SpaceKind::classical) continue;
            analysis::StudyConfig sc = study_config(c, s);
            sc.net = t.net;
            sc.pinn = t.meta;
            auto rep = analysis::convergence_study(p, sc);
            all_ok &= write_study(rep, dir, p.id + "_" + analysis::space_name(s) + "_" + el + "_" + t.label);
            per_space[s].push_back(std::move(rep));
        }
        for (SpaceKind s : c.spaces) {
            if (s != SpaceKind::classical) reps.push_back(&per_space[s].back());
        }
        write_tables(reps, "_" + t.label);
    }

    if (!per_space.empty()) {
        write_file(dir / (c.name + "_summary.csv"), [&](std::ostream& f) {
            f << "space,n_or_h,metric,min,median,seeds\n";
            for (const auto& [space, reps] : per_space) {
                for (std::size_t i = 0; i < c.mesh_sizes.size(); ++i) {
                    for (Metric m : c.table.metrics) {
                        std::vector<double> v;
                        for (const auto& rep : reps) {
                            if (rep.rows[i].ok()) v.push_back(metric_value(rep.rows[i], m));
                        }
                        f << analysis::space_name(space) << ',' << size_cell(reps.front(), reps.front().rows[i]) << ','
                          << metric_name(m) << ',';
                        if (!v.empty()) {
                            f << analysis::format6(*std::min_element(v.begin(), v.end())) << ','
                              << analysis::format6(median(v));
                        } else {
                            f << ',';
                        }
                        f << ',' << v.size() << '\n';
                    }
                }
            }
        });
    }

    for (const auto& [space, reps] : per_space) {
        std::vector<double> v;
        for (const auto& rep : reps) {
            if (rep.rows.front().ok()) v.push_back(rep.rows.front().errors.l2);
        }
        out << "summary " << c.name << ' ' << analysis::space_name(space) << ' ' << el << ": L2 at "
            << size_cell(reps.front(), reps.front().rows.front());
        if (v.empty()) {
            out << " failed for every seed\n";
            continue;
        }
        const double lo = *std::min_element(v.begin(), v.end());
        const double med = median(v);
        out << " min " << g6(lo) << " median " << g6(med) << " over " << v.size() << " run(s)";
        if (classical && classical->rows.front().ok()) {
            const double ref = classical->rows.front().errors.l2;
            out << ", classical " << g6(ref) << ", median ratio " << g6(med / ref);
        }
        out << '\n';
    }
    if (per_space.empty() && classical) {
        const auto& last = classical->rows.back();
        out << "summary " << c.name << " classical " << el << ": L2 " << g6(last.errors.l2) << " order "
            << g6(last.l2_order) << " at " << size_cell(*classical, last) << '\n';
    }
    if (!all_ok) out << "some study rows failed; see the .meta files\n";
    return all_ok;
}

void cmd_solve(const RunConfig& c, const CommandOptions& o, std::ostream& out)
{
    validate(c);
    if (c.mesh_sizes.size() != 1) throw ConfigError("solve needs exactly one mesh size");
    require_network_source(c, o);
    const ProblemSpec p = make_problem(c.problem_id);
    const auto dir = output_dir(c, o);
    const std::string el = element_tag(c.family, c.degree);
    const int size = c.mesh_sizes.front();
    const int res = c.dump_resolution > 0 ? c.dump_resolution : (p.dim == 1 ? 101 : p.dim == 2 ? 65 : 17);

    std::shared_ptr<const mesh::Mesh> m;
    switch (p.dim) {
    case 1: m = std::make_shared<const mesh::Mesh>(mesh::interval_mesh(size)); break;
    case 2: m = std::make_shared<const mesh::Mesh>(mesh::triangle_mesh(size)); break;
    default: m = std::make_shared<const mesh::Mesh>(mesh::tet_mesh(size)); break;
    }
    const fem::Element element = c.family == fem::Family::hermite ? fem::Element::hermite()
                                                                  : fem::Element::lagrange(p.dim, c.degree);
    const fem::FunctionSpace base = fem::make_space(m, element);
    if (c.dump_mesh) write_file(dir / (p.id + "_mesh.txt"), [&](std::ostream& f) { mesh::write_mesh(*m, f); });

    CommandOptions first = o;
    if (!first.seed && !c.checkpoint) first.seed = c.seeds.front();
    const std::vector<Trained> nets = networks(p, c, first, dir, out);

    for (SpaceKind s : c.spaces) {
        fem::FunctionSpace space = base;
        Eigen::VectorXd dofs;
        if (s == SpaceKind::classical) {
            fem::AssembledSystem sys = fem::assemble(base, p);
            fem::apply_dirichlet(sys);
            fem::SolverOptions so;
            so.tolerance = c.solver_tolerance;
            dofs = fem::solve(sys, so).solution;
        } else {
            const auto& net = nets.front().net;
            enrichment::EnrichmentOptions eo;
            eo.solver.tolerance = c.solver_tolerance;
            auto sol = s == SpaceKind::additive ? enrichment::solve_additive(p, base, net, eo)
                                                : enrichment::solve_multiplicative(p, base, net, eo);
            space = std::move(sol.space);
            dofs = std::move(sol.aux_dofs);
            if (s == SpaceKind::multiplicative) out << "shift C=" << g6(sol.plan.shift) << '\n';
        }
        out << "solve " << p.id << ' ' << analysis::space_name(s) << ' ' << el << " size " << size;
        if (p.exact_u) out << ": L2 " << g6(analysis::error_norms(space, dofs, p).l2);
        out << '\n';
        if (c.dump_fields) {
            analysis::field_dump(space, dofs, p, res,
                                 dir / (p.id + "_" + analysis::space_name(s) + "_" + el + "_field.csv"));
        }
    }
}

int exit_code_for(const std::exception& e) noexcept
{
    if (dynamic_cast<const TrainingDivergence*>(&e)) return exit_divergence;
    if (dynamic_cast<const IoError*>(&e)) return exit_io;
    if (dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const InputError*>(&e) ||
        dynamic_cast<const FormatError*>(&e) || dynamic_cast<const CapabilityError*>(&e)) {
        return exit_config;
    }
    return exit_solver;
}

} // namespace pinnfem::cli
