#include "doctest.h"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>

#include "pinnfem/cli/commands.hpp"
#include "pinnfem/cli/config.hpp"
#include "pinnfem/cli/registry.hpp"
#include "pinnfem/common/errors.hpp"

using namespace pinnfem;
using analysis::SpaceKind;

namespace {

cli::IniFile ini(const std::string& text)
{
    std::istringstream in(text);
    return cli::IniFile::parse(in, "t.cfg");
}

std::string error_of(const std::string& text, cli::RunConfig base = {})
{
    try {
        (void)cli::apply_config(ini(text), std::move(base));
    } catch (const ConfigError& e) {
        return e.what();
    }
    return "";
}

std::filesystem::path scratch(const std::string& name)
{
    auto p = std::filesystem::temp_directory_path() / ("pinnfem_test_cli_" + name);
    std::filesystem::remove_all(p);
    return p;
}

std::string slurp(const std::filesystem::path& p)
{
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::vector<std::string> lines(const std::filesystem::path& p)
{
    std::istringstream in(slurp(p));
    std::vector<std::string> out;
    for (std::string l; std::getline(in, l);) out.push_back(l);
    return out;
}

int columns(const std::string& line) { return static_cast<int>(std::count(line.begin(), line.end(), ',')) + 1; }

} // namespace

TEST_CASE("ini parsing")
{
    const auto f = ini("# comment\n[Problem]\nid = p1d_poisson ; trailing\n\n[fem]\nmesh_sizes = 10, 20\n");
    REQUIRE(f.entries().size() == 2);
    CHECK(f.entries().at("problem.id").value == "p1d_poisson");
    CHECK(f.entries().at("problem.id").line == 3);
    CHECK(f.entries().at("fem.mesh_sizes").line == 6);

    const auto fails = [](const std::string& text, const std::string& where) {
        std::istringstream in(text);
        try {
            (void)cli::IniFile::parse(in, "t.cfg");
        } catch (const ConfigError& e) {
            return std::string(e.what()).rfind(where, 0) == 0;
        }
        return false;
    };
    CHECK(fails("id = x\n", "t.cfg:1:"));
    CHECK(fails("[a]\nx = 1\n[b\n", "t.cfg:3:"));
    CHECK(fails("[a]\n\njunk\n", "t.cfg:3:"));
    CHECK(fails("[a]\nx = 1\nx = 2\n", "t.cfg:3:"));
    CHECK(fails("[]\n", "t.cfg:1:"));
}

TEST_CASE("config values and validation")
{
    const auto c = cli::apply_config(ini("[problem]\nid = p2d_c0\n[pinn]\nseed = 7\n[fem]\ndegree = 2\n"
                                         "space = all\nmesh_sizes = 4 8 16\n[output]\ndir = out\ndump_fields = no\n"),
                                     {});
    CHECK(c.problem_id == "p2d_c0");
    CHECK(c.training.layer_sizes == std::vector<int>{2, 20, 40, 20, 1});
    CHECK(c.training.learning_rate == 1e-3);
    CHECK(c.training.collocation_count == 400);
    CHECK(c.training.seed == 7);
    CHECK(c.seeds == std::vector<std::uint64_t>{7});
    CHECK(c.degree == 2);
    CHECK(c.spaces.size() == 3);
    CHECK(c.mesh_sizes == std::vector<int>{4, 8, 16});
    CHECK(c.out_dir == "out");
    CHECK_FALSE(c.dump_fields);
    CHECK_NOTHROW(cli::validate(c));

    const auto r = cli::apply_config(ini("[problem]\nid = p3d_poisson\n[pinn]\nlayers = {3,5,1}\nlr = 0.01\n"
                                         "boundary_mode = penalty\nseeds = 3 4\n[fem]\nmesh_sizes = 2\n"),
                                     {});
    CHECK(r.training.layer_sizes == std::vector<int>{3, 5, 1});
    CHECK(r.training.epochs_ritz == 15000);
    CHECK(r.training.epochs_residual == 10000);
    CHECK(r.training.boundary_mode == pinn::BoundaryHandling::penalty);
    CHECK(r.seeds == std::vector<std::uint64_t>{3, 4});

    CHECK(error_of("[problem]\nid = nope\n").find("t.cfg:2:") == 0);
    CHECK(error_of("[problem]\nid = nope\n").find("'nope'") != std::string::npos);
    CHECK(error_of("[problem]\nid = p1d_poisson\n[fem]\nmesh_sizes =\n").find("t.cfg:4:") == 0);
    CHECK(error_of("[problem]\nid = p1d_poisson\n[fem]\nmesh_sizes = 10 30\n").find("double") != std::string::npos);
    CHECK(error_of("[problem]\nid = p1d_poisson\n[pinn]\nlr = fast\n").find("t.cfg:4:") == 0);
    CHECK(error_of("[problem]\nid = p1d_poisson\n[pinn]\nboundary_mode = soft\n").find("t.cfg:4:") == 0);
    CHECK(error_of("[problem]\nid = p1d_poisson\n[fem]\nspace = hybrid\n").find("t.cfg:4:") == 0);
    CHECK(error_of("[problem]\nid = p1d_poisson\n[extra]\nx = 1\n").find("t.cfg:4: extra.x: unknown key") == 0);
    CHECK(error_of("[fem]\ndegree = 1\n").find("id is required") != std::string::npos);

    cli::RunConfig empty = cli::apply_config(ini("[problem]\nid = p1d_poisson\n"), {});
    CHECK_THROWS_AS(cli::validate(empty), ConfigError);
    cli::RunConfig bih = cli::apply_config(ini("[problem]\nid = p1d_biharmonic\n[fem]\nmesh_sizes = 5\n"), {});
    CHECK_THROWS_AS(cli::validate(bih), ConfigError);
    bih = cli::apply_config(ini("[fem]\nelement = hermite\n"), bih);
    CHECK(bih.degree == 3);
    CHECK_NOTHROW(cli::validate(bih));
    CHECK(bih.table.split_by_space);
    CHECK(bih.table.metrics.size() == 3);
}

TEST_CASE("preset shapes")
{
    CHECK(cli::preset_names().size() == 14);
    CHECK_THROWS_AS((void)cli::preset("table1"), ConfigError);
    struct Shape {
        const char* name;
        const char* problem;
        int degree;
        std::size_t spaces;
        std::vector<int> sizes;
        std::size_t metrics;
    };
    const std::vector<Shape> shapes{
        {"table2", "p1d_poisson", 1, 3, {10, 20, 40, 80, 160, 320}, 1},
        {"table3", "p1d_poisson", 1, 3, {10, 20, 40, 80, 160, 320}, 1},
        {"table6", "p1d_poisson", 3, 3, {10, 20, 40, 80, 160, 320}, 1},
        {"table8", "p1d_biharmonic", 3, 3, {5, 10, 20, 40, 80}, 3},
        {"table9", "p2d_c0", 1, 2, {4, 8, 16, 32, 64}, 2},
        {"table12", "p2d_cm5", 2, 2, {4, 8, 16, 32, 64}, 2},
        {"table13", "p2d_eig", 1, 2, {8, 16, 32, 64, 128, 256}, 2},
        {"table14", "p2d_eig", 2, 2, {4, 8, 16, 32, 64, 128, 256}, 2},
        {"table15", "p3d_poisson", 1, 2, {2, 4, 8, 16, 32}, 2},
    };
    for (const auto& s : shapes) {
        CAPTURE(s.name);
        const auto c = cli::preset(s.name);
        CHECK(c.problem_id == s.problem);
        CHECK(c.degree == s.degree);
        CHECK(c.spaces.size() == s.spaces);
        CHECK(c.mesh_sizes == s.sizes);
        CHECK(c.table.metrics.size() == s.metrics);
        CHECK(c.seeds.size() == 5);
        CHECK(c.train_implied);
        CHECK_NOTHROW(cli::validate(c));
    }
    CHECK(cli::preset("table2").table.metrics.front() == cli::Metric::l2);
    CHECK(cli::preset("table3").table.metrics.front() == cli::Metric::h1_semi);
    const auto t13 = cli::preset("table13");
    CHECK(t13.training.epochs_ritz == 10000);
    CHECK(t13.training.epochs_residual == 0);
    CHECK(cli::preset("table11").training.epochs_ritz == 0);
    const auto t15 = cli::preset("table15");
    CHECK(t15.training.epochs_ritz == 15000);
    CHECK(t15.training.epochs_residual == 10000);
    CHECK(t15.training.learning_rate == 3e-3);
    const auto t2 = cli::preset("table2");
    CHECK(t2.training.layer_sizes == std::vector<int>{1, 20, 1});
    CHECK(t2.training.learning_rate == 2e-3);
    CHECK(t2.training.epochs_residual == 10000);
    CHECK(t2.training.collocation_count == 1000);
}

TEST_CASE("train writes a checkpoint and a full log, deterministically")
{
    const auto dir = scratch("train");
    cli::RunConfig c = cli::apply_config(ini("[problem]\nid = p1d_poisson\n[fem]\nmesh_sizes = 10\n"), {});
    cli::CommandOptions o;
    o.out_dir = dir / "a";
    o.seed = 3;
    std::ostringstream out;
    cli::cmd_train(c, o, out);
    CHECK(out.str().find("J_r=") != std::string::npos);
    CHECK(out.str().find("pinn_l2=") != std::string::npos);
    const auto log = lines(dir / "a" / "p1d_poisson_seed3_log.csv");
    CHECK(log.size() == 10001);
    CHECK(log.front() == "epoch,phase,objective,J_r,J_b,J_R_shifted");

    c.training.epochs_residual = 200;
    o.out_dir = dir / "b";
    cli::cmd_train(c, o, out);
    o.out_dir = dir / "c";
    cli::cmd_train(c, o, out);
    const auto ck = slurp(dir / "b" / "p1d_poisson_seed3.ckpt");
    CHECK_FALSE(ck.empty());
    CHECK(ck == slurp(dir / "c" / "p1d_poisson_seed3.ckpt"));
    std::filesystem::remove_all(dir);
}

TEST_CASE("study tables keep the preset shapes")
{
    const auto dir = scratch("study");
    cli::CommandOptions o;
    o.seed = 1;
    o.out_dir = dir;
    std::ostringstream out;
    for (const char* name : {"table3", "table8", "table9"}) {
        CAPTURE(name);
        cli::RunConfig c = cli::preset(name);
        c.training.epochs_residual = 30;
        // a barely trained biharmonic net leaves fine-mesh additive rows above the residual gate
        const bool ok = cli::cmd_study(c, o, out);
        if (std::string(name) != "table8") CHECK(ok);
    }
    auto t3 = lines(dir / "table3_seed1.csv");
    REQUIRE(t3.size() == 7);
    CHECK(t3.front() == "n,classical_h1,classical_h1_order,additive_h1,additive_h1_order,multiplicative_h1,"
                        "multiplicative_h1_order");
    for (const auto& l : t3) CHECK(columns(l) == 7);
    for (const char* space : {"classical", "additive", "multiplicative"}) {
        const auto t8 = lines(dir / (std::string("table8_") + space + "_seed1.csv"));
        REQUIRE(t8.size() == 6);
        CHECK(t8.front() == "n,l2,l2_order,h1,h1_order,h2,h2_order");
        for (const auto& l : t8) CHECK(columns(l) == 7);
    }
    auto t9 = lines(dir / "table9_seed1.csv");
    REQUIRE(t9.size() == 6);
    for (const auto& l : t9) CHECK(columns(l) == 9);
    CHECK(t9[1].rfind("0.25,", 0) == 0);
    CHECK(std::filesystem::exists(dir / "p2d_c0_multiplicative_p1_seed1.meta"));
    CHECK(lines(dir / "table9_summary.csv").size() == 1 + 5 * 2);
    CHECK(out.str().find("summary table9 multiplicative p1") != std::string::npos);

    // checkpoint instead of training
    cli::RunConfig c = cli::apply_config(
        ini("[problem]\nid = p1d_poisson\n[pinn]\ncheckpoint = " + (dir / "p1d_poisson_seed1.ckpt").string() +
            "\n[fem]\nspace = additive\nmesh_sizes = 10 20\n"),
        {});
    cli::CommandOptions plain;
    plain.out_dir = dir / "ck";
    CHECK(cli::cmd_study(c, plain, out));
    CHECK(lines(dir / "ck" / "p1d_poisson_additive_p1_ckpt.csv").size() == 3);
    CHECK(lines(dir / "ck" / "p1d_poisson_ckpt.csv").size() == 3);

    c.checkpoint.reset();
    c.spaces = {SpaceKind::classical, SpaceKind::additive};
    plain.out_dir = dir / "none";
    CHECK_THROWS_AS((void)cli::cmd_study(c, plain, out), ConfigError);
    CHECK_FALSE(std::filesystem::exists(dir / "none"));
    std::filesystem::remove_all(dir);
}

TEST_CASE("solve dumps fields")
{
    const auto dir = scratch("solve");
    cli::RunConfig c = cli::apply_config(
        ini("[problem]\nid = p1d_poisson\n[pinn]\nepochs_residual = 50\n[fem]\nspace = classical multiplicative\n"
            "mesh_sizes = 8\n[output]\nresolution = 11\ndump_mesh = yes\n"),
        {});
    cli::CommandOptions o;
    o.out_dir = dir;
    o.train_first = true;
    std::ostringstream out;
    cli::cmd_solve(c, o, out);
    CHECK(lines(dir / "p1d_poisson_classical_p1_field.csv").size() == 12);
    CHECK(lines(dir / "p1d_poisson_multiplicative_p1_field.csv").size() == 12);
    CHECK(std::filesystem::exists(dir / "p1d_poisson_mesh.txt"));

    const auto quiet = dir / "quiet";
    c.dump_fields = false;
    c.dump_mesh = false;
    c.spaces = {SpaceKind::classical};
    o.out_dir = quiet;
    cli::cmd_solve(c, o, out);
    CHECK(std::filesystem::is_empty(quiet));

    c.mesh_sizes = {8, 16};
    CHECK_THROWS_AS(cli::cmd_solve(c, o, out), ConfigError);
    c.mesh_sizes = {8};
    o.out_dir = "/proc/pinnfem_no/such";
    CHECK_THROWS_AS(cli::cmd_solve(c, o, out), IoError);
    std::filesystem::remove_all(dir);
}

TEST_CASE("exit codes")
{
    CHECK(cli::exit_code_for(ConfigError("x")) == 2);
    CHECK(cli::exit_code_for(InputError("x")) == 2);
    CHECK(cli::exit_code_for(FormatError("x", 3)) == 2);
    CHECK(cli::exit_code_for(TrainingDivergence("x", 1, 0, 0, 0)) == 3);
    CHECK(cli::exit_code_for(SolverError("x", 1.0)) == 4);
    CHECK(cli::exit_code_for(ShiftError("x")) == 4);
    CHECK(cli::exit_code_for(IoError("x")) == 5);
}
