#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pinnfem/analysis/study.hpp"
#include "pinnfem/fem/element.hpp"
#include "pinnfem/pinn/train.hpp"

namespace pinnfem::cli {

/// `[section]` headers and `key = value` lines; `#` and `;` start comments.
/// Keys are stored as "section.key" with the line they came from.
class IniFile {
public:
    struct Entry {
        std::string value;
        int line = 0;
    };

    /// ConfigError "<source>:<line>: ..." on a malformed line or a repeated key.
    static IniFile parse(std::istream& in, const std::string& source);

    [[nodiscard]] const std::map<std::string, Entry>& entries() const noexcept { return entries_; }
    [[nodiscard]] const std::string& source() const noexcept { return source_; }

private:
    std::string source_;
    std::map<std::string, Entry> entries_;
};

enum class Metric { l2, h1_semi, h2 };

/// Column layout of the table CSV.
struct TableLayout {
    std::vector<Metric> metrics;
    /// One file per space (biharmonic layout) instead of column groups.
    bool split_by_space = false;
};

struct RunConfig {
    std::string problem_id;
    /// shift and boundary mode are filled in by training; seed holds the first seed.
    pinn::TrainingConfig training;
    /// Seeds for enriched studies; one training run per seed.
    std::vector<std::uint64_t> seeds{0};
    /// Trained network to use instead of training.
    std::optional<std::filesystem::path> checkpoint;
    fem::Family family = fem::Family::lagrange;
    int degree = 1;
    std::vector<analysis::SpaceKind> spaces{analysis::SpaceKind::classical};
    std::vector<int> mesh_sizes;
    /// Relative residual every linear solve must reach.
    double solver_tolerance = 1e-12;
    std::filesystem::path out_dir = ".";
    bool dump_fields = true;
    bool dump_mesh = false;
    /// Field-dump points per axis; <= 0 picks 101 / 65 / 17 by dimension.
    int dump_resolution = 0;
    /// Name used for table files; the preset name when one is used.
    std::string name;
    TableLayout table;
    /// Training is part of the workflow (presets) even without --train-first.
    bool train_implied = false;
};

[[nodiscard]] const std::vector<std::string>& preset_names();
/// ConfigError for an unknown name.
[[nodiscard]] RunConfig preset(const std::string& name);

/// Overlays the entries of `ini` on `base` and validates the result.
/// Unset keys keep the values of `base`; hyperparameters left at their
/// defaults follow the problem dimension.
[[nodiscard]] RunConfig apply_config(const IniFile& ini, RunConfig base);
[[nodiscard]] RunConfig load_config(const std::filesystem::path& path, RunConfig base);

/// Default layers, lr, epochs and collocation count for the problem dimension.
[[nodiscard]] pinn::TrainingConfig default_training(const ProblemSpec& problem);

/// ConfigError when the config cannot drive a run.
void validate(const RunConfig& config);

} // namespace pinnfem::cli
