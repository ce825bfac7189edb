#pragma once

// Experiment manifests: JSON documents with a schema_version field that
// fully determine a run.

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "arborwalk/coin.hpp"
#include "arborwalk/disorder.hpp"
#include "arborwalk/errors.hpp"
#include "arborwalk/local_walk.hpp"

namespace arborwalk::cli {

inline constexpr int kSchemaVersion = 1;

/// Invalid manifest; the message starts with the offending field path.
class ManifestError : public InputError {
public:
    using InputError::InputError;
};

enum class Kind {
    return_prob,
    wiener,
    green_moments,
    lyapunov,
    diagram_q3,
    diagram_q4,
    blocks,
    covariance,
    paths_audit,
};

std::string kind_name(Kind kind);

struct CoinSpec {
    /// identity, permutation, q3_delocalizing, q3_localizing, q4, haar
    std::string family = "identity";
    int index = 1;
    std::string q4_kind;
    std::string permutation;
    std::vector<double> phases;
    /// Parameter name -> values; the grid is their Cartesian product in
    /// key order.
    std::map<std::string, std::vector<double>> grid;
    std::optional<double> perturb_distance;
    std::uint64_t perturb_seed = 0;
};

struct DisorderSpec {
    /// none, uniform, interval, table
    std::string distribution = "none";
    double a = 0.0;
    double b = 0.0;
    std::vector<double> weights;
};

using GridPoint = std::vector<std::pair<std::string, double>>;

struct Manifest {
    int schema_version = kSchemaVersion;
    Kind kind = Kind::return_prob;
    int q = 3;
    CoinSpec coin;
    DisorderSpec disorder;
    std::vector<double> boundary_phases;
    std::uint64_t seed = 1;
    int realizations = 1;
    int steps = 20;
    int L = 3;
    int radius = 4;
    std::string center = "e";
    std::string source_vertex = "e";
    /// Empty selects the first letter of the alphabet.
    std::string source_letter;
    double s = 0.2;
    int z_count = 16;
    double z_radius = 0.98;
    std::int64_t matrices = 100'000;
    double z_phase = 0.0;
    int chains = 8;
    int n_max = 4;
    std::vector<int> parities{0, 1};
    int translations = 20;
    int max_conditioning_failures = 0;
    std::string output_dir;
    nlohmann::json raw;
};

Manifest parse_manifest(const nlohmann::json& doc);
/// Reads and parses a manifest file; I/O and JSON syntax errors become
/// ManifestError.
Manifest load_manifest(const std::filesystem::path& path);

std::vector<GridPoint> grid_points(const CoinSpec& spec);
double grid_value(const GridPoint& point, const std::string& name, double fallback);

coin::CoinMatrix build_coin(const Manifest& m, const GridPoint& point);
disorder::DisorderField build_disorder(const DisorderSpec& spec, std::uint64_t seed);
coin::PhaseDecoration boundary_decoration(const Manifest& m);
walk::BasisState source_state(const Manifest& m);

}  // namespace arborwalk::cli
