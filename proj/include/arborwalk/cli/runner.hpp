#pragma once

// Executes a manifest. Work is split into units (grid point x realization);
// each finished unit is persisted under parts/ so an interrupted run can be
// resumed, and the final CSV is assembled in grid-then-realization order.

#include <exception>
#include <filesystem>
#include <optional>

#include <json.hpp>

#include "arborwalk/cli/manifest.hpp"

namespace arborwalk::cli {

/// Conditioning failures exceeded the manifest's budget, or an audit found a
/// violation. Outputs are written before it is raised.
class FailureBudgetError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

struct RunOptions {
    /// Overrides the manifest's output_dir.
    std::filesystem::path out;
    /// 0 keeps the OpenMP default.
    int threads = 0;
    /// Reuse finished units found under out/parts.
    bool resume = false;
    /// Stop after computing this many new units (for checkpoint testing).
    std::optional<int> stop_after;
};

struct RunResult {
    std::filesystem::path dir;
    bool complete = true;
    int units = 0;
    int computed = 0;
    int reused = 0;
    nlohmann::json summary;
};

RunResult run(const Manifest& manifest, const RunOptions& options);

/// 0 success, 2 manifest error, 3 capacity, 4 numerical failure, 1 other.
int exit_code_for(const std::exception& e);

}  // namespace arborwalk::cli
