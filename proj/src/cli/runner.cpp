#include "arborwalk/cli/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <functional>
#include <limits>
#include <numbers>
#include <omp.h>

#include "arborwalk/blocks.hpp"
#include "arborwalk/cli/csv.hpp"
#include "arborwalk/finite_volume.hpp"
#include "arborwalk/fractional_moments.hpp"
#include "arborwalk/lyapunov.hpp"
#include "arborwalk/paths.hpp"
#include "arborwalk/rng.hpp"
#include "arborwalk/spectral.hpp"
#include "arborwalk/structural_return.hpp"

namespace arborwalk::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Unit {
    int grid = 0;
    int realization = 0;
};

struct UnitResult {
    std::string rows;
    json data = json::object();
};

struct Plan {
    std::vector<Column> columns;  // after the grid, seed and realization columns
    std::string title;
    int realizations = 1;
    std::function<UnitResult(const GridPoint&, const Unit&, std::uint64_t seed)> compute;
    std::function<void(const std::vector<GridPoint>&, const std::vector<Unit>&,
                       const std::vector<json>&, json&)>
        summarize;
};

std::uint64_t unit_seed(const Manifest& m, int realization) {
    return rng::derive_seed(m.seed, static_cast<std::uint64_t>(realization));
}

std::vector<std::string> prefix(const GridPoint& point, std::uint64_t seed, int realization) {
    std::vector<std::string> f;
    for (const auto& [name, value] : point) f.push_back(format_number(value));
    f.push_back(std::to_string(seed));
    f.push_back(std::to_string(realization));
    return f;
}

std::string row(const GridPoint& point, std::uint64_t seed, int realization,
                std::vector<std::string> rest) {
    std::vector<std::string> f = prefix(point, seed, realization);
    f.insert(f.end(), rest.begin(), rest.end());
    return CsvTable::row_text(f);
}

json grid_json(const GridPoint& point) {
    json j = json::object();
    for (const auto& [name, value] : point) j[name] = value;
    return j;
}

tree::Word parse_center(const Manifest& m) {
    return tree::parse_word(m.center, tree::Alphabet(m.q));
}

DisorderSpec random_disorder(const Manifest& m) {
    if (m.disorder.distribution != "none") return m.disorder;
    DisorderSpec d;
    d.distribution = "uniform";
    return d;
}

json null_if_nan(double v) {
    return std::isnan(v) ? json(nullptr) : json(v);
}

// Per-kind plans.

Plan return_prob_plan(const Manifest& m) {
    Plan p;
    p.title = "return amplitudes <phi|U^n|phi> on the infinite tree";
    p.realizations = m.realizations;
    p.columns = {{"n", "time step"},
                 {"re", "real part of the amplitude"},
                 {"im", "imaginary part of the amplitude"},
                 {"probability", "squared modulus of the amplitude"}};
    p.compute = [&m](const GridPoint& point, const Unit& u, std::uint64_t seed) {
        const tree::Alphabet alphabet(m.q);
        const walk::LocalWalk walk(alphabet, disorder::SiteCoinField(build_coin(m, point)),
                                   build_disorder(m.disorder, seed));
        const auto amps = walk.return_amplitudes(source_state(m), m.steps);
        UnitResult r;
        json probs = json::array();
        for (std::size_t n = 0; n < amps.size(); ++n) {
            r.rows += row(point, seed, u.realization,
                          {std::to_string(n), format_number(amps[n].real()),
                           format_number(amps[n].imag()), format_number(std::norm(amps[n]))});
            probs.push_back(std::norm(amps[n]));
        }
        r.data["probability"] = probs;
        return r;
    };
    p.summarize = [&m](const std::vector<GridPoint>& grid, const std::vector<Unit>& units,
                       const std::vector<json>& data, json& out) {
        for (std::size_t g = 0; g < grid.size(); ++g) {
            std::vector<double> mean(static_cast<std::size_t>(m.steps) + 1, 0.0);
            int count = 0;
            for (std::size_t k = 0; k < units.size(); ++k) {
                if (units[k].grid != static_cast<int>(g)) continue;
                ++count;
                for (std::size_t n = 0; n < mean.size(); ++n) mean[n] += data[k]["probability"][n].get<double>();
            }
            for (double& v : mean) v /= count;
            json e = grid_json(grid[g]);
            e["mean_return_probability"] = mean;
            out["grid"].push_back(e);
        }
    };
    return p;
}

Plan wiener_plan(const Manifest& m) {
    Plan p;
    p.title = "Cesaro means (1/(n+1)) sum_{k<=n} |<phi|U^k|phi>|^2 on a finite volume";
    p.realizations = m.realizations;
    p.columns = {{"n", "time step"},
                 {"probability", "|<phi|U^n|phi>|^2"},
                 {"cesaro", "Cesaro mean up to n"}};
    p.compute = [&m](const GridPoint& point, const Unit& u, std::uint64_t seed) {
        const tree::Alphabet alphabet(m.q);
        const walk::FiniteVolume fv =
            walk::build_finite_volume(build_coin(m, point), boundary_decoration(m),
                                      build_disorder(m.disorder, seed), parse_center(m), m.L, alphabet);
        const walk::BasisState source = source_state(m);
        const auto series = spectral::return_amplitudes(fv, source, m.steps);
        const auto cesaro = spectral::wiener_average(series, m.steps);
        UnitResult r;
        for (int n = 0; n <= m.steps; ++n) {
            const auto k = static_cast<std::size_t>(n);
            r.rows += row(point, seed, u.realization,
                          {std::to_string(n), format_number(std::norm(series.values[k])),
                           format_number(cesaro[k])});
        }
        double limit = kNaN, prediction = kNaN;
        if (fv.dimension() <= block_dimension_cap()) {
            const auto summary = spectral::diagonalize_block(fv.restricted_dense());
            walk::Vector phi = walk::Vector::Zero(static_cast<Eigen::Index>(fv.dimension()));
            phi[fv.find(source)] = 1.0;
            limit = summary.point_mass_square_sum(phi);
            prediction = summary.cesaro_prediction(phi, m.steps);
        }
        r.data = {{"cesaro", cesaro.back()},
                  {"limit", null_if_nan(limit)},
                  {"prediction", null_if_nan(prediction)},
                  {"dimension", fv.dimension()},
                  {"invariance_residual", fv.invariance_residual}};
        return r;
    };
    p.summarize = [](const std::vector<GridPoint>& grid, const std::vector<Unit>& units,
                     const std::vector<json>& data, json& out) {
        for (std::size_t k = 0; k < units.size(); ++k) {
            json e = grid_json(grid[static_cast<std::size_t>(units[k].grid)]);
            e["realization"] = units[k].realization;
            e.update(data[k]);
            out["units"].push_back(e);
        }
    };
    return p;
}

spectral::FractionalMomentConfig moment_config(const Manifest& m, const GridPoint& point) {
    const tree::Alphabet alphabet(m.q);
    spectral::FractionalMomentConfig c;
    c.coin = build_coin(m, point);
    c.boundary_phases = boundary_decoration(m);
    c.q = m.q;
    c.L = m.L;
    c.center = parse_center(m);
    c.s = m.s;
    c.z = spectral::default_z_grid(m.z_count, m.z_radius);
    c.pairs = spectral::shift_chain_pairs(alphabet, c.center, m.L);
    c.realizations = m.realizations;
    c.seed = m.seed;
    c.disorder = build_disorder(random_disorder(m), m.seed);
    return c;
}

Plan green_moments_plan(const Manifest& m) {
    Plan p;
    p.title = "fractional moments |G(x, y; z)|^s on a finite volume";
    p.realizations = m.realizations;
    p.columns = {{"pair", "index of the (x, y) pair"},
                 {"distance", "d(x, y)"},
                 {"z_index", "index on the z grid"},
                 {"z_re", "real part of z"},
                 {"z_im", "imaginary part of z"},
                 {"value", "|G(x, y; z)|^s, empty on a conditioning failure"}};
    p.compute = [&m](const GridPoint& point, const Unit& u, std::uint64_t seed) {
        const auto config = moment_config(m, point);
        const auto sample = spectral::fractional_moment_sample(config, u.realization);
        UnitResult r;
        const std::size_t nz = config.z.size();
        for (std::size_t pi = 0; pi < config.pairs.size(); ++pi) {
            for (std::size_t k = 0; k < nz; ++k) {
                r.rows += row(point, seed, u.realization,
                              {std::to_string(pi), std::to_string(config.pairs[pi].distance),
                               std::to_string(k), format_number(config.z[k].real()),
                               format_number(config.z[k].imag()),
                               format_number(sample.values[pi * nz + k])});
            }
        }
        json values = json::array();
        for (double v : sample.values) values.push_back(null_if_nan(v));
        r.data = {{"values", values}, {"failures", sample.failures}};
        return r;
    };
    p.summarize = [&m](const std::vector<GridPoint>& grid, const std::vector<Unit>& units,
                       const std::vector<json>& data, json& out) {
        int failures = 0;
        for (std::size_t g = 0; g < grid.size(); ++g) {
            const auto config = moment_config(m, grid[g]);
            std::vector<spectral::RealizationSample> samples;
            for (std::size_t k = 0; k < units.size(); ++k) {
                if (units[k].grid != static_cast<int>(g)) continue;
                spectral::RealizationSample s;
                s.index = units[k].realization;
                s.seed = unit_seed(m, s.index);
                s.failures = data[k]["failures"].get<int>();
                for (const json& v : data[k]["values"]) s.values.push_back(v.is_null() ? kNaN : v.get<double>());
                samples.push_back(std::move(s));
            }
            const auto est = spectral::aggregate_fractional_moments(config, std::move(samples));
            failures += est.conditioning_failures;
            json e = grid_json(grid[g]);
            e["slope"] = est.fit.slope;
            e["intercept"] = est.fit.intercept;
            e["r2"] = est.fit.r2;
            e["slope_se"] = est.fit.slope_se;
            e["upper95"] = est.fit.upper95();
            e["decay_significant"] = est.fit.upper95() < 0.0;
            e["conditioning_failures"] = est.conditioning_failures;
            json pairs = json::array();
            for (std::size_t pi = 0; pi < est.pairs.size(); ++pi) {
                pairs.push_back({{"distance", est.pairs[pi].distance},
                                 {"mean", est.pair_mean[pi]},
                                 {"standard_error", est.pair_standard_error[pi]}});
            }
            e["pairs"] = pairs;
            out["grid"].push_back(e);
        }
        out["conditioning_failures"] = failures;
    };
    return p;
}

transfer::LyapunovEstimate lyapunov_for(const Manifest& m, double r) {
    transfer::LyapunovConfig c;
    c.r = r;
    c.z = std::polar(1.0, m.z_phase);
    c.distribution = build_disorder(random_disorder(m), m.seed);
    c.matrices = m.matrices;
    c.seed = m.seed;
    c.chains = m.chains;
    return transfer::lyapunov(c);
}

Plan lyapunov_plan(const Manifest& m) {
    if (m.q != 3 || m.coin.family != "q3_localizing" || m.coin.index != 1) {
        throw ManifestError("coin: the lyapunov kind needs q = 3 and family q3_localizing, index 1");
    }
    Plan p;
    p.title = "Lyapunov exponents of the q = 3 transfer matrices";
    p.columns = {{"gamma", "estimated top Lyapunov exponent"},
                 {"stderr", "batched-means standard error"},
                 {"matrices", "number of matrices multiplied"},
                 {"positive", "1 if gamma exceeds five standard errors"}};
    p.compute = [&m](const GridPoint& point, const Unit& u, std::uint64_t) {
        const auto est = lyapunov_for(m, grid_value(point, "r", 0.5));
        UnitResult r;
        r.rows = row(point, m.seed, u.realization,
                     {format_number(est.gamma), format_number(est.standard_error),
                      std::to_string(est.matrices), est.positive() ? "1" : "0"});
        r.data = {{"gamma", est.gamma}, {"stderr", est.standard_error}, {"positive", est.positive()}};
        return r;
    };
    return p;
}

Plan diagram_q3_plan(const Manifest& m) {
    if (m.q != 3) throw ManifestError("q: diagram_q3 needs q = 3");
    Plan p;
    p.title = "q = 3 coin diagram: shape class and Lyapunov exponent";
    p.columns = {{"shape", "shape class of the coin"},
                 {"permutation_set", "permutation list containing the coin, if any"},
                 {"gamma", "top Lyapunov exponent (localizing family 1 with 0 < r < 1)"},
                 {"stderr", "standard error of gamma"}};
    p.compute = [&m](const GridPoint& point, const Unit& u, std::uint64_t) {
        const coin::CoinMatrix c = build_coin(m, point);
        const coin::CoinClass cls = coin::classify_shape(c);
        const double r = grid_value(point, "r", 0.5);
        double gamma = kNaN, se = kNaN;
        if (m.coin.family == "q3_localizing" && m.coin.index == 1 && r > 0.0 && r < 1.0) {
            const auto est = lyapunov_for(m, r);
            gamma = est.gamma;
            se = est.standard_error;
        }
        UnitResult res;
        res.rows = row(point, m.seed, u.realization,
                       {coin::shape_tag_name(cls.tag), cls.permutation_set, format_number(gamma),
                        format_number(se)});
        res.data = {{"shape", coin::shape_tag_name(cls.tag)}, {"gamma", null_if_nan(gamma)}, {"stderr", null_if_nan(se)}};
        return res;
    };
    return p;
}

Plan diagram_q4_plan(const Manifest& m) {
    if (m.q != 4) throw ManifestError("q: diagram_q4 needs q = 4");
    Plan p;
    p.title = "q = 4 coin diagram: shape class, first possible return, block size";
    p.columns = {{"shape", "shape class of the coin"},
                 {"permutation_set", "permutation list containing the coin, if any"},
                 {"first_return", "smallest n <= steps with a possible return from an even vertex, -1 if none"},
                 {"max_block_dimension", "largest invariant block on a radius-2 ball, empty if not localizing"}};
    p.compute = [&m](const GridPoint& point, const Unit& u, std::uint64_t) {
        const coin::CoinMatrix c = build_coin(m, point);
        const coin::CoinClass cls = coin::classify_shape(c);
        const int first = paths::structural_returns(c, 0, m.steps).first_return();
        std::string block_dim;
        try {
            const tree::Alphabet alphabet(4);
            const tree::BallIndex ball(alphabet, tree::Word{}, 2);
            std::size_t dim = 0;
            for (const auto& b : walk::localizing_blocks(c, disorder::DisorderField::none(), ball)) {
                dim = std::max(dim, b.dimension());
            }
            block_dim = std::to_string(dim);
        } catch (const InputError&) {
        } catch (const NotLocalizingError&) {
        }
        UnitResult r;
        r.rows = row(point, m.seed, u.realization,
                     {coin::shape_tag_name(cls.tag), cls.permutation_set, std::to_string(first), block_dim});
        r.data = {{"shape", coin::shape_tag_name(cls.tag)}, {"first_return", first}};
        return r;
    };
    return p;
}

Plan blocks_plan(const Manifest& m) {
    Plan p;
    p.title = "finite invariant blocks of a localizing coin";
    p.realizations = m.realizations;
    p.columns = {{"block", "block index"},
                 {"anchor", "vertex carrying most basis vectors of the block"},
                 {"dimension", "block dimension"},
                 {"residual", "max |<out|U|in>| leaving the block"},
                 {"modulus_deviation", "max | |lambda| - 1 | of the block eigenvalues"}};
    p.compute = [&m](const GridPoint& point, const Unit& u, std::uint64_t seed) {
        const tree::Alphabet alphabet(m.q);
        const tree::BallIndex ball(alphabet, parse_center(m), m.radius);
        const auto blocks = walk::localizing_blocks(build_coin(m, point), build_disorder(m.disorder, seed), ball);
        UnitResult r;
        double worst = 0.0;
        std::size_t max_dim = 0;
        for (std::size_t b = 0; b < blocks.size(); ++b) {
            const auto s = spectral::diagonalize_block(blocks[b].restriction);
            worst = std::max(worst, blocks[b].residual);
            max_dim = std::max(max_dim, blocks[b].dimension());
            r.rows += row(point, seed, u.realization,
                          {std::to_string(b), tree::format_word(blocks[b].anchor, alphabet),
                           std::to_string(blocks[b].dimension()), format_number(blocks[b].residual),
                           format_number(s.modulus_deviation)});
        }
        r.data = {{"blocks", blocks.size()}, {"max_residual", worst}, {"max_dimension", max_dim}};
        return r;
    };
    p.summarize = [](const std::vector<GridPoint>& grid, const std::vector<Unit>& units,
                     const std::vector<json>& data, json& out) {
        for (std::size_t k = 0; k < units.size(); ++k) {
            json e = grid_json(grid[static_cast<std::size_t>(units[k].grid)]);
            e["realization"] = units[k].realization;
            e.update(data[k]);
            out["units"].push_back(e);
        }
    };
    return p;
}

tree::Word random_even_word(const tree::Alphabet& alphabet, std::uint64_t seed, int index) {
    const auto u = rng::uniform_pair(seed, static_cast<std::uint64_t>(index), 0);
    const int length = 2 * (1 + static_cast<int>(u[0] * 2.0));
    tree::Word w;
    int k = 1;
    while (static_cast<int>(w.length()) < length) {
        const double v = rng::uniform(seed, static_cast<std::uint64_t>(index), static_cast<std::uint64_t>(k++));
        w = tree::append(w, static_cast<tree::Letter>(v * alphabet.q()), alphabet);
    }
    return w;
}

Plan covariance_plan(const Manifest& m) {
    Plan p;
    p.title = "covariance of U_omega under even-length translations";
    p.realizations = m.realizations;
    p.columns = {{"translation", "even-length translating word z"},
                 {"residual", "max difference between U_omega at z y and U_{T_z omega} at y"},
                 {"compared", "number of matrix elements compared"},
                 {"covariant", "1 if the residual is at most 1e-14"}};
    p.compute = [&m](const GridPoint& point, const Unit& u, std::uint64_t seed) {
        const tree::Alphabet alphabet(m.q);
        const tree::BallIndex ball(alphabet, tree::Word{}, m.radius);
        const coin::CoinMatrix c = build_coin(m, point);
        const auto field = build_disorder(random_disorder(m), seed);
        UnitResult r;
        double worst = 0.0;
        for (int t = 0; t < m.translations; ++t) {
            const tree::Word z = random_even_word(alphabet, seed, t);
            const auto rep = walk::check_covariance(c, field, z, ball);
            worst = std::max(worst, rep.max_residual);
            r.rows += row(point, seed, u.realization,
                          {tree::format_word(z, alphabet), format_number(rep.max_residual),
                           std::to_string(rep.compared), rep.covariant ? "1" : "0"});
        }
        r.data = {{"max_residual", worst}};
        return r;
    };
    return p;
}

Plan paths_audit_plan(const Manifest& m) {
    if (m.q % 2 == 0) throw ManifestError("q: paths_audit needs odd q");
    if (2 * m.n_max > paths::kAuditCap) {
        throw CapacityError("paths.n_max: 2n is capped at " + std::to_string(paths::kAuditCap));
    }
    Plan p;
    p.title = "diagonal coin counts j of closed paths of length 2n (generic coin)";
    p.columns = {{"n", "half length"},
                 {"parity", "length parity of the starting vertex"},
                 {"j", "number of diagonal coin entries along the path"},
                 {"count", "number of closed (vertex, coin) paths"},
                 {"exceeds_n", "1 if j > n"}};
    p.compute = [&m](const GridPoint& point, const Unit& u, std::uint64_t) {
        UnitResult r;
        std::uint64_t violations = 0;
        int max_excess = std::numeric_limits<int>::min();
        for (int n = 1; n <= m.n_max; ++n) {
            for (int parity : m.parities) {
                const auto audit = paths::diagonal_count_audit(m.q, n, parity, false);
                violations += audit.violations;
                max_excess = std::max(max_excess, audit.max_diagonal - n);
                for (const auto& [j, count] : audit.histogram) {
                    r.rows += row(point, m.seed, u.realization,
                                  {std::to_string(n), std::to_string(parity), std::to_string(j),
                                   std::to_string(count), j > n ? "1" : "0"});
                }
            }
        }
        r.data = {{"violations", violations}, {"max_excess", max_excess}};
        return r;
    };
    return p;
}

Plan make_plan(const Manifest& m) {
    switch (m.kind) {
        case Kind::return_prob: return return_prob_plan(m);
        case Kind::wiener: return wiener_plan(m);
        case Kind::green_moments: return green_moments_plan(m);
        case Kind::lyapunov: return lyapunov_plan(m);
        case Kind::diagram_q3: return diagram_q3_plan(m);
        case Kind::diagram_q4: return diagram_q4_plan(m);
        case Kind::blocks: return blocks_plan(m);
        case Kind::covariance: return covariance_plan(m);
        case Kind::paths_audit: return paths_audit_plan(m);
    }
    throw ManifestError("kind: unsupported");
}

fs::path part_path(const fs::path& dir, const Unit& u) {
    return dir / "parts" / ("g" + std::to_string(u.grid) + "_r" + std::to_string(u.realization) + ".json");
}

std::string timestamp() {
    const std::time_t now = std::time(nullptr);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    return buf;
}

}  // namespace

RunResult run(const Manifest& manifest, const RunOptions& options) {
    const auto started = std::chrono::steady_clock::now();
    RunResult result;
    result.dir = !options.out.empty() ? options.out : fs::path(manifest.output_dir);
    if (result.dir.empty()) throw ManifestError("output_dir: missing (or pass --out)");
    if (options.threads > 0) omp_set_num_threads(options.threads);

    const Plan plan = make_plan(manifest);
    const std::vector<GridPoint> grid = grid_points(manifest.coin);
    std::vector<Unit> units;
    for (int g = 0; g < static_cast<int>(grid.size()); ++g) {
        for (int r = 0; r < plan.realizations; ++r) units.push_back({g, r});
    }
    result.units = static_cast<int>(units.size());

    fs::create_directories(result.dir);
    if (!options.resume) {
        fs::remove_all(result.dir / "parts");
        fs::remove(result.dir / "data.csv");
        fs::remove(result.dir / "summary.json");
    }
    fs::create_directories(result.dir / "parts");
    write_atomic(result.dir / "manifest.json", manifest.raw.dump(2) + "\n");

    std::vector<json> parts(units.size());
    std::vector<std::size_t> pending;
    for (std::size_t k = 0; k < units.size(); ++k) {
        const fs::path path = part_path(result.dir, units[k]);
        if (options.resume && fs::exists(path)) {
            try {
                parts[k] = json::parse(read_file(path));
                ++result.reused;
                continue;
            } catch (const json::exception&) {
                // A damaged part is recomputed.
            }
        }
        pending.push_back(k);
    }
    if (options.stop_after && static_cast<int>(pending.size()) > *options.stop_after) {
        pending.resize(static_cast<std::size_t>(std::max(0, *options.stop_after)));
        result.complete = false;
    }

    std::exception_ptr error;
#pragma omp parallel for schedule(dynamic)
    for (std::size_t i = 0; i < pending.size(); ++i) {
        const std::size_t k = pending[i];
        try {
            const Unit& u = units[k];
            const std::uint64_t seed = unit_seed(manifest, u.realization);
            UnitResult r = plan.compute(grid[static_cast<std::size_t>(u.grid)], u, seed);
            json part = {{"grid", u.grid}, {"realization", u.realization}, {"seed", seed},
                         {"rows", r.rows}, {"data", r.data}};
            write_atomic(part_path(result.dir, u), part.dump() + "\n");
            parts[k] = std::move(part);
        } catch (...) {
#pragma omp critical
            if (!error) error = std::current_exception();
        }
    }
    if (error) std::rethrow_exception(error);
    result.computed = static_cast<int>(pending.size());
    if (!result.complete) return result;

    std::vector<Column> columns;
    for (const auto& [name, values] : grid.front()) columns.push_back({name, "coin parameter"});
    columns.push_back({"seed", "disorder seed of the realization"});
    columns.push_back({"realization", "realization index"});
    columns.insert(columns.end(), plan.columns.begin(), plan.columns.end());
    CsvTable table(columns, kind_name(manifest.kind) + ": " + plan.title);
    std::vector<json> data;
    for (const json& part : parts) {
        table.add_serialized(part["rows"].get<std::string>());
        data.push_back(part["data"]);
    }
    write_atomic(result.dir / "data.csv", table.text());

    json summary = {{"kind", kind_name(manifest.kind)}, {"complete", true},
                    {"unit_count", units.size()}, {"rows", table.row_count()}};
    if (plan.summarize) {
        plan.summarize(grid, units, data, summary);
    } else {
        for (std::size_t k = 0; k < units.size(); ++k) {
            json e = grid_json(grid[static_cast<std::size_t>(units[k].grid)]);
            e.update(data[k]);
            summary["grid"].push_back(e);
        }
    }
    write_atomic(result.dir / "summary.json", summary.dump(2) + "\n");
    result.summary = summary;

    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    const json metadata = {{"finished_at", timestamp()}, {"elapsed_seconds", elapsed},
                           {"threads", omp_get_max_threads()}, {"computed_units", result.computed},
                           {"reused_units", result.reused}};
    write_atomic(result.dir / "metadata.json", metadata.dump(2) + "\n");

    if (manifest.kind == Kind::green_moments &&
        summary["conditioning_failures"].get<int>() > manifest.max_conditioning_failures) {
        throw FailureBudgetError(std::to_string(summary["conditioning_failures"].get<int>()) +
                                 " conditioning failures exceed the budget of " +
                                 std::to_string(manifest.max_conditioning_failures));
    }
    if (manifest.kind == Kind::paths_audit) {
        for (const json& d : data) {
            if (d["violations"].get<std::uint64_t>() > 0) {
                throw FailureBudgetError(std::to_string(d["violations"].get<std::uint64_t>()) +
                                         " closed paths have more than n diagonal coin entries");
            }
        }
    }
    return result;
}

int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const InputError*>(&e)) return 2;
    if (dynamic_cast<const CapacityError*>(&e)) return 3;
    if (dynamic_cast<const NumericalError*>(&e) || dynamic_cast<const ConditioningError*>(&e) ||
        dynamic_cast<const HorizonError*>(&e) || dynamic_cast<const NotLocalizingError*>(&e) ||
        dynamic_cast<const SingularParameterError*>(&e)) {
        return 4;
    }
    return 1;
}

}  // namespace arborwalk::cli
