#include "arborwalk/fractional_moments.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <map>
#include <numbers>

#include "arborwalk/errors.hpp"
#include "arborwalk/finite_volume.hpp"
#include "arborwalk/green.hpp"
#include "arborwalk/rng.hpp"

namespace arborwalk::spectral {

std::vector<walk::Complex> default_z_grid(int count, double radius) {
    std::vector<walk::Complex> z;
    for (int k = 0; k < count; ++k) {
        z.push_back(std::polar(radius, 2.0 * std::numbers::pi * k / count));
    }
    return z;
}

std::vector<GreenPair> shift_chain_pairs(const tree::Alphabet& alphabet, const tree::Word& center,
                                         int L) {
    const walk::LocalWalk shift(alphabet, disorder::SiteCoinField(coin::identity_coin(alphabet.q())));
    const walk::BasisState source{center, 0};
    std::vector<GreenPair> pairs;
    walk::BasisState x = source;
    for (int k = 1; k <= L - 2; ++k) {
        x = {shift.row_source(x.x, x.tau), x.tau};
        pairs.push_back({x, source, tree::distance(x.x, source.x)});
    }
    return pairs;
}

RealizationSample fractional_moment_sample(const FractionalMomentConfig& config, int index) {
    const tree::Alphabet alphabet(config.q);
    RealizationSample out;
    out.index = index;
    out.seed = rng::derive_seed(config.seed, static_cast<std::uint64_t>(index));
    const walk::FiniteVolume fv =
        walk::build_finite_volume(config.coin, config.boundary_phases,
                                  config.disorder.reseeded(out.seed), config.center, config.L, alphabet);
    const walk::SparseMatrix u = fv.restricted_sparse();

    // Group pairs by source so each factorisation serves every target.
    std::map<walk::BasisState, std::vector<std::size_t>> by_source;
    for (std::size_t p = 0; p < config.pairs.size(); ++p) {
        by_source[config.pairs[p].source].push_back(p);
    }
    const std::size_t nz = config.z.size();
    out.values.assign(config.pairs.size() * nz, std::numeric_limits<double>::quiet_NaN());
    for (std::size_t k = 0; k < nz; ++k) {
        try {
            const walk::SparseGreen solver(u, config.z[k]);
            for (const auto& [source, members] : by_source) {
                const std::int64_t col = fv.find(source);
                if (col < 0) throw InputError("Green source is not in the finite-volume subspace");
                const walk::Vector g = solver.column(static_cast<Eigen::Index>(col));
                for (std::size_t p : members) {
                    const std::int64_t row = fv.find(config.pairs[p].target);
                    if (row < 0) throw InputError("Green target is not in the finite-volume subspace");
                    out.values[p * nz + k] = std::pow(std::abs(g[row]), config.s);
                }
            }
        } catch (const ConditioningError&) {
            ++out.failures;
        } catch (const NumericalError&) {
            ++out.failures;
        }
    }
    return out;
}

namespace {

double mean_of(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

double standard_error_of(const std::vector<double>& v) {
    if (v.size() < 2) return 0.0;
    const double m = mean_of(v);
    double ss = 0.0;
    for (double x : v) ss += (x - m) * (x - m);
    return std::sqrt(ss / static_cast<double>(v.size() - 1) / static_cast<double>(v.size()));
}

}  // namespace

FractionalMomentEstimate aggregate_fractional_moments(const FractionalMomentConfig& config,
                                                      std::vector<RealizationSample> samples) {
    std::sort(samples.begin(), samples.end(),
              [](const RealizationSample& a, const RealizationSample& b) { return a.index < b.index; });
    FractionalMomentEstimate est;
    est.s = config.s;
    est.z = config.z;
    est.pairs = config.pairs;
    est.realizations = static_cast<int>(samples.size());
    const std::size_t np = config.pairs.size();
    const std::size_t nz = config.z.size();
    est.mean.assign(np, std::vector<double>(nz, 0.0));
    est.standard_error.assign(np, std::vector<double>(nz, 0.0));
    est.pair_mean.assign(np, 0.0);
    est.pair_standard_error.assign(np, 0.0);

    // per_pair[p][r]: z-average of realization r.
    std::vector<std::vector<double>> per_pair(np);
    for (const RealizationSample& r : samples) {
        est.conditioning_failures += r.failures;
        for (std::size_t p = 0; p < np; ++p) {
            double sum = 0.0;
            int count = 0;
            for (std::size_t k = 0; k < nz; ++k) {
                const double v = r.values[p * nz + k];
                if (!std::isnan(v)) {
                    sum += v;
                    ++count;
                }
            }
            per_pair[p].push_back(count > 0 ? sum / count : std::numeric_limits<double>::quiet_NaN());
        }
    }
    for (std::size_t p = 0; p < np; ++p) {
        for (std::size_t k = 0; k < nz; ++k) {
            std::vector<double> column;
            for (const RealizationSample& r : samples) {
                const double v = r.values[p * nz + k];
                if (!std::isnan(v)) column.push_back(v);
            }
            est.mean[p][k] = mean_of(column);
            est.standard_error[p][k] = standard_error_of(column);
        }
        std::vector<double> clean;
        for (double v : per_pair[p]) {
            if (!std::isnan(v)) clean.push_back(v);
        }
        per_pair[p] = clean;
        est.pair_mean[p] = mean_of(clean);
        est.pair_standard_error[p] = standard_error_of(clean);
    }

    // Least squares of log pair_mean against distance.
    std::vector<std::size_t> used;
    for (std::size_t p = 0; p < np; ++p) {
        if (est.pair_mean[p] > 0.0 && per_pair[p].size() == samples.size()) used.push_back(p);
    }
    DecayFit& fit = est.fit;
    fit.points = static_cast<int>(used.size());
    if (used.size() < 2) return est;
    double dbar = 0.0, ybar = 0.0;
    for (std::size_t p : used) {
        dbar += config.pairs[p].distance;
        ybar += std::log(est.pair_mean[p]);
    }
    dbar /= static_cast<double>(used.size());
    ybar /= static_cast<double>(used.size());
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t p : used) {
        const double dx = config.pairs[p].distance - dbar;
        const double dy = std::log(est.pair_mean[p]) - ybar;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (sxx == 0.0) return est;
    fit.slope = sxy / sxx;
    fit.intercept = ybar - fit.slope * dbar;
    const double ssr = std::max(0.0, syy - fit.slope * sxy);
    fit.r2 = syy > 0.0 ? 1.0 - ssr / syy : 1.0;
    if (used.size() > 2) {
        fit.regression_se = std::sqrt(ssr / static_cast<double>(used.size() - 2) / sxx);
    }
    // Delta method over realizations: the slope is linear in log m_p, and
    // d log m_p = d m_p / m_p, so each realization contributes
    // sum_p w_p x_{p,r} / m_p with w_p = (d_p - dbar) / sxx.
    std::vector<double> y(samples.size(), 0.0);
    for (std::size_t p : used) {
        const double w = (config.pairs[p].distance - dbar) / sxx / est.pair_mean[p];
        for (std::size_t r = 0; r < samples.size(); ++r) {
            y[r] += w * per_pair[p][r];
        }
    }
    fit.monte_carlo_se = standard_error_of(y);
    fit.slope_se = std::max(fit.regression_se, fit.monte_carlo_se);
    return est;
}

FractionalMomentEstimate fractional_moments(const FractionalMomentConfig& config) {
    if (!(config.s > 0.0 && config.s < 1.0)) {
        throw InputError("fractional moment exponent s must lie in (0, 1)");
    }
    if (config.realizations < 1) {
        throw InputError("at least one realization is required");
    }
    for (const walk::Complex z : config.z) {
        walk::check_off_circle(z);
    }
    std::vector<RealizationSample> samples(static_cast<std::size_t>(config.realizations));
    std::exception_ptr error;
#pragma omp parallel for schedule(dynamic)
    for (int r = 0; r < config.realizations; ++r) {
        try {
            samples[static_cast<std::size_t>(r)] = fractional_moment_sample(config, r);
        } catch (...) {
#pragma omp critical
            if (!error) error = std::current_exception();
        }
    }
    if (error) {
        std::rethrow_exception(error);
    }
    return aggregate_fractional_moments(config, std::move(samples));
}

}  // namespace arborwalk::spectral
