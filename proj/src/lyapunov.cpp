#include "arborwalk/lyapunov.hpp"

#include <cmath>
#include <exception>

#include "arborwalk/errors.hpp"
#include "arborwalk/rng.hpp"
#include "arborwalk/transfer.hpp"

namespace arborwalk::transfer {

namespace {

constexpr int kRenormalizeEvery = 8;

class PhaseStream {
public:
    PhaseStream(const LyapunovConfig& config, std::uint64_t chain_seed)
        : config_(config), seed_(chain_seed) {}

    Matrix2 next() {
        const std::uint64_t n = counter_++;
        if (config_.fixed_phases) {
            const auto& p = *config_.fixed_phases;
            return transfer_matrix(config_.z, p[0], p[1], p[2], config_.r);
        }
        std::array<double, 6> omega{};
        for (std::uint64_t k = 0; k < 3; ++k) {
            const auto u = rng::uniform_pair(seed_, n, k);
            omega[2 * k] = config_.distribution.quantile(u[0]);
            omega[2 * k + 1] = config_.distribution.quantile(u[1]);
        }
        const auto abc = block_phases(omega);
        return transfer_matrix(config_.z, abc[0], abc[1], abc[2], config_.r);
    }

private:
    const LyapunovConfig& config_;
    std::uint64_t seed_;
    std::uint64_t counter_ = 0;
};

// Applies steps matrices, returning the accumulated log growth.
long double advance(PhaseStream& stream, Eigen::Vector2cd& v, std::int64_t steps) {
    long double log_growth = 0.0L;
    for (std::int64_t s = 1; s <= steps; ++s) {
        v = stream.next() * v;
        if (s % kRenormalizeEvery == 0 || s == steps) {
            const double n = v.norm();
            if (!(n > 0.0) || !std::isfinite(n)) {
                throw NumericalError("transfer product lost its norm");
            }
            log_growth += std::log(static_cast<long double>(n));
            v /= n;
        }
    }
    return log_growth;
}

}  // namespace

LyapunovEstimate lyapunov(const LyapunovConfig& config) {
    if (!(config.r > 0.0 && config.r < 1.0)) throw InputError("r must lie in (0, 1)");
    if (config.matrices < 1000) throw InputError("Lyapunov estimate needs at least 1000 matrices");
    if (config.chains < 1 || config.batches_per_chain < 1) {
        throw InputError("chains and batches must be positive");
    }
    const std::int64_t per_batch =
        config.matrices / (static_cast<std::int64_t>(config.chains) * config.batches_per_chain);
    if (per_batch < kRenormalizeEvery) {
        throw InputError("too many batches for the number of matrices");
    }
    const int batches = config.chains * config.batches_per_chain;
    std::vector<double> rates(static_cast<std::size_t>(batches));
    std::exception_ptr error;
#pragma omp parallel for schedule(static)
    for (int c = 0; c < config.chains; ++c) {
        try {
            PhaseStream stream(config, rng::derive_seed(config.seed, static_cast<std::uint64_t>(c)));
            Eigen::Vector2cd v(1.0, 0.0);
            advance(stream, v, config.burn_in);
            for (int b = 0; b < config.batches_per_chain; ++b) {
                const long double g = advance(stream, v, per_batch);
                rates[static_cast<std::size_t>(c * config.batches_per_chain + b)] =
                    static_cast<double>(g / static_cast<long double>(per_batch));
            }
        } catch (...) {
#pragma omp critical
            if (!error) error = std::current_exception();
        }
    }
    if (error) std::rethrow_exception(error);

    LyapunovEstimate out;
    out.matrices = per_batch * batches;
    out.batch_rates = rates;
    long double sum = 0.0L;
    for (double x : rates) sum += x;
    out.gamma = static_cast<double>(sum / batches);
    if (batches > 1) {
        long double ss = 0.0L;
        for (double x : rates) ss += (x - out.gamma) * (x - out.gamma);
        out.standard_error = std::sqrt(static_cast<double>(ss / (batches - 1)) / batches);
    }
    return out;
}

}  // namespace arborwalk::transfer
