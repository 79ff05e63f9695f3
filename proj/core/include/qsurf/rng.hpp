#pragma once

#include <cmath>
#include <cstdint>

// Hand-rolled generator and samplers so that seeded runs are bitwise
// reproducible across platforms and standard library versions.  Substreams
// are derived from a master seed by hashing a stream id, which keeps
// per-trial sampling independent of scheduling order.

namespace qsurf::rng {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

class Stream {
public:
    Stream() : state_(0x853c49e6748fea9bULL) {}
    explicit Stream(std::uint64_t seed) : state_(seed) {}

    // Deterministic substream: same (seed, id) pair always yields the same
    // stream regardless of how many draws other streams made.
    static Stream substream(std::uint64_t master_seed, std::uint64_t stream_id) {
        std::uint64_t s = master_seed ^ (0x2545f4914f6cdd1dULL * (stream_id + 1));
        // burn-in decorrelates nearby ids
        splitmix64(s);
        splitmix64(s);
        return Stream(s);
    }

    std::uint64_t next_u64() { return splitmix64(state_); }

    // Uniform in [0, 1).
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Box-Muller; one value per call, the pair partner is discarded to keep
    // draw counts position-independent.
    double gaussian(double mean, double sigma) {
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        return mean + sigma * r * std::cos(2.0 * 3.14159265358979323846 * u2);
    }

    // Gaussian truncated below at `lo` by rejection.
    double gaussian_truncated(double mean, double sigma, double lo) {
        for (;;) {
            const double d = gaussian(mean, sigma);
            if (d >= lo) return d;
        }
    }

    double log_uniform(double lo, double hi) {
        return std::exp(uniform(std::log(lo), std::log(hi)));
    }

    // Inversion by sequential search for small means, split into halves for
    // large ones.  Exact distribution, no float-table dependence.
    std::uint64_t poisson(double mean) {
        if (mean <= 0.0) return 0;
        if (mean > 64.0) {
            // sum of two independent halves keeps the search loop short
            const double half = mean / 2.0;
            return poisson(half) + poisson(half);
        }
        const double limit = std::exp(-mean);
        double prod = uniform();
        std::uint64_t n = 0;
        while (prod > limit) {
            prod *= uniform();
            ++n;
        }
        return n;
    }

private:
    std::uint64_t state_;
};

// Mean and second moment of a Gaussian(mean, sigma) truncated below at lo.
struct TruncatedGaussianMoments {
    double mean;
    double second_moment;
};

TruncatedGaussianMoments truncated_gaussian_moments(double mean, double sigma, double lo);

}  // namespace qsurf::rng
