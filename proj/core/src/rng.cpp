#include "qsurf/rng.hpp"

namespace qsurf::rng {

namespace {

double normal_pdf(double z) {
    return std::exp(-0.5 * z * z) / std::sqrt(2.0 * 3.14159265358979323846);
}

double normal_cdf(double z) {
    return 0.5 * std::erfc(-z / std::sqrt(2.0));
}

}  // namespace

TruncatedGaussianMoments truncated_gaussian_moments(double mean, double sigma, double lo) {
    const double alpha = (lo - mean) / sigma;
    const double tail = 1.0 - normal_cdf(alpha);
    const double lambda = normal_pdf(alpha) / tail;
    TruncatedGaussianMoments m;
    m.mean = mean + sigma * lambda;
    // E[X^2 | X > lo] for X ~ N(mean, sigma)
    m.second_moment = mean * mean + sigma * sigma + sigma * (mean + lo) * lambda;
    return m;
}

}  // namespace qsurf::rng
