#include "qsurf/sle.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "qsurf/errors.hpp"
#include "qsurf/rng.hpp"

namespace qsurf::sle {

void QStatistics::validate() const {
    if (!(median_q > 0.0)) throw ValidationError("median Q must be > 0");
    if (!(std_q >= 0.0)) throw ValidationError("Q standard deviation must be >= 0");
}

double predict_q(const std::vector<double>& participations, const std::vector<double>& tangents) {
    if (participations.size() != tangents.size() || participations.empty()) {
        throw ValidationError("participation/tangent length mismatch");
    }
    double inv_q = 0.0;
    for (std::size_t i = 0; i < participations.size(); ++i) {
        if (!(participations[i] > 0.0) || !(tangents[i] > 0.0)) {
            throw ValidationError("predict_q needs positive participations and tangents");
        }
        inv_q += participations[i] * tangents[i];
    }
    if (inv_q == 0.0) throw SolverError("zero loss denominator");
    return 1.0 / inv_q;
}

namespace {

double percentile(std::vector<double> v, double p) {
    std::sort(v.begin(), v.end());
    const double idx = p * (v.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(idx);
    const std::size_t hi = std::min(lo + 1, v.size() - 1);
    const double f = idx - lo;
    return (1.0 - f) * v[lo] + f * v[hi];
}

}  // namespace

LossTangentEstimate extract_tangents(const std::vector<std::vector<double>>& P,
                                     const std::vector<QStatistics>& stats,
                                     const ExtractOptions& options,
                                     const std::vector<std::string>& element_names) {
    const int n = static_cast<int>(P.size());
    if (n == 0) throw ValidationError("empty participation matrix");
    const int m = static_cast<int>(P.front().size());
    if (static_cast<int>(stats.size()) != n) {
        throw ValidationError("participation rows and Q statistics count differ");
    }
    if (static_cast<int>(element_names.size()) != m) {
        throw ValidationError("element name count does not match participation columns");
    }
    if (options.n_samples < 1) throw ValidationError("n_samples must be >= 1");
    for (const auto& row : P) {
        if (static_cast<int>(row.size()) != m) throw ValidationError("ragged participation matrix");
    }
    for (const auto& s : stats) s.validate();

    Eigen::MatrixXd A(n, m);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < m; ++j) A(i, j) = P[i][j];
    }

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    const double cond = sv(sv.size() - 1) > 0.0 ? sv(0) / sv(sv.size() - 1)
                                                : std::numeric_limits<double>::infinity();
    if (!(sv(sv.size() - 1) > 0.0) || cond > 1e12) {
        throw SolverError("singular participation matrix (condition number " +
                          std::to_string(cond) + ")");
    }

    // optional row weights: var(1/Q) ~ std_q / median^2
    Eigen::VectorXd wts = Eigen::VectorXd::Ones(n);
    if (options.weighted) {
        for (int i = 0; i < n; ++i) {
            const double sd_y = stats[i].std_q / (stats[i].median_q * stats[i].median_q);
            wts[i] = sd_y > 0.0 ? 1.0 / sd_y : 1.0;
        }
    }
    Eigen::MatrixXd Aw = wts.asDiagonal() * A;
    const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(Aw);

    LossTangentEstimate est;
    est.elements = element_names;
    est.condition_number = cond;
    est.mode = options.mode;
    est.seed = options.seed;
    est.n_samples = options.n_samples;
    est.samples.reserve(options.n_samples);

    rng::Stream stream = rng::Stream::substream(options.seed, 0x51e);
    Eigen::VectorXd y(n);
    long rejected = 0;
    for (int s = 0; s < options.n_samples; ++s) {
        for (int i = 0; i < n; ++i) {
            double q = 0.0;
            int guard = 0;
            do {
                q = stream.gaussian(stats[i].median_q, stats[i].std_q);
                if (++guard > 10000) {
                    throw SolverError("all Q samples rejected by the Q > 0 truncation");
                }
            } while (!(q > 0.0));
            if (guard > 1) rejected += guard - 1;
            y[i] = wts[i] / q;
        }
        Eigen::VectorXd t = qr.solve(y);
        if (options.mode == ExtractMode::NonNegative) {
            // coordinate projection: negative components clipped to zero
            for (int j = 0; j < m; ++j) t[j] = std::max(t[j], 0.0);
        }
        est.samples.emplace_back(t.data(), t.data() + m);
    }
    (void)rejected;

    est.central.resize(m);
    est.ci68.resize(m);
    for (int j = 0; j < m; ++j) {
        double mean = 0.0;
        std::vector<double> col(options.n_samples);
        for (int s = 0; s < options.n_samples; ++s) {
            col[s] = est.samples[s][j];
            mean += col[s];
        }
        est.central[j] = mean / options.n_samples;
        est.ci68[j] = 0.5 * (percentile(col, 0.84) - percentile(col, 0.16));
    }
    return est;
}

std::vector<ReportRow> prediction_report(const std::vector<std::vector<double>>& P,
                                         const std::vector<QStatistics>& measured,
                                         const LossTangentEstimate& estimate) {
    if (measured.empty()) throw ValidationError("empty measured statistics");
    if (P.size() != measured.size()) {
        throw ValidationError("participation rows and measured qubit count differ");
    }
    const std::size_t m = estimate.central.size();
    for (const auto& row : P) {
        if (row.size() != m) throw ValidationError("participation row does not match estimate size");
    }

    std::vector<ReportRow> out;
    for (std::size_t i = 0; i < P.size(); ++i) {
        measured[i].validate();
        ReportRow r;
        r.qubit = measured[i].qubit;
        r.design = measured[i].design;
        r.process = measured[i].process;

        double inv_q = 0.0;
        for (std::size_t j = 0; j < m; ++j) inv_q += P[i][j] * estimate.central[j];
        if (!(inv_q > 0.0)) throw SolverError("non-positive predicted loss for qubit " + r.qubit);
        r.q_predicted = 1.0 / inv_q;

        // propagate the tangent sample cloud through the forward model
        if (!estimate.samples.empty()) {
            std::vector<double> qs;
            qs.reserve(estimate.samples.size());
            for (const auto& t : estimate.samples) {
                double s = 0.0;
                for (std::size_t j = 0; j < m; ++j) s += P[i][j] * t[j];
                if (s > 0.0) qs.push_back(1.0 / s);
            }
            if (qs.size() > 2) {
                std::sort(qs.begin(), qs.end());
                const double lo = qs[static_cast<std::size_t>(0.16 * (qs.size() - 1))];
                const double hi = qs[static_cast<std::size_t>(0.84 * (qs.size() - 1))];
                r.q_pred_ci = 0.5 * (hi - lo);
            }
        }

        r.q_measured = measured[i].median_q;
        // standard error of the median of a normal sample
        r.q_meas_ci = measured[i].count > 1
                          ? 1.2533 * measured[i].std_q / std::sqrt(static_cast<double>(measured[i].count))
                          : measured[i].std_q;
        r.ratio = r.q_predicted / r.q_measured;
        out.push_back(r);
    }
    return out;
}

}  // namespace qsurf::sle
