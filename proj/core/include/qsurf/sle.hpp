#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qsurf/participation.hpp"

namespace qsurf::sle {

/// Summary statistics of one qubit's quality-factor spectrum.
struct QStatistics {
    double median_q = 0.0;
    double std_q = 0.0;
    int count = 0;
    double f_band_GHz = 0.0;
    std::string qubit;
    std::string design;
    std::string process;

    void validate() const;
};

/// Forward prediction Q = 1 / sum_i p_i tan(delta_i).
double predict_q(const std::vector<double>& participations,
                 const std::vector<double>& tangents);

enum class ExtractMode { Unconstrained, NonNegative };

struct ExtractOptions {
    int n_samples = 10000;
    std::uint64_t seed = 1;
    ExtractMode mode = ExtractMode::Unconstrained;
    bool weighted = false;  // weight rows by 1/var(1/Q)
};

/// Loss tangents with 68% confidence half-widths from Monte Carlo resampled
/// least squares on [1/Q] = [P][tan delta].
struct LossTangentEstimate {
    std::vector<std::string> elements;
    std::vector<double> central;
    std::vector<double> ci68;
    double condition_number = 0.0;
    std::string process_label;
    ExtractMode mode = ExtractMode::Unconstrained;
    std::uint64_t seed = 0;
    int n_samples = 0;
    // per-sample solutions, kept for uncertainty propagation
    std::vector<std::vector<double>> samples;
};

/// P is row-major, one row per qubit/design, one column per element.  Each
/// sample draws Q_k from a normal truncated at Q > 0, solves the least
/// squares problem, and the per-element mean and 16-84 percentile half-width
/// are reported.  Throws SolverError for singular P (with the condition
/// number in the message).
LossTangentEstimate extract_tangents(const std::vector<std::vector<double>>& P,
                                     const std::vector<QStatistics>& stats,
                                     const ExtractOptions& options,
                                     const std::vector<std::string>& element_names = {
                                         "pads", "leads", "squid"});

struct ReportRow {
    std::string qubit;
    std::string design;
    std::string process;
    double q_predicted = 0.0;
    double q_pred_ci = 0.0;
    double q_measured = 0.0;
    double q_meas_ci = 0.0;
    double ratio = 0.0;  // predicted / measured
};

/// Per-qubit predicted-vs-measured comparison.  Prediction uncertainty is
/// propagated from the estimate's tangent samples; the measured 68% interval
/// is the standard error of the median.
std::vector<ReportRow> prediction_report(const std::vector<std::vector<double>>& P,
                                         const std::vector<QStatistics>& measured,
                                         const LossTangentEstimate& estimate);

}  // namespace qsurf::sle
