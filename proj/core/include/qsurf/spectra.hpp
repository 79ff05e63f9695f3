#pragma once

#include <string>
#include <vector>

#include "qsurf/sle.hpp"

namespace qsurf::spectra {

/// One relaxation measurement: excited-state population vs delay at a fixed
/// qubit frequency.
struct T1Record {
    double f_GHz = 0.0;
    std::vector<double> delay_us;
    std::vector<double> population;
    int shots = 0;

    void validate() const;
};

struct T1Fit {
    double t1_us = 0.0;
    double rel_err = 0.0;   // from the fit covariance diagonal
    double amplitude = 0.0;
    double offset = 0.0;
    int iterations = 0;
};

/// Least-squares fit of P(t) = A exp(-t/T1) + B.  Initialization: B from the
/// tail, A from the first point, T1 from the 1/e crossing.
T1Fit fit_t1(const T1Record& rec);

/// Q = omega T1 = 2 pi f T1.
double t1_to_q(double t1_us, double f_GHz);

enum class MaskFlag { Kept, HighError, Parasitic };
const char* mask_flag_name(MaskFlag m);
MaskFlag mask_flag_from_name(const std::string& name);

struct QSpectrum {
    std::vector<double> f_GHz;
    std::vector<double> q;
    std::vector<double> rel_err;
    std::vector<MaskFlag> mask;

    void validate() const;
    int kept_count() const;
};

struct DipParams {
    double mad_mult = 3.0;            // detection threshold over the local baseline
    int min_width_bins = 3;           // minimum fitted width in grid steps
    double window_halfwidth_mult = 1.5;  // masked window = |f - f0| <= mult * Gamma
    int baseline_window = 41;         // rolling-median window, bins
};

/// Flags high-fit-error points and Lorentzian-shaped dips (resonances of
/// parasitic modes) in 1/Q.  Masking never removes data, it only flags.
QSpectrum mask_spectrum(const QSpectrum& spec, double err_threshold = 0.10,
                        const DipParams& params = {});

/// Median/std/count over kept points only; needs at least 10 of them.
sle::QStatistics spectrum_stats(const QSpectrum& spec);

/// T1 CSV: `f_GHz,delay_us,population,shots`, rows grouped by frequency.
std::vector<T1Record> read_t1_records(const std::string& path);

/// Spectrum CSV: `f_GHz,Q,rel_err,mask`.
QSpectrum read_spectrum(const std::string& path);
void write_spectrum(const QSpectrum& spec, const std::string& path,
                    const std::vector<std::string>& header_comments = {});

/// Fits every record and assembles the Q spectrum (all points Kept).
QSpectrum spectrum_from_records(const std::vector<T1Record>& records);

}  // namespace qsurf::spectra
