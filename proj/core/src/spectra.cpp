#include "qsurf/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include <Eigen/Dense>

#include "qsurf/csv.hpp"
#include "qsurf/errors.hpp"
#include "qsurf/units.hpp"

namespace qsurf::spectra {

void T1Record::validate() const {
    if (!(f_GHz > 0.0)) throw ValidationError("T1 record frequency must be > 0");
    if (delay_us.size() != population.size()) {
        throw ValidationError("delay/population length mismatch");
    }
    if (delay_us.size() < 5) throw ValidationError("need at least 5 delay points");
    for (std::size_t i = 1; i < delay_us.size(); ++i) {
        if (!(delay_us[i] > delay_us[i - 1])) {
            throw ValidationError("delays must be strictly increasing");
        }
    }
    for (double p : population) {
        if (!(p >= -0.1) && !(p <= 1.1)) throw ValidationError("population outside [-0.1, 1.1]");
        if (p < -0.1 || p > 1.1) throw ValidationError("population outside [-0.1, 1.1]");
    }
}

T1Fit fit_t1(const T1Record& rec) {
    rec.validate();
    const auto& t = rec.delay_us;
    const auto& p = rec.population;
    const int n = static_cast<int>(t.size());

    // initialization: B = tail mean, A = first - B, T1 from the 1/e crossing
    double b0 = (p[n - 1] + p[n - 2] + p[n - 3]) / 3.0;
    double a0 = p[0] - b0;
    if (std::abs(a0) < 1e-9) {
        throw SolverError("relaxation fit did not converge: no decay contrast");
    }
    const double target = b0 + a0 / std::exp(1.0);
    double tau0 = t[n / 2];
    for (int i = 0; i + 1 < n; ++i) {
        const bool crossing = (p[i] - target) * (p[i + 1] - target) <= 0.0;
        if (crossing) {
            const double f = std::abs(p[i + 1] - p[i]) > 1e-12
                                 ? (target - p[i]) / (p[i + 1] - p[i])
                                 : 0.5;
            tau0 = (t[i] + f * (t[i + 1] - t[i])) - t[0];
            break;
        }
    }
    if (!(tau0 > 0.0)) tau0 = t[n / 2] - t[0];

    double A = a0 * std::exp(t[0] / tau0), B = b0, T = tau0;
    Eigen::MatrixXd J(n, 3);
    Eigen::VectorXd r(n);
    double prev_ssr = std::numeric_limits<double>::infinity();
    int it = 0;
    for (; it < 200; ++it) {
        for (int i = 0; i < n; ++i) {
            const double e = std::exp(-t[i] / T);
            const double model = A * e + B;
            r[i] = p[i] - model;
            J(i, 0) = e;
            J(i, 1) = 1.0;
            J(i, 2) = A * t[i] * e / (T * T);
        }
        const double ssr = r.squaredNorm();
        Eigen::Matrix3d JtJ = J.transpose() * J;
        const Eigen::Vector3d g = J.transpose() * r;
        // small Levenberg damping keeps the step defined near degeneracy
        const double lambda = 1e-10 * JtJ.trace();
        JtJ.diagonal().array() += lambda;
        const Eigen::Vector3d step = JtJ.ldlt().solve(g);
        if (!step.allFinite()) throw SolverError("relaxation fit did not converge");
        A += step[0];
        B += step[1];
        T += step[2];
        if (!(T > 0.0)) throw SolverError("relaxation fit left the T1 > 0 domain");
        if (std::abs(prev_ssr - ssr) <= 1e-14 * (1.0 + ssr) && step.norm() < 1e-10) break;
        prev_ssr = ssr;
    }
    if (it >= 200) throw SolverError("relaxation fit did not converge within the iteration cap");
    if (!(T > 0.0) || T >= 1e4) {
        throw SolverError("fitted T1 outside (0, 1e4) us: " + std::to_string(T));
    }

    // covariance from the Gauss-Newton normal matrix
    for (int i = 0; i < n; ++i) {
        const double e = std::exp(-t[i] / T);
        r[i] = p[i] - (A * e + B);
        J(i, 0) = e;
        J(i, 1) = 1.0;
        J(i, 2) = A * t[i] * e / (T * T);
    }
    const double dof = std::max(n - 3, 1);
    const double s2 = r.squaredNorm() / dof;
    const Eigen::Matrix3d cov = s2 * (J.transpose() * J).inverse();

    T1Fit fit;
    fit.t1_us = T;
    fit.amplitude = A;
    fit.offset = B;
    fit.rel_err = std::sqrt(std::max(cov(2, 2), 0.0)) / T;
    fit.iterations = it + 1;
    return fit;
}

double t1_to_q(double t1_us, double f_GHz) {
    if (!(t1_us > 0.0) || !(f_GHz > 0.0)) {
        throw ValidationError("t1_to_q needs positive T1 and frequency");
    }
    return units::angular_frequency(f_GHz) * t1_us * 1e-6;
}

const char* mask_flag_name(MaskFlag m) {
    switch (m) {
        case MaskFlag::Kept: return "kept";
        case MaskFlag::HighError: return "high-error";
        case MaskFlag::Parasitic: return "parasitic";
    }
    return "?";
}

MaskFlag mask_flag_from_name(const std::string& name) {
    if (name == "kept") return MaskFlag::Kept;
    if (name == "high-error") return MaskFlag::HighError;
    if (name == "parasitic") return MaskFlag::Parasitic;
    throw ParseError("unknown mask flag '" + name + "'");
}

void QSpectrum::validate() const {
    const std::size_t n = f_GHz.size();
    if (q.size() != n || rel_err.size() != n || mask.size() != n) {
        throw ValidationError("spectrum column length mismatch");
    }
    for (std::size_t i = 1; i < n; ++i) {
        if (!(f_GHz[i] > f_GHz[i - 1])) throw ValidationError("spectrum grid must be increasing");
    }
    for (double v : q) {
        if (!(v > 0.0)) throw ValidationError("Q values must be > 0");
    }
}

int QSpectrum::kept_count() const {
    int c = 0;
    for (MaskFlag m : mask) {
        if (m == MaskFlag::Kept) ++c;
    }
    return c;
}

namespace {

double median_of(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

struct LorentzFit {
    double base = 0.0, amp = 0.0, f0 = 0.0, gamma = 0.0;
    bool ok = false;
};

// fit y(f) = base + amp * (G/2)^2 / ((f-f0)^2 + (G/2)^2) on a window
LorentzFit fit_lorentzian(const std::vector<double>& f, const std::vector<double>& y,
                          double base0, double amp0, double f00, double gamma0) {
    const int n = static_cast<int>(f.size());
    LorentzFit fit;
    double base = base0, amp = amp0, f0 = f00, g = gamma0;
    Eigen::MatrixXd J(n, 4);
    Eigen::VectorXd r(n);
    for (int it = 0; it < 100; ++it) {
        for (int i = 0; i < n; ++i) {
            const double hg = g / 2.0;
            const double den = (f[i] - f0) * (f[i] - f0) + hg * hg;
            const double shape = hg * hg / den;
            r[i] = y[i] - (base + amp * shape);
            J(i, 0) = 1.0;
            J(i, 1) = shape;
            J(i, 2) = amp * hg * hg * 2.0 * (f[i] - f0) / (den * den);
            J(i, 3) = amp * (hg / den - hg * hg * hg / (den * den));  // d/dg with hg = g/2
        }
        Eigen::Matrix4d JtJ = J.transpose() * J;
        JtJ.diagonal().array() += 1e-12 * (1.0 + JtJ.trace());
        const Eigen::Vector4d step = JtJ.ldlt().solve(J.transpose() * r);
        if (!step.allFinite()) return fit;
        base += step[0];
        amp += step[1];
        f0 += step[2];
        g += step[3];
        g = std::abs(g);
        if (step.norm() < 1e-12 * (1.0 + std::abs(amp))) break;
    }
    fit.base = base;
    fit.amp = amp;
    fit.f0 = f0;
    fit.gamma = g;
    fit.ok = std::isfinite(base) && std::isfinite(amp) && std::isfinite(f0) && g > 0.0;
    return fit;
}

}  // namespace

QSpectrum mask_spectrum(const QSpectrum& spec, double err_threshold, const DipParams& params) {
    spec.validate();
    QSpectrum out = spec;
    const int n = static_cast<int>(spec.f_GHz.size());

    for (int i = 0; i < n; ++i) {
        if (out.mask[i] == MaskFlag::Kept && spec.rel_err[i] > err_threshold) {
            out.mask[i] = MaskFlag::HighError;
        }
    }

    if (n < params.min_width_bins + 4) return out;

    // work in loss space: parasitic modes are Lorentzian peaks in 1/Q
    std::vector<double> y(n);
    for (int i = 0; i < n; ++i) y[i] = 1.0 / spec.q[i];

    // rolling-median baseline
    std::vector<double> base(n);
    const int hw = std::max(params.baseline_window / 2, 2);
    for (int i = 0; i < n; ++i) {
        std::vector<double> win;
        for (int j = std::max(0, i - hw); j <= std::min(n - 1, i + hw); ++j) win.push_back(y[j]);
        base[i] = median_of(win);
    }
    std::vector<double> excess(n);
    std::vector<double> absdev;
    for (int i = 0; i < n; ++i) {
        excess[i] = y[i] - base[i];
        absdev.push_back(std::abs(excess[i]));
    }
    const double mad = median_of(absdev);
    const double threshold = params.mad_mult * std::max(mad, 1e-18);

    // contiguous runs above threshold
    int i = 0;
    const double df = n > 1 ? spec.f_GHz[1] - spec.f_GHz[0] : 1e-3;
    while (i < n) {
        if (excess[i] <= threshold) {
            ++i;
            continue;
        }
        int j = i;
        while (j + 1 < n && excess[j + 1] > threshold) ++j;
        const int run = j - i + 1;
        if (run >= params.min_width_bins) {
            const int lo = std::max(0, i - 3 * run);
            const int hi = std::min(n - 1, j + 3 * run);
            std::vector<double> fw(spec.f_GHz.begin() + lo, spec.f_GHz.begin() + hi + 1);
            std::vector<double> yw(y.begin() + lo, y.begin() + hi + 1);
            int peak = i;
            for (int k = i; k <= j; ++k) {
                if (y[k] > y[peak]) peak = k;
            }
            const LorentzFit fit = fit_lorentzian(fw, yw, base[peak], y[peak] - base[peak],
                                                  spec.f_GHz[peak], run * df);
            if (fit.ok && fit.amp > threshold && fit.gamma >= params.min_width_bins * df) {
                const double half = params.window_halfwidth_mult * fit.gamma;
                for (int k = 0; k < n; ++k) {
                    if (std::abs(spec.f_GHz[k] - fit.f0) <= half) out.mask[k] = MaskFlag::Parasitic;
                }
            }
        }
        i = j + 1;
    }
    return out;
}

sle::QStatistics spectrum_stats(const QSpectrum& spec) {
    spec.validate();
    std::vector<double> kept;
    double fmin = 0.0, fmax = 0.0;
    for (std::size_t i = 0; i < spec.f_GHz.size(); ++i) {
        if (spec.mask[i] != MaskFlag::Kept) continue;
        kept.push_back(spec.q[i]);
        if (kept.size() == 1) fmin = fmax = spec.f_GHz[i];
        fmin = std::min(fmin, spec.f_GHz[i]);
        fmax = std::max(fmax, spec.f_GHz[i]);
    }
    if (kept.size() < 10) {
        throw ValidationError("fewer than 10 kept points in the spectrum");
    }
    sle::QStatistics s;
    s.median_q = median_of(kept);
    double mean = 0.0;
    for (double v : kept) mean += v;
    mean /= kept.size();
    double var = 0.0;
    for (double v : kept) var += (v - mean) * (v - mean);
    s.std_q = std::sqrt(var / (kept.size() - 1));
    s.count = static_cast<int>(kept.size());
    s.f_band_GHz = fmax - fmin;
    return s;
}

std::vector<T1Record> read_t1_records(const std::string& path) {
    const csv::Table t = csv::read_file(path);
    if (t.rows.empty()) throw ParseError("empty T1 file: " + path);
    const std::vector<std::string> expected = {"f_GHz", "delay_us", "population", "shots"};
    if (t.rows.front() != expected) throw ParseError("T1 CSV header mismatch in " + path);

    std::map<double, T1Record> grouped;
    std::vector<double> order;
    for (std::size_t r = 1; r < t.rows.size(); ++r) {
        const auto& row = t.rows[r];
        if (row.size() != 4) throw ParseError("T1 CSV row has wrong column count");
        const double f = csv::parse_double(row[0], "f_GHz");
        auto& rec = grouped[f];
        if (rec.delay_us.empty()) {
            rec.f_GHz = f;
            order.push_back(f);
        }
        rec.delay_us.push_back(csv::parse_double(row[1], "delay_us"));
        rec.population.push_back(csv::parse_double(row[2], "population"));
        rec.shots = static_cast<int>(csv::parse_long(row[3], "shots"));
    }
    std::vector<T1Record> out;
    for (double f : order) out.push_back(grouped[f]);
    return out;
}

QSpectrum read_spectrum(const std::string& path) {
    const csv::Table t = csv::read_file(path);
    if (t.rows.empty()) throw ParseError("empty spectrum file: " + path);
    const std::vector<std::string> expected = {"f_GHz", "Q", "rel_err", "mask"};
    if (t.rows.front() != expected) throw ParseError("spectrum CSV header mismatch in " + path);
    QSpectrum s;
    for (std::size_t r = 1; r < t.rows.size(); ++r) {
        const auto& row = t.rows[r];
        if (row.size() != 4) throw ParseError("spectrum CSV row has wrong column count");
        s.f_GHz.push_back(csv::parse_double(row[0], "f_GHz"));
        s.q.push_back(csv::parse_double(row[1], "Q"));
        s.rel_err.push_back(csv::parse_double(row[2], "rel_err"));
        s.mask.push_back(mask_flag_from_name(row[3]));
    }
    s.validate();
    return s;
}

void write_spectrum(const QSpectrum& spec, const std::string& path,
                    const std::vector<std::string>& header_comments) {
    spec.validate();
    std::ostringstream o;
    for (const auto& c : header_comments) o << "# " << c << "\n";
    o << "f_GHz,Q,rel_err,mask\n";
    for (std::size_t i = 0; i < spec.f_GHz.size(); ++i) {
        o << csv::format_double(spec.f_GHz[i]) << ',' << csv::format_double(spec.q[i]) << ','
          << csv::format_double(spec.rel_err[i]) << ',' << mask_flag_name(spec.mask[i]) << "\n";
    }
    csv::write_file(path, o.str());
}

QSpectrum spectrum_from_records(const std::vector<T1Record>& records) {
    QSpectrum s;
    for (const auto& rec : records) {
        const T1Fit fit = fit_t1(rec);
        s.f_GHz.push_back(rec.f_GHz);
        s.q.push_back(t1_to_q(fit.t1_us, rec.f_GHz));
        s.rel_err.push_back(fit.rel_err);
        s.mask.push_back(MaskFlag::Kept);
    }
    s.validate();
    return s;
}

}  // namespace qsurf::spectra
