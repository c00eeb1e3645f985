#include "sastirap/tomography.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <limits>
#include <random>
#include <stdexcept>

namespace sastirap {

namespace {

Eigen::MatrixXd design_matrix(const CalibrationTraces& cal) {
    Eigen::MatrixXd r(cal.size(), 3);
    for (size_t i = 0; i < cal.size(); ++i) {
        r(i, 0) = cal.r0[i];
        r(i, 1) = cal.r1[i];
        r(i, 2) = cal.r2[i];
    }
    return r;
}

}  // namespace

void CalibrationTraces::validate() const {
    if (r0.size() < 3 || r0.size() != r1.size() || r0.size() != r2.size())
        throw std::invalid_argument("CalibrationTraces: need three traces of equal length >= 3");
    if (tau_step <= 0.0) throw std::invalid_argument("CalibrationTraces: tau_step must be > 0");
    const double cond = condition_number();
    if (!std::isfinite(cond))
        throw std::invalid_argument("CalibrationTraces: traces are linearly dependent");
}

double CalibrationTraces::condition_number() const {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(design_matrix(*this));
    const auto& sv = svd.singularValues();
    if (sv(2) <= 0.0) return std::numeric_limits<double>::infinity();
    return sv(0) / sv(2);
}

void LeakageCorrections::validate() const {
    for (double z : {zeta01, zeta12, zeta02})
        if (z < 0.0 || z >= 0.5)
            throw std::invalid_argument("LeakageCorrections: zeta must be in [0, 0.5)");
    if (zeta02 + zeta12 >= 1.0)
        throw std::invalid_argument("LeakageCorrections: zeta02 + zeta12 must be < 1");
}

CalibrationTraces make_calibration_traces(size_t n, double tau_step, const CalibrationModel& m) {
    CalibrationTraces cal;
    cal.tau_step = tau_step;
    cal.r0.resize(n);
    cal.r1.resize(n);
    cal.r2.resize(n);
    for (size_t i = 0; i < n; ++i) {
        const double tau = tau_step * static_cast<double>(i);
        cal.r0[i] = m.level[0] + m.amp[0] * std::exp(-tau / m.settle_ns[0]);
        cal.r1[i] = m.level[1] + m.amp[1] * std::exp(-tau / m.settle_ns[1]);
        cal.r2[i] = m.level[2] + m.amp[2] * std::exp(-tau / m.settle_ns[2]);
    }
    return cal;
}

std::vector<double> synthesize_trace(const Eigen::Vector3d& p, const CalibrationTraces& cal,
                                     double noise_sigma, std::uint64_t seed) {
    cal.validate();
    if (std::abs(p.sum() - 1.0) > 1e-9)
        throw std::invalid_argument("synthesize_trace: populations must sum to 1");
    if (p.minCoeff() < -1e-12)
        throw std::invalid_argument("synthesize_trace: populations must be >= 0");
    std::vector<double> out(cal.size());
    for (size_t i = 0; i < cal.size(); ++i)
        out[i] = p(0) * cal.r0[i] + p(1) * cal.r1[i] + p(2) * cal.r2[i];
    if (noise_sigma > 0.0) {
        std::mt19937_64 rng(seed);
        std::normal_distribution<double> dist(0.0, noise_sigma);
        for (double& v : out) v += dist(rng);
    }
    return out;
}

CalibrationTraces correct_calibrations(const CalibrationTraces& raw, const LeakageCorrections& z) {
    raw.validate();
    z.validate();
    CalibrationTraces out = raw;
    const double d1 = 1.0 - z.zeta01;
    const double d2 = 1.0 - z.zeta02 - z.zeta12;
    if (d1 <= 0.0 || d2 <= 0.0)
        throw std::invalid_argument("correct_calibrations: nonpositive denominator");
    for (size_t i = 0; i < raw.size(); ++i) {
        out.r0[i] = raw.r0[i];
        out.r1[i] = (raw.r1[i] - z.zeta01 * out.r0[i]) / d1;
        out.r2[i] = (raw.r2[i] - z.zeta02 * out.r0[i] - z.zeta12 * out.r1[i]) / d2;
    }
    return out;
}

CalibrationTraces mix_calibrations(const CalibrationTraces& ideal, const LeakageCorrections& z) {
    ideal.validate();
    z.validate();
    CalibrationTraces out = ideal;
    for (size_t i = 0; i < ideal.size(); ++i) {
        out.r0[i] = ideal.r0[i];
        out.r1[i] = (1.0 - z.zeta01) * ideal.r1[i] + z.zeta01 * ideal.r0[i];
        out.r2[i] = (1.0 - z.zeta02 - z.zeta12) * ideal.r2[i] + z.zeta02 * ideal.r0[i] +
                    z.zeta12 * ideal.r1[i];
    }
    return out;
}

Eigen::Vector3d fit_populations_unconstrained(const std::vector<double>& meas,
                                              const CalibrationTraces& cal) {
    cal.validate();
    if (meas.size() != cal.size())
        throw std::invalid_argument("fit_populations: trace length mismatch");
    const Eigen::MatrixXd r = design_matrix(cal);
    const Eigen::VectorXd y = Eigen::Map<const Eigen::VectorXd>(meas.data(), meas.size());
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(r, Eigen::ComputeThinU | Eigen::ComputeThinV);
    if (svd.singularValues()(2) < 1e-12 * svd.singularValues()(0))
        throw std::invalid_argument("fit_populations: rank-deficient calibration matrix");
    return svd.solve(y);
}

namespace {

// minimize ||y - R p||^2 with sum(p over `free`) = s, entries outside `free`
// pinned at zero; standard KKT block solve
Eigen::Vector3d sum_constrained_ls(const Eigen::MatrixXd& r, const Eigen::VectorXd& y,
                                   const std::vector<int>& free, double s) {
    const int k = static_cast<int>(free.size());
    Eigen::MatrixXd rf(r.rows(), k);
    for (int j = 0; j < k; ++j) rf.col(j) = r.col(free[j]);
    Eigen::MatrixXd kkt(k + 1, k + 1);
    kkt.setZero();
    kkt.topLeftCorner(k, k) = 2.0 * rf.transpose() * rf;
    kkt.topRightCorner(k, 1).setOnes();
    kkt.bottomLeftCorner(1, k).setOnes();
    Eigen::VectorXd rhs(k + 1);
    rhs.head(k) = 2.0 * rf.transpose() * y;
    rhs(k) = s;
    const Eigen::VectorXd sol = kkt.fullPivLu().solve(rhs);
    Eigen::Vector3d p = Eigen::Vector3d::Zero();
    for (int j = 0; j < k; ++j) p(free[j]) = sol(j);
    return p;
}

Eigen::Vector3d project_simplex(Eigen::Vector3d v) {
    // Euclidean projection onto { p >= 0, sum p = 1 }
    Eigen::Vector3d u = v;
    std::sort(u.data(), u.data() + 3, std::greater<double>());
    double css = 0.0, tau = 0.0;
    for (int i = 0; i < 3; ++i) {
        css += u(i);
        const double t = (css - 1.0) / (i + 1);
        if (u(i) - t > 0.0) tau = t;
    }
    for (int i = 0; i < 3; ++i) v(i) = std::max(0.0, v(i) - tau);
    return v;
}

}  // namespace

Eigen::Vector3d fit_populations(const std::vector<double>& meas, const CalibrationTraces& cal) {
    cal.validate();
    if (meas.size() != cal.size())
        throw std::invalid_argument("fit_populations: trace length mismatch");
    const Eigen::MatrixXd r = design_matrix(cal);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(r);
    if (svd.singularValues()(2) < 1e-12 * svd.singularValues()(0))
        throw std::invalid_argument("fit_populations: rank-deficient calibration matrix");
    const Eigen::VectorXd y = Eigen::Map<const Eigen::VectorXd>(meas.data(), meas.size());

    Eigen::Vector3d p = sum_constrained_ls(r, y, {0, 1, 2}, 1.0);
    if (p.minCoeff() >= 0.0) return p;

    const Eigen::Vector3d proj = project_simplex(p);
    std::vector<int> free;
    for (int i = 0; i < 3; ++i)
        if (proj(i) > 0.0) free.push_back(i);
    if (free.empty()) free = {0, 1, 2};
    p = sum_constrained_ls(r, y, free, 1.0);
    // the re-solve can itself step slightly outside; clamp and renormalize
    for (int i = 0; i < 3; ++i) p(i) = std::max(0.0, p(i));
    const double s = p.sum();
    if (s > 0.0) p /= s;
    return p;
}

void write_trace_csv(std::ostream& os, const std::vector<double>& trace, double tau_step) {
    os << "tau_ns,value\n";
    os.precision(17);
    for (size_t i = 0; i < trace.size(); ++i)
        os << tau_step * static_cast<double>(i) << ',' << trace[i] << '\n';
}

std::pair<std::vector<double>, double> read_trace_csv(std::istream& is) {
    std::string line;
    std::vector<double> vals;
    std::vector<double> taus;
    while (std::getline(is, line)) {
        if (line.empty() || std::isalpha(static_cast<unsigned char>(line[0]))) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) continue;
        taus.push_back(std::stod(line.substr(0, comma)));
        vals.push_back(std::stod(line.substr(comma + 1)));
    }
    if (vals.size() < 2) throw std::runtime_error("read_trace_csv: too few samples");
    return {vals, taus[1] - taus[0]};
}

std::pair<std::vector<double>, double> read_trace_csv_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path);
    return read_trace_csv(f);
}

void write_trace_csv_file(const std::string& path, const std::vector<double>& trace,
                          double tau_step) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path);
    write_trace_csv(f, trace, tau_step);
}

}  // namespace sastirap
