#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace sastirap {

// Averaged readout responses for the three basis states, one real trace per
// state, sampled every tau_step ns from the start of the measurement pulse.
struct CalibrationTraces {
    std::vector<double> r0, r1, r2;
    double tau_step = 1.0;

    size_t size() const { return r0.size(); }
    void validate() const;          // equal lengths >= 3, finite condition number
    double condition_number() const;
};

// Relaxation-induced mixing of the calibration traces: the measured response
// of state |j> contains fractions zeta_ij of the lower ideal responses.
struct LeakageCorrections {
    double zeta01 = 0.0;
    double zeta12 = 0.0;
    double zeta02 = 0.0;

    void validate() const;  // each in [0, 0.5), zeta02 + zeta12 < 1
};

// Shape parameters for the emulated responses (exponential settling toward a
// state-dependent level).
struct CalibrationModel {
    double level[3] = {1.0, -0.2, -0.9};
    double amp[3] = {-0.8, 0.9, 1.2};
    double settle_ns[3] = {180.0, 420.0, 260.0};
};

CalibrationTraces make_calibration_traces(size_t n_samples, double tau_step,
                                          const CalibrationModel& model = {});

// r_meas = sum_i p_i r_i plus iid Gaussian noise of the given sigma,
// deterministic in `seed`. p must be normalized within 1e-9.
std::vector<double> synthesize_trace(const Eigen::Vector3d& p, const CalibrationTraces& cal,
                                     double noise_sigma, std::uint64_t seed);

// Inverts the leakage mixing:
//   r~0 = r0,  r~1 = (r1 - z01 r~0)/(1 - z01),
//   r~2 = (r2 - z02 r~0 - z12 r~1)/(1 - z02 - z12)
CalibrationTraces correct_calibrations(const CalibrationTraces& raw, const LeakageCorrections& z);

// Forward mixing model (test fixture construction):
// r_j = (1 - sum_{i<j} z_ij) r~_j + sum_{i<j} z_ij r~_i
CalibrationTraces mix_calibrations(const CalibrationTraces& ideal, const LeakageCorrections& z);

// Least-squares population fit. The constrained version enforces p_i >= 0 and
// sum p_i = 1 (unconstrained-with-sum solve, simplex projection, one
// re-solve on the active set).
Eigen::Vector3d fit_populations(const std::vector<double>& meas, const CalibrationTraces& cal);
Eigen::Vector3d fit_populations_unconstrained(const std::vector<double>& meas,
                                              const CalibrationTraces& cal);

// csv with columns tau_ns, value
void write_trace_csv(std::ostream& os, const std::vector<double>& trace, double tau_step);
std::pair<std::vector<double>, double> read_trace_csv(std::istream& is);
std::pair<std::vector<double>, double> read_trace_csv_file(const std::string& path);
void write_trace_csv_file(const std::string& path, const std::vector<double>& trace,
                          double tau_step);

}  // namespace sastirap
