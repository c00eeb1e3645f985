#pragma once

#include <optional>
#include <vector>

#include "sastirap/dynamics.hpp"
#include "sastirap/pulses.hpp"
#include "sastirap/qutrit.hpp"

namespace sastirap {

// Instantaneous eigenstructure of the STIRAP Hamiltonian at one time.
// eigvals = (lambda+, lambda0, lambda-); eigvecs columns |n+>, |n0>, |n->.
struct AdiabaticFrame {
    double theta;
    Eigen::Vector3d eigvals;
    Matrix3c eigvecs;
};

struct TransferMetrics {
    std::optional<double> t_transfer_09;  // ns; absent if p2 never reaches 0.9
    double t_qsl;                         // ns
    double theta_i;
    double theta_f;
};

// Two-level bound for rotating the dark state between two mixing angles
// under a bounded 0-2 drive: |<D(ti)|D(tf)>| = cos(tf - ti).
constexpr double qsl_time(double theta_i, double theta_f, double omega02_max) {
    return 2.0 * (theta_f - theta_i) / omega02_max;
}

// Theta in [0, pi/2] from the nonnegative envelopes; throws std::domain_error
// if both are below 1e-15 (callers hold the previous value there).
double mixing_angle(double omega01_t, double omega12_t);

// Theta(t) sampled on `times` with the hold rule at empty-envelope points.
std::vector<double> mixing_angle_series(const std::vector<double>& times, const StirapParams& p);

// |D> = cos(theta) e^{i phi12}|0> - sin(theta) e^{-i phi01}|2>
Vector3c dark_state(double theta, double phi01, double phi12);

// Analytic eigensystem for a Hamiltonian of the real STIRAP form (zero
// diagonal, zero 0-2 element, real nonnegative couplings). Throws
// std::invalid_argument otherwise.
AdiabaticFrame eigensystem(const Matrix3c& h);

// Adiabatic frames computed with a general numeric Hermitian eigensolver,
// eigenvector phases fixed (largest component real-positive) and the
// held-angle rule applied where the Hamiltonian vanishes.
struct FrameTrajectory {
    std::vector<double> times;  // uniform grid
    std::vector<AdiabaticFrame> frames;

    static FrameTrajectory from_envelopes(const std::vector<double>& times,
                                          const StirapParams& p);
};

// Counterdiabatic Hamiltonian reconstructed from eigenvector motion,
// i sum_n (|dn><n| - <n|dn>|n><n|), with centered finite differences on the
// grid (one-sided at the ends).
std::vector<Matrix3c> reverse_engineer_cd(const FrameTrajectory& traj);

// |dTheta/dt| / sqrt(Omega01^2 + Omega12^2); throws if both envelopes vanish.
double adiabaticity_ratio(double t, const StirapParams& p);
double max_adiabaticity_ratio(const StirapParams& p, int samples = 4001);

// Transfer time between the p0 >= 0.99 departure and the first p2 >= 0.9
// crossing (linear interpolation between trajectory samples), plus the
// two-level bound 2 (theta_f - theta_i) / omega02_max for the fixed endpoint
// angles theta_i = 0.03 pi, theta_f = 0.4 pi.
TransferMetrics transfer_metrics(const Trajectory& traj, double omega02_max);

// Diagnostic three-amplitude integrator in the instantaneous frame
// (dark/bright amplitudes, raw phases). Returns the final lab-frame state
// vector; frames are re-projected exactly at the envelope truncation edges.
Vector3c evolve_amplitudes(const StirapParams& p, double t_start, double t_end,
                           double abs_tol = 1e-12, double rel_tol = 1e-12);

}  // namespace sastirap
