#pragma once

#include <Eigen/Dense>
#include <complex>

namespace sastirap {

using Complex = std::complex<double>;
using Matrix3c = Eigen::Matrix3cd;
using Vector3c = Eigen::Vector3cd;

// Density matrix of the three-level system. Dimensionless; basis |0>,|1>,|2>.
struct QutritState {
    Matrix3c rho;

    static QutritState ground();
    static QutritState pure(const Vector3c& psi);

    // Throws std::invalid_argument if the state violates its invariants:
    // hermiticity (1e-12 elementwise), unit trace (1e-9), eigenvalues >= -1e-9.
    void validate() const;

    double purity() const;  // trace(rho^2)
};

struct Populations {
    double p0, p1, p2;
};

// Energy relaxation (and optional pure dephasing) rates, 1/ns.
// gamma01 relaxes 1->0, gamma12 relaxes 2->1. The dephasing rates are the
// decay rates of the 0-1 and (additional) 1-2 coherences; both default 0.
struct DecoherenceRates {
    double gamma01 = 0.0;
    double gamma12 = 0.0;
    double gamma_phi01 = 0.0;
    double gamma_phi12 = 0.0;

    void validate() const;  // all rates >= 0
    bool any() const;
};

double hermiticity_error(const Matrix3c& m);  // max elementwise |m - m^dag|
double min_eigenvalue(const Matrix3c& herm);

// Diagonal of rho. Rejects input whose hermiticity error exceeds 1e-9.
Populations populations(const QutritState& state);

// Lindblad dissipator contribution to drho/dt, 1/ns. Jump operators
// |0><1| (gamma01), |1><2| (gamma12) plus diagonal dephasing jumps
// |1><1| and |2><2| with rates 2*gamma_phi01, 2*gamma_phi12.
Matrix3c dissipator(const Matrix3c& rho, const DecoherenceRates& rates);

// Full generator -i[h, rho] + dissipator(rho).
Matrix3c lindblad_rhs(const Matrix3c& h, const Matrix3c& rho, const DecoherenceRates& rates);

}  // namespace sastirap
