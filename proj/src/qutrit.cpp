#include "sastirap/qutrit.hpp"

#include <Eigen/Eigenvalues>
#include <sstream>
#include <stdexcept>

namespace sastirap {

QutritState QutritState::ground() {
    QutritState s;
    s.rho = Matrix3c::Zero();
    s.rho(0, 0) = 1.0;
    return s;
}

QutritState QutritState::pure(const Vector3c& psi) {
    const double n = psi.norm();
    if (n == 0.0) throw std::invalid_argument("QutritState::pure: zero vector");
    const Vector3c v = psi / n;
    QutritState s;
    s.rho = v * v.adjoint();
    return s;
}

double QutritState::purity() const { return (rho * rho).trace().real(); }

double hermiticity_error(const Matrix3c& m) {
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

double min_eigenvalue(const Matrix3c& herm) {
    Eigen::SelfAdjointEigenSolver<Matrix3c> es(herm, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

void QutritState::validate() const {
    const double herm = hermiticity_error(rho);
    if (herm > 1e-12) {
        std::ostringstream os;
        os << "QutritState: hermiticity error " << herm << " > 1e-12";
        throw std::invalid_argument(os.str());
    }
    const double tr = std::abs(rho.trace().real() - 1.0) + std::abs(rho.trace().imag());
    if (tr > 1e-9) {
        std::ostringstream os;
        os << "QutritState: trace deviates from 1 by " << tr;
        throw std::invalid_argument(os.str());
    }
    const double lmin = min_eigenvalue(0.5 * (rho + rho.adjoint()));
    if (lmin < -1e-9) {
        std::ostringstream os;
        os << "QutritState: negative eigenvalue " << lmin;
        throw std::invalid_argument(os.str());
    }
}

void DecoherenceRates::validate() const {
    if (gamma01 < 0 || gamma12 < 0 || gamma_phi01 < 0 || gamma_phi12 < 0)
        throw std::invalid_argument("DecoherenceRates: rates must be >= 0");
}

bool DecoherenceRates::any() const {
    return gamma01 > 0 || gamma12 > 0 || gamma_phi01 > 0 || gamma_phi12 > 0;
}

Populations populations(const QutritState& state) {
    if (hermiticity_error(state.rho) > 1e-9)
        throw std::invalid_argument("populations: input is not Hermitian");
    return {state.rho(0, 0).real(), state.rho(1, 1).real(), state.rho(2, 2).real()};
}

namespace {

// D[L] rho = L rho L^dag - 1/2 {L^dag L, rho} for the lowering jump |lo><hi|
void add_relaxation(Matrix3c& d, const Matrix3c& rho, int lo, int hi, double g) {
    if (g == 0.0) return;
    // L rho L^dag has the single element rho(hi,hi) at (lo,lo)
    d(lo, lo) += g * rho(hi, hi);
    // {L^dag L, rho} = {|hi><hi|, rho}: row hi and column hi of rho
    for (int k = 0; k < 3; ++k) {
        d(hi, k) -= 0.5 * g * rho(hi, k);
        d(k, hi) -= 0.5 * g * rho(k, hi);
    }
}

// D[|j><j|] rho with rate g: coherence (j,k) and (k,j) decay at g/2
void add_diag_dephasing(Matrix3c& d, const Matrix3c& rho, int j, double g) {
    if (g == 0.0) return;
    for (int k = 0; k < 3; ++k) {
        if (k == j) continue;
        d(j, k) -= 0.5 * g * rho(j, k);
        d(k, j) -= 0.5 * g * rho(k, j);
    }
}

}  // namespace

Matrix3c dissipator(const Matrix3c& rho, const DecoherenceRates& rates) {
    rates.validate();
    Matrix3c d = Matrix3c::Zero();
    add_relaxation(d, rho, 0, 1, rates.gamma01);
    add_relaxation(d, rho, 1, 2, rates.gamma12);
    add_diag_dephasing(d, rho, 1, 2.0 * rates.gamma_phi01);
    add_diag_dephasing(d, rho, 2, 2.0 * rates.gamma_phi12);
    return d;
}

Matrix3c lindblad_rhs(const Matrix3c& h, const Matrix3c& rho, const DecoherenceRates& rates) {
    const Complex i(0.0, 1.0);
    Matrix3c d = -i * (h * rho - rho * h);
    if (rates.any()) d += dissipator(rho, rates);
    return d;
}

}  // namespace sastirap
