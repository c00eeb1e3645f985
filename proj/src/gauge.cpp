#include "sastirap/gauge.hpp"

#include <cmath>
#include <stdexcept>

#include "sastirap/units.hpp"

namespace sastirap {

double wrap_phase(double x) {
    double w = std::remainder(x, kTwoPi);  // (-pi, pi] up to the -pi edge
    if (w <= -kPi) w += kTwoPi;
    return w;
}

Matrix3c apply_gauge(const Matrix3c& h, const GaugeTransform& g) {
    const Complex i(0.0, 1.0);
    Vector3c u;
    u << std::exp(-i * g.chi0), std::exp(-i * g.chi1), std::exp(-i * g.chi2);
    Matrix3c out;
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) out(r, c) = u[r] * h(r, c) * std::conj(u[c]);
    return out;
}

double loop_phase(const PlaquettePhases& p) { return wrap_phase(p.phi01 + p.phi12 + p.phi20); }

PlaquettePhases link_phases(const Matrix3c& h) {
    if (std::abs(h(0, 1)) < 1e-15 || std::abs(h(1, 2)) < 1e-15 || std::abs(h(2, 0)) < 1e-15)
        throw std::domain_error("link_phases: a loop coupling is zero");
    return {std::arg(h(0, 1)), std::arg(h(1, 2)), std::arg(h(2, 0))};
}

double loop_phase_of(const Matrix3c& h) { return loop_phase(link_phases(h)); }

double phi20_from_two_photon(double phi_2ph) { return wrap_phase(-2.0 * phi_2ph - kPi); }

double two_photon_for_phi20(double phi20) { return wrap_phase(-0.5 * (phi20 + kPi)); }

}  // namespace sastirap
