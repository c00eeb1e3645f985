#pragma once

#include "sastirap/qutrit.hpp"

namespace sastirap {

// Drive phases around the 0-1-2 loop. The coupling elements carry
// H(0,1) ~ e^{i phi01}, H(1,2) ~ e^{i phi12}, H(2,0) ~ e^{i phi20}.
struct PlaquettePhases {
    double phi01 = 0.0;
    double phi12 = 0.0;
    double phi20 = 0.0;
};

// Local U(1) phases chi_j on the three states.
struct GaugeTransform {
    double chi0 = 0.0;
    double chi1 = 0.0;
    double chi2 = 0.0;
};

// wraps into (-pi, pi]
double wrap_phase(double x);

// U h U^dag with U = diag(e^{-i chi0}, e^{-i chi1}, e^{-i chi2}). Element
// magnitudes are unchanged; only the link phases move.
Matrix3c apply_gauge(const Matrix3c& h, const GaugeTransform& g);

// Loop phase Phi = phi01 + phi12 + phi20, wrapped into (-pi, pi].
double loop_phase(const PlaquettePhases& p);

// Link phases read off a Hamiltonian with three nonzero couplings
// (phi20 is taken from the (2,0) element).
PlaquettePhases link_phases(const Matrix3c& h);
double loop_phase_of(const Matrix3c& h);

// Two-photon drive phase maps onto the 2-0 link as phi20 = -2 phi_2ph - pi.
double phi20_from_two_photon(double phi_2ph);
double two_photon_for_phi20(double phi20);

}  // namespace sastirap
