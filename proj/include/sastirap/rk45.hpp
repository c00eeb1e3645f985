#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace sastirap {

struct IntegratorError : std::runtime_error {
    double t_fail;
    explicit IntegratorError(double t)
        : std::runtime_error(make_msg(t)), t_fail(t) {}
    static std::string make_msg(double t) {
        std::ostringstream os;
        os << "integrator step underflow at t = " << t << " ns";
        return os.str();
    }
};

// Embedded Dormand-Prince 5(4) pair with FSAL and a scaled max-norm error
// control. The error norm of a complex state uses elementwise moduli, so the
// accepted step sequence is invariant under any diagonal unitary conjugation
// of the density matrix (the dynamics gauge-invariance tests rely on this).
template <class Vec>
class Rk45 {
public:
    Rk45(double abs_tol, double rel_tol) : atol_(abs_tol), rtol_(rel_tol) {}

    // Advances y from t0 to t1 (t0 < t1). The step size persists across calls
    // through h_; pass-through segments of a split integration stay warm.
    // Stage times are clamped just inside (t0, t1): segment endpoints are the
    // discontinuity locations of the truncated envelopes, and the right-hand
    // side must be evaluated on the branch of the open interior.
    template <class Rhs>
    void integrate(Vec& y, double t0, double t1, Rhs&& rhs_raw) {
        if (!(t1 > t0)) return;
        const double nudge = 1e-10 * std::max({1.0, std::abs(t0), std::abs(t1)});
        const double lo = t0 + std::min(nudge, 0.25 * (t1 - t0));
        const double hi = t1 - std::min(nudge, 0.25 * (t1 - t0));
        auto rhs = [&](double t, const Vec& v) { return rhs_raw(std::clamp(t, lo, hi), v); };
        double t = t0;
        if (h_ <= 0.0) h_ = (t1 - t0) / 64.0;
        Vec k1 = rhs(t, y), k2, k3, k4, k5, k6, k7;
        while (t < t1) {
            double h = std::min(h_, t1 - t);
            if (h < 1e-14 * std::max(1.0, std::abs(t))) throw IntegratorError(t);
            const Vec y1 = y + h * (a21 * k1);
            k2 = rhs(t + c2 * h, y1);
            const Vec y2 = y + h * (a31 * k1 + a32 * k2);
            k3 = rhs(t + c3 * h, y2);
            const Vec y3 = y + h * (a41 * k1 + a42 * k2 + a43 * k3);
            k4 = rhs(t + c4 * h, y3);
            const Vec y4 = y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
            k5 = rhs(t + c5 * h, y4);
            const Vec y5 = y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
            k6 = rhs(t + h, y5);
            const Vec ynew = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
            k7 = rhs(t + h, ynew);
            const Vec err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

            double norm = 0.0;
            for (int i = 0; i < y.size(); ++i) {
                const double sc = atol_ + rtol_ * std::max(std::abs(y[i]), std::abs(ynew[i]));
                const double e = std::abs(err[i]) / sc;
                if (!std::isfinite(e)) {
                    norm = std::numeric_limits<double>::infinity();
                    break;
                }
                norm = std::max(norm, e);
            }
            if (norm <= 1.0) {
                t += h;
                y = ynew;
                k1 = k7;  // FSAL
                const double f = norm == 0.0 ? 5.0 : 0.9 * std::pow(norm, -0.2);
                h_ = h * std::clamp(f, 0.2, 5.0);
            } else {
                h_ = h * std::clamp(0.9 * std::pow(norm, -0.2), 0.2, 1.0);
            }
            ++n_steps_;
        }
    }

    void reset_step() { h_ = 0.0; }
    long steps() const { return n_steps_; }

private:
    double atol_, rtol_;
    double h_ = 0.0;
    long n_steps_ = 0;

    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                            a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                            a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                            b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static constexpr double d1 = 5179.0 / 57600, d3 = 7571.0 / 16695, d4 = 393.0 / 640,
                            d5 = -92097.0 / 339200, d6 = 187.0 / 2100, d7 = 1.0 / 40;
    static constexpr double e1 = b1 - d1, e3 = b3 - d3, e4 = b4 - d4, e5 = b5 - d5,
                            e6 = b6 - d6, e7 = -d7;
};

}  // namespace sastirap
