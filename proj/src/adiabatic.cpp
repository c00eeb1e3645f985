#include "sastirap/adiabatic.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sastirap/rk45.hpp"

namespace sastirap {

double mixing_angle(double omega01_t, double omega12_t) {
    if (omega01_t < 0.0 || omega12_t < 0.0)
        throw std::domain_error("mixing_angle: envelopes must be nonnegative");
    if (omega01_t < 1e-15 && omega12_t < 1e-15)
        throw std::domain_error("mixing_angle: both envelopes vanish");
    return std::atan2(omega01_t, omega12_t);
}

std::vector<double> mixing_angle_series(const std::vector<double>& times, const StirapParams& p) {
    std::vector<double> out(times.size());
    double held = 0.0;
    for (size_t i = 0; i < times.size(); ++i) {
        const Envelopes e = stirap_envelopes(times[i], p);
        if (e.omega01 >= 1e-15 || e.omega12 >= 1e-15) held = std::atan2(e.omega01, e.omega12);
        out[i] = held;
    }
    return out;
}

Vector3c dark_state(double theta, double phi01, double phi12) {
    const Complex i(0.0, 1.0);
    Vector3c d;
    d << std::cos(theta) * std::exp(i * phi12), 0.0, -std::sin(theta) * std::exp(-i * phi01);
    return d;
}

namespace {

AdiabaticFrame analytic_frame(double theta, double rms) {
    AdiabaticFrame f;
    f.theta = theta;
    const double lam = 0.5 * rms;
    f.eigvals << lam, 0.0, -lam;
    const double s = std::sin(theta), c = std::cos(theta);
    const double r = 1.0 / std::numbers::sqrt2;
    f.eigvecs.col(0) << r * s, r, r * c;
    f.eigvecs.col(1) << c, 0.0, -s;
    f.eigvecs.col(2) << r * s, -r, r * c;
    return f;
}

void fix_phase(Vector3c& v) {
    int imax = 0;
    double amax = 0.0;
    for (int i = 0; i < 3; ++i)
        if (std::abs(v[i]) > amax) {
            amax = std::abs(v[i]);
            imax = i;
        }
    if (amax == 0.0) return;
    v *= std::conj(v[imax]) / amax;
}

}  // namespace

AdiabaticFrame eigensystem(const Matrix3c& h) {
    if (hermiticity_error(h) > 1e-12)
        throw std::invalid_argument("eigensystem: matrix is not Hermitian");
    const double off02 = std::abs(h(0, 2));
    const double diag = std::abs(h(0, 0)) + std::abs(h(1, 1)) + std::abs(h(2, 2));
    const double im = std::abs(h(0, 1).imag()) + std::abs(h(1, 2).imag());
    if (off02 > 1e-12 || diag > 1e-12 || im > 1e-12 || h(0, 1).real() < 0.0 ||
        h(1, 2).real() < 0.0)
        throw std::invalid_argument("eigensystem: matrix is not of the real STIRAP form");
    const double o01 = 2.0 * h(0, 1).real();
    const double o12 = 2.0 * h(1, 2).real();
    const double theta = (o01 < 1e-15 && o12 < 1e-15) ? 0.0 : std::atan2(o01, o12);
    return analytic_frame(theta, std::hypot(o01, o12));
}

FrameTrajectory FrameTrajectory::from_envelopes(const std::vector<double>& times,
                                                const StirapParams& p) {
    if (times.size() < 3) throw std::invalid_argument("FrameTrajectory: need >= 3 samples");
    const double h = times[1] - times[0];
    for (size_t i = 1; i < times.size(); ++i)
        if (std::abs(times[i] - times[i - 1] - h) > 1e-9 * std::max(1.0, std::abs(h)))
            throw std::invalid_argument("FrameTrajectory: grid must be uniform");

    FrameTrajectory out;
    out.times = times;
    out.frames.resize(times.size());
    bool have_prev = false;
    for (size_t i = 0; i < times.size(); ++i) {
        const Envelopes e = stirap_envelopes(times[i], p);
        const double rms = std::hypot(e.omega01, e.omega12);
        if (rms < 1e-15) {
            // hold the previous frame (angle pinned while the drives are off)
            out.frames[i] = have_prev ? out.frames[i - 1] : analytic_frame(0.0, 0.0);
            continue;
        }
        Matrix3c hm = Matrix3c::Zero();
        hm(0, 1) = 0.5 * e.omega01;
        hm(1, 2) = 0.5 * e.omega12;
        hm(1, 0) = std::conj(hm(0, 1));
        hm(2, 1) = std::conj(hm(1, 2));
        Eigen::SelfAdjointEigenSolver<Matrix3c> es(hm);
        if (es.info() != Eigen::Success)
            throw std::runtime_error("FrameTrajectory: eigensolver failed");
        // ascending eigenvalues -> (-, 0, +); store as (+, 0, -)
        AdiabaticFrame f;
        f.theta = std::atan2(e.omega01, e.omega12);
        f.eigvals << es.eigenvalues()(2), es.eigenvalues()(1), es.eigenvalues()(0);
        Vector3c vp = es.eigenvectors().col(2);
        Vector3c v0 = es.eigenvectors().col(1);
        Vector3c vm = es.eigenvectors().col(0);
        fix_phase(vp);
        fix_phase(v0);
        fix_phase(vm);
        f.eigvecs.col(0) = vp;
        f.eigvecs.col(1) = v0;
        f.eigvecs.col(2) = vm;
        out.frames[i] = f;
        have_prev = true;
    }
    return out;
}

namespace {

// removes the residual global-phase ambiguity between neighboring samples
Vector3c aligned_to(const Vector3c& ref, const Vector3c& v) {
    const Complex z = ref.dot(v);
    if (std::abs(z) < 1e-12) return v;
    return v * (std::conj(z) / std::abs(z));
}

}  // namespace

std::vector<Matrix3c> reverse_engineer_cd(const FrameTrajectory& traj) {
    const size_t n = traj.times.size();
    if (n < 3) throw std::invalid_argument("reverse_engineer_cd: need >= 3 samples");
    std::vector<Matrix3c> out(n, Matrix3c::Zero());
    const Complex i(0.0, 1.0);
    for (size_t k = 0; k < n; ++k) {
        const size_t lo = k == 0 ? 0 : k - 1;
        const size_t hi = k + 1 == n ? k : k + 1;
        const double dt = traj.times[hi] - traj.times[lo];
        Matrix3c hcd = Matrix3c::Zero();
        for (int col = 0; col < 3; ++col) {
            const Vector3c vc = traj.frames[k].eigvecs.col(col);
            const Vector3c va = aligned_to(vc, traj.frames[hi].eigvecs.col(col));
            const Vector3c vb = aligned_to(vc, traj.frames[lo].eigvecs.col(col));
            const Vector3c dn = (va - vb) / dt;
            const Complex berry = vc.dot(dn);
            hcd += i * (dn * vc.adjoint() - berry * (vc * vc.adjoint()));
        }
        out[k] = 0.5 * (hcd + hcd.adjoint());  // symmetrize fd noise
    }
    return out;
}

double adiabaticity_ratio(double t, const StirapParams& p) {
    const Envelopes e = stirap_envelopes(t, p);
    const double s = e.omega01 * e.omega01 + e.omega12 * e.omega12;
    if (s < 1e-30) throw std::domain_error("adiabaticity_ratio: both envelopes vanish");
    // dTheta/dt of the truncated Gaussians (zero where only one pulse is on)
    const double thetadot = -p.t_s / (p.sigma * p.sigma) * e.omega01 * e.omega12 / s;
    return std::abs(thetadot) / std::sqrt(s);
}

double max_adiabaticity_ratio(const StirapParams& p, int samples) {
    const double a = std::min(-3.0 * p.sigma, p.t_s - 3.0 * p.sigma);
    const double b = std::max(3.0 * p.sigma, p.t_s + 3.0 * p.sigma);
    double m = 0.0;
    for (int k = 0; k < samples; ++k) {
        const double t = a + (b - a) * k / (samples - 1);
        const Envelopes e = stirap_envelopes(t, p);
        if (e.omega01 * e.omega01 + e.omega12 * e.omega12 < 1e-30) continue;
        m = std::max(m, adiabaticity_ratio(t, p));
    }
    return m;
}

TransferMetrics transfer_metrics(const Trajectory& traj, double omega02_max) {
    if (omega02_max <= 0.0)
        throw std::invalid_argument("transfer_metrics: omega02_max must be > 0");
    TransferMetrics m;
    m.theta_i = 0.03 * kPi;
    m.theta_f = 0.4 * kPi;
    m.t_qsl = qsl_time(m.theta_i, m.theta_f, omega02_max);

    const size_t n = traj.times.size();
    std::vector<double> p0(n), p2(n);
    for (size_t i = 0; i < n; ++i) {
        p0[i] = traj.states[i].rho(0, 0).real();
        p2[i] = traj.states[i].rho(2, 2).real();
    }
    auto cross_time = [&](const std::vector<double>& p, size_t i, double level) {
        // linear interpolation inside [i-1, i]
        const double f = (level - p[i - 1]) / (p[i] - p[i - 1]);
        return traj.times[i - 1] + f * (traj.times[i] - traj.times[i - 1]);
    };
    size_t i2 = 0;
    for (size_t i = 1; i < n; ++i)
        if (p2[i] >= 0.9) {
            i2 = i;
            break;
        }
    if (i2 == 0) return m;  // transfer never reaches 0.9
    const double t2 = cross_time(p2, i2, 0.9);
    // last moment with p0 still at 0.99 before the transfer completes
    double t0 = traj.times.front();
    for (size_t i = i2; i-- > 0;) {
        if (p0[i] >= 0.99) {
            t0 = (i + 1 <= i2 && p0[i + 1] < 0.99) ? cross_time(p0, i + 1, 0.99) : traj.times[i];
            break;
        }
    }
    m.t_transfer_09 = t2 - t0;
    return m;
}

Vector3c evolve_amplitudes(const StirapParams& p, double t_start, double t_end, double abs_tol,
                           double rel_tol) {
    p.validate();
    using Amp = Eigen::Matrix<Complex, 3, 1>;

    double held_theta = 0.0;
    auto theta_at = [&](double t) {
        const Envelopes e = stirap_envelopes(t, p);
        if (e.omega01 >= 1e-15 || e.omega12 >= 1e-15) held_theta = std::atan2(e.omega01, e.omega12);
        return held_theta;
    };
    auto frame_at = [&](double t) { return analytic_frame(theta_at(t), 0.0).eigvecs; };

    auto rhs = [&](double t, const Amp& c) {
        const Envelopes e = stirap_envelopes(t, p);
        const double s = e.omega01 * e.omega01 + e.omega12 * e.omega12;
        const double lam = 0.5 * std::sqrt(s);
        const double k =
            s < 1e-30 ? 0.0
                      : -p.t_s / (p.sigma * p.sigma) * e.omega01 * e.omega12 / s / std::numbers::sqrt2;
        Amp d;
        const Complex i(0.0, 1.0);
        // amplitudes ordered (n+, n0, n-)
        d[0] = -i * lam * c[0] + k * c[1];
        d[1] = -k * (c[0] + c[2]);
        d[2] = +i * lam * c[2] + k * c[1];
        return d;
    };

    const auto cuts = support_breakpoints(p, t_start, t_end);
    Vector3c psi;
    psi << 1.0, 0.0, 0.0;
    Matrix3c frame = frame_at(t_start);
    Amp c = frame.adjoint() * psi;
    Rk45<Amp> stepper(abs_tol, rel_tol);
    for (size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double a = cuts[i], b = cuts[i + 1];
        // re-project onto the frame just inside the segment (the dark/bright
        // basis jumps where a truncated envelope switches on or off)
        const double probe = a + std::min(1e-9, 0.5 * (b - a));
        const Matrix3c f_new = frame_at(probe);
        psi = frame * c;
        c = f_new.adjoint() * psi;
        frame = f_new;
        stepper.integrate(c, a, b, rhs);
        const double probe_end = b - std::min(1e-9, 0.5 * (b - a));
        frame = frame_at(probe_end);
    }
    return frame * c;
}

}  // namespace sastirap
