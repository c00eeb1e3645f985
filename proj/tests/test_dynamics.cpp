#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <sstream>

#include "sastirap/dynamics.hpp"
#include "sastirap/rk45.hpp"

using namespace sastirap;

namespace {

ProtocolConfig fig2_config(bool decoherence = false, CdMode mode = CdMode::ideal_effective) {
    ProtocolConfig p;
    p.stirap.omega01_peak = rabi_from_mhz(25.5);
    p.stirap.omega12_peak = rabi_from_mhz(25.5);
    p.stirap.sigma = 20.0;
    p.stirap.t_s = -30.0;
    p.cd.mode = mode;
    p.cd.phi_2ph = -kPi / 4.0;  // loop phase -pi/2
    p.cd.delta = rabi_from_mhz(185.0);
    if (decoherence) {
        p.rates.gamma01 = rate_from_mhz(0.6);
        p.rates.gamma12 = rate_from_mhz(0.83);
    }
    return p;
}

}  // namespace

TEST_CASE("hamiltonian vanishes when all envelopes vanish") {
    ProtocolConfig p = fig2_config();
    const Matrix3c h = hamiltonian_at(-90.9, p);  // inside the guard, outside all supports
    CHECK(h.cwiseAbs().maxCoeff() == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("pure counterdiabatic hamiltonian has the e^{i pi/2} 0-2 element") {
    ProtocolConfig p = fig2_config();
    p.stirap.omega01_peak = 0.0;  // constant mixing angle, no stirap drive
    p.stirap.omega12_peak = 0.0;
    const double t = -15.0;
    const Matrix3c h = hamiltonian_at(t, p);
    const double w = counterdiabatic_envelope(t, 20.0, -30.0);
    CHECK(h(0, 1) == Complex(0.0, 0.0));
    CHECK(h(1, 2) == Complex(0.0, 0.0));
    CHECK(h(0, 2).real() == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(h(0, 2).imag() == doctest::Approx(0.5 * w).epsilon(1e-12));
    CHECK(std::abs(h(2, 0) - std::conj(h(0, 2))) < 1e-15);
}

TEST_CASE("two-photon couplings keep the sqrt(2) ratio at all times") {
    ProtocolConfig p = fig2_config(false, CdMode::two_photon);
    p.stirap.omega01_peak = 0.0;
    p.stirap.omega12_peak = 0.0;
    for (double t : {-80.0, -40.0, -15.0, 0.0, 25.0, 55.0}) {
        const Matrix3c h = hamiltonian_at(t, p);
        CHECK(hermiticity_error(h) < 1e-12);
        if (std::abs(h(0, 1)) < 1e-15) continue;
        CHECK(std::abs(h(1, 2)) / std::abs(h(0, 1)) ==
              doctest::Approx(std::numbers::sqrt2).epsilon(1e-12));
    }
}

TEST_CASE("hamiltonian carries the accumulated stark phases") {
    ProtocolConfig p = fig2_config(false, CdMode::two_photon);
    p.stirap.omega01_peak = 0.0;  // isolate the two-photon tone on the 0-1 element
    p.stirap.omega12_peak = 0.0;
    const double t = 10.0;
    const Matrix3c h = hamiltonian_at(t, p);
    const PhaseCorrections corr = dynamic_phase(t, p);
    CHECK(corr.phi02 < 0.0);
    const double w = two_photon_envelope(t, p.stirap, p.cd);
    const double expected_arg = p.cd.phi_2ph + 0.5 * corr.phi02 - p.cd.delta * t;
    CHECK(std::abs(h(0, 1)) == doctest::Approx(0.5 * w).epsilon(1e-10));
    CHECK(std::arg(h(0, 1) * std::exp(Complex(0.0, -expected_arg))) ==
          doctest::Approx(0.0).epsilon(1e-7));
}

TEST_CASE("free evolution holds any state") {
    ProtocolConfig p = fig2_config();
    p.stirap.omega01_peak = 0.0;
    p.stirap.omega12_peak = 0.0;
    p.cd_enabled = false;
    QutritState rho0;
    rho0.rho = Matrix3c::Zero();
    rho0.rho(0, 0) = 0.25;
    rho0.rho(1, 1) = 0.5;
    rho0.rho(2, 2) = 0.25;
    rho0.rho(0, 2) = Complex(0.1, 0.05);
    rho0.rho(2, 0) = std::conj(rho0.rho(0, 2));
    const Trajectory traj = evolve(p, rho0, 10.0);
    for (const auto& s : traj.states)
        CHECK((s.rho - rho0.rho).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("excited-state decay follows the closed-form exponential") {
    ProtocolConfig p = fig2_config();
    p.stirap.omega01_peak = 0.0;
    p.stirap.omega12_peak = 0.0;
    p.cd_enabled = false;
    p.rates.gamma01 = 0.012;
    QutritState rho0;
    rho0.rho = Matrix3c::Zero();
    rho0.rho(1, 1) = 1.0;
    const Trajectory traj = evolve(p, rho0, 10.0);
    const auto [t0, t1] = p.window();
    for (size_t i = 0; i < traj.times.size(); ++i) {
        const double expected = std::exp(-p.rates.gamma01 * (traj.times[i] - t0));
        CHECK(traj.states[i].rho(1, 1).real() == doctest::Approx(expected).epsilon(1e-8));
    }

    // measured transmon relaxation: gamma12 = 0.83 MHz on |2><2|
    ProtocolConfig p2 = p;
    p2.rates = DecoherenceRates{};
    p2.rates.gamma12 = rate_from_mhz(0.83);
    QutritState r2;
    r2.rho = Matrix3c::Zero();
    r2.rho(2, 2) = 1.0;
    const Trajectory tr2 = evolve(p2, r2, 25.0);
    for (size_t i = 0; i < tr2.times.size(); ++i) {
        const double expected = std::exp(-rate_from_mhz(0.83) * (tr2.times[i] - t0));
        CHECK(tr2.states[i].rho(2, 2).real() == doctest::Approx(expected).epsilon(1e-8));
    }
}

TEST_CASE("ideal saSTIRAP reaches the no-decoherence transfer benchmark") {
    const Trajectory traj = evolve(fig2_config(), QutritState::ground(), 0.5);
    const Populations p = traj.final_populations();
    CHECK(p.p2 == doctest::Approx(0.999948).epsilon(2e-5));  // oracle golden
    CHECK(std::abs(p.p2 - 0.9997) < 0.0005);
    // almost no population in |1> along the way
    CHECK(traj.max_p1() < 0.02);
    CHECK(traj.max_p1() < 1e-3);
}

TEST_CASE("ideal saSTIRAP matches the independent reference along the trajectory") {
    // interior-state golden values from the scipy oracle (DOP853, tol 1e-12)
    const Trajectory traj = evolve(fig2_config(), QutritState::ground(), 0.5);
    struct Ref {
        double t, p0, p2, re02;
    };
    const Ref refs[] = {{-40.0, 0.978763788, 0.021235494, -0.144168416},
                        {-15.0, 0.496390184, 0.503586946, -0.499975616},
                        {0.0, 0.092082135, 0.907913463, -0.289141159},
                        {10.0, 0.022246686, 0.977723524, -0.147482568},
                        {30.0, 0.001394004, 0.998580041, -0.037309850}};
    for (const Ref& r : refs) {
        size_t k = 0;
        while (k < traj.times.size() && std::abs(traj.times[k] - r.t) > 1e-9) ++k;
        REQUIRE(k < traj.times.size());
        const Matrix3c& rho = traj.states[k].rho;
        CHECK(rho(0, 0).real() == doctest::Approx(r.p0).epsilon(1e-7));
        CHECK(rho(2, 2).real() == doctest::Approx(r.p2).epsilon(1e-7));
        CHECK(rho(0, 2).real() == doctest::Approx(r.re02).epsilon(1e-6));
        CHECK(std::abs(rho(0, 2).imag()) < 1e-7);
    }
}

TEST_CASE("trajectory invariants: trace, hermiticity, purity") {
    const Trajectory traj = evolve(fig2_config(), QutritState::ground(), 0.5);
    for (const auto& s : traj.states) {
        CHECK(std::abs(s.rho.trace().real() - 1.0) < 1e-9);
        CHECK(hermiticity_error(s.rho) < 1e-10);
        s.validate();
        CHECK(s.purity() == doctest::Approx(1.0).epsilon(1e-8));  // unitary case
    }
    CHECK(traj.times.size() == traj.states.size());
    for (size_t i = 1; i < traj.times.size(); ++i) CHECK(traj.times[i] > traj.times[i - 1]);
}

TEST_CASE("plain STIRAP: adiabatic limit and the fig2 operating point") {
    // wide pulses: global adiabatic condition comfortably satisfied
    ProtocolConfig wide = fig2_config();
    wide.stirap.sigma = 80.0;
    wide.stirap.t_s = -120.0;
    const Populations pw = run_stirap(wide, QutritState::ground(), 2.0).final_populations();
    CHECK(pw.p2 > 0.99);
    CHECK(pw.p2 == doctest::Approx(0.997538).epsilon(2e-5));  // oracle golden

    // sigma = 20 ns leaves visible nonadiabatic loss
    const Populations pn = run_stirap(fig2_config(), QutritState::ground(), 1.0)
                               .final_populations();
    CHECK(pn.p2 == doctest::Approx(0.849378).epsilon(2e-5));  // oracle golden

    // with the transmon relaxation rates the transferred population drops to ~0.8
    const Populations pd = run_stirap(fig2_config(true), QutritState::ground(), 1.0)
                               .final_populations();
    CHECK(std::abs(pd.p2 - 0.80) < 0.03);
    CHECK(pd.p2 == doctest::Approx(0.797979).epsilon(1e-4));  // oracle golden
}

TEST_CASE("intuitive pulse ordering transfers far less population") {
    ProtocolConfig p = fig2_config();
    p.stirap.t_s = +30.0;
    const Populations pops = run_stirap(p, QutritState::ground(), 1.0).final_populations();
    CHECK(pops.p2 == doctest::Approx(0.545728553).epsilon(1e-4));  // oracle golden
    CHECK(pops.p2 < 0.849378 - 0.25);
}

TEST_CASE("two-photon mode reproduces the ideal effective dynamics") {
    const double ideal = evolve(fig2_config(), QutritState::ground(), 2.0)
                             .final_populations().p2;

    ProtocolConfig tp = fig2_config(false, CdMode::two_photon);
    const Populations p185 = evolve(tp, QutritState::ground(), 2.0).final_populations();
    CHECK(std::abs(p185.p2 - ideal) < 0.01);
    CHECK(p185.p2 == doctest::Approx(0.99917).epsilon(2e-4));  // oracle golden

    tp.cd.delta = rabi_from_mhz(150.0);
    const Populations p150 = evolve(tp, QutritState::ground(), 2.0).final_populations();
    CHECK(std::abs(p150.p2 - ideal) < 0.01);

    // without the dynamical phase correction the agreement degrades
    ProtocolConfig nostark = fig2_config(false, CdMode::two_photon);
    nostark.stark_correction = false;
    const Populations pns = evolve(nostark, QutritState::ground(), 2.0).final_populations();
    CHECK(pns.p2 == doctest::Approx(0.94108).epsilon(2e-3));  // oracle golden
    CHECK(std::abs(pns.p2 - ideal) > 0.02);
}

TEST_CASE("trajectory csv has the declared columns") {
    const Trajectory traj = evolve(fig2_config(), QutritState::ground(), 25.0);
    std::ostringstream os;
    write_trajectory_csv(os, traj);
    const std::string s = os.str();
    CHECK(s.rfind("t_ns,p0,p1,p2,re01,im01,re02,im02,re12,im12,omega01,omega12,omega02", 0) == 0);
    // two-photon runs append the raw tone envelope
    const Trajectory tp =
        evolve(fig2_config(false, CdMode::two_photon), QutritState::ground(), 25.0);
    std::ostringstream os2;
    write_trajectory_csv(os2, tp);
    CHECK(os2.str().find(",omega_2ph") != std::string::npos);
}

TEST_CASE("step underflow reports the failure time") {
    using S1 = Eigen::Matrix<Complex, 1, 1>;
    Rk45<S1> stepper(1e-10, 1e-10);
    S1 y;
    y[0] = 1.0;
    const auto bad_rhs = [](double, const S1&) {
        S1 d;
        d[0] = std::numeric_limits<double>::quiet_NaN();
        return d;
    };
    CHECK_THROWS_AS(stepper.integrate(y, 0.0, 1.0, bad_rhs), IntegratorError);
}

TEST_CASE("window covers the pulse supports by default") {
    ProtocolConfig p = fig2_config();
    const auto [a, b] = p.window();
    CHECK(a == doctest::Approx(-91.0));
    CHECK(b == doctest::Approx(61.0));
    p.t_end = 20.0;  // explicit early cut, used by the phase-plane preset
    CHECK(p.window().second == doctest::Approx(20.0));
}
