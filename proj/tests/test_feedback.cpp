#include <catch_amalgamated.hpp>

#include <numbers>

#include "varunc/feedback.hpp"

using namespace varunc;
using Catch::Approx;

namespace {

constexpr double pi = std::numbers::pi;

double max_abs(const Mat2& m) { return m.cwiseAbs().maxCoeff(); }

double max_deviation(const FeedbackParams& p, double t_end, double h) {
    const Trajectory traj = integrate(p, t_end, h);
    double worst = 0;
    for (std::size_t k = 0; k < traj.size(); ++k) {
        worst = std::max(worst, max_abs(traj.states[k].matrix() - analytic_state(p, traj.times[k]).matrix()));
    }
    return worst;
}

}  // namespace

TEST_CASE("closed-form state at a reference point", "[feedback]") {
    // Frozen from an independent solution of the master equation.
    const QubitState s = analytic_state({0.0, 0.4, 0.9}, 1.3);
    CHECK(s.excited_population() == Approx(0.20973569654532712).margin(1e-14));
    CHECK(s.coherence().real() == Approx(0.2541965214543413).margin(1e-14));
    CHECK(s.coherence().imag() == Approx(-0.2162702285628766).margin(1e-14));
    CHECK(s.matrix()(1, 1).real() == Approx(s.excited_population()).margin(1e-15));
    CHECK(std::abs(s.matrix()(1, 0) - s.coherence()) < 1e-15);
}

TEST_CASE("closed form at t = 0 is the initial state", "[feedback]") {
    for (const double alpha : {0.0, 0.3, pi / 4, 1.2, pi / 2}) {
        for (const double lambda : {0.0, 0.5, 1.0}) {
            const FeedbackParams p{0.0, lambda, alpha};
            REQUIRE(max_abs(analytic_state(p, 0.0).matrix() - initial_state(alpha).matrix()) < 1e-15);
        }
    }
    const Mat2 rho = initial_state(pi / 4).matrix();
    CHECK(rho(0, 0).real() == Approx(0.5).margin(1e-15));
    CHECK(rho(1, 0).real() == Approx(0.5).margin(1e-15));
}

TEST_CASE("ground state is stationary without feedback", "[feedback]") {
    for (const double t : {0.0, 0.5, 3.0, 50.0}) {
        const QubitState s = analytic_state({0.0, 0.0, 0.0}, t);
        REQUIRE(s.excited_population() == 0.0);
        REQUIRE(std::abs(s.coherence()) == 0.0);
    }
    const Trajectory traj = integrate({0.0, 0.0, 0.0}, 1.0, 1e-3);
    CHECK(traj.states.back().excited_population() == Approx(0.0).margin(1e-15));
}

TEST_CASE("feedback excites an initial ground state", "[feedback]") {
    // rho11 = lambda^2 (1 - e^{-(1 + 2 lambda^2) t}) / (1 + 2 lambda^2), coherence stays 0.
    const double lambda = 0.6;
    const double k = 1 + 2 * lambda * lambda;
    for (const double t : {0.1, 1.0, 4.0}) {
        const QubitState s = analytic_state({0.0, lambda, 0.0}, t);
        REQUIRE(s.excited_population() == Approx(lambda * lambda * (1 - std::exp(-k * t)) / k).margin(1e-15));
        REQUIRE(std::abs(s.coherence()) == 0.0);
    }
}

TEST_CASE("steady state", "[feedback]") {
    CHECK(std::abs(analytic_state({0.0, 1.0, pi / 4}, 20.0).excited_population() - 1.0 / 3.0) < 1e-6);
    CHECK(std::abs(analytic_state({0.0, 1.0 / std::numbers::sqrt2, 0.3}, 20.0).excited_population() - 0.25) < 1e-6);
    CHECK(steady_state({0.0, 1.0, 0.0}).excited_population() == Approx(1.0 / 3.0).margin(1e-15));
    CHECK(steady_state({0.0, 0.0, 0.0}).excited_population() == 0.0);
    CHECK(max_abs(master_rhs(steady_state({0.0, 0.8, 0.0}).matrix(), {0.0, 0.8, 0.0})) < 1e-15);

    SECTION("long times do not overflow") {
        const QubitState s = analytic_state({0.0, 1.0, 0.7}, 1e4);
        CHECK(s.excited_population() == Approx(1.0 / 3.0).margin(1e-15));
        CHECK(std::abs(s.coherence()) < 1e-300);
    }
}

TEST_CASE("small-lambda coherence limit is continuous", "[feedback]") {
    const double alpha = 0.4;
    const double t = 2.0;
    const cplx at_limit = analytic_state({0.0, 1e-6, alpha}, t).coherence();
    const cplx just_above = analytic_state({0.0, 2e-6, alpha}, t).coherence();
    CHECK(std::abs(at_limit - just_above) < 1e-5);
    CHECK(at_limit.real() == Approx(std::exp(-0.5 * t) * std::sin(2 * alpha) / 2).margin(1e-15));
}

TEST_CASE("without feedback the generator is plain decay", "[feedback]") {
    const QubitState s({0.3, -0.4, 0.2});
    for (const double omega : {0.0, 0.7}) {
        const Mat2 diff = master_rhs(s.matrix(), {omega, 0.0, 0.0}) - bare_rhs(s.matrix(), omega);
        REQUIRE(max_abs(diff) < 1e-15);
    }
    // d rho11/dt = -rho11 for pure decay
    CHECK(master_rhs(s.matrix(), {}).coeff(1, 1).real() == Approx(-s.excited_population()).margin(1e-15));
}

TEST_CASE("generator preserves trace and hermiticity", "[feedback]") {
    const QubitState s({0.1, 0.5, -0.3});
    const Mat2 d = master_rhs(s.matrix(), {0.4, 0.9, 0.0});
    CHECK(std::abs(d.trace()) < 1e-15);
    CHECK(max_abs(d - d.adjoint()) < 1e-15);
}

TEST_CASE("closed form solves the master equation", "[feedback]") {
    // Central difference of the closed form against the generator.
    const double eps = 1e-5;
    for (const double lambda : {0.2, 0.7, 1.0}) {
        for (const double alpha : {0.0, 0.5, 1.3}) {
            const FeedbackParams p{0.0, lambda, alpha};
            for (const double t : {0.3, 1.7}) {
                const Mat2 derivative =
                    (analytic_state(p, t + eps).matrix() - analytic_state(p, t - eps).matrix()) / (2 * eps);
                REQUIRE(max_abs(derivative - master_rhs(analytic_state(p, t).matrix(), p)) < 1e-9);
            }
        }
    }
}

TEST_CASE("RK4 tracks the closed form", "[feedback]") {
    for (const double alpha : {0.0, pi / 8, pi / 4, pi / 2}) {
        for (const double lambda : {0.2, 0.6, 1.0}) {
            REQUIRE(max_deviation({0.0, lambda, alpha}, 5.0, 1e-3) <= 1e-6);
        }
    }
}

TEST_CASE("RK4 is fourth order", "[feedback]") {
    const FeedbackParams p{0.0, 1.0, pi / 4};
    const double ratio = max_deviation(p, 5.0, 1e-2) / max_deviation(p, 5.0, 5e-3);
    CHECK(ratio >= 8.0);
    CHECK(ratio <= 32.0);
}

TEST_CASE("trajectory bookkeeping", "[feedback]") {
    const Trajectory traj = integrate({0.5, 0.3, 0.2}, 1.0, 1e-2);
    CHECK(traj.size() == 101);
    CHECK(traj.times.front() == 0.0);
    CHECK(traj.times.back() == 1.0);
    CHECK(traj.min_eigenvalue >= -1e-12);
    CHECK(std::abs(mixedness(traj.states.front())) < 1e-15);
    for (const auto& s : traj.states) REQUIRE(s.bloch().norm_squared() <= 1.0 + 1e-12);

    const std::vector<double> grid = time_grid(0.025, 1e-2);
    REQUIRE(grid.size() == 4);
    CHECK(grid[1] == Approx(0.025 / 3).margin(1e-17));
    CHECK(grid.back() == 0.025);

    const std::vector<double> times{0.0, 0.37, 1.0};
    const auto sampled = integrate_at({0.0, 0.5, 0.6}, times, 1e-3);
    REQUIRE(sampled.size() == 3);
    CHECK(max_abs(sampled[1].matrix() - analytic_state({0.0, 0.5, 0.6}, 0.37).matrix()) < 1e-9);
}

TEST_CASE("invalid dynamics inputs", "[feedback]") {
    auto code_of = [](auto&& f) {
        try {
            f();
        } catch (const error& e) {
            return e.code();
        }
        return errc::bad_dimension;
    };
    CHECK(code_of([] { integrate({0.0, 1.0, 0.0}, 1.0, 0.05); }) == errc::step_too_large);
    CHECK(code_of([] { integrate({0.0, 1.0, 0.0}, 1.0, 0.0); }) == errc::step_too_large);
    CHECK(code_of([] { integrate({0.0, 1.0, 0.0}, -1.0, 1e-3); }) == errc::non_positive_time);
    CHECK(code_of([] { analytic_state({0.0, 1.0, 0.0}, -0.1); }) == errc::negative_time);
    CHECK(code_of([] { analytic_state({0.5, 1.0, 0.0}, 1.0); }) == errc::invalid_params);
    CHECK(code_of([] { analytic_state({0.0, -1.0, 0.0}, 1.0); }) == errc::invalid_params);
    const std::vector<double> backwards{1.0, 0.5};
    CHECK(code_of([&] { integrate_at({0.0, 1.0, 0.0}, backwards, 1e-3); }) == errc::negative_time);
    Mat2 broken = Mat2::Zero();
    broken(0, 0) = 1.5;
    broken(1, 1) = -0.5;
    CHECK(code_of([&] { varunc::detail::hygiene(broken); }) == errc::positivity_lost);
}
