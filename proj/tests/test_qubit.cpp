#include <catch_amalgamated.hpp>

#include "oracle.hpp"
#include "varunc/qubit.hpp"
#include "varunc/random.hpp"

using namespace varunc;
using Catch::Approx;

namespace {

const PauliObservable X = PauliObservable::sigma_x();
const PauliObservable Y = PauliObservable::sigma_y();
const PauliObservable Z = PauliObservable::sigma_z();
const PauliObservable I = PauliObservable::identity();

double max_abs(const Mat2& m) { return m.cwiseAbs().maxCoeff(); }

Mat2 as_mat(const oracle::M2& m) { return m; }

}  // namespace

TEST_CASE("bloch_to_matrix builds (I + p.sigma)/2", "[qubit]") {
    SECTION("zero vector is maximally mixed") {
        CHECK(max_abs(bloch_to_matrix({0, 0, 0}).matrix() - Mat2::Identity() / 2.0) == 0.0);
    }
    SECTION("north pole is |0><0|") {
        const Mat2 m = bloch_to_matrix({0, 0, 1}).matrix();
        CHECK(m(0, 0) == cplx(1.0));
        CHECK(m(1, 1) == cplx(0.0));
        CHECK(std::abs(m(0, 1)) == 0.0);
    }
    SECTION("(0.6, 0, 0) has off-diagonal 0.3 and diagonal 0.5") {
        const Mat2 m = bloch_to_matrix({0.6, 0, 0}).matrix();
        CHECK(m(0, 0).real() == Approx(0.5).margin(1e-15));
        CHECK(m(1, 1).real() == Approx(0.5).margin(1e-15));
        CHECK(std::abs(m(0, 1) - 0.3) < 1e-15);
        CHECK(std::abs(m(1, 0) - 0.3) < 1e-15);
    }
    SECTION("matches the oracle matrix for a generic vector") {
        CHECK(max_abs(bloch_to_matrix({0.1, -0.4, 0.7}).matrix() - as_mat(oracle::rho(0.1, -0.4, 0.7))) < 1e-15);
    }
    SECTION("vectors outside the ball are rejected") {
        CHECK_THROWS_AS(bloch_to_matrix({1.0, 0.1, 0.0}), error);
        try {
            bloch_to_matrix({0, 0, 1.0 + 1e-9});
            FAIL("expected bloch_norm_exceeded");
        } catch (const error& e) {
            CHECK(e.code() == errc::bloch_norm_exceeded);
        }
        CHECK_NOTHROW(bloch_to_matrix({0, 0, 1.0 + 1e-13}));
    }
}

TEST_CASE("matrix_to_bloch inverts the parameterization", "[qubit]") {
    CHECK(matrix_to_bloch(Mat2::Identity() / 2.0) == BlochVector{0, 0, 0});
    Mat2 ground = Mat2::Zero();
    ground(0, 0) = 1.0;
    CHECK(matrix_to_bloch(ground) == BlochVector{0, 0, 1});
    const BlochVector b = matrix_to_bloch(as_mat(oracle::rho(0.6, 0, 0)));
    CHECK(b.px == Approx(0.6).margin(1e-15));
    CHECK(std::abs(b.py) < 1e-15);
    CHECK(std::abs(b.pz) < 1e-15);

    auto code_of = [](const Mat2& m) {
        try {
            matrix_to_bloch(m);
        } catch (const error& e) {
            return e.code();
        }
        FAIL("expected an error");
        return errc::invalid_params;
    };
    Mat2 skew = Mat2::Identity() / 2.0;
    skew(0, 1) = 0.1;
    CHECK(code_of(skew) == errc::not_hermitian);
    CHECK(code_of(Mat2::Identity()) == errc::trace_not_one);
    Mat2 negative = Mat2::Zero();
    negative(0, 0) = 1.5;
    negative(1, 1) = -0.5;
    CHECK(code_of(negative) == errc::not_positive);
}

TEST_CASE("decompose_observable recovers Pauli coefficients", "[qubit]") {
    CHECK(decompose_observable(as_mat(oracle::sx())) == X);
    CHECK(decompose_observable(Mat2::Identity()) == I);
    Mat2 m;
    m << 2.0, 1.0, 1.0, 0.0;
    const PauliObservable o = decompose_observable(m);
    CHECK(o == PauliObservable{1, 0, 1, 1});
    CHECK(max_abs(o.matrix() - m) == 0.0);

    Mat2 bad;
    bad << 1.0, cplx(0, 1), cplx(0, 1), 0.0;
    CHECK_THROWS_AS(decompose_observable(bad), error);
}

TEST_CASE("expectation and variance", "[qubit]") {
    const QubitState mixed = QubitState::maximally_mixed();
    const QubitState ground = QubitState::ground();
    const QubitState s06({0.6, 0, 0});

    CHECK(expectation(mixed, Z) == 0.0);
    CHECK(expectation(ground, Z) == 1.0);
    CHECK(expectation(s06, X + 2.0 * I) == Approx(2.6).margin(1e-15));
    CHECK(expectation(s06, X + 2.0 * I) == Approx(oracle::ev(oracle::rho(0.6, 0, 0), oracle::observable(1, 0, 0, 2))));

    CHECK(variance(ground, Z) == 0.0);
    CHECK(variance(ground, X) == 1.0);
    CHECK(variance(ground, X + 2.0 * I) == Approx(1.0).margin(1e-15));

    SECTION("agrees with the closed Bloch form on random inputs") {
        Engine rng(11);
        for (int k = 0; k < 1000; ++k) {
            const QubitState s = random_qubit_state(rng, StateKind::mixed);
            const PauliObservable o = random_observable(rng);
            const auto& p = s.bloch();
            const double ref = oracle::var(oracle::rho(p.px, p.py, p.pz), oracle::observable(o.a1, o.a2, o.a3, o.a4));
            REQUIRE(variance(s, o) == Approx(ref).margin(1e-12));
            REQUIRE(closed_form::variance(p, o) == Approx(ref).margin(1e-12));
            REQUIRE(expectation(s, o) == Approx(closed_form::expectation(p, o)).margin(1e-12));
        }
    }
}

TEST_CASE("variance clamps rounding noise but not genuine negatives", "[qubit]") {
    CHECK(varunc::detail::clamp_variance(-5e-13) == 0.0);
    CHECK(varunc::detail::clamp_variance(0.25) == 0.25);
    CHECK_THROWS_AS(varunc::detail::clamp_variance(-1e-9), error);
}

TEST_CASE("commutator term", "[qubit]") {
    CHECK(commutator_term(QubitState::maximally_mixed(), X, Z) == 0.0);
    CHECK(commutator_term(QubitState::ground(), X, Y) == Approx(1.0).margin(1e-15));
    CHECK(commutator_term(QubitState::ground(), X, Y) ==
          Approx(oracle::commutator_sq(oracle::rho(0, 0, 1), oracle::sx(), oracle::sy())));

    Engine rng(12);
    for (int k = 0; k < 200; ++k) {
        const QubitState s = random_qubit_state(rng, StateKind::mixed);
        const PauliObservable a = random_observable(rng);
        REQUIRE(std::abs(commutator_term(s, a, a)) < 1e-12);
    }
}

TEST_CASE("anticommutator term is the squared symmetrized covariance", "[qubit]") {
    CHECK(anticommutator_term(QubitState::maximally_mixed(), X, Z) == 0.0);

    // cov(sx, sx + sz) on (0.6, 0, 0): 1 - 0.6 * 0.6 = 0.64
    const QubitState s06({0.6, 0, 0});
    const double oracle_cov =
        oracle::covariance(oracle::rho(0.6, 0, 0), oracle::sx(), oracle::sx() + oracle::sz());
    CHECK(oracle_cov == Approx(0.64).margin(1e-15));
    CHECK(anticommutator_term(s06, X, X + Z) == Approx(0.4096).margin(1e-14));
    CHECK(anticommutator_term(s06, X, X + Z) == Approx(std::pow(variance(s06, X), 2)).margin(1e-14));

    SECTION("self case reduces to the squared variance") {
        Engine rng(13);
        for (int k = 0; k < 200; ++k) {
            const QubitState s = random_qubit_state(rng, StateKind::mixed);
            const PauliObservable a = random_observable(rng, -1, 1);
            REQUIRE(anticommutator_term(s, a, a) == Approx(std::pow(variance(s, a), 2)).margin(1e-12));
        }
    }

    SECTION("printed Bloch form matches only after squaring") {
        Engine rng(14);
        for (int k = 0; k < 200; ++k) {
            const QubitState s = random_qubit_state(rng, StateKind::mixed);
            const PauliObservable a = random_observable(rng, -1, 1);
            const PauliObservable b = random_observable(rng, -1, 1);
            const auto& p = s.bloch();
            const double cov = oracle::covariance(oracle::rho(p.px, p.py, p.pz),
                                                  oracle::observable(a.a1, a.a2, a.a3, a.a4),
                                                  oracle::observable(b.a1, b.a2, b.a3, b.a4));
            REQUIRE(std::abs(closed_form::covariance_form(p, a, b)) == Approx(std::abs(cov)).margin(1e-12));
            REQUIRE(anticommutator_term(s, a, b) == Approx(cov * cov).margin(1e-12));
        }
    }
}

TEST_CASE("xi trace form", "[qubit]") {
    CHECK(xi(X, X) == 4.0);
    CHECK(xi(X, Z) == 0.0);
    CHECK(xi(I, I) == 0.0);
    Engine rng(15);
    for (int k = 0; k < 500; ++k) {
        const PauliObservable a = random_observable(rng, -1, 1);
        const PauliObservable b = random_observable(rng, -1, 1);
        const double ref = oracle::xi(oracle::observable(a.a1, a.a2, a.a3, a.a4), oracle::observable(b.a1, b.a2, b.a3, b.a4));
        REQUIRE(xi(a, b) == Approx(ref).margin(1e-12));
        REQUIRE(closed_form::xi(a, b) == Approx(ref).margin(1e-12));
        REQUIRE(xi_gram(a, b) >= -1e-12);
    }
}

TEST_CASE("mixedness of a qubit", "[qubit]") {
    CHECK(mixedness(QubitState::maximally_mixed()) == 0.5);
    CHECK(mixedness(QubitState({0.6, 0, 0})) == Approx(0.32).margin(1e-15));
    CHECK(oracle::purity_defect(oracle::rho(0.6, 0, 0)) == Approx(0.32).margin(1e-15));
    Engine rng(16);
    for (int k = 0; k < 200; ++k) {
        const QubitState pure = random_qubit_state(rng, StateKind::pure);
        REQUIRE(std::abs(mixedness(pure)) < 1e-15);
        const QubitState s = random_qubit_state(rng, StateKind::mixed);
        REQUIRE(mixedness(s) >= 0.0);
        REQUIRE(mixedness(s) <= 0.5);
    }
}

TEST_CASE("random qubit states", "[qubit]") {
    SECTION("deterministic for a fixed seed") {
        CHECK(random_qubit_state(42, StateKind::mixed).bloch() == random_qubit_state(42, StateKind::mixed).bloch());
        CHECK(random_qubit_state(42, StateKind::pure).bloch() == random_qubit_state(42, StateKind::pure).bloch());
        CHECK_FALSE(random_qubit_state(42, StateKind::mixed).bloch() == random_qubit_state(43, StateKind::mixed).bloch());
    }
    SECTION("pure samples have zero mixedness") {
        Engine rng(17);
        double total = 0;
        const int n = 100000;
        for (int k = 0; k < n; ++k) total += mixedness(random_qubit_state(rng, StateKind::pure));
        CHECK(std::abs(total / n) < 1e-10);
    }
    SECTION("mixed samples are uniform in the ball: E|p|^3 = 1/2") {
        // |p|^3 is uniform on [0, 1]: mean 1/2, standard deviation 1/sqrt(12).
        Engine rng(18);
        const int n = 100000;
        double total = 0;
        for (int k = 0; k < n; ++k) total += std::pow(random_qubit_state(rng, StateKind::mixed).bloch().norm(), 3);
        const double sigma = 1.0 / std::sqrt(12.0 * n);
        CHECK(std::abs(total / n - 0.5) < 3 * sigma);
    }
    SECTION("pure directions are isotropic") {
        Engine rng(19);
        const int n = 100000;
        Vec3 mean = Vec3::Zero();
        for (int k = 0; k < n; ++k) mean += random_qubit_state(rng, StateKind::pure).bloch().vec();
        mean /= n;
        // each component has variance 1/3
        CHECK(mean.cwiseAbs().maxCoeff() < 4.0 / std::sqrt(3.0 * n));
    }
}
