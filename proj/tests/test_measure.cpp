#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "qcover/errors.hpp"
#include "qcover/measure.hpp"

using namespace qcover;
using testing::mu_oracle;

namespace {

Event ev(int n, std::initializer_list<int> labels) { return Event::from_labels(HistorySpace(n), labels); }

DecoherenceFunctional sample(int n, std::uint64_t seed, int rank = 0) {
    return sample_spd({.n = n, .rank = rank > 0 ? rank : n, .seed = seed});
}

}  // namespace

TEST_CASE("hermitian check") {
    ComplexMatrix m(2, 2);
    m << 1.0, std::complex<double>(0, 1), 0.0, 1.0;
    CHECK_THROWS_AS(DecoherenceFunctional{m}, InvalidArgument);
    const auto h = DecoherenceFunctional::hermitized(m);
    CHECK(h.entries()(0, 1) == std::complex<double>(0, 0.5));
    CHECK(h.entries()(1, 0) == std::complex<double>(0, -0.5));
}

TEST_CASE("two-slit destructive interference") {
    const auto d = testing::two_slit();
    CHECK(mu(d, ev(2, {1})) == doctest::Approx(0.5));
    CHECK(mu(d, ev(2, {2})) == doctest::Approx(0.5));
    CHECK(std::abs(mu(d, ev(2, {1, 2}))) < 1e-15);
    const std::vector<Event> parts{ev(2, {1}), ev(2, {2})};
    CHECK(interference(d, parts) == doctest::Approx(-1.0));
    CHECK(measure_level(d, 2) == 2);
}

TEST_CASE("three-slit values") {
    const auto d = testing::three_slit();
    CHECK(std::abs(mu(d, ev(3, {1, 2}))) < 1e-15);
    CHECK(std::abs(mu(d, ev(3, {2, 3}))) < 1e-15);
    CHECK(mu(d, ev(3, {1, 3})) == doctest::Approx(4.0 / 3.0));
    CHECK(mu(d, Event::omega(HistorySpace(3))) == doctest::Approx(1.0 / 3.0));
    const auto ex = testing::three_slit_exact();
    CHECK(mu_exact(ex, 0b101) == Rational(4, 3));
    CHECK(mu_exact(ex, 0b011) == 0);
    CHECK(mu_exact(ex, 0b111) == Rational(1, 3));
}

TEST_CASE("classical functional has level 1") {
    const std::vector<double> w{0.2, 0.3, 0.5};
    const auto d = DecoherenceFunctional::diagonal(w);
    CHECK(measure_level(d, 3) == 1);
    CHECK(validate(d).normalized);
    const std::vector<Event> parts{ev(3, {1}), ev(3, {2, 3})};
    CHECK(std::abs(interference(d, parts)) < 1e-15);
}

TEST_CASE("interference argument checks") {
    const auto d = testing::three_slit();
    const std::vector<Event> one{ev(3, {1})};
    CHECK_THROWS_AS(interference(d, one), InvalidArgument);
    const std::vector<Event> overlap{ev(3, {1, 2}), ev(3, {2})};
    CHECK_THROWS_AS(interference(d, overlap), InvalidArgument);
}

TEST_CASE("mu agrees with the quadratic-form oracle") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const int n = 3 + static_cast<int>(seed % 5);
        const auto d = sample(n, seed);
        const auto table = measure_table(d, Exec::serial);
        for (Mask m = 0; m < (Mask{1} << n); ++m) CHECK(table[m] == doctest::Approx(mu_oracle(d, m)).epsilon(1e-12));
    }
}

TEST_CASE("sample_spd is reproducible and positive") {
    const auto a = sample(5, 7), b = sample(5, 7), c = sample(5, 8);
    CHECK(a.entries() == b.entries());
    CHECK(a.entries() != c.entries());
    CHECK(is_strongly_positive(a));
    const auto norm = sample_spd({.n = 5, .rank = 3, .seed = 7, .normalize = true});
    CHECK(mu(norm, Event::omega(HistorySpace(5))) == doctest::Approx(1.0));
}

TEST_CASE("sample_spd annihilation") {
    const HistorySpace s(4);
    const std::vector<Event> zeros{ev(4, {1, 2}), ev(4, {3})};
    const auto d = sample_spd({.n = 4, .rank = 4, .seed = 3, .annihilate = zeros});
    for (const auto& z : zeros) CHECK(std::abs(mu(d, z)) < 1e-12);
    CHECK(mu(d, Event::omega(s)) > 1e-6);
    const std::vector<Event> covering{ev(4, {1, 2}), ev(4, {3, 4})};
    CHECK_THROWS_AS(sample_spd({.n = 4, .rank = 2, .seed = 3, .annihilate = covering, .normalize = true}),
                    InfeasibleNormalization);
}

TEST_CASE("level-2 identity and vanishing third interference") {
    for (int n = 3; n <= 8; ++n)
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            const auto d = sample(n, seed);
            CHECK(verify_identity(d, Exec::serial) <= 1e-10 * std::max(1.0, d.max_abs_entry()));
            if (n <= 6) CHECK(max_interference(d, 3) <= 1e-10 * std::max(1.0, d.max_abs_entry()) * n * n);
        }
}

TEST_CASE("generic sample is level 2, not level 1") {
    const auto d = sample(4, 11);
    CHECK(measure_level(d, 3) == 2);
    CHECK(max_interference(d, 2) > 1e-6);
}

TEST_CASE("strong positivity consequences") {
    const double tol = 1e-9;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const int n = 3 + static_cast<int>(seed % 4);
        // Low rank makes zero-measure events plausible; annihilate one to force them.
        const Event z(HistorySpace(n), static_cast<Mask>(seed % ((1u << n) - 1) + 1));
        const std::vector<Event> zeros{z};
        const auto d = sample_spd({.n = n, .rank = 2, .seed = seed, .annihilate = zeros});
        const auto table = measure_table(d, Exec::serial);
        const Mask full = (Mask{1} << n) - 1;
        for (Mask a = 1; a <= full; ++a) {
            for (Mask b = 1; b <= full; ++b) {
                if (a & b) continue;
                const double ma = table[a], mb = table[b], mab = table[a | b];
                const double re = 0.5 * (mab - ma - mb);
                CHECK(ma * mb >= re * re - tol);
                const double lo = std::sqrt(std::max(ma, 0.0)) - std::sqrt(std::max(mb, 0.0));
                const double hi = std::sqrt(std::max(ma, 0.0)) + std::sqrt(std::max(mb, 0.0));
                CHECK(lo * lo <= mab + tol);
                CHECK(mab <= hi * hi + tol);
                if (mab <= tol) CHECK(std::abs(ma - mb) <= 1e-7);
                if (ma <= tol) CHECK(std::abs(mab - mb) <= 1e-7);
            }
            // Kernel property: mu(A) ~ 0 iff D chi_A ~ 0.
            const Eigen::VectorXcd chi = testing::indicator(n, a).cast<std::complex<double>>();
            const double kernel = (d.entries() * chi).norm();
            CHECK((table[a] <= tol) == (kernel <= 1e-4));
        }
        CHECK(table[z.mask()] <= 1e-12);
    }
}

TEST_CASE("validate report") {
    const auto r = validate(testing::three_slit());
    CHECK(r.hermitian);
    CHECK(r.strongly_positive);
    CHECK(r.weakly_positive == true);
    CHECK_FALSE(r.normalized);
    CHECK(r.mu_omega == doctest::Approx(1.0 / 3.0));
    CHECK(r.measure_level == 2);
    CHECK(r.identity_residual < 1e-12);

    ComplexMatrix m(2, 2);
    m << 1.0, 2.0, 2.0, 1.0;
    const auto bad = validate(DecoherenceFunctional(m));
    CHECK_FALSE(bad.strongly_positive);
    CHECK(bad.min_eigenvalue == doctest::Approx(-1.0));
}

TEST_CASE("alternating binomial sum vanishes") {
    CHECK(alternating_binomial_sum(2) == 1);
    for (int n = 3; n <= 24; ++n) CHECK(alternating_binomial_sum(n) == 0);
}

TEST_CASE("measure_level search budget") {
    const auto d = sample(12, 1);
    CHECK_THROWS_AS(measure_level(d, 3, 1e-9, {.max_tuples = 1000}), ResourceLimit);
}

TEST_CASE("pair inequality kernel") {
    ComplexMatrix m(2, 2);
    m << 1.0, 2.0, 2.0, 1.0;
    const auto bad = pair_inequalities(DecoherenceFunctional(m), 1e-9, Exec::serial);
    CHECK(bad.pairs == 2);
    CHECK(bad.cauchy_schwarz == doctest::Approx(3.0));
    CHECK(bad.sandwich == doctest::Approx(2.0));

    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const int n = 3 + static_cast<int>(seed % 5);
        const std::vector<Event> zeros{Event(HistorySpace(n), 0b101)};
        const auto d = sample_spd({.n = n, .rank = 2, .seed = seed, .annihilate = zeros});
        const auto r = pair_inequalities(d, 1e-9, Exec::serial);
        std::uint64_t expected_pairs = 1;
        for (int i = 0; i < n; ++i) expected_pairs *= 3;
        CHECK(r.pairs == expected_pairs - 2 * (std::uint64_t{1} << n) + 1);
        CHECK(r.cauchy_schwarz <= 1e-9);
        CHECK(r.sandwich <= 1e-9);
        CHECK(r.first <= 1e-7);
        CHECK(r.second <= 1e-7);
    }
}
