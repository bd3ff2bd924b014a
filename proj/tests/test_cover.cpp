#include <doctest.h>

#include "oracles.hpp"
#include "qcover/cover.hpp"
#include "qcover/errors.hpp"

using namespace qcover;

namespace {

std::vector<Event> family(int n, std::initializer_list<std::initializer_list<int>> sets) {
    const HistorySpace s(n);
    std::vector<Event> es;
    for (auto l : sets) es.push_back(Event::from_labels(s, l));
    return es;
}

}  // namespace

TEST_CASE("three-slit pair is not a cover") {
    const HistorySpace s(3);
    const auto fam = family(3, {{1, 2}, {2, 3}});
    const auto v = decide(s, fam);
    CHECK(v.union_is_omega);
    CHECK_FALSE(v.is_cover);
    CHECK_FALSE(v.coefficients);
    REQUIRE(v.witness);
    const auto& w = *v.witness;
    CHECK(mu_exact(w, 0b011) == 0);
    CHECK(mu_exact(w, 0b110) == 0);
    CHECK(mu_exact(w, 0b111) == Rational(1, 3));
    // Projector onto (1,-1,1)/sqrt3.
    const Rational t(1, 3);
    CHECK(w.exact_real() == std::vector<Rational>{t, -t, t, -t, t, -t, t, -t, t});
    CHECK(is_strongly_positive(w));
}

TEST_CASE("level-2 triple is a cover with coefficients one half") {
    const auto v = decide(HistorySpace(3), family(3, {{1, 2}, {1, 3}, {2, 3}}));
    CHECK(v.is_cover);
    REQUIRE(v.coefficients);
    CHECK(*v.coefficients == std::vector<Rational>{Rational(1, 2), Rational(1, 2), Rational(1, 2)});
    CHECK(v.span_rank == 3);
}

TEST_CASE("non-covering family") {
    const auto v = decide(HistorySpace(4), family(4, {{1, 2}, {2, 3}}));
    CHECK_FALSE(v.union_is_omega);
    CHECK_FALSE(v.is_cover);
    CHECK(v.uncovered_label == 4);
}

TEST_CASE("decide input validation") {
    const HistorySpace s(3);
    CHECK_THROWS_AS(decide(s, std::vector<Event>{}), InvalidArgument);
    CHECK_THROWS_AS(decide(s, family(3, {{1, 2}, {1, 2}, {3}})), InvalidArgument);
    std::vector<Event> mixed{Event::from_labels(s, {1, 2, 3}), Event::from_labels(HistorySpace(4), {4})};
    CHECK_THROWS_AS(decide(s, mixed), InvalidArgument);
    std::vector<Event> with_empty{Event::omega(s), Event::empty(s)};
    CHECK_THROWS_AS(decide(s, with_empty), InvalidArgument);
}

TEST_CASE("decide agrees with a floating-point rank oracle") {
    for (int n = 1; n <= 5; ++n) {
        const HistorySpace s(n);
        for (const auto& ac : enumerate_inextendible(s)) {
            const auto v = decide(s, ac.elements());
            CHECK(v.is_cover == testing::span_oracle(n, ac.masks()));
        }
    }
    // Non-antichain families too.
    std::uint64_t state = 99;
    for (int trial = 0; trial < 300; ++trial) {
        const int n = 3 + trial % 4;
        std::vector<Mask> masks;
        Mask u = 0;
        while (masks.size() < 3 || u != (Mask{1} << n) - 1) {
            state = state * 6364136223846793005ULL + 1442695040888963407ULL;
            const Mask m = static_cast<Mask>((state >> 33) % ((1u << n) - 1) + 1);
            if (std::find(masks.begin(), masks.end(), m) != masks.end()) continue;
            masks.push_back(m);
            u |= m;
        }
        std::vector<Event> es;
        for (auto m : masks) es.emplace_back(HistorySpace(n), m);
        CHECK(decide(HistorySpace(n), es).is_cover == testing::span_oracle(n, masks));
    }
}

TEST_CASE("cover side soundness by annihilated sampling") {
    for (int n = 2; n <= 4; ++n) {
        const HistorySpace s(n);
        for (const auto& ac : enumerate_inextendible(s)) {
            REQUIRE(decide(s, ac.elements()).is_cover);
            const std::vector<Event> zeros(ac.elements().begin(), ac.elements().end());
            for (std::uint64_t seed = 0; seed < 20; ++seed) {
                const auto d = sample_spd({.n = n, .rank = n, .seed = seed, .annihilate = zeros});
                CHECK(mu(d, Event::omega(s)) <= 1e-7);
            }
        }
    }
}

TEST_CASE("non-cover witnesses validate") {
    std::uint64_t state = 5;
    int witnesses = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 3 + trial % 4;
        const HistorySpace s(n);
        std::vector<Event> es;
        Mask u = 0;
        while (u != s.full_mask()) {
            state = state * 6364136223846793005ULL + 1442695040888963407ULL;
            const Mask m = static_cast<Mask>((state >> 33) % s.full_mask() + 1);
            if (std::any_of(es.begin(), es.end(), [&](const Event& e) { return e.mask() == m; })) continue;
            es.emplace_back(s, m);
            u |= m;
        }
        const auto v = decide(s, es);
        if (v.is_cover) continue;
        ++witnesses;
        REQUIRE(v.witness);
        CHECK(is_strongly_positive(*v.witness));
        for (const auto& e : es) CHECK(std::abs(mu(*v.witness, e)) <= 1e-12);
        CHECK(mu(*v.witness, Event::omega(s)) >= 1e-6);
    }
    CHECK(witnesses > 10);
}

TEST_CASE("certificates") {
    SUBCASE("single level") {
        const HistorySpace s(5);
        const auto c = certificate_class_C(s, generate(s, Family::level_k, {.k = 3}));
        REQUIRE(c);
        CHECK(c->kind == CertificateKind::single_level);
        CHECK(c->pivot_k == 3);
    }
    SUBCASE("pivot with enough untouched labels") {
        const HistorySpace s(4);
        const Antichain ac(s, family(4, {{1}, {2, 3}, {2, 4}, {3, 4}}));
        const auto c = certificate_class_C(s, ac);
        REQUIRE(c);
        CHECK(c->kind == CertificateKind::pivot_bound);
        // Lowest qualifying pivot wins: at level 1, history 1 is untouched by the pairs.
        CHECK(c->pivot_k == 1);
        CHECK(c->p == 1);
    }
    SUBCASE("examples") {
        for (int n = 5; n <= 9; ++n) {
            const HistorySpace s(n);
            auto check_family = [&](Family f, FamilyParams params) {
                const auto ac = generate(s, f, params);
                const auto c = certificate_class_C(s, ac);
                REQUIRE(c);
                CHECK(decide(s, ac.elements()).is_cover);
            };
            check_family(Family::A1, {});
            if (n % 2 == 1) check_family(Family::A2, {.m = 2});
            for (int m = 3; m <= n - 1; ++m)
                if ((n - 1) % m == 0 && (n - 1) / m >= 2) check_family(Family::A3, {.m = m});
            for (int l = 3; l <= n - 2; ++l) check_family(Family::A4, {.l = l});
        }
    }
}

TEST_CASE("relabelled A1 is recognised") {
    const int n = 6;
    const HistorySpace s(n);
    const auto a1 = generate(s, Family::A1);
    // Swap labels 1 and 6.
    std::vector<Event> moved;
    for (const auto& e : a1.elements()) {
        Mask m = e.mask();
        const Mask b1 = m & 1U, b6 = (m >> 5) & 1U;
        m = (m & ~Mask{0b100001}) | (b1 << 5) | b6;
        moved.emplace_back(s, m);
    }
    const Antichain relabelled(s, moved);
    const auto c = certificate_class_C(s, relabelled);
    REQUIRE(c);
    CHECK(decide(s, relabelled.elements()).is_cover);
}

TEST_CASE("scan small spaces") {
    const std::size_t totals[] = {1, 2, 6, 28, 375};
    for (int n = 1; n <= 5; ++n) {
        const auto r = scan(HistorySpace(n), {.exec = Exec::serial});
        CHECK(r.total == totals[n - 1]);
        CHECK(r.covers == r.total);
        CHECK(r.counterexamples.empty());
        CHECK(r.certificate_conflicts.empty());
        std::size_t tallied = 0;
        for (const auto& [k, v] : r.certificate_tallies) tallied += v;
        CHECK(tallied == r.total);
    }
}

TEST_CASE("level indicator sums are uniform") {
    for (int n = 3; n <= 16; ++n) {
        const HistorySpace s(n);
        for (int k = 1; k <= n; ++k) {
            const auto sums = level_indicator_sum(s, k, Exec::serial);
            for (auto c : sums) CHECK(c == binomial(n - 1, k - 1));
        }
    }
}

TEST_CASE("level-sum identity and classical-cover inequality") {
    for (int n = 4; n <= 8; ++n)
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            const auto d = sample_spd({.n = n, .rank = 1 + static_cast<int>(seed % n), .seed = seed});
            for (int k = 2; k <= n - 1; ++k) {
                const auto c = level_sum_check(d, k);
                CHECK(c.residual <= 1e-9 * std::max(1.0, std::abs(c.lhs)));
                CHECK(c.inequality_ok);
                // Direct oracle for the left-hand side.
                double lhs = 0.0;
                for (Mask m : testing::masks_of_level(n, k)) lhs += testing::mu_oracle(d, m);
                CHECK(c.lhs == doctest::Approx(lhs).epsilon(1e-10));
            }
        }
    CHECK_THROWS_AS(level_sum_check(testing::three_slit(), 3), RangeError);
}

TEST_CASE("certificate values on small cases") {
    const HistorySpace s4(4);
    const auto lvl = certificate_class_C(s4, generate(s4, Family::level_k, {.k = 2}));
    REQUIRE(lvl);
    CHECK(lvl->kind == CertificateKind::single_level);
    CHECK(lvl->pivot_k == 2);

    const Antichain mixed(s4, family(4, {{1, 2, 3}, {1, 4}, {2, 4}, {3, 4}}));
    const auto c = certificate_class_C(s4, mixed);
    REQUIRE(c);
    CHECK(c->kind == CertificateKind::pivot_bound);
    CHECK(c->pivot_k == 2);
    CHECK(c->s0 == 2);
    CHECK(c->p == 1);

    const HistorySpace s5(5);
    const auto a1 = certificate_class_C(s5, generate(s5, Family::A1));
    REQUIRE(a1);
    CHECK(a1->kind == CertificateKind::example_A1);
    CHECK(a1->p == 0);
}

TEST_CASE("extendible antichains get no certificate") {
    const HistorySpace s(3);
    const Antichain pair(s, family(3, {{1, 2}, {2, 3}}));
    CHECK_FALSE(certificate_class_C(s, pair));
    CHECK_FALSE(decide(s, pair.elements()).is_cover);
}
