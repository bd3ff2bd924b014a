#include <doctest.h>

#include <algorithm>

#include "oracles.hpp"
#include "qcover/antichain.hpp"
#include "qcover/errors.hpp"

using namespace qcover;

namespace {

const LambdaDecomposition* at_level(const std::vector<LambdaDecomposition>& ds, int k) {
    for (const auto& d : ds)
        if (d.k == k) return &d;
    return nullptr;
}

Antichain make(int n, std::initializer_list<std::initializer_list<int>> sets) {
    const HistorySpace s(n);
    std::vector<Event> es;
    for (auto l : sets) es.push_back(Event::from_labels(s, l));
    return Antichain(s, es);
}

}  // namespace

TEST_CASE("antichain construction validates") {
    const HistorySpace s(3);
    CHECK_THROWS_AS(Antichain(s, {Event::from_labels(s, {1}), Event::from_labels(s, {1, 2})}), InvalidArgument);
    CHECK_THROWS_AS(Antichain(s, {Event::from_labels(s, {1}), Event::from_labels(s, {1})}), InvalidArgument);
    CHECK_THROWS_AS(Antichain(s, {Event::empty(s)}), InvalidArgument);
    CHECK(make(3, {{2, 3}, {1, 2}}).to_string() == "{{1,2},{2,3}}");
}

TEST_CASE("is_inextendible") {
    const auto ac = make(3, {{1, 2}, {2, 3}});
    const auto r = is_inextendible(HistorySpace(3), ac);
    CHECK_FALSE(r.inextendible);
    REQUIRE(r.witness);
    CHECK(r.witness->labels() == std::vector<int>{1, 3});
    CHECK(is_inextendible(HistorySpace(3), make(3, {{1, 2}, {1, 3}, {2, 3}})).inextendible);
    CHECK(is_inextendible(HistorySpace(3), make(3, {{1, 2, 3}})).inextendible);
}

TEST_CASE("enumeration matches brute force for n <= 4") {
    for (int n = 1; n <= 4; ++n) {
        const HistorySpace s(n);
        const auto oracle = testing::brute_force_maximal_antichains(n);
        std::vector<std::vector<Mask>> got;
        for (const auto& ac : enumerate_inextendible(s)) got.push_back(ac.masks());
        std::sort(got.begin(), got.end());
        CHECK(got == oracle);
    }
    CHECK(testing::brute_force_maximal_antichains(3).size() == 6);
    CHECK(testing::brute_force_maximal_antichains(4).size() == 28);
}

TEST_CASE("enumeration regression counts") {
    const std::size_t expected[] = {1, 2, 6, 28, 375};
    for (int n = 1; n <= 5; ++n) CHECK(enumerate_inextendible(HistorySpace(n)).size() == expected[n - 1]);
}

TEST_CASE("enumeration limits") {
    CHECK_THROWS_AS(enumerate_inextendible(HistorySpace(6)), ResourceLimit);
    CHECK_THROWS_AS(enumerate_inextendible(HistorySpace(3), 7), ResourceLimit);
}

TEST_CASE("enumerated antichains are inextendible and cover omega") {
    for (int n = 1; n <= 5; ++n) {
        const HistorySpace s(n);
        auto all = enumerate_inextendible(s);
        CHECK(std::is_sorted(all.begin(), all.end()));
        for (const auto& ac : all) {
            CHECK(is_inextendible(s, ac).inextendible);
            Mask u = 0;
            for (auto m : ac.masks()) u |= m;
            CHECK(u == s.full_mask());
        }
    }
}

TEST_CASE("classify decomposes by level") {
    const auto ac = make(4, {{1}, {2, 3}, {2, 4}, {3, 4}});
    const auto ds = classify(HistorySpace(4), ac);
    REQUIRE(ds.size() == 2);
    const auto* d2 = at_level(ds, 2);
    REQUIRE(d2);
    CHECK(d2->lambda_k.size() == 3);
    CHECK(d2->lambda_lt.size() == 1);
    CHECK(d2->gamma_tilde == std::vector<int>{2, 3, 4});
    CHECK(d2->p == 3);
    CHECK(d2->s0 == 1);
    CHECK(d2->r() == 2);
    CHECK(d2->in_class_C);
}

TEST_CASE("generate level_k") {
    for (int n = 2; n <= 8; ++n) {
        const HistorySpace s(n);
        for (int k = 1; k <= n; ++k) {
            const auto ac = generate(s, Family::level_k, {.k = k});
            CHECK(ac.size() == binomial(n, k));
            const auto ds = classify(s, ac);
            REQUIRE(ds.size() == 1);
            CHECK(ds[0].lambda_lt.empty());
            CHECK(ds[0].lambda_gt.empty());
        }
    }
}

TEST_CASE("generated families reproduce stated pivot values") {
    for (int n = 5; n <= 9; ++n) {
        const HistorySpace s(n);
        {
            const auto ds = classify(s, generate(s, Family::A1));
            const auto* d = at_level(ds, n - 2);
            REQUIRE(d);
            CHECK(d->p == 0);
        }
        for (int m = 2; m <= n - 1; ++m) {
            if ((n - 1) % m != 0 || (m >= 3 && (n - 1) / m < 2)) continue;
            const auto ac = generate(s, m == 2 ? Family::A2 : Family::A3, {.m = m});
            const auto ds = classify(s, ac);
            const auto* d = at_level(ds, (n - 1) / m + 1);
            REQUIRE(d);
            CHECK(d->p == 1);
            const auto* alt = at_level(ds, 2);
            REQUIRE(alt);
            CHECK(alt->p == 0);
        }
        for (int l = 3; l <= n - 2; ++l) {
            const auto ac = generate(s, Family::A4, {.l = l});
            CHECK(is_inextendible(s, ac).inextendible);
            if (l <= n - 3) {
                const auto* d = at_level(classify(s, ac), l);
                REQUIRE(d);
                CHECK(d->p == 1);
                CHECK(d->s0 == 2);
            }
        }
    }
}

TEST_CASE("generate rejects bad parameters") {
    const HistorySpace s(6);
    CHECK_THROWS(generate(s, Family::A2));
    CHECK_THROWS(generate(s, Family::level_k, {.k = 7}));
    CHECK_THROWS(generate(HistorySpace(7), Family::A3, {.m = 4}));
    CHECK_THROWS(generate(s, Family::A4, {.l = 5}));
}

TEST_CASE("isomorphism") {
    CHECK(isomorphic(make(3, {{1, 2}, {3}}), make(3, {{2, 3}, {1}})));
    CHECK_FALSE(isomorphic(make(3, {{1, 2}, {3}}), make(3, {{1, 2}, {1, 3}, {2, 3}})));
    CHECK_FALSE(isomorphic(make(4, {{1, 2}, {3}, {4}}), make(4, {{1, 2}, {3, 4}})));
}
