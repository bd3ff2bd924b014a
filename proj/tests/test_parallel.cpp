#include <doctest.h>

#include "qcover/coevent.hpp"
#include "qcover/cover.hpp"
#include "qcover/json_io.hpp"
#include "qcover/pks.hpp"

using namespace qcover;

// Each parallel kernel must reproduce its serial reference exactly.

TEST_CASE("measure_table") {
    for (int n : {4, 9, 14}) {
        const auto d = sample_spd({.n = n, .rank = 3, .seed = static_cast<std::uint64_t>(n)});
        CHECK(measure_table(d, Exec::serial) == measure_table(d, Exec::parallel));
    }
}

TEST_CASE("verify_identity") {
    const auto d = sample_spd({.n = 12, .rank = 4, .seed = 1});
    CHECK(verify_identity(d, Exec::serial) == verify_identity(d, Exec::parallel));
}

TEST_CASE("level_indicator_sum") {
    for (int k : {1, 5, 11, 20}) {
        const HistorySpace s(20);
        CHECK(level_indicator_sum(s, k, Exec::serial) == level_indicator_sum(s, k, Exec::parallel));
    }
}

TEST_CASE("scan report independent of worker count") {
    const HistorySpace s(5);
    const auto serial = io::to_json(scan(s, {.exec = Exec::serial}), false).dump();
    for (int w : {1, 2, 3, 8}) {
        set_workers(w);
        CHECK(io::to_json(scan(s, {.exec = Exec::parallel}), false).dump() == serial);
    }
    set_workers(0);
}

TEST_CASE("coloring sampling") {
    const auto s = pks::orthogonal_structure();
    CHECK(pks::count_uncovered_samples(s, 5000, 3, Exec::serial) ==
          pks::count_uncovered_samples(s, 5000, 3, Exec::parallel));
    CHECK(pks::sample_coloring(3, 17, 33) == pks::sample_coloring(3, 17, 33));
    CHECK((pks::sample_coloring(3, 17, 33) >> 33) == 0);
}

TEST_CASE("pair_inequalities") {
    const auto d = sample_spd({.n = 9, .rank = 2, .seed = 5, .annihilate = {Event(HistorySpace(9), 0b110)}});
    const auto a = pair_inequalities(d, 1e-9, Exec::serial);
    const auto b = pair_inequalities(d, 1e-9, Exec::parallel);
    CHECK(a.pairs == b.pairs);
    CHECK(a.cauchy_schwarz == b.cauchy_schwarz);
    CHECK(a.sandwich == b.sandwich);
    CHECK(a.first == b.first);
    CHECK(a.second == b.second);
}
