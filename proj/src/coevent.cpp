#include "qcover/coevent.hpp"

#include <algorithm>

#include "qcover/errors.hpp"

namespace qcover {

namespace {

void require_small(const DecoherenceFunctional& d) {
    if (d.size() > kCoeventMaxN)
        throw ResourceLimit("coevent analysis enumerates 2^n events; capped at n <= " + std::to_string(kCoeventMaxN));
}

void require_exact_entries(const DecoherenceFunctional& d, const CoeventOptions& options) {
    if (options.exact && !d.has_exact())
        throw InvalidArgument("exact mode needs a functional with rational entries");
}

bool is_zero(const DecoherenceFunctional& d, Mask m, const CoeventOptions& options) {
    if (options.exact) return sgn(mu_exact(d, m)) == 0;
    return mu_mask(d.entries(), m) <= options.tol_zero;
}

// below[m]: m is contained in some flagged mask.
std::vector<char> down_closure(const std::vector<char>& flagged, int n) {
    std::vector<char> below(flagged);
    const auto count = static_cast<Mask>(below.size());
    for (Mask m = count; m-- > 0;) {
        if (below[m]) continue;
        for (int i = 0; i < n; ++i) {
            const Mask bit = Mask{1} << i;
            if ((m & bit) == 0 && below[m | bit]) {
                below[m] = 1;
                break;
            }
        }
    }
    return below;
}

// above[m]: m contains some flagged mask.
std::vector<char> up_closure(const std::vector<char>& flagged, int n) {
    std::vector<char> above(flagged);
    for (Mask m = 0; m < above.size(); ++m) {
        if (above[m]) continue;
        for (int i = 0; i < n; ++i) {
            const Mask bit = Mask{1} << i;
            if ((m & bit) != 0 && above[m & ~bit]) {
                above[m] = 1;
                break;
            }
        }
    }
    return above;
}

std::vector<Event> events_of(const HistorySpace& space, const std::vector<char>& flags) {
    std::vector<Event> out;
    for (Mask m = 1; m < flags.size(); ++m)
        if (flags[m]) out.emplace_back(space, m);
    return out;
}

void check(bool ok, const char* what) {
    if (!ok) throw ConsistencyError(std::string("preclusion structure invariant failed: ") + what);
}

}  // namespace

std::vector<char> zero_flags(const DecoherenceFunctional& d, const CoeventOptions& options) {
    require_small(d);
    require_exact_entries(d, options);
    const auto count = static_cast<std::int64_t>(d.space().event_count());
    std::vector<char> flags(static_cast<std::size_t>(count), 0);
    if (options.exec == Exec::serial) {
        for (std::int64_t m = 0; m < count; ++m) flags[m] = is_zero(d, static_cast<Mask>(m), options);
    } else {
#pragma omp parallel for schedule(static)
        for (std::int64_t m = 0; m < count; ++m) flags[m] = is_zero(d, static_cast<Mask>(m), options);
    }
    return flags;
}

std::vector<Event> zero_sets(const DecoherenceFunctional& d, const CoeventOptions& options) {
    return events_of(d.space(), zero_flags(d, options));
}

Antichain ppc_supports(const DecoherenceFunctional& d, const CoeventOptions& options) {
    const int n = d.size();
    auto zero = zero_flags(d, options);
    const Mask full = d.space().full_mask();
    if (zero[full]) throw NoCoevent("mu(Omega) is zero: every event is precluded");

    zero[0] = 1;
    const auto precluded = down_closure(zero, n);
    std::vector<Event> minimal;
    for (Mask m = 1; m <= full; ++m) {
        if (precluded[m]) continue;
        bool is_minimal = true;
        for (Mask s = m; s != 0 && is_minimal; s &= s - 1)
            if (!precluded[m & ~(s & -s)]) is_minimal = false;
        if (is_minimal) minimal.emplace_back(d.space(), m);
    }
    return Antichain(d.space(), std::move(minimal));
}

PreclusionStructure derived_antichain(const DecoherenceFunctional& d, const CoeventOptions& options) {
    const int n = d.size();
    const auto space = d.space();
    const Mask full = space.full_mask();

    auto zero = zero_flags(d, options);
    Antichain supports = ppc_supports(d, options);

    std::vector<char> is_support(zero.size(), 0);
    for (const auto& a : supports.elements()) is_support[a.mask()] = 1;
    const auto up = up_closure(is_support, n);

    // keep = B minus (up(A) minus A), without the empty event; a down-set.
    std::vector<char> keep(zero.size(), 0);
    for (Mask m = 1; m <= full; ++m) keep[m] = !(up[m] && !is_support[m]);
    std::vector<Event> maximal, m_part;
    for (Mask m = 1; m <= full; ++m) {
        if (!keep[m]) continue;
        bool top = true;
        for (int i = 0; i < n && top; ++i) {
            const Mask bit = Mask{1} << i;
            if ((m & bit) == 0 && keep[m | bit]) top = false;
        }
        if (!top) continue;
        maximal.emplace_back(space, m);
        if (!is_support[m]) m_part.emplace_back(space, m);
    }

    PreclusionStructure out{events_of(space, zero), supports, Antichain(space, std::move(maximal)),
                            std::move(m_part)};

    for (const auto& a : out.ppc_supports.elements())
        for (const auto& z : out.zero_sets) check(!a.subset_of(z), "support inside a zero set");
    for (const auto& z : out.zero_sets) check(!up[z.mask()], "up(A) contains a zero set");
    for (const auto& m : out.m_part) check(zero[m.mask()] != 0, "M member with nonzero measure");
    check(is_inextendible(space, out.derived).inextendible, "derived antichain is extendible");
    for (const auto& z : out.zero_sets) {
        const bool covered = std::any_of(out.derived.elements().begin(), out.derived.elements().end(),
                                         [&](const Event& e) { return z.subset_of(e); });
        check(covered, "zero set outside down(A')");
    }
    return out;
}

Event nontriviality(const DecoherenceFunctional& d, const CoeventOptions& options) {
    const int n = d.size();
    if (n < 2) throw InvalidArgument("nontriviality needs at least two histories");
    require_exact_entries(d, options);
    const Mask full = d.space().full_mask();
    if (is_zero(d, full, options)) throw NoCoevent("mu(Omega) is zero");
    for (const auto& a : level_elements(d.space(), n - 1))
        if (!is_zero(d, a.mask(), options)) return a;
    throw ConsistencyError("every (n-1)-level event has zero measure while mu(Omega) > 0");
}

}  // namespace qcover
