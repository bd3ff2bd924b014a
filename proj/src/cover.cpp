#include "qcover/cover.hpp"

#include <algorithm>
#include <chrono>
#include <sstream>

#include <omp.h>

#include "qcover/errors.hpp"

namespace qcover {

CoverVerdict decide(const HistorySpace& space, std::span<const Event> events) {
    if (events.empty()) throw InvalidArgument("cover family must be nonempty");
    std::vector<Mask> masks;
    masks.reserve(events.size());
    for (const auto& e : events) {
        if (e.space_size() != space.size()) throw InvalidArgument("cover member from a different space");
        if (e.is_empty()) throw InvalidArgument("cover members must be nonempty");
        masks.push_back(e.mask());
    }
    auto sorted = masks;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw InvalidArgument("duplicate event in cover family");

    CoverVerdict verdict;
    Mask u = 0;
    for (Mask m : masks) u |= m;
    verdict.union_is_omega = u == space.full_mask();
    if (!verdict.union_is_omega) {
        verdict.uncovered_label = std::countr_zero(space.full_mask() & ~u) + 1;
        return verdict;
    }

    const auto n = static_cast<std::size_t>(space.size());
    RationalMatrix columns(n, masks.size());
    for (std::size_t c = 0; c < masks.size(); ++c)
        for (std::size_t r = 0; r < n; ++r)
            if ((masks[c] >> r) & 1U) columns(r, c) = 1;
    const std::vector<Rational> ones(n, Rational(1));
    auto sol = solve_in_span(columns, ones);
    verdict.span_rank = sol.rank;

    if (sol.in_span) {
        verdict.is_cover = true;
        verdict.coefficients = std::move(sol.coefficients);
        return verdict;
    }

    RationalMatrix basis(n, sol.pivot_columns.size());
    for (std::size_t j = 0; j < sol.pivot_columns.size(); ++j)
        for (std::size_t r = 0; r < n; ++r) basis(r, j) = columns(r, sol.pivot_columns[j]);
    const RationalMatrix projector = complement_projector(basis);

    std::vector<Rational> entries;
    entries.reserve(n * n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) entries.push_back(projector(r, c));
    auto witness = DecoherenceFunctional::from_rational(space.size(), entries, {});

    for (Mask m : masks)
        if (sgn(mu_exact(witness, m)) != 0) throw ConsistencyError("witness does not annihilate a cover member");
    if (sgn(mu_exact(witness, space.full_mask())) <= 0)
        throw ConsistencyError("witness assigns zero measure to Omega although Omega is outside the span");
    verdict.witness = std::move(witness);
    return verdict;
}

std::string to_string(CertificateKind kind) {
    switch (kind) {
        case CertificateKind::single_level: return "single_level";
        case CertificateKind::pivot_bound: return "pivot_bound";
        case CertificateKind::example_A1: return "example_A1";
        case CertificateKind::example_A2: return "example_A2";
        case CertificateKind::example_A3: return "example_A3";
        case CertificateKind::example_A4: return "example_A4";
    }
    return "unknown";
}

namespace {

struct ExampleCandidate {
    CertificateKind kind;
    Antichain instance;
    int pivot;
};

std::vector<ExampleCandidate> example_candidates(const HistorySpace& space) {
    const int n = space.size();
    std::vector<ExampleCandidate> out;
    if (n > 3) out.push_back({CertificateKind::example_A1, generate(space, Family::A1), n - 2});
    if (n >= 5 && n % 2 == 1)
        out.push_back({CertificateKind::example_A2, generate(space, Family::A2), (n - 1) / 2 + 1});
    for (int m = 3; m <= n - 1; ++m)
        if ((n - 1) % m == 0 && (n - 1) / m >= 2)
            out.push_back({CertificateKind::example_A3, generate(space, Family::A3, {.m = m}), (n - 1) / m + 1});
    if (n >= 5)
        for (int l = 3; l <= n - 2; ++l)
            out.push_back({CertificateKind::example_A4, generate(space, Family::A4, {.l = l}), l});
    return out;
}

const LambdaDecomposition* at_pivot(const std::vector<LambdaDecomposition>& ds, int k) {
    for (const auto& d : ds)
        if (d.k == k) return &d;
    return nullptr;
}

}  // namespace

std::optional<Certificate> certificate_class_C(const HistorySpace& space, const Antichain& ac) {
    // Every argument on file starts from inextendibility; a partial level proves nothing.
    if (!is_inextendible(space, ac).inextendible) return std::nullopt;
    const auto decompositions = classify(space, ac);

    if (decompositions.size() == 1) {
        const auto& d = decompositions.front();
        std::ostringstream os;
        os << "every member lies on level " << d.k << "; each history lies in C(" << space.size() - 1 << ","
           << d.k - 1 << ") of them, so summing the members reproduces Omega";
        return Certificate{CertificateKind::single_level, d.k, d.s0, d.p, os.str()};
    }

    for (const auto& d : decompositions) {
        if (!d.in_class_C) continue;
        std::ostringstream os;
        os << "pivot level " << d.k << ": " << d.p << " histories avoid every off-pivot member, at least k-s0+1 = "
           << d.r() << " required";
        return Certificate{CertificateKind::pivot_bound, d.k, d.s0, d.p, os.str()};
    }

    if (space.size() > kExampleMatchMaxN) return std::nullopt;
    for (const auto& candidate : example_candidates(space)) {
        if (!isomorphic(ac, candidate.instance)) continue;
        const auto* d = at_pivot(decompositions, candidate.pivot);
        if (d == nullptr) throw ConsistencyError("example family lost its pivot level under relabelling");
        std::ostringstream os;
        os << "relabelling of family " << to_string(candidate.kind).substr(8) << " at n=" << space.size()
           << ", viewed at pivot " << d->k;
        return Certificate{candidate.kind, d->k, d->s0, d->p, os.str()};
    }
    return std::nullopt;
}

namespace {

ScanEntry evaluate(const HistorySpace& space, const Antichain& ac) {
    const auto verdict = decide(space, ac.elements());
    return ScanEntry{ac, verdict.is_cover, certificate_class_C(space, ac)};
}

}  // namespace

ScanReport scan(const HistorySpace& space, const ScanOptions& options) {
    const auto start = std::chrono::steady_clock::now();
    const auto antichains = enumerate_inextendible(space, options.limit);

    std::vector<std::optional<ScanEntry>> entries(antichains.size());
    const auto count = static_cast<std::int64_t>(antichains.size());
    if (options.exec == Exec::serial) {
        for (std::int64_t i = 0; i < count; ++i) entries[i] = evaluate(space, antichains[i]);
    } else {
        // Exceptions must not escape an OpenMP region; capture the first and rethrow.
        std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 16)
        for (std::int64_t i = 0; i < count; ++i) {
            try {
                entries[i] = evaluate(space, antichains[i]);
            } catch (...) {
#pragma omp critical(qcover_scan_failure)
                if (!failure) failure = std::current_exception();
            }
        }
        if (failure) std::rethrow_exception(failure);
    }

    ScanReport report;
    report.n = space.size();
    report.total = antichains.size();
    for (const auto& slot : entries) {
        const auto& e = *slot;
        if (e.is_cover) ++report.covers;
        else report.counterexamples.push_back(e.antichain);
        const std::string tally = e.certificate ? to_string(e.certificate->kind) : "none";
        ++report.certificate_tallies[tally];
        if (e.is_cover && !e.certificate) report.uncertified.push_back(e.antichain);
        if (!e.is_cover && e.certificate) report.certificate_conflicts.push_back(e.antichain);
    }
    report.elapsed_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return report;
}

LevelSumCheck level_sum_check(const DecoherenceFunctional& d, int k, const Tolerances& tol) {
    const int n = d.size();
    if (k < 2 || k > n - 1) throw RangeError("level-sum check needs 2 <= k <= n-1");
    if (!is_strongly_positive(d, tol.psd)) throw InvalidArgument("level-sum check needs a strongly positive D");

    const auto& e = d.entries();
    LevelSumCheck out;
    out.k = k;
    for (const auto& a : level_elements(d.space(), k)) out.lhs += mu_mask(e, a.mask());
    double singles = 0.0;
    for (int i = 0; i < n; ++i) singles += mu_mask(e, Mask{1} << i);
    out.mu_omega = mu_mask(e, d.space().full_mask());
    out.rhs_identity = static_cast<double>(binomial(n - 2, k - 2)) *
                       (out.mu_omega + static_cast<double>(n - k) / static_cast<double>(k - 1) * singles);
    out.residual = std::abs(out.lhs - out.rhs_identity);
    if (out.residual > tol.identity * std::max(1.0, std::abs(out.lhs)))
        throw ConsistencyError("level-sum identity residual " + std::to_string(out.residual) + " at k=" +
                               std::to_string(k));
    out.inequality_ok = out.lhs >= out.mu_omega - tol.zero;
    return out;
}

std::vector<std::uint64_t> level_indicator_sum(const HistorySpace& space, int k, Exec exec) {
    const int n = space.size();
    if (k < 1 || k > n) throw RangeError("level must satisfy 1 <= k <= n");
    std::vector<std::uint64_t> counts(n, 0);
    if (exec == Exec::serial) {
        const Mask last = space.full_mask() & ~((Mask{1} << (n - k)) - 1);
        for (Mask m = (Mask{1} << k) - 1;; m = next_same_popcount(m)) {
            for (Mask s = m; s != 0; s &= s - 1) ++counts[std::countr_zero(s)];
            if (m == last) break;
        }
        return counts;
    }
    // Work item h: the k-sets whose highest label is h+1, i.e. {h} plus a (k-1)-subset of bits below h.
#pragma omp parallel
    {
        std::vector<std::uint64_t> local(n, 0);
#pragma omp for schedule(dynamic, 1)
        for (int h = k - 1; h < n; ++h) {
            if (k == 1) {
                ++local[h];
                continue;
            }
            const Mask top = Mask{1} << h;
            const Mask last = (top - 1) & ~((Mask{1} << (h - (k - 1))) - 1);
            for (Mask m = (Mask{1} << (k - 1)) - 1;; m = next_same_popcount(m)) {
                ++local[h];
                for (Mask s = m; s != 0; s &= s - 1) ++local[std::countr_zero(s)];
                if (m == last) break;
            }
        }
#pragma omp critical(qcover_level_sum_merge)
        for (int i = 0; i < n; ++i) counts[i] += local[i];
    }
    return counts;
}

}  // namespace qcover
