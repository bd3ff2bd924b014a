#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qcover/antichain.hpp"
#include "qcover/histories.hpp"
#include "qcover/measure.hpp"
#include "qcover/parallel.hpp"
#include "qcover/rational.hpp"

namespace qcover {

// Outcome of the quantum-cover decision for a family {O_i}.
//
// For a positive semidefinite D, mu(A) = chi_A^T D chi_A vanishes iff D chi_A = 0.
// So mu(O_i) = 0 for all i forces mu(Omega) = 0 exactly when chi_Omega lies in the
// linear span of the chi_{O_i}. When it does, `coefficients` expresses chi_Omega in
// that span; when it does not, the projector onto the orthogonal complement of the
// span is a strongly positive D with mu(O_i) = 0 and mu(Omega) > 0.
struct CoverVerdict {
    bool is_cover = false;
    bool union_is_omega = false;
    std::optional<int> uncovered_label;           // smallest label outside the union
    std::optional<std::vector<Rational>> coefficients;
    std::optional<DecoherenceFunctional> witness;  // carries exact rational entries
    std::size_t span_rank = 0;
};

// Accepts any covering family, not only antichains. Rejects duplicates, empty
// events and mixed spaces.
CoverVerdict decide(const HistorySpace& space, std::span<const Event> events);

enum class CertificateKind { single_level, pivot_bound, example_A1, example_A2, example_A3, example_A4 };

std::string to_string(CertificateKind kind);

struct Certificate {
    CertificateKind kind = CertificateKind::single_level;
    int pivot_k = 0;
    int s0 = 0;
    int p = 0;
    std::string narrative;
};

inline constexpr int kExampleMatchMaxN = 12;

// Analytic proof that `ac` is a quantum cover, when one of the known classes applies.
// Absence means "no analytic argument on file", never "not a cover".
// Extendible antichains never get a certificate.
std::optional<Certificate> certificate_class_C(const HistorySpace& space, const Antichain& ac);

struct ScanEntry {
    Antichain antichain;
    bool is_cover = false;
    std::optional<Certificate> certificate;
};

struct ScanReport {
    int n = 0;
    std::size_t total = 0;
    std::size_t covers = 0;
    std::map<std::string, std::size_t> certificate_tallies;  // includes "none"
    std::vector<Antichain> counterexamples;
    std::vector<Antichain> uncertified;            // cover by span, no analytic certificate
    std::vector<Antichain> certificate_conflicts;  // certificate but no span cover: a bug
    double elapsed_ms = 0.0;
};

struct ScanOptions {
    int limit = kDefaultEnumerationLimit;
    Exec exec = Exec::parallel;
};

// Runs decide and certificate_class_C on every inextendible antichain.
// Output order and content are independent of the worker count.
ScanReport scan(const HistorySpace& space, const ScanOptions& options = {});

struct LevelSumCheck {
    int k = 0;
    double lhs = 0.0;           // sum of mu over all k-level events
    double rhs_identity = 0.0;  // C(n-2,k-2) [mu(Omega) + (n-k)/(k-1) sum_i mu({i})]
    double residual = 0.0;
    double mu_omega = 0.0;
    bool inequality_ok = false;  // lhs >= mu(Omega)
};

// Requires 2 <= k <= n-1 and strongly positive D. Throws ConsistencyError when the
// identity residual exceeds tol.identity (relative to max(1, |lhs|)).
LevelSumCheck level_sum_check(const DecoherenceFunctional& d, int k, const Tolerances& tol = {});

// Per-label count of k-level events containing that label.
std::vector<std::uint64_t> level_indicator_sum(const HistorySpace& space, int k, Exec exec = Exec::parallel);

}  // namespace qcover
