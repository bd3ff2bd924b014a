#pragma once

#include <vector>

#include "qcover/antichain.hpp"
#include "qcover/measure.hpp"
#include "qcover/parallel.hpp"

namespace qcover {

// Multiplicative coevents are identified with their support a: Phi_a(A) = 1 iff a is a subset of A.
// Nothing here materializes Phi itself.

struct CoeventOptions {
    double tol_zero = Tolerances{}.zero;
    bool exact = false;  // use the functional's rational entries; zero means exactly zero
    Exec exec = Exec::parallel;
};

inline constexpr int kCoeventMaxN = 12;

// Nonempty events with zero measure, ascending mask order.
std::vector<Event> zero_sets(const DecoherenceFunctional& d, const CoeventOptions& options = {});

// Per-mask zero flags over all 2^n masks (mask 0 included and flagged).
std::vector<char> zero_flags(const DecoherenceFunctional& d, const CoeventOptions& options = {});

// Minimal nonempty events not contained in any zero set: supports of the primitive
// preclusive coevents. Throws NoCoevent when mu(Omega) is zero.
Antichain ppc_supports(const DecoherenceFunctional& d, const CoeventOptions& options = {});

struct PreclusionStructure {
    std::vector<Event> zero_sets;
    Antichain ppc_supports;
    Antichain derived;          // maximal elements of B minus (up(A) minus A)
    std::vector<Event> m_part;  // derived minus ppc_supports; all zero sets
};

// Builds A, A' and M, and checks every structural invariant they must satisfy.
PreclusionStructure derived_antichain(const DecoherenceFunctional& d, const CoeventOptions& options = {});

// Smallest-mask (n-1)-level event with nonzero measure. Needs n >= 2, a strongly
// positive D and mu(Omega) > 0.
Event nontriviality(const DecoherenceFunctional& d, const CoeventOptions& options = {});

}  // namespace qcover
