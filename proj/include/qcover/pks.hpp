#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qcover/parallel.hpp"
#include "qcover/zsqrt2.hpp"

namespace qcover::pks {

// Ray in R^3 with components in Z[sqrt 2]. Canonical: first nonzero component
// positive, integer content 1.
class Ray {
public:
    explicit Ray(std::array<ZSqrt2, 3> components);

    const std::array<ZSqrt2, 3>& components() const noexcept { return components_; }
    ZSqrt2 dot(const Ray& other) const;
    bool orthogonal(const Ray& other) const { return dot(other).is_zero(); }
    std::string to_string() const;

    friend bool operator==(const Ray&, const Ray&) = default;
    friend auto operator<=>(const Ray&, const Ray&) = default;

private:
    std::array<ZSqrt2, 3> components_;
};

inline constexpr std::size_t kPeresRayCount = 33;
inline constexpr std::size_t kPeresBasisCount = 16;

// The 33 Peres rays, sorted canonically.
std::vector<Ray> peres_rays();

using Basis = std::array<int, 3>;  // ray indices, ascending
using Pair = std::array<int, 2>;   // ray indices, ascending

struct OrthogonalStructure {
    std::vector<Ray> rays;
    std::vector<Basis> bases;
    std::vector<Pair> pairs;
};

// Bases = all mutually orthogonal triples; pairs = all orthogonal pairs.
// Throws ConsistencyError unless there are exactly 33 rays and 16 bases.
OrthogonalStructure orthogonal_structure();
OrthogonalStructure orthogonal_structure(std::vector<Ray> rays);

// Green = 1 at bit i for ray i.
using Coloring = std::uint64_t;

struct SearchStats {
    std::uint64_t nodes = 0;
    std::uint64_t backtracks = 0;
    std::uint64_t propagations = 0;
};

struct SearchResult {
    std::optional<Coloring> coloring;
    SearchStats stats;
};

// Looks for a consistent coloring: exactly one green ray per basis and no orthogonal
// pair both green. `restrict_to` limits the search to the listed rays and to the
// bases and pairs lying inside them; empty means all rays.
SearchResult search_consistent_coloring(const OrthogonalStructure& structure, std::span<const int> restrict_to = {});

// True when the coloring satisfies every basis and pair constraint over `rays`.
bool is_consistent(const OrthogonalStructure& structure, Coloring coloring, std::span<const int> restrict_to = {});

enum class EventKind { red_basis, green_pair };

// R_B: all three rays of basis B red. G_P: both rays of pair P green.
struct PksEvent {
    EventKind kind = EventKind::red_basis;
    int index = 0;  // into structure.bases or structure.pairs

    friend bool operator==(const PksEvent&, const PksEvent&) = default;
};

std::uint64_t ray_mask(const OrthogonalStructure& structure, const PksEvent& e);
bool contains(const OrthogonalStructure& structure, const PksEvent& e, Coloring coloring);
std::string to_string(const OrthogonalStructure& structure, const PksEvent& e);

// All R_B followed by all G_P.
std::vector<PksEvent> pks_collection(const OrthogonalStructure& structure);

enum class Relation { incomparable, subset, superset, equal };
std::string to_string(Relation r);

struct Comparison {
    Relation relation = Relation::incomparable;
    // Colorings in e1 but not e2, and in e2 but not e1, when those differences are nonempty.
    std::optional<Coloring> only_first;
    std::optional<Coloring> only_second;
};

// Decided from the defining rays; every exhibited countercoloring is checked before return.
Comparison pks_comparability(const OrthogonalStructure& structure, const PksEvent& e1, const PksEvent& e2);

struct WitnessReport {
    std::size_t ray_count = 0;
    std::size_t basis_count = 0;
    std::size_t pair_count = 0;
    int reference_basis = -1;            // index of {(0,0,1),(0,1,0),(1,0,0)}
    std::size_t bases_in_complement = 0;  // bases wholly inside B^c
    std::size_t pairs_in_reference = 0;   // orthogonal pairs inside B
    std::size_t pairs_in_complement = 0;  // orthogonal pairs inside B^c
    Coloring gamma = 0;                   // B red, rest green
    Coloring gamma_tilde = 0;             // B green, rest red
    std::size_t events_containing_gamma = 0;
    std::size_t events_containing_gamma_tilde = 0;
    bool gamma_claims_hold = false;
    bool gamma_tilde_claims_hold = false;
    bool pair_event_in_no_pks_set = false;  // no PKS event contains both colorings
    bool pks_sets_larger_than_two = false;
    bool is_antichain = false;
    bool is_inextendible = true;
    std::vector<std::string> failures;

    std::string verdict() const;
};

WitnessReport witness_check();
WitnessReport witness_check(const OrthogonalStructure& structure);

// Number of uniformly random colorings (out of `samples`) that avoid every PKS event.
// Sample i depends only on (seed, i), so serial and parallel runs agree exactly.
std::uint64_t count_uncovered_samples(const OrthogonalStructure& structure, std::uint64_t samples,
                                      std::uint64_t seed, Exec exec = Exec::parallel);

Coloring sample_coloring(std::uint64_t seed, std::uint64_t index, std::size_t ray_count);

}  // namespace qcover::pks
