#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qcover/histories.hpp"

namespace qcover {

// Pairwise incomparable nonempty events, kept sorted by mask.
class Antichain {
public:
    // Validates: same space, nonempty members, no duplicates, pairwise incomparable.
    Antichain(const HistorySpace& space, std::vector<Event> elements);

    const HistorySpace& space() const noexcept { return space_; }
    std::span<const Event> elements() const noexcept { return elements_; }
    std::size_t size() const noexcept { return elements_.size(); }
    std::vector<Mask> masks() const;
    std::string to_string() const;

    // Lexicographic on the sorted element masks.
    bool operator<(const Antichain& other) const;
    bool operator==(const Antichain& other) const;

private:
    HistorySpace space_;
    std::vector<Event> elements_;
};

bool is_antichain(std::span<const Event> events);

struct Extendibility {
    bool inextendible = false;
    std::optional<Event> witness;  // smallest addable event when extendible
};

Extendibility is_inextendible(const HistorySpace& space, const Antichain& ac);

inline constexpr int kDefaultEnumerationLimit = 5;
inline constexpr int kHardEnumerationLimit = 6;

// Every inextendible antichain of nonempty events, in canonical order.
// Throws ResourceLimit when n exceeds `limit` or `limit` exceeds the hard cap.
std::vector<Antichain> enumerate_inextendible(const HistorySpace& space,
                                              int limit = kDefaultEnumerationLimit);

// Streaming form of the above; visits in the same canonical order.
void for_each_inextendible(const HistorySpace& space, const std::function<void(const Antichain&)>& visit,
                           int limit = kDefaultEnumerationLimit);

// Pivot-level view of an antichain: members split by cardinality relative to k.
struct LambdaDecomposition {
    int k = 0;
    std::vector<Event> lambda_k;
    std::vector<Event> lambda_lt;
    std::vector<Event> lambda_gt;
    std::vector<int> gamma_tilde;  // labels not used by any off-pivot member
    int p = 0;
    int s0 = 0;  // lowest level among lambda_lt and lambda_k
    bool in_class_C = false;

    int r() const noexcept { return k - s0 + 1; }
};

// One decomposition per occupied level, ascending k.
std::vector<LambdaDecomposition> classify(const HistorySpace& space, const Antichain& ac);

enum class Family { level_k, A1, A2, A3, A4 };

struct FamilyParams {
    int k = 0;  // level_k
    int m = 0;  // A3: number of blocks
    int l = 0;  // A4: middle level
};

std::string to_string(Family family);

// Builds a named inextendible antichain family. Verifies inextendibility before return.
Antichain generate(const HistorySpace& space, Family family, const FamilyParams& params = {});

// True when a relabelling of the histories maps `a` onto `b`.
bool isomorphic(const Antichain& a, const Antichain& b);

}  // namespace qcover
