#pragma once

#include <bit>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace qcover {

using Mask = std::uint32_t;

inline constexpr int kMaxHistories = 24;

// Omega = {1..n}. Label i is bit (i-1) of an event mask.
class HistorySpace {
public:
    explicit HistorySpace(int n);

    int size() const noexcept { return n_; }
    Mask full_mask() const noexcept { return n_ == 32 ? ~Mask{0} : (Mask{1} << n_) - 1; }
    // Number of events including the empty one.
    std::uint64_t event_count() const noexcept { return std::uint64_t{1} << n_; }

    friend bool operator==(const HistorySpace&, const HistorySpace&) = default;

private:
    int n_;
};

class Event {
public:
    Event(const HistorySpace& space, Mask mask);

    static Event from_labels(const HistorySpace& space, std::initializer_list<int> labels);
    static Event from_labels(const HistorySpace& space, std::span<const int> labels);
    static Event empty(const HistorySpace& space) { return Event(space, 0); }
    static Event omega(const HistorySpace& space) { return Event(space, space.full_mask()); }

    Mask mask() const noexcept { return mask_; }
    HistorySpace space() const noexcept { return HistorySpace(n_); }
    int space_size() const noexcept { return n_; }

    int cardinality() const noexcept { return std::popcount(mask_); }
    bool is_empty() const noexcept { return mask_ == 0; }
    bool contains_label(int label) const noexcept { return (mask_ >> (label - 1)) & 1U; }
    bool subset_of(const Event& other) const noexcept { return (mask_ & ~other.mask_) == 0; }
    bool comparable(const Event& other) const noexcept {
        return subset_of(other) || other.subset_of(*this);
    }
    bool disjoint(const Event& other) const noexcept { return (mask_ & other.mask_) == 0; }

    // 1-based, ascending. Doubles as the index set of the event.
    std::vector<int> labels() const;
    std::string to_string() const;

    Event operator|(const Event& other) const;
    Event operator&(const Event& other) const;
    Event operator-(const Event& other) const;
    Event complement() const;

    bool operator==(const Event& other) const noexcept {
        return mask_ == other.mask_ && n_ == other.n_;
    }
    std::strong_ordering operator<=>(const Event& other) const noexcept {
        if (auto c = n_ <=> other.n_; c != 0) return c;
        return mask_ <=> other.mask_;
    }

private:
    Mask mask_;
    int n_;
};

enum class Direction { up, down };

// All C(n,k) events of cardinality k, ascending mask order.
std::vector<Event> level_elements(const HistorySpace& space, int k);

// k-subsets of a when |a| > k, k-supersets when |a| < k.
std::vector<Event> shadow(const HistorySpace& space, const Event& a, int k);

// Up or down closure over nonempty events. Output sorted by mask.
std::vector<Event> closure(const HistorySpace& space, std::span<const Event> events, Direction direction);

// Next mask with the same popcount (Gosper). Undefined for 0.
inline Mask next_same_popcount(Mask v) noexcept {
    const Mask t = v | (v - 1);
    return (t + 1) | (((~t & -~t) - 1) >> (std::countr_zero(v) + 1));
}

std::uint64_t binomial(int n, int k);

}  // namespace qcover
