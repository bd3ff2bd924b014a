#include "qcover/histories.hpp"

#include <algorithm>
#include <sstream>

#include "qcover/errors.hpp"

namespace qcover {

HistorySpace::HistorySpace(int n) : n_(n) {
    if (n < 1 || n > kMaxHistories)
        throw RangeError("history space size must be in [1, " + std::to_string(kMaxHistories) +
                         "], got " + std::to_string(n));
}

Event::Event(const HistorySpace& space, Mask mask) : mask_(mask), n_(space.size()) {
    if ((mask & ~space.full_mask()) != 0)
        throw InvalidArgument("event mask uses labels beyond n=" + std::to_string(n_));
}

Event Event::from_labels(const HistorySpace& space, std::initializer_list<int> labels) {
    return from_labels(space, std::span<const int>(labels.begin(), labels.size()));
}

Event Event::from_labels(const HistorySpace& space, std::span<const int> labels) {
    Mask mask = 0;
    for (int label : labels) {
        if (label < 1 || label > space.size())
            throw InvalidArgument("label " + std::to_string(label) + " outside 1.." +
                                  std::to_string(space.size()));
        mask |= Mask{1} << (label - 1);
    }
    return Event(space, mask);
}

std::vector<int> Event::labels() const {
    std::vector<int> out;
    out.reserve(cardinality());
    for (Mask m = mask_; m != 0; m &= m - 1) out.push_back(std::countr_zero(m) + 1);
    return out;
}

std::string Event::to_string() const {
    std::ostringstream os;
    os << '{';
    bool first = true;
    for (int label : labels()) {
        if (!first) os << ',';
        os << label;
        first = false;
    }
    os << '}';
    return os.str();
}

namespace {

void require_same_space(const Event& a, const Event& b) {
    if (a.space_size() != b.space_size())
        throw InvalidArgument("events from different history spaces");
}

}  // namespace

Event Event::operator|(const Event& other) const {
    require_same_space(*this, other);
    return Event(space(), mask_ | other.mask_);
}

Event Event::operator&(const Event& other) const {
    require_same_space(*this, other);
    return Event(space(), mask_ & other.mask_);
}

Event Event::operator-(const Event& other) const {
    require_same_space(*this, other);
    return Event(space(), mask_ & ~other.mask_);
}

Event Event::complement() const { return Event(space(), space().full_mask() & ~mask_); }

std::uint64_t binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    k = std::min(k, n - k);
    std::uint64_t r = 1;
    for (int i = 1; i <= k; ++i) r = r * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
    return r;
}

std::vector<Event> level_elements(const HistorySpace& space, int k) {
    const int n = space.size();
    if (k < 0 || k > n)
        throw RangeError("level " + std::to_string(k) + " outside [0, " + std::to_string(n) + "]");
    std::vector<Event> out;
    out.reserve(binomial(n, k));
    if (k == 0) {
        out.emplace_back(space, 0);
        return out;
    }
    const Mask last = space.full_mask() & ~((Mask{1} << (n - k)) - 1);
    for (Mask m = (Mask{1} << k) - 1;; m = next_same_popcount(m)) {
        out.emplace_back(space, m);
        if (m == last) break;
    }
    return out;
}

std::vector<Event> shadow(const HistorySpace& space, const Event& a, int k) {
    const int n = space.size();
    if (k <= 0 || k >= n)
        throw RangeError("shadow level must satisfy 0 < k < n");
    if (a.space_size() != n) throw InvalidArgument("event from a different history space");
    const int card = a.cardinality();
    if (card == k) throw InvalidArgument("shadow is undefined on the event's own level");

    std::vector<Event> out;
    if (card > k) {
        // Walk k-subsets of a's labels by mapping level elements of a card-sized space.
        const auto labels = a.labels();
        for (Mask sel = (Mask{1} << k) - 1; sel < (Mask{1} << card); sel = next_same_popcount(sel)) {
            Mask m = 0;
            for (Mask s = sel; s != 0; s &= s - 1) m |= Mask{1} << (labels[std::countr_zero(s)] - 1);
            out.emplace_back(space, m);
        }
    } else {
        const auto rest = a.complement().labels();
        const int extra = k - card;
        const int free = static_cast<int>(rest.size());
        for (Mask sel = (Mask{1} << extra) - 1; sel < (Mask{1} << free); sel = next_same_popcount(sel)) {
            Mask m = a.mask();
            for (Mask s = sel; s != 0; s &= s - 1) m |= Mask{1} << (rest[std::countr_zero(s)] - 1);
            out.emplace_back(space, m);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<Event> closure(const HistorySpace& space, std::span<const Event> events, Direction direction) {
    for (const auto& e : events) {
        if (e.space_size() != space.size()) throw InvalidArgument("event from a different history space");
        if (e.is_empty()) throw InvalidArgument("closure of the empty event is not defined here");
    }
    std::vector<Event> out;
    const Mask full = space.full_mask();
    for (Mask m = 1; m != 0 && m <= full; ++m) {
        const bool hit = std::any_of(events.begin(), events.end(), [&](const Event& e) {
            return direction == Direction::up ? (e.mask() & ~m) == 0 : (m & ~e.mask()) == 0;
        });
        if (hit) out.emplace_back(space, m);
    }
    return out;
}

}  // namespace qcover
