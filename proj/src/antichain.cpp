#include "qcover/antichain.hpp"

#include <algorithm>
#include <sstream>

#include "qcover/errors.hpp"

namespace qcover {

Antichain::Antichain(const HistorySpace& space, std::vector<Event> elements)
    : space_(space), elements_(std::move(elements)) {
    if (elements_.empty()) throw InvalidArgument("antichain must have at least one element");
    for (const auto& e : elements_) {
        if (e.space_size() != space_.size()) throw InvalidArgument("antichain member from a different space");
        if (e.is_empty()) throw InvalidArgument("the empty event cannot belong to an antichain");
    }
    std::sort(elements_.begin(), elements_.end());
    if (std::adjacent_find(elements_.begin(), elements_.end()) != elements_.end())
        throw InvalidArgument("duplicate antichain element");
    if (!is_antichain(elements_)) throw InvalidArgument("events are not pairwise incomparable");
}

std::vector<Mask> Antichain::masks() const {
    std::vector<Mask> out;
    out.reserve(elements_.size());
    for (const auto& e : elements_) out.push_back(e.mask());
    return out;
}

std::string Antichain::to_string() const {
    std::ostringstream os;
    os << '{';
    for (std::size_t i = 0; i < elements_.size(); ++i) os << (i ? "," : "") << elements_[i].to_string();
    os << '}';
    return os.str();
}

bool Antichain::operator<(const Antichain& other) const {
    if (space_.size() != other.space_.size()) return space_.size() < other.space_.size();
    return std::lexicographical_compare(elements_.begin(), elements_.end(), other.elements_.begin(),
                                        other.elements_.end());
}

bool Antichain::operator==(const Antichain& other) const {
    return space_ == other.space_ && elements_ == other.elements_;
}

bool is_antichain(std::span<const Event> events) {
    for (std::size_t i = 0; i < events.size(); ++i) {
        if (events[i].space_size() != events.front().space_size())
            throw InvalidArgument("antichain candidates from different spaces");
        for (std::size_t j = i + 1; j < events.size(); ++j)
            if (events[i].comparable(events[j])) return false;
    }
    return true;
}

Extendibility is_inextendible(const HistorySpace& space, const Antichain& ac) {
    const auto masks = ac.masks();
    const Mask full = space.full_mask();
    for (Mask m = 1; m <= full && m != 0; ++m) {
        const bool blocked = std::any_of(masks.begin(), masks.end(), [m](Mask a) {
            return (a & ~m) == 0 || (m & ~a) == 0;
        });
        if (!blocked) return {false, Event(space, m)};
    }
    return {true, std::nullopt};
}

namespace {

// Maximal antichains are the maximal cliques of the incomparability graph on
// nonempty events. Vertex v stands for mask v+1; with n <= 6 there are at most
// 63 vertices so every vertex set is one 64-bit word.
class MaximalAntichainSearch {
public:
    explicit MaximalAntichainSearch(int n) : vertices_((1U << n) - 1), adjacency_(vertices_) {
        for (unsigned u = 0; u < vertices_; ++u)
            for (unsigned v = 0; v < vertices_; ++v) {
                const Mask a = u + 1, b = v + 1;
                if (u != v && (a & ~b) != 0 && (b & ~a) != 0) adjacency_[u] |= bit(v);
            }
    }

    std::vector<std::vector<Mask>> run() {
        const std::uint64_t all = vertices_ == 64 ? ~0ULL : (1ULL << vertices_) - 1;
        expand(0, all, 0);
        return std::move(found_);
    }

private:
    static std::uint64_t bit(unsigned v) { return 1ULL << v; }

    // Bron-Kerbosch with Tomita pivoting.
    void expand(std::uint64_t clique, std::uint64_t candidates, std::uint64_t excluded) {
        if (candidates == 0) {
            if (excluded == 0) {
                std::vector<Mask> ac;
                for (std::uint64_t c = clique; c != 0; c &= c - 1)
                    ac.push_back(static_cast<Mask>(std::countr_zero(c)) + 1);
                found_.push_back(std::move(ac));
            }
            return;
        }
        unsigned pivot = 0;
        int best = -1;
        for (std::uint64_t s = candidates | excluded; s != 0; s &= s - 1) {
            const unsigned u = std::countr_zero(s);
            const int score = std::popcount(candidates & adjacency_[u]);
            if (score > best) {
                best = score;
                pivot = u;
            }
        }
        for (std::uint64_t s = candidates & ~adjacency_[pivot]; s != 0; s &= s - 1) {
            const unsigned v = std::countr_zero(s);
            expand(clique | bit(v), candidates & adjacency_[v], excluded & adjacency_[v]);
            candidates &= ~bit(v);
            excluded |= bit(v);
        }
    }

    unsigned vertices_;
    std::vector<std::uint64_t> adjacency_;
    std::vector<std::vector<Mask>> found_;
};

}  // namespace

std::vector<Antichain> enumerate_inextendible(const HistorySpace& space, int limit) {
    if (limit > kHardEnumerationLimit)
        throw ResourceLimit("enumeration limit above hard cap n <= " + std::to_string(kHardEnumerationLimit));
    if (space.size() > limit)
        throw ResourceLimit("antichain enumeration capped at n <= " + std::to_string(limit));

    auto raw = MaximalAntichainSearch(space.size()).run();
    std::vector<Antichain> out;
    out.reserve(raw.size());
    for (const auto& masks : raw) {
        std::vector<Event> events;
        events.reserve(masks.size());
        for (Mask m : masks) events.emplace_back(space, m);
        out.emplace_back(space, std::move(events));
    }
    std::sort(out.begin(), out.end());
    return out;
}

void for_each_inextendible(const HistorySpace& space, const std::function<void(const Antichain&)>& visit,
                           int limit) {
    for (const auto& ac : enumerate_inextendible(space, limit)) visit(ac);
}

std::vector<LambdaDecomposition> classify(const HistorySpace& space, const Antichain& ac) {
    std::vector<int> levels;
    for (const auto& e : ac.elements()) levels.push_back(e.cardinality());
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());

    std::vector<LambdaDecomposition> out;
    for (int k : levels) {
        LambdaDecomposition d;
        d.k = k;
        Mask off_pivot = 0;
        d.s0 = k;
        for (const auto& e : ac.elements()) {
            const int c = e.cardinality();
            if (c == k) {
                d.lambda_k.push_back(e);
            } else if (c < k) {
                d.lambda_lt.push_back(e);
                d.s0 = std::min(d.s0, c);
                off_pivot |= e.mask();
            } else {
                d.lambda_gt.push_back(e);
                off_pivot |= e.mask();
            }
        }
        d.gamma_tilde = Event(space, space.full_mask() & ~off_pivot).labels();
        d.p = static_cast<int>(d.gamma_tilde.size());
        d.in_class_C = d.p >= d.r();
        out.push_back(std::move(d));
    }
    return out;
}

std::string to_string(Family family) {
    switch (family) {
        case Family::level_k: return "level_k";
        case Family::A1: return "A1";
        case Family::A2: return "A2";
        case Family::A3: return "A3";
        case Family::A4: return "A4";
    }
    return "unknown";
}

namespace {

Mask label_bit(int label) { return Mask{1} << (label - 1); }

Mask label_range(int first, int last) {
    Mask m = 0;
    for (int i = first; i <= last; ++i) m |= label_bit(i);
    return m;
}

std::vector<Mask> block_family(int n, int m) {
    // (l+1)-sets {1} + block_b sharing only history 1, then every pair split across blocks.
    const int l = (n - 1) / m;
    std::vector<Mask> out;
    std::vector<int> block_of(n + 1, -1);
    for (int b = 0; b < m; ++b) {
        out.push_back(label_bit(1) | label_range(2 + b * l, 1 + (b + 1) * l));
        for (int i = 2 + b * l; i <= 1 + (b + 1) * l; ++i) block_of[i] = b;
    }
    for (int i = 2; i <= n; ++i)
        for (int j = i + 1; j <= n; ++j)
            if (block_of[i] != block_of[j]) out.push_back(label_bit(i) | label_bit(j));
    return out;
}

std::vector<Mask> family_masks(const HistorySpace& space, Family family, const FamilyParams& params) {
    const int n = space.size();
    const Mask full = space.full_mask();
    std::vector<Mask> out;
    switch (family) {
        case Family::level_k: {
            if (params.k < 1 || params.k > n) throw InvalidArgument("level_k requires 1 <= k <= n");
            for (const auto& e : level_elements(space, params.k)) out.push_back(e.mask());
            break;
        }
        case Family::A1: {
            if (n <= 3) throw InvalidArgument("A1 requires n > 3");
            out.push_back(full & ~label_bit(1));
            out.push_back(full & ~label_bit(2));
            // (n-2)-sets outside both shadows are exactly those containing histories 1 and 2.
            for (const auto& e : level_elements(space, n - 2))
                if ((e.mask() & 0b11U) == 0b11U) out.push_back(e.mask());
            break;
        }
        case Family::A2: {
            if (n < 5 || n % 2 == 0) throw InvalidArgument("A2 requires odd n >= 5");
            out = block_family(n, 2);
            break;
        }
        case Family::A3: {
            const int m = params.m;
            if (m < 2 || (n - 1) % m != 0 || (n - 1) / m < 2)
                throw InvalidArgument("A3 requires m >= 2 with (n-1)/m an integer >= 2");
            out = block_family(n, m);
            break;
        }
        case Family::A4: {
            const int l = params.l;
            if (n < 5 || l < 3 || l > n - 2) throw InvalidArgument("A4 requires n >= 5 and 3 <= l <= n-2");
            out.push_back(full & ~(label_bit(1) | label_bit(2)));
            out.push_back(full & ~(label_bit(2) | label_bit(3)));
            // Subsets of {4..n}: choose l-2 for the two-anchor elements, l-1 for the lone-2 elements.
            const Mask rest = label_range(4, n);
            for (Mask s = rest;; s = (s - 1) & rest) {
                const int c = std::popcount(s);
                if (c == l - 2) {
                    out.push_back(label_bit(1) | label_bit(2) | s);
                    out.push_back(label_bit(2) | label_bit(3) | s);
                } else if (c == l - 1) {
                    out.push_back(label_bit(2) | s);
                }
                if (s == 0) break;
            }
            out.push_back(label_bit(1) | label_bit(3));
            break;
        }
    }
    return out;
}

}  // namespace

Antichain generate(const HistorySpace& space, Family family, const FamilyParams& params) {
    std::vector<Event> events;
    for (Mask m : family_masks(space, family, params)) events.emplace_back(space, m);
    Antichain ac = [&] {
        try {
            return Antichain(space, std::move(events));
        } catch (const InvalidArgument& e) {
            throw ConsistencyError("generated " + to_string(family) + " is not an antichain: " + e.what());
        }
    }();
    if (!is_inextendible(space, ac).inextendible)
        throw ConsistencyError("generated " + to_string(family) + " is extendible");
    return ac;
}

namespace {

// Per-label signature: how many members of each cardinality contain the label.
std::vector<std::vector<int>> label_signatures(const Antichain& ac) {
    const int n = ac.space().size();
    std::vector<std::vector<int>> sig(n, std::vector<int>(n + 1, 0));
    for (const auto& e : ac.elements())
        for (int label : e.labels()) ++sig[label - 1][e.cardinality()];
    return sig;
}

bool extend_mapping(const std::vector<std::vector<int>>& sig_a, const std::vector<std::vector<int>>& sig_b,
                    std::vector<int>& image, std::vector<bool>& used, int next,
                    const std::vector<Mask>& masks_a, const std::vector<Mask>& sorted_b) {
    const int n = static_cast<int>(image.size());
    if (next == n) {
        std::vector<Mask> mapped;
        mapped.reserve(masks_a.size());
        for (Mask m : masks_a) {
            Mask out = 0;
            for (Mask s = m; s != 0; s &= s - 1) out |= Mask{1} << image[std::countr_zero(s)];
            mapped.push_back(out);
        }
        std::sort(mapped.begin(), mapped.end());
        return mapped == sorted_b;
    }
    for (int target = 0; target < n; ++target) {
        if (used[target] || sig_a[next] != sig_b[target]) continue;
        used[target] = true;
        image[next] = target;
        if (extend_mapping(sig_a, sig_b, image, used, next + 1, masks_a, sorted_b)) return true;
        used[target] = false;
    }
    return false;
}

}  // namespace

bool isomorphic(const Antichain& a, const Antichain& b) {
    if (a.space() != b.space() || a.size() != b.size()) return false;
    auto profile = [](const Antichain& ac) {
        std::vector<int> p;
        for (const auto& e : ac.elements()) p.push_back(e.cardinality());
        std::sort(p.begin(), p.end());
        return p;
    };
    if (profile(a) != profile(b)) return false;
    const auto sig_a = label_signatures(a);
    const auto sig_b = label_signatures(b);
    auto sorted_a = sig_a, sorted_b = sig_b;
    std::sort(sorted_a.begin(), sorted_a.end());
    std::sort(sorted_b.begin(), sorted_b.end());
    if (sorted_a != sorted_b) return false;

    const int n = a.space().size();
    std::vector<int> image(n, -1);
    std::vector<bool> used(n, false);
    auto masks_b = b.masks();
    std::sort(masks_b.begin(), masks_b.end());
    return extend_mapping(sig_a, sig_b, image, used, 0, a.masks(), masks_b);
}

}  // namespace qcover
