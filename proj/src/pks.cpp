#include "qcover/pks.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <set>
#include <sstream>

#include "qcover/errors.hpp"

namespace qcover {

std::string ZSqrt2::to_string() const {
    std::ostringstream os;
    if (b == 0) {
        os << a;
    } else if (a == 0) {
        os << (b == 1 ? "" : b == -1 ? "-" : std::to_string(b)) << "r2";
    } else {
        os << a << (b > 0 ? "+" : "-") << (std::abs(b) == 1 ? "" : std::to_string(std::abs(b))) << "r2";
    }
    return os.str();
}

namespace pks {

Ray::Ray(std::array<ZSqrt2, 3> components) : components_(components) {
    std::int64_t content = 0;
    for (const auto& c : components_) content = std::gcd(content, std::gcd(c.a, c.b));
    if (content == 0) throw InvalidArgument("zero vector is not a ray");
    for (auto& c : components_) c = {c.a / content, c.b / content};
    const auto first = std::find_if(components_.begin(), components_.end(), [](ZSqrt2 c) { return !c.is_zero(); });
    if (first->sign() < 0)
        for (auto& c : components_) c = -c;
}

ZSqrt2 Ray::dot(const Ray& other) const {
    ZSqrt2 sum;
    for (std::size_t i = 0; i < 3; ++i) sum = sum + components_[i] * other.components_[i];
    return sum;
}

std::string Ray::to_string() const {
    std::ostringstream os;
    os << '(' << components_[0].to_string() << ',' << components_[1].to_string() << ','
       << components_[2].to_string() << ')';
    return os.str();
}

std::vector<Ray> peres_rays() {
    const ZSqrt2 one{1}, zero{0}, root{0, 1};
    // Sign/permutation classes: (0,0,1), (0,1,1), (0,1,sqrt2), (1,1,sqrt2).
    const std::array<std::array<ZSqrt2, 3>, 4> patterns{{
        {zero, zero, one},
        {zero, one, one},
        {zero, one, root},
        {one, one, root},
    }};
    std::set<Ray> unique;
    for (const auto& pattern : patterns) {
        std::array<int, 3> perm{0, 1, 2};
        do {
            for (int signs = 0; signs < 8; ++signs) {
                std::array<ZSqrt2, 3> v;
                for (int i = 0; i < 3; ++i) {
                    v[i] = pattern[perm[i]];
                    if ((signs >> i) & 1) v[i] = -v[i];
                }
                unique.insert(Ray(v));
            }
        } while (std::next_permutation(perm.begin(), perm.end()));
    }
    std::vector<Ray> rays(unique.begin(), unique.end());
    if (rays.size() != kPeresRayCount)
        throw ConsistencyError("Peres construction produced " + std::to_string(rays.size()) + " rays");
    return rays;
}

OrthogonalStructure orthogonal_structure() {
    auto s = orthogonal_structure(peres_rays());
    if (s.bases.size() != kPeresBasisCount)
        throw ConsistencyError("Peres rays form " + std::to_string(s.bases.size()) + " bases, expected 16");
    return s;
}

OrthogonalStructure orthogonal_structure(std::vector<Ray> rays) {
    if (rays.size() > 64) throw ResourceLimit("colorings are stored in 64-bit masks");
    OrthogonalStructure s;
    s.rays = std::move(rays);
    const int count = static_cast<int>(s.rays.size());
    std::vector<std::vector<char>> orth(count, std::vector<char>(count, 0));
    for (int i = 0; i < count; ++i)
        for (int j = i + 1; j < count; ++j)
            if (s.rays[i].orthogonal(s.rays[j])) {
                orth[i][j] = orth[j][i] = 1;
                s.pairs.push_back({i, j});
            }
    for (const auto& [i, j] : s.pairs)
        for (int k = j + 1; k < count; ++k)
            if (orth[i][k] && orth[j][k]) s.bases.push_back({i, j, k});
    return s;
}

namespace {

constexpr std::uint64_t bit(int i) { return std::uint64_t{1} << i; }

std::uint64_t all_rays(const OrthogonalStructure& s) {
    return s.rays.size() == 64 ? ~std::uint64_t{0} : bit(static_cast<int>(s.rays.size())) - 1;
}

std::uint64_t restriction_mask(const OrthogonalStructure& s, std::span<const int> restrict_to) {
    if (restrict_to.empty()) return all_rays(s);
    std::uint64_t m = 0;
    for (int r : restrict_to) {
        if (r < 0 || r >= static_cast<int>(s.rays.size())) throw InvalidArgument("ray index out of range");
        m |= bit(r);
    }
    return m;
}

std::uint64_t basis_mask(const Basis& b) { return bit(b[0]) | bit(b[1]) | bit(b[2]); }
std::uint64_t pair_mask(const Pair& p) { return bit(p[0]) | bit(p[1]); }

// Unit-propagating backtracking search over red/green assignments.
class ColoringSearch {
public:
    ColoringSearch(const OrthogonalStructure& s, std::uint64_t active) : s_(s), active_(active) {
        const int count = static_cast<int>(s.rays.size());
        neighbours_.assign(count, 0);
        ray_bases_.assign(count, {});
        for (const auto& p : s.pairs)
            if ((pair_mask(p) & ~active) == 0) {
                neighbours_[p[0]] |= bit(p[1]);
                neighbours_[p[1]] |= bit(p[0]);
            }
        for (const auto& b : s.bases)
            if ((basis_mask(b) & ~active) == 0) {
                bases_.push_back(basis_mask(b));
                for (int r : b) ray_bases_[r].push_back(bases_.size() - 1);
            }
        for (std::uint64_t m = active; m != 0; m &= m - 1) order_.push_back(std::countr_zero(m));
        std::stable_sort(order_.begin(), order_.end(), [&](int x, int y) {
            return ray_bases_[x].size() + std::popcount(neighbours_[x]) >
                   ray_bases_[y].size() + std::popcount(neighbours_[y]);
        });
    }

    SearchResult run() {
        SearchResult result;
        State root;
        if (propagate(root)) {
            if (auto found = branch(root)) result.coloring = found;
        }
        result.stats = stats_;
        return result;
    }

private:
    struct State {
        std::uint64_t green = 0;
        std::uint64_t red = 0;
    };

    // Applies both rules to a fixpoint. False on conflict.
    bool propagate(State& st) {
        bool changed = true;
        while (changed) {
            changed = false;
            for (std::uint64_t g = st.green; g != 0; g &= g - 1) {
                const std::uint64_t forced = neighbours_[std::countr_zero(g)];
                if (forced & st.green) return false;
                if (forced & ~st.red) {
                    st.red |= forced;
                    changed = true;
                    ++stats_.propagations;
                }
            }
            for (std::uint64_t b : bases_) {
                const int greens = std::popcount(b & st.green);
                const int reds = std::popcount(b & st.red);
                if (greens > 1 || reds == 3) return false;
                if (greens == 0 && reds == 2) {
                    st.green |= b & ~st.red;
                    changed = true;
                    ++stats_.propagations;
                }
            }
        }
        return true;
    }

    std::optional<Coloring> branch(const State& st) {
        ++stats_.nodes;
        const auto next = std::find_if(order_.begin(), order_.end(),
                                       [&](int r) { return ((st.green | st.red) & bit(r)) == 0; });
        if (next == order_.end()) return st.green;
        for (bool green : {true, false}) {
            State child = st;
            (green ? child.green : child.red) |= bit(*next);
            if (propagate(child))
                if (auto found = branch(child)) return found;
        }
        ++stats_.backtracks;
        return std::nullopt;
    }

    const OrthogonalStructure& s_;
    std::uint64_t active_;
    std::vector<std::uint64_t> neighbours_;
    std::vector<std::uint64_t> bases_;
    std::vector<std::vector<std::size_t>> ray_bases_;
    std::vector<int> order_;
    SearchStats stats_;
};

}  // namespace

SearchResult search_consistent_coloring(const OrthogonalStructure& structure, std::span<const int> restrict_to) {
    const auto active = restriction_mask(structure, restrict_to);
    auto result = ColoringSearch(structure, active).run();
    if (result.coloring && !is_consistent(structure, *result.coloring, restrict_to))
        throw ConsistencyError("search returned an inconsistent coloring");
    return result;
}

bool is_consistent(const OrthogonalStructure& structure, Coloring coloring, std::span<const int> restrict_to) {
    const auto active = restriction_mask(structure, restrict_to);
    for (const auto& b : structure.bases)
        if ((basis_mask(b) & ~active) == 0 && std::popcount(basis_mask(b) & coloring) != 1) return false;
    for (const auto& p : structure.pairs)
        if ((pair_mask(p) & ~active) == 0 && (pair_mask(p) & coloring) == pair_mask(p)) return false;
    return true;
}

std::uint64_t ray_mask(const OrthogonalStructure& structure, const PksEvent& e) {
    return e.kind == EventKind::red_basis ? basis_mask(structure.bases.at(e.index))
                                          : pair_mask(structure.pairs.at(e.index));
}

bool contains(const OrthogonalStructure& structure, const PksEvent& e, Coloring coloring) {
    const auto m = ray_mask(structure, e);
    return e.kind == EventKind::red_basis ? (coloring & m) == 0 : (coloring & m) == m;
}

std::string to_string(const OrthogonalStructure& structure, const PksEvent& e) {
    std::ostringstream os;
    if (e.kind == EventKind::red_basis) {
        const auto& b = structure.bases.at(e.index);
        os << "R[" << b[0] << ',' << b[1] << ',' << b[2] << ']';
    } else {
        const auto& p = structure.pairs.at(e.index);
        os << "G[" << p[0] << ',' << p[1] << ']';
    }
    return os.str();
}

std::vector<PksEvent> pks_collection(const OrthogonalStructure& structure) {
    std::vector<PksEvent> out;
    for (std::size_t i = 0; i < structure.bases.size(); ++i)
        out.push_back({EventKind::red_basis, static_cast<int>(i)});
    for (std::size_t i = 0; i < structure.pairs.size(); ++i)
        out.push_back({EventKind::green_pair, static_cast<int>(i)});
    return out;
}

std::string to_string(Relation r) {
    switch (r) {
        case Relation::incomparable: return "incomparable";
        case Relation::subset: return "subset";
        case Relation::superset: return "superset";
        case Relation::equal: return "equal";
    }
    return "unknown";
}

namespace {

// Colorings inside `e` chosen to avoid other events: the extremal one (R_B: B red,
// rest green; G_P: P green, rest red) and the uniform one (all red or all green).
std::array<Coloring, 2> members_of(const OrthogonalStructure& s, const PksEvent& e) {
    const auto m = ray_mask(s, e);
    if (e.kind == EventKind::red_basis) return {all_rays(s) & ~m, Coloring{0}};
    return {m, all_rays(s)};
}

std::optional<Coloring> in_first_only(const OrthogonalStructure& s, const PksEvent& first, const PksEvent& second) {
    for (Coloring c : members_of(s, first)) {
        if (!contains(s, first, c)) throw ConsistencyError("constructed coloring outside its own event");
        if (!contains(s, second, c)) return c;
    }
    return std::nullopt;
}

}  // namespace

Comparison pks_comparability(const OrthogonalStructure& structure, const PksEvent& e1, const PksEvent& e2) {
    Comparison out;
    if (e1 == e2) {
        out.relation = Relation::equal;
        return out;
    }
    const auto m1 = ray_mask(structure, e1);
    const auto m2 = ray_mask(structure, e2);
    if (e1.kind == e2.kind) {
        // Same kind: the event shrinks as its defining ray set grows.
        if ((m1 & ~m2) == 0 && m1 != m2) out.relation = Relation::superset;
        else if ((m2 & ~m1) == 0 && m1 != m2) out.relation = Relation::subset;
        else if (m1 == m2) out.relation = Relation::equal;
        else out.relation = Relation::incomparable;
    } else {
        out.relation = Relation::incomparable;
    }

    out.only_first = in_first_only(structure, e1, e2);
    out.only_second = in_first_only(structure, e2, e1);

    const bool needs_first = out.relation == Relation::incomparable || out.relation == Relation::superset;
    const bool needs_second = out.relation == Relation::incomparable || out.relation == Relation::subset;
    if ((needs_first && !out.only_first) || (needs_second && !out.only_second))
        throw ConsistencyError("no countercoloring for claimed relation " + to_string(out.relation) + " between " +
                               to_string(structure, e1) + " and " + to_string(structure, e2));
    return out;
}

std::string WitnessReport::verdict() const {
    return std::string("antichain: ") + (is_antichain ? "yes" : "no") +
           "; inextendible: " + (is_inextendible ? "yes" : "no");
}

WitnessReport witness_check() { return witness_check(orthogonal_structure()); }

WitnessReport witness_check(const OrthogonalStructure& s) {
    WitnessReport r;
    r.ray_count = s.rays.size();
    r.basis_count = s.bases.size();
    r.pair_count = s.pairs.size();

    const Ray e1({ZSqrt2{1}, ZSqrt2{0}, ZSqrt2{0}}), e2({ZSqrt2{0}, ZSqrt2{1}, ZSqrt2{0}}),
        e3({ZSqrt2{0}, ZSqrt2{0}, ZSqrt2{1}});
    std::uint64_t reference = 0;
    for (const auto& ray : {e1, e2, e3}) {
        const auto it = std::find(s.rays.begin(), s.rays.end(), ray);
        if (it == s.rays.end()) throw ConsistencyError("coordinate ray missing from the Peres set");
        reference |= bit(static_cast<int>(it - s.rays.begin()));
    }
    for (std::size_t i = 0; i < s.bases.size(); ++i)
        if (basis_mask(s.bases[i]) == reference) r.reference_basis = static_cast<int>(i);
    if (r.reference_basis < 0) throw ConsistencyError("coordinate basis missing from the basis list");

    const std::uint64_t complement = all_rays(s) & ~reference;
    r.gamma = complement;
    r.gamma_tilde = reference;

    const auto events = pks_collection(s);
    bool gamma_ok = true, tilde_ok = true;
    bool no_common = true;
    for (const auto& e : events) {
        const auto m = ray_mask(s, e);
        const bool in_complement = (m & reference) == 0;
        const bool in_reference = (m & ~reference) == 0;
        if (e.kind == EventKind::red_basis && in_complement) ++r.bases_in_complement;
        if (e.kind == EventKind::green_pair && in_reference) ++r.pairs_in_reference;
        if (e.kind == EventKind::green_pair && in_complement) ++r.pairs_in_complement;

        // gamma lies in R_B and in G_P for pairs inside B^c, nowhere else.
        const bool gamma_expected = e.kind == EventKind::red_basis ? m == reference : in_complement;
        // gamma~ lies in R_Bi for bases inside B^c and in G_P for pairs inside B, nowhere else.
        const bool tilde_expected = e.kind == EventKind::red_basis ? in_complement : in_reference;
        const bool gamma_in = contains(s, e, r.gamma);
        const bool tilde_in = contains(s, e, r.gamma_tilde);
        r.events_containing_gamma += gamma_in;
        r.events_containing_gamma_tilde += tilde_in;
        if (gamma_in != gamma_expected) {
            gamma_ok = false;
            r.failures.push_back("gamma membership mismatch at " + to_string(s, e));
        }
        if (tilde_in != tilde_expected) {
            tilde_ok = false;
            r.failures.push_back("gamma~ membership mismatch at " + to_string(s, e));
        }
        if (gamma_in && tilde_in) no_common = false;
    }
    r.gamma_claims_hold = gamma_ok;
    r.gamma_tilde_claims_hold = tilde_ok;
    r.pair_event_in_no_pks_set = no_common;

    // |R_B| = 2^(rays-3), |G_P| = 2^(rays-2).
    r.pks_sets_larger_than_two = std::all_of(events.begin(), events.end(), [&](const PksEvent& e) {
        return s.rays.size() - std::popcount(ray_mask(s, e)) >= 2;
    });

    bool antichain = true;
    for (std::size_t i = 0; i < events.size() && antichain; ++i)
        for (std::size_t j = i + 1; j < events.size(); ++j)
            if (pks_comparability(s, events[i], events[j]).relation != Relation::incomparable) {
                antichain = false;
                r.failures.push_back("comparable pair " + to_string(s, events[i]) + " / " + to_string(s, events[j]));
                break;
            }
    r.is_antichain = antichain;
    // {gamma, gamma~} is contained in no PKS set and contains none: it extends the collection.
    r.is_inextendible = !(r.pair_event_in_no_pks_set && r.pks_sets_larger_than_two);

    if (r.bases_in_complement != 6) r.failures.push_back("expected 6 bases inside B^c");
    if (r.pairs_in_reference != 3) r.failures.push_back("expected 3 orthogonal pairs inside B");
    return r;
}

Coloring sample_coloring(std::uint64_t seed, std::uint64_t index, std::size_t ray_count) {
    // splitmix64 over a per-sample counter.
    std::uint64_t z = seed + (index + 1) * 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    z ^= z >> 31;
    return ray_count >= 64 ? z : z & ((std::uint64_t{1} << ray_count) - 1);
}

std::uint64_t count_uncovered_samples(const OrthogonalStructure& structure, std::uint64_t samples,
                                      std::uint64_t seed, Exec exec) {
    const auto events = pks_collection(structure);
    std::vector<std::uint64_t> masks;
    std::vector<char> red;
    for (const auto& e : events) {
        masks.push_back(ray_mask(structure, e));
        red.push_back(e.kind == EventKind::red_basis);
    }
    auto covered = [&](Coloring c) {
        for (std::size_t i = 0; i < masks.size(); ++i)
            if (red[i] ? (c & masks[i]) == 0 : (c & masks[i]) == masks[i]) return true;
        return false;
    };
    const auto n = static_cast<std::int64_t>(samples);
    const auto rays = structure.rays.size();
    std::uint64_t uncovered = 0;
    if (exec == Exec::serial) {
        for (std::int64_t i = 0; i < n; ++i) uncovered += !covered(sample_coloring(seed, i, rays));
    } else {
#pragma omp parallel for reduction(+ : uncovered) schedule(static)
        for (std::int64_t i = 0; i < n; ++i) uncovered += !covered(sample_coloring(seed, i, rays));
    }
    return uncovered;
}

}  // namespace pks
}  // namespace qcover
