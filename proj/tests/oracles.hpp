#pragma once

// Test-only fixtures and brute-force oracles. Nothing here calls into the code
// paths it is used to check.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <vector>

#include "qcover/measure.hpp"

namespace qcover::testing {

// Two-slit: destructive pair, rank-1 Gram of (1,-1)/sqrt2.
inline DecoherenceFunctional two_slit() {
    ComplexMatrix m(2, 2);
    m << 0.5, -0.5, -0.5, 0.5;
    return DecoherenceFunctional(m);
}

// Three-slit: rank-1 Gram of (1,-1,1)/sqrt3.
inline DecoherenceFunctional three_slit() {
    ComplexMatrix m(3, 3);
    const double t = 1.0 / 3.0;
    m << t, -t, t, -t, t, -t, t, -t, t;
    return DecoherenceFunctional(m);
}

inline DecoherenceFunctional three_slit_exact() {
    const Rational t(1, 3);
    std::vector<Rational> re{t, -t, t, -t, t, -t, t, -t, t};
    return DecoherenceFunctional::from_rational(3, re, {});
}

inline Eigen::VectorXd indicator(int n, Mask m) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < n; ++i)
        if ((m >> i) & 1U) v(i) = 1.0;
    return v;
}

// chi^T D chi through Eigen, independent of mu_mask's bit loops.
inline double mu_oracle(const DecoherenceFunctional& d, Mask m) {
    const Eigen::VectorXcd chi = indicator(d.size(), m).cast<std::complex<double>>();
    return (chi.adjoint() * d.entries() * chi)(0, 0).real();
}

// All maximal antichains of nonempty events by exhausting every family of events.
// Feasible for n <= 4 (2^15 families).
inline std::vector<std::vector<Mask>> brute_force_maximal_antichains(int n) {
    const int events = (1 << n) - 1;
    auto comparable = [](Mask a, Mask b) { return (a & ~b) == 0 || (b & ~a) == 0; };
    std::vector<std::vector<Mask>> out;
    for (std::uint64_t family = 1; family < (std::uint64_t{1} << events); ++family) {
        std::vector<Mask> members;
        for (int v = 0; v < events; ++v)
            if ((family >> v) & 1U) members.push_back(static_cast<Mask>(v + 1));
        bool antichain = true;
        for (std::size_t i = 0; i < members.size() && antichain; ++i)
            for (std::size_t j = i + 1; j < members.size(); ++j)
                if (comparable(members[i], members[j])) {
                    antichain = false;
                    break;
                }
        if (!antichain) continue;
        bool maximal = true;
        for (Mask e = 1; e <= static_cast<Mask>(events) && maximal; ++e) {
            if (std::find(members.begin(), members.end(), e) != members.end()) continue;
            if (std::none_of(members.begin(), members.end(), [&](Mask a) { return comparable(a, e); })) maximal = false;
        }
        if (maximal) out.push_back(members);
    }
    std::sort(out.begin(), out.end());
    return out;
}

// Floating-point rank test: chi_Omega in span iff appending it keeps the rank.
inline bool span_oracle(int n, const std::vector<Mask>& family) {
    Eigen::MatrixXd a(n, static_cast<Eigen::Index>(family.size()));
    for (std::size_t c = 0; c < family.size(); ++c) a.col(static_cast<Eigen::Index>(c)) = indicator(n, family[c]);
    Eigen::MatrixXd aug(n, a.cols() + 1);
    aug << a, Eigen::VectorXd::Ones(n);
    Eigen::FullPivLU<Eigen::MatrixXd> lu_a(a), lu_aug(aug);
    lu_a.setThreshold(1e-10);
    lu_aug.setThreshold(1e-10);
    return lu_a.rank() == lu_aug.rank();
}

inline std::vector<Mask> masks_of_level(int n, int k) {
    std::vector<Mask> out;
    for (Mask m = 1; m < (Mask{1} << n); ++m)
        if (std::popcount(m) == k) out.push_back(m);
    return out;
}

}  // namespace qcover::testing
