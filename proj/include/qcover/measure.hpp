#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "qcover/histories.hpp"
#include "qcover/parallel.hpp"
#include "qcover/rational.hpp"

namespace qcover {

struct Tolerances {
    double herm = 1e-9;       // relative to max |entry|
    double psd = 1e-9;        // relative to spectral radius
    double zero = 1e-9;       // "zero measure"
    double identity = 1e-10;  // algebraic identities, scaled by max |entry|
    double derived = 1e-7;    // consequences of strong positivity
};

using ComplexMatrix = Eigen::MatrixXcd;

// Hermitian matrix D(gamma_i, gamma_j) over fine-grained histories.
// Immutable; construction rejects non-Hermitian input.
class DecoherenceFunctional {
public:
    explicit DecoherenceFunctional(ComplexMatrix entries, double tol_herm = Tolerances{}.herm);

    // Averages the input with its conjugate transpose instead of rejecting it.
    static DecoherenceFunctional hermitized(const ComplexMatrix& entries);
    static DecoherenceFunctional diagonal(std::span<const double> weights);
    // sum_r v_r v_r^*: D_ij = sum_r v_r[i] conj(v_r[j]).
    static DecoherenceFunctional gram(std::span<const Eigen::VectorXcd> amplitudes);
    // Exact entries; enables exact zero tests. `imag` may be empty for real matrices.
    static DecoherenceFunctional from_rational(int n, const std::vector<Rational>& real,
                                               const std::vector<Rational>& imag);

    int size() const noexcept { return static_cast<int>(entries_.rows()); }
    HistorySpace space() const { return HistorySpace(size()); }
    const ComplexMatrix& entries() const noexcept { return entries_; }
    double max_abs_entry() const noexcept { return max_abs_; }

    bool has_exact() const noexcept { return exact_real_.has_value(); }
    // Row-major real parts; present only for rationally specified matrices.
    const std::vector<Rational>& exact_real() const;
    const std::vector<Rational>& exact_imag() const;

private:
    DecoherenceFunctional(ComplexMatrix entries, std::vector<Rational> re, std::vector<Rational> im);

    ComplexMatrix entries_;
    double max_abs_ = 0.0;
    std::optional<std::vector<Rational>> exact_real_;
    std::optional<std::vector<Rational>> exact_imag_;
};

// Biadditive extension: sum over i in A, j in B of D_ij.
std::complex<double> d_of(const DecoherenceFunctional& d, const Event& a, const Event& b);

// D(A,A). Throws ConsistencyError if the imaginary residue exceeds tol_herm.
double mu(const DecoherenceFunctional& d, const Event& a, double tol_herm = Tolerances{}.herm);

// Exact D(A,A) from the rational entries. Requires has_exact().
Rational mu_exact(const DecoherenceFunctional& d, Mask a);

// Unchecked real-part evaluation; the inner loop of every table kernel.
double mu_mask(const ComplexMatrix& entries, Mask a) noexcept;

// mu for every mask 0 .. 2^n - 1.
std::vector<double> measure_table(const DecoherenceFunctional& d, Exec exec = Exec::parallel);

// I_m = sum over nonempty sub-collections S of (-1)^(m-|S|) mu(union S).
double interference(const DecoherenceFunctional& d, std::span<const Event> parts);

struct LevelSearchLimits {
    std::uint64_t max_tuples = 50'000'000;
};

// Smallest k <= max_k with I_{k+1} vanishing on every (k+1)-tuple of disjoint
// nonempty events. nullopt when no such k <= max_k.
std::optional<int> measure_level(const DecoherenceFunctional& d, int max_k, double tol_zero = Tolerances{}.zero,
                                 LevelSearchLimits limits = {});

// Largest absolute I_m over all m-tuples of disjoint nonempty events (unordered).
double max_interference(const DecoherenceFunctional& d, int m, LevelSearchLimits limits = {});

// max over events E with |E| >= 3 of
// | mu(E) - (2 - |E|) sum_i mu({i}) - sum_{i<j} mu({i,j}) |.
double verify_identity(const DecoherenceFunctional& d, Exec exec = Exec::parallel);

// Worst violations, over ordered pairs of disjoint nonempty events (A, B), of the
// inequalities every strongly positive D satisfies. Zero means no violation.
//   cauchy_schwarz: Re D(A,B)^2 - mu(A) mu(B)
//   sandwich:       distance of mu(A+B) outside [(sqrt mu(A) - sqrt mu(B))^2, (sqrt mu(A) + sqrt mu(B))^2]
//   first:          |mu(A) - mu(B)| where mu(A+B) <= tol_zero
//   second:         |mu(A+B) - mu(B)| where mu(A) <= tol_zero
struct PairInequalities {
    double cauchy_schwarz = 0.0;
    double sandwich = 0.0;
    double first = 0.0;
    double second = 0.0;
    std::uint64_t pairs = 0;
};
inline constexpr int kPairCheckMaxN = 12;
PairInequalities pair_inequalities(const DecoherenceFunctional& d, double tol_zero = Tolerances{}.zero,
                                   Exec exec = Exec::parallel);

struct ValidationReport {
    bool hermitian = false;
    bool strongly_positive = false;
    double min_eigenvalue = 0.0;
    std::optional<bool> weakly_positive;  // exhaustive, n <= 12
    bool normalized = false;
    double mu_omega = 0.0;
    std::optional<int> measure_level;
    double identity_residual = 0.0;
};

inline constexpr int kWeakPositivityMaxN = 12;

ValidationReport validate(const DecoherenceFunctional& d, const Tolerances& tol = {});

// Strong positivity alone: min eigenvalue >= -tol_psd * spectral radius.
bool is_strongly_positive(const DecoherenceFunctional& d, double tol_psd = Tolerances{}.psd);
double min_eigenvalue(const DecoherenceFunctional& d);

struct SampleRequest {
    int n = 0;
    int rank = 1;
    std::uint64_t seed = 42;
    std::vector<Event> annihilate;
    bool normalize = false;
};

// Gram matrix of `rank` standard complex Gaussian vectors, each projected onto the
// orthogonal complement of span{chi_a : a in annihilate}, so mu(a) = 0 for those a.
// Generator: std::mt19937_64 seeded with `seed`, std::normal_distribution with
// variance 1/2 per real and imaginary part.
DecoherenceFunctional sample_spd(const SampleRequest& request, double tol_zero = Tolerances{}.zero);

// Sum_{l=0}^{n-2} (-1)^l C(n-2, l), exact.
std::int64_t alternating_binomial_sum(int n);

}  // namespace qcover
