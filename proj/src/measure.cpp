#include "qcover/measure.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "qcover/errors.hpp"

namespace qcover {

namespace {

double max_abs_of(const ComplexMatrix& m) {
    double out = 0.0;
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) out = std::max(out, std::abs(m(i, j)));
    return out;
}

void check_shape(const ComplexMatrix& m) {
    if (m.rows() != m.cols()) throw InvalidArgument("decoherence functional must be square");
    if (m.rows() < 1 || m.rows() > kMaxHistories)
        throw RangeError("decoherence functional size must be in [1, 24]");
}

double hermitian_defect(const ComplexMatrix& m) {
    double worst = 0.0;
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = i; j < m.cols(); ++j)
            worst = std::max(worst, std::abs(m(i, j) - std::conj(m(j, i))));
    return worst;
}

void require_space(const DecoherenceFunctional& d, const Event& e) {
    if (e.space_size() != d.size()) throw InvalidArgument("event and decoherence functional disagree on n");
}

}  // namespace

DecoherenceFunctional::DecoherenceFunctional(ComplexMatrix entries, double tol_herm)
    : entries_(std::move(entries)) {
    check_shape(entries_);
    max_abs_ = max_abs_of(entries_);
    const double defect = hermitian_defect(entries_);
    if (defect > tol_herm * max_abs_)
        throw InvalidArgument("decoherence functional is not Hermitian (defect " + std::to_string(defect) + ")");
}

DecoherenceFunctional::DecoherenceFunctional(ComplexMatrix entries, std::vector<Rational> re,
                                             std::vector<Rational> im)
    : entries_(std::move(entries)), exact_real_(std::move(re)), exact_imag_(std::move(im)) {
    max_abs_ = max_abs_of(entries_);
}

DecoherenceFunctional DecoherenceFunctional::hermitized(const ComplexMatrix& entries) {
    check_shape(entries);
    ComplexMatrix h = (entries + entries.adjoint()) * 0.5;
    // Pin the diagonal to exactly real and the off-diagonal pairs to exact conjugates.
    for (Eigen::Index i = 0; i < h.rows(); ++i) {
        h(i, i) = h(i, i).real();
        for (Eigen::Index j = i + 1; j < h.cols(); ++j) h(j, i) = std::conj(h(i, j));
    }
    return DecoherenceFunctional(std::move(h), 0.0);
}

DecoherenceFunctional DecoherenceFunctional::diagonal(std::span<const double> weights) {
    ComplexMatrix m = ComplexMatrix::Zero(static_cast<Eigen::Index>(weights.size()),
                                          static_cast<Eigen::Index>(weights.size()));
    for (std::size_t i = 0; i < weights.size(); ++i) m(i, i) = weights[i];
    return DecoherenceFunctional(std::move(m), 0.0);
}

DecoherenceFunctional DecoherenceFunctional::gram(std::span<const Eigen::VectorXcd> amplitudes) {
    if (amplitudes.empty()) throw InvalidArgument("Gram construction needs at least one vector");
    const Eigen::Index n = amplitudes.front().size();
    ComplexMatrix m = ComplexMatrix::Zero(n, n);
    for (const auto& v : amplitudes) {
        if (v.size() != n) throw InvalidArgument("Gram vectors of unequal length");
        m += v * v.adjoint();
    }
    return hermitized(m);
}

DecoherenceFunctional DecoherenceFunctional::from_rational(int n, const std::vector<Rational>& real,
                                                           const std::vector<Rational>& imag) {
    if (n < 1 || n > kMaxHistories) throw RangeError("decoherence functional size must be in [1, 24]");
    const auto count = static_cast<std::size_t>(n) * static_cast<std::size_t>(n);
    if (real.size() != count || (!imag.empty() && imag.size() != count))
        throw InvalidArgument("rational entry count does not match n*n");
    std::vector<Rational> im = imag.empty() ? std::vector<Rational>(count) : imag;
    ComplexMatrix m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const std::size_t ij = i * n + j, ji = j * n + i;
            if (real[ij] != real[ji] || im[ij] != -im[ji])
                throw InvalidArgument("rational decoherence functional is not Hermitian");
            m(i, j) = {real[ij].get_d(), im[ij].get_d()};
        }
    return DecoherenceFunctional(std::move(m), real, std::move(im));
}

const std::vector<Rational>& DecoherenceFunctional::exact_real() const {
    if (!exact_real_) throw InvalidArgument("decoherence functional has no exact entries");
    return *exact_real_;
}

const std::vector<Rational>& DecoherenceFunctional::exact_imag() const {
    if (!exact_imag_) throw InvalidArgument("decoherence functional has no exact entries");
    return *exact_imag_;
}

std::complex<double> d_of(const DecoherenceFunctional& d, const Event& a, const Event& b) {
    require_space(d, a);
    require_space(d, b);
    std::complex<double> sum = 0.0;
    for (int i : a.labels())
        for (int j : b.labels()) sum += d.entries()(i - 1, j - 1);
    return sum;
}

double mu(const DecoherenceFunctional& d, const Event& a, double tol_herm) {
    const auto value = d_of(d, a, a);
    const double card = a.cardinality();
    if (std::abs(value.imag()) > tol_herm * std::max(1.0, d.max_abs_entry()) * std::max(1.0, card * card))
        throw ConsistencyError("quantum measure has an imaginary residue of " + std::to_string(value.imag()));
    return value.real();
}

Rational mu_exact(const DecoherenceFunctional& d, Mask a) {
    const auto& re = d.exact_real();
    const auto n = static_cast<std::size_t>(d.size());
    Rational sum = 0;
    for (Mask s = a; s != 0; s &= s - 1)
        for (Mask t = a; t != 0; t &= t - 1)
            sum += re[std::countr_zero(s) * n + std::countr_zero(t)];
    return sum;
}

double mu_mask(const ComplexMatrix& entries, Mask a) noexcept {
    double sum = 0.0;
    for (Mask s = a; s != 0; s &= s - 1) {
        const int i = std::countr_zero(s);
        double row = 0.0;
        for (Mask t = a & ((Mask{1} << i) - 1); t != 0; t &= t - 1) row += entries(i, std::countr_zero(t)).real();
        sum += entries(i, i).real() + 2.0 * row;
    }
    return sum;
}

std::vector<double> measure_table(const DecoherenceFunctional& d, Exec exec) {
    const auto count = static_cast<std::int64_t>(d.space().event_count());
    std::vector<double> table(static_cast<std::size_t>(count));
    const auto& entries = d.entries();
    if (exec == Exec::serial) {
        for (std::int64_t m = 0; m < count; ++m) table[m] = mu_mask(entries, static_cast<Mask>(m));
    } else {
#pragma omp parallel for schedule(static)
        for (std::int64_t m = 0; m < count; ++m) table[m] = mu_mask(entries, static_cast<Mask>(m));
    }
    return table;
}

namespace {

double interference_of_masks(const ComplexMatrix& entries, std::span<const Mask> parts) {
    const auto m = static_cast<int>(parts.size());
    double sum = 0.0;
    for (unsigned sel = 1; sel < (1U << m); ++sel) {
        Mask u = 0;
        for (unsigned s = sel; s != 0; s &= s - 1) u |= parts[std::countr_zero(s)];
        const int sign = ((m - std::popcount(sel)) % 2 == 0) ? 1 : -1;
        sum += sign * mu_mask(entries, u);
    }
    return sum;
}

double pow_over_factorial(int base, int exponent, int m) {
    double v = std::pow(static_cast<double>(base), exponent);
    for (int i = 2; i <= m; ++i) v /= i;
    return v;
}

// Visits every unordered m-tuple of disjoint nonempty events: labels are assigned
// to "unused" or a part, parts numbered by first appearance.
template <typename Visit>
void for_each_disjoint_tuple(int n, int m, Visit&& visit) {
    std::vector<Mask> parts(m, 0);
    auto rec = [&](auto&& self, int label, int opened) -> void {
        if (n - label < m - opened) return;
        if (label == n) {
            visit(std::span<const Mask>(parts));
            return;
        }
        self(self, label + 1, opened);
        for (int p = 0; p < opened; ++p) {
            parts[p] |= Mask{1} << label;
            self(self, label + 1, opened);
            parts[p] &= ~(Mask{1} << label);
        }
        if (opened < m) {
            parts[opened] |= Mask{1} << label;
            self(self, label + 1, opened + 1);
            parts[opened] &= ~(Mask{1} << label);
        }
    };
    rec(rec, 0, 0);
}

}  // namespace

double interference(const DecoherenceFunctional& d, std::span<const Event> parts) {
    if (parts.size() < 2) throw InvalidArgument("interference needs at least two parts");
    if (parts.size() > 24) throw InvalidArgument("too many parts");
    std::vector<Mask> masks;
    Mask seen = 0;
    for (const auto& e : parts) {
        require_space(d, e);
        if (e.is_empty()) throw InvalidArgument("interference parts must be nonempty");
        if ((seen & e.mask()) != 0) throw InvalidArgument("interference parts must be pairwise disjoint");
        seen |= e.mask();
        masks.push_back(e.mask());
    }
    return interference_of_masks(d.entries(), masks);
}

double max_interference(const DecoherenceFunctional& d, int m, LevelSearchLimits limits) {
    const int n = d.size();
    if (m < 1) throw InvalidArgument("interference order must be positive");
    if (pow_over_factorial(m + 1, n, m) > static_cast<double>(limits.max_tuples))
        throw ResourceLimit("disjoint-tuple sweep for I_" + std::to_string(m) + " at n=" + std::to_string(n) +
                            " exceeds the budget");
    double worst = 0.0;
    for_each_disjoint_tuple(n, m, [&](std::span<const Mask> parts) {
        worst = std::max(worst, std::abs(interference_of_masks(d.entries(), parts)));
    });
    return worst;
}

std::optional<int> measure_level(const DecoherenceFunctional& d, int max_k, double tol_zero,
                                 LevelSearchLimits limits) {
    if (max_k < 1 || max_k > d.size()) throw RangeError("max_k must be in [1, n]");
    const double scale = std::max(1.0, d.max_abs_entry());
    for (int k = 1; k <= max_k; ++k) {
        // No (k+1) disjoint nonempty events exist once k+1 > n: the condition holds vacuously.
        if (k + 1 > d.size()) return k;
        if (max_interference(d, k + 1, limits) <= tol_zero * scale) return k;
    }
    return std::nullopt;
}

PairInequalities pair_inequalities(const DecoherenceFunctional& d, double tol_zero, Exec exec) {
    const int n = d.size();
    if (n > kPairCheckMaxN) throw ResourceLimit("pair inequality sweep is 3^n; capped at n <= 12");
    const auto table = measure_table(d, exec);
    const auto full = static_cast<std::int64_t>(d.space().full_mask());

    auto visit = [&](Mask a, PairInequalities& acc) {
        const double ma = table[a];
        const Mask rest = static_cast<Mask>(full) & ~a;
        for (Mask b = rest; b != 0; b = (b - 1) & rest) {
            const double mb = table[b], mab = table[a | b];
            const double re = 0.5 * (mab - ma - mb);
            acc.cauchy_schwarz = std::max(acc.cauchy_schwarz, re * re - ma * mb);
            const double ra = std::sqrt(std::max(ma, 0.0)), rb = std::sqrt(std::max(mb, 0.0));
            acc.sandwich = std::max({acc.sandwich, (ra - rb) * (ra - rb) - mab, mab - (ra + rb) * (ra + rb)});
            if (mab <= tol_zero) acc.first = std::max(acc.first, std::abs(ma - mb));
            if (ma <= tol_zero) acc.second = std::max(acc.second, std::abs(mab - mb));
            ++acc.pairs;
        }
    };

    PairInequalities out;
    if (exec == Exec::serial) {
        for (std::int64_t a = 1; a <= full; ++a) visit(static_cast<Mask>(a), out);
        return out;
    }
    double cs = 0.0, sw = 0.0, first = 0.0, second = 0.0;
    std::uint64_t pairs = 0;
#pragma omp parallel for schedule(dynamic, 64) reduction(max : cs, sw, first, second) reduction(+ : pairs)
    for (std::int64_t a = 1; a <= full; ++a) {
        PairInequalities local;
        visit(static_cast<Mask>(a), local);
        cs = std::max(cs, local.cauchy_schwarz);
        sw = std::max(sw, local.sandwich);
        first = std::max(first, local.first);
        second = std::max(second, local.second);
        pairs += local.pairs;
    }
    out.cauchy_schwarz = cs;
    out.sandwich = sw;
    out.first = first;
    out.second = second;
    out.pairs = pairs;
    return out;
}

double verify_identity(const DecoherenceFunctional& d, Exec exec) {
    const int n = d.size();
    const auto& e = d.entries();
    std::vector<double> single(n);
    std::vector<double> pair(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) single[i] = mu_mask(e, Mask{1} << i);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) pair[i * n + j] = mu_mask(e, (Mask{1} << i) | (Mask{1} << j));

    const auto count = static_cast<std::int64_t>(d.space().event_count());
    auto residual = [&](Mask m) {
        const int card = std::popcount(m);
        if (card < 3) return 0.0;
        double s1 = 0.0, s2 = 0.0;
        for (Mask s = m; s != 0; s &= s - 1) {
            const int i = std::countr_zero(s);
            s1 += single[i];
            for (Mask t = s & (s - 1); t != 0; t &= t - 1) s2 += pair[i * n + std::countr_zero(t)];
        }
        return std::abs(mu_mask(e, m) - ((2.0 - card) * s1 + s2));
    };

    double worst = 0.0;
    if (exec == Exec::serial) {
        for (std::int64_t m = 0; m < count; ++m) worst = std::max(worst, residual(static_cast<Mask>(m)));
    } else {
#pragma omp parallel for reduction(max : worst) schedule(static)
        for (std::int64_t m = 0; m < count; ++m) worst = std::max(worst, residual(static_cast<Mask>(m)));
    }
    return worst;
}

double min_eigenvalue(const DecoherenceFunctional& d) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(d.entries(), Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff();
}

namespace {

double spectral_radius(const DecoherenceFunctional& d, double& min_eig) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(d.entries(), Eigen::EigenvaluesOnly);
    const auto& ev = solver.eigenvalues();
    min_eig = ev.minCoeff();
    return ev.cwiseAbs().maxCoeff();
}

}  // namespace

bool is_strongly_positive(const DecoherenceFunctional& d, double tol_psd) {
    double min_eig = 0.0;
    const double radius = spectral_radius(d, min_eig);
    return min_eig >= -tol_psd * radius;
}

ValidationReport validate(const DecoherenceFunctional& d, const Tolerances& tol) {
    ValidationReport report;
    report.hermitian = hermitian_defect(d.entries()) <= tol.herm * d.max_abs_entry();
    double min_eig = 0.0;
    const double radius = spectral_radius(d, min_eig);
    report.min_eigenvalue = min_eig;
    report.strongly_positive = min_eig >= -tol.psd * radius;
    report.mu_omega = mu_mask(d.entries(), d.space().full_mask());
    report.normalized = std::abs(report.mu_omega - 1.0) <= tol.zero;

    if (d.size() <= kWeakPositivityMaxN) {
        const auto table = measure_table(d);
        bool ok = true;
        for (std::size_t m = 1; m < table.size(); ++m) {
            const double slack = std::max(tol.zero, tol.psd * radius * std::popcount(static_cast<Mask>(m)));
            ok = ok && table[m] >= -slack;
        }
        report.weakly_positive = ok;
    }
    if (d.size() <= 8) report.measure_level = measure_level(d, std::min(3, d.size()), tol.zero);
    report.identity_residual = verify_identity(d);
    return report;
}

DecoherenceFunctional sample_spd(const SampleRequest& request, double tol_zero) {
    const int n = request.n;
    if (n < 1 || n > kMaxHistories) throw RangeError("sample size n must be in [1, 24]");
    if (request.rank < 1 || request.rank > n) throw InvalidArgument("rank must satisfy 1 <= rank <= n");

    Eigen::MatrixXd basis(n, 0);
    bool omega_in_span = false;
    if (!request.annihilate.empty()) {
        Eigen::MatrixXd indicators = Eigen::MatrixXd::Zero(n, static_cast<Eigen::Index>(request.annihilate.size()));
        for (std::size_t c = 0; c < request.annihilate.size(); ++c) {
            const auto& a = request.annihilate[c];
            if (a.space_size() != n) throw InvalidArgument("annihilated event from a different space");
            for (int label : a.labels()) indicators(label - 1, static_cast<Eigen::Index>(c)) = 1.0;
        }
        Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(indicators);
        qr.setThreshold(1e-12);
        const auto rank = qr.rank();
        basis = Eigen::MatrixXd(qr.householderQ()).leftCols(rank);
        const Eigen::VectorXd ones = Eigen::VectorXd::Ones(n);
        omega_in_span = (ones - basis * (basis.transpose() * ones)).squaredNorm() <= 1e-12 * n;
    }
    if (omega_in_span && request.normalize)
        throw InfeasibleNormalization("annihilated events span the indicator of Omega; mu(Omega) is forced to 0");

    std::mt19937_64 rng(request.seed);
    std::normal_distribution<double> gauss(0.0, std::sqrt(0.5));
    const Eigen::MatrixXcd q = basis.cast<std::complex<double>>();
    std::vector<Eigen::VectorXcd> vectors;
    for (int r = 0; r < request.rank; ++r) {
        Eigen::VectorXcd v(n);
        for (int i = 0; i < n; ++i) {
            const double re = gauss(rng);
            const double im = gauss(rng);
            v(i) = {re, im};
        }
        if (q.cols() > 0)
            for (int pass = 0; pass < 2; ++pass) v -= q * (q.adjoint() * v);
        vectors.push_back(std::move(v));
    }
    auto d = DecoherenceFunctional::gram(vectors);
    if (!request.normalize) return d;

    const double omega = mu_mask(d.entries(), d.space().full_mask());
    if (omega <= tol_zero) throw InfeasibleNormalization("sampled mu(Omega) too small to normalize");
    return DecoherenceFunctional(d.entries() / omega, 0.0);
}

std::int64_t alternating_binomial_sum(int n) {
    if (n < 2) throw RangeError("alternating binomial sum needs n >= 2");
    std::int64_t sum = 0;
    for (int l = 0; l <= n - 2; ++l) sum += (l % 2 == 0 ? 1 : -1) * static_cast<std::int64_t>(binomial(n - 2, l));
    return sum;
}

}  // namespace qcover
