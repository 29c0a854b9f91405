#include "bargmann/interferometer.hpp"

#include <atomic>
#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace bargmann {

namespace {

constexpr int kMaxFactorial = 170;  // last n! representable in double

const double* factorial_table() {
    static const auto table = [] {
        static double t[kMaxFactorial + 1];
        t[0] = 1.0;
        for (int i = 1; i <= kMaxFactorial; ++i) t[i] = t[i - 1] * i;
        return t;
    }();
    return table;
}

double factorial(int n) {
    if (n < 0 || n > kMaxFactorial)
        throw capacity_error("factorial argument out of range");
    return factorial_table()[n];
}

double binomial(int n, int k) {
    return factorial(n) / (factorial(k) * factorial(n - k));
}

std::atomic<std::uint64_t> g_sector_cap{2'000'000};

}  // namespace

ModeUnitary::ModeUnitary(Eigen::MatrixXcd entries) : entries_(std::move(entries)) {
    if (entries_.rows() != entries_.cols() || entries_.rows() < 1)
        throw std::invalid_argument("ModeUnitary: matrix must be square, M >= 1");
    const Eigen::MatrixXcd gram = entries_.adjoint() * entries_;
    const Eigen::MatrixXcd eye =
        Eigen::MatrixXcd::Identity(entries_.rows(), entries_.cols());
    if (((gram - eye).cwiseAbs().maxCoeff()) > kNormTol)
        throw std::invalid_argument("ModeUnitary: matrix is not unitary within 1e-10");
}

ModeUnitary fourier_matrix(int M) {
    if (M < 1) throw std::invalid_argument("fourier_matrix: M >= 1 required");
    Eigen::MatrixXcd F(M, M);
    const double inv_sqrt = 1.0 / std::sqrt(static_cast<double>(M));
    for (int k = 0; k < M; ++k)
        for (int j = 0; j < M; ++j) {
            const int t = (j * k) % M;
            F(k, j) = std::polar(inv_sqrt, 2.0 * std::numbers::pi * t / M);
        }
    return ModeUnitary(std::move(F));
}

ModeUnitary cyclic_matrix(int M) {
    if (M < 1) throw std::invalid_argument("cyclic_matrix: M >= 1 required");
    Eigen::MatrixXcd C = Eigen::MatrixXcd::Zero(M, M);
    for (int k = 0; k < M; ++k) C(k, (k + 1) % M) = 1.0;
    return ModeUnitary(std::move(C));
}

ModeUnitary diagonal_phases(int M) {
    if (M < 1) throw std::invalid_argument("diagonal_phases: M >= 1 required");
    Eigen::MatrixXcd D = Eigen::MatrixXcd::Zero(M, M);
    for (int j = 0; j < M; ++j)
        D(j, j) = std::polar(1.0, 2.0 * std::numbers::pi * j / M);
    return ModeUnitary(std::move(D));
}

ModeUnitary beamsplitter_matrix(double theta, double phi) {
    Eigen::MatrixXcd B(2, 2);
    B(0, 0) = std::cos(theta);
    B(0, 1) = -std::polar(std::sin(theta), -phi);
    B(1, 0) = std::polar(std::sin(theta), phi);
    B(1, 1) = std::cos(theta);
    return ModeUnitary(std::move(B));
}

ModeUnitary identity_matrix(int M) {
    return ModeUnitary(Eigen::MatrixXcd::Identity(M, M));
}

cplx permanent(const Eigen::MatrixXcd& A) {
    if (A.rows() != A.cols())
        throw std::invalid_argument("permanent: matrix must be square");
    const int n = static_cast<int>(A.rows());
    if (n == 0) return 1.0;
    if (n > 30) throw capacity_error("permanent: dimension > 30 refused");

    // Ryser with Gray-code subset walk: per(A) =
    // (-1)^n sum_{S != empty} (-1)^{|S|} prod_i sum_{j in S} A_ij.
    std::vector<cplx> rowsum(n, cplx{0.0, 0.0});
    cplx total = 0.0;
    std::uint64_t prev_gray = 0;
    const std::uint64_t subsets = std::uint64_t{1} << n;
    for (std::uint64_t k = 1; k < subsets; ++k) {
        const std::uint64_t gray = k ^ (k >> 1);
        const std::uint64_t diff = gray ^ prev_gray;
        const int j = std::countr_zero(diff);
        const double step = (gray & diff) ? 1.0 : -1.0;
        for (int i = 0; i < n; ++i) rowsum[i] += step * A(i, j);
        cplx prod = 1.0;
        for (int i = 0; i < n; ++i) prod *= rowsum[i];
        total += (std::popcount(gray) % 2 == 0) ? prod : -prod;
        prev_gray = gray;
    }
    return (n % 2 == 0) ? total : -total;
}

cplx permanent_with_multiplicities(const Eigen::MatrixXcd& A,
                                   const std::vector<int>& row_mult,
                                   const std::vector<int>& col_mult) {
    const int m = static_cast<int>(A.rows());
    if (A.cols() != m)
        throw std::invalid_argument("permanent_with_multiplicities: square matrix required");
    if (static_cast<int>(row_mult.size()) != m ||
        static_cast<int>(col_mult.size()) != m)
        throw std::invalid_argument("permanent_with_multiplicities: multiplicity size mismatch");
    int n = 0, n_cols = 0;
    for (int s : row_mult) n += s;
    for (int t : col_mult) n_cols += t;
    if (n != n_cols)
        throw std::invalid_argument("permanent_with_multiplicities: unbalanced multiplicities");
    if (n == 0) return 1.0;

    // Ryser over column subsets collapsed by multiplicity: subsets of
    // identical columns contribute binomially, rows raise to their power.
    std::vector<int> x(m, 0);
    std::vector<cplx> rowsum(m, cplx{0.0, 0.0});
    cplx total = 0.0;
    while (true) {
        // advance odometer: x runs over {0..col_mult[j]} per digit
        int j = 0;
        while (j < m && x[j] == col_mult[j]) {
            for (int i = 0; i < m; ++i) rowsum[i] -= static_cast<double>(x[j]) * A(i, j);
            x[j] = 0;
            ++j;
        }
        if (j == m) break;
        ++x[j];
        for (int i = 0; i < m; ++i) rowsum[i] += A(i, j);

        int weight = 0;
        double coeff = 1.0;
        for (int jj = 0; jj < m; ++jj) {
            weight += x[jj];
            coeff *= binomial(col_mult[jj], x[jj]);
        }
        cplx prod = coeff;
        for (int i = 0; i < m; ++i) {
            cplx p = 1.0;
            for (int rep = 0; rep < row_mult[i]; ++rep) p *= rowsum[i];
            prod *= p;
        }
        total += (weight % 2 == 0) ? prod : -prod;
    }
    return (n % 2 == 0) ? total : -total;
}

std::uint64_t max_sector_size() { return g_sector_cap.load(); }

void set_max_sector_size(std::uint64_t cap) {
    if (cap == 0) throw std::invalid_argument("sector cap must be positive");
    g_sector_cap.store(cap);
}

namespace {

// Single-internal-mode transition amplitudes: evolves an M-mode occupation T
// under U, returning amplitudes over the whole photon-number sector of T.
//
// Amplitudes follow the permanent formula per(U_{S,T}) / sqrt(S! T!), but are
// evaluated by expanding prod_j (sum_k U_kj a'_k)^{T_j} multinomially. The
// expansion collects the same permanent without Ryser's alternating sums,
// whose cancellation destroys precision once a mode holds tens of photons.
std::vector<std::pair<Occupation, cplx>> evolve_system_occupation(
    const Eigen::MatrixXcd& U, const Occupation& T) {
    const int M = static_cast<int>(U.rows());
    const int n = photon_count(T);
    std::vector<std::pair<Occupation, cplx>> out;
    if (n == 0) {
        out.emplace_back(Occupation(M, 0), cplx{1.0, 0.0});
        return out;
    }

    // monomial coefficients c(w) of prod (a'_k)^{w_k} acting on vacuum
    std::map<Occupation, cplx> coeff;
    coeff[Occupation(M, 0)] = 1.0;
    for (int j = 0; j < M; ++j) {
        if (T[j] == 0) continue;
        // power table U(k, j)^p for p <= T_j
        std::vector<std::vector<cplx>> upow(M, std::vector<cplx>(T[j] + 1, cplx{1.0, 0.0}));
        for (int k = 0; k < M; ++k)
            for (int p = 1; p <= T[j]; ++p) upow[k][p] = upow[k][p - 1] * U(k, j);

        std::map<Occupation, cplx> next;
        for (const auto& exponents : enumerate_sector(T[j], M)) {
            cplx factor = factorial(T[j]);
            for (int k = 0; k < M; ++k) factor *= upow[k][exponents[k]] / factorial(exponents[k]);
            if (std::abs(factor) == 0.0) continue;
            for (const auto& [w, c] : coeff) {
                Occupation grown = w;
                for (int k = 0; k < M; ++k) grown[k] += exponents[k];
                next[std::move(grown)] += c * factor;
            }
        }
        coeff = std::move(next);
    }

    double t_fact = 1.0;
    for (int j = 0; j < M; ++j) t_fact *= factorial(T[j]);
    for (auto& [S, c] : coeff) {
        double s_fact = 1.0;
        for (int k = 0; k < M; ++k) s_fact *= factorial(S[k]);
        const cplx amp = c * std::sqrt(s_fact / t_fact);
        if (std::abs(amp) < kAmplitudePruneEps) continue;
        out.emplace_back(S, amp);
    }
    return out;
}

}  // namespace

PureState lift_and_apply(const ModeUnitary& U, const PureState& psi) {
    if (psi.layout.num_systems != U.dimension())
        throw std::invalid_argument("lift_and_apply: system count != unitary dimension");
    const int M = psi.layout.num_systems;
    const int d = psi.layout.num_internal;

    PureState out;
    out.layout = psi.layout;
    for (const auto& [key, in_amp] : psi.amps) {
        sector_size(photon_count(key), M * d, max_sector_size());

        // U (x) I_d is block diagonal over internal modes, so each key
        // evolves as a product of independent M-mode evolutions, one per
        // internal mode.
        std::vector<std::vector<std::pair<Occupation, cplx>>> factors(d);
        for (int alpha = 0; alpha < d; ++alpha) {
            Occupation T(M);
            for (int j = 0; j < M; ++j) T[j] = key[psi.layout.flat(j, alpha)];
            factors[alpha] = evolve_system_occupation(U.entries(), T);
        }

        std::vector<std::size_t> pick(d, 0);
        while (true) {
            cplx amp = in_amp;
            Occupation flat_key(M * d, 0);
            for (int alpha = 0; alpha < d; ++alpha) {
                const auto& [S, a] = factors[alpha][pick[alpha]];
                amp *= a;
                for (int j = 0; j < M; ++j) flat_key[psi.layout.flat(j, alpha)] = S[j];
            }
            out.amps[std::move(flat_key)] += amp;
            int alpha = 0;
            while (alpha < d && ++pick[alpha] == factors[alpha].size()) {
                pick[alpha] = 0;
                ++alpha;
            }
            if (alpha == d) break;
        }
    }
    out.prune();
    return out;
}

MixedState apply_to_mixture(const ModeUnitary& U, const MixedState& rho) {
    std::vector<MixedComponent> comps;
    comps.reserve(rho.components.size());
    for (const auto& c : rho.components)
        comps.push_back({c.weight, lift_and_apply(U, c.state)});
    return MixedState(std::move(comps));
}

}  // namespace bargmann
