#include "mwalk/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mwalk/rng.hpp"

namespace mwalk::spectral {

namespace {
constexpr int kMaxBits = 20;
// Dense Jacobi is O(D^3) per sweep; beyond this the sparse Lanczos path wins.
constexpr std::uint64_t kJacobiCap = 256;
}  // namespace

StateSpace StateSpace::walk_block(int n, std::vector<int> columns) {
    StateSpace s;
    s.kind = Kind::WalkBlock;
    s.n = n;
    std::sort(columns.begin(), columns.end());
    s.columns = std::move(columns);
    int off = 0;
    for (int c : s.columns) {
        if (c < 1 || c > n) throw std::invalid_argument("StateSpace: column out of range");
        s.offsets.push_back(off);
        off += c - 1;
    }
    s.bits = off;
    if (s.bits > kMaxBits) throw std::invalid_argument("StateSpace: state space above 2^20");
    return s;
}

StateSpace StateSpace::east_chain(int m) {
    if (m < 1) throw std::invalid_argument("StateSpace: east chain needs >= 1 site");
    StateSpace s;
    s.kind = Kind::East;
    s.sites = m;
    s.bits = m;
    if (s.bits > kMaxBits) throw std::invalid_argument("StateSpace: state space above 2^20");
    return s;
}

std::uint64_t StateSpace::index_of(const walk::ColumnBlock& b) const {
    std::uint64_t idx = 0;
    for (std::size_t j = 0; j < columns.size(); ++j) {
        const int c = columns[j];
        for (int r = 1; r < c; ++r)
            if (b.get(r, static_cast<int>(j))) idx |= 1ull << (offsets[j] + r - 1);
    }
    return idx;
}

walk::ColumnBlock StateSpace::state_of(std::uint64_t idx) const {
    walk::ColumnBlock b = walk::ColumnBlock::identity(n, columns);
    for (std::size_t j = 0; j < columns.size(); ++j) {
        const int c = columns[j];
        for (int r = 1; r < c; ++r)
            if (idx >> (offsets[j] + r - 1) & 1) b.cols[j].set(r - 1, true);
    }
    return b;
}

std::uint64_t StateSpace::index_of(const east::EastState& s) const {
    std::uint64_t idx = 0;
    for (int x = 1; x <= s.L; ++x)
        if (s.get(x)) idx |= 1ull << (x - 1);
    return idx;
}

east::EastState StateSpace::east_state_of(std::uint64_t idx) const {
    east::EastState s = east::EastState::zeros(sites, 1);
    for (int x = 1; x <= sites; ++x) s.bits[static_cast<std::size_t>(x - 1)] = (idx >> (x - 1)) & 1;
    return s;
}

double Generator::uniformization_rate() const {
    std::uint32_t max_deg = 0;
    for (std::uint64_t s = 0; s < dim; ++s) max_deg = std::max(max_deg, degree(s));
    return rate * max_deg;
}

void Generator::matvec(std::span<const double> in, std::span<double> out) const {
    for (std::uint64_t s = 0; s < dim; ++s) {
        double acc = 0.0;
        for (std::uint64_t e = row_ptr[s]; e < row_ptr[s + 1]; ++e) acc += in[nbr[e]];
        out[s] = rate * (acc - static_cast<double>(degree(s)) * in[s]);
    }
}

std::vector<double> Generator::dense() const {
    if (dim > 4096) throw std::invalid_argument("Generator::dense: too large");
    std::vector<double> a(dim * dim, 0.0);
    for (std::uint64_t s = 0; s < dim; ++s) {
        for (std::uint64_t e = row_ptr[s]; e < row_ptr[s + 1]; ++e) a[s * dim + nbr[e]] += rate;
        a[s * dim + s] = -rate * static_cast<double>(degree(s));
    }
    return a;
}

Generator build_generator(const StateSpace& space) {
    const std::uint64_t dim = space.dim();
    Generator g;
    g.dim = dim;
    g.row_ptr.assign(dim + 1, 0);

    // Every move is an involutive bit-mask flip; enumerate masks per state.
    auto moves_of = [&space](std::uint64_t u, std::vector<std::uint64_t>& masks) {
        masks.clear();
        if (space.kind == StateSpace::Kind::East) {
            for (int x = 1; x <= space.sites; ++x) {
                const bool facil = (x == 1) || ((u >> (x - 2)) & 1);
                if (facil) masks.push_back(1ull << (x - 1));
            }
        } else {
            for (int x = 1; x <= space.n - 1; ++x) {
                std::uint64_t mask = 0;
                for (std::size_t j = 0; j < space.columns.size(); ++j) {
                    const int c = space.columns[j];
                    if (c <= x) continue;
                    // entry at row x+1: structural 1 on the diagonal,
                    // otherwise the free bit.
                    const bool below = (x + 1 == c) || ((u >> (space.offsets[j] + x)) & 1);
                    if (below) mask |= 1ull << (space.offsets[j] + x - 1);
                }
                if (mask) masks.push_back(mask);
            }
        }
    };

    std::vector<std::uint64_t> masks;
    for (std::uint64_t u = 0; u < dim; ++u) {
        moves_of(u, masks);
        g.row_ptr[u + 1] = masks.size();
    }
    for (std::uint64_t u = 0; u < dim; ++u) g.row_ptr[u + 1] += g.row_ptr[u];
    g.nbr.resize(g.row_ptr[dim]);
    for (std::uint64_t u = 0; u < dim; ++u) {
        moves_of(u, masks);
        std::uint64_t e = g.row_ptr[u];
        for (std::uint64_t m : masks) g.nbr[e++] = static_cast<std::uint32_t>(u ^ m);
    }
    return g;
}

std::vector<double> jacobi_eigenvalues(std::vector<double> a, std::size_t d) {
    if (a.size() != d * d) throw std::invalid_argument("jacobi: bad size");
    auto off_norm = [&]() {
        double s = 0.0;
        for (std::size_t p = 0; p < d; ++p)
            for (std::size_t q = p + 1; q < d; ++q) s += 2.0 * a[p * d + q] * a[p * d + q];
        return std::sqrt(s);
    };
    const int max_sweeps = 64;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        if (off_norm() <= 1e-12) {
            std::vector<double> eig(d);
            for (std::size_t i = 0; i < d; ++i) eig[i] = a[i * d + i];
            std::sort(eig.begin(), eig.end());
            return eig;
        }
        for (std::size_t p = 0; p < d; ++p) {
            for (std::size_t q = p + 1; q < d; ++q) {
                const double apq = a[p * d + q];
                if (apq == 0.0) continue;
                const double app = a[p * d + p], aqq = a[q * d + q];
                const double tau = (aqq - app) / (2.0 * apq);
                const double t = (tau >= 0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                for (std::size_t i = 0; i < d; ++i) {
                    const double aip = a[i * d + p], aiq = a[i * d + q];
                    a[i * d + p] = c * aip - s * aiq;
                    a[i * d + q] = s * aip + c * aiq;
                }
                for (std::size_t i = 0; i < d; ++i) {
                    const double api = a[p * d + i], aqi = a[q * d + i];
                    a[p * d + i] = c * api - s * aqi;
                    a[q * d + i] = s * api + c * aqi;
                }
            }
        }
    }
    throw std::runtime_error("jacobi: no convergence after sweep budget");
}

namespace {

// Largest eigenvalue of G on the orthogonal complement of the constant
// vector: Lanczos with full reorthogonalization.  G maps 1^perp to itself;
// the projection only removes roundoff drift.
double lanczos_lambda2(const Generator& g) {
    const std::uint64_t d = g.dim;
    const int max_iter = 500;
    const double tol = 1e-12;

    auto project = [d](std::vector<double>& v) {
        double mean = 0.0;
        for (double x : v) mean += x;
        mean /= static_cast<double>(d);
        for (double& x : v) x -= mean;
    };
    auto dot = [](const std::vector<double>& a, const std::vector<double>& b) {
        double s = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
        return s;
    };

    std::vector<std::vector<double>> basis;
    std::vector<double> alpha, beta;

    std::vector<double> v(d);
    rng::Stream s0(0x5eedbeefULL);
    for (double& x : v) x = s0.next_unit() - 0.5;
    project(v);
    double nrm = std::sqrt(dot(v, v));
    for (double& x : v) x /= nrm;

    std::vector<double> w(d);
    double theta_prev = 0.0;
    for (int j = 0; j < max_iter; ++j) {
        basis.push_back(v);
        g.matvec(basis.back(), w);
        project(w);
        const double a_j = dot(w, basis.back());
        alpha.push_back(a_j);
        // Two-pass full reorthogonalization.
        for (int pass = 0; pass < 2; ++pass)
            for (const auto& u : basis) {
                const double c = dot(w, u);
                for (std::size_t i = 0; i < d; ++i) w[i] -= c * u[i];
            }
        const double b_j = std::sqrt(dot(w, w));

        const std::size_t m = alpha.size();
        const bool check = b_j < 1e-13 || j + 1 == max_iter || (m >= 10 && m % 5 == 0);
        if (check) {
            // Ritz values of the tridiagonal via Jacobi on its dense form.
            std::vector<double> tri(m * m, 0.0);
            for (std::size_t i = 0; i < m; ++i) tri[i * m + i] = alpha[i];
            for (std::size_t i = 0; i + 1 < m; ++i) tri[i * m + i + 1] = tri[(i + 1) * m + i] = beta[i];
            const double theta = jacobi_eigenvalues(std::move(tri), m).back();
            if (b_j < 1e-13) return theta;
            if (m >= 20 && std::abs(theta - theta_prev) < tol * std::max(1.0, std::abs(theta))) return theta;
            theta_prev = theta;
        }
        beta.push_back(b_j);
        v = w;
        for (double& x : v) x /= b_j;
    }
    throw std::runtime_error("lanczos: no convergence");
}

}  // namespace

double spectral_gap(const Generator& g) {
    if (g.dim < 2) throw std::invalid_argument("spectral_gap: need at least 2 states");
    if (g.dim <= kJacobiCap) {
        const auto eig = jacobi_eigenvalues(g.dense(), g.dim);
        // Largest eigenvalue is 0 (uniform measure); the gap is minus the
        // second largest.
        if (std::abs(eig.back()) > 1e-8) throw std::runtime_error("spectral_gap: top eigenvalue not 0");
        return -eig[g.dim - 2];
    }
    return -lanczos_lambda2(g);
}

std::vector<double> exact_distribution(const Generator& g, std::vector<double> p0, double t) {
    if (p0.size() != g.dim) throw std::invalid_argument("exact_distribution: size mismatch");
    double mass = 0.0;
    for (double p : p0) mass += p;
    if (std::abs(mass - 1.0) > 1e-9) throw std::invalid_argument("exact_distribution: p0 must sum to 1");
    if (t < 0) throw std::invalid_argument("exact_distribution: negative time");

    const double lam = g.uniformization_rate();
    const double lt = lam * t;
    if (lt == 0.0) return p0;

    // G is symmetric, so the row/column action of P = I + G/lam coincide.
    std::vector<double> v = p0, pv(g.dim), acc(g.dim, 0.0);
    double logw = -lt;  // log Poisson(lt) weight at k = 0
    double cum = 0.0;
    const std::uint64_t kmax = static_cast<std::uint64_t>(lt + 12.0 * std::sqrt(lt + 1.0) + 60.0);
    for (std::uint64_t k = 0;; ++k) {
        const double wk = std::exp(logw);
        if (wk > 0.0) {
            cum += wk;
            for (std::uint64_t i = 0; i < g.dim; ++i) acc[i] += wk * v[i];
        }
        if (cum >= 1.0 - 1e-14 || k >= kmax) break;
        g.matvec(v, pv);
        for (std::uint64_t i = 0; i < g.dim; ++i) v[i] += pv[i] / lam;
        logw += std::log(lt) - std::log(static_cast<double>(k + 1));
    }
    double total = 0.0;
    for (double x : acc) total += x;
    for (double& x : acc) x /= total;
    return acc;
}

std::vector<std::pair<double, double>> exact_tv_curve(const Generator& g, std::uint64_t start,
                                                      std::span<const double> ts) {
    if (start >= g.dim) throw std::invalid_argument("exact_tv_curve: start out of range");
    std::vector<std::pair<double, double>> out;
    const double unif = 1.0 / static_cast<double>(g.dim);
    for (double t : ts) {
        std::vector<double> p0(g.dim, 0.0);
        p0[start] = 1.0;
        const auto pt = exact_distribution(g, std::move(p0), t);
        double tv = 0.0;
        for (double p : pt) tv += std::abs(p - unif);
        out.emplace_back(t, 0.5 * tv);
    }
    return out;
}

}  // namespace mwalk::spectral
