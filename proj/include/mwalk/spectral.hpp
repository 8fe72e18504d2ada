#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "mwalk/east.hpp"
#include "mwalk/walk.hpp"

namespace mwalk::spectral {

// Enumerated state space of either a matrix-walk column block or an East
// chain, with a bijective index <-> state codec.  Hard cap 2^20 states.
struct StateSpace {
    enum class Kind { WalkBlock, East };

    Kind kind = Kind::East;
    int n = 0;                 // walk: matrix size
    std::vector<int> columns;  // walk: tracked columns
    std::vector<int> offsets;  // walk: first free-bit index per column
    int sites = 0;             // east: chain length
    int bits = 0;

    static StateSpace walk_block(int n, std::vector<int> columns);
    static StateSpace east_chain(int m);

    std::uint64_t dim() const { return 1ull << bits; }

    // Walk codec: column j's free entries (rows 1..i_j - 1) at offsets[j],
    // row r at bit offsets[j] + r - 1.
    std::uint64_t index_of(const walk::ColumnBlock& b) const;
    walk::ColumnBlock state_of(std::uint64_t idx) const;

    // East codec: bit s-1 holds the spin at site s.
    std::uint64_t index_of(const east::EastState& s) const;
    east::EastState east_state_of(std::uint64_t idx) const;
};

// Symmetric rate matrix in sparse adjacency form; every stored edge carries
// rate 1/2 (the a = 0 branch of the walk generator is a self-loop and is
// dropped).  Row sums are zero by construction: diagonal = -deg/2.
struct Generator {
    std::uint64_t dim = 0;
    std::vector<std::uint64_t> row_ptr;
    std::vector<std::uint32_t> nbr;

    double rate = 0.5;

    std::uint32_t degree(std::uint64_t s) const {
        return static_cast<std::uint32_t>(row_ptr[s + 1] - row_ptr[s]);
    }
    double uniformization_rate() const;
    void matvec(std::span<const double> in, std::span<double> out) const;  // out = G.in
    std::vector<double> dense() const;  // row-major D x D, for small D
};

Generator build_generator(const StateSpace& space);

// Eigenvalues of a dense symmetric matrix by cyclic Jacobi sweeps, iterated
// until the off-diagonal Frobenius norm falls below 1e-12 (throws after a
// fixed sweep budget).  Ascending order.
std::vector<double> jacobi_eigenvalues(std::vector<double> a, std::size_t d);

// Spectral gap -lambda_2: dense Jacobi up to 1024 states, thick-start Lanczos
// with full reorthogonalization on the complement of the constant vector
// above that.
double spectral_gap(const Generator& g);

// p0 . exp(tG) by uniformization; Poisson terms below 1e-14 tail mass are
// truncated and the result is renormalized.
std::vector<double> exact_distribution(const Generator& g, std::vector<double> p0, double t);

// (t, total-variation distance to uniform) from a point mass at `start`.
std::vector<std::pair<double, double>> exact_tv_curve(const Generator& g, std::uint64_t start,
                                                      std::span<const double> ts);

}  // namespace mwalk::spectral
