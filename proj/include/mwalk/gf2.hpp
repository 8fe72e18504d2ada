#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace mwalk::gf2 {

// Vector over F_2, packed 64 coordinates per word.  Bits at positions >= len
// are kept zero by every mutating operation.
class BitVec {
  public:
    BitVec() = default;
    explicit BitVec(int len) : len_(check_len(len)), w_((len + 63) / 64, 0) {}

    static BitVec basis(int len, int coord) {
        BitVec v(len);
        v.set(coord, true);
        return v;
    }

    // "10110" reads coordinate 0 first.
    static BitVec parse(std::string_view bits) {
        BitVec v(static_cast<int>(bits.size()));
        for (std::size_t i = 0; i < bits.size(); ++i)
            if (bits[i] == '1') v.set(static_cast<int>(i), true);
        return v;
    }

    int len() const { return len_; }
    bool get(int i) const { return (w_[static_cast<std::size_t>(i) >> 6] >> (i & 63)) & 1ull; }

    void set(int i, bool b) {
        const std::uint64_t m = 1ull << (i & 63);
        if (b)
            w_[static_cast<std::size_t>(i) >> 6] |= m;
        else
            w_[static_cast<std::size_t>(i) >> 6] &= ~m;
    }

    void flip(int i) { w_[static_cast<std::size_t>(i) >> 6] ^= 1ull << (i & 63); }

    void xor_in(const BitVec& o) {
        require_same_len(o);
        for (std::size_t k = 0; k < w_.size(); ++k) w_[k] ^= o.w_[k];
    }

    bool is_zero() const {
        for (auto w : w_)
            if (w) return false;
        return true;
    }

    std::optional<int> lowest_set() const {
        for (std::size_t k = 0; k < w_.size(); ++k)
            if (w_[k]) return static_cast<int>(k * 64) + __builtin_ctzll(w_[k]);
        return std::nullopt;
    }

    int popcount() const {
        int c = 0;
        for (auto w : w_) c += __builtin_popcountll(w);
        return c;
    }

    // Coordinates [from, from+count) as a fresh vector.
    BitVec slice(int from, int count) const {
        BitVec out(count);
        for (int i = 0; i < count; ++i)
            if (get(from + i)) out.set(i, true);
        return out;
    }

    std::span<const std::uint64_t> words() const { return w_; }
    std::span<std::uint64_t> words() { return w_; }

    // Zero any bits past len; callers mutating words() directly must finish
    // with this.
    void mask_tail() {
        if (len_ % 64) w_.back() &= (~0ull) >> (64 - len_ % 64);
    }

    std::string to_string() const {
        std::string s(static_cast<std::size_t>(len_), '0');
        for (int i = 0; i < len_; ++i)
            if (get(i)) s[static_cast<std::size_t>(i)] = '1';
        return s;
    }

    friend bool operator==(const BitVec&, const BitVec&) = default;

    friend BitVec xor_add(const BitVec& v, const BitVec& w) {
        BitVec out = v;
        out.xor_in(w);
        return out;
    }

  private:
    static int check_len(int len) {
        if (len < 0) throw std::invalid_argument("BitVec: negative length");
        return len;
    }
    void require_same_len(const BitVec& o) const {
        if (len_ != o.len_) throw std::invalid_argument("BitVec: dimension mismatch");
    }

    int len_ = 0;
    std::vector<std::uint64_t> w_;
};

constexpr bool is_prime(int q) {
    if (q < 2) return false;
    for (int d = 2; d * d <= q; ++d)
        if (q % d == 0) return false;
    return true;
}

// Vector over F_q, q prime in [2, 251], entries stored as byte residues.
class FqVec {
  public:
    FqVec() = default;
    FqVec(int len, int q) : q_(check_q(q)), e_(static_cast<std::size_t>(len), 0) {}

    static FqVec basis(int len, int q, int coord, std::uint8_t value = 1) {
        FqVec v(len, q);
        v[coord] = value;
        return v;
    }

    int len() const { return static_cast<int>(e_.size()); }
    int q() const { return q_; }

    std::uint8_t& operator[](int i) { return e_[static_cast<std::size_t>(i)]; }
    std::uint8_t operator[](int i) const { return e_[static_cast<std::size_t>(i)]; }

    // this += c * other (mod q)
    void axpy(std::uint8_t c, const FqVec& o) {
        if (o.len() != len() || o.q_ != q_) throw std::invalid_argument("FqVec: mismatch");
        if (c == 0) return;
        for (std::size_t i = 0; i < e_.size(); ++i)
            e_[i] = static_cast<std::uint8_t>((e_[i] + c * o.e_[i]) % q_);
    }

    bool is_zero() const {
        for (auto v : e_)
            if (v) return false;
        return true;
    }

    friend bool operator==(const FqVec&, const FqVec&) = default;

  private:
    static int check_q(int q) {
        if (q < 2 || q > 251 || !is_prime(q)) throw std::invalid_argument("FqVec: q must be prime in [2,251]");
        return q;
    }

    int q_ = 2;
    std::vector<std::uint8_t> e_;
};

// Rank over F_2 by Gaussian elimination with lowest-set-bit pivoting on a
// copied workspace.
int rank(std::span<const BitVec> vs, int dim);

inline bool spans(std::span<const BitVec> vs, int dim) { return rank(vs, dim) == dim; }

// sum_i marks[i] * vs[i] over F_2.
BitVec random_combination(std::span<const BitVec> vs, std::span<const std::uint8_t> marks);

}  // namespace mwalk::gf2
