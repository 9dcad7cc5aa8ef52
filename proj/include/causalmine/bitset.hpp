#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace causalmine {

/// Bit vector over record ids. Pattern supports are popcounts over ANDed
/// words, which is what keeps level-wise candidate counting cheap.
///
/// Invariant: bits past size() are always zero, so counts never need masking.
class RecordBits {
public:
    RecordBits() = default;

    explicit RecordBits(std::size_t n_bits, bool value = false)
        : n_bits_(n_bits), words_((n_bits + 63) / 64, value ? ~std::uint64_t{0} : 0) {
        trim();
    }

    std::size_t size() const { return n_bits_; }
    bool empty() const { return n_bits_ == 0; }

    void set(std::size_t i) { words_[i >> 6] |= std::uint64_t{1} << (i & 63); }
    void reset(std::size_t i) { words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }
    bool test(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1; }

    std::size_t count() const {
        std::size_t c = 0;
        for (std::uint64_t w : words_) c += std::popcount(w);
        return c;
    }

    /// popcount(*this & other) without materialising the intersection.
    std::size_t and_count(const RecordBits& other) const {
        std::size_t c = 0;
        for (std::size_t i = 0; i < words_.size(); ++i)
            c += std::popcount(words_[i] & other.words_[i]);
        return c;
    }

    /// popcount(*this & ~other); the tail-zero invariant makes this safe.
    std::size_t and_not_count(const RecordBits& other) const {
        std::size_t c = 0;
        for (std::size_t i = 0; i < words_.size(); ++i)
            c += std::popcount(words_[i] & ~other.words_[i]);
        return c;
    }

    RecordBits& operator&=(const RecordBits& other) {
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= other.words_[i];
        return *this;
    }

    friend RecordBits operator&(RecordBits a, const RecordBits& b) {
        a &= b;
        return a;
    }

    RecordBits complement() const {
        RecordBits r(*this);
        for (auto& w : r.words_) w = ~w;
        r.trim();
        return r;
    }

    std::vector<std::uint32_t> to_indices() const {
        std::vector<std::uint32_t> out;
        out.reserve(count());
        for (std::size_t w = 0; w < words_.size(); ++w) {
            std::uint64_t bits = words_[w];
            while (bits) {
                const int b = std::countr_zero(bits);
                out.push_back(static_cast<std::uint32_t>(w * 64 + b));
                bits &= bits - 1;
            }
        }
        return out;
    }

    /// Release the storage; used to drop covering masks of finished levels.
    void clear_storage() {
        words_.clear();
        words_.shrink_to_fit();
        n_bits_ = 0;
    }

    bool operator==(const RecordBits&) const = default;

private:
    void trim() {
        if (const std::size_t tail = n_bits_ & 63; tail != 0 && !words_.empty())
            words_.back() &= (std::uint64_t{1} << tail) - 1;
    }

    std::size_t n_bits_ = 0;
    std::vector<std::uint64_t> words_;
};

}  // namespace causalmine
