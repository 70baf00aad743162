#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

namespace csd {

// Fixed-universe subset of {0..size-1}; the workhorse for traces and containers.
class Mask {
public:
    Mask() = default;
    explicit Mask(std::size_t size) : size_(size), words_((size + 63) / 64, 0) {}
    static Mask full(std::size_t size) {
        Mask m(size);
        for (std::size_t i = 0; i < size; ++i) m.set(i);
        return m;
    }
    static Mask from_indices(std::size_t size, const std::vector<int>& idx) {
        Mask m(size);
        for (int i : idx) m.set(static_cast<std::size_t>(i));
        return m;
    }

    std::size_t size() const { return size_; }
    bool test(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1u; }
    void set(std::size_t i) { words_[i >> 6] |= (std::uint64_t{1} << (i & 63)); }
    void reset(std::size_t i) { words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }

    std::size_t count() const {
        std::size_t c = 0;
        for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
        return c;
    }
    bool none() const {
        for (auto w : words_)
            if (w) return false;
        return true;
    }
    bool any() const { return !none(); }

    bool subset_of(const Mask& o) const {
        for (std::size_t i = 0; i < words_.size(); ++i)
            if (words_[i] & ~o.words_[i]) return false;
        return true;
    }
    bool intersects(const Mask& o) const {
        for (std::size_t i = 0; i < words_.size(); ++i)
            if (words_[i] & o.words_[i]) return true;
        return false;
    }

    Mask& operator|=(const Mask& o) {
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
        return *this;
    }
    Mask& operator&=(const Mask& o) {
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
        return *this;
    }
    Mask minus(const Mask& o) const {
        Mask r = *this;
        for (std::size_t i = 0; i < words_.size(); ++i) r.words_[i] &= ~o.words_[i];
        return r;
    }
    Mask complement() const { return full(size_).minus(*this); }
    friend Mask operator|(Mask a, const Mask& b) { return a |= b; }
    friend Mask operator&(Mask a, const Mask& b) { return a &= b; }

    std::vector<int> indices() const {
        std::vector<int> out;
        for (std::size_t w = 0; w < words_.size(); ++w) {
            std::uint64_t bits = words_[w];
            while (bits) {
                int b = std::countr_zero(bits);
                out.push_back(static_cast<int>(w * 64 + static_cast<std::size_t>(b)));
                bits &= bits - 1;
            }
        }
        return out;
    }

    bool operator==(const Mask& o) const { return size_ == o.size_ && words_ == o.words_; }
    bool operator!=(const Mask& o) const { return !(*this == o); }

    // Canonical set order: by cardinality, then by the sorted index lists lexicographically.
    static bool canonical_less(const Mask& a, const Mask& b) {
        auto ca = a.count(), cb = b.count();
        if (ca != cb) return ca < cb;
        for (std::size_t i = 0; i < a.words_.size(); ++i) {
            std::uint64_t diff = a.words_[i] ^ b.words_[i];
            if (diff) {
                std::uint64_t low = diff & (~diff + 1);
                return (a.words_[i] & low) != 0;
            }
        }
        return false;
    }

    std::size_t hash() const {
        std::size_t h = size_ * 0x9e3779b97f4a7c15ULL;
        for (auto w : words_) h ^= std::hash<std::uint64_t>{}(w) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        return h;
    }

private:
    std::size_t size_ = 0;
    std::vector<std::uint64_t> words_;
};

struct MaskHash {
    std::size_t operator()(const Mask& m) const { return m.hash(); }
};

}  // namespace csd
