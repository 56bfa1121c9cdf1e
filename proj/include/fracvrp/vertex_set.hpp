#pragma once

#include <bit>
#include <cassert>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

namespace fracvrp {

// Fixed-width set of vertex indices in [0, 128).
class VertexSet {
 public:
  static constexpr int kCapacity = 128;

  constexpr VertexSet() = default;

  static VertexSet singleton(int v) {
    VertexSet s;
    s.insert(v);
    return s;
  }

  bool contains(int v) const {
    assert(v >= 0 && v < kCapacity);
    return v < 64 ? (lo_ >> v) & 1U : (hi_ >> (v - 64)) & 1U;
  }
  void insert(int v) {
    assert(v >= 0 && v < kCapacity);
    if (v < 64) {
      lo_ |= std::uint64_t{1} << v;
    } else {
      hi_ |= std::uint64_t{1} << (v - 64);
    }
  }
  void erase(int v) {
    assert(v >= 0 && v < kCapacity);
    if (v < 64) {
      lo_ &= ~(std::uint64_t{1} << v);
    } else {
      hi_ &= ~(std::uint64_t{1} << (v - 64));
    }
  }

  bool empty() const { return lo_ == 0 && hi_ == 0; }
  int size() const { return std::popcount(lo_) + std::popcount(hi_); }
  bool intersects(const VertexSet& o) const {
    return (lo_ & o.lo_) != 0 || (hi_ & o.hi_) != 0;
  }
  bool is_subset_of(const VertexSet& o) const {
    return (lo_ & ~o.lo_) == 0 && (hi_ & ~o.hi_) == 0;
  }

  VertexSet operator&(const VertexSet& o) const { return {lo_ & o.lo_, hi_ & o.hi_}; }
  VertexSet operator|(const VertexSet& o) const { return {lo_ | o.lo_, hi_ | o.hi_}; }
  VertexSet& operator|=(const VertexSet& o) {
    lo_ |= o.lo_;
    hi_ |= o.hi_;
    return *this;
  }

  // Members in increasing order.
  std::vector<int> members() const {
    std::vector<int> out;
    for (std::uint64_t w = lo_; w != 0; w &= w - 1) out.push_back(std::countr_zero(w));
    for (std::uint64_t w = hi_; w != 0; w &= w - 1) out.push_back(64 + std::countr_zero(w));
    return out;
  }

  std::uint64_t low_word() const { return lo_; }
  std::uint64_t high_word() const { return hi_; }

  friend bool operator==(const VertexSet&, const VertexSet&) = default;
  // Orders by the 128-bit integer value (bit-set order).
  friend std::strong_ordering operator<=>(const VertexSet& a, const VertexSet& b) {
    if (auto c = a.hi_ <=> b.hi_; c != 0) return c;
    return a.lo_ <=> b.lo_;
  }

 private:
  constexpr VertexSet(std::uint64_t lo, std::uint64_t hi) : lo_(lo), hi_(hi) {}

  std::uint64_t lo_ = 0;
  std::uint64_t hi_ = 0;
};

struct VertexSetHash {
  std::size_t operator()(const VertexSet& s) const noexcept {
    std::uint64_t h = s.low_word() * 0x9E3779B97F4A7C15ULL;
    h ^= s.high_word() + 0x7F4A7C159E3779B9ULL + (h << 6) + (h >> 2);
    return static_cast<std::size_t>(h ^ (h >> 31));
  }
};

}  // namespace fracvrp
