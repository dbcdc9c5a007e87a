#pragma once

#include <cstddef>
#include <cstdint>
#include <compare>
#include <functional>
#include <vector>

namespace planq {

using AtomId = std::uint32_t;
using ActionId = std::uint32_t;
using ObjectId = std::uint32_t;

/// Dense bit-set over a task's atom universe.
class AtomSet {
 public:
  AtomSet() = default;
  explicit AtomSet(std::size_t universe)
      : size_(universe), words_((universe + 63) / 64, 0) {}

  std::size_t universe_size() const { return size_; }

  bool contains(AtomId a) const {
    return a < size_ && ((words_[a >> 6] >> (a & 63)) & 1u) != 0;
  }
  void insert(AtomId a) { words_[a >> 6] |= std::uint64_t{1} << (a & 63); }
  void erase(AtomId a) { words_[a >> 6] &= ~(std::uint64_t{1} << (a & 63)); }
  void set(AtomId a, bool value) { value ? insert(a) : erase(a); }

  std::size_t count() const;
  bool empty() const;
  bool is_subset_of(const AtomSet& other) const;
  bool intersects(const AtomSet& other) const;

  AtomSet& operator|=(const AtomSet& other);
  AtomSet& operator&=(const AtomSet& other);
  /// Set difference in place.
  AtomSet& operator-=(const AtomSet& other);

  friend AtomSet operator|(AtomSet a, const AtomSet& b) { return a |= b; }
  friend AtomSet operator&(AtomSet a, const AtomSet& b) { return a &= b; }
  friend AtomSet operator-(AtomSet a, const AtomSet& b) { return a -= b; }

  /// Members in increasing id order.
  std::vector<AtomId> to_vector() const;

  template <typename F>
  void for_each(F&& f) const {
    for (std::size_t w = 0; w < words_.size(); ++w) {
      std::uint64_t bits = words_[w];
      while (bits != 0) {
        const int bit = __builtin_ctzll(bits);
        f(static_cast<AtomId>(w * 64 + bit));
        bits &= bits - 1;
      }
    }
  }

  std::size_t hash() const;

  friend bool operator==(const AtomSet&, const AtomSet&) = default;
  friend std::strong_ordering operator<=>(const AtomSet& a, const AtomSet& b) {
    if (auto c = a.size_ <=> b.size_; c != 0) return c;
    return a.words_ <=> b.words_;
  }

 private:
  std::size_t size_ = 0;
  std::vector<std::uint64_t> words_;
};

/// A state is the set of atoms true in it, statics included.
using State = AtomSet;

struct AtomSetHash {
  std::size_t operator()(const AtomSet& s) const { return s.hash(); }
};

}  // namespace planq
