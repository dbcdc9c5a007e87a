#include "planq/atom_set.hpp"

#include <bit>

namespace planq {

std::size_t AtomSet::count() const {
  std::size_t n = 0;
  for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
  return n;
}

bool AtomSet::empty() const {
  for (auto w : words_)
    if (w != 0) return false;
  return true;
}

bool AtomSet::is_subset_of(const AtomSet& other) const {
  for (std::size_t i = 0; i < words_.size(); ++i) {
    const std::uint64_t theirs = i < other.words_.size() ? other.words_[i] : 0;
    if ((words_[i] & ~theirs) != 0) return false;
  }
  return true;
}

bool AtomSet::intersects(const AtomSet& other) const {
  const std::size_t n = std::min(words_.size(), other.words_.size());
  for (std::size_t i = 0; i < n; ++i)
    if ((words_[i] & other.words_[i]) != 0) return true;
  return false;
}

AtomSet& AtomSet::operator|=(const AtomSet& other) {
  for (std::size_t i = 0; i < words_.size() && i < other.words_.size(); ++i)
    words_[i] |= other.words_[i];
  return *this;
}

AtomSet& AtomSet::operator&=(const AtomSet& other) {
  for (std::size_t i = 0; i < words_.size(); ++i)
    words_[i] &= i < other.words_.size() ? other.words_[i] : 0;
  return *this;
}

AtomSet& AtomSet::operator-=(const AtomSet& other) {
  for (std::size_t i = 0; i < words_.size() && i < other.words_.size(); ++i)
    words_[i] &= ~other.words_[i];
  return *this;
}

std::vector<AtomId> AtomSet::to_vector() const {
  std::vector<AtomId> out;
  for_each([&](AtomId a) { out.push_back(a); });
  return out;
}

std::size_t AtomSet::hash() const {
  // FNV-1a over the words.
  std::uint64_t h = 1469598103934665603ull;
  for (auto w : words_) {
    h ^= w;
    h *= 1099511628211ull;
    h ^= h >> 29;
  }
  return static_cast<std::size_t>(h);
}

}  // namespace planq
