#include "convoscope/analytics/bitset.hpp"

#include <stdexcept>

namespace convoscope {
namespace {

void require_same_size(const Bitset& a, const Bitset& b) {
  if (a.size() != b.size()) throw std::invalid_argument("bitsets over different universes");
}

}  // namespace

Bitset Bitset::full(std::size_t size) {
  Bitset out(size);
  for (auto& w : out.words_) w = ~std::uint64_t{0};
  if (size % 64 != 0 && !out.words_.empty()) out.words_.back() = (std::uint64_t{1} << (size % 64)) - 1;
  return out;
}

std::size_t Bitset::count() const {
  std::size_t n = 0;
  for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
  return n;
}

bool Bitset::is_subset_of(const Bitset& other) const {
  require_same_size(*this, other);
  for (std::size_t i = 0; i < words_.size(); ++i)
    if ((words_[i] & ~other.words_[i]) != 0) return false;
  return true;
}

std::size_t Bitset::intersect_count(const Bitset& other) const {
  require_same_size(*this, other);
  std::size_t n = 0;
  for (std::size_t i = 0; i < words_.size(); ++i) n += static_cast<std::size_t>(std::popcount(words_[i] & other.words_[i]));
  return n;
}

Bitset& Bitset::operator&=(const Bitset& other) {
  require_same_size(*this, other);
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= other.words_[i];
  return *this;
}

Bitset& Bitset::operator|=(const Bitset& other) {
  require_same_size(*this, other);
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= other.words_[i];
  return *this;
}

std::vector<std::size_t> Bitset::positions() const {
  std::vector<std::size_t> out;
  out.reserve(count());
  for_each([&](std::size_t i) { out.push_back(i); });
  return out;
}

}  // namespace convoscope
