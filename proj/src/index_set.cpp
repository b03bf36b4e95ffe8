#include "hsd/index_set.hpp"

#include <algorithm>

namespace hsd {

IndexSet::IndexSet(unsigned e, std::uint32_t bound) : e_(e), bound_(bound) {
  std::uint64_t count = 1;
  for (unsigned i = 0; i < e; ++i) {
    count *= bound;
    if (count > (std::uint64_t{1} << 24)) throw Error(ErrorKind::ResourceLimit, "index set too large");
  }
  items_.reserve(count);
  MultiIndex cur(e, 0);
  for (std::uint64_t code = 0; code < count; ++code) {
    std::uint64_t t = code;
    for (unsigned i = 0; i < e; ++i) {
      cur[i] = static_cast<std::uint32_t>(t % bound);
      t /= bound;
    }
    items_.push_back(cur);
  }
  std::stable_sort(items_.begin(), items_.end(), display_less);
  position_.assign(count, 0);
  for (std::size_t f = 0; f < items_.size(); ++f) {
    std::uint64_t code = 0;
    for (unsigned i = e; i-- > 0;) code = code * bound + items_[f][i];
    position_[code] = f;
  }
}

bool IndexSet::contains(const MultiIndex& i) const noexcept {
  if (i.size() != e_) return false;
  for (auto x : i)
    if (x >= bound_) return false;
  return true;
}

std::size_t IndexSet::flat(const MultiIndex& i) const {
  if (!contains(i)) throw Error(ErrorKind::IndexRange, "multi-index " + index_text(i) + " outside the index box");
  std::uint64_t code = 0;
  for (unsigned c = e_; c-- > 0;) code = code * bound_ + i[c];
  return position_[code];
}

std::string index_text(const MultiIndex& i) {
  std::string out = "(";
  for (std::size_t c = 0; c < i.size(); ++c) {
    if (c) out += ',';
    out += std::to_string(i[c]);
  }
  return out + ")";
}

MultiIndex unit_index(unsigned e, unsigned c, std::uint32_t n) {
  MultiIndex i(e, 0);
  i.at(c) = n;
  return i;
}

}  // namespace hsd
