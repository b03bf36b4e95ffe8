#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hsd/multipoly.hpp"

namespace hsd {

/// The box [bound]^e of multi-indices, enumerated by degree ascending and
/// lexicographically descending within a degree: (0,0), (1,0), (0,1), (2,0), ...
/// Positions in this enumeration are the "flat" indices used throughout.
class IndexSet {
 public:
  IndexSet(unsigned e, std::uint32_t bound);

  unsigned e() const noexcept { return e_; }
  std::uint32_t bound() const noexcept { return bound_; }
  std::size_t size() const noexcept { return items_.size(); }
  const MultiIndex& operator[](std::size_t flat) const { return items_.at(flat); }
  const std::vector<MultiIndex>& items() const noexcept { return items_; }
  bool contains(const MultiIndex& i) const noexcept;
  /// IndexRange when i lies outside the box.
  std::size_t flat(const MultiIndex& i) const;

 private:
  unsigned e_;
  std::uint32_t bound_;
  std::vector<MultiIndex> items_;
  std::vector<std::size_t> position_;  // mixed-radix code -> flat
};

/// (i1,...,ie) as text, e.g. "(1,0)".
std::string index_text(const MultiIndex& i);

/// The multi-index with n at coordinate c and zero elsewhere.
MultiIndex unit_index(unsigned e, unsigned c, std::uint32_t n);

}  // namespace hsd
