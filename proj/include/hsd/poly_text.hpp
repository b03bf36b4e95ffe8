#pragma once

#include <string>
#include <string_view>

#include "hsd/ratfunc.hpp"
#include "hsd/truncated_poly.hpp"

namespace hsd {

// Text syntax: sums of terms such as "3*x1^2*x2 - g^2*v1 + 1". Parentheses
// and powers of parenthesised groups are accepted. Over F_{p^d} with d > 1
// the symbol g denotes the class of the modulus root. Printing lists terms by
// ascending degree, lexicographically descending within a degree, and writes
// coefficients as residues (d = 1), powers g^k (primitive g) or expanded
// digit sums otherwise, so that parse(print(f)) == f.

MultiPoly parse_multipoly(std::string_view text, const Field& field, const VarList& vars);
Poly parse_poly(std::string_view text, const Field& field, const LayoutPtr& layout);
/// "num" or "num / den" with a single top-level slash.
RationalFunc parse_ratfunc(std::string_view text, const Field& field, const VarList& vars);

std::string to_string(const MultiPoly& f);
std::string to_string(const Poly& f);
std::string to_string(const RationalFunc& f);
std::string to_string(Fq c);

}  // namespace hsd
