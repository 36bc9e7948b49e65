#ifndef RELAYCAP_INFO_HPP
#define RELAYCAP_INFO_HPP

#include <span>

#include "relaycap/prob.hpp"

// Information measures in bits (log base 2 throughout), with the convention
// 0*log(0) = 0. Groups of axes are passed as index subsets of a JointPmf.

namespace relaycap {

/// H(p) in bits; endpoints of [0,1] map to 0. Throws std::domain_error
/// outside [0,1].
double binary_entropy(double p);

/// Shannon entropy of a pmf, in bits.
double entropy(const Pmf& p);

/// Entropy of the marginal of `j` on the given axis subset. An empty subset
/// yields 0. Duplicate or out-of-range axes throw std::invalid_argument.
double entropy(const JointPmf& j, std::span<const int> axes);
double entropy(const JointPmf& j, std::initializer_list<int> axes);

/// I(A;B) >= 0 in bits; axes outside A and B are marginalized out. A and B
/// must be disjoint and nonempty.
double mutual_information(const JointPmf& j, std::span<const int> group_a, std::span<const int> group_b);
double mutual_information(const JointPmf& j, std::initializer_list<int> a, std::initializer_list<int> b);

/// I(A;B|C) >= 0 in bits; A, B, C pairwise disjoint. C may be empty, in
/// which case this is I(A;B).
double conditional_mutual_information(const JointPmf& j, std::span<const int> group_a,
                                      std::span<const int> group_b, std::span<const int> group_c);
double conditional_mutual_information(const JointPmf& j, std::initializer_list<int> a,
                                      std::initializer_list<int> b, std::initializer_list<int> c);

namespace detail {

/// Entropy of the marginal over `subset` of a raw row-major table with the
/// given axis sizes, accumulated into `scratch`. This is the single code
/// path every measure above funnels through, so results are bit-identical
/// between the typed API and the optimizer's fast path.
double subset_entropy_raw(std::span<const double> table, std::span<const int> sizes,
                          std::span<const int> subset, std::vector<double>& scratch);

}  // namespace detail

}  // namespace relaycap

#endif
