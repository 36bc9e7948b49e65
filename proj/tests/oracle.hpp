#ifndef RELAYCAP_TESTS_ORACLE_HPP
#define RELAYCAP_TESTS_ORACLE_HPP

#include <cmath>
#include <map>
#include <vector>

#include "relaycap/prob.hpp"

// Independent brute-force information measures used as the test oracle.
// Deliberately shares no computation with the library: tables are sparse
// maps keyed by coordinate vectors, marginals are built by direct summation,
// and mutual informations are computed from probability ratios rather than
// entropy combinations.

namespace oracle {

using Index = std::vector<int>;
using Table = std::map<Index, double>;

inline Table from_joint(const relaycap::JointPmf& j) {
    Table t;
    std::vector<int> sizes;
    for (const auto& a : j.axes()) sizes.push_back(a.size);
    Index idx(sizes.size(), 0);
    for (double p : j.probs()) {
        if (p != 0.0) t[idx] += p;
        for (int k = static_cast<int>(sizes.size()) - 1; k >= 0; --k) {
            if (++idx[static_cast<std::size_t>(k)] < sizes[static_cast<std::size_t>(k)]) break;
            idx[static_cast<std::size_t>(k)] = 0;
        }
    }
    return t;
}

inline Table project(const Table& t, const std::vector<int>& axes) {
    Table out;
    for (const auto& [idx, p] : t) {
        Index sub;
        sub.reserve(axes.size());
        for (int a : axes) sub.push_back(idx[static_cast<std::size_t>(a)]);
        out[sub] += p;
    }
    return out;
}

inline double entropy(const Table& t) {
    double h = 0.0;
    for (const auto& [idx, p] : t)
        if (p > 0.0) h -= p * std::log2(p);
    return h;
}

inline double entropy_axes(const Table& t, const std::vector<int>& axes) {
    return entropy(project(t, axes));
}

// I(A;B) = sum p(a,b) log2( p(a,b) / (p(a) p(b)) )
inline double mi(const Table& t, const std::vector<int>& a_axes, const std::vector<int>& b_axes) {
    std::vector<int> ab = a_axes;
    ab.insert(ab.end(), b_axes.begin(), b_axes.end());
    Table pab = project(t, ab);
    Table pa = project(t, a_axes);
    Table pb = project(t, b_axes);
    double v = 0.0;
    for (const auto& [idx, p] : pab) {
        if (p <= 0.0) continue;
        Index ia(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(a_axes.size()));
        Index ib(idx.begin() + static_cast<std::ptrdiff_t>(a_axes.size()), idx.end());
        v += p * std::log2(p / (pa[ia] * pb[ib]));
    }
    return v;
}

// I(A;B|C) = sum p(a,b,c) log2( p(c) p(a,b,c) / (p(a,c) p(b,c)) )
inline double cmi(const Table& t, const std::vector<int>& a_axes, const std::vector<int>& b_axes,
                  const std::vector<int>& c_axes) {
    if (c_axes.empty()) return mi(t, a_axes, b_axes);
    std::vector<int> abc = a_axes;
    abc.insert(abc.end(), b_axes.begin(), b_axes.end());
    abc.insert(abc.end(), c_axes.begin(), c_axes.end());
    Table pabc = project(t, abc);
    std::vector<int> ac = a_axes;
    ac.insert(ac.end(), c_axes.begin(), c_axes.end());
    std::vector<int> bc = b_axes;
    bc.insert(bc.end(), c_axes.begin(), c_axes.end());
    Table pac = project(t, ac);
    Table pbc = project(t, bc);
    Table pc = project(t, c_axes);
    const std::size_t na = a_axes.size(), nb = b_axes.size();
    double v = 0.0;
    for (const auto& [idx, p] : pabc) {
        if (p <= 0.0) continue;
        Index ia(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(na));
        Index ib(idx.begin() + static_cast<std::ptrdiff_t>(na), idx.begin() + static_cast<std::ptrdiff_t>(na + nb));
        Index ic(idx.begin() + static_cast<std::ptrdiff_t>(na + nb), idx.end());
        Index iac = ia;
        iac.insert(iac.end(), ic.begin(), ic.end());
        Index ibc = ib;
        ibc.insert(ibc.end(), ic.begin(), ic.end());
        v += p * std::log2(pc[ic] * p / (pac[iac] * pbc[ibc]));
    }
    return v;
}

}  // namespace oracle

#endif
