#include "relaycap/info.hpp"

#include <algorithm>
#include <cmath>

namespace relaycap {

namespace detail {

double subset_entropy_raw(std::span<const double> table, std::span<const int> sizes,
                          std::span<const int> subset, std::vector<double>& scratch) {
    constexpr std::size_t kMaxAxes = 16;
    if (sizes.size() > kMaxAxes) throw std::invalid_argument("subset_entropy_raw: too many axes");

    std::size_t out_size = 1;
    for (int k : subset) out_size *= static_cast<std::size_t>(sizes[static_cast<std::size_t>(k)]);

    scratch.assign(out_size, 0.0);

    // out_strides for the subset in its given order, last fastest
    std::size_t stride = 1;
    std::size_t delta[kMaxAxes] = {};
    for (int j = static_cast<int>(subset.size()) - 1; j >= 0; --j) {
        int axis = subset[static_cast<std::size_t>(j)];
        delta[static_cast<std::size_t>(axis)] = stride;
        stride *= static_cast<std::size_t>(sizes[static_cast<std::size_t>(axis)]);
    }

    int idx[kMaxAxes] = {};
    std::size_t out_idx = 0;
    for (double p : table) {
        scratch[out_idx] += p;
        for (int k = static_cast<int>(sizes.size()) - 1; k >= 0; --k) {
            std::size_t ku = static_cast<std::size_t>(k);
            if (++idx[ku] < sizes[ku]) {
                out_idx += delta[ku];
                break;
            }
            idx[ku] = 0;
            out_idx -= delta[ku] * static_cast<std::size_t>(sizes[ku] - 1);
        }
    }

    double h = 0.0;
    for (double p : scratch) {
        if (p <= kEntropyClamp) continue;
        h -= p * std::log2(p);
    }
    return h;
}

namespace {

std::vector<int> axis_sizes(const JointPmf& j) {
    std::vector<int> s;
    s.reserve(j.axes().size());
    for (const Alphabet& a : j.axes()) s.push_back(a.size);
    return s;
}

void check_subset(const JointPmf& j, std::span<const int> subset, const char* what) {
    std::vector<bool> seen(j.axes().size(), false);
    for (int k : subset) {
        if (k < 0 || k >= static_cast<int>(j.axes().size()))
            throw std::invalid_argument(std::string(what) + ": unknown axis " + std::to_string(k));
        if (seen[static_cast<std::size_t>(k)])
            throw std::invalid_argument(std::string(what) + ": duplicate axis " + std::to_string(k));
        seen[static_cast<std::size_t>(k)] = true;
    }
}

void check_disjoint(std::span<const int> a, std::span<const int> b, const char* what) {
    for (int x : a)
        for (int y : b)
            if (x == y) throw std::invalid_argument(std::string(what) + ": overlapping axis groups");
}

std::vector<int> concat(std::span<const int> a, std::span<const int> b) {
    std::vector<int> out(a.begin(), a.end());
    out.insert(out.end(), b.begin(), b.end());
    return out;
}

}  // namespace

}  // namespace detail

double binary_entropy(double p) {
    if (!(p >= 0.0) || p > 1.0) throw std::domain_error("binary_entropy: p must be in [0,1]");
    double h = 0.0;
    if (p > kEntropyClamp) h -= p * std::log2(p);
    if (1.0 - p > kEntropyClamp) h -= (1.0 - p) * std::log2(1.0 - p);
    return h;
}

double entropy(const Pmf& p) {
    double h = 0.0;
    for (double x : p.probs()) {
        if (x <= kEntropyClamp) continue;
        h -= x * std::log2(x);
    }
    return h;
}

double entropy(const JointPmf& j, std::span<const int> axes) {
    detail::check_subset(j, axes, "entropy");
    std::vector<int> sizes = detail::axis_sizes(j);
    std::vector<double> scratch;
    return detail::subset_entropy_raw(j.probs(), sizes, axes, scratch);
}

double entropy(const JointPmf& j, std::initializer_list<int> axes) {
    std::vector<int> v(axes);
    return entropy(j, std::span<const int>(v));
}

double mutual_information(const JointPmf& j, std::span<const int> group_a, std::span<const int> group_b) {
    if (group_a.empty() || group_b.empty()) throw std::invalid_argument("mutual_information: empty group");
    detail::check_subset(j, group_a, "mutual_information");
    detail::check_subset(j, group_b, "mutual_information");
    detail::check_disjoint(group_a, group_b, "mutual_information");

    std::vector<int> sizes = detail::axis_sizes(j);
    std::vector<double> scratch;
    std::vector<int> ab = detail::concat(group_a, group_b);
    double v = detail::subset_entropy_raw(j.probs(), sizes, group_a, scratch) +
               detail::subset_entropy_raw(j.probs(), sizes, group_b, scratch) -
               detail::subset_entropy_raw(j.probs(), sizes, ab, scratch);
    return v < 0.0 ? 0.0 : v;
}

double mutual_information(const JointPmf& j, std::initializer_list<int> a, std::initializer_list<int> b) {
    std::vector<int> va(a), vb(b);
    return mutual_information(j, std::span<const int>(va), std::span<const int>(vb));
}

double conditional_mutual_information(const JointPmf& j, std::span<const int> group_a,
                                      std::span<const int> group_b, std::span<const int> group_c) {
    if (group_a.empty() || group_b.empty())
        throw std::invalid_argument("conditional_mutual_information: empty group");
    detail::check_subset(j, group_a, "conditional_mutual_information");
    detail::check_subset(j, group_b, "conditional_mutual_information");
    detail::check_subset(j, group_c, "conditional_mutual_information");
    detail::check_disjoint(group_a, group_b, "conditional_mutual_information");
    detail::check_disjoint(group_a, group_c, "conditional_mutual_information");
    detail::check_disjoint(group_b, group_c, "conditional_mutual_information");

    std::vector<int> sizes = detail::axis_sizes(j);
    std::vector<double> scratch;
    std::vector<int> ac = detail::concat(group_a, group_c);
    std::vector<int> bc = detail::concat(group_b, group_c);
    std::vector<int> abc = detail::concat(std::span<const int>(ac), group_b);
    double v = detail::subset_entropy_raw(j.probs(), sizes, ac, scratch) +
               detail::subset_entropy_raw(j.probs(), sizes, bc, scratch) -
               detail::subset_entropy_raw(j.probs(), sizes, abc, scratch) -
               detail::subset_entropy_raw(j.probs(), sizes, group_c, scratch);
    return v < 0.0 ? 0.0 : v;
}

double conditional_mutual_information(const JointPmf& j, std::initializer_list<int> a,
                                      std::initializer_list<int> b, std::initializer_list<int> c) {
    std::vector<int> va(a), vb(b), vc(c);
    return conditional_mutual_information(j, std::span<const int>(va), std::span<const int>(vb),
                                          std::span<const int>(vc));
}

}  // namespace relaycap
