#include "relaycap/prob.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <unordered_set>

namespace relaycap {

Alphabet::Alphabet(std::string name_, int size_, std::vector<std::string> labels_)
    : name(std::move(name_)), size(size_), labels(std::move(labels_)) {
    if (size < 1) throw std::invalid_argument("Alphabet '" + name + "': size must be >= 1");
    if (!labels.empty()) {
        if (static_cast<int>(labels.size()) != size)
            throw std::invalid_argument("Alphabet '" + name + "': expected " + std::to_string(size) + " labels");
        std::unordered_set<std::string> seen(labels.begin(), labels.end());
        if (static_cast<int>(seen.size()) != size)
            throw std::invalid_argument("Alphabet '" + name + "': labels must be distinct");
    }
}

std::string Alphabet::label(int i) const {
    if (i < 0 || i >= size) throw std::out_of_range("Alphabet '" + name + "': symbol out of range");
    return labels.empty() ? std::to_string(i) : labels[static_cast<std::size_t>(i)];
}

int Alphabet::symbol_from_label(const std::string& s) const {
    if (labels.empty()) {
        try {
            std::size_t pos = 0;
            int v = std::stoi(s, &pos);
            if (pos == s.size() && v >= 0 && v < size) return v;
        } catch (...) {
        }
        return -1;
    }
    for (int i = 0; i < size; ++i)
        if (labels[static_cast<std::size_t>(i)] == s) return i;
    return -1;
}

void normalize_exactly(std::span<double> v) {
    double sum = std::accumulate(v.begin(), v.end(), 0.0);
    if (sum <= 0.0) return;
    for (double& x : v) x /= sum;
    // Force the sum to be exactly 1.0 by absorbing the rounding residual
    // into the largest entry; one or two passes suffice in practice.
    for (int pass = 0; pass < 4; ++pass) {
        double s = std::accumulate(v.begin(), v.end(), 0.0);
        if (s == 1.0) return;
        auto it = std::max_element(v.begin(), v.end());
        *it += 1.0 - s;
    }
}

std::size_t table_size(std::span<const Alphabet> axes) {
    std::size_t n = 1;
    for (const Alphabet& a : axes) {
        if (a.size <= 0) throw std::invalid_argument("axis with nonpositive size");
        if (n > std::numeric_limits<std::size_t>::max() / static_cast<std::size_t>(a.size))
            throw std::length_error("joint table too large");
        n *= static_cast<std::size_t>(a.size);
    }
    return n;
}

std::vector<std::size_t> row_major_strides(std::span<const Alphabet> axes) {
    std::vector<std::size_t> s(axes.size(), 1);
    for (int k = static_cast<int>(axes.size()) - 2; k >= 0; --k)
        s[static_cast<std::size_t>(k)] =
            s[static_cast<std::size_t>(k) + 1] * static_cast<std::size_t>(axes[static_cast<std::size_t>(k) + 1].size);
    return s;
}

namespace {

void check_distribution(std::span<const double> p, double tol, const std::string& what) {
    double sum = 0.0;
    for (double x : p) {
        if (!(x >= 0.0)) throw std::invalid_argument(what + ": negative or NaN entry");
        sum += x;
    }
    if (std::abs(sum - 1.0) > tol)
        throw std::invalid_argument(what + ": entries sum to " + std::to_string(sum) + ", expected 1");
}

}  // namespace

Pmf::Pmf(Alphabet alphabet, std::vector<double> probs)
    : alphabet_(std::move(alphabet)), probs_(std::move(probs)) {
    if (probs_.size() != static_cast<std::size_t>(alphabet_.size))
        throw std::invalid_argument("Pmf over '" + alphabet_.name + "': wrong length");
    check_distribution(probs_, kStochasticTol, "Pmf over '" + alphabet_.name + "'");
}

Pmf Pmf::uniform(Alphabet alphabet) {
    int n = alphabet.size;
    std::vector<double> p(static_cast<std::size_t>(n), 1.0 / n);
    normalize_exactly(p);
    return Pmf(std::move(alphabet), std::move(p));
}

Pmf Pmf::point_mass(Alphabet alphabet, int symbol) {
    if (symbol < 0 || symbol >= alphabet.size)
        throw std::invalid_argument("Pmf::point_mass: symbol out of range");
    std::vector<double> p(static_cast<std::size_t>(alphabet.size), 0.0);
    p[static_cast<std::size_t>(symbol)] = 1.0;
    return Pmf(std::move(alphabet), std::move(p));
}

JointPmf::JointPmf(std::vector<Alphabet> axes, std::vector<double> probs)
    : axes_(std::move(axes)), probs_(std::move(probs)) {
    if (axes_.empty()) throw std::invalid_argument("JointPmf: no axes");
    if (probs_.size() != table_size(axes_))
        throw std::invalid_argument("JointPmf: table size does not match axes");
    check_distribution(probs_, kStochasticTol, "JointPmf");
}

double JointPmf::mass() const { return std::accumulate(probs_.begin(), probs_.end(), 0.0); }

std::size_t JointPmf::flat_index(std::span<const int> coords) const {
    if (coords.size() != axes_.size()) throw std::invalid_argument("JointPmf: wrong coordinate count");
    std::size_t idx = 0;
    for (std::size_t k = 0; k < axes_.size(); ++k) {
        int c = coords[k];
        if (c < 0 || c >= axes_[k].size) throw std::out_of_range("JointPmf: coordinate out of range");
        idx = idx * static_cast<std::size_t>(axes_[k].size) + static_cast<std::size_t>(c);
    }
    return idx;
}

JointPmf JointPmf::marginal(std::span<const int> keep) const {
    if (keep.empty()) throw std::invalid_argument("marginal: axis subset is empty");
    std::unordered_set<int> seen;
    std::vector<Alphabet> out_axes;
    out_axes.reserve(keep.size());
    for (int k : keep) {
        if (k < 0 || k >= static_cast<int>(axes_.size()))
            throw std::invalid_argument("marginal: unknown axis " + std::to_string(k));
        if (!seen.insert(k).second) throw std::invalid_argument("marginal: duplicate axis " + std::to_string(k));
        out_axes.push_back(axes_[static_cast<std::size_t>(k)]);
    }

    std::vector<std::size_t> out_strides = row_major_strides(out_axes);
    // delta[k] = contribution of axis k to the output index (0 if dropped)
    std::vector<std::size_t> delta(axes_.size(), 0);
    for (std::size_t j = 0; j < keep.size(); ++j) delta[static_cast<std::size_t>(keep[j])] = out_strides[j];

    std::vector<double> out(table_size(out_axes), 0.0);
    std::vector<int> idx(axes_.size(), 0);
    std::size_t out_idx = 0;
    for (double p : probs_) {
        out[out_idx] += p;
        // odometer increment, last axis fastest
        for (int k = static_cast<int>(axes_.size()) - 1; k >= 0; --k) {
            std::size_t ku = static_cast<std::size_t>(k);
            if (++idx[ku] < axes_[ku].size) {
                out_idx += delta[ku];
                break;
            }
            idx[ku] = 0;
            out_idx -= delta[ku] * static_cast<std::size_t>(axes_[ku].size - 1);
        }
    }
    return JointPmf(std::move(out_axes), std::move(out));
}

JointPmf JointPmf::marginal(std::initializer_list<int> keep) const {
    std::vector<int> k(keep);
    return marginal(std::span<const int>(k));
}

CondPmf::CondPmf(std::vector<Alphabet> input_axes, Alphabet output_axis, std::vector<double> probs)
    : input_axes_(std::move(input_axes)), output_axis_(std::move(output_axis)), probs_(std::move(probs)) {
    std::size_t rows = table_size(input_axes_);
    if (probs_.size() != rows * static_cast<std::size_t>(output_axis_.size))
        throw std::invalid_argument("CondPmf '" + output_axis_.name + "': wrong table size");
    for (std::size_t r = 0; r < rows; ++r)
        check_distribution(row(r), kStochasticTol, "CondPmf '" + output_axis_.name + "' row " + std::to_string(r));
}

CondPmf CondPmf::normalized(std::vector<Alphabet> input_axes, Alphabet output_axis,
                            std::vector<double> probs, double row_tol) {
    std::size_t rows = table_size(input_axes);
    std::size_t w = static_cast<std::size_t>(output_axis.size);
    if (probs.size() != rows * w) throw std::invalid_argument("CondPmf::normalized: wrong table size");
    for (std::size_t r = 0; r < rows; ++r) {
        std::span<double> row(probs.data() + r * w, w);
        check_distribution(row, row_tol, "CondPmf '" + output_axis.name + "' row " + std::to_string(r));
        normalize_exactly(row);
    }
    return CondPmf(std::move(input_axes), std::move(output_axis), std::move(probs));
}

CondPmf CondPmf::uniform(std::vector<Alphabet> input_axes, Alphabet output_axis) {
    std::size_t rows = table_size(input_axes);
    std::size_t w = static_cast<std::size_t>(output_axis.size);
    std::vector<double> probs(rows * w, 1.0 / output_axis.size);
    for (std::size_t r = 0; r < rows; ++r) normalize_exactly(std::span<double>(probs.data() + r * w, w));
    return CondPmf(std::move(input_axes), std::move(output_axis), std::move(probs));
}

std::size_t CondPmf::row_index(std::span<const int> input_coords) const {
    if (input_coords.size() != input_axes_.size())
        throw std::invalid_argument("CondPmf: wrong input coordinate count");
    std::size_t idx = 0;
    for (std::size_t k = 0; k < input_axes_.size(); ++k) {
        int c = input_coords[k];
        if (c < 0 || c >= input_axes_[k].size) throw std::out_of_range("CondPmf: input coordinate out of range");
        idx = idx * static_cast<std::size_t>(input_axes_[k].size) + static_cast<std::size_t>(c);
    }
    return idx;
}

std::span<const double> CondPmf::row(std::size_t r) const {
    std::size_t w = static_cast<std::size_t>(output_axis_.size);
    return {probs_.data() + r * w, w};
}

}  // namespace relaycap
