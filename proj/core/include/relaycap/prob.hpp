#ifndef RELAYCAP_PROB_HPP
#define RELAYCAP_PROB_HPP

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

// Finite-alphabet probability containers. All tables are dense and row-major;
// alphabets in this library are tiny (2-4 symbols), so simplicity wins over
// sparsity. Values are immutable after construction and every operation is a
// pure function, so concurrent use needs no synchronization.

namespace relaycap {

inline constexpr double kStochasticTol = 1e-12;  // validation tolerance on mass
inline constexpr double kEntropyClamp = 1e-15;   // entries below this are treated as 0 before log

/// A named finite alphabet. Labels are optional symbol names ("0","1","e").
struct Alphabet {
    std::string name;
    int size = 0;
    std::vector<std::string> labels;  // empty, or exactly `size` distinct entries

    Alphabet() = default;
    Alphabet(std::string name_, int size_, std::vector<std::string> labels_ = {});

    /// Printable name of symbol i (its label, or the index as text).
    std::string label(int i) const;
    /// Inverse of label(); -1 if unknown.
    int symbol_from_label(const std::string& s) const;

    bool operator==(const Alphabet&) const = default;
};

/// Probability vector over one alphabet. Entries are >= 0 and sum to 1
/// within kStochasticTol.
class Pmf {
  public:
    Pmf(Alphabet alphabet, std::vector<double> probs);

    static Pmf uniform(Alphabet alphabet);
    static Pmf point_mass(Alphabet alphabet, int symbol);

    const Alphabet& alphabet() const { return alphabet_; }
    std::span<const double> probs() const { return probs_; }
    double operator[](int i) const { return probs_[static_cast<std::size_t>(i)]; }
    int size() const { return alphabet_.size; }

  private:
    Alphabet alphabet_;
    std::vector<double> probs_;
};

/// Dense joint pmf over an ordered list of alphabets (row-major, last axis
/// fastest). Total mass 1 within kStochasticTol, all entries >= 0.
class JointPmf {
  public:
    JointPmf(std::vector<Alphabet> axes, std::vector<double> probs);

    const std::vector<Alphabet>& axes() const { return axes_; }
    std::span<const double> probs() const { return probs_; }
    std::size_t cell_count() const { return probs_.size(); }
    double mass() const;

    std::size_t flat_index(std::span<const int> coords) const;
    double at(std::span<const int> coords) const { return probs_[flat_index(coords)]; }

    /// Sums out all axes not in `keep`; the order of `keep` is preserved in
    /// the result. `keep` must be a nonempty set of distinct valid axes.
    JointPmf marginal(std::span<const int> keep) const;
    JointPmf marginal(std::initializer_list<int> keep) const;

  private:
    std::vector<Alphabet> axes_;
    std::vector<double> probs_;
};

/// Row-stochastic conditional p(output | input-tuple). Rows are indexed
/// row-major over the input axes.
class CondPmf {
  public:
    CondPmf(std::vector<Alphabet> input_axes, Alphabet output_axis, std::vector<double> probs);

    /// Builds from rows that may be off by more than kStochasticTol (file
    /// ingestion): each row is checked against `row_tol` and then
    /// renormalized to sum to 1.0 exactly.
    static CondPmf normalized(std::vector<Alphabet> input_axes, Alphabet output_axis,
                              std::vector<double> probs, double row_tol);

    static CondPmf uniform(std::vector<Alphabet> input_axes, Alphabet output_axis);

    const std::vector<Alphabet>& input_axes() const { return input_axes_; }
    const Alphabet& output_axis() const { return output_axis_; }
    std::span<const double> probs() const { return probs_; }

    std::size_t row_count() const { return probs_.size() / static_cast<std::size_t>(output_axis_.size); }
    std::size_t row_index(std::span<const int> input_coords) const;
    std::span<const double> row(std::size_t r) const;
    std::span<const double> row_for(std::span<const int> input_coords) const { return row(row_index(input_coords)); }

  private:
    CondPmf() = default;
    std::vector<Alphabet> input_axes_;
    Alphabet output_axis_;
    std::vector<double> probs_;
};

/// Divides by the exact sum and then nudges the largest entry so the values
/// sum to 1.0 bit-exactly. No-op on an all-zero vector.
void normalize_exactly(std::span<double> v);

/// Product of axis sizes, with overflow check.
std::size_t table_size(std::span<const Alphabet> axes);

/// Row-major strides for a list of axes (last axis has stride 1).
std::vector<std::size_t> row_major_strides(std::span<const Alphabet> axes);

}  // namespace relaycap

#endif
