#include "relaycap/channel.hpp"

#include <cmath>
#include <random>

namespace relaycap {

DeterministicMap::DeterministicMap(std::vector<Alphabet> input_axes_, Alphabet output_axis_,
                                   std::vector<int> table_)
    : input_axes(std::move(input_axes_)), output_axis(std::move(output_axis_)), table(std::move(table_)) {
    if (table.size() != table_size(input_axes))
        throw std::invalid_argument("DeterministicMap: table size does not match input axes");
    for (int v : table)
        if (v < 0 || v >= output_axis.size)
            throw std::invalid_argument("DeterministicMap: output symbol out of range");
}

int DeterministicMap::operator()(std::span<const int> input_coords) const {
    if (input_coords.size() != input_axes.size())
        throw std::invalid_argument("DeterministicMap: wrong input coordinate count");
    std::size_t idx = 0;
    for (std::size_t k = 0; k < input_axes.size(); ++k) {
        int c = input_coords[k];
        if (c < 0 || c >= input_axes[k].size) throw std::out_of_range("DeterministicMap: input out of range");
        idx = idx * static_cast<std::size_t>(input_axes[k].size) + static_cast<std::size_t>(c);
    }
    return table[idx];
}

NoncausalRelayChannel::NoncausalRelayChannel(Alphabet x1_, Alphabet x2_, Alphabet y2_, Alphabet y3_,
                                             CondPmf sender_to_relay_, CondPmf direct_)
    : x1(std::move(x1_)), x2(std::move(x2_)), y2(std::move(y2_)), y3(std::move(y3_)),
      sender_to_relay(std::move(sender_to_relay_)), direct(std::move(direct_)) {
    if (sender_to_relay.input_axes() != std::vector<Alphabet>{x1} || sender_to_relay.output_axis() != y2)
        throw std::invalid_argument("NoncausalRelayChannel: p(y2|x1) axes inconsistent");
    if (direct.input_axes() != std::vector<Alphabet>{x1, x2, y2} || direct.output_axis() != y3)
        throw std::invalid_argument("NoncausalRelayChannel: p(y3|x1,x2,y2) axes inconsistent");
}

bool is_degraded(const NoncausalRelayChannel& ch, double tol) {
    if (!(tol > 0.0)) throw std::invalid_argument("is_degraded: tol must be positive");
    const int nx1 = ch.x1.size, nx2 = ch.x2.size, ny2 = ch.y2.size, ny3 = ch.y3.size;
    for (int b = 0; b < nx2; ++b)
        for (int c = 0; c < ny2; ++c)
            for (int e = 0; e < ny3; ++e) {
                double lo = 2.0, hi = -1.0;
                for (int a = 0; a < nx1; ++a) {
                    int coords[3] = {a, b, c};
                    double p = ch.direct.row_for(coords)[static_cast<std::size_t>(e)];
                    lo = std::min(lo, p);
                    hi = std::max(hi, p);
                }
                if (hi - lo > tol) return false;
            }
    return true;
}

NoncausalRelayChannel example_bec_channel() {
    Alphabet x1{"x1", 2}, x2{"x2", 2}, y3{"y3", 2};
    Alphabet y2{"y2", 3, {"0", "1", "e"}};

    // BEC(1/2): input is either delivered or erased, each with probability 1/2.
    std::vector<double> relay = {
        0.5, 0.0, 0.5,  // x1 = 0
        0.0, 0.5, 0.5,  // x1 = 1
    };

    // Clean copy of x2 when y2 is 0 or 1; output stuck at 1 when y2 = e.
    // Rows lexicographic in (x1, x2, y2); no x1 dependence.
    std::vector<double> direct;
    direct.reserve(2 * 2 * 3 * 2);
    for (int a = 0; a < 2; ++a) {
        (void)a;
        for (int b = 0; b < 2; ++b)
            for (int c = 0; c < 3; ++c) {
                if (c == 2) {
                    direct.push_back(0.0);
                    direct.push_back(1.0);
                } else {
                    direct.push_back(b == 0 ? 1.0 : 0.0);
                    direct.push_back(b == 0 ? 0.0 : 1.0);
                }
            }
    }

    return NoncausalRelayChannel(x1, x2, y2, y3, CondPmf({x1}, y2, std::move(relay)),
                                 CondPmf({x1, x2, y2}, y3, std::move(direct)));
}

NoncausalRelayChannel example_bsc_channel(double p1, double p2, double p3) {
    for (double p : {p1, p2, p3})
        if (!(p >= 0.0) || p > 1.0) throw std::domain_error("example_bsc_channel: parameter outside [0,1]");

    Alphabet x1{"x1", 2}, x2{"x2", 2}, y2{"y2", 2}, y3{"y3", 2};

    std::vector<double> relay = {
        1.0 - p1, p1,
        p1, 1.0 - p1,
    };

    // BSC(p2) when y2 = 0, BSC(p3) when y2 = 1; no x1 dependence.
    std::vector<double> direct;
    direct.reserve(2 * 2 * 2 * 2);
    for (int a = 0; a < 2; ++a) {
        (void)a;
        for (int b = 0; b < 2; ++b)
            for (int c = 0; c < 2; ++c) {
                double flip = (c == 0) ? p2 : p3;
                direct.push_back(b == 0 ? 1.0 - flip : flip);
                direct.push_back(b == 0 ? flip : 1.0 - flip);
            }
    }

    return NoncausalRelayChannel(x1, x2, y2, y3, CondPmf({x1}, y2, std::move(relay)),
                                 CondPmf({x1, x2, y2}, y3, std::move(direct)));
}

namespace {

// Dyadic Bernoulli parameter in {1/16, ..., 15/16}; exactly representable so
// generated channels are bit-stable.
double dyadic_param(std::mt19937_64& rng) { return static_cast<double>(1 + rng() % 15) / 16.0; }

std::vector<double> random_binary_rows(std::mt19937_64& rng, std::size_t rows) {
    std::vector<double> t;
    t.reserve(rows * 2);
    for (std::size_t r = 0; r < rows; ++r) {
        double p = dyadic_param(rng);
        t.push_back(1.0 - p);
        t.push_back(p);
    }
    return t;
}

}  // namespace

NoncausalRelayChannel random_binary_channel(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    Alphabet x1{"x1", 2}, x2{"x2", 2}, y2{"y2", 2}, y3{"y3", 2};
    std::vector<double> relay = random_binary_rows(rng, 2);
    std::vector<double> direct = random_binary_rows(rng, 8);
    return NoncausalRelayChannel(x1, x2, y2, y3, CondPmf({x1}, y2, std::move(relay)),
                                 CondPmf({x1, x2, y2}, y3, std::move(direct)));
}

NoncausalRelayChannel random_degraded_binary_channel(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    Alphabet x1{"x1", 2}, x2{"x2", 2}, y2{"y2", 2}, y3{"y3", 2};
    std::vector<double> relay = random_binary_rows(rng, 2);
    std::vector<double> half = random_binary_rows(rng, 4);  // rows over (x2, y2)
    std::vector<double> direct(half);
    direct.insert(direct.end(), half.begin(), half.end());  // duplicate for both x1 values
    return NoncausalRelayChannel(x1, x2, y2, y3, CondPmf({x1}, y2, std::move(relay)),
                                 CondPmf({x1, x2, y2}, y3, std::move(direct)));
}

}  // namespace relaycap
