#ifndef RELAYCAP_CHANNEL_HPP
#define RELAYCAP_CHANNEL_HPP

#include <cstdint>

#include "relaycap/prob.hpp"

namespace relaycap {

/// Lookup table realizing a deterministic function of an input tuple, e.g. a
/// relay rule x2(u, x1, y2). The table is row-major over the input axes.
struct DeterministicMap {
    std::vector<Alphabet> input_axes;
    Alphabet output_axis;
    std::vector<int> table;

    DeterministicMap(std::vector<Alphabet> input_axes_, Alphabet output_axis_, std::vector<int> table_);

    int operator()(std::span<const int> input_coords) const;
    int at_flat(std::size_t flat_input_index) const { return table[flat_input_index]; }
    std::size_t domain_size() const { return table.size(); }
};

/// A memoryless relay channel with the factorization
/// p(y2|x1) * p(y3|x1,x2,y2), where the relay sees the whole y2 block before
/// transmitting.
struct NoncausalRelayChannel {
    Alphabet x1, x2, y2, y3;
    CondPmf sender_to_relay;  // p(y2|x1), input axes (x1)
    CondPmf direct;           // p(y3|x1,x2,y2), input axes (x1,x2,y2)

    NoncausalRelayChannel(Alphabet x1_, Alphabet x2_, Alphabet y2_, Alphabet y3_,
                          CondPmf sender_to_relay_, CondPmf direct_);
};

/// True iff p(y3|x1,x2,y2) does not depend on x1, entrywise within tol.
bool is_degraded(const NoncausalRelayChannel& ch, double tol = 1e-9);

/// Binary-input channel with an erasure hop: X1 -> Y2 is a BEC(1/2) over
/// {0,1,e}, and the relay-to-receiver link copies X2 when Y2 is not erased
/// and is stuck at 1 when it is. Degraded; symbol order for Y2 is (0,1,e).
NoncausalRelayChannel example_bec_channel();

/// Binary cascade: X1 -> Y2 is BSC(p1); Y3 is X2 through BSC(p2) when
/// Y2 = 0 and through BSC(p3) when Y2 = 1. Degraded.
NoncausalRelayChannel example_bsc_channel(double p1, double p2, double p3);

/// Seeded random channel with all four alphabets binary; probabilities are
/// dyadic (k/16) so tables are reproducible bit-for-bit. Test helper.
NoncausalRelayChannel random_binary_channel(std::uint64_t seed);

/// Same, but with p(y3|x1,x2,y2) independent of x1 (degraded). Test helper.
NoncausalRelayChannel random_degraded_binary_channel(std::uint64_t seed);

}  // namespace relaycap

#endif
