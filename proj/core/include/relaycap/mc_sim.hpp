#ifndef RELAYCAP_MC_SIM_HPP
#define RELAYCAP_MC_SIM_HPP

#include <cstdint>

#include "relaycap/witness.hpp"

// Monte Carlo simulation of the Gelfand-Pinsker decode-forward scheme at
// small blocklength: random codebooks, relay typicality decoding,
// multicoding, symbol-by-symbol relaying and joint-typicality decoding.

namespace relaycap {

struct SimParams {
    int n = 8;                    // blocklength
    double rate_r = 0.25;         // message rate R, bits/symbol
    double rate_rtilde = 0.5;     // subcodebook rate R~, bits/symbol
    double eps_relay = 0.2;       // typicality slack at the relay (eps')
    double eps_decoder = 0.3;     // typicality slack at the decoder (> eps_relay)
    std::int64_t trials = 1000;
    std::uint64_t seed = 0;
    std::int64_t mem_cap = std::int64_t{1} << 26;  // cap on 2^ceil(nR) * 2^ceil(nR~) * n
    int threads = 0;                               // 0 = hardware concurrency
};

struct ErrorEstimate {
    double p_err = 0.0;
    double ci_halfwidth = 0.0;  // 1.96 * sqrt(p(1-p)/trials)
    std::int64_t relay_decode_failures = 0;   // relay message estimate not unique
    std::int64_t multicoding_failures = 0;    // no typical u sequence in the subcodebook
    std::int64_t decoder_failures = 0;        // decoder found zero or multiple messages
    std::int64_t errors = 0;                  // p_err * trials, exactly
    std::int64_t trials = 0;
};

/// Random GP-DF codebook for one trial: 2^ceil(nR) sender codewords drawn
/// i.i.d. from p(x1), each with a subcodebook of 2^ceil(nR~) u-sequences
/// drawn conditionally i.i.d. from p(u|x1). Sender codewords are
/// materialized; u-symbols are generated on demand from a counter-based
/// generator, so codebooks far beyond memory scale can still be scanned.
class GPDFCodebook {
  public:
    GPDFCodebook(const NoncausalRelayChannel& ch, const WitnessGPDF& w, int n, int message_bits,
                 int subcode_bits, std::uint64_t trial_seed);

    std::int64_t num_messages() const { return std::int64_t{1} << message_bits_; }
    std::int64_t num_u_per_message() const { return std::int64_t{1} << subcode_bits_; }
    int length() const { return n_; }

    int x1(std::int64_t m, int i) const {
        return x1_[static_cast<std::size_t>(m) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(i)];
    }
    std::span<const int> x1_row(std::int64_t m) const {
        return {x1_.data() + static_cast<std::size_t>(m) * static_cast<std::size_t>(n_),
                static_cast<std::size_t>(n_)};
    }
    /// u_i(l|m), generated on demand; deterministic in (trial_seed, m, l, i).
    int u(std::int64_t m, std::int64_t l, int i) const;

  private:
    std::vector<double> u_rows_by_x1_;  // induced p(u|x1) rows, row-major by x1 symbol
    int card_u_ = 0;
    int n_ = 0;
    int message_bits_ = 0, subcode_bits_ = 0;
    std::uint64_t trial_seed_ = 0;
    std::vector<int> x1_;
};

/// Robust typicality: for every symbol tuple a,
/// |empirical_freq(a) - p(a)| <= eps * p(a). Sequences must share one length
/// and match the joint's axes in order.
bool typical(std::span<const std::span<const int>> seqs, const JointPmf& joint, double eps);
bool typical(const std::vector<std::vector<int>>& seqs, const JointPmf& joint, double eps);

/// Simulates the GP-DF scheme: per trial a fresh codebook, a uniform
/// message, relay typicality decoding (unique-match rule with a uniformly
/// random fallback), first-typical multicoding, symbol-by-symbol relaying
/// through the witness map, and a unique-message joint-typicality decoder.
ErrorEstimate simulate_gp_df(const NoncausalRelayChannel& ch, const WitnessGPDF& w, const SimParams& p);

struct SweepCell {
    int n;
    double rate;
    ErrorEstimate estimate;
};

/// Grid of simulate_gp_df runs over blocklengths and rates; each cell's seed
/// is derived deterministically from (base.seed, n, rate).
std::vector<SweepCell> sweep(const NoncausalRelayChannel& ch, const WitnessGPDF& w, const SimParams& base,
                             const std::vector<int>& n_values, const std::vector<double>& r_values);

namespace detail {
/// ceil(n * rate) with a guard against ties landing just above an integer.
int rate_bits(int n, double rate);
std::uint64_t sim_mix(std::uint64_t x);
}  // namespace detail

}  // namespace relaycap

#endif
