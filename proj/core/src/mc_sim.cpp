#include "relaycap/mc_sim.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <thread>

namespace relaycap {

namespace detail {

std::uint64_t sim_mix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

int rate_bits(int n, double rate) {
    return static_cast<int>(std::ceil(static_cast<double>(n) * rate - 1e-9));
}

}  // namespace detail

namespace {

using detail::sim_mix;

// Counter-based uniform in [0,1): full avalanche over the packed key, so
// every (trial, stream, m, l, i) coordinate gets an independent draw.
inline double u01(std::uint64_t seed, std::uint64_t stream, std::uint64_t a, std::uint64_t b,
                  std::uint64_t c) {
    std::uint64_t h = sim_mix(seed ^ sim_mix(stream));
    h = sim_mix(h ^ sim_mix(a));
    h = sim_mix(h ^ sim_mix(b));
    h = sim_mix(h ^ sim_mix(c));
    return static_cast<double>(h >> 11) * 0x1.0p-53;
}

inline int inv_cdf(std::span<const double> pmf, double x) {
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < pmf.size(); ++i) {
        acc += pmf[i];
        if (x < acc) return static_cast<int>(i);
    }
    return static_cast<int>(pmf.size()) - 1;
}

enum Stream : std::uint64_t {
    kStreamX1 = 1,
    kStreamU = 2,
    kStreamY2 = 3,
    kStreamY3 = 4,
    kStreamMessage = 5,
    kStreamFallback = 6,
};

// Counting typicality tester against a fixed joint, reused across scans.
class TypicalityTest {
  public:
    explicit TypicalityTest(const JointPmf& joint) : joint_(joint) {
        sizes_.reserve(joint.axes().size());
        for (const Alphabet& a : joint.axes()) sizes_.push_back(a.size);
        counts_.resize(joint.probs().size());
    }

    // seq_at(axis, i) -> symbol of sequence `axis` at position i.
    template <typename SymbolAt>
    bool test(int n, double eps, SymbolAt&& seq_at) {
        std::fill(counts_.begin(), counts_.end(), 0);
        for (int i = 0; i < n; ++i) {
            std::size_t idx = 0;
            for (std::size_t k = 0; k < sizes_.size(); ++k)
                idx = idx * static_cast<std::size_t>(sizes_[k]) +
                      static_cast<std::size_t>(seq_at(static_cast<int>(k), i));
            ++counts_[idx];
        }
        std::span<const double> p = joint_.probs();
        for (std::size_t c = 0; c < counts_.size(); ++c) {
            double freq = static_cast<double>(counts_[c]) / n;
            if (std::abs(freq - p[c]) > eps * p[c]) return false;
        }
        return true;
    }

  private:
    const JointPmf& joint_;
    std::vector<int> sizes_;
    std::vector<int> counts_;
};

struct TrialCounts {
    std::int64_t errors = 0;
    std::int64_t relay_fail = 0;
    std::int64_t multicode_fail = 0;
    std::int64_t decoder_fail = 0;

    TrialCounts& operator+=(const TrialCounts& o) {
        errors += o.errors;
        relay_fail += o.relay_fail;
        multicode_fail += o.multicode_fail;
        decoder_fail += o.decoder_fail;
        return *this;
    }
};

}  // namespace

GPDFCodebook::GPDFCodebook(const NoncausalRelayChannel& ch, const WitnessGPDF& w, int n,
                           int message_bits, int subcode_bits, std::uint64_t trial_seed)
    : card_u_(w.u_alphabet().size), n_(n), message_bits_(message_bits), subcode_bits_(subcode_bits),
      trial_seed_(trial_seed) {
    const int nx1 = ch.x1.size, ny2 = ch.y2.size;

    // Induced p(u|x1) = sum_y2 p(y2|x1) p(u|x1,y2): the codebook is drawn
    // before anything is received.
    u_rows_by_x1_.assign(static_cast<std::size_t>(nx1) * card_u_, 0.0);
    for (int a = 0; a < nx1; ++a) {
        auto y2row = ch.sender_to_relay.row(static_cast<std::size_t>(a));
        for (int c = 0; c < ny2; ++c) {
            auto urow = w.p_u_given_x1y2.row(static_cast<std::size_t>(a) * ny2 + c);
            for (int uu = 0; uu < card_u_; ++uu)
                u_rows_by_x1_[static_cast<std::size_t>(a) * card_u_ + uu] +=
                    y2row[static_cast<std::size_t>(c)] * urow[static_cast<std::size_t>(uu)];
        }
        normalize_exactly(std::span<double>(u_rows_by_x1_.data() + static_cast<std::size_t>(a) * card_u_,
                                            static_cast<std::size_t>(card_u_)));
    }

    std::int64_t messages = num_messages();
    x1_.resize(static_cast<std::size_t>(messages) * static_cast<std::size_t>(n_));
    for (std::int64_t m = 0; m < messages; ++m)
        for (int i = 0; i < n_; ++i)
            x1_[static_cast<std::size_t>(m) * n_ + static_cast<std::size_t>(i)] =
                inv_cdf(w.p_x1.probs(), u01(trial_seed_, kStreamX1, static_cast<std::uint64_t>(m), 0,
                                            static_cast<std::uint64_t>(i)));
}

int GPDFCodebook::u(std::int64_t m, std::int64_t l, int i) const {
    int a = x1(m, i);
    std::span<const double> row(u_rows_by_x1_.data() + static_cast<std::size_t>(a) * card_u_,
                                static_cast<std::size_t>(card_u_));
    return inv_cdf(row, u01(trial_seed_, kStreamU, static_cast<std::uint64_t>(m),
                            static_cast<std::uint64_t>(l), static_cast<std::uint64_t>(i)));
}

bool typical(std::span<const std::span<const int>> seqs, const JointPmf& joint, double eps) {
    if (seqs.size() != joint.axes().size())
        throw std::invalid_argument("typical: sequence count does not match joint axes");
    if (seqs.empty()) throw std::invalid_argument("typical: no sequences");
    std::size_t n = seqs[0].size();
    for (auto s : seqs)
        if (s.size() != n) throw std::invalid_argument("typical: length mismatch");
    if (n == 0) throw std::invalid_argument("typical: empty sequences");
    for (std::size_t k = 0; k < seqs.size(); ++k)
        for (int v : seqs[k])
            if (v < 0 || v >= joint.axes()[k].size)
                throw std::invalid_argument("typical: symbol out of range");

    TypicalityTest t(joint);
    return t.test(static_cast<int>(n), eps,
                  [&](int k, int i) { return seqs[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)]; });
}

bool typical(const std::vector<std::vector<int>>& seqs, const JointPmf& joint, double eps) {
    std::vector<std::span<const int>> spans;
    spans.reserve(seqs.size());
    for (const auto& s : seqs) spans.emplace_back(s.data(), s.size());
    return typical(std::span<const std::span<const int>>(spans.data(), spans.size()), joint, eps);
}

ErrorEstimate simulate_gp_df(const NoncausalRelayChannel& ch, const WitnessGPDF& w, const SimParams& p) {
    if (p.n < 1) throw std::invalid_argument("simulate_gp_df: n must be >= 1");
    if (p.trials < 1) throw std::invalid_argument("simulate_gp_df: trials must be >= 1");
    if (!(p.eps_relay > 0.0) || !(p.eps_decoder > p.eps_relay))
        throw std::invalid_argument("simulate_gp_df: need eps_decoder > eps_relay > 0");
    if (p.rate_r < 0.0 || p.rate_rtilde < 0.0) throw std::invalid_argument("simulate_gp_df: negative rate");

    const int mbits = detail::rate_bits(p.n, p.rate_r);
    const int lbits = detail::rate_bits(p.n, p.rate_rtilde);
    if (mbits + lbits > 56) throw std::invalid_argument("simulate_gp_df: codebook index space too large");
    const std::int64_t messages = std::int64_t{1} << mbits;
    const std::int64_t subcode = std::int64_t{1} << lbits;
    {
        // Cap on 2^ceil(nR) * 2^ceil(nR~) * n total codebook symbols.
        long double total = static_cast<long double>(messages) * static_cast<long double>(subcode) *
                            static_cast<long double>(p.n);
        if (total > static_cast<long double>(p.mem_cap))
            throw std::invalid_argument("simulate_gp_df: codebook exceeds the memory cap");
    }

    const int nx1 = ch.x1.size, ny2 = ch.y2.size;

    // Reference joints for the typicality tests. Robust typicality of a
    // tuple implies typicality of each marginal, so pair tests prune
    // subcodebook scans exactly.
    JointPmf gp_joint = build_joint_gp_df(ch, w);          // (X1, Y2, U, X2, Y3)
    JointPmf j_x1y2 = gp_joint.marginal({0, 1});
    JointPmf j_x1y2u = gp_joint.marginal({0, 1, 2});
    JointPmf j_x1uy3 = gp_joint.marginal({0, 2, 4});
    JointPmf j_x1y3 = gp_joint.marginal({0, 4});

    auto run_trial = [&](std::int64_t trial, TrialCounts& counts) {
        std::uint64_t ts = sim_mix(p.seed ^ sim_mix(static_cast<std::uint64_t>(trial) + 0x51ed2701ULL));
        GPDFCodebook code(ch, w, p.n, mbits, lbits, ts);

        TypicalityTest t2(j_x1y2), t3r(j_x1y2u), t3d(j_x1uy3), t2d(j_x1y3);

        std::int64_t m_true = static_cast<std::int64_t>(
            u01(ts, kStreamMessage, 0, 0, 0) * static_cast<double>(messages));
        if (m_true >= messages) m_true = messages - 1;

        // Channel to the relay.
        std::vector<int> y2(static_cast<std::size_t>(p.n));
        for (int i = 0; i < p.n; ++i) {
            auto row = ch.sender_to_relay.row(static_cast<std::size_t>(code.x1(m_true, i)));
            y2[static_cast<std::size_t>(i)] =
                inv_cdf(row, u01(ts, kStreamY2, 0, 0, static_cast<std::uint64_t>(i)));
        }

        // Relay: unique message with (x1^n(m), y2^n) typical at eps_relay.
        std::int64_t m_relay = -1;
        int matches = 0;
        for (std::int64_t m = 0; m < messages && matches < 2; ++m) {
            if (t2.test(p.n, p.eps_relay, [&](int k, int i) {
                    return k == 0 ? code.x1(m, i) : y2[static_cast<std::size_t>(i)];
                })) {
                ++matches;
                if (matches == 1) m_relay = m;
            }
        }
        if (matches != 1) {
            ++counts.relay_fail;
            m_relay = static_cast<std::int64_t>(u01(ts, kStreamFallback, 1, 0, 0) *
                                                static_cast<double>(messages));
            if (m_relay >= messages) m_relay = messages - 1;
        }

        // Multicoding: first l with (u^n(l|m~), x1^n(m~), y2^n) typical. If
        // the (x1, y2) marginal is already atypical no l can qualify.
        std::int64_t l_sel = -1;
        bool relay_pair_ok = t2.test(p.n, p.eps_relay, [&](int k, int i) {
            return k == 0 ? code.x1(m_relay, i) : y2[static_cast<std::size_t>(i)];
        });
        for (std::int64_t l = 0; relay_pair_ok && l < subcode; ++l) {
            if (t3r.test(p.n, p.eps_relay, [&](int k, int i) {
                    if (k == 0) return code.x1(m_relay, i);
                    if (k == 1) return y2[static_cast<std::size_t>(i)];
                    return code.u(m_relay, l, i);
                })) {
                l_sel = l;
                break;
            }
        }
        if (l_sel < 0) {
            ++counts.multicode_fail;
            l_sel = static_cast<std::int64_t>(u01(ts, kStreamFallback, 2, 0, 0) *
                                              static_cast<double>(subcode));
            if (l_sel >= subcode) l_sel = subcode - 1;
        }

        // Relay transmission and channel to the receiver. The relay uses its
        // own message estimate; the true codeword drives the channel.
        std::vector<int> y3(static_cast<std::size_t>(p.n));
        for (int i = 0; i < p.n; ++i) {
            int ui = code.u(m_relay, l_sel, i);
            int x1r = code.x1(m_relay, i);
            int y2i = y2[static_cast<std::size_t>(i)];
            int x2i = w.relay_map.table[(static_cast<std::size_t>(ui) * nx1 + x1r) * ny2 + y2i];
            int coords[3] = {code.x1(m_true, i), x2i, y2i};
            auto row = ch.direct.row_for(coords);
            y3[static_cast<std::size_t>(i)] =
                inv_cdf(row, u01(ts, kStreamY3, 0, 0, static_cast<std::uint64_t>(i)));
        }

        // Decoder: unique message with some subcodebook entry typical with
        // y3 at eps_decoder.
        std::int64_t decoded = -1;
        int dmatches = 0;
        for (std::int64_t m = 0; m < messages && dmatches < 2; ++m) {
            if (!t2d.test(p.n, p.eps_decoder, [&](int k, int i) {
                    return k == 0 ? code.x1(m, i) : y3[static_cast<std::size_t>(i)];
                }))
                continue;  // no l can complete an atypical (x1, y3) pair
            bool any = false;
            for (std::int64_t l = 0; l < subcode && !any; ++l) {
                any = t3d.test(p.n, p.eps_decoder, [&](int k, int i) {
                    if (k == 0) return code.x1(m, i);
                    if (k == 1) return code.u(m, l, i);
                    return y3[static_cast<std::size_t>(i)];
                });
            }
            if (any) {
                ++dmatches;
                if (dmatches == 1) decoded = m;
            }
        }
        if (dmatches != 1) {
            ++counts.decoder_fail;
            decoded = -1;
        }
        if (decoded != m_true) ++counts.errors;
    };

    TrialCounts total;
    int nthreads = p.threads > 0 ? p.threads
                                 : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    nthreads = static_cast<int>(std::min<std::int64_t>(nthreads, p.trials));
    if (nthreads <= 1) {
        for (std::int64_t t = 0; t < p.trials; ++t) run_trial(t, total);
    } else {
        std::vector<TrialCounts> parts(static_cast<std::size_t>(nthreads));
        std::atomic<std::int64_t> next{0};
        auto worker = [&](int wi) {
            for (;;) {
                std::int64_t t = next.fetch_add(1);
                if (t >= p.trials) break;
                run_trial(t, parts[static_cast<std::size_t>(wi)]);
            }
        };
        std::vector<std::thread> pool;
        for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker, t);
        for (auto& th : pool) th.join();
        for (const auto& c : parts) total += c;
    }

    ErrorEstimate est;
    est.trials = p.trials;
    est.errors = total.errors;
    est.p_err = static_cast<double>(total.errors) / static_cast<double>(p.trials);
    est.ci_halfwidth = 1.96 * std::sqrt(est.p_err * (1.0 - est.p_err) / static_cast<double>(p.trials));
    est.relay_decode_failures = total.relay_fail;
    est.multicoding_failures = total.multicode_fail;
    est.decoder_failures = total.decoder_fail;
    return est;
}

std::vector<SweepCell> sweep(const NoncausalRelayChannel& ch, const WitnessGPDF& w, const SimParams& base,
                             const std::vector<int>& n_values, const std::vector<double>& r_values) {
    std::vector<SweepCell> out;
    out.reserve(n_values.size() * r_values.size());
    for (int n : n_values)
        for (double r : r_values) {
            SimParams p = base;
            p.n = n;
            p.rate_r = r;
            p.seed = sim_mix(base.seed ^ sim_mix(static_cast<std::uint64_t>(n)) ^
                             sim_mix(std::bit_cast<std::uint64_t>(r)));
            out.push_back({n, r, simulate_gp_df(ch, w, p)});
        }
    return out;
}

}  // namespace relaycap
