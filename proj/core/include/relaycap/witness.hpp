#ifndef RELAYCAP_WITNESS_HPP
#define RELAYCAP_WITNESS_HPP

#include <variant>

#include "relaycap/channel.hpp"

// Witness types: one concrete assignment of pmfs and relay rules for each
// bound's maximization domain, plus the builders that turn a channel and a
// witness into the induced joint distribution.

namespace relaycap {

/// Decode-forward: an arbitrary joint p(x1,x2).
struct WitnessDF {
    JointPmf p_x1x2;  // axes (X1, X2)
};

/// Partial decode-forward: p(v,x1,x2) with auxiliary V.
struct WitnessPDF {
    JointPmf p_vx1x2;  // axes (V, X1, X2)
    const Alphabet& v_alphabet() const { return p_vx1x2.axes()[0]; }
};

/// Cutset: p(x1) and a stochastic relay rule p(x2|x1,y2).
struct WitnessCutset {
    Pmf p_x1;
    CondPmf p_x2_given_x1y2;  // input axes (x1, y2)
};

/// Gelfand-Pinsker decode-forward: p(x1), p(u|x1,y2) and a deterministic
/// relay map x2(u,x1,y2). Also the witness shape of the improved upper
/// bound.
struct WitnessGPDF {
    Pmf p_x1;
    CondPmf p_u_given_x1y2;    // input axes (x1, y2), output U
    DeterministicMap relay_map;  // input axes (U, x1, y2), output x2
    const Alphabet& u_alphabet() const { return p_u_given_x1y2.output_axis(); }
};
using WitnessNUB = WitnessGPDF;

/// Gelfand-Pinsker compress-forward: p(u|y2) must not condition on x1 and
/// the map sees only (u, y2).
struct WitnessGPCF {
    Pmf p_x1;
    CondPmf p_u_given_y2;      // input axes (y2), output U
    DeterministicMap relay_map;  // input axes (U, y2), output x2
    const Alphabet& u_alphabet() const { return p_u_given_y2.output_axis(); }
};

/// Binned form of GP compress-forward with an explicit description variable.
struct WitnessGPCFBinned {
    Pmf p_x1;
    CondPmf p_u_given_y2;      // input axes (y2), output U
    CondPmf p_yhat_given_y2;   // input axes (y2), output Yhat
    DeterministicMap relay_map;  // input axes (U, Yhat, y2), output x2
    const Alphabet& u_alphabet() const { return p_u_given_y2.output_axis(); }
    const Alphabet& yhat_alphabet() const { return p_yhat_given_y2.output_axis(); }
};

/// Plain compress-forward: X2 independent of everything else.
struct WitnessCF {
    Pmf p_x1;
    Pmf p_x2;
    CondPmf p_yhat_given_y2;  // input axes (y2), output Yhat
    const Alphabet& yhat_alphabet() const { return p_yhat_given_y2.output_axis(); }
};

/// Combined partial decode-forward / compress-forward with GP coding:
/// p(v,x1), p(u|v,y2), map x2(u,v,y2).
struct WitnessGPPDFCF {
    JointPmf p_vx1;            // axes (V, X1)
    CondPmf p_u_given_vy2;     // input axes (v, y2), output U
    DeterministicMap relay_map;  // input axes (U, V, y2), output x2
    const Alphabet& v_alphabet() const { return p_vx1.axes()[0]; }
    const Alphabet& u_alphabet() const { return p_u_given_vy2.output_axis(); }
};

using Witness = std::variant<std::monostate, WitnessDF, WitnessPDF, WitnessCutset, WitnessGPDF,
                             WitnessGPCF, WitnessGPCFBinned, WitnessCF, WitnessGPPDFCF>;

// Joint builders. Axis orders are fixed and documented per builder; the
// bounds evaluators index into these orders.

/// (X1, X2, Y2, Y3): p(x1,x2) p(y2|x1) p(y3|x1,x2,y2)
JointPmf build_joint_df(const NoncausalRelayChannel& ch, const WitnessDF& w);

/// (V, X1, X2, Y2, Y3): p(v,x1,x2) p(y2|x1) p(y3|x1,x2,y2)
JointPmf build_joint_pdf(const NoncausalRelayChannel& ch, const WitnessPDF& w);

/// (X1, Y2, X2, Y3): p(x1) p(y2|x1) p(x2|x1,y2) p(y3|x1,x2,y2)
JointPmf build_joint_cutset(const NoncausalRelayChannel& ch, const WitnessCutset& w);

/// (X1, Y2, U, X2, Y3): p(x1) p(y2|x1) p(u|x1,y2) 1{x2=map(u,x1,y2)} p(y3|x1,x2,y2)
JointPmf build_joint_gp_df(const NoncausalRelayChannel& ch, const WitnessGPDF& w);

/// (X1, Y2, U, X2, Y3): p(x1) p(y2|x1) p(u|y2) 1{x2=map(u,y2)} p(y3|x1,x2,y2)
JointPmf build_joint_gp_cf(const NoncausalRelayChannel& ch, const WitnessGPCF& w);

/// (X1, Y2, U, Yhat, X2, Y3)
JointPmf build_joint_gp_cf_binned(const NoncausalRelayChannel& ch, const WitnessGPCFBinned& w);

/// (X1, Y2, Yhat, X2, Y3): p(x1) p(y2|x1) p(yhat|y2) p(x2) p(y3|x1,x2,y2)
JointPmf build_joint_cf(const NoncausalRelayChannel& ch, const WitnessCF& w);

/// (V, X1, Y2, U, X2, Y3): p(v,x1) p(y2|x1) p(u|v,y2) 1{x2=map(u,v,y2)} p(y3|x1,x2,y2)
JointPmf build_joint_gp_pdf_cf(const NoncausalRelayChannel& ch, const WitnessGPPDFCF& w);

namespace detail {

// Raw builders shared by the typed API above and by the optimizer's fast
// path, so both produce bit-identical tables. `rows` holds the free
// conditional rows in row-major order over the conditioning tuple.
void build_gp_df_raw(const NoncausalRelayChannel& ch, std::span<const double> p_x1,
                     std::span<const double> u_rows, int card_u, std::span<const int> map_table,
                     std::vector<double>& out);
void build_gp_cf_raw(const NoncausalRelayChannel& ch, std::span<const double> p_x1,
                     std::span<const double> u_rows, int card_u, std::span<const int> map_table,
                     std::vector<double>& out);
void build_gp_cf_binned_raw(const NoncausalRelayChannel& ch, std::span<const double> p_x1,
                            std::span<const double> u_rows, int card_u,
                            std::span<const double> yhat_rows, int card_yhat,
                            std::span<const int> map_table, std::vector<double>& out);
void build_cf_raw(const NoncausalRelayChannel& ch, std::span<const double> p_x1,
                  std::span<const double> p_x2, std::span<const double> yhat_rows, int card_yhat,
                  std::vector<double>& out);
void build_df_raw(const NoncausalRelayChannel& ch, std::span<const double> p_x1x2,
                  std::vector<double>& out);
void build_pdf_raw(const NoncausalRelayChannel& ch, std::span<const double> p_vx1x2, int card_v,
                   std::vector<double>& out);
void build_cutset_raw(const NoncausalRelayChannel& ch, std::span<const double> p_x1,
                      std::span<const double> x2_rows, std::vector<double>& out);
void build_gp_pdf_cf_raw(const NoncausalRelayChannel& ch, std::span<const double> p_vx1, int card_v,
                         std::span<const double> u_rows, int card_u, std::span<const int> map_table,
                         std::vector<double>& out);

}  // namespace detail

}  // namespace relaycap

#endif
