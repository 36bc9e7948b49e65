#include "relaycap/witness.hpp"

namespace relaycap {

namespace detail {

namespace {

// Pointer into p(y3 | x1=a, x2=b, y2=c).
inline const double* direct_row(const NoncausalRelayChannel& ch, int a, int b, int c) {
    const int nx2 = ch.x2.size, ny2 = ch.y2.size, ny3 = ch.y3.size;
    std::size_t r = (static_cast<std::size_t>(a) * nx2 + b) * ny2 + c;
    return ch.direct.probs().data() + r * static_cast<std::size_t>(ny3);
}

inline const double* relay_row(const NoncausalRelayChannel& ch, int a) {
    return ch.sender_to_relay.probs().data() + static_cast<std::size_t>(a) * ch.y2.size;
}

}  // namespace

void build_df_raw(const NoncausalRelayChannel& ch, std::span<const double> p_x1x2,
                  std::vector<double>& out) {
    const int nx1 = ch.x1.size, nx2 = ch.x2.size, ny2 = ch.y2.size, ny3 = ch.y3.size;
    out.assign(static_cast<std::size_t>(nx1) * nx2 * ny2 * ny3, 0.0);
    std::size_t idx = 0;
    for (int a = 0; a < nx1; ++a)
        for (int b = 0; b < nx2; ++b) {
            double pj = p_x1x2[static_cast<std::size_t>(a) * nx2 + b];
            for (int c = 0; c < ny2; ++c) {
                double base = pj * relay_row(ch, a)[c];
                const double* d = direct_row(ch, a, b, c);
                for (int e = 0; e < ny3; ++e) out[idx++] = base * d[e];
            }
        }
}

void build_pdf_raw(const NoncausalRelayChannel& ch, std::span<const double> p_vx1x2, int card_v,
                   std::vector<double>& out) {
    const int nx1 = ch.x1.size, nx2 = ch.x2.size, ny2 = ch.y2.size, ny3 = ch.y3.size;
    out.assign(static_cast<std::size_t>(card_v) * nx1 * nx2 * ny2 * ny3, 0.0);
    std::size_t idx = 0;
    for (int v = 0; v < card_v; ++v)
        for (int a = 0; a < nx1; ++a)
            for (int b = 0; b < nx2; ++b) {
                double pj = p_vx1x2[(static_cast<std::size_t>(v) * nx1 + a) * nx2 + b];
                for (int c = 0; c < ny2; ++c) {
                    double base = pj * relay_row(ch, a)[c];
                    const double* d = direct_row(ch, a, b, c);
                    for (int e = 0; e < ny3; ++e) out[idx++] = base * d[e];
                }
            }
}

void build_cutset_raw(const NoncausalRelayChannel& ch, std::span<const double> p_x1,
                      std::span<const double> x2_rows, std::vector<double>& out) {
    const int nx1 = ch.x1.size, nx2 = ch.x2.size, ny2 = ch.y2.size, ny3 = ch.y3.size;
    out.assign(static_cast<std::size_t>(nx1) * ny2 * nx2 * ny3, 0.0);
    std::size_t idx = 0;
    for (int a = 0; a < nx1; ++a)
        for (int c = 0; c < ny2; ++c) {
            double pa = p_x1[static_cast<std::size_t>(a)] * relay_row(ch, a)[c];
            const double* x2row = x2_rows.data() + (static_cast<std::size_t>(a) * ny2 + c) * nx2;
            for (int b = 0; b < nx2; ++b) {
                double base = pa * x2row[b];
                const double* d = direct_row(ch, a, b, c);
                for (int e = 0; e < ny3; ++e) out[idx++] = base * d[e];
            }
        }
}

void build_gp_df_raw(const NoncausalRelayChannel& ch, std::span<const double> p_x1,
                     std::span<const double> u_rows, int card_u, std::span<const int> map_table,
                     std::vector<double>& out) {
    const int nx1 = ch.x1.size, nx2 = ch.x2.size, ny2 = ch.y2.size, ny3 = ch.y3.size;
    out.assign(static_cast<std::size_t>(nx1) * ny2 * card_u * nx2 * ny3, 0.0);
    for (int a = 0; a < nx1; ++a)
        for (int c = 0; c < ny2; ++c) {
            double pa = p_x1[static_cast<std::size_t>(a)] * relay_row(ch, a)[c];
            const double* urow = u_rows.data() + (static_cast<std::size_t>(a) * ny2 + c) * card_u;
            for (int u = 0; u < card_u; ++u) {
                double base = pa * urow[u];
                int b = map_table[(static_cast<std::size_t>(u) * nx1 + a) * ny2 + c];
                const double* d = direct_row(ch, a, b, c);
                std::size_t idx = (((static_cast<std::size_t>(a) * ny2 + c) * card_u + u) * nx2 + b) * ny3;
                for (int e = 0; e < ny3; ++e) out[idx + e] = base * d[e];
            }
        }
}

void build_gp_cf_raw(const NoncausalRelayChannel& ch, std::span<const double> p_x1,
                     std::span<const double> u_rows, int card_u, std::span<const int> map_table,
                     std::vector<double>& out) {
    const int nx1 = ch.x1.size, nx2 = ch.x2.size, ny2 = ch.y2.size, ny3 = ch.y3.size;
    out.assign(static_cast<std::size_t>(nx1) * ny2 * card_u * nx2 * ny3, 0.0);
    for (int a = 0; a < nx1; ++a)
        for (int c = 0; c < ny2; ++c) {
            double pa = p_x1[static_cast<std::size_t>(a)] * relay_row(ch, a)[c];
            const double* urow = u_rows.data() + static_cast<std::size_t>(c) * card_u;
            for (int u = 0; u < card_u; ++u) {
                double base = pa * urow[u];
                int b = map_table[static_cast<std::size_t>(u) * ny2 + c];
                const double* d = direct_row(ch, a, b, c);
                std::size_t idx = (((static_cast<std::size_t>(a) * ny2 + c) * card_u + u) * nx2 + b) * ny3;
                for (int e = 0; e < ny3; ++e) out[idx + e] = base * d[e];
            }
        }
}

void build_gp_cf_binned_raw(const NoncausalRelayChannel& ch, std::span<const double> p_x1,
                            std::span<const double> u_rows, int card_u,
                            std::span<const double> yhat_rows, int card_yhat,
                            std::span<const int> map_table, std::vector<double>& out) {
    const int nx1 = ch.x1.size, nx2 = ch.x2.size, ny2 = ch.y2.size, ny3 = ch.y3.size;
    out.assign(static_cast<std::size_t>(nx1) * ny2 * card_u * card_yhat * nx2 * ny3, 0.0);
    for (int a = 0; a < nx1; ++a)
        for (int c = 0; c < ny2; ++c) {
            double pa = p_x1[static_cast<std::size_t>(a)] * relay_row(ch, a)[c];
            const double* urow = u_rows.data() + static_cast<std::size_t>(c) * card_u;
            const double* hrow = yhat_rows.data() + static_cast<std::size_t>(c) * card_yhat;
            for (int u = 0; u < card_u; ++u)
                for (int h = 0; h < card_yhat; ++h) {
                    double base = pa * urow[u] * hrow[h];
                    int b = map_table[(static_cast<std::size_t>(u) * card_yhat + h) * ny2 + c];
                    const double* d = direct_row(ch, a, b, c);
                    std::size_t idx =
                        ((((static_cast<std::size_t>(a) * ny2 + c) * card_u + u) * card_yhat + h) * nx2 + b) *
                        ny3;
                    for (int e = 0; e < ny3; ++e) out[idx + e] = base * d[e];
                }
        }
}

void build_cf_raw(const NoncausalRelayChannel& ch, std::span<const double> p_x1,
                  std::span<const double> p_x2, std::span<const double> yhat_rows, int card_yhat,
                  std::vector<double>& out) {
    const int nx1 = ch.x1.size, nx2 = ch.x2.size, ny2 = ch.y2.size, ny3 = ch.y3.size;
    out.assign(static_cast<std::size_t>(nx1) * ny2 * card_yhat * nx2 * ny3, 0.0);
    std::size_t idx = 0;
    for (int a = 0; a < nx1; ++a)
        for (int c = 0; c < ny2; ++c) {
            double pa = p_x1[static_cast<std::size_t>(a)] * relay_row(ch, a)[c];
            const double* hrow = yhat_rows.data() + static_cast<std::size_t>(c) * card_yhat;
            for (int h = 0; h < card_yhat; ++h) {
                double ph = pa * hrow[h];
                for (int b = 0; b < nx2; ++b) {
                    double base = ph * p_x2[static_cast<std::size_t>(b)];
                    const double* d = direct_row(ch, a, b, c);
                    for (int e = 0; e < ny3; ++e) out[idx++] = base * d[e];
                }
            }
        }
}

void build_gp_pdf_cf_raw(const NoncausalRelayChannel& ch, std::span<const double> p_vx1, int card_v,
                         std::span<const double> u_rows, int card_u, std::span<const int> map_table,
                         std::vector<double>& out) {
    const int nx1 = ch.x1.size, nx2 = ch.x2.size, ny2 = ch.y2.size, ny3 = ch.y3.size;
    out.assign(static_cast<std::size_t>(card_v) * nx1 * ny2 * card_u * nx2 * ny3, 0.0);
    for (int v = 0; v < card_v; ++v)
        for (int a = 0; a < nx1; ++a) {
            double pva = p_vx1[static_cast<std::size_t>(v) * nx1 + a];
            for (int c = 0; c < ny2; ++c) {
                double pa = pva * relay_row(ch, a)[c];
                const double* urow = u_rows.data() + (static_cast<std::size_t>(v) * ny2 + c) * card_u;
                for (int u = 0; u < card_u; ++u) {
                    double base = pa * urow[u];
                    int b = map_table[(static_cast<std::size_t>(u) * card_v + v) * ny2 + c];
                    const double* d = direct_row(ch, a, b, c);
                    std::size_t idx =
                        ((((static_cast<std::size_t>(v) * nx1 + a) * ny2 + c) * card_u + u) * nx2 + b) * ny3;
                    for (int e = 0; e < ny3; ++e) out[idx + e] = base * d[e];
                }
            }
        }
}

}  // namespace detail

namespace {

void require(bool cond, const char* msg) {
    if (!cond) throw std::invalid_argument(msg);
}

}  // namespace

JointPmf build_joint_df(const NoncausalRelayChannel& ch, const WitnessDF& w) {
    require(w.p_x1x2.axes() == std::vector<Alphabet>{ch.x1, ch.x2}, "build_joint_df: axis mismatch");
    std::vector<double> out;
    detail::build_df_raw(ch, w.p_x1x2.probs(), out);
    return JointPmf({ch.x1, ch.x2, ch.y2, ch.y3}, std::move(out));
}

JointPmf build_joint_pdf(const NoncausalRelayChannel& ch, const WitnessPDF& w) {
    const auto& axes = w.p_vx1x2.axes();
    require(axes.size() == 3 && axes[1] == ch.x1 && axes[2] == ch.x2, "build_joint_pdf: axis mismatch");
    std::vector<double> out;
    detail::build_pdf_raw(ch, w.p_vx1x2.probs(), axes[0].size, out);
    return JointPmf({axes[0], ch.x1, ch.x2, ch.y2, ch.y3}, std::move(out));
}

JointPmf build_joint_cutset(const NoncausalRelayChannel& ch, const WitnessCutset& w) {
    require(w.p_x1.alphabet() == ch.x1, "build_joint_cutset: axis mismatch");
    require(w.p_x2_given_x1y2.input_axes() == std::vector<Alphabet>{ch.x1, ch.y2} &&
                w.p_x2_given_x1y2.output_axis() == ch.x2,
            "build_joint_cutset: axis mismatch");
    std::vector<double> out;
    detail::build_cutset_raw(ch, w.p_x1.probs(), w.p_x2_given_x1y2.probs(), out);
    return JointPmf({ch.x1, ch.y2, ch.x2, ch.y3}, std::move(out));
}

JointPmf build_joint_gp_df(const NoncausalRelayChannel& ch, const WitnessGPDF& w) {
    const Alphabet& u = w.u_alphabet();
    require(w.p_x1.alphabet() == ch.x1, "build_joint_gp_df: axis mismatch");
    require(w.p_u_given_x1y2.input_axes() == std::vector<Alphabet>{ch.x1, ch.y2},
            "build_joint_gp_df: axis mismatch");
    require(w.relay_map.input_axes == std::vector<Alphabet>{u, ch.x1, ch.y2} && w.relay_map.output_axis == ch.x2,
            "build_joint_gp_df: axis mismatch");
    std::vector<double> out;
    detail::build_gp_df_raw(ch, w.p_x1.probs(), w.p_u_given_x1y2.probs(), u.size, w.relay_map.table, out);
    return JointPmf({ch.x1, ch.y2, u, ch.x2, ch.y3}, std::move(out));
}

JointPmf build_joint_gp_cf(const NoncausalRelayChannel& ch, const WitnessGPCF& w) {
    const Alphabet& u = w.u_alphabet();
    require(w.p_x1.alphabet() == ch.x1, "build_joint_gp_cf: axis mismatch");
    require(w.p_u_given_y2.input_axes() == std::vector<Alphabet>{ch.y2},
            "build_joint_gp_cf: witness conditioning must be on y2 only");
    require(w.relay_map.input_axes == std::vector<Alphabet>{u, ch.y2} && w.relay_map.output_axis == ch.x2,
            "build_joint_gp_cf: axis mismatch");
    std::vector<double> out;
    detail::build_gp_cf_raw(ch, w.p_x1.probs(), w.p_u_given_y2.probs(), u.size, w.relay_map.table, out);
    return JointPmf({ch.x1, ch.y2, u, ch.x2, ch.y3}, std::move(out));
}

JointPmf build_joint_gp_cf_binned(const NoncausalRelayChannel& ch, const WitnessGPCFBinned& w) {
    const Alphabet& u = w.u_alphabet();
    const Alphabet& yh = w.yhat_alphabet();
    require(w.p_x1.alphabet() == ch.x1, "build_joint_gp_cf_binned: axis mismatch");
    require(w.p_u_given_y2.input_axes() == std::vector<Alphabet>{ch.y2} &&
                w.p_yhat_given_y2.input_axes() == std::vector<Alphabet>{ch.y2},
            "build_joint_gp_cf_binned: conditionals must condition on y2 only");
    require(w.relay_map.input_axes == std::vector<Alphabet>{u, yh, ch.y2} && w.relay_map.output_axis == ch.x2,
            "build_joint_gp_cf_binned: axis mismatch");
    std::vector<double> out;
    detail::build_gp_cf_binned_raw(ch, w.p_x1.probs(), w.p_u_given_y2.probs(), u.size,
                                   w.p_yhat_given_y2.probs(), yh.size, w.relay_map.table, out);
    return JointPmf({ch.x1, ch.y2, u, yh, ch.x2, ch.y3}, std::move(out));
}

JointPmf build_joint_cf(const NoncausalRelayChannel& ch, const WitnessCF& w) {
    const Alphabet& yh = w.yhat_alphabet();
    require(w.p_x1.alphabet() == ch.x1 && w.p_x2.alphabet() == ch.x2, "build_joint_cf: axis mismatch");
    require(w.p_yhat_given_y2.input_axes() == std::vector<Alphabet>{ch.y2}, "build_joint_cf: axis mismatch");
    std::vector<double> out;
    detail::build_cf_raw(ch, w.p_x1.probs(), w.p_x2.probs(), w.p_yhat_given_y2.probs(), yh.size, out);
    return JointPmf({ch.x1, ch.y2, yh, ch.x2, ch.y3}, std::move(out));
}

JointPmf build_joint_gp_pdf_cf(const NoncausalRelayChannel& ch, const WitnessGPPDFCF& w) {
    const Alphabet& v = w.v_alphabet();
    const Alphabet& u = w.u_alphabet();
    require(w.p_vx1.axes().size() == 2 && w.p_vx1.axes()[1] == ch.x1, "build_joint_gp_pdf_cf: axis mismatch");
    require(w.p_u_given_vy2.input_axes() == std::vector<Alphabet>{v, ch.y2},
            "build_joint_gp_pdf_cf: axis mismatch");
    require(w.relay_map.input_axes == std::vector<Alphabet>{u, v, ch.y2} && w.relay_map.output_axis == ch.x2,
            "build_joint_gp_pdf_cf: axis mismatch");
    std::vector<double> out;
    detail::build_gp_pdf_cf_raw(ch, w.p_vx1.probs(), v.size, w.p_u_given_vy2.probs(), u.size,
                                w.relay_map.table, out);
    return JointPmf({v, ch.x1, ch.y2, u, ch.x2, ch.y3}, std::move(out));
}

}  // namespace relaycap
