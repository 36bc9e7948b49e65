#include "relaycap/embeddings.hpp"

namespace relaycap {

namespace {

// p(x2|x1) extracted from a joint p(x1,x2); rows with p(x1) = 0 fall back to
// uniform.
std::vector<double> conditional_rows_from_joint(const JointPmf& j) {
    int n0 = j.axes()[0].size, n1 = j.axes()[1].size;
    std::vector<double> rows(static_cast<std::size_t>(n0) * n1);
    for (int a = 0; a < n0; ++a) {
        double pa = 0.0;
        for (int b = 0; b < n1; ++b) pa += j.probs()[static_cast<std::size_t>(a) * n1 + b];
        std::span<double> row(rows.data() + static_cast<std::size_t>(a) * n1, static_cast<std::size_t>(n1));
        if (pa <= 0.0) {
            for (double& x : row) x = 1.0 / n1;
        } else {
            for (int b = 0; b < n1; ++b) row[static_cast<std::size_t>(b)] =
                j.probs()[static_cast<std::size_t>(a) * n1 + b] / pa;
        }
        normalize_exactly(row);
    }
    return rows;
}

}  // namespace

WitnessGPDF embed_df_in_gp_df(const NoncausalRelayChannel& ch, const WitnessDF& w) {
    const int nx1 = ch.x1.size, nx2 = ch.x2.size, ny2 = ch.y2.size;
    Alphabet u{"u", nx2};

    std::vector<double> x2_given_x1 = conditional_rows_from_joint(w.p_x1x2);

    std::vector<double> p_x1(static_cast<std::size_t>(nx1), 0.0);
    for (int a = 0; a < nx1; ++a)
        for (int b = 0; b < nx2; ++b) p_x1[static_cast<std::size_t>(a)] += w.p_x1x2.probs()[static_cast<std::size_t>(a) * nx2 + b];
    normalize_exactly(p_x1);

    // Same row for every y2: U is conditionally independent of Y2 given X1.
    std::vector<double> u_rows;
    u_rows.reserve(static_cast<std::size_t>(nx1) * ny2 * nx2);
    for (int a = 0; a < nx1; ++a)
        for (int c = 0; c < ny2; ++c)
            for (int b = 0; b < nx2; ++b) u_rows.push_back(x2_given_x1[static_cast<std::size_t>(a) * nx2 + b]);

    std::vector<int> map_table(static_cast<std::size_t>(nx2) * nx1 * ny2);
    for (int uu = 0; uu < nx2; ++uu)
        for (int a = 0; a < nx1; ++a)
            for (int c = 0; c < ny2; ++c)
                map_table[(static_cast<std::size_t>(uu) * nx1 + a) * ny2 + c] = uu;

    return WitnessGPDF{Pmf(ch.x1, std::move(p_x1)), CondPmf({ch.x1, ch.y2}, u, std::move(u_rows)),
                       DeterministicMap({u, ch.x1, ch.y2}, ch.x2, std::move(map_table))};
}

WitnessPDF embed_df_in_pdf(const NoncausalRelayChannel& ch, const WitnessDF& w) {
    const int nx1 = ch.x1.size, nx2 = ch.x2.size;
    Alphabet v{"v", nx1};
    std::vector<double> t(static_cast<std::size_t>(nx1) * nx1 * nx2, 0.0);
    for (int a = 0; a < nx1; ++a)
        for (int b = 0; b < nx2; ++b)
            t[(static_cast<std::size_t>(a) * nx1 + a) * nx2 + b] =
                w.p_x1x2.probs()[static_cast<std::size_t>(a) * nx2 + b];
    return WitnessPDF{JointPmf({v, ch.x1, ch.x2}, std::move(t))};
}

WitnessGPPDFCF embed_gp_cf_in_gp_pdf_cf(const NoncausalRelayChannel& ch, const WitnessGPCF& w,
                                        int card_v) {
    if (card_v < 1) throw std::invalid_argument("embed_gp_cf_in_gp_pdf_cf: card_v must be >= 1");
    const int nx1 = ch.x1.size, ny2 = ch.y2.size;
    const Alphabet& u = w.u_alphabet();
    const int nu = u.size;
    Alphabet v{"v", card_v};

    std::vector<double> p_vx1(static_cast<std::size_t>(card_v) * nx1, 0.0);
    for (int a = 0; a < nx1; ++a) p_vx1[static_cast<std::size_t>(a)] = w.p_x1[a];

    std::vector<double> u_rows(static_cast<std::size_t>(card_v) * ny2 * nu);
    for (int vv = 0; vv < card_v; ++vv)
        for (int c = 0; c < ny2; ++c) {
            auto src = w.p_u_given_y2.row(static_cast<std::size_t>(c));
            for (int uu = 0; uu < nu; ++uu)
                u_rows[(static_cast<std::size_t>(vv) * ny2 + c) * nu + uu] = src[static_cast<std::size_t>(uu)];
        }

    std::vector<int> map_table(static_cast<std::size_t>(nu) * card_v * ny2);
    for (int uu = 0; uu < nu; ++uu)
        for (int vv = 0; vv < card_v; ++vv)
            for (int c = 0; c < ny2; ++c)
                map_table[(static_cast<std::size_t>(uu) * card_v + vv) * ny2 + c] =
                    w.relay_map.table[static_cast<std::size_t>(uu) * ny2 + c];

    return WitnessGPPDFCF{JointPmf({v, ch.x1}, std::move(p_vx1)),
                          CondPmf({v, ch.y2}, u, std::move(u_rows)),
                          DeterministicMap({u, v, ch.y2}, ch.x2, std::move(map_table))};
}

WitnessGPPDFCF embed_pdf_in_gp_pdf_cf(const NoncausalRelayChannel& ch, const WitnessPDF& w) {
    const int nx1 = ch.x1.size, nx2 = ch.x2.size, ny2 = ch.y2.size;
    const int nv = w.v_alphabet().size;
    Alphabet v2{"v", nv * nx2};  // v' = (v, x2)
    Alphabet u{"u", 1};

    std::vector<double> p_vx1(static_cast<std::size_t>(nv) * nx2 * nx1, 0.0);
    for (int vv = 0; vv < nv; ++vv)
        for (int a = 0; a < nx1; ++a)
            for (int b = 0; b < nx2; ++b)
                p_vx1[(static_cast<std::size_t>(vv) * nx2 + b) * nx1 + a] =
                    w.p_vx1x2.probs()[(static_cast<std::size_t>(vv) * nx1 + a) * nx2 + b];
    normalize_exactly(p_vx1);

    std::vector<double> u_rows(static_cast<std::size_t>(nv) * nx2 * ny2, 1.0);

    std::vector<int> map_table(static_cast<std::size_t>(nv) * nx2 * ny2);
    for (int vv = 0; vv < nv; ++vv)
        for (int b = 0; b < nx2; ++b)
            for (int c = 0; c < ny2; ++c)
                map_table[(static_cast<std::size_t>(vv) * nx2 + b) * ny2 + c] = b;

    return WitnessGPPDFCF{JointPmf({v2, ch.x1}, std::move(p_vx1)),
                          CondPmf({v2, ch.y2}, u, std::move(u_rows)),
                          DeterministicMap({u, v2, ch.y2}, ch.x2, std::move(map_table))};
}

WitnessGPCFBinned embed_gp_cf_in_gp_cf_binned(const NoncausalRelayChannel& ch, const WitnessGPCF& w,
                                              int card_u) {
    if (card_u < 1) throw std::invalid_argument("embed_gp_cf_in_gp_cf_binned: card_u must be >= 1");
    const int ny2 = ch.y2.size;
    const Alphabet& src_u = w.u_alphabet();
    const int nh = src_u.size;
    Alphabet u{"u", card_u};
    Alphabet yhat{"yhat", nh};

    std::vector<double> u_rows(static_cast<std::size_t>(ny2) * card_u, 0.0);
    for (int c = 0; c < ny2; ++c) u_rows[static_cast<std::size_t>(c) * card_u] = 1.0;

    std::vector<double> h_rows(w.p_u_given_y2.probs().begin(), w.p_u_given_y2.probs().end());

    std::vector<int> map_table(static_cast<std::size_t>(card_u) * nh * ny2);
    for (int uu = 0; uu < card_u; ++uu)
        for (int h = 0; h < nh; ++h)
            for (int c = 0; c < ny2; ++c)
                map_table[(static_cast<std::size_t>(uu) * nh + h) * ny2 + c] =
                    w.relay_map.table[static_cast<std::size_t>(h) * ny2 + c];

    return WitnessGPCFBinned{w.p_x1, CondPmf({ch.y2}, u, std::move(u_rows)),
                             CondPmf({ch.y2}, yhat, std::move(h_rows)),
                             DeterministicMap({u, yhat, ch.y2}, ch.x2, std::move(map_table))};
}

WitnessGPCFBinned embed_cf_in_gp_cf_binned(const NoncausalRelayChannel& ch, const WitnessCF& w) {
    const int nx2 = ch.x2.size, ny2 = ch.y2.size;
    const Alphabet& yh = w.yhat_alphabet();
    Alphabet u{"u", nx2};

    // p(u|y2) = p(x2) for every y2: U independent of Y2.
    std::vector<double> u_rows;
    u_rows.reserve(static_cast<std::size_t>(ny2) * nx2);
    for (int c = 0; c < ny2; ++c)
        for (int b = 0; b < nx2; ++b) u_rows.push_back(w.p_x2[b]);

    std::vector<double> h_rows(w.p_yhat_given_y2.probs().begin(), w.p_yhat_given_y2.probs().end());

    std::vector<int> map_table(static_cast<std::size_t>(nx2) * yh.size * ny2);
    for (int uu = 0; uu < nx2; ++uu)
        for (int h = 0; h < yh.size; ++h)
            for (int c = 0; c < ny2; ++c)
                map_table[(static_cast<std::size_t>(uu) * yh.size + h) * ny2 + c] = uu;

    return WitnessGPCFBinned{w.p_x1, CondPmf({ch.y2}, u, std::move(u_rows)),
                             CondPmf({ch.y2}, yh, std::move(h_rows)),
                             DeterministicMap({u, yh, ch.y2}, ch.x2, std::move(map_table))};
}

WitnessCutset induced_cutset_witness(const NoncausalRelayChannel& ch, const WitnessGPDF& w) {
    const int nx1 = ch.x1.size, nx2 = ch.x2.size, ny2 = ch.y2.size;
    const int nu = w.u_alphabet().size;
    std::vector<double> rows(static_cast<std::size_t>(nx1) * ny2 * nx2, 0.0);
    for (int a = 0; a < nx1; ++a)
        for (int c = 0; c < ny2; ++c) {
            auto urow = w.p_u_given_x1y2.row(static_cast<std::size_t>(a) * ny2 + c);
            for (int uu = 0; uu < nu; ++uu) {
                int b = w.relay_map.table[(static_cast<std::size_t>(uu) * nx1 + a) * ny2 + c];
                rows[(static_cast<std::size_t>(a) * ny2 + c) * nx2 + b] += urow[static_cast<std::size_t>(uu)];
            }
            normalize_exactly(std::span<double>(rows.data() + (static_cast<std::size_t>(a) * ny2 + c) * nx2,
                                                static_cast<std::size_t>(nx2)));
        }
    return WitnessCutset{w.p_x1, CondPmf({ch.x1, ch.y2}, ch.x2, std::move(rows))};
}

}  // namespace relaycap
