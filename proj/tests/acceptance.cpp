// Acceptance suite: one pass/fail line per criterion, exit code = number of
// failed criteria. Tolerances are pinned here, in code.

#include <cmath>
#include <cstdio>
#include <random>
#include <vector>

#include "relaycap/channel_io.hpp"
#include "relaycap/info.hpp"
#include "relaycap/embeddings.hpp"
#include "relaycap/mc_sim.hpp"
#include "relaycap/optimizer.hpp"
#include "oracle.hpp"
#include "test_support.hpp"

using namespace relaycap;

namespace {

int g_failures = 0;

void report(int index, const char* name, bool ok, const std::string& detail) {
    std::printf("[%d/8] %-28s %s  %s\n", index, name, ok ? "PASS" : "FAIL", detail.c_str());
    std::fflush(stdout);
    if (!ok) ++g_failures;
}

std::string fmt(double v) { return format_fixed6(v); }

double value_of(const std::vector<BoundResult>& rs, BoundKind k) {
    for (const auto& r : rs)
        if (r.kind == k) return r.value;
    throw std::logic_error("missing bound kind in results");
}

}  // namespace

// ---------------------------------------------------------------------------

static double g_bec_df, g_bec_gpdf, g_bsc_cutset, g_bsc_nub;

void criterion1_example1() {
    SearchConfig cfg;  // defaults
    auto bec = example_bec_channel();
    double df = maximize(bec, BoundKind::DF, cfg).value;
    double gpdf = maximize(bec, BoundKind::GP_DF, cfg).value;
    double cutset = maximize(bec, BoundKind::CUTSET, cfg).value;
    double cap = maximize(bec, BoundKind::DEGRADED_CAPACITY, cfg).value;
    g_bec_df = df;
    g_bec_gpdf = gpdf;

    bool ok = std::abs(df - 0.3219) <= 1e-3 && std::abs(gpdf - 0.5) <= 1e-3 &&
              std::abs(cutset - 0.5) <= 1e-3 && std::abs(cap - 0.5) <= 1e-3;
    report(1, "erasure example numbers", ok,
           "df=" + fmt(df) + " gp-df=" + fmt(gpdf) + " cutset=" + fmt(cutset) + " capacity=" + fmt(cap));
}

void criterion2_example2() {
    SearchConfig cfg;  // defaults
    auto bsc = example_bsc_channel(0.2, 0.1, 0.55);
    double df = maximize(bsc, BoundKind::DF, cfg).value;
    double cutset = maximize(bsc, BoundKind::CUTSET, cfg).value;
    BoundResult nub = maximize(bsc, BoundKind::NUB, cfg);
    double gpdf = maximize(bsc, BoundKind::GP_DF, cfg).value;
    auto analytic = bsc_example_capacity(0.2, 0.1, 0.55);
    g_bsc_cutset = cutset;
    g_bsc_nub = nub.value;

    bool values_ok = std::abs(df - 0.2203) <= 1e-3 && std::abs(cutset - 0.2566) <= 1e-3 &&
                     std::abs(nub.value - 0.2453) <= 1e-3 && std::abs(gpdf - 0.2453) <= 1e-3 &&
                     std::abs(analytic.value - 0.2453) <= 5e-5;

    // Witness form: u fair and independent of (x1, y2), relay rule
    // x2 = u xor y2 up to relabeling of u.
    const auto& w = std::get<WitnessGPDF>(nub.witness);
    bool direct_form = true, flipped_form = true;
    for (int u = 0; u < 2; ++u)
        for (int a = 0; a < 2; ++a)
            for (int c = 0; c < 2; ++c) {
                int got = w.relay_map.table[static_cast<std::size_t>((u * 2 + a) * 2 + c)];
                direct_form = direct_form && got == (u ^ c);
                flipped_form = flipped_form && got == (1 ^ u ^ c);
            }
    bool witness_ok = direct_form || flipped_form;
    for (std::size_t r = 0; r < 4; ++r)
        witness_ok = witness_ok && std::abs(w.p_u_given_x1y2.row(r)[0] - 0.5) <= 2e-2;

    report(2, "cascade example numbers", values_ok && witness_ok,
           "df=" + fmt(df) + " cutset=" + fmt(cutset) + " nub=" + fmt(nub.value) + " gp-df=" + fmt(gpdf) +
               " analytic=" + fmt(analytic.value) + (witness_ok ? " witness=u^y2" : " witness=OTHER"));
}

void criterion3_separations() {
    double sep1 = g_bec_gpdf - g_bec_df;
    double sep2 = g_bsc_cutset - g_bsc_nub;
    bool ok = sep1 >= 0.15 && sep2 >= 0.009;
    report(3, "strict separations", ok,
           "gp-df - df = " + fmt(sep1) + " (>= 0.15), cutset - nub = " + fmt(sep2) + " (>= 0.009)");
}

void criterion4_gp_cf_equivalence() {
    SearchConfig cfg;
    cfg.grid_resolution = 6;
    cfg.card_u = 2;
    cfg.card_yhat = 2;
    double worst = 0.0;
    bool ok = true;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        auto ch = random_binary_channel(seed);
        BoundResult gp_cf = maximize(ch, BoundKind::GP_CF, cfg);
        std::vector<Witness> seeds;
        seeds.push_back(
            embed_gp_cf_in_gp_cf_binned(ch, std::get<WitnessGPCF>(gp_cf.witness), cfg.card_u));
        BoundResult binned = maximize(ch, BoundKind::GP_CF_BINNED, cfg, seeds);
        double diff = std::abs(gp_cf.value - binned.value);
        worst = std::max(worst, diff);
        ok = ok && diff <= 2e-3;
    }
    report(4, "binned form equivalence", ok, "max |gp-cf - binned| = " + fmt(worst) + " over 20 channels (<= 0.002)");
}

void criterion5_reductions() {
    std::mt19937_64 rng(555);
    double worst = 0.0;
    auto track = [&](double a, double b) { worst = std::max(worst, std::abs(a - b)); };

    for (int t = 0; t < 50; ++t) {
        auto ch = random_binary_channel(1000 + static_cast<std::uint64_t>(t));

        auto wdf = testsupport::random_df_witness(rng, ch);
        track(df_objective(ch, wdf).value, gp_df_objective(ch, embed_df_in_gp_df(ch, wdf)).value);

        auto wcf = testsupport::random_gp_cf_witness(rng, ch, 2);
        track(gp_cf_objective(ch, wcf).value,
              gp_pdf_cf_objective(ch, embed_gp_cf_in_gp_pdf_cf(ch, wcf)).value);

        auto wpdf = testsupport::random_markov_pdf_witness(rng, ch, 2);
        track(pdf_objective(ch, wpdf).value,
              gp_pdf_cf_objective(ch, embed_pdf_in_gp_pdf_cf(ch, wpdf)).value);

        auto chd = random_degraded_binary_channel(2000 + static_cast<std::uint64_t>(t));
        auto wgp = testsupport::random_gp_df_witness(rng, chd, 2);
        track(nub_objective(chd, wgp).value, gp_df_objective(chd, wgp).value);
    }
    bool ok = worst <= 1e-12;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3e", worst);
    report(5, "evaluator reductions", ok, std::string("max deviation ") + buf + " over 4x50 witnesses (<= 1e-12)");
}

void criterion6_ordering() {
    SearchConfig cfg;
    cfg.grid_resolution = 6;

    struct ChannelCase {
        std::string name;
        NoncausalRelayChannel ch;
        bool degraded;
    };
    std::vector<ChannelCase> cases;
    cases.push_back({"bec", example_bec_channel(), true});
    cases.push_back({"bsc", example_bsc_channel(0.2, 0.1, 0.55), true});
    for (std::uint64_t s : {1, 2, 3, 4})
        cases.push_back({"rand" + std::to_string(s), random_binary_channel(s), false});
    for (std::uint64_t s : {5, 6})
        cases.push_back({"deg" + std::to_string(s), random_degraded_binary_channel(s), true});

    bool ok = true;
    std::string detail;
    for (const auto& c : cases) {
        auto rs = maximize_all(c.ch, cfg);
        double df = value_of(rs, BoundKind::DF), gpdf = value_of(rs, BoundKind::GP_DF);
        double gpcf = value_of(rs, BoundKind::GP_CF), gppdfcf = value_of(rs, BoundKind::GP_PDF_CF);
        double nub = value_of(rs, BoundKind::NUB), cutset = value_of(rs, BoundKind::CUTSET);
        bool here = df <= gpdf + 1e-6 && gpcf <= gppdfcf + 1e-6 && nub <= cutset + 1e-6;
        if (c.degraded)
            for (BoundKind k : {BoundKind::DF, BoundKind::PDF, BoundKind::CF, BoundKind::GP_CF,
                                BoundKind::GP_CF_BINNED, BoundKind::GP_DF, BoundKind::GP_PDF_CF})
                here = here && value_of(rs, k) <= nub + 1e-3;
        if (!here) detail += " " + c.name + "!";
        ok = ok && here;
    }
    report(6, "optimizer order relations", ok,
           detail.empty() ? "8 channels, all relations hold" : "violations at:" + detail);
}

void criterion7_simulation_trend() {
    auto ch = example_bec_channel();
    auto w = testsupport::bec_capacity_witness(ch);

    SimParams p;
    p.rate_r = 0.35;
    p.rate_rtilde = 0.7;
    p.eps_relay = 0.2;
    p.eps_decoder = 0.3;
    p.trials = 2000;
    p.seed = 20260810;

    double pe[3];
    int idx = 0;
    for (int n : {8, 12, 16}) {
        p.n = n;
        pe[idx++] = simulate_gp_df(ch, w, p).p_err;
    }

    p.n = 16;
    p.rate_r = 0.9;
    p.mem_cap = std::int64_t{1} << 33;
    double pe_high = simulate_gp_df(ch, w, p).p_err;

    bool trend_ok = pe[2] < pe[1] && pe[1] < pe[0];
    bool high_ok = pe_high > 0.5;
    report(7, "simulation trend", trend_ok && high_ok,
           "p_err(n=8,12,16) = " + fmt(pe[0]) + ", " + fmt(pe[1]) + ", " + fmt(pe[2]) +
               " (decrease " + (trend_ok ? "holds" : "FAILS") + "); p_err(R=0.9) = " + fmt(pe_high) +
               " (> 0.5 " + (high_ok ? "holds" : "FAILS") + ")");
    if (!trend_ok) {
        // Context: R + R~ = 1.05 exceeds I(X1,U;Y3) = 0.811 at this witness,
        // so decoder confusion grows with n, and the tight relay slack makes
        // relay typicality rarer as n grows through 8..16. At admissible
        // rates the decrease shows; measured here for reference.
        SimParams q = p;
        q.rate_r = 0.35;
        q.rate_rtilde = 0.4;
        q.eps_relay = 0.8;
        q.eps_decoder = 0.9;
        q.mem_cap = SimParams{}.mem_cap;
        std::string line = "      note: admissible rates (R=0.35, R~=0.4, eps 0.8/0.9): p_err =";
        for (int n : {8, 16, 24}) {
            q.n = n;
            line += " " + fmt(simulate_gp_df(ch, w, q).p_err);
        }
        std::printf("%s (n = 8, 16, 24)\n", line.c_str());
    }
}

void criterion8_oracle_agreement() {
    std::mt19937_64 rng(888);
    double worst = 0.0;
    for (int t = 0; t < 100; ++t) {
        int naxes = 2 + static_cast<int>(rng() % 3);
        std::vector<Alphabet> axes;
        int cells = 1;
        for (int k = 0; k < naxes; ++k) {
            int size = 2 + static_cast<int>(rng() % 2);
            axes.emplace_back("a" + std::to_string(k), size);
            cells *= size;
        }
        JointPmf j(axes, testsupport::random_simplex(rng, cells));
        auto table = oracle::from_joint(j);

        for (int k = 0; k < naxes; ++k)
            worst = std::max(worst, std::abs(relaycap::entropy(j, {k}) - oracle::entropy_axes(table, {k})));
        worst = std::max(worst, std::abs(relaycap::mutual_information(j, {0}, {1}) - oracle::mi(table, {0}, {1})));
        if (naxes >= 3)
            worst = std::max(worst, std::abs(relaycap::conditional_mutual_information(j, {0}, {1}, {2}) -
                                             oracle::cmi(table, {0}, {1}, {2})));
    }
    bool ok = worst <= 1e-12;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3e", worst);
    report(8, "information-measure oracle", ok, std::string("max deviation ") + buf + " over 100 joints (<= 1e-12)");
}

int main() {
    criterion1_example1();
    criterion2_example2();
    criterion3_separations();
    criterion4_gp_cf_equivalence();
    criterion5_reductions();
    criterion6_ordering();
    criterion7_simulation_trend();
    criterion8_oracle_agreement();
    std::printf("%d of 8 criteria failed\n", g_failures);
    return g_failures;
}
