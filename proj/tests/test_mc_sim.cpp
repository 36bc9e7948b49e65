#include <doctest.h>

#include <random>

#include "relaycap/mc_sim.hpp"
#include "test_support.hpp"

using namespace relaycap;

namespace {

// Full-support GP-DF witness on the cascade channel: fair u, x2 = u xor y2.
WitnessGPDF bsc_fair_witness(const NoncausalRelayChannel& ch) {
    Alphabet u{"u", 2};
    std::vector<int> table(8);
    for (int uu = 0; uu < 2; ++uu)
        for (int a = 0; a < 2; ++a)
            for (int c = 0; c < 2; ++c) table[static_cast<std::size_t>((uu * 2 + a) * 2 + c)] = uu ^ c;
    return WitnessGPDF{Pmf::uniform(ch.x1), CondPmf::uniform({ch.x1, ch.y2}, u),
                       DeterministicMap({u, ch.x1, ch.y2}, ch.x2, table)};
}

}  // namespace

TEST_CASE("typical") {
    Alphabet a{"a", 2}, b{"b", 2};

    SUBCASE("constant sequence against a point mass") {
        JointPmf j({a}, {0.0, 1.0});
        std::vector<std::vector<int>> seqs = {{1, 1, 1, 1}};
        CHECK(typical(seqs, j, 0.01));
    }
    SUBCASE("zero-probability symbol is never typical") {
        JointPmf j({a}, {0.0, 1.0});
        std::vector<std::vector<int>> seqs = {{1, 1, 0, 1}};
        CHECK_FALSE(typical(seqs, j, 100.0));
    }
    SUBCASE("long iid sample is typical") {
        JointPmf j({a}, {0.7, 0.3});
        std::mt19937_64 rng(99);
        std::vector<int> s(10000);
        for (auto& x : s) x = (static_cast<double>(rng() >> 11) * 0x1.0p-53) < 0.3 ? 1 : 0;
        std::vector<std::vector<int>> seqs = {s};
        CHECK(typical(seqs, j, 0.1));
    }
    SUBCASE("pair test") {
        JointPmf j({a, b}, {0.5, 0.0, 0.0, 0.5});
        std::vector<std::vector<int>> good = {{0, 1, 0, 1}, {0, 1, 0, 1}};
        std::vector<std::vector<int>> bad = {{0, 1, 0, 1}, {1, 1, 0, 1}};
        CHECK(typical(good, j, 0.1));
        CHECK_FALSE(typical(bad, j, 0.5));
    }
    SUBCASE("length mismatch and axis mismatch rejected") {
        JointPmf j({a, b}, {0.5, 0.0, 0.0, 0.5});
        std::vector<std::vector<int>> bad_len = {{0, 1}, {0, 1, 0}};
        CHECK_THROWS_AS(typical(bad_len, j, 0.1), std::invalid_argument);
        std::vector<std::vector<int>> bad_count = {{0, 1}};
        CHECK_THROWS_AS(typical(bad_count, j, 0.1), std::invalid_argument);
    }
}

TEST_CASE("codebook statistics") {
    auto ch = example_bec_channel();
    auto w = testsupport::bec_capacity_witness(ch);
    GPDFCodebook code(ch, w, 400, 3, 2, 1234);
    REQUIRE(code.num_messages() == 8);
    REQUIRE(code.num_u_per_message() == 4);

    // x1 rows i.i.d. from p(x1) = uniform.
    std::int64_t ones = 0, total = 0;
    for (std::int64_t m = 0; m < code.num_messages(); ++m)
        for (int i = 0; i < code.length(); ++i, ++total) ones += code.x1(m, i);
    double f1 = static_cast<double>(ones) / static_cast<double>(total);
    CHECK(std::abs(f1 - 0.5) < 0.03);

    // u symbols conditionally i.i.d. from the induced p(u|x1): here
    // p(u=1|x1) = 3/4 for either x1 symbol.
    std::int64_t uones = 0, utotal = 0;
    for (std::int64_t m = 0; m < code.num_messages(); ++m)
        for (std::int64_t l = 0; l < code.num_u_per_message(); ++l)
            for (int i = 0; i < code.length(); ++i, ++utotal) uones += code.u(m, l, i);
    double fu = static_cast<double>(uones) / static_cast<double>(utotal);
    CHECK(std::abs(fu - 0.75) < 0.02);

    // deterministic in the trial seed
    GPDFCodebook code2(ch, w, 400, 3, 2, 1234);
    CHECK(code2.u(5, 3, 17) == code.u(5, 3, 17));
    CHECK(std::equal(code.x1_row(2).begin(), code.x1_row(2).end(), code2.x1_row(2).begin()));
}

TEST_CASE("simulate_gp_df basics") {
    auto ch = example_bec_channel();
    auto w = testsupport::bec_capacity_witness(ch);

    SUBCASE("validation") {
        SimParams p;
        p.trials = 0;
        CHECK_THROWS_AS(simulate_gp_df(ch, w, p), std::invalid_argument);
        p = SimParams{};
        p.eps_relay = 0.3;
        p.eps_decoder = 0.2;
        CHECK_THROWS_AS(simulate_gp_df(ch, w, p), std::invalid_argument);
        p = SimParams{};
        p.n = 16;
        p.rate_r = 0.9;
        p.rate_rtilde = 0.7;  // codebook 2^31 symbols, over the default cap
        CHECK_THROWS_AS(simulate_gp_df(ch, w, p), std::invalid_argument);
    }

    SUBCASE("single message decodes every time") {
        SimParams p;
        p.n = 12;
        p.rate_r = 0.0;  // one message
        p.rate_rtilde = 0.7;
        p.eps_relay = 7.0;
        p.eps_decoder = 8.0;
        p.trials = 500;
        p.seed = 3;
        auto e = simulate_gp_df(ch, w, p);
        CHECK(e.errors == 0);
        CHECK(e.p_err == 0.0);
    }

    SUBCASE("ci halfwidth formula is exact") {
        SimParams p;
        p.n = 8;
        p.rate_r = 0.35;
        p.rate_rtilde = 0.4;
        p.eps_relay = 0.8;
        p.eps_decoder = 0.9;
        p.trials = 400;
        p.seed = 5;
        auto e = simulate_gp_df(ch, w, p);
        CHECK(e.p_err >= 0.0);
        CHECK(e.p_err <= 1.0);
        CHECK(e.p_err == static_cast<double>(e.errors) / 400.0);
        CHECK(e.ci_halfwidth == 1.96 * std::sqrt(e.p_err * (1.0 - e.p_err) / 400.0));
        CHECK(e.relay_decode_failures <= e.trials);
        CHECK(e.decoder_failures <= e.trials);
    }

    SUBCASE("bit-identical under a fixed seed") {
        SimParams p;
        p.n = 10;
        p.rate_r = 0.3;
        p.rate_rtilde = 0.4;
        p.eps_relay = 0.8;
        p.eps_decoder = 0.9;
        p.trials = 300;
        p.seed = 11;
        auto a = simulate_gp_df(ch, w, p);
        auto b = simulate_gp_df(ch, w, p);
        CHECK(a.errors == b.errors);
        CHECK(a.relay_decode_failures == b.relay_decode_failures);
        CHECK(a.multicoding_failures == b.multicoding_failures);
        CHECK(a.decoder_failures == b.decoder_failures);
        CHECK(a.p_err == b.p_err);
    }
}

TEST_CASE("degenerate slack makes every full-support sequence typical") {
    // On a full-support witness joint, enormous slack turns every decoder
    // test positive, so uniqueness fails whenever there are >= 2 messages.
    auto ch = example_bsc_channel(0.2, 0.1, 0.55);
    auto w = bsc_fair_witness(ch);
    SimParams p;
    p.n = 8;
    p.rate_r = 0.25;
    p.rate_rtilde = 0.25;
    p.eps_relay = 11.0;
    p.eps_decoder = 12.0;
    p.trials = 300;
    p.seed = 17;
    auto e = simulate_gp_df(ch, w, p);
    CHECK(e.decoder_failures == e.trials);
    CHECK(e.p_err == 1.0);
}

TEST_CASE("error rate trends") {
    auto ch = example_bec_channel();
    auto w = testsupport::bec_capacity_witness(ch);

    SUBCASE("blocklength trend at admissible rates") {
        // R + Rt = 0.75 stays below I(X1,U;Y3) = 0.811 and Rt = 0.4 exceeds
        // I(U;Y2|X1) = 0.311, so the scheme works and longer blocks decode
        // better.
        SimParams p;
        p.rate_r = 0.35;
        p.rate_rtilde = 0.4;
        p.eps_relay = 0.8;
        p.eps_decoder = 0.9;
        p.trials = 1000;
        p.seed = 20260810;
        double prev = 1.1;
        for (int n : {8, 16, 24}) {
            p.n = n;
            auto e = simulate_gp_df(ch, w, p);
            CHECK(e.p_err < prev);
            prev = e.p_err;
        }
    }

    SUBCASE("relay failures decrease with blocklength") {
        SimParams p;
        p.rate_r = 0.35;
        p.rate_rtilde = 0.4;
        p.eps_relay = 0.8;
        p.eps_decoder = 0.9;
        p.trials = 1000;
        p.seed = 20260810;
        std::int64_t prev = p.trials + 1;
        for (int n : {8, 16, 24}) {
            p.n = n;
            auto e = simulate_gp_df(ch, w, p);
            CHECK(e.relay_decode_failures < prev);
            prev = e.relay_decode_failures;
        }
    }
}

TEST_CASE("sweep") {
    auto ch = example_bec_channel();
    auto w = testsupport::bec_capacity_witness(ch);
    SimParams base;
    base.rate_rtilde = 0.4;
    base.eps_relay = 0.8;
    base.eps_decoder = 0.9;
    base.trials = 300;
    base.seed = 7;

    SUBCASE("single cell equals simulate_gp_df with the derived seed") {
        auto cells = sweep(ch, w, base, {12}, {0.3});
        REQUIRE(cells.size() == 1);
        SimParams p = base;
        p.n = 12;
        p.rate_r = 0.3;
        p.seed = detail::sim_mix(base.seed ^ detail::sim_mix(12) ^
                                 detail::sim_mix(std::bit_cast<std::uint64_t>(0.3)));
        auto direct = simulate_gp_df(ch, w, p);
        CHECK(cells[0].estimate.errors == direct.errors);
        CHECK(cells[0].estimate.relay_decode_failures == direct.relay_decode_failures);
    }

    SUBCASE("p_err non-decreasing in rate up to ci noise") {
        auto cells = sweep(ch, w, base, {16}, {0.2, 0.35, 0.6, 0.9});
        for (std::size_t i = 1; i < cells.size(); ++i)
            CHECK(cells[i].estimate.p_err + cells[i].estimate.ci_halfwidth +
                      cells[i - 1].estimate.ci_halfwidth >=
                  cells[i - 1].estimate.p_err);
    }

    SUBCASE("repeat run is bit-identical") {
        auto a = sweep(ch, w, base, {8, 12}, {0.3, 0.5});
        auto b = sweep(ch, w, base, {8, 12}, {0.3, 0.5});
        REQUIRE(a.size() == b.size());
        for (std::size_t i = 0; i < a.size(); ++i) {
            CHECK(a[i].estimate.errors == b[i].estimate.errors);
            CHECK(a[i].estimate.p_err == b[i].estimate.p_err);
        }
    }
}

TEST_CASE("rate_bits guards against float ties") {
    CHECK(detail::rate_bits(8, 0.35) == 3);  // 2.8 rounds up
    CHECK(detail::rate_bits(16, 0.5) == 8);  // exact products stay put
    CHECK(detail::rate_bits(12, 0.0) == 0);
    CHECK(detail::rate_bits(10, 0.3) == 3);
}
