#include <doctest.h>

#include <random>

#include "relaycap/channel.hpp"
#include "relaycap/embeddings.hpp"
#include "relaycap/info.hpp"
#include "relaycap/witness.hpp"
#include "oracle.hpp"
#include "test_support.hpp"

using namespace relaycap;
using testsupport::bec_capacity_witness;

TEST_CASE("bec example channel") {
    auto ch = example_bec_channel();
    CHECK(ch.y2.size == 3);
    CHECK(ch.y2.labels == std::vector<std::string>{"0", "1", "e"});

    SUBCASE("degraded at tight tolerance") { CHECK(is_degraded(ch, 1e-12)); }

    SUBCASE("erasure rows") {
        auto r0 = ch.sender_to_relay.row(0);
        CHECK(r0[0] == 0.5);
        CHECK(r0[1] == 0.0);
        CHECK(r0[2] == 0.5);
    }

    SUBCASE("induced relay-to-receiver channel is a Z channel with crossover 1/2") {
        // p(y3|x2) with y2 drawn from uniform x1.
        WitnessDF w{JointPmf({ch.x1, ch.x2}, {0.25, 0.25, 0.25, 0.25})};
        JointPmf j = build_joint_df(ch, w);  // (X1, X2, Y2, Y3)
        JointPmf m = j.marginal({1, 3});
        // p(x2) uniform, so p(y3|x2) = 2 * p(x2, y3).
        CHECK(2 * m.probs()[0] == doctest::Approx(0.5).epsilon(1e-12));  // p(y3=0|x2=0)
        CHECK(2 * m.probs()[1] == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(2 * m.probs()[2] == doctest::Approx(0.0).epsilon(1e-12));  // p(y3=0|x2=1)
        CHECK(2 * m.probs()[3] == doctest::Approx(1.0).epsilon(1e-12));
    }

    SUBCASE("stationary: two calls produce identical tables") {
        auto ch2 = example_bec_channel();
        CHECK(std::equal(ch.sender_to_relay.probs().begin(), ch.sender_to_relay.probs().end(),
                         ch2.sender_to_relay.probs().begin()));
        CHECK(std::equal(ch.direct.probs().begin(), ch.direct.probs().end(), ch2.direct.probs().begin()));
    }
}

TEST_CASE("bsc example channel") {
    SUBCASE("paper parameters are degraded") { CHECK(is_degraded(example_bsc_channel(0.2, 0.1, 0.55), 1e-12)); }

    SUBCASE("noiseless cascade") {
        auto ch = example_bsc_channel(0, 0, 0);
        CHECK(is_degraded(ch, 1e-12));
        int coords[3] = {0, 1, 0};
        CHECK(ch.direct.row_for(coords)[1] == 1.0);
    }

    SUBCASE("p1 = 1/2 erases all information toward the relay") {
        auto ch = example_bsc_channel(0.5, 0.1, 0.55);
        std::mt19937_64 rng(3);
        for (int t = 0; t < 10; ++t) {
            auto px1 = testsupport::random_simplex(rng, 2);
            std::vector<double> tbl;
            for (int a = 0; a < 2; ++a)
                for (int c = 0; c < 2; ++c)
                    tbl.push_back(px1[static_cast<std::size_t>(a)] *
                                  ch.sender_to_relay.row(static_cast<std::size_t>(a))[static_cast<std::size_t>(c)]);
            JointPmf j({ch.x1, ch.y2}, tbl);
            CHECK(mutual_information(j, {0}, {1}) == doctest::Approx(0.0).epsilon(1e-12));
        }
    }

    SUBCASE("perturbed row breaks degradedness") {
        auto ch = example_bsc_channel(0.2, 0.1, 0.55);
        std::vector<double> direct(ch.direct.probs().begin(), ch.direct.probs().end());
        direct[0] -= 0.05;
        direct[1] += 0.05;
        NoncausalRelayChannel bad(ch.x1, ch.x2, ch.y2, ch.y3, ch.sender_to_relay,
                                  CondPmf({ch.x1, ch.x2, ch.y2}, ch.y3, direct));
        CHECK_FALSE(is_degraded(bad, 1e-6));
    }

    SUBCASE("parameters outside [0,1] rejected") {
        CHECK_THROWS_AS(example_bsc_channel(-0.1, 0.1, 0.1), std::domain_error);
        CHECK_THROWS_AS(example_bsc_channel(0.1, 1.2, 0.1), std::domain_error);
    }
}

TEST_CASE("gp-df joint builder") {
    auto ch = example_bec_channel();

    SUBCASE("mass is one") {
        auto w = bec_capacity_witness(ch);
        CHECK(build_joint_gp_df(ch, w).mass() == doctest::Approx(1.0).epsilon(1e-12));
    }

    SUBCASE("paper witness forces Y3 = X2 = U") {
        auto w = bec_capacity_witness(ch);
        JointPmf j = build_joint_gp_df(ch, w);  // (X1, Y2, U, X2, Y3)
        double agree = 0.0;
        auto t = oracle::from_joint(j);
        for (const auto& [idx, p] : t)
            if (idx[2] == idx[3] && idx[3] == idx[4]) agree += p;
        CHECK(agree == doctest::Approx(1.0).epsilon(1e-12));
    }

    SUBCASE("constant u with constant map matches the direct-summation marginal") {
        Alphabet u{"u", 1};
        WitnessGPDF w{Pmf(ch.x1, {0.25, 0.75}),
                      CondPmf::uniform({ch.x1, ch.y2}, u),
                      DeterministicMap({u, ch.x1, ch.y2}, ch.x2, std::vector<int>(6, 0))};
        JointPmf j = build_joint_gp_df(ch, w);
        JointPmf y3 = j.marginal({4});
        // Oracle: p(y3) = sum_{x1,y2} p(x1) p(y2|x1) p(y3|x1, 0, y2)
        double expect1 = 0.0;
        for (int a = 0; a < 2; ++a)
            for (int c = 0; c < 3; ++c) {
                int coords[3] = {a, 0, c};
                expect1 += w.p_x1[a] * ch.sender_to_relay.row(static_cast<std::size_t>(a))[static_cast<std::size_t>(c)] *
                           ch.direct.row_for(coords)[1];
            }
        CHECK(y3.probs()[1] == doctest::Approx(expect1).epsilon(1e-12));
    }

    SUBCASE("axis mismatch rejected") {
        Alphabet u{"u", 2};
        Alphabet wrong{"z", 2};
        CHECK_THROWS_AS(build_joint_gp_df(ch, WitnessGPDF{Pmf::uniform(wrong),
                                                          CondPmf::uniform({ch.x1, ch.y2}, u),
                                                          DeterministicMap({u, ch.x1, ch.y2}, ch.x2,
                                                                           std::vector<int>(12, 0))}),
                        std::invalid_argument);
    }
}

TEST_CASE("builder invariants across kinds") {
    auto bec = example_bec_channel();
    auto bsc = example_bsc_channel(0.2, 0.1, 0.55);
    std::mt19937_64 rng(21);

    for (const auto& ch : {bec, bsc}) {
        const int nx1 = ch.x1.size, ny2 = ch.y2.size;

        // Reference p(x1, y2) for a given input pmf.
        auto x1y2 = [&](const Pmf& px1) {
            std::vector<double> t;
            for (int a = 0; a < nx1; ++a)
                for (int c = 0; c < ny2; ++c)
                    t.push_back(px1[a] * ch.sender_to_relay.row(static_cast<std::size_t>(a))[static_cast<std::size_t>(c)]);
            return t;
        };

        auto check_front_marginal = [&](const JointPmf& j, const Pmf& px1) {
            JointPmf m = j.marginal({0, 1});
            auto expect = x1y2(px1);
            for (std::size_t i = 0; i < expect.size(); ++i)
                CHECK(m.probs()[i] == doctest::Approx(expect[i]).epsilon(1e-12));
        };

        Pmf px1(ch.x1, testsupport::random_simplex(rng, nx1));

        // GP-DF
        auto wgpdf = testsupport::random_gp_df_witness(rng, ch, 2);
        wgpdf.p_x1 = px1;
        JointPmf jd = build_joint_gp_df(ch, wgpdf);
        CHECK(jd.mass() == doctest::Approx(1.0).epsilon(1e-12));
        check_front_marginal(jd, px1);
        // p(x2|u,x1,y2) is 0/1 and matches the map wherever the context has mass
        {
            auto t = oracle::from_joint(jd);
            for (const auto& [idx, p] : t) {
                if (p <= 0.0) continue;
                int expect = wgpdf.relay_map.table[static_cast<std::size_t>((idx[2] * nx1 + idx[0]) * ny2 + idx[1])];
                CHECK(idx[3] == expect);
            }
        }

        // GP-CF
        auto wgpcf = testsupport::random_gp_cf_witness(rng, ch, 2);
        wgpcf.p_x1 = px1;
        JointPmf jc = build_joint_gp_cf(ch, wgpcf);
        CHECK(jc.mass() == doctest::Approx(1.0).epsilon(1e-12));
        check_front_marginal(jc, px1);

        // Cutset
        WitnessCutset wcut{px1, CondPmf({ch.x1, ch.y2}, ch.x2,
                                        testsupport::random_rows(rng, nx1 * ny2, ch.x2.size))};
        JointPmf jcut = build_joint_cutset(ch, wcut);
        CHECK(jcut.mass() == doctest::Approx(1.0).epsilon(1e-12));
        check_front_marginal(jcut, px1);

        // CF
        WitnessCF wcf{px1, Pmf(ch.x2, testsupport::random_simplex(rng, ch.x2.size)),
                      CondPmf({ch.y2}, Alphabet{"yhat", 2}, testsupport::random_rows(rng, ny2, 2))};
        JointPmf jcf = build_joint_cf(ch, wcf);
        CHECK(jcf.mass() == doctest::Approx(1.0).epsilon(1e-12));
        check_front_marginal(jcf, px1);

        // Binned GP-CF
        WitnessGPCFBinned wb{px1, wgpcf.p_u_given_y2,
                             CondPmf({ch.y2}, Alphabet{"yhat", 2}, testsupport::random_rows(rng, ny2, 2)),
                             DeterministicMap({wgpcf.u_alphabet(), Alphabet{"yhat", 2}, ch.y2}, ch.x2,
                                              testsupport::random_map_table(rng, static_cast<std::size_t>(2 * 2 * ny2),
                                                                            ch.x2.size))};
        JointPmf jb = build_joint_gp_cf_binned(ch, wb);
        CHECK(jb.mass() == doctest::Approx(1.0).epsilon(1e-12));
        check_front_marginal(jb, px1);

        // GP-PDF-CF: p(v, x1) must embed the chosen p(x1)
        Alphabet v{"v", 2};
        auto pv = testsupport::random_simplex(rng, 2);
        std::vector<double> pvx1;
        for (int vv = 0; vv < 2; ++vv)
            for (int a = 0; a < nx1; ++a) pvx1.push_back(pv[static_cast<std::size_t>(vv)] * px1[a]);
        Alphabet u{"u", 2};
        WitnessGPPDFCF wp{JointPmf({v, ch.x1}, pvx1),
                          CondPmf({v, ch.y2}, u, testsupport::random_rows(rng, 2 * ny2, 2)),
                          DeterministicMap({u, v, ch.y2}, ch.x2,
                                           testsupport::random_map_table(rng, static_cast<std::size_t>(2 * 2 * ny2),
                                                                         ch.x2.size))};
        JointPmf jp = build_joint_gp_pdf_cf(ch, wp);
        CHECK(jp.mass() == doctest::Approx(1.0).epsilon(1e-12));
        JointPmf mp = jp.marginal({1, 2});
        auto expect = x1y2(px1);
        for (std::size_t i = 0; i < expect.size(); ++i)
            CHECK(mp.probs()[i] == doctest::Approx(expect[i]).epsilon(1e-12));
    }
}

TEST_CASE("gp-df with degenerate u reproduces the df joint") {
    auto ch = example_bsc_channel(0.2, 0.1, 0.55);
    std::mt19937_64 rng(33);
    auto wdf = testsupport::random_df_witness(rng, ch);
    WitnessGPDF embedded = embed_df_in_gp_df(ch, wdf);
    JointPmf jd = build_joint_df(ch, wdf);                // (X1, X2, Y2, Y3)
    JointPmf jg = build_joint_gp_df(ch, embedded);        // (X1, Y2, U=X2copy, X2, Y3)
    // Compare p(x1, x2, y2, y3) from both routes.
    JointPmf m = jg.marginal({0, 3, 1, 4});
    for (std::size_t i = 0; i < jd.probs().size(); ++i)
        CHECK(m.probs()[i] == doctest::Approx(jd.probs()[i]).epsilon(1e-12));
}

TEST_CASE("random channels are reproducible and valid") {
    auto a = random_binary_channel(7);
    auto b = random_binary_channel(7);
    CHECK(std::equal(a.direct.probs().begin(), a.direct.probs().end(), b.direct.probs().begin()));
    auto c = random_binary_channel(8);
    CHECK(!std::equal(a.direct.probs().begin(), a.direct.probs().end(), c.direct.probs().begin()));
    CHECK(is_degraded(random_degraded_binary_channel(9), 1e-12));
}

TEST_CASE("deterministic map validation") {
    Alphabet u{"u", 2}, x2{"x2", 2};
    CHECK_THROWS_AS(DeterministicMap({u}, x2, {0, 2}), std::invalid_argument);
    CHECK_THROWS_AS(DeterministicMap({u}, x2, {0, 1, 0}), std::invalid_argument);
    DeterministicMap m({u}, x2, {1, 0});
    int coords[1] = {0};
    CHECK(m(coords) == 1);
}
