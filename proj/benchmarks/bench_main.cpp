#include <benchmark/benchmark.h>

#include "relaycap/bounds.hpp"
#include "relaycap/mc_sim.hpp"
#include "relaycap/optimizer.hpp"

using namespace relaycap;

namespace {

WitnessGPDF fair_witness(const NoncausalRelayChannel& ch) {
    Alphabet u{"u", 2};
    std::vector<int> table(static_cast<std::size_t>(2 * ch.x1.size * ch.y2.size));
    for (int uu = 0; uu < 2; ++uu)
        for (int a = 0; a < ch.x1.size; ++a)
            for (int c = 0; c < ch.y2.size; ++c)
                table[static_cast<std::size_t>((uu * ch.x1.size + a) * ch.y2.size + c)] = uu;
    return WitnessGPDF{Pmf::uniform(ch.x1), CondPmf::uniform({ch.x1, ch.y2}, u),
                       DeterministicMap({u, ch.x1, ch.y2}, ch.x2, table)};
}

void BM_GpDfObjective(benchmark::State& state) {
    auto ch = example_bsc_channel(0.2, 0.1, 0.55);
    auto w = fair_witness(ch);
    for (auto _ : state) {
        auto v = gp_df_objective(ch, w);
        benchmark::DoNotOptimize(v.value);
    }
}
BENCHMARK(BM_GpDfObjective);

void BM_BuildJointGpDf(benchmark::State& state) {
    auto ch = example_bec_channel();
    auto w = fair_witness(ch);
    for (auto _ : state) {
        auto j = build_joint_gp_df(ch, w);
        benchmark::DoNotOptimize(j.probs().data());
    }
}
BENCHMARK(BM_BuildJointGpDf);

void BM_MaximizeDf(benchmark::State& state) {
    auto ch = example_bsc_channel(0.2, 0.1, 0.55);
    SearchConfig cfg;
    cfg.grid_resolution = static_cast<int>(state.range(0));
    cfg.threads = 1;
    for (auto _ : state) {
        auto r = maximize(ch, BoundKind::DF, cfg);
        benchmark::DoNotOptimize(r.value);
    }
}
BENCHMARK(BM_MaximizeDf)->Arg(4)->Arg(8);

void BM_SimulateTrials(benchmark::State& state) {
    auto ch = example_bec_channel();
    Alphabet u{"u", 2};
    std::vector<double> u_rows = {0.5, 0.5, 0.5, 0.5, 0, 1, 0.5, 0.5, 0.5, 0.5, 0, 1};
    std::vector<int> table(12);
    for (int uu = 0; uu < 2; ++uu)
        for (int k = 0; k < 6; ++k) table[static_cast<std::size_t>(uu * 6 + k)] = uu;
    WitnessGPDF w{Pmf::uniform(ch.x1), CondPmf({ch.x1, ch.y2}, u, u_rows),
                  DeterministicMap({u, ch.x1, ch.y2}, ch.x2, table)};
    SimParams p;
    p.n = 12;
    p.rate_r = 0.35;
    p.rate_rtilde = 0.4;
    p.eps_relay = 0.8;
    p.eps_decoder = 0.9;
    p.trials = 200;
    p.threads = 1;
    for (auto _ : state) {
        p.seed = static_cast<std::uint64_t>(state.iterations());
        auto e = simulate_gp_df(ch, w, p);
        benchmark::DoNotOptimize(e.p_err);
    }
    state.SetItemsProcessed(state.iterations() * p.trials);
}
BENCHMARK(BM_SimulateTrials);

}  // namespace

BENCHMARK_MAIN();
