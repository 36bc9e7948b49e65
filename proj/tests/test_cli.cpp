#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "relaycap/channel_io.hpp"

// End-to-end checks of the installed command surface, driven through the
// real binary.

namespace {

std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

struct RunResult {
    int exit_code;
    std::string out;
};

RunResult run_cli(const std::string& args) {
    std::string out_file = "cli_stdout.tmp";
    std::string cmd = std::string(RELAYCAP_CLI_PATH) + " " + args + " > " + out_file + " 2> cli_stderr.tmp";
    int rc = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
    r.out = slurp(out_file);
    return r;
}

std::string channel_path(const char* name) { return std::string(RELAYCAP_CHANNEL_DIR) + "/" + name; }

}  // namespace

TEST_CASE("bundled channel files match the built-in examples exactly") {
    auto bec = relaycap::parse_channel_file(slurp(channel_path("bec_example.chan")));
    auto ref = relaycap::example_bec_channel();
    CHECK(std::equal(bec.direct.probs().begin(), bec.direct.probs().end(), ref.direct.probs().begin()));
    CHECK(bec.y2.labels == std::vector<std::string>{"0", "1", "e"});

    auto bsc = relaycap::parse_channel_file(slurp(channel_path("bsc_example.chan")));
    auto ref2 = relaycap::example_bsc_channel(0.2, 0.1, 0.55);
    CHECK(std::equal(bsc.direct.probs().begin(), bsc.direct.probs().end(), ref2.direct.probs().begin()));
    CHECK(std::equal(bsc.sender_to_relay.probs().begin(), bsc.sender_to_relay.probs().end(),
                     ref2.sender_to_relay.probs().begin()));
}

TEST_CASE("bounds command emits the expected csv") {
    auto r = run_cli("bounds --channel " + channel_path("bsc_example.chan") +
                     " --kinds df --grid 4 --witness-dir .");
    REQUIRE(r.exit_code == 0);
    std::istringstream is(r.out);
    std::string header, row;
    std::getline(is, header);
    std::getline(is, row);
    CHECK(header == "channel,kind,value,converged,card_u,card_v,card_yhat,witness_file,caveat");
    CHECK(row.find(",df,0.220") != std::string::npos);
    CHECK(row.find(",true,") != std::string::npos);
    CHECK(row.find("df.wit") != std::string::npos);

    // the persisted witness reproduces the reported value
    auto ch = relaycap::parse_channel_file(slurp(channel_path("bsc_example.chan")));
    auto [kind, w] = relaycap::parse_witness_file(slurp("df.wit"), ch);
    double v = relaycap::evaluate(ch, kind, w).value;
    CHECK(std::abs(v - 0.2203) < 1e-3);
    std::remove("df.wit");
}

TEST_CASE("bounds exit codes") {
    CHECK(run_cli("bounds --channel does_not_exist.chan --kinds df").exit_code == 2);
    CHECK(run_cli("bounds --channel " + channel_path("bsc_example.chan") + " --kinds bogus").exit_code == 3);
    CHECK(run_cli("bounds --channel " + channel_path("bsc_example.chan") + " --kinds df --grid 0").exit_code ==
          3);
    // capacity on a non-degraded channel
    CHECK(run_cli("bounds --random-channel 17 --kinds capacity --grid 4").exit_code == 3);
}

TEST_CASE("malformed channel file reports the offending line") {
    std::ofstream f("broken.chan");
    f << "alphabet x1 2\nalphabet x2 2\nalphabet y2 2\nalphabet y3 2\n"
         "relay_channel\n0.9 0.08\n0.1 0.9\n"
         "direct_channel\n1 0\n0 1\n1 0\n0 1\n1 0\n0 1\n1 0\n0 1\n";
    f.close();
    auto r = run_cli("bounds --channel broken.chan --kinds df");
    CHECK(r.exit_code == 2);
    CHECK(r.out.empty());  // no CSV on failure
    std::string err = slurp("cli_stderr.tmp");
    CHECK(err.find("line 6") != std::string::npos);
    std::remove("broken.chan");
}

TEST_CASE("simulate command") {
    std::string base = "simulate --channel " + channel_path("bec_example.chan") +
                       " --witness-from-bound gp-df --grid 2 --n 8,12 --rate 0.35 --rtilde 0.4"
                       " --eps-relay 0.8 --eps-dec 0.9 --trials 120 --seed 7";
    auto a = run_cli(base);
    REQUIRE(a.exit_code == 0);
    std::istringstream is(a.out);
    std::string header;
    std::getline(is, header);
    CHECK(header == "n,rate,p_err,ci,relay_fail,multicode_fail,decode_fail");
    int rows = 0;
    std::string line;
    while (std::getline(is, line))
        if (!line.empty()) ++rows;
    CHECK(rows == 2);

    SUBCASE("identical bytes on reruns with the same seed") {
        auto b = run_cli(base);
        CHECK(b.exit_code == 0);
        CHECK(a.out == b.out);
    }
    SUBCASE("zero trials rejected") {
        CHECK(run_cli("simulate --channel " + channel_path("bec_example.chan") +
                      " --witness-from-bound gp-df --grid 2 --n 8 --rate 0.3 --trials 0")
                  .exit_code == 3);
    }
    SUBCASE("memory cap violations rejected") {
        CHECK(run_cli("simulate --channel " + channel_path("bec_example.chan") +
                      " --witness-from-bound gp-df --grid 2 --n 16 --rate 0.9 --rtilde 0.7 --trials 10")
                  .exit_code == 3);
    }
}
