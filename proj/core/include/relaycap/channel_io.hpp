#ifndef RELAYCAP_CHANNEL_IO_HPP
#define RELAYCAP_CHANNEL_IO_HPP

#include "relaycap/mc_sim.hpp"
#include "relaycap/optimizer.hpp"

// Text formats: a line-oriented channel description, a key-value witness
// format, and CSV report emission. All numbers are written with shortest
// round-trip precision and a '.' decimal point regardless of locale, so
// formats are bit-exact and diffable.

namespace relaycap {

struct ParseError : std::runtime_error {
    int line;  // 1-based; 0 when not tied to a line
    ParseError(int line_, const std::string& message)
        : std::runtime_error("line " + std::to_string(line_) + ": " + message), line(line_) {}
    explicit ParseError(const std::string& message) : std::runtime_error(message), line(0) {}
};

/// Channel file format ('#' starts a comment, blank lines ignored):
///   alphabet x1 2
///   alphabet x2 2
///   alphabet y2 3 labels 0,1,e
///   alphabet y3 2
///   relay_channel      followed by |X1| rows of |Y2| decimals
///   direct_channel     followed by |X1|*|X2|*|Y2| rows of |Y3| decimals,
///                      rows lexicographic in (x1, x2, y2)
/// Rows are checked to sum to 1 within 1e-9, then renormalized exactly.
NoncausalRelayChannel parse_channel_file(const std::string& text);
std::string serialize_channel(const NoncausalRelayChannel& ch);

/// Key-value witness format, e.g.
///   kind = gp-df
///   card_u = 2
///   p_x1 = 0.5 0.5
///   p_u_given_x1y2[x1=0,y2=e] = 0 1
///   map[u=1,x1=0,y2=e] = 1
std::string serialize_witness(BoundKind kind, const Witness& w);
std::pair<BoundKind, Witness> parse_witness_file(const std::string& text, const NoncausalRelayChannel& ch);

/// FNV-1a 64-bit hash of the raw bytes, as 16 lowercase hex digits.
std::string content_hash_hex(const std::string& bytes);

/// Shortest round-trip decimal text for x.
std::string format_double(double x);
/// Fixed-point text with six decimals (report values).
std::string format_fixed6(double x);

struct ReportRow {
    BoundKind kind;
    double value;        // floored at 0 in the report
    bool converged;
    int card_u, card_v, card_yhat;  // -1 = not applicable
    std::string witness_file;       // empty when not written
    std::string caveat;             // "cardinality" on NUB rows
};

/// CSV with header channel,kind,value,converged,card_u,card_v,card_yhat,
/// witness_file,caveat; values printed with six decimals.
std::string report_csv(const std::string& channel_id, const std::vector<ReportRow>& rows);

/// CSV for simulation sweeps: n,rate,p_err,ci,relay_fail,multicode_fail,decode_fail.
std::string sweep_csv(const std::vector<SweepCell>& cells);

}  // namespace relaycap

#endif
