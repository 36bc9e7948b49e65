#include "relaycap/channel_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <map>
#include <sstream>

namespace relaycap {

std::string format_double(double x) {
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, p);
}

std::string format_fixed6(double x) {
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::fixed, 6);
    return std::string(buf, p);
}

std::string content_hash_hex(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = digits[h & 0xf];
        h >>= 4;
    }
    return out;
}

namespace {

std::vector<std::string> split_ws(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream is(s);
    std::string tok;
    while (is >> tok) out.push_back(tok);
    return out;
}

std::vector<std::string> split_char(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

std::string strip(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double parse_prob(const std::string& tok, int line) {
    const char* begin = tok.c_str();
    char* end = nullptr;
    double v = std::strtod(begin, &end);
    if (end != begin + tok.size()) throw ParseError(line, "bad number '" + tok + "'");
    return v;
}

struct Lines {
    std::vector<std::pair<int, std::string>> content;  // (line number, stripped text)
};

Lines preprocess(const std::string& text) {
    Lines out;
    int lineno = 0;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        ++lineno;
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = strip(line);
        if (!line.empty()) out.content.emplace_back(lineno, line);
    }
    return out;
}

// Reads `rows` probability rows of `width` entries each starting at
// content[pos]; validates nonnegativity and row sums to `tol` with
// line-numbered errors.
std::vector<double> read_rows(const Lines& lines, std::size_t& pos, std::size_t rows, std::size_t width,
                              const std::string& section, double tol) {
    std::vector<double> out;
    out.reserve(rows * width);
    for (std::size_t r = 0; r < rows; ++r) {
        if (pos >= lines.content.size())
            throw ParseError(section + ": expected " + std::to_string(rows) + " rows, got " +
                             std::to_string(r));
        auto [ln, text] = lines.content[pos++];
        std::vector<std::string> toks = split_ws(text);
        if (toks.size() != width)
            throw ParseError(ln, section + ": expected " + std::to_string(width) + " probabilities, got " +
                                     std::to_string(toks.size()));
        double sum = 0.0;
        for (const auto& t : toks) {
            double v = parse_prob(t, ln);
            if (v < 0.0) throw ParseError(ln, section + ": negative probability");
            out.push_back(v);
            sum += v;
        }
        if (std::abs(sum - 1.0) > tol)
            throw ParseError(ln, section + ": row sums to " + format_double(sum) + ", expected 1");
    }
    return out;
}

}  // namespace

NoncausalRelayChannel parse_channel_file(const std::string& text) {
    Lines lines = preprocess(text);

    std::map<std::string, Alphabet> alphabets;
    std::vector<double> relay_rows, direct_rows;
    bool have_relay = false, have_direct = false;

    std::size_t pos = 0;
    while (pos < lines.content.size()) {
        auto [ln, content] = lines.content[pos];
        std::vector<std::string> toks = split_ws(content);
        const std::string& directive = toks[0];

        if (directive == "alphabet") {
            ++pos;
            if (toks.size() != 3 && !(toks.size() == 5 && toks[3] == "labels"))
                throw ParseError(ln, "alphabet: expected 'alphabet NAME SIZE [labels a,b,...]'");
            const std::string& name = toks[1];
            if (name != "x1" && name != "x2" && name != "y2" && name != "y3")
                throw ParseError(ln, "alphabet: name must be one of x1, x2, y2, y3");
            if (alphabets.count(name)) throw ParseError(ln, "duplicate alphabet '" + name + "'");
            int size = 0;
            auto [p, ec] = std::from_chars(toks[2].data(), toks[2].data() + toks[2].size(), size);
            if (ec != std::errc() || p != toks[2].data() + toks[2].size() || size < 1)
                throw ParseError(ln, "alphabet: bad size '" + toks[2] + "'");
            std::vector<std::string> labels;
            if (toks.size() == 5) {
                labels = split_char(toks[4], ',');
                if (static_cast<int>(labels.size()) != size)
                    throw ParseError(ln, "alphabet: expected " + std::to_string(size) + " labels");
            }
            try {
                alphabets.emplace(name, Alphabet(name, size, std::move(labels)));
            } catch (const std::exception& e) {
                throw ParseError(ln, e.what());
            }
        } else if (directive == "relay_channel" || directive == "direct_channel") {
            ++pos;
            if (toks.size() != 1) throw ParseError(ln, directive + ": unexpected trailing tokens");
            for (const char* need : {"x1", "x2", "y2", "y3"})
                if (!alphabets.count(need))
                    throw ParseError(ln, directive + ": alphabet '" + std::string(need) +
                                             "' must be declared first");
            std::size_t nx1 = static_cast<std::size_t>(alphabets.at("x1").size);
            std::size_t nx2 = static_cast<std::size_t>(alphabets.at("x2").size);
            std::size_t ny2 = static_cast<std::size_t>(alphabets.at("y2").size);
            std::size_t ny3 = static_cast<std::size_t>(alphabets.at("y3").size);
            if (directive == "relay_channel") {
                if (have_relay) throw ParseError(ln, "duplicate section relay_channel");
                have_relay = true;
                relay_rows = read_rows(lines, pos, nx1, ny2, "relay_channel", 1e-9);
            } else {
                if (have_direct) throw ParseError(ln, "duplicate section direct_channel");
                have_direct = true;
                direct_rows = read_rows(lines, pos, nx1 * nx2 * ny2, ny3, "direct_channel", 1e-9);
            }
        } else {
            throw ParseError(ln, "unknown directive '" + directive + "'");
        }
    }

    for (const char* need : {"x1", "x2", "y2", "y3"})
        if (!alphabets.count(need)) throw ParseError("missing alphabet '" + std::string(need) + "'");
    if (!have_relay) throw ParseError("missing section relay_channel");
    if (!have_direct) throw ParseError("missing section direct_channel");

    Alphabet x1 = alphabets.at("x1"), x2 = alphabets.at("x2"), y2 = alphabets.at("y2"),
             y3 = alphabets.at("y3");
    return NoncausalRelayChannel(
        x1, x2, y2, y3, CondPmf::normalized({x1}, y2, std::move(relay_rows), 1e-9),
        CondPmf::normalized({x1, x2, y2}, y3, std::move(direct_rows), 1e-9));
}

namespace {

void emit_alphabet(std::string& out, const Alphabet& a) {
    out += "alphabet " + a.name + " " + std::to_string(a.size);
    if (!a.labels.empty()) {
        out += " labels ";
        for (std::size_t i = 0; i < a.labels.size(); ++i) {
            if (i) out += ",";
            out += a.labels[i];
        }
    }
    out += "\n";
}

void emit_rows(std::string& out, std::span<const double> probs, std::size_t width) {
    for (std::size_t i = 0; i < probs.size(); i += width) {
        for (std::size_t j = 0; j < width; ++j) {
            if (j) out += " ";
            out += format_double(probs[i + j]);
        }
        out += "\n";
    }
}

}  // namespace

std::string serialize_channel(const NoncausalRelayChannel& ch) {
    std::string out;
    emit_alphabet(out, ch.x1);
    emit_alphabet(out, ch.x2);
    emit_alphabet(out, ch.y2);
    emit_alphabet(out, ch.y3);
    out += "relay_channel\n";
    emit_rows(out, ch.sender_to_relay.probs(), static_cast<std::size_t>(ch.y2.size));
    out += "direct_channel\n";
    emit_rows(out, ch.direct.probs(), static_cast<std::size_t>(ch.y3.size));
    return out;
}

// --------------------------------------------------------------------------
// Witness files.

namespace {

std::string vec_text(std::span<const double> v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += " ";
        s += format_double(v[i]);
    }
    return s;
}

// Key of one conditional row, e.g. p_u_given_x1y2[x1=0,y2=e].
std::string row_key(const std::string& base, std::span<const Alphabet> axes, std::span<const int> coords) {
    std::string s = base + "[";
    for (std::size_t k = 0; k < axes.size(); ++k) {
        if (k) s += ",";
        s += axes[k].name + "=" + axes[k].label(coords[k]);
    }
    s += "]";
    return s;
}

void emit_cond(std::string& out, const std::string& base, const CondPmf& c) {
    std::vector<int> coords(c.input_axes().size(), 0);
    std::size_t rows = c.row_count();
    for (std::size_t r = 0; r < rows; ++r) {
        out += row_key(base, c.input_axes(), coords) + " = " + vec_text(c.row(r)) + "\n";
        for (int k = static_cast<int>(coords.size()) - 1; k >= 0; --k) {
            if (++coords[static_cast<std::size_t>(k)] < c.input_axes()[static_cast<std::size_t>(k)].size) break;
            coords[static_cast<std::size_t>(k)] = 0;
        }
    }
}

void emit_map(std::string& out, const DeterministicMap& m) {
    std::vector<int> coords(m.input_axes.size(), 0);
    for (std::size_t i = 0; i < m.table.size(); ++i) {
        out += row_key("map", m.input_axes, coords) + " = " + m.output_axis.label(m.table[i]) + "\n";
        for (int k = static_cast<int>(coords.size()) - 1; k >= 0; --k) {
            if (++coords[static_cast<std::size_t>(k)] < m.input_axes[static_cast<std::size_t>(k)].size) break;
            coords[static_cast<std::size_t>(k)] = 0;
        }
    }
}

struct KvFile {
    // Ordered key -> (line, value text); duplicate keys rejected.
    std::map<std::string, std::pair<int, std::string>> entries;

    const std::string& get(const std::string& key) const {
        auto it = entries.find(key);
        if (it == entries.end()) throw ParseError("witness: missing key '" + key + "'");
        return it->second.second;
    }
    bool has(const std::string& key) const { return entries.count(key) != 0; }
};

KvFile parse_kv(const std::string& text) {
    KvFile f;
    Lines lines = preprocess(text);
    for (auto& [ln, content] : lines.content) {
        // The separator is the first '=' outside brackets; keys like
        // map[u=1,y2=e] contain their own '=' characters.
        std::size_t eq = std::string::npos;
        int depth = 0;
        for (std::size_t i = 0; i < content.size(); ++i) {
            if (content[i] == '[') ++depth;
            else if (content[i] == ']') --depth;
            else if (content[i] == '=' && depth == 0) {
                eq = i;
                break;
            }
        }
        if (eq == std::string::npos) throw ParseError(ln, "witness: expected 'key = value'");
        std::string key = strip(content.substr(0, eq));
        std::string value = strip(content.substr(eq + 1));
        if (key.empty()) throw ParseError(ln, "witness: empty key");
        if (!f.entries.emplace(key, std::make_pair(ln, value)).second)
            throw ParseError(ln, "witness: duplicate key '" + key + "'");
    }
    return f;
}

std::vector<double> parse_vec(const KvFile& f, const std::string& key, std::size_t want) {
    auto it = f.entries.find(key);
    if (it == f.entries.end()) throw ParseError("witness: missing key '" + key + "'");
    std::vector<std::string> toks = split_ws(it->second.second);
    if (toks.size() != want)
        throw ParseError(it->second.first, "witness: '" + key + "' expects " + std::to_string(want) +
                                               " values, got " + std::to_string(toks.size()));
    std::vector<double> out;
    out.reserve(want);
    for (auto& t : toks) out.push_back(parse_prob(t, it->second.first));
    return out;
}

int parse_int_kv(const KvFile& f, const std::string& key) {
    const std::string& v = f.get(key);
    int out = 0;
    auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || p != v.data() + v.size())
        throw ParseError("witness: bad integer for '" + key + "'");
    return out;
}

// Gathers all rows of a conditional from bracketed keys.
CondPmf parse_cond(const KvFile& f, const std::string& base, std::vector<Alphabet> input_axes,
                   Alphabet output_axis) {
    std::size_t rows = table_size(input_axes);
    std::vector<double> probs;
    probs.reserve(rows * static_cast<std::size_t>(output_axis.size));
    std::vector<int> coords(input_axes.size(), 0);
    for (std::size_t r = 0; r < rows; ++r) {
        std::string key = row_key(base, input_axes, coords);
        std::vector<double> row = parse_vec(f, key, static_cast<std::size_t>(output_axis.size));
        probs.insert(probs.end(), row.begin(), row.end());
        for (int k = static_cast<int>(coords.size()) - 1; k >= 0; --k) {
            if (++coords[static_cast<std::size_t>(k)] < input_axes[static_cast<std::size_t>(k)].size) break;
            coords[static_cast<std::size_t>(k)] = 0;
        }
    }
    return CondPmf::normalized(std::move(input_axes), std::move(output_axis), std::move(probs), 1e-9);
}

DeterministicMap parse_map(const KvFile& f, std::vector<Alphabet> input_axes, Alphabet output_axis) {
    std::size_t cells = table_size(input_axes);
    std::vector<int> table(cells, 0);
    std::vector<int> coords(input_axes.size(), 0);
    for (std::size_t i = 0; i < cells; ++i) {
        std::string key = row_key("map", input_axes, coords);
        const std::string& v = f.get(key);
        int sym = output_axis.symbol_from_label(v);
        if (sym < 0) throw ParseError("witness: bad output symbol '" + v + "' for '" + key + "'");
        table[i] = sym;
        for (int k = static_cast<int>(coords.size()) - 1; k >= 0; --k) {
            if (++coords[static_cast<std::size_t>(k)] < input_axes[static_cast<std::size_t>(k)].size) break;
            coords[static_cast<std::size_t>(k)] = 0;
        }
    }
    return DeterministicMap(std::move(input_axes), std::move(output_axis), std::move(table));
}

Pmf parse_pmf(const KvFile& f, const std::string& key, Alphabet a, double tol = 1e-9) {
    std::vector<double> v = parse_vec(f, key, static_cast<std::size_t>(a.size));
    double sum = 0.0;
    for (double x : v) {
        if (x < 0.0) throw ParseError("witness: negative probability in '" + key + "'");
        sum += x;
    }
    if (std::abs(sum - 1.0) > tol)
        throw ParseError("witness: '" + key + "' sums to " + format_double(sum) + ", expected 1");
    normalize_exactly(v);
    return Pmf(std::move(a), std::move(v));
}

JointPmf parse_joint(const KvFile& f, const std::string& key, std::vector<Alphabet> axes) {
    std::vector<double> v = parse_vec(f, key, table_size(axes));
    double sum = 0.0;
    for (double x : v) {
        if (x < 0.0) throw ParseError("witness: negative probability in '" + key + "'");
        sum += x;
    }
    if (std::abs(sum - 1.0) > 1e-9)
        throw ParseError("witness: '" + key + "' sums to " + format_double(sum) + ", expected 1");
    normalize_exactly(v);
    return JointPmf(std::move(axes), std::move(v));
}

}  // namespace

std::string serialize_witness(BoundKind kind, const Witness& w) {
    std::string out = "kind = " + to_string(kind) + "\n";
    if (const auto* x = std::get_if<WitnessDF>(&w)) {
        out += "p_x1x2 = " + vec_text(x->p_x1x2.probs()) + "\n";
    } else if (const auto* x = std::get_if<WitnessPDF>(&w)) {
        out += "card_v = " + std::to_string(x->v_alphabet().size) + "\n";
        out += "p_vx1x2 = " + vec_text(x->p_vx1x2.probs()) + "\n";
    } else if (const auto* x = std::get_if<WitnessCutset>(&w)) {
        out += "p_x1 = " + vec_text(x->p_x1.probs()) + "\n";
        emit_cond(out, "p_x2_given_x1y2", x->p_x2_given_x1y2);
    } else if (const auto* x = std::get_if<WitnessGPDF>(&w)) {
        out += "card_u = " + std::to_string(x->u_alphabet().size) + "\n";
        out += "p_x1 = " + vec_text(x->p_x1.probs()) + "\n";
        emit_cond(out, "p_u_given_x1y2", x->p_u_given_x1y2);
        emit_map(out, x->relay_map);
    } else if (const auto* x = std::get_if<WitnessGPCF>(&w)) {
        out += "card_u = " + std::to_string(x->u_alphabet().size) + "\n";
        out += "p_x1 = " + vec_text(x->p_x1.probs()) + "\n";
        emit_cond(out, "p_u_given_y2", x->p_u_given_y2);
        emit_map(out, x->relay_map);
    } else if (const auto* x = std::get_if<WitnessGPCFBinned>(&w)) {
        out += "card_u = " + std::to_string(x->u_alphabet().size) + "\n";
        out += "card_yhat = " + std::to_string(x->yhat_alphabet().size) + "\n";
        out += "p_x1 = " + vec_text(x->p_x1.probs()) + "\n";
        emit_cond(out, "p_u_given_y2", x->p_u_given_y2);
        emit_cond(out, "p_yhat_given_y2", x->p_yhat_given_y2);
        emit_map(out, x->relay_map);
    } else if (const auto* x = std::get_if<WitnessCF>(&w)) {
        out += "card_yhat = " + std::to_string(x->yhat_alphabet().size) + "\n";
        out += "p_x1 = " + vec_text(x->p_x1.probs()) + "\n";
        out += "p_x2 = " + vec_text(x->p_x2.probs()) + "\n";
        emit_cond(out, "p_yhat_given_y2", x->p_yhat_given_y2);
    } else if (const auto* x = std::get_if<WitnessGPPDFCF>(&w)) {
        out += "card_v = " + std::to_string(x->v_alphabet().size) + "\n";
        out += "card_u = " + std::to_string(x->u_alphabet().size) + "\n";
        out += "p_vx1 = " + vec_text(x->p_vx1.probs()) + "\n";
        emit_cond(out, "p_u_given_vy2", x->p_u_given_vy2);
        emit_map(out, x->relay_map);
    }
    return out;
}

std::pair<BoundKind, Witness> parse_witness_file(const std::string& text,
                                                 const NoncausalRelayChannel& ch) {
    KvFile f = parse_kv(text);
    BoundKind kind = bound_kind_from_string(f.get("kind"));

    switch (kind) {
        case BoundKind::DF:
            return {kind, WitnessDF{parse_joint(f, "p_x1x2", {ch.x1, ch.x2})}};
        case BoundKind::PDF: {
            Alphabet v{"v", parse_int_kv(f, "card_v")};
            return {kind, WitnessPDF{parse_joint(f, "p_vx1x2", {v, ch.x1, ch.x2})}};
        }
        case BoundKind::CUTSET:
            return {kind, WitnessCutset{parse_pmf(f, "p_x1", ch.x1),
                                        parse_cond(f, "p_x2_given_x1y2", {ch.x1, ch.y2}, ch.x2)}};
        case BoundKind::GP_DF:
        case BoundKind::NUB:
        case BoundKind::DEGRADED_CAPACITY: {
            Alphabet u{"u", parse_int_kv(f, "card_u")};
            return {kind, WitnessGPDF{parse_pmf(f, "p_x1", ch.x1),
                                      parse_cond(f, "p_u_given_x1y2", {ch.x1, ch.y2}, u),
                                      parse_map(f, {u, ch.x1, ch.y2}, ch.x2)}};
        }
        case BoundKind::GP_CF: {
            Alphabet u{"u", parse_int_kv(f, "card_u")};
            return {kind, WitnessGPCF{parse_pmf(f, "p_x1", ch.x1), parse_cond(f, "p_u_given_y2", {ch.y2}, u),
                                      parse_map(f, {u, ch.y2}, ch.x2)}};
        }
        case BoundKind::GP_CF_BINNED: {
            Alphabet u{"u", parse_int_kv(f, "card_u")};
            Alphabet yhat{"yhat", parse_int_kv(f, "card_yhat")};
            return {kind, WitnessGPCFBinned{parse_pmf(f, "p_x1", ch.x1),
                                            parse_cond(f, "p_u_given_y2", {ch.y2}, u),
                                            parse_cond(f, "p_yhat_given_y2", {ch.y2}, yhat),
                                            parse_map(f, {u, yhat, ch.y2}, ch.x2)}};
        }
        case BoundKind::CF: {
            Alphabet yhat{"yhat", parse_int_kv(f, "card_yhat")};
            return {kind, WitnessCF{parse_pmf(f, "p_x1", ch.x1), parse_pmf(f, "p_x2", ch.x2),
                                    parse_cond(f, "p_yhat_given_y2", {ch.y2}, yhat)}};
        }
        case BoundKind::GP_PDF_CF: {
            Alphabet v{"v", parse_int_kv(f, "card_v")};
            Alphabet u{"u", parse_int_kv(f, "card_u")};
            return {kind, WitnessGPPDFCF{parse_joint(f, "p_vx1", {v, ch.x1}),
                                         parse_cond(f, "p_u_given_vy2", {v, ch.y2}, u),
                                         parse_map(f, {u, v, ch.y2}, ch.x2)}};
        }
    }
    throw ParseError("witness: bad kind");
}

std::string report_csv(const std::string& channel_id, const std::vector<ReportRow>& rows) {
    std::string out = "channel,kind,value,converged,card_u,card_v,card_yhat,witness_file,caveat\n";
    for (const ReportRow& r : rows) {
        out += channel_id + ",";
        out += to_string(r.kind) + ",";
        out += format_fixed6(std::max(0.0, r.value)) + ",";
        out += (r.converged ? "true" : "false");
        out += ",";
        if (r.card_u >= 0) out += std::to_string(r.card_u);
        out += ",";
        if (r.card_v >= 0) out += std::to_string(r.card_v);
        out += ",";
        if (r.card_yhat >= 0) out += std::to_string(r.card_yhat);
        out += ",";
        out += r.witness_file + ",";
        out += r.caveat + "\n";
    }
    return out;
}

std::string sweep_csv(const std::vector<SweepCell>& cells) {
    std::string out = "n,rate,p_err,ci,relay_fail,multicode_fail,decode_fail\n";
    for (const SweepCell& c : cells) {
        out += std::to_string(c.n) + ",";
        out += format_double(c.rate) + ",";
        out += format_fixed6(c.estimate.p_err) + ",";
        out += format_fixed6(c.estimate.ci_halfwidth) + ",";
        out += std::to_string(c.estimate.relay_decode_failures) + ",";
        out += std::to_string(c.estimate.multicoding_failures) + ",";
        out += std::to_string(c.estimate.decoder_failures) + "\n";
    }
    return out;
}

}  // namespace relaycap
