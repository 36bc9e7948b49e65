#include "relaycap/bounds.hpp"

#include <algorithm>
#include <cmath>

#include "relaycap/info.hpp"

namespace relaycap {

std::string to_string(BoundKind kind) {
    switch (kind) {
        case BoundKind::DF: return "df";
        case BoundKind::PDF: return "pdf";
        case BoundKind::CUTSET: return "cutset";
        case BoundKind::GP_DF: return "gp-df";
        case BoundKind::GP_CF: return "gp-cf";
        case BoundKind::GP_CF_BINNED: return "gp-cf-binned";
        case BoundKind::CF: return "cf";
        case BoundKind::GP_PDF_CF: return "gp-pdf-cf";
        case BoundKind::NUB: return "nub";
        case BoundKind::DEGRADED_CAPACITY: return "capacity";
    }
    throw std::logic_error("to_string: bad BoundKind");
}

BoundKind bound_kind_from_string(const std::string& name) {
    for (BoundKind k : {BoundKind::DF, BoundKind::PDF, BoundKind::CUTSET, BoundKind::GP_DF,
                        BoundKind::GP_CF, BoundKind::GP_CF_BINNED, BoundKind::CF, BoundKind::GP_PDF_CF,
                        BoundKind::NUB, BoundKind::DEGRADED_CAPACITY})
        if (to_string(k) == name) return k;
    throw std::invalid_argument("unknown bound kind '" + name + "'");
}

bool is_lower_bound(BoundKind kind) {
    switch (kind) {
        case BoundKind::DF:
        case BoundKind::PDF:
        case BoundKind::GP_DF:
        case BoundKind::GP_CF:
        case BoundKind::GP_CF_BINNED:
        case BoundKind::CF:
        case BoundKind::GP_PDF_CF: return true;
        default: return false;
    }
}

bool kind_has_map(BoundKind kind) {
    switch (kind) {
        case BoundKind::GP_DF:
        case BoundKind::GP_CF:
        case BoundKind::GP_CF_BINNED:
        case BoundKind::GP_PDF_CF:
        case BoundKind::NUB:
        case BoundKind::DEGRADED_CAPACITY: return true;
        default: return false;
    }
}

namespace detail {

namespace {

struct EntropyCalc {
    std::span<const double> table;
    std::span<const int> sizes;
    std::vector<double>& scratch;

    double H(std::initializer_list<int> subset) const {
        return subset_entropy_raw(table, sizes, std::span<const int>(subset.begin(), subset.size()), scratch);
    }
};

}  // namespace

void objective_term_values(BoundKind kind, std::span<const double> joint, std::span<const int> sizes,
                           std::vector<double>& out, std::vector<double>& scratch) {
    EntropyCalc e{joint, sizes, scratch};
    out.clear();
    switch (kind) {
        case BoundKind::DF: {
            // joint axes (X1, X2, Y2, Y3)
            out.push_back(e.H({0}) + e.H({2}) - e.H({0, 2}));
            out.push_back(e.H({0, 1}) + e.H({3}) - e.H({0, 1, 3}));
            break;
        }
        case BoundKind::PDF: {
            // joint axes (V, X1, X2, Y2, Y3)
            out.push_back(e.H({1, 2}) + e.H({4}) - e.H({1, 2, 4}));
            // Second summand reads the displayed term as I(X1;Y3|X2,V).
            double i_v_y2 = e.H({0}) + e.H({3}) - e.H({0, 3});
            double i_x1_y3_g = e.H({1, 2, 0}) + e.H({4, 2, 0}) - e.H({1, 4, 2, 0}) - e.H({2, 0});
            out.push_back(i_v_y2 + i_x1_y3_g);
            break;
        }
        case BoundKind::CUTSET: {
            // joint axes (X1, Y2, X2, Y3)
            out.push_back(e.H({0, 2}) + e.H({3}) - e.H({0, 2, 3}));
            double i_x1_y2 = e.H({0}) + e.H({1}) - e.H({0, 1});
            double cmi = e.H({0, 2, 1}) + e.H({3, 2, 1}) - e.H({0, 3, 2, 1}) - e.H({2, 1});
            out.push_back(i_x1_y2 + cmi);
            break;
        }
        case BoundKind::GP_DF:
        case BoundKind::DEGRADED_CAPACITY: {
            // joint axes (X1, Y2, U, X2, Y3)
            out.push_back(e.H({0}) + e.H({1}) - e.H({0, 1}));
            double i_x1u_y3 = e.H({0, 2}) + e.H({4}) - e.H({0, 2, 4});
            double i_u_y2_gx1 = e.H({2, 0}) + e.H({1, 0}) - e.H({2, 1, 0}) - e.H({0});
            out.push_back(i_x1u_y3 - i_u_y2_gx1);
            break;
        }
        case BoundKind::GP_CF: {
            // joint axes (X1, Y2, U, X2, Y3)
            out.push_back(e.H({0}) + e.H({2, 4}) - e.H({0, 2, 4}));
            double i_x1u_y3 = e.H({0, 2}) + e.H({4}) - e.H({0, 2, 4});
            double i_u_y2_gx1 = e.H({2, 0}) + e.H({1, 0}) - e.H({2, 1, 0}) - e.H({0});
            out.push_back(i_x1u_y3 - i_u_y2_gx1);
            break;
        }
        case BoundKind::GP_CF_BINNED: {
            // joint axes (X1, Y2, U, Yhat, X2, Y3)
            out.push_back(e.H({0}) + e.H({3, 5}) - e.H({0, 3, 5}));
            double i_x1yh_y3 = e.H({0, 3}) + e.H({5}) - e.H({0, 3, 5});
            double i_yh_y2_gx1 = e.H({3, 0}) + e.H({1, 0}) - e.H({3, 1, 0}) - e.H({0});
            double i_u_y3 = e.H({2}) + e.H({5}) - e.H({2, 5});
            double i_u_y2 = e.H({2}) + e.H({1}) - e.H({2, 1});
            out.push_back(i_x1yh_y3 - i_yh_y2_gx1 + i_u_y3 - i_u_y2);
            break;
        }
        case BoundKind::CF: {
            // joint axes (X1, Y2, Yhat, X2, Y3)
            out.push_back(e.H({0}) + e.H({2, 4}) - e.H({0, 2, 4}));
            double i_x1yh_y3 = e.H({0, 2}) + e.H({4}) - e.H({0, 2, 4});
            double i_x2_y3 = e.H({3}) + e.H({4}) - e.H({3, 4});
            double i_yh_y2_gx1 = e.H({2, 0}) + e.H({1, 0}) - e.H({2, 1, 0}) - e.H({0});
            out.push_back(i_x1yh_y3 + i_x2_y3 - i_yh_y2_gx1);
            break;
        }
        case BoundKind::GP_PDF_CF: {
            // joint axes (V, X1, Y2, U, X2, Y3)
            double i_vu_y3 = e.H({0, 3}) + e.H({5}) - e.H({0, 3, 5});
            double i_x1_uy3_gv = e.H({1, 0}) + e.H({3, 5, 0}) - e.H({1, 3, 5, 0}) - e.H({0});
            double i_u_y2_gv = e.H({3, 0}) + e.H({2, 0}) - e.H({3, 2, 0}) - e.H({0});
            double i_v_y2 = e.H({0}) + e.H({2}) - e.H({0, 2});
            double i_u_y3_gv = e.H({3, 0}) + e.H({5, 0}) - e.H({3, 5, 0}) - e.H({0});
            out.push_back(i_vu_y3 + i_x1_uy3_gv - i_u_y2_gv);
            out.push_back(i_v_y2 + i_x1_uy3_gv);
            out.push_back(i_v_y2 + i_x1_uy3_gv + i_u_y3_gv - i_u_y2_gv);
            break;
        }
        case BoundKind::NUB: {
            // joint axes (X1, Y2, U, X2, Y3)
            double i_x1_y2 = e.H({0}) + e.H({1}) - e.H({0, 1});
            double cmi = e.H({0, 3, 1}) + e.H({4, 3, 1}) - e.H({0, 4, 3, 1}) - e.H({3, 1});
            out.push_back(i_x1_y2 + cmi);
            double i_x1u_y3 = e.H({0, 2}) + e.H({4}) - e.H({0, 2, 4});
            double i_u_y2_gx1 = e.H({2, 0}) + e.H({1, 0}) - e.H({2, 1, 0}) - e.H({0});
            out.push_back(i_x1u_y3 - i_u_y2_gx1);
            break;
        }
    }
}

std::vector<std::string> term_names(BoundKind kind) {
    switch (kind) {
        case BoundKind::DF: return {"I(X1;Y2)", "I(X1,X2;Y3)"};
        case BoundKind::PDF: return {"I(X1,X2;Y3)", "I(V;Y2)+I(X1;Y3|X2,V)"};
        case BoundKind::CUTSET: return {"I(X1,X2;Y3)", "I(X1;Y2)+I(X1;Y3|X2,Y2)"};
        case BoundKind::GP_DF:
        case BoundKind::DEGRADED_CAPACITY: return {"I(X1;Y2)", "I(X1,U;Y3)-I(U;Y2|X1)"};
        case BoundKind::GP_CF: return {"I(X1;U,Y3)", "I(X1,U;Y3)-I(U;Y2|X1)"};
        case BoundKind::GP_CF_BINNED:
            return {"I(X1;Yh,Y3)", "I(X1,Yh;Y3)-I(Yh;Y2|X1)+I(U;Y3)-I(U;Y2)"};
        case BoundKind::CF: return {"I(X1;Yh,Y3)", "I(X1,Yh;Y3)+I(X2;Y3)-I(Yh;Y2|X1)"};
        case BoundKind::GP_PDF_CF:
            return {"I(V,U;Y3)+I(X1;U,Y3|V)-I(U;Y2|V)", "I(V;Y2)+I(X1;U,Y3|V)",
                    "I(V;Y2)+I(X1;U,Y3|V)+I(U;Y3|V)-I(U;Y2|V)"};
        case BoundKind::NUB: return {"I(X1;Y2)+I(X1;Y3|X2,Y2)", "I(X1,U;Y3)-I(U;Y2|X1)"};
    }
    throw std::logic_error("term_names: bad BoundKind");
}

}  // namespace detail

namespace {

std::vector<int> sizes_of(const JointPmf& j) {
    std::vector<int> s;
    for (const Alphabet& a : j.axes()) s.push_back(a.size);
    return s;
}

ObjectiveValue make_objective(BoundKind kind, const JointPmf& joint) {
    std::vector<int> sizes = sizes_of(joint);
    std::vector<double> values, scratch;
    detail::objective_term_values(kind, joint.probs(), sizes, values, scratch);
    std::vector<std::string> names = detail::term_names(kind);
    ObjectiveValue res;
    res.value = *std::min_element(values.begin(), values.end());
    for (std::size_t i = 0; i < values.size(); ++i) res.terms.push_back({names[i], values[i]});
    return res;
}

}  // namespace

ObjectiveValue df_objective(const NoncausalRelayChannel& ch, const WitnessDF& w) {
    return make_objective(BoundKind::DF, build_joint_df(ch, w));
}
ObjectiveValue pdf_objective(const NoncausalRelayChannel& ch, const WitnessPDF& w) {
    return make_objective(BoundKind::PDF, build_joint_pdf(ch, w));
}
ObjectiveValue cutset_objective(const NoncausalRelayChannel& ch, const WitnessCutset& w) {
    return make_objective(BoundKind::CUTSET, build_joint_cutset(ch, w));
}
ObjectiveValue gp_df_objective(const NoncausalRelayChannel& ch, const WitnessGPDF& w) {
    return make_objective(BoundKind::GP_DF, build_joint_gp_df(ch, w));
}
ObjectiveValue gp_cf_objective(const NoncausalRelayChannel& ch, const WitnessGPCF& w) {
    return make_objective(BoundKind::GP_CF, build_joint_gp_cf(ch, w));
}
ObjectiveValue gp_cf_binned_objective(const NoncausalRelayChannel& ch, const WitnessGPCFBinned& w) {
    return make_objective(BoundKind::GP_CF_BINNED, build_joint_gp_cf_binned(ch, w));
}
ObjectiveValue cf_objective(const NoncausalRelayChannel& ch, const WitnessCF& w) {
    return make_objective(BoundKind::CF, build_joint_cf(ch, w));
}
ObjectiveValue gp_pdf_cf_objective(const NoncausalRelayChannel& ch, const WitnessGPPDFCF& w) {
    return make_objective(BoundKind::GP_PDF_CF, build_joint_gp_pdf_cf(ch, w));
}
ObjectiveValue nub_objective(const NoncausalRelayChannel& ch, const WitnessNUB& w) {
    return make_objective(BoundKind::NUB, build_joint_gp_df(ch, w));
}

ObjectiveValue evaluate(const NoncausalRelayChannel& ch, BoundKind kind, const Witness& w) {
    switch (kind) {
        case BoundKind::DF: return df_objective(ch, std::get<WitnessDF>(w));
        case BoundKind::PDF: return pdf_objective(ch, std::get<WitnessPDF>(w));
        case BoundKind::CUTSET: return cutset_objective(ch, std::get<WitnessCutset>(w));
        case BoundKind::GP_DF: return gp_df_objective(ch, std::get<WitnessGPDF>(w));
        case BoundKind::GP_CF: return gp_cf_objective(ch, std::get<WitnessGPCF>(w));
        case BoundKind::GP_CF_BINNED: return gp_cf_binned_objective(ch, std::get<WitnessGPCFBinned>(w));
        case BoundKind::CF: return cf_objective(ch, std::get<WitnessCF>(w));
        case BoundKind::GP_PDF_CF: return gp_pdf_cf_objective(ch, std::get<WitnessGPPDFCF>(w));
        case BoundKind::NUB: return nub_objective(ch, std::get<WitnessGPDF>(w));
        case BoundKind::DEGRADED_CAPACITY:
            return make_objective(BoundKind::DEGRADED_CAPACITY,
                                  build_joint_gp_df(ch, std::get<WitnessGPDF>(w)));
    }
    throw std::logic_error("evaluate: bad BoundKind");
}

BscExampleCapacity bsc_example_capacity(double p1, double p2, double p3) {
    for (double p : {p1, p2, p3})
        if (!(p >= 0.0) || p > 1.0) throw std::domain_error("bsc_example_capacity: parameter outside [0,1]");

    const double q1 = 1.0 - p1, q2 = 1.0 - p2, q3 = 1.0 - p3;

    // Valid only where x2 = u xor y2 minimizes the output entropy for both
    // inputs; otherwise the closed form below does not apply.
    if (binary_entropy(p1 * q2 + q1 * p3) > binary_entropy(p1 * q2 + q1 * q3) + 1e-12 ||
        binary_entropy(q1 * q2 + p1 * p3) > binary_entropy(q1 * q2 + p1 * q3) + 1e-12)
        throw AnalyticFormInapplicable("bsc_example_capacity: analytic form inapplicable for these parameters");

    const double h1 = binary_entropy(p1);
    const double ha = binary_entropy(p1 * q2 + q1 * p3);
    const double hb = binary_entropy(q1 * q2 + p1 * p3);

    auto objective = [&](double q) {
        double relay_term = binary_entropy(q * q1 + (1.0 - q) * p1) - h1;
        double direct_term = 1.0 - q * ha - (1.0 - q) * hb;
        return std::min(relay_term, direct_term);
    };

    // Golden-section search; the objective is a min of concave functions of
    // q, hence concave and unimodal on [0,1].
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double lo = 0.0, hi = 1.0;
    double x1 = hi - invphi * (hi - lo), x2 = lo + invphi * (hi - lo);
    double f1 = objective(x1), f2 = objective(x2);
    while (hi - lo > 1e-10) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + invphi * (hi - lo);
            f2 = objective(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - invphi * (hi - lo);
            f1 = objective(x1);
        }
    }
    double q = 0.5 * (lo + hi);
    return {objective(q), q};
}

}  // namespace relaycap
