#ifndef RELAYCAP_BOUNDS_HPP
#define RELAYCAP_BOUNDS_HPP

#include "relaycap/witness.hpp"

// Objective evaluators: given a channel and a witness, each bound's value is
// the minimum of a handful of mutual-information terms on the induced joint.
// Values are in bits. Second terms of the GP forms may be negative for poor
// witnesses and are reported as-is; flooring to zero happens only in reports.

namespace relaycap {

enum class BoundKind {
    DF,
    PDF,
    CUTSET,
    GP_DF,
    GP_CF,
    GP_CF_BINNED,
    CF,
    GP_PDF_CF,
    NUB,
    DEGRADED_CAPACITY,
};

std::string to_string(BoundKind kind);
BoundKind bound_kind_from_string(const std::string& name);
bool is_lower_bound(BoundKind kind);
/// True for the kinds whose maximization domain includes a deterministic relay map.
bool kind_has_map(BoundKind kind);

struct NamedTerm {
    std::string name;
    double value;
};

struct ObjectiveValue {
    double value;  // min over terms, exactly
    std::vector<NamedTerm> terms;
};

ObjectiveValue df_objective(const NoncausalRelayChannel& ch, const WitnessDF& w);
ObjectiveValue pdf_objective(const NoncausalRelayChannel& ch, const WitnessPDF& w);
ObjectiveValue cutset_objective(const NoncausalRelayChannel& ch, const WitnessCutset& w);
ObjectiveValue gp_df_objective(const NoncausalRelayChannel& ch, const WitnessGPDF& w);
ObjectiveValue gp_cf_objective(const NoncausalRelayChannel& ch, const WitnessGPCF& w);
ObjectiveValue gp_cf_binned_objective(const NoncausalRelayChannel& ch, const WitnessGPCFBinned& w);
ObjectiveValue cf_objective(const NoncausalRelayChannel& ch, const WitnessCF& w);
ObjectiveValue gp_pdf_cf_objective(const NoncausalRelayChannel& ch, const WitnessGPPDFCF& w);
ObjectiveValue nub_objective(const NoncausalRelayChannel& ch, const WitnessNUB& w);

/// Dispatch by kind; the witness alternative must match the kind's shape
/// (DEGRADED_CAPACITY expects the GP-DF shape).
ObjectiveValue evaluate(const NoncausalRelayChannel& ch, BoundKind kind, const Witness& w);

/// Thrown by bsc_example_capacity when the parameter triple falls outside
/// the regime where its closed form is valid.
struct AnalyticFormInapplicable : std::domain_error {
    using std::domain_error::domain_error;
};

struct BscExampleCapacity {
    double value;      // bits
    double p_x1_zero;  // maximizing input probability of symbol 0
};

/// Closed-form capacity of example_bsc_channel(p1,p2,p3) in the regime where
/// the relay rule x2 = u xor y2 is optimal (checked; throws
/// AnalyticFormInapplicable otherwise). One-dimensional golden-section search
/// over p(x1) to 1e-10. Verification fast path; the general route is the
/// NUB/GP-DF optimizer.
BscExampleCapacity bsc_example_capacity(double p1, double p2, double p3);

namespace detail {

/// Term values for `kind` on a raw joint with the given axis sizes (axis
/// order as produced by the corresponding builder). Shared by the typed
/// evaluators and the optimizer so both are bit-identical.
void objective_term_values(BoundKind kind, std::span<const double> joint, std::span<const int> sizes,
                           std::vector<double>& out_terms, std::vector<double>& scratch);

std::vector<std::string> term_names(BoundKind kind);

}  // namespace detail

}  // namespace relaycap

#endif
