#ifndef RELAYCAP_EMBEDDINGS_HPP
#define RELAYCAP_EMBEDDINGS_HPP

#include "relaycap/witness.hpp"

// Witness embeddings between bound domains. Each realizes one of the
// reduction identities: evaluating the target bound on the embedded witness
// reproduces the source bound's value (see the per-function notes for the
// structural conditions).

namespace relaycap {

/// U = a copy of X2, conditionally independent of Y2 given X1, with
/// x2(u,x1,y2) = u. GP-DF (and NUB second term) then reproduces the DF
/// objective exactly.
WitnessGPDF embed_df_in_gp_df(const NoncausalRelayChannel& ch, const WitnessDF& w);

/// V = X1 embedded in p(v,x1,x2); the PDF objective equals the DF objective.
WitnessPDF embed_df_in_pdf(const NoncausalRelayChannel& ch, const WitnessDF& w);

/// V degenerate (constant symbol 0 of cardinality card_v >= 1); the
/// GP-PDF-CF objective equals the GP-CF objective.
WitnessGPPDFCF embed_gp_cf_in_gp_pdf_cf(const NoncausalRelayChannel& ch, const WitnessGPCF& w,
                                        int card_v = 1);

/// V' = (V, X2) with U degenerate. Reproduces the PDF value exactly when the
/// source witness satisfies the Markov chain X2 -> V -> Y2 (e.g. drawn as
/// p(v) p(x1|v) p(x2|v)); in general the embedded value dominates.
WitnessGPPDFCF embed_pdf_in_gp_pdf_cf(const NoncausalRelayChannel& ch, const WitnessPDF& w);

/// U degenerate (constant, cardinality card_u >= 1), Yhat = the source U.
/// The binned GP-CF objective equals the GP-CF objective.
WitnessGPCFBinned embed_gp_cf_in_gp_cf_binned(const NoncausalRelayChannel& ch, const WitnessGPCF& w,
                                              int card_u = 1);

/// U = a copy of X2 independent of Y2 with x2(u,yhat,y2) = u. The binned
/// GP-CF objective equals the CF objective.
WitnessGPCFBinned embed_cf_in_gp_cf_binned(const NoncausalRelayChannel& ch, const WitnessCF& w);

/// Marginalizes the GP-DF witness's (u, map) pair into the stochastic relay
/// rule p(x2|x1,y2) it induces; used to seed the cutset search.
WitnessCutset induced_cutset_witness(const NoncausalRelayChannel& ch, const WitnessGPDF& w);

}  // namespace relaycap

#endif
