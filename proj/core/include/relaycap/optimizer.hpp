#ifndef RELAYCAP_OPTIMIZER_HPP
#define RELAYCAP_OPTIMIZER_HPP

#include <cstdint>
#include <optional>

#include "relaycap/bounds.hpp"

// Max-min search over each bound's witness domain: exhaustive enumeration of
// deterministic relay maps (canonicalized under relabelings of U, sampled
// beyond a cap), a coarse grid over the free pmf blocks, and cyclic
// coordinate refinement. Values are "best found"; no global-optimality claim
// is made, and `converged` describes only the local refinement.

namespace relaycap {

struct SearchConfig {
    int grid_resolution = 8;          // pmf coordinates restricted to i/k in the coarse phase
    int refine_iterations = 400;      // cap on refinement cycles
    double refine_initial_step = 0.05;
    double tolerance = 1e-6;          // convergence threshold on the objective
    int card_u = 2;
    int card_v = 2;
    int card_yhat = 2;
    std::int64_t map_enumeration_cap = 65536;
    std::uint64_t seed = 0;           // random restarts and map sampling

    // Plumbing knobs beyond the core contract:
    std::int64_t joint_grid_cap = 10000000;  // budget on grid points x map candidates
    int sweep_passes = 2;                  // coordinate-wise grid sweeps when over the cap
    int random_restarts = 8;               // seeded restart points per map in sweep mode
    int threads = 0;                       // 0 = hardware concurrency
};

struct BoundResult {
    BoundKind kind;
    double value = 0.0;  // bits; re-checked against the evaluator at emission
    Witness witness;
    std::vector<NamedTerm> terms;
    std::int64_t evaluations = 0;
    bool converged = false;
};

/// All probability vectors of dimension `dim` with coordinates i/k, i.e. the
/// compositions of k into dim parts, in lexicographic order. Throws
/// std::length_error when the count C(k+dim-1, dim-1) exceeds `cap`.
std::vector<std::vector<double>> simplex_grid(int dim, int k, std::int64_t cap = 20000000);

/// Deterministic-map tables from a product domain onto [0, codomain_size).
/// Yields all codomain^domain tables in lexicographic order when that count
/// is at most `cap`; otherwise all constant maps, all coordinate projections
/// that fit the codomain, and `cap` seeded pseudo-random tables.
class MapEnumeration {
  public:
    MapEnumeration(std::vector<int> domain_sizes, int codomain_size, std::int64_t cap,
                   std::uint64_t seed);

    bool sampled() const { return sampled_; }
    std::int64_t count() const { return count_; }
    std::vector<int> table(std::int64_t i) const;

  private:
    std::vector<int> domain_sizes_;
    std::int64_t domain_cells_;
    int codomain_;
    std::int64_t cap_;
    std::uint64_t seed_;
    bool sampled_ = false;
    std::int64_t count_ = 0;
    std::vector<std::vector<int>> structured_;  // constants + projections (sampled mode)
};

/// Maximizes `kind`'s objective over its witness domain. `extra_seeds` are
/// additional full witnesses used as refinement starting points when their
/// shape and cardinalities match the search (mismatches are skipped).
BoundResult maximize(const NoncausalRelayChannel& ch, BoundKind kind, const SearchConfig& cfg,
                     const std::vector<Witness>& extra_seeds = {});

/// Runs every applicable bound kind, ordered DF, PDF, CF, GP_CF,
/// GP_CF_BINNED, GP_DF, GP_PDF_CF, NUB, CUTSET, then DEGRADED_CAPACITY when
/// the channel is degraded. Richer searches are seeded with the poorer
/// optima embedded, and the cutset search with the relay rule induced by the
/// NUB witness.
std::vector<BoundResult> maximize_all(const NoncausalRelayChannel& ch, const SearchConfig& cfg);

}  // namespace relaycap

#endif
