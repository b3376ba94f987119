#ifndef CAUSALCAST_MODEL_SEARCH_HPP
#define CAUSALCAST_MODEL_SEARCH_HPP

#include <cstdint>

#include "causalcast/enumerate.hpp"
#include "causalcast/predictors.hpp"

namespace causalcast {

struct LabeledQuery {
    Query query;
    Outcome outcome;
};

struct FitResult {
    CausalModel model;
    double train_error = 0.0;
    std::uint64_t evaluations = 0;
};

/// Per-query deviation: binary and sign outcomes contribute 0 or 1 (a sign
/// mismatch counts as 1), real outcomes contribute |difference|.
double outcome_deviation(const Outcome& predicted, const Outcome& observed);

/// Mean deviation between the model's predictions and the observed
/// outcomes. Throws UndefinedMeanError on an empty query list; queries the
/// model class cannot answer propagate their error.
double empirical_error(const CausalModel& model, const std::vector<LabeledQuery>& qs);

/// Exhaustive minimization over the class (within enumeration caps). Ties
/// are broken by canonical enumeration order. For the path class the
/// permutation is enumerated and the continuous parameters are refit per
/// permutation from the corr observations in `qs`. With empty `qs` the
/// first model in canonical order is returned with NaN train_error (the
/// mean is undefined).
FitResult fit_exhaustive(ModelClass c, int n, const std::vector<LabeledQuery>& qs);

/// One steepest-descent step: evaluates the full move neighborhood of
/// `model` and returns the best strictly improving neighbor, or `model`
/// itself when none improves. Moves per class:
///   dag:       single-edge add / remove / reverse preserving acyclicity
///   polytree:  single-edge reorientation; remove one edge and reattach
///              across the split, preserving the tree skeleton
///   path(.sign): adjacent transposition and segment reversal of the
///              permutation, with parameters refit from `qs`
FitResult fit_local_step(const CausalModel& model, const std::vector<LabeledQuery>& qs);

/// Restarted steepest-descent local search. Restart r starts from
/// sample_graph(c, n, derive_seed(seed, r), defaults) and takes at most
/// `budget` steps, accepting only strict improvements. The overall best is
/// chosen by (error, canonical key, restart index); the result is
/// deterministic given (seed, budget, restarts).
FitResult fit_local(ModelClass c, int n, const std::vector<LabeledQuery>& qs, int budget,
                    int restarts, std::uint64_t seed);

struct CorrObservation {
    int i = 0;
    int j = 0;
    double corr = 0.0;
};

struct PathParamsFit {
    std::vector<double> adj_corr;
    bool zero_corr_clamped = false;   // some observed corr was 0 and got magnitude 1e-9
    bool sign_conflict = false;       // contradictory sign votes on some edge
    std::vector<int> uncovered_edges; // defaulted to 0.5, no observation covers them
};

/// Least-squares fit of the adjacent correlations of the path `perm` from
/// observed pairwise correlations: log|corr(i,j)| is the sum of per-edge
/// log-magnitudes over the path interval, solved in the log domain with
/// the per-edge logs clamped to <= 0. Signs are recovered by iterative
/// propagation of the observed pair signs; conflicting votes are settled
/// by majority with ties going to +1.
PathParamsFit fit_path_params(const std::vector<int>& perm,
                              const std::vector<CorrObservation>& corr_pairs);

}  // namespace causalcast

#endif
