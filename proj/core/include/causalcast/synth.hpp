#ifndef CAUSALCAST_SYNTH_HPP
#define CAUSALCAST_SYNTH_HPP

#include <cstdint>
#include <map>

#include "causalcast/dataset.hpp"
#include "causalcast/predictors.hpp"

namespace causalcast {

struct NoiseSpec {
    enum class Kind { gaussian, uniform };
    Kind kind = Kind::gaussian;
    double param = 1.0;  // gaussian: variance; uniform: half-width

    double variance() const;
};

/// Linear structural equation model X_v = sum_p coeff(p->v) X_p + N_v with
/// jointly independent noise.
struct LinearSem {
    Dag graph;
    std::map<Edge, double> coeffs;   // keyed by (parent, child); nonzero
    std::vector<NoiseSpec> noise;    // one per node

    void validate() const;
};

struct GeneratorParams {
    double edge_prob = 0.5;     // dag class
    double coeff_lo = 0.5;      // coefficient / adjacent-correlation magnitude range
    double coeff_hi = 0.9;
    NoiseSpec::Kind noise_kind = NoiseSpec::Kind::gaussian;
    double noise_param = 1.0;

    void validate() const;
};

/// Random model of the class, deterministic given the seed.
///   dag:      random order, independent edges with edge_prob
///   polytree: uniform random labeled tree (random-sequence construction)
///             with independently random edge orientations
///   path:     random permutation, adjacent correlations with magnitude in
///             [coeff_lo, coeff_hi] and random sign
CausalModel sample_graph(ModelClass c, int n, std::uint64_t seed, const GeneratorParams& params);

/// Random SEM over the given graph: coefficient magnitudes uniform in
/// [coeff_lo, coeff_hi] with random sign, noise per params.
LinearSem sample_sem(const Dag& graph, std::uint64_t seed, const GeneratorParams& params);

/// SEM whose adjacent correlations equal the path model's exactly, with
/// unit marginal variances (first path node N(0,1), then
/// X_next = r * X_prev + noise of variance 1 - r^2).
LinearSem path_sem(const PathModel& model);

/// Exact population covariance (I - A)^-1 D (I - A)^-T of the SEM.
Eigen::MatrixXd sem_covariance(const LinearSem& sem);

/// l i.i.d. rows generated in topological order; deterministic given seed.
Dataset sample_data(const LinearSem& sem, long l, std::uint64_t seed);

enum class RowMode { shared, disjoint };

/// Column projections of `d` onto each tuple. shared: every slice reuses
/// all rows. disjoint: rows are partitioned at random into equal parts of
/// floor(l / #tuples) rows so slices are sample-disjoint.
std::vector<Dataset> slice_overlapping(const Dataset& d, const std::vector<VariableTuple>& tuples,
                                       RowMode row_mode, std::uint64_t seed);

/// Canonically ordered query universe for a kind:
///   cond_indep: (a, b | c) with a < b, c not in {a, b}  -- n(n-1)(n-2)/2
///   sign/corr:  unordered pairs a < b                   -- n(n-1)/2
///   direction:  ordered pairs (i, j), i != j            -- n(n-1)
std::vector<Query> query_universe(QueryKind kind, int n);

/// `count` queries drawn uniformly without replacement from the universe
/// minus `exclusions`, in seeded order. count == remaining universe size
/// returns the whole remainder.
std::vector<Query> sample_queries(QueryKind kind, int n, std::size_t count, std::uint64_t seed,
                                  const std::vector<Query>& exclusions);

/// `count` i.i.d. draws (with replacement) from the universe minus
/// `exclusions`; the sampling model of the generalization bounds.
std::vector<Query> sample_queries_iid(QueryKind kind, int n, std::size_t count, std::uint64_t seed,
                                      const std::vector<Query>& exclusions);

}  // namespace causalcast

#endif
