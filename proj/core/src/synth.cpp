#include "causalcast/synth.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <unordered_set>

#include "causalcast/errors.hpp"
#include "causalcast/rng.hpp"

namespace causalcast {

Dataset::Dataset(Eigen::MatrixXd rows_, VariableTuple vars_)
    : rows(std::move(rows_)), vars(std::move(vars_)) {
    if (rows.cols() != static_cast<long>(vars.size())) {
        throw InputError("dataset column count does not match variable tuple size");
    }
    if (rows.rows() < 1) throw InputError("dataset needs at least one row");
    if (!rows.allFinite()) throw InputError("dataset contains non-finite values");
    std::set<int> seen;
    for (int v : vars) {
        if (v < 0) throw InputError("negative variable index in dataset tuple");
        if (!seen.insert(v).second) throw InputError("duplicate variable index in dataset tuple");
    }
}

int Dataset::column_of(int v) const {
    for (std::size_t c = 0; c < vars.size(); ++c) {
        if (vars[c] == v) return static_cast<int>(c);
    }
    throw InputError("variable " + std::to_string(v) + " not present in dataset");
}

Dataset Dataset::project(const VariableTuple& subset) const {
    Eigen::MatrixXd out(rows.rows(), static_cast<long>(subset.size()));
    for (std::size_t c = 0; c < subset.size(); ++c) {
        out.col(static_cast<long>(c)) = rows.col(column_of(subset[c]));
    }
    return Dataset(std::move(out), subset);
}

void TestConfig::validate() const {
    if (!(alpha > 0.0 && alpha < 1.0)) throw InputError("alpha must lie in (0, 1)");
    if (min_abs_corr < 0.0) throw InputError("min_abs_corr must be >= 0");
}

double NoiseSpec::variance() const {
    return kind == Kind::gaussian ? param : param * param / 3.0;
}

void LinearSem::validate() const {
    if (static_cast<int>(noise.size()) != graph.n()) {
        throw InputError("SEM needs one noise spec per node");
    }
    for (const auto& ns : noise) {
        if (!(ns.param > 0.0)) throw InputError("noise parameter must be positive");
    }
    for (const auto& [edge, a] : coeffs) {
        if (!graph.has_edge(edge.first, edge.second)) {
            throw InputError("SEM coefficient on non-edge (" + std::to_string(edge.first) + "," +
                             std::to_string(edge.second) + ")");
        }
        if (a == 0.0) throw InputError("SEM coefficients must be nonzero");
    }
    for (const auto& e : graph.edges()) {
        if (!coeffs.count(e)) {
            throw InputError("SEM missing coefficient for edge (" + std::to_string(e.first) + "," +
                             std::to_string(e.second) + ")");
        }
    }
}

void GeneratorParams::validate() const {
    if (!(edge_prob >= 0.0 && edge_prob <= 1.0)) throw InputError("edge_prob must lie in [0, 1]");
    if (!(coeff_lo > 0.0 && coeff_lo <= coeff_hi)) {
        throw InputError("coefficient range must satisfy 0 < lo <= hi");
    }
    if (!(noise_param > 0.0)) throw InputError("noise parameter must be positive");
}

namespace {

std::vector<int> random_permutation(int n, Rng& rng) {
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    rng.shuffle(perm);
    return perm;
}

// Uniform labeled tree on n nodes: decode a random Pruefer-style sequence.
std::vector<Edge> random_tree_edges(int n, Rng& rng) {
    if (n <= 1) return {};
    if (n == 2) return {{0, 1}};
    std::vector<int> seq(n - 2);
    for (auto& s : seq) s = rng.below_int(n);
    std::vector<int> degree(n, 1);
    for (int s : seq) ++degree[s];
    std::set<int> leaves;
    for (int v = 0; v < n; ++v) {
        if (degree[v] == 1) leaves.insert(v);
    }
    std::vector<Edge> edges;
    edges.reserve(n - 1);
    for (int s : seq) {
        const int leaf = *leaves.begin();
        leaves.erase(leaves.begin());
        edges.emplace_back(leaf, s);
        if (--degree[s] == 1) leaves.insert(s);
    }
    const int a = *leaves.begin();
    const int b = *std::next(leaves.begin());
    edges.emplace_back(a, b);
    return edges;
}

std::vector<double> random_adjacent_corrs(int n, Rng& rng, const GeneratorParams& params) {
    std::vector<double> r(n > 0 ? n - 1 : 0);
    for (auto& v : r) v = rng.sign() * rng.uniform(params.coeff_lo, params.coeff_hi);
    return r;
}

}  // namespace

CausalModel sample_graph(ModelClass c, int n, std::uint64_t seed, const GeneratorParams& params) {
    if (n < 1) throw InputError("sample_graph needs n >= 1");
    params.validate();
    Rng rng(seed);
    switch (c) {
        case ModelClass::dag: {
            const std::vector<int> order = random_permutation(n, rng);
            std::vector<Edge> edges;
            for (int a = 0; a < n; ++a) {
                for (int b = a + 1; b < n; ++b) {
                    if (rng.uniform01() < params.edge_prob) {
                        edges.emplace_back(order[a], order[b]);
                    }
                }
            }
            return Dag(n, std::move(edges));
        }
        case ModelClass::polytree: {
            std::vector<Edge> skeleton = random_tree_edges(n, rng);
            std::vector<Edge> edges;
            edges.reserve(skeleton.size());
            for (const auto& [a, b] : skeleton) {
                if (rng.coin()) {
                    edges.emplace_back(a, b);
                } else {
                    edges.emplace_back(b, a);
                }
            }
            return Polytree(Dag(n, std::move(edges)));
        }
        case ModelClass::path: {
            std::vector<int> perm = random_permutation(n, rng);
            return PathModel(std::move(perm), random_adjacent_corrs(n, rng, params));
        }
        case ModelClass::path_sign: {
            std::vector<int> perm = random_permutation(n, rng);
            std::vector<int> signs(n > 0 ? n - 1 : 0);
            for (auto& s : signs) s = rng.sign();
            return PathSignModel(std::move(perm), std::move(signs));
        }
    }
    throw InputError("unknown model class");
}

LinearSem sample_sem(const Dag& graph, std::uint64_t seed, const GeneratorParams& params) {
    params.validate();
    Rng rng(seed);
    LinearSem sem;
    sem.graph = graph;
    for (const auto& e : graph.edges()) {
        sem.coeffs[e] = rng.sign() * rng.uniform(params.coeff_lo, params.coeff_hi);
    }
    sem.noise.assign(graph.n(), NoiseSpec{params.noise_kind, params.noise_param});
    sem.validate();
    return sem;
}

LinearSem path_sem(const PathModel& model) {
    const int n = model.n();
    std::vector<Edge> edges;
    LinearSem sem;
    for (int p = 0; p + 1 < n; ++p) {
        edges.emplace_back(model.perm()[p], model.perm()[p + 1]);
    }
    sem.graph = Dag(n, edges);
    sem.noise.assign(n, NoiseSpec{NoiseSpec::Kind::gaussian, 1.0});
    for (int p = 0; p + 1 < n; ++p) {
        const double r = model.adj_corr()[p];
        sem.coeffs[edges[p]] = r;
        const double residual = 1.0 - r * r;
        // |r| = 1 would leave zero residual variance; keep it positive.
        sem.noise[model.perm()[p + 1]].param = std::max(residual, 1e-12);
    }
    sem.validate();
    return sem;
}

Eigen::MatrixXd sem_covariance(const LinearSem& sem) {
    sem.validate();
    const int n = sem.graph.n();
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    for (const auto& [edge, coeff] : sem.coeffs) a(edge.second, edge.first) = coeff;
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
    for (int v = 0; v < n; ++v) d(v, v) = sem.noise[v].variance();
    // (I - A) is a permuted triangular matrix, hence invertible.
    const Eigen::MatrixXd m = (Eigen::MatrixXd::Identity(n, n) - a).inverse();
    return m * d * m.transpose();
}

Dataset sample_data(const LinearSem& sem, long l, std::uint64_t seed) {
    sem.validate();
    if (l < 1) throw InputError("sample size must be >= 1");
    const int n = sem.graph.n();
    const std::vector<int> order = sem.graph.topological_order();
    Rng rng(seed);
    Eigen::MatrixXd rows(l, n);
    for (long row = 0; row < l; ++row) {
        for (int v : order) {
            double x = 0.0;
            for (int p : sem.graph.parents(v)) {
                x += sem.coeffs.at(Edge{p, v}) * rows(row, p);
            }
            const NoiseSpec& ns = sem.noise[v];
            if (ns.kind == NoiseSpec::Kind::gaussian) {
                x += std::sqrt(ns.param) * rng.gaussian();
            } else {
                x += ns.param * (2.0 * rng.uniform01() - 1.0);
            }
            rows(row, v) = x;
        }
    }
    VariableTuple vars(n);
    std::iota(vars.begin(), vars.end(), 0);
    return Dataset(std::move(rows), std::move(vars));
}

std::vector<Dataset> slice_overlapping(const Dataset& d, const std::vector<VariableTuple>& tuples,
                                       RowMode row_mode, std::uint64_t seed) {
    if (tuples.empty()) throw InputError("no tuples to slice");
    for (const auto& t : tuples) {
        for (int v : t) d.column_of(v);  // throws when a tuple leaves d.vars
    }
    std::vector<Dataset> slices;
    slices.reserve(tuples.size());
    if (row_mode == RowMode::shared) {
        for (const auto& t : tuples) slices.push_back(d.project(t));
        return slices;
    }
    const long per_slice = d.l() / static_cast<long>(tuples.size());
    if (per_slice < 1) {
        throw InputError("disjoint slicing needs at least one row per tuple");
    }
    std::vector<long> idx(d.l());
    std::iota(idx.begin(), idx.end(), 0);
    Rng rng(seed);
    rng.shuffle(idx);
    for (std::size_t t = 0; t < tuples.size(); ++t) {
        Eigen::MatrixXd rows(per_slice, static_cast<long>(tuples[t].size()));
        for (long r = 0; r < per_slice; ++r) {
            const long src = idx[static_cast<long>(t) * per_slice + r];
            for (std::size_t c = 0; c < tuples[t].size(); ++c) {
                rows(r, static_cast<long>(c)) = d.rows(src, d.column_of(tuples[t][c]));
            }
        }
        slices.emplace_back(std::move(rows), tuples[t]);
    }
    return slices;
}

std::vector<Query> query_universe(QueryKind kind, int n) {
    std::vector<Query> universe;
    switch (kind) {
        case QueryKind::cond_indep:
            for (int a = 0; a < n; ++a) {
                for (int b = a + 1; b < n; ++b) {
                    for (int c = 0; c < n; ++c) {
                        if (c == a || c == b) continue;
                        universe.push_back(Query{kind, {a, b}, {c}});
                    }
                }
            }
            break;
        case QueryKind::sign_corr:
        case QueryKind::corr_value:
            for (int a = 0; a < n; ++a) {
                for (int b = a + 1; b < n; ++b) {
                    universe.push_back(Query{kind, {a, b}, {}});
                }
            }
            break;
        case QueryKind::direction:
            for (int a = 0; a < n; ++a) {
                for (int b = 0; b < n; ++b) {
                    if (a != b) universe.push_back(Query{kind, {a, b}, {}});
                }
            }
            break;
        case QueryKind::anm_admissible:
            throw InputError("no finite sampling universe is defined for anm queries");
    }
    return universe;
}

namespace {

std::vector<Query> universe_minus_exclusions(QueryKind kind, int n,
                                             const std::vector<Query>& exclusions) {
    std::unordered_set<std::string> excluded;
    for (const auto& q : exclusions) excluded.insert(q.key());
    std::vector<Query> pool = query_universe(kind, n);
    std::erase_if(pool, [&](const Query& q) { return excluded.count(q.key()) > 0; });
    return pool;
}

}  // namespace

std::vector<Query> sample_queries(QueryKind kind, int n, std::size_t count, std::uint64_t seed,
                                  const std::vector<Query>& exclusions) {
    std::vector<Query> pool = universe_minus_exclusions(kind, n, exclusions);
    if (count > pool.size()) {
        throw InputError("requested " + std::to_string(count) + " queries but only " +
                         std::to_string(pool.size()) + " remain in the universe");
    }
    Rng rng(seed);
    rng.shuffle(pool);
    pool.resize(count);
    return pool;
}

std::vector<Query> sample_queries_iid(QueryKind kind, int n, std::size_t count, std::uint64_t seed,
                                      const std::vector<Query>& exclusions) {
    const std::vector<Query> pool = universe_minus_exclusions(kind, n, exclusions);
    if (pool.empty() && count > 0) throw InputError("query universe is empty");
    Rng rng(seed);
    std::vector<Query> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        out.push_back(pool[rng.below(pool.size())]);
    }
    return out;
}

}  // namespace causalcast
