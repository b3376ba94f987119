#include "causalcast/model_search.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <unordered_map>

#include "causalcast/errors.hpp"
#include "causalcast/rng.hpp"
#include "causalcast/synth.hpp"

namespace causalcast {

double outcome_deviation(const Outcome& predicted, const Outcome& observed) {
    if (predicted.type != observed.type) {
        throw QueryError("outcome type mismatch between prediction and label");
    }
    switch (predicted.type) {
        case Outcome::Type::binary:
        case Outcome::Type::sign:
            return predicted.value == observed.value ? 0.0 : 1.0;
        case Outcome::Type::real:
            return std::abs(predicted.value - observed.value);
    }
    return 0.0;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Deduplicated labeled queries; weights preserve the plain mean.
struct Prepared {
    struct Item {
        Query query;
        Outcome label;
        double weight;
    };
    std::vector<Item> items;
    double total_weight = 0.0;
};

Prepared prepare(const std::vector<LabeledQuery>& qs) {
    Prepared prep;
    std::unordered_map<std::string, std::size_t> index;
    for (const auto& lq : qs) {
        const std::string key = lq.query.key() + "#" + std::to_string(lq.outcome.value);
        auto [it, inserted] = index.try_emplace(key, prep.items.size());
        if (inserted) {
            prep.items.push_back({lq.query, lq.outcome, 1.0});
        } else {
            prep.items[it->second].weight += 1.0;
        }
    }
    prep.total_weight = static_cast<double>(qs.size());
    return prep;
}

// Allocation-free d-separation for the fit hot loop; same active-trail
// traversal as the public d_separated, with buffers reused across queries.
class CiEvaluator {
public:
    void bind(const Dag& dag) {
        dag_ = &dag;
        const std::size_t n = static_cast<std::size_t>(dag.n());
        in_z_.assign(n, 0);
        anc_z_.assign(n, 0);
        visited_.assign(2 * n, 0);
        stack_.reserve(2 * n);
    }

    bool d_sep(int i, int j, const std::vector<int>& cond) {
        const Dag& dag = *dag_;
        std::fill(in_z_.begin(), in_z_.end(), 0);
        std::fill(anc_z_.begin(), anc_z_.end(), 0);
        std::fill(visited_.begin(), visited_.end(), 0);
        stack_.clear();
        for (int z : cond) {
            in_z_[z] = 1;
            if (!anc_z_[z]) {
                anc_z_[z] = 1;
                stack_.push_back(z);
            }
        }
        while (!stack_.empty()) {
            const int v = stack_.back();
            stack_.pop_back();
            for (int p : dag.parents(v)) {
                if (!anc_z_[p]) {
                    anc_z_[p] = 1;
                    stack_.push_back(p);
                }
            }
        }
        trail_.clear();
        trail_.emplace_back(i, 0);
        visited_[2 * i] = 1;
        while (!trail_.empty()) {
            const auto [v, dir] = trail_.back();
            trail_.pop_back();
            if (v == j) return false;
            if (dir == 0) {
                if (!in_z_[v]) {
                    for (int p : dag.parents(v)) push(p, 0);
                    for (int c : dag.children(v)) push(c, 1);
                }
            } else {
                if (!in_z_[v]) {
                    for (int c : dag.children(v)) push(c, 1);
                }
                if (anc_z_[v]) {
                    for (int p : dag.parents(v)) push(p, 0);
                }
            }
        }
        return true;
    }

private:
    void push(int v, int dir) {
        if (!visited_[2 * v + dir]) {
            visited_[2 * v + dir] = 1;
            trail_.emplace_back(v, dir);
        }
    }

    const Dag* dag_ = nullptr;
    std::vector<char> in_z_, anc_z_, visited_;
    std::vector<int> stack_;
    std::vector<std::pair<int, int>> trail_;
};

thread_local CiEvaluator ci_evaluator;

bool all_cond_indep(const Prepared& prep) {
    for (const auto& item : prep.items) {
        if (item.query.kind != QueryKind::cond_indep ||
            item.label.type != Outcome::Type::binary) {
            return false;
        }
    }
    return true;
}

// Weighted error with early abandon: returns +inf as soon as the running
// sum exceeds cutoff * total_weight.
double weighted_error(const CausalModel& model, const Prepared& prep, double cutoff) {
    const double limit = cutoff * prep.total_weight;
    double sum = 0.0;
    const Dag* dag = std::get_if<Dag>(&model);
    if (dag == nullptr) {
        if (const auto* pt = std::get_if<Polytree>(&model)) dag = &pt->dag();
    }
    if (dag != nullptr && all_cond_indep(prep)) {
        ci_evaluator.bind(*dag);
        for (const auto& item : prep.items) {
            const bool indep =
                ci_evaluator.d_sep(item.query.vars[0], item.query.vars[1], item.query.cond);
            const double predicted = indep ? 0.0 : 1.0;
            if (predicted != item.label.value) {
                sum += item.weight;
                if (sum > limit) return kInf;
            }
        }
        return sum / prep.total_weight;
    }
    for (const auto& item : prep.items) {
        sum += item.weight * outcome_deviation(model_predict(model, item.query), item.label);
        if (sum > limit) return kInf;
    }
    return sum / prep.total_weight;
}

CausalModel first_model(ModelClass c, int n) {
    switch (c) {
        case ModelClass::dag: return *DagEnumerator(n).next();
        case ModelClass::polytree: return *PolytreeEnumerator(n).next();
        case ModelClass::path: return *PathEnumerator(n).next();
        case ModelClass::path_sign: return *PathSignEnumerator(n).next();
    }
    throw InputError("unknown model class");
}

std::vector<CorrObservation> corr_observations(const Prepared& prep) {
    std::vector<CorrObservation> obs;
    for (const auto& item : prep.items) {
        if (item.query.kind == QueryKind::corr_value) {
            obs.push_back({item.query.vars[0], item.query.vars[1], item.label.value});
        } else if (item.query.kind == QueryKind::sign_corr) {
            obs.push_back({item.query.vars[0], item.query.vars[1], item.label.value});
        }
    }
    return obs;
}

std::vector<int> canonical_path_perm(std::vector<int> perm) {
    if (perm.size() > 1 && perm.front() > perm.back()) {
        std::reverse(perm.begin(), perm.end());
    }
    return perm;
}

// Path skeleton -> model of the searched class, parameters refit from the
// observations.
CausalModel refit_path(ModelClass c, std::vector<int> perm,
                       const std::vector<CorrObservation>& obs) {
    perm = canonical_path_perm(std::move(perm));
    const PathParamsFit fit = fit_path_params(perm, obs);
    if (c == ModelClass::path) return PathModel(perm, fit.adj_corr);
    std::vector<int> signs(fit.adj_corr.size());
    for (std::size_t e = 0; e < signs.size(); ++e) signs[e] = fit.adj_corr[e] >= 0.0 ? 1 : -1;
    return PathSignModel(perm, signs);
}

const std::vector<int>& perm_of(const CausalModel& model) {
    if (const auto* pm = std::get_if<PathModel>(&model)) return pm->perm();
    return std::get<PathSignModel>(model).perm();
}

// Enumerates the move neighborhood in a fixed order, evaluating each
// candidate with the current best error as abandon cutoff.
struct NeighborScan {
    const Prepared& prep;
    double best_err;
    CausalModel best;
    bool improved = false;
    std::uint64_t evaluations = 0;

    void offer(CausalModel candidate) {
        ++evaluations;
        const double err = weighted_error(candidate, prep, best_err);
        if (err < best_err) {
            best_err = err;
            best = std::move(candidate);
            improved = true;
        }
    }
};

void scan_dag_neighbors(const Dag& dag, NeighborScan& scan) {
    const int n = dag.n();
    for (int u = 0; u < n; ++u) {
        for (int v = 0; v < n; ++v) {
            if (u == v) continue;
            std::vector<Edge> edges = dag.edges();
            if (dag.has_edge(u, v)) {
                std::erase(edges, Edge{u, v});
                scan.offer(Dag(n, edges));  // remove
                edges.emplace_back(v, u);
                if (is_acyclic(n, edges)) scan.offer(Dag(n, edges));  // reverse
            } else if (!dag.has_edge(v, u)) {
                edges.emplace_back(u, v);
                if (is_acyclic(n, edges)) scan.offer(Dag(n, edges));  // add
            }
        }
    }
}

void scan_polytree_neighbors(const Polytree& tree, NeighborScan& scan) {
    const Dag& dag = tree.dag();
    const int n = dag.n();
    const std::vector<Edge>& edges = dag.edges();
    // Reorientations.
    for (std::size_t e = 0; e < edges.size(); ++e) {
        std::vector<Edge> next = edges;
        next[e] = {edges[e].second, edges[e].first};
        scan.offer(Polytree(Dag(n, next)));
    }
    // Remove one edge, reattach across the resulting split.
    for (std::size_t e = 0; e < edges.size(); ++e) {
        std::vector<Edge> rest = edges;
        rest.erase(rest.begin() + static_cast<long>(e));
        // Component of the removed edge's parent endpoint.
        std::vector<char> in_a(n, 0);
        {
            std::vector<std::vector<int>> adj(n);
            for (const auto& [p, c] : rest) {
                adj[p].push_back(c);
                adj[c].push_back(p);
            }
            std::vector<int> stack{edges[e].first};
            in_a[edges[e].first] = 1;
            while (!stack.empty()) {
                const int v = stack.back();
                stack.pop_back();
                for (int w : adj[v]) {
                    if (!in_a[w]) {
                        in_a[w] = 1;
                        stack.push_back(w);
                    }
                }
            }
        }
        for (int a = 0; a < n; ++a) {
            if (!in_a[a]) continue;
            for (int b = 0; b < n; ++b) {
                if (in_a[b]) continue;
                // The removed skeleton edge itself is covered by the
                // reorientation moves.
                if (a == edges[e].first && b == edges[e].second) continue;
                std::vector<Edge> next = rest;
                next.emplace_back(a, b);
                scan.offer(Polytree(Dag(n, next)));
                next.back() = {b, a};
                scan.offer(Polytree(Dag(n, next)));
            }
        }
    }
}

void scan_path_neighbors(ModelClass c, const CausalModel& model,
                         const std::vector<CorrObservation>& obs, NeighborScan& scan) {
    const std::vector<int>& perm = perm_of(model);
    const int n = static_cast<int>(perm.size());
    for (int p = 0; p + 1 < n; ++p) {
        std::vector<int> next = perm;
        std::swap(next[p], next[p + 1]);
        scan.offer(refit_path(c, std::move(next), obs));
    }
    for (int a = 0; a < n; ++a) {
        for (int b = a + 2; b < n; ++b) {
            if (a == 0 && b == n - 1) continue;  // full reversal is the same model
            std::vector<int> next = perm;
            std::reverse(next.begin() + a, next.begin() + b + 1);
            scan.offer(refit_path(c, std::move(next), obs));
        }
    }
}

}  // namespace

double empirical_error(const CausalModel& model, const std::vector<LabeledQuery>& qs) {
    if (qs.empty()) throw UndefinedMeanError("empirical error of an empty query list");
    return weighted_error(model, prepare(qs), kInf);
}

FitResult fit_exhaustive(ModelClass c, int n, const std::vector<LabeledQuery>& qs) {
    const Prepared prep = prepare(qs);
    FitResult result;
    if (qs.empty()) {
        result.model = first_model(c, n);
        result.train_error = std::numeric_limits<double>::quiet_NaN();
        result.evaluations = 1;
        return result;
    }
    const std::vector<CorrObservation> obs = corr_observations(prep);
    double best = kInf;
    std::uint64_t examined = 0;
    if (c == ModelClass::path) {
        PathEnumerator e(n);
        while (auto skeleton = e.next()) {
            ++examined;
            const CausalModel candidate = refit_path(c, skeleton->perm(), obs);
            const double err = weighted_error(candidate, prep, best);
            if (err < best) {
                best = err;
                result.model = candidate;
            }
        }
    } else {
        for_each_model(c, n, [&](const CausalModel& candidate) {
            ++examined;
            const double err = weighted_error(candidate, prep, best);
            if (err < best) {
                best = err;
                result.model = candidate;
            }
        });
    }
    result.train_error = best;
    result.evaluations = examined;
    return result;
}

namespace {

FitResult local_step_impl(const CausalModel& model, const Prepared& prep,
                          const std::vector<CorrObservation>& obs, double current_err) {
    NeighborScan scan{prep, current_err, model};
    switch (model_class_of(model)) {
        case ModelClass::dag:
            scan_dag_neighbors(std::get<Dag>(model), scan);
            break;
        case ModelClass::polytree:
            scan_polytree_neighbors(std::get<Polytree>(model), scan);
            break;
        case ModelClass::path:
        case ModelClass::path_sign:
            scan_path_neighbors(model_class_of(model), model, obs, scan);
            break;
    }
    return FitResult{scan.best, scan.best_err, scan.evaluations};
}

}  // namespace

FitResult fit_local_step(const CausalModel& model, const std::vector<LabeledQuery>& qs) {
    if (qs.empty()) throw UndefinedMeanError("local search needs at least one labeled query");
    const Prepared prep = prepare(qs);
    const std::vector<CorrObservation> obs = corr_observations(prep);
    return local_step_impl(model, prep, obs, weighted_error(model, prep, kInf));
}

FitResult fit_local(ModelClass c, int n, const std::vector<LabeledQuery>& qs, int budget,
                    int restarts, std::uint64_t seed) {
    if (budget < 1) throw InputError("budget must be >= 1");
    if (restarts < 1) throw InputError("restarts must be >= 1");
    if (qs.empty()) throw UndefinedMeanError("local search needs at least one labeled query");
    const Prepared prep = prepare(qs);
    const std::vector<CorrObservation> obs = corr_observations(prep);
    const GeneratorParams init_params{};

    FitResult best;
    std::string best_key;
    bool have_best = false;
    std::uint64_t evaluations = 0;

    for (int r = 0; r < restarts; ++r) {
        CausalModel model = sample_graph(c, n, derive_seed(seed, static_cast<std::uint64_t>(r)),
                                         init_params);
        if (c == ModelClass::path || c == ModelClass::path_sign) {
            model = refit_path(c, perm_of(model), obs);
        }
        double err = weighted_error(model, prep, kInf);
        ++evaluations;
        for (int step = 0; step < budget; ++step) {
            FitResult next = local_step_impl(model, prep, obs, err);
            evaluations += next.evaluations;
            if (!(next.train_error < err)) break;  // local optimum
            model = std::move(next.model);
            err = next.train_error;
        }
        const std::string key = canonical_key(model);
        if (!have_best || err < best.train_error ||
            (err == best.train_error && key < best_key)) {
            best.model = std::move(model);
            best.train_error = err;
            best_key = key;
            have_best = true;
        }
    }
    best.evaluations = evaluations;
    return best;
}

PathParamsFit fit_path_params(const std::vector<int>& perm,
                              const std::vector<CorrObservation>& corr_pairs) {
    if (corr_pairs.empty()) throw InputError("fit_path_params needs at least one observation");
    PathModel skeleton(perm, std::vector<double>(perm.size() > 1 ? perm.size() - 1 : 0, 0.5));
    const int n = skeleton.n();
    const int m = n - 1;
    PathParamsFit fit;
    fit.adj_corr.assign(m, 0.5);
    if (m == 0) return fit;

    struct Interval {
        int lo, hi;  // edges lo..hi-1
        double corr;
    };
    std::vector<Interval> intervals;
    intervals.reserve(corr_pairs.size());
    std::vector<char> covered(m, 0);
    for (const auto& obs : corr_pairs) {
        if (obs.i == obs.j) throw InputError("correlation observation needs distinct nodes");
        if (std::abs(obs.corr) > 1.0) throw InputError("observed |corr| exceeds 1");
        int a = skeleton.position_of(obs.i);
        int b = skeleton.position_of(obs.j);
        if (a > b) std::swap(a, b);
        double corr = obs.corr;
        if (corr == 0.0) {
            fit.zero_corr_clamped = true;
            corr = 1e-9;
        }
        intervals.push_back({a, b, corr});
        for (int e = a; e < b; ++e) covered[e] = 1;
    }

    std::vector<int> column_of(m, -1);
    std::vector<int> covered_edges;
    for (int e = 0; e < m; ++e) {
        if (covered[e]) {
            column_of[e] = static_cast<int>(covered_edges.size());
            covered_edges.push_back(e);
        } else {
            fit.uncovered_edges.push_back(e);
        }
    }

    // Magnitudes: least squares on log|corr| = sum of per-edge logs.
    Eigen::MatrixXd design =
        Eigen::MatrixXd::Zero(static_cast<long>(intervals.size()), covered_edges.size());
    Eigen::VectorXd target(static_cast<long>(intervals.size()));
    for (std::size_t row = 0; row < intervals.size(); ++row) {
        for (int e = intervals[row].lo; e < intervals[row].hi; ++e) {
            design(static_cast<long>(row), column_of[e]) = 1.0;
        }
        target(static_cast<long>(row)) = std::log(std::abs(intervals[row].corr));
    }
    const Eigen::VectorXd beta = design.colPivHouseholderQr().solve(target);
    for (std::size_t c = 0; c < covered_edges.size(); ++c) {
        const double clamped = std::min(beta(static_cast<long>(c)), 0.0);
        fit.adj_corr[covered_edges[c]] = std::exp(clamped);
    }

    // Signs: iterative propagation. An observation determines an edge's
    // sign once all its other edges are resolved; each round settles the
    // implied votes by majority, ties to +1.
    std::vector<int> sign(m, 0);  // 0 = unresolved
    bool progress = true;
    while (progress) {
        progress = false;
        std::vector<int> plus(m, 0), minus(m, 0);
        for (const auto& iv : intervals) {
            int unresolved = -1;
            int count = 0;
            int known_product = 1;
            for (int e = iv.lo; e < iv.hi; ++e) {
                if (sign[e] == 0) {
                    unresolved = e;
                    ++count;
                } else {
                    known_product *= sign[e];
                }
            }
            if (count != 1) continue;
            const int implied = (iv.corr > 0.0 ? 1 : -1) * known_product;
            (implied > 0 ? plus : minus)[unresolved] += 1;
        }
        for (int e = 0; e < m; ++e) {
            if (sign[e] != 0 || plus[e] + minus[e] == 0) continue;
            if (plus[e] > 0 && minus[e] > 0) fit.sign_conflict = true;
            sign[e] = plus[e] >= minus[e] ? 1 : -1;
            progress = true;
        }
    }
    for (int e = 0; e < m; ++e) {
        if (sign[e] < 0) fit.adj_corr[e] = -fit.adj_corr[e];
    }
    return fit;
}

}  // namespace causalcast
