#include "causalcast/predictors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "causalcast/errors.hpp"

namespace causalcast {

std::string to_string(QueryKind kind) {
    switch (kind) {
        case QueryKind::cond_indep: return "cond_indep";
        case QueryKind::sign_corr: return "sign";
        case QueryKind::corr_value: return "corr";
        case QueryKind::direction: return "direction";
        case QueryKind::anm_admissible: return "anm";
    }
    return "?";
}

QueryKind query_kind_from_string(const std::string& s) {
    if (s == "cond_indep") return QueryKind::cond_indep;
    if (s == "sign") return QueryKind::sign_corr;
    if (s == "corr") return QueryKind::corr_value;
    if (s == "direction") return QueryKind::direction;
    if (s == "anm") return QueryKind::anm_admissible;
    throw InputError("unknown query kind '" + s + "'");
}

Query Query::canonical() const {
    Query q = *this;
    switch (kind) {
        case QueryKind::cond_indep:
            std::sort(q.vars.begin(), q.vars.end());
            std::sort(q.cond.begin(), q.cond.end());
            break;
        case QueryKind::sign_corr:
        case QueryKind::corr_value:
            std::sort(q.vars.begin(), q.vars.end());
            break;
        default:
            break;  // order is semantic for direction and anm
    }
    return q;
}

std::string Query::key() const {
    const Query q = canonical();
    std::ostringstream os;
    os << to_string(q.kind) << ';';
    for (int v : q.vars) os << v << ',';
    os << '|';
    for (int v : q.cond) os << v << ',';
    return os.str();
}

void validate_query(const Query& q, int n) {
    VariableTuple all = q.vars;
    all.insert(all.end(), q.cond.begin(), q.cond.end());
    try {
        validate_variable_tuple(n, all);
    } catch (const InputError& e) {
        throw QueryError(e.what());
    }
    switch (q.kind) {
        case QueryKind::cond_indep:
            if (q.vars.size() != 2) throw QueryError("cond_indep query needs exactly 2 vars");
            break;
        case QueryKind::sign_corr:
        case QueryKind::corr_value:
        case QueryKind::direction:
            if (q.vars.size() != 2 || !q.cond.empty()) {
                throw QueryError("pair query needs exactly 2 vars and no conditioning set");
            }
            break;
        case QueryKind::anm_admissible:
            if (q.vars.size() < 2 || !q.cond.empty()) {
                throw QueryError("anm query needs >= 2 vars and no conditioning set");
            }
            break;
    }
}

Outcome Outcome::binary(int v) {
    if (v != 0 && v != 1) throw InputError("binary outcome must be 0 or 1");
    return Outcome{Type::binary, static_cast<double>(v)};
}

Outcome Outcome::sign(int v) {
    if (v != -1 && v != 1) throw InputError("sign outcome must be -1 or +1");
    return Outcome{Type::sign, static_cast<double>(v)};
}

Outcome Outcome::real(double v) { return Outcome{Type::real, v}; }

namespace {

std::vector<int> invert_permutation(const std::vector<int>& perm) {
    const int n = static_cast<int>(perm.size());
    std::vector<int> inv(n, -1);
    for (int p = 0; p < n; ++p) {
        const int v = perm[p];
        if (v < 0 || v >= n || inv[v] != -1) {
            throw InputError("perm is not a permutation of 0..n-1");
        }
        inv[v] = p;
    }
    return inv;
}

void format_real(std::ostringstream& os, double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    os << buf;
}

}  // namespace

PathModel::PathModel(std::vector<int> perm, std::vector<double> adj_corr)
    : perm_(std::move(perm)), adj_corr_(std::move(adj_corr)) {
    inverse_ = invert_permutation(perm_);
    if (adj_corr_.size() + 1 != perm_.size() && !(perm_.size() <= 1 && adj_corr_.empty())) {
        throw InputError("path model needs n-1 adjacent correlations");
    }
    for (double r : adj_corr_) {
        const double a = std::abs(r);
        if (!(a > 0.0) || a > 1.0) {
            throw InputError("adjacent correlation magnitude must lie in (0, 1]");
        }
    }
}

int PathModel::position_of(int node) const {
    if (node < 0 || node >= n()) throw InputError("node out of range");
    return inverse_[node];
}

std::string PathModel::canonical_key() const {
    std::ostringstream os;
    os << "path:";
    for (int v : perm_) os << v << ',';
    os << ':';
    for (double r : adj_corr_) {
        format_real(os, r);
        os << ',';
    }
    return os.str();
}

PathSignModel::PathSignModel(std::vector<int> perm, std::vector<int> adj_sign)
    : perm_(std::move(perm)), adj_sign_(std::move(adj_sign)) {
    inverse_ = invert_permutation(perm_);
    if (adj_sign_.size() + 1 != perm_.size() && !(perm_.size() <= 1 && adj_sign_.empty())) {
        throw InputError("path sign model needs n-1 adjacent signs");
    }
    for (int s : adj_sign_) {
        if (s != -1 && s != 1) throw InputError("adjacent sign must be -1 or +1");
    }
}

int PathSignModel::position_of(int node) const {
    if (node < 0 || node >= n()) throw InputError("node out of range");
    return inverse_[node];
}

std::string PathSignModel::canonical_key() const {
    std::ostringstream os;
    os << "path_sign:";
    for (int v : perm_) os << v << ',';
    os << ':';
    for (int s : adj_sign_) os << (s > 0 ? '+' : '-');
    return os.str();
}

std::string to_string(ModelClass c) {
    switch (c) {
        case ModelClass::dag: return "dag";
        case ModelClass::polytree: return "polytree";
        case ModelClass::path: return "path";
        case ModelClass::path_sign: return "path_sign";
    }
    return "?";
}

ModelClass model_class_from_string(const std::string& s) {
    if (s == "dag") return ModelClass::dag;
    if (s == "polytree") return ModelClass::polytree;
    if (s == "path") return ModelClass::path;
    if (s == "path_sign") return ModelClass::path_sign;
    throw InputError("unknown model class '" + s + "'");
}

ModelClass model_class_of(const CausalModel& model) {
    switch (model.index()) {
        case 0: return ModelClass::dag;
        case 1: return ModelClass::polytree;
        case 2: return ModelClass::path;
        default: return ModelClass::path_sign;
    }
}

std::string canonical_key(const CausalModel& model) {
    return std::visit(
        [](const auto& m) -> std::string {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, Polytree>) {
                return "polytree:" + m.dag().canonical_key();
            } else {
                return m.canonical_key();
            }
        },
        model);
}

Outcome predict_ci(const Dag& model, const Query& q) {
    if (q.kind != QueryKind::cond_indep) throw QueryError("predict_ci expects a cond_indep query");
    validate_query(q, model.n());
    const bool independent = d_separated(model, q.vars[0], q.vars[1], q.cond);
    return Outcome::binary(independent ? 0 : 1);
}

Outcome predict_direction(const Dag& model, int i, int j) {
    if (has_directed_path(model, i, j)) return Outcome::sign(+1);
    if (has_directed_path(model, j, i)) return Outcome::sign(-1);
    throw ModelOutsideClassError("no directed path between nodes " + std::to_string(i) + " and " +
                                 std::to_string(j));
}

Outcome predict_sign(const PathSignModel& model, int i, int j) {
    if (i == j) throw QueryError("sign query requires distinct nodes");
    int a = model.position_of(i);
    int b = model.position_of(j);
    if (a > b) std::swap(a, b);
    int s = 1;
    for (int p = a; p < b; ++p) s *= model.adj_sign()[p];
    return Outcome::sign(s);
}

Outcome predict_corr(const PathModel& model, int i, int j) {
    if (i == j) throw QueryError("correlation query requires distinct nodes");
    int a = model.position_of(i);
    int b = model.position_of(j);
    if (a > b) std::swap(a, b);
    double r = 1.0;
    for (int p = a; p < b; ++p) r *= model.adj_corr()[p];
    return Outcome::real(r);
}

namespace {

// Strict common ancestors of u and v: nodes c not in {u, v} with directed
// paths to both.
std::vector<int> strict_common_ancestors(const std::vector<std::vector<int>>& anc, int u, int v) {
    std::vector<int> common;
    std::set_intersection(anc[u].begin(), anc[u].end(), anc[v].begin(), anc[v].end(),
                          std::back_inserter(common));
    std::erase_if(common, [&](int c) { return c == u || c == v; });
    return common;
}

std::vector<std::vector<int>> tuple_ancestor_sets(const Dag& dag, const VariableTuple& tuple) {
    std::vector<std::vector<int>> anc(dag.n());
    for (int v : tuple) anc[v] = ancestors(dag, v);
    return anc;
}

}  // namespace

bool anm_sufficiency_ok(const Dag& model, const VariableTuple& tuple, AnmReading reading) {
    validate_variable_tuple(model.n(), tuple);
    const auto anc = tuple_ancestor_sets(model, tuple);
    for (std::size_t a = 0; a < tuple.size(); ++a) {
        for (std::size_t b = a + 1; b < tuple.size(); ++b) {
            for (int c : strict_common_ancestors(anc, tuple[a], tuple[b])) {
                if (reading == AnmReading::literal) return false;
                if (std::find(tuple.begin(), tuple.end(), c) == tuple.end()) return false;
            }
        }
    }
    return true;
}

bool anm_order_consistent(const Dag& model, const VariableTuple& tuple) {
    validate_variable_tuple(model.n(), tuple);
    const auto anc = tuple_ancestor_sets(model, tuple);
    for (std::size_t a = 0; a < tuple.size(); ++a) {
        for (std::size_t b = a + 1; b < tuple.size(); ++b) {
            // tuple[b] must not be an ancestor of tuple[a]
            if (std::binary_search(anc[tuple[a]].begin(), anc[tuple[a]].end(), tuple[b])) {
                return false;
            }
        }
    }
    return true;
}

Outcome predict_anm_admissible(const Dag& model, const VariableTuple& tuple, AnmReading reading) {
    if (tuple.size() < 2) throw QueryError("anm query needs >= 2 vars");
    const bool ok = anm_sufficiency_ok(model, tuple, reading) && anm_order_consistent(model, tuple);
    return Outcome::binary(ok ? 1 : 0);
}

namespace {

Outcome graph_predict(const Dag& dag, const Query& q) {
    switch (q.kind) {
        case QueryKind::cond_indep:
            return predict_ci(dag, q);
        case QueryKind::direction:
            validate_query(q, dag.n());
            return predict_direction(dag, q.vars[0], q.vars[1]);
        case QueryKind::anm_admissible:
            validate_query(q, dag.n());
            return predict_anm_admissible(dag, q.vars);
        default:
            throw QueryError("graph models cannot answer " + to_string(q.kind) + " queries");
    }
}

}  // namespace

Outcome model_predict(const CausalModel& model, const Query& q) {
    if (const auto* dag = std::get_if<Dag>(&model)) return graph_predict(*dag, q);
    if (const auto* pt = std::get_if<Polytree>(&model)) return graph_predict(pt->dag(), q);
    if (const auto* pm = std::get_if<PathModel>(&model)) {
        validate_query(q, pm->n());
        if (q.kind == QueryKind::corr_value) return predict_corr(*pm, q.vars[0], q.vars[1]);
        if (q.kind == QueryKind::sign_corr) {
            const double r = predict_corr(*pm, q.vars[0], q.vars[1]).value;
            return Outcome::sign(r >= 0.0 ? 1 : -1);
        }
        throw QueryError("path models cannot answer " + to_string(q.kind) + " queries");
    }
    const auto& psm = std::get<PathSignModel>(model);
    validate_query(q, psm.n());
    if (q.kind == QueryKind::sign_corr) return predict_sign(psm, q.vars[0], q.vars[1]);
    throw QueryError("path sign models cannot answer " + to_string(q.kind) + " queries");
}

}  // namespace causalcast
