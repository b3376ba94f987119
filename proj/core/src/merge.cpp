#include "causalcast/merge.hpp"

#include <algorithm>
#include <cmath>

#include "causalcast/enumerate.hpp"
#include "causalcast/errors.hpp"

namespace causalcast {

DiscreteDist::DiscreteDist(VariableTuple vars, std::vector<int> cards, std::vector<double> probs)
    : vars_(std::move(vars)), cards_(std::move(cards)), probs_(std::move(probs)) {
    if (vars_.size() != cards_.size()) {
        throw InputError("one cardinality per variable required");
    }
    std::size_t cells = 1;
    for (int c : cards_) {
        if (c < 1) throw InputError("cardinalities must be >= 1");
        cells *= static_cast<std::size_t>(c);
    }
    if (probs_.size() != cells) {
        throw InputError("probability table size does not match cardinalities");
    }
    double sum = 0.0;
    for (double p : probs_) {
        if (p < 0.0) throw InputError("negative probability entry");
        sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-12) {
        throw InputError("probability table sums to " + std::to_string(sum) + ", not 1");
    }
    strides_.assign(vars_.size(), 1);
    for (int d = arity() - 2; d >= 0; --d) {
        strides_[d] = strides_[d + 1] * static_cast<std::size_t>(cards_[d + 1]);
    }
    std::vector<int> sorted = vars_;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        throw InputError("duplicate variable in distribution tuple");
    }
}

int DiscreteDist::index_of(int var) const {
    for (std::size_t i = 0; i < vars_.size(); ++i) {
        if (vars_[i] == var) return static_cast<int>(i);
    }
    throw InputError("variable " + std::to_string(var) + " not in distribution");
}

double DiscreteDist::prob(const std::vector<int>& assignment) const {
    if (assignment.size() != vars_.size()) throw InputError("assignment arity mismatch");
    std::size_t idx = 0;
    for (std::size_t d = 0; d < assignment.size(); ++d) {
        if (assignment[d] < 0 || assignment[d] >= cards_[d]) {
            throw InputError("assignment value out of range");
        }
        idx += strides_[d] * static_cast<std::size_t>(assignment[d]);
    }
    return probs_[idx];
}

DiscreteDist DiscreteDist::marginal(const VariableTuple& subset) const {
    std::vector<int> positions;
    std::vector<int> sub_cards;
    for (int v : subset) {
        positions.push_back(index_of(v));
        sub_cards.push_back(cards_[positions.back()]);
    }
    std::size_t cells = 1;
    for (int c : sub_cards) cells *= static_cast<std::size_t>(c);
    std::vector<double> out(cells, 0.0);

    std::vector<int> assignment(arity(), 0);
    for (std::size_t idx = 0; idx < probs_.size(); ++idx) {
        std::size_t rest = idx;
        for (int d = 0; d < arity(); ++d) {
            assignment[d] = static_cast<int>(rest / strides_[d]);
            rest %= strides_[d];
        }
        std::size_t sub_idx = 0;
        for (std::size_t s = 0; s < positions.size(); ++s) {
            sub_idx = sub_idx * static_cast<std::size_t>(sub_cards[s]) +
                      static_cast<std::size_t>(assignment[positions[s]]);
        }
        out[sub_idx] += probs_[idx];
    }
    // Re-normalization is deliberately not applied; marginals of a valid
    // table stay within the sum tolerance.
    DiscreteDist result;
    result.vars_ = subset;
    result.cards_ = sub_cards;
    result.probs_ = std::move(out);
    result.strides_.assign(subset.size(), 1);
    for (int d = static_cast<int>(subset.size()) - 2; d >= 0; --d) {
        result.strides_[d] = result.strides_[d + 1] * static_cast<std::size_t>(sub_cards[d + 1]);
    }
    return result;
}

double total_variation(const DiscreteDist& a, const DiscreteDist& b) {
    if (a.vars() != b.vars() || a.cards() != b.cards()) {
        throw InputError("total variation needs matching variables and cardinalities");
    }
    double tv = 0.0;
    for (std::size_t i = 0; i < a.probs().size(); ++i) {
        tv += std::abs(a.probs()[i] - b.probs()[i]);
    }
    return tv / 2.0;
}

GaussianDist::GaussianDist(VariableTuple vars_, Eigen::VectorXd mean_, Eigen::MatrixXd cov_)
    : vars(std::move(vars_)), mean(std::move(mean_)), cov(std::move(cov_)) {
    const long k = static_cast<long>(vars.size());
    if (mean.size() != k || cov.rows() != k || cov.cols() != k) {
        throw InputError("gaussian moment dimensions do not match the variable tuple");
    }
    if (!cov.isApprox(cov.transpose(), 1e-10)) {
        throw InputError("covariance matrix is not symmetric");
    }
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov);
    if (es.eigenvalues().minCoeff() < -1e-10) {
        throw InputError("covariance matrix is not positive semi-definite");
    }
}

int GaussianDist::index_of(int var) const {
    for (std::size_t i = 0; i < vars.size(); ++i) {
        if (vars[i] == var) return static_cast<int>(i);
    }
    throw InputError("variable " + std::to_string(var) + " not in distribution");
}

std::string CausalConstraint::kind_name(Kind k) {
    switch (k) {
        case Kind::edge_required: return "edge_required";
        case Kind::unconfounded: return "unconfounded";
        case Kind::edge_forbidden: return "edge_forbidden";
    }
    return "?";
}

CausalConstraint::Kind CausalConstraint::kind_from_string(const std::string& s) {
    if (s == "edge_required") return Kind::edge_required;
    if (s == "unconfounded") return Kind::unconfounded;
    if (s == "edge_forbidden") return Kind::edge_forbidden;
    throw InputError("unknown constraint kind '" + s + "'");
}

namespace {

// Directed path from `from` to `to` that never visits `blocked`.
bool path_avoiding(const Dag& dag, int from, int to, int blocked) {
    if (from == blocked || to == blocked) return false;
    std::vector<char> seen(dag.n(), 0);
    std::vector<int> stack{from};
    seen[from] = 1;
    while (!stack.empty()) {
        const int v = stack.back();
        stack.pop_back();
        if (v == to) return true;
        for (int c : dag.children(v)) {
            if (c != blocked && !seen[c]) {
                seen[c] = 1;
                stack.push_back(c);
            }
        }
    }
    return false;
}

}  // namespace

bool has_proper_common_cause(const Dag& dag, int i, int j) {
    for (int c = 0; c < dag.n(); ++c) {
        if (c == i || c == j) continue;
        if (path_avoiding(dag, c, i, j) && path_avoiding(dag, c, j, i)) return true;
    }
    return false;
}

bool satisfies(const Dag& dag, const CausalConstraint& c) {
    switch (c.kind) {
        case CausalConstraint::Kind::edge_required:
            return c.indirect ? has_directed_path(dag, c.i, c.j) : dag.has_edge(c.i, c.j);
        case CausalConstraint::Kind::unconfounded:
            return !has_proper_common_cause(dag, c.i, c.j);
        case CausalConstraint::Kind::edge_forbidden:
            return !dag.has_edge(c.i, c.j);
    }
    return false;
}

std::vector<Dag> enumerate_constrained_dags(int n,
                                            const std::vector<CausalConstraint>& constraints) {
    if (n > kMaxEnumerateDagN) {
        throw CapacityError("constrained enumeration is capped at n <= " +
                            std::to_string(kMaxEnumerateDagN));
    }
    for (const auto& c : constraints) {
        if (c.i < 0 || c.i >= n || c.j < 0 || c.j >= n || c.i == c.j) {
            throw InputError("constraint references invalid node pair");
        }
    }
    std::vector<Dag> out;
    DagEnumerator e(n);
    while (auto dag = e.next()) {
        const bool ok = std::all_of(constraints.begin(), constraints.end(),
                                    [&](const CausalConstraint& c) { return satisfies(*dag, c); });
        if (ok) out.push_back(std::move(*dag));
    }
    return out;
}

namespace {

// The single shared variable of two bivariate distributions.
int shared_variable(const VariableTuple& a, const VariableTuple& b) {
    int shared = -1;
    int count = 0;
    for (int v : a) {
        if (std::find(b.begin(), b.end(), v) != b.end()) {
            shared = v;
            ++count;
        }
    }
    if (count == 0) throw InputError("the distributions share no variable");
    if (count > 1) throw InputError("chain merge needs exactly one shared variable");
    return shared;
}

}  // namespace

DiscreteDist merge_chain_discrete(const DiscreteDist& p_xy, const DiscreteDist& p_yz, double tol) {
    if (p_xy.arity() != 2 || p_yz.arity() != 2) {
        throw InputError("chain merge expects two bivariate tables");
    }
    const int y = shared_variable(p_xy.vars(), p_yz.vars());
    const int x = p_xy.vars()[0] == y ? p_xy.vars()[1] : p_xy.vars()[0];
    const int z = p_yz.vars()[0] == y ? p_yz.vars()[1] : p_yz.vars()[0];

    const DiscreteDist my_left = p_xy.marginal({y});
    const DiscreteDist my_right = p_yz.marginal({y});
    if (my_left.cards() != my_right.cards()) {
        throw InputError("shared variable has differing cardinalities");
    }
    const double tv = total_variation(my_left, my_right);
    if (tv > tol) {
        throw InconsistencyError("Y-marginals disagree: total variation " + std::to_string(tv) +
                                 " exceeds tolerance " + std::to_string(tol));
    }

    const int cx = p_xy.cards()[p_xy.index_of(x)];
    const int cy = p_xy.cards()[p_xy.index_of(y)];
    const int cz = p_yz.cards()[p_yz.index_of(z)];

    bool zero_rows = false;
    std::vector<double> probs(static_cast<std::size_t>(cx) * cy * cz);
    std::size_t idx = 0;
    const int yx = p_xy.index_of(y);
    const int yz_pos = p_yz.index_of(y);
    for (int vx = 0; vx < cx; ++vx) {
        for (int vy = 0; vy < cy; ++vy) {
            std::vector<int> a_xy(2);
            a_xy[p_xy.index_of(x)] = vx;
            a_xy[yx] = vy;
            const double pxy = p_xy.prob(a_xy);
            const double py = my_right.probs()[static_cast<std::size_t>(vy)];
            for (int vz = 0; vz < cz; ++vz, ++idx) {
                if (py > 0.0) {
                    std::vector<int> a_yz(2);
                    a_yz[yz_pos] = vy;
                    a_yz[p_yz.index_of(z)] = vz;
                    probs[idx] = pxy * (p_yz.prob(a_yz) / py);
                } else {
                    // P(Y=y) = 0: uniform conditional, zero mass either way.
                    zero_rows = true;
                    probs[idx] = pxy * (1.0 / cz);
                }
            }
        }
    }
    DiscreteDist merged({x, y, z}, {cx, cy, cz}, std::move(probs));
    merged.zero_mass_rows = zero_rows;
    return merged;
}

GaussianDist merge_chain_gaussian(const GaussianDist& p_xy, const GaussianDist& p_yz, double tol) {
    if (p_xy.vars.size() != 2 || p_yz.vars.size() != 2) {
        throw InputError("chain merge expects two bivariate gaussians");
    }
    const int y = shared_variable(p_xy.vars, p_yz.vars);
    const int x = p_xy.vars[0] == y ? p_xy.vars[1] : p_xy.vars[0];
    const int z = p_yz.vars[0] == y ? p_yz.vars[1] : p_yz.vars[0];

    const int xl = p_xy.index_of(x), yl = p_xy.index_of(y);
    const int yr = p_yz.index_of(y), zr = p_yz.index_of(z);

    const double var_y = p_xy.cov(yl, yl);
    if (!(var_y > 0.0)) throw DegenerateDataError("shared variable has non-positive variance");
    if (std::abs(p_xy.mean(yl) - p_yz.mean(yr)) > tol ||
        std::abs(var_y - p_yz.cov(yr, yr)) > tol) {
        throw InconsistencyError("moments of the shared variable disagree beyond tolerance");
    }

    Eigen::VectorXd mean(3);
    mean << p_xy.mean(xl), p_xy.mean(yl), p_yz.mean(zr);
    Eigen::MatrixXd cov(3, 3);
    const double cxy = p_xy.cov(xl, yl);
    const double cyz = p_yz.cov(yr, zr);
    const double cxz = cxy * cyz / var_y;
    cov << p_xy.cov(xl, xl), cxy, cxz,
           cxy, var_y, cyz,
           cxz, cyz, p_yz.cov(zr, zr);
    return GaussianDist({x, y, z}, std::move(mean), std::move(cov));
}

CiCheck check_ci_exact(const DiscreteDist& dist, const Query& q, double tol) {
    if (q.kind != QueryKind::cond_indep) throw QueryError("check_ci_exact expects cond_indep");
    VariableTuple needed = {q.vars[0], q.vars[1]};
    needed.insert(needed.end(), q.cond.begin(), q.cond.end());
    const DiscreteDist joint = dist.marginal(needed);

    const int ca = joint.cards()[0];
    const int cb = joint.cards()[1];
    std::size_t cond_cells = 1;
    for (std::size_t d = 2; d < joint.cards().size(); ++d) {
        cond_cells *= static_cast<std::size_t>(joint.cards()[d]);
    }

    CiCheck result;
    result.holds = true;
    bool any_positive = false;
    std::vector<int> assignment(joint.arity(), 0);
    for (std::size_t cond_idx = 0; cond_idx < cond_cells; ++cond_idx) {
        std::size_t rest = cond_idx;
        for (int d = joint.arity() - 1; d >= 2; --d) {
            assignment[d] = static_cast<int>(rest % static_cast<std::size_t>(joint.cards()[d]));
            rest /= static_cast<std::size_t>(joint.cards()[d]);
        }
        double pc = 0.0;
        std::vector<std::vector<double>> table(ca, std::vector<double>(cb));
        for (int a = 0; a < ca; ++a) {
            for (int b = 0; b < cb; ++b) {
                assignment[0] = a;
                assignment[1] = b;
                table[a][b] = joint.prob(assignment);
                pc += table[a][b];
            }
        }
        if (pc <= 0.0) continue;
        any_positive = true;
        for (int a = 0; a < ca; ++a) {
            double pa = 0.0;
            for (int b = 0; b < cb; ++b) pa += table[a][b];
            for (int b = 0; b < cb; ++b) {
                double pb = 0.0;
                for (int a2 = 0; a2 < ca; ++a2) pb += table[a2][b];
                const double dev = std::abs(table[a][b] / pc - (pa / pc) * (pb / pc));
                if (dev > tol) result.holds = false;
            }
        }
    }
    if (!any_positive) {
        result.holds = true;
        result.vacuous = true;
    }
    return result;
}

CiCheck check_ci_exact(const GaussianDist& dist, const Query& q, double tol) {
    if (q.kind != QueryKind::cond_indep) throw QueryError("check_ci_exact expects cond_indep");
    std::vector<int> idx = {dist.index_of(q.vars[0]), dist.index_of(q.vars[1])};
    for (int v : q.cond) idx.push_back(dist.index_of(v));
    const long m = static_cast<long>(idx.size());
    Eigen::MatrixXd sub(m, m);
    for (long r = 0; r < m; ++r) {
        for (long c = 0; c < m; ++c) sub(r, c) = dist.cov(idx[r], idx[c]);
    }
    // Partial correlation from the precision matrix of the submatrix.
    const Eigen::MatrixXd precision = sub.inverse();
    const double pc = -precision(0, 1) / std::sqrt(precision(0, 0) * precision(1, 1));
    CiCheck result;
    result.holds = std::abs(pc) <= tol;
    return result;
}

}  // namespace causalcast
