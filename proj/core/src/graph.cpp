#include "causalcast/graph.hpp"

#include <algorithm>
#include <queue>
#include <sstream>

#include "causalcast/errors.hpp"

namespace causalcast {

namespace {

void check_node(int n, int v, const char* what) {
    if (v < 0 || v >= n) {
        throw InputError(std::string(what) + " index " + std::to_string(v) +
                         " out of range for n=" + std::to_string(n));
    }
}

// Reachability closure from `start` along `adj`, excluding `start`.
std::vector<int> reach(const std::vector<std::vector<int>>& adj, int start) {
    std::vector<char> seen(adj.size(), 0);
    std::vector<int> stack{start};
    std::vector<int> out;
    while (!stack.empty()) {
        const int v = stack.back();
        stack.pop_back();
        for (int w : adj[v]) {
            if (!seen[w]) {
                seen[w] = 1;
                out.push_back(w);
                stack.push_back(w);
            }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

void validate_variable_tuple(int n, const VariableTuple& vars) {
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    for (int v : vars) {
        check_node(n, v, "variable");
        if (seen[v]) {
            throw InputError("duplicate variable index " + std::to_string(v) + " in tuple");
        }
        seen[v] = 1;
    }
}

bool is_acyclic(int n, const std::vector<Edge>& edges) {
    if (n < 0) throw InputError("negative node count");
    std::vector<int> in_degree(n, 0);
    std::vector<std::vector<int>> children(n);
    for (const auto& [p, c] : edges) {
        check_node(n, p, "edge parent");
        check_node(n, c, "edge child");
        if (p == c) throw InputError("self-loop at node " + std::to_string(p));
        children[p].push_back(c);
        ++in_degree[c];
    }
    std::vector<int> stack;
    for (int v = 0; v < n; ++v) {
        if (in_degree[v] == 0) stack.push_back(v);
    }
    int removed = 0;
    while (!stack.empty()) {
        const int v = stack.back();
        stack.pop_back();
        ++removed;
        for (int c : children[v]) {
            if (--in_degree[c] == 0) stack.push_back(c);
        }
    }
    return removed == n;
}

Dag::Dag(int n, std::vector<Edge> edges) : n_(n) {
    if (n < 0) throw InputError("negative node count");
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    if (!is_acyclic(n, edges)) {
        throw InputError("edge set contains a directed cycle");
    }
    edges_ = std::move(edges);
    parents_.assign(n, {});
    children_.assign(n, {});
    for (const auto& [p, c] : edges_) {
        parents_[c].push_back(p);
        children_[p].push_back(c);
    }
}

bool Dag::has_edge(int parent, int child) const {
    return std::binary_search(edges_.begin(), edges_.end(), Edge{parent, child});
}

std::vector<int> Dag::topological_order() const {
    std::vector<int> in_degree(n_, 0);
    for (const auto& e : edges_) ++in_degree[e.second];
    std::vector<int> order;
    order.reserve(n_);
    std::vector<int> stack;
    for (int v = n_ - 1; v >= 0; --v) {
        if (in_degree[v] == 0) stack.push_back(v);
    }
    while (!stack.empty()) {
        const int v = stack.back();
        stack.pop_back();
        order.push_back(v);
        for (int c : children_[v]) {
            if (--in_degree[c] == 0) stack.push_back(c);
        }
    }
    return order;
}

std::string Dag::canonical_key() const {
    std::ostringstream os;
    os << n_ << ':';
    for (const auto& [p, c] : edges_) os << '(' << p << ',' << c << ')';
    return os.str();
}

bool is_polytree(const Dag& dag) {
    const int n = dag.n();
    if (static_cast<int>(dag.edges().size()) > n - 1 && n > 0) return false;
    // Union-find over the skeleton; any merge of already-joined components
    // closes an undirected cycle.
    std::vector<int> root(n);
    for (int v = 0; v < n; ++v) root[v] = v;
    auto find = [&](int v) {
        while (root[v] != v) {
            root[v] = root[root[v]];
            v = root[v];
        }
        return v;
    };
    for (const auto& [p, c] : dag.edges()) {
        const int a = find(p);
        const int b = find(c);
        if (a == b) return false;
        root[a] = b;
    }
    return true;
}

Polytree::Polytree(Dag dag) : dag_(std::move(dag)) {
    if (!is_polytree(dag_)) {
        throw InputError("skeleton contains an undirected cycle; not a polytree");
    }
}

std::vector<int> ancestors(const Dag& dag, int node) {
    check_node(dag.n(), node, "node");
    std::vector<std::vector<int>> rev(dag.n());
    for (const auto& [p, c] : dag.edges()) rev[c].push_back(p);
    return reach(rev, node);
}

std::vector<int> descendants(const Dag& dag, int node) {
    check_node(dag.n(), node, "node");
    std::vector<std::vector<int>> fwd(dag.n());
    for (const auto& [p, c] : dag.edges()) fwd[p].push_back(c);
    return reach(fwd, node);
}

bool has_directed_path(const Dag& dag, int from, int to) {
    check_node(dag.n(), from, "node");
    check_node(dag.n(), to, "node");
    if (from == to) throw InputError("path query requires distinct nodes");
    const std::vector<int> des = descendants(dag, from);
    return std::binary_search(des.begin(), des.end(), to);
}

namespace {

// Active-trail reachability on the generic adjacency representation.
// States are (node, direction): direction 0 = trail arrived from a child
// (moving toward parents), 1 = arrived from a parent (moving toward
// children). Standard blocking rules: a non-collider passes iff the node is
// unconditioned; a collider passes iff the node or one of its descendants
// is conditioned (equivalently, the node is an ancestor of the
// conditioning set or conditioned itself).
bool d_separated_generic(const Dag& dag, int i, int j, const std::vector<char>& in_z) {
    const int n = dag.n();

    // Nodes in Z or with a descendant in Z.
    std::vector<char> anc_of_z(n, 0);
    {
        std::vector<int> stack;
        for (int v = 0; v < n; ++v) {
            if (in_z[v]) {
                anc_of_z[v] = 1;
                stack.push_back(v);
            }
        }
        while (!stack.empty()) {
            const int v = stack.back();
            stack.pop_back();
            for (int p : dag.parents(v)) {
                if (!anc_of_z[p]) {
                    anc_of_z[p] = 1;
                    stack.push_back(p);
                }
            }
        }
    }

    std::vector<char> visited(static_cast<std::size_t>(2 * n), 0);
    std::vector<std::pair<int, int>> stack{{i, 0}};
    visited[2 * i] = 1;
    auto push = [&](int v, int dir) {
        if (!visited[2 * v + dir]) {
            visited[2 * v + dir] = 1;
            stack.emplace_back(v, dir);
        }
    };
    while (!stack.empty()) {
        const auto [v, dir] = stack.back();
        stack.pop_back();
        if (v == j) return false;
        if (dir == 0) {
            // Came from a child: v is a non-collider on any continuation.
            if (!in_z[v]) {
                for (int p : dag.parents(v)) push(p, 0);
                for (int c : dag.children(v)) push(c, 1);
            }
        } else {
            // Came from a parent: continuing downward keeps v a non-collider,
            // turning upward makes v a collider.
            if (!in_z[v]) {
                for (int c : dag.children(v)) push(c, 1);
            }
            if (anc_of_z[v]) {
                for (int p : dag.parents(v)) push(p, 0);
            }
        }
    }
    return true;
}

}  // namespace

bool d_separated(const Dag& dag, int i, int j, const std::vector<int>& conditioning) {
    const int n = dag.n();
    check_node(n, i, "node");
    check_node(n, j, "node");
    if (i == j) throw InputError("d-separation query requires i != j");
    std::vector<char> in_z(n, 0);
    for (int z : conditioning) {
        check_node(n, z, "conditioning node");
        if (z == i || z == j) {
            throw InputError("conditioning set overlaps query pair");
        }
        in_z[z] = 1;
    }
    return d_separated_generic(dag, i, j, in_z);
}

bool common_cause_free(const Dag& dag, int i, int j) {
    const int n = dag.n();
    check_node(n, i, "node");
    check_node(n, j, "node");
    if (i == j) throw InputError("pair query requires distinct nodes");
    const std::vector<int> ai = ancestors(dag, i);
    const std::vector<int> aj = ancestors(dag, j);
    std::vector<int> common;
    std::set_intersection(ai.begin(), ai.end(), aj.begin(), aj.end(), std::back_inserter(common));
    for (int c : common) {
        if (c != i && c != j) return false;
    }
    return true;
}

}  // namespace causalcast
