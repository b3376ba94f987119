#ifndef CAUSALCAST_GRAPH_HPP
#define CAUSALCAST_GRAPH_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace causalcast {

using Edge = std::pair<int, int>;  // (parent, child)

/// Ordered list of distinct global variable indices.
using VariableTuple = std::vector<int>;

/// Throws InputError unless all indices are distinct and in [0, n).
void validate_variable_tuple(int n, const VariableTuple& vars);

/// True iff the directed graph admits a topological order (Kahn's algorithm).
/// Throws InputError on out-of-range node indices or self-loops.
bool is_acyclic(int n, const std::vector<Edge>& edges);

/// Directed acyclic graph on nodes 0..n-1. Edges are stored sorted and
/// deduplicated; construction rejects self-loops, out-of-range indices and
/// directed cycles.
class Dag {
public:
    Dag() : n_(0) {}
    Dag(int n, std::vector<Edge> edges);

    int n() const { return n_; }
    const std::vector<Edge>& edges() const { return edges_; }
    const std::vector<int>& parents(int v) const { return parents_[v]; }
    const std::vector<int>& children(int v) const { return children_[v]; }
    bool has_edge(int parent, int child) const;

    /// One valid topological order (sources first).
    std::vector<int> topological_order() const;

    /// Canonical textual form; enumeration order and tie-breaking are
    /// lexicographic on this.
    std::string canonical_key() const;

    bool operator==(const Dag& other) const {
        return n_ == other.n_ && edges_ == other.edges_;
    }

private:
    int n_;
    std::vector<Edge> edges_;
    std::vector<std::vector<int>> parents_;
    std::vector<std::vector<int>> children_;
};

/// True iff the undirected skeleton of `dag` has no cycle (tree or forest).
bool is_polytree(const Dag& dag);

/// Dag whose skeleton is a tree or forest; construction enforces it.
class Polytree {
public:
    Polytree() = default;
    explicit Polytree(Dag dag);

    const Dag& dag() const { return dag_; }
    int n() const { return dag_.n(); }

    bool operator==(const Polytree& other) const { return dag_ == other.dag_; }

private:
    Dag dag_;
};

/// Nodes with a directed path to `node`, excluding `node` itself.
std::vector<int> ancestors(const Dag& dag, int node);

/// Nodes reachable from `node` by a directed path, excluding `node` itself.
std::vector<int> descendants(const Dag& dag, int node);

/// True iff a directed path from `from` to `to` exists (possibly length 0
/// is excluded: from != to required).
bool has_directed_path(const Dag& dag, int from, int to);

/// d-separation of i and j given `conditioning`, decided by a
/// reachability-style traversal over active trails (linear in edges).
/// Preconditions: i != j, neither i nor j in the conditioning set.
bool d_separated(const Dag& dag, int i, int j, const std::vector<int>& conditioning);

/// True iff no third node c (c not in {i, j}) is an ancestor of both i and j.
bool common_cause_free(const Dag& dag, int i, int j);

}  // namespace causalcast

#endif
