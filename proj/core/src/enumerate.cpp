#include "causalcast/enumerate.hpp"

#include <algorithm>
#include <numeric>

#include "causalcast/errors.hpp"

namespace causalcast {

namespace {

std::vector<Edge> directed_edge_universe(int n) {
    std::vector<Edge> universe;
    universe.reserve(static_cast<std::size_t>(n) * (n - 1));
    for (int p = 0; p < n; ++p) {
        for (int c = 0; c < n; ++c) {
            if (p != c) universe.emplace_back(p, c);
        }
    }
    std::sort(universe.begin(), universe.end());
    return universe;
}

void check_cap(ModelClass c, int n) {
    const int cap = enumeration_cap(c);
    if (n < 1) throw InputError("enumeration needs n >= 1");
    if (n > cap) {
        throw CapacityError("enumeration of class " + to_string(c) + " is capped at n <= " +
                            std::to_string(cap) + " (got n=" + std::to_string(n) + ")");
    }
}

}  // namespace

int enumeration_cap(ModelClass c) {
    switch (c) {
        case ModelClass::dag: return kMaxEnumerateDagN;
        case ModelClass::polytree: return kMaxEnumeratePolytreeN;
        case ModelClass::path:
        case ModelClass::path_sign: return kMaxEnumeratePathN;
    }
    return 0;
}

DagEnumerator::DagEnumerator(int n) : n_(n), children_(std::max(n, 0)) {
    check_cap(ModelClass::dag, n);
    universe_ = directed_edge_universe(n);
}

// Adding (p, c) keeps the selection acyclic iff no directed path c ~> p yet.
bool DagEnumerator::advance() {
    while (true) {
        for (int idx = next_candidate_; idx < static_cast<int>(universe_.size()); ++idx) {
            const auto& [p, c] = universe_[idx];
            std::vector<char> seen(n_, 0);
            std::vector<int> stack{c};
            bool reaches_p = false;
            while (!stack.empty() && !reaches_p) {
                const int v = stack.back();
                stack.pop_back();
                if (v == p) {
                    reaches_p = true;
                    break;
                }
                for (int w : children_[v]) {
                    if (!seen[w]) {
                        seen[w] = 1;
                        stack.push_back(w);
                    }
                }
            }
            if (!reaches_p) {
                chosen_.push_back(idx);
                children_[p].push_back(c);
                next_candidate_ = idx + 1;
                return true;
            }
        }
        if (chosen_.empty()) return false;
        const int last = chosen_.back();
        chosen_.pop_back();
        children_[universe_[last].first].pop_back();
        next_candidate_ = last + 1;
    }
}

std::optional<Dag> DagEnumerator::next() {
    if (done_) return std::nullopt;
    if (!emitted_empty_) {
        emitted_empty_ = true;
        return Dag(n_, {});
    }
    if (!advance()) {
        done_ = true;
        return std::nullopt;
    }
    std::vector<Edge> edges;
    edges.reserve(chosen_.size());
    for (int idx : chosen_) edges.push_back(universe_[idx]);
    return Dag(n_, std::move(edges));
}

PolytreeEnumerator::PolytreeEnumerator(int n) : n_(n), root_(n), size_(n, 1) {
    check_cap(ModelClass::polytree, n);
    universe_ = directed_edge_universe(n);
    std::iota(root_.begin(), root_.end(), 0);
}

bool PolytreeEnumerator::skeleton_joinable(const Edge& e) const {
    int a = e.first;
    while (root_[a] != a) a = root_[a];
    int b = e.second;
    while (root_[b] != b) b = root_[b];
    return a != b;
}

void PolytreeEnumerator::join(const Edge& e) {
    int a = e.first;
    while (root_[a] != a) a = root_[a];
    int b = e.second;
    while (root_[b] != b) b = root_[b];
    if (size_[a] > size_[b]) std::swap(a, b);
    undo_.push_back({a, b, size_[b]});
    root_[a] = b;
    size_[b] += size_[a];
}

void PolytreeEnumerator::unjoin() {
    const UndoRecord rec = undo_.back();
    undo_.pop_back();
    root_[rec.child_root] = rec.child_root;
    size_[rec.parent_root] = rec.parent_size;
}

std::optional<Polytree> PolytreeEnumerator::next() {
    if (done_) return std::nullopt;
    if (!emitted_empty_) {
        emitted_empty_ = true;
        return Polytree(Dag(n_, {}));
    }
    while (true) {
        bool extended = false;
        for (int idx = next_candidate_; idx < static_cast<int>(universe_.size()); ++idx) {
            if (skeleton_joinable(universe_[idx])) {
                chosen_.push_back(idx);
                join(universe_[idx]);
                next_candidate_ = idx + 1;
                extended = true;
                break;
            }
        }
        if (extended) break;
        if (chosen_.empty()) {
            done_ = true;
            return std::nullopt;
        }
        const int last = chosen_.back();
        chosen_.pop_back();
        unjoin();
        next_candidate_ = last + 1;
    }
    std::vector<Edge> edges;
    edges.reserve(chosen_.size());
    for (int idx : chosen_) edges.push_back(universe_[idx]);
    return Polytree(Dag(n_, std::move(edges)));
}

PathEnumerator::PathEnumerator(int n) : n_(n) {
    check_cap(ModelClass::path, n);
    perm_.resize(n);
    std::iota(perm_.begin(), perm_.end(), 0);
}

std::optional<PathModel> PathEnumerator::next() {
    while (!done_) {
        const std::vector<int> current = perm_;
        if (!std::next_permutation(perm_.begin(), perm_.end())) done_ = true;
        if (n_ == 1 || current.front() < current.back()) {
            return PathModel(current, std::vector<double>(n_ > 0 ? n_ - 1 : 0, 0.5));
        }
    }
    return std::nullopt;
}

PathSignEnumerator::PathSignEnumerator(int n) : n_(n) {
    check_cap(ModelClass::path_sign, n);
    perm_.resize(n);
    std::iota(perm_.begin(), perm_.end(), 0);
    sign_count_ = n > 1 ? (std::uint64_t{1} << (n - 1)) : 1;
}

std::optional<PathSignModel> PathSignEnumerator::next() {
    while (!done_) {
        if (n_ > 1 && perm_.front() > perm_.back()) {
            if (!std::next_permutation(perm_.begin(), perm_.end())) done_ = true;
            continue;
        }
        if (sign_bits_ < sign_count_) {
            std::vector<int> signs(n_ > 0 ? n_ - 1 : 0, 1);
            for (int b = 0; b < n_ - 1; ++b) {
                if (sign_bits_ & (std::uint64_t{1} << b)) signs[b] = -1;
            }
            ++sign_bits_;
            return PathSignModel(perm_, std::move(signs));
        }
        sign_bits_ = 0;
        if (!std::next_permutation(perm_.begin(), perm_.end())) done_ = true;
    }
    return std::nullopt;
}

void for_each_model(ModelClass c, int n, const std::function<void(const CausalModel&)>& fn) {
    switch (c) {
        case ModelClass::dag: {
            DagEnumerator e(n);
            while (auto m = e.next()) fn(CausalModel(std::move(*m)));
            break;
        }
        case ModelClass::polytree: {
            PolytreeEnumerator e(n);
            while (auto m = e.next()) fn(CausalModel(std::move(*m)));
            break;
        }
        case ModelClass::path: {
            PathEnumerator e(n);
            while (auto m = e.next()) fn(CausalModel(std::move(*m)));
            break;
        }
        case ModelClass::path_sign: {
            PathSignEnumerator e(n);
            while (auto m = e.next()) fn(CausalModel(std::move(*m)));
            break;
        }
    }
}

std::uint64_t count_models(ModelClass c, int n) {
    std::uint64_t count = 0;
    for_each_model(c, n, [&](const CausalModel&) { ++count; });
    return count;
}

bool all_pairs_path_connected(const Dag& dag) {
    const int n = dag.n();
    // Transitive closure by DFS from every node; n is desk-scale here.
    std::vector<std::vector<char>> reach(n, std::vector<char>(n, 0));
    for (int s = 0; s < n; ++s) {
        std::vector<int> stack{s};
        while (!stack.empty()) {
            const int v = stack.back();
            stack.pop_back();
            for (int c : dag.children(v)) {
                if (!reach[s][c]) {
                    reach[s][c] = 1;
                    stack.push_back(c);
                }
            }
        }
    }
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if (!reach[i][j] && !reach[j][i]) return false;
        }
    }
    return true;
}

}  // namespace causalcast
