#ifndef CAUSALCAST_ENUMERATE_HPP
#define CAUSALCAST_ENUMERATE_HPP

#include <cstdint>
#include <functional>
#include <optional>

#include "causalcast/predictors.hpp"

namespace causalcast {

// Full enumeration stays under ~1e7 items with these caps.
inline constexpr int kMaxEnumerateDagN = 5;
inline constexpr int kMaxEnumeratePolytreeN = 7;
inline constexpr int kMaxEnumeratePathN = 8;

int enumeration_cap(ModelClass c);

/// Yields every DAG on n nodes exactly once, ordered lexicographically on
/// the sorted edge list. Throws CapacityError when n exceeds the cap.
class DagEnumerator {
public:
    explicit DagEnumerator(int n);
    std::optional<Dag> next();

private:
    bool advance();

    int n_;
    std::vector<Edge> universe_;
    std::vector<int> chosen_;          // indices into universe_, ascending
    std::vector<std::vector<int>> children_;
    int next_candidate_ = 0;
    bool emitted_empty_ = false;
    bool done_ = false;
};

/// Yields every polytree (DAG with forest skeleton) on n nodes exactly
/// once, in the same lexicographic edge-list order.
class PolytreeEnumerator {
public:
    explicit PolytreeEnumerator(int n);
    std::optional<Polytree> next();

private:
    struct UndoRecord {
        int child_root;
        int parent_root;
        int parent_size;
    };

    bool skeleton_joinable(const Edge& e) const;
    void join(const Edge& e);
    void unjoin();

    int n_;
    std::vector<Edge> universe_;
    std::vector<int> chosen_;
    std::vector<int> root_;
    std::vector<int> size_;
    std::vector<UndoRecord> undo_;
    int next_candidate_ = 0;
    bool emitted_empty_ = false;
    bool done_ = false;
};

/// Path skeletons: permutations of 0..n-1 modulo reversal (canonical form
/// has perm.front() < perm.back()), in lexicographic permutation order.
/// Adjacent correlations are not enumerable (a continuum) and default to
/// 0.5 on every edge.
class PathEnumerator {
public:
    explicit PathEnumerator(int n);
    std::optional<PathModel> next();

private:
    int n_;
    std::vector<int> perm_;
    bool done_ = false;
};

/// Path sign models: canonical permutations crossed with all sign vectors
/// in {+1,-1}^(n-1). Order: permutation first, then the sign vector read
/// as a binary number with +1 -> 0, -1 -> 1.
class PathSignEnumerator {
public:
    explicit PathSignEnumerator(int n);
    std::optional<PathSignModel> next();

private:
    int n_;
    std::vector<int> perm_;
    std::uint64_t sign_bits_ = 0;
    std::uint64_t sign_count_ = 0;
    bool done_ = false;
};

/// Runs `fn` over every model of the class in canonical order.
void for_each_model(ModelClass c, int n, const std::function<void(const CausalModel&)>& fn);

/// Number of models in the class at size n (by enumeration).
std::uint64_t count_models(ModelClass c, int n);

/// True iff every pair of nodes is connected by a directed path in one
/// direction or the other (the model class of the directionality bound).
bool all_pairs_path_connected(const Dag& dag);

}  // namespace causalcast

#endif
