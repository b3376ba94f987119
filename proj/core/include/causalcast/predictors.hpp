#ifndef CAUSALCAST_PREDICTORS_HPP
#define CAUSALCAST_PREDICTORS_HPP

#include <string>
#include <variant>
#include <vector>

#include "causalcast/graph.hpp"

namespace causalcast {

enum class QueryKind { cond_indep, sign_corr, corr_value, direction, anm_admissible };

std::string to_string(QueryKind kind);
QueryKind query_kind_from_string(const std::string& s);

/// A statistical-property question about a variable tuple.
///   cond_indep:      vars = {Y1, Y2} (unordered), cond = conditioning set
///   sign_corr:       vars = unordered pair
///   corr_value:      vars = unordered pair
///   direction:       vars = ordered pair
///   anm_admissible:  vars = fully ordered tuple (>= 2)
struct Query {
    QueryKind kind = QueryKind::cond_indep;
    VariableTuple vars;
    VariableTuple cond;

    /// Normalizes order-irrelevant parts (pair and conditioning set sorted)
    /// so that equivalent queries compare equal.
    Query canonical() const;
    std::string key() const;

    bool operator==(const Query& other) const = default;
};

/// Throws QueryError unless arity and ranges match the query kind.
void validate_query(const Query& q, int n);

/// Value of a statistical property: binary {0,1}, sign {-1,+1}, or real.
struct Outcome {
    enum class Type { binary, sign, real };

    Type type = Type::binary;
    double value = 0.0;

    static Outcome binary(int v);
    static Outcome sign(int v);
    static Outcome real(double v);

    bool operator==(const Outcome& other) const = default;
};

/// For cond_indep outcomes: 0 encodes "independence implied". This helper
/// carries the semantic label so callers never have to remember the coding.
inline bool indicates_independence(const Outcome& o) { return o.value == 0.0; }

/// Collider-free path with node order `perm` and correlations between
/// consecutive path nodes. perm[p] is the node at path position p.
class PathModel {
public:
    PathModel() = default;
    PathModel(std::vector<int> perm, std::vector<double> adj_corr);

    int n() const { return static_cast<int>(perm_.size()); }
    const std::vector<int>& perm() const { return perm_; }
    const std::vector<double>& adj_corr() const { return adj_corr_; }
    int position_of(int node) const;

    std::string canonical_key() const;
    bool operator==(const PathModel& other) const {
        return perm_ == other.perm_ && adj_corr_ == other.adj_corr_;
    }

private:
    std::vector<int> perm_;
    std::vector<double> adj_corr_;
    std::vector<int> inverse_;
};

/// Collider-free path carrying only the signs of adjacent correlations.
class PathSignModel {
public:
    PathSignModel() = default;
    PathSignModel(std::vector<int> perm, std::vector<int> adj_sign);

    int n() const { return static_cast<int>(perm_.size()); }
    const std::vector<int>& perm() const { return perm_; }
    const std::vector<int>& adj_sign() const { return adj_sign_; }
    int position_of(int node) const;

    std::string canonical_key() const;
    bool operator==(const PathSignModel& other) const {
        return perm_ == other.perm_ && adj_sign_ == other.adj_sign_;
    }

private:
    std::vector<int> perm_;
    std::vector<int> adj_sign_;
    std::vector<int> inverse_;
};

using CausalModel = std::variant<Dag, Polytree, PathModel, PathSignModel>;

enum class ModelClass { dag, polytree, path, path_sign };

std::string to_string(ModelClass c);
ModelClass model_class_from_string(const std::string& s);
ModelClass model_class_of(const CausalModel& model);
std::string canonical_key(const CausalModel& model);

/// Conditional-independence prediction: 0 iff the graph d-separates the
/// pair given the conditioning set, 1 otherwise (faithfulness reading).
Outcome predict_ci(const Dag& model, const Query& q);

/// +1 if a directed path i~>j exists, -1 for j~>i; throws
/// ModelOutsideClassError when neither direction is reachable.
Outcome predict_direction(const Dag& model, int i, int j);

/// Sign of the correlation between i and j: product of adjacent signs
/// between the two path positions.
Outcome predict_sign(const PathSignModel& model, int i, int j);

/// Correlation between i and j: product of adjacent correlations between
/// the two path positions. Symmetric in (i, j); i == j is rejected.
Outcome predict_corr(const PathModel& model, int i, int j);

enum class AnmReading { standard, literal };

/// Sufficiency half of the additive-noise admissibility predicate.
///   standard: every common ancestor of two tuple members is in the tuple.
///   literal:  no two tuple members share any common ancestor at all.
/// "Common ancestor" is a strict third node (not one of the pair itself).
bool anm_sufficiency_ok(const Dag& model, const VariableTuple& tuple, AnmReading reading);

/// Order half: no later tuple member is an ancestor of an earlier one.
bool anm_order_consistent(const Dag& model, const VariableTuple& tuple);

/// 1 iff both sufficiency and order consistency hold.
Outcome predict_anm_admissible(const Dag& model, const VariableTuple& tuple,
                               AnmReading reading = AnmReading::standard);

/// Dispatches a query to the matching predictor of `model`; throws
/// QueryError when the model class cannot answer the query kind.
Outcome model_predict(const CausalModel& model, const Query& q);

}  // namespace causalcast

#endif
