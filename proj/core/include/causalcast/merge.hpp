#ifndef CAUSALCAST_MERGE_HPP
#define CAUSALCAST_MERGE_HPP

#include <Eigen/Dense>

#include "causalcast/predictors.hpp"

namespace causalcast {

/// Discrete joint distribution over a variable tuple; probabilities are
/// stored row-major with the last variable varying fastest.
class DiscreteDist {
public:
    DiscreteDist() = default;
    DiscreteDist(VariableTuple vars, std::vector<int> cards, std::vector<double> probs);

    const VariableTuple& vars() const { return vars_; }
    const std::vector<int>& cards() const { return cards_; }
    const std::vector<double>& probs() const { return probs_; }

    int arity() const { return static_cast<int>(vars_.size()); }
    int index_of(int var) const;  // position in vars_; throws if absent

    double prob(const std::vector<int>& assignment) const;
    DiscreteDist marginal(const VariableTuple& subset) const;

    /// Flags set during construction of merged tables.
    bool zero_mass_rows = false;  // conditionals defaulted on P(shared)=0 rows

private:
    VariableTuple vars_;
    std::vector<int> cards_;
    std::vector<double> probs_;
    std::vector<std::size_t> strides_;
};

/// Total variation distance between two distributions on the same
/// variables (cells matched by assignment).
double total_variation(const DiscreteDist& a, const DiscreteDist& b);

/// Multivariate Gaussian over a variable tuple.
struct GaussianDist {
    VariableTuple vars;
    Eigen::VectorXd mean;
    Eigen::MatrixXd cov;

    GaussianDist() = default;
    GaussianDist(VariableTuple vars_, Eigen::VectorXd mean_, Eigen::MatrixXd cov_);

    int index_of(int var) const;
};

struct CausalConstraint {
    enum class Kind {
        edge_required,   // the directed edge i -> j must be present; with
                         // `indirect` set, any directed path i ~> j suffices
        unconfounded,    // no proper common cause: no third node with
                         // directed paths to both i and j that avoid the
                         // respective other pair member
        edge_forbidden,  // the directed edge i -> j must be absent
    };

    Kind kind = Kind::edge_required;
    int i = 0;
    int j = 0;
    bool indirect = false;

    static std::string kind_name(Kind k);
    static Kind kind_from_string(const std::string& s);
};

/// True iff some node c outside {i, j} has a directed path to i avoiding j
/// and a directed path to j avoiding i. A cause acting on j only through i
/// does not confound the pair; this is the sufficiency notion under which
/// a chain satisfies its own premises.
bool has_proper_common_cause(const Dag& dag, int i, int j);

bool satisfies(const Dag& dag, const CausalConstraint& c);

/// All DAGs on n nodes satisfying every constraint, in canonical
/// enumeration order. Full enumeration; n is capped at 5.
std::vector<Dag> enumerate_constrained_dags(int n, const std::vector<CausalConstraint>& constraints);

/// Chain merge of two overlapping bivariate tables through their shared
/// variable Y: entries P(x, y) * P(z | y). The Y-marginals must agree
/// within total variation tol. Rows with P(Y=y) = 0 get a uniform
/// conditional (flagged; they carry no mass).
DiscreteDist merge_chain_discrete(const DiscreteDist& p_xy, const DiscreteDist& p_yz, double tol = 1e-9);

/// Gaussian chain merge: cov(X, Z) = cov(X, Y) cov(Y, Z) / var(Y), all
/// other moments copied (Y's from p_xy). The construction zeroes the
/// partial correlation of (X, Z | Y).
GaussianDist merge_chain_gaussian(const GaussianDist& p_xy, const GaussianDist& p_yz, double tol = 1e-9);

struct CiCheck {
    bool holds = false;
    bool vacuous = false;  // every conditioning event had probability 0
};

/// Exact conditional-independence check on a distribution.
/// Discrete: max over cells of |P(a,b|c) - P(a|c) P(b|c)| <= tol across all
/// conditioning events of positive probability. Gaussian: |partial
/// correlation| <= tol.
CiCheck check_ci_exact(const DiscreteDist& dist, const Query& q, double tol);
CiCheck check_ci_exact(const GaussianDist& dist, const Query& q, double tol);

}  // namespace causalcast

#endif
