#ifndef CAUSALCAST_VC_BOUNDS_HPP
#define CAUSALCAST_VC_BOUNDS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "causalcast/predictors.hpp"

namespace causalcast {

/// The deviation term of the binary bound is
///   2 * sqrt((h (ln(2k/h) + 1) - ln(eta/9)) / k).
/// full keeps the leading factor 2, sqrt_only drops it (both readings of
/// the "square-root term" are emitted side by side where curves are
/// generated).
enum class BoundVariant { full, sqrt_only };

std::string to_string(BoundVariant v);
BoundVariant bound_variant_from_string(const std::string& s);

struct BoundSpec {
    std::uint64_t k = 1;     // number of data sets
    double h = 1.0;          // VC dimension (upper bounds may be fractional)
    double eta = 0.1;        // confidence parameter in (0, 1)
    double range_lo = 0.0;   // [A, B] for real-valued properties
    double range_hi = 1.0;
    BoundVariant variant = BoundVariant::full;

    void validate() const;
    bool k_at_least_h() const { return static_cast<double>(k) >= h; }
};

/// Model class whose VC dimension is bounded.
struct ClassSpec {
    enum class Kind { dag, polytree, path_sign, path_corr, direction };

    Kind kind = Kind::dag;
    int n = 1;
    std::optional<double> h_override;  // path_corr only (the bound is O(n))

    static std::string kind_name(Kind k);
    static Kind kind_from_string(const std::string& s);
};

/// VC-dimension upper bound of the class:
///   dag:       n log2 n + n(n-1)/2
///   polytree:  n (log2 n + 1)
///   path_sign: n
///   path_corr: h_override, defaulting to 4(n+1)
///   direction: n - 1
double vc_upper(const ClassSpec& cs);

/// Deviation term of the binary generalization bound. Returns NaN when the
/// radicand is negative (the bound is undefined for such small k).
double binary_bound(const BoundSpec& bs);

/// Deviation term (B-A) * sqrt((h (ln(k/h) + 1) - ln(eta/4)) / k) of the
/// real-valued bound.
double real_bound(const BoundSpec& bs);

/// Smallest k >= h/2 whose binary bound is <= epsilon_target, found by
/// exponential bracketing and bisection. The bound is finite and strictly
/// decreasing on that domain; below h/2 the formula is vacuous (the
/// radicand crosses zero), so that region is excluded from the search.
std::uint64_t required_k(double h, double eta, double epsilon_target, BoundVariant variant);

struct Figure1Row {
    int n = 0;
    std::uint64_t required_k_full = 0;
    std::uint64_t required_k_sqrt_only = 0;
    std::uint64_t possible_tests = 0;  // n(n-1)(n-2)/2 single-conditioner tests
    double ratio_full = 0.0;
    double ratio_sqrt_only = 0.0;
};

/// Required-k curves for the polytree scenario (h = n (log2 n + 1)),
/// emitted for both variant readings side by side.
std::vector<Figure1Row> figure1_curves(int n_min, int n_max, double eta, double epsilon_target);

/// True iff all 2^|queries| labelings of the binary/sign queries are
/// realized by some model of the class (by exhaustive enumeration).
bool shatters(ClassSpec::Kind cls, int n, const std::vector<Query>& queries);

/// Size of the largest query set found shattered: exhaustive search over
/// all subsets of each size while the subset count stays within budget,
/// then randomized greedy growth. A lower bound on the true VC dimension,
/// exact whenever the exhaustive phase covered the last searched size.
int estimate_vc(ClassSpec::Kind cls, int n, std::uint64_t search_budget, std::uint64_t seed);

/// Query universe used by estimate_vc: single-conditioner triples for the
/// graph classes, sign pairs for path_sign, ordered pairs (i < j) for
/// direction.
std::vector<Query> shatter_universe(ClassSpec::Kind cls, int n);

}  // namespace causalcast

#endif
