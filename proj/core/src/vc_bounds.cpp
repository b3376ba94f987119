#include "causalcast/vc_bounds.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "causalcast/enumerate.hpp"
#include "causalcast/errors.hpp"
#include "causalcast/rng.hpp"
#include "causalcast/synth.hpp"

namespace causalcast {

std::string to_string(BoundVariant v) {
    return v == BoundVariant::full ? "full" : "sqrt_only";
}

BoundVariant bound_variant_from_string(const std::string& s) {
    if (s == "full") return BoundVariant::full;
    if (s == "sqrt_only") return BoundVariant::sqrt_only;
    throw InputError("unknown bound variant '" + s + "'");
}

void BoundSpec::validate() const {
    if (k < 1) throw InputError("k must be >= 1");
    if (!(h >= 1.0)) throw InputError("h must be >= 1");
    if (!(eta > 0.0 && eta < 1.0)) throw InputError("eta must lie in (0, 1)");
    if (!(range_lo < range_hi)) throw InputError("range must satisfy A < B");
}

std::string ClassSpec::kind_name(Kind k) {
    switch (k) {
        case Kind::dag: return "dag";
        case Kind::polytree: return "polytree";
        case Kind::path_sign: return "path_sign";
        case Kind::path_corr: return "path_corr";
        case Kind::direction: return "direction";
    }
    return "?";
}

ClassSpec::Kind ClassSpec::kind_from_string(const std::string& s) {
    if (s == "dag") return Kind::dag;
    if (s == "polytree") return Kind::polytree;
    if (s == "path_sign") return Kind::path_sign;
    if (s == "path_corr") return Kind::path_corr;
    if (s == "direction") return Kind::direction;
    throw InputError("unknown class kind '" + s + "'");
}

double vc_upper(const ClassSpec& cs) {
    if (cs.n < 1) throw InputError("class size n must be >= 1");
    const double n = static_cast<double>(cs.n);
    switch (cs.kind) {
        case ClassSpec::Kind::dag: return n * std::log2(n) + n * (n - 1.0) / 2.0;
        case ClassSpec::Kind::polytree: return n * (std::log2(n) + 1.0);
        case ClassSpec::Kind::path_sign: return n;
        case ClassSpec::Kind::path_corr: return cs.h_override.value_or(4.0 * (n + 1.0));
        case ClassSpec::Kind::direction: return n - 1.0;
    }
    return 0.0;
}

double binary_bound(const BoundSpec& bs) {
    bs.validate();
    const double k = static_cast<double>(bs.k);
    const double radicand = (bs.h * (std::log(2.0 * k / bs.h) + 1.0) - std::log(bs.eta / 9.0)) / k;
    const double factor = bs.variant == BoundVariant::full ? 2.0 : 1.0;
    return factor * std::sqrt(radicand);  // NaN when the radicand is negative
}

double real_bound(const BoundSpec& bs) {
    bs.validate();
    const double k = static_cast<double>(bs.k);
    const double radicand = (bs.h * (std::log(k / bs.h) + 1.0) - std::log(bs.eta / 4.0)) / k;
    return (bs.range_hi - bs.range_lo) * std::sqrt(radicand);
}

namespace {

bool bound_ok(double h, double eta, BoundVariant variant, std::uint64_t k, double eps) {
    const double b = binary_bound(BoundSpec{k, h, eta, 0.0, 1.0, variant});
    return std::isfinite(b) && b <= eps;
}

}  // namespace

std::uint64_t required_k(double h, double eta, double epsilon_target, BoundVariant variant) {
    if (!(epsilon_target > 0.0)) throw InputError("epsilon target must be positive");
    BoundSpec probe{1, h, eta, 0.0, 1.0, variant};
    probe.validate();

    // Search domain: k >= h/2, where the radicand is positive and the bound
    // strictly decreasing. Below that the formula is vacuous (undefined or
    // non-monotone around the radicand's zero crossing).
    const std::uint64_t domain_start =
        std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::ceil(h / 2.0)));
    if (bound_ok(h, eta, variant, domain_start, epsilon_target)) return domain_start;

    std::uint64_t lo = domain_start;  // known failing
    std::uint64_t hi = domain_start;
    while (!bound_ok(h, eta, variant, hi, epsilon_target)) {
        if (hi > (std::uint64_t{1} << 62)) {
            throw CapacityError("required_k exceeds 2^62; target epsilon unreachable");
        }
        lo = hi;
        hi *= 2;
    }
    while (hi - lo > 1) {
        const std::uint64_t mid = lo + (hi - lo) / 2;
        if (bound_ok(h, eta, variant, mid, epsilon_target)) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    // Definitional post-check: hi satisfies, hi - 1 does not.
    if (!bound_ok(h, eta, variant, hi, epsilon_target) ||
        bound_ok(h, eta, variant, hi - 1, epsilon_target)) {
        throw Error("required_k bisection postcondition failed");
    }
    return hi;
}

std::vector<Figure1Row> figure1_curves(int n_min, int n_max, double eta, double epsilon_target) {
    if (n_min < 3 || n_max < n_min) throw InputError("figure1 range needs 3 <= n_min <= n_max");
    std::vector<Figure1Row> rows;
    rows.reserve(n_max - n_min + 1);
    for (int n = n_min; n <= n_max; ++n) {
        Figure1Row row;
        row.n = n;
        const double h = static_cast<double>(n) * (std::log2(static_cast<double>(n)) + 1.0);
        row.required_k_full = required_k(h, eta, epsilon_target, BoundVariant::full);
        row.required_k_sqrt_only = required_k(h, eta, epsilon_target, BoundVariant::sqrt_only);
        row.possible_tests = static_cast<std::uint64_t>(n) * (n - 1) * (n - 2) / 2;
        row.ratio_full = static_cast<double>(row.required_k_full) / row.possible_tests;
        row.ratio_sqrt_only = static_cast<double>(row.required_k_sqrt_only) / row.possible_tests;
        rows.push_back(row);
    }
    return rows;
}

std::vector<Query> shatter_universe(ClassSpec::Kind cls, int n) {
    switch (cls) {
        case ClassSpec::Kind::dag:
        case ClassSpec::Kind::polytree:
            return query_universe(QueryKind::cond_indep, n);
        case ClassSpec::Kind::path_sign:
            return query_universe(QueryKind::sign_corr, n);
        case ClassSpec::Kind::direction: {
            std::vector<Query> pairs;
            for (int a = 0; a < n; ++a) {
                for (int b = a + 1; b < n; ++b) {
                    pairs.push_back(Query{QueryKind::direction, {a, b}, {}});
                }
            }
            return pairs;
        }
        case ClassSpec::Kind::path_corr:
            throw InputError("path_corr is real-valued; no shatter universe is defined");
    }
    return {};
}

namespace {

int outcome_bit(const Outcome& o) {
    if (o.type == Outcome::Type::binary) return o.value == 0.0 ? 0 : 1;
    if (o.type == Outcome::Type::sign) return o.value > 0.0 ? 1 : 0;
    throw InputError("shattering is defined for binary and sign outcomes only");
}

void for_each_class_model(ClassSpec::Kind cls, int n,
                          const std::function<void(const CausalModel&)>& fn) {
    switch (cls) {
        case ClassSpec::Kind::dag:
            for_each_model(ModelClass::dag, n, fn);
            break;
        case ClassSpec::Kind::polytree:
            for_each_model(ModelClass::polytree, n, fn);
            break;
        case ClassSpec::Kind::path_sign:
            for_each_model(ModelClass::path_sign, n, fn);
            break;
        case ClassSpec::Kind::direction:
            for_each_model(ModelClass::dag, n, [&](const CausalModel& m) {
                if (all_pairs_path_connected(std::get<Dag>(m))) fn(m);
            });
            break;
        case ClassSpec::Kind::path_corr:
            throw InputError("path_corr is not enumerable");
    }
}

constexpr int kMaxShatterQueries = 24;

// Distinct label patterns of the class over the universe, bit-packed.
struct LabelPatterns {
    std::size_t words = 0;
    std::vector<std::uint64_t> flat;  // patterns.size() * words

    std::size_t count() const { return words == 0 ? 0 : flat.size() / words; }
};

LabelPatterns collect_patterns(ClassSpec::Kind cls, int n, const std::vector<Query>& universe) {
    LabelPatterns out;
    out.words = (universe.size() + 63) / 64;
    std::unordered_set<std::string> seen;
    std::vector<std::uint64_t> buf(out.words);
    for_each_class_model(cls, n, [&](const CausalModel& m) {
        std::fill(buf.begin(), buf.end(), 0);
        for (std::size_t q = 0; q < universe.size(); ++q) {
            if (outcome_bit(model_predict(m, universe[q]))) {
                buf[q / 64] |= std::uint64_t{1} << (q % 64);
            }
        }
        std::string key(reinterpret_cast<const char*>(buf.data()),
                        buf.size() * sizeof(std::uint64_t));
        if (seen.insert(std::move(key)).second) {
            out.flat.insert(out.flat.end(), buf.begin(), buf.end());
        }
    });
    return out;
}

bool subset_shattered(const LabelPatterns& patterns, const std::vector<int>& subset) {
    const std::size_t m = subset.size();
    if (m == 0) return true;
    const std::size_t needed = std::size_t{1} << m;
    if (patterns.count() < needed) return false;
    std::vector<char> seen(needed, 0);
    std::size_t found = 0;
    const std::size_t count = patterns.count();
    for (std::size_t p = 0; p < count; ++p) {
        const std::uint64_t* words = patterns.flat.data() + p * patterns.words;
        std::size_t label = 0;
        for (std::size_t b = 0; b < m; ++b) {
            const int q = subset[b];
            if (words[q / 64] & (std::uint64_t{1} << (q % 64))) label |= std::size_t{1} << b;
        }
        if (!seen[label]) {
            seen[label] = 1;
            if (++found == needed) return true;
        }
    }
    return false;
}

}  // namespace

bool shatters(ClassSpec::Kind cls, int n, const std::vector<Query>& queries) {
    if (queries.size() > kMaxShatterQueries) {
        throw CapacityError("shatter check is capped at " + std::to_string(kMaxShatterQueries) +
                            " queries");
    }
    for (const auto& q : queries) {
        validate_query(q, n);
        if (q.kind == QueryKind::corr_value) {
            throw InputError("shattering is defined for binary and sign outcomes only");
        }
    }
    if (queries.empty()) return true;

    const std::size_t needed = std::size_t{1} << queries.size();
    std::vector<char> seen(needed, 0);
    std::size_t found = 0;
    bool shattered = false;
    // Full enumeration; cheap at the desk-scale caps this inherits.
    for_each_class_model(cls, n, [&](const CausalModel& m) {
        if (shattered) return;
        std::size_t label = 0;
        for (std::size_t b = 0; b < queries.size(); ++b) {
            if (outcome_bit(model_predict(m, queries[b]))) label |= std::size_t{1} << b;
        }
        if (!seen[label]) {
            seen[label] = 1;
            if (++found == needed) shattered = true;
        }
    });
    return shattered;
}

int estimate_vc(ClassSpec::Kind cls, int n, std::uint64_t search_budget, std::uint64_t seed) {
    const std::vector<Query> universe = shatter_universe(cls, n);
    if (universe.empty()) return 0;
    const LabelPatterns patterns = collect_patterns(cls, n, universe);
    const int u = static_cast<int>(universe.size());

    std::uint64_t checks_left = std::max<std::uint64_t>(search_budget, 1);
    int best = 0;

    // Exhaustive phase: all subsets of size m while that stays affordable.
    for (int m = 1; m <= std::min(u, kMaxShatterQueries); ++m) {
        double subsets = 1.0;
        for (int i = 0; i < m; ++i) subsets *= static_cast<double>(u - i) / (i + 1);
        if (subsets > static_cast<double>(checks_left) || subsets > 5e4) break;

        std::vector<int> subset(m);
        for (int i = 0; i < m; ++i) subset[i] = i;
        bool found = false;
        while (true) {
            --checks_left;
            if (subset_shattered(patterns, subset)) {
                found = true;
                break;
            }
            int i = m - 1;
            while (i >= 0 && subset[i] == u - m + i) --i;
            if (i < 0) break;
            ++subset[i];
            for (int j = i + 1; j < m; ++j) subset[j] = subset[j - 1] + 1;
        }
        if (!found) return best;  // proven: no set of size m is shattered
        best = m;
    }

    // Greedy phase for sizes whose subset counts are out of reach.
    Rng rng(seed);
    while (checks_left > static_cast<std::uint64_t>(u)) {
        std::vector<int> order(u);
        for (int i = 0; i < u; ++i) order[i] = i;
        rng.shuffle(order);
        std::vector<int> current;
        for (int idx : order) {
            if (static_cast<int>(current.size()) >= kMaxShatterQueries) break;
            current.push_back(idx);
            --checks_left;
            if (!subset_shattered(patterns, current)) current.pop_back();
            if (checks_left == 0) break;
        }
        best = std::max(best, static_cast<int>(current.size()));
        if (checks_left <= static_cast<std::uint64_t>(u)) break;
    }
    return best;
}

}  // namespace causalcast
