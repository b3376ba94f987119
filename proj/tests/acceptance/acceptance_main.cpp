// Acceptance suite: each criterion prints one PASS/FAIL line with its
// runtime and is selectable via --criterion N. Exit code 0 iff every
// selected criterion passes within its time limit.

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "causalcast/enumerate.hpp"
#include "causalcast/experiment.hpp"
#include "causalcast/io.hpp"
#include "causalcast/merge.hpp"
#include "causalcast/rng.hpp"
#include "causalcast/stat_tests.hpp"
#include "../oracles/dsep_oracles.hpp"

using namespace causalcast;

namespace {

struct Outcome9 {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            if (!detail.empty()) detail += "; ";
            detail += what;
        }
    }
};

using BigFloat = boost::multiprecision::cpp_bin_float_50;

double binary_bound_oracle(std::uint64_t k, double h, double eta, BoundVariant variant) {
    const BigFloat bk(k), bh(h), beta(eta);
    const BigFloat radicand = (bh * (log(2 * bk / bh) + 1) - log(beta / 9)) / bk;
    if (radicand < 0) return std::nan("");
    return static_cast<double>((variant == BoundVariant::full ? 2 : 1) * sqrt(radicand));
}

double real_bound_oracle(std::uint64_t k, double h, double eta) {
    const BigFloat bk(k), bh(h), beta(eta);
    return static_cast<double>(sqrt((bh * (log(bk / bh) + 1) - log(beta / 4)) / bk));
}

// ---------------------------------------------------------------- 1 ----
Outcome9 criterion_1() {
    Outcome9 out;
    const std::vector<CausalConstraint> chain_constraints = {
        {CausalConstraint::Kind::edge_required, 0, 1, false},
        {CausalConstraint::Kind::edge_required, 1, 2, false},
        {CausalConstraint::Kind::unconfounded, 0, 1, false},
        {CausalConstraint::Kind::unconfounded, 1, 2, false},
    };
    const auto chains = enumerate_constrained_dags(3, chain_constraints);
    out.require(chains.size() == 1 && chains[0] == Dag(3, {{0, 1}, {1, 2}}),
                "chain constraints must yield exactly {0->1->2}");

    const std::vector<CausalConstraint> collider_constraints = {
        {CausalConstraint::Kind::edge_required, 0, 1, false},
        {CausalConstraint::Kind::edge_required, 2, 1, false},
        {CausalConstraint::Kind::unconfounded, 0, 1, false},
        {CausalConstraint::Kind::unconfounded, 2, 1, false},
    };
    const auto colliders = enumerate_constrained_dags(3, collider_constraints);
    out.require(colliders.size() == 1 && colliders[0] == Dag(3, {{0, 1}, {2, 1}}),
                "collider constraints must yield exactly {0->1<-2}");
    out.detail = "chain and collider constraint sets each select a unique DAG";
    return out;
}

// ---------------------------------------------------------------- 2 ----
Outcome9 criterion_2() {
    Outcome9 out;
    Rng rng(20240201);
    int done = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        const int cx = 2 + rng.below_int(2);
        const int cy = 2 + rng.below_int(2);
        const int cz = 2 + rng.below_int(2);
        std::vector<double> py(cy);
        double s = 0;
        for (auto& p : py) {
            p = 0.05 + rng.uniform01();
            s += p;
        }
        for (auto& p : py) p /= s;
        std::vector<double> pxy(static_cast<std::size_t>(cx) * cy), pyz(static_cast<std::size_t>(cy) * cz);
        for (int y = 0; y < cy; ++y) {
            std::vector<double> col(cx), row(cz);
            double sx = 0, sz = 0;
            for (auto& v : col) {
                v = 0.05 + rng.uniform01();
                sx += v;
            }
            for (auto& v : row) {
                v = 0.05 + rng.uniform01();
                sz += v;
            }
            for (int x = 0; x < cx; ++x) pxy[x * cy + y] = col[x] / sx * py[y];
            for (int z = 0; z < cz; ++z) pyz[y * cz + z] = row[z] / sz * py[y];
        }
        const DiscreteDist left({0, 1}, {cx, cy}, pxy);
        const DiscreteDist right({1, 2}, {cy, cz}, pyz);
        const DiscreteDist merged = merge_chain_discrete(left, right, 1e-9);
        out.require(total_variation(merged.marginal({0, 1}), left) <= 1e-9,
                    "left marginal must be preserved");
        out.require(total_variation(merged.marginal({1, 2}), right) <= 1e-9,
                    "right marginal must be preserved");
        out.require(check_ci_exact(merged, {QueryKind::cond_indep, {0, 2}, {1}}, 1e-9).holds,
                    "merged joint must satisfy X ci Z given Y");
        ++done;
        if (!out.pass) break;
    }

    for (int trial = 0; trial < 1000 && out.pass; ++trial) {
        const double vy = 0.5 + rng.uniform01();
        const double vx = 0.5 + rng.uniform01();
        const double vz = 0.5 + rng.uniform01();
        const double rxy = rng.uniform(-0.9, 0.9);
        const double ryz = rng.uniform(-0.9, 0.9);
        Eigen::MatrixXd cxy(2, 2), cyz(2, 2);
        cxy << vx, rxy * std::sqrt(vx * vy), rxy * std::sqrt(vx * vy), vy;
        cyz << vy, ryz * std::sqrt(vy * vz), ryz * std::sqrt(vy * vz), vz;
        const GaussianDist merged =
            merge_chain_gaussian(GaussianDist({0, 1}, Eigen::VectorXd::Zero(2), cxy),
                                 GaussianDist({1, 2}, Eigen::VectorXd::Zero(2), cyz), 1e-9);
        out.require(check_ci_exact(merged, {QueryKind::cond_indep, {0, 2}, {1}}, 1e-12).holds,
                    "gaussian merge must zero the partial correlation");
    }
    std::ostringstream os;
    os << done << " discrete and 1000 gaussian random consistent pairs merged";
    out.detail = os.str();
    return out;
}

// ---------------------------------------------------------------- 3 ----
Outcome9 criterion_3() {
    Outcome9 out;
    std::uint64_t graphs = 0, queries = 0, mismatches = 0;
    for (int n = 1; n <= 4; ++n) {
        DagEnumerator e(n);
        while (auto dag = e.next()) {
            ++graphs;
            for (int i = 0; i < n; ++i) {
                for (int j = i + 1; j < n; ++j) {
                    std::vector<int> rest;
                    for (int v = 0; v < n; ++v) {
                        if (v != i && v != j) rest.push_back(v);
                    }
                    for (unsigned mask = 0; mask < (1u << rest.size()); ++mask) {
                        std::vector<int> z;
                        for (std::size_t b = 0; b < rest.size(); ++b) {
                            if (mask & (1u << b)) z.push_back(rest[b]);
                        }
                        ++queries;
                        if (d_separated(*dag, i, j, z) !=
                            oracles::d_separated_moral(*dag, i, j, z)) {
                            ++mismatches;
                        }
                    }
                }
            }
        }
    }
    out.require(graphs == 1 + 3 + 25 + 543, "expected 572 DAGs up to n=4");
    out.require(mismatches == 0, "d-separation must match the moralization oracle everywhere");
    std::ostringstream os;
    os << graphs << " DAGs, " << queries << " queries, " << mismatches << " mismatches";
    out.detail = os.str();
    return out;
}

// ---------------------------------------------------------------- 4 ----
Outcome9 criterion_4() {
    Outcome9 out;
    for (int n = 1; n <= 5; ++n) {
        for (auto kind : {ClassSpec::Kind::dag, ClassSpec::Kind::polytree,
                          ClassSpec::Kind::path_sign, ClassSpec::Kind::direction}) {
            const int est = estimate_vc(kind, n, 200000, 4);
            const double upper = vc_upper({kind, n, {}});
            std::ostringstream os;
            os << ClassSpec::kind_name(kind) << "(" << n << "): estimate " << est
               << " exceeds bound " << upper;
            out.require(static_cast<double>(est) <= upper + 1e-12, os.str());
            if (kind == ClassSpec::Kind::direction && n >= 3) {
                std::ostringstream msg;
                msg << "direction(" << n << ") must attain exactly n-1, got " << est;
                out.require(est == n - 1, msg.str());
            }
        }
    }
    out.detail = "shatter-search estimates stay below every lemma bound; direction is tight";
    return out;
}

// ---------------------------------------------------------------- 5 ----
Outcome9 criterion_5() {
    Outcome9 out;
    const std::uint64_t ks[] = {50, 100, 1000, 5000, 10000};
    const double hs[] = {1.0, 5.0, 10.0, 50.0};
    const double etas[] = {0.01, 0.05, 0.1, 0.3, 0.9};
    int points = 0;
    for (std::uint64_t k : ks) {
        for (double h : hs) {
            for (double eta : etas) {
                ++points;
                const double impl = binary_bound(BoundSpec{k, h, eta, 0.0, 1.0, BoundVariant::full});
                const double oracle = binary_bound_oracle(k, h, eta, BoundVariant::full);
                out.require(std::abs(impl - oracle) <= 1e-12 * std::abs(oracle),
                            "binary bound off at k=" + std::to_string(k));
                const double impl_r = real_bound(BoundSpec{k, h, eta, 0.0, 1.0, BoundVariant::full});
                const double oracle_r = real_bound_oracle(k, h, eta);
                out.require(std::abs(impl_r - oracle_r) <= 1e-12 * std::abs(oracle_r),
                            "real bound off at k=" + std::to_string(k));
            }
        }
    }

    int scan_points = 0;
    for (double h : hs) {
        for (double eta : {0.01, 0.1}) {
            for (double eps : {0.3, 0.6, 1.0, 1.5}) {
                for (auto variant : {BoundVariant::full, BoundVariant::sqrt_only}) {
                    ++scan_points;
                    const std::uint64_t fast = required_k(h, eta, eps, variant);
                    std::uint64_t scanned = 0;
                    const auto start = std::max<std::uint64_t>(
                        1, static_cast<std::uint64_t>(std::ceil(h / 2.0)));
                    for (std::uint64_t k = start; k <= 2000000; ++k) {
                        const double b = binary_bound(BoundSpec{k, h, eta, 0.0, 1.0, variant});
                        if (std::isfinite(b) && b <= eps) {
                            scanned = k;
                            break;
                        }
                    }
                    out.require(fast == scanned && scanned != 0,
                                "required_k deviates from the linear scan at h=" +
                                    std::to_string(h) + " eps=" + std::to_string(eps));
                }
            }
        }
    }
    std::ostringstream os;
    os << points << " bound grid points vs 50-digit oracle; " << scan_points
       << " required_k scan checks";
    out.detail = os.str();
    return out;
}

// ---------------------------------------------------------------- 6 ----
Outcome9 criterion_6() {
    Outcome9 out;
    const auto rows = figure1_curves(10, 120, 0.1, 0.1);
    out.require(rows.size() == 111, "expected 111 rows");
    bool below_one = false;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        out.require(r.possible_tests ==
                        static_cast<std::uint64_t>(r.n) * (r.n - 1) * (r.n - 2) / 2,
                    "possible_tests must equal n(n-1)(n-2)/2");
        if (i > 0) {
            out.require(r.required_k_full > rows[i - 1].required_k_full,
                        "required_k (full) must increase strictly");
            out.require(r.required_k_sqrt_only > rows[i - 1].required_k_sqrt_only,
                        "required_k (sqrt_only) must increase strictly");
            if (rows[i - 1].n >= 30) {
                out.require(r.ratio_full < rows[i - 1].ratio_full,
                            "ratio (full) must decrease strictly for n >= 30");
                out.require(r.ratio_sqrt_only < rows[i - 1].ratio_sqrt_only,
                            "ratio (sqrt_only) must decrease strictly for n >= 30");
            }
        }
        if (r.ratio_full < 1.0 || r.ratio_sqrt_only < 1.0) below_one = true;
    }
    out.require(below_one, "some variant's ratio must fall below 1 by n = 120");
    std::ostringstream os;
    os << "111 rows; ratio(sqrt_only) at n=120 is " << rows.back().ratio_sqrt_only;
    out.detail = os.str();
    return out;
}

// ---------------------------------------------------------------- 7 ----
Outcome9 criterion_7() {
    Outcome9 out;
    ExperimentConfig cfg;
    cfg.model_class = ModelClass::polytree;
    cfg.n = 15;
    cfg.l = 10000;
    cfg.k_train = 2000;
    cfg.k_test = 2000;
    cfg.eta = 0.1;
    cfg.budget = 400;
    cfg.restarts = 6;
    cfg.seeds.clear();
    for (std::uint64_t s = 1; s <= 20; ++s) cfg.seeds.push_back(s);

    cfg.label_source = LabelSource::stat_test;
    const ExperimentReport tested = run_experiment(cfg);
    int satisfied = 0;
    for (const auto& r : tested.seeds) {
        if (r.bound_satisfied.value_or(false)) ++satisfied;
    }
    out.require(satisfied >= 18, "bound satisfied in only " + std::to_string(satisfied) +
                                     "/20 seeds with test labels");

    cfg.label_source = LabelSource::oracle;
    const ExperimentReport oracle = run_experiment(cfg);
    int small_test_error = 0, oracle_satisfied = 0;
    for (const auto& r : oracle.seeds) {
        if (r.test_error.value_or(1.0) <= 0.1) ++small_test_error;
        if (r.bound_satisfied.value_or(false)) ++oracle_satisfied;
    }
    out.require(small_test_error >= 18, "oracle-label test error <= 0.1 in only " +
                                            std::to_string(small_test_error) + "/20 seeds");
    std::ostringstream os;
    os << "stat_test labels: " << satisfied << "/20 bounds hold; oracle labels: "
       << small_test_error << "/20 test errors <= 0.1 (" << oracle_satisfied
       << "/20 bounds hold)";
    out.detail = os.str();
    return out;
}

// ---------------------------------------------------------------- 8 ----
Outcome9 criterion_8() {
    Outcome9 out;
    const GeneratorParams params{};
    int within = 0, total = 0;
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        const PathModel truth =
std::get<PathModel>(sample_graph(ModelClass::path, 8, derive_seed(80, seed), params));
        const Dataset data = sample_data(path_sem(truth), 100000, derive_seed(81, seed));
        std::vector<CorrObservation> adjacent;
        for (int p = 0; p + 1 < 8; ++p) {
            const int i = truth.perm()[p];
            const int j = truth.perm()[p + 1];
            adjacent.push_back({i, j, pearson_corr(data, i, j)});
        }
        const PathParamsFit fit = fit_path_params(truth.perm(), adjacent);
        const PathModel fitted(truth.perm(), fit.adj_corr);
        for (int pi = 0; pi < 8; ++pi) {
            for (int pj = pi + 2; pj < 8; ++pj) {  // non-adjacent path positions
                const int i = truth.perm()[pi];
                const int j = truth.perm()[pj];
                ++total;
                if (std::abs(predict_corr(fitted, i, j).value - pearson_corr(data, i, j)) <= 0.05) {
                    ++within;
                }
            }
        }
    }
    out.require(total == 50 * 21, "expected 21 non-adjacent pairs per seed");
    out.require(static_cast<double>(within) / total >= 0.95,
                "only " + std::to_string(within) + "/" + std::to_string(total) +
                    " predictions within 0.05");
    std::ostringstream os;
    os << within << "/" << total << " non-adjacent correlation predictions within 0.05";
    out.detail = os.str();
    return out;
}

// ---------------------------------------------------------------- 9 ----
Outcome9 criterion_9() {
    Outcome9 out;
    const std::vector<Query> cycle = {{QueryKind::direction, {0, 1}, {}},
                                      {QueryKind::direction, {1, 2}, {}},
                                      {QueryKind::direction, {2, 0}, {}}};
    out.require(!shatters(ClassSpec::Kind::direction, 3, cycle),
                "the 3-cycle pair set must not be shattered at n=3");
    out.require(!shatters(ClassSpec::Kind::direction, 4, cycle),
                "the 3-cycle pair set must not be shattered at n=4");
    const std::vector<Query> star = {{QueryKind::direction, {0, 1}, {}},
                                     {QueryKind::direction, {0, 2}, {}},
                                     {QueryKind::direction, {0, 3}, {}}};
    out.require(shatters(ClassSpec::Kind::direction, 4, star),
                "the star pair set must be shattered at n=4");
    out.detail = "cycle unshattered at n=3,4; star shattered at n=4";
    return out;
}

struct Criterion {
    int id;
    const char* name;
    double time_limit_seconds;
    std::function<Outcome9()> run;
};

}  // namespace

int main(int argc, char** argv) {
    const std::vector<Criterion> criteria = {
        {1, "constrained enumeration uniqueness (chain and collider)", 1.0, criterion_1},
        {2, "merge correctness on random consistent pairs", 10.0, criterion_2},
        {3, "d-separation equals the moralization oracle up to n=4", 30.0, criterion_3},
        {4, "shatter-search estimates respect the VC lemmas", 300.0, criterion_4},
        {5, "bound formulas match the high-precision oracle and scans", 10.0, criterion_5},
        {6, "required-k curve trends", 60.0, criterion_6},
        {7, "polytree generalization experiment", 600.0, criterion_7},
        {8, "path-model correlation prediction", 120.0, criterion_8},
        {9, "directionality shattering facts", 10.0, criterion_9},
    };

    int only = 0;
    for (int a = 1; a + 1 < argc + 1; ++a) {
        if (std::string(argv[a]) == "--criterion" && a + 1 < argc) only = std::atoi(argv[a + 1]);
    }

    bool all_pass = true;
    for (const auto& c : criteria) {
        if (only != 0 && c.id != only) continue;
        const auto start = std::chrono::steady_clock::now();
        Outcome9 result;
        try {
            result = c.run();
        } catch (const std::exception& e) {
            result.pass = false;
            result.detail = std::string("exception: ") + e.what();
        }
        const double seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (seconds > c.time_limit_seconds) {
            result.pass = false;
            result.detail += " [exceeded time limit]";
        }
        all_pass = all_pass && result.pass;
        std::printf("%s criterion %d: %s — %s [%.2f s / limit %.0f s]\n",
                    result.pass ? "PASS" : "FAIL", c.id, c.name, result.detail.c_str(), seconds,
                    c.time_limit_seconds);
        std::fflush(stdout);
    }
    return all_pass ? 0 : 1;
}
