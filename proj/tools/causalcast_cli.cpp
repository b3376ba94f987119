// Command-line front end: data/model generation, statistical tests, model
// fitting, bound evaluation, distribution merging, constrained enumeration
// and end-to-end experiments. Exit codes: 0 success, 1 input error,
// 2 capacity or inconsistency error.

#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "causalcast/errors.hpp"
#include "causalcast/io.hpp"
#include "causalcast/stat_tests.hpp"

namespace fs = std::filesystem;
using namespace causalcast;

namespace {

std::string format_real(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void emit(const std::optional<std::string>& out_path, const std::string& content) {
    if (out_path) {
        write_text_file(*out_path, content);
    } else {
        std::cout << content << '\n';
    }
}

std::vector<VariableTuple> parse_tuples(const std::string& spec) {
    std::vector<VariableTuple> tuples;
    std::stringstream groups(spec);
    std::string group;
    while (std::getline(groups, group, ';')) {
        VariableTuple tuple;
        std::stringstream items(group);
        std::string item;
        while (std::getline(items, item, ',')) {
            try {
                tuple.push_back(std::stoi(item));
            } catch (const std::exception&) {
                throw InputError("invalid variable index '" + item + "' in tuple spec");
            }
        }
        if (tuple.empty()) throw InputError("empty tuple in tuple spec");
        tuples.push_back(std::move(tuple));
    }
    if (tuples.empty()) throw InputError("no tuples given");
    return tuples;
}

std::pair<int, int> parse_range(const std::string& spec) {
    const auto dots = spec.find("..");
    if (dots == std::string::npos) {
        const int n = std::stoi(spec);
        return {n, n};
    }
    return {std::stoi(spec.substr(0, dots)), std::stoi(spec.substr(dots + 2))};
}

ManifestEntry pick_manifest_entry(const std::string& manifest_path, int index) {
    const auto entries = manifest_from_json(read_text_file(manifest_path));
    if (index < 0 || index >= static_cast<int>(entries.size())) {
        throw InputError("dataset index " + std::to_string(index) + " out of range for manifest");
    }
    ManifestEntry entry = entries[static_cast<std::size_t>(index)];
    const fs::path base = fs::path(manifest_path).parent_path();
    entry.file = (base / entry.file).string();
    return entry;
}

Dataset load_from_manifest(const std::string& manifest_path, int index) {
    const ManifestEntry entry = pick_manifest_entry(manifest_path, index);
    return load_dataset_csv(entry.file, entry.vars);
}

struct GenerateOptions {
    std::string what;
    std::string cls = "dag";
    int n = 5;
    std::uint64_t seed = 1;
    double edge_prob = 0.5;
    double coeff_lo = 0.5;
    double coeff_hi = 0.9;
    std::string noise = "gaussian";
    double noise_param = 1.0;
    long l = 1000;
    std::string graph_file;
    std::string sem_file;
    std::optional<std::string> out;
};

GeneratorParams generator_params(const GenerateOptions& opt) {
    GeneratorParams params;
    params.edge_prob = opt.edge_prob;
    params.coeff_lo = opt.coeff_lo;
    params.coeff_hi = opt.coeff_hi;
    params.noise_kind = opt.noise == "uniform" ? NoiseSpec::Kind::uniform : NoiseSpec::Kind::gaussian;
    params.noise_param = opt.noise_param;
    if (opt.noise != "gaussian" && opt.noise != "uniform") {
        throw InputError("unknown noise kind '" + opt.noise + "'");
    }
    return params;
}

int run_generate(const GenerateOptions& opt) {
    const GeneratorParams params = generator_params(opt);
    if (opt.what == "graph") {
        const CausalModel model = sample_graph(model_class_from_string(opt.cls), opt.n, opt.seed, params);
        emit(opt.out, model_to_json(model));
        return 0;
    }
    if (opt.what == "sem") {
        Dag graph;
        if (!opt.graph_file.empty()) {
            graph = graph_from_json(read_text_file(opt.graph_file));
        } else {
            const CausalModel model =
                sample_graph(model_class_from_string(opt.cls), opt.n, opt.seed, params);
            if (const auto* pm = std::get_if<PathModel>(&model)) {
                emit(opt.out, sem_to_json(path_sem(*pm)));
                return 0;
            }
            graph = std::holds_alternative<Dag>(model) ? std::get<Dag>(model)
                                                       : std::get<Polytree>(model).dag();
        }
        emit(opt.out, sem_to_json(sample_sem(graph, opt.seed, params)));
        return 0;
    }
    if (opt.what == "data") {
        if (opt.sem_file.empty()) throw InputError("generate data needs --sem");
        const LinearSem sem = sem_from_json(read_text_file(opt.sem_file));
        const Dataset d = sample_data(sem, opt.l, opt.seed);
        const std::string out_csv = opt.out.value_or("data.csv");
        save_dataset_csv(d, out_csv);
        const fs::path csv_path(out_csv);
        const std::string manifest_path = (csv_path.parent_path() /
                                           (csv_path.stem().string() + ".manifest.json"))
                                              .string();
        write_text_file(manifest_path, manifest_to_json({{csv_path.filename().string(), d.vars}}));
        std::cerr << "wrote " << out_csv << " and " << manifest_path << '\n';
        return 0;
    }
    throw InputError("generate expects graph | sem | data");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"causalcast: predict statistical properties of never-jointly-observed "
                 "variable sets via causal model classes"};
    app.require_subcommand(1);

    // generate ---------------------------------------------------------
    GenerateOptions gen;
    auto* generate = app.add_subcommand("generate", "Sample graphs, SEMs, or datasets");
    generate->add_option("what", gen.what, "graph | sem | data")->required();
    generate->add_option("--class", gen.cls, "dag | polytree | path | path_sign");
    generate->add_option("--n", gen.n, "number of variables");
    generate->add_option("--seed", gen.seed, "random seed");
    generate->add_option("--edge-prob", gen.edge_prob, "edge probability (dag class)");
    generate->add_option("--coeff-lo", gen.coeff_lo, "coefficient magnitude lower bound");
    generate->add_option("--coeff-hi", gen.coeff_hi, "coefficient magnitude upper bound");
    generate->add_option("--noise", gen.noise, "gaussian | uniform");
    generate->add_option("--noise-param", gen.noise_param, "variance (gaussian) or half-width (uniform)");
    generate->add_option("--l", gen.l, "rows to sample (data)");
    generate->add_option("--graph", gen.graph_file, "existing graph JSON (sem)");
    generate->add_option("--sem", gen.sem_file, "existing SEM JSON (data)");
    std::string gen_out;
    generate->add_option("--out", gen_out, "output path");

    // slice ------------------------------------------------------------
    std::string slice_manifest, slice_tuples, slice_prefix = "slice";
    std::string slice_row_mode = "shared";
    int slice_index = 0;
    std::uint64_t slice_seed = 1;
    auto* slice = app.add_subcommand("slice", "Project a dataset onto overlapping tuples");
    slice->add_option("--manifest", slice_manifest, "dataset manifest JSON")->required();
    slice->add_option("--dataset-index", slice_index, "entry to slice");
    slice->add_option("--tuples", slice_tuples, "e.g. \"0,1;1,2\"")->required();
    slice->add_option("--row-mode", slice_row_mode, "shared | disjoint");
    slice->add_option("--seed", slice_seed, "random seed (disjoint mode)");
    slice->add_option("--out-prefix", slice_prefix, "output file prefix");

    // test ---------------------------------------------------------------
    std::string test_manifest, test_queries, test_truth, test_direction_method = "cumulant";
    int test_index = 0;
    double test_alpha = 0.05, test_min_abs_corr = 0.02;
    std::string test_out;
    auto* test = app.add_subcommand("test", "Run statistical tests on a dataset");
    test->add_option("--manifest", test_manifest, "dataset manifest JSON")->required();
    test->add_option("--dataset-index", test_index, "entry to test");
    test->add_option("--queries", test_queries, "query file")->required();
    test->add_option("--alpha", test_alpha, "CI test significance level");
    test->add_option("--min-abs-corr", test_min_abs_corr, "sign test degeneracy floor");
    test->add_option("--direction-method", test_direction_method, "oracle | cumulant");
    test->add_option("--truth", test_truth, "ground-truth graph JSON (oracle direction)");
    test->add_option("--out", test_out, "output path");

    // fit ----------------------------------------------------------------
    std::string fit_queries, fit_class = "dag", fit_mode = "exhaustive", fit_out;
    int fit_n = 3, fit_budget = 200, fit_restarts = 4;
    std::uint64_t fit_seed = 1;
    auto* fit = app.add_subcommand("fit", "Fit a causal model to labeled queries");
    fit->add_option("--queries", fit_queries, "labeled query file")->required();
    fit->add_option("--class", fit_class, "dag | polytree | path | path_sign");
    fit->add_option("--n", fit_n, "number of variables")->required();
    fit->add_option("--mode", fit_mode, "exhaustive | local");
    fit->add_option("--budget", fit_budget, "local search steps per restart");
    fit->add_option("--restarts", fit_restarts, "local search restarts");
    fit->add_option("--seed", fit_seed, "local search seed");
    fit->add_option("--out", fit_out, "output path");

    // predict --------------------------------------------------------------
    std::string predict_model, predict_queries, predict_out, predict_anm_reading = "standard";
    auto* predict = app.add_subcommand("predict", "Evaluate model-induced properties");
    predict->add_option("--model", predict_model, "model JSON")->required();
    predict->add_option("--queries", predict_queries, "query file")->required();
    predict->add_option("--anm-reading", predict_anm_reading, "standard | literal");
    predict->add_option("--out", predict_out, "output path");

    // bounds ---------------------------------------------------------------
    std::uint64_t bounds_k = 1000;
    double bounds_h = 10.0, bounds_eta = 0.1, bounds_lo = -1.0, bounds_hi = 1.0;
    std::string bounds_variant = "full", bounds_kind = "binary", bounds_out;
    double bounds_invert = 0.0;
    auto* bounds = app.add_subcommand("bounds", "Evaluate generalization-bound deviation terms");
    bounds->add_option("--k", bounds_k, "number of data sets");
    bounds->add_option("--vc", bounds_h, "VC dimension h")->required();
    bounds->add_option("--eta", bounds_eta, "confidence parameter");
    bounds->add_option("--variant", bounds_variant, "full | sqrt_only");
    bounds->add_option("--kind", bounds_kind, "binary | real");
    bounds->add_option("--range-lo", bounds_lo, "A (real-valued bound)");
    bounds->add_option("--range-hi", bounds_hi, "B (real-valued bound)");
    bounds->add_option("--required-epsilon", bounds_invert,
                       "invert: smallest k with binary bound <= epsilon");
    bounds->add_option("--out", bounds_out, "output path");

    // figure1 ----------------------------------------------------------------
    std::string fig_range = "10..120", fig_out;
    double fig_eta = 0.1, fig_eps = 0.1;
    auto* figure1 = app.add_subcommand("figure1", "Required-k curves for the polytree scenario");
    figure1->add_option("--n", fig_range, "n range, e.g. 10..120");
    figure1->add_option("--eta", fig_eta, "confidence parameter");
    figure1->add_option("--epsilon", fig_eps, "deviation target");
    figure1->add_option("--out", fig_out, "output CSV path");

    // merge ---------------------------------------------------------------
    std::string merge_left, merge_right, merge_out;
    double merge_tol = 1e-9;
    auto* merge = app.add_subcommand("merge", "Chain-merge two overlapping distributions");
    merge->add_option("--left", merge_left, "P(X, Y) JSON")->required();
    merge->add_option("--right", merge_right, "P(Y, Z) JSON")->required();
    merge->add_option("--tol", merge_tol, "marginal consistency tolerance");
    merge->add_option("--out", merge_out, "output path");

    // enumerate -----------------------------------------------------------
    int enum_n = 3;
    std::string enum_constraints, enum_out;
    auto* enumerate = app.add_subcommand("enumerate", "Enumerate DAGs under causal constraints");
    enumerate->add_option("--n", enum_n, "number of variables")->required();
    enumerate->add_option("--constraints", enum_constraints, "constraint file");
    enumerate->add_option("--out", enum_out, "output path");

    // experiment ------------------------------------------------------------
    std::string exp_config, exp_out;
    auto* experiment = app.add_subcommand("experiment", "Run an end-to-end experiment");
    experiment->add_option("--config", exp_config, "experiment config JSON")->required();
    experiment->add_option("--out", exp_out, "report output path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << '\n';
        return 1;
    }

    const auto opt_out = [](const std::string& s) {
        return s.empty() ? std::optional<std::string>{} : std::optional<std::string>{s};
    };

    try {
        if (generate->parsed()) {
            gen.out = opt_out(gen_out);
            return run_generate(gen);
        }
        if (slice->parsed()) {
            const Dataset d = load_from_manifest(slice_manifest, slice_index);
            const RowMode mode = [&] {
                if (slice_row_mode == "shared") return RowMode::shared;
                if (slice_row_mode == "disjoint") return RowMode::disjoint;
                throw InputError("unknown row mode '" + slice_row_mode + "'");
            }();
            const auto tuples = parse_tuples(slice_tuples);
            const auto slices = slice_overlapping(d, tuples, mode, slice_seed);
            std::vector<ManifestEntry> entries;
            for (std::size_t i = 0; i < slices.size(); ++i) {
                const std::string file = slice_prefix + "_" + std::to_string(i) + ".csv";
                save_dataset_csv(slices[i], file);
                entries.push_back({file, slices[i].vars});
            }
            write_text_file(slice_prefix + "_manifest.json", manifest_to_json(entries));
            std::cerr << "wrote " << slices.size() << " slices with prefix " << slice_prefix << '\n';
            return 0;
        }
        if (test->parsed()) {
            const Dataset d = load_from_manifest(test_manifest, test_index);
            const auto queries = queries_from_json(read_text_file(test_queries));
            TestConfig cfg{test_alpha, test_min_abs_corr};
            std::optional<Dag> truth;
            if (!test_truth.empty()) truth = graph_from_json(read_text_file(test_truth));
            std::vector<std::pair<Query, Outcome>> outcomes;
            for (const auto& q : queries) {
                Outcome o;
                switch (q.kind) {
                    case QueryKind::cond_indep:
                        o = ci_test(d, q, cfg);
                        break;
                    case QueryKind::sign_corr:
                        o = sign_test(d, q.vars[0], q.vars[1], cfg);
                        break;
                    case QueryKind::corr_value:
                        o = Outcome::real(pearson_corr(d, q.vars[0], q.vars[1]));
                        break;
                    case QueryKind::direction: {
                        const DirectionMethod method = [&] {
                            if (test_direction_method == "oracle") return DirectionMethod::oracle;
                            if (test_direction_method == "cumulant") return DirectionMethod::cumulant;
                            throw InputError("unknown direction method '" + test_direction_method + "'");
                        }();
                        o = direction_test(d, q.vars[0], q.vars[1], method,
                                           truth ? &*truth : nullptr);
                        break;
                    }
                    case QueryKind::anm_admissible:
                        throw InputError("no data test is provided for anm queries; "
                                         "use predict with a ground-truth model");
                }
                outcomes.emplace_back(q, o);
            }
            emit(opt_out(test_out), outcomes_to_json(outcomes));
            return 0;
        }
        if (fit->parsed()) {
            const auto labeled = labeled_queries_from_json(read_text_file(fit_queries));
            const ModelClass cls = model_class_from_string(fit_class);
            FitResult result;
            if (fit_mode == "exhaustive") {
                result = fit_exhaustive(cls, fit_n, labeled);
            } else if (fit_mode == "local") {
                result = fit_local(cls, fit_n, labeled, fit_budget, fit_restarts, fit_seed);
            } else {
                throw InputError("unknown fit mode '" + fit_mode + "'");
            }
            emit(opt_out(fit_out), fit_result_to_json(result));
            return 0;
        }
        if (predict->parsed()) {
            const CausalModel model = model_from_json(read_text_file(predict_model));
            const auto queries = queries_from_json(read_text_file(predict_queries));
            const AnmReading reading = [&] {
                if (predict_anm_reading == "standard") return AnmReading::standard;
                if (predict_anm_reading == "literal") return AnmReading::literal;
                throw ConfigError("unknown anm reading '" + predict_anm_reading + "'");
            }();
            std::vector<std::pair<Query, Outcome>> outcomes;
            for (const auto& q : queries) {
                Outcome o;
                if (q.kind == QueryKind::anm_admissible) {
                    const Dag* dag = std::get_if<Dag>(&model);
                    const auto* pt = std::get_if<Polytree>(&model);
                    if (dag == nullptr && pt == nullptr) {
                        throw QueryError("anm queries need a graph model");
                    }
                    o = predict_anm_admissible(dag ? *dag : pt->dag(), q.vars, reading);
                } else {
                    o = model_predict(model, q);
                }
                outcomes.emplace_back(q, o);
            }
            emit(opt_out(predict_out), outcomes_to_json(outcomes));
            return 0;
        }
        if (bounds->parsed()) {
            BoundSpec bs;
            bs.k = bounds_k;
            bs.h = bounds_h;
            bs.eta = bounds_eta;
            bs.range_lo = bounds_lo;
            bs.range_hi = bounds_hi;
            bs.variant = bound_variant_from_string(bounds_variant);
            if (!bs.k_at_least_h()) {
                std::cerr << "warning: k < h; the bound is vacuous in this regime\n";
            }
            std::string content;
            if (bounds_invert > 0.0) {
                const std::uint64_t k = required_k(bs.h, bs.eta, bounds_invert, bs.variant);
                content = "{\n  \"required_k\": " + std::to_string(k) + "\n}";
                std::cout << k << '\n';
            } else {
                double eps = 0.0;
                if (bounds_kind == "binary") {
                    eps = binary_bound(bs);
                } else if (bounds_kind == "real") {
                    eps = real_bound(bs);
                } else {
                    throw InputError("unknown bound kind '" + bounds_kind + "'");
                }
                content = "{\n  \"epsilon\": " + format_real(eps) + "\n}";
                std::cout << format_real(eps) << '\n';
            }
            if (!bounds_out.empty()) write_text_file(bounds_out, content);
            return 0;
        }
        if (figure1->parsed()) {
            const auto [n_min, n_max] = parse_range(fig_range);
            const auto rows = figure1_curves(n_min, n_max, fig_eta, fig_eps);
            emit(opt_out(fig_out), figure1_to_csv(rows));
            return 0;
        }
        if (merge->parsed()) {
            const std::string left = read_text_file(merge_left);
            const std::string right = read_text_file(merge_right);
            const bool left_discrete = json_is_discrete_dist(left);
            if (left_discrete != json_is_discrete_dist(right)) {
                throw InputError("cannot merge a discrete with a gaussian distribution");
            }
            if (left_discrete) {
                const DiscreteDist merged =
                    merge_chain_discrete(discrete_from_json(left), discrete_from_json(right), merge_tol);
                emit(opt_out(merge_out), discrete_to_json(merged));
            } else {
                const GaussianDist merged =
                    merge_chain_gaussian(gaussian_from_json(left), gaussian_from_json(right), merge_tol);
                emit(opt_out(merge_out), gaussian_to_json(merged));
            }
            return 0;
        }
        if (enumerate->parsed()) {
            std::vector<CausalConstraint> constraints;
            if (!enum_constraints.empty()) {
                constraints = constraints_from_json(read_text_file(enum_constraints));
            }
            emit(opt_out(enum_out), graph_list_to_json(enumerate_constrained_dags(enum_n, constraints)));
            return 0;
        }
        if (experiment->parsed()) {
            const ExperimentConfig cfg = experiment_config_from_json(read_text_file(exp_config));
            const ExperimentReport report = run_experiment(cfg);
            emit(opt_out(exp_out), experiment_report_to_json(report));
            return 0;
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return e.exit_code();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
