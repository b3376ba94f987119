#include "causalcast/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "causalcast/errors.hpp"

namespace causalcast {

using nlohmann::json;

namespace {

json parse(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        throw InputError(std::string("invalid JSON: ") + e.what());
    }
}

// Rethrows schema violations (missing keys, wrong types) as InputError.
template <typename F>
auto schema(F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const json::exception& e) {
        throw InputError(std::string("JSON schema violation: ") + e.what());
    }
}

json graph_json(const Dag& dag, const std::vector<std::string>& names) {
    json j;
    j["n"] = dag.n();
    j["edges"] = json::array();
    for (const auto& [p, c] : dag.edges()) j["edges"].push_back({p, c});
    if (!names.empty()) j["names"] = names;
    return j;
}

Dag dag_from(const json& j) {
    return schema([&] {
        const int n = j.at("n").get<int>();
        std::vector<Edge> edges;
        for (const auto& e : j.at("edges")) {
            if (!e.is_array() || e.size() != 2) throw InputError("edge must be a [parent, child] pair");
            edges.emplace_back(e[0].get<int>(), e[1].get<int>());
        }
        if (j.contains("names") && j.at("names").size() != static_cast<std::size_t>(n)) {
            throw InputError("names array length must equal n");
        }
        return Dag(n, std::move(edges));
    });
}

json query_json(const Query& q) {
    json j;
    j["kind"] = to_string(q.kind);
    j["vars"] = q.vars;
    if (!q.cond.empty() || q.kind == QueryKind::cond_indep) j["cond"] = q.cond;
    return j;
}

Query query_from(const json& j) {
    return schema([&] {
        Query q;
        q.kind = query_kind_from_string(j.at("kind").get<std::string>());
        q.vars = j.at("vars").get<VariableTuple>();
        if (j.contains("cond")) q.cond = j.at("cond").get<VariableTuple>();
        return q;
    });
}

json outcome_json(const Outcome& o) {
    json j;
    switch (o.type) {
        case Outcome::Type::binary:
            j["type"] = "binary";
            j["value"] = static_cast<int>(o.value);
            break;
        case Outcome::Type::sign:
            j["type"] = "sign";
            j["value"] = static_cast<int>(o.value);
            break;
        case Outcome::Type::real:
            j["type"] = "real";
            j["value"] = o.value;
            break;
    }
    return j;
}

Outcome outcome_from(const json& j, QueryKind kind) {
    return schema([&] {
        if (j.is_object()) {
            const std::string type = j.at("type").get<std::string>();
            if (type == "binary") return Outcome::binary(j.at("value").get<int>());
            if (type == "sign") return Outcome::sign(j.at("value").get<int>());
            if (type == "real") return Outcome::real(j.at("value").get<double>());
            throw InputError("unknown outcome type '" + type + "'");
        }
        // Bare numbers are interpreted by the query kind.
        const double v = j.get<double>();
        switch (kind) {
            case QueryKind::cond_indep:
            case QueryKind::anm_admissible:
                return Outcome::binary(static_cast<int>(v));
            case QueryKind::sign_corr:
            case QueryKind::direction:
                return Outcome::sign(static_cast<int>(v));
            case QueryKind::corr_value:
                return Outcome::real(v);
        }
        throw InputError("cannot interpret outcome");
    });
}

json model_json(const CausalModel& model) {
    json j;
    switch (model_class_of(model)) {
        case ModelClass::dag:
            j = graph_json(std::get<Dag>(model), {});
            j["class"] = "dag";
            break;
        case ModelClass::polytree:
            j = graph_json(std::get<Polytree>(model).dag(), {});
            j["class"] = "polytree";
            break;
        case ModelClass::path: {
            const auto& pm = std::get<PathModel>(model);
            j["class"] = "path";
            j["perm"] = pm.perm();
            j["adj_corr"] = pm.adj_corr();
            break;
        }
        case ModelClass::path_sign: {
            const auto& psm = std::get<PathSignModel>(model);
            j["class"] = "path_sign";
            j["perm"] = psm.perm();
            j["adj_sign"] = psm.adj_sign();
            break;
        }
    }
    return j;
}

CausalModel model_from(const json& j) {
    return schema([&]() -> CausalModel {
        if (j.contains("adj_corr")) {
            return PathModel(j.at("perm").get<std::vector<int>>(),
                             j.at("adj_corr").get<std::vector<double>>());
        }
        if (j.contains("adj_sign")) {
            return PathSignModel(j.at("perm").get<std::vector<int>>(),
                                 j.at("adj_sign").get<std::vector<int>>());
        }
        Dag dag = dag_from(j);
        if (j.value("class", "dag") == std::string("polytree")) return Polytree(std::move(dag));
        return dag;
    });
}

}  // namespace

std::string graph_to_json(const Dag& dag, const std::vector<std::string>& names) {
    return graph_json(dag, names).dump(2);
}

Dag graph_from_json(const std::string& text) { return dag_from(parse(text)); }

std::vector<std::string> graph_names_from_json(const std::string& text) {
    const json j = parse(text);
    if (!j.contains("names")) return {};
    return schema([&] { return j.at("names").get<std::vector<std::string>>(); });
}

std::string model_to_json(const CausalModel& model) { return model_json(model).dump(2); }

CausalModel model_from_json(const std::string& text) { return model_from(parse(text)); }

std::string queries_to_json(const std::vector<Query>& queries) {
    json j = json::array();
    for (const auto& q : queries) j.push_back(query_json(q));
    return j.dump(2);
}

std::vector<Query> queries_from_json(const std::string& text) {
    const json j = parse(text);
    if (!j.is_array()) throw InputError("query file must hold a JSON array");
    std::vector<Query> out;
    for (const auto& item : j) out.push_back(query_from(item));
    return out;
}

std::string labeled_queries_to_json(const std::vector<LabeledQuery>& queries) {
    json j = json::array();
    for (const auto& lq : queries) {
        json item;
        item["query"] = query_json(lq.query);
        item["outcome"] = outcome_json(lq.outcome);
        j.push_back(std::move(item));
    }
    return j.dump(2);
}

std::vector<LabeledQuery> labeled_queries_from_json(const std::string& text) {
    const json j = parse(text);
    if (!j.is_array()) throw InputError("labeled query file must hold a JSON array");
    std::vector<LabeledQuery> out;
    for (const auto& item : j) {
        LabeledQuery lq;
        lq.query = query_from(schema([&]() -> const json& { return item.at("query"); }));
        lq.outcome = outcome_from(schema([&]() -> const json& { return item.at("outcome"); }),
                                  lq.query.kind);
        out.push_back(std::move(lq));
    }
    return out;
}

std::string outcomes_to_json(const std::vector<std::pair<Query, Outcome>>& outcomes) {
    json j = json::array();
    for (const auto& [q, o] : outcomes) {
        json item;
        item["query"] = query_json(q);
        item["outcome"] = outcome_json(o);
        if (q.kind == QueryKind::cond_indep) {
            item["label"] = indicates_independence(o) ? "independent" : "dependent";
        }
        j.push_back(std::move(item));
    }
    return j.dump(2);
}

std::string fit_result_to_json(const FitResult& result) {
    json j;
    j["class"] = to_string(model_class_of(result.model));
    j["model"] = model_json(result.model);
    j["train_error"] = result.train_error;
    j["evaluations"] = result.evaluations;
    return j.dump(2);
}

std::string discrete_to_json(const DiscreteDist& dist) {
    json j;
    j["vars"] = dist.vars();
    j["cards"] = dist.cards();
    j["probs"] = dist.probs();
    return j.dump(2);
}

DiscreteDist discrete_from_json(const std::string& text) {
    const json j = parse(text);
    return schema([&] {
        return DiscreteDist(j.at("vars").get<VariableTuple>(),
                            j.at("cards").get<std::vector<int>>(),
                            j.at("probs").get<std::vector<double>>());
    });
}

std::string gaussian_to_json(const GaussianDist& dist) {
    json j;
    j["vars"] = dist.vars;
    j["mean"] = std::vector<double>(dist.mean.data(), dist.mean.data() + dist.mean.size());
    json cov = json::array();
    for (long r = 0; r < dist.cov.rows(); ++r) {
        json row = json::array();
        for (long c = 0; c < dist.cov.cols(); ++c) row.push_back(dist.cov(r, c));
        cov.push_back(std::move(row));
    }
    j["cov"] = std::move(cov);
    return j.dump(2);
}

GaussianDist gaussian_from_json(const std::string& text) {
    const json j = parse(text);
    return schema([&] {
        const auto vars = j.at("vars").get<VariableTuple>();
        const auto mean_vec = j.at("mean").get<std::vector<double>>();
        Eigen::VectorXd mean(static_cast<long>(mean_vec.size()));
        for (std::size_t i = 0; i < mean_vec.size(); ++i) mean(static_cast<long>(i)) = mean_vec[i];
        const json& cov_rows = j.at("cov");
        Eigen::MatrixXd cov(static_cast<long>(cov_rows.size()), static_cast<long>(cov_rows.size()));
        for (std::size_t r = 0; r < cov_rows.size(); ++r) {
            if (cov_rows[r].size() != cov_rows.size()) throw InputError("cov must be square");
            for (std::size_t c = 0; c < cov_rows.size(); ++c) {
                cov(static_cast<long>(r), static_cast<long>(c)) = cov_rows[r][c].get<double>();
            }
        }
        return GaussianDist(vars, std::move(mean), std::move(cov));
    });
}

bool json_is_discrete_dist(const std::string& text) {
    const json j = parse(text);
    if (j.contains("probs")) return true;
    if (j.contains("cov")) return false;
    throw InputError("distribution JSON needs either 'probs' or 'cov'");
}

std::string sem_to_json(const LinearSem& sem) {
    json j;
    j["graph"] = graph_json(sem.graph, {});
    j["coeffs"] = json::array();
    for (const auto& [edge, a] : sem.coeffs) {
        j["coeffs"].push_back({json(edge.first), json(edge.second), json(a)});
    }
    j["noise"] = json::array();
    for (const auto& ns : sem.noise) {
        json e;
        e["kind"] = ns.kind == NoiseSpec::Kind::gaussian ? "gaussian" : "uniform";
        e["param"] = ns.param;
        j["noise"].push_back(std::move(e));
    }
    return j.dump(2);
}

LinearSem sem_from_json(const std::string& text) {
    const json j = parse(text);
    return schema([&] {
        LinearSem sem;
        sem.graph = dag_from(j.at("graph"));
        for (const auto& c : j.at("coeffs")) {
            if (!c.is_array() || c.size() != 3) {
                throw InputError("coefficient entries must be [parent, child, value]");
            }
            sem.coeffs[{c[0].get<int>(), c[1].get<int>()}] = c[2].get<double>();
        }
        for (const auto& e : j.at("noise")) {
            NoiseSpec ns;
            const std::string kind = e.at("kind").get<std::string>();
            if (kind == "gaussian") {
                ns.kind = NoiseSpec::Kind::gaussian;
            } else if (kind == "uniform") {
                ns.kind = NoiseSpec::Kind::uniform;
            } else {
                throw InputError("unknown noise kind '" + kind + "'");
            }
            ns.param = e.at("param").get<double>();
            sem.noise.push_back(ns);
        }
        sem.validate();
        return sem;
    });
}

std::string constraints_to_json(const std::vector<CausalConstraint>& constraints) {
    json j = json::array();
    for (const auto& c : constraints) {
        json item;
        item["kind"] = CausalConstraint::kind_name(c.kind);
        item["i"] = c.i;
        item["j"] = c.j;
        if (c.indirect) item["indirect"] = true;
        j.push_back(std::move(item));
    }
    return j.dump(2);
}

std::vector<CausalConstraint> constraints_from_json(const std::string& text) {
    const json j = parse(text);
    if (!j.is_array()) throw InputError("constraint file must hold a JSON array");
    std::vector<CausalConstraint> out;
    for (const auto& item : j) {
        out.push_back(schema([&] {
            CausalConstraint c;
            c.kind = CausalConstraint::kind_from_string(item.at("kind").get<std::string>());
            c.i = item.at("i").get<int>();
            c.j = item.at("j").get<int>();
            c.indirect = item.value("indirect", false);
            return c;
        }));
    }
    return out;
}

std::string graph_list_to_json(const std::vector<Dag>& graphs) {
    json j;
    j["count"] = graphs.size();
    j["graphs"] = json::array();
    for (const auto& g : graphs) j["graphs"].push_back(graph_json(g, {}));
    return j.dump(2);
}

namespace {

std::string label_source_name(LabelSource s) {
    return s == LabelSource::oracle ? "oracle" : "stat_test";
}

std::string search_mode_name(SearchMode m) {
    return m == SearchMode::exhaustive ? "exhaustive" : "local";
}

std::string sample_mode_name(SampleMode m) {
    return m == SampleMode::with_replacement ? "with_replacement" : "without_replacement";
}

std::string row_mode_name(RowMode m) { return m == RowMode::shared ? "shared" : "disjoint"; }

}  // namespace

std::string experiment_config_to_json(const ExperimentConfig& cfg) {
    json j;
    j["schema"] = ExperimentConfig::kSchema;
    j["class"] = to_string(cfg.model_class);
    j["n"] = cfg.n;
    j["l"] = cfg.l;
    j["k_train"] = cfg.k_train;
    j["k_test"] = cfg.k_test;
    j["eta"] = cfg.eta;
    j["alpha"] = cfg.test_config.alpha;
    j["min_abs_corr"] = cfg.test_config.min_abs_corr;
    j["query_kind"] = to_string(cfg.query_kind);
    j["label_source"] = label_source_name(cfg.label_source);
    j["sample_mode"] = sample_mode_name(cfg.sample_mode);
    j["row_mode"] = row_mode_name(cfg.row_mode);
    j["bound_variant"] = to_string(cfg.bound_variant);
    j["generator"] = {{"edge_prob", cfg.generator.edge_prob},
                      {"coeff_lo", cfg.generator.coeff_lo},
                      {"coeff_hi", cfg.generator.coeff_hi},
                      {"noise", cfg.generator.noise_kind == NoiseSpec::Kind::gaussian ? "gaussian"
                                                                                      : "uniform"},
                      {"noise_param", cfg.generator.noise_param}};
    j["search"] = {{"mode", search_mode_name(cfg.search_mode)},
                   {"budget", cfg.budget},
                   {"restarts", cfg.restarts}};
    j["seeds"] = cfg.seeds;
    return j.dump(2);
}

ExperimentConfig experiment_config_from_json(const std::string& text) {
    const json j = parse(text);
    return schema([&] {
        ExperimentConfig cfg;
        const std::string schema_id = j.value("schema", ExperimentConfig::kSchema);
        if (schema_id != ExperimentConfig::kSchema) {
            throw ConfigError("unsupported experiment schema '" + schema_id + "'");
        }
        cfg.model_class = model_class_from_string(j.at("class").get<std::string>());
        cfg.n = j.at("n").get<int>();
        cfg.l = j.value("l", cfg.l);
        cfg.k_train = j.at("k_train").get<std::size_t>();
        cfg.k_test = j.at("k_test").get<std::size_t>();
        cfg.eta = j.value("eta", cfg.eta);
        cfg.test_config.alpha = j.value("alpha", cfg.test_config.alpha);
        cfg.test_config.min_abs_corr = j.value("min_abs_corr", cfg.test_config.min_abs_corr);
        if (j.contains("query_kind")) {
            cfg.query_kind = query_kind_from_string(j.at("query_kind").get<std::string>());
        }
        const std::string ls = j.value("label_source", "stat_test");
        if (ls == "oracle") {
            cfg.label_source = LabelSource::oracle;
        } else if (ls == "stat_test") {
            cfg.label_source = LabelSource::stat_test;
        } else {
            throw ConfigError("unknown label source '" + ls + "'");
        }
        const std::string sm = j.value("sample_mode", "with_replacement");
        if (sm == "with_replacement") {
            cfg.sample_mode = SampleMode::with_replacement;
        } else if (sm == "without_replacement") {
            cfg.sample_mode = SampleMode::without_replacement;
        } else {
            throw ConfigError("unknown sample mode '" + sm + "'");
        }
        const std::string rm = j.value("row_mode", "shared");
        if (rm == "shared") {
            cfg.row_mode = RowMode::shared;
        } else if (rm == "disjoint") {
            cfg.row_mode = RowMode::disjoint;
        } else {
            throw ConfigError("unknown row mode '" + rm + "'");
        }
        cfg.bound_variant = bound_variant_from_string(j.value("bound_variant", "full"));
        if (j.contains("generator")) {
            const json& g = j.at("generator");
            cfg.generator.edge_prob = g.value("edge_prob", cfg.generator.edge_prob);
            cfg.generator.coeff_lo = g.value("coeff_lo", cfg.generator.coeff_lo);
            cfg.generator.coeff_hi = g.value("coeff_hi", cfg.generator.coeff_hi);
            const std::string nk = g.value("noise", "gaussian");
            if (nk == "gaussian") {
                cfg.generator.noise_kind = NoiseSpec::Kind::gaussian;
            } else if (nk == "uniform") {
                cfg.generator.noise_kind = NoiseSpec::Kind::uniform;
            } else {
                throw ConfigError("unknown noise kind '" + nk + "'");
            }
            cfg.generator.noise_param = g.value("noise_param", cfg.generator.noise_param);
        }
        if (j.contains("search")) {
            const json& s = j.at("search");
            const std::string mode = s.value("mode", "local");
            if (mode == "local") {
                cfg.search_mode = SearchMode::local;
            } else if (mode == "exhaustive") {
                cfg.search_mode = SearchMode::exhaustive;
            } else {
                throw ConfigError("unknown search mode '" + mode + "'");
            }
            cfg.budget = s.value("budget", cfg.budget);
            cfg.restarts = s.value("restarts", cfg.restarts);
        }
        cfg.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
        return cfg;
    });
}

std::string experiment_report_to_json(const ExperimentReport& report) {
    json j;
    j["schema"] = "causalcast-experiment-report/1";
    j["config"] = parse(experiment_config_to_json(report.config));
    json seeds = json::array();
    for (const auto& r : report.seeds) {
        json e;
        e["seed"] = r.seed;
        e["train_error"] = r.train_error;
        if (r.test_error) e["test_error"] = *r.test_error;
        e["bound_epsilon"] = r.bound_epsilon;
        if (r.bound_satisfied) e["bound_satisfied"] = *r.bound_satisfied;
        seeds.push_back(std::move(e));
    }
    j["seeds"] = std::move(seeds);
    j["satisfied_count"] = report.satisfied_count;
    j["satisfaction_rate"] = report.satisfaction_rate;
    return j.dump(2);
}

std::string figure1_to_csv(const std::vector<Figure1Row>& rows) {
    std::ostringstream os;
    os << "n,required_k_full,required_k_sqrt_only,possible_tests,ratio_full,ratio_sqrt_only\n";
    char buf[64];
    for (const auto& r : rows) {
        os << r.n << ',' << r.required_k_full << ',' << r.required_k_sqrt_only << ','
           << r.possible_tests << ',';
        std::snprintf(buf, sizeof buf, "%.17g", r.ratio_full);
        os << buf << ',';
        std::snprintf(buf, sizeof buf, "%.17g", r.ratio_sqrt_only);
        os << buf << '\n';
    }
    return os.str();
}

std::string manifest_to_json(const std::vector<ManifestEntry>& entries) {
    json j = json::array();
    for (const auto& e : entries) {
        j.push_back({{"file", e.file}, {"vars", e.vars}});
    }
    return j.dump(2);
}

std::vector<ManifestEntry> manifest_from_json(const std::string& text) {
    const json j = parse(text);
    std::vector<ManifestEntry> out;
    const auto read_entry = [](const json& item) {
        return schema([&] {
            ManifestEntry e;
            e.file = item.at("file").get<std::string>();
            e.vars = item.at("vars").get<VariableTuple>();
            return e;
        });
    };
    if (j.is_array()) {
        for (const auto& item : j) out.push_back(read_entry(item));
    } else {
        out.push_back(read_entry(j));
    }
    return out;
}

void save_dataset_csv(const Dataset& d, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot open " + path.string() + " for writing");
    for (int c = 0; c < d.k(); ++c) {
        if (c > 0) out << ',';
        out << 'x' << d.vars[c];
    }
    out << '\n';
    char buf[64];
    for (long r = 0; r < d.l(); ++r) {
        for (int c = 0; c < d.k(); ++c) {
            if (c > 0) out << ',';
            std::snprintf(buf, sizeof buf, "%.17g", d.rows(r, c));
            out << buf;
        }
        out << '\n';
    }
}

Dataset load_dataset_csv(const std::filesystem::path& path, const VariableTuple& vars) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line)) throw InputError("empty CSV " + path.string());
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            try {
                row.push_back(std::stod(cell));
            } catch (const std::exception&) {
                throw InputError("non-numeric cell '" + cell + "' in " + path.string());
            }
        }
        if (row.size() != vars.size()) {
            throw InputError("row width does not match the manifest tuple in " + path.string());
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw InputError("no data rows in " + path.string());
    Eigen::MatrixXd m(static_cast<long>(rows.size()), static_cast<long>(vars.size()));
    for (std::size_t r = 0; r < rows.size(); ++r) {
        for (std::size_t c = 0; c < vars.size(); ++c) {
            m(static_cast<long>(r), static_cast<long>(c)) = rows[r][c];
        }
    }
    return Dataset(std::move(m), vars);
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open " + path.string());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot open " + path.string() + " for writing");
    out << content;
}

}  // namespace causalcast
