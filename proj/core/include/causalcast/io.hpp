#ifndef CAUSALCAST_IO_HPP
#define CAUSALCAST_IO_HPP

#include <filesystem>
#include <string>
#include <utility>

#include "causalcast/experiment.hpp"
#include "causalcast/merge.hpp"

namespace causalcast {

// JSON codecs for every file format the tools speak. Parsing failures and
// schema violations surface as InputError.

std::string graph_to_json(const Dag& dag, const std::vector<std::string>& names = {});
Dag graph_from_json(const std::string& text);
std::vector<std::string> graph_names_from_json(const std::string& text);

std::string model_to_json(const CausalModel& model);
CausalModel model_from_json(const std::string& text);

std::string queries_to_json(const std::vector<Query>& queries);
std::vector<Query> queries_from_json(const std::string& text);

std::string labeled_queries_to_json(const std::vector<LabeledQuery>& queries);
std::vector<LabeledQuery> labeled_queries_from_json(const std::string& text);

/// Outcome rows; cond_indep outcomes additionally carry the semantic label
/// "independent" / "dependent".
std::string outcomes_to_json(const std::vector<std::pair<Query, Outcome>>& outcomes);

std::string fit_result_to_json(const FitResult& result);

std::string discrete_to_json(const DiscreteDist& dist);
DiscreteDist discrete_from_json(const std::string& text);
std::string gaussian_to_json(const GaussianDist& dist);
GaussianDist gaussian_from_json(const std::string& text);
bool json_is_discrete_dist(const std::string& text);

std::string sem_to_json(const LinearSem& sem);
LinearSem sem_from_json(const std::string& text);

std::string constraints_to_json(const std::vector<CausalConstraint>& constraints);
std::vector<CausalConstraint> constraints_from_json(const std::string& text);

std::string graph_list_to_json(const std::vector<Dag>& graphs);

std::string experiment_config_to_json(const ExperimentConfig& cfg);
ExperimentConfig experiment_config_from_json(const std::string& text);
std::string experiment_report_to_json(const ExperimentReport& report);

std::string figure1_to_csv(const std::vector<Figure1Row>& rows);

struct ManifestEntry {
    std::string file;
    VariableTuple vars;
};

std::string manifest_to_json(const std::vector<ManifestEntry>& entries);
std::vector<ManifestEntry> manifest_from_json(const std::string& text);

/// CSV with a header row of variable names (x<i> by default).
void save_dataset_csv(const Dataset& d, const std::filesystem::path& path);
Dataset load_dataset_csv(const std::filesystem::path& path, const VariableTuple& vars);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& content);

}  // namespace causalcast

#endif
