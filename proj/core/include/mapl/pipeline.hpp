#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace mapl {

// Everything a pipeline run needs, loadable from a JSON config file with
// strict schema validation; CLI flags override fields one-for-one.
struct PipelineConfig {
    std::uint64_t seed = 20240801;

    std::string corpus_path;   // input corpus; ignored when corpus_n > 0
    std::string out_dir = "out";

    int corpus_n = 0;          // > 0: generate a synthetic corpus of this size

    int k_min = 2;
    int k_max = 4;
    int max_retries = 8;
    double split_ratio = 0.9;
    bool emit_mlift = true;
    bool emit_eval = true;

    std::string objective = "rm";     // rm | dpo
    std::string arm = "mapl";         // vanilla | intra_only | inter_only | mapl | mlift
    std::string rm_mode = "tabular";  // tabular | featurized
    double step_size = 0.5;
    int epochs = 500;
    double beta = 0.1;
    int batch_size = 0;

    std::optional<double> min_sq;
    std::optional<double> min_if;

    void validate() const;
};

PipelineConfig config_from_json(const std::string& text);
PipelineConfig load_config_file(const std::string& path);
std::string config_to_json(const PipelineConfig& config);

// Hash over the semantically meaningful fields (everything except file
// locations); hex string.
std::string config_hash(const PipelineConfig& config);

// Stage entry points; each returns a process exit code and writes its
// outputs atomically under config.out_dir.
int cmd_corpus_gen(const PipelineConfig& config);
int cmd_synthesize(const PipelineConfig& config);
int cmd_train(const PipelineConfig& config);
int cmd_eval(const PipelineConfig& config);
int cmd_verify(const PipelineConfig& config, const std::vector<std::string>& files);

}  // namespace mapl
