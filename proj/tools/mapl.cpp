// Command-line front end: corpus generation, dataset synthesis, training,
// evaluation, and stored-flag re-verification, all reproducible from a
// config file plus seed.

#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mapl/error.hpp"
#include "mapl/pipeline.hpp"

namespace {

struct Overrides {
    std::optional<std::uint64_t> seed;
    std::optional<std::string> corpus;
    std::optional<std::string> out_dir;
    std::optional<int> n;
    std::optional<int> k_min, k_max, max_retries;
    std::optional<double> split_ratio;
    std::optional<bool> emit_mlift, emit_eval;
    std::optional<std::string> objective, arm, mode;
    std::optional<double> step_size, beta;
    std::optional<int> epochs, batch_size;
    std::optional<double> min_sq, min_if;

    void apply(mapl::PipelineConfig& config) const {
        if (seed) config.seed = *seed;
        if (corpus) config.corpus_path = *corpus;
        if (out_dir) config.out_dir = *out_dir;
        if (n) config.corpus_n = *n;
        if (k_min) config.k_min = *k_min;
        if (k_max) config.k_max = *k_max;
        if (max_retries) config.max_retries = *max_retries;
        if (split_ratio) config.split_ratio = *split_ratio;
        if (emit_mlift) config.emit_mlift = *emit_mlift;
        if (emit_eval) config.emit_eval = *emit_eval;
        if (objective) config.objective = *objective;
        if (arm) config.arm = *arm;
        if (mode) config.rm_mode = *mode;
        if (step_size) config.step_size = *step_size;
        if (epochs) config.epochs = *epochs;
        if (beta) config.beta = *beta;
        if (batch_size) config.batch_size = *batch_size;
        if (min_sq) config.min_sq = *min_sq;
        if (min_if) config.min_if = *min_if;
    }
};

void add_common_options(CLI::App* cmd, std::string& config_path, Overrides& flags) {
    cmd->add_option("--config", config_path, "JSON config file");
    cmd->add_option("--seed", flags.seed, "global random seed");
    cmd->add_option("--out-dir", flags.out_dir, "output directory");
}

void add_synthesis_options(CLI::App* cmd, Overrides& flags) {
    cmd->add_option("--corpus", flags.corpus, "input corpus JSONL");
    cmd->add_option("--n", flags.n, "generate a synthetic corpus of this size");
    cmd->add_option("--k-min", flags.k_min, "minimum instructions per prompt");
    cmd->add_option("--k-max", flags.k_max, "maximum instructions per prompt");
    cmd->add_option("--max-retries", flags.max_retries, "generation retries per prompt");
    cmd->add_option("--split-ratio", flags.split_ratio, "train fraction of the corpus");
    cmd->add_flag("--mlift,!--no-mlift", flags.emit_mlift, "emit the M-LIFT baseline dataset");
    cmd->add_flag("--eval,!--no-eval", flags.emit_eval, "emit eval and eval_if datasets");
}

void add_trainer_options(CLI::App* cmd, Overrides& flags) {
    cmd->add_option("--objective", flags.objective, "rm or dpo");
    cmd->add_option("--arm", flags.arm, "vanilla | intra_only | inter_only | mapl | mlift");
    cmd->add_option("--mode", flags.mode, "tabular or featurized");
    cmd->add_option("--step-size", flags.step_size, "gradient step size");
    cmd->add_option("--epochs", flags.epochs, "training epochs");
    cmd->add_option("--beta", flags.beta, "DPO beta");
    cmd->add_option("--batch-size", flags.batch_size, "minibatch size (0 = full batch)");
}

mapl::PipelineConfig resolve(const std::string& config_path, const Overrides& flags) {
    mapl::PipelineConfig config;
    if (!config_path.empty()) config = mapl::load_config_file(config_path);
    flags.apply(config);
    return config;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"multi-instruction preference data synthesis and desk-scale training"};
    app.require_subcommand(1);

    std::string config_path;
    Overrides flags;
    std::vector<std::string> verify_files;

    auto* corpus_gen = app.add_subcommand("corpus-gen", "generate a synthetic preference corpus");
    add_common_options(corpus_gen, config_path, flags);
    corpus_gen->add_option("--n", flags.n, "number of records");

    auto* synthesize =
        app.add_subcommand("synthesize", "build bt/intra/inter (and mlift, eval) datasets");
    add_common_options(synthesize, config_path, flags);
    add_synthesis_options(synthesize, flags);

    auto* train = app.add_subcommand("train", "train a reward model or DPO policy");
    add_common_options(train, config_path, flags);
    add_trainer_options(train, flags);

    auto* eval = app.add_subcommand("eval", "evaluate a checkpoint and emit reports");
    add_common_options(eval, config_path, flags);
    eval->add_option("--arm", flags.arm, "arm label for the report");
    eval->add_option("--min-sq", flags.min_sq, "fail unless SQ accuracy reaches this");
    eval->add_option("--min-if", flags.min_if, "fail unless IF accuracy reaches this");

    auto* verify = app.add_subcommand("verify", "re-check stored flags of dataset files");
    add_common_options(verify, config_path, flags);
    verify->add_option("files", verify_files, "dataset files (default: out_dir datasets)");

    CLI11_PARSE(app, argc, argv);

    try {
        const mapl::PipelineConfig config = resolve(config_path, flags);
        if (corpus_gen->parsed()) return mapl::cmd_corpus_gen(config);
        if (synthesize->parsed()) return mapl::cmd_synthesize(config);
        if (train->parsed()) return mapl::cmd_train(config);
        if (eval->parsed()) return mapl::cmd_eval(config);
        if (verify->parsed()) return mapl::cmd_verify(config, verify_files);
    } catch (const mapl::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 0;
}
