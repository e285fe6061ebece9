#include "mapl/pipeline.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <set>

#include <json.hpp>

#include "mapl/error.hpp"
#include "mapl/eval.hpp"
#include "mapl/jsonl.hpp"
#include "mapl/rng.hpp"
#include "mapl/synthesis.hpp"
#include "mapl/trainer.hpp"
#include "mapl/validate.hpp"

namespace mapl {

namespace {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

int log_level() {
    static const int level = [] {
        const char* env = std::getenv("MAPL_LOG");
        if (!env) return 2;
        const std::string v = env;
        if (v == "off") return 0;
        if (v == "error") return 1;
        if (v == "info") return 2;
        if (v == "debug") return 3;
        return 2;
    }();
    return level;
}

void log_info(const std::string& msg) {
    if (log_level() >= 2) std::fprintf(stderr, "[mapl] %s\n", msg.c_str());
}

void log_error(const std::string& msg) {
    if (log_level() >= 1) std::fprintf(stderr, "[mapl] error: %s\n", msg.c_str());
}

[[noreturn]] void config_fail(const std::string& what) { raise(Errc::config_error, what); }

void expect_config_keys(const ordered_json& j, const std::set<std::string>& keys,
                        const std::string& where) {
    if (!j.is_object()) config_fail("config: " + where + " must be an object");
    for (const auto& [key, value] : j.items())
        if (!keys.count(key)) config_fail("config: unknown key \"" + where + key + "\"");
}

template <typename T>
void read_field(const ordered_json& j, const char* key, T& out) {
    if (j.contains(key) && !j[key].is_null()) out = j[key].get<T>();
}

}  // namespace

void PipelineConfig::validate() const {
    if (k_min < 1 || k_min > k_max || k_max > kFamilyCount)
        config_fail("config: need 1 <= k_min <= k_max <= " + std::to_string(kFamilyCount));
    if (max_retries < 1) config_fail("config: max_retries must be >= 1");
    if (!(split_ratio > 0.0 && split_ratio < 1.0))
        config_fail("config: split_ratio must be in (0, 1)");
    if (corpus_n < 0) config_fail("config: corpus_gen.n must be >= 0");
    if (objective != "rm" && objective != "dpo")
        config_fail("config: objective must be rm or dpo");
    if (!arm_from_string(arm)) config_fail("config: unknown arm \"" + arm + "\"");
    if (rm_mode != "tabular" && rm_mode != "featurized")
        config_fail("config: mode must be tabular or featurized");
    if (step_size <= 0) config_fail("config: step_size must be positive");
    if (epochs < 1) config_fail("config: epochs must be >= 1");
    if (beta <= 0) config_fail("config: beta must be positive");
    if (batch_size < 0) config_fail("config: batch_size must be >= 0");
    if (min_sq && (*min_sq < 0 || *min_sq > 1)) config_fail("config: min_sq must be in [0, 1]");
    if (min_if && (*min_if < 0 || *min_if > 1)) config_fail("config: min_if must be in [0, 1]");
}

PipelineConfig config_from_json(const std::string& text) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        config_fail(std::string("config: ") + e.what());
    }
    expect_config_keys(j, {"seed", "paths", "corpus_gen", "synthesis", "trainer", "eval"}, "");

    PipelineConfig config;
    read_field(j, "seed", config.seed);
    if (j.contains("paths")) {
        expect_config_keys(j["paths"], {"corpus", "out_dir"}, "paths.");
        read_field(j["paths"], "corpus", config.corpus_path);
        read_field(j["paths"], "out_dir", config.out_dir);
    }
    if (j.contains("corpus_gen")) {
        expect_config_keys(j["corpus_gen"], {"n"}, "corpus_gen.");
        read_field(j["corpus_gen"], "n", config.corpus_n);
    }
    if (j.contains("synthesis")) {
        expect_config_keys(j["synthesis"],
                           {"k_min", "k_max", "max_retries", "split_ratio", "emit_mlift",
                            "emit_eval"},
                           "synthesis.");
        read_field(j["synthesis"], "k_min", config.k_min);
        read_field(j["synthesis"], "k_max", config.k_max);
        read_field(j["synthesis"], "max_retries", config.max_retries);
        read_field(j["synthesis"], "split_ratio", config.split_ratio);
        read_field(j["synthesis"], "emit_mlift", config.emit_mlift);
        read_field(j["synthesis"], "emit_eval", config.emit_eval);
    }
    if (j.contains("trainer")) {
        expect_config_keys(
            j["trainer"],
            {"objective", "arm", "mode", "step_size", "epochs", "beta", "batch_size"},
            "trainer.");
        read_field(j["trainer"], "objective", config.objective);
        read_field(j["trainer"], "arm", config.arm);
        read_field(j["trainer"], "mode", config.rm_mode);
        read_field(j["trainer"], "step_size", config.step_size);
        read_field(j["trainer"], "epochs", config.epochs);
        read_field(j["trainer"], "beta", config.beta);
        read_field(j["trainer"], "batch_size", config.batch_size);
    }
    if (j.contains("eval")) {
        expect_config_keys(j["eval"], {"min_sq", "min_if"}, "eval.");
        if (j["eval"].contains("min_sq") && !j["eval"]["min_sq"].is_null())
            config.min_sq = j["eval"]["min_sq"].get<double>();
        if (j["eval"].contains("min_if") && !j["eval"]["min_if"].is_null())
            config.min_if = j["eval"]["min_if"].get<double>();
    }
    config.validate();
    return config;
}

PipelineConfig load_config_file(const std::string& path) {
    return config_from_json(read_file(path));
}

std::string config_to_json(const PipelineConfig& config) {
    ordered_json j;
    j["seed"] = config.seed;
    j["paths"] = {{"corpus", config.corpus_path}, {"out_dir", config.out_dir}};
    j["corpus_gen"] = {{"n", config.corpus_n}};
    j["synthesis"] = {{"k_min", config.k_min},
                      {"k_max", config.k_max},
                      {"max_retries", config.max_retries},
                      {"split_ratio", config.split_ratio},
                      {"emit_mlift", config.emit_mlift},
                      {"emit_eval", config.emit_eval}};
    j["trainer"] = {{"objective", config.objective}, {"arm", config.arm},
                    {"mode", config.rm_mode},        {"step_size", config.step_size},
                    {"epochs", config.epochs},       {"beta", config.beta},
                    {"batch_size", config.batch_size}};
    j["eval"] = {{"min_sq", config.min_sq ? ordered_json(*config.min_sq) : ordered_json()},
                 {"min_if", config.min_if ? ordered_json(*config.min_if) : ordered_json()}};
    return j.dump(2);
}

std::string config_hash(const PipelineConfig& config) {
    PipelineConfig semantic = config;
    semantic.corpus_path.clear();
    semantic.out_dir.clear();
    const std::uint64_t h = fnv1a64(config_to_json(semantic));
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

namespace {

SynthesisConfig synthesis_config(const PipelineConfig& config) {
    SynthesisConfig cfg;
    cfg.k_min = config.k_min;
    cfg.k_max = config.k_max;
    cfg.max_retries = config.max_retries;
    return cfg;
}

std::vector<PreferenceRecord> acquire_corpus(const PipelineConfig& config) {
    if (config.corpus_n > 0) {
        Rng rng = derive_rng(config.seed, "corpus", "gen");
        return generate_synthetic_corpus(config.corpus_n, rng);
    }
    if (config.corpus_path.empty())
        config_fail("config: either paths.corpus or corpus_gen.n is required");
    return load_corpus(config.corpus_path);
}

std::string corpus_to_jsonl(const std::vector<PreferenceRecord>& corpus) {
    std::string out;
    for (const auto& rec : corpus) {
        out += to_jsonl(rec);
        out += '\n';
    }
    return out;
}

// Removes every listed output if any write fails, so a failed stage leaves
// the directory as it found it.
class OutputSet {
public:
    explicit OutputSet(fs::path dir) : dir_(std::move(dir)) {
        fs::create_directories(dir_);
    }

    void add(const std::string& name, std::string content) {
        files_.emplace_back(name, std::move(content));
    }

    void commit() {
        std::vector<fs::path> written;
        try {
            for (const auto& [name, content] : files_) {
                const fs::path target = dir_ / name;
                write_file_atomic(target.string(), content);
                written.push_back(target);
            }
        } catch (...) {
            for (const auto& path : written) {
                std::error_code ec;
                fs::remove(path, ec);
            }
            throw;
        }
    }

private:
    fs::path dir_;
    std::vector<std::pair<std::string, std::string>> files_;
};

int run_stage(const char* stage, const std::function<int()>& body) {
    try {
        return body();
    } catch (const Error& e) {
        log_error(std::string(stage) + ": " + e.what());
        return 2;
    } catch (const std::exception& e) {
        log_error(std::string(stage) + ": " + e.what());
        return 2;
    }
}

}  // namespace

int cmd_corpus_gen(const PipelineConfig& config) {
    return run_stage("corpus-gen", [&] {
        config.validate();
        if (config.corpus_n < 1) config_fail("corpus-gen: corpus_gen.n must be >= 1");
        Rng rng = derive_rng(config.seed, "corpus", "gen");
        const auto corpus = generate_synthetic_corpus(config.corpus_n, rng);
        OutputSet outputs(config.out_dir);
        outputs.add("corpus.jsonl", corpus_to_jsonl(corpus));
        outputs.commit();
        log_info("corpus-gen: wrote " + std::to_string(corpus.size()) + " records");
        return 0;
    });
}

int cmd_synthesize(const PipelineConfig& config) {
    return run_stage("synthesize", [&] {
        config.validate();
        const auto corpus = acquire_corpus(config);
        const SynthesisConfig cfg = synthesis_config(config);

        Rng split_rng = derive_rng(config.seed, "split", "split");
        auto [train, eval_set] = split_corpus(corpus, config.split_ratio, split_rng);

        const MaplDataset dataset = build_mapl_dataset(train, cfg, config.seed);

        MliftDataset mlift;
        if (config.emit_mlift) mlift = build_mlift_dataset(train, cfg, config.seed);

        EvalIfResult eval_if;
        if (config.emit_eval) eval_if = build_eval_if(eval_set, cfg, config.seed);

        std::string bt_lines, intra_lines, inter_lines;
        for (const auto& rec : dataset.bt) bt_lines += to_jsonl(rec) + "\n";
        for (const auto& rec : dataset.intra) intra_lines += to_jsonl(rec) + "\n";
        for (const auto& rec : dataset.inter) inter_lines += to_jsonl(rec) + "\n";

        ordered_json skips = ordered_json::array();
        const auto add_skips = [&skips](const std::vector<SkipReport>& list) {
            for (const auto& s : list)
                skips.push_back({{"id", s.record_id}, {"stage", s.stage}, {"reason", s.reason}});
        };
        add_skips(dataset.skips);
        add_skips(mlift.skips);
        add_skips(eval_if.skips);

        ordered_json manifest;
        manifest["seed"] = config.seed;
        manifest["config_hash"] = config_hash(config);
        manifest["corpus_hash"] = [&] {
            char buf[17];
            std::snprintf(buf, sizeof(buf), "%016llx",
                          static_cast<unsigned long long>(fnv1a64(corpus_to_jsonl(corpus))));
            return std::string(buf);
        }();
        manifest["counts"] = {{"corpus", corpus.size()},
                              {"train", train.size()},
                              {"eval", eval_set.size()},
                              {"bt", dataset.bt.size()},
                              {"intra", dataset.intra.size()},
                              {"inter", dataset.inter.size()},
                              {"mlift", mlift.records.size()},
                              {"eval_if", eval_if.records.size()}};
        manifest["skips"] = std::move(skips);

        OutputSet outputs(config.out_dir);
        if (config.corpus_n > 0) outputs.add("corpus.jsonl", corpus_to_jsonl(corpus));
        outputs.add("bt.jsonl", std::move(bt_lines));
        outputs.add("intra.jsonl", std::move(intra_lines));
        outputs.add("inter.jsonl", std::move(inter_lines));
        if (config.emit_mlift) {
            std::string mlift_lines;
            for (const auto& rec : mlift.records) mlift_lines += to_jsonl(rec) + "\n";
            outputs.add("mlift.jsonl", std::move(mlift_lines));
        }
        if (config.emit_eval) {
            std::string eval_lines, eval_if_lines;
            for (const auto& rec : eval_set) eval_lines += to_jsonl(rec) + "\n";
            for (const auto& rec : eval_if.records) eval_if_lines += to_jsonl(rec) + "\n";
            outputs.add("eval.jsonl", std::move(eval_lines));
            outputs.add("eval_if.jsonl", std::move(eval_if_lines));
        }
        outputs.add("manifest.json", manifest.dump(2) + "\n");
        outputs.commit();

        log_info("synthesize: " + std::to_string(dataset.bt.size()) + " bt, " +
                 std::to_string(dataset.intra.size()) + " intra, " +
                 std::to_string(dataset.inter.size()) + " inter, " +
                 std::to_string(manifest["skips"].size()) + " skips");
        return 0;
    });
}

namespace {

MaplDataset load_mapl_dataset(const PipelineConfig& config) {
    const fs::path dir = config.out_dir;
    MaplDataset dataset;
    dataset.seed = config.seed;
    dataset.bt = load_corpus((dir / "bt.jsonl").string());
    dataset.intra = load_intra_file((dir / "intra.jsonl").string());
    dataset.inter = load_inter_file((dir / "inter.jsonl").string());
    return dataset;
}

TrainConfig train_config(const PipelineConfig& config, const TermWeights& weights) {
    TrainConfig tc;
    tc.mode = config.rm_mode == "tabular" ? RmMode::tabular : RmMode::featurized;
    tc.step_size = config.step_size;
    tc.epochs = config.epochs;
    tc.seed = config.seed;
    tc.term_weights = weights;
    tc.beta = config.beta;
    tc.batch_size = config.batch_size;
    return tc;
}

TermWeights arm_weights(Arm arm) {
    switch (arm) {
        case Arm::vanilla:
        case Arm::mlift:
            return {1.0, 0.0, 0.0};
        case Arm::intra_only:
            return {1.0, 1.0, 0.0};
        case Arm::inter_only:
            return {1.0, 0.0, 1.0};
        case Arm::mapl:
            return {1.0, 1.0, 1.0};
    }
    return {1.0, 1.0, 1.0};
}

// The M-LIFT baseline treats every record of its dataset as a plain
// preference pair; for DPO that is a bt-only dataset.
MaplDataset mlift_as_bt(const std::vector<MliftRecord>& records) {
    MaplDataset dataset;
    for (const auto& rec : records) {
        PreferenceRecord pr;
        pr.record_id = rec.record_id;
        pr.prompt = rec.prompt;
        pr.chosen = rec.preferred;
        pr.rejected = rec.dispreferred;
        dataset.bt.push_back(std::move(pr));
    }
    return dataset;
}

}  // namespace

int cmd_train(const PipelineConfig& config) {
    return run_stage("train", [&] {
        config.validate();
        const Arm arm = *arm_from_string(config.arm);
        const TrainConfig tc = train_config(config, arm_weights(arm));
        const fs::path dir = config.out_dir;

        std::string checkpoint_json;
        std::string history_csv;
        if (config.objective == "rm") {
            RmTrainResult result;
            if (arm == Arm::mlift) {
                const auto records = load_mlift_file((dir / "mlift.jsonl").string());
                result = train_rm_mlift(records, tc);
            } else {
                result = train_rm(load_mapl_dataset(config), tc);
            }
            checkpoint_json = checkpoint_to_json(result.params);
            history_csv = result.history.to_csv();
        } else {
            DpoTrainResult result;
            if (arm == Arm::mlift) {
                const auto records = load_mlift_file((dir / "mlift.jsonl").string());
                result = train_dpo(mlift_as_bt(records), tc);
            } else {
                result = train_dpo(load_mapl_dataset(config), tc);
            }
            checkpoint_json = checkpoint_to_json(result.params);
            history_csv = result.history.to_csv();
        }

        OutputSet outputs(config.out_dir);
        outputs.add("checkpoint.json", checkpoint_json + "\n");
        outputs.add("history.csv", history_csv);
        outputs.commit();
        log_info("train: arm=" + config.arm + " objective=" + config.objective + " epochs=" +
                 std::to_string(config.epochs));
        return 0;
    });
}

int cmd_eval(const PipelineConfig& config) {
    return run_stage("eval", [&] {
        config.validate();
        const Arm arm = *arm_from_string(config.arm);
        const fs::path dir = config.out_dir;

        const Checkpoint checkpoint = checkpoint_from_json(
            read_file((dir / "checkpoint.json").string()));

        EvalReport report;
        if (std::holds_alternative<RewardModelParams>(checkpoint)) {
            const auto sq_set = load_corpus((dir / "eval.jsonl").string());
            const auto if_set = load_intra_file((dir / "eval_if.jsonl").string());
            report = evaluate(arm, make_rm_scorer(std::get<RewardModelParams>(checkpoint)),
                              sq_set, if_set);
        } else {
            // A tabular policy only scores registered pairs, so a policy
            // checkpoint is evaluated on its own training populations.
            const auto sq_set = load_corpus((dir / "bt.jsonl").string());
            const auto if_set = load_intra_file((dir / "intra.jsonl").string());
            report = eval_dpo(std::get<PolicyParams>(checkpoint), arm, sq_set, if_set);
        }

        std::string text = compare_arms(std::span(&report, 1));
        OutputSet outputs(config.out_dir);
        outputs.add("report.json", report_to_json(report) + "\n");
        outputs.add("report.txt", text);
        outputs.commit();

        std::printf("%s", text.c_str());
        if (config.min_sq && report.sq_accuracy < *config.min_sq) {
            log_error("eval: sq_accuracy " + std::to_string(report.sq_accuracy) +
                      " below threshold " + std::to_string(*config.min_sq));
            return 1;
        }
        if (config.min_if && report.if_accuracy < *config.min_if) {
            log_error("eval: if_accuracy " + std::to_string(report.if_accuracy) +
                      " below threshold " + std::to_string(*config.min_if));
            return 1;
        }
        return 0;
    });
}

int cmd_verify(const PipelineConfig& config, const std::vector<std::string>& files) {
    return run_stage("verify", [&] {
        std::vector<std::string> targets = files;
        if (targets.empty()) {
            const fs::path dir = config.out_dir;
            for (const char* name : {"bt.jsonl", "intra.jsonl", "inter.jsonl", "mlift.jsonl",
                                     "eval.jsonl", "eval_if.jsonl"}) {
                const fs::path p = dir / name;
                if (fs::exists(p)) targets.push_back(p.string());
            }
        }
        if (targets.empty()) config_fail("verify: no dataset files found");

        std::size_t total_issues = 0;
        for (const auto& path : targets) {
            const auto records = load_dataset_file(path);
            const ValidationSummary summary = validate_records(records);
            std::printf("%s: %zu records checked (%zu bt, %zu intra, %zu inter, %zu mlift), %zu violations\n",
                        path.c_str(), summary.checked_total(), summary.checked_bt,
                        summary.checked_intra, summary.checked_inter, summary.checked_mlift,
                        summary.issues.size());
            for (const auto& issue : summary.issues)
                std::printf("  %s: %s\n", issue.record_id.c_str(), issue.what.c_str());
            total_issues += summary.issues.size();
        }
        return total_issues == 0 ? 0 : 1;
    });
}

}  // namespace mapl
