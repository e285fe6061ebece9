#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "mapl/kernels.hpp"
#include "mapl/records.hpp"

namespace mapl {

// Inputs a scorer sees for one (prompt, response) slot. specs are the
// instructions attached to the prompt (none for an original prompt);
// semantic is the source-corpus annotation for the response (1 chosen,
// 0 rejected at synthesis time).
struct ScoringInputs {
    std::string_view prompt;
    const ResponseText* response = nullptr;
    std::span<const ConstraintSpec> specs;
    double semantic = 0.0;
};

// bias, constraint satisfaction rate, constraint count / 4, semantic score.
using FeatureVector = std::array<double, 4>;

FeatureVector make_features(const ScoringInputs& in);
double constraint_satisfaction_rate(const ResponseText& response,
                                    std::span<const ConstraintSpec> specs);

enum class RmMode { tabular, featurized };

using PairKey = std::pair<std::uint64_t, std::uint64_t>;

std::uint64_t content_hash(std::string_view text);

// Content-addressing with collision detection: two distinct texts mapping to
// one 64-bit hash reject the dataset.
class ContentRegistry {
public:
    std::uint64_t intern(std::string_view text);

private:
    std::map<std::uint64_t, std::string> entries_;
};

struct RewardModelParams {
    RmMode mode = RmMode::tabular;
    FeatureVector weights{};                 // featurized
    std::map<PairKey, double> table;         // tabular; absent entries score 0
};

double score(const RewardModelParams& params, const ScoringInputs& in);

// Categorical policy over each prompt's registered response set. Reference
// logits are the zero initialization, i.e. pi_ref is uniform over the
// support.
struct PolicyParams {
    double beta = 0.1;
    std::map<PairKey, double> logits;
    std::map<std::uint64_t, std::vector<std::uint64_t>> support;

    void register_pair(std::uint64_t prompt_hash, std::uint64_t response_hash);
    bool registered(std::uint64_t prompt_hash, std::uint64_t response_hash) const;
};

double policy_log_prob(const PolicyParams& policy, std::uint64_t prompt_hash,
                       std::uint64_t response_hash);
double policy_log_ratio(const PolicyParams& policy, std::uint64_t prompt_hash,
                        std::uint64_t response_hash);
// beta * log(pi/pi_ref); raises Errc::unregistered_pair for unknown pairs.
double implicit_reward(const PolicyParams& policy, std::string_view prompt,
                       std::string_view response);

struct TrainConfig {
    RmMode mode = RmMode::tabular;
    double step_size = 0.5;
    int epochs = 500;
    std::uint64_t seed = 0;
    TermWeights term_weights{};
    double beta = 0.1;     // DPO only
    int batch_size = 0;    // 0 = full batch; otherwise minibatch with per-epoch reshuffle
};

struct EpochStats {
    int epoch = 0;
    double total = 0;
    double bt = 0;
    double intra = 0;
    double inter = 0;
};

struct TrainHistory {
    std::vector<EpochStats> epochs;
    std::string to_csv() const;
};

struct RmTrainResult {
    RewardModelParams params;
    TrainHistory history;
};

struct DpoTrainResult {
    PolicyParams params;
    TrainHistory history;
};

// Full-batch (or optionally minibatched) gradient descent on the combined
// ranking objective. Raises Errc::divergence after 10 consecutive epochs of
// increasing loss.
RmTrainResult train_rm(const MaplDataset& dataset, const TrainConfig& config);

// The M-LIFT baseline: the plain pairwise loss over mlift records, specs
// attached, preference labels as stored (follow_reversed swaps them).
RmTrainResult train_rm_mlift(std::span<const MliftRecord> records, const TrainConfig& config);

DpoTrainResult train_dpo(const MaplDataset& dataset, const TrainConfig& config);

using Checkpoint = std::variant<RewardModelParams, PolicyParams>;

std::string checkpoint_to_json(const RewardModelParams& params);
std::string checkpoint_to_json(const PolicyParams& params);
Checkpoint checkpoint_from_json(const std::string& text);

}  // namespace mapl
