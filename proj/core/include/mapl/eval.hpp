#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mapl/records.hpp"
#include "mapl/trainer.hpp"

namespace mapl {

enum class Arm { vanilla, mlift, mapl, intra_only, inter_only };

const std::string& to_string(Arm arm);
std::optional<Arm> arm_from_string(std::string_view s);

using Scorer = std::function<double(const ScoringInputs&)>;

Scorer make_rm_scorer(RewardModelParams params);
// Scores by the policy's implicit reward; raises Errc::unregistered_pair on
// pairs outside the registered support.
Scorer make_policy_scorer(PolicyParams params);

struct Verdict {
    std::string record_id;
    bool correct = false;
};

// Semantic-quality ordering: correct iff score(x, chosen) > score(x, rejected).
// Ties count as incorrect.
std::vector<Verdict> eval_sq_verdicts(const Scorer& scorer,
                                      std::span<const PreferenceRecord> eval_set);
double eval_sq(const Scorer& scorer, std::span<const PreferenceRecord> eval_set);

// Instruction-following ordering: correct iff score(prompt_w, y) >
// score(prompt_l, y), each side scored with its own attached specs.
std::vector<Verdict> eval_if_verdicts(const Scorer& scorer,
                                      std::span<const IntraRecord> eval_if_set);
double eval_if(const Scorer& scorer, std::span<const IntraRecord> eval_if_set);

struct EvalReport {
    Arm arm = Arm::vanilla;
    double sq_accuracy = 0;
    double if_accuracy = 0;
    std::size_t n_sq = 0;
    std::size_t n_if = 0;
    std::vector<Verdict> sq_verdicts;
    std::vector<Verdict> if_verdicts;
};

EvalReport evaluate(Arm arm, const Scorer& scorer, std::span<const PreferenceRecord> sq_set,
                    std::span<const IntraRecord> if_set);

EvalReport eval_dpo(const PolicyParams& policy, Arm arm,
                    std::span<const PreferenceRecord> sq_set,
                    std::span<const IntraRecord> if_set);

std::string report_to_json(const EvalReport& report);
EvalReport report_from_json(const std::string& text);

// Aligned text table of SQ/IF per arm with deltas against the vanilla arm
// (when present). Duplicate arm labels are rejected.
std::string compare_arms(std::span<const EvalReport> reports);

}  // namespace mapl
