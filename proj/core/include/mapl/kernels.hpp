#pragma once

#include <array>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace mapl {

// Numerically stable primitives. -log(sigmoid(z)) is evaluated as
// softplus(-z) with the usual two-branch form, so margins up to +-700 stay
// finite.
double sigmoid(double z);
double softplus(double z);
double log_sigmoid(double z);

// Probability that the first item wins under the pairwise preference model.
double bt_prob(double r_w, double r_l);
// Same kernel with prompt-side rewards, holding the response fixed.
double rc_prob(double r_xw, double r_xl);

// log(p / (1 - p)); requires p strictly inside (0, 1).
double logit(double p);

// Rewards for one (constrained prompt, original prompt) pair: hi/lo name the
// preferred and dispreferred prompt of the pair, w/l the response pair.
struct RewardQuad {
    double r_hi_w = 0;
    double r_hi_l = 0;
    double r_lo_w = 0;
    double r_lo_l = 0;
};

// beta-scaled policy log ratios log(pi/pi_ref) in the same arrangement.
struct PolicyLogRatioQuad {
    double lr_hi_w = 0;
    double lr_hi_l = 0;
    double lr_lo_w = 0;
    double lr_lo_l = 0;
    double beta = 0.1;
};

// Pair-vs-pair preference via the explicit logit composition: both pairwise
// probabilities are turned into logits and recombined with the softmax form.
// Log-odds are carried in log space, which keeps the composition faithful for
// saturated probabilities.
double inter_prob_composed(const RewardQuad& q);

// The simplified difference-of-margins form of the same probability.
double inter_prob_margin(const RewardQuad& q);

// Computes both routes, checks they agree within 1e-12, returns the margin
// form.
double inter_prob(const RewardQuad& q);

// Scalar objective value plus analytic gradient per named input.
struct LossOutput {
    double value = 0;
    std::map<std::string, double> grads;
};

// Pairwise ranking losses; each term is softplus(-margin) and its gradients
// carry sigmoid(margin) - 1 on the winning side.
LossOutput loss_rm_bt(double r_w, double r_l);
LossOutput loss_rm_intra(std::pair<double, double> pair_w, std::pair<double, double> pair_l);
LossOutput loss_rm_inter(const RewardQuad& up, const RewardQuad& down);

LossOutput loss_dpo_bt(double lr_w, double lr_l, double beta);
LossOutput loss_dpo_intra(std::pair<double, double> pair_w, std::pair<double, double> pair_l,
                          double beta);
LossOutput loss_dpo_inter(const PolicyLogRatioQuad& up, const PolicyLogRatioQuad& down);

struct TermWeights {
    double bt = 1.0;
    double intra = 1.0;
    double inter = 1.0;
};

// Batch objective: each sub-loss averaged over its own record population,
// then combined with the term weights. An empty population contributes zero
// and raises its warning flag.
struct BatchTerms {
    double total = 0;
    double bt = 0;
    double intra = 0;
    double inter = 0;
    bool bt_empty = false;
    bool intra_empty = false;
    bool inter_empty = false;
};

// Population inputs are per-record margin pairs: bt entries hold
// (r_w, r_l), intra entries hold (r_xw, r_xl) for the record's single term,
// inter entries hold the record's reward quad with hi/lo already oriented.
BatchTerms loss_rm_total(std::span<const std::array<double, 2>> bt,
                         std::span<const std::array<double, 2>> intra,
                         std::span<const RewardQuad> inter, const TermWeights& weights = {});

BatchTerms loss_dpo_total(std::span<const std::array<double, 2>> bt,
                          std::span<const std::array<double, 2>> intra,
                          std::span<const PolicyLogRatioQuad> inter, double beta,
                          const TermWeights& weights = {});

// Deterministic pairwise-tree mean; reduction shape does not depend on how
// work is sharded.
double pairwise_mean(std::span<const double> values);

inline double inter_margin(const RewardQuad& q) {
    return (q.r_hi_w - q.r_hi_l) - (q.r_lo_w - q.r_lo_l);
}

}  // namespace mapl
