#include "mapl/kernels.hpp"

#include <cmath>

#include "mapl/error.hpp"

namespace mapl {

namespace {

void check_finite(double v, const char* name) {
    if (!std::isfinite(v)) raise(Errc::invalid_argument, std::string(name) + " must be finite");
}

void check_beta(double beta) {
    check_finite(beta, "beta");
    if (beta <= 0) raise(Errc::invalid_argument, "beta must be positive");
}

void check_quad(const RewardQuad& q, const char* name) {
    check_finite(q.r_hi_w, name);
    check_finite(q.r_hi_l, name);
    check_finite(q.r_lo_w, name);
    check_finite(q.r_lo_l, name);
}

// d/dmargin of softplus(-margin).
double dloss_dmargin(double margin) { return sigmoid(margin) - 1.0; }

}  // namespace

double sigmoid(double z) {
    if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

double softplus(double z) {
    if (z > 0) return z + std::log1p(std::exp(-z));
    return std::log1p(std::exp(z));
}

double log_sigmoid(double z) { return -softplus(-z); }

double bt_prob(double r_w, double r_l) {
    check_finite(r_w, "r_w");
    check_finite(r_l, "r_l");
    return sigmoid(r_w - r_l);
}

double rc_prob(double r_xw, double r_xl) { return bt_prob(r_xw, r_xl); }

double logit(double p) {
    check_finite(p, "p");
    if (!(p > 0.0 && p < 1.0)) raise(Errc::invalid_argument, "logit: p must be in (0, 1)");
    return std::log(p) - std::log1p(-p);
}

double inter_prob_composed(const RewardQuad& q) {
    check_quad(q, "inter_prob");
    const double m_hi = q.r_hi_w - q.r_hi_l;
    const double m_lo = q.r_lo_w - q.r_lo_l;
    // logit(p) = log p - log(1 - p) with both logs taken of the pairwise
    // win probabilities; exp-normalizing the two logits is a sigmoid of
    // their difference.
    const double gamma_hi = log_sigmoid(m_hi) - log_sigmoid(-m_hi);
    const double gamma_lo = log_sigmoid(m_lo) - log_sigmoid(-m_lo);
    return sigmoid(gamma_hi - gamma_lo);
}

double inter_prob_margin(const RewardQuad& q) {
    check_quad(q, "inter_prob");
    return sigmoid(inter_margin(q));
}

double inter_prob(const RewardQuad& q) {
    const double composed = inter_prob_composed(q);
    const double margin = inter_prob_margin(q);
    if (std::abs(composed - margin) > 1e-12)
        raise(Errc::invalid_argument, "inter_prob: composed and margin routes disagree");
    return margin;
}

LossOutput loss_rm_bt(double r_w, double r_l) {
    check_finite(r_w, "r_w");
    check_finite(r_l, "r_l");
    const double margin = r_w - r_l;
    LossOutput out;
    out.value = softplus(-margin);
    const double d = dloss_dmargin(margin);
    out.grads["r_w"] = d;
    out.grads["r_l"] = -d;
    return out;
}

LossOutput loss_rm_intra(std::pair<double, double> pair_w, std::pair<double, double> pair_l) {
    check_finite(pair_w.first, "pair_w.r_xw");
    check_finite(pair_w.second, "pair_w.r_xl");
    check_finite(pair_l.first, "pair_l.r_xw");
    check_finite(pair_l.second, "pair_l.r_xl");
    LossOutput out;
    const double margin_w = pair_w.first - pair_w.second;
    const double margin_l = pair_l.first - pair_l.second;
    out.value = softplus(-margin_w) + softplus(-margin_l);
    const double dw = dloss_dmargin(margin_w);
    const double dl = dloss_dmargin(margin_l);
    out.grads["w.r_xw"] = dw;
    out.grads["w.r_xl"] = -dw;
    out.grads["l.r_xw"] = dl;
    out.grads["l.r_xl"] = -dl;
    return out;
}

LossOutput loss_rm_inter(const RewardQuad& up, const RewardQuad& down) {
    check_quad(up, "up");
    check_quad(down, "down");
    LossOutput out;
    const double margin_up = inter_margin(up);
    const double margin_down = inter_margin(down);
    out.value = softplus(-margin_up) + softplus(-margin_down);
    const double du = dloss_dmargin(margin_up);
    out.grads["up.r_hi_w"] = du;
    out.grads["up.r_hi_l"] = -du;
    out.grads["up.r_lo_w"] = -du;
    out.grads["up.r_lo_l"] = du;
    const double dd = dloss_dmargin(margin_down);
    out.grads["down.r_hi_w"] = dd;
    out.grads["down.r_hi_l"] = -dd;
    out.grads["down.r_lo_w"] = -dd;
    out.grads["down.r_lo_l"] = dd;
    return out;
}

LossOutput loss_dpo_bt(double lr_w, double lr_l, double beta) {
    check_beta(beta);
    check_finite(lr_w, "lr_w");
    check_finite(lr_l, "lr_l");
    const double margin = beta * (lr_w - lr_l);
    LossOutput out;
    out.value = softplus(-margin);
    const double d = beta * dloss_dmargin(margin);
    out.grads["lr_w"] = d;
    out.grads["lr_l"] = -d;
    return out;
}

LossOutput loss_dpo_intra(std::pair<double, double> pair_w, std::pair<double, double> pair_l,
                          double beta) {
    check_beta(beta);
    check_finite(pair_w.first, "pair_w.lr_xw");
    check_finite(pair_w.second, "pair_w.lr_xl");
    check_finite(pair_l.first, "pair_l.lr_xw");
    check_finite(pair_l.second, "pair_l.lr_xl");
    LossOutput out;
    const double margin_w = beta * (pair_w.first - pair_w.second);
    const double margin_l = beta * (pair_l.first - pair_l.second);
    out.value = softplus(-margin_w) + softplus(-margin_l);
    const double dw = beta * dloss_dmargin(margin_w);
    const double dl = beta * dloss_dmargin(margin_l);
    out.grads["w.lr_xw"] = dw;
    out.grads["w.lr_xl"] = -dw;
    out.grads["l.lr_xw"] = dl;
    out.grads["l.lr_xl"] = -dl;
    return out;
}

LossOutput loss_dpo_inter(const PolicyLogRatioQuad& up, const PolicyLogRatioQuad& down) {
    check_beta(up.beta);
    if (up.beta != down.beta)
        raise(Errc::invalid_argument, "loss_dpo_inter: mismatched beta between records");
    check_finite(up.lr_hi_w, "up");
    check_finite(up.lr_hi_l, "up");
    check_finite(up.lr_lo_w, "up");
    check_finite(up.lr_lo_l, "up");
    check_finite(down.lr_hi_w, "down");
    check_finite(down.lr_hi_l, "down");
    check_finite(down.lr_lo_w, "down");
    check_finite(down.lr_lo_l, "down");

    const double beta = up.beta;
    const double margin_up = beta * ((up.lr_hi_w - up.lr_hi_l) - (up.lr_lo_w - up.lr_lo_l));
    const double margin_down =
        beta * ((down.lr_hi_w - down.lr_hi_l) - (down.lr_lo_w - down.lr_lo_l));
    LossOutput out;
    out.value = softplus(-margin_up) + softplus(-margin_down);
    const double du = beta * dloss_dmargin(margin_up);
    out.grads["up.lr_hi_w"] = du;
    out.grads["up.lr_hi_l"] = -du;
    out.grads["up.lr_lo_w"] = -du;
    out.grads["up.lr_lo_l"] = du;
    const double dd = beta * dloss_dmargin(margin_down);
    out.grads["down.lr_hi_w"] = dd;
    out.grads["down.lr_hi_l"] = -dd;
    out.grads["down.lr_lo_w"] = -dd;
    out.grads["down.lr_lo_l"] = dd;
    return out;
}

double pairwise_mean(std::span<const double> values) {
    if (values.empty()) return 0.0;
    // Recursive halving keeps the summation tree independent of sharding.
    struct Reducer {
        static double sum(std::span<const double> v) {
            if (v.size() == 1) return v[0];
            if (v.size() == 2) return v[0] + v[1];
            const std::size_t half = v.size() / 2;
            return sum(v.first(half)) + sum(v.subspan(half));
        }
    };
    return Reducer::sum(values) / static_cast<double>(values.size());
}

namespace {

template <typename T, typename MarginFn>
double population_mean(std::span<const T> records, MarginFn&& margin_of) {
    std::vector<double> losses;
    losses.reserve(records.size());
    for (const auto& r : records) losses.push_back(softplus(-margin_of(r)));
    return pairwise_mean(losses);
}

}  // namespace

BatchTerms loss_rm_total(std::span<const std::array<double, 2>> bt,
                         std::span<const std::array<double, 2>> intra,
                         std::span<const RewardQuad> inter, const TermWeights& weights) {
    BatchTerms terms;
    terms.bt_empty = bt.empty();
    terms.intra_empty = intra.empty();
    terms.inter_empty = inter.empty();
    terms.bt = population_mean(bt, [](const auto& r) { return r[0] - r[1]; });
    terms.intra = population_mean(intra, [](const auto& r) { return r[0] - r[1]; });
    terms.inter = population_mean(inter, [](const RewardQuad& q) { return inter_margin(q); });
    terms.total = weights.bt * terms.bt + weights.intra * terms.intra + weights.inter * terms.inter;
    return terms;
}

BatchTerms loss_dpo_total(std::span<const std::array<double, 2>> bt,
                          std::span<const std::array<double, 2>> intra,
                          std::span<const PolicyLogRatioQuad> inter, double beta,
                          const TermWeights& weights) {
    check_beta(beta);
    BatchTerms terms;
    terms.bt_empty = bt.empty();
    terms.intra_empty = intra.empty();
    terms.inter_empty = inter.empty();
    terms.bt = population_mean(bt, [beta](const auto& r) { return beta * (r[0] - r[1]); });
    terms.intra = population_mean(intra, [beta](const auto& r) { return beta * (r[0] - r[1]); });
    terms.inter = population_mean(inter, [](const PolicyLogRatioQuad& q) {
        return q.beta * ((q.lr_hi_w - q.lr_hi_l) - (q.lr_lo_w - q.lr_lo_l));
    });
    terms.total = weights.bt * terms.bt + weights.intra * terms.intra + weights.inter * terms.inter;
    return terms;
}

}  // namespace mapl
