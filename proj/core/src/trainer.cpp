#include "mapl/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include <json.hpp>

#include "mapl/error.hpp"
#include "mapl/rng.hpp"

namespace mapl {

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr int kDivergenceStreak = 10;

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

std::uint64_t parse_hex64(const std::string& s) {
    if (s.size() != 16) raise(Errc::malformed_input, "checkpoint: bad hash " + s);
    std::uint64_t v = 0;
    for (char c : s) {
        v <<= 4;
        if (c >= '0' && c <= '9')
            v |= static_cast<std::uint64_t>(c - '0');
        else if (c >= 'a' && c <= 'f')
            v |= static_cast<std::uint64_t>(c - 'a' + 10);
        else
            raise(Errc::malformed_input, "checkpoint: bad hash " + s);
    }
    return v;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

double constraint_satisfaction_rate(const ResponseText& response,
                                    std::span<const ConstraintSpec> specs) {
    if (specs.empty()) return 1.0;
    int satisfied = 0;
    for (const auto& spec : specs)
        if (verify(spec, response)) ++satisfied;
    return static_cast<double>(satisfied) / static_cast<double>(specs.size());
}

FeatureVector make_features(const ScoringInputs& in) {
    return FeatureVector{
        1.0,
        constraint_satisfaction_rate(*in.response, in.specs),
        static_cast<double>(in.specs.size()) / 4.0,
        in.semantic,
    };
}

std::uint64_t content_hash(std::string_view text) { return fnv1a64(text); }

std::uint64_t ContentRegistry::intern(std::string_view text) {
    const std::uint64_t h = content_hash(text);
    auto [it, inserted] = entries_.try_emplace(h, std::string(text));
    if (!inserted && it->second != text)
        raise(Errc::hash_collision, "content hash collision between distinct texts");
    return h;
}

double score(const RewardModelParams& params, const ScoringInputs& in) {
    if (params.mode == RmMode::tabular) {
        auto it = params.table.find({content_hash(in.prompt), content_hash(in.response->text())});
        return it == params.table.end() ? 0.0 : it->second;
    }
    const FeatureVector f = make_features(in);
    double acc = 0;
    for (int i = 0; i < 4; ++i) acc += params.weights[i] * f[i];
    return acc;
}

void PolicyParams::register_pair(std::uint64_t prompt_hash, std::uint64_t response_hash) {
    auto& set = support[prompt_hash];
    if (std::find(set.begin(), set.end(), response_hash) == set.end()) {
        set.push_back(response_hash);
        std::sort(set.begin(), set.end());
    }
    logits.try_emplace({prompt_hash, response_hash}, 0.0);
}

bool PolicyParams::registered(std::uint64_t prompt_hash, std::uint64_t response_hash) const {
    return logits.count({prompt_hash, response_hash}) != 0;
}

namespace {

double log_sum_exp(const PolicyParams& policy, std::uint64_t prompt_hash) {
    const auto& set = policy.support.at(prompt_hash);
    double max_logit = -std::numeric_limits<double>::infinity();
    for (auto rh : set) max_logit = std::max(max_logit, policy.logits.at({prompt_hash, rh}));
    double acc = 0;
    for (auto rh : set) acc += std::exp(policy.logits.at({prompt_hash, rh}) - max_logit);
    return max_logit + std::log(acc);
}

}  // namespace

double policy_log_prob(const PolicyParams& policy, std::uint64_t prompt_hash,
                       std::uint64_t response_hash) {
    if (!policy.registered(prompt_hash, response_hash))
        raise(Errc::unregistered_pair, "policy: pair not registered");
    return policy.logits.at({prompt_hash, response_hash}) - log_sum_exp(policy, prompt_hash);
}

double policy_log_ratio(const PolicyParams& policy, std::uint64_t prompt_hash,
                        std::uint64_t response_hash) {
    const double log_ref =
        -std::log(static_cast<double>(policy.support.at(prompt_hash).size()));
    return policy_log_prob(policy, prompt_hash, response_hash) - log_ref;
}

double implicit_reward(const PolicyParams& policy, std::string_view prompt,
                       std::string_view response) {
    const std::uint64_t ph = content_hash(prompt);
    const std::uint64_t rh = content_hash(response);
    if (!policy.registered(ph, rh))
        raise(Errc::unregistered_pair, "policy: (prompt, response) not registered");
    return policy.beta * policy_log_ratio(policy, ph, rh);
}

std::string TrainHistory::to_csv() const {
    std::string out = "epoch,total,bt,intra,inter\n";
    for (const auto& e : epochs) {
        out += std::to_string(e.epoch);
        out += ',';
        out += format_double(e.total);
        out += ',';
        out += format_double(e.bt);
        out += ',';
        out += format_double(e.intra);
        out += ',';
        out += format_double(e.inter);
        out += '\n';
    }
    return out;
}

namespace {

struct Slot {
    PairKey key;
    FeatureVector features;
};

Slot make_slot(ContentRegistry& reg, std::string_view prompt, const ResponseText& response,
               std::span<const ConstraintSpec> specs, double semantic) {
    Slot slot;
    slot.key = {reg.intern(prompt), reg.intern(response.text())};
    slot.features = make_features({prompt, &response, specs, semantic});
    return slot;
}

// The dataset lowered to scoring slots: bt and intra records are (winner,
// loser) pairs, inter records are (hi_w, hi_l, lo_w, lo_l) quads.
struct CompiledRm {
    std::vector<std::array<Slot, 2>> bt;
    std::vector<std::array<Slot, 2>> intra;
    std::vector<std::array<Slot, 4>> inter;
};

CompiledRm compile_rm(const MaplDataset& dataset) {
    ContentRegistry reg;
    CompiledRm out;
    for (const auto& rec : dataset.bt) {
        out.bt.push_back({make_slot(reg, rec.prompt, rec.chosen, {}, 1.0),
                          make_slot(reg, rec.prompt, rec.rejected, {}, 0.0)});
    }
    for (const auto& rec : dataset.intra) {
        const double semantic = rec.side == Side::chosen ? 1.0 : 0.0;
        out.intra.push_back({make_slot(reg, rec.prompt_w, rec.response, rec.specs_w, semantic),
                             make_slot(reg, rec.prompt_l, rec.response, rec.specs_l, semantic)});
    }
    for (const auto& rec : dataset.inter) {
        const bool hi_constrained = rec.direction == Direction::up;
        const std::span<const ConstraintSpec> hi_specs =
            hi_constrained ? std::span<const ConstraintSpec>(rec.specs)
                           : std::span<const ConstraintSpec>();
        const std::span<const ConstraintSpec> lo_specs =
            hi_constrained ? std::span<const ConstraintSpec>()
                           : std::span<const ConstraintSpec>(rec.specs);
        out.inter.push_back({make_slot(reg, rec.prompt_hi, rec.chosen, hi_specs, 1.0),
                             make_slot(reg, rec.prompt_hi, rec.rejected, hi_specs, 0.0),
                             make_slot(reg, rec.prompt_lo, rec.chosen, lo_specs, 1.0),
                             make_slot(reg, rec.prompt_lo, rec.rejected, lo_specs, 0.0)});
    }
    return out;
}

CompiledRm compile_rm_mlift(std::span<const MliftRecord> records) {
    ContentRegistry reg;
    CompiledRm out;
    for (const auto& rec : records) {
        const bool reversed = rec.category == MliftCategory::follow_reversed;
        const double sem_preferred = reversed ? 0.0 : 1.0;
        out.bt.push_back({make_slot(reg, rec.prompt, rec.preferred, rec.specs, sem_preferred),
                          make_slot(reg, rec.prompt, rec.dispreferred, rec.specs,
                                    1.0 - sem_preferred)});
    }
    return out;
}

struct RmGradient {
    std::map<PairKey, double> table;
    FeatureVector weights{};
};

class RmObjective {
public:
    RmObjective(const CompiledRm& data, const TrainConfig& config)
        : data_(data), config_(config) {}

    double slot_score(const RewardModelParams& params, const Slot& slot) const {
        if (params.mode == RmMode::tabular) {
            auto it = params.table.find(slot.key);
            return it == params.table.end() ? 0.0 : it->second;
        }
        double acc = 0;
        for (int i = 0; i < 4; ++i) acc += params.weights[i] * slot.features[i];
        return acc;
    }

    BatchTerms loss(const RewardModelParams& params) const {
        std::vector<std::array<double, 2>> bt, intra;
        std::vector<RewardQuad> inter;
        bt.reserve(data_.bt.size());
        intra.reserve(data_.intra.size());
        inter.reserve(data_.inter.size());
        for (const auto& pair : data_.bt)
            bt.push_back({slot_score(params, pair[0]), slot_score(params, pair[1])});
        for (const auto& pair : data_.intra)
            intra.push_back({slot_score(params, pair[0]), slot_score(params, pair[1])});
        for (const auto& quad : data_.inter)
            inter.push_back({slot_score(params, quad[0]), slot_score(params, quad[1]),
                             slot_score(params, quad[2]), slot_score(params, quad[3])});
        return loss_rm_total(bt, intra, inter, config_.term_weights);
    }

    // dL/dscore coefficients pushed onto slots, chained into parameters.
    void accumulate(const RewardModelParams& params, RmGradient& grad,
                    std::span<const std::size_t> bt_idx, std::span<const std::size_t> intra_idx,
                    std::span<const std::size_t> inter_idx) const {
        const auto add = [&](const Slot& slot, double coeff) {
            if (params.mode == RmMode::tabular) {
                grad.table[slot.key] += coeff;
            } else {
                for (int i = 0; i < 4; ++i) grad.weights[i] += coeff * slot.features[i];
            }
        };
        if (!bt_idx.empty()) {
            const double scale = config_.term_weights.bt / static_cast<double>(bt_idx.size());
            for (auto i : bt_idx) {
                const auto& pair = data_.bt[i];
                const double margin =
                    slot_score(params, pair[0]) - slot_score(params, pair[1]);
                const double d = scale * (sigmoid(margin) - 1.0);
                add(pair[0], d);
                add(pair[1], -d);
            }
        }
        if (!intra_idx.empty()) {
            const double scale =
                config_.term_weights.intra / static_cast<double>(intra_idx.size());
            for (auto i : intra_idx) {
                const auto& pair = data_.intra[i];
                const double margin =
                    slot_score(params, pair[0]) - slot_score(params, pair[1]);
                const double d = scale * (sigmoid(margin) - 1.0);
                add(pair[0], d);
                add(pair[1], -d);
            }
        }
        if (!inter_idx.empty()) {
            const double scale =
                config_.term_weights.inter / static_cast<double>(inter_idx.size());
            for (auto i : inter_idx) {
                const auto& quad = data_.inter[i];
                const double margin =
                    (slot_score(params, quad[0]) - slot_score(params, quad[1])) -
                    (slot_score(params, quad[2]) - slot_score(params, quad[3]));
                const double d = scale * (sigmoid(margin) - 1.0);
                add(quad[0], d);
                add(quad[1], -d);
                add(quad[2], -d);
                add(quad[3], d);
            }
        }
    }

    void apply(RewardModelParams& params, const RmGradient& grad) const {
        if (params.mode == RmMode::tabular) {
            for (const auto& [key, g] : grad.table) params.table[key] -= config_.step_size * g;
        } else {
            for (int i = 0; i < 4; ++i) params.weights[i] -= config_.step_size * grad.weights[i];
        }
    }

private:
    const CompiledRm& data_;
    const TrainConfig& config_;
};

std::vector<std::size_t> index_range(std::size_t n) {
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    return idx;
}

void shuffle_indices(std::vector<std::size_t>& idx, Rng& rng) {
    for (std::size_t i = 0; i + 1 < idx.size(); ++i) {
        const std::size_t j = i + rng.below(idx.size() - i);
        std::swap(idx[i], idx[j]);
    }
}

std::span<const std::size_t> chunk_of(std::span<const std::size_t> idx, std::size_t chunk,
                                      std::size_t chunk_count) {
    if (idx.empty() || chunk >= chunk_count) return {};
    const std::size_t per = (idx.size() + chunk_count - 1) / chunk_count;
    const std::size_t begin = std::min(chunk * per, idx.size());
    const std::size_t end = std::min(begin + per, idx.size());
    return idx.subspan(begin, end - begin);
}

void check_config(const TrainConfig& config) {
    if (config.step_size <= 0) raise(Errc::config_error, "trainer: step_size must be positive");
    if (config.epochs < 1) raise(Errc::config_error, "trainer: epochs must be >= 1");
    if (config.batch_size < 0) raise(Errc::config_error, "trainer: batch_size must be >= 0");
}

RmTrainResult descend_rm(const CompiledRm& data, const TrainConfig& config) {
    check_config(config);
    RewardModelParams params;
    params.mode = config.mode;

    RmObjective objective(data, config);
    RmTrainResult result;
    double prev_total = std::numeric_limits<double>::infinity();
    int increase_streak = 0;

    auto bt_idx = index_range(data.bt.size());
    auto intra_idx = index_range(data.intra.size());
    auto inter_idx = index_range(data.inter.size());

    for (int epoch = 1; epoch <= config.epochs; ++epoch) {
        const BatchTerms terms = objective.loss(params);
        result.history.epochs.push_back({epoch, terms.total, terms.bt, terms.intra, terms.inter});
        if (terms.total > prev_total) {
            if (++increase_streak >= kDivergenceStreak)
                raise(Errc::divergence,
                      "train_rm: loss increased for 10 consecutive epochs; reduce step_size");
        } else {
            increase_streak = 0;
        }
        prev_total = terms.total;

        if (config.batch_size == 0) {
            RmGradient grad;
            objective.accumulate(params, grad, bt_idx, intra_idx, inter_idx);
            objective.apply(params, grad);
        } else {
            Rng rng = derive_rng(config.seed, "epoch:" + std::to_string(epoch), "shuffle");
            shuffle_indices(bt_idx, rng);
            shuffle_indices(intra_idx, rng);
            shuffle_indices(inter_idx, rng);
            const std::size_t largest =
                std::max({data.bt.size(), data.intra.size(), data.inter.size()});
            const std::size_t chunks =
                (largest + static_cast<std::size_t>(config.batch_size) - 1) /
                static_cast<std::size_t>(config.batch_size);
            for (std::size_t c = 0; c < std::max<std::size_t>(chunks, 1); ++c) {
                RmGradient grad;
                objective.accumulate(params, grad, chunk_of(bt_idx, c, chunks),
                                     chunk_of(intra_idx, c, chunks),
                                     chunk_of(inter_idx, c, chunks));
                objective.apply(params, grad);
            }
        }
    }
    result.params = std::move(params);
    return result;
}

}  // namespace

RmTrainResult train_rm(const MaplDataset& dataset, const TrainConfig& config) {
    if (dataset.bt.empty() && dataset.intra.empty() && dataset.inter.empty())
        raise(Errc::invalid_argument, "train_rm: empty dataset");
    const CompiledRm data = compile_rm(dataset);
    return descend_rm(data, config);
}

RmTrainResult train_rm_mlift(std::span<const MliftRecord> records, const TrainConfig& config) {
    if (records.empty()) raise(Errc::invalid_argument, "train_rm_mlift: empty dataset");
    const CompiledRm data = compile_rm_mlift(records);
    TrainConfig vanilla = config;
    vanilla.term_weights = {1.0, 0.0, 0.0};
    return descend_rm(data, vanilla);
}

namespace {

// DPO lowering: every prompt of a source record is registered with both of
// the record's responses so log ratios can move within each prompt's
// support.
struct CompiledDpo {
    PolicyParams initial;
    std::vector<std::array<PairKey, 2>> bt;
    std::vector<std::array<PairKey, 2>> intra;
    std::vector<std::array<PairKey, 4>> inter;
};

CompiledDpo compile_dpo(const MaplDataset& dataset, double beta) {
    const std::size_t n = dataset.bt.size();
    if (dataset.intra.size() != 2 * n || dataset.inter.size() != 2 * n)
        raise(Errc::invalid_argument,
              "train_dpo: dataset populations are not aligned 1:2:2 with bt records");

    ContentRegistry reg;
    CompiledDpo out;
    out.initial.beta = beta;

    for (std::size_t i = 0; i < n; ++i) {
        const auto& src = dataset.bt[i];
        for (std::size_t j : {2 * i, 2 * i + 1}) {
            const auto& intra = dataset.intra[j];
            const auto& inter = dataset.inter[j];
            if (intra.record_id.rfind(src.record_id + ".", 0) != 0 ||
                inter.record_id.rfind(src.record_id + ".", 0) != 0)
                raise(Errc::invalid_argument,
                      "train_dpo: intra/inter records do not match bt record " + src.record_id);
        }

        const std::uint64_t chosen_h = reg.intern(src.chosen.text());
        const std::uint64_t rejected_h = reg.intern(src.rejected.text());
        const auto register_prompt = [&](std::string_view prompt) {
            const std::uint64_t ph = reg.intern(prompt);
            out.initial.register_pair(ph, chosen_h);
            out.initial.register_pair(ph, rejected_h);
            return ph;
        };

        const std::uint64_t x = register_prompt(src.prompt);
        out.bt.push_back({PairKey{x, chosen_h}, PairKey{x, rejected_h}});

        for (std::size_t j : {2 * i, 2 * i + 1}) {
            const auto& rec = dataset.intra[j];
            const std::uint64_t y = reg.intern(rec.response.text());
            const std::uint64_t pw = register_prompt(rec.prompt_w);
            const std::uint64_t pl = register_prompt(rec.prompt_l);
            out.intra.push_back({PairKey{pw, y}, PairKey{pl, y}});
        }
        for (std::size_t j : {2 * i, 2 * i + 1}) {
            const auto& rec = dataset.inter[j];
            const std::uint64_t hi = register_prompt(rec.prompt_hi);
            const std::uint64_t lo = register_prompt(rec.prompt_lo);
            out.inter.push_back({PairKey{hi, chosen_h}, PairKey{hi, rejected_h},
                                 PairKey{lo, chosen_h}, PairKey{lo, rejected_h}});
        }
    }
    return out;
}

class DpoObjective {
public:
    DpoObjective(const CompiledDpo& data, const TrainConfig& config)
        : data_(data), config_(config) {}

    BatchTerms loss(const PolicyParams& policy) const {
        std::vector<std::array<double, 2>> bt, intra;
        std::vector<PolicyLogRatioQuad> inter;
        for (const auto& pair : data_.bt)
            bt.push_back({ratio(policy, pair[0]), ratio(policy, pair[1])});
        for (const auto& pair : data_.intra)
            intra.push_back({ratio(policy, pair[0]), ratio(policy, pair[1])});
        for (const auto& quad : data_.inter)
            inter.push_back({ratio(policy, quad[0]), ratio(policy, quad[1]),
                             ratio(policy, quad[2]), ratio(policy, quad[3]), policy.beta});
        return loss_dpo_total(bt, intra, inter, policy.beta, config_.term_weights);
    }

    void step(PolicyParams& policy) const {
        // dL/d(log ratio) per registered pair, then chained through the
        // softmax into logits.
        std::map<PairKey, double> lr_grad;
        const double beta = policy.beta;

        if (!data_.bt.empty()) {
            const double scale =
                beta * config_.term_weights.bt / static_cast<double>(data_.bt.size());
            for (const auto& pair : data_.bt) {
                const double margin = beta * (ratio(policy, pair[0]) - ratio(policy, pair[1]));
                const double d = scale * (sigmoid(margin) - 1.0);
                lr_grad[pair[0]] += d;
                lr_grad[pair[1]] -= d;
            }
        }
        if (!data_.intra.empty()) {
            const double scale =
                beta * config_.term_weights.intra / static_cast<double>(data_.intra.size());
            for (const auto& pair : data_.intra) {
                const double margin = beta * (ratio(policy, pair[0]) - ratio(policy, pair[1]));
                const double d = scale * (sigmoid(margin) - 1.0);
                lr_grad[pair[0]] += d;
                lr_grad[pair[1]] -= d;
            }
        }
        if (!data_.inter.empty()) {
            const double scale =
                beta * config_.term_weights.inter / static_cast<double>(data_.inter.size());
            for (const auto& quad : data_.inter) {
                const double margin =
                    beta * ((ratio(policy, quad[0]) - ratio(policy, quad[1])) -
                            (ratio(policy, quad[2]) - ratio(policy, quad[3])));
                const double d = scale * (sigmoid(margin) - 1.0);
                lr_grad[quad[0]] += d;
                lr_grad[quad[1]] -= d;
                lr_grad[quad[2]] -= d;
                lr_grad[quad[3]] += d;
            }
        }

        // d(log ratio)/d(logit) = delta - pi within each prompt's support.
        std::map<PairKey, double> logit_grad;
        for (const auto& [prompt_hash, responses] : policy.support) {
            double total = 0;
            bool touched = false;
            for (auto rh : responses) {
                auto it = lr_grad.find({prompt_hash, rh});
                if (it != lr_grad.end()) {
                    total += it->second;
                    touched = true;
                }
            }
            if (!touched) continue;
            const double lse = log_sum_exp(policy, prompt_hash);
            for (auto rh : responses) {
                const double pi = std::exp(policy.logits.at({prompt_hash, rh}) - lse);
                auto it = lr_grad.find({prompt_hash, rh});
                const double own = it == lr_grad.end() ? 0.0 : it->second;
                logit_grad[{prompt_hash, rh}] = own - pi * total;
            }
        }
        for (const auto& [key, g] : logit_grad) policy.logits[key] -= config_.step_size * g;
    }

private:
    static double ratio(const PolicyParams& policy, const PairKey& key) {
        return policy_log_ratio(policy, key.first, key.second);
    }

    const CompiledDpo& data_;
    const TrainConfig& config_;
};

}  // namespace

DpoTrainResult train_dpo(const MaplDataset& dataset, const TrainConfig& config) {
    check_config(config);
    if (config.beta <= 0) raise(Errc::config_error, "train_dpo: beta must be positive");
    if (dataset.bt.empty()) raise(Errc::invalid_argument, "train_dpo: empty dataset");

    const CompiledDpo data = compile_dpo(dataset, config.beta);
    DpoObjective objective(data, config);

    DpoTrainResult result;
    result.params = data.initial;
    double prev_total = std::numeric_limits<double>::infinity();
    int increase_streak = 0;
    for (int epoch = 1; epoch <= config.epochs; ++epoch) {
        const BatchTerms terms = objective.loss(result.params);
        result.history.epochs.push_back({epoch, terms.total, terms.bt, terms.intra, terms.inter});
        if (terms.total > prev_total) {
            if (++increase_streak >= kDivergenceStreak)
                raise(Errc::divergence,
                      "train_dpo: loss increased for 10 consecutive epochs; reduce step_size");
        } else {
            increase_streak = 0;
        }
        prev_total = terms.total;
        objective.step(result.params);
    }
    return result;
}

std::string checkpoint_to_json(const RewardModelParams& params) {
    ordered_json j;
    if (params.mode == RmMode::tabular) {
        j["mode"] = "tabular";
        ordered_json table = ordered_json::array();
        for (const auto& [key, value] : params.table)
            table.push_back({hex64(key.first), hex64(key.second), value});
        j["table"] = std::move(table);
    } else {
        j["mode"] = "featurized";
        j["weights"] = params.weights;
    }
    return j.dump();
}

std::string checkpoint_to_json(const PolicyParams& params) {
    ordered_json j;
    j["mode"] = "policy";
    j["beta"] = params.beta;
    ordered_json table = ordered_json::array();
    for (const auto& [key, value] : params.logits)
        table.push_back({hex64(key.first), hex64(key.second), value});
    j["table"] = std::move(table);
    return j.dump();
}

Checkpoint checkpoint_from_json(const std::string& text) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        raise(Errc::malformed_input, std::string("checkpoint: ") + e.what());
    }
    if (!j.is_object() || !j.contains("mode") || !j["mode"].is_string())
        raise(Errc::malformed_input, "checkpoint: missing mode");
    const std::string mode = j["mode"].get<std::string>();

    const auto parse_table = [&](auto&& put) {
        if (!j.contains("table") || !j["table"].is_array())
            raise(Errc::malformed_input, "checkpoint: missing table");
        for (const auto& row : j["table"]) {
            if (!row.is_array() || row.size() != 3 || !row[0].is_string() ||
                !row[1].is_string() || !row[2].is_number())
                raise(Errc::malformed_input, "checkpoint: bad table row");
            put(parse_hex64(row[0].get<std::string>()), parse_hex64(row[1].get<std::string>()),
                row[2].get<double>());
        }
    };

    if (mode == "tabular") {
        RewardModelParams params;
        params.mode = RmMode::tabular;
        parse_table([&](std::uint64_t ph, std::uint64_t rh, double v) {
            params.table[{ph, rh}] = v;
        });
        return params;
    }
    if (mode == "featurized") {
        RewardModelParams params;
        params.mode = RmMode::featurized;
        if (!j.contains("weights") || !j["weights"].is_array() || j["weights"].size() != 4)
            raise(Errc::malformed_input, "checkpoint: featurized weights must have 4 entries");
        for (int i = 0; i < 4; ++i) params.weights[i] = j["weights"][i].get<double>();
        return params;
    }
    if (mode == "policy") {
        PolicyParams params;
        if (!j.contains("beta") || !j["beta"].is_number())
            raise(Errc::malformed_input, "checkpoint: policy needs beta");
        params.beta = j["beta"].get<double>();
        if (params.beta <= 0) raise(Errc::malformed_input, "checkpoint: beta must be positive");
        parse_table([&](std::uint64_t ph, std::uint64_t rh, double v) {
            params.register_pair(ph, rh);
            params.logits[{ph, rh}] = v;
        });
        return params;
    }
    raise(Errc::malformed_input, "checkpoint: unknown mode \"" + mode + "\"");
}

}  // namespace mapl
