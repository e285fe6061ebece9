#include "mapl/eval.hpp"

#include <cmath>
#include <cstdio>
#include <set>

#include <json.hpp>

#include "mapl/error.hpp"

namespace mapl {

namespace {

using ordered_json = nlohmann::ordered_json;

const std::string kArms[] = {"vanilla", "mlift", "mapl", "intra_only", "inter_only"};

}  // namespace

const std::string& to_string(Arm arm) { return kArms[static_cast<int>(arm)]; }

std::optional<Arm> arm_from_string(std::string_view s) {
    for (int i = 0; i < 5; ++i)
        if (kArms[i] == s) return static_cast<Arm>(i);
    return std::nullopt;
}

Scorer make_rm_scorer(RewardModelParams params) {
    return [params = std::move(params)](const ScoringInputs& in) { return score(params, in); };
}

Scorer make_policy_scorer(PolicyParams params) {
    return [params = std::move(params)](const ScoringInputs& in) {
        return implicit_reward(params, in.prompt, in.response->text());
    };
}

std::vector<Verdict> eval_sq_verdicts(const Scorer& scorer,
                                      std::span<const PreferenceRecord> eval_set) {
    if (eval_set.empty()) raise(Errc::invalid_argument, "eval_sq: empty evaluation set");
    std::vector<Verdict> verdicts;
    verdicts.reserve(eval_set.size());
    for (const auto& rec : eval_set) {
        const double s_w = scorer({rec.prompt, &rec.chosen, {}, 1.0});
        const double s_l = scorer({rec.prompt, &rec.rejected, {}, 0.0});
        verdicts.push_back({rec.record_id, s_w > s_l});
    }
    return verdicts;
}

std::vector<Verdict> eval_if_verdicts(const Scorer& scorer,
                                      std::span<const IntraRecord> eval_if_set) {
    if (eval_if_set.empty()) raise(Errc::invalid_argument, "eval_if: empty evaluation set");
    std::vector<Verdict> verdicts;
    verdicts.reserve(eval_if_set.size());
    for (const auto& rec : eval_if_set) {
        const double semantic = rec.side == Side::chosen ? 1.0 : 0.0;
        const double s_w = scorer({rec.prompt_w, &rec.response, rec.specs_w, semantic});
        const double s_l = scorer({rec.prompt_l, &rec.response, rec.specs_l, semantic});
        verdicts.push_back({rec.record_id, s_w > s_l});
    }
    return verdicts;
}

namespace {

double accuracy_of(const std::vector<Verdict>& verdicts) {
    if (verdicts.empty()) return 0.0;
    std::size_t correct = 0;
    for (const auto& v : verdicts) correct += v.correct ? 1 : 0;
    return static_cast<double>(correct) / static_cast<double>(verdicts.size());
}

}  // namespace

double eval_sq(const Scorer& scorer, std::span<const PreferenceRecord> eval_set) {
    return accuracy_of(eval_sq_verdicts(scorer, eval_set));
}

double eval_if(const Scorer& scorer, std::span<const IntraRecord> eval_if_set) {
    return accuracy_of(eval_if_verdicts(scorer, eval_if_set));
}

EvalReport evaluate(Arm arm, const Scorer& scorer, std::span<const PreferenceRecord> sq_set,
                    std::span<const IntraRecord> if_set) {
    EvalReport report;
    report.arm = arm;
    report.sq_verdicts = eval_sq_verdicts(scorer, sq_set);
    report.if_verdicts = eval_if_verdicts(scorer, if_set);
    report.sq_accuracy = accuracy_of(report.sq_verdicts);
    report.if_accuracy = accuracy_of(report.if_verdicts);
    report.n_sq = report.sq_verdicts.size();
    report.n_if = report.if_verdicts.size();
    return report;
}

EvalReport eval_dpo(const PolicyParams& policy, Arm arm,
                    std::span<const PreferenceRecord> sq_set,
                    std::span<const IntraRecord> if_set) {
    return evaluate(arm, make_policy_scorer(policy), sq_set, if_set);
}

std::string report_to_json(const EvalReport& report) {
    ordered_json j;
    j["arm"] = to_string(report.arm);
    j["sq_accuracy"] = report.sq_accuracy;
    j["if_accuracy"] = report.if_accuracy;
    j["n_sq"] = report.n_sq;
    j["n_if"] = report.n_if;
    ordered_json sq = ordered_json::array();
    for (const auto& v : report.sq_verdicts) sq.push_back({v.record_id, v.correct});
    ordered_json iff = ordered_json::array();
    for (const auto& v : report.if_verdicts) iff.push_back({v.record_id, v.correct});
    j["sq_verdicts"] = std::move(sq);
    j["if_verdicts"] = std::move(iff);
    return j.dump();
}

EvalReport report_from_json(const std::string& text) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        raise(Errc::malformed_input, std::string("report: ") + e.what());
    }
    EvalReport report;
    auto arm = arm_from_string(j.at("arm").get<std::string>());
    if (!arm) raise(Errc::malformed_input, "report: unknown arm");
    report.arm = *arm;
    report.sq_accuracy = j.at("sq_accuracy").get<double>();
    report.if_accuracy = j.at("if_accuracy").get<double>();
    report.n_sq = j.at("n_sq").get<std::size_t>();
    report.n_if = j.at("n_if").get<std::size_t>();
    for (const auto& row : j.at("sq_verdicts"))
        report.sq_verdicts.push_back({row.at(0).get<std::string>(), row.at(1).get<bool>()});
    for (const auto& row : j.at("if_verdicts"))
        report.if_verdicts.push_back({row.at(0).get<std::string>(), row.at(1).get<bool>()});
    if (report.n_sq != report.sq_verdicts.size() || report.n_if != report.if_verdicts.size())
        raise(Errc::malformed_input, "report: counts do not match verdict lists");
    return report;
}

std::string compare_arms(std::span<const EvalReport> reports) {
    if (reports.empty()) raise(Errc::invalid_argument, "compare_arms: no reports");
    std::set<Arm> seen;
    const EvalReport* vanilla = nullptr;
    for (const auto& r : reports) {
        if (!seen.insert(r.arm).second)
            raise(Errc::invalid_argument, "compare_arms: duplicate arm " + to_string(r.arm));
        if (r.arm == Arm::vanilla) vanilla = &r;
    }

    const auto fmt = [](double v) {
        char buf[16];
        std::snprintf(buf, sizeof(buf), "%8.4f", v);
        return std::string(buf);
    };
    const auto fmt_delta = [&](double v, bool have_base) {
        if (!have_base) return std::string("       -");
        char buf[16];
        std::snprintf(buf, sizeof(buf), "%+8.4f", v);
        return std::string(buf);
    };

    std::string out = "arm          sq        if        d_sq      d_if\n";
    for (const auto& r : reports) {
        char label[16];
        std::snprintf(label, sizeof(label), "%-12s", to_string(r.arm).c_str());
        out += label;
        out += fmt(r.sq_accuracy) + "  " + fmt(r.if_accuracy) + "  ";
        const bool base = vanilla != nullptr;
        out += fmt_delta(base ? r.sq_accuracy - vanilla->sq_accuracy : 0.0, base) + "  ";
        out += fmt_delta(base ? r.if_accuracy - vanilla->if_accuracy : 0.0, base) + "\n";
    }
    return out;
}

}  // namespace mapl
