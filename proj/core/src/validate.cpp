#include "mapl/validate.hpp"

namespace mapl {

namespace {

bool all_verify(std::span<const ConstraintSpec> specs, const ResponseText& r, bool expected) {
    for (const auto& spec : specs)
        if (verify(spec, r) != expected) return false;
    return true;
}

bool any_verify(std::span<const ConstraintSpec> specs, const ResponseText& r, bool expected) {
    for (const auto& spec : specs)
        if (verify(spec, r) == expected) return true;
    return false;
}

// A constrained prompt must end with its instructions joined exactly as
// compose_prompt emits them.
bool prompt_carries_specs(const std::string& prompt, std::span<const ConstraintSpec> specs) {
    if (specs.empty()) return false;
    std::string suffix = "\n\n";
    for (std::size_t i = 0; i < specs.size(); ++i) {
        if (i > 0) suffix += ' ';
        suffix += specs[i].text;
    }
    return prompt.size() > suffix.size() &&
           prompt.compare(prompt.size() - suffix.size(), suffix.size(), suffix) == 0;
}

struct Checker {
    ValidationSummary& summary;

    void problem(const std::string& id, const std::string& what) {
        summary.issues.push_back({id, what});
    }

    void check(const PreferenceRecord& rec) {
        ++summary.checked_bt;
        if (rec.prompt.empty()) problem(rec.record_id, "empty prompt");
        if (rec.chosen.text() == rec.rejected.text())
            problem(rec.record_id, "chosen equals rejected");
    }

    void check(const IntraRecord& rec) {
        ++summary.checked_intra;
        if (rec.specs_w.empty() || rec.specs_l.empty()) {
            problem(rec.record_id, "missing specs");
            return;
        }
        if (!prompt_carries_specs(rec.prompt_w, rec.specs_w))
            problem(rec.record_id, "prompt_w does not embed specs_w");
        if (!prompt_carries_specs(rec.prompt_l, rec.specs_l))
            problem(rec.record_id, "prompt_l does not embed specs_l");
        if (rec.relationship == Relationship::all_true_vs_some_false) {
            if (!all_verify(rec.specs_w, rec.response, true))
                problem(rec.record_id, "response must satisfy every spec_w");
            if (!any_verify(rec.specs_l, rec.response, false))
                problem(rec.record_id, "response must violate at least one spec_l");
        } else {
            if (!all_verify(rec.specs_l, rec.response, false))
                problem(rec.record_id, "response must violate every spec_l");
            if (!any_verify(rec.specs_w, rec.response, true))
                problem(rec.record_id, "response must satisfy at least one spec_w");
        }
    }

    void check(const InterRecord& rec) {
        ++summary.checked_inter;
        if (rec.specs.empty()) {
            problem(rec.record_id, "missing specs");
            return;
        }
        const std::string& constrained =
            rec.direction == Direction::up ? rec.prompt_hi : rec.prompt_lo;
        if (!prompt_carries_specs(constrained, rec.specs))
            problem(rec.record_id, "constrained prompt does not embed specs");
        if (rec.direction == Direction::up) {
            if (!all_verify(rec.specs, rec.chosen, true))
                problem(rec.record_id, "chosen must satisfy every spec");
            if (!any_verify(rec.specs, rec.rejected, false))
                problem(rec.record_id, "rejected must violate at least one spec");
        } else {
            if (!all_verify(rec.specs, rec.chosen, false))
                problem(rec.record_id, "chosen must violate every spec");
            if (!any_verify(rec.specs, rec.rejected, true))
                problem(rec.record_id, "rejected must satisfy at least one spec");
        }
    }

    void check(const MliftRecord& rec) {
        ++summary.checked_mlift;
        if (rec.category == MliftCategory::original) {
            if (!rec.specs.empty()) problem(rec.record_id, "original record carries specs");
            return;
        }
        if (rec.specs.empty()) {
            problem(rec.record_id, "missing specs");
            return;
        }
        if (!prompt_carries_specs(rec.prompt, rec.specs))
            problem(rec.record_id, "prompt does not embed specs");
        if (!all_verify(rec.specs, rec.preferred, true))
            problem(rec.record_id, "preferred must satisfy every spec");
        if (!any_verify(rec.specs, rec.dispreferred, false))
            problem(rec.record_id, "dispreferred must violate at least one spec");
    }
};

}  // namespace

ValidationSummary validate_records(std::span<const DatasetRecord> records) {
    ValidationSummary summary;
    Checker checker{summary};
    for (const auto& record : records)
        std::visit([&](const auto& rec) { checker.check(rec); }, record);
    return summary;
}

}  // namespace mapl
