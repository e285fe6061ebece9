#pragma once

#include <span>
#include <string>
#include <vector>

#include "mapl/jsonl.hpp"

namespace mapl {

struct ValidationIssue {
    std::string record_id;
    std::string what;
};

struct ValidationSummary {
    std::size_t checked_bt = 0;
    std::size_t checked_intra = 0;
    std::size_t checked_inter = 0;
    std::size_t checked_mlift = 0;
    std::vector<ValidationIssue> issues;

    std::size_t checked_total() const {
        return checked_bt + checked_intra + checked_inter + checked_mlift;
    }
    bool clean() const { return issues.empty(); }
};

// Re-derives every stored relationship/direction/category claim by running
// verify over the stored specs, and checks that constrained prompts embed
// their instructions' rendered text.
ValidationSummary validate_records(std::span<const DatasetRecord> records);

}  // namespace mapl
