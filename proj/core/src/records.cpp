#include "mapl/records.hpp"

namespace mapl {

namespace {
const std::string kSide[] = {"chosen", "rejected"};
const std::string kRelationship[] = {"all_true_vs_some_false", "some_true_vs_all_false"};
const std::string kDirection[] = {"up", "down"};
const std::string kCategory[] = {"original", "follow_kept", "follow_reversed"};
}  // namespace

const std::string& to_string(Side v) { return kSide[static_cast<int>(v)]; }
const std::string& to_string(Relationship v) { return kRelationship[static_cast<int>(v)]; }
const std::string& to_string(Direction v) { return kDirection[static_cast<int>(v)]; }
const std::string& to_string(MliftCategory v) { return kCategory[static_cast<int>(v)]; }

std::optional<Side> side_from_string(std::string_view s) {
    for (int i = 0; i < 2; ++i)
        if (kSide[i] == s) return static_cast<Side>(i);
    return std::nullopt;
}

std::optional<Relationship> relationship_from_string(std::string_view s) {
    for (int i = 0; i < 2; ++i)
        if (kRelationship[i] == s) return static_cast<Relationship>(i);
    return std::nullopt;
}

std::optional<Direction> direction_from_string(std::string_view s) {
    for (int i = 0; i < 2; ++i)
        if (kDirection[i] == s) return static_cast<Direction>(i);
    return std::nullopt;
}

std::optional<MliftCategory> mlift_category_from_string(std::string_view s) {
    for (int i = 0; i < 3; ++i)
        if (kCategory[i] == s) return static_cast<MliftCategory>(i);
    return std::nullopt;
}

}  // namespace mapl
