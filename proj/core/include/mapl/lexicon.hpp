#pragma once

#include <span>
#include <string>
#include <vector>

namespace mapl {

// The decoy vocabulary used when a keyword must be generated that the
// conditioned responses do not contain. Ships with the repo as
// data/decoy_lexicon.txt; the embedded copy is the source of truth at runtime.
std::span<const std::string> default_lexicon();

// Loads a one-word-per-line UTF-8 lexicon. Words are normalized; empty lines
// rejected.
std::vector<std::string> load_lexicon(const std::string& path);

}  // namespace mapl
