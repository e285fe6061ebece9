#pragma once

#include <string>
#include <variant>
#include <vector>

#include "mapl/records.hpp"

namespace mapl {

// One-line JSON encodings with fixed key order.
std::string to_jsonl(const PreferenceRecord& rec);
std::string to_jsonl(const IntraRecord& rec);
std::string to_jsonl(const InterRecord& rec);
std::string to_jsonl(const MliftRecord& rec);

using DatasetRecord = std::variant<PreferenceRecord, IntraRecord, InterRecord, MliftRecord>;

// Parses any dataset line by its "kind" tag. context names the source (file
// and line) for error messages.
DatasetRecord parse_dataset_line(const std::string& line, const std::string& context);

// Corpus ingestion: JSONL of {"kind":"bt","id",...,"prompt","chosen","rejected"}
// records. Malformed lines raise Errc::malformed_input naming the line number.
std::vector<PreferenceRecord> load_corpus(const std::string& path);

std::vector<DatasetRecord> load_dataset_file(const std::string& path);
std::vector<IntraRecord> load_intra_file(const std::string& path);
std::vector<InterRecord> load_inter_file(const std::string& path);
std::vector<MliftRecord> load_mlift_file(const std::string& path);

std::string read_file(const std::string& path);

// Writes via a temp file in the same directory plus rename, so readers never
// observe partial content and failed stages leave nothing behind.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace mapl
