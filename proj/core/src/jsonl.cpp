#include "mapl/jsonl.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>

#include <json.hpp>

#include "mapl/error.hpp"

namespace mapl {

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json spec_to_json(const ConstraintSpec& spec) {
    ordered_json params = ordered_json::object();
    if (family_uses_word(spec.family)) params["word"] = spec.word;
    if (family_uses_threshold(spec.family)) params["n"] = spec.n;
    ordered_json j;
    j["family"] = family_id(spec.family);
    j["params"] = std::move(params);
    j["text"] = spec.text;
    return j;
}

ordered_json specs_to_json(const std::vector<ConstraintSpec>& specs) {
    ordered_json arr = ordered_json::array();
    for (const auto& spec : specs) arr.push_back(spec_to_json(spec));
    return arr;
}

[[noreturn]] void fail(const std::string& context, const std::string& what) {
    raise(Errc::malformed_input, context + ": " + what);
}

void expect_keys(const ordered_json& j, const std::set<std::string>& keys,
                 const std::string& context) {
    if (!j.is_object()) fail(context, "expected a JSON object");
    for (const auto& [key, value] : j.items())
        if (!keys.count(key)) fail(context, "unknown key \"" + key + "\"");
    for (const auto& key : keys)
        if (!j.contains(key)) fail(context, "missing key \"" + key + "\"");
}

std::string get_string(const ordered_json& j, const char* key, const std::string& context) {
    if (!j[key].is_string()) fail(context, std::string("key \"") + key + "\" must be a string");
    return j[key].get<std::string>();
}

ConstraintSpec spec_from_json(const ordered_json& j, const std::string& context) {
    expect_keys(j, {"family", "params", "text"}, context);
    const std::string fid = get_string(j, "family", context);
    auto family = family_from_id(fid);
    if (!family) fail(context, "unknown family \"" + fid + "\"");
    const ordered_json& params = j["params"];
    if (!params.is_object()) fail(context, "params must be an object");

    long long n = 0;
    std::string word;
    std::set<std::string> expected;
    if (family_uses_word(*family)) expected.insert("word");
    if (family_uses_threshold(*family)) expected.insert("n");
    expect_keys(params, expected, context);
    if (family_uses_word(*family)) word = get_string(params, "word", context);
    if (family_uses_threshold(*family)) {
        if (!params["n"].is_number_integer()) fail(context, "params.n must be an integer");
        n = params["n"].get<long long>();
    }

    ConstraintSpec spec;
    try {
        spec = make_spec(*family, n, word);
    } catch (const Error& e) {
        fail(context, e.what());
    }
    if (spec.text != get_string(j, "text", context))
        fail(context, "rendered text does not match params");
    return spec;
}

std::vector<ConstraintSpec> specs_from_json(const ordered_json& arr, const std::string& context) {
    if (!arr.is_array()) fail(context, "specs must be an array");
    std::vector<ConstraintSpec> specs;
    specs.reserve(arr.size());
    for (const auto& item : arr) specs.push_back(spec_from_json(item, context));
    return specs;
}

PreferenceRecord preference_from_json(const ordered_json& j, const std::string& context) {
    expect_keys(j, {"kind", "id", "prompt", "chosen", "rejected"}, context);
    PreferenceRecord rec;
    rec.record_id = get_string(j, "id", context);
    rec.prompt = get_string(j, "prompt", context);
    rec.chosen = ResponseText(get_string(j, "chosen", context));
    rec.rejected = ResponseText(get_string(j, "rejected", context));
    if (rec.record_id.empty()) fail(context, "id must be non-empty");
    if (rec.prompt.empty()) fail(context, "prompt must be non-empty");
    if (rec.chosen.text() == rec.rejected.text())
        fail(context, "chosen and rejected must differ");
    return rec;
}

IntraRecord intra_from_json(const ordered_json& j, const std::string& context) {
    expect_keys(j,
                {"kind", "id", "prompt_w", "prompt_l", "response", "side", "relationship",
                 "specs_w", "specs_l"},
                context);
    IntraRecord rec;
    rec.record_id = get_string(j, "id", context);
    rec.prompt_w = get_string(j, "prompt_w", context);
    rec.prompt_l = get_string(j, "prompt_l", context);
    rec.response = ResponseText(get_string(j, "response", context));
    auto side = side_from_string(get_string(j, "side", context));
    if (!side) fail(context, "bad side value");
    rec.side = *side;
    auto rel = relationship_from_string(get_string(j, "relationship", context));
    if (!rel) fail(context, "bad relationship value");
    rec.relationship = *rel;
    rec.specs_w = specs_from_json(j["specs_w"], context);
    rec.specs_l = specs_from_json(j["specs_l"], context);
    return rec;
}

InterRecord inter_from_json(const ordered_json& j, const std::string& context) {
    expect_keys(j,
                {"kind", "id", "prompt_hi", "prompt_lo", "chosen", "rejected", "direction",
                 "specs"},
                context);
    InterRecord rec;
    rec.record_id = get_string(j, "id", context);
    rec.prompt_hi = get_string(j, "prompt_hi", context);
    rec.prompt_lo = get_string(j, "prompt_lo", context);
    rec.chosen = ResponseText(get_string(j, "chosen", context));
    rec.rejected = ResponseText(get_string(j, "rejected", context));
    auto dir = direction_from_string(get_string(j, "direction", context));
    if (!dir) fail(context, "bad direction value");
    rec.direction = *dir;
    rec.specs = specs_from_json(j["specs"], context);
    return rec;
}

MliftRecord mlift_from_json(const ordered_json& j, const std::string& context) {
    expect_keys(j, {"kind", "id", "prompt", "preferred", "dispreferred", "category", "specs"},
                context);
    MliftRecord rec;
    rec.record_id = get_string(j, "id", context);
    rec.prompt = get_string(j, "prompt", context);
    rec.preferred = ResponseText(get_string(j, "preferred", context));
    rec.dispreferred = ResponseText(get_string(j, "dispreferred", context));
    auto cat = mlift_category_from_string(get_string(j, "category", context));
    if (!cat) fail(context, "bad category value");
    rec.category = *cat;
    rec.specs = specs_from_json(j["specs"], context);
    if (rec.category == MliftCategory::original && !rec.specs.empty())
        fail(context, "original-category record must carry no specs");
    return rec;
}

ordered_json parse_json(const std::string& line, const std::string& context) {
    try {
        return ordered_json::parse(line);
    } catch (const nlohmann::json::exception& e) {
        fail(context, e.what());
    }
}

template <typename T, typename Loader>
std::vector<T> load_lines(const std::string& path, Loader&& loader) {
    std::ifstream in(path);
    if (!in) raise(Errc::io_error, "cannot open " + path);
    std::vector<T> out;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const std::string context = path + ":" + std::to_string(line_no);
        out.push_back(loader(line, context));
    }
    return out;
}

}  // namespace

std::string to_jsonl(const PreferenceRecord& rec) {
    ordered_json j;
    j["kind"] = "bt";
    j["id"] = rec.record_id;
    j["prompt"] = rec.prompt;
    j["chosen"] = rec.chosen.text();
    j["rejected"] = rec.rejected.text();
    return j.dump();
}

std::string to_jsonl(const IntraRecord& rec) {
    ordered_json j;
    j["kind"] = "intra";
    j["id"] = rec.record_id;
    j["prompt_w"] = rec.prompt_w;
    j["prompt_l"] = rec.prompt_l;
    j["response"] = rec.response.text();
    j["side"] = to_string(rec.side);
    j["relationship"] = to_string(rec.relationship);
    j["specs_w"] = specs_to_json(rec.specs_w);
    j["specs_l"] = specs_to_json(rec.specs_l);
    return j.dump();
}

std::string to_jsonl(const InterRecord& rec) {
    ordered_json j;
    j["kind"] = "inter";
    j["id"] = rec.record_id;
    j["prompt_hi"] = rec.prompt_hi;
    j["prompt_lo"] = rec.prompt_lo;
    j["chosen"] = rec.chosen.text();
    j["rejected"] = rec.rejected.text();
    j["direction"] = to_string(rec.direction);
    j["specs"] = specs_to_json(rec.specs);
    return j.dump();
}

std::string to_jsonl(const MliftRecord& rec) {
    ordered_json j;
    j["kind"] = "mlift";
    j["id"] = rec.record_id;
    j["prompt"] = rec.prompt;
    j["preferred"] = rec.preferred.text();
    j["dispreferred"] = rec.dispreferred.text();
    j["category"] = to_string(rec.category);
    j["specs"] = specs_to_json(rec.specs);
    return j.dump();
}

DatasetRecord parse_dataset_line(const std::string& line, const std::string& context) {
    const ordered_json j = parse_json(line, context);
    if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string())
        fail(context, "missing \"kind\" tag");
    const std::string kind = j["kind"].get<std::string>();
    if (kind == "bt") return preference_from_json(j, context);
    if (kind == "intra") return intra_from_json(j, context);
    if (kind == "inter") return inter_from_json(j, context);
    if (kind == "mlift") return mlift_from_json(j, context);
    fail(context, "unknown kind \"" + kind + "\"");
}

std::vector<PreferenceRecord> load_corpus(const std::string& path) {
    return load_lines<PreferenceRecord>(path, [](const std::string& line, const std::string& ctx) {
        return preference_from_json(parse_json(line, ctx), ctx);
    });
}

std::vector<DatasetRecord> load_dataset_file(const std::string& path) {
    return load_lines<DatasetRecord>(path, [](const std::string& line, const std::string& ctx) {
        return parse_dataset_line(line, ctx);
    });
}

std::vector<IntraRecord> load_intra_file(const std::string& path) {
    return load_lines<IntraRecord>(path, [](const std::string& line, const std::string& ctx) {
        return intra_from_json(parse_json(line, ctx), ctx);
    });
}

std::vector<InterRecord> load_inter_file(const std::string& path) {
    return load_lines<InterRecord>(path, [](const std::string& line, const std::string& ctx) {
        return inter_from_json(parse_json(line, ctx), ctx);
    });
}

std::vector<MliftRecord> load_mlift_file(const std::string& path) {
    return load_lines<MliftRecord>(path, [](const std::string& line, const std::string& ctx) {
        return mlift_from_json(parse_json(line, ctx), ctx);
    });
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) raise(Errc::io_error, "cannot open " + path);
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void write_file_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) raise(Errc::io_error, "cannot write " + tmp);
        out << content;
        if (!out) {
            std::remove(tmp.c_str());
            raise(Errc::io_error, "short write to " + tmp);
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::remove(tmp.c_str());
        raise(Errc::io_error, "cannot rename " + tmp + " to " + path + ": " + ec.message());
    }
}

}  // namespace mapl
