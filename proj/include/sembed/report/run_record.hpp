#pragma once

#include <cstdint>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "sembed/error.hpp"
#include "sembed/report/eval_report.hpp"
#include "sembed/util/io.hpp"

namespace sembed {

// Persistent description of one evaluation run: the command, every
// materialized configuration value, content digests of the inputs, and
// the resulting metrics at full precision.
struct RunRecord {
  std::string run_id;
  std::string command;
  std::string name;
  std::vector<std::pair<std::string, std::string>> config;
  std::vector<std::pair<std::string, std::string>> input_digests;  // path -> digest
  EvalReport eval;
  std::string created_utc;
};

// Honors SOURCE_DATE_EPOCH so reproducible runs emit identical bytes.
inline std::string utc_timestamp() {
  std::time_t t;
  if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH")) {
    t = static_cast<std::time_t>(std::strtoll(epoch, nullptr, 10));
  } else {
    t = std::time(nullptr);
  }
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

inline RunRecord make_run_record(
    const std::string& command, const std::string& name,
    const std::vector<std::pair<std::string, std::string>>& config,
    const std::vector<std::filesystem::path>& inputs, const EvalReport& eval) {
  RunRecord rec;
  rec.command = command;
  rec.name = name;
  rec.config = config;
  for (const auto& path : inputs) {
    rec.input_digests.emplace_back(path.string(), file_digest(path));
  }
  rec.eval = eval;
  rec.created_utc = utc_timestamp();

  std::string identity = command;
  for (const auto& [k, v] : config) identity += "|" + k + "=" + v;
  for (const auto& [p, d] : rec.input_digests) identity += "|" + d;
  rec.run_id = hex_u64(fnv1a64(identity));
  return rec;
}

inline std::string run_record_to_json(const RunRecord& rec) {
  nlohmann::ordered_json j;
  j["run_id"] = rec.run_id;
  j["command"] = rec.command;
  j["name"] = rec.name;
  nlohmann::ordered_json config;
  for (const auto& [k, v] : rec.config) config[k] = v;
  j["config"] = config;
  nlohmann::ordered_json inputs;
  for (const auto& [path, digest] : rec.input_digests) inputs[path] = digest;
  j["inputs"] = inputs;
  nlohmann::ordered_json eval;
  for (const auto& [k, v] : rec.eval.metrics) eval[k] = v;
  j["eval"] = eval;
  j["created_utc"] = rec.created_utc;
  return j.dump(2) + "\n";
}

inline void write_run_record(const std::filesystem::path& path,
                             const RunRecord& rec) {
  atomic_write_file(path, run_record_to_json(rec));
}

inline RunRecord read_run_record(const std::filesystem::path& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file_bytes(path));
  } catch (const nlohmann::json::exception& e) {
    throw FormatError("bad run record " + path.string() + ": " + e.what());
  }
  RunRecord rec;
  rec.run_id = j.value("run_id", "");
  rec.command = j.value("command", "");
  rec.name = j.value("name", path.stem().string());
  if (rec.name.empty()) rec.name = path.stem().string();
  if (j.contains("config")) {
    for (const auto& [k, v] : j.at("config").items()) {
      rec.config.emplace_back(k, v.get<std::string>());
    }
  }
  if (j.contains("inputs")) {
    for (const auto& [k, v] : j.at("inputs").items()) {
      rec.input_digests.emplace_back(k, v.get<std::string>());
    }
  }
  if (!j.contains("eval")) {
    throw FormatError("run record " + path.string() + " has no eval section");
  }
  for (const auto& [k, v] : j.at("eval").items()) {
    rec.eval.set(k, v.get<double>());
  }
  rec.created_utc = j.value("created_utc", "");
  return rec;
}

}  // namespace sembed
