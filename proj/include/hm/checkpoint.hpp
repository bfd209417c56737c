#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "hm/active.hpp"
#include "hm/metrics.hpp"
#include "hm/model.hpp"
#include "hm/salience.hpp"
#include "hm/train.hpp"

namespace helmholtz {

enum class Stage { init, stage1, stage2 };

std::string to_string(Stage stage);
Stage stage_from_string(const std::string& name);

// Everything needed to resume or evaluate a run. JSON on disk: keys sorted
// (object = ordered map), doubles as shortest round-trip decimals, salience
// counts as integers — so save → load → save is byte-identical.
struct Checkpoint {
  int format_version = 1;
  NetworkShape shape;
  GenerativeParams gen;
  RecognitionParams rec;
  Stage stage = Stage::init;
  std::int64_t iteration = 0;              // stage-I iterations completed
  std::int64_t round = 0;                  // stage-II rounds completed
  std::uint64_t seed = 0;
  std::string rng_state;                   // training stream state
  bool has_salience = false;               // present iff stage == stage2
  std::vector<std::uint64_t> salience_counts;
  std::uint64_t salience_total = 0;
  nlohmann::json config_echo;              // the run's effective config
};

nlohmann::json checkpoint_to_json(const Checkpoint& ck);
// Validates dimensions, finiteness, stage/salience consistency, and the
// salience total; throws Error naming the first failed invariant.
Checkpoint checkpoint_from_json(const nlohmann::json& j);

void save_checkpoint(const std::string& path, const Checkpoint& ck);
Checkpoint load_checkpoint(const std::string& path);

// Rebuild the salience distribution of a stage-II checkpoint.
SalienceDistribution salience_from_checkpoint(const Checkpoint& ck,
                                              const std::vector<Pattern>& wellformed);

// Config serialization for config files and the checkpoint echo. The *_apply
// readers update only the fields present in the JSON object, so a config file
// may specify any subset and CLI flags can override afterwards.
nlohmann::json train_config_to_json(const TrainConfig& cfg);
void train_config_apply(const nlohmann::json& j, TrainConfig* cfg);
nlohmann::json stage2_config_to_json(const Stage2Config& cfg);
void stage2_config_apply(const nlohmann::json& j, Stage2Config* cfg);

nlohmann::json eval_report_to_json(const EvalReport& report);

// CSV rows `pattern,count,probability`, lexicographic patterns, probabilities
// as shortest round-trip decimals.
void write_distribution_csv(std::ostream& os, const SalienceDistribution& dist);

}  // namespace helmholtz
