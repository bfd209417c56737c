#include "hm/checkpoint.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>

#include "hm/check.hpp"
#include "hm/grammar.hpp"

namespace helmholtz {

using nlohmann::json;

std::string to_string(Stage stage) {
  switch (stage) {
    case Stage::init: return "init";
    case Stage::stage1: return "stage1";
    case Stage::stage2: return "stage2";
  }
  throw Error("invalid stage enum value");
}

Stage stage_from_string(const std::string& name) {
  if (name == "init") return Stage::init;
  if (name == "stage1") return Stage::stage1;
  if (name == "stage2") return Stage::stage2;
  throw Error("unknown stage: " + name);
}

namespace {

json mat_to_json(const Mat& m) { return m.a; }  // row-major flat array

Mat mat_from_json(const json& j, int rows, int cols, const std::string& what) {
  Mat m(rows, cols);
  HM_CHECK_MSG(j.is_array() && j.size() == m.a.size(),
               what + " length != " + std::to_string(rows) + "*" + std::to_string(cols));
  for (std::size_t i = 0; i < m.a.size(); ++i) m.a[i] = j[i].get<double>();
  return m;
}

Vec vec_from_json(const json& j, int n, const std::string& what) {
  HM_CHECK_MSG(j.is_array() && static_cast<int>(j.size()) == n,
               what + " length != " + std::to_string(n));
  Vec v(static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = j[i].get<double>();
  return v;
}

}  // namespace

json checkpoint_to_json(const Checkpoint& ck) {
  json j;
  j["format_version"] = ck.format_version;
  j["shape"] = ck.shape.sizes;
  json gen;
  gen["top_bias"] = ck.gen.top_bias;
  gen["w"] = json::array();
  gen["b"] = json::array();
  for (const Mat& m : ck.gen.w) gen["w"].push_back(mat_to_json(m));
  for (const Vec& b : ck.gen.b) gen["b"].push_back(b);
  j["gen"] = std::move(gen);
  json rec;
  rec["w"] = json::array();
  rec["b"] = json::array();
  for (const Mat& m : ck.rec.w) rec["w"].push_back(mat_to_json(m));
  for (const Vec& b : ck.rec.b) rec["b"].push_back(b);
  j["rec"] = std::move(rec);
  j["stage"] = to_string(ck.stage);
  j["iteration"] = ck.iteration;
  j["round"] = ck.round;
  j["seed"] = ck.seed;
  j["rng_state"] = ck.rng_state;
  if (ck.has_salience) {
    json sal;
    sal["counts"] = ck.salience_counts;
    sal["total"] = ck.salience_total;
    j["salience"] = std::move(sal);
  }
  j["config"] = ck.config_echo.is_null() ? json::object() : ck.config_echo;
  return j;
}

Checkpoint checkpoint_from_json(const json& j) {
  Checkpoint ck;
  HM_CHECK_MSG(j.is_object(), "checkpoint root is not an object");
  HM_CHECK_MSG(j.contains("format_version") && j["format_version"].is_number_integer(),
               "missing format_version");
  ck.format_version = j["format_version"].get<int>();
  HM_CHECK_MSG(ck.format_version == 1, "unsupported format_version");

  HM_CHECK_MSG(j.contains("shape") && j["shape"].is_array(), "missing shape");
  ck.shape.sizes = j["shape"].get<std::vector<int>>();
  ck.shape.validate();
  const int M = ck.shape.layers();

  HM_CHECK_MSG(j.contains("gen") && j.contains("rec"), "missing parameter blocks");
  const json& gj = j["gen"];
  const json& rj = j["rec"];
  HM_CHECK_MSG(gj.contains("w") && gj["w"].is_array() &&
                   static_cast<int>(gj["w"].size()) == M - 1,
               "gen.w layer count != layers-1");
  HM_CHECK_MSG(gj.contains("b") && gj["b"].is_array() &&
                   static_cast<int>(gj["b"].size()) == M - 1,
               "gen.b layer count != layers-1");
  HM_CHECK_MSG(rj.contains("w") && rj["w"].is_array() &&
                   static_cast<int>(rj["w"].size()) == M - 1,
               "rec.w layer count != layers-1");
  HM_CHECK_MSG(rj.contains("b") && rj["b"].is_array() &&
                   static_cast<int>(rj["b"].size()) == M - 1,
               "rec.b layer count != layers-1");
  for (int m = 0; m + 1 < M; ++m) {
    const auto um = static_cast<std::size_t>(m);
    const int lo = ck.shape.sizes[um];
    const int hi = ck.shape.sizes[um + 1];
    ck.gen.w.push_back(mat_from_json(gj["w"][um], hi, lo, "gen.w[" + std::to_string(m) + "]"));
    ck.gen.b.push_back(vec_from_json(gj["b"][um], lo, "gen.b[" + std::to_string(m) + "]"));
    ck.rec.w.push_back(mat_from_json(rj["w"][um], lo, hi, "rec.w[" + std::to_string(m) + "]"));
    ck.rec.b.push_back(vec_from_json(rj["b"][um], hi, "rec.b[" + std::to_string(m) + "]"));
  }
  HM_CHECK_MSG(gj.contains("top_bias"), "missing gen.top_bias");
  ck.gen.top_bias = vec_from_json(gj["top_bias"], ck.shape.sizes.back(), "gen.top_bias");
  validate_params(ck.shape, ck.gen, ck.rec);

  HM_CHECK_MSG(j.contains("stage") && j["stage"].is_string(), "missing stage");
  ck.stage = stage_from_string(j["stage"].get<std::string>());
  HM_CHECK_MSG(j.contains("iteration"), "missing iteration");
  ck.iteration = j["iteration"].get<std::int64_t>();
  HM_CHECK_MSG(j.contains("round"), "missing round");
  ck.round = j["round"].get<std::int64_t>();
  HM_CHECK_MSG(j.contains("seed"), "missing seed");
  ck.seed = j["seed"].get<std::uint64_t>();
  HM_CHECK_MSG(j.contains("rng_state") && j["rng_state"].is_string(), "missing rng_state");
  ck.rng_state = j["rng_state"].get<std::string>();

  if (ck.stage == Stage::stage2) {
    HM_CHECK_MSG(j.contains("salience"), "stage2 checkpoint lacks salience");
    const json& sal = j["salience"];
    HM_CHECK_MSG(sal.contains("counts") && sal["counts"].is_array(),
                 "salience.counts missing");
    ck.salience_counts = sal["counts"].get<std::vector<std::uint64_t>>();
    HM_CHECK_MSG(sal.contains("total"), "salience.total missing");
    ck.salience_total = sal["total"].get<std::uint64_t>();
    std::uint64_t sum = 0;
    for (std::uint64_t c : ck.salience_counts) {
      HM_CHECK_MSG(c >= 1, "salience count below the initial value 1");
      sum += c;
    }
    HM_CHECK_MSG(sum == ck.salience_total, "salience total != sum of counts");
    ck.has_salience = true;
  } else {
    HM_CHECK_MSG(!j.contains("salience"), "salience present before stage2");
  }
  ck.config_echo = j.contains("config") ? j["config"] : json::object();
  return ck;
}

void save_checkpoint(const std::string& path, const Checkpoint& ck) {
  std::ofstream os(path, std::ios::binary);
  HM_CHECK_MSG(os.good(), "cannot open for writing: " + path);
  os << checkpoint_to_json(ck).dump(1, ' ') << '\n';
  HM_CHECK_MSG(os.good(), "write failed: " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  HM_CHECK_MSG(is.good(), "cannot open checkpoint: " + path);
  json j;
  try {
    is >> j;
  } catch (const json::exception& e) {
    throw Error("checkpoint is not valid JSON: " + std::string(e.what()));
  }
  return checkpoint_from_json(j);
}

SalienceDistribution salience_from_checkpoint(const Checkpoint& ck,
                                              const std::vector<Pattern>& wellformed) {
  HM_CHECK_MSG(ck.has_salience, "checkpoint has no salience distribution");
  return SalienceDistribution::from_counts(wellformed, ck.salience_counts,
                                           ck.salience_total);
}

json train_config_to_json(const TrainConfig& cfg) {
  json j;
  j["learning_rate"] = cfg.learning_rate;
  j["stage1_iterations"] = cfg.stage1_iterations;
  j["eval_samples"] = cfg.eval_samples;
  j["seed"] = cfg.seed;
  j["update_rule"] = to_string(cfg.update_rule);
  j["trace_interval"] = cfg.trace_interval;
  return j;
}

void train_config_apply(const json& j, TrainConfig* cfg) {
  HM_CHECK_MSG(j.is_object(), "config is not a JSON object");
  if (j.contains("learning_rate")) cfg->learning_rate = j["learning_rate"].get<double>();
  if (j.contains("stage1_iterations"))
    cfg->stage1_iterations = j["stage1_iterations"].get<std::int64_t>();
  if (j.contains("eval_samples")) cfg->eval_samples = j["eval_samples"].get<std::int64_t>();
  if (j.contains("seed")) cfg->seed = j["seed"].get<std::uint64_t>();
  if (j.contains("update_rule"))
    cfg->update_rule = update_rule_from_string(j["update_rule"].get<std::string>());
  if (j.contains("trace_interval"))
    cfg->trace_interval = j["trace_interval"].get<std::int64_t>();
}

json stage2_config_to_json(const Stage2Config& cfg) {
  json j;
  j["rounds"] = cfg.rounds;
  j["wake_steps_per_round"] = cfg.wake_steps_per_round;
  j["sleep_attempts_per_round"] = cfg.sleep_attempts_per_round;
  j["max_dream_retries"] = cfg.max_dream_retries;
  j["gamma2"] = cfg.gamma2;
  j["wake_gamma"] = cfg.wake_gamma;
  j["update_rule"] = to_string(cfg.update_rule);
  j["eval_samples"] = cfg.eval_samples;
  return j;
}

void stage2_config_apply(const json& j, Stage2Config* cfg) {
  HM_CHECK_MSG(j.is_object(), "config is not a JSON object");
  if (j.contains("rounds")) cfg->rounds = j["rounds"].get<std::int64_t>();
  if (j.contains("wake_steps_per_round"))
    cfg->wake_steps_per_round = j["wake_steps_per_round"].get<std::int64_t>();
  if (j.contains("sleep_attempts_per_round"))
    cfg->sleep_attempts_per_round = j["sleep_attempts_per_round"].get<std::int64_t>();
  if (j.contains("max_dream_retries"))
    cfg->max_dream_retries = j["max_dream_retries"].get<std::int64_t>();
  if (j.contains("gamma2")) cfg->gamma2 = j["gamma2"].get<double>();
  if (j.contains("wake_gamma")) cfg->wake_gamma = j["wake_gamma"].get<double>();
  if (j.contains("update_rule"))
    cfg->update_rule = update_rule_from_string(j["update_rule"].get<std::string>());
  if (j.contains("eval_samples")) cfg->eval_samples = j["eval_samples"].get<std::int64_t>();
}

json eval_report_to_json(const EvalReport& report) {
  json j;
  j["accuracy"] = report.accuracy;
  j["n_samples"] = report.n_samples;
  j["distinct_valid"] = report.distinct_valid;
  j["dream_entropy"] = report.dream_entropy;
  j["coverage"] = report.coverage;
  j["fe_mean"] = report.fe_mean;
  j["fe_stderr"] = report.fe_stderr;
  j["kl_salience_uniform"] = report.kl_salience_uniform;
  return j;
}

void write_distribution_csv(std::ostream& os, const SalienceDistribution& dist) {
  os << "pattern,count,probability\n";
  for (int r = 0; r < dist.support_size(); ++r) {
    const auto ur = static_cast<std::size_t>(r);
    char buf[32];
    const double p = dist.probability(r);
    const auto res = std::to_chars(buf, buf + sizeof(buf), p);
    os << dist.support()[ur].bits() << ',' << dist.counts()[ur] << ','
       << std::string_view(buf, static_cast<std::size_t>(res.ptr - buf)) << '\n';
  }
}

}  // namespace helmholtz
