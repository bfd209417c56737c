// Command-line driver: training orchestration, checkpoints, exports.
//
// Subcommands:
//   grammar       enumerate the well-formed set to a file
//   train-stage1  wake-sleep training on uniformly drawn well-formed data
//   train-stage2  active-inference fine-tune from a stage-I checkpoint
//   eval          evaluation report (JSON) for any checkpoint
//   export-dist   salience distribution as CSV (pattern,count,probability)
//
// Config files are JSON objects mirroring the config field names; flags
// override file values; --seed may also come from HM_SEED (flag wins).

#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "hm/active.hpp"
#include "hm/check.hpp"
#include "hm/checkpoint.hpp"
#include "hm/grammar.hpp"
#include "hm/metrics.hpp"
#include "hm/model.hpp"
#include "hm/train.hpp"

namespace hm = helmholtz;
using nlohmann::json;

namespace {

json load_json_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is.good()) throw hm::Error("cannot open config: " + path);
  json j;
  try {
    is >> j;
  } catch (const json::exception& e) {
    throw hm::Error("config is not valid JSON: " + std::string(e.what()));
  }
  return j;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os.good()) throw hm::Error("cannot open for writing: " + path);
  os << text;
  if (!os.good()) throw hm::Error("write failed: " + path);
}

int cmd_grammar(const std::string& out_path) {
  const std::vector<hm::Pattern> wf = hm::enumerate_wellformed();
  std::string lines;
  for (const hm::Pattern& p : wf) {
    lines += p.bits();
    lines += '\n';
  }
  write_text_file(out_path, lines);
  std::cout << "W = " << wf.size() << " (" << out_path << ")\n";
  return 0;
}

int cmd_train_stage1(const hm::TrainConfig& cfg, const std::string& out_path,
                     const std::string& trace_path) {
  const std::vector<hm::Pattern> wf = hm::enumerate_wellformed();
  const hm::NetworkShape shape = hm::NetworkShape::standard();
  hm::Stage1Result result = hm::train_stage1(cfg, wf, shape);

  hm::Checkpoint ck;
  ck.shape = shape;
  ck.gen = std::move(result.gen);
  ck.rec = std::move(result.rec);
  ck.stage = hm::Stage::stage1;
  ck.iteration = cfg.stage1_iterations;
  ck.seed = cfg.seed;
  ck.rng_state = result.rng_state;
  ck.config_echo = hm::train_config_to_json(cfg);
  hm::save_checkpoint(out_path, ck);

  if (!trace_path.empty()) {
    json rows = json::array();
    for (const hm::TraceRow& r : result.trace) {
      rows.push_back({{"iteration", r.iteration},
                      {"free_energy", r.free_energy},
                      {"accuracy", r.accuracy}});
    }
    write_text_file(trace_path, rows.dump(1, ' ') + "\n");
  }
  const hm::TraceRow& last = result.trace.back();
  std::cout << "stage1 done: iterations=" << last.iteration
            << " accuracy=" << last.accuracy << " free_energy=" << last.free_energy
            << " (" << out_path << ")\n";
  return 0;
}

int cmd_train_stage2(const std::string& in_path, const hm::Stage2Config& cfg,
                     bool fresh_seed, std::uint64_t seed, const std::string& out_path,
                     const std::string& trace_path) {
  hm::Checkpoint ck = hm::load_checkpoint(in_path);
  if (ck.stage != hm::Stage::stage1) {
    throw hm::Error("train-stage2 needs a stage1 checkpoint (got " +
                    hm::to_string(ck.stage) + ")");
  }
  const std::vector<hm::Pattern> wf = hm::enumerate_wellformed(ck.shape.data_size());

  // Training stream: continue the checkpoint's stream unless a seed was given.
  hm::Rng rng(fresh_seed ? seed : ck.seed);
  if (!fresh_seed) rng.set_state(ck.rng_state);

  hm::Stage2Result result =
      hm::train_stage2(&ck.gen, &ck.rec, wf, ck.shape, cfg, rng);

  ck.stage = hm::Stage::stage2;
  ck.round = cfg.rounds;
  if (fresh_seed) ck.seed = seed;
  ck.rng_state = result.rng_state;
  ck.has_salience = true;
  ck.salience_counts = result.salience.counts();
  ck.salience_total = result.salience.total();
  ck.config_echo = json{{"stage1", ck.config_echo},
                        {"stage2", hm::stage2_config_to_json(cfg)}};
  hm::save_checkpoint(out_path, ck);

  if (!trace_path.empty()) {
    json rows = json::array();
    for (const hm::Stage2TraceRow& r : result.trace) {
      rows.push_back({{"round", r.round},
                      {"accuracy", r.accuracy},
                      {"distinct_valid", r.distinct_valid},
                      {"kl_from_uniform", r.kl_from_uniform},
                      {"accepted", r.accepted},
                      {"exhausted", r.exhausted}});
    }
    write_text_file(trace_path, rows.dump(1, ' ') + "\n");
  }
  if (result.trace.empty()) {
    std::cout << "stage2 done: rounds=0 (" << out_path << ")\n";
  } else {
    const hm::Stage2TraceRow& last = result.trace.back();
    std::cout << "stage2 done: rounds=" << last.round << " accuracy=" << last.accuracy
              << " distinct_valid=" << last.distinct_valid
              << " kl=" << last.kl_from_uniform << " (" << out_path << ")\n";
  }
  return 0;
}

int cmd_eval(const std::string& in_path, std::int64_t n, std::uint64_t seed,
             const std::string& report_path) {
  const hm::Checkpoint ck = hm::load_checkpoint(in_path);
  const std::vector<hm::Pattern> wf = hm::enumerate_wellformed(ck.shape.data_size());
  hm::Rng rng(seed);
  hm::SalienceDistribution sal;  // only used when the checkpoint carries one
  const hm::SalienceDistribution* sal_ptr = nullptr;
  if (ck.has_salience) {
    sal = hm::salience_from_checkpoint(ck, wf);
    sal_ptr = &sal;
  }
  const hm::EvalReport report =
      hm::build_eval_report(ck.gen, ck.rec, ck.shape, wf, n, sal_ptr, rng);
  write_text_file(report_path, hm::eval_report_to_json(report).dump(1, ' ') + "\n");
  std::cout << "eval: accuracy=" << report.accuracy
            << " distinct_valid=" << report.distinct_valid
            << " fe_mean=" << report.fe_mean << " (" << report_path << ")\n";
  return 0;
}

int cmd_export_dist(const std::string& in_path, const std::string& csv_path) {
  const hm::Checkpoint ck = hm::load_checkpoint(in_path);
  if (!ck.has_salience) {
    throw hm::Error("export-dist needs a stage2 checkpoint with a salience distribution");
  }
  const std::vector<hm::Pattern> wf = hm::enumerate_wellformed(ck.shape.data_size());
  const hm::SalienceDistribution sal = hm::salience_from_checkpoint(ck, wf);
  std::ostringstream os;
  hm::write_distribution_csv(os, sal);
  write_text_file(csv_path, os.str());
  std::cout << "wrote " << csv_path << " (" << sal.support_size() << " rows)\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"stochastic binary Helmholtz machine: wake-sleep training and "
               "grammar-filtered active-inference fine-tuning"};
  app.require_subcommand(1);

  // grammar
  auto* sc_grammar = app.add_subcommand("grammar", "enumerate the well-formed set");
  std::string grammar_out;
  sc_grammar->add_option("--out", grammar_out, "output file, one word per line")
      ->required();

  // train-stage1
  auto* sc_s1 = app.add_subcommand("train-stage1", "wake-sleep training");
  std::string s1_config, s1_out, s1_trace, s1_rule;
  hm::TrainConfig s1_cfg;
  sc_s1->add_option("--config", s1_config, "JSON config file");
  sc_s1->add_option("--out", s1_out, "output checkpoint")->required();
  sc_s1->add_option("--trace", s1_trace, "optional JSON trace file");
  auto* s1_seed = sc_s1->add_option("--seed", s1_cfg.seed, "run seed")->envname("HM_SEED");
  auto* s1_gamma = sc_s1->add_option("--gamma", s1_cfg.learning_rate, "learning rate");
  auto* s1_iters =
      sc_s1->add_option("--iterations", s1_cfg.stage1_iterations, "wake-sleep iterations");
  auto* s1_eval = sc_s1->add_option("--eval-samples", s1_cfg.eval_samples,
                                    "dreams per accuracy evaluation");
  auto* s1_rule_opt =
      sc_s1->add_option("--rule", s1_rule, "update rule: exact_gradient | sign_delta");
  auto* s1_ti = sc_s1->add_option("--trace-interval", s1_cfg.trace_interval,
                                  "iterations between trace records");

  // train-stage2
  auto* sc_s2 = app.add_subcommand("train-stage2", "active-inference fine-tune");
  std::string s2_in, s2_config, s2_out, s2_trace, s2_rule;
  hm::Stage2Config s2_cfg;
  std::uint64_t s2_seed = 0;
  sc_s2->add_option("--in", s2_in, "stage1 checkpoint")->required();
  sc_s2->add_option("--config", s2_config, "JSON config file");
  sc_s2->add_option("--out", s2_out, "output checkpoint")->required();
  sc_s2->add_option("--trace", s2_trace, "optional JSON trace file");
  auto* s2_seed_opt =
      sc_s2->add_option("--seed", s2_seed, "fresh training-stream seed (default: continue "
                                           "the checkpoint's stream)")
          ->envname("HM_SEED");
  auto* s2_rounds = sc_s2->add_option("--rounds", s2_cfg.rounds, "fine-tune rounds");
  auto* s2_wake =
      sc_s2->add_option("--wake", s2_cfg.wake_steps_per_round, "wake steps per round");
  auto* s2_sleep = sc_s2->add_option("--sleep", s2_cfg.sleep_attempts_per_round,
                                     "sleep attempts per round");
  auto* s2_retries =
      sc_s2->add_option("--retries", s2_cfg.max_dream_retries, "max dream retries");
  auto* s2_gamma2 = sc_s2->add_option("--gamma2", s2_cfg.gamma2, "fine-tune rate");
  auto* s2_wg = sc_s2->add_option("--wake-gamma", s2_cfg.wake_gamma,
                                  "wake-phase rate (0 = use gamma2)");
  auto* s2_rule_opt =
      sc_s2->add_option("--rule", s2_rule, "update rule: exact_gradient | sign_delta");
  auto* s2_eval = sc_s2->add_option("--eval-samples", s2_cfg.eval_samples,
                                    "dreams per per-round accuracy");

  // eval
  auto* sc_eval = app.add_subcommand("eval", "write an evaluation report");
  std::string eval_in, eval_report;
  std::int64_t eval_n = 10000;
  std::uint64_t eval_seed = 12345;
  sc_eval->add_option("--in", eval_in, "checkpoint")->required();
  sc_eval->add_option("--n", eval_n, "evaluation dreams");
  sc_eval->add_option("--seed", eval_seed, "evaluation seed")->envname("HM_SEED");
  sc_eval->add_option("--out", eval_report, "output JSON report")->required();

  // export-dist
  auto* sc_dist = app.add_subcommand("export-dist", "salience distribution as CSV");
  std::string dist_in, dist_out;
  sc_dist->add_option("--in", dist_in, "stage2 checkpoint")->required();
  sc_dist->add_option("--out", dist_out, "output CSV")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (sc_grammar->parsed()) return cmd_grammar(grammar_out);

    if (sc_s1->parsed()) {
      // Precedence: defaults < config file < explicit flags.
      hm::TrainConfig cfg;
      if (!s1_config.empty()) hm::train_config_apply(load_json_file(s1_config), &cfg);
      if (s1_seed->count()) cfg.seed = s1_cfg.seed;  // flag or HM_SEED
      if (s1_gamma->count()) cfg.learning_rate = s1_cfg.learning_rate;
      if (s1_iters->count()) cfg.stage1_iterations = s1_cfg.stage1_iterations;
      if (s1_eval->count()) cfg.eval_samples = s1_cfg.eval_samples;
      if (s1_rule_opt->count()) cfg.update_rule = hm::update_rule_from_string(s1_rule);
      if (s1_ti->count()) cfg.trace_interval = s1_cfg.trace_interval;
      return cmd_train_stage1(cfg, s1_out, s1_trace);
    }

    if (sc_s2->parsed()) {
      hm::Stage2Config cfg;
      if (!s2_config.empty()) hm::stage2_config_apply(load_json_file(s2_config), &cfg);
      if (s2_rounds->count()) cfg.rounds = s2_cfg.rounds;
      if (s2_wake->count()) cfg.wake_steps_per_round = s2_cfg.wake_steps_per_round;
      if (s2_sleep->count()) cfg.sleep_attempts_per_round = s2_cfg.sleep_attempts_per_round;
      if (s2_retries->count()) cfg.max_dream_retries = s2_cfg.max_dream_retries;
      if (s2_gamma2->count()) cfg.gamma2 = s2_cfg.gamma2;
      if (s2_wg->count()) cfg.wake_gamma = s2_cfg.wake_gamma;
      if (s2_rule_opt->count()) cfg.update_rule = hm::update_rule_from_string(s2_rule);
      if (s2_eval->count()) cfg.eval_samples = s2_cfg.eval_samples;
      const bool fresh = s2_seed_opt->count() > 0;  // flag or HM_SEED
      return cmd_train_stage2(s2_in, cfg, fresh, s2_seed, s2_out, s2_trace);
    }

    if (sc_eval->parsed()) return cmd_eval(eval_in, eval_n, eval_seed, eval_report);
    if (sc_dist->parsed()) return cmd_export_dist(dist_in, dist_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
