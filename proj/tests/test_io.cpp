// Persistence: checkpoint JSON round-trips, validation diagnostics, config
// files, CSV export, and the command-line driver end to end.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include <doctest.h>
#include <json.hpp>

#include "hm/check.hpp"
#include "hm/checkpoint.hpp"
#include "hm/grammar.hpp"
#include "hm/model.hpp"
#include "hm/salience.hpp"
#include "hm/train.hpp"

namespace hm = helmholtz;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  REQUIRE_MESSAGE(is.good(), "cannot read " << p.string());
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

void spit(const fs::path& p, const std::string& text) {
  std::ofstream os(p, std::ios::binary);
  os << text;
}

int count_lines(const std::string& text) {
  int n = 0;
  for (char c : text) {
    if (c == '\n') ++n;
  }
  return n;
}

// Scratch directory per test case, removed on destruction.
struct ScratchDir {
  fs::path dir;
  explicit ScratchDir(const std::string& tag) {
    const auto tick = std::chrono::steady_clock::now().time_since_epoch().count();
    dir = fs::temp_directory_path() / ("hm_test_" + tag + "_" + std::to_string(tick));
    fs::create_directories(dir);
  }
  ~ScratchDir() {
    std::error_code ec;
    fs::remove_all(dir, ec);
  }
  fs::path operator/(const std::string& name) const { return dir / name; }
};

// Runs the CLI under test (path from HM_CLI_BIN) with stdout/stderr capture;
// returns true when the process exited with status 0.
struct CliResult {
  bool ok = false;
  std::string out;
  std::string err;
};

CliResult run_cli(const ScratchDir& scratch, const std::string& args,
                  const std::string& env_prefix = "") {
  const char* bin = std::getenv("HM_CLI_BIN");
  REQUIRE_MESSAGE(bin != nullptr, "HM_CLI_BIN must point at the CLI binary");
  const fs::path out = scratch / "stdout.txt";
  const fs::path err = scratch / "stderr.txt";
  const std::string cmd = env_prefix + "\"" + std::string(bin) + "\" " + args + " > \"" +
                          out.string() + "\" 2> \"" + err.string() + "\"";
  const int rc = std::system(cmd.c_str());
  CliResult r;
  r.ok = rc == 0;
  r.out = slurp(out);
  r.err = slurp(err);
  return r;
}

hm::Checkpoint sample_checkpoint(std::uint64_t seed) {
  hm::Checkpoint ck;
  ck.shape = hm::NetworkShape::standard();
  hm::Rng rng(seed);
  hm::init_params(ck.shape, rng, &ck.gen, &ck.rec);
  ck.stage = hm::Stage::stage1;
  ck.iteration = 123;
  ck.seed = seed;
  ck.rng_state = rng.state();
  ck.config_echo = hm::train_config_to_json(hm::TrainConfig{});
  return ck;
}

std::string error_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const hm::Error& e) {
    return e.what();
  }
  return "<no error>";
}

}  // namespace

TEST_SUITE("io") {
  TEST_CASE("checkpoint JSON round-trips byte-for-byte") {
    const hm::Checkpoint ck = sample_checkpoint(1001);
    const json j1 = hm::checkpoint_to_json(ck);
    const hm::Checkpoint back = hm::checkpoint_from_json(j1);
    const json j2 = hm::checkpoint_to_json(back);
    CHECK(j1.dump(1, ' ') == j2.dump(1, ' '));
    CHECK(back.iteration == 123);
    CHECK(back.seed == 1001);
    CHECK(back.stage == hm::Stage::stage1);
    CHECK(back.rng_state == ck.rng_state);
    CHECK(back.gen.w[0].a == ck.gen.w[0].a);
    CHECK(back.rec.b[2] == ck.rec.b[2]);

    ScratchDir scratch("roundtrip");
    const fs::path p1 = scratch / "a.json";
    const fs::path p2 = scratch / "b.json";
    hm::save_checkpoint(p1.string(), ck);
    const hm::Checkpoint loaded = hm::load_checkpoint(p1.string());
    hm::save_checkpoint(p2.string(), loaded);
    CHECK(slurp(p1) == slurp(p2));
  }

  TEST_CASE("checkpoint with salience round-trips, including exact counts") {
    hm::Checkpoint ck = sample_checkpoint(1002);
    ck.stage = hm::Stage::stage2;
    ck.round = 17;
    ck.has_salience = true;
    ck.salience_counts.assign(256, 1);
    ck.salience_counts[9] = 41;
    ck.salience_total = 255 + 41;
    const hm::Checkpoint back = hm::checkpoint_from_json(hm::checkpoint_to_json(ck));
    CHECK(back.has_salience);
    CHECK(back.salience_counts == ck.salience_counts);
    CHECK(back.salience_total == ck.salience_total);
    CHECK(back.round == 17);
    const auto wf = hm::enumerate_wellformed();
    const auto dist = hm::salience_from_checkpoint(back, wf);
    CHECK(dist.total() == 296);
    CHECK(dist.counts()[9] == 41);
  }

  TEST_CASE("checkpoint validation names the first failed invariant") {
    const json good = hm::checkpoint_to_json(sample_checkpoint(1003));

    auto mutate = [&](const std::function<void(json&)>& f) {
      json j = good;
      f(j);
      return error_of([&] { hm::checkpoint_from_json(j); });
    };

    CHECK(error_of([&] { hm::checkpoint_from_json(json::array()); })
              .find("not an object") != std::string::npos);
    CHECK(mutate([](json& j) { j.erase("format_version"); })
              .find("format_version") != std::string::npos);
    CHECK(mutate([](json& j) { j["format_version"] = 2; })
              .find("format_version") != std::string::npos);
    CHECK(mutate([](json& j) { j["shape"] = json::array({10}); })
              .find("layer") != std::string::npos);
    CHECK(mutate([](json& j) { j["gen"]["b"][0].erase(0); })
              .find("gen.b[0]") != std::string::npos);
    CHECK(mutate([](json& j) { j["rec"]["w"][1] = json::array({1.0, 2.0}); })
              .find("rec.w[1]") != std::string::npos);
    CHECK(mutate([](json& j) { j["gen"].erase("top_bias"); })
              .find("top_bias") != std::string::npos);
    CHECK(mutate([](json& j) { j["stage"] = "stage3"; })
              .find("stage") != std::string::npos);
    CHECK(mutate([](json& j) { j.erase("rng_state"); })
              .find("rng_state") != std::string::npos);
    CHECK(mutate([](json& j) { j["stage"] = "stage2"; })
              .find("salience") != std::string::npos);
    CHECK(mutate([](json& j) {
            j["salience"] = json{{"counts", std::vector<int>(256, 1)}, {"total", 256}};
          }).find("salience present before stage2") != std::string::npos);

    // Stage-2 specific: a zero count and a bad total.
    json s2 = good;
    s2["stage"] = "stage2";
    s2["salience"] = json{{"counts", std::vector<int>(256, 1)}, {"total", 256}};
    CHECK_NOTHROW(hm::checkpoint_from_json(s2));
    json bad_count = s2;
    bad_count["salience"]["counts"][5] = 0;
    CHECK(error_of([&] { hm::checkpoint_from_json(bad_count); })
              .find("count") != std::string::npos);
    json bad_total = s2;
    bad_total["salience"]["total"] = 999;
    CHECK(error_of([&] { hm::checkpoint_from_json(bad_total); })
              .find("total") != std::string::npos);

    // A file that is not JSON at all.
    ScratchDir scratch("badjson");
    const fs::path p = scratch / "garbage.json";
    spit(p, "this is not json{");
    CHECK(error_of([&] { hm::load_checkpoint(p.string()); })
              .find("not valid JSON") != std::string::npos);
  }

  TEST_CASE("config files apply partially and round-trip") {
    hm::TrainConfig t;
    hm::train_config_apply(json::parse(R"({"learning_rate": 0.07, "seed": 99})"), &t);
    CHECK(t.learning_rate == doctest::Approx(0.07));
    CHECK(t.seed == 99);
    CHECK(t.stage1_iterations == 240000);  // untouched default
    hm::TrainConfig t2;
    hm::train_config_apply(hm::train_config_to_json(t), &t2);
    CHECK(t2.learning_rate == t.learning_rate);
    CHECK(t2.seed == t.seed);
    CHECK(t2.trace_interval == t.trace_interval);

    hm::Stage2Config s;
    hm::stage2_config_apply(json::parse(R"({"gamma2": 0.01, "rounds": 12})"), &s);
    CHECK(s.gamma2 == doctest::Approx(0.01));
    CHECK(s.rounds == 12);
    CHECK(s.wake_steps_per_round == 2000);
    hm::Stage2Config s2;
    hm::stage2_config_apply(hm::stage2_config_to_json(s), &s2);
    CHECK(s2.gamma2 == s.gamma2);
    CHECK(s2.rounds == s.rounds);

    CHECK(error_of([&] {
            hm::train_config_apply(json::parse(R"({"update_rule": "adam"})"), &t);
          }).find("update rule") != std::string::npos);
    CHECK(error_of([&] { hm::train_config_apply(json::array(), &t); })
              .find("object") != std::string::npos);
  }

  TEST_CASE("distribution CSV format") {
    const auto wf = hm::enumerate_wellformed();
    auto dist = hm::SalienceDistribution::uniform_over(wf);
    std::ostringstream os;
    hm::write_distribution_csv(os, dist);
    const std::string text = os.str();
    CHECK(count_lines(text) == 257);  // header + 256 rows
    std::istringstream is(text);
    std::string line;
    std::getline(is, line);
    CHECK(line == "pattern,count,probability");
    std::getline(is, line);
    CHECK(line == "1010001010,1,0.00390625");  // 1/256 is exact in binary
    std::string last;
    while (std::getline(is, line)) {
      if (!line.empty()) last = line;
    }
    CHECK(last == "1111111111,1,0.00390625");

    // Non-uniform counts: probabilities parse back to count/total exactly.
    for (int i = 0; i < 5; ++i) dist.update(wf[3]);
    std::ostringstream os2;
    hm::write_distribution_csv(os2, dist);
    std::istringstream is2(os2.str());
    std::getline(is2, line);  // header
    std::string prev;
    int row = 0;
    while (std::getline(is2, line)) {
      const auto c1 = line.find(',');
      const auto c2 = line.find(',', c1 + 1);
      const std::string bits = line.substr(0, c1);
      const auto count = std::stoull(line.substr(c1 + 1, c2 - c1 - 1));
      const double prob = std::stod(line.substr(c2 + 1));
      CHECK(bits == wf[static_cast<std::size_t>(row)].bits());
      if (!prev.empty()) CHECK(prev < bits);  // lexicographic order
      CHECK(prob == static_cast<double>(count) / 261.0);  // exact round-trip
      prev = bits;
      ++row;
    }
    CHECK(row == 256);
  }

  TEST_CASE("cli: grammar enumeration") {
    ScratchDir scratch("grammar");
    const fs::path out = scratch / "words.txt";
    const auto r = run_cli(scratch, "grammar --out \"" + out.string() + "\"");
    CHECK(r.ok);
    CHECK(r.out.find("W = 256") != std::string::npos);
    const std::string text = slurp(out);
    CHECK(count_lines(text) == 256);
    CHECK(text.rfind("1010001010\n", 0) == 0);
    CHECK(text.find("\n1111111111\n") == text.size() - 11 - 1);
  }

  TEST_CASE("cli: stage-I training, checkpoints, and seed precedence") {
    ScratchDir scratch("s1");
    const fs::path ck = scratch / "ck1.json";
    const fs::path trace = scratch / "tr1.json";
    const std::string base = "train-stage1 --iterations 300 --trace-interval 100 "
                             "--eval-samples 200 --gamma 0.05 ";
    const auto r = run_cli(scratch, base + "--seed 5 --out \"" + ck.string() +
                                        "\" --trace \"" + trace.string() + "\"");
    CHECK(r.ok);
    CHECK(r.out.find("stage1 done") != std::string::npos);

    const hm::Checkpoint loaded = hm::load_checkpoint(ck.string());
    CHECK(loaded.stage == hm::Stage::stage1);
    CHECK(loaded.iteration == 300);
    CHECK(loaded.seed == 5);
    CHECK(loaded.config_echo["learning_rate"].get<double>() == doctest::Approx(0.05));
    CHECK_FALSE(loaded.rng_state.empty());

    const json tr = json::parse(slurp(trace));
    REQUIRE(tr.is_array());
    REQUIRE(tr.size() == 4);  // iterations 0, 100, 200, 300
    CHECK(tr[0]["iteration"] == 0);
    CHECK(tr[3]["iteration"] == 300);

    // Identical invocation → byte-identical checkpoint.
    const fs::path ck2 = scratch / "ck1b.json";
    const auto r2 = run_cli(scratch, base + "--seed 5 --out \"" + ck2.string() + "\"");
    CHECK(r2.ok);
    CHECK(slurp(ck) == slurp(ck2));

    // Seed from the environment, and the flag beating the environment.
    const fs::path ck3 = scratch / "ck_env.json";
    const auto r3 = run_cli(scratch, base + "--out \"" + ck3.string() + "\"",
                            "HM_SEED=77 ");
    CHECK(r3.ok);
    CHECK(hm::load_checkpoint(ck3.string()).seed == 77);
    const fs::path ck4 = scratch / "ck_flag.json";
    const auto r4 = run_cli(scratch, base + "--seed 88 --out \"" + ck4.string() + "\"",
                            "HM_SEED=77 ");
    CHECK(r4.ok);
    CHECK(hm::load_checkpoint(ck4.string()).seed == 88);

    // Config file sets what flags do not override.
    const fs::path cfg = scratch / "cfg.json";
    spit(cfg, R"({"learning_rate": 0.02, "stage1_iterations": 120})");
    const fs::path ck5 = scratch / "ck_cfg.json";
    const auto r5 = run_cli(scratch, "train-stage1 --config \"" + cfg.string() +
                                         "\" --iterations 140 --eval-samples 100 "
                                         "--trace-interval 70 --seed 6 --out \"" +
                                         ck5.string() + "\"");
    CHECK(r5.ok);
    const hm::Checkpoint c5 = hm::load_checkpoint(ck5.string());
    CHECK(c5.iteration == 140);  // flag wins
    CHECK(c5.config_echo["learning_rate"].get<double>() == doctest::Approx(0.02));
  }

  TEST_CASE("cli: stage-II training, eval, and distribution export") {
    ScratchDir scratch("s2");
    const fs::path ck1 = scratch / "stage1.json";
    auto r = run_cli(scratch, "train-stage1 --iterations 2000 --trace-interval 2000 "
                              "--eval-samples 200 --seed 11 --out \"" +
                                  ck1.string() + "\"");
    REQUIRE(r.ok);

    const fs::path ck2 = scratch / "stage2.json";
    const fs::path tr2 = scratch / "tr2.json";
    r = run_cli(scratch, "train-stage2 --in \"" + ck1.string() +
                             "\" --rounds 2 --wake 20 --sleep 20 --eval-samples 200 "
                             "--out \"" + ck2.string() + "\" --trace \"" + tr2.string() +
                             "\"");
    REQUIRE(r.ok);
    CHECK(r.out.find("stage2 done") != std::string::npos);

    const hm::Checkpoint loaded = hm::load_checkpoint(ck2.string());
    CHECK(loaded.stage == hm::Stage::stage2);
    CHECK(loaded.round == 2);
    CHECK(loaded.has_salience);
    const json tr = json::parse(slurp(tr2));
    REQUIRE(tr.size() == 2);
    std::int64_t accepted = 0;
    for (const auto& row : tr) accepted += row["accepted"].get<std::int64_t>();
    CHECK(loaded.salience_total == 256 + static_cast<std::uint64_t>(accepted));
    CHECK(loaded.config_echo.contains("stage1"));
    CHECK(loaded.config_echo.contains("stage2"));

    // Evaluation reports are deterministic in the seed, byte for byte.
    const fs::path rep1 = scratch / "rep1.json";
    const fs::path rep2 = scratch / "rep2.json";
    r = run_cli(scratch, "eval --in \"" + ck2.string() + "\" --n 500 --seed 3 --out \"" +
                             rep1.string() + "\"");
    REQUIRE(r.ok);
    r = run_cli(scratch, "eval --in \"" + ck2.string() + "\" --n 500 --seed 3 --out \"" +
                             rep2.string() + "\"");
    REQUIRE(r.ok);
    CHECK(slurp(rep1) == slurp(rep2));
    const json rep = json::parse(slurp(rep1));
    CHECK(rep["n_samples"] == 500);
    CHECK(rep["accuracy"].get<double>() >= 0.0);
    CHECK(rep["accuracy"].get<double>() <= 1.0);
    CHECK(rep["kl_salience_uniform"].get<double>() >= 0.0);
    CHECK(rep.contains("fe_mean"));
    CHECK(rep.contains("coverage"));

    // CSV export matches the in-process serialization of the same salience.
    const fs::path csv = scratch / "dist.csv";
    r = run_cli(scratch, "export-dist --in \"" + ck2.string() + "\" --out \"" +
                             csv.string() + "\"");
    REQUIRE(r.ok);
    const auto wf = hm::enumerate_wellformed();
    std::ostringstream expect;
    hm::write_distribution_csv(expect, hm::salience_from_checkpoint(loaded, wf));
    CHECK(slurp(csv) == expect.str());

    // Error paths: wrong stage, wrong file, missing salience.
    r = run_cli(scratch, "train-stage2 --in \"" + ck2.string() + "\" --rounds 1 --out \"" +
                             (scratch / "nope.json").string() + "\"");
    CHECK_FALSE(r.ok);
    CHECK(r.err.find("error:") != std::string::npos);
    r = run_cli(scratch, "eval --in \"" + (scratch / "missing.json").string() +
                             "\" --out \"" + (scratch / "nope2.json").string() + "\"");
    CHECK_FALSE(r.ok);
    CHECK(r.err.find("error:") != std::string::npos);
    r = run_cli(scratch, "export-dist --in \"" + ck1.string() + "\" --out \"" +
                             (scratch / "nope3.csv").string() + "\"");
    CHECK_FALSE(r.ok);
    CHECK(r.err.find("error:") != std::string::npos);
  }
}
