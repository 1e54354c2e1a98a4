// Copyright 2026 The sdb Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "sdb/sdb.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

int Report(sdb_status status) {
  if (status == SDB_OK) return kExitOk;
  std::fprintf(stderr, "sdb: error [%s]: %s\n", sdb_status_name(status), sdb_last_error());
  return status == SDB_ERR_CONFIG ? kExitUsage : kExitFailure;
}

void PrintOwned(char* s) {
  if (s != nullptr) std::fputs(s, stdout);
  sdb_string_free(s);
}

struct Options {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> features;
  std::optional<std::string> system;
  std::optional<std::string> split;
  std::optional<double> lm_scale;
  std::optional<double> insertion_penalty;
  bool no_lm = false;
  std::string stage;
};

class Session {
 public:
  ~Session() { sdb_pipeline_free(p_); }

  sdb_status Open(const Options& o) {
    sdb_status s = sdb_pipeline_open(o.config.c_str(), &p_);
    if (s == SDB_OK && o.seed) s = sdb_pipeline_set_seed(p_, *o.seed);
    if (s == SDB_OK && o.features) s = sdb_pipeline_set_features(p_, o.features->c_str());
    if (s == SDB_OK && o.system) s = sdb_pipeline_set_system(p_, o.system->c_str());
    if (s == SDB_OK && o.split) s = sdb_pipeline_set_split(p_, o.split->c_str());
    if (s == SDB_OK && o.no_lm) s = sdb_pipeline_set_no_lm(p_, 1);
    if (s == SDB_OK && o.lm_scale) s = sdb_pipeline_set_lm_scale(p_, *o.lm_scale);
    if (s == SDB_OK && o.insertion_penalty) s = sdb_pipeline_set_insertion_penalty(p_, *o.insertion_penalty);
    return s;
  }

  sdb_pipeline* get() { return p_; }

 private:
  sdb_pipeline* p_ = nullptr;
};

int Run(const std::string& command, const Options& o) {
  if (command == "gradcheck") {
    char* report = nullptr;
    int passed = 0;
    const sdb_status s = sdb_gradcheck(o.seed.value_or(1), 1e-4, &report, &passed);
    if (s != SDB_OK) return Report(s);
    PrintOwned(report);
    return passed ? kExitOk : kExitFailure;
  }
  if (o.config.empty()) {
    std::fprintf(stderr, "sdb %s: --config is required\n", command.c_str());
    return kExitUsage;
  }
  Session session;
  if (const sdb_status s = session.Open(o); s != SDB_OK) return Report(s);
  sdb_pipeline* p = session.get();
  sdb_status s = SDB_OK;
  if (command == "synth") {
    char* manifest = nullptr;
    s = sdb_pipeline_synth(p, &manifest);
    if (s == SDB_OK) {
      PrintOwned(manifest);
      std::fputc('\n', stdout);
    }
  } else if (command == "extract") {
    s = sdb_pipeline_extract(p);
  } else if (command == "train") {
    s = sdb_pipeline_train(p, o.stage.c_str());
  } else if (command == "tune") {
    char* summary = nullptr;
    s = sdb_pipeline_tune(p, &summary);
    if (s == SDB_OK) PrintOwned(summary);
  } else if (command == "decode") {
    size_t n = 0;
    s = sdb_pipeline_decode(p, &n);
    if (s == SDB_OK) std::printf("decoded_recordings = %zu\n", n);
  } else if (command == "evaluate") {
    char* text = nullptr;
    char* json = nullptr;
    s = sdb_pipeline_evaluate(p, &text, &json);
    if (s == SDB_OK) {
      PrintOwned(text);
      PrintOwned(json);
    }
  } else if (command == "screen") {
    char* hits = nullptr;
    s = sdb_pipeline_screen(p, &hits);
    if (s == SDB_OK) PrintOwned(hits);
  }
  return Report(s);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sleep-disordered-breathing acoustic event detection"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", std::string(sdb_version()));

  Options o;
  app.add_option("--config", o.config, "Pipeline config file");
  app.add_option("--seed", o.seed, "Random seed");
  app.add_option("--features", o.features, "Feature set")->check(CLI::IsMember({"mfcc", "rm", "acf", "rm+acf"}));
  app.add_option("--system", o.system, "Recogniser")->check(CLI::IsMember({"tandem", "hybrid"}));
  app.add_option("--split", o.split, "Corpus split for decode, evaluate and screen")
      ->check(CLI::IsMember({"train", "dev", "test"}));
  app.add_option("--lm-scale", o.lm_scale, "Language model scale");
  app.add_option("--insertion-penalty", o.insertion_penalty, "Log insertion penalty per event");
  app.add_flag("--no-lm", o.no_lm, "Decode without the language model");

  app.add_subcommand("synth", "Write a synthetic corpus");
  app.add_subcommand("extract", "Compute raw features for every recording");
  auto* train = app.add_subcommand("train", "Train a model");
  train->add_option("stage", o.stage, "ae, tandem, hybrid, lm or screener")
      ->required()
      ->check(CLI::IsMember({"ae", "tandem", "hybrid", "lm", "screener"}));
  app.add_subcommand("tune", "Grid-search the LM scale and insertion penalty on the dev split");
  app.add_subcommand("decode", "Decode a split into event TSV files");
  app.add_subcommand("evaluate", "Score decodes against the reference labels");
  app.add_subcommand("screen", "Flag long segments with a high snore fraction");
  app.add_subcommand("gradcheck", "Compare backprop with finite differences");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }
  return Run(app.get_subcommands().front()->get_name(), o);
}
