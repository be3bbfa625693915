// Copyright 2026 The causalemo Authors.
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

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "causalemo/checkpoint.hpp"
#include "causalemo/cli.hpp"
#include "causalemo/config.hpp"
#include "causalemo/corpus.hpp"
#include "causalemo/errors.hpp"
#include "support.hpp"

using namespace causalemo;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "causalemo");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

class ScratchDir {
 public:
  explicit ScratchDir(const std::string& name)
      : path_(fs::temp_directory_path() / ("causalemo_cli_" + name)) {
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~ScratchDir() { fs::remove_all(path_); }
  std::string file(const std::string& name) const { return (path_ / name).string(); }
  std::size_t entries() const {
    return static_cast<std::size_t>(std::distance(fs::directory_iterator(path_), fs::directory_iterator()));
  }

 private:
  fs::path path_;
};

void write(const std::string& path, const std::string& text) {
  std::ofstream(path) << text;
}

// Small keyword corpus on disk with a desk-sized config.
struct Workspace {
  ScratchDir dir;
  std::string corpus, vocab, config;

  explicit Workspace(const std::string& name) : dir(name) {
    corpus = dir.file("dialogues.json");
    write(corpus, serialize_dialogues(testing::keyword_corpus(12, 7)));
    config = dir.file("run.cfg");
    write(config,
          "# desk model\n"
          "model.d_model = 8\nmodel.n_heads = 2\nmodel.n_layers = 1\nmodel.d_ff = 16\n"
          "model.max_len = 24\ntrain.n_train = 9\ntrain.epochs = 2\n"
          "train.learning_rate = 0.001\nvocab.min_freq = 1\n");
    vocab = dir.file("vocab.txt");
  }
};

}  // namespace

TEST_CASE("no arguments prints usage and exits 1") {
  const auto r = invoke({});
  CHECK(r.code == 1);
  CHECK(r.err.find("Usage") != std::string::npos);
}

TEST_CASE("unknown subcommand and bad flags are usage errors") {
  CHECK(invoke({"frobnicate"}).code == 1);
  CHECK(invoke({"prep", "--no-such-flag"}).code == 1);
  CHECK(invoke({"pretrain", "bogus-mode"}).code == 1);
  CHECK(invoke({"prep", "--set", "model.width=3"}).code == 1);
}

TEST_CASE("help exits 0") {
  const auto r = invoke({"--help"});
  CHECK(r.code == 0);
  CHECK(r.out.find("predict") != std::string::npos);
}

TEST_CASE("prep renders the table rows byte-exactly") {
  const auto r = invoke({"prep", "--input", testing::data_path("table_dialogues.json").string(), "--render"});
  REQUIRE(r.code == 0);
  const std::string expected =
      testing::read_text(testing::data_path("sentence_representation.txt"));
  // Friends preset adds personality tokens; the first dialogue has Joey and
  // Chandler, so turn them off for the plain representation table.
  const auto plain = invoke({"prep", "--input", testing::data_path("table_dialogues.json").string(),
                             "--render", "--set", "prep.personality_tokens=false"});
  REQUIRE(plain.code == 0);
  CHECK(plain.out.substr(0, expected.size()) == expected);
  const std::string tokenized =
      testing::read_text(testing::data_path("personality_tokenization.txt"));
  CHECK(r.out.substr(r.out.size() - tokenized.size()) == tokenized);
}

TEST_CASE("prep writes a pairs file") {
  ScratchDir dir("prep");
  const auto r = invoke({"prep", "--input", testing::data_path("table_dialogues.json").string(),
                         "--out", dir.file("pairs.jsonl"), "--filter"});
  REQUIRE(r.code == 0);
  std::ifstream in(dir.file("pairs.jsonl"));
  const auto pairs = read_pairs(in);
  CHECK(pairs.size() == 3);
}

TEST_CASE("data errors exit 2") {
  ScratchDir dir("bad");
  write(dir.file("bad.json"), "[[{\"speaker\": \"a\", \"utterance\": \"x\", \"emotion\": \"grumpy\"}]]");
  const auto r = invoke({"ingest", "--input", dir.file("bad.json")});
  CHECK(r.code == 2);
  CHECK(r.err.find("grumpy") != std::string::npos);
  CHECK(invoke({"ingest", "--input", dir.file("missing.json")}).code == 2);
}

TEST_CASE("ingest prints counts") {
  const auto r = invoke({"ingest", "--input", testing::data_path("table_dialogues.json").string(),
                         "--set", "train.n_train=1"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("dialogues: 2") != std::string::npos);
  CHECK(r.out.find("utterances: 6") != std::string::npos);
  CHECK(r.out.find("filtered total: 3 = 1 + 2") != std::string::npos);
}

TEST_CASE("config presets and precedence") {
  const auto friends = RunConfig::preset(DatasetSource::friends);
  CHECK(friends.model.max_len == 113);
  CHECK(friends.train.batch_size == 8);
  CHECK(friends.train.n_epochs == 3);
  CHECK(friends.train.learning_rate == 2.5e-6);
  CHECK(friends.lowercase);
  CHECK(friends.personality_tokens);
  CHECK(friends.model.dropout_head == 0.75);
  const auto push = RunConfig::preset(DatasetSource::emotionpush);
  CHECK(push.model.max_len == 249);
  CHECK(push.train.batch_size == 4);
  CHECK(push.train.n_epochs == 2);
  CHECK_FALSE(push.lowercase);
  CHECK(push.chat_normalization);

  auto c = RunConfig::preset(DatasetSource::friends);
  c.set("model.dropout_semantics", "keep");
  c.finalize();
  CHECK(c.model.dropout_head == doctest::Approx(0.25));
  CHECK_THROWS_AS(c.set("model.nope", "1"), ConfigError);
  CHECK_THROWS_AS(c.set("train.epochs", "three"), ConfigError);

  const auto entries = parse_config_text("a.b = 1 # note\n\n# full comment\nc = x y\n");
  REQUIRE(entries.size() == 2);
  CHECK(entries[1].second == "x y");
  CHECK_THROWS_AS(parse_config_text("no equals sign"), ConfigError);
}

TEST_CASE("flags win over the config file") {
  ScratchDir dir("precedence");
  const std::string cfg = dir.file("run.cfg");
  const std::string input = testing::data_path("table_dialogues.json").string();
  write(cfg, "dataset = emotionpush\n");
  // EmotionPush preset: no personality tokens.
  const auto from_file = invoke({"prep", "--config", cfg, "--input", input, "--render"});
  REQUIRE(from_file.code == 0);
  CHECK(from_file.out.find("[says]") == std::string::npos);
  const auto flag = invoke({"prep", "--config", cfg, "--input", input, "--render", "--dataset", "friends"});
  REQUIRE(flag.code == 0);
  CHECK(flag.out.find("[Chandler] [says]") != std::string::npos);

  write(cfg, "prep.personality_tokens = false\n");
  const auto set = invoke({"prep", "--config", cfg, "--input", input, "--render", "--set",
                           "prep.personality_tokens=true"});
  CHECK(set.out.find("[says]") != std::string::npos);
}

TEST_CASE("train, eval and predict end to end") {
  Workspace ws("e2e");
  REQUIRE(invoke({"vocab", "--config", ws.config, "--dialogues", ws.corpus, "--out", ws.vocab}).code == 0);
  const std::string ckpt = ws.dir.file("model.ckpt");
  const auto train = invoke({"train", "--config", ws.config, "--input", ws.corpus, "--vocab", ws.vocab,
                             "--out", ckpt, "--metrics", ws.dir.file("metrics.jsonl"), "--seed", "3"});
  INFO(train.err);
  REQUIRE(train.code == 0);
  CHECK(fs::exists(ckpt));
  std::ifstream metrics(ws.dir.file("metrics.jsonl"));
  std::size_t lines = 0;
  for (std::string line; std::getline(metrics, line);) {
    CHECK(nlohmann::json::parse(line).contains("val_micro_f1"));
    ++lines;
  }
  CHECK(lines == 2);

  const auto eval = invoke({"eval", "--config", ws.config, "--input", ws.corpus, "--vocab", ws.vocab,
                            "--checkpoint", ckpt, "--json", ws.dir.file("report.json")});
  REQUIRE(eval.code == 0);
  CHECK(eval.out.find("Micro AVG") != std::string::npos);
  std::ifstream report_in(ws.dir.file("report.json"));
  CHECK(nlohmann::json::parse(report_in).contains("weighted"));

  const auto predict = invoke({"predict", "--config", ws.config, "--input", ws.corpus, "--vocab",
                               ws.vocab, "--checkpoint", ckpt});
  REQUIRE(predict.code == 0);
  const auto labeled = parse_dialogues(predict.out, DatasetSource::friends);
  CHECK(labeled.utterance_count() == testing::keyword_corpus(12, 7).utterance_count());

  const auto baseline = invoke({"eval", "--config", ws.config, "--input", ws.corpus, "--baseline"});
  CHECK(baseline.code == 0);
}

TEST_CASE("identical invocations are bit-reproducible") {
  Workspace ws("repro");
  REQUIRE(invoke({"vocab", "--config", ws.config, "--dialogues", ws.corpus, "--out", ws.vocab}).code == 0);
  for (const char* name : {"a.ckpt", "b.ckpt"}) {
    REQUIRE(invoke({"train", "--config", ws.config, "--input", ws.corpus, "--vocab", ws.vocab, "--out",
                    ws.dir.file(name), "--seed", "11"})
                .code == 0);
  }
  CHECK(testing::read_text(ws.dir.file("a.ckpt")) == testing::read_text(ws.dir.file("b.ckpt")));
  REQUIRE(invoke({"train", "--config", ws.config, "--input", ws.corpus, "--vocab", ws.vocab, "--out",
                  ws.dir.file("c.ckpt"), "--seed", "12"})
              .code == 0);
  CHECK(testing::read_text(ws.dir.file("a.ckpt")) != testing::read_text(ws.dir.file("c.ckpt")));
}

TEST_CASE("dry runs touch no files") {
  Workspace ws("dry");
  REQUIRE(invoke({"vocab", "--config", ws.config, "--dialogues", ws.corpus, "--out", ws.vocab}).code == 0);
  const std::size_t before = ws.dir.entries();
  const auto train = invoke({"train", "--config", ws.config, "--input", ws.corpus, "--vocab", ws.vocab,
                             "--out", ws.dir.file("x.ckpt"), "--metrics", ws.dir.file("m.jsonl"),
                             "--dry-run"});
  CHECK(train.code == 0);
  write(ws.dir.file("scenes.txt"), "a b\nc d\n\ne f\ng h\n");
  const std::size_t with_scenes = ws.dir.entries();
  CHECK(with_scenes == before + 1);
  const auto pre = invoke({"pretrain", "mlm-nsp", "--config", ws.config, "--input", ws.dir.file("scenes.txt"),
                           "--vocab", ws.vocab, "--out", ws.dir.file("p.ckpt"), "--dry-run"});
  CHECK(pre.code == 0);
  CHECK(ws.dir.entries() == with_scenes);

  const auto bad = invoke({"train", "--config", ws.config, "--input", ws.dir.file("nope.json"),
                           "--vocab", ws.vocab, "--dry-run"});
  CHECK(bad.code == 2);
}

TEST_CASE("pretrain writes a checkpoint the trainer accepts") {
  Workspace ws("pretrain");
  write(ws.dir.file("scenes.txt"), "we went okay\nit was delighted\n\nso furious today\nthe place miserable\n");
  REQUIRE(invoke({"vocab", "--config", ws.config, "--dialogues", ws.corpus, "--out", ws.vocab}).code == 0);
  const auto pre = invoke({"pretrain", "mlm-nsp", "--config", ws.config, "--input", ws.dir.file("scenes.txt"),
                           "--vocab", ws.vocab, "--out", ws.dir.file("p.ckpt"), "--set", "pretrain.epochs=1",
                           "--set", "pretrain.examples=8"});
  INFO(pre.err);
  REQUIRE(pre.code == 0);
  const auto train = invoke({"train", "--config", ws.config, "--input", ws.corpus, "--vocab", ws.vocab,
                             "--init", ws.dir.file("p.ckpt"), "--out", ws.dir.file("t.ckpt")});
  INFO(train.err);
  CHECK(train.code == 0);

  const auto tweets = invoke({"pretrain", "tweets", "--config", ws.config, "--input",
                              testing::data_path("tweets_fixture.tsv").string(), "--vocab", ws.vocab,
                              "--out", ws.dir.file("tw.ckpt"), "--set", "pretrain.epochs=1"});
  INFO(tweets.err);
  REQUIRE(tweets.code == 0);
  CHECK(load_checkpoint(ws.dir.file("tw.ckpt")).config.n_labels == 4);
}

TEST_CASE("checkpoint and vocabulary must match") {
  Workspace ws("mismatch");
  REQUIRE(invoke({"vocab", "--config", ws.config, "--dialogues", ws.corpus, "--out", ws.vocab}).code == 0);
  REQUIRE(invoke({"train", "--config", ws.config, "--input", ws.corpus, "--vocab", ws.vocab, "--out",
                  ws.dir.file("m.ckpt")})
              .code == 0);
  write(ws.dir.file("other.txt"), "[PAD]\n[UNK]\n[CLS]\n[SEP]\n[MASK]\nzzz\n");
  const auto r = invoke({"eval", "--config", ws.config, "--input", ws.corpus, "--vocab",
                         ws.dir.file("other.txt"), "--checkpoint", ws.dir.file("m.ckpt")});
  CHECK(r.code == 2);
  CHECK(r.err.find("different vocabulary") != std::string::npos);
}

TEST_CASE("config path from the environment") {
  ScratchDir dir("env");
  const std::string cfg = dir.file("env.cfg");
  const std::string input = testing::data_path("table_dialogues.json").string();
  write(cfg, "prep.personality_tokens = false\n");
  ::setenv("CAUSALEMO_CONFIG", cfg.c_str(), 1);
  const auto r = invoke({"prep", "--input", input, "--render"});
  ::unsetenv("CAUSALEMO_CONFIG");
  REQUIRE(r.code == 0);
  CHECK(r.out.find("[says]") == std::string::npos);
  CHECK(invoke({"prep", "--input", input, "--render"}).out.find("[says]") != std::string::npos);
}
