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

#include "causalemo/cli.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "causalemo/checkpoint.hpp"
#include "causalemo/config.hpp"
#include "causalemo/corpus.hpp"
#include "causalemo/errors.hpp"
#include "causalemo/eval.hpp"
#include "causalemo/textprep.hpp"
#include "causalemo/tokenizer.hpp"
#include "causalemo/train.hpp"

namespace causalemo {
namespace {

constexpr const char* kConfigEnv = "CAUSALEMO_CONFIG";

struct CommonOptions {
  std::string config_file;
  std::string dataset;
  std::vector<std::string> overrides;
  std::optional<std::uint64_t> seed;
};

void add_common(CLI::App& cmd, CommonOptions& common) {
  cmd.add_option("--config", common.config_file,
                 std::string("config file (default: $") + kConfigEnv + ")");
  cmd.add_option("--dataset", common.dataset, "friends or emotionpush");
  cmd.add_option("--set", common.overrides, "override a config key: key=value");
  cmd.add_option("--seed", common.seed, "random seed");
}

// Preset for the dataset, then the config file, then --set and --seed.
RunConfig resolve_config(const CommonOptions& common) {
  std::string path = common.config_file;
  if (path.empty()) {
    if (const char* env = std::getenv(kConfigEnv)) path = env;
  }
  std::vector<std::pair<std::string, std::string>> entries;
  if (!path.empty()) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    entries = parse_config_text(buffer.str());
  }
  for (const auto& item : common.overrides) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw ConfigError("--set expects key=value, got \"" + item + "\"");
    entries.emplace_back(item.substr(0, eq), item.substr(eq + 1));
  }

  DatasetSource dataset = DatasetSource::friends;
  for (const auto& [key, value] : entries) {
    if (key == "dataset") {
      auto parsed = parse_source(value);
      if (!parsed) throw ConfigError("dataset: expected friends or emotionpush");
      dataset = *parsed;
    }
  }
  if (!common.dataset.empty()) {
    auto parsed = parse_source(common.dataset);
    if (!parsed) throw ConfigError("--dataset: expected friends or emotionpush");
    dataset = *parsed;
  }

  RunConfig config = RunConfig::preset(dataset);
  for (const auto& [key, value] : entries) {
    if (key != "dataset") config.set(key, value);
  }
  if (common.seed) {
    config.train.seed = *common.seed;
    config.pretrain.seed = *common.seed;
  }
  config.finalize();
  return config;
}

std::string require_path(const std::string& flag_value, const std::string& config_value,
                         const char* what) {
  const std::string& path = flag_value.empty() ? config_value : flag_value;
  if (path.empty()) throw ConfigError(std::string("missing ") + what);
  return path;
}

Vocab load_vocab(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open vocabulary " + path);
  return Vocab::load(in);
}

void save_vocab(const Vocab& vocab, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write " + path);
  vocab.save(out);
}

std::vector<Scene> load_scenes(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path);
  return read_scene_corpus(in);
}

std::vector<TweetRecord> load_tweets(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path);
  auto raw = read_tweet_file(in);
  return filter_tweets(raw);
}

Checkpoint load_checked(const std::string& path, const Vocab& vocab) {
  Checkpoint checkpoint = load_checkpoint(path);
  if (checkpoint.vocab_checksum != vocab.checksum()) {
    throw ValidationError("checkpoint " + path + " was built with a different vocabulary");
  }
  return checkpoint;
}

// Fresh parameters, or the encoder of `init` with a head sized for the
// evaluation labels.
Checkpoint starting_point(const RunConfig& config, const Vocab& vocab, const std::string& init,
                          std::uint64_t seed, std::ostream& err) {
  Checkpoint start;
  if (!init.empty()) {
    start = load_checked(init, vocab);
    if (start.config.max_len != config.model.max_len) {
      err << "note: using max_len " << start.config.max_len << " from " << init << "\n";
    }
    start.config.dropout_head = config.model.dropout_head;
    if (start.config.n_labels != kEvaluationLabels.size()) {
      Rng rng(seed);
      reset_classification_head(start.params, start.config, kEvaluationLabels.size(), rng);
    }
    return start;
  }
  start.config = config.model;
  start.config.vocab_size = vocab.size();
  start.config.n_labels = kEvaluationLabels.size();
  start.config.validate();
  Rng rng(seed);
  start.params = ModelParams::initialize(start.config, rng);
  start.vocab_checksum = vocab.checksum();
  return start;
}

std::vector<CausalPair> evaluation_pairs(const DialogueSet& set, const RunConfig& config) {
  auto pairs = prepare_pairs(set, config.prep_options());
  return filter_labels(pairs, evaluation_label_set());
}

nlohmann::json metrics_json(const EpochMetrics& m) {
  nlohmann::json row = {{"epoch", m.epoch},
                        {"train_loss", m.train_loss},
                        {"weighted", m.weighted},
                        {"train_accuracy", m.train_accuracy}};
  if (m.val_micro_f1) row["val_micro_f1"] = *m.val_micro_f1;
  if (m.val_macro_f1) row["val_macro_f1"] = *m.val_macro_f1;
  return row;
}

void print_distribution(std::ostream& out, const char* title, std::span<const CausalPair> pairs) {
  const auto dist = label_distribution(pairs);
  out << title << ":";
  for (EmotionLabel label : kAllEmotions) out << " " << to_string(label) << "=" << dist.at(label);
  out << "\n";
}

// ---------------------------------------------------------------------------

struct IngestArgs {
  std::string input;
};

int cmd_ingest(const IngestArgs& args, const CommonOptions& common, std::ostream& out) {
  const RunConfig config = resolve_config(common);
  const std::string path = require_path(args.input, config.train_file, "--input");
  const DialogueSet set = load_dialogues(path, config.dataset);
  out << "dialogues: " << set.size() << "\n";
  out << "utterances: " << set.utterance_count() << "\n";
  const auto all_pairs = prepare_pairs(set, config.prep_options());
  print_distribution(out, "labels", all_pairs);
  if (config.n_train > 0 && config.n_train <= set.size()) {
    auto [train, val] = split_train_val(set, config.n_train);
    const auto train_pairs = evaluation_pairs(train, config);
    const auto val_pairs = evaluation_pairs(val, config);
    print_distribution(out, "train (evaluation labels)", train_pairs);
    print_distribution(out, "val (evaluation labels)", val_pairs);
    out << "filtered total: " << train_pairs.size() + val_pairs.size() << " = "
        << train_pairs.size() << " + " << val_pairs.size() << "\n";
  }
  return kExitOk;
}

struct PrepArgs {
  std::string input;
  std::string out;
  bool render = false;
  bool filter = false;
};

int cmd_prep(const PrepArgs& args, const CommonOptions& common, std::ostream& out) {
  const RunConfig config = resolve_config(common);
  const std::string path = require_path(args.input, config.train_file, "--input");
  const DialogueSet set = load_dialogues(path, config.dataset, LabelRequirement::optional);
  auto pairs = prepare_pairs(set, config.prep_options());
  if (args.filter) pairs = filter_labels(pairs, evaluation_label_set());

  std::ofstream file;
  if (!args.out.empty()) {
    file.open(args.out);
    if (!file) throw ValidationError("cannot write " + args.out);
  }
  std::ostream& sink = args.out.empty() ? out : file;
  if (args.render) {
    for (const auto& pair : pairs) sink << render_pair(pair) << "\n";
  } else {
    write_pairs(sink, pairs);
  }
  return kExitOk;
}

struct VocabArgs {
  std::vector<std::string> dialogues;
  std::vector<std::string> corpus;
  std::vector<std::string> tweets;
  std::string out;
};

int cmd_vocab(const VocabArgs& args, const CommonOptions& common, std::ostream& out,
              std::ostream& err) {
  const RunConfig config = resolve_config(common);
  std::vector<std::string> texts;
  for (const auto& path : args.dialogues) {
    const DialogueSet set = load_dialogues(path, config.dataset, LabelRequirement::optional);
    for (const auto& pair : prepare_pairs(set, config.prep_options())) {
      texts.push_back(pair.target_text);
    }
  }
  for (const auto& path : args.corpus) {
    for (const auto& scene : load_scenes(path)) texts.insert(texts.end(), scene.begin(), scene.end());
  }
  for (const auto& path : args.tweets) {
    for (const auto& tweet : load_tweets(path)) texts.push_back(tweet.text);
  }
  if (texts.empty()) throw ConfigError("vocab needs --dialogues, --corpus or --tweets input");

  VocabOptions options;
  options.lowercase = config.lowercase;
  const Vocab vocab = build_vocab(texts, config.vocab_min_freq, config.vocab_size_cap, options);
  err << "vocabulary: " << vocab.size() << " tokens from " << texts.size() << " texts\n";
  if (args.out.empty()) {
    vocab.save(out);
  } else {
    save_vocab(vocab, args.out);
  }
  return kExitOk;
}

struct PretrainArgs {
  std::string mode;
  std::string input;
  std::string vocab;
  std::string init;
  std::string out;
  bool dry_run = false;
};

int cmd_pretrain(const PretrainArgs& args, const CommonOptions& common, std::ostream& out,
                 std::ostream& err) {
  const RunConfig config = resolve_config(common);
  const Vocab vocab = load_vocab(require_path(args.vocab, config.vocab_file, "--vocab"));
  Checkpoint start = starting_point(config, vocab, args.init, config.pretrain.seed, err);
  if (args.out.empty() && !args.dry_run) throw ConfigError("missing --out");

  Checkpoint result = start;
  if (args.mode == "mlm-nsp") {
    const auto scenes = load_scenes(require_path(args.input, config.pretrain_corpus, "--input"));
    if (scenes.size() < 2) throw ValidationError("pre-training corpus needs at least two scenes");
    err << "scenes: " << scenes.size() << "\n";
    if (args.dry_run) return kExitOk;
    PretrainConfig pretrain;
    pretrain.optimizer = config.pretrain;
    pretrain.masking.rate = config.mask_rate;
    pretrain.examples_per_epoch = config.pretrain_examples;
    pretrain.lowercase = config.lowercase;
    Rng rng(config.pretrain.seed);
    auto trained = pretrain_mlm_nsp(start.config, start.params, scenes, vocab, pretrain, rng);
    for (std::size_t i = 0; i < trained.epoch_losses.size(); ++i) {
      const auto& l = trained.epoch_losses[i];
      out << nlohmann::json{{"epoch", i + 1}, {"mlm", l.mlm}, {"nsp", l.nsp}}.dump() << "\n";
    }
    result.params = std::move(trained.params);
  } else {
    const auto tweets = load_tweets(require_path(args.input, config.tweet_file, "--input"));
    if (tweets.empty()) throw ValidationError("no tweets survive filtering");
    err << "tweets: " << tweets.size() << "\n";
    if (args.dry_run) return kExitOk;
    auto trained = pretrain_emotion_hashtags(
        result.config, start.params, tweets, vocab, config.pretrain, config.lowercase,
        kEvaluationLabels.size(), [&](const EpochMetrics& m) { out << metrics_json(m).dump() << "\n"; });
    result.params = std::move(trained.params);
  }
  save_checkpoint(args.out, result);
  err << "wrote " << args.out << "\n";
  return kExitOk;
}

struct TrainArgs {
  std::string input;
  std::string vocab;
  std::string init;
  std::string out;
  std::string metrics;
  bool dry_run = false;
};

int cmd_train(const TrainArgs& args, const CommonOptions& common, std::ostream& out,
              std::ostream& err) {
  const RunConfig config = resolve_config(common);
  const Vocab vocab = load_vocab(require_path(args.vocab, config.vocab_file, "--vocab"));
  const DialogueSet set =
      load_dialogues(require_path(args.input, config.train_file, "--input"), config.dataset);
  const std::size_t n_train = std::min(config.n_train, set.size());
  auto [train_set, val_set] = split_train_val(set, n_train);
  const auto train_pairs = evaluation_pairs(train_set, config);
  const auto val_pairs = evaluation_pairs(val_set, config);
  if (train_pairs.empty()) throw ValidationError("no training pairs with evaluation labels");

  Checkpoint start = starting_point(config, vocab, args.init, config.train.seed, err);
  const auto train = make_evaluation_examples(train_pairs, vocab, start.config.max_len, config.lowercase);
  const auto val = make_evaluation_examples(val_pairs, vocab, start.config.max_len, config.lowercase);
  const auto weights = evaluation_class_weights(label_distribution(train_pairs));
  err << "train examples: " << train.size() << ", validation examples: " << val.size() << "\n";
  if (args.dry_run) return kExitOk;
  if (args.out.empty()) throw ConfigError("missing --out");

  std::ofstream metrics_file;
  if (!args.metrics.empty()) {
    metrics_file.open(args.metrics);
    if (!metrics_file) throw ValidationError("cannot write " + args.metrics);
  }
  std::ostream& metrics = args.metrics.empty() ? out : metrics_file;
  auto result = train_classifier(start.config, start.params, train, val, config.train, weights,
                                 [&](const EpochMetrics& m) { metrics << metrics_json(m).dump() << "\n"; });
  Checkpoint trained{start.config, std::move(result.best_params), vocab.checksum()};
  save_checkpoint(args.out, trained);
  err << "best epoch " << result.best_epoch << ", wrote " << args.out << "\n";
  return kExitOk;
}

struct EvalArgs {
  std::string input;
  std::string vocab;
  std::string checkpoint;
  std::string split = "val";
  std::string json;
  bool baseline = false;
};

int cmd_eval(const EvalArgs& args, const CommonOptions& common, std::ostream& out,
             std::ostream& err) {
  const RunConfig config = resolve_config(common);
  const DialogueSet set =
      load_dialogues(require_path(args.input, config.train_file, "--input"), config.dataset);
  const std::size_t n_train = std::min(config.n_train, set.size());
  auto [train_set, val_set] = split_train_val(set, n_train);
  const DialogueSet& scored = args.split == "train" ? train_set : args.split == "all" ? set : val_set;
  const auto pairs = evaluation_pairs(scored, config);
  if (pairs.empty()) throw ValidationError("no pairs with evaluation labels in split " + args.split);

  std::vector<int> gold;
  for (const auto& pair : pairs) gold.push_back(*evaluation_index(*pair.label));

  std::vector<int> predicted;
  if (args.baseline) {
    const auto train_pairs = evaluation_pairs(train_set, config);
    std::vector<std::string> train_texts;
    std::vector<int> train_labels;
    for (const auto& pair : train_pairs) {
      train_texts.push_back(pair.target_text);
      train_labels.push_back(*evaluation_index(*pair.label));
    }
    const auto bow = BowVocabulary::fit(train_texts, config.vocab_size_cap);
    const auto features = bow_featurize(train_texts, bow);
    const auto model = train_logreg(features, train_labels, kEvaluationLabels.size(), bow.size());
    for (const auto& pair : pairs) predicted.push_back(model.predict(bow_featurize(pair.target_text, bow)));
  } else {
    const Vocab vocab = load_vocab(require_path(args.vocab, config.vocab_file, "--vocab"));
    if (args.checkpoint.empty()) throw ConfigError("missing --checkpoint (or pass --baseline)");
    const Checkpoint checkpoint = load_checked(args.checkpoint, vocab);
    const auto examples =
        make_evaluation_examples(pairs, vocab, checkpoint.config.max_len, config.lowercase);
    predicted = predict_classes(checkpoint.params, checkpoint.config, examples);
  }

  std::vector<std::string> names;
  for (EmotionLabel label : kEvaluationLabels) names.emplace_back(display_name(label));
  const EvalReport rep = report(confusion(predicted, gold, names));
  out << format_report(rep);
  if (!args.json.empty()) {
    std::ofstream file(args.json);
    if (!file) throw ValidationError("cannot write " + args.json);
    file << report_to_json(rep).dump(2) << "\n";
  }
  err << "scored " << pairs.size() << " utterances\n";
  return kExitOk;
}

struct PredictArgs {
  std::string input;
  std::string vocab;
  std::string checkpoint;
  std::string out;
};

int cmd_predict(const PredictArgs& args, const CommonOptions& common, std::ostream& out) {
  const RunConfig config = resolve_config(common);
  const Vocab vocab = load_vocab(require_path(args.vocab, config.vocab_file, "--vocab"));
  if (args.checkpoint.empty()) throw ConfigError("missing --checkpoint");
  const Checkpoint checkpoint = load_checked(args.checkpoint, vocab);
  const DialogueSet set = load_dialogues(args.input, config.dataset, LabelRequirement::optional);

  std::vector<Dialogue> labeled;
  for (const Dialogue& dialogue : set) {
    DialogueSet single({dialogue});
    const auto pairs = prepare_pairs(single, config.prep_options());
    Dialogue copy = dialogue;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      const auto input = encode_pair(pairs[i], vocab, checkpoint.config.max_len, config.lowercase);
      copy.utterances[i].emotion =
          kEvaluationLabels[static_cast<std::size_t>(predict_class(checkpoint.params, checkpoint.config, input))];
    }
    labeled.push_back(std::move(copy));
  }
  const std::string text = serialize_dialogues(DialogueSet(std::move(labeled)));
  if (args.out.empty()) {
    out << text << "\n";
  } else {
    std::ofstream file(args.out);
    if (!file) throw ValidationError("cannot write " + args.out);
    file << text << "\n";
  }
  return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Emotion recognition on dialogue utterances with a transformer encoder",
               "causalemo"};
  app.require_subcommand(1);
  CommonOptions common;

  IngestArgs ingest;
  auto* ingest_cmd = app.add_subcommand("ingest", "validate a dialogue file and print statistics");
  add_common(*ingest_cmd, common);
  ingest_cmd->add_option("--input", ingest.input, "dialogue JSON file");

  PrepArgs prep;
  auto* prep_cmd = app.add_subcommand("prep", "emit utterance/context pairs");
  add_common(*prep_cmd, common);
  prep_cmd->add_option("--input", prep.input, "dialogue JSON file");
  prep_cmd->add_option("--out", prep.out, "output path (default: stdout)");
  prep_cmd->add_flag("--render", prep.render, "print token strings instead of JSON lines");
  prep_cmd->add_flag("--filter", prep.filter, "keep only evaluation labels");

  VocabArgs vocab;
  auto* vocab_cmd = app.add_subcommand("vocab", "build a WordPiece vocabulary");
  add_common(*vocab_cmd, common);
  vocab_cmd->add_option("--dialogues", vocab.dialogues, "dialogue JSON files");
  vocab_cmd->add_option("--corpus", vocab.corpus, "scene corpus files");
  vocab_cmd->add_option("--tweets", vocab.tweets, "tweet files");
  vocab_cmd->add_option("--out", vocab.out, "output path (default: stdout)");

  PretrainArgs pretrain;
  auto* pretrain_cmd = app.add_subcommand("pretrain", "masked-LM/next-sentence or hashtag pre-training");
  add_common(*pretrain_cmd, common);
  pretrain_cmd->add_option("mode", pretrain.mode, "mlm-nsp or tweets")
      ->required()
      ->check(CLI::IsMember({"mlm-nsp", "tweets"}));
  pretrain_cmd->add_option("--input", pretrain.input, "scene corpus or tweet file");
  pretrain_cmd->add_option("--vocab", pretrain.vocab, "vocabulary file");
  pretrain_cmd->add_option("--init", pretrain.init, "checkpoint to continue from");
  pretrain_cmd->add_option("--out", pretrain.out, "checkpoint to write");
  pretrain_cmd->add_flag("--dry-run", pretrain.dry_run, "validate config and data only");

  TrainArgs train;
  auto* train_cmd = app.add_subcommand("train", "fine-tune the emotion classifier");
  add_common(*train_cmd, common);
  train_cmd->add_option("--input", train.input, "labeled dialogue JSON file");
  train_cmd->add_option("--vocab", train.vocab, "vocabulary file");
  train_cmd->add_option("--init", train.init, "pre-trained checkpoint");
  train_cmd->add_option("--out", train.out, "checkpoint to write");
  train_cmd->add_option("--metrics", train.metrics, "per-epoch metrics JSON lines (default: stdout)");
  train_cmd->add_flag("--dry-run", train.dry_run, "validate config and data only");

  EvalArgs eval;
  auto* eval_cmd = app.add_subcommand("eval", "score a checkpoint against gold labels");
  add_common(*eval_cmd, common);
  eval_cmd->add_option("--input", eval.input, "labeled dialogue JSON file");
  eval_cmd->add_option("--vocab", eval.vocab, "vocabulary file");
  eval_cmd->add_option("--checkpoint", eval.checkpoint, "model checkpoint");
  eval_cmd->add_option("--split", eval.split, "val, train or all")
      ->check(CLI::IsMember({"val", "train", "all"}));
  eval_cmd->add_option("--json", eval.json, "also write the report as JSON");
  eval_cmd->add_flag("--baseline", eval.baseline, "score the bag-of-words logistic regression instead");

  PredictArgs predict;
  auto* predict_cmd = app.add_subcommand("predict", "label an unlabeled dialogue file");
  add_common(*predict_cmd, common);
  predict_cmd->add_option("--input", predict.input, "dialogue JSON file")->required();
  predict_cmd->add_option("--vocab", predict.vocab, "vocabulary file");
  predict_cmd->add_option("--checkpoint", predict.checkpoint, "model checkpoint");
  predict_cmd->add_option("--out", predict.out, "output path (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    if (argc > 1) err << "error: " << e.what() << "\n";
    err << app.help();
    return kExitUsage;
  }

  try {
    if (*ingest_cmd) return cmd_ingest(ingest, common, out);
    if (*prep_cmd) return cmd_prep(prep, common, out);
    if (*vocab_cmd) return cmd_vocab(vocab, common, out, err);
    if (*pretrain_cmd) return cmd_pretrain(pretrain, common, out, err);
    if (*train_cmd) return cmd_train(train, common, out, err);
    if (*eval_cmd) return cmd_eval(eval, common, out, err);
    if (*predict_cmd) return cmd_predict(predict, common, out);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  }
  err << app.help();
  return kExitUsage;
}

}  // namespace causalemo
