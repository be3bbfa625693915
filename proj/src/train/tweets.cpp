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

#include <algorithm>
#include <array>
#include <cctype>
#include <istream>
#include <sstream>
#include <unordered_set>

#include "causalemo/errors.hpp"
#include "causalemo/train.hpp"

namespace causalemo {
namespace {

struct HashtagRule {
  std::string_view hashtag;
  TweetEmotion emotion;
};

constexpr std::array<HashtagRule, 16> kHashtags = {{
    {"#mad", TweetEmotion::anger},         {"#pissed", TweetEmotion::anger},
    {"#pumped", TweetEmotion::anticipation}, {"#ready", TweetEmotion::anticipation},
    {"#awful", TweetEmotion::disgust},     {"#eww", TweetEmotion::disgust},
    {"#fear", TweetEmotion::fear},         {"#worried", TweetEmotion::fear},
    {"#fun", TweetEmotion::joy},           {"#joy", TweetEmotion::joy},
    {"#depressed", TweetEmotion::sadness}, {"#grief", TweetEmotion::sadness},
    {"#strange", TweetEmotion::surprise},  {"#surprise", TweetEmotion::surprise},
    {"#hope", TweetEmotion::trust},        {"#secure", TweetEmotion::trust},
}};

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

}  // namespace

std::string_view to_string(TweetEmotion emotion) noexcept {
  switch (emotion) {
    case TweetEmotion::anger: return "anger";
    case TweetEmotion::anticipation: return "anticipation";
    case TweetEmotion::disgust: return "disgust";
    case TweetEmotion::fear: return "fear";
    case TweetEmotion::joy: return "joy";
    case TweetEmotion::sadness: return "sadness";
    case TweetEmotion::surprise: return "surprise";
    case TweetEmotion::trust: return "trust";
  }
  return "unknown";
}

std::optional<TweetEmotion> hashtag_emotion(std::string_view hashtag) noexcept {
  for (const auto& rule : kHashtags) {
    if (hashtag.size() == rule.hashtag.size() &&
        std::equal(hashtag.begin(), hashtag.end(), rule.hashtag.begin(),
                   [](unsigned char a, unsigned char b) { return std::tolower(a) == b; })) {
      return rule.emotion;
    }
  }
  return std::nullopt;
}

std::vector<TweetCandidate> read_tweet_file(std::istream& in) {
  std::vector<TweetCandidate> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    TweetCandidate candidate;
    const auto tab = line.find('\t');
    candidate.text = line.substr(0, tab);
    if (tab != std::string::npos) {
      std::istringstream tags(line.substr(tab + 1));
      for (std::string tag; tags >> tag;) candidate.hashtags.push_back(tag);
    }
    out.push_back(std::move(candidate));
  }
  return out;
}

std::vector<TweetRecord> filter_tweets(std::span<const TweetCandidate> raw) {
  std::vector<TweetRecord> out;
  std::unordered_set<std::string> seen;
  for (const auto& candidate : raw) {
    if (!seen.insert(candidate.text).second) continue;

    const std::string& text = candidate.text;
    std::size_t end = text.size();
    while (end > 0 && is_space(text[end - 1])) --end;
    std::size_t start = end;
    while (start > 0 && !is_space(text[start - 1])) --start;
    if (start == end) continue;
    const auto label = hashtag_emotion(std::string_view(text).substr(start, end - start));
    if (!label) continue;

    TweetRecord record;
    record.label = *label;
    std::size_t keep = start;
    while (keep > 0 && is_space(text[keep - 1])) --keep;
    if (keep == 0) continue;
    record.text = text.substr(0, keep);
    if (!candidate.hashtags.empty()) {
      record.hashtags = candidate.hashtags;
    } else {
      std::istringstream words(text);
      for (std::string word; words >> word;) {
        if (word.size() > 1 && word.front() == '#') record.hashtags.push_back(word);
      }
    }
    out.push_back(std::move(record));
  }
  return out;
}

std::vector<LabeledExample> make_tweet_examples(std::span<const TweetRecord> tweets,
                                                const Vocab& vocab, std::size_t max_len,
                                                bool lowercase) {
  std::vector<LabeledExample> out;
  out.reserve(tweets.size());
  for (const auto& tweet : tweets) {
    const auto a = wordpiece_tokenize(tweet.text, vocab, lowercase);
    const std::string none(kNoneToken);
    const std::vector<std::string> b = {none};
    out.push_back({encode_tokens(a, b, vocab, max_len), static_cast<int>(tweet.label)});
  }
  return out;
}

HashtagPretrainResult pretrain_emotion_hashtags(ModelConfig& model_config, ModelParams params,
                                                std::span<const TweetRecord> tweets,
                                                const Vocab& vocab, const TrainConfig& config,
                                                bool lowercase, std::size_t final_labels,
                                                const EpochCallback& on_epoch) {
  if (tweets.empty()) throw PreconditionError("hashtag pre-training needs at least one tweet");
  Rng head_rng(config.seed ^ 0x9E3779B97F4A7C15ULL);
  reset_classification_head(params, model_config, kTweetEmotionCount, head_rng);

  const auto examples = make_tweet_examples(tweets, vocab, model_config.max_len, lowercase);
  TrainConfig tweet_config = config;
  tweet_config.warm_first_epoch = false;
  TrainResult trained = train_classifier(model_config, std::move(params), examples, {},
                                         tweet_config, {}, on_epoch);

  HashtagPretrainResult result;
  result.tweet_params = trained.final_params;
  result.history = std::move(trained.history);
  result.params = std::move(trained.final_params);
  reset_classification_head(result.params, model_config, final_labels, head_rng);
  return result;
}

}  // namespace causalemo
