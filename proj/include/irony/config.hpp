#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "irony/ensemble.hpp"
#include "irony/pipeline.hpp"
#include "irony/resources.hpp"
#include "irony/task.hpp"

namespace irony {

// Config file format:
//   # comment
//   [section]
//   key = value
// Keys are addressed as "section.key"; keys before any section header
// belong to "run".
using ConfigValues = std::map<std::string, std::string>;

ConfigValues parse_config(std::istream& in, const std::string& source);
ConfigValues read_config_file(const std::filesystem::path& path);

struct RunConfig {
  Task task = Task::A;
  std::uint64_t seed = 42;
  int jobs = 1;
  int folds = 10;

  std::filesystem::path train;
  std::filesystem::path test;
  std::filesystem::path model;
  std::filesystem::path pos_sidecar;

  std::filesystem::path data_dir = IRONY_DATA_DIR;
  std::filesystem::path embeddings;
  std::size_t embedding_dim = 300;
  std::filesystem::path positive_lexicon;
  std::filesystem::path negative_lexicon;
  std::filesystem::path normalization_dict;
  std::filesystem::path emoji_map;
  std::filesystem::path emoji_polarity;
  std::filesystem::path negation_words;
  std::filesystem::path pos_tagger;

  FeatureConfig features;
  MlpConfig mlp = MlpConfig::for_task(Task::A);
  bool hidden_explicit = false;

  // Applies "section.key" values; unknown keys are config errors.
  void apply(const ConfigValues& values);
  void set(const std::string& key, const std::string& value);

  ResourcePaths resource_paths() const;
  std::filesystem::path tagger_path() const;
  EnsembleConfig ensemble() const;
  MlpConfig mlp_for_task() const;  // task defaults unless hidden sizes were set

  static std::vector<std::string> known_keys();
};

}  // namespace irony
