#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "irony/task.hpp"

namespace irony {

struct RawTweet {
  std::int64_t id = 0;
  std::string text;
  std::optional<int> label;
};

struct LabeledCorpus {
  std::vector<RawTweet> tweets;
  Task task = Task::A;
  std::string provenance;

  std::size_t size() const { return tweets.size(); }
  std::map<int, std::size_t> class_counts() const;
  std::vector<int> labels() const;  // requires every tweet labeled
};

enum class LabelPolicy { Required, Optional };

// SemEval-2018 Task 3 TSV: index \t label \t text, optional "Tweet index"
// header. With LabelPolicy::Optional, two-column rows (index \t text) are
// accepted as unlabeled.
LabeledCorpus parse_dataset(std::istream& in, Task task, const std::string& provenance,
                            LabelPolicy policy = LabelPolicy::Required);
LabeledCorpus load_dataset(const std::filesystem::path& path, Task task,
                           LabelPolicy policy = LabelPolicy::Required);

}  // namespace irony
