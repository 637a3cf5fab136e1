#include "irony/dataset.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <string_view>

#include "irony/error.hpp"

namespace irony {

std::map<int, std::size_t> LabeledCorpus::class_counts() const {
  std::map<int, std::size_t> counts;
  for (const auto& t : tweets) {
    if (t.label) ++counts[*t.label];
  }
  return counts;
}

std::vector<int> LabeledCorpus::labels() const {
  std::vector<int> out;
  out.reserve(tweets.size());
  for (const auto& t : tweets) {
    if (!t.label) {
      throw Error(ErrorKind::Validation, "tweet " + std::to_string(t.id) + " has no label");
    }
    out.push_back(*t.label);
  }
  return out;
}

namespace {

template <typename T>
bool parse_int(std::string_view s, T& out) {
  while (!s.empty() && (s.front() == ' ')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ')) s.remove_suffix(1);
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

}  // namespace

LabeledCorpus parse_dataset(std::istream& in, Task task, const std::string& provenance,
                            LabelPolicy policy) {
  LabeledCorpus corpus;
  corpus.task = task;
  corpus.provenance = provenance;
  std::set<std::int64_t> seen;

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line_no == 1 && line.rfind("Tweet index", 0) == 0) continue;

    const auto where = provenance + ":" + std::to_string(line_no);
    const auto tab1 = line.find('\t');
    if (tab1 == std::string::npos) {
      throw Error(ErrorKind::Parse, where + ": expected tab-separated columns index, label, text");
    }
    RawTweet tweet;
    if (!parse_int(std::string_view(line).substr(0, tab1), tweet.id)) {
      throw Error(ErrorKind::Parse, where + ": tweet index is not an integer");
    }
    const auto tab2 = line.find('\t', tab1 + 1);
    if (tab2 == std::string::npos) {
      if (policy == LabelPolicy::Required) {
        throw Error(ErrorKind::Parse, where + ": expected 3 columns, found 2");
      }
      tweet.text = line.substr(tab1 + 1);
    } else {
      int label = 0;
      if (!parse_int(std::string_view(line).substr(tab1 + 1, tab2 - tab1 - 1), label)) {
        throw Error(ErrorKind::Parse, where + ": label is not an integer");
      }
      if (label < 0 || label >= num_classes(task)) {
        throw Error(ErrorKind::Validation, where + ": label " + std::to_string(label) +
                                               " out of range for task " + to_string(task));
      }
      tweet.label = label;
      tweet.text = line.substr(tab2 + 1);
    }
    if (!seen.insert(tweet.id).second) {
      throw Error(ErrorKind::Validation, where + ": duplicate tweet index " + std::to_string(tweet.id));
    }
    corpus.tweets.push_back(std::move(tweet));
  }
  if (corpus.tweets.empty()) {
    throw Error(ErrorKind::Parse, provenance + ": no data rows");
  }
  return corpus;
}

LabeledCorpus load_dataset(const std::filesystem::path& path, Task task, LabelPolicy policy) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Resource, "dataset file not found: " + path.string());
  return parse_dataset(in, task, path.string(), policy);
}

}  // namespace irony
