#include "irony/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>

#include "irony/error.hpp"

namespace irony {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

template <typename T>
T parse_number(const std::string& key, const std::string& value) {
  T out{};
  const auto* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc{} || ptr != end) throw Error(ErrorKind::Config, key + ": '" + value + "' is not a valid number");
  return out;
}

bool parse_bool(const std::string& key, const std::string& value) {
  const std::string v = to_lower_ascii(value);
  if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
  if (v == "0" || v == "false" || v == "no" || v == "off") return false;
  throw Error(ErrorKind::Config, key + ": '" + value + "' is not a boolean");
}

// "80,100,120" or "80 100 120"
std::vector<int> parse_int_list(const std::string& key, std::string value) {
  std::replace(value.begin(), value.end(), ',', ' ');
  std::vector<int> out;
  std::stringstream ss(value);
  std::string item;
  while (ss >> item) out.push_back(parse_number<int>(key, item));
  if (out.empty()) throw Error(ErrorKind::Config, key + ": empty list");
  return out;
}

using Setter = std::function<void(RunConfig&, const std::string& key, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"run.task", [](RunConfig& c, auto&, auto& v) { c.task = parse_task(v); }},
      {"run.seed", [](RunConfig& c, auto& k, auto& v) { c.seed = parse_number<std::uint64_t>(k, v); }},
      {"run.jobs", [](RunConfig& c, auto& k, auto& v) { c.jobs = parse_number<int>(k, v); }},
      {"run.folds", [](RunConfig& c, auto& k, auto& v) { c.folds = parse_number<int>(k, v); }},
      {"data.train", [](RunConfig& c, auto&, auto& v) { c.train = v; }},
      {"data.test", [](RunConfig& c, auto&, auto& v) { c.test = v; }},
      {"data.model", [](RunConfig& c, auto&, auto& v) { c.model = v; }},
      {"data.pos_sidecar", [](RunConfig& c, auto&, auto& v) { c.pos_sidecar = v; }},
      {"resources.data_dir", [](RunConfig& c, auto&, auto& v) { c.data_dir = v; }},
      {"resources.embeddings", [](RunConfig& c, auto&, auto& v) { c.embeddings = v; }},
      {"resources.embedding_dim",
       [](RunConfig& c, auto& k, auto& v) { c.embedding_dim = parse_number<std::size_t>(k, v); }},
      {"resources.positive_lexicon", [](RunConfig& c, auto&, auto& v) { c.positive_lexicon = v; }},
      {"resources.negative_lexicon", [](RunConfig& c, auto&, auto& v) { c.negative_lexicon = v; }},
      {"resources.normalization_dict", [](RunConfig& c, auto&, auto& v) { c.normalization_dict = v; }},
      {"resources.emoji_map", [](RunConfig& c, auto&, auto& v) { c.emoji_map = v; }},
      {"resources.emoji_polarity", [](RunConfig& c, auto&, auto& v) { c.emoji_polarity = v; }},
      {"resources.negation_words", [](RunConfig& c, auto&, auto& v) { c.negation_words = v; }},
      {"resources.pos_tagger", [](RunConfig& c, auto&, auto& v) { c.pos_tagger = v; }},
      {"features.word_top_k", [](RunConfig& c, auto& k, auto& v) { c.features.word_top_k = parse_number<int>(k, v); }},
      {"features.char_top_k", [](RunConfig& c, auto& k, auto& v) { c.features.char_top_k = parse_number<int>(k, v); }},
      {"features.max_n", [](RunConfig& c, auto& k, auto& v) { c.features.max_n = parse_number<int>(k, v); }},
      {"features.brown_sizes", [](RunConfig& c, auto& k, auto& v) { c.features.brown_sizes = parse_int_list(k, v); }},
      {"features.brown_min_count",
       [](RunConfig& c, auto& k, auto& v) { c.features.brown_min_count = parse_number<int>(k, v); }},
      {"features.lsi_dim", [](RunConfig& c, auto& k, auto& v) { c.features.lsi_dim = parse_number<int>(k, v); }},
      {"features.lsi_min_df", [](RunConfig& c, auto& k, auto& v) { c.features.lsi_min_df = parse_number<int>(k, v); }},
      {"features.lexical", [](RunConfig& c, auto& k, auto& v) { c.features.lexical = parse_bool(k, v); }},
      {"features.syntactic", [](RunConfig& c, auto& k, auto& v) { c.features.syntactic = parse_bool(k, v); }},
      {"features.semantic", [](RunConfig& c, auto& k, auto& v) { c.features.semantic = parse_bool(k, v); }},
      {"features.polarity", [](RunConfig& c, auto& k, auto& v) { c.features.polarity = parse_bool(k, v); }},
      {"mlp.hidden",
       [](RunConfig& c, auto& k, auto& v) {
         const auto sizes = parse_int_list(k, v);
         if (sizes.size() != 2) throw Error(ErrorKind::Config, k + ": expected two comma-separated sizes");
         c.mlp.hidden = {sizes[0], sizes[1]};
         c.hidden_explicit = true;
       }},
      {"mlp.learning_rate", [](RunConfig& c, auto& k, auto& v) { c.mlp.learning_rate = parse_number<double>(k, v); }},
      {"mlp.l2", [](RunConfig& c, auto& k, auto& v) { c.mlp.l2 = parse_number<double>(k, v); }},
      {"mlp.max_epochs", [](RunConfig& c, auto& k, auto& v) { c.mlp.max_epochs = parse_number<int>(k, v); }},
      {"mlp.patience", [](RunConfig& c, auto& k, auto& v) { c.mlp.patience = parse_number<int>(k, v); }},
      {"mlp.batch_size", [](RunConfig& c, auto& k, auto& v) { c.mlp.batch_size = parse_number<int>(k, v); }},
  };
  return table;
}

}  // namespace

ConfigValues parse_config(std::istream& in, const std::string& source) {
  ConfigValues out;
  std::string section = "run";
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#' || t[0] == ';') continue;
    const auto where = source + ":" + std::to_string(lineno);
    if (t.front() == '[') {
      if (t.back() != ']' || t.size() < 3) throw Error(ErrorKind::Config, where + ": malformed section header");
      section = trim(std::string_view(t).substr(1, t.size() - 2));
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string::npos) throw Error(ErrorKind::Config, where + ": expected key = value");
    const std::string key = trim(std::string_view(t).substr(0, eq));
    if (key.empty()) throw Error(ErrorKind::Config, where + ": empty key");
    out[section + "." + key] = trim(std::string_view(t).substr(eq + 1));
  }
  return out;
}

ConfigValues read_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Config, "cannot open config file " + path.string());
  return parse_config(in, path.string());
}

void RunConfig::set(const std::string& key, const std::string& value) {
  const auto it = setters().find(key);
  if (it == setters().end()) throw Error(ErrorKind::Config, "unknown config key '" + key + "'");
  it->second(*this, key, value);
}

void RunConfig::apply(const ConfigValues& values) {
  for (const auto& [k, v] : values) set(k, v);
}

std::vector<std::string> RunConfig::known_keys() {
  std::vector<std::string> keys;
  for (const auto& [k, _] : setters()) keys.push_back(k);
  return keys;
}

ResourcePaths RunConfig::resource_paths() const {
  ResourcePaths p = ResourcePaths::defaults(data_dir);
  p.embeddings = embeddings;
  p.embedding_dim = embedding_dim;
  if (!positive_lexicon.empty()) p.positive_lexicon = positive_lexicon;
  if (!negative_lexicon.empty()) p.negative_lexicon = negative_lexicon;
  if (!normalization_dict.empty()) p.normalization_dict = normalization_dict;
  if (!emoji_map.empty()) p.emoji_map = emoji_map;
  if (!emoji_polarity.empty()) p.emoji_polarity = emoji_polarity;
  if (!negation_words.empty()) p.negation_words = negation_words;
  return p;
}

std::filesystem::path RunConfig::tagger_path() const {
  return pos_tagger.empty() ? data_dir / "pos_tagger.weights" : pos_tagger;
}

MlpConfig RunConfig::mlp_for_task() const {
  MlpConfig m = mlp;
  if (!hidden_explicit) m.hidden = MlpConfig::for_task(task).hidden;
  return m;
}

EnsembleConfig RunConfig::ensemble() const {
  EnsembleConfig e;
  e.mlp = mlp_for_task();
  e.folds = folds;
  e.jobs = jobs;
  e.seed = seed;
  return e;
}

}  // namespace irony
