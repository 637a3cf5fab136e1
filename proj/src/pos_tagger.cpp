#include "irony/pos_tagger.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "irony/binary_io.hpp"
#include "irony/error.hpp"
#include "irony/resources.hpp"
#include "irony/utf8.hpp"

namespace irony {

std::optional<std::size_t> pos_tag_index(std::string_view tag) {
  const auto it = std::lower_bound(kPosTagset.begin(), kPosTagset.end(), tag);
  if (it == kPosTagset.end() || *it != tag) return std::nullopt;
  return static_cast<std::size_t>(it - kPosTagset.begin());
}

namespace {

std::uint8_t require_tag(std::string_view tag, const std::string& where) {
  const auto idx = pos_tag_index(tag);
  if (!idx) throw Error(ErrorKind::Validation, where + ": unknown POS tag '" + std::string(tag) + "'");
  return static_cast<std::uint8_t>(*idx);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    const auto end = s.find(sep, start);
    if (end == std::string_view::npos) {
      out.push_back(s.substr(start));
      break;
    }
    out.push_back(s.substr(start, end - start));
    start = end + 1;
  }
  return out;
}

bool all_digits(std::string_view w) {
  return !w.empty() && std::all_of(w.begin(), w.end(), [](char c) { return c >= '0' && c <= '9'; });
}

// Context-word normalization the weights were trained with.
std::string context_form(std::string_view word) {
  if (word.find('-') != std::string_view::npos && word.front() != '-') return "!HYPHEN";
  if (all_digits(word) && word.size() == 4) return "!YEAR";
  if (word.front() >= '0' && word.front() <= '9') return "!DIGITS";
  return to_lower_ascii(word);
}

}  // namespace

void PosTagger::add_feature(std::string name, std::vector<Weight> weights) {
  const auto begin = static_cast<std::uint32_t>(weights_.size());
  weights_.insert(weights_.end(), weights.begin(), weights.end());
  const auto end = static_cast<std::uint32_t>(weights_.size());
  if (feature_index_.emplace(name, std::make_pair(begin, end)).second) {
    feature_names_.push_back(std::move(name));
  } else {
    weights_.resize(begin);
  }
}

PosTagger PosTagger::parse(std::istream& in, const std::string& source) {
  PosTagger tagger;
  std::string line;
  std::size_t line_no = 0;
  bool saw_tagset = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    const auto where = source + ":" + std::to_string(line_no);
    const auto cols = split(line, '\t');
    const auto kind = cols[0];
    if (kind == "format") {
      if (cols.size() != 2 || cols[1] != "1") {
        throw Error(ErrorKind::Parse, where + ": unsupported tagger weights format");
      }
    } else if (kind == "tagset") {
      if (cols.size() != 2) throw Error(ErrorKind::Parse, where + ": malformed tagset line");
      const auto tags = split(cols[1], ' ');
      if (tags.size() != kNumPosTags) {
        throw Error(ErrorKind::Validation, where + ": tagset must have 45 tags, found " +
                                               std::to_string(tags.size()));
      }
      for (std::size_t i = 0; i < kNumPosTags; ++i) {
        if (tags[i] != kPosTagset[i]) {
          throw Error(ErrorKind::Validation, where + ": tagset differs from the built-in tagset at '" +
                                                 std::string(tags[i]) + "'");
        }
      }
      saw_tagset = true;
    } else if (kind == "tagdict") {
      if (cols.size() != 3) throw Error(ErrorKind::Parse, where + ": malformed tagdict line");
      tagger.tagdict_.emplace(std::string(cols[1]), require_tag(cols[2], where));
    } else if (kind == "feat") {
      if (cols.size() != 3) throw Error(ErrorKind::Parse, where + ": malformed feat line");
      std::vector<Weight> weights;
      for (auto cell : split(cols[2], ' ')) {
        if (cell.empty()) continue;
        const auto eq = cell.rfind('=');
        if (eq == std::string_view::npos) throw Error(ErrorKind::Parse, where + ": malformed weight");
        double value = 0;
        const auto num = cell.substr(eq + 1);
        auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), value);
        if (ec != std::errc() || ptr != num.data() + num.size()) {
          throw Error(ErrorKind::Parse, where + ": unparsable weight '" + std::string(num) + "'");
        }
        weights.push_back({require_tag(cell.substr(0, eq), where), value});
      }
      tagger.add_feature(std::string(cols[1]), std::move(weights));
    } else {
      throw Error(ErrorKind::Parse, where + ": unknown record '" + std::string(kind) + "'");
    }
  }
  if (!saw_tagset) throw Error(ErrorKind::Parse, source + ": tagger weights lack a tagset line");
  return tagger;
}

PosTagger PosTagger::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Resource, "missing POS tagger weights file: '" + path.string() + "'");
  return parse(in, path.string());
}

void PosTagger::score(std::string_view feature, std::array<double, kNumPosTags>& scores) const {
  const auto it = feature_index_.find(std::string(feature));
  if (it == feature_index_.end()) return;
  for (auto k = it->second.first; k < it->second.second; ++k) {
    scores[weights_[k].tag] += weights_[k].value;
  }
}

std::vector<std::string> PosTagger::tag(std::span<const std::string> tokens) const {
  std::vector<std::string> context;
  context.reserve(tokens.size() + 4);
  context.emplace_back("-START-");
  context.emplace_back("-START2-");
  for (const auto& t : tokens) context.push_back(context_form(t));
  context.emplace_back("-END-");
  context.emplace_back("-END2-");

  std::vector<std::string> out;
  out.reserve(tokens.size());
  std::string prev = "-START-";
  std::string prev2 = "-START2-";
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const std::string& word = tokens[i];
    std::string tag;
    if (const auto it = tagdict_.find(word); it != tagdict_.end()) {
      tag = kPosTagset[it->second];
    } else {
      const std::size_t c = i + 2;
      std::array<double, kNumPosTags> scores{};
      score("bias", scores);
      score("i suffix " + utf8::suffix(word, 3), scores);
      score("i pref1 " + utf8::prefix(word, 1), scores);
      score("i-1 tag " + prev, scores);
      score("i-2 tag " + prev2, scores);
      score("i tag+i-2 tag " + prev + " " + prev2, scores);
      score("i word " + context[c], scores);
      score("i-1 tag+i word " + prev + " " + context[c], scores);
      score("i-1 word " + context[c - 1], scores);
      score("i-1 suffix " + utf8::suffix(context[c - 1], 3), scores);
      score("i-2 word " + context[c - 2], scores);
      score("i+1 word " + context[c + 1], scores);
      score("i+1 suffix " + utf8::suffix(context[c + 1], 3), scores);
      score("i+2 word " + context[c + 2], scores);
      // Highest score wins; ties go to the tag that sorts last.
      std::size_t best = 0;
      for (std::size_t k = 1; k < kNumPosTags; ++k) {
        if (scores[k] >= scores[best]) best = k;
      }
      tag = kPosTagset[best];
    }
    out.push_back(tag);
    prev2 = std::move(prev);
    prev = tag;
  }
  return out;
}

void PosTagger::save(BinaryWriter& w) const {
  std::vector<std::pair<std::string, std::uint8_t>> dict(tagdict_.begin(), tagdict_.end());
  std::sort(dict.begin(), dict.end());
  w.u64(dict.size());
  for (const auto& [word, tag] : dict) {
    w.str(word);
    w.u8(tag);
  }
  w.u64(feature_names_.size());
  for (const auto& name : feature_names_) {
    const auto [b, e] = feature_index_.at(name);
    w.str(name);
    w.u32(e - b);
    for (auto k = b; k < e; ++k) {
      w.u8(weights_[k].tag);
      w.f64(weights_[k].value);
    }
  }
}

PosTagger PosTagger::load(BinaryReader& r) {
  PosTagger tagger;
  const auto nd = r.count(9);
  for (std::uint64_t i = 0; i < nd; ++i) {
    auto word = r.str();
    const auto tag = r.u8();
    if (tag >= kNumPosTags) throw Error(ErrorKind::Integrity, "bad tag index in tagger data");
    tagger.tagdict_.emplace(std::move(word), tag);
  }
  const auto nf = r.count(12);
  for (std::uint64_t i = 0; i < nf; ++i) {
    auto name = r.str();
    const auto nw = r.u32();
    std::vector<Weight> weights(nw);
    for (auto& w : weights) {
      w.tag = r.u8();
      if (w.tag >= kNumPosTags) throw Error(ErrorKind::Integrity, "bad tag index in tagger data");
      w.value = r.f64();
    }
    tagger.add_feature(std::move(name), std::move(weights));
  }
  return tagger;
}

SidecarTags read_sidecar_tags(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Resource, "missing POS sidecar file: '" + path.string() + "'");
  SidecarTags out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto where = path.string() + ":" + std::to_string(line_no);
    const auto tab = line.find('\t');
    if (tab == std::string::npos) throw Error(ErrorKind::Parse, where + ": expected 'id\\ttags'");
    std::int64_t id = 0;
    auto [ptr, ec] = std::from_chars(line.data(), line.data() + tab, id);
    if (ec != std::errc() || ptr != line.data() + tab) {
      throw Error(ErrorKind::Parse, where + ": tweet id is not an integer");
    }
    std::vector<std::string> tags;
    std::istringstream ss(line.substr(tab + 1));
    std::string tag;
    while (ss >> tag) {
      require_tag(tag, where);
      tags.push_back(tag);
    }
    out[id] = std::move(tags);
  }
  return out;
}

void check_sidecar_coverage(const SidecarTags& sidecar, std::span<const std::int64_t> ids) {
  std::string missing;
  std::size_t n = 0;
  for (auto id : ids) {
    if (sidecar.count(id)) continue;
    if (n < 20) missing += (n ? ", " : "") + std::to_string(id);
    ++n;
  }
  if (n > 0) {
    throw Error(ErrorKind::Validation, "POS sidecar is missing " + std::to_string(n) +
                                           " tweet ids: " + missing + (n > 20 ? ", ..." : ""));
  }
}

}  // namespace irony
