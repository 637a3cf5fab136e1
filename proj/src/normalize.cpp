#include "irony/normalize.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "irony/utf8.hpp"

namespace irony {

namespace {

bool is_word_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
}

bool is_letter(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }

bool is_punct(char c) {
  const auto u = static_cast<unsigned char>(c);
  return u < 0x80 && std::ispunct(u) && c != '_';
}

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }

std::vector<std::string_view> split_ws(std::string_view text) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && is_space(text[i])) ++i;
    const std::size_t start = i;
    while (i < text.size() && !is_space(text[i])) ++i;
    if (i > start) out.push_back(text.substr(start, i - start));
  }
  return out;
}

std::size_t find_ci(std::string_view hay, std::string_view needle, std::size_t from = 0) {
  if (needle.size() > hay.size()) return std::string_view::npos;
  for (std::size_t i = from; i + needle.size() <= hay.size(); ++i) {
    bool ok = true;
    for (std::size_t k = 0; k < needle.size() && ok; ++k) {
      char a = hay[i + k];
      if (a >= 'A' && a <= 'Z') a = static_cast<char>(a - 'A' + 'a');
      ok = a == needle[k];
    }
    if (ok) return i;
  }
  return std::string_view::npos;
}

// "@name" where '@' is not preceded by a word character. The check looks at
// the rewritten output so "@a@b" masks both and a second pass is a no-op.
std::string mask_mentions(std::string_view token, bool& changed) {
  std::string out;
  std::size_t i = 0;
  while (i < token.size()) {
    if (token[i] == '@' && i + 1 < token.size() && is_word_char(token[i + 1]) &&
        (out.empty() || !is_word_char(out.back()))) {
      std::size_t j = i + 1;
      while (j < token.size() && is_word_char(token[j])) ++j;
      out.append(kUserToken);
      changed = true;
      i = j;
    } else {
      out.push_back(token[i++]);
    }
  }
  return out;
}

// Everything from a URL start to the end of the token becomes <URL>.
std::string mask_urls(std::string_view token, bool& changed) {
  std::size_t cut = std::min(find_ci(token, "http://"), find_ci(token, "https://"));
  std::size_t lead = 0;
  while (lead < token.size() && is_punct(token[lead]) && token[lead] != '<') ++lead;
  if (find_ci(token.substr(lead), "www.") == 0) cut = std::min(cut, lead);
  if (cut == std::string_view::npos) return std::string(token);
  changed = true;
  return std::string(token.substr(0, cut)) + std::string(kUrlToken);
}

// Runs of `min_run` or more identical letters shortened to `keep`.
std::string squeeze(std::string_view word, std::size_t min_run, std::size_t keep) {
  std::string out;
  std::size_t i = 0;
  while (i < word.size()) {
    std::size_t j = i;
    while (j < word.size() && word[j] == word[i]) ++j;
    const std::size_t run = j - i;
    const std::size_t emit = is_letter(word[i]) && run >= min_run ? keep : run;
    out.append(emit, word[i]);
    i = j;
  }
  return out;
}

bool has_long_run(std::string_view word) {
  for (std::size_t i = 0; i + 2 < word.size(); ++i) {
    if (is_letter(word[i]) && word[i] == word[i + 1] && word[i] == word[i + 2]) return true;
  }
  return false;
}

void note(std::vector<std::string>* applied, const char* tag) {
  if (applied && std::find(applied->begin(), applied->end(), tag) == applied->end()) {
    applied->push_back(tag);
  }
}

}  // namespace

Normalizer::Normalizer(const ResourceBundle& resources) : emoji_map_(&resources.emoji_map) {
  dictionary_ = resources.normalization;
  for (auto& [key, value] : dictionary_) value = resolve(value, 0);
  // resolve() consults dictionary_, so re-resolve against the updated map once
  // more for chains whose tail was rewritten above.
  for (auto& [key, value] : dictionary_) value = resolve(value, 0);

  for (const auto& [key, value] : dictionary_) {
    for (auto w : split_ws(value)) known_words_.emplace(w);
  }
  known_words_.insert(resources.positive.begin(), resources.positive.end());
  known_words_.insert(resources.negative.begin(), resources.negative.end());

  for (const auto& [seq, name] : *emoji_map_) {
    max_emoji_len_ = std::max(max_emoji_len_, utf8::length(seq));
  }
}

std::string Normalizer::resolve(const std::string& phrase, int depth) const {
  if (depth > 8) return phrase;
  std::string out;
  for (auto w : split_ws(phrase)) {
    if (!out.empty()) out.push_back(' ');
    const auto it = dictionary_.find(w);
    if (it != dictionary_.end() && it->second != w) {
      out += resolve(it->second, depth + 1);
    } else {
      out.append(w);
    }
  }
  return out;
}

std::string Normalizer::replace_emoji(std::string_view text, bool& changed) const {
  if (emoji_map_->empty()) return std::string(text);
  const std::u32string cps = utf8::decode(text);
  std::string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < cps.size()) {
    // Keycap sequences start with ASCII, so only skip ASCII followed by ASCII.
    const bool candidate = cps[i] >= 0x80 || (i + 1 < cps.size() && cps[i + 1] >= 0x80);
    bool matched = false;
    if (candidate) {
      const std::size_t longest = std::min(max_emoji_len_, cps.size() - i);
      for (std::size_t len = longest; len >= 1; --len) {
        const auto key = utf8::encode(std::u32string_view(cps).substr(i, len));
        const auto it = emoji_map_->find(key);
        if (it != emoji_map_->end()) {
          out.push_back(' ');
          out += it->second;
          out.push_back(' ');
          i += len;
          matched = true;
          changed = true;
          break;
        }
      }
    }
    if (!matched) utf8::append(out, cps[i++]);
  }
  return out;
}

std::string Normalizer::normalize_word(std::string_view word, std::vector<std::string>* applied) const {
  const std::string lower = to_lower_ascii(word);
  if (lower != word) note(applied, "lowercase");

  std::size_t b = 0;
  std::size_t e = lower.size();
  while (b < e && is_punct(lower[b])) ++b;
  while (e > b && is_punct(lower[e - 1])) --e;
  if (b == e) return lower;
  const std::string core = lower.substr(b, e - b);

  std::string replacement = core;
  if (const auto it = dictionary_.find(core); it != dictionary_.end()) {
    replacement = it->second;
    note(applied, "dictionary");
  } else if (has_long_run(core)) {
    const std::string two = squeeze(core, 3, 2);
    const std::string one = squeeze(core, 2, 1);
    if (const auto it2 = dictionary_.find(two); it2 != dictionary_.end()) {
      replacement = it2->second;
    } else if (const auto it1 = dictionary_.find(one); it1 != dictionary_.end()) {
      replacement = it1->second;
    } else if (known_words_.count(one)) {
      replacement = one;
    } else {
      replacement = two;
    }
    note(applied, "elongation");
  }
  return lower.substr(0, b) + replacement + lower.substr(e);
}

std::string Normalizer::normalize(std::string_view text, std::vector<std::string>* applied) const {
  bool emoji_changed = false;
  const std::string with_names = replace_emoji(text, emoji_changed);
  if (emoji_changed) note(applied, "emoji");

  std::string out;
  for (auto raw_token : split_ws(with_names)) {
    bool mention = false;
    bool url = false;
    const std::string token = mask_urls(mask_mentions(raw_token, mention), url);
    if (mention) note(applied, "mention");
    if (url) note(applied, "url");

    // Split around sentinels so they are never case-folded or looked up.
    std::string rebuilt;
    std::size_t pos = 0;
    while (pos < token.size()) {
      const std::size_t u = token.find(kUserToken, pos);
      const std::size_t l = token.find(kUrlToken, pos);
      const std::size_t s = std::min(u, l);
      const std::size_t end = s == std::string::npos ? token.size() : s;
      if (end > pos) rebuilt += normalize_word(std::string_view(token).substr(pos, end - pos), applied);
      if (s == std::string::npos) break;
      const std::size_t len = s == u ? kUserToken.size() : kUrlToken.size();
      rebuilt.append(token, s, len);
      pos = s + len;
    }
    for (auto piece : split_ws(rebuilt)) {
      if (!out.empty()) out.push_back(' ');
      out.append(piece);
    }
  }
  return out;
}

NormalizedTweet Normalizer::operator()(const RawTweet& raw) const {
  NormalizedTweet t;
  t.id = raw.id;
  t.text = normalize(raw.text, &t.applied);
  return t;
}

NormalizedTweet normalize_tweet(const RawTweet& raw, const ResourceBundle& resources) {
  return Normalizer(resources)(raw);
}

}  // namespace irony
