#include "irony/tokenize.hpp"

#include <array>
#include <cctype>

#include "irony/normalize.hpp"
#include "irony/utf8.hpp"

namespace irony {

namespace {

bool is_punct(char c) {
  const auto u = static_cast<unsigned char>(c);
  return u < 0x80 && std::ispunct(u) && c != '_';
}

bool is_word_char(char c) {
  const auto u = static_cast<unsigned char>(c);
  return u >= 0x80 || std::isalnum(u) || c == '_';
}

bool starts_protected(std::string_view s) {
  if (s.starts_with(kUserToken) || s.starts_with(kUrlToken)) return true;
  return s.size() > 1 && s[0] == '#' && is_word_char(s[1]);
}

bool ends_protected(std::string_view s) {
  return s.ends_with(kUserToken) || s.ends_with(kUrlToken);
}

void push_core(std::string_view core, std::vector<std::string>& out) {
  if (core.empty()) return;
  if (core.size() > 3 && core.substr(core.size() - 3) == "n't") {
    out.emplace_back(core.substr(0, core.size() - 3));
    out.emplace_back("n't");
    return;
  }
  static constexpr std::array<std::string_view, 6> kClitics = {"'s", "'m", "'d", "'ll", "'re", "'ve"};
  for (auto clitic : kClitics) {
    if (core.size() > clitic.size() && core.ends_with(clitic)) {
      out.emplace_back(core.substr(0, core.size() - clitic.size()));
      out.emplace_back(clitic);
      return;
    }
  }
  out.emplace_back(core);
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    const std::size_t start = i;
    while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    std::string_view word = text.substr(start, i - start);
    if (word.empty()) continue;

    while (!word.empty() && is_punct(word.front()) && !starts_protected(word)) {
      out.emplace_back(1, word.front());
      word.remove_prefix(1);
    }
    std::vector<std::string> trailing;
    while (!word.empty() && is_punct(word.back()) && !ends_protected(word)) {
      trailing.emplace_back(1, word.back());
      word.remove_suffix(1);
    }
    if (word == kUserToken || word == kUrlToken || (word.size() > 1 && word[0] == '#')) {
      out.emplace_back(word);
    } else {
      push_core(word, out);
    }
    out.insert(out.end(), trailing.rbegin(), trailing.rend());
  }
  return out;
}

TokenizedTweet make_tokenized(std::int64_t id, std::string normalized) {
  TokenizedTweet t;
  t.id = id;
  t.tokens = tokenize(normalized);
  t.word_count = t.tokens.size();
  t.char_count = utf8::length(normalized);
  t.text = std::move(normalized);
  return t;
}

}  // namespace irony
