#include <doctest.h>

#include "irony/normalize.hpp"
#include "irony/utf8.hpp"
#include "irony/rng.hpp"
#include "test_helpers.hpp"

using namespace irony;

namespace {

const Normalizer& norm() {
  static const Normalizer n(*testutil::shipped_resources());
  return n;
}

}  // namespace

TEST_CASE("normalize: examples") {
  CHECK(norm().normalize("@coreybking thanks for the spoiler!!!!") == "<USER> thanks for the spoiler!!!!");
  CHECK(norm().normalize("reeeaaalll") == "real");
  std::vector<std::string> how;
  norm().normalize("reeeaaalll", &how);
  CHECK(how == std::vector<std::string>{"elongation"});  // rule, not a dictionary entry
  CHECK(norm().normalize("see https://t.co/x now") == "see <URL> now");
  CHECK(norm().normalize("") == "");
}

TEST_CASE("normalize: stages") {
  CHECK(norm().normalize("Visit WWW.Example.com today") == "visit <URL> today");
  CHECK(norm().normalize("HTTP://X.CO/abc") == "<URL>");
  CHECK(norm().normalize("mail me at bob@example.com") == "mail me at bob@example.com");
  CHECK(norm().normalize("(@someone)") == "(<USER>)");
  CHECK(norm().normalize("I LOVE it") == "i love it");
  CHECK(norm().normalize("sooooo") == "so");
  CHECK(norm().normalize("@usera@b") == "<USER><USER>");
  CHECK(norm().normalize("a@b") == "a@b");
  // emoji replaced by its name, surrounded by spaces
  CHECK(norm().normalize("lol\xF0\x9F\x98\x82") == norm().normalize("lol") + " face_with_tears_of_joy");
  std::vector<std::string> applied;
  norm().normalize("@x http://y \xF0\x9F\x98\x82 Greeeaaattt", &applied);
  for (const char* tag : {"emoji", "mention", "url", "elongation", "lowercase"}) {
    CHECK(std::find(applied.begin(), applied.end(), tag) != applied.end());
  }
}

TEST_CASE("normalize: idempotence and sentinel invariants on random input") {
  const std::vector<std::string> pieces = {"@user", "http://t.co/a", "www.x.org", "Sooooo", "gooood", "LOL",
                                           "u",     "r",             "!!!",       "don't",  "#Not",  "\xF0\x9F\x98\x82",
                                           "café",  "<URL>",         "<USER>",    "a@b",    "Yesss", "2moro"};
  Rng rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    std::string text;
    const auto n = rng.below(8);
    for (std::uint64_t i = 0; i < n; ++i) {
      if (!text.empty() && rng.below(3) != 0) text += ' ';
      text += pieces[rng.below(pieces.size())];
    }
    const std::string once = norm().normalize(text);
    CHECK(norm().normalize(once) == once);
    CHECK(once.find("http://") == std::string::npos);
    CHECK(once.find("https://") == std::string::npos);
    std::size_t start = 0;
    while (start < once.size()) {
      auto end = once.find(' ', start);
      if (end == std::string::npos) end = once.size();
      const auto tok = once.substr(start, end - start);
      if (tok.size() > 1 && tok[0] == '@') CHECK_MESSAGE(!std::isalnum(static_cast<unsigned char>(tok[1])), tok);
      start = end + 1;
    }
  }
}

TEST_CASE("utf8 helpers") {
  CHECK(utf8::length("caf\xC3\xA9") == 4);
  CHECK(utf8::suffix("caf\xC3\xA9", 2) == "f\xC3\xA9");
  CHECK(utf8::decode("\xFF").front() == 0xFFFD);
  CHECK(utf8::encode(utf8::decode("\xF0\x9F\x98\x82")) == "\xF0\x9F\x98\x82");
}
