#include <doctest.h>

#include <functional>
#include <iterator>
#include <sstream>

#include "irony/binary_io.hpp"
#include "irony/dataset.hpp"
#include "irony/error.hpp"
#include "irony/resources.hpp"
#include "test_helpers.hpp"

using namespace irony;

namespace {

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an irony::Error");
  return ErrorKind::Internal;
}

}  // namespace

TEST_CASE("dataset: hand-written three-line file") {
  std::istringstream in("Tweet index\tLabel\tTweet text\n1\t0\tfirst\n2\t1\tsecond\n3\t0\tthird\n");
  const auto c = parse_dataset(in, Task::A, "mem");
  CHECK(c.size() == 3);
  const auto counts = c.class_counts();
  CHECK(counts.at(0) == 2);
  CHECK(counts.at(1) == 1);
  CHECK(c.tweets[1].text == "second");
  CHECK(c.tweets[2].id == 3);
}

TEST_CASE("dataset: errors") {
  SUBCASE("empty file") {
    std::istringstream in("");
    try {
      parse_dataset(in, Task::A, "mem");
      FAIL("no error");
    } catch (const Error& e) {
      CHECK(std::string(e.what()).find("no data rows") != std::string::npos);
    }
  }
  SUBCASE("wrong column count names the line") {
    std::istringstream in("1\t0\tok\n2\tbroken\n");
    try {
      parse_dataset(in, Task::A, "mem");
      FAIL("no error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::Parse);
      CHECK(std::string(e.what()).find(":2") != std::string::npos);
    }
  }
  SUBCASE("label out of range for the task") {
    std::istringstream a("1\t3\tx\n");
    CHECK(kind_of([&] { parse_dataset(a, Task::A, "mem"); }) == ErrorKind::Validation);
    std::istringstream b("1\t3\tx\n");
    CHECK(parse_dataset(b, Task::B, "mem").tweets[0].label == 3);
  }
  SUBCASE("duplicate id") {
    std::istringstream in("1\t0\tx\n1\t1\ty\n");
    CHECK(kind_of([&] { parse_dataset(in, Task::A, "mem"); }) == ErrorKind::Validation);
  }
  SUBCASE("missing file") {
    CHECK(kind_of([] { load_dataset("/nonexistent/x.tsv", Task::A); }) == ErrorKind::Resource);
  }
}

TEST_CASE("dataset: unlabeled rows with the optional policy") {
  std::istringstream in("7\tsome text\n8\tmore\n");
  const auto c = parse_dataset(in, Task::A, "mem", LabelPolicy::Optional);
  CHECK(c.size() == 2);
  CHECK_FALSE(c.tweets[0].label.has_value());
}

TEST_CASE("embedding table loader") {
  SUBCASE("minimal file") {
    const auto p = testutil::write_file("emb2.txt", "a 1.0 2.0\nb 3.0 4.0\n");
    const auto t = load_embedding_table(p, 2);
    CHECK(t.size() == 2);
    CHECK((*t.find("b"))[1] == 4.0);
  }
  SUBCASE("dimension mismatch names the line") {
    const auto p = testutil::write_file("emb_bad.txt", "a 1.0 2.0\nb 3.0\n");
    try {
      load_embedding_table(p, 2);
      FAIL("no error");
    } catch (const Error& e) {
      CHECK(std::string(e.what()).find(":2") != std::string::npos);
    }
  }
  SUBCASE("duplicate token keeps the first vector") {
    const auto p = testutil::write_file("emb_dup.txt", "a 1 1\nb 2 2\na 9 9\n");
    const auto t = load_embedding_table(p, 2);
    CHECK(t.size() == 2);
    CHECK((*t.find("a"))[0] == 1.0);
  }
  SUBCASE("unparsable real") {
    const auto p = testutil::write_file("emb_nan.txt", "a 1.0 x\n");
    CHECK(kind_of([&] { load_embedding_table(p, 2); }) == ErrorKind::Parse);
  }
}

TEST_CASE("lexicon, normalization dictionary and emoji map") {
  const auto lex = testutil::write_file("lex.txt", ";; comment\nlove\n Great \n\n");
  const auto words = load_lexicon(lex);
  CHECK(words == WordSet{"great", "love"});

  const auto dict = testutil::write_file("dict.tsv", "reeeaaalll\treal\n");
  CHECK(load_normalization_dict(dict).at("reeeaaalll") == "real");

  const auto em = testutil::write_file("emoji.tsv", "U+1F602\tface_with_tears_of_joy\n");
  const auto map = load_emoji_map(em);
  CHECK(map.at("\xF0\x9F\x98\x82") == "face_with_tears_of_joy");

  CHECK(kind_of([] { load_lexicon("/nonexistent/lex.txt", "positive lexicon"); }) == ErrorKind::Resource);
}

TEST_CASE("shipped resources load") {
  const auto r = testutil::shipped_resources();
  CHECK(r->positive.count("love"));
  CHECK(r->negative.count("awful"));
  CHECK(r->negation.size() == 10);
  CHECK(r->negation.count("n't"));
  CHECK(r->emoji_map.size() > 1000);
  CHECK(r->embeddings.dim() == 300);
}

TEST_CASE("model container integrity") {
  BinaryWriter w;
  w.str("payload");
  w.f64(0.1);
  const auto path = testutil::temp_dir() / "c.bin";
  write_container(path, 3, w.bytes());
  const auto back = read_container(path, 3);
  BinaryReader r(back);
  CHECK(r.str() == "payload");
  CHECK(r.f64() == 0.1);

  CHECK(kind_of([&] { read_container(path, 4); }) == ErrorKind::Integrity);
  const auto empty = testutil::write_file("empty.bin", "");
  CHECK(kind_of([&] { read_container(empty, 3); }) == ErrorKind::Integrity);

  std::string bytes;
  {
    std::ifstream in(path, std::ios::binary);
    bytes.assign(std::istreambuf_iterator<char>(in), {});
  }
  const auto truncated = testutil::write_file("trunc.bin", bytes.substr(0, bytes.size() - 5));
  CHECK(kind_of([&] { read_container(truncated, 3); }) == ErrorKind::Integrity);
  bytes[bytes.size() / 2] ^= 0x40;
  const auto flipped = testutil::write_file("flip.bin", bytes);
  CHECK(kind_of([&] { read_container(flipped, 3); }) == ErrorKind::Integrity);

  CHECK(kind_of([&] { write_container("/nonexistent/dir/x.bin", 1, "x"); }) == ErrorKind::Io);
}

TEST_CASE("binary reader refuses to run off the end") {
  BinaryWriter w;
  w.u32(7);
  BinaryReader r(w.bytes());
  CHECK(r.u32() == 7);
  CHECK(kind_of([&] { r.u64(); }) == ErrorKind::Integrity);
}
