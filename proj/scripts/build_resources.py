#!/usr/bin/env python3
"""Regenerate the shipped resource files under data/.

Inputs are third-party packages fetched from the public npm / PyPI registries:

  opinion-lexicon (npm)       Hu & Liu opinion lexicon
  emoji-sentiment (npm)       emoji sentiment counts (Kralj Novak et al.)
  textblob-aptagger (PyPI)    averaged-perceptron POS weights (45 PTB tags)
  emoji (PyPI, importable)    emoji code point -> CLDR short name

Usage:
  scripts/build_resources.py --opinion-lexicon DIR --emoji-sentiment DIR \
      --aptagger-pickle FILE --out data
"""

import argparse
import ast
import json
import pathlib
import pickle
import re

import emoji

HEADER_COMMENT = ";; generated by scripts/build_resources.py\n"


def read_js_word_list(path):
    text = pathlib.Path(path).read_text(encoding="latin-1")
    header = re.search(r"/\*(.*?)\*/", text, re.S).group(1).strip("\n")
    body = text[text.index("module.exports") :]
    words = ast.literal_eval(body[body.index("[") : body.rindex("]") + 1])
    return header, words


def write_lexicon(src, dst, title):
    header, words = read_js_word_list(src)
    with open(dst, "w", encoding="utf-8") as f:
        f.write(HEADER_COMMENT)
        f.write(f";; {title}\n")
        for line in header.splitlines():
            # the npm package carries the "Negative" title on both files
            if "Opinion Lexicon:" in line:
                continue
            f.write(line.rstrip() + "\n")
        for w in words:
            f.write(w + "\n")
    return len(words)


def codepoints(seq):
    return " ".join(f"U+{ord(c):04X}" for c in seq)


def emoji_name(seq):
    data = emoji.EMOJI_DATA.get(seq)
    if data is None:
        return None
    return data["en"].strip(":").lower()


def write_emoji_map(dst):
    rows = []
    for seq, data in emoji.EMOJI_DATA.items():
        rows.append((codepoints(seq), data["en"].strip(":").lower()))
    rows.sort()
    with open(dst, "w", encoding="utf-8") as f:
        for cp, name in rows:
            f.write(f"{cp}\t{name}\n")
    return len(rows)


def write_emoji_polarity(src, dst, min_occurrences=10, threshold=0.15):
    data = json.loads(pathlib.Path(src).read_text())
    rows = {}
    for entry in data:
        occ = entry["occurrences"]
        if occ < min_occurrences:
            continue
        seq = "".join(chr(int(h, 16)) for h in entry["sequence"].split("-"))
        name = emoji_name(seq) or emoji_name(seq + "️")
        if name is None:
            continue
        score = (entry["positive"] - entry["negative"]) / occ
        if score >= threshold:
            rows[name] = "pos"
        elif score <= -threshold:
            rows[name] = "neg"
    with open(dst, "w", encoding="utf-8") as f:
        for name in sorted(rows):
            f.write(f"{name}\t{rows[name]}\n")
    return len(rows)


def write_tagger(src, dst):
    with open(src, "rb") as f:
        weights, tagdict, classes = pickle.load(f, encoding="latin1")
    tags = sorted(classes)
    with open(dst, "w", encoding="utf-8") as f:
        f.write("# averaged perceptron POS tagger weights\n")
        f.write("format\t1\n")
        f.write("tagset\t" + " ".join(tags) + "\n")
        for word in sorted(tagdict):
            f.write(f"tagdict\t{word}\t{tagdict[word]}\n")
        for feat in sorted(weights):
            ws = weights[feat]
            if not ws:
                continue
            cells = " ".join(f"{t}={ws[t]!r}" for t in sorted(ws))
            f.write(f"feat\t{feat}\t{cells}\n")
    return len(tags), len(tagdict), len(weights)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--opinion-lexicon", required=True)
    ap.add_argument("--emoji-sentiment", required=True)
    ap.add_argument("--aptagger-pickle", required=True)
    ap.add_argument("--out", default="data")
    args = ap.parse_args()

    out = pathlib.Path(args.out)
    (out / "lexicon").mkdir(parents=True, exist_ok=True)
    lex = pathlib.Path(args.opinion_lexicon) / "lib"
    print("positive", write_lexicon(lex / "positiveWords.js", out / "lexicon/positive-words.txt",
                                    "Opinion Lexicon: Positive"))
    print("negative", write_lexicon(lex / "negativeWords.js", out / "lexicon/negative-words.txt",
                                    "Opinion Lexicon: Negative"))
    print("emoji map", write_emoji_map(out / "emoji_map.tsv"))
    print("emoji polarity", write_emoji_polarity(
        pathlib.Path(args.emoji_sentiment) / "res/emoji-sentiment-data.stable.json",
        out / "emoji_polarity.tsv"))
    print("tagger", write_tagger(args.aptagger_pickle, out / "pos_tagger.weights"))


if __name__ == "__main__":
    main()
