#!/usr/bin/env python3
"""Generate a synthetic, clearly artificial binary irony corpus.

Ironic tweets pair a positive sentiment frame with a negative situation
("love being stuck in traffic"), literal ones keep the two consistent.
A fraction of labels is flipped so the task is not trivially separable.

  scripts/make_synthetic_corpus.py --n 1000 --seed 1 --out data/synthetic/irony_synth.tsv
"""

import argparse
import random

POS_FRAMES = [
    "i love {s}", "so happy about {s}", "great , {s}", "nothing better than {s}",
    "just what i needed : {s}", "really enjoying {s}", "wonderful {s}", "best day ever , {s}",
    "thrilled about {s}", "can't wait for {s}", "yay {s}", "awesome , {s}",
]
NEG_FRAMES = [
    "i hate {s}", "so sad about {s}", "ugh {s}", "tired of {s}", "annoyed by {s}",
    "worst day , {s}", "can't stand {s}", "why is it always {s}", "fed up with {s}",
]
BAD = [
    "being stuck in traffic for {n} hours", "working a double shift on {d}", "my phone dying at {p}",
    "waiting at {p} in the rain", "a flat tire on {d}", "getting sick on my birthday",
    "losing my keys again", "the wifi dropping at {p}", "missing the bus by one minute",
    "homework due on {d}", "my coffee spilling on my laptop", "a {n} hour delay at {p}",
    "the heater breaking in january", "burning dinner again", "cold pizza for breakfast on {d}",
]
GOOD = [
    "sunny weather on {d}", "pizza with friends at {p}", "a long nap on {d}", "my new puppy",
    "a free concert at {p}", "finishing work early on {d}", "fresh coffee at {p}", "a surprise party",
    "winning the game on {d}", "ice cream at {p}", "a day off on {d}", "a good book and tea",
    "seeing my family at {p}", "a beach trip on {d}", "the new season starting {d}",
]
DAYS = ["monday", "tuesday", "wednesday", "thursday", "friday", "saturday", "sunday", "the weekend"]
PLACES = ["the airport", "the station", "the office", "school", "the mall", "the gym", "the library",
          "the stadium", "the cafe", "the dentist", "the park", "the hospital"]
TAILS = ["", "", "", " !", " !!", " .", " :)", " #not", " #blessed", " #mondays", " lol", " haha",
         " @friend", " http://t.co/abc", " \U0001F602", " \U0001F612", " \U0001F60D", " soooo fun",
         " yaaay", " #sarcasm", " #life"]
FILLER = ["really", "totally", "seriously", "honestly", "literally", "just", "again", "today", "tonight"]


def fill(template, rng):
    return template.format(n=rng.randint(2, 9), d=rng.choice(DAYS), p=rng.choice(PLACES))


def tweet(label, rng):
    situation_bad = rng.random() < 0.5
    if label == 1:
        frame = rng.choice(POS_FRAMES if situation_bad else NEG_FRAMES)
    else:
        frame = rng.choice(NEG_FRAMES if situation_bad else POS_FRAMES)
    situation = fill(rng.choice(BAD if situation_bad else GOOD), rng)
    text = frame.format(s=situation)
    if rng.random() < 0.4:
        words = text.split()
        words.insert(rng.randint(1, len(words)), rng.choice(FILLER))
        text = " ".join(words)
    text += rng.choice(TAILS) + rng.choice(TAILS)
    if rng.random() < 0.2:
        text = text.capitalize()
    return text


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=1000)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--noise", type=float, default=0.1, help="fraction of flipped labels")
    ap.add_argument("--ironic-share", type=float, default=0.4)
    ap.add_argument("--out", required=True)
    args = ap.parse_args()

    rng = random.Random(args.seed)
    with open(args.out, "w", encoding="utf-8") as f:
        f.write("Tweet index\tLabel\tTweet text\n")
        for i in range(1, args.n + 1):
            label = 1 if rng.random() < args.ironic_share else 0
            text = tweet(label, rng)
            if rng.random() < args.noise:
                label = 1 - label
            f.write(f"{i}\t{label}\t{text}\n")


if __name__ == "__main__":
    main()
