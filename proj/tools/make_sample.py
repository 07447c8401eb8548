#!/usr/bin/env python3
"""Generate the bundled desk-scale sample (data/sample_5k.csv).

The public 000webhost/Kaggle corpus cannot be redistributed, so the bundled
sample is synthetic. Candidates are drawn from generator families that mimic
the shapes found in leaked corpora (dictionary words with digit suffixes,
digit runs, keyboard walks, capitalised words, random strings, passphrases)
and then labelled by a fixed reference meter that looks at length, character
variety and leet-normalised entropy, in the spirit of the commercial meters
used to label the original corpus. Class quotas follow the original
23.3 / 64.5 / 12.2 percent split.

    python3 tools/make_sample.py --out data/sample_5k.csv --seed 42
"""

import argparse
import csv
import math
import random
import string
from collections import Counter
from pathlib import Path

LEET = str.maketrans({"@": "a", "4": "a", "$": "s", "5": "s", "1": "l",
                      "!": "l", "0": "o", "3": "e", "7": "t"})
SPECIALS = "!@#$%^&*()_+-=.?"

WORDS = """
apple august autumn banana beauty bella blessed blue buddy butterfly candy
carlos castle cherry chocolate cookie daisy dancer darkness dolphin dream
eagle element emily family flower forest friend galaxy garden ginger golden
happy heart honey island jesus kitty lemon light lovely lucky magic mango
marley maria mickey monica moon music nature ocean orange panda paris peace
pepper phoenix pinky pretty purple rainbow river rocky rose sakura sarah
secret shadow silver simple smile snow soccer sophie spirit star storm
sugar summer sunny sunset sweet tiger tommy travel turtle venus victory
violet water winter wolf yellow zebra
""".split()


def load_dictionary(path):
    terms = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            terms.append(line)
    return terms


def variety(pw):
    return (any(c.islower() for c in pw) + any(c.isupper() for c in pw)
            + any(c.isdigit() for c in pw)
            + any(not c.isalnum() for c in pw))


def entropy(pw):
    s = pw.lower().translate(LEET)
    if not s:
        return 0.0
    n = len(s)
    return -sum(c / n * math.log2(c / n) for c in Counter(s).values())


def breached(pw, dictionary):
    s = pw.lower().translate(LEET)
    return any(term.translate(LEET) in s for term in dictionary)


def reference_label(pw, dictionary):
    n, v, h = len(pw), variety(pw), entropy(pw)
    if n < 8 or (v == 1 and n < 10) or (n < 10 and breached(pw, dictionary)):
        return 0
    if n >= 12 and v >= 3 and h >= 3.3:
        return 2
    if n >= 16 and v >= 2 and h >= 3.5:
        return 2
    return 1


def digits(rng, lo, hi):
    return "".join(rng.choice(string.digits) for _ in range(rng.randint(lo, hi)))


def random_string(rng, alphabet, lo, hi):
    return "".join(rng.choice(alphabet) for _ in range(rng.randint(lo, hi)))


def walk(rng):
    rows = ["qwertyuiop", "asdfghjkl", "zxcvbnm", "1234567890"]
    row = rng.choice(rows)
    start = rng.randint(0, len(row) - 4)
    return row[start:start + rng.randint(4, len(row) - start)]


def candidate(rng, dictionary):
    word = rng.choice(WORDS if rng.random() < 0.7 else dictionary)
    kind = rng.randrange(17)
    if kind == 0:
        return rng.choice(dictionary)
    if kind == 1:
        return digits(rng, 4, 9)
    if kind == 2:
        return word[: rng.randint(3, 7)] + digits(rng, 0, 3)
    if kind == 3:
        return walk(rng) + digits(rng, 0, 2)
    if kind == 4:
        return word + digits(rng, 2, 6)
    if kind == 5:
        return word + rng.choice(WORDS).capitalize()
    if kind == 6:
        return word.capitalize() + digits(rng, 1, 4)
    if kind == 7:
        return random_string(rng, string.ascii_lowercase + string.digits, 8, 13)
    if kind == 8:
        return word + rng.choice(SPECIALS) + digits(rng, 1, 3)
    if kind == 9:
        return random_string(rng, string.ascii_letters + string.digits, 12, 20)
    if kind == 10:
        return random_string(rng, string.ascii_lowercase + string.digits, 16, 22)
    if kind == 11:
        parts = [rng.choice(WORDS).capitalize() for _ in range(rng.randint(2, 3))]
        return rng.choice(SPECIALS).join(parts) + digits(rng, 1, 3)
    if kind == 12:
        return random_string(rng, string.ascii_letters + string.digits + SPECIALS, 10, 16)
    if kind == 13:
        return word.translate(str.maketrans("aeos", "@30$")) + digits(rng, 0, 3)
    if kind == 14:
        return word.upper()[: rng.randint(4, 9)]
    if kind == 15:
        return word.upper() + digits(rng, 2, 5)
    return random_string(rng, string.ascii_uppercase + string.digits, 8, 12)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default="data/sample_5k.csv")
    ap.add_argument("--dict", default="data/top_breached.txt")
    ap.add_argument("--seed", type=int, default=42)
    ap.add_argument("--total", type=int, default=5000)
    args = ap.parse_args()

    rng = random.Random(args.seed)
    dictionary = load_dictionary(args.dict)
    shares = (0.233, 0.645, 0.122)
    quota = [round(args.total * s) for s in shares]
    quota[1] = args.total - quota[0] - quota[2]

    seen = set()
    rows = []
    filled = [0, 0, 0]
    while sum(filled) < args.total:
        pw = candidate(rng, dictionary)
        if pw in seen:
            continue
        label = reference_label(pw, dictionary)
        if filled[label] >= quota[label]:
            continue
        seen.add(pw)
        filled[label] += 1
        rows.append((pw, label))

    with open(args.out, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["password", "strength"])
        writer.writerows(rows)
    print(f"wrote {len(rows)} rows to {args.out}: {filled}")


if __name__ == "__main__":
    main()
