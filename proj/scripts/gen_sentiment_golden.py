"""Generates tests/data/sentiment_golden.tsv from the shipped lexicon using the
reference VADER port in vader_ref.py. Run from the repository root:

    python3 scripts/gen_sentiment_golden.py
"""

import hashlib
import os
import sys

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))
from vader_ref import SentimentAnalyzer  # noqa: E402

SENTENCES = [
    "good",
    "good!",
    "bad",
    "bad!",
    "Markets rally!",
    "$BP up :)",
    "The market was calm today.",
    "Shares crashed after the scandal.",
    "very good",
    "really very good!!",
    "not good",
    "not very good",
    "GOOD day",
    "GOOD DAY",
    "good?",
    "good??",
    "good???",
    "good????",
    "good!!!!!",
    "The profits were great but the outlook is gloomy.",
    "No growth this quarter.",
    "This stock is simply the bomb.",
    "The least favorable outcome.",
    "At least favorable terms emerged.",
    "never so good",
    "never been so good",
    "never good",
    "without doubt a strong outcome",
    "GAINS soared today!!",
    "really REALLY good",
    "hardly good",
    "The company is kind of troubled.",
    "Profits doubled and the outlook is excellent.",
    "Fear of recession triggered a selloff.",
    "The rally continued for a third day.",
    "Nothing bad happened.",
    "The numbers were not bad.",
    "Trading was flat and uneventful.",
    "AI hype can't save the weak earnings.",
    "Investors worry about rising debt.",
    "Shareholders cheer the record dividend.",
    "A disaster for the banking sector!!!",
    "Is this a good opportunity?",
    "Why is everything crashing??",
    "The best quarter in a decade.",
    "The worst crisis since 2008.",
    "Not the worst outcome.",
    "Strong growth, weak outlook.",
    "She has a broken heart.",
    "he is one bad ass trader",
]


def main():
    root = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
    lex_path = os.path.join(root, "data", "vader_lexicon.txt")
    out_path = os.path.join(root, "tests", "data", "sentiment_golden.tsv")

    with open(lex_path, "rb") as f:
        lex_sha = hashlib.sha256(f.read()).hexdigest()

    analyzer = SentimentAnalyzer(lex_path)
    os.makedirs(os.path.dirname(out_path), exist_ok=True)
    with open(out_path, "w", encoding="utf-8") as out:
        out.write("# lexicon_sha256=%s\n" % lex_sha)
        out.write("text\tneg\tneu\tpos\tcompound\n")
        for s in SENTENCES:
            d = analyzer.polarity_scores(s)
            out.write("%s\t%.17g\t%.17g\t%.17g\t%.17g\n"
                      % (s, d["neg"], d["neu"], d["pos"], d["compound"]))
    print("wrote %s (%d sentences, lexicon sha256 %s)"
          % (out_path, len(SENTENCES), lex_sha[:16]))


if __name__ == "__main__":
    main()
