"""Regenerates variety.json: small solution sets for the clustering tests.

Run from this directory: python3 make_variety.py
"""
import json

import fake_model

JACCARD = ("Write a function named jaccard. Use a set. Handle empty input. Divide the "
           "intersection by the union. Round to three decimal places.")
BOARD = ("Implement a class named Board. The method place(row, col, mark) raises ValueError. "
         "The method winner() returns the mark on a row, column or diagonal. "
         "The method is_full() returns True when full.")
WORDS = ("Write a function named count_words that counts how many times each word occurs. "
         "Split on whitespace, strip punctuation and ignore case.")


def drops(prompt, words):
    """Prompt variants with one keyword removed at a time."""
    out = [prompt]
    for w in words:
        out.append(prompt.replace(w, ""))
    return out


def solutions(fn, prompt, words, limit=10):
    codes = []
    for text in drops(prompt, words):
        for alt in (False, True):
            codes.append(fn(text, alt))
    return codes[:limit]


SETS = {
    "jaccard_drops": solutions(fake_model.jaccard, JACCARD, ["set", "empty", "union", "three"]),
    "board_drops": solutions(fake_model.board, BOARD, ["ValueError", "column", "diagonal", "row"]),
    "word_count_drops": solutions(fake_model.word_count, WORDS,
                                  ["whitespace", "punctuation", "case", "Split"]),
    "mixed": [
        "def add(a, b):\n    return a + b\n",
        "def add(x, y):\n    return x + y\n",
        "def add( a,b ):\n\n    # sum\n    return (a + b)\n",
        "def mul(a, b):\n    return a * b\n",
        "def add(a, b):\n    total = a + b\n    return total\n",
        "class Stack:\n    def __init__(self):\n        self.items = []\n\n"
        "    def push(self, x):\n        self.items.append(x)\n",
        "def add(a, b)\n    return a + b\n",
        "def add(a, b)\n    return a + b\n",
        "import math\n\ndef area(r):\n    return math.pi * r ** 2\n",
    ],
}

if __name__ == "__main__":
    with open("variety.json", "w") as f:
        json.dump({"sets": SETS}, f, indent=2)
        f.write("\n")
