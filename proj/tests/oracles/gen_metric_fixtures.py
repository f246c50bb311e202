#!/usr/bin/env python3
"""Freeze reference values for the metric tests.

Runs the reference implementations offline and writes JSON fixtures:
  ssim_pairs.json      scikit-image structural_similarity (win_size=7, data_range=1)
  bleu_pairs.json      nltk sentence_bleu with SmoothingFunction().method1
  tokenizer_golden.json nltk NLTKWordTokenizer (word_tokenize with preserve_line=True)

Usage: python3 gen_metric_fixtures.py <fixture_dir>
"""
import json
import random
import sys

import numpy as np
import nltk
import skimage
from nltk.tokenize import NLTKWordTokenizer
from nltk.translate.bleu_score import SmoothingFunction, sentence_bleu
from skimage.metrics import structural_similarity


def levels_to_image(levels):
    # Mirror the C++ conversion: float32(level) / 255.0f, then widen.
    return (np.asarray(levels, dtype=np.float32) / np.float32(255.0)).astype(np.float64)


def ssim_fixtures(rng):
    pairs = []
    shapes = [(7, 7), (24, 24), (24, 24), (24, 48), (24, 72), (19, 31), (24, 24), (24, 96), (12, 40), (24, 24)]

    def glyphish(h, w):
        img = np.full((h, w), 255, dtype=np.int64)
        for _ in range(rng.randint(2, 5)):
            if rng.random() < 0.5:
                y = rng.randrange(h)
                x0, x1 = sorted(rng.sample(range(w + 1), 2))
                img[y, x0:x1] = rng.randint(0, 80)
            else:
                x = rng.randrange(w)
                y0, y1 = sorted(rng.sample(range(h + 1), 2))
                img[y0:y1, x] = rng.randint(0, 80)
        return img

    for i in range(20):
        h, w = shapes[i % len(shapes)]
        kind = i % 4
        if kind == 0:
            a = np.array([[rng.randrange(256) for _ in range(w)] for _ in range(h)])
            b = np.array([[rng.randrange(256) for _ in range(w)] for _ in range(h)])
        elif kind == 1:
            a = glyphish(h, w)
            b = np.clip(a + np.array([[rng.randint(-20, 20) for _ in range(w)] for _ in range(h)]), 0, 255)
        elif kind == 2:
            a = glyphish(h, w)
            b = glyphish(h, w)
        else:
            yy, xx = np.mgrid[0:h, 0:w]
            a = (255 * (xx + yy) // max(1, (h + w - 2))).astype(np.int64)
            b = 255 - a if i % 8 == 3 else np.clip(a + 30, 0, 255)
        value = structural_similarity(levels_to_image(a), levels_to_image(b), win_size=7, data_range=1.0)
        pairs.append({
            "width": int(w),
            "height": int(h),
            "a": [int(v) for v in np.asarray(a).ravel()],
            "b": [int(v) for v in np.asarray(b).ravel()],
            "ssim": float(value),
        })
    return {
        "oracle": f"scikit-image {skimage.__version__} structural_similarity(win_size=7, data_range=1.0)",
        "pixel_encoding": "row-major 8-bit levels; intensity = float32(level)/255",
        "pairs": pairs,
    }


BASE_SENTENCES = [
    "the cat sat on the mat .",
    "It is a guide to action which ensures that the military always obeys the commands of the party .",
    "the weather is very good today and we will go to the park .",
    "machine translation systems are vulnerable to small changes in the input .",
    "he bought three apples and two oranges at the market yesterday .",
    "the students read the book in the library every afternoon .",
    "our company released a new product last week .",
    "she said that the train would arrive at noon .",
    "the river flows quietly through the old town .",
    "please close the window before you leave the room .",
]


def perturb(tokens, rng):
    tokens = list(tokens)
    op = rng.choice(["drop", "swap", "sub", "truncate", "dup", "shuffle"])
    if op == "drop" and len(tokens) > 2:
        del tokens[rng.randrange(len(tokens))]
    elif op == "swap" and len(tokens) > 2:
        i = rng.randrange(len(tokens) - 1)
        tokens[i], tokens[i + 1] = tokens[i + 1], tokens[i]
    elif op == "sub":
        for _ in range(rng.randint(1, 3)):
            tokens[rng.randrange(len(tokens))] = rng.choice(["horse", "blue", "quickly", "of", "the", "mother"])
    elif op == "truncate":
        tokens = tokens[: rng.randint(1, max(1, len(tokens) - 1))]
    elif op == "dup":
        i = rng.randrange(len(tokens))
        tokens.insert(i, tokens[i])
    else:
        rng.shuffle(tokens)
    return tokens


def bleu_fixtures(rng):
    tok = NLTKWordTokenizer()
    smooth = SmoothingFunction().method1
    cases = []

    def add(hyp, refs, note):
        value = sentence_bleu(refs, hyp, smoothing_function=smooth)
        cases.append({"hypothesis": hyp, "references": refs, "bleu": float(value), "note": note})

    add(tok.tokenize("the cat sat"), [tok.tokenize("the cat sat on the mat")], "short hypothesis")
    add([], [tok.tokenize("the cat sat on the mat")], "empty hypothesis")
    add(tok.tokenize("the cat sat on the mat ."), [tok.tokenize("the cat sat on the mat .")], "identical")
    add(["completely", "different", "words"], [tok.tokenize("the cat sat on the mat")], "no overlap")
    add(tok.tokenize("the the the the the the the"), [tok.tokenize("the cat is on the mat")], "clipping")
    add(tok.tokenize("on the mat the cat sat"),
        [tok.tokenize("the cat sat on the mat"), tok.tokenize("there is a cat on the mat")], "two references")
    while len(cases) < 50:
        base = tok.tokenize(rng.choice(BASE_SENTENCES))
        hyp = perturb(base, rng)
        if rng.random() < 0.3:
            hyp = perturb(hyp, rng)
        refs = [base]
        if rng.random() < 0.2:
            refs.append(perturb(base, rng))
        add(hyp, refs, "perturbed")
    return {"oracle": f"nltk {nltk.__version__} sentence_bleu(smoothing_function=SmoothingFunction().method1)",
            "cases": cases}


TOKENIZER_SENTENCES = [
    "Hello, world.",
    "",
    "The cat sat on the mat.",
    "I can't believe it's not butter!",
    "They'll be here at 3:30, won't they?",
    "\"Quoted speech,\" she said, \"is tricky.\"",
    "Prices rose 3.5% in 2019 (see table 2).",
    "He paid $12.50 for a 2-for-1 deal.",
    "E-mail me at someone@example.com; thanks.",
    "We're going to the U.S. next week.",
    "What's the matter -- are you ok?",
    "Wait... what happened?",
    "The ministry said: the plan is final.",
    "It's 10,000 people, not 1,000.",
    "Don't do that!",
    "I'd've gone if I could.",
    "You gotta see this, gimme a second.",
    "Cannot stop, won't stop.",
    "She said 'hello' and left.",
    "The children's toys were everywhere.",
    "Rock 'n' roll never dies.",
    "Is this the end?",
    "Mr. Smith arrived late.",
    "A list: apples, pears, and plums.",
    "[Brackets] and {braces} and <angles>.",
    "It's a 'test' of `backticks`.",
    "Really?! No way!",
    "The temperature was -5 degrees.",
    "#hashtags and @mentions & more",
    "Numbers like 1.5 and 2.75 stay together.",
    "The ‘curly’ quotes and “double curly” quotes.",
    "He said “wow” loudly.",
    "We lemme know later, wanna come?",
    "More'n enough for everyone.",
    "'Tis the season.",
    "Time flies like an arrow; fruit flies like a banana.",
    "The meeting — which ran long — ended at five.",
    "The ratio was 3:2 overall.",
    "Visit https://example.com/page for details.",
    "O'Neil and D'Angelo met in the park.",
    "It was the best of times, it was the worst of times.",
    "They said it was 'fine'.",
    "The U.N. said no.",
    "Why not?",
    "Stop.",
    "well , this is pre-tokenized text .",
    "Tabs\tand  multiple   spaces.",
    "Ending with a quote.\"",
    "Parenthetical (like this).",
    "The price is 20$ or 15€.",
]


def tokenizer_fixtures():
    tok = NLTKWordTokenizer()
    return {"oracle": f"nltk {nltk.__version__} NLTKWordTokenizer().tokenize",
            "cases": [{"text": s, "tokens": tok.tokenize(s)} for s in TOKENIZER_SENTENCES]}


def main():
    out_dir = sys.argv[1]
    rng = random.Random(20240517)
    with open(f"{out_dir}/ssim_pairs.json", "w") as f:
        json.dump(ssim_fixtures(rng), f, indent=1)
    with open(f"{out_dir}/bleu_pairs.json", "w") as f:
        json.dump(bleu_fixtures(rng), f, indent=1, ensure_ascii=False)
    with open(f"{out_dir}/tokenizer_golden.json", "w") as f:
        json.dump(tokenizer_fixtures(), f, indent=1, ensure_ascii=False)


if __name__ == "__main__":
    main()
