#!/usr/bin/env python3
"""Generate the bundled mock corpus (data/mock/).

Writes lexicon.tsv, sensitivity.tsv and corpus.tsv. Sentences are composed
from lexicon words; the reference of each sentence is the word-by-word gloss
that the mock translator produces for the clean source. Key content words are
rare in the frequency column (so the importance ranking attacks them first) and
their characters are listed in the sensitivity table.

Usage: python3 tools/gen_mock_corpus.py data/mock
"""
import random
import sys

# zh, en, frequency, alternatives, sensitive perturbation per char (or None)
SUBJECTS = [
    ("我们", "we", 900, "", None),
    ("他们", "they", 850, "", None),
    ("公司", "the company", 400, "企业", None),
    ("学生", "the students", 380, "", None),
    ("老师", "the teacher", 300, "", None),
    ("政府", "the government", 350, "", None),
    ("医生", "the doctor", 200, "", None),
    ("朋友", "our friends", 250, "", None),
    ("记者", "the reporter", 120, "", None),
    ("专家", "the experts", 150, "", None),
]
TIMES = [
    ("明天", "tomorrow", 600, "", None),
    ("今天", "today", 700, "", None),
    ("昨天", "yesterday", 650, "", None),
    ("去年", "last year", 300, "", None),
    ("每天", "every day", 320, "", None),
    ("现在", "now", 500, "", None),
]
ADVERBS = [
    ("非常", "very much", 500, "十分", None),
    ("已经", "already", 550, "", None),
    ("一起", "together", 420, "", None),
    ("继续", "continue to", 300, "", None),
    ("经常", "often", 310, "", None),
]
VERBS = [
    ("发布", "released", 12, "", "withdrew"),
    ("参加", "attended", 14, "", "missed"),
    ("讨论", "discussed", 10, "商讨", "ignored"),
    ("研究", "studied", 9, "", "forgot"),
    ("建设", "built", 11, "", "destroyed"),
    ("访问", "visited", 13, "", "avoided"),
    ("支持", "supported", 8, "", "opposed"),
    ("提高", "improved", 10, "提升", "reduced"),
    ("完成", "completed", 12, "", "abandoned"),
    ("关注", "followed", 9, "", "rejected"),
    ("保护", "protected", 7, "", "damaged"),
    ("改善", "reformed", 8, "", "worsened"),
]
OBJECTS = [
    ("产品", "new product", 6, "", "old rumor"),
    ("会议", "the meeting", 7, "", "a party"),
    ("问题", "the problem", 5, "", "no answer"),
    ("经济", "the economy", 6, "", "a war"),
    ("技术", "the technology", 5, "", "magic tricks"),
    ("城市", "the city", 7, "", "a desert"),
    ("项目", "the project", 6, "", "a scandal"),
    ("计划", "the plan", 5, "", "a secret"),
    ("市场", "the market", 6, "", "a prison"),
    ("环境", "the environment", 4, "", "the weather"),
    ("教育", "education", 5, "", "punishment"),
    ("安全", "security", 6, "", "danger"),
    ("未来", "the future", 4, "", "the past"),
    ("历史", "history", 5, "", "gossip"),
    ("文化", "culture", 5, "", "noise"),
    ("健康", "health", 4, "", "illness"),
]
PUNCT = [
    ("，", ",", 2000, "", None),
    ("。", ".", 2000, "", None),
]


def gb2312_ok(text):
    try:
        text.encode("gb2312")
        return True
    except UnicodeEncodeError:
        return False


def gloss(words):
    out = []
    for zh, en, *_ in words:
        for tok in en.split():
            if out and tok in {".", ","}:
                out[-1] += tok
            else:
                out.append(tok)
    return " ".join(out)


def clause(rng, with_adverb):
    words = [rng.choice(SUBJECTS)]
    if with_adverb:
        words.append(rng.choice(ADVERBS))
    words.append(rng.choice(VERBS))
    words.append(rng.choice(OBJECTS))
    return words


def main():
    out_dir = sys.argv[1]
    rng = random.Random(1729)
    lexicon = SUBJECTS + TIMES + ADVERBS + VERBS + OBJECTS + PUNCT

    sensitivity = {}
    for zh, en, freq, alts, perturb in lexicon:
        assert gb2312_ok(zh) and all(gb2312_ok(a) for a in alts.split(",") if a), zh
        if perturb:
            for ch in zh:
                sensitivity.setdefault(ch, perturb)
    ens = [en for _, en, *_ in lexicon]
    assert len(ens) == len(set(ens)), "English glosses must be unique for back-translation"

    sentences = []
    seen = set()
    while len(sentences) < 50:
        words = [rng.choice(TIMES)] + clause(rng, rng.random() < 0.6)
        if rng.random() < 0.75:
            words += [PUNCT[0]] + clause(rng, rng.random() < 0.5)
        words.append(PUNCT[1])
        zh = "".join(w[0] for w in words)
        if zh in seen:
            continue
        seen.add(zh)
        sentences.append((zh, gloss(words)))

    with open(f"{out_dir}/lexicon.tsv", "w", encoding="utf-8") as f:
        f.write("# Mock bilingual lexicon: zh\\ten\\tfrequency\\talternatives (comma separated synonyms)\n")
        f.write("# Generated by tools/gen_mock_corpus.py\n")
        for zh, en, freq, alts, _ in lexicon:
            f.write(f"{zh}\t{en}\t{freq}\t{alts}\n")
    with open(f"{out_dir}/sensitivity.tsv", "w", encoding="utf-8") as f:
        f.write("# Character sensitivity: a word containing this character, with the character\n")
        f.write("# substituted, translates to the perturbation instead.\n")
        f.write("# Generated by tools/gen_mock_corpus.py\n")
        for ch in sorted(sensitivity):
            f.write(f"{ch}\t{sensitivity[ch]}\n")
    with open(f"{out_dir}/corpus.tsv", "w", encoding="utf-8") as f:
        for zh, en in sentences:
            f.write(f"{zh}\t{en}\n")


if __name__ == "__main__":
    main()
