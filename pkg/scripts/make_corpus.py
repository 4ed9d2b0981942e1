"""Regenerate the bundled demo corpus in src/ynote/data/corpus.

Writes three public-domain melodies plus seeded synthetic pentatonic
pieces. Every bar is exactly one 4/4 bar long.
"""

import argparse
import random
from pathlib import Path

SCALE = ["C4", "D4", "E4", "G4", "A4", "C5", "D5", "E5", "G5", "A5"]

# (ticks, code) rhythm cells, each summing to one bar
RHYTHMS = [
    ["04", "04", "04", "04"],
    ["02", "04", "04"],
    ["4.", "08", "04", "04"],
    ["04", "08", "08", "02"],
    ["43", "43", "43", "02"],
    ["08", "08", "08", "08", "04", "04"],
    ["02", "02"],
    ["2.", "04"],
    ["08", "16", "16", "04", "04", "04"],
    ["8.", "16", "04", "02"],
]

TWINKLE = """
C404 C404 G404 G404 A404 A404 G402 F404 F404 E404 E404 D404 D404 C402
G404 G404 F404 F404 E404 E404 D402 G404 G404 F404 F404 E404 E404 D402
C404 C404 G404 G404 A404 A404 G402 F404 F404 E404 E404 D404 D404 C402
"""
ODE_TO_JOY = """
E404 E404 F404 G404 G404 F404 E404 D404 C404 C404 D404 E404 E44. D408 D402
E404 E404 F404 G404 G404 F404 E404 D404 C404 C404 D404 E404 D44. C408 C402
D404 D404 E404 C404 D404 E408 F408 E404 C404 D404 E408 F408 E404 D404 C404 D404 G302
E404 E404 F404 G404 G404 F404 E404 D404 C404 C404 D404 E404 D44. C408 C402
"""
FRERE_JACQUES = """
C404 D404 E404 C404 C404 D404 E404 C404 E404 F404 G402 E404 F404 G402
G408 A408 G408 F408 E404 C404 G408 A408 G408 F408 E404 C404 C404 G304 C402 C404 G304 C402
"""


def synthetic(rng: random.Random, bars: int) -> list[str]:
    idx = rng.randrange(2, 7)
    phrase_len = 2
    phrases = []
    tokens: list[str] = []
    for bar in range(bars):
        if bar % phrase_len == 0 and phrases and rng.random() < 0.4:
            # restate an earlier phrase
            tokens.extend(rng.choice(phrases))
            continue
        cell = rng.choice(RHYTHMS)
        bar_tokens = []
        for j, code in enumerate(cell):
            if bar == bars - 1 and j == len(cell) - 1:
                bar_tokens.append("C4" + code)
                break
            if rng.random() < 0.05 and j > 0:
                bar_tokens.append("00" + code)
                continue
            idx = max(0, min(len(SCALE) - 1, idx + rng.choice([-2, -1, -1, 0, 1, 1, 2])))
            bar_tokens.append(SCALE[idx] + code)
        tokens.extend(bar_tokens)
        if bar % phrase_len == 0:
            phrases.append(bar_tokens)
    return tokens


def write(path: Path, tokens: list[str]) -> None:
    lines = [" ".join(tokens[i:i + 16]) for i in range(0, len(tokens), 16)]
    path.write_text("".join(line + "\n" for line in lines))


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default=Path(__file__).parent.parent / "src/ynote/data/corpus", type=Path)
    ap.add_argument("--count", type=int, default=23)
    ap.add_argument("--seed", type=int, default=2024)
    args = ap.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)
    for name, text in [("pd_twinkle", TWINKLE), ("pd_ode_to_joy", ODE_TO_JOY),
                       ("pd_frere_jacques", FRERE_JACQUES)]:
        write(args.out / f"{name}.ynote", text.split())
    rng = random.Random(args.seed)
    for i in range(args.count):
        write(args.out / f"synthetic_{i + 1:02d}.ynote", synthetic(rng, rng.choice([8, 12, 16])))


if __name__ == "__main__":
    main()
