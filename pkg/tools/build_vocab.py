"""Write the bundled vocabularies.

``byte.json`` holds the 256 single-byte tokens plus EOS. ``bpe1k.json`` adds
1000 byte-pair merges learned from the compact text of the bundled corpus and suite,
giving multi-byte tokens such as ``":"`` and ``"type"`` that exercise the
token-level paths of the engine.

    python3 tools/build_vocab.py [--merges 1000]
"""

from __future__ import annotations

import argparse
import json
import sys
from collections import Counter
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "src"))

from jsoncd.engine.vocab import Vocabulary, byte_vocabulary  # noqa: E402

DATA = ROOT / "src" / "jsoncd" / "data"


def training_text() -> list[bytes]:
    """Compact text of the corpus schemas and of every suite schema and instance."""
    values = []
    for path in sorted((DATA / "corpus").glob("*.json")):
        if path.name != "metadata.json":
            values.append(json.loads(path.read_text("utf-8")))
    for path in sorted((DATA / "suite" / "draft2020-12").glob("*.json")):
        for case in json.loads(path.read_text("utf-8")):
            values.append(case["schema"])
            values.extend(t["data"] for t in case["tests"])
    return [json.dumps(v, separators=(",", ":"), ensure_ascii=False).encode("utf-8") for v in values]


def learn_merges(docs: list[bytes], merges: int) -> list[bytes]:
    """Plain byte-pair encoding; ties broken by the smaller pair."""
    seqs = [[bytes([b]) for b in d] for d in docs]
    learned: list[bytes] = []
    for _ in range(merges):
        pairs: Counter = Counter()
        for seq in seqs:
            pairs.update(zip(seq, seq[1:]))
        if not pairs:
            break
        best = min(pairs.items(), key=lambda kv: (-kv[1], kv[0]))[0]
        if pairs[best] < 2:
            break
        joined = best[0] + best[1]
        learned.append(joined)
        for i, seq in enumerate(seqs):
            out, j = [], 0
            while j < len(seq):
                if j + 1 < len(seq) and seq[j] == best[0] and seq[j + 1] == best[1]:
                    out.append(joined)
                    j += 2
                else:
                    out.append(seq[j])
                    j += 1
            seqs[i] = out
    return learned


def main(argv: list[str] | None = None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--merges", type=int, default=1000)
    args = ap.parse_args(argv)
    out = DATA / "vocab"
    out.mkdir(parents=True, exist_ok=True)
    (out / "byte.json").write_text(byte_vocabulary().dumps(), "utf-8")
    merged = learn_merges(training_text(), args.merges)
    tokens = tuple(bytes([b]) for b in range(256)) + tuple(merged) + (b"",)
    vocab = Vocabulary(tokens, len(tokens) - 1)
    (out / "bpe1k.json").write_text(vocab.dumps(), "utf-8")
    print(f"byte: 257 tokens; bpe1k: {vocab.size} tokens ({len(merged)} merges)")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
