"""Batch front-end: ``symdyn run FILE`` executes a description document.

Exit codes: 0 when every command succeeds, 1 if any command fails, 2 when the
document does not parse.
"""

from __future__ import annotations

import argparse
import itertools
import json
import random
import sys
import time
from pathlib import Path

from . import coding, perturbation, sft as sftmod, space, toeplitz
from .document import Command, Document, ParseError, parse_document
from .patterns import Pattern, occurs_in, window_cells
from .sft import BlockLanguage, Empty, Nonempty, Sft

RENDER_LIMIT = 256


def pattern_json(p: Pattern) -> dict:
    return {"support": [list(c) for c in p.cells], "symbols": list(p.symbols)}


def language_json(l: BlockLanguage) -> dict:
    return {"resolution": l.resolution, "count": len(l), "blocks": [pattern_json(p) for p in l.patterns()]}


def verdict_json(v) -> dict:
    if isinstance(v, Empty):
        return {"verdict": "Empty", "certificate": v.resolution}
    if isinstance(v, Nonempty):
        return {"verdict": "Nonempty", "witness": pattern_json(v.witness.pattern),
                "period": list(v.witness.period)}
    return {"verdict": "Unknown", "budget": v.budget}


def render_block(p: Pattern, path, alphabet_size: int) -> None:
    """Write a 2D full-window block as a binary graymap (P5), one pixel per cell.

    Rows run from the largest second coordinate down; columns increase with the
    first coordinate. Symbol s maps to gray round(255 * s / (k - 1)).
    """
    if p.dimension != 2:
        raise ValueError("only 2-dimensional blocks can be rendered")
    if alphabet_size > 256:
        raise ValueError("alphabet too large for an 8-bit graymap")
    lo, hi = p.bounds()
    width, height = hi[0] - lo[0] + 1, hi[1] - lo[1] + 1
    if width * height != len(p):
        raise ValueError("rendering needs a full rectangular block")
    table = p.as_dict()
    scale = 255 / (alphabet_size - 1) if alphabet_size > 1 else 0
    pixels = bytearray()
    for y in range(hi[1], lo[1] - 1, -1):
        for x in range(lo[0], hi[0] + 1):
            pixels.append(round(table[(x, y)] * scale))
    Path(path).write_bytes(f"P5\n{width} {height}\n255\n".encode("ascii") + bytes(pixels))


class Runner:
    def __init__(self, doc: Document, max_blocks: int = sftmod.DEFAULT_MAX_BLOCKS,
                 render_dir: str | None = None, seed: int = 0):
        self.doc = doc
        self.max_blocks = max_blocks
        self.render_dir = Path(render_dir) if render_dir else None
        self.seed = seed

    def language(self, name: str, n: int) -> BlockLanguage:
        if name in self.doc.sfts:
            return sftmod.admissible_blocks(self.doc.sfts[name], n, self.max_blocks)
        lang = self.doc.languages[name]
        return space.restrict_language(lang, n)

    def execute(self, cmd: Command, index: int) -> dict:
        handler = getattr(self, f"cmd_{cmd.op}")
        args = [int(a) if a.isdigit() else a for a in cmd.args]
        return handler(*args, index=index, **{k: int(v) for k, v in cmd.options.items()})

    def cmd_blocks(self, name, n, index):
        return language_json(self.language(name, n))

    def cmd_empty(self, name, budget, index):
        return verdict_json(sftmod.emptiness_semidecide(self.doc.sfts[name], budget))

    def cmd_periodic(self, name, max_period, index):
        w = sftmod.periodic_witness_search(self.doc.sfts[name], max_period)
        if w is None:
            return {"found": False}
        return {"found": True, "witness": pattern_json(w.pattern), "period": list(w.period)}

    def cmd_dist(self, a, b, upto, index):
        dist = space.hausdorff_proxy(self.language(a, upto), self.language(b, upto), upto)
        return dist.to_json() | {"value": dist.value}

    def cmd_equal(self, a, b, n, index):
        return {"equal": space.language_equal_at(self.language(a, n), self.language(b, n), n)}

    def cmd_restrict(self, name, m, index):
        return language_json(space.restrict_language(self.doc.languages[name], m))

    def cmd_product(self, a, b, n, index):
        x, y = self.doc.sfts[a], self.doc.sfts[b]
        lang = sftmod.admissible_blocks(sftmod.product_sft(x, y), n, self.max_blocks)
        sizes = [x.alphabet.size, y.alphabet.size]
        return {"count": len(lang),
                "projected_counts": [len(perturbation.project_factor(lang, sizes, i)) for i in range(2)]}

    def cmd_projcheck(self, *args, index):
        *names, n = args
        factors = [self.doc.sfts[nm] for nm in names]
        return {"ok": perturbation.product_projection_check(factors, n, self.max_blocks)}

    def _sft_json(self, x: Sft) -> dict:
        return {"forbidden": [pattern_json(f) for f in x.forbidden], "diameter": x.diameter}

    def cmd_transition(self, name, index):
        return self._sft_json(sftmod.transition_sft(self.doc.languages[name]))

    def cmd_higher(self, name, index):
        return self._sft_json(sftmod.higher_block_sft(self.doc.languages[name], self.max_blocks))

    def cmd_apply(self, code, source, n, index):
        c = self.doc.codes[code]
        return language_json(coding.code_apply(c, self.language(source, n + c.radius), n))

    def cmd_refine(self, code, r, index):
        c = coding.partition_refine(self.doc.codes[code], r)
        return {"radius": c.radius, "output_symbols": c.out_alphabet.size}

    def cmd_stability(self, name, code, index):
        return {"radius": coding.stability_radius(self.doc.sfts[name], self.doc.codes[code])}

    def cmd_imagecheck(self, source, code, target, n, index):
        c, x = self.doc.codes[code], self.doc.sfts[target]
        need = max(n + c.radius, coding.stability_radius(x, c))
        res = coding.image_in_sft_check(self.language(source, need), c, x, n)
        out = {"ok": res.ok}
        if res.witness:
            out["witness"] = {"input_block": pattern_json(res.witness.input_block),
                              "position": list(res.witness.position),
                              "violated": pattern_json(res.witness.violated)}
        return out

    def cmd_encode(self, name, radius, index):
        return {"pattern": pattern_json(toeplitz.toeplitz_encode(self.doc.toeplitz[name], radius))}

    def cmd_decode(self, name, radius, k_max, index):
        spec = self.doc.toeplitz[name]
        p = toeplitz.toeplitz_encode(spec, radius)
        return {"omega": list(toeplitz.toeplitz_decode(p, k_max, spec))}

    def cmd_structure(self, name, steps, index):
        s = toeplitz.coloring_structure(self.doc.toeplitz[name], steps)
        return {"bases": list(s.bases), "periods": list(s.periods)}

    def cmd_orbit(self, name, radius, n, index):
        p = toeplitz.toeplitz_encode(self.doc.toeplitz[name], radius)
        return language_json(toeplitz.orbit_language(p, n))

    def cmd_perturb(self, name, code, index, keep=1, patmax=4, imgmax=3):
        req = perturbation.PerturbationRequest(self.doc.sfts[name], self.doc.codes[code],
                                               keep, patmax, imgmax, self.max_blocks)
        res = perturbation.perturb_subsystem(req)
        if isinstance(res, perturbation.NotFound):
            return {"found": False, "pattern_budget": res.pattern_budget,
                    "image_budget": res.image_budget, "candidates_tried": res.candidates_tried}
        return {"found": True, "excluded": pattern_json(res.excluded),
                "agreement_resolution": res.agreement_resolution,
                "divergence_resolution": res.divergence_resolution,
                "witness": pattern_json(res.witness),
                "candidates_tried": res.candidates_tried,
                "approximate": res.approximate}

    def cmd_render(self, name, n, index):
        x = self.doc.sfts[name]
        lang = sftmod.admissible_blocks(x, n, self.max_blocks)
        if self.render_dir is None:
            return {"count": len(lang), "files": []}
        self.render_dir.mkdir(parents=True, exist_ok=True)
        files = []
        for i, p in enumerate(lang.patterns()[:RENDER_LIMIT]):
            path = self.render_dir / f"{index:03d}_{name}_{i:04d}.pgm"
            render_block(p, path, x.alphabet.size)
            files.append(path.name)
        return {"count": len(lang), "files": files}

    def cmd_fuzz(self, count, index):
        """Compare admissible_blocks with a brute-force filter on random 1D SFTs."""
        rng = random.Random(self.seed)
        mismatches = 0
        for _ in range(count):
            k = rng.randint(1, 3)
            words = [[rng.randrange(k) for _ in range(rng.randint(1, 3))] for _ in range(rng.randint(0, 3))]
            x = Sft.from_words(k, words)
            n = rng.randint(0, 3)
            cells = window_cells(n, 1)
            brute = 0
            for w in itertools.product(range(k), repeat=len(cells)):
                p = Pattern(1, cells, w)
                brute += not any(occurs_in(f, p) for f in x.forbidden)
            mismatches += brute != len(sftmod.admissible_blocks(x, n))
        return {"instances": count, "mismatches": mismatches, "seed": self.seed}


def run(doc: Document, timing: bool = True, **kwargs) -> tuple[list[dict], int]:
    runner = Runner(doc, **kwargs)
    report, failed = [], False
    for i, cmd in enumerate(doc.commands):
        entry = {"command": cmd.op, "inputs": cmd.args + [f"{k}={v}" for k, v in cmd.options.items()]}
        t0 = time.perf_counter()
        try:
            entry["result"] = runner.execute(cmd, i)
            entry["status"] = "ok"
        except (ValueError, RuntimeError) as exc:
            entry["status"] = "error"
            entry["result"] = None
            entry["error"] = f"{type(exc).__name__}: {exc}"
            failed = True
        if timing:
            entry["time_ms"] = round(1000 * (time.perf_counter() - t0), 3)
        report.append(entry)
    return report, 1 if failed else 0


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="symdyn", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="action", required=True)
    p_run = sub.add_parser("run", help="execute a description document")
    p_run.add_argument("file")
    p_run.add_argument("--json", metavar="OUT", help="write the report here instead of stdout")
    p_run.add_argument("--render-dir", metavar="DIR", help="directory for graymap renders")
    p_run.add_argument("--budget-blocks", type=int, default=sftmod.DEFAULT_MAX_BLOCKS, metavar="N")
    p_run.add_argument("--no-timing", action="store_true", help="omit timings (byte-stable output)")
    p_run.add_argument("--seed", type=int, default=0, help="seed for randomized commands")
    args = parser.parse_args(argv)

    try:
        text = Path(args.file).read_text(encoding="utf-8")
        doc = parse_document(text)
    except ParseError as exc:
        for ln, msg in exc.errors:
            print(f"{args.file}:{ln}: {msg}", file=sys.stderr)
        return 2
    except (OSError, UnicodeDecodeError) as exc:
        print(f"{args.file}: {exc}", file=sys.stderr)
        return 2

    report, code = run(doc, timing=not args.no_timing, max_blocks=args.budget_blocks,
                       render_dir=args.render_dir, seed=args.seed)
    out = json.dumps(report, indent=2, sort_keys=True) + "\n"
    if args.json:
        Path(args.json).write_text(out, encoding="utf-8")
    else:
        sys.stdout.write(out)
    return code


if __name__ == "__main__":
    sys.exit(main())
