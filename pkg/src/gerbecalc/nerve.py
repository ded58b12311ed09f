"""Abstract nerve of a finite cover: indices plus the non-empty overlaps."""
from __future__ import annotations

import itertools
from dataclasses import dataclass


def _tuples(items, k):
    out = []
    for t in items:
        t = tuple(int(v) for v in t)
        if len(t) != k or len(set(t)) != k:
            raise ValueError(f"bad {k}-fold overlap {t}")
        out.append(tuple(sorted(t)))
    return tuple(sorted(set(out)))


@dataclass(frozen=True)
class CoverNerve:
    indices: tuple
    pairs: tuple = ()
    triples: tuple = ()
    quadruples: tuple = ()

    def __post_init__(self):
        idx = tuple(sorted({int(i) for i in self.indices}))
        object.__setattr__(self, "indices", idx)
        object.__setattr__(self, "pairs", _tuples(self.pairs, 2))
        object.__setattr__(self, "triples", _tuples(self.triples, 3))
        object.__setattr__(self, "quadruples", _tuples(self.quadruples, 4))
        ids = set(idx)
        levels = [tuple((i,) for i in idx), self.pairs, self.triples, self.quadruples]
        for k in range(1, 4):
            lower = set(levels[k - 1])
            for t in levels[k]:
                if not set(t) <= ids:
                    raise ValueError(f"overlap {t} uses unknown indices")
                for sub in itertools.combinations(t, k):
                    if sub not in lower:
                        raise ValueError(f"overlap {t} present but {sub} missing")

    @classmethod
    def complete(cls, n: int, depth: int = 4) -> "CoverNerve":
        """All overlaps of n open sets up to the given simplex size."""
        idx = tuple(range(n))
        levels = [tuple(itertools.combinations(idx, k)) if k <= depth else () for k in (2, 3, 4)]
        return cls(idx, *levels)

    @property
    def is_empty(self) -> bool:
        return not self.indices

    def to_dict(self) -> dict:
        return {"indices": list(self.indices), "pairs": [list(p) for p in self.pairs],
                "triples": [list(t) for t in self.triples],
                "quadruples": [list(q) for q in self.quadruples]}

    @classmethod
    def from_dict(cls, d: dict) -> "CoverNerve":
        return cls(tuple(d.get("indices", ())), tuple(map(tuple, d.get("pairs", ()))),
                   tuple(map(tuple, d.get("triples", ()))), tuple(map(tuple, d.get("quadruples", ()))))
