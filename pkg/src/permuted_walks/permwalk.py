"""Walk graphs induced by permutations.

Three constructions, all 2-in/2-out:

* ``build_perm_chain``: from interior k jump to sigma(k+1) or sigma(k-1);
  from 0 to sigma(0) or sigma(1); from n to sigma(n) or sigma(n-1).
* ``build_perm_chain_variant``: from k step to sigma(k)+1 or sigma(k)-1,
  clamped at the ends (sigma(k)=0 gives {0, 1}, sigma(k)=n gives {n, n-1}).
* ``build_signed_chain``: the first rule on the signed interval -n..n,
  stored with offset +n so vertex s represents the label s-n.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations
from typing import Iterator, Sequence

from .digraph import DirectedMultigraph, is_strongly_connected


@dataclass(frozen=True)
class Permutation:
    """Bijection of {offset..offset+len-1}; images[k] is the image of k+offset, unshifted.

    Unsigned permutations have offset 0. Signed ones over -n..n have
    offset -n and their images are signed labels too.
    """

    images: tuple[int, ...]
    offset: int = 0

    def __post_init__(self):
        object.__setattr__(self, "images", tuple(int(v) for v in self.images))
        domain = range(self.offset, self.offset + len(self.images))
        if sorted(self.images) != list(domain):
            raise ValueError(
                f"{list(self.images)} is not a permutation of "
                f"{{{domain.start}..{domain.stop - 1}}}"
            )

    @classmethod
    def signed(cls, images: Sequence[int]) -> "Permutation":
        if len(images) % 2 == 0:
            raise ValueError("a signed permutation of -n..n has an odd number of images")
        return cls(tuple(images), -(len(images) // 2))

    @classmethod
    def identity(cls, n: int, signed: bool = False) -> "Permutation":
        if signed:
            return cls(tuple(range(-n, n + 1)), -n)
        return cls(tuple(range(n + 1)))

    @classmethod
    def transposition(cls, n: int, a: int, b: int, signed: bool = False) -> "Permutation":
        images = list(range(-n, n + 1)) if signed else list(range(n + 1))
        off = -n if signed else 0
        images[a - off], images[b - off] = images[b - off], images[a - off]
        return cls(tuple(images), off)

    @classmethod
    def parse(cls, text: str, signed: bool = False) -> "Permutation":
        """Comma-separated one-line images, e.g. "2,0,1"."""
        try:
            images = [int(tok) for tok in text.split(",")]
        except ValueError as exc:
            raise ValueError(f"cannot parse permutation {text!r}: {exc}") from exc
        return cls.signed(images) if signed else cls(tuple(images))

    def __call__(self, k: int) -> int:
        return self.images[k - self.offset]

    def __len__(self) -> int:
        return len(self.images)

    @property
    def n(self) -> int:
        """Largest label of the domain."""
        return self.offset + len(self.images) - 1

    def is_identity(self) -> bool:
        return all(v == k + self.offset for k, v in enumerate(self.images))

    def __str__(self) -> str:
        return ",".join(map(str, self.images))


def _checked(g: DirectedMultigraph) -> DirectedMultigraph:
    if not g.degree_profile().is_regular(2):
        raise AssertionError(f"walk graph is not 2-in/2-out: {g.to_json()}")
    if not is_strongly_connected(g):
        raise AssertionError(f"walk graph is not strongly connected: {g.to_json()}")
    return g


def build_perm_chain(sigma: Permutation) -> DirectedMultigraph:
    if sigma.offset != 0:
        raise ValueError("expected a permutation of 0..n")
    n = sigma.n
    if n < 1:
        raise ValueError("need n >= 1")
    out = [(sigma(0), sigma(1))]
    out += [(sigma(k + 1), sigma(k - 1)) for k in range(1, n)]
    out.append((sigma(n), sigma(n - 1)))
    return _checked(DirectedMultigraph(n + 1, tuple(out)))


def build_perm_chain_variant(sigma: Permutation) -> DirectedMultigraph:
    if sigma.offset != 0:
        raise ValueError("expected a permutation of 0..n")
    n = sigma.n
    if n < 1:
        raise ValueError("need n >= 1")
    out = []
    for k in range(n + 1):
        s = sigma(k)
        if s == 0:
            out.append((0, 1))
        elif s == n:
            out.append((n, n - 1))
        else:
            out.append((s + 1, s - 1))
    return _checked(DirectedMultigraph(n + 1, tuple(out)))


def build_signed_chain(sigma: Permutation) -> DirectedMultigraph:
    n = -sigma.offset
    if n < 1 or sigma.n != n:
        raise ValueError("expected a permutation of -n..n with n >= 1")

    def v(label: int) -> int:
        return label + n

    out = [(v(sigma(-n)), v(sigma(-n + 1)))]
    out += [(v(sigma(k + 1)), v(sigma(k - 1))) for k in range(-n + 1, n)]
    out.append((v(sigma(n)), v(sigma(n - 1))))
    return _checked(DirectedMultigraph(2 * n + 1, tuple(out)))


def signed_vertex(label: int, n: int) -> int:
    return label + n


def all_permutations(n: int, signed: bool = False) -> Iterator[Permutation]:
    """Lexicographic enumeration of permutations of 0..n (or -n..n)."""
    domain = range(-n, n + 1) if signed else range(n + 1)
    off = -n if signed else 0
    for images in permutations(domain):
        yield Permutation(images, off)


BUILDERS = {
    "main": build_perm_chain,
    "remark3": build_perm_chain_variant,
}
