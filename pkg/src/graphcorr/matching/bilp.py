"""Binary integer linear program for seeded graph matching, in standard form.

Variables are ``x = [vec P; e; e']`` with ``vec`` stacking columns.  The
first ``m^2 + 2ms`` equality rows say that

    A22 P - P B22,   A12 P - B12,   A21 - P B21

equal ``e - e'`` entrywise; the last ``2m`` rows fix the column and row sums
of ``P`` to one.  Minimizing the slack total gives the l1 matching
objective, which at a permutation is twice the seed-ambiguous plus
ambiguous-ambiguous disagreement count.
"""

from __future__ import annotations

from dataclasses import dataclass
from os import PathLike

import numpy as np
import scipy.sparse as sp

from ..graph import SeededPair

__all__ = ["BilpModel", "build_bilp", "write_lp"]


def _vec(a: np.ndarray) -> np.ndarray:
    return np.asarray(a).reshape(-1, order="F")


@dataclass(frozen=True, eq=False)
class BilpModel:
    m: int
    s: int
    M: sp.csr_matrix
    E: sp.csr_matrix
    b: np.ndarray
    c: np.ndarray

    @property
    def n_vars(self) -> int:
        return 3 * self.m**2 + 4 * self.m * self.s

    @property
    def n_rows(self) -> int:
        return self.m**2 + 2 * self.m * self.s + 2 * self.m

    @property
    def n_slack_rows(self) -> int:
        return self.m**2 + 2 * self.m * self.s

    def constraint_matrix(self) -> sp.csr_matrix:
        """``[M | E]``."""
        return sp.hstack([self.M, self.E], format="csr")

    def residual(self, p: np.ndarray) -> np.ndarray:
        """``b - M vec P``; the slack rows must equal ``e - e'``."""
        return self.b - self.M @ _vec(p).astype(np.int64)

    def encode(self, p: np.ndarray) -> np.ndarray:
        """Binary ``x`` for a permutation matrix ``P`` with minimal slack."""
        p = np.asarray(p)
        if p.shape != (self.m, self.m):
            raise ValueError(f"P must be {self.m} x {self.m}")
        r = self.residual(p)[: self.n_slack_rows]
        pos = np.maximum(r, 0)
        neg = np.maximum(-r, 0)
        return np.concatenate([_vec(p).astype(np.int64), pos, neg])

    def is_feasible(self, x: np.ndarray) -> bool:
        x = np.asarray(x)
        if x.shape != (self.n_vars,) or not np.all((x == 0) | (x == 1)):
            return False
        return bool(np.array_equal(self.constraint_matrix() @ x.astype(np.int64), self.b))

    def p_block_feasible(self, p: np.ndarray) -> bool:
        """Whether some binary slack completes the binary block ``P``."""
        p = np.asarray(p)
        if not np.all((p == 0) | (p == 1)):
            return False
        r = self.residual(p)
        k = self.n_slack_rows
        return bool(np.all(np.abs(r[:k]) <= 1) and np.all(r[k:] == 0))

    def objective(self, x: np.ndarray) -> int:
        return int(self.c @ np.asarray(x, dtype=np.int64))


def build_bilp(pair: SeededPair) -> BilpModel:
    s, m = pair.s, pair.m
    if m < 1:
        raise ValueError("the BILP needs at least one ambiguous vertex")
    (_, a12, a21, a22), (_, b12, b21, b22) = pair.blocks(np.int64)
    eye_m = sp.identity(m, dtype=np.int64, format="csr")
    ones_row = sp.csr_matrix(np.ones((1, m), dtype=np.int64))
    M = sp.vstack(
        [
            sp.kron(eye_m, sp.csr_matrix(a22)) - sp.kron(sp.csr_matrix(b22.T), eye_m),
            sp.kron(eye_m, sp.csr_matrix(a12)),
            sp.kron(sp.csr_matrix(b21.T), eye_m),
            sp.kron(eye_m, ones_row),
            sp.kron(ones_row, eye_m),
        ],
        format="csr",
    )
    k = m * m + 2 * m * s
    eye_k = sp.identity(k, dtype=np.int64, format="csr")
    E = sp.vstack(
        [sp.hstack([eye_k, -eye_k]), sp.csr_matrix((2 * m, 2 * k), dtype=np.int64)],
        format="csr",
    )
    b = np.concatenate(
        [np.zeros(m * m, np.int64), _vec(b12), _vec(a21), np.ones(m, np.int64), np.ones(m, np.int64)]
    )
    c = np.concatenate([np.zeros(m * m, np.int64), np.ones(2 * k, np.int64)])
    return BilpModel(m=m, s=s, M=M, E=E, b=b, c=c)


def _var_names(model: BilpModel) -> list[str]:
    m = model.m
    # vec P is column-major: index col * m + row
    names = [f"P_{row + 1}_{col + 1}" for col in range(m) for row in range(m)]
    k = model.n_slack_rows
    names += [f"ep_{r + 1}" for r in range(k)]
    names += [f"en_{r + 1}" for r in range(k)]
    return names


def _wrap(head: str, terms: list[str], tail: str = "", width: int = 250) -> list[str]:
    lines = []
    cur = head
    for t in terms:
        if len(cur) + len(t) + 1 > width:
            lines.append(cur)
            cur = "   "
        cur += " " + t
    if tail:
        cur += " " + tail
    lines.append(cur)
    return lines


def _terms(coefs, names) -> list[str]:
    out = []
    for a, name in zip(coefs, names):
        a = int(a)
        if a == 0:
            continue
        sign = "-" if a < 0 else "+"
        mag = abs(a)
        out.append(f"{sign} {name}" if mag == 1 else f"{sign} {mag} {name}")
    if out and out[0].startswith("+ "):
        out[0] = out[0][2:]
    return out or ["0 " + names[0]]


def write_lp(model: BilpModel, path: str | PathLike) -> None:
    """Write the model in CPLEX LP text format (objective, equalities, binaries)."""
    names = _var_names(model)
    A = model.constraint_matrix().tocsr()
    out = [f"\\ seeded graph matching BILP: m={model.m} s={model.s}", "Minimize"]
    obj_idx = np.flatnonzero(model.c)
    out += _wrap(" obj:", _terms(model.c[obj_idx], [names[i] for i in obj_idx]))
    out.append("Subject To")
    for r in range(A.shape[0]):
        lo, hi = A.indptr[r], A.indptr[r + 1]
        cols = A.indices[lo:hi]
        order = np.argsort(cols, kind="stable")
        terms = _terms(A.data[lo:hi][order], [names[i] for i in cols[order]])
        out += _wrap(f" c{r + 1}:", terms, f"= {int(model.b[r])}")
    out.append("Binary")
    for start in range(0, len(names), 10):
        out.append(" " + " ".join(names[start : start + 10]))
    out.append("End")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(out) + "\n")
