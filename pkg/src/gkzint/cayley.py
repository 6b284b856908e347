"""Cayley configurations: k Laurent polynomial supports in n torus variables,
encoded as one (n+k) x N integer matrix with unit-indicator top block."""

from dataclasses import dataclass, field

from .errors import MalformedInputError
from .intlinalg import IntMatrix


@dataclass(frozen=True)
class CayleyConfig:
    matrix: IntMatrix
    k: int
    n: int
    _groups: tuple = field(default=None, compare=False)

    def __post_init__(self):
        A, k, n = self.matrix, self.k, self.n
        if A.rows != n + k:
            raise MalformedInputError("matrix must have n+k rows")
        groups = []
        for j in range(A.cols):
            top = [A[l, j] for l in range(k)]
            ones = [l for l, v in enumerate(top) if v == 1]
            if len(ones) != 1 or any(v not in (0, 1) for v in top):
                raise MalformedInputError(f"column {j + 1} lacks unit-indicator block")
            groups.append(ones[0])
        object.__setattr__(self, "_groups", tuple(groups))

    # ---- constructors --------------------------------------------------
    @classmethod
    def from_matrix(cls, rows, k, n):
        return cls(IntMatrix(rows), k, n)

    @classmethod
    def from_supports(cls, supports):
        """supports: per polynomial group, list of exponent vectors in Z^n."""
        k = len(supports)
        n = len(supports[0][0]) if supports[0] else 0
        cols = []
        for l, sup in enumerate(supports):
            for a in sup:
                if len(a) != n:
                    raise MalformedInputError("inconsistent exponent lengths")
                cols.append([1 if t == l else 0 for t in range(k)] + list(a))
        rows = [[c[i] for c in cols] for i in range(n + k)]
        return cls(IntMatrix(rows), k, n)

    # ---- views ---------------------------------------------------------
    @property
    def d(self):
        return self.n + self.k

    @property
    def N(self):
        return self.matrix.cols

    def column(self, j):
        return self.matrix.col(j)

    def columns(self):
        return [self.matrix.col(j) for j in range(self.N)]

    def group_of(self, j):
        """0-based polynomial group of column j (0-based)."""
        return self._groups[j]

    def group_columns(self, l):
        return [j for j in range(self.N) if self._groups[j] == l]

    def indicator_dot(self, j, vec):
        """a'_j . vec: dot of the k-prefix of column j (indicator part) with vec.

        Because the top block is a unit indicator, this picks vec[group_of(j)].
        """
        return sum(self.matrix[t, j] * vec[t] for t in range(self.k))

    def exponent_part(self, j):
        return tuple(self.matrix[t, j] for t in range(self.k, self.d))


# ---- named example configurations (used by tests, scripts and `verify`) ----

def gauss_2f1():
    """Two binomials in one torus variable; holonomic rank 2."""
    return CayleyConfig.from_matrix(
        [[1, 1, 0, 0],
         [0, 0, 1, 1],
         [0, 1, 0, 1]], k=2, n=1)


def hyp3f2():
    """Three binomials in two torus variables; holonomic rank 3."""
    return CayleyConfig.from_matrix(
        [[1, 1, 0, 0, 0, 0],
         [0, 0, 1, 1, 0, 0],
         [0, 0, 0, 0, 1, 1],
         [1, 0, 0, 1, 0, 0],
         [0, 0, 1, 0, 0, 1]], k=3, n=2)


def gauss_2f1_interleaved():
    """Square configuration with interleaved column numbering (absolute-value
    integral example); same abstract polytope as gauss_2f1."""
    return CayleyConfig.from_matrix(
        [[1, 0, 1, 0],
         [0, 1, 0, 1],
         [0, 0, 1, 1]], k=2, n=1)


def beta_segment():
    """One binomial in one variable: the Euler beta configuration, rank 1."""
    return CayleyConfig.from_matrix(
        [[1, 1],
         [0, 1]], k=1, n=1)
