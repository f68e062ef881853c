import random
from fractions import Fraction

import pytest

from microsheaf.rational import DENSE_LIMIT, QMatrix, as_q


def brute_rank(rows):
    """Independent rank computation by naive elimination on Fractions."""
    rows = [list(map(Fraction, r)) for r in rows]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    used = [False] * len(rows)
    for c in range(ncols):
        piv = None
        for i, r in enumerate(rows):
            if not used[i] and r[c]:
                piv = i
                break
        if piv is None:
            continue
        used[piv] = True
        rank += 1
        for i, r in enumerate(rows):
            if i != piv and r[c]:
                f = r[c] / rows[piv][c]
                rows[i] = [a - f * b for a, b in zip(r, rows[piv])]
    return rank


def random_matrix(rng, n, m, density=0.5, storage=None):
    mat = QMatrix(n, m, storage=storage)
    for i in range(n):
        for j in range(m):
            if rng.random() < density:
                mat[i, j] = Fraction(rng.randint(-4, 4), rng.randint(1, 3))
    return mat


def test_basic_ops():
    a = QMatrix.from_rows([[1, 2], [3, 4]])
    b = QMatrix.from_rows([[0, 1], [1, 0]])
    assert (a * b) == QMatrix.from_rows([[2, 1], [4, 3]])
    assert (a + b) == QMatrix.from_rows([[1, 3], [4, 4]])
    assert (a - a).is_zero()
    assert a.transpose() == QMatrix.from_rows([[1, 3], [2, 4]])
    assert a.apply([as_q(1), as_q(0)]) == [as_q(1), as_q(3)]


def test_rank_kernel_solve():
    m = QMatrix.from_rows([[1, 2, 3], [2, 4, 6], [0, 1, 1]])
    assert m.rank() == 2
    ker = m.kernel_basis()
    assert len(ker) == 1
    for v in ker:
        assert all(x == 0 for x in m.apply(v))
    rhs = m.apply([as_q(1), as_q(1), as_q(1)])
    x = m.solve(rhs)
    assert m.apply(x) == rhs
    assert m.solve([as_q(0), as_q(0), as_q(1)]) is not None
    # inconsistent system
    bad = QMatrix.from_rows([[1, 0], [1, 0]])
    assert bad.solve([as_q(1), as_q(2)]) is None


def test_solve_matrix_identity():
    m = QMatrix.from_rows([[2, 1], [1, 1]])
    inv = m.solve_matrix(QMatrix.identity(2))
    assert m * inv == QMatrix.identity(2)


@pytest.mark.parametrize("seed", range(5))
def test_dense_sparse_agree(seed):
    rng = random.Random(seed)
    n, m = rng.randint(1, 8), rng.randint(1, 8)
    dense = random_matrix(rng, n, m, storage="dense")
    sparse = QMatrix(n, m, storage="sparse")
    for (i, j), v in dense.items():
        sparse[i, j] = v
    assert dense == sparse
    assert dense.rank() == sparse.rank() == brute_rank(
        [dense.row(i) for i in range(n)]
    )
    assert dense.kernel_basis() == sparse.kernel_basis()
    other = random_matrix(rng, m, n)
    assert dense * other == sparse * other


def test_storage_threshold():
    small = QMatrix(4, 4)
    assert small.storage == "dense"
    big = QMatrix(DENSE_LIMIT + 1, 2)
    assert big.storage == "sparse"


def test_block_assembly():
    a = QMatrix.identity(2)
    b = QMatrix.from_rows([[5], [6]])
    m = QMatrix.block([[a, b]], [2], [2, 1])
    assert m == QMatrix.from_rows([[1, 0, 5], [0, 1, 6]])
